use rayon::prelude::*;
use serde::Serialize;

use super::loops::{based_loops, LoopFamily};
use crate::error::{Error, Result};
use crate::homotopy::{decompose_filling, verify_decomposition, ContractionOutcome, Contractor, SearchBudget};
use crate::rational::{serde_rational, Rational};
use crate::rips::build_rips2;
use crate::spaces::FiniteMetricSpace;

const CHUNK: usize = 4096;

#[derive(Debug, Clone, Serialize)]
pub struct ScProbeConfig {
    #[serde(with = "serde_rational")]
    pub r: Rational,
    #[serde(with = "serde_rational")]
    pub r_prime: Rational,
    pub loop_cap: usize,
    pub family: LoopFamily,
    pub budget: SearchBudget,
    /// Read a filling off every contraction and check it in `R_{r'}`.
    pub check_fillings: bool,
    /// Keep the move sequences of contracted loops in the report.
    pub keep_contracted: bool,
}

impl ScProbeConfig {
    pub fn new(r: Rational, r_prime: Rational, loop_cap: usize) -> Self {
        ScProbeConfig {
            r,
            r_prime,
            loop_cap,
            family: LoopFamily::Irreducible,
            budget: SearchBudget::default(),
            check_fillings: false,
            keep_contracted: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LoopReport {
    pub loop_labels: Vec<String>,
    pub loop_points: Vec<usize>,
    #[serde(flatten)]
    pub outcome: ContractionOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScVerdict {
    /// Every enumerated loop contracted.
    Pass,
    /// Some loop carries a certificate that it does not contract.
    Fail,
    /// Nothing failed, but some search ran out of budget.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScProbeReport {
    pub config: ScProbeConfig,
    pub space_size: usize,
    pub basepoint: String,
    pub loops_checked: usize,
    pub contracted: usize,
    pub impossible: usize,
    pub inconclusive: usize,
    /// Contractions using backtrack moves only.
    pub backtrack_only: usize,
    /// Contractions whose filling was read off and verified, with one
    /// factor per triangle move.
    pub fillings_verified: usize,
    /// Non-contracted loops, plus contracted ones when requested.
    pub loops: Vec<LoopReport>,
    pub verdict: ScVerdict,
}

impl ScProbeReport {
    pub fn passed(&self) -> bool {
        self.verdict == ScVerdict::Pass
    }
}

/// Contracts every based r-loop of at most `loop_cap` steps at scale `r'`.
///
/// With [`LoopFamily::Irreducible`] only loops that admit no shortening
/// move at scale `r` are tried; the others reduce to them by moves at scale
/// `r ≤ r'`, so the verdict is the same.
pub fn coarse_sc_probe(space: &FiniteMetricSpace, config: &ScProbeConfig) -> Result<ScProbeReport> {
    if config.r_prime < config.r {
        return Err(Error::invalid("r' must be at least r"));
    }
    if config.r <= Rational::from_integer(0) {
        return Err(Error::invalid("r must be positive"));
    }
    let contractor = Contractor::new(space, config.r_prime, config.budget)?;
    let complex = if config.check_fillings { Some(build_rips2(space, config.r_prime)?) } else { None };
    let mut report = ScProbeReport {
        config: config.clone(),
        space_size: space.len(),
        basepoint: space.label(space.basepoint()).to_string(),
        loops_checked: 0,
        contracted: 0,
        impossible: 0,
        inconclusive: 0,
        backtrack_only: 0,
        fillings_verified: 0,
        loops: Vec::new(),
        verdict: ScVerdict::Pass,
    };
    let mut iter = based_loops(space, &config.r, config.loop_cap, config.family);
    loop {
        let chunk: Vec<Vec<usize>> = iter.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        let results: Vec<(ContractionOutcome, bool)> = chunk
            .par_iter()
            .map(|lp| {
                let outcome = contractor.contract(lp)?;
                let filled = match (&complex, outcome.moves()) {
                    (Some(c), Some(moves)) => {
                        let d = decompose_filling(c, lp, moves)?;
                        verify_decomposition(c, lp, &d) && d.len() == moves.triangle_moves()
                    }
                    _ => false,
                };
                Ok((outcome, filled))
            })
            .collect::<Result<_>>()?;
        for (lp, (outcome, filled)) in chunk.into_iter().zip(results) {
            report.loops_checked += 1;
            report.fillings_verified += filled as usize;
            match &outcome {
                ContractionOutcome::Contracted(m) => {
                    report.contracted += 1;
                    report.backtrack_only += m.backtrack_only() as usize;
                }
                ContractionOutcome::Impossible(_) => report.impossible += 1,
                ContractionOutcome::Inconclusive(_) => report.inconclusive += 1,
            }
            if !outcome.is_contracted() || config.keep_contracted {
                report.loops.push(LoopReport {
                    loop_labels: lp.iter().map(|&p| space.label(p).to_string()).collect(),
                    loop_points: lp,
                    outcome,
                });
            }
        }
    }
    report.verdict = if report.impossible > 0 {
        ScVerdict::Fail
    } else if report.inconclusive > 0 {
        ScVerdict::Inconclusive
    } else {
        ScVerdict::Pass
    };
    Ok(report)
}
