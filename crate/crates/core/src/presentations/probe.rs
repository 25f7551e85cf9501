use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::homotopy::{ContractionOutcome, Contractor, MoveSequence, NegativeCertificate, SearchBudget};
use crate::lattice::matrix_kernel;
use crate::rational::Rational;
use crate::spaces::{build_window, GeneratingSet, GroupFamily, GroupWindow};

/// A function `c: S → Z` with `c(s⁻¹) = −c(s)` and `c(g) + c(h) = c(gh)`
/// whenever `g, h, gh ∈ S`. It is constant under backtrack and triangle
/// moves in the Cayley complex, so a loop with nonzero total is not
/// contractible there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleCertificate {
    pub generators: Vec<String>,
    pub values: Vec<i64>,
    /// Generator index of every step of the loop.
    pub steps: Vec<usize>,
    pub total: i64,
}

/// Integer cocycles of the triangle presentation of `(G, S)`.
pub fn cocycle_basis(family: &GroupFamily, gens: &GeneratingSet) -> Vec<Vec<i128>> {
    let elems = gens.elements();
    let k = elems.len();
    let mut rows = Vec::new();
    for (i, g) in elems.iter().enumerate() {
        let mut row = vec![0i128; k];
        if let Some(j) = gens.position(&family.inverse(g)) {
            row[i] += 1;
            row[j] += 1;
            rows.push(row);
        }
        for (j, h) in elems.iter().enumerate() {
            if let Some(l) = gens.position(&family.multiply(g, h)) {
                let mut row = vec![0i128; k];
                row[i] += 1;
                row[j] += 1;
                row[l] -= 1;
                rows.push(row);
            }
        }
    }
    matrix_kernel(&rows, k)
}

impl CocycleCertificate {
    /// Finds a cocycle with nonzero total on the loop, if any.
    pub fn find(family: &GroupFamily, gens: &GeneratingSet, basis: &[Vec<i128>], steps: &[usize]) -> Option<Self> {
        let mut counts = vec![0i128; gens.len()];
        for &s in steps {
            counts[s] += 1;
        }
        let c = basis.iter().find(|c| c.iter().zip(&counts).map(|(a, b)| a * b).sum::<i128>() != 0)?;
        let values: Vec<i64> = c.iter().map(|&x| x as i64).collect();
        let total = steps.iter().map(|&s| values[s]).sum();
        Some(CocycleCertificate {
            generators: gens.elements().iter().map(|g| family.format_element(g)).collect(),
            values,
            steps: steps.to_vec(),
            total,
        })
    }

    pub fn verify(&self, family: &GroupFamily, gens: &GeneratingSet) -> bool {
        let elems = gens.elements();
        if self.values.len() != elems.len() || self.steps.iter().any(|&s| s >= elems.len()) {
            return false;
        }
        let at = |g: &crate::spaces::Elem| gens.position(g).map(|i| self.values[i]);
        for (i, g) in elems.iter().enumerate() {
            if let Some(v) = at(&family.inverse(g)) {
                if v != -self.values[i] {
                    return false;
                }
            }
            for (j, h) in elems.iter().enumerate() {
                if let Some(v) = at(&family.multiply(g, h)) {
                    if self.values[i] + self.values[j] != v {
                        return false;
                    }
                }
            }
        }
        let closed = family.is_identity(&gens.evaluate(family, &self.steps));
        let total: i64 = self.steps.iter().map(|&s| self.values[s]).sum();
        closed && total == self.total && total != 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailCertificate {
    Cocycle(CocycleCertificate),
    /// Closure of the reachable loops inside the search window.
    Exhausted { explored: usize, length_cap: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProbeVerdict {
    Pass,
    Fail { loop_labels: Vec<String>, loop_points: Vec<usize>, certificate: FailCertificate },
    Inconclusive { loop_labels: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefiningProbeReport {
    pub generators: Vec<String>,
    pub loop_cap: usize,
    pub window_radius: usize,
    pub window_size: usize,
    /// Chordless loops examined (up to reversal).
    pub loops_checked: usize,
    pub contracted: usize,
    pub uncertified: usize,
    pub verdict: ProbeVerdict,
}

impl DefiningProbeReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, ProbeVerdict::Pass)
    }
}

/// Simple cycles through the basepoint of the graph `adj` with at most
/// `max_len` edges and no chords, one per reversal pair, ordered by length
/// and then by point sequence.
pub fn chordless_loops(adj: &[Vec<usize>], base: usize, max_len: usize) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut is_adj = vec![false; n * n];
    for (a, row) in adj.iter().enumerate() {
        for &b in row {
            is_adj[a * n + b] = true;
        }
    }
    let mut out = Vec::new();
    let mut path = vec![base];
    fn rec(
        adj: &[Vec<usize>],
        is_adj: &[bool],
        n: usize,
        max_len: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let last = *path.last().expect("nonempty");
        let base = path[0];
        for &y in &adj[last] {
            if path.contains(&y) {
                continue;
            }
            let k = path.len();
            // y may only touch its predecessor, and the base when it closes the cycle.
            if k >= 2 && path[1..k - 1].iter().any(|&p| is_adj[p * n + y]) {
                continue;
            }
            let closes = k >= 2 && is_adj[base * n + y];
            if closes {
                if path[1] < y {
                    let mut cycle = path.clone();
                    cycle.push(y);
                    cycle.push(base);
                    out.push(cycle);
                }
                continue;
            }
            if k < max_len - 1 {
                path.push(y);
                rec(adj, is_adj, n, max_len, path, out);
                path.pop();
            }
        }
    }
    if max_len >= 3 {
        rec(adj, &is_adj, n, max_len, &mut path, &mut out);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Tests whether relations of length at most `loop_cap` follow from the
/// triangle relators of `S`.
///
/// Any loop with a chord splits into two shorter loops, and translates
/// and rotations of a loop contract together, so it suffices to contract
/// the chordless cycles through the identity in the Cayley complex `R_1`.
/// A loop that does not contract fails with a cocycle certificate when one
/// exists; the first such loop in canonical order is reported.
pub fn defining_subset_probe(
    family: &GroupFamily,
    gens: &GeneratingSet,
    loop_cap: usize,
    caps: &ResourceCaps,
) -> Result<DefiningProbeReport> {
    if !gens.is_symmetrized() {
        return Err(Error::invalid("the probe needs a symmetrized generating set"));
    }
    if loop_cap > caps.max_loop_length {
        return Err(Error::ResourceCap { cap: "max_loop_length", limit: caps.max_loop_length });
    }
    let radius = loop_cap.div_ceil(2) + 2;
    let window = build_window(family, gens, radius, caps)?;
    let budget = SearchBudget::from_caps(caps);
    let contractor = Contractor::new(window.space(), Rational::from_integer(1), budget)?;
    let adj: Vec<Vec<usize>> = (0..window.len()).map(|x| window.space().neighbors(x, &Rational::from_integer(1))).collect();
    let loops = chordless_loops(&adj, window.basepoint(), loop_cap);
    let basis = cocycle_basis(family, gens);
    let labels = |l: &[usize]| l.iter().map(|&p| window.space().label(p).to_string()).collect::<Vec<_>>();

    let mut contracted = 0;
    let mut uncertified = Vec::new();
    let mut verdict = None;
    for chunk in loops.chunks(64) {
        let results: Vec<Result<LoopResult>> =
            chunk.par_iter().map(|l| check_loop(&window, gens, &basis, &contractor, l)).collect();
        for (l, res) in chunk.iter().zip(results) {
            match res? {
                LoopResult::Contracted => contracted += 1,
                LoopResult::Uncertified => uncertified.push(l.clone()),
                LoopResult::Failed(certificate) => {
                    verdict = Some(ProbeVerdict::Fail {
                        loop_labels: labels(l),
                        loop_points: l.clone(),
                        certificate,
                    });
                    break;
                }
            }
        }
        if verdict.is_some() {
            break;
        }
    }
    let checked = contracted + uncertified.len() + usize::from(verdict.is_some());
    let verdict = verdict.unwrap_or_else(|| match uncertified.first() {
        Some(l) => ProbeVerdict::Inconclusive { loop_labels: labels(l) },
        None => ProbeVerdict::Pass,
    });
    Ok(DefiningProbeReport {
        generators: gens.elements().iter().map(|g| family.format_element(g)).collect(),
        loop_cap,
        window_radius: radius,
        window_size: window.len(),
        loops_checked: checked,
        contracted,
        uncertified: uncertified.len(),
        verdict,
    })
}

enum LoopResult {
    Contracted,
    Uncertified,
    Failed(FailCertificate),
}

fn check_loop(
    window: &GroupWindow,
    gens: &GeneratingSet,
    basis: &[Vec<i128>],
    contractor: &Contractor<'_>,
    l: &[usize],
) -> Result<LoopResult> {
    let family = window.family();
    let steps: Vec<usize> = l
        .windows(2)
        .map(|w| {
            let s = family.multiply(&family.inverse(window.element(w[0])), window.element(w[1]));
            gens.position(&s).expect("loop steps are generators")
        })
        .collect();
    if let Some(c) = CocycleCertificate::find(family, gens, basis, &steps) {
        return Ok(LoopResult::Failed(FailCertificate::Cocycle(c)));
    }
    Ok(match contractor.contract(l)? {
        ContractionOutcome::Contracted(_) => LoopResult::Contracted,
        ContractionOutcome::Impossible(NegativeCertificate::Exhausted { explored, length_cap }) => {
            LoopResult::Failed(FailCertificate::Exhausted { explored, length_cap })
        }
        ContractionOutcome::Impossible(NegativeCertificate::Winding(_)) | ContractionOutcome::Inconclusive(_) => {
            LoopResult::Uncertified
        }
    })
}

/// Contraction of one loop of a window in the Cayley complex, for callers
/// that want the moves.
pub fn contract_in_cayley_complex(window: &GroupWindow, l: &[usize], budget: SearchBudget) -> Result<Option<MoveSequence>> {
    let c = Contractor::new(window.space(), Rational::from_integer(1), budget)?;
    Ok(c.contract(l)?.moves().cloned())
}
