use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use super::path::{apply_move_in_place, HomotopyMove, MoveSequence, Regime};
use super::winding::{chart_winding, WindingCertificate};
use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::spaces::{CircleChart, FiniteMetricSpace, ScaledBound};

/// Limits for the fallback search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Distinct loops the search may discover.
    pub max_nodes: usize,
    /// Intermediate loops may have at most `length_factor × n` steps.
    pub length_factor: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: ResourceCaps::default().max_search_nodes, length_factor: 3 }
    }
}

impl SearchBudget {
    pub fn from_caps(caps: &ResourceCaps) -> Self {
        SearchBudget { max_nodes: caps.max_search_nodes, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NegativeCertificate {
    Winding(WindingCertificate),
    /// Every loop reachable under the length cap was visited without
    /// meeting the trivial loop.
    Exhausted { explored: usize, length_cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub explored: usize,
    pub max_nodes: usize,
    pub length_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "certificate", rename_all = "snake_case")]
pub enum ContractionOutcome {
    Contracted(MoveSequence),
    Impossible(NegativeCertificate),
    Inconclusive(BudgetReport),
}

impl ContractionOutcome {
    pub fn is_contracted(&self) -> bool {
        matches!(self, ContractionOutcome::Contracted(_))
    }

    pub fn is_impossible(&self) -> bool {
        matches!(self, ContractionOutcome::Impossible(_))
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, ContractionOutcome::Inconclusive(_))
    }

    pub fn moves(&self) -> Option<&MoveSequence> {
        match self {
            ContractionOutcome::Contracted(m) => Some(m),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ContractionOutcome::Contracted(_) => "contracted",
            ContractionOutcome::Impossible(_) => "impossible",
            ContractionOutcome::Inconclusive(_) => "inconclusive",
        }
    }
}

/// Contraction search at a fixed scale `r'`, reusable across loops.
///
/// Moves never create stutters (repeated consecutive points), so every
/// returned sequence is also valid in the combinatorial regime of
/// `R_{r'}`.
pub struct Contractor<'a> {
    space: &'a FiniteMetricSpace,
    scale: Rational,
    bound: ScaledBound,
    neighbors: Vec<Vec<usize>>,
    charts: Vec<&'a CircleChart>,
    budget: SearchBudget,
}

enum SearchEnd {
    Found(Vec<HomotopyMove>),
    Exhausted(usize),
    Budget(usize),
}

impl<'a> Contractor<'a> {
    pub fn new(space: &'a FiniteMetricSpace, scale: Rational, budget: SearchBudget) -> Result<Self> {
        if scale < Rational::from_integer(0) {
            return Err(Error::invalid("scale must be nonnegative"));
        }
        let bound = space.bound(&scale);
        let neighbors = (0..space.len())
            .map(|x| (0..space.len()).filter(|&y| y != x && space.within(x, y, bound)).collect())
            .collect();
        let three_r = Rational::from_integer(3) * scale;
        let charts = space.charts().iter().filter(|c| c.circumference > three_r).collect();
        Ok(Contractor { space, scale, bound, neighbors, charts, budget })
    }

    pub fn space(&self) -> &'a FiniteMetricSpace {
        self.space
    }

    pub fn scale(&self) -> Rational {
        self.scale
    }

    pub fn budget(&self) -> SearchBudget {
        self.budget
    }

    fn regime(&self) -> Regime<'a> {
        Regime::Metric { space: self.space, scale: self.scale }
    }

    #[inline]
    fn close(&self, a: usize, b: usize) -> bool {
        self.space.within(a, b, self.bound)
    }

    fn check_loop(&self, points: &[usize]) -> Result<()> {
        if points.is_empty() || points.first() != points.last() {
            return Err(Error::invalid("contraction needs a nonempty closed loop"));
        }
        if let Some(&p) = points.iter().find(|&&p| p >= self.space.len()) {
            return Err(Error::invalid(format!("point {p} is not in the space")));
        }
        if let Some(w) = points.windows(2).find(|w| !self.close(w[0], w[1])) {
            return Err(Error::invalid(format!(
                "step {} → {} exceeds r' = {}",
                self.space.label(w[0]),
                self.space.label(w[1]),
                format_rational(&self.scale)
            )));
        }
        Ok(())
    }

    /// Contracts a based loop to the trivial loop at its first point.
    pub fn contract(&self, points: &[usize]) -> Result<ContractionOutcome> {
        self.check_loop(points)?;
        for chart in &self.charts {
            let cert = chart_winding(self.space, chart, points, &self.scale)?;
            if cert.is_nontrivial() {
                return Ok(ContractionOutcome::Impossible(NegativeCertificate::Winding(cert)));
            }
        }
        let mut seq = MoveSequence::new(self.scale, points.to_vec());
        let mut path = points.to_vec();
        self.remove_stutters(&mut path, &mut seq);
        if path.len() == 1 {
            return Ok(ContractionOutcome::Contracted(seq));
        }

        let mut stuck = None;
        for replace_first in [true, false] {
            let mut trial_path = path.clone();
            let mut trial = seq.clone();
            self.descend(&mut trial_path, &mut trial, replace_first);
            if trial_path.len() == 1 {
                return Ok(ContractionOutcome::Contracted(trial));
            }
            if stuck.is_none() {
                stuck = Some((trial_path, trial));
            }
        }
        let (stuck_path, mut seq) = stuck.expect("at least one descent ran");
        let length_cap = self.budget.length_factor * (points.len() - 1).max(1);
        let mut outcome = self.search(stuck_path.clone(), length_cap, true);
        if !matches!(outcome, SearchEnd::Found(_)) {
            outcome = self.search(stuck_path.clone(), length_cap, false);
        }
        match outcome {
            SearchEnd::Found(moves) => {
                let mut p = stuck_path;
                for mv in moves {
                    apply_move_in_place(&mut p, &mv, &self.regime()).expect("search moves are legal");
                    seq.push(mv, p.len() - 1);
                }
                Ok(ContractionOutcome::Contracted(seq))
            }
            SearchEnd::Exhausted(explored) => {
                Ok(ContractionOutcome::Impossible(NegativeCertificate::Exhausted { explored, length_cap }))
            }
            SearchEnd::Budget(explored) => Ok(ContractionOutcome::Inconclusive(BudgetReport {
                explored,
                max_nodes: self.budget.max_nodes,
                length_cap,
            })),
        }
    }

    fn apply(&self, path: &mut Vec<usize>, seq: &mut MoveSequence, mv: HomotopyMove) {
        apply_move_in_place(path, &mv, &self.regime()).expect("contractor only emits legal moves");
        seq.push(mv, path.len() - 1);
    }

    /// Removes repeated consecutive points.
    fn remove_stutters(&self, path: &mut Vec<usize>, seq: &mut MoveSequence) {
        if path.len() == 2 && path[0] == path[1] {
            let x = path[0];
            self.apply(path, seq, HomotopyMove::InsertPoint { index: 0, point: x });
            self.apply(path, seq, HomotopyMove::DeleteBacktrack { index: 0 });
            return;
        }
        while let Some(i) = (1..path.len()).find(|&i| path[i] == path[i - 1]) {
            // Drop the interior copy; its neighbours are one step apart.
            let index = if i < path.len() - 1 { i } else { i - 1 };
            self.apply(path, seq, HomotopyMove::DeletePoint { index });
        }
    }

    /// Greedy descent of `Σ d(x_i, x_0)`: cancel backtracks, then move the
    /// farthest point towards `x_0` or drop it.
    fn descend(&self, path: &mut Vec<usize>, seq: &mut MoveSequence, replace_first: bool) {
        let base = path[0];
        let d = |x: usize| self.space.distance_scaled(x, base);
        'outer: while path.len() > 1 {
            let backtrack = (0..path.len().saturating_sub(2))
                .filter(|&i| path[i] == path[i + 2])
                .max_by_key(|&i| (d(path[i + 1]), Reverse(i)));
            if let Some(index) = backtrack {
                self.apply(path, seq, HomotopyMove::DeleteBacktrack { index });
                continue;
            }
            let mut interior: Vec<usize> = (1..path.len() - 1).collect();
            interior.sort_by_key(|&i| (Reverse(d(path[i])), i));
            for i in interior {
                let (a, x, b) = (path[i - 1], path[i], path[i + 1]);
                let replacement = || {
                    self.neighbors[x]
                        .iter()
                        .copied()
                        .filter(|&y| y != a && y != b && d(y) < d(x) && self.close(a, y) && self.close(y, b))
                        .min_by_key(|&y| {
                            let step = self.space.distance_scaled(a, y).max(self.space.distance_scaled(y, b));
                            (step, d(y), y)
                        })
                };
                let deletable = a != b && self.close(a, b);
                if replace_first {
                    if let Some(y) = replacement() {
                        self.apply(path, seq, HomotopyMove::InsertPoint { index: i, point: y });
                        self.apply(path, seq, HomotopyMove::DeletePoint { index: i });
                        continue 'outer;
                    }
                    if deletable {
                        self.apply(path, seq, HomotopyMove::DeletePoint { index: i });
                        continue 'outer;
                    }
                } else {
                    if deletable {
                        self.apply(path, seq, HomotopyMove::DeletePoint { index: i });
                        continue 'outer;
                    }
                    if let Some(y) = replacement() {
                        self.apply(path, seq, HomotopyMove::InsertPoint { index: i, point: y });
                        self.apply(path, seq, HomotopyMove::DeletePoint { index: i });
                        continue 'outer;
                    }
                }
            }
            break;
        }
    }

    /// Stutter-free moves available from `path` under the length cap. The
    /// local variant never lengthens the loop and moves single points
    /// instead of inserting.
    fn successors(&self, path: &[usize], length_cap: usize, local: bool, out: &mut Vec<Vec<HomotopyMove>>) {
        out.clear();
        let m = path.len() - 1;
        for i in 0..m.saturating_sub(1) {
            if path[i] == path[i + 2] {
                out.push(vec![HomotopyMove::DeleteBacktrack { index: i }]);
            }
        }
        for i in 1..m {
            let (a, b) = (path[i - 1], path[i + 1]);
            if a != b && self.close(a, b) {
                out.push(vec![HomotopyMove::DeletePoint { index: i }]);
            }
        }
        if local {
            for i in 1..m {
                let (a, x, b) = (path[i - 1], path[i], path[i + 1]);
                for &y in &self.neighbors[x] {
                    if y != a && y != b && self.close(a, y) && self.close(y, b) {
                        out.push(vec![
                            HomotopyMove::InsertPoint { index: i, point: y },
                            HomotopyMove::DeletePoint { index: i },
                        ]);
                    }
                }
            }
            return;
        }
        if m < length_cap {
            for i in 0..m {
                let (a, b) = (path[i], path[i + 1]);
                for &y in &self.neighbors[a] {
                    if y != b && self.close(y, b) {
                        out.push(vec![HomotopyMove::InsertPoint { index: i, point: y }]);
                    }
                }
            }
        }
        if m + 2 <= length_cap {
            for (i, &x) in path.iter().enumerate() {
                for &u in &self.neighbors[x] {
                    out.push(vec![HomotopyMove::InsertBacktrack { index: i, point: u }]);
                }
            }
        }
    }

    /// Best-first search memoised on the literal point sequence, ordered by
    /// total distance to the basepoint, then total pairwise distance.
    fn search(&self, start: Vec<usize>, length_cap: usize, local: bool) -> SearchEnd {
        let base = start[0];
        let d = |a: usize, b: usize| self.space.distance_scaled(a, b);
        let potential = |p: &[usize]| -> (u64, u64, usize) {
            let to_base = p.iter().map(|&x| d(x, base)).sum();
            let spread = p.iter().enumerate().flat_map(|(i, &x)| p[i + 1..].iter().map(move |&y| (x, y))).map(|(x, y)| d(x, y)).sum();
            (to_base, spread, p.len())
        };
        let mut parents: Vec<(u32, Vec<HomotopyMove>)> = vec![(0, Vec::new())];
        let mut paths: Vec<Vec<usize>> = vec![start.clone()];
        let mut seen: HashMap<Vec<usize>, u32> = HashMap::new();
        seen.insert(start.clone(), 0);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((potential(&start), 0u32)));
        let mut options = Vec::new();
        let regime = self.regime();
        while let Some(Reverse((_, id))) = heap.pop() {
            let current = std::mem::take(&mut paths[id as usize]);
            self.successors(&current, length_cap, local, &mut options);
            for mvs in &options {
                let mut next = current.clone();
                for mv in mvs {
                    apply_move_in_place(&mut next, mv, &regime).expect("successor moves are legal");
                }
                if seen.contains_key(&next) {
                    continue;
                }
                if seen.len() >= self.budget.max_nodes {
                    return SearchEnd::Budget(seen.len());
                }
                let nid = parents.len() as u32;
                parents.push((id, mvs.clone()));
                seen.insert(next.clone(), nid);
                if next.len() == 1 {
                    let mut chain = Vec::new();
                    let mut at = nid;
                    while at != 0 {
                        let (parent, mvs) = &parents[at as usize];
                        chain.extend(mvs.iter().rev().copied());
                        at = *parent;
                    }
                    chain.reverse();
                    return SearchEnd::Found(chain);
                }
                heap.push(Reverse((potential(&next), nid)));
                paths.push(next);
            }
        }
        SearchEnd::Exhausted(seen.len())
    }
}

/// One-shot contraction of a based loop at scale `r'`.
pub fn contract_loop(
    space: &FiniteMetricSpace,
    loop_points: &[usize],
    scale: Rational,
    budget: SearchBudget,
) -> Result<ContractionOutcome> {
    Contractor::new(space, scale, budget)?.contract(loop_points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::spaces::{build_window, circle_space, Elem, GeneratingSet, GroupFamily};

    #[test]
    fn circle_three_r_law() {
        for n in 4..=15usize {
            let c = circle_space(int(n as i64), n).unwrap();
            for r in 1..=4i64 {
                let out = contract_loop(c.space(), &c.full_loop(1), int(r), SearchBudget::default()).unwrap();
                if n as i64 <= 3 * r {
                    let seq = out.moves().unwrap_or_else(|| panic!("R={n} r={r}: {out:?}"));
                    seq.verify_contraction(c.space()).unwrap();
                } else {
                    assert!(
                        matches!(out, ContractionOutcome::Impossible(NegativeCertificate::Winding(ref w)) if w.winding == 1),
                        "R={n} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn unit_square_in_z2() {
        let fam = GroupFamily::FreeAbelian { rank: 2 };
        let s = GeneratingSet::standard(&fam);
        let w = build_window(&fam, &s, 3, &Default::default()).unwrap();
        let pts: Vec<usize> = [[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]
            .iter()
            .map(|p| w.index_of(&Elem::new(p.to_vec())).unwrap())
            .collect();
        let out = contract_loop(w.space(), &pts, int(2), SearchBudget::default()).unwrap();
        out.moves().unwrap().verify_contraction(w.space()).unwrap();
        // At scale 1 the square is not contractible: the search closure is finite.
        let tiny = SearchBudget { max_nodes: 200_000, length_factor: 1 };
        let out = contract_loop(w.space(), &pts, int(1), tiny).unwrap();
        assert!(out.is_impossible(), "{out:?}");
    }

    #[test]
    fn trivial_and_stuttering_loops() {
        let c = circle_space(int(6), 6).unwrap();
        for l in [vec![0], vec![0, 0], vec![0, 1, 1, 0], vec![0, 1, 0, 0]] {
            let out = contract_loop(c.space(), &l, int(1), SearchBudget::default()).unwrap();
            out.moves().unwrap().verify_contraction(c.space()).unwrap();
        }
    }

    #[test]
    fn rejects_bad_loops() {
        let c = circle_space(int(6), 6).unwrap();
        assert!(contract_loop(c.space(), &[0, 1], int(1), SearchBudget::default()).is_err());
        assert!(contract_loop(c.space(), &[0, 3, 0], int(1), SearchBudget::default()).is_err());
    }
}
