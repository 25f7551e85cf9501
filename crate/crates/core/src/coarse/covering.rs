use serde::Serialize;

use super::loops::hop_distances;
use crate::error::{Error, Result};
use crate::homotopy::{Contractor, ContractionOutcome, HomotopyMove, MoveSequence, SearchBudget};
use crate::rational::{format_rational, serde_rational, Rational};
use crate::spaces::FiniteMetricSpace;

/// A surjection `f: X̃ → X` given as an index table.
#[derive(Debug, Clone)]
pub struct CoveringMap<'a> {
    upstairs: &'a FiniteMetricSpace,
    downstairs: &'a FiniteMetricSpace,
    map: Vec<usize>,
}

/// Why a map fails to be an r-covering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoveringWitness {
    /// The r-balls around two points of one fiber meet at `common`.
    FiberBallsMeet { fiber_of: String, first: String, second: String, common: String },
    /// A distance at most 2r upstairs is not preserved.
    DistanceChanged {
        first: String,
        second: String,
        #[serde(with = "serde_rational")]
        upstairs: Rational,
        #[serde(with = "serde_rational")]
        downstairs: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringCheck {
    #[serde(with = "serde_rational")]
    pub r: Rational,
    pub is_covering: bool,
    pub witness: Option<CoveringWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LiftFailureKind {
    /// No preimage of `point` lies within r of the lifted neighbor.
    MissingPreimage { point: String, near: String },
    /// The lift chosen next to one neighbor is too far from the other.
    NeighborConflict { lifted: String, neighbor: String },
    /// Deleting a point would join two lifted points farther than r apart.
    ShortcutTooLong { left: String, right: String },
    /// A backtrack downstairs is not a backtrack upstairs.
    BacktrackMismatch { left: String, right: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftFailure {
    /// Index of the failing move; `None` when lifting the initial path fails.
    pub move_index: Option<usize>,
    pub failure: LiftFailureKind,
    /// Lift of the initial path, as far as it got.
    pub initial_lift: Vec<String>,
    /// True when the initial lift is not a loop.
    pub endpoints_differ: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum LiftOutcome {
    Lifted { moves: MoveSequence },
    Failed(LiftFailure),
}

impl<'a> CoveringMap<'a> {
    pub fn new(upstairs: &'a FiniteMetricSpace, downstairs: &'a FiniteMetricSpace, map: Vec<usize>) -> Result<Self> {
        if map.len() != upstairs.len() || map.iter().any(|&p| p >= downstairs.len()) {
            return Err(Error::invalid("the map must send every upstairs point downstairs"));
        }
        let mut hit = vec![false; downstairs.len()];
        map.iter().for_each(|&p| hit[p] = true);
        if let Some(p) = hit.iter().position(|h| !h) {
            return Err(Error::invalid(format!("{} has no preimage", downstairs.label(p))));
        }
        Ok(CoveringMap { upstairs, downstairs, map })
    }

    pub fn upstairs(&self) -> &'a FiniteMetricSpace {
        self.upstairs
    }

    pub fn downstairs(&self) -> &'a FiniteMetricSpace {
        self.downstairs
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn fiber(&self, y: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&x| self.map[x] == y).collect()
    }

    /// Points ordered by distance from the basepoint, ties by index.
    fn witness_order(&self) -> Vec<usize> {
        let up = self.upstairs;
        let mut order: Vec<usize> = (0..up.len()).collect();
        order.sort_by_key(|&x| (up.distance_scaled(up.basepoint(), x), x));
        order
    }

    /// Checks that r-balls around distinct points of a fiber are disjoint
    /// and that distances at most `2r` upstairs are preserved.
    pub fn is_r_covering(&self, r: &Rational) -> CoveringCheck {
        let up = self.upstairs;
        let lbl = |p: usize| up.label(p).to_string();
        let b = up.bound(r);
        let order = self.witness_order();
        let mut witness = None;
        'fibers: for &x in &order {
            for &x2 in &order {
                if x2 <= x || self.map[x2] != self.map[x] {
                    continue;
                }
                if let Some(z) = (0..up.len()).find(|&z| up.within(x, z, b) && up.within(x2, z, b)) {
                    witness = Some(CoveringWitness::FiberBallsMeet {
                        fiber_of: self.downstairs.label(self.map[x]).into(),
                        first: lbl(x),
                        second: lbl(x2),
                        common: lbl(z),
                    });
                    break 'fibers;
                }
            }
        }
        if witness.is_none() {
            let two_r = Rational::from_integer(2) * r;
            let b2 = up.bound(&two_r);
            'pairs: for &x in &order {
                for x2 in x + 1..up.len() {
                    if !up.within(x, x2, b2) {
                        continue;
                    }
                    let (du, dd) = (up.distance(x, x2), self.downstairs.distance(self.map[x], self.map[x2]));
                    if du != dd {
                        witness = Some(CoveringWitness::DistanceChanged {
                            first: lbl(x),
                            second: lbl(x2),
                            upstairs: du,
                            downstairs: dd,
                        });
                        break 'pairs;
                    }
                }
            }
        }
        CoveringCheck { r: *r, is_covering: witness.is_none(), witness }
    }

    /// The preimage of `y` within `r` of `near`, preferring the closest.
    fn lift_near(&self, y: usize, near: usize, r: &Rational) -> Option<usize> {
        let b = self.upstairs.bound(r);
        (0..self.map.len())
            .filter(|&x| self.map[x] == y && self.upstairs.within(near, x, b))
            .min_by_key(|&x| (self.upstairs.distance_scaled(near, x), x))
    }

    /// Lifts an r-homotopy downstairs, starting the lift of its initial
    /// path at `start`. Each point is lifted next to its left neighbor and
    /// checked against its right neighbor.
    pub fn lift_homotopy(&self, moves: &MoveSequence, start: usize) -> Result<LiftOutcome> {
        let up = self.upstairs;
        let r = moves.scale;
        if start >= up.len() || moves.start.is_empty() || self.map[start] != moves.start[0] {
            return Err(Error::invalid("the start point must lie over the first point of the path"));
        }
        let lbl = |p: usize| up.label(p).to_string();
        let dl = |p: usize| self.downstairs.label(p).to_string();
        let b = up.bound(&r);

        let mut lifted = vec![start];
        for &y in &moves.start[1..] {
            let prev = *lifted.last().expect("nonempty");
            match self.lift_near(y, prev, &r) {
                Some(x) => lifted.push(x),
                None => {
                    return Ok(LiftOutcome::Failed(LiftFailure {
                        move_index: None,
                        failure: LiftFailureKind::MissingPreimage { point: dl(y), near: lbl(prev) },
                        initial_lift: lifted.iter().map(|&p| lbl(p)).collect(),
                        endpoints_differ: false,
                    }))
                }
            }
        }
        let initial_lift: Vec<String> = lifted.iter().map(|&p| lbl(p)).collect();
        let endpoints_differ = moves.start.first() == moves.start.last() && lifted.first() != lifted.last();
        let fail = |k: usize, failure| {
            Ok(LiftOutcome::Failed(LiftFailure {
                move_index: Some(k),
                failure,
                initial_lift: initial_lift.clone(),
                endpoints_differ,
            }))
        };

        let mut out = MoveSequence::new(r, lifted.clone());
        let mut path = lifted;
        for (k, mv) in moves.moves.iter().enumerate() {
            let len_ok = match *mv {
                HomotopyMove::InsertBacktrack { index, .. } | HomotopyMove::InsertPoint { index, .. } => {
                    index < path.len() && (matches!(mv, HomotopyMove::InsertBacktrack { .. }) || index + 1 < path.len())
                }
                HomotopyMove::DeleteBacktrack { index } => index + 2 < path.len(),
                HomotopyMove::DeletePoint { index } => index >= 1 && index + 1 < path.len(),
            };
            if !len_ok {
                return Err(Error::invalid(format!("move {k} does not fit the path")));
            }
            let new = match *mv {
                HomotopyMove::InsertBacktrack { index, point } => {
                    let Some(u) = self.lift_near(point, path[index], &r) else {
                        return fail(k, LiftFailureKind::MissingPreimage { point: dl(point), near: lbl(path[index]) });
                    };
                    HomotopyMove::InsertBacktrack { index, point: u }
                }
                HomotopyMove::DeleteBacktrack { index } => {
                    if path[index] != path[index + 2] {
                        return fail(
                            k,
                            LiftFailureKind::BacktrackMismatch { left: lbl(path[index]), right: lbl(path[index + 2]) },
                        );
                    }
                    HomotopyMove::DeleteBacktrack { index }
                }
                HomotopyMove::InsertPoint { index, point } => {
                    let Some(u) = self.lift_near(point, path[index], &r) else {
                        return fail(k, LiftFailureKind::MissingPreimage { point: dl(point), near: lbl(path[index]) });
                    };
                    if !up.within(u, path[index + 1], b) {
                        return fail(k, LiftFailureKind::NeighborConflict { lifted: lbl(u), neighbor: lbl(path[index + 1]) });
                    }
                    HomotopyMove::InsertPoint { index, point: u }
                }
                HomotopyMove::DeletePoint { index } => {
                    if !up.within(path[index - 1], path[index + 1], b) {
                        return fail(
                            k,
                            LiftFailureKind::ShortcutTooLong { left: lbl(path[index - 1]), right: lbl(path[index + 1]) },
                        );
                    }
                    HomotopyMove::DeletePoint { index }
                }
            };
            let regime = crate::homotopy::Regime::Metric { space: up, scale: r };
            crate::homotopy::apply_move_in_place(&mut path, &new, &regime)?;
            out.push(new, path.len() - 1);
        }
        Ok(LiftOutcome::Lifted { moves: out })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InjectivityReport {
    #[serde(with = "serde_rational")]
    pub r: Rational,
    #[serde(with = "serde_rational", rename = "R")]
    pub big_r: Rational,
    pub covering: CoveringCheck,
    /// Two points of one fiber joined by an r-path upstairs, if any.
    pub fiber_pair: Option<[String; 2]>,
    pub path: Vec<String>,
    pub contraction: Option<ContractionOutcome>,
    pub lift: Option<LiftOutcome>,
    /// Hypotheses found to fail, in words.
    pub failed_hypotheses: Vec<String>,
    /// True iff the map is injective on the space.
    pub injective: bool,
    /// True if every hypothesis held yet a fiber pair was found; this
    /// would mean a bug.
    pub contradiction: bool,
}

/// Tests the statement "an R-covering of an (r, R)-simply connected space
/// by an r-connected space is injective" on a concrete map.
///
/// Two points of one fiber joined by an r-path push down to an r-loop; a
/// contraction at scale `R` downstairs would lift to a homotopy between
/// paths with different endpoints, which cannot exist. So some hypothesis
/// must fail, and the report says which.
pub fn covering_injectivity_check(
    cov: &CoveringMap<'_>,
    r: Rational,
    big_r: Rational,
    budget: SearchBudget,
) -> Result<InjectivityReport> {
    if r > big_r || r <= Rational::from_integer(0) {
        return Err(Error::invalid("need 0 < r ≤ R"));
    }
    let up = cov.upstairs;
    let lbl = |p: usize| up.label(p).to_string();
    let covering = cov.is_r_covering(&big_r);
    let mut report = InjectivityReport {
        r,
        big_r,
        covering: covering.clone(),
        fiber_pair: None,
        path: Vec::new(),
        contraction: None,
        lift: None,
        failed_hypotheses: Vec::new(),
        injective: true,
        contradiction: false,
    };
    if !covering.is_covering {
        report.failed_hypotheses.push(format!("the map is not a {}-covering", format_rational(&big_r)));
    }
    let order = cov.witness_order();
    let pair = order.iter().find_map(|&x| {
        let hops = hop_distances(up, &r, x);
        order.iter().find(|&&x2| x2 != x && cov.map[x2] == cov.map[x] && hops[x2].is_some()).map(|&x2| (x, x2, hops))
    });
    let duplicated = (0..up.len()).any(|x| (x + 1..up.len()).any(|x2| cov.map[x] == cov.map[x2]));
    report.injective = !duplicated;
    let Some((x, x2, hops)) = pair else {
        if duplicated {
            report.failed_hypotheses.push(format!("the upstairs space is not {}-connected", format_rational(&r)));
        }
        return Ok(report);
    };
    report.fiber_pair = Some([lbl(x), lbl(x2)]);
    // Shortest r-path from x2 back to x along decreasing hop counts.
    let b = up.bound(&r);
    let mut path = vec![x2];
    while *path.last().expect("nonempty") != x {
        let cur = *path.last().expect("nonempty");
        let h = hops[cur].expect("reachable");
        let next = (0..up.len())
            .find(|&p| hops[p] == Some(h - 1) && up.within(cur, p, b))
            .expect("BFS predecessor exists");
        path.push(next);
    }
    path.reverse();
    report.path = path.iter().map(|&p| lbl(p)).collect();
    let pushed: Vec<usize> = path.iter().map(|&p| cov.map[p]).collect();
    let outcome = Contractor::new(cov.downstairs, big_r, budget)?.contract(&pushed)?;
    match &outcome {
        ContractionOutcome::Contracted(moves) => {
            let lift = cov.lift_homotopy(moves, x)?;
            if let LiftOutcome::Lifted { .. } = lift {
                report.contradiction = true;
            } else if covering.is_covering {
                report.contradiction = true;
            }
            report.lift = Some(lift);
        }
        ContractionOutcome::Impossible(_) => report.failed_hypotheses.push(format!(
            "the downstairs space is not ({}, {})-simply connected",
            format_rational(&r),
            format_rational(&big_r)
        )),
        ContractionOutcome::Inconclusive(_) => report
            .failed_hypotheses
            .push("simple connectivity downstairs could not be decided within the search budget".into()),
    }
    report.contraction = Some(outcome);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::ResourceCaps;
    use crate::rational::int;
    use crate::spaces::{build_window, Elem, GeneratingSet, GroupFamily, GroupWindow};

    fn line_over_cyclic(radius: usize, n: i64) -> (GroupWindow, GroupWindow, Vec<usize>) {
        let caps = ResourceCaps::default();
        let up = build_window(&GroupFamily::line(), &GeneratingSet::line(&[1]).unwrap(), radius, &caps).unwrap();
        let cyc = GroupFamily::Cyclic { modulus: n as u32 };
        let down = build_window(&cyc, &GeneratingSet::standard(&cyc), n as usize, &caps).unwrap();
        let map = up
            .elements()
            .iter()
            .map(|e| down.index_of(&Elem::scalar(e.0[0].rem_euclid(n))).unwrap())
            .collect();
        (up, down, map)
    }

    #[test]
    fn line_over_cyclic_ten() {
        let (up, down, map) = line_over_cyclic(14, 10);
        let cov = CoveringMap::new(up.space(), down.space(), map).unwrap();
        assert!(cov.is_r_covering(&int(2)).is_covering);
        let c3 = cov.is_r_covering(&int(3));
        assert_eq!(
            c3.witness,
            Some(CoveringWitness::DistanceChanged {
                first: "0".into(),
                second: "6".into(),
                upstairs: int(6),
                downstairs: int(4)
            })
        );
        assert!(matches!(cov.is_r_covering(&int(5)).witness, Some(CoveringWitness::FiberBallsMeet { .. })));
    }

    #[test]
    fn injectivity_reports_the_failing_hypothesis() {
        let (up, down, map) = line_over_cyclic(14, 10);
        let cov = CoveringMap::new(up.space(), down.space(), map).unwrap();
        let a = covering_injectivity_check(&cov, int(1), int(2), SearchBudget::default()).unwrap();
        assert!(a.covering.is_covering && !a.contradiction && !a.injective);
        assert_eq!(a.failed_hypotheses.len(), 1);
        assert!(a.failed_hypotheses[0].contains("simply connected"), "{:?} {:?}", a.failed_hypotheses, a.contraction.as_ref().map(|c| c.label()));
        let b = covering_injectivity_check(&cov, int(1), int(4), SearchBudget::default()).unwrap();
        assert!(!b.covering.is_covering && !b.contradiction);
        assert!(matches!(b.lift, Some(LiftOutcome::Failed(_))));
        assert!(b.failed_hypotheses[0].contains("4-covering"));
    }

    #[test]
    fn winding_loop_does_not_lift() {
        let (up, down, map) = line_over_cyclic(8, 6);
        let cov = CoveringMap::new(up.space(), down.space(), map).unwrap();
        let d = |v: i64| down.index_of(&Elem::scalar(v)).unwrap();
        let lp = vec![d(0), d(2), d(4), d(0)];
        let out = Contractor::new(down.space(), int(2), SearchBudget::default()).unwrap().contract(&lp).unwrap();
        let moves = out.moves().expect("six points at scale 2 contract");
        let zero = up.index_of(&Elem::scalar(0)).unwrap();
        match cov.lift_homotopy(moves, zero).unwrap() {
            LiftOutcome::Failed(f) => {
                assert!(f.endpoints_differ);
                assert_eq!(f.initial_lift, vec!["0", "2", "4", "6"]);
                assert!(f.move_index.is_some());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_lifts_everything() {
        let (up, _, _) = line_over_cyclic(4, 10);
        let id: Vec<usize> = (0..up.len()).collect();
        let cov = CoveringMap::new(up.space(), up.space(), id).unwrap();
        assert!(cov.is_r_covering(&int(3)).is_covering);
        let rep = covering_injectivity_check(&cov, int(1), int(2), SearchBudget::default()).unwrap();
        assert!(rep.injective && rep.fiber_pair.is_none() && rep.failed_hypotheses.is_empty());
    }
}
