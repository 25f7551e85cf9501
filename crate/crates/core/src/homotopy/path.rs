use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::rips::RipsComplex2;
use crate::spaces::FiniteMetricSpace;

/// A nonempty point sequence `(x_0, …, x_n)` in a finite metric space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CombinatorialPath(Vec<usize>);

impl CombinatorialPath {
    pub fn new(points: Vec<usize>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("paths are nonempty"));
        }
        Ok(CombinatorialPath(points))
    }

    pub fn points(&self) -> &[usize] {
        &self.0
    }

    pub fn into_points(self) -> Vec<usize> {
        self.0
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.len() == 1
    }

    pub fn is_loop(&self) -> bool {
        self.0.first() == self.0.last()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.len() == 1
    }

    pub fn start(&self) -> usize {
        self.0[0]
    }

    pub fn end(&self) -> usize {
        *self.0.last().expect("nonempty")
    }

    /// Largest step `max d(x_i, x_{i+1})` (zero for the trivial path).
    pub fn step_bound(&self, space: &FiniteMetricSpace) -> Rational {
        let max = self.0.windows(2).map(|w| space.distance_scaled(w[0], w[1])).max().unwrap_or(0);
        Rational::new(max as i64, space.denominator() as i64)
    }

    pub fn is_r_path(&self, space: &FiniteMetricSpace, r: &Rational) -> bool {
        let b = space.bound(r);
        self.0.windows(2).all(|w| space.within(w[0], w[1], b))
    }

    pub fn reversed(&self) -> Self {
        CombinatorialPath(self.0.iter().rev().copied().collect())
    }

    pub fn labels(&self, space: &FiniteMetricSpace) -> Vec<String> {
        self.0.iter().map(|&p| space.label(p).to_string()).collect()
    }
}

/// An elementary homotopy move. Indices refer to the path the move is
/// applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum HomotopyMove {
    /// `(…, x_i, …) → (…, x_i, u, x_i, …)`.
    InsertBacktrack { index: usize, point: usize },
    /// Inverse of `InsertBacktrack`: drops `x_{i+1}, x_{i+2}` when `x_{i+2} = x_i`.
    DeleteBacktrack { index: usize },
    /// `(…, x_i, x_{i+1}, …) → (…, x_i, y, x_{i+1}, …)`.
    InsertPoint { index: usize, point: usize },
    /// Drops the interior point `x_i`.
    DeletePoint { index: usize },
}

impl HomotopyMove {
    /// Whether the move uses a 2-simplex (as opposed to a backtrack).
    pub fn is_triangle_move(&self) -> bool {
        matches!(self, HomotopyMove::InsertPoint { .. } | HomotopyMove::DeletePoint { .. })
    }

    /// The move undoing `self` when applied to `before`.
    pub fn inverse(&self, before: &[usize]) -> HomotopyMove {
        match *self {
            HomotopyMove::InsertBacktrack { index, .. } => HomotopyMove::DeleteBacktrack { index },
            HomotopyMove::DeleteBacktrack { index } => {
                HomotopyMove::InsertBacktrack { index, point: before[index + 1] }
            }
            HomotopyMove::InsertPoint { index, .. } => HomotopyMove::DeletePoint { index: index + 1 },
            HomotopyMove::DeletePoint { index } => {
                HomotopyMove::InsertPoint { index: index - 1, point: before[index] }
            }
        }
    }

    /// Net change in the number of points.
    pub fn length_delta(&self) -> isize {
        match self {
            HomotopyMove::InsertBacktrack { .. } => 2,
            HomotopyMove::DeleteBacktrack { .. } => -2,
            HomotopyMove::InsertPoint { .. } => 1,
            HomotopyMove::DeletePoint { .. } => -1,
        }
    }
}

/// Which side conditions moves must satisfy.
#[derive(Debug, Clone, Copy)]
pub enum Regime<'a> {
    /// Graph homotopy in the 1-skeleton: backtrack moves only.
    Graph(&'a RipsComplex2<'a>),
    /// Graph homotopy plus moves across 2-simplices.
    Combinatorial(&'a RipsComplex2<'a>),
    /// r-homotopy of r-paths: every step stays within `scale`.
    Metric { space: &'a FiniteMetricSpace, scale: Rational },
}

impl<'a> Regime<'a> {
    pub fn space(&self) -> &'a FiniteMetricSpace {
        match self {
            Regime::Graph(c) | Regime::Combinatorial(c) => c.space(),
            Regime::Metric { space, .. } => space,
        }
    }

    pub fn scale(&self) -> Rational {
        match self {
            Regime::Graph(c) | Regime::Combinatorial(c) => c.scale(),
            Regime::Metric { scale, .. } => *scale,
        }
    }

    fn step_ok(&self, a: usize, b: usize) -> bool {
        match self {
            Regime::Graph(c) | Regime::Combinatorial(c) => c.is_edge(a, b),
            Regime::Metric { space, scale } => space.distance(a, b) <= *scale,
        }
    }

    /// Checks that `points` is a path of this regime: an edge path of the
    /// complex, or an r-path.
    pub fn check_path(&self, points: &[usize]) -> Result<()> {
        let n = self.space().len();
        if points.is_empty() {
            return Err(Error::invalid("paths are nonempty"));
        }
        if let Some(&p) = points.iter().find(|&&p| p >= n) {
            return Err(Error::invalid(format!("point {p} is not in the space")));
        }
        for (i, w) in points.windows(2).enumerate() {
            if !self.step_ok(w[0], w[1]) {
                return Err(Error::invalid(format!(
                    "step {i} ({} → {}) is not a step at scale {}",
                    self.space().label(w[0]),
                    self.space().label(w[1]),
                    format_rational(&self.scale())
                )));
            }
        }
        Ok(())
    }
}

fn reject(msg: String) -> Error {
    Error::MoveRejected(msg)
}

/// Applies `mv` to `points` in place after checking its side condition.
pub fn apply_move_in_place(points: &mut Vec<usize>, mv: &HomotopyMove, regime: &Regime<'_>) -> Result<()> {
    let space = regime.space();
    let last = points.len() - 1;
    let name = |p: usize| space.label(p).to_string();
    match *mv {
        HomotopyMove::InsertBacktrack { index, point } => {
            if index > last || point >= space.len() {
                return Err(reject(format!("insert-backtrack index {index} or point out of range")));
            }
            let x = points[index];
            if !regime.step_ok(x, point) {
                return Err(reject(format!("{{{}, {}}} is not an edge", name(point), name(x))));
            }
            points.splice(index + 1..index + 1, [point, x]);
        }
        HomotopyMove::DeleteBacktrack { index } => {
            if index + 2 > last {
                return Err(reject(format!("delete-backtrack index {index} out of range")));
            }
            if points[index] != points[index + 2] {
                return Err(reject(format!(
                    "no backtrack at {index}: {} ≠ {}",
                    name(points[index]),
                    name(points[index + 2])
                )));
            }
            points.drain(index + 1..index + 3);
        }
        HomotopyMove::InsertPoint { index, point } => {
            if index >= last || point >= space.len() {
                return Err(reject(format!("insert-point index {index} or point out of range")));
            }
            let (a, b) = (points[index], points[index + 1]);
            match regime {
                Regime::Graph(_) => {
                    return Err(reject("triangle moves are not graph homotopies".into()));
                }
                Regime::Combinatorial(c) => {
                    if !c.is_triangle(a, point, b) {
                        return Err(reject(format!(
                            "{{{}, {}, {}}} is not a 2-simplex",
                            name(a),
                            name(point),
                            name(b)
                        )));
                    }
                }
                Regime::Metric { .. } => {
                    if !regime.step_ok(a, point) || !regime.step_ok(point, b) {
                        return Err(reject(format!(
                            "inserting {} between {} and {} exceeds scale {}",
                            name(point),
                            name(a),
                            name(b),
                            format_rational(&regime.scale())
                        )));
                    }
                }
            }
            points.insert(index + 1, point);
        }
        HomotopyMove::DeletePoint { index } => {
            if index == 0 || index >= last {
                return Err(reject(format!("delete-point index {index} is not interior")));
            }
            let (a, x, b) = (points[index - 1], points[index], points[index + 1]);
            match regime {
                Regime::Graph(_) => {
                    return Err(reject("triangle moves are not graph homotopies".into()));
                }
                Regime::Combinatorial(c) => {
                    if !c.is_triangle(a, x, b) {
                        return Err(reject(format!(
                            "{{{}, {}, {}}} is not a 2-simplex",
                            name(a),
                            name(x),
                            name(b)
                        )));
                    }
                }
                Regime::Metric { .. } => {
                    if !regime.step_ok(a, b) {
                        return Err(reject(format!(
                            "shortcut {} → {} exceeds scale {}",
                            name(a),
                            name(b),
                            format_rational(&regime.scale())
                        )));
                    }
                }
            }
            points.remove(index);
        }
    }
    Ok(())
}

pub fn apply_move(path: &CombinatorialPath, mv: &HomotopyMove, regime: &Regime<'_>) -> Result<CombinatorialPath> {
    let mut points = path.points().to_vec();
    apply_move_in_place(&mut points, mv, regime)?;
    Ok(CombinatorialPath(points))
}

/// A replayable chain of moves, with the number of steps of the path
/// after each move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveSequence {
    #[serde(with = "crate::rational::serde_rational")]
    pub scale: Rational,
    pub start: Vec<usize>,
    pub moves: Vec<HomotopyMove>,
    pub lengths: Vec<usize>,
}

impl MoveSequence {
    pub fn new(scale: Rational, start: Vec<usize>) -> Self {
        MoveSequence { scale, start, moves: Vec::new(), lengths: Vec::new() }
    }

    pub(crate) fn push(&mut self, mv: HomotopyMove, new_len: usize) {
        self.moves.push(mv);
        self.lengths.push(new_len);
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn triangle_moves(&self) -> usize {
        self.moves.iter().filter(|m| m.is_triangle_move()).count()
    }

    pub fn backtrack_only(&self) -> bool {
        self.moves.iter().all(|m| !m.is_triangle_move())
    }

    /// Replays the moves from `start`, checking every side condition and
    /// the recorded lengths. Returns the final path.
    pub fn replay(&self, regime: &Regime<'_>) -> Result<CombinatorialPath> {
        regime.check_path(&self.start)?;
        if self.lengths.len() != self.moves.len() {
            return Err(Error::CertificateInvalid("length record does not match the moves".into()));
        }
        let mut points = self.start.clone();
        for (k, (mv, &len)) in self.moves.iter().zip(&self.lengths).enumerate() {
            apply_move_in_place(&mut points, mv, regime)
                .map_err(|e| Error::CertificateInvalid(format!("move {k}: {e}")))?;
            if points.len() - 1 != len {
                return Err(Error::CertificateInvalid(format!("move {k}: recorded length {len} is wrong")));
            }
        }
        Ok(CombinatorialPath(points))
    }

    /// Replays in the metric regime at the recorded scale and checks the
    /// result is the trivial loop at the start point.
    pub fn verify_contraction(&self, space: &FiniteMetricSpace) -> Result<()> {
        let regime = Regime::Metric { space, scale: self.scale };
        let end = self.replay(&regime)?;
        if self.start.first() != self.start.last() {
            return Err(Error::CertificateInvalid("the start path is not a loop".into()));
        }
        if !end.is_trivial() || end.start() != self.start[0] {
            return Err(Error::CertificateInvalid("the moves do not end at the trivial loop".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::rips::build_rips2;
    use crate::spaces::circle_space;

    #[test]
    fn backtrack_roundtrip() {
        let c = circle_space(int(6), 6).unwrap();
        let rips = build_rips2(c.space(), int(1)).unwrap();
        let regime = Regime::Graph(&rips);
        let p = CombinatorialPath::new(vec![0, 1, 2]).unwrap();
        let mv = HomotopyMove::InsertBacktrack { index: 1, point: 0 };
        let q = apply_move(&p, &mv, &regime).unwrap();
        assert_eq!(q.points(), &[0, 1, 0, 1, 2]);
        let back = apply_move(&q, &mv.inverse(p.points()), &regime).unwrap();
        assert_eq!(back, p);
        // 3 is not adjacent to 1 at scale 1.
        assert!(apply_move(&p, &HomotopyMove::InsertBacktrack { index: 1, point: 3 }, &regime).is_err());
    }

    #[test]
    fn triangle_insertion() {
        let c = circle_space(int(6), 6).unwrap();
        let rips = build_rips2(c.space(), int(2)).unwrap();
        let p = CombinatorialPath::new(vec![0, 2]).unwrap();
        let q = apply_move(&p, &HomotopyMove::InsertPoint { index: 0, point: 1 }, &Regime::Combinatorial(&rips))
            .unwrap();
        assert_eq!(q.points(), &[0, 1, 2]);
        let graph = apply_move(&p, &HomotopyMove::InsertPoint { index: 0, point: 1 }, &Regime::Graph(&rips));
        assert!(matches!(graph, Err(Error::MoveRejected(_))));
    }

    #[test]
    fn metric_side_condition() {
        let c = circle_space(int(12), 12).unwrap();
        let regime = Regime::Metric { space: c.space(), scale: int(2) };
        let p = CombinatorialPath::new(vec![0, 2]).unwrap();
        // d(p0, p3) = 3 = r + 1.
        let err = apply_move(&p, &HomotopyMove::InsertPoint { index: 0, point: 3 }, &regime).unwrap_err();
        assert!(matches!(err, Error::MoveRejected(_)));
        let q = apply_move(&p, &HomotopyMove::InsertPoint { index: 0, point: 1 }, &regime).unwrap();
        assert_eq!(
            apply_move(&q, &HomotopyMove::DeletePoint { index: 1 }, &regime).unwrap(),
            p
        );
    }

    #[test]
    fn delete_point_must_be_interior() {
        let c = circle_space(int(6), 6).unwrap();
        let regime = Regime::Metric { space: c.space(), scale: int(3) };
        let p = CombinatorialPath::new(vec![0, 1, 0]).unwrap();
        assert!(apply_move(&p, &HomotopyMove::DeletePoint { index: 0 }, &regime).is_err());
        assert!(apply_move(&p, &HomotopyMove::DeletePoint { index: 2 }, &regime).is_err());
    }
}
