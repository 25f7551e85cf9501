use serde::{Deserialize, Serialize};

use super::path::{apply_move_in_place, HomotopyMove, MoveSequence, Regime};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::rips::RipsComplex2;

/// One conjugated triangle `y · (z, z', z'', z) · y⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingFactor {
    /// Edge path from the basepoint to `triangle[0]`.
    pub conjugator: Vec<usize>,
    pub triangle: [usize; 3],
}

impl FillingFactor {
    /// The factor as a closed vertex sequence.
    pub fn word(&self) -> Vec<usize> {
        let mut w = self.conjugator.clone();
        w.extend([self.triangle[1], self.triangle[2], self.triangle[0]]);
        w.extend(self.conjugator.iter().rev().skip(1));
        w
    }
}

/// A null-homotopic edge loop written as a product of conjugated
/// triangle loops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingDecomposition {
    #[serde(with = "crate::rational::serde_rational")]
    pub scale: Rational,
    pub basepoint: usize,
    pub factors: Vec<FillingFactor>,
}

impl FillingDecomposition {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Concatenation of all factors as one closed vertex sequence.
    pub fn word(&self) -> Vec<usize> {
        let mut w = vec![self.basepoint];
        for f in &self.factors {
            w.extend(f.word().into_iter().skip(1));
        }
        w
    }
}

/// Free reduction of an edge word given as a vertex sequence: cancels every
/// backtrack `(…, a, b, a, …) → (…, a, …)` until none remain.
pub fn free_reduce(points: &[usize]) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(points.len());
    for &p in points {
        if stack.len() >= 2 && stack[stack.len() - 2] == p {
            stack.pop();
        } else {
            stack.push(p);
        }
    }
    stack
}

/// Reads a filling off a contraction in the combinatorial regime of
/// `complex`. Each triangle move contributes one factor.
pub fn decompose_filling(
    complex: &RipsComplex2<'_>,
    loop_points: &[usize],
    moves: &MoveSequence,
) -> Result<FillingDecomposition> {
    let invalid = |msg: String| Error::CertificateInvalid(msg);
    if moves.start != loop_points {
        return Err(invalid("move sequence does not start at the loop".into()));
    }
    if loop_points.is_empty() || loop_points.first() != loop_points.last() {
        return Err(invalid("not a loop".into()));
    }
    let regime = Regime::Combinatorial(complex);
    regime.check_path(loop_points).map_err(|e| invalid(e.to_string()))?;
    let mut path = loop_points.to_vec();
    let mut factors = Vec::new();
    for (k, mv) in moves.moves.iter().enumerate() {
        let before = path.clone();
        apply_move_in_place(&mut path, mv, &regime).map_err(|e| invalid(format!("move {k}: {e}")))?;
        match *mv {
            HomotopyMove::InsertPoint { index, point } => factors.push(FillingFactor {
                conjugator: before[..=index].to_vec(),
                triangle: [before[index], before[index + 1], point],
            }),
            HomotopyMove::DeletePoint { index } => factors.push(FillingFactor {
                conjugator: before[..index].to_vec(),
                triangle: [before[index - 1], before[index], before[index + 1]],
            }),
            HomotopyMove::InsertBacktrack { .. } | HomotopyMove::DeleteBacktrack { .. } => {}
        }
    }
    if path.len() != 1 || path[0] != loop_points[0] {
        return Err(invalid("moves do not end at the trivial loop".into()));
    }
    Ok(FillingDecomposition { scale: complex.scale(), basepoint: loop_points[0], factors })
}

/// True iff every factor is a conjugated 2-simplex of `complex` and the
/// free reduction of the product equals that of the loop.
pub fn verify_decomposition(
    complex: &RipsComplex2<'_>,
    loop_points: &[usize],
    decomposition: &FillingDecomposition,
) -> bool {
    let edge_path = |p: &[usize]| p.windows(2).all(|w| complex.is_edge(w[0], w[1]));
    let n = complex.vertex_count();
    if loop_points.is_empty()
        || loop_points.iter().any(|&p| p >= n)
        || loop_points.first() != loop_points.last()
        || loop_points[0] != decomposition.basepoint
        || decomposition.scale != complex.scale()
        || !edge_path(loop_points)
    {
        return false;
    }
    for f in &decomposition.factors {
        let [a, b, c] = f.triangle;
        if f.conjugator.first() != Some(&decomposition.basepoint)
            || f.conjugator.last() != Some(&a)
            || f.conjugator.iter().any(|&p| p >= n)
            || !edge_path(&f.conjugator)
            || [a, b, c].iter().any(|&p| p >= n)
            || !complex.is_triangle(a, b, c)
        {
            return false;
        }
    }
    free_reduce(&decomposition.word()) == free_reduce(loop_points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::search::{contract_loop, SearchBudget};
    use crate::rational::int;
    use crate::rips::build_rips2;
    use crate::spaces::circle_space;

    #[test]
    fn reduction() {
        assert_eq!(free_reduce(&[0, 1, 0]), vec![0]);
        assert_eq!(free_reduce(&[0, 1, 2, 1, 3, 1, 0]), vec![0]);
        assert_eq!(free_reduce(&[0, 1, 2, 1, 3, 0]), vec![0, 1, 3, 0]);
        assert_eq!(free_reduce(&[0, 1, 2, 0]), vec![0, 1, 2, 0]);
    }

    #[test]
    fn single_triangle() {
        let c = circle_space(int(6), 6).unwrap();
        let rips = build_rips2(c.space(), int(2)).unwrap();
        let tri = vec![0, 1, 2, 0];
        let seq = contract_loop(c.space(), &tri, int(2), SearchBudget::default()).unwrap();
        let seq = seq.moves().unwrap();
        let d = decompose_filling(&rips, &tri, seq).unwrap();
        assert_eq!(d.len(), seq.triangle_moves());
        assert!(verify_decomposition(&rips, &tri, &d));
        assert!(d.factors.iter().all(|f| f.conjugator.len() <= 2));
    }

    #[test]
    fn corrupted_conjugator_fails() {
        let c = circle_space(int(6), 6).unwrap();
        let rips = build_rips2(c.space(), int(2)).unwrap();
        let full = c.full_loop(1);
        let seq = contract_loop(c.space(), &full, int(2), SearchBudget::default()).unwrap();
        let mut d = decompose_filling(&rips, &full, seq.moves().unwrap()).unwrap();
        assert!(verify_decomposition(&rips, &full, &d));
        let f = d.factors.iter_mut().find(|f| f.conjugator.len() > 1).unwrap();
        let last = *f.conjugator.last().unwrap();
        f.conjugator.push((last + 1) % 6);
        f.conjugator.push(last);
        f.conjugator.push((last + 5) % 6);
        f.conjugator.push(last);
        assert!(verify_decomposition(&rips, &full, &d), "backtracks in a conjugator are harmless");
        let f = d.factors.iter_mut().find(|f| f.conjugator.len() > 1).unwrap();
        f.conjugator.truncate(1);
        f.conjugator.push(3);
        assert!(!verify_decomposition(&rips, &full, &d));
    }

    #[test]
    fn empty_decomposition_of_nontrivial_loop() {
        let c = circle_space(int(6), 6).unwrap();
        let rips = build_rips2(c.space(), int(2)).unwrap();
        let empty = FillingDecomposition { scale: int(2), basepoint: 0, factors: vec![] };
        assert!(!verify_decomposition(&rips, &[0, 1, 2, 0], &empty));
        assert!(verify_decomposition(&rips, &[0, 1, 0], &empty));
    }
}
