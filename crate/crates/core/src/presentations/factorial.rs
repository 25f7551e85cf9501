use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{hermite_normal_form, in_lattice, kernel_basis, l1_sphere};

/// Relations among `1!, …, m!` in the integers, and whether short ones
/// (ℓ1-length at most `ℓ`) generate all of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeObstruction {
    pub m: usize,
    pub ell: usize,
    /// Hermite basis of the full relation lattice.
    pub relation_basis: Vec<Vec<i64>>,
    /// Hermite basis of the sublattice spanned by relations of length ≤ ℓ.
    pub short_basis: Vec<Vec<i64>>,
    /// A relation outside the short sublattice, if any.
    pub witness: Option<Vec<i64>>,
}

fn factorials(m: usize) -> Vec<i128> {
    (1..=m as i128).scan(1i128, |acc, k| {
        *acc *= k;
        Some(*acc)
    }).collect()
}

fn dot(a: &[i128], b: &[i128]) -> i128 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn short_relations(facts: &[i128], ell: usize) -> Vec<Vec<i128>> {
    (1..=ell as u32).flat_map(|k| l1_sphere(facts.len(), k)).filter(|v| dot(v, facts) == 0).collect()
}

fn to_i64(rows: &[Vec<i128>]) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect()
}

/// Computes the relation lattice of `(1!, …, m!)`, its short sublattice and,
/// when they differ, the shortest relation outside the sublattice (first in
/// enumeration order among equal lengths).
pub fn factorial_certificate(m: usize, ell: usize) -> Result<LatticeObstruction> {
    if !(2..=12).contains(&m) || !(2..=12).contains(&ell) {
        return Err(Error::invalid("factorial certificates need 2 ≤ m ≤ 12 and 2 ≤ ℓ ≤ 12"));
    }
    let facts = factorials(m);
    let full = kernel_basis(&facts);
    let short = hermite_normal_form(&short_relations(&facts, ell));
    let mut witness = None;
    if full.len() != short.len() || full.iter().any(|v| !in_lattice(&short, v)) {
        let longest = full.iter().map(|v| v.iter().map(|x| x.unsigned_abs()).sum::<u128>()).max().unwrap_or(0);
        // Enumerate up to a modest radius before falling back to a basis vector.
        let limit = (longest as u32).min(ell as u32 + 4);
        witness = (ell as u32 + 1..=limit)
            .flat_map(|k| l1_sphere(m, k))
            .find(|v| dot(v, &facts) == 0 && !in_lattice(&short, v))
            .or_else(|| full.iter().find(|v| !in_lattice(&short, v)).cloned())
            .map(|v| v.iter().map(|&x| x as i64).collect());
    }
    Ok(LatticeObstruction { m, ell, relation_basis: to_i64(&full), short_basis: to_i64(&short), witness })
}

impl LatticeObstruction {
    pub fn has_obstruction(&self) -> bool {
        self.witness.is_some()
    }

    /// Recomputes the short sublattice and checks the witness is a relation
    /// outside it (or, without a witness, that the sublattice is everything).
    pub fn verify(&self) -> bool {
        let Ok(again) = factorial_certificate(self.m, self.ell) else {
            return false;
        };
        let facts = factorials(self.m);
        let short = hermite_normal_form(&short_relations(&facts, self.ell));
        match &self.witness {
            Some(w) => {
                let w: Vec<i128> = w.iter().map(|&x| x as i128).collect();
                w.len() == self.m && dot(&w, &facts) == 0 && !in_lattice(&short, &w)
            }
            None => again.witness.is_none() && again.relation_basis == self.relation_basis,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert!(!factorial_certificate(3, 4).unwrap().has_obstruction());
        assert!(!factorial_certificate(2, 3).unwrap().has_obstruction());
        let c = factorial_certificate(4, 4).unwrap();
        let w = c.witness.clone().unwrap();
        assert_ne!(w[3], 0);
        assert_eq!(w.iter().map(|x| x.abs()).sum::<i64>(), 5);
        assert!(c.verify());
        for ell in 3..=5 {
            let c = factorial_certificate(ell, ell).unwrap();
            assert!(c.has_obstruction() && c.verify(), "ℓ = {ell}");
        }
    }

    #[test]
    fn tampered_witness_fails() {
        let mut c = factorial_certificate(4, 4).unwrap();
        c.witness = Some(vec![2, -1, 0, 0]);
        assert!(!c.verify());
        c.witness = Some(vec![1, 0, 0, 0]);
        assert!(!c.verify());
    }
}
