use serde::{Deserialize, Serialize};

use super::family::{Elem, GroupFamily};
use crate::error::{Error, Result};

/// A generating set, stored in canonical order without the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratingSet {
    elements: Vec<Elem>,
    symmetrized: bool,
}

impl GeneratingSet {
    pub fn new(family: &GroupFamily, elements: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let mut out = Vec::new();
        for g in elements {
            let g = family.normalize(&g)?;
            if family.is_identity(&g) {
                return Err(Error::invalid("generating sets exclude the identity"));
            }
            out.push(g);
        }
        if out.is_empty() {
            return Err(Error::invalid("generating set is empty"));
        }
        out.sort();
        out.dedup();
        let symmetrized = out.iter().all(|g| out.binary_search(&family.inverse(g)).is_ok());
        Ok(GeneratingSet { elements: out, symmetrized })
    }

    /// `S ∪ S⁻¹`.
    pub fn symmetrize(&self, family: &GroupFamily) -> Self {
        let mut all = self.elements.clone();
        all.extend(self.elements.iter().map(|g| family.inverse(g)));
        all.sort();
        all.dedup();
        GeneratingSet { elements: all, symmetrized: true }
    }

    pub fn standard(family: &GroupFamily) -> Self {
        GeneratingSet::new(family, family.standard_generators())
            .expect("standard generators are valid")
            .symmetrize(family)
    }

    /// `{±k}` in the integers for each given `k`.
    pub fn line(steps: &[i64]) -> Result<Self> {
        let line = GroupFamily::line();
        Ok(GeneratingSet::new(&line, steps.iter().map(|&s| Elem::scalar(s)))?.symmetrize(&line))
    }

    /// `{±1!, ±2!, …, ±m!}` in the integers.
    pub fn factorial(m: u32) -> Result<Self> {
        if m == 0 || m > 20 {
            return Err(Error::invalid("factorial generating sets need 1 ≤ m ≤ 20"));
        }
        let facts: Vec<i64> = (1..=m as i64).scan(1i64, |acc, k| {
            *acc *= k;
            Some(*acc)
        }).collect();
        GeneratingSet::line(&facts)
    }

    /// All products of at most `n` elements, identity removed.
    pub fn power(&self, family: &GroupFamily, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("power generating sets need n ≥ 1"));
        }
        let mut layer: Vec<Elem> = self.elements.clone();
        let mut all: Vec<Elem> = self.elements.clone();
        for _ in 1..n {
            let mut next: Vec<Elem> =
                layer.iter().flat_map(|a| self.elements.iter().map(move |s| family.multiply(a, s))).collect();
            next.sort();
            next.dedup();
            all.extend(next.iter().cloned());
            layer = next;
        }
        all.retain(|g| !family.is_identity(g));
        all.sort();
        all.dedup();
        let symmetrized = all.iter().all(|g| all.binary_search(&family.inverse(g)).is_ok());
        Ok(GeneratingSet { elements: all, symmetrized })
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_symmetrized(&self) -> bool {
        self.symmetrized
    }

    pub fn position(&self, g: &Elem) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }

    pub fn contains(&self, g: &Elem) -> bool {
        self.position(g).is_some()
    }

    /// Evaluates a word given as indices into this set.
    pub fn evaluate(&self, family: &GroupFamily, word: &[usize]) -> Elem {
        family.product(word.iter().map(|&i| &self.elements[i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_sets() {
        let line = GroupFamily::line();
        let s = GeneratingSet::line(&[1]).unwrap();
        let s2 = s.power(&line, 2).unwrap();
        let values: Vec<i64> = s2.elements().iter().map(|e| e.0[0]).collect();
        assert_eq!(values, vec![-2, -1, 1, 2]);
        assert_eq!(s.power(&line, 1).unwrap(), s);

        // Enumeration oracle: nonzero vectors of ℓ1 norm ≤ 2 in Z².
        let z2 = GroupFamily::FreeAbelian { rank: 2 };
        let std = GeneratingSet::standard(&z2);
        let expected = (-2i64..=2)
            .flat_map(|x| (-2i64..=2).map(move |y| (x, y)))
            .filter(|(x, y)| (1..=2).contains(&(x.abs() + y.abs())))
            .count();
        assert_eq!(std.power(&z2, 2).unwrap().len(), expected);
        assert_eq!(expected, 12);
    }

    #[test]
    fn factorial_set() {
        let s = GeneratingSet::factorial(3).unwrap();
        let values: Vec<i64> = s.elements().iter().map(|e| e.0[0]).collect();
        assert_eq!(values, vec![-6, -2, -1, 1, 2, 6]);
        assert!(s.is_symmetrized());
    }

    #[test]
    fn identity_is_rejected() {
        let line = GroupFamily::line();
        assert!(GeneratingSet::new(&line, [Elem::scalar(0)]).is_err());
        let half = GeneratingSet::new(&line, [Elem::scalar(1)]).unwrap();
        assert!(!half.is_symmetrized());
        assert!(half.symmetrize(&line).is_symmetrized());
    }
}
