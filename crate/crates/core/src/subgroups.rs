//! Generators of finite-index subgroups from coset data, and rewriting of
//! subgroup elements in them.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{Elem, GeneratingSet, GroupFamily, Homomorphism};

/// A finite-index subgroup `H = ker φ` with a right transversal `K`.
///
/// Cosets are right cosets `Hk`; `Hg = Hk` exactly when `φ(g) = φ(k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosetData {
    pub homomorphism: Homomorphism,
    /// Coset representatives, identity first.
    pub transversal: Vec<Elem>,
    pub generators: GeneratingSet,
    /// `action[k][s]` is the representative of `H k s`.
    pub action: Vec<Vec<usize>>,
}

impl CosetData {
    pub fn new(homomorphism: Homomorphism, transversal: Vec<Elem>, generators: GeneratingSet) -> Result<Self> {
        let g = &homomorphism.source;
        if homomorphism.target.order().is_none() {
            return Err(Error::invalid("subgroups are given as kernels of maps onto finite groups"));
        }
        if !generators.is_symmetrized() {
            return Err(Error::invalid("the generating set must be symmetrized"));
        }
        let transversal = transversal.iter().map(|k| g.normalize(k)).collect::<Result<Vec<_>>>()?;
        if transversal.first().is_none_or(|k| !g.is_identity(k)) {
            return Err(Error::invalid("the transversal must start with the identity"));
        }
        let mut by_image = HashMap::new();
        for (i, k) in transversal.iter().enumerate() {
            if by_image.insert(homomorphism.apply(k), i).is_some() {
                return Err(Error::invalid(format!("{} repeats a coset", g.format_element(k))));
            }
        }
        // The transversal must cover the image of φ, which S generates.
        let tgt = &homomorphism.target;
        let steps: Vec<Elem> = generators.elements().iter().map(|s| homomorphism.apply(s)).collect();
        let mut seen = HashSet::from([tgt.identity()]);
        let mut queue = VecDeque::from([tgt.identity()]);
        while let Some(x) = queue.pop_front() {
            for s in &steps {
                let y = tgt.multiply(&x, s);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        if let Some(missing) = seen.iter().find(|x| !by_image.contains_key(*x)) {
            return Err(Error::invalid(format!("no representative for the coset over {}", tgt.format_element(missing))));
        }
        if by_image.len() != seen.len() {
            return Err(Error::invalid("a representative lies outside the image of the generators"));
        }
        let action = transversal
            .iter()
            .map(|k| {
                generators
                    .elements()
                    .iter()
                    .map(|s| by_image[&homomorphism.apply(&g.multiply(k, s))])
                    .collect()
            })
            .collect();
        Ok(CosetData { homomorphism, transversal, generators, action })
    }

    pub fn family(&self) -> &GroupFamily {
        &self.homomorphism.source
    }

    pub fn index(&self) -> usize {
        self.transversal.len()
    }

    pub fn contains(&self, g: &Elem) -> bool {
        self.homomorphism.in_kernel(g)
    }

    /// Index of the representative of `Hg`.
    pub fn representative(&self, g: &Elem) -> usize {
        let img = self.homomorphism.apply(g);
        self.transversal
            .iter()
            .position(|k| self.homomorphism.apply(k) == img)
            .expect("transversal covers every coset")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MsGenerator {
    pub element: Elem,
    pub label: String,
    /// `(k_1, s, k_2)` as indices into the transversal and `S`, with
    /// `element = k_1 s k_2⁻¹`.
    pub witness: (usize, usize, usize),
}

/// `T = K S K⁻¹ ∩ H` without the identity, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MsGenerators {
    pub generators: Vec<MsGenerator>,
}

impl MsGenerators {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn position(&self, g: &Elem) -> Option<usize> {
        self.generators.binary_search_by(|t| t.element.cmp(g)).ok()
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.generators.iter().map(|t| t.element.clone()).collect()
    }

    /// One representative per `{t, t⁻¹}` pair (the canonically smaller).
    pub fn up_to_inversion(&self, family: &GroupFamily) -> Vec<Elem> {
        let mut out: Vec<Elem> = self
            .generators
            .iter()
            .map(|t| {
                let inv = family.inverse(&t.element);
                t.element.clone().min(inv)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Checks every witness and membership in `H`.
    pub fn verify(&self, data: &CosetData) -> bool {
        let g = data.family();
        let s = data.generators.elements();
        self.generators.windows(2).all(|w| w[0].element < w[1].element)
            && self.generators.iter().all(|t| {
                let (k1, si, k2) = t.witness;
                k1 < data.index()
                    && k2 < data.index()
                    && si < s.len()
                    && !g.is_identity(&t.element)
                    && data.contains(&t.element)
                    && g.product([&data.transversal[k1], &s[si], &g.inverse(&data.transversal[k2])]) == t.element
            })
    }
}

/// All nonidentity products `k_1 s k_2⁻¹` lying in `H`.
pub fn ms_generators(data: &CosetData) -> MsGenerators {
    let g = data.family();
    let s = data.generators.elements();
    let mut found: Vec<MsGenerator> = Vec::new();
    for (k1, row) in data.action.iter().enumerate() {
        for (si, &k2) in row.iter().enumerate() {
            let t = g.product([&data.transversal[k1], &s[si], &g.inverse(&data.transversal[k2])]);
            if !g.is_identity(&t) {
                found.push(MsGenerator { label: g.format_element(&t), element: t, witness: (k1, si, k2) });
            }
        }
    }
    // Stable sort keeps the first witness in (k_1, s) order.
    found.sort_by(|a, b| a.element.cmp(&b.element));
    found.dedup_by(|a, b| a.element == b.element);
    MsGenerators { generators: found }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rewrite {
    /// Indices into `T`; identity factors are dropped.
    pub factors: Vec<usize>,
    pub labels: Vec<String>,
    /// Transversal indices `k_0, …, k_n`.
    pub cosets: Vec<usize>,
}

impl Rewrite {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Writes `g = s_1 ⋯ s_n ∈ H` as `∏ k_{i−1} s_i k_i⁻¹` with `k_0 = k_n = 1`.
pub fn ms_rewrite(data: &CosetData, t: &MsGenerators, word: &[usize]) -> Result<Rewrite> {
    let g = data.family();
    let s = data.generators.elements();
    if let Some(&bad) = word.iter().find(|&&i| i >= s.len()) {
        return Err(Error::invalid(format!("letter {bad} is not a generator")));
    }
    let value = data.generators.evaluate(g, word);
    if !data.contains(&value) {
        return Err(Error::invalid(format!("{} is not in the subgroup", g.format_element(&value))));
    }
    let mut cosets = vec![0usize];
    let mut factors = Vec::new();
    for &si in word {
        let k = *cosets.last().expect("nonempty");
        let next = data.action[k][si];
        cosets.push(next);
        let f = g.product([&data.transversal[k], &s[si], &g.inverse(&data.transversal[next])]);
        if !g.is_identity(&f) {
            let idx = t
                .position(&f)
                .ok_or_else(|| Error::invalid(format!("{} is missing from T", g.format_element(&f))))?;
            factors.push(idx);
        }
    }
    debug_assert_eq!(cosets.last(), Some(&0));
    let labels = factors.iter().map(|&i| t.generators[i].label.clone()).collect();
    Ok(Rewrite { factors, labels, cosets })
}

/// Checks that the factors multiply to the value of `word` and that the
/// rewrite is no longer than the word.
pub fn verify_rewrite(data: &CosetData, t: &MsGenerators, word: &[usize], rewrite: &Rewrite) -> bool {
    let g = data.family();
    if rewrite.factors.len() > word.len() || rewrite.factors.iter().any(|&i| i >= t.len()) {
        return false;
    }
    let value = data.generators.evaluate(g, word);
    g.product(rewrite.factors.iter().map(|&i| &t.generators[i].element)) == value
}

/// Elements of `H` reachable from the identity by at most `radius`
/// letters of `T`.
pub fn t_ball(family: &GroupFamily, t: &MsGenerators, radius: usize) -> HashSet<Elem> {
    let mut seen = HashSet::from([family.identity()]);
    let mut layer = vec![family.identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &layer {
            for gen in &t.generators {
                for y in [family.multiply(x, &gen.element), family.multiply(x, &family.inverse(&gen.element))] {
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
        }
        layer = next;
    }
    seen
}
