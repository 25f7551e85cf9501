use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spaces::{GroupWindow, Homomorphism};

/// One level `⟨⟨N ∩ B_n⟩⟩ ∩ W` of the filtration of a normal subgroup.
#[derive(Debug, Clone, Serialize)]
pub struct FiltrationLevel {
    pub n: usize,
    /// Nonidentity elements of `N` with word length at most `n`.
    pub seeds: usize,
    /// Size of the window closure, identity included.
    pub closure_size: usize,
    /// True when the closure is all of `N ∩ W`.
    pub exhausts: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiltrationReport {
    pub window_radius: usize,
    pub window_size: usize,
    /// `|N ∩ W|`, identity included.
    pub kernel_size: usize,
    pub levels: Vec<FiltrationLevel>,
    /// Least `n` whose closure exhausts `N ∩ W`.
    pub least_n: Option<usize>,
    /// Each level contains the previous one.
    pub monotone: bool,
    /// Labels of `N ∩ W` missing from the last level, if any.
    pub missing: Vec<String>,
}

/// Smallest subset of the window containing `seeds` and the identity and
/// closed under inverses, products and conjugation by window elements, as
/// far as the results stay in the window.
pub fn window_normal_closure(window: &GroupWindow, seeds: &[usize]) -> BTreeSet<usize> {
    let fam = window.family();
    let elems = window.elements();
    let mut set: BTreeSet<usize> = BTreeSet::from([window.basepoint()]);
    let mut queue: Vec<usize> = Vec::new();
    let add = |i: usize, set: &mut BTreeSet<usize>, queue: &mut Vec<usize>| {
        if set.insert(i) {
            queue.push(i);
        }
    };
    for &s in seeds {
        add(s, &mut set, &mut queue);
    }
    let inverses: Vec<_> = elems.iter().map(|g| fam.inverse(g)).collect();
    while let Some(c) = queue.pop() {
        let ce = &elems[c];
        let mut found = Vec::new();
        found.extend(window.index_of(&inverses[c]));
        for &d in set.iter() {
            found.extend(window.index_of(&fam.multiply(ce, &elems[d])));
            found.extend(window.index_of(&fam.multiply(&elems[d], ce)));
        }
        for (g, gi) in elems.iter().zip(&inverses) {
            found.extend(window.index_of(&fam.multiply(&fam.multiply(g, ce), gi)));
        }
        for f in found {
            add(f, &mut set, &mut queue);
        }
    }
    set
}

/// Tests `N = ⟨⟨N ∩ B_n⟩⟩` inside the window for `n = 1..=max_n`, with
/// `N` the kernel of `phi`.
///
/// Closures are computed inside the window only, so each level is an
/// under-approximation of the true normal closure intersected with the
/// window; `least_n` is an upper bound for the true least `n`.
pub fn filtration_probe(window: &GroupWindow, phi: &Homomorphism, max_n: usize) -> Result<FiltrationReport> {
    if phi.source != *window.family() {
        return Err(Error::invalid("the homomorphism must be defined on the window's group"));
    }
    if max_n == 0 {
        return Err(Error::invalid("filtration levels start at n = 1"));
    }
    let kernel: BTreeSet<usize> = (0..window.len()).filter(|&i| phi.in_kernel(window.element(i))).collect();
    let mut levels = Vec::new();
    let mut least_n = None;
    let mut monotone = true;
    let mut previous: Option<BTreeSet<usize>> = None;
    for n in 1..=max_n {
        let seeds: Vec<usize> = kernel
            .iter()
            .copied()
            .filter(|&i| i != window.basepoint() && window.word_length(i) as usize <= n)
            .collect();
        let closure = window_normal_closure(window, &seeds);
        let exhausts = closure == kernel;
        if exhausts && least_n.is_none() {
            least_n = Some(n);
        }
        if let Some(prev) = &previous {
            monotone &= prev.is_subset(&closure);
        }
        levels.push(FiltrationLevel { n, seeds: seeds.len(), closure_size: closure.len(), exhausts });
        previous = Some(closure);
    }
    let last = previous.expect("max_n ≥ 1");
    let missing = kernel.difference(&last).map(|&i| window.space().label(i).to_string()).collect();
    Ok(FiltrationReport {
        window_radius: window.radius(),
        window_size: window.len(),
        kernel_size: kernel.len(),
        levels,
        least_n,
        monotone,
        missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::ResourceCaps;
    use crate::spaces::{build_window, Elem, GeneratingSet, GroupFamily};

    fn window(fam: &GroupFamily, radius: usize) -> GroupWindow {
        build_window(fam, &GeneratingSet::standard(fam), radius, &ResourceCaps::default()).unwrap()
    }

    #[test]
    fn second_axis_of_z2() {
        let z2 = GroupFamily::FreeAbelian { rank: 2 };
        let z = GroupFamily::line();
        let phi = Homomorphism::new(z2.clone(), z, vec![Elem::scalar(1), Elem::scalar(0)]).unwrap();
        let rep = filtration_probe(&window(&z2, 4), &phi, 4).unwrap();
        assert_eq!(rep.kernel_size, 9);
        assert_eq!(rep.least_n, Some(1));
        assert!(rep.monotone);
    }

    #[test]
    fn heisenberg_center_needs_commutators() {
        let h = GroupFamily::HeisenbergZ;
        let z2 = GroupFamily::FreeAbelian { rank: 2 };
        let phi = Homomorphism::new(
            h.clone(),
            z2,
            vec![Elem::new([1, 0]), Elem::new([0, 1]), Elem::new([0, 0])],
        )
        .unwrap();
        let rep = filtration_probe(&window(&h, 6), &phi, 6).unwrap();
        assert_eq!(rep.least_n, Some(4));
        assert!(rep.levels[..3].iter().all(|l| l.closure_size == 1));
        assert!(rep.monotone && rep.missing.is_empty());
    }

    #[test]
    fn free_group_normal_closure_of_a() {
        let f2 = GroupFamily::Free { rank: 2 };
        let z = GroupFamily::line();
        let phi = Homomorphism::new(f2.clone(), z, vec![Elem::scalar(0), Elem::scalar(1)]).unwrap();
        let rep = filtration_probe(&window(&f2, 5), &phi, 3).unwrap();
        assert_eq!(rep.least_n, Some(1), "{:?}", rep.missing);
    }
}
