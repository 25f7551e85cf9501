use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::word::{inverse_word, Evaluation, Letter, Presentation, Word};
use crate::error::{Error, Result};
use crate::spaces::{Elem, GeneratingSet, GroupFamily, GroupWindow};

/// Presentation on the symbols of `S` with relators `g h k⁻¹` for every
/// `g, h, k ∈ S` with `gh = k`, plus `g h` whenever `gh = 1`.
///
/// The second family identifies the symbol of `s⁻¹` with the inverse of the
/// symbol of `s`, so the relators are exactly the 2-cells of the Cayley
/// complex `R_1`.
pub fn triangle_presentation(family: &GroupFamily, gens: &GeneratingSet) -> Result<Presentation> {
    let elems = gens.elements();
    let names: Vec<String> = elems.iter().map(|g| family.format_element(g)).collect();
    let mut relators = Vec::new();
    for (i, g) in elems.iter().enumerate() {
        for (j, h) in elems.iter().enumerate() {
            let gh = family.multiply(g, h);
            if family.is_identity(&gh) {
                relators.push(vec![Letter::pos(i), Letter::pos(j)]);
            } else if let Some(k) = gens.position(&gh) {
                relators.push(vec![Letter::pos(i), Letter::pos(j), Letter::neg(k)]);
            }
        }
    }
    let ev = Evaluation { family: family.clone(), images: elems.to_vec() };
    Presentation::new(names, relators, Some(ev))?.with_bound(3)
}

/// `S^n`: all nonidentity products of at most `n` elements of `S`.
pub fn power_generating_set(family: &GroupFamily, gens: &GeneratingSet, n: usize) -> Result<GeneratingSet> {
    gens.power(family, n)
}

/// Adds one relator per normal generator (each a word of length at most
/// `n`). The optional evaluation describes the quotient group.
pub fn quotient_relators(
    pres: &Presentation,
    normal_generators: &[Word],
    n: usize,
    quotient: Option<Evaluation>,
) -> Result<Presentation> {
    if let Some(w) = normal_generators.iter().find(|w| w.len() > n) {
        return Err(Error::invalid(format!("normal generator {} is not in S^{n}", pres.format_word(w))));
    }
    let mut relators = pres.relators.clone();
    relators.extend(normal_generators.iter().cloned());
    let evaluation = if normal_generators.is_empty() && quotient.is_none() { pres.evaluation.clone() } else { quotient };
    let p = Presentation { generators: pres.generators.clone(), relators, bound: pres.bound.max(n), evaluation };
    p.validate()?;
    Ok(p)
}

/// Data for presenting `G` as an extension `1 → N → G → Q → 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionData {
    pub family: GroupFamily,
    /// Presentation of `Q` on symbols `W`.
    pub quotient: Presentation,
    /// Presentation of `N` on symbols `T`.
    pub kernel: Presentation,
    /// Element of `G` for each symbol of `T`.
    pub kernel_images: Vec<Elem>,
    /// Lift `W'` in `G` for each symbol of `W`.
    pub lifts: Vec<Elem>,
    /// Kernel elements written as words in `T`.
    pub expressions: Vec<(Elem, Word)>,
}

impl ExtensionData {
    fn expression(&self, g: &Elem) -> Result<Word> {
        if self.family.is_identity(g) {
            return Ok(Vec::new());
        }
        self.expressions.iter().find(|(e, _)| e == g).map(|(_, w)| w.clone()).ok_or_else(|| {
            Error::IncompleteData(format!("no expression in T for {}", self.family.format_element(g)))
        })
    }
}

/// Relators (i) lifted quotient relators corrected by kernel words,
/// (ii) `w u w⁻¹ = v` for `w ∈ W' ∪ W'⁻¹`, `u ∈ T`, and (iii) the kernel
/// relators. Generators are `T` followed by `W'`.
pub fn extension_relators(data: &ExtensionData) -> Result<Presentation> {
    let fam = &data.family;
    let nt = data.kernel.generators.len();
    if data.kernel_images.len() != nt || data.lifts.len() != data.quotient.generators.len() {
        return Err(Error::invalid("lift and kernel tables must cover every generator"));
    }
    for (e, w) in &data.expressions {
        let images = Evaluation { family: fam.clone(), images: data.kernel_images.clone() };
        if w.iter().any(|l| l.generator >= nt) || images.evaluate(w) != fam.normalize(e)? {
            return Err(Error::invalid(format!("expression for {} is wrong", fam.format_element(e))));
        }
    }
    let mut generators = data.kernel.generators.clone();
    generators.extend(data.quotient.generators.iter().cloned());
    let mut images = data.kernel_images.clone();
    images.extend(data.lifts.iter().cloned());
    let ev = Evaluation { family: fam.clone(), images };
    let lift_word = |w: &Word| -> Word { w.iter().map(|l| Letter { generator: l.generator + nt, ..*l }).collect() };

    let mut relators = Vec::new();
    for r in &data.quotient.relators {
        let lifted = lift_word(r);
        let value = ev.evaluate(&lifted);
        let mut rel = lifted;
        rel.extend(inverse_word(&data.expression(&value)?));
        relators.push(rel);
    }
    for w in 0..data.lifts.len() {
        for wl in [Letter::pos(w + nt), Letter::neg(w + nt)] {
            for u in 0..nt {
                let conj = vec![wl, Letter::pos(u), wl.inv()];
                let v = ev.evaluate(&conj);
                let mut rel = conj;
                rel.extend(inverse_word(&data.expression(&v)?));
                relators.push(rel);
            }
        }
    }
    relators.extend(data.kernel.relators.iter().cloned());
    Presentation::new(generators, relators, Some(ev))
}

/// Outcome of checking a presentation against a finite group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteVerification {
    pub order: usize,
    pub relators_hold: bool,
    pub generates: bool,
    /// Every edge of the Cayley complex was shown null-homotopic by
    /// relator cells, so no further relations are needed.
    pub complete: bool,
}

impl FiniteVerification {
    pub fn presents(&self) -> bool {
        self.relators_hold && self.generates && self.complete
    }
}

/// Checks that a presentation evaluated into a finite family presents it:
/// the relators hold, the images generate, and the Cayley 2-complex of the
/// presentation is simply connected (proved by edge deduction from a
/// spanning tree).
pub fn verify_finite_presentation(pres: &Presentation) -> Result<FiniteVerification> {
    let ev = pres.evaluation.as_ref().ok_or_else(|| Error::invalid("presentation has no evaluation map"))?;
    let elems = ev.family.elements().ok_or_else(|| Error::invalid("evaluation family is infinite"))?;
    let index: HashMap<&Elem, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let n = elems.len();
    let k = pres.generators.len();
    let fwd: Vec<Vec<usize>> = (0..n)
        .map(|g| (0..k).map(|a| index[&ev.family.multiply(&elems[g], &ev.images[a])]).collect())
        .collect();
    let mut back = vec![vec![0usize; k]; n];
    for g in 0..n {
        for a in 0..k {
            back[fwd[g][a]][a] = g;
        }
    }
    let relators_hold = pres.relators.iter().all(|r| ev.family.is_identity(&ev.evaluate(r)));

    let id = index[&ev.family.identity()];
    let mut known = vec![vec![false; k]; n];
    let mut seen = vec![false; n];
    seen[id] = true;
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for a in 0..k {
            for (h, edge) in [(fwd[g][a], (g, a)), (back[g][a], (back[g][a], a))] {
                if !seen[h] {
                    seen[h] = true;
                    known[edge.0][edge.1] = true;
                    queue.push_back(h);
                }
            }
        }
    }
    let generates = seen.iter().all(|&s| s);

    let edges_of = |start: usize, r: &Word| -> Vec<(usize, usize)> {
        let mut g = start;
        r.iter()
            .map(|l| {
                if l.inverse {
                    let h = back[g][l.generator];
                    let e = (h, l.generator);
                    g = h;
                    e
                } else {
                    let e = (g, l.generator);
                    g = fwd[g][l.generator];
                    e
                }
            })
            .collect()
    };
    loop {
        let mut progress = false;
        for start in 0..n {
            for r in &pres.relators {
                let edges = edges_of(start, r);
                let mut unknown = edges.iter().filter(|&&(g, a)| !known[g][a]);
                // A cell crossing exactly one unknown edge, once, kills it.
                if let (Some(&(g, a)), None) = (unknown.next(), unknown.next()) {
                    known[g][a] = true;
                    progress = true;
                }
            }
        }
        if !progress {
            break;
        }
    }
    let complete = known.iter().all(|row| row.iter().all(|&b| b));
    Ok(FiniteVerification { order: n, relators_hold, generates, complete })
}

/// Evaluates every relator from the identity of `window`, requiring all
/// prefixes to stay inside it. Returns the first failing relator.
pub fn relators_hold_in_window(pres: &Presentation, window: &GroupWindow) -> Result<()> {
    let ev = pres.evaluation.as_ref().ok_or_else(|| Error::invalid("presentation has no evaluation map"))?;
    if &ev.family != window.family() {
        return Err(Error::invalid("window and evaluation use different families"));
    }
    for r in &pres.relators {
        let mut g = ev.family.identity();
        for l in r {
            g = ev.family.multiply(&g, &ev.evaluate(&[*l]));
            if window.index_of(&g).is_none() {
                return Err(Error::invalid(format!("relator {} leaves the window", pres.format_word(r))));
            }
        }
        if !ev.family.is_identity(&g) {
            return Err(Error::invalid(format!("relator {} is not the identity", pres.format_word(r))));
        }
    }
    Ok(())
}
