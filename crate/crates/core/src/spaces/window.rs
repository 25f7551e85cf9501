use std::collections::{HashMap, VecDeque};

use super::family::{Elem, GroupFamily};
use super::generators::GeneratingSet;
use super::metric::{CircleChart, FiniteMetricSpace};
use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Breadth-first ball `{g : |g|_S ≤ radius}` with word lengths.
///
/// Elements come back in BFS order; `cap` bounds the ball size.
pub fn word_ball(
    family: &GroupFamily,
    gens: &GeneratingSet,
    radius: usize,
    cap: usize,
) -> Result<(Vec<Elem>, HashMap<Elem, u32>)> {
    let id = family.identity();
    let mut lengths = HashMap::new();
    lengths.insert(id.clone(), 0u32);
    let mut order = vec![id.clone()];
    let mut frontier = vec![id];
    for step in 1..=radius {
        let mut next = Vec::new();
        for g in &frontier {
            for s in gens.elements() {
                let h = family.multiply(g, s);
                if !lengths.contains_key(&h) {
                    lengths.insert(h.clone(), step as u32);
                    next.push(h);
                    if lengths.len() > cap {
                        return Err(Error::ResourceCap { cap: "max_ball_size", limit: cap });
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        order.extend(next.iter().cloned());
        frontier = next;
    }
    Ok((order, lengths))
}

/// Word lengths of all `targets`, growing the ball until every target is
/// reached. Fails with a resource error if the cap is hit first.
pub fn word_lengths_of(
    family: &GroupFamily,
    gens: &GeneratingSet,
    targets: &[Elem],
    cap: usize,
) -> Result<HashMap<Elem, u32>> {
    let id = family.identity();
    let mut lengths = HashMap::new();
    lengths.insert(id.clone(), 0u32);
    let mut missing: std::collections::HashSet<&Elem> = targets.iter().filter(|t| **t != id).collect();
    let mut frontier = vec![id];
    let mut step = 0u32;
    while !missing.is_empty() {
        step += 1;
        let mut next = Vec::new();
        for g in &frontier {
            for s in gens.elements() {
                let h = family.multiply(g, s);
                if !lengths.contains_key(&h) {
                    missing.remove(&h);
                    lengths.insert(h.clone(), step);
                    next.push(h);
                    if lengths.len() > cap {
                        return Err(Error::ResourceCap { cap: "max_ball_size", limit: cap });
                    }
                }
            }
        }
        if next.is_empty() {
            return Err(Error::invalid("targets are not in the subgroup generated by S"));
        }
        frontier = next;
    }
    Ok(lengths)
}

/// The radius-L ball of a group with its word metric.
#[derive(Debug, Clone)]
pub struct GroupWindow {
    family: GroupFamily,
    generators: GeneratingSet,
    radius: usize,
    elements: Vec<Elem>,
    index: HashMap<Elem, usize>,
    word_length: Vec<u32>,
    space: FiniteMetricSpace,
    window_internal: bool,
    lengths: Option<HashMap<Elem, u32>>,
}

/// Enumerates the radius-`radius` ball of `family` under `gens`.
///
/// Distances are exact word distances `|g⁻¹h|_S` whenever the ball of
/// radius `2·radius` fits under the cap (every such difference lies in
/// it). Otherwise they are shortest paths inside the window, and the
/// window is flagged `window_internal`.
pub fn build_window(
    family: &GroupFamily,
    gens: &GeneratingSet,
    radius: usize,
    caps: &ResourceCaps,
) -> Result<GroupWindow> {
    family.validate()?;
    if !gens.is_symmetrized() {
        return Err(Error::invalid("window generating sets must be symmetrized"));
    }
    for g in gens.elements() {
        family.check_element(g)?;
    }
    let (ball, ball_lengths) = word_ball(family, gens, radius, caps.max_ball_size)?;
    let mut elements = ball;
    elements.sort();
    let index: HashMap<Elem, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let word_length: Vec<u32> = elements.iter().map(|e| ball_lengths[e]).collect();
    let n = elements.len();
    let labels: Vec<String> = elements.iter().map(|e| family.format_element(e)).collect();
    let basepoint = index[&family.identity()];

    let exact = word_ball(family, gens, 2 * radius, caps.max_ball_size).ok();
    let (dist, window_internal, lengths) = match exact {
        Some((_, lengths)) => {
            let inverses: Vec<Elem> = elements.iter().map(|e| family.inverse(e)).collect();
            let mut dist = vec![0u64; n * n];
            for i in 0..n {
                for j in i + 1..n {
                    let diff = family.multiply(&inverses[i], &elements[j]);
                    let d = lengths[&diff] as u64;
                    dist[i * n + j] = d;
                    dist[j * n + i] = d;
                }
            }
            (dist, false, Some(lengths))
        }
        None => {
            let adjacency: Vec<Vec<usize>> = elements
                .iter()
                .map(|g| {
                    gens.elements()
                        .iter()
                        .filter_map(|s| index.get(&family.multiply(g, s)).copied())
                        .collect()
                })
                .collect();
            let mut dist = vec![u64::MAX; n * n];
            for src in 0..n {
                let row = &mut dist[src * n..(src + 1) * n];
                row[src] = 0;
                let mut queue = VecDeque::from([src]);
                while let Some(u) = queue.pop_front() {
                    for &v in &adjacency[u] {
                        if row[v] == u64::MAX {
                            row[v] = row[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
            }
            (dist, true, None)
        }
    };
    let mut space = FiniteMetricSpace::from_integer_table(labels, dist, basepoint);
    if let GroupFamily::Cyclic { modulus } | GroupFamily::CyclicQuotientOfLine { modulus } = *family {
        // Residues give a circle chart whenever no generator jumps further
        // than its arc.
        let chart = CircleChart {
            name: "residue".into(),
            circumference: Rational::from_integer(modulus as i64),
            positions: modulus as usize,
            map: elements.iter().map(|e| e.0[0] as usize).collect(),
        };
        if modulus >= 3 && chart.verify(&space).is_ok() {
            space = space.with_chart(chart)?;
        }
    }
    Ok(GroupWindow {
        family: family.clone(),
        generators: gens.clone(),
        radius,
        space,
        elements,
        index,
        word_length,
        window_internal,
        lengths,
    })
}

impl GroupWindow {
    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    pub fn generators(&self) -> &GeneratingSet {
        &self.generators
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Elem {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &Elem) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// `|g|_S` of the `i`-th window element.
    pub fn word_length(&self, i: usize) -> u32 {
        self.word_length[i]
    }

    /// `|g|_S` for any `g` with `|g|_S ≤ 2·radius`, when distances are exact.
    pub fn word_length_of(&self, g: &Elem) -> Option<u32> {
        self.lengths.as_ref().and_then(|l| l.get(g).copied())
    }

    /// True when distances are window-internal shortest paths rather than
    /// word distances in the whole group.
    pub fn window_internal(&self) -> bool {
        self.window_internal
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn into_space(self) -> FiniteMetricSpace {
        self.space
    }

    pub fn basepoint(&self) -> usize {
        self.space.basepoint()
    }

    /// Point reached from `start` by right-multiplying the given generators.
    pub fn walk(&self, start: usize, word: &[usize]) -> Option<Vec<usize>> {
        let mut path = vec![start];
        let mut g = self.elements[start].clone();
        for &s in word {
            g = self.family.multiply(&g, &self.generators.elements()[s]);
            path.push(self.index_of(&g)?);
        }
        Some(path)
    }
}

/// Exact word-metric space on an arbitrary finite set of group elements.
pub fn group_subspace(
    family: &GroupFamily,
    gens: &GeneratingSet,
    elements: &[Elem],
    basepoint: &Elem,
    caps: &ResourceCaps,
) -> Result<FiniteMetricSpace> {
    let mut elements: Vec<Elem> =
        elements.iter().map(|e| family.normalize(e)).collect::<Result<Vec<_>>>()?;
    elements.sort();
    elements.dedup();
    let base = elements
        .binary_search(basepoint)
        .map_err(|_| Error::invalid("basepoint is not among the elements"))?;
    let inverses: Vec<Elem> = elements.iter().map(|e| family.inverse(e)).collect();
    let mut diffs = Vec::new();
    for (i, inv) in inverses.iter().enumerate() {
        for e in &elements[i + 1..] {
            diffs.push(family.multiply(inv, e));
        }
    }
    let lengths = word_lengths_of(family, gens, &diffs, caps.max_ball_size)?;
    let n = elements.len();
    let mut dist = vec![0u64; n * n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let d = lengths[&diffs[k]] as u64;
            k += 1;
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    let labels = elements.iter().map(|e| family.format_element(e)).collect();
    Ok(FiniteMetricSpace::from_integer_table(labels, dist, base))
}
