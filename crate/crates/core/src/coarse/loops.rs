use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;
use crate::spaces::FiniteMetricSpace;

/// Which based r-loops to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopFamily {
    /// Every r-loop without repeated consecutive points.
    All,
    /// Loops without backtracks and without shortcuts: `d(x_{i−1}, x_{i+1}) > r`
    /// at every interior point. Any other loop reduces to a shorter one by
    /// moves at scale `r`.
    Irreducible,
}

/// True iff the r-step graph on the space is connected.
pub fn coarse_connected(space: &FiniteMetricSpace, r: &Rational) -> bool {
    let hops = hop_distances(space, r, space.basepoint());
    hops.iter().all(|h| h.is_some())
}

/// Number of r-steps from `from` to every point, if reachable.
pub fn hop_distances(space: &FiniteMetricSpace, r: &Rational, from: usize) -> Vec<Option<usize>> {
    let b = space.bound(r);
    let mut hops = vec![None; space.len()];
    hops[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        let h = hops[x].expect("queued points are reached");
        for y in 0..space.len() {
            if hops[y].is_none() && space.within(x, y, b) {
                hops[y] = Some(h + 1);
                queue.push_back(y);
            }
        }
    }
    hops
}

/// Lexicographic enumeration of the nontrivial based r-loops with at most
/// `max_len` steps.
pub struct LoopIter<'a> {
    space: &'a FiniteMetricSpace,
    family: LoopFamily,
    bound: crate::spaces::ScaledBound,
    neighbors: Vec<Vec<usize>>,
    hops: Vec<usize>,
    max_len: usize,
    base: usize,
    path: Vec<usize>,
    cursor: Vec<usize>,
}

pub fn based_loops<'a>(
    space: &'a FiniteMetricSpace,
    r: &Rational,
    max_len: usize,
    family: LoopFamily,
) -> LoopIter<'a> {
    let base = space.basepoint();
    let bound = space.bound(r);
    let neighbors = (0..space.len()).map(|x| space.neighbors(x, r)).collect();
    let hops = hop_distances(space, r, base).into_iter().map(|h| h.unwrap_or(usize::MAX)).collect();
    LoopIter { space, family, bound, neighbors, hops, max_len, base, path: vec![base], cursor: vec![0] }
}

impl Iterator for LoopIter<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let base = self.base;
        while let Some(&top) = self.path.last() {
            let depth = self.path.len();
            let c = self.cursor.last_mut().expect("cursor tracks path");
            let steps_left = self.max_len + 1 - depth;
            if steps_left == 0 || *c >= self.neighbors[top].len() {
                self.path.pop();
                self.cursor.pop();
                continue;
            }
            let y = self.neighbors[top][*c];
            *c += 1;
            if self.hops[y] > steps_left - 1 {
                continue;
            }
            if self.family == LoopFamily::Irreducible && depth >= 2 {
                let a = self.path[depth - 2];
                if a == y || self.space.within(a, y, self.bound) {
                    continue;
                }
            }
            self.path.push(y);
            self.cursor.push(0);
            if y == base {
                return Some(self.path.clone());
            }
        }
        None
    }
}
