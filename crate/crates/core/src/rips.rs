//! 2-skeleton of the Rips complex `R_t(X)`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{format_rational, is_nonnegative, Rational};
use crate::spaces::{FiniteMetricSpace, ScaledBound};

/// Vertices, edges and triangles of `R_t(X)`, sorted by vertex index.
#[derive(Debug, Clone)]
pub struct RipsComplex2<'a> {
    space: &'a FiniteMetricSpace,
    scale: Rational,
    bound: ScaledBound,
    edges: Vec<(usize, usize)>,
    triangles: Vec<(usize, usize, usize)>,
}

pub fn build_rips2(space: &FiniteMetricSpace, scale: Rational) -> Result<RipsComplex2<'_>> {
    if !is_nonnegative(&scale) {
        return Err(Error::invalid("Rips scale must be nonnegative"));
    }
    let bound = space.bound(&scale);
    let n = space.len();
    let upper: Vec<Vec<usize>> =
        (0..n).map(|i| (i + 1..n).filter(|&j| space.within(i, j, bound)).collect()).collect();
    let mut edges = Vec::new();
    let mut triangles = Vec::new();
    for (i, ups) in upper.iter().enumerate() {
        for (a, &j) in ups.iter().enumerate() {
            edges.push((i, j));
            for &k in &ups[a + 1..] {
                if space.within(j, k, bound) {
                    triangles.push((i, j, k));
                }
            }
        }
    }
    Ok(RipsComplex2 { space, scale, bound, edges, triangles })
}

impl<'a> RipsComplex2<'a> {
    pub fn space(&self) -> &'a FiniteMetricSpace {
        self.space
    }

    pub fn scale(&self) -> Rational {
        self.scale
    }

    pub fn vertex_count(&self) -> usize {
        self.space.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn triangles(&self) -> &[(usize, usize, usize)] {
        &self.triangles
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.space.within(a, b, self.bound)
    }

    /// Three distinct vertices with all pairwise distances at most `t`.
    pub fn is_triangle(&self, a: usize, b: usize, c: usize) -> bool {
        self.is_edge(a, b) && self.is_edge(b, c) && self.is_edge(a, c)
    }

    /// Consecutive points are distinct and joined by edges.
    pub fn is_edge_path(&self, points: &[usize]) -> bool {
        points.iter().all(|&p| p < self.space.len()) && points.windows(2).all(|w| self.is_edge(w[0], w[1]))
    }

    /// Connected components of the 1-skeleton, each sorted, ordered by
    /// their smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.space.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for v in 0..n {
            let root = find(&mut parent, v);
            if slot[root] == usize::MAX {
                slot[root] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[root]].push(v);
        }
        groups
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Graphviz rendering of the 1-skeleton.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph rips {\n");
        let _ = writeln!(out, "  label=\"R_t, t = {}\";", format_rational(&self.scale));
        for v in 0..self.space.len() {
            let _ = writeln!(out, "  v{v} [label=\"{}\"];", self.space.label(v).replace('"', "\\\""));
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  v{a} -- v{b};");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> RipsJson {
        let label = |v: usize| self.space.label(v).to_string();
        RipsJson {
            scale: format_rational(&self.scale),
            vertices: self.space.labels().to_vec(),
            edges: self.edges.iter().map(|&(a, b)| [label(a), label(b)]).collect(),
            triangles: self.triangles.iter().map(|&(a, b, c)| [label(a), label(b), label(c)]).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RipsJson {
    pub scale: String,
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub triangles: Vec<[String; 3]>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::ResourceCaps;
    use crate::rational::{int, ratio};
    use crate::spaces::{build_window, circle_space, GeneratingSet, GroupFamily};

    fn brute_triangles(space: &FiniteMetricSpace, t: Rational) -> Vec<(usize, usize, usize)> {
        let n = space.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if space.distance(a, b) <= t && space.distance(b, c) <= t && space.distance(a, c) <= t {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    fn line3() -> FiniteMetricSpace {
        build_window(&GroupFamily::line(), &GeneratingSet::line(&[1]).unwrap(), 3, &ResourceCaps::default())
            .unwrap()
            .into_space()
    }

    #[test]
    fn line_at_scale_one_is_a_path() {
        let space = line3();
        let r = build_rips2(&space, int(1)).unwrap();
        assert_eq!(r.edges().len(), 6);
        assert!(r.triangles().is_empty());
    }

    #[test]
    fn line_at_scale_two_has_consecutive_triples() {
        let space = line3();
        let r = build_rips2(&space, int(2)).unwrap();
        assert_eq!(r.triangles(), brute_triangles(&space, int(2)).as_slice());
        // Points are sorted -3..3, so index i holds the integer i - 3.
        let expected: Vec<_> = (0..5).map(|i| (i, i + 1, i + 2)).collect();
        assert_eq!(r.triangles(), expected.as_slice());
    }

    #[test]
    fn hexagon_at_scale_two() {
        let c = circle_space(int(6), 6).unwrap();
        let r = build_rips2(c.space(), int(2)).unwrap();
        for v in 0..6 {
            assert_eq!(r.edges().iter().filter(|&&(a, b)| a == v || b == v).count(), 4);
        }
        assert_eq!(r.triangles(), brute_triangles(c.space(), int(2)).as_slice());
        // Six consecutive triples plus the two alternating ones.
        assert_eq!(r.triangles().len(), 8);
        for i in 0..6 {
            let mut t = [i, (i + 1) % 6, (i + 2) % 6];
            t.sort();
            assert!(r.is_triangle(t[0], t[1], t[2]));
        }
        assert!(r.is_triangle(0, 2, 4) && r.is_triangle(1, 3, 5));
    }

    #[test]
    fn components() {
        let c = circle_space(int(6), 6).unwrap();
        assert_eq!(build_rips2(c.space(), int(1)).unwrap().connected_components().len(), 1);
        assert_eq!(build_rips2(c.space(), ratio(1, 2)).unwrap().connected_components().len(), 6);
        let big = build_rips2(c.space(), c.space().diameter()).unwrap();
        assert!(big.is_connected());
    }

    #[test]
    fn scale_one_skeleton_is_the_cayley_graph() {
        let z2 = GroupFamily::FreeAbelian { rank: 2 };
        let gens = GeneratingSet::standard(&z2);
        let w = build_window(&z2, &gens, 3, &ResourceCaps::default()).unwrap();
        let r = build_rips2(w.space(), int(1)).unwrap();
        let mut cayley = Vec::new();
        for (i, g) in w.elements().iter().enumerate() {
            for s in gens.elements() {
                if let Some(j) = w.index_of(&z2.multiply(g, s)) {
                    if i < j {
                        cayley.push((i, j));
                    }
                }
            }
        }
        cayley.sort();
        assert_eq!(r.edges(), cayley.as_slice());
    }

    #[test]
    fn exports() {
        let space = line3();
        let r = build_rips2(&space, int(1)).unwrap();
        assert!(r.to_dot().contains("v0 -- v1;"));
        let json = serde_json::to_value(r.to_json()).unwrap();
        assert_eq!(json["edges"][0], serde_json::json!(["-3", "-2"]));
    }
}
