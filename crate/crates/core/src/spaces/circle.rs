use std::collections::VecDeque;

use num_traits::Signed;

use super::metric::{CircleChart, FiniteMetricSpace};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `n` equally spaced points on a geodesic circle of length `R`, with the
/// shorter-arc metric.
#[derive(Debug, Clone)]
pub struct CircleSpace {
    circumference: Rational,
    points: usize,
    space: FiniteMetricSpace,
}

pub fn circle_space(circumference: Rational, points: usize) -> Result<CircleSpace> {
    if points < 3 {
        return Err(Error::invalid("a circle needs at least 3 points"));
    }
    if !circumference.is_positive() {
        return Err(Error::invalid("circumference must be positive"));
    }
    let step = circumference / Rational::from_integer(points as i64);
    let table = (0..points)
        .map(|i| {
            (0..points)
                .map(|j| {
                    let diff = i.abs_diff(j);
                    step * Rational::from_integer(diff.min(points - diff) as i64)
                })
                .collect()
        })
        .collect();
    let labels = (0..points).map(|i| format!("p{i}")).collect();
    let space = FiniteMetricSpace::new(labels, table, 0)?.with_chart(CircleChart {
        name: "circle".into(),
        circumference,
        positions: points,
        map: (0..points).collect(),
    })?;
    Ok(CircleSpace { circumference, points, space })
}

impl CircleSpace {
    pub fn circumference(&self) -> Rational {
        self.circumference
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn into_space(self) -> FiniteMetricSpace {
        self.space
    }

    /// The loop `(p0, p1, …, p_{n-1}, p0)` traversed `turns` times; negative
    /// turns run clockwise.
    pub fn full_loop(&self, turns: i64) -> Vec<usize> {
        let n = self.points as i64;
        let total = n * turns.abs();
        (0..=total).map(|k| (k * turns.signum()).rem_euclid(n) as usize).collect()
    }
}

/// Circles of the given integer circumferences (one point per unit of
/// length), each joined to a common hub by a unit bridge.
///
/// The hub is the basepoint. Every circle contributes a chart retracting
/// the rest of the space onto its attachment point.
pub fn bridged_circles(circumferences: &[usize]) -> Result<FiniteMetricSpace> {
    if circumferences.is_empty() || circumferences.iter().any(|&r| r < 3) {
        return Err(Error::invalid("bridged circles need circumferences of at least 3"));
    }
    let mut labels = vec!["h".to_string()];
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new()];
    let mut starts = Vec::new();
    for &r in circumferences {
        let start = labels.len();
        starts.push(start);
        for i in 0..r {
            labels.push(format!("c{r}_{i}"));
            adjacency.push(Vec::new());
        }
        for i in 0..r {
            let (a, b) = (start + i, start + (i + 1) % r);
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        adjacency[0].push(start);
        adjacency[start].push(0);
    }
    let n = labels.len();
    let mut dist = vec![u64::MAX; n * n];
    for src in 0..n {
        dist[src * n + src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                if dist[src * n + v] == u64::MAX {
                    dist[src * n + v] = dist[src * n + u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    let mut space = FiniteMetricSpace::from_integer_table(labels, dist, 0);
    for (&r, &start) in circumferences.iter().zip(&starts) {
        let map = (0..n).map(|p| if (start..start + r).contains(&p) { p - start } else { 0 }).collect();
        space = space.with_chart(CircleChart {
            name: format!("circle-{r}"),
            circumference: Rational::from_integer(r as i64),
            positions: r,
            map,
        })?;
    }
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn circle_distances() {
        let c = circle_space(int(6), 6).unwrap();
        assert_eq!(c.space().distance(0, 3), int(3));
        let c = circle_space(int(10), 10).unwrap();
        assert_eq!(c.space().distance(2, 9), int(3));
        let c = circle_space(int(6), 12).unwrap();
        assert_eq!(c.space().distance(4, 5), ratio(1, 2));
        assert_eq!(c.space().diameter(), int(3));
    }

    #[test]
    fn small_circles_are_rejected() {
        assert!(circle_space(int(6), 2).is_err());
        assert!(circle_space(int(0), 5).is_err());
    }

    #[test]
    fn full_loops() {
        let c = circle_space(int(4), 4).unwrap();
        assert_eq!(c.full_loop(1), vec![0, 1, 2, 3, 0]);
        assert_eq!(c.full_loop(-1), vec![0, 3, 2, 1, 0]);
        assert_eq!(c.full_loop(2).len(), 9);
    }

    #[test]
    fn bridged_circles_are_metric_with_valid_charts() {
        let s = bridged_circles(&[6, 9]).unwrap();
        assert_eq!(s.len(), 1 + 6 + 9);
        s.check_metric_axioms().unwrap();
        assert_eq!(s.charts().len(), 2);
        let a = s.index_of("c6_3").unwrap();
        let b = s.index_of("c9_4").unwrap();
        assert_eq!(s.distance(a, b), int(3 + 2 + 4));
    }
}
