//! Finite metric spaces with exact rational distances.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// Threshold `d ≤ t` pre-scaled to the space's common denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ScaledBound(pub u64);

/// A finite pointed metric space.
///
/// All distances share one denominator, so `d(x, y) ≤ t` is an integer
/// comparison. Points are kept in the order they were given; constructors
/// in this crate hand them over in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    denominator: u64,
    dist: Vec<u64>,
    basepoint: usize,
    charts: Vec<CircleChart>,
}

/// A 1-Lipschitz map from a space onto a discretised circle.
///
/// Winding numbers of loops pushed through a chart are invariant under
/// r-moves whenever the circumference exceeds `3r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleChart {
    pub name: String,
    #[serde(with = "crate::rational::serde_rational")]
    pub circumference: Rational,
    pub positions: usize,
    /// Circle position of every point of the space.
    pub map: Vec<usize>,
}

impl CircleChart {
    /// Arc length between two positions.
    pub fn arc(&self, a: usize, b: usize) -> Rational {
        let n = self.positions;
        let diff = a.abs_diff(b) % n;
        let steps = diff.min(n - diff);
        self.circumference * Rational::new(steps as i64, n as i64)
    }

    /// Exhaustively checks that the chart is 1-Lipschitz on `space`.
    pub fn verify(&self, space: &FiniteMetricSpace) -> Result<()> {
        if self.positions < 3 || self.map.len() != space.len() {
            return Err(Error::CertificateInvalid(format!("chart `{}` has the wrong shape", self.name)));
        }
        if let Some(&p) = self.map.iter().find(|&&p| p >= self.positions) {
            return Err(Error::CertificateInvalid(format!("chart position {p} out of range")));
        }
        for x in 0..space.len() {
            for y in x + 1..space.len() {
                if self.arc(self.map[x], self.map[y]) > space.distance(x, y) {
                    return Err(Error::CertificateInvalid(format!(
                        "chart `{}` stretches d({}, {})",
                        self.name,
                        space.label(x),
                        space.label(y)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Common denominator and numerators of a rational table.
fn common_scale(rows: &[Vec<Rational>]) -> Result<(u64, Vec<u64>)> {
    let mut den: i64 = 1;
    for d in rows.iter().flatten() {
        den = den.lcm(d.denom());
    }
    let mut dist = Vec::with_capacity(rows.len() * rows.len());
    for d in rows.iter().flatten() {
        if *d.numer() < 0 {
            return Err(Error::invalid("distances must be nonnegative"));
        }
        dist.push((*d.numer() as i128 * (den / d.denom()) as i128) as u64);
    }
    Ok((den as u64, dist))
}

impl FiniteMetricSpace {
    /// Builds and validates a space from a full rational distance table.
    pub fn new(labels: Vec<String>, distances: Vec<Vec<Rational>>, basepoint: usize) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::invalid("a metric space needs at least one point"));
        }
        if distances.len() != n || distances.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("distance table must be square and match the point list"));
        }
        if basepoint >= n {
            return Err(Error::invalid("basepoint out of range"));
        }
        let (denominator, dist) = common_scale(&distances)?;
        let space = FiniteMetricSpace { labels, denominator, dist, basepoint, charts: Vec::new() };
        space.check_metric_axioms()?;
        let mut seen = HashMap::new();
        for (i, l) in space.labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::invalid(format!("duplicate point id {l:?}")));
            }
        }
        Ok(space)
    }

    /// Integer-valued space from a flat row-major table. The caller
    /// guarantees the metric axioms (e.g. word or graph metrics).
    pub(crate) fn from_integer_table(labels: Vec<String>, dist: Vec<u64>, basepoint: usize) -> Self {
        debug_assert_eq!(dist.len(), labels.len() * labels.len());
        FiniteMetricSpace { labels, denominator: 1, dist, basepoint, charts: Vec::new() }
    }

    pub(crate) fn with_chart(mut self, chart: CircleChart) -> Result<Self> {
        chart.verify(&self)?;
        self.charts.push(chart);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn charts(&self) -> &[CircleChart] {
        &self.charts
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    #[inline]
    pub fn distance_scaled(&self, i: usize, j: usize) -> u64 {
        self.dist[i * self.labels.len() + j]
    }

    pub fn distance(&self, i: usize, j: usize) -> Rational {
        Rational::new(self.distance_scaled(i, j) as i64, self.denominator as i64)
    }

    /// Scaled form of the threshold `t` (which must be nonnegative).
    pub fn bound(&self, t: &Rational) -> ScaledBound {
        let scaled = (*t.numer() as i128 * self.denominator as i128).div_euclid(*t.denom() as i128);
        ScaledBound(scaled.max(0) as u64)
    }

    #[inline]
    pub fn within(&self, i: usize, j: usize, bound: ScaledBound) -> bool {
        self.distance_scaled(i, j) <= bound.0
    }

    pub fn diameter(&self) -> Rational {
        let max = self.dist.iter().copied().max().unwrap_or(0);
        Rational::new(max as i64, self.denominator as i64)
    }

    /// Points within `t` of `x` (excluding `x`), in index order.
    pub fn neighbors(&self, x: usize, t: &Rational) -> Vec<usize> {
        let b = self.bound(t);
        (0..self.len()).filter(|&y| y != x && self.within(x, y, b)).collect()
    }

    /// Exhaustive check of symmetry, identity of indiscernibles and the
    /// triangle inequality.
    pub fn check_metric_axioms(&self) -> Result<()> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                let d = self.distance_scaled(x, y);
                if d != self.distance_scaled(y, x) {
                    return Err(Error::invalid(format!("asymmetric distance at ({x},{y})")));
                }
                if (d == 0) != (x == y) {
                    return Err(Error::invalid(format!("d({x},{y}) = 0 must hold exactly when x = y")));
                }
                for z in 0..n {
                    if d > self.distance_scaled(x, z) + self.distance_scaled(z, y) {
                        return Err(Error::invalid(format!("triangle inequality fails at ({x},{z},{y})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Subspace on the given points (in the given order).
    pub fn subspace(&self, points: &[usize], basepoint: usize) -> Result<Self> {
        if basepoint >= points.len() || points.iter().any(|&p| p >= self.len()) {
            return Err(Error::invalid("subspace points out of range"));
        }
        let n = self.len();
        let mut dist = Vec::with_capacity(points.len() * points.len());
        for &a in points {
            for &b in points {
                dist.push(self.dist[a * n + b]);
            }
        }
        Ok(FiniteMetricSpace {
            labels: points.iter().map(|&p| self.labels[p].clone()).collect(),
            denominator: self.denominator,
            dist,
            basepoint,
            charts: Vec::new(),
        })
    }

    pub fn to_json(&self) -> SpaceJson {
        SpaceJson {
            points: self.labels.clone(),
            basepoint: self.labels[self.basepoint].clone(),
            distances: (0..self.len())
                .map(|i| (0..self.len()).map(|j| format_rational(&self.distance(i, j))).collect())
                .collect(),
            charts: self.charts.clone(),
        }
    }

    pub fn from_json(json: &SpaceJson) -> Result<Self> {
        let basepoint = json
            .points
            .iter()
            .position(|p| *p == json.basepoint)
            .ok_or_else(|| Error::invalid(format!("basepoint {:?} is not a point", json.basepoint)))?;
        let table = json
            .distances
            .iter()
            .map(|row| row.iter().map(|d| parse_rational(d)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut space = FiniteMetricSpace::new(json.points.clone(), table, basepoint)?;
        for chart in &json.charts {
            space = space.with_chart(chart.clone())?;
        }
        Ok(space)
    }

    /// Distance matrix as CSV with a header row of point ids.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("point");
        for l in &self.labels {
            let _ = write!(out, ",{}", csv_field(l));
        }
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&csv_field(&self.labels[i]));
            for j in 0..self.len() {
                let _ = write!(out, ",{}", format_rational(&self.distance(i, j)));
            }
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// JSON form of a [`FiniteMetricSpace`]: distances are `"p/q"` strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceJson {
    pub points: Vec<String>,
    pub basepoint: String,
    pub distances: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub charts: Vec<CircleChart>,
}
