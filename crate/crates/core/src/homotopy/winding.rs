use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::spaces::{CircleChart, CircleSpace, FiniteMetricSpace};

/// Winding number of an r-loop through a circle chart with `R > 3r`.
///
/// Every r-move changes the signed displacement sum by a lift of a closed
/// triangle of arcs, each of length at most `r`; the three-step total is
/// less than `R` in absolute value and a multiple of `R`, hence zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindingCertificate {
    pub chart: String,
    #[serde(with = "crate::rational::serde_rational")]
    pub circumference: Rational,
    pub positions: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub scale: Rational,
    pub winding: i64,
    #[serde(rename = "loop")]
    pub loop_points: Vec<usize>,
    /// Chart positions of the loop points.
    pub images: Vec<usize>,
}

fn signed_step(a: usize, b: usize, n: usize) -> i64 {
    let n = n as i64;
    let d = (b as i64 - a as i64).rem_euclid(n);
    if 2 * d > n {
        d - n
    } else {
        d
    }
}

/// Winding of `loop_points` through `chart`, valid at scale `r`.
pub fn chart_winding(
    space: &FiniteMetricSpace,
    chart: &CircleChart,
    loop_points: &[usize],
    r: &Rational,
) -> Result<WindingCertificate> {
    if chart.circumference <= Rational::from_integer(3) * r {
        return Err(Error::CertificateUnavailable(format!(
            "circumference {} is not greater than 3r = {}",
            format_rational(&chart.circumference),
            format_rational(&(Rational::from_integer(3) * r))
        )));
    }
    if loop_points.is_empty() || loop_points.first() != loop_points.last() {
        return Err(Error::invalid("winding numbers are defined for loops"));
    }
    if let Some(&p) = loop_points.iter().find(|&&p| p >= space.len()) {
        return Err(Error::invalid(format!("point {p} is not in the space")));
    }
    let bound = space.bound(r);
    if loop_points.windows(2).any(|w| !space.within(w[0], w[1], bound)) {
        return Err(Error::invalid(format!("loop has a step longer than {}", format_rational(r))));
    }
    let images: Vec<usize> = loop_points.iter().map(|&p| chart.map[p]).collect();
    let total: i64 = images.windows(2).map(|w| signed_step(w[0], w[1], chart.positions)).sum();
    Ok(WindingCertificate {
        chart: chart.name.clone(),
        circumference: chart.circumference,
        positions: chart.positions,
        scale: *r,
        winding: total / chart.positions as i64,
        loop_points: loop_points.to_vec(),
        images,
    })
}

/// Winding number of an r-loop on a circle space; requires `R > 3r`.
pub fn winding_number(circle: &CircleSpace, loop_points: &[usize], r: &Rational) -> Result<WindingCertificate> {
    let space = circle.space();
    chart_winding(space, &space.charts()[0], loop_points, r)
}

impl WindingCertificate {
    /// Re-checks the certificate against `space`: the chart is 1-Lipschitz,
    /// the images and the winding are recomputed, and `R > 3r`.
    pub fn verify(&self, space: &FiniteMetricSpace) -> Result<()> {
        let chart = space
            .charts()
            .iter()
            .find(|c| c.name == self.chart)
            .ok_or_else(|| Error::CertificateInvalid(format!("no chart named `{}`", self.chart)))?;
        chart.verify(space)?;
        let again = chart_winding(space, chart, &self.loop_points, &self.scale)
            .map_err(|e| Error::CertificateInvalid(e.to_string()))?;
        if again != *self {
            return Err(Error::CertificateInvalid("recomputed winding certificate differs".into()));
        }
        Ok(())
    }

    pub fn is_nontrivial(&self) -> bool {
        self.winding != 0
    }
}
