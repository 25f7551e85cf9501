use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homotopy::{apply_move_in_place, HomotopyMove, MoveSequence, Regime};
use crate::rational::{format_rational, serde_rational, Rational};
use crate::spaces::{FiniteMetricSpace, SpaceJson};

/// Constants of a quasi-isometry pair `f: X → Y`, `g: Y → X`:
/// `d(fx, fx') ≤ A·d(x, x') + B`, `d(gy, gy') ≤ α·d(y, y') + β`,
/// `d(gfx, x) ≤ C`, `d(fgy, y) ≤ γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiConstants {
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    #[serde(with = "serde_rational")]
    pub beta: Rational,
    #[serde(with = "serde_rational")]
    pub c: Rational,
    #[serde(with = "serde_rational")]
    pub gamma: Rational,
}

/// Scales obtained by moving coarse connectivity and simple connectivity
/// from `Y` back to `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferredParams {
    /// `Y` is r-connected.
    #[serde(with = "serde_rational")]
    pub r: Rational,
    /// `X` is r'-connected, `r' = max(C, αr + β)`.
    #[serde(with = "serde_rational")]
    pub r_prime: Rational,
    /// Scale of the loops in `X`.
    #[serde(with = "serde_rational")]
    pub rho: Rational,
    /// Their images are (Aρ + B)-loops in `Y`.
    #[serde(with = "serde_rational")]
    pub pushed_scale: Rational,
    /// Loops in `Y` at the pushed scale contract at scale `R`.
    #[serde(with = "serde_rational", rename = "R")]
    pub big_r: Rational,
    /// ρ-loops in `X` contract at scale `ρ' = C + max(αR + β, ρ)`.
    #[serde(with = "serde_rational")]
    pub rho_prime: Rational,
}

pub fn qi_transfer_constants(k: &QiConstants, r: Rational, big_r: Rational, rho: Rational) -> Result<TransferredParams> {
    let zero = Rational::from_integer(0);
    let all = [k.a, k.b, k.alpha, k.beta, k.c, k.gamma, r, big_r, rho];
    if all.iter().any(|v| *v < zero) {
        return Err(Error::invalid("quasi-isometry constants and scales must be nonnegative"));
    }
    Ok(TransferredParams {
        r,
        r_prime: k.c.max(k.alpha * r + k.beta),
        rho,
        pushed_scale: k.a * rho + k.b,
        big_r,
        rho_prime: k.c + (k.alpha * big_r + k.beta).max(rho),
    })
}

/// A finite quasi-isometry certificate: both spaces, both maps as index
/// tables, and the claimed constants.
#[derive(Debug, Clone)]
pub struct QiCertificate {
    pub x: FiniteMetricSpace,
    pub y: FiniteMetricSpace,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub constants: QiConstants,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QiInequality {
    FCoarseLipschitz,
    GCoarseLipschitz,
    GAfterFNearIdentity,
    FAfterGNearIdentity,
}

/// The first violated instance of an inequality. Points are labels; `p` is
/// the second point of a pair, absent for the near-identity inequalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiViolation {
    pub inequality: QiInequality,
    pub point: String,
    pub other: Option<String>,
    #[serde(with = "serde_rational")]
    pub lhs: Rational,
    #[serde(with = "serde_rational")]
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QiValidation {
    pub valid: bool,
    pub violations: Vec<QiViolation>,
}

#[derive(Serialize, Deserialize)]
struct QiCertificateJson {
    x: SpaceJson,
    y: SpaceJson,
    f: Vec<String>,
    g: Vec<String>,
    constants: QiConstants,
}

impl QiCertificate {
    pub fn new(
        x: FiniteMetricSpace,
        y: FiniteMetricSpace,
        f: Vec<usize>,
        g: Vec<usize>,
        constants: QiConstants,
    ) -> Result<Self> {
        if f.len() != x.len() || f.iter().any(|&p| p >= y.len()) {
            return Err(Error::invalid("f must map every point of X into Y"));
        }
        if g.len() != y.len() || g.iter().any(|&p| p >= x.len()) {
            return Err(Error::invalid("g must map every point of Y into X"));
        }
        Ok(QiCertificate { x, y, f, g, constants })
    }

    /// Checks all four inequalities exhaustively, reporting the first
    /// violation of each in index order.
    pub fn validate(&self) -> QiValidation {
        let k = &self.constants;
        let mut violations = Vec::new();
        let lipschitz = |src: &FiniteMetricSpace, dst: &FiniteMetricSpace, map: &[usize], m: Rational, add: Rational, which| {
            for i in 0..src.len() {
                for j in i + 1..src.len() {
                    let lhs = dst.distance(map[i], map[j]);
                    let rhs = m * src.distance(i, j) + add;
                    if lhs > rhs {
                        return Some(QiViolation {
                            inequality: which,
                            point: src.label(i).into(),
                            other: Some(src.label(j).into()),
                            lhs,
                            rhs,
                        });
                    }
                }
            }
            None
        };
        let near = |src: &FiniteMetricSpace, there: &[usize], back: &[usize], bound: Rational, which| {
            (0..src.len()).find_map(|i| {
                let lhs = src.distance(back[there[i]], i);
                (lhs > bound).then(|| QiViolation {
                    inequality: which,
                    point: src.label(i).into(),
                    other: None,
                    lhs,
                    rhs: bound,
                })
            })
        };
        violations.extend(lipschitz(&self.x, &self.y, &self.f, k.a, k.b, QiInequality::FCoarseLipschitz));
        violations.extend(lipschitz(&self.y, &self.x, &self.g, k.alpha, k.beta, QiInequality::GCoarseLipschitz));
        violations.extend(near(&self.x, &self.f, &self.g, k.c, QiInequality::GAfterFNearIdentity));
        violations.extend(near(&self.y, &self.g, &self.f, k.gamma, QiInequality::FAfterGNearIdentity));
        QiValidation { valid: violations.is_empty(), violations }
    }

    /// Pulls a contraction of `f(loop)` in `Y` back to a contraction of
    /// `loop` in `X` at scale `ρ' = C + max(αR + β, ρ)`, where `R` is the
    /// scale of `y_moves` and `ρ` the largest step of the loop.
    ///
    /// The homotopy first walks the loop over to `g∘f` of itself one point
    /// at a time, then replays `g` of the moves in `Y`.
    pub fn pull_back(&self, loop_points: &[usize], y_moves: &MoveSequence) -> Result<MoveSequence> {
        if loop_points.is_empty() || loop_points.first() != loop_points.last() {
            return Err(Error::invalid("pull-back needs a loop"));
        }
        if let Some(&p) = loop_points.iter().find(|&&p| p >= self.x.len()) {
            return Err(Error::invalid(format!("point {p} is not in X")));
        }
        let pushed: Vec<usize> = loop_points.iter().map(|&p| self.f[p]).collect();
        if y_moves.start != pushed {
            return Err(Error::invalid("the moves in Y do not start at the image of the loop"));
        }
        let rho = loop_points
            .windows(2)
            .map(|w| self.x.distance(w[0], w[1]))
            .max()
            .unwrap_or_else(|| Rational::from_integer(0));
        let k = &self.constants;
        let scale = k.c + (k.alpha * y_moves.scale + k.beta).max(rho);
        let regime = Regime::Metric { space: &self.x, scale };
        let gf = |p: usize| self.g[self.f[p]];

        let mut seq = MoveSequence::new(scale, loop_points.to_vec());
        let mut path = loop_points.to_vec();
        let apply = |mv: HomotopyMove, path: &mut Vec<usize>, seq: &mut MoveSequence| -> Result<()> {
            apply_move_in_place(path, &mv, &regime).map_err(|e| {
                Error::CertificateInvalid(format!(
                    "pull-back at scale {} failed: {e}",
                    format_rational(&scale)
                ))
            })?;
            seq.push(mv, path.len() - 1);
            Ok(())
        };
        apply(HomotopyMove::InsertBacktrack { index: 0, point: gf(loop_points[0]) }, &mut path, &mut seq)?;
        // Invariant: path = (x_0, gf x_0, …, gf x_{i-1}, x_{i-1}, x_i, …, x_n).
        for i in 1..loop_points.len() {
            apply(HomotopyMove::InsertPoint { index: i + 1, point: gf(loop_points[i]) }, &mut path, &mut seq)?;
            apply(HomotopyMove::DeletePoint { index: i + 1 }, &mut path, &mut seq)?;
        }
        for mv in &y_moves.moves {
            let lifted = match *mv {
                HomotopyMove::InsertBacktrack { index, point } => {
                    HomotopyMove::InsertBacktrack { index: index + 1, point: self.g[point] }
                }
                HomotopyMove::DeleteBacktrack { index } => HomotopyMove::DeleteBacktrack { index: index + 1 },
                HomotopyMove::InsertPoint { index, point } => {
                    HomotopyMove::InsertPoint { index: index + 1, point: self.g[point] }
                }
                HomotopyMove::DeletePoint { index } => HomotopyMove::DeletePoint { index: index + 1 },
            };
            apply(lifted, &mut path, &mut seq)?;
        }
        if path.len() != 3 {
            return Err(Error::CertificateInvalid("the moves in Y do not contract the image loop".into()));
        }
        apply(HomotopyMove::DeleteBacktrack { index: 0 }, &mut path, &mut seq)?;
        Ok(seq)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = QiCertificateJson {
            x: self.x.to_json(),
            y: self.y.to_json(),
            f: self.f.iter().map(|&p| self.y.label(p).to_string()).collect(),
            g: self.g.iter().map(|&p| self.x.label(p).to_string()).collect(),
            constants: self.constants,
        };
        serde_json::to_value(json).expect("certificates serialize")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let json: QiCertificateJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let x = FiniteMetricSpace::from_json(&json.x)?;
        let y = FiniteMetricSpace::from_json(&json.y)?;
        let lookup = |space: &FiniteMetricSpace, labels: &[String]| {
            labels
                .iter()
                .map(|l| space.index_of(l).ok_or_else(|| Error::invalid(format!("unknown point {l:?}"))))
                .collect::<Result<Vec<_>>>()
        };
        let f = lookup(&y, &json.f)?;
        let g = lookup(&x, &json.g)?;
        QiCertificate::new(x, y, f, g, json.constants)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::{contract_loop, SearchBudget};
    use crate::rational::int;
    use crate::spaces::circle_space;

    /// A 12-point circle of length 12 and a 6-point circle of length 12,
    /// with f rounding down to even positions and g the inclusion.
    fn circles() -> QiCertificate {
        let x = circle_space(int(12), 12).unwrap().into_space();
        let y = circle_space(int(12), 6).unwrap().into_space();
        let f = (0..12).map(|i| i / 2).collect();
        let g = (0..6).map(|i| 2 * i).collect();
        let k = QiConstants { a: int(1), b: int(1), alpha: int(1), beta: int(0), c: int(1), gamma: int(0) };
        QiCertificate::new(x, y, f, g, k).unwrap()
    }

    #[test]
    fn validates_and_rejects() {
        let cert = circles();
        assert!(cert.validate().valid, "{:?}", cert.validate());
        let mut bad = cert.clone();
        bad.constants.c = int(0);
        let v = bad.validate();
        assert_eq!(v.violations.len(), 1);
        assert_eq!(v.violations[0].inequality, QiInequality::GAfterFNearIdentity);
        assert_eq!(v.violations[0].point, "p1");
    }

    #[test]
    fn transfer_formulas() {
        let k = QiConstants { a: int(2), b: int(1), alpha: int(3), beta: int(2), c: int(5), gamma: int(1) };
        let t = qi_transfer_constants(&k, int(1), int(4), int(2)).unwrap();
        assert_eq!(t.r_prime, int(5));
        assert_eq!(t.pushed_scale, int(5));
        assert_eq!(t.rho_prime, int(5 + 14));
    }

    #[test]
    fn pull_back_is_a_valid_contraction() {
        let cert = circles();
        let lp: Vec<usize> = (0..=12).map(|i| i % 12).collect();
        let pushed: Vec<usize> = lp.iter().map(|&p| cert.f[p]).collect();
        let out = contract_loop(&cert.y, &pushed, int(4), SearchBudget::default()).unwrap();
        let y_moves = out.moves().unwrap();
        let seq = cert.pull_back(&lp, y_moves).unwrap();
        assert_eq!(seq.scale, int(1) + int(4).max(int(1)));
        seq.verify_contraction(&cert.x).unwrap();
        let back = QiCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back.f, cert.f);
    }
}
