use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coarse::QiCertificate;
use crate::error::{Error, Result};
use crate::homotopy::{verify_decomposition, FillingDecomposition, MoveSequence, WindingCertificate};
use crate::presentations::{CocycleCertificate, LatticeObstruction};
use crate::rips::build_rips2;
use crate::spaces::{FiniteMetricSpace, GeneratingSet, GroupFamily, SpaceJson};
use crate::subgroups::{CosetData, MsGenerators};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 3,
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A replayable certificate. Spaces are indices into the report's `spaces`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Contraction { space: usize, moves: MoveSequence },
    Winding { space: usize, certificate: WindingCertificate },
    Filling { space: usize, loop_points: Vec<usize>, decomposition: FillingDecomposition },
    Lattice { obstruction: LatticeObstruction },
    Cocycle { family: GroupFamily, generators: GeneratingSet, certificate: CocycleCertificate },
    Qi { certificate: Value, expect_valid: bool },
    Schreier { data: CosetData, generators: MsGenerators },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Contraction { .. } => "contraction",
            Certificate::Winding { .. } => "winding",
            Certificate::Filling { .. } => "filling",
            Certificate::Lattice { .. } => "lattice",
            Certificate::Cocycle { .. } => "cocycle",
            Certificate::Qi { .. } => "qi",
            Certificate::Schreier { .. } => "schreier",
        }
    }

    /// Re-checks the certificate with the library verifiers.
    pub fn verify(&self, spaces: &[FiniteMetricSpace]) -> Result<()> {
        let space = |i: usize| {
            spaces.get(i).ok_or_else(|| Error::CertificateInvalid(format!("no space with index {i}")))
        };
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::CertificateInvalid(what.to_string()))
            }
        };
        match self {
            Certificate::Contraction { space: s, moves } => moves.verify_contraction(space(*s)?),
            Certificate::Winding { space: s, certificate } => {
                certificate.verify(space(*s)?)?;
                check(certificate.is_nontrivial(), "winding number is zero")
            }
            Certificate::Filling { space: s, loop_points, decomposition } => {
                let complex = build_rips2(space(*s)?, decomposition.scale)?;
                check(verify_decomposition(&complex, loop_points, decomposition), "filling does not verify")
            }
            Certificate::Lattice { obstruction } => check(obstruction.verify(), "lattice obstruction does not verify"),
            Certificate::Cocycle { family, generators, certificate } => {
                check(certificate.verify(family, generators), "cocycle does not verify")
            }
            Certificate::Qi { certificate, expect_valid } => {
                let cert = QiCertificate::from_json(certificate)?;
                let valid = cert.validate().valid;
                check(valid == *expect_valid, "quasi-isometry inequalities do not match the claim")
            }
            Certificate::Schreier { data, generators } => {
                let rebuilt = CosetData::new(data.homomorphism.clone(), data.transversal.clone(), data.generators.clone())?;
                check(rebuilt == *data && generators.verify(data), "subgroup generators do not verify")
            }
        }
    }
}

/// The JSON document every command produces.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub parameters: Value,
    pub verdict: Verdict,
    pub summary: Value,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub items: Vec<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spaces: Vec<SpaceJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<Certificate>,
    #[serde(skip)]
    pub dot: Option<String>,
    #[serde(skip)]
    pub csv: Option<String>,
}

impl Report {
    pub fn new(command: &str, parameters: Value) -> Self {
        Report {
            command: command.to_string(),
            parameters,
            verdict: Verdict::Pass,
            summary: Value::Null,
            items: Vec::new(),
            spaces: Vec::new(),
            certificates: Vec::new(),
            dot: None,
            csv: None,
        }
    }

    /// Registers a space and returns its index.
    pub fn add_space(&mut self, space: &FiniteMetricSpace) -> usize {
        self.spaces.push(space.to_json());
        self.spaces.len() - 1
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Verifies every certificate, returning one result per certificate.
    pub fn verify_certificates(&self) -> Result<Vec<Result<()>>> {
        let spaces = self.spaces.iter().map(FiniteMetricSpace::from_json).collect::<Result<Vec<_>>>()?;
        Ok(self.certificates.iter().map(|c| c.verify(&spaces)).collect())
    }
}

pub(crate) fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report values serialize")
}
