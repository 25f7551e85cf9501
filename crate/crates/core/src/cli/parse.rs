//! Text forms of families, generating sets, elements and spaces accepted by
//! the command line.

use std::path::Path;

use super::args::SpaceArgs;
use crate::caps::ResourceCaps;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};
use crate::spaces::{
    bridged_circles, build_window, circle_space, Elem, FiniteMetricSpace, GeneratingSet, GroupFamily, GroupWindow,
    SpaceJson,
};

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_file(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn scale(text: &str) -> Result<Rational> {
    let r = parse_rational(text)?;
    if r < Rational::from_integer(0) {
        return Err(Error::invalid(format!("scale {text} is negative")));
    }
    Ok(r)
}

fn numeric_param(text: &str, name: &str) -> Result<usize> {
    text.parse().map_err(|_| Error::Parse(format!("{name} expects a nonnegative integer, got {text:?}")))
}

/// `line`, `free-abelian:d`, `free:k`, `heisenberg`, `cyclic:m`,
/// `cyclic-quotient:m`, a JSON object, or `@file.json`.
pub fn family(text: &str) -> Result<GroupFamily> {
    let text = text.trim();
    let fam = if let Some(path) = text.strip_prefix('@') {
        read_json(Path::new(path))?
    } else if text.starts_with('{') {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("family JSON: {e}")))?
    } else {
        let (name, param) = text.split_once(':').unwrap_or((text, ""));
        match name {
            "line" => GroupFamily::line(),
            "heisenberg" => GroupFamily::HeisenbergZ,
            "free-abelian" => GroupFamily::FreeAbelian { rank: numeric_param(param, name)? },
            "free" => GroupFamily::Free { rank: numeric_param(param, name)? },
            "cyclic" => GroupFamily::Cyclic { modulus: numeric_param(param, name)? as u32 },
            "cyclic-quotient" => GroupFamily::CyclicQuotientOfLine { modulus: numeric_param(param, name)? as u32 },
            _ => return Err(Error::Parse(format!("unknown family {text:?}"))),
        }
    };
    fam.validate()?;
    Ok(fam)
}

/// Elements separated by `;`.
pub fn elements(fam: &GroupFamily, text: &str) -> Result<Vec<Elem>> {
    text.split(';').filter(|t| !t.trim().is_empty()).map(|t| fam.parse_element(t)).collect()
}

pub fn generators(fam: &GroupFamily, text: Option<&str>) -> Result<GeneratingSet> {
    match text {
        None => Ok(GeneratingSet::standard(fam)),
        Some(t) => {
            if let Some(m) = t.trim().strip_prefix("factorial:") {
                if *fam != GroupFamily::line() {
                    return Err(Error::invalid("factorial generators live in the line group"));
                }
                return GeneratingSet::factorial(numeric_param(m, "factorial")? as u32);
            }
            if let Some(n) = t.trim().strip_prefix("power:") {
                return GeneratingSet::standard(fam).power(fam, numeric_param(n, "power")?);
            }
            Ok(GeneratingSet::new(fam, elements(fam, t)?)?.symmetrize(fam))
        }
    }
}

pub struct BuiltSpace {
    pub space: FiniteMetricSpace,
    pub window: Option<GroupWindow>,
    pub description: String,
}

pub fn space(args: &SpaceArgs, caps: &ResourceCaps) -> Result<BuiltSpace> {
    if let Some(path) = &args.space {
        let json: SpaceJson = read_json(path)?;
        return Ok(BuiltSpace {
            space: FiniteMetricSpace::from_json(&json)?,
            window: None,
            description: format!("file {}", path.display()),
        });
    }
    if let Some(c) = &args.circle {
        let circumference = scale(c)?;
        let n = match args.points {
            Some(n) => n,
            None if circumference.is_integer() => circumference.to_integer() as usize,
            None => return Err(Error::invalid("--points is required for a non-integer circumference")),
        };
        return Ok(BuiltSpace {
            space: circle_space(circumference, n)?.into_space(),
            window: None,
            description: format!("circle R={c} n={n}"),
        });
    }
    if let Some(radii) = &args.bridged {
        return Ok(BuiltSpace {
            space: bridged_circles(radii)?,
            window: None,
            description: format!("bridged circles {radii:?}"),
        });
    }
    let Some(f) = &args.family else {
        return Err(Error::invalid("give one of --space, --circle, --bridged or --family"));
    };
    let fam = family(f)?;
    let gens = generators(&fam, args.gens.as_deref())?;
    let window = build_window(&fam, &gens, args.radius, caps)?;
    Ok(BuiltSpace {
        space: window.space().clone(),
        description: format!("{f} window of radius {}", args.radius),
        window: Some(window),
    })
}

/// Whitespace-separated point labels.
pub fn loop_points(space: &FiniteMetricSpace, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|l| space.index_of(l).ok_or_else(|| Error::invalid(format!("unknown point {l:?}"))))
        .collect()
}
