use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{Elem, GroupFamily};

/// A generator symbol or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn pos(generator: usize) -> Self {
        Letter { generator, inverse: false }
    }

    pub fn neg(generator: usize) -> Self {
        Letter { generator, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }
}

pub type Word = Vec<Letter>;

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inv()).collect()
}

pub fn free_reduce_word(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn cyclically_reduce(w: &[Letter]) -> Word {
    let mut w = free_reduce_word(w);
    while w.len() >= 2 && w[0] == w[w.len() - 1].inv() {
        w.pop();
        w.remove(0);
    }
    w
}

/// Canonical representative of a relator: cyclically reduced, then the
/// least cyclic permutation of it or its inverse.
pub fn normalize_relator(w: &[Letter]) -> Word {
    let w = cyclically_reduce(w);
    if w.is_empty() {
        return w;
    }
    let inv = inverse_word(&w);
    let n = w.len();
    let mut best: Option<Word> = None;
    for base in [&w, &inv] {
        for k in 0..n {
            let rot: Word = base[k..].iter().chain(&base[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.expect("nonempty")
}

/// Images of the generators in a group family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub family: GroupFamily,
    pub images: Vec<Elem>,
}

impl Evaluation {
    pub fn evaluate(&self, w: &[Letter]) -> Elem {
        let mut g = self.family.identity();
        for l in w {
            let img = &self.images[l.generator];
            g = if l.inverse {
                self.family.multiply(&g, &self.family.inverse(img))
            } else {
                self.family.multiply(&g, img)
            };
        }
        g
    }
}

/// A finite presentation with a recorded bound on relator length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
    pub bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<Evaluation>,
}

impl Presentation {
    /// Builds a presentation, recording the longest relator as its bound
    /// and checking relators against the evaluation map when given.
    pub fn new(generators: Vec<String>, relators: Vec<Word>, evaluation: Option<Evaluation>) -> Result<Self> {
        let bound = relators.iter().map(Vec::len).max().unwrap_or(0);
        let p = Presentation { generators, relators, bound, evaluation };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = self.generators.clone();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate generator names"));
        }
        if self.generators.iter().any(|g| g.is_empty() || g.contains(char::is_whitespace) || g.contains('^')) {
            return Err(Error::invalid("generator names must be nonempty and free of spaces and '^'"));
        }
        for r in &self.relators {
            if r.iter().any(|l| l.generator >= self.generators.len()) {
                return Err(Error::invalid("relator uses an unknown generator"));
            }
            if r.len() > self.bound {
                return Err(Error::invalid(format!("relator longer than the recorded bound {}", self.bound)));
            }
        }
        if let Some(ev) = &self.evaluation {
            if ev.images.len() != self.generators.len() {
                return Err(Error::invalid("evaluation needs one image per generator"));
            }
            for img in &ev.images {
                ev.family.check_element(img)?;
            }
            if let Some(r) = self.relators.iter().find(|r| !ev.family.is_identity(&ev.evaluate(r))) {
                return Err(Error::invalid(format!(
                    "relator {} does not evaluate to the identity",
                    self.format_word(r)
                )));
            }
        }
        Ok(())
    }

    pub fn with_bound(mut self, bound: usize) -> Result<Self> {
        self.bound = bound;
        self.validate()?;
        Ok(self)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Relators in canonical form, sorted and without duplicates or
    /// trivial words.
    pub fn normalized_relators(&self) -> Vec<Word> {
        let mut out: Vec<Word> =
            self.relators.iter().map(|r| normalize_relator(r)).filter(|r| !r.is_empty()).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn normalized(&self) -> Self {
        Presentation { relators: self.normalized_relators(), ..self.clone() }
    }

    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = w
            .iter()
            .map(|l| {
                let name = &self.generators[l.generator];
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect();
        parts.join(" ")
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split_whitespace()
            .filter(|t| *t != "1" || self.generator_index("1").is_some())
            .map(|tok| {
                let (name, inverse) = match tok.strip_suffix("^-1") {
                    Some(n) => (n, true),
                    None => (tok, false),
                };
                let generator = self
                    .generator_index(name)
                    .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
                Ok(Letter { generator, inverse })
            })
            .collect()
    }

    /// Plain-text form: a `# bound: n` header, a generator line and one
    /// relator per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# bound: {}", self.bound);
        let _ = writeln!(s, "generators: {}", self.generators.join(" "));
        for r in &self.relators {
            let _ = writeln!(s, "{}", self.format_word(r));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut bound = None;
        let mut generators = None;
        let mut lines = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(b) = rest.trim().strip_prefix("bound:") {
                    bound = Some(b.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad bound {b:?}")))?);
                }
            } else if let Some(rest) = line.strip_prefix("generators:") {
                generators = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
            } else {
                lines.push(line);
            }
        }
        let generators = generators.ok_or_else(|| Error::Parse("missing `generators:` line".into()))?;
        let mut p = Presentation { generators, relators: Vec::new(), bound: 0, evaluation: None };
        p.relators = lines.iter().map(|l| p.parse_word(l)).collect::<Result<_>>()?;
        let longest = p.relators.iter().map(Vec::len).max().unwrap_or(0);
        p.bound = bound.unwrap_or(longest);
        p.validate()?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentations serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Presentation = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(spec: &[(usize, bool)]) -> Word {
        spec.iter().map(|&(g, i)| Letter { generator: g, inverse: i }).collect()
    }

    #[test]
    fn normal_forms_agree_on_conjugates_and_inverses() {
        // x z x^-1 z^-1 and x^-1 z x z^-1 are the same relator up to rotation and inversion.
        let a = w(&[(0, false), (2, false), (0, true), (2, true)]);
        let b = w(&[(0, true), (2, false), (0, false), (2, true)]);
        assert_eq!(normalize_relator(&a), normalize_relator(&b));
        assert_eq!(normalize_relator(&w(&[(0, false), (1, false), (1, true), (0, true)])), vec![]);
    }

    #[test]
    fn text_roundtrip() {
        let text = "# bound: 4\ngenerators: x y\nx y x^-1 y^-1\n";
        let p = Presentation::from_text(text).unwrap();
        assert_eq!(p.bound, 4);
        assert_eq!(p.to_text(), text);
        assert_eq!(Presentation::from_json(&p.to_json()).unwrap(), p);
        assert!(Presentation::from_text("generators: x\nq\n").is_err());
        assert!(Presentation::from_text("# bound: 1\ngenerators: x\nx x\n").is_err());
    }

    #[test]
    fn evaluation_is_checked() {
        let ev = Evaluation { family: GroupFamily::Cyclic { modulus: 3 }, images: vec![Elem::scalar(1)] };
        let r = w(&[(0, false); 3]);
        assert!(Presentation::new(vec!["a".into()], vec![r], Some(ev.clone())).is_ok());
        let r = w(&[(0, false); 2]);
        assert!(Presentation::new(vec!["a".into()], vec![r], Some(ev)).is_err());
    }
}
