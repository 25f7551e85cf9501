//! Built-in group families with exact multiplication and normal forms.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A group element in the normal form of its family.
///
/// The encoding is family-specific (see [`GroupFamily`]); the derived
/// ordering is the canonical lexicographic order on normal forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub Vec<i64>);

impl Elem {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        Elem(coords.into())
    }

    pub fn scalar(value: i64) -> Self {
        Elem(vec![value])
    }
}

/// Group families with a normal-form oracle.
///
/// Encodings:
/// * `FreeAbelian`: the coordinate vector.
/// * `Free`: the freely reduced word, letter `k+1` for generator `k`
///   and `-(k+1)` for its inverse.
/// * `HeisenbergZ`: `(x, y, z)` with
///   `(x1,y1,z1)(x2,y2,z2) = (x1+x2, y1+y2, z1+z2+x1*y2-x2*y1)`.
/// * `Cyclic`, `CyclicQuotientOfLine`: the residue in `0..m`.
/// * `FiniteTable`: the row index of the multiplication table.
/// * `DirectProduct`: `[len(left), left.., right..]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupFamily {
    FreeAbelian { rank: usize },
    Free { rank: usize },
    HeisenbergZ,
    Cyclic { modulus: u32 },
    FiniteTable { table: Vec<Vec<usize>> },
    DirectProduct { left: Box<GroupFamily>, right: Box<GroupFamily> },
    CyclicQuotientOfLine { modulus: u32 },
}

fn letter(gen: usize, inverse: bool) -> i64 {
    let l = gen as i64 + 1;
    if inverse {
        -l
    } else {
        l
    }
}

impl GroupFamily {
    /// The integers, written additively.
    pub fn line() -> Self {
        GroupFamily::FreeAbelian { rank: 1 }
    }

    pub fn direct_product(left: GroupFamily, right: GroupFamily) -> Self {
        GroupFamily::DirectProduct { left: Box::new(left), right: Box::new(right) }
    }

    /// Checks the family parameters (and the group axioms for tables).
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupFamily::FreeAbelian { rank } | GroupFamily::Free { rank } => {
                if *rank == 0 {
                    return Err(Error::invalid("rank must be at least 1"));
                }
                if matches!(self, GroupFamily::Free { .. }) && *rank > 26 {
                    return Err(Error::invalid("free groups support at most 26 generators"));
                }
            }
            GroupFamily::HeisenbergZ => {}
            GroupFamily::Cyclic { modulus } | GroupFamily::CyclicQuotientOfLine { modulus } => {
                if *modulus == 0 {
                    return Err(Error::invalid("modulus must be positive"));
                }
            }
            GroupFamily::FiniteTable { table } => validate_table(table)?,
            GroupFamily::DirectProduct { left, right } => {
                left.validate()?;
                right.validate()?;
            }
        }
        Ok(())
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupFamily::FreeAbelian { .. }
            | GroupFamily::Cyclic { .. }
            | GroupFamily::CyclicQuotientOfLine { .. } => true,
            GroupFamily::Free { rank } => *rank == 1,
            GroupFamily::HeisenbergZ => false,
            GroupFamily::FiniteTable { table } => {
                (0..table.len()).all(|i| (0..table.len()).all(|j| table[i][j] == table[j][i]))
            }
            GroupFamily::DirectProduct { left, right } => left.is_abelian() && right.is_abelian(),
        }
    }

    /// Number of elements for finite families.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupFamily::Cyclic { modulus } | GroupFamily::CyclicQuotientOfLine { modulus } => {
                Some(*modulus as usize)
            }
            GroupFamily::FiniteTable { table } => Some(table.len()),
            GroupFamily::DirectProduct { left, right } => Some(left.order()? * right.order()?),
            _ => None,
        }
    }

    pub fn identity(&self) -> Elem {
        match self {
            GroupFamily::FreeAbelian { rank } => Elem(vec![0; *rank]),
            GroupFamily::Free { .. } => Elem(Vec::new()),
            GroupFamily::HeisenbergZ => Elem(vec![0, 0, 0]),
            GroupFamily::Cyclic { .. } | GroupFamily::CyclicQuotientOfLine { .. } => Elem(vec![0]),
            GroupFamily::FiniteTable { table } => Elem(vec![table_identity(table) as i64]),
            GroupFamily::DirectProduct { left, right } => pack(&left.identity(), &right.identity()),
        }
    }

    pub fn multiply(&self, a: &Elem, b: &Elem) -> Elem {
        match self {
            GroupFamily::FreeAbelian { .. } => {
                Elem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
            }
            GroupFamily::Free { .. } => {
                let mut word = a.0.clone();
                for &l in &b.0 {
                    if word.last() == Some(&-l) {
                        word.pop();
                    } else {
                        word.push(l);
                    }
                }
                Elem(word)
            }
            GroupFamily::HeisenbergZ => {
                let (x1, y1, z1) = (a.0[0], a.0[1], a.0[2]);
                let (x2, y2, z2) = (b.0[0], b.0[1], b.0[2]);
                Elem(vec![x1 + x2, y1 + y2, z1 + z2 + x1 * y2 - x2 * y1])
            }
            GroupFamily::Cyclic { modulus } | GroupFamily::CyclicQuotientOfLine { modulus } => {
                Elem(vec![(a.0[0] + b.0[0]).rem_euclid(*modulus as i64)])
            }
            GroupFamily::FiniteTable { table } => {
                Elem(vec![table[a.0[0] as usize][b.0[0] as usize] as i64])
            }
            GroupFamily::DirectProduct { left, right } => {
                let (la, ra) = unpack(a);
                let (lb, rb) = unpack(b);
                pack(&left.multiply(&la, &lb), &right.multiply(&ra, &rb))
            }
        }
    }

    pub fn inverse(&self, a: &Elem) -> Elem {
        match self {
            GroupFamily::FreeAbelian { .. } | GroupFamily::HeisenbergZ => {
                Elem(a.0.iter().map(|x| -x).collect())
            }
            GroupFamily::Free { .. } => Elem(a.0.iter().rev().map(|l| -l).collect()),
            GroupFamily::Cyclic { modulus } | GroupFamily::CyclicQuotientOfLine { modulus } => {
                Elem(vec![(-a.0[0]).rem_euclid(*modulus as i64)])
            }
            GroupFamily::FiniteTable { table } => {
                let e = table_identity(table);
                let row = &table[a.0[0] as usize];
                let inv = row.iter().position(|&p| p == e).expect("validated table has inverses");
                Elem(vec![inv as i64])
            }
            GroupFamily::DirectProduct { left, right } => {
                let (l, r) = unpack(a);
                pack(&left.inverse(&l), &right.inverse(&r))
            }
        }
    }

    pub fn power(&self, a: &Elem, exponent: i64) -> Elem {
        let mut base = if exponent < 0 { self.inverse(a) } else { a.clone() };
        let mut e = exponent.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a Elem>) -> Elem {
        factors.into_iter().fold(self.identity(), |acc, f| self.multiply(&acc, f))
    }

    pub fn is_identity(&self, a: &Elem) -> bool {
        *a == self.identity()
    }

    /// Checks that `a` is a valid normal form for this family.
    pub fn check_element(&self, a: &Elem) -> Result<()> {
        let bad = |why: &str| Err(Error::invalid(format!("{:?} is not a normal form: {why}", a.0)));
        match self {
            GroupFamily::FreeAbelian { rank } => {
                if a.0.len() != *rank {
                    return bad("wrong number of coordinates");
                }
            }
            GroupFamily::Free { rank } => {
                for w in a.0.windows(2) {
                    if w[0] == -w[1] {
                        return bad("word is not freely reduced");
                    }
                }
                if a.0.iter().any(|&l| l == 0 || l.unsigned_abs() as usize > *rank) {
                    return bad("letter out of range");
                }
            }
            GroupFamily::HeisenbergZ => {
                if a.0.len() != 3 {
                    return bad("expected three coordinates");
                }
            }
            GroupFamily::Cyclic { modulus } | GroupFamily::CyclicQuotientOfLine { modulus } => {
                if a.0.len() != 1 || a.0[0] < 0 || a.0[0] >= *modulus as i64 {
                    return bad("expected a residue");
                }
            }
            GroupFamily::FiniteTable { table } => {
                if a.0.len() != 1 || a.0[0] < 0 || a.0[0] as usize >= table.len() {
                    return bad("expected a table index");
                }
            }
            GroupFamily::DirectProduct { left, right } => {
                if a.0.is_empty() || a.0[0] < 0 || a.0[0] as usize + 1 > a.0.len() {
                    return bad("malformed product encoding");
                }
                let (l, r) = unpack(a);
                left.check_element(&l)?;
                right.check_element(&r)?;
            }
        }
        Ok(())
    }

    /// Reduces an arbitrary representative to its normal form.
    pub fn normalize(&self, a: &Elem) -> Result<Elem> {
        match self {
            GroupFamily::Cyclic { modulus } | GroupFamily::CyclicQuotientOfLine { modulus }
                if a.0.len() == 1 =>
            {
                Ok(Elem(vec![a.0[0].rem_euclid(*modulus as i64)]))
            }
            GroupFamily::Free { .. } => {
                let reduced = self.multiply(&self.identity(), a);
                self.check_element(&reduced)?;
                Ok(reduced)
            }
            _ => {
                self.check_element(a)?;
                Ok(a.clone())
            }
        }
    }

    /// Basis used to express elements as words and to specify homomorphisms.
    pub fn basis(&self) -> Vec<Elem> {
        match self {
            GroupFamily::FreeAbelian { rank } => (0..*rank)
                .map(|i| {
                    let mut v = vec![0; *rank];
                    v[i] = 1;
                    Elem(v)
                })
                .collect(),
            GroupFamily::Free { rank } => (0..*rank).map(|i| Elem(vec![letter(i, false)])).collect(),
            GroupFamily::HeisenbergZ => {
                vec![Elem(vec![1, 0, 0]), Elem(vec![0, 1, 0]), Elem(vec![0, 0, 1])]
            }
            GroupFamily::Cyclic { .. } | GroupFamily::CyclicQuotientOfLine { .. } => {
                vec![Elem(vec![1])]
            }
            GroupFamily::FiniteTable { table } => (0..table.len()).map(|i| Elem(vec![i as i64])).collect(),
            GroupFamily::DirectProduct { left, right } => {
                let (le, re) = (left.identity(), right.identity());
                left.basis()
                    .iter()
                    .map(|l| pack(l, &re))
                    .chain(right.basis().iter().map(|r| pack(&le, r)))
                    .collect()
            }
        }
    }

    /// Writes `a` as a product of basis powers `(basis index, exponent)`.
    pub fn basis_word(&self, a: &Elem) -> Vec<(usize, i64)> {
        match self {
            GroupFamily::FreeAbelian { .. } => {
                a.0.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect()
            }
            GroupFamily::Free { .. } => a
                .0
                .iter()
                .map(|&l| ((l.unsigned_abs() - 1) as usize, l.signum()))
                .collect(),
            GroupFamily::HeisenbergZ => {
                let (x, y, z) = (a.0[0], a.0[1], a.0[2]);
                [(0, x), (1, y), (2, z - x * y)].into_iter().filter(|&(_, e)| e != 0).collect()
            }
            GroupFamily::Cyclic { .. } | GroupFamily::CyclicQuotientOfLine { .. } => {
                if a.0[0] == 0 {
                    Vec::new()
                } else {
                    vec![(0, a.0[0])]
                }
            }
            GroupFamily::FiniteTable { table } => {
                if a.0[0] as usize == table_identity(table) {
                    Vec::new()
                } else {
                    vec![(a.0[0] as usize, 1)]
                }
            }
            GroupFamily::DirectProduct { left, right } => {
                let (l, r) = unpack(a);
                let offset = left.basis().len();
                left.basis_word(&l)
                    .into_iter()
                    .chain(right.basis_word(&r).into_iter().map(|(i, e)| (i + offset, e)))
                    .collect()
            }
        }
    }

    /// Symmetric generating set used when none is given explicitly.
    pub fn standard_generators(&self) -> Vec<Elem> {
        let mut out = Vec::new();
        match self {
            GroupFamily::HeisenbergZ => {
                out.extend([
                    Elem(vec![1, 0, 0]),
                    Elem(vec![-1, 0, 0]),
                    Elem(vec![0, 1, 0]),
                    Elem(vec![0, -1, 0]),
                ]);
            }
            GroupFamily::FiniteTable { table } => {
                let e = table_identity(table);
                out.extend((0..table.len()).filter(|&i| i != e).map(|i| Elem(vec![i as i64])));
            }
            GroupFamily::DirectProduct { left, right } => {
                let (le, re) = (left.identity(), right.identity());
                out.extend(left.standard_generators().iter().map(|l| pack(l, &re)));
                out.extend(right.standard_generators().iter().map(|r| pack(&le, r)));
            }
            _ => {
                for b in self.basis() {
                    let inv = self.inverse(&b);
                    out.push(b);
                    out.push(inv);
                }
            }
        }
        out.retain(|g| !self.is_identity(g));
        out.sort();
        out.dedup();
        out
    }

    /// All elements of a finite family, in canonical order.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        let mut out: Vec<Elem> = match self {
            GroupFamily::Cyclic { modulus } | GroupFamily::CyclicQuotientOfLine { modulus } => {
                (0..*modulus as i64).map(Elem::scalar).collect()
            }
            GroupFamily::FiniteTable { table } => (0..table.len() as i64).map(Elem::scalar).collect(),
            GroupFamily::DirectProduct { left, right } => {
                let (ls, rs) = (left.elements()?, right.elements()?);
                ls.iter().flat_map(|l| rs.iter().map(move |r| pack(l, r))).collect()
            }
            _ => return None,
        };
        out.sort();
        Some(out)
    }

    /// Human-readable rendering, also used as point ids.
    pub fn format_element(&self, a: &Elem) -> String {
        match self {
            GroupFamily::FreeAbelian { rank: 1 } => a.0[0].to_string(),
            GroupFamily::FreeAbelian { .. } | GroupFamily::HeisenbergZ => {
                let parts: Vec<String> = a.0.iter().map(|c| c.to_string()).collect();
                format!("({})", parts.join(","))
            }
            GroupFamily::Free { .. } => {
                if a.0.is_empty() {
                    return "e".to_string();
                }
                let mut s = String::new();
                for &l in &a.0 {
                    let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
                    s.push(if l < 0 { c.to_ascii_uppercase() } else { c });
                }
                s
            }
            GroupFamily::Cyclic { .. } | GroupFamily::CyclicQuotientOfLine { .. } => a.0[0].to_string(),
            GroupFamily::FiniteTable { .. } => format!("g{}", a.0[0]),
            GroupFamily::DirectProduct { left, right } => {
                let (l, r) = unpack(a);
                let mut s = String::new();
                let _ = write!(s, "({};{})", left.format_element(&l), right.format_element(&r));
                s
            }
        }
    }

    /// Parses the rendering produced by [`format_element`](Self::format_element).
    pub fn parse_element(&self, text: &str) -> Result<Elem> {
        let text = text.trim();
        let bad = || Error::Parse(format!("cannot parse element {text:?}"));
        let ints = |t: &str| -> Result<Vec<i64>> {
            t.trim_start_matches('(')
                .trim_end_matches(')')
                .split(',')
                .map(|p| p.trim().parse::<i64>().map_err(|_| bad()))
                .collect()
        };
        let elem = match self {
            GroupFamily::FreeAbelian { .. } | GroupFamily::HeisenbergZ => Elem(ints(text)?),
            GroupFamily::Cyclic { .. } | GroupFamily::CyclicQuotientOfLine { .. } => {
                Elem(vec![text.parse::<i64>().map_err(|_| bad())?])
            }
            GroupFamily::FiniteTable { .. } => {
                Elem(vec![text.trim_start_matches('g').parse::<i64>().map_err(|_| bad())?])
            }
            GroupFamily::Free { .. } => {
                if text == "e" || text.is_empty() {
                    Elem(Vec::new())
                } else {
                    let mut word = Vec::new();
                    for c in text.chars() {
                        if !c.is_ascii_alphabetic() {
                            return Err(bad());
                        }
                        let gen = (c.to_ascii_lowercase() as u8 - b'a') as usize;
                        word.push(letter(gen, c.is_ascii_uppercase()));
                    }
                    Elem(word)
                }
            }
            GroupFamily::DirectProduct { left, right } => {
                let inner = text.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
                let split = split_top_level(inner, ';').ok_or_else(bad)?;
                pack(&left.parse_element(&inner[..split])?, &right.parse_element(&inner[split + 1..])?)
            }
        };
        self.normalize(&elem)
    }
}

fn split_top_level(text: &str, sep: char) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn pack(left: &Elem, right: &Elem) -> Elem {
    let mut v = Vec::with_capacity(1 + left.0.len() + right.0.len());
    v.push(left.0.len() as i64);
    v.extend_from_slice(&left.0);
    v.extend_from_slice(&right.0);
    Elem(v)
}

fn unpack(a: &Elem) -> (Elem, Elem) {
    let split = 1 + a.0[0] as usize;
    (Elem(a.0[1..split].to_vec()), Elem(a.0[split..].to_vec()))
}

fn table_identity(table: &[Vec<usize>]) -> usize {
    (0..table.len())
        .find(|&e| (0..table.len()).all(|j| table[e][j] == j && table[j][e] == j))
        .unwrap_or(0)
}

fn validate_table(table: &[Vec<usize>]) -> Result<()> {
    let n = table.len();
    if n == 0 {
        return Err(Error::invalid("multiplication table is empty"));
    }
    if table.iter().any(|row| row.len() != n || row.iter().any(|&p| p >= n)) {
        return Err(Error::invalid("multiplication table must be square with entries in range"));
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j))
        .ok_or_else(|| Error::invalid("multiplication table has no identity"))?;
    for i in 0..n {
        if !table[i].contains(&e) {
            return Err(Error::invalid(format!("element {i} has no inverse")));
        }
        for j in 0..n {
            for k in 0..n {
                if table[table[i][j]][k] != table[i][table[j][k]] {
                    return Err(Error::invalid(format!("table is not associative at ({i},{j},{k})")));
                }
            }
        }
    }
    Ok(())
}

/// A homomorphism given by the images of the source family's basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homomorphism {
    pub source: GroupFamily,
    pub target: GroupFamily,
    pub images: Vec<Elem>,
}

impl Homomorphism {
    /// Builds the homomorphism, checking that the images satisfy the
    /// defining relations of the source family.
    pub fn new(source: GroupFamily, target: GroupFamily, images: Vec<Elem>) -> Result<Self> {
        source.validate()?;
        target.validate()?;
        if images.len() != source.basis().len() {
            return Err(Error::invalid(format!(
                "expected {} basis images, got {}",
                source.basis().len(),
                images.len()
            )));
        }
        let images = images.iter().map(|g| target.normalize(g)).collect::<Result<Vec<_>>>()?;
        check_relations(&source, &target, &images)?;
        Ok(Homomorphism { source, target, images })
    }

    pub fn apply(&self, a: &Elem) -> Elem {
        self.source
            .basis_word(a)
            .into_iter()
            .fold(self.target.identity(), |acc, (i, e)| {
                self.target.multiply(&acc, &self.target.power(&self.images[i], e))
            })
    }

    pub fn in_kernel(&self, a: &Elem) -> bool {
        self.target.is_identity(&self.apply(a))
    }
}

fn commute(target: &GroupFamily, a: &Elem, b: &Elem) -> bool {
    target.multiply(a, b) == target.multiply(b, a)
}

fn check_relations(source: &GroupFamily, target: &GroupFamily, images: &[Elem]) -> Result<()> {
    let fail = |what: &str| Err(Error::invalid(format!("images violate the relation {what}")));
    match source {
        GroupFamily::FreeAbelian { .. } => {
            for i in 0..images.len() {
                for j in i + 1..images.len() {
                    if !commute(target, &images[i], &images[j]) {
                        return fail(&format!("[e{i}, e{j}] = 1"));
                    }
                }
            }
        }
        GroupFamily::Free { .. } => {}
        GroupFamily::HeisenbergZ => {
            let (x, y, z) = (&images[0], &images[1], &images[2]);
            if !commute(target, x, z) || !commute(target, y, z) {
                return fail("z central");
            }
            let xy = target.multiply(x, y);
            let yx = target.multiply(y, x);
            let commutator = target.multiply(&xy, &target.inverse(&yx));
            if commutator != target.power(z, 2) {
                return fail("[x, y] = z^2");
            }
        }
        GroupFamily::Cyclic { modulus } | GroupFamily::CyclicQuotientOfLine { modulus } => {
            if !target.is_identity(&target.power(&images[0], *modulus as i64)) {
                return fail("t^m = 1");
            }
        }
        GroupFamily::FiniteTable { table } => {
            for i in 0..table.len() {
                for j in 0..table.len() {
                    if target.multiply(&images[i], &images[j]) != images[table[i][j]] {
                        return fail(&format!("g{i} g{j} = g{}", table[i][j]));
                    }
                }
            }
        }
        GroupFamily::DirectProduct { left, right } => {
            let split = left.basis().len();
            check_relations(left, target, &images[..split])?;
            check_relations(right, target, &images[split..])?;
            for a in &images[..split] {
                for b in &images[split..] {
                    if !commute(target, a, b) {
                        return fail("factors commute");
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_law() {
        let h = GroupFamily::HeisenbergZ;
        let x = Elem::new([1, 0, 0]);
        let y = Elem::new([0, 1, 0]);
        assert_eq!(h.multiply(&x, &y), Elem::new([1, 1, 1]));
        assert_eq!(h.multiply(&y, &x), Elem::new([1, 1, -1]));
        let xy = h.multiply(&x, &y);
        let comm = h.multiply(&xy, &h.inverse(&h.multiply(&y, &x)));
        assert_eq!(comm, Elem::new([0, 0, 2]));
        let g = Elem::new([2, -3, 5]);
        assert!(h.is_identity(&h.multiply(&g, &h.inverse(&g))));
    }

    #[test]
    fn free_words_reduce() {
        let f = GroupFamily::Free { rank: 2 };
        let ab = f.parse_element("ab").unwrap();
        let b_inv_a = f.parse_element("BA").unwrap();
        assert!(f.is_identity(&f.multiply(&ab, &b_inv_a)));
        assert_eq!(f.format_element(&f.inverse(&ab)), "BA");
        assert!(f.check_element(&Elem::new([1, -1])).is_err());
    }

    #[test]
    fn basis_words_evaluate_back() {
        let families = [
            GroupFamily::FreeAbelian { rank: 2 },
            GroupFamily::HeisenbergZ,
            GroupFamily::Free { rank: 2 },
            GroupFamily::direct_product(GroupFamily::line(), GroupFamily::Cyclic { modulus: 3 }),
        ];
        let samples = [
            Elem::new([3, -2]),
            Elem::new([2, -1, 7]),
            Elem::new([1, 2, -1, -1]),
            pack(&Elem::new([-4]), &Elem::new([2])),
        ];
        for (family, g) in families.iter().zip(&samples) {
            let basis = family.basis();
            let rebuilt = family
                .basis_word(g)
                .into_iter()
                .fold(family.identity(), |acc, (i, e)| family.multiply(&acc, &family.power(&basis[i], e)));
            assert_eq!(&rebuilt, g, "{family:?}");
        }
    }

    #[test]
    fn table_validation_catches_non_groups() {
        let z2 = vec![vec![0, 1], vec![1, 0]];
        assert!(GroupFamily::FiniteTable { table: z2 }.validate().is_ok());
        let broken = vec![vec![0, 1], vec![1, 1]];
        assert!(GroupFamily::FiniteTable { table: broken }.validate().is_err());
    }

    #[test]
    fn homomorphism_relations_are_checked() {
        let f2 = GroupFamily::Free { rank: 2 };
        let z2 = GroupFamily::Cyclic { modulus: 2 };
        let parity = Homomorphism::new(f2.clone(), z2.clone(), vec![Elem::scalar(1), Elem::scalar(1)]).unwrap();
        assert!(parity.in_kernel(&f2.parse_element("ab").unwrap()));
        assert!(!parity.in_kernel(&f2.parse_element("aab").unwrap()));
        // Z/3 -> Z/2 sending the generator to 1 is not a homomorphism.
        assert!(Homomorphism::new(GroupFamily::Cyclic { modulus: 3 }, z2, vec![Elem::scalar(1)]).is_err());
        let center = Homomorphism::new(
            GroupFamily::HeisenbergZ,
            GroupFamily::FreeAbelian { rank: 2 },
            vec![Elem::new([1, 0]), Elem::new([0, 1]), Elem::new([0, 0])],
        )
        .unwrap();
        assert!(center.in_kernel(&Elem::new([0, 0, 4])));
        assert!(!center.in_kernel(&Elem::new([1, 0, 0])));
    }

    #[test]
    fn product_elements_roundtrip_text() {
        let g = GroupFamily::direct_product(GroupFamily::Free { rank: 2 }, GroupFamily::Cyclic { modulus: 4 });
        let a = g.parse_element("(aB;3)").unwrap();
        assert_eq!(g.format_element(&a), "(aB;3)");
        assert_eq!(g.elements(), None);
    }
}
