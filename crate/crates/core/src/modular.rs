//! SL2(Z) and its theta subgroup: element classification, presentations,
//! continued-fraction word decomposition, and cusp orbits with their
//! parabolic stabilizer generators.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::QMatrix;

/// A 2x2 integer matrix of determinant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl IntMatrix2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(IntMatrix2 { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(BigInt::from(a), BigInt::from(b), BigInt::from(c), BigInt::from(d))
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1).unwrap()
    }

    pub fn minus_identity() -> Self {
        Self::from_i64(-1, 0, 0, -1).unwrap()
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn mul(&self, other: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2 {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    /// Inverse of a determinant-1 matrix: (d, -b; -c, a).
    pub fn inverse(&self) -> IntMatrix2 {
        IntMatrix2 {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    pub fn neg(&self) -> IntMatrix2 {
        IntMatrix2 {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> IntMatrix2 {
        if e < 0 {
            return self.inverse().pow(-e);
        }
        let mut result = IntMatrix2::identity();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn is_minus_identity(&self) -> bool {
        self == &IntMatrix2::minus_identity()
    }

    /// Parses the CLI literal format `a,b;c,d`.
    pub fn parse(s: &str) -> Result<Self> {
        let rows: Vec<&str> = s.trim().split(';').collect();
        if rows.len() != 2 {
            return Err(Error::Parse(format!("matrix literal `{s}` must have two rows")));
        }
        let mut vals = Vec::with_capacity(4);
        for row in rows {
            let cells: Vec<&str> = row.split(',').collect();
            if cells.len() != 2 {
                return Err(Error::Parse(format!("matrix row `{row}` must have two entries")));
            }
            for cell in cells {
                let v: BigInt = cell
                    .trim()
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad integer `{cell}`: {e}")))?;
                vals.push(v);
            }
        }
        let mut it = vals.into_iter();
        IntMatrix2::new(
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        )
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

/// Conjugacy type of an element of SL2(Z), decided by the trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementClass {
    Identity,
    MinusIdentity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ElementClass::Identity => "identity",
            ElementClass::MinusIdentity => "minus_identity",
            ElementClass::Elliptic => "elliptic",
            ElementClass::Parabolic => "parabolic",
            ElementClass::Hyperbolic => "hyperbolic",
        };
        f.write_str(s)
    }
}

/// Trace classification: |tr| < 2 elliptic, |tr| = 2 parabolic (excluding
/// +-I, which are reported separately), |tr| > 2 hyperbolic.
pub fn classify(m: &IntMatrix2) -> ElementClass {
    if m.is_identity() {
        return ElementClass::Identity;
    }
    if m.is_minus_identity() {
        return ElementClass::MinusIdentity;
    }
    let t = m.trace().abs();
    match t.cmp(&BigInt::from(2)) {
        std::cmp::Ordering::Less => ElementClass::Elliptic,
        std::cmp::Ordering::Equal => ElementClass::Parabolic,
        std::cmp::Ordering::Greater => ElementClass::Hyperbolic,
    }
}

/// Membership in the theta subgroup: exactly one odd entry in each row.
pub fn theta_member(m: &IntMatrix2) -> bool {
    let odd = |x: &BigInt| x.is_odd();
    (odd(m.a()) ^ odd(m.b())) && (odd(m.c()) ^ odd(m.d()))
}

/// Membership in the group of homology automorphisms realised in rank d:
/// determinant 1, plus the one-odd-entry-per-row condition unless
/// n is 1, 3 or 7.
pub fn gamma_d_member(m: &[Vec<BigInt>], n: u64) -> Result<bool> {
    if n % 2 == 0 {
        return Err(Error::InvalidArgument(format!("n must be odd, got {n}")));
    }
    let d = m.len();
    for row in m {
        if row.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: row.len() });
        }
    }
    let q = QMatrix::from_rows(
        m.iter()
            .map(|row| row.iter().map(|x| crate::linalg::Rational::from_integer(x.clone())).collect())
            .collect(),
    )?;
    if !q.determinant()?.is_one() {
        return Ok(false);
    }
    if matches!(n, 1 | 3 | 7) {
        return Ok(true);
    }
    Ok(m.iter().all(|row| row.iter().filter(|x| x.is_odd()).count() == 1))
}

/// A freely reduced word in named generators with integer exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupWord {
    letters: Vec<(String, i64)>,
}

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord { letters: Vec::new() }
    }

    pub fn letter(name: &str, exp: i64) -> Self {
        let mut w = GroupWord::identity();
        w.push(name, exp);
        w
    }

    pub fn from_letters(letters: &[(&str, i64)]) -> Self {
        let mut w = GroupWord::identity();
        for (name, exp) in letters {
            w.push(name, *exp);
        }
        w
    }

    /// Appends a letter, merging with the tail and dropping cancellations so
    /// the word stays freely reduced.
    pub fn push(&mut self, name: &str, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == name {
                last.1 += exp;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((name.to_string(), exp));
    }

    pub fn extend(&mut self, other: &GroupWord) {
        for (name, exp) in &other.letters {
            self.push(name, *exp);
        }
    }

    pub fn inverse(&self) -> GroupWord {
        let mut w = GroupWord::identity();
        for (name, exp) in self.letters.iter().rev() {
            w.push(name, -exp);
        }
        w
    }

    pub fn letters(&self) -> &[(String, i64)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of letters counted with multiplicity.
    pub fn length(&self) -> u64 {
        self.letters.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    /// Parses the `S^-1*U^2` string format ("1" denotes the empty word).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut w = GroupWord::identity();
        if s.is_empty() || s == "1" {
            return Ok(w);
        }
        for piece in s.split('*') {
            let piece = piece.trim();
            let (name, exp) = match piece.split_once('^') {
                Some((n, e)) => {
                    let exp: i64 = e
                        .trim()
                        .parse()
                        .map_err(|err| Error::Parse(format!("bad exponent `{e}`: {err}")))?;
                    (n.trim(), exp)
                }
                None => (piece, 1),
            };
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric()) {
                return Err(Error::Parse(format!("bad generator name `{name}`")));
            }
            w.push(name, exp);
        }
        Ok(w)
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|(name, exp)| {
                if *exp == 1 {
                    name.clone()
                } else {
                    format!("{name}^{exp}")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// The two groups this library works with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupName {
    Sl2z,
    Theta,
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupName::Sl2z => "sl2z",
            GroupName::Theta => "theta",
        })
    }
}

impl std::str::FromStr for GroupName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sl2z" => Ok(GroupName::Sl2z),
            "theta" => Ok(GroupName::Theta),
            other => Err(Error::Parse(format!("unknown group `{other}`"))),
        }
    }
}

/// Generators with matrix images plus relator words; drives the cohomology
/// computations.
#[derive(Debug, Clone)]
pub struct GroupPresentation {
    pub name: GroupName,
    generators: Vec<(String, IntMatrix2)>,
    relators: Vec<GroupWord>,
}

impl GroupPresentation {
    /// SL2(Z) = < A, B | A^4 = A^2 B^-3 = 1 > with A = (0 1; -1 0) and
    /// B = (0 1; -1 1).
    pub fn sl2z() -> Self {
        GroupPresentation {
            name: GroupName::Sl2z,
            generators: vec![
                ("A".to_string(), IntMatrix2::from_i64(0, 1, -1, 0).unwrap()),
                ("B".to_string(), IntMatrix2::from_i64(0, 1, -1, 1).unwrap()),
            ],
            relators: vec![
                GroupWord::from_letters(&[("A", 4)]),
                GroupWord::from_letters(&[("A", 2), ("B", -3)]),
            ],
        }
    }

    /// Theta subgroup presented on S = (0 -1; 1 0), U = (1 2; 0 1) and the
    /// redundant central generator Z = -I = S^2, with relators S^4,
    /// S^2 U S^-2 U^-1 and Z^-1 S^2. The projectivized group is Z/2 * Z on
    /// the images of S and U; this is the central extension by {+-I}.
    pub fn theta() -> Self {
        GroupPresentation {
            name: GroupName::Theta,
            generators: vec![
                ("S".to_string(), IntMatrix2::from_i64(0, -1, 1, 0).unwrap()),
                ("U".to_string(), IntMatrix2::from_i64(1, 2, 0, 1).unwrap()),
                ("Z".to_string(), IntMatrix2::minus_identity()),
            ],
            relators: vec![
                GroupWord::from_letters(&[("S", 4)]),
                GroupWord::from_letters(&[("S", 2), ("U", 1), ("S", -2), ("U", -1)]),
                GroupWord::from_letters(&[("Z", -1), ("S", 2)]),
            ],
        }
    }

    pub fn for_group(name: GroupName) -> Self {
        match name {
            GroupName::Sl2z => Self::sl2z(),
            GroupName::Theta => Self::theta(),
        }
    }

    pub fn generators(&self) -> &[(String, IntMatrix2)] {
        &self.generators
    }

    pub fn relators(&self) -> &[GroupWord] {
        &self.relators
    }

    pub fn generator(&self, name: &str) -> Result<&IntMatrix2> {
        self.generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Product of generator images with integer exponents.
    pub fn evaluate_word(&self, w: &GroupWord) -> Result<IntMatrix2> {
        let mut acc = IntMatrix2::identity();
        for (name, exp) in w.letters() {
            let img = self.generator(name)?;
            acc = acc.mul(&img.pow(*exp));
        }
        Ok(acc)
    }

    pub fn contains(&self, m: &IntMatrix2) -> bool {
        match self.name {
            GroupName::Sl2z => true,
            GroupName::Theta => theta_member(m),
        }
    }

    /// Word decomposition of a member over this presentation's generators.
    pub fn word_for(&self, m: &IntMatrix2) -> Result<GroupWord> {
        match self.name {
            GroupName::Sl2z => Ok(sl2z_word(m)),
            GroupName::Theta => theta_word(m),
        }
    }

    /// Breadth-first enumeration of all products of at most `radius`
    /// generator letters, deduplicated by matrix; deterministic order.
    pub fn ball(&self, radius: u32) -> Vec<(IntMatrix2, GroupWord)> {
        let mut alphabet: Vec<(String, i64, IntMatrix2)> = Vec::new();
        for (name, img) in &self.generators {
            alphabet.push((name.clone(), 1, img.clone()));
            let inv = img.inverse();
            if &inv != img {
                alphabet.push((name.clone(), -1, inv));
            }
        }
        let mut seen: HashSet<IntMatrix2> = HashSet::new();
        let mut out: Vec<(IntMatrix2, GroupWord)> = Vec::new();
        seen.insert(IntMatrix2::identity());
        out.push((IntMatrix2::identity(), GroupWord::identity()));
        let mut frontier = vec![0usize];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &idx in &frontier {
                let (m, w) = out[idx].clone();
                for (name, exp, img) in &alphabet {
                    let m2 = m.mul(img);
                    if seen.insert(m2.clone()) {
                        let mut w2 = w.clone();
                        w2.push(name, *exp);
                        next.push(out.len());
                        out.push((m2, w2));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        out
    }

    /// Every relator must evaluate to the identity matrix.
    pub fn validate(&self) -> Result<()> {
        for r in &self.relators {
            let m = self.evaluate_word(r)?;
            if !m.is_identity() {
                return Err(Error::InvalidArgument(format!(
                    "relator {r} evaluates to {m}, not the identity"
                )));
            }
        }
        Ok(())
    }
}

/// Quotient q minimizing |a - q*c| (ties resolved toward the smaller q).
fn nearest_quotient(a: &BigInt, c: &BigInt) -> BigInt {
    let q0 = a.div_floor(c);
    let r0 = a - &q0 * c;
    let r1 = &r0 - &c.abs();
    if r1.abs() < r0.abs() {
        if c.is_positive() {
            q0 + 1
        } else {
            q0 - 1
        }
    } else {
        q0
    }
}

fn exponent_of(q: &BigInt) -> i64 {
    i64::try_from(q).expect("continued-fraction exponent fits in i64")
}

/// Decomposes an element of SL2(Z) as a word in A = (0 1; -1 0) and
/// B = (0 1; -1 1) by the Euclidean algorithm on the first column, using
/// T = (1 1; 0 1) = B^-1 A and the column swap A.
pub fn sl2z_word(m: &IntMatrix2) -> GroupWord {
    enum Op {
        Swap,
        TPow(BigInt),
    }
    let alpha = IntMatrix2::from_i64(0, 1, -1, 0).unwrap();
    let t = IntMatrix2::from_i64(1, 1, 0, 1).unwrap();

    let mut g = m.clone();
    let mut applied: Vec<Op> = Vec::new();
    while !g.c().is_zero() {
        if g.a().abs() >= g.c().abs() {
            let q = nearest_quotient(g.a(), g.c());
            g = t.pow(-exponent_of(&q)).mul(&g);
            applied.push(Op::TPow(q));
        }
        g = alpha.mul(&g);
        applied.push(Op::Swap);
    }

    // g is now +-T^k; reconstruct m = applied_1^-1 ... applied_n^-1 * g.
    let mut word = GroupWord::identity();
    let push_t_power = |word: &mut GroupWord, q: i64| {
        for _ in 0..q.abs() {
            if q > 0 {
                word.push("B", -1);
                word.push("A", 1);
            } else {
                word.push("A", -1);
                word.push("B", 1);
            }
        }
    };
    for op in &applied {
        match op {
            Op::Swap => word.push("A", -1),
            Op::TPow(q) => push_t_power(&mut word, exponent_of(q)),
        }
    }
    if g.a().is_one() {
        push_t_power(&mut word, exponent_of(g.b()));
    } else {
        // g = -T^{-b}: emit A^2 = -I, then the translation part
        word.push("A", 2);
        push_t_power(&mut word, -exponent_of(g.b()));
    }
    word
}

/// Decomposes a theta-subgroup member as a word in S = (0 -1; 1 0),
/// U = (1 2; 0 1) and Z = -I by the even continued-fraction algorithm.
/// Non-members are rejected.
pub fn theta_word(m: &IntMatrix2) -> Result<GroupWord> {
    if !theta_member(m) {
        return Err(Error::NotInGroup("theta".to_string()));
    }
    enum Op {
        Swap,
        UPow(BigInt),
    }
    let s = IntMatrix2::from_i64(0, -1, 1, 0).unwrap();
    let u = IntMatrix2::from_i64(1, 2, 0, 1).unwrap();

    let mut g = m.clone();
    let mut applied: Vec<Op> = Vec::new();
    while !g.c().is_zero() {
        if g.a().abs() > g.c().abs() {
            // reduce a modulo 2c; parities of a and c differ, so the
            // remainder is strictly smaller than |c|
            let q = nearest_quotient(g.a(), &(g.c() * 2));
            g = u.pow(-exponent_of(&q)).mul(&g);
            applied.push(Op::UPow(q));
        }
        g = s.mul(&g);
        applied.push(Op::Swap);
    }

    let mut word = GroupWord::identity();
    for op in &applied {
        match op {
            Op::Swap => word.push("S", -1),
            Op::UPow(q) => word.push("U", exponent_of(q)),
        }
    }
    let half_b = g.b() / 2;
    if g.a().is_one() {
        word.push("U", exponent_of(&half_b));
    } else {
        word.push("Z", 1);
        word.push("U", -exponent_of(&half_b));
    }
    Ok(word)
}

/// A cusp orbit with its positive-trace stabilizer generator and width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspClass {
    /// Primitive integer pair [p:q] representing the cusp p/q (q = 0 is the
    /// cusp at infinity).
    pub representative: (BigInt, BigInt),
    /// Generator of the positive-trace stabilizer of the cusp.
    pub stabilizer_generator: IntMatrix2,
    pub width: u64,
}

impl CuspClass {
    pub fn label(&self) -> String {
        format!("[{}:{}]", self.representative.0, self.representative.1)
    }
}

/// Matrix with first column (p; q), completed to determinant 1.
fn scaling_matrix(p: &BigInt, q: &BigInt) -> IntMatrix2 {
    let e = p.extended_gcd(q);
    assert!(e.gcd.is_one(), "cusp representative must be primitive");
    // p*x + q*y = 1, so (p -y; q x) has determinant p*x + q*y = 1
    IntMatrix2::new(p.clone(), -e.y.clone(), q.clone(), e.x.clone()).unwrap()
}

/// Of a parabolic generator and its inverse, prefer positive lower-left
/// entry, falling back to positive upper-right entry.
fn canonical_parabolic(m: IntMatrix2) -> IntMatrix2 {
    let inv = m.inverse();
    if m.c().is_positive() || (m.c().is_zero() && m.b().is_positive()) {
        m
    } else {
        inv
    }
}

/// One cusp class per orbit of the group on P^1(Q): a single class for
/// SL2(Z), and the two classes [1:0], [1:1] for the theta subgroup. The
/// width is the least h >= 1 whose conjugated translation T^h lands in the
/// group; the search is bounded because both groups have index <= 3.
pub fn cusp_orbits(g: &GroupPresentation) -> Vec<CuspClass> {
    let reps: Vec<(i64, i64)> = match g.name {
        GroupName::Sl2z => vec![(1, 0)],
        GroupName::Theta => vec![(1, 0), (1, 1)],
    };
    let t = IntMatrix2::from_i64(1, 1, 0, 1).unwrap();
    reps.into_iter()
        .map(|(p, q)| {
            let (p, q) = (BigInt::from(p), BigInt::from(q));
            let scale = scaling_matrix(&p, &q);
            let scale_inv = scale.inverse();
            let (width, generator) = (1u64..=4)
                .find_map(|h| {
                    let cand = scale.mul(&t.pow(h as i64)).mul(&scale_inv);
                    g.contains(&cand).then(|| (h, canonical_parabolic(cand)))
                })
                .expect("every cusp of an index <= 3 subgroup has width <= 4");
            CuspClass {
                representative: (p, q),
                stabilizer_generator: generator,
                width,
            }
        })
        .collect()
}

/// Applies a matrix to a primitive pair [p:q], returning a primitive pair
/// (projective action).
pub fn apply_to_cusp(m: &IntMatrix2, p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    let np = m.a() * p + m.b() * q;
    let nq = m.c() * p + m.d() * q;
    let g = np.gcd(&nq);
    if g.is_zero() {
        (np, nq)
    } else {
        (np / &g, nq / &g)
    }
}

/// Whether two primitive pairs agree projectively ([p:q] = [-p:-q]).
pub fn same_cusp(x: &(BigInt, BigInt), y: &(BigInt, BigInt)) -> bool {
    x == y || (x.0 == -&y.0 && x.1 == -&y.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m2(a: i64, b: i64, c: i64, d: i64) -> IntMatrix2 {
        IntMatrix2::from_i64(a, b, c, d).unwrap()
    }

    fn random_member(g: &GroupPresentation, rng: &mut ChaCha8Rng, max_len: usize) -> IntMatrix2 {
        let n = rng.gen_range(0..=max_len);
        let mut m = IntMatrix2::identity();
        for _ in 0..n {
            let (_, img) = &g.generators()[rng.gen_range(0..g.generators().len())];
            let img = if rng.gen_bool(0.5) { img.clone() } else { img.inverse() };
            m = m.mul(&img);
        }
        m
    }

    #[test]
    fn determinant_is_enforced() {
        assert!(IntMatrix2::from_i64(1, 0, 0, 2).is_err());
        assert!(IntMatrix2::from_i64(2, -1, 1, 0).is_ok());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&m2(1, 1, 0, 1)), ElementClass::Parabolic);
        assert_eq!(classify(&m2(0, 1, -1, 0)), ElementClass::Elliptic);
        assert_eq!(classify(&m2(2, 1, 1, 1)), ElementClass::Hyperbolic);
        assert_eq!(classify(&IntMatrix2::identity()), ElementClass::Identity);
        assert_eq!(classify(&IntMatrix2::minus_identity()), ElementClass::MinusIdentity);
        // a hyperbolic element has no finite power equal to +-I
        let h = m2(2, 1, 1, 1);
        let mut p = h.clone();
        for _ in 0..12 {
            p = p.mul(&h);
            assert!(!p.is_identity() && !p.is_minus_identity());
        }
    }

    #[test]
    fn theta_membership_examples() {
        assert!(!theta_member(&m2(1, 1, 0, 1)));
        assert!(theta_member(&m2(1, 2, 0, 1)));
        assert!(theta_member(&m2(2, -1, 1, 0)));
        assert!(theta_member(&IntMatrix2::minus_identity()));
    }

    #[test]
    fn gamma_d_membership() {
        let big = |n: i64| BigInt::from(n);
        let t2 = vec![vec![big(1), big(1)], vec![big(0), big(1)]];
        assert!(gamma_d_member(&t2, 3).unwrap());
        assert!(!gamma_d_member(&t2, 5).unwrap());
        let id3 = vec![
            vec![big(1), big(0), big(0)],
            vec![big(0), big(1), big(0)],
            vec![big(0), big(0), big(1)],
        ];
        assert!(gamma_d_member(&id3, 5).unwrap());
        assert!(gamma_d_member(&[vec![big(2)]], 5).is_ok());
        assert!(!gamma_d_member(&[vec![big(2)]], 5).unwrap());
        assert!(gamma_d_member(&t2, 2).is_err());
    }

    #[test]
    fn presentations_validate() {
        GroupPresentation::sl2z().validate().unwrap();
        GroupPresentation::theta().validate().unwrap();
    }

    #[test]
    fn evaluate_word_examples() {
        let g = GroupPresentation::sl2z();
        assert!(g.evaluate_word(&GroupWord::identity()).unwrap().is_identity());
        assert!(g
            .evaluate_word(&GroupWord::from_letters(&[("A", 4)]))
            .unwrap()
            .is_identity());
        assert!(g
            .evaluate_word(&GroupWord::from_letters(&[("A", 2), ("B", -3)]))
            .unwrap()
            .is_identity());
        assert!(g.evaluate_word(&GroupWord::letter("X", 1)).is_err());
    }

    #[test]
    fn word_format_round_trip() {
        let w = GroupWord::from_letters(&[("B", -1), ("A", 1)]);
        assert_eq!(w.to_string(), "B^-1*A");
        assert_eq!(GroupWord::parse("B^-1*A").unwrap(), w);
        assert_eq!(GroupWord::parse("1").unwrap(), GroupWord::identity());
        assert_eq!(GroupWord::identity().to_string(), "1");
    }

    #[test]
    fn sl2z_word_examples() {
        let g = GroupPresentation::sl2z();
        assert!(sl2z_word(&IntMatrix2::identity()).is_empty());

        let t = m2(1, 1, 0, 1);
        let w = sl2z_word(&t);
        assert_eq!(w, GroupWord::from_letters(&[("B", -1), ("A", 1)]));
        assert_eq!(g.evaluate_word(&w).unwrap(), t);

        let q = m2(2, -1, 1, 0);
        let w = sl2z_word(&q);
        assert_eq!(g.evaluate_word(&w).unwrap(), q);
        // the continued fraction finds the short word B^-1*A*B^-1 here
        assert_eq!(w, GroupWord::from_letters(&[("B", -1), ("A", 1), ("B", -1)]));
    }

    #[test]
    fn theta_word_examples() {
        let g = GroupPresentation::theta();
        let u = m2(1, 2, 0, 1);
        assert_eq!(theta_word(&u).unwrap(), GroupWord::letter("U", 1));
        assert_eq!(
            theta_word(&IntMatrix2::minus_identity()).unwrap(),
            GroupWord::letter("Z", 1)
        );
        let q = m2(2, -1, 1, 0);
        let w = theta_word(&q).unwrap();
        assert_eq!(g.evaluate_word(&w).unwrap(), q);
        assert!(theta_word(&m2(1, 1, 0, 1)).is_err());
    }

    #[test]
    fn word_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for g in [GroupPresentation::sl2z(), GroupPresentation::theta()] {
            for _ in 0..200 {
                let m = random_member(&g, &mut rng, 12);
                let w = g.word_for(&m).unwrap();
                assert_eq!(g.evaluate_word(&w).unwrap(), m, "round trip failed for {m}");
            }
        }
    }

    #[test]
    fn classify_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let g = GroupPresentation::sl2z();
        for _ in 0..200 {
            let m = random_member(&g, &mut rng, 8);
            let h = random_member(&g, &mut rng, 8);
            let conj = h.mul(&m).mul(&h.inverse());
            assert_eq!(classify(&m), classify(&conj));
        }
    }

    #[test]
    fn theta_membership_is_a_subgroup_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let g = GroupPresentation::theta();
        for _ in 0..500 {
            let x = random_member(&g, &mut rng, 10);
            let y = random_member(&g, &mut rng, 10);
            assert!(theta_member(&x.mul(&y)));
            assert!(theta_member(&x.inverse()));
        }
    }

    #[test]
    fn theta_has_index_three() {
        // enumerate cosets of the theta subgroup by left multiplication,
        // deciding coset identity via membership of x^-1 y
        let g = GroupPresentation::sl2z();
        let mut reps: Vec<IntMatrix2> = vec![IntMatrix2::identity()];
        let mut frontier = vec![IntMatrix2::identity()];
        while let Some(x) = frontier.pop() {
            for (_, img) in g.generators() {
                for m in [img.mul(&x), img.inverse().mul(&x)] {
                    if !reps.iter().any(|r| theta_member(&r.inverse().mul(&m))) {
                        reps.push(m.clone());
                        frontier.push(m);
                    }
                }
            }
        }
        assert_eq!(reps.len(), 3);
    }

    #[test]
    fn cusp_orbits_sl2z() {
        let cusps = cusp_orbits(&GroupPresentation::sl2z());
        assert_eq!(cusps.len(), 1);
        assert_eq!(cusps[0].representative, (BigInt::from(1), BigInt::from(0)));
        assert_eq!(cusps[0].stabilizer_generator, m2(1, 1, 0, 1));
        assert_eq!(cusps[0].width, 1);
    }

    #[test]
    fn cusp_orbits_theta() {
        let cusps = cusp_orbits(&GroupPresentation::theta());
        assert_eq!(cusps.len(), 2);
        assert_eq!(cusps[0].stabilizer_generator, m2(1, 2, 0, 1));
        assert_eq!(cusps[0].width, 2);
        assert_eq!(cusps[1].representative, (BigInt::from(1), BigInt::from(1)));
        assert_eq!(cusps[1].stabilizer_generator, m2(2, -1, 1, 0));
        assert_eq!(cusps[1].width, 1);
    }

    #[test]
    fn cusp_generators_fix_and_are_parabolic_members() {
        for g in [GroupPresentation::sl2z(), GroupPresentation::theta()] {
            for cusp in cusp_orbits(&g) {
                let gen = &cusp.stabilizer_generator;
                assert_eq!(classify(gen), ElementClass::Parabolic);
                assert!(g.contains(gen));
                let img = apply_to_cusp(gen, &cusp.representative.0, &cusp.representative.1);
                assert!(same_cusp(&img, &cusp.representative));
            }
        }
    }

    #[test]
    fn theta_cusp_orbits_have_distinct_parity_types() {
        // the orbit of [1:0] consists of pairs with one odd coordinate, the
        // orbit of [1:1] of pairs with both odd; so they never meet
        let g = GroupPresentation::theta();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let m = random_member(&g, &mut rng, 10);
            let inf = apply_to_cusp(&m, &BigInt::from(1), &BigInt::from(0));
            assert!(inf.0.is_odd() ^ inf.1.is_odd());
            let one = apply_to_cusp(&m, &BigInt::from(1), &BigInt::from(1));
            assert!(one.0.is_odd() && one.1.is_odd());
        }
    }

    #[test]
    fn ball_enumeration_is_deterministic_and_grows() {
        let g = GroupPresentation::sl2z();
        let b2 = g.ball(2);
        let b2bis = g.ball(2);
        assert_eq!(b2, b2bis);
        assert!(b2.len() > 1);
        for (m, w) in &b2 {
            assert_eq!(&g.evaluate_word(w).unwrap(), m);
        }
    }

    #[test]
    fn matrix_parse_and_display() {
        let m = IntMatrix2::parse("2,-1;1,0").unwrap();
        assert_eq!(m, m2(2, -1, 1, 0));
        assert_eq!(m.to_string(), "2,-1;1,0");
        assert!(IntMatrix2::parse("1,0;0,2").is_err());
        assert!(IntMatrix2::parse("1,0,0;0,1,0").is_err());
    }
}
