//! Weight-k coefficient modules: homogeneous polynomials in two variables
//! carrying either the symmetric power of the standard representation
//! (variables x, y) or of its dual (variables ex, ey), the invariant
//! quadratic form s_gamma, the equivariant pairing between the two, the
//! coinduced module used for the Shapiro cross-check, the specializations
//! onto the diagonal and onto the first Euler class, and the d-fold
//! Euler/Pontryagin representation of the transvection and signed
//! permutation subgroups.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Rational};
use crate::modular::{theta_member, GroupWord, IntMatrix2};

/// Which of the two representations a polynomial lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Q[x, y]: gamma acts by f((x, y) gamma).
    Standard,
    /// Q[ex, ey]: gamma acts through the transposed inverse.
    Dual,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Standard => "standard",
            Variant::Dual => "dual",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(Variant::Standard),
            "dual" => Ok(Variant::Dual),
            other => Err(Error::Parse(format!("unknown variant `{other}`"))),
        }
    }
}

impl Variant {
    fn var_names(self) -> (&'static str, &'static str) {
        match self {
            Variant::Standard => ("x", "y"),
            Variant::Dual => ("ex", "ey"),
        }
    }
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// A degree-k homogeneous polynomial in two variables with exact rational
/// coefficients. Coefficient index j holds the monomial
/// (first variable)^(k-j) (second variable)^j, i.e. descending exponent of
/// x respectively ex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousPoly {
    degree: usize,
    variant: Variant,
    coeffs: Vec<Rational>,
}

impl HomogeneousPoly {
    pub fn new(degree: usize, variant: Variant, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != degree + 1 {
            return Err(Error::DimensionMismatch { expected: degree + 1, got: coeffs.len() });
        }
        Ok(HomogeneousPoly { degree, variant, coeffs })
    }

    pub fn zero(degree: usize, variant: Variant) -> Self {
        HomogeneousPoly {
            degree,
            variant,
            coeffs: vec![Rational::zero(); degree + 1],
        }
    }

    /// The monomial x^x_exp y^(degree - x_exp).
    pub fn monomial(degree: usize, variant: Variant, x_exp: usize) -> Self {
        assert!(x_exp <= degree);
        let mut p = Self::zero(degree, variant);
        p.coeffs[degree - x_exp] = Rational::one();
        p
    }

    pub fn from_i64(degree: usize, variant: Variant, coeffs: &[i64]) -> Self {
        Self::new(
            degree,
            variant,
            coeffs.iter().map(|&n| Rational::from_integer(BigInt::from(n))).collect(),
        )
        .expect("coefficient count")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &HomogeneousPoly) -> HomogeneousPoly {
        assert_eq!(self.degree, other.degree);
        assert_eq!(self.variant, other.variant);
        HomogeneousPoly {
            degree: self.degree,
            variant: self.variant,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &HomogeneousPoly) -> HomogeneousPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HomogeneousPoly {
        HomogeneousPoly {
            degree: self.degree,
            variant: self.variant,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> HomogeneousPoly {
        HomogeneousPoly {
            degree: self.degree,
            variant: self.variant,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Product of homogeneous polynomials in the same variables.
    pub fn mul(&self, other: &HomogeneousPoly) -> HomogeneousPoly {
        assert_eq!(self.variant, other.variant);
        let degree = self.degree + other.degree;
        let mut coeffs = vec![Rational::zero(); degree + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        HomogeneousPoly { degree, variant: self.variant, coeffs }
    }

    pub fn pow(&self, m: usize) -> HomogeneousPoly {
        let mut acc = HomogeneousPoly::new(0, self.variant, vec![Rational::one()]).unwrap();
        for _ in 0..m {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitution action of a determinant-1 matrix. The standard variables
    /// transform by (x, y) -> (a x + c y, b x + d y); the dual variables by
    /// (ex, ey) -> (d ex - b ey, -c ex + a ey).
    pub fn act(&self, g: &IntMatrix2) -> HomogeneousPoly {
        let q = |x: &BigInt| Rational::from_integer(x.clone());
        let (first, second) = match self.variant {
            Variant::Standard => ((q(g.a()), q(g.c())), (q(g.b()), q(g.d()))),
            Variant::Dual => ((q(g.d()), -q(g.b())), (-q(g.c()), q(g.a()))),
        };
        let powers = |lin: &(Rational, Rational)| {
            let mut pows: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
            for i in 0..self.degree {
                let prev = &pows[i];
                let mut next = vec![Rational::zero(); i + 2];
                for (j, c) in prev.iter().enumerate() {
                    next[j] += c * &lin.0;
                    next[j + 1] += c * &lin.1;
                }
                pows.push(next);
            }
            pows
        };
        let u_pows = powers(&first);
        let v_pows = powers(&second);
        let mut out = vec![Rational::zero(); self.degree + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // monomial (first var)^(k-j) (second var)^j
            for (r, a) in u_pows[self.degree - j].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (s, b) in v_pows[j].iter().enumerate() {
                    if !b.is_zero() {
                        out[r + s] += c * a * b;
                    }
                }
            }
        }
        HomogeneousPoly {
            degree: self.degree,
            variant: self.variant,
            coeffs: out,
        }
    }

    /// JSON map from monomial strings to rational strings; only nonzero
    /// terms appear.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                map.insert(
                    monomial_string(self.variant, self.degree - j, j),
                    serde_json::Value::String(c.to_string()),
                );
            }
        }
        serde_json::Value::Object(map)
    }

    pub fn from_json(degree: usize, variant: Variant, v: &serde_json::Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("polynomial JSON must be an object".into()))?;
        let mut p = HomogeneousPoly::zero(degree, variant);
        for (key, value) in obj {
            let (xe, ye) = parse_monomial_string(variant, key)?;
            if xe + ye != degree {
                return Err(Error::Parse(format!("monomial `{key}` has degree {} != {degree}", xe + ye)));
            }
            let s = value
                .as_str()
                .ok_or_else(|| Error::Parse("coefficient must be a string".into()))?;
            p.coeffs[ye] = crate::linalg::parse_rational(s)?;
        }
        Ok(p)
    }
}

fn monomial_string(variant: Variant, x_exp: usize, y_exp: usize) -> String {
    let (xn, yn) = variant.var_names();
    let mut parts = Vec::new();
    if x_exp > 0 {
        parts.push(format!("{xn}^{x_exp}"));
    }
    if y_exp > 0 {
        parts.push(format!("{yn}^{y_exp}"));
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn parse_monomial_string(variant: Variant, s: &str) -> Result<(usize, usize)> {
    let (xn, yn) = variant.var_names();
    let (mut xe, mut ye) = (0usize, 0usize);
    if s == "1" {
        return Ok((0, 0));
    }
    for part in s.split('*') {
        let (name, exp) = part
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("bad monomial factor `{part}`")))?;
        let exp: usize = exp
            .parse()
            .map_err(|e| Error::Parse(format!("bad exponent in `{part}`: {e}")))?;
        if name == xn {
            xe += exp;
        } else if name == yn {
            ye += exp;
        } else {
            return Err(Error::Parse(format!("unknown variable `{name}` for {variant} variant")));
        }
    }
    Ok((xe, ye))
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = monomial_string(self.variant, self.degree - j, j);
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    f.write_str("-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            if mag.is_one() && mono != "1" {
                f.write_str(&mono)?;
            } else if mono == "1" {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Matrix of the action of `g` on the degree-k module in the monomial basis
/// (columns are the images of the basis monomials).
pub fn action_matrix(g: &IntMatrix2, degree: usize, variant: Variant) -> QMatrix {
    let dim = degree + 1;
    let mut m = QMatrix::zeros(dim, dim);
    for j in 0..dim {
        let img = HomogeneousPoly::monomial(degree, variant, degree - j).act(g);
        for (i, c) in img.coeffs().iter().enumerate() {
            *m.get_mut(i, j) = c.clone();
        }
    }
    m
}

/// The invariant quadratic form s_gamma = b x^2 + (d - a) x y - c y^2 of a
/// determinant-1 matrix, in the standard variables.
pub fn s_gamma(g: &IntMatrix2) -> HomogeneousPoly {
    let q = |x: BigInt| Rational::from_integer(x);
    HomogeneousPoly::new(
        2,
        Variant::Standard,
        vec![q(g.b().clone()), q(g.d() - g.a()), q(-g.c().clone())],
    )
    .unwrap()
}

/// Invariant perfect pairing between the dual and standard weight-k modules,
/// normalized as the divided-power pairing
/// < ex^i ey^(k-i), x^i y^(k-i) > = i! (k-i)! / k!.
pub fn pairing(w: &HomogeneousPoly, v: &HomogeneousPoly) -> Result<Rational> {
    if w.variant() != Variant::Dual {
        return Err(Error::VariantMismatch { expected: "dual".into(), got: w.variant().to_string() });
    }
    if v.variant() != Variant::Standard {
        return Err(Error::VariantMismatch {
            expected: "standard".into(),
            got: v.variant().to_string(),
        });
    }
    if w.degree() != v.degree() {
        return Err(Error::DegreeMismatch(w.degree(), v.degree()));
    }
    let k = w.degree();
    let mut acc = Rational::zero();
    for j in 0..=k {
        let weight = Rational::new(BigInt::one(), binomial(k, j));
        acc += &w.coeffs()[j] * &v.coeffs()[j] * weight;
    }
    Ok(acc)
}

/// A single-variable monomial c * var^degree, the value type of the diagonal
/// and first-Euler-class specializations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniMonomial {
    pub var: &'static str,
    pub degree: usize,
    pub coeff: Rational,
}

impl UniMonomial {
    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

impl fmt::Display for UniMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return f.write_str("0");
        }
        if self.degree == 0 {
            return write!(f, "{}", self.coeff);
        }
        if self.coeff.is_one() {
            write!(f, "{}^{}", self.var, self.degree)
        } else if (-self.coeff.clone()).is_one() {
            write!(f, "-{}^{}", self.var, self.degree)
        } else {
            write!(f, "{}*{}^{}", self.coeff, self.var, self.degree)
        }
    }
}

/// Diagonal specialization ex -> e, ey -> e, identifying Q[e] with the
/// coinvariants of a parabolic fixing the diagonal.
pub fn delta_star(f: &HomogeneousPoly) -> UniMonomial {
    assert_eq!(f.variant(), Variant::Dual);
    UniMonomial {
        var: "e",
        degree: f.degree(),
        coeff: f.coeffs().iter().sum(),
    }
}

/// Projection ey -> 0 onto the polynomial ring in the first Euler class.
pub fn pr_x(f: &HomogeneousPoly) -> UniMonomial {
    assert_eq!(f.variant(), Variant::Dual);
    UniMonomial {
        var: "ex",
        degree: f.degree(),
        coeff: f.coeffs()[0].clone(),
    }
}

/// Default coset representatives for the theta subgroup inside SL2(Z):
/// the identity, T = (1 1; 0 1), and L = (1 0; 1 1). Their reductions
/// mod 2 hit the three cosets.
pub fn default_coset_reps() -> Vec<IntMatrix2> {
    vec![
        IntMatrix2::identity(),
        IntMatrix2::from_i64(1, 1, 0, 1).unwrap(),
        IntMatrix2::from_i64(1, 0, 1, 1).unwrap(),
    ]
}

/// An element of the coinduced module: one polynomial per coset
/// representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinducedElement {
    pub components: Vec<HomogeneousPoly>,
}

/// The module coinduced from the theta subgroup to SL2(Z): functions on the
/// right cosets with values in the weight-k module, carrying the SL2(Z)
/// action (gamma F)_i = h F_j where r_i gamma = h r_j with h in the theta
/// subgroup.
#[derive(Debug, Clone)]
pub struct CoinducedModule {
    degree: usize,
    variant: Variant,
    reps: Vec<IntMatrix2>,
}

/// Builds the coinduced module after validating that the representatives
/// are pairwise inequivalent modulo the theta subgroup.
pub fn coinduce(degree: usize, variant: Variant, reps: Vec<IntMatrix2>) -> Result<CoinducedModule> {
    if reps.len() != 3 {
        return Err(Error::InvalidCosetReps(format!(
            "expected 3 representatives (index of the theta subgroup), got {}",
            reps.len()
        )));
    }
    for i in 0..reps.len() {
        for j in 0..i {
            if theta_member(&reps[i].mul(&reps[j].inverse())) {
                return Err(Error::InvalidCosetReps(format!(
                    "{} and {} lie in the same coset",
                    reps[i], reps[j]
                )));
            }
        }
    }
    Ok(CoinducedModule { degree, variant, reps })
}

impl CoinducedModule {
    pub fn dim(&self) -> usize {
        self.reps.len() * (self.degree + 1)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn reps(&self) -> &[IntMatrix2] {
        &self.reps
    }

    pub fn zero(&self) -> CoinducedElement {
        CoinducedElement {
            components: vec![HomogeneousPoly::zero(self.degree, self.variant); self.reps.len()],
        }
    }

    /// Index j and theta element h with r_i * g = h * r_j.
    fn route(&self, i: usize, g: &IntMatrix2) -> (usize, IntMatrix2) {
        let rg = self.reps[i].mul(g);
        for (j, r) in self.reps.iter().enumerate() {
            let h = rg.mul(&r.inverse());
            if theta_member(&h) {
                return (j, h);
            }
        }
        unreachable!("coset representatives cover the group");
    }

    pub fn act(&self, g: &IntMatrix2, f: &CoinducedElement) -> CoinducedElement {
        let components = (0..self.reps.len())
            .map(|i| {
                let (j, h) = self.route(i, g);
                f.components[j].act(&h)
            })
            .collect();
        CoinducedElement { components }
    }

    /// Matrix of the action on the concatenated component coordinates.
    pub fn action_matrix(&self, g: &IntMatrix2) -> QMatrix {
        let block = self.degree + 1;
        let dim = self.dim();
        let mut m = QMatrix::zeros(dim, dim);
        for i in 0..self.reps.len() {
            let (j, h) = self.route(i, g);
            let a = action_matrix(&h, self.degree, self.variant);
            for r in 0..block {
                for c in 0..block {
                    *m.get_mut(i * block + r, j * block + c) = a.get(r, c).clone();
                }
            }
        }
        m
    }
}

/// A signed permutation of {1, ..., d}, stored as the images of 1..d with
/// sign. Only determinant-1 signed permutations act on the Euler and
/// Pontryagin variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    images: Vec<i64>,
}

impl SignedPermutation {
    pub fn new(images: Vec<i64>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &v in &images {
            let a = v.unsigned_abs() as usize;
            if v == 0 || a == 0 || a > d || seen[a - 1] {
                return Err(Error::InvalidArgument(format!(
                    "images {images:?} are not a signed permutation of 1..{d}"
                )));
            }
            seen[a - 1] = true;
        }
        Ok(SignedPermutation { images })
    }

    pub fn identity(d: usize) -> Self {
        SignedPermutation { images: (1..=d as i64).collect() }
    }

    pub fn d(&self) -> usize {
        self.images.len()
    }

    /// sigma(i) for 1-based i, extended oddly to negative arguments.
    pub fn apply(&self, i: i64) -> i64 {
        if i < 0 {
            -self.apply(-i)
        } else {
            self.images[(i - 1) as usize]
        }
    }

    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.d(), other.d());
        SignedPermutation {
            images: (1..=self.d() as i64).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    /// Determinant of the signed permutation matrix: the permutation sign
    /// times (-1) per negative image.
    pub fn det(&self) -> i64 {
        let d = self.d();
        let perm: Vec<usize> = self.images.iter().map(|v| v.unsigned_abs() as usize - 1).collect();
        let mut sign = 1i64;
        let mut seen = vec![false; d];
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        let negs = self.images.iter().filter(|v| v.is_negative()).count();
        if negs % 2 == 1 {
            sign = -sign;
        }
        sign
    }
}

/// A polynomial in the Euler classes e_1..e_d and Pontryagin classes
/// p_{j,i} (j = 1..floor(n/2), i = 1..d) with rational coefficients, stored
/// as a map from exponent vectors (Euler exponents first, then Pontryagin
/// exponents grouped by j). No zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerPontryaginPoly {
    d: usize,
    n: u64,
    /// Cohomological degree cap applied by `mul`; e_i has degree n+1 and
    /// p_{j,i} has degree 4j.
    cap: u64,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl EulerPontryaginPoly {
    pub fn zero(d: usize, n: u64) -> Self {
        assert!(n % 2 == 1, "n must be odd");
        EulerPontryaginPoly {
            d,
            n,
            cap: 4 * (n + 1),
            terms: BTreeMap::new(),
        }
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self.truncate();
        self
    }

    fn key_len(d: usize, n: u64) -> usize {
        d + d * (n as usize / 2)
    }

    pub fn one(d: usize, n: u64) -> Self {
        let mut p = Self::zero(d, n);
        p.terms.insert(vec![0; Self::key_len(d, n)], Rational::one());
        p
    }

    /// The Euler class e_i (1-based).
    pub fn e(d: usize, n: u64, i: usize) -> Self {
        assert!((1..=d).contains(&i));
        let mut key = vec![0; Self::key_len(d, n)];
        key[i - 1] = 1;
        let mut p = Self::zero(d, n);
        p.terms.insert(key, Rational::one());
        p
    }

    /// The Pontryagin class p_{j,i} (both 1-based, j <= floor(n/2)).
    pub fn p(d: usize, n: u64, j: usize, i: usize) -> Self {
        assert!((1..=d).contains(&i));
        assert!((1..=(n as usize / 2)).contains(&j));

        let mut key = vec![0; Self::key_len(d, n)];
        key[d + (j - 1) * d + (i - 1)] = 1;
        let mut p = Self::zero(d, n);
        p.terms.insert(key, Rational::one());
        p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn monomial_degree(&self, key: &[u32]) -> u64 {
        let mut deg = 0u64;
        for (i, &e) in key.iter().enumerate() {
            if i < self.d {
                deg += e as u64 * (self.n + 1);
            } else {
                let j = (i - self.d) / self.d + 1;
                deg += e as u64 * 4 * j as u64;
            }
        }
        deg
    }

    fn insert_term(&mut self, key: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn truncate(&mut self) {
        let cap = self.cap;
        let degrees: Vec<Vec<u32>> = self
            .terms
            .keys()
            .filter(|k| self.monomial_degree(k) > cap)
            .cloned()
            .collect();
        for k in degrees {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &EulerPontryaginPoly) -> EulerPontryaginPoly {
        assert_eq!((self.d, self.n), (other.d, other.n));
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> EulerPontryaginPoly {
        let mut out = EulerPontryaginPoly::zero(self.d, self.n).with_cap(self.cap);
        for (k, c) in &self.terms {
            out.insert_term(k.clone(), c * factor);
        }
        out
    }

    pub fn sub(&self, other: &EulerPontryaginPoly) -> EulerPontryaginPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Product truncated at the cohomological degree cap.
    pub fn mul(&self, other: &EulerPontryaginPoly) -> EulerPontryaginPoly {
        assert_eq!((self.d, self.n), (other.d, other.n));
        let mut out = EulerPontryaginPoly::zero(self.d, self.n).with_cap(self.cap.min(other.cap));
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let key: Vec<u32> = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                if out.monomial_degree(&key) <= out.cap {
                    out.insert_term(key, c1 * c2);
                }
            }
        }
        out
    }

    /// Keeps only the pure Euler-class part (all Pontryagin exponents zero);
    /// the retraction onto the Euler subring.
    pub fn project_to_euler(&self) -> EulerPontryaginPoly {
        let mut out = EulerPontryaginPoly::zero(self.d, self.n).with_cap(self.cap);
        for (k, c) in &self.terms {
            if k[self.d..].iter().all(|&e| e == 0) {
                out.insert_term(k.clone(), c.clone());
            }
        }
        out
    }
}

impl fmt::Display for EulerPontryaginPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (k, c) in &self.terms {
            let mut factors = Vec::new();
            for (i, &e) in k.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if i < self.d {
                    factors.push(format!("e_{}^{e}", i + 1));
                } else {
                    let j = (i - self.d) / self.d + 1;
                    let fac = (i - self.d) % self.d + 1;
                    factors.push(format!("p_{{{j},{fac}}}^{e}"));
                }
            }
            let mono = if factors.is_empty() { "1".to_string() } else { factors.join("*") };
            parts.push(format!("{c}*{mono}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Action of a determinant-1 signed permutation: e_j maps to
/// (-1)^{s(j)} e_{|sigma(j)|} and p_{j,i} maps to p_{j,|sigma(i)|}.
pub fn sigma_act(sigma: &SignedPermutation, f: &EulerPontryaginPoly) -> Result<EulerPontryaginPoly> {
    if sigma.d() != f.d {
        return Err(Error::DimensionMismatch { expected: f.d, got: sigma.d() });
    }
    if sigma.det() != 1 {
        return Err(Error::OddSignedPermutation);
    }
    let d = f.d;
    let n_half = f.n as usize / 2;
    let mut out = EulerPontryaginPoly::zero(d, f.n).with_cap(f.cap);
    for (k, c) in &f.terms {
        let mut key = vec![0u32; k.len()];
        let mut sign_flips = 0u64;
        for i in 1..=d {
            let e = k[i - 1];
            if e == 0 {
                continue;
            }
            let img = sigma.apply(i as i64);
            key[img.unsigned_abs() as usize - 1] += e;
            if img < 0 {
                sign_flips += e as u64;
            }
        }
        for j in 1..=n_half {
            for i in 1..=d {
                let e = k[d + (j - 1) * d + (i - 1)];
                if e == 0 {
                    continue;
                }
                let img = sigma.apply(i as i64).unsigned_abs() as usize;
                key[d + (j - 1) * d + (img - 1)] += e;
            }
        }
        let coeff = if sign_flips % 2 == 1 { -c.clone() } else { c.clone() };
        out.insert_term(key, coeff);
    }
    Ok(out)
}

/// Action of the transvection T_{ij}^power (identity plus `power` in entry
/// (i, j)) on the Euler variables as the dual of the standard
/// representation (e_i -> e_i - power * e_j), trivially on the Pontryagin
/// variables.
pub fn transvection_act(
    i: usize,
    j: usize,
    power: i64,
    f: &EulerPontryaginPoly,
) -> Result<EulerPontryaginPoly> {
    if i == j {
        return Err(Error::EqualTransvectionIndices(i));
    }
    let d = f.d;
    if !(1..=d).contains(&i) || !(1..=d).contains(&j) {
        return Err(Error::InvalidArgument(format!("transvection indices ({i},{j}) out of 1..={d}")));
    }
    let mut out = EulerPontryaginPoly::zero(d, f.n).with_cap(f.cap);
    let minus_power = Rational::from_integer(BigInt::from(-power));
    for (k, c) in &f.terms {
        let m = k[i - 1] as usize;
        // (e_i - power e_j)^m expanded binomially; everything else is fixed
        for r in 0..=m {
            let mut key = k.clone();
            key[i - 1] = r as u32;
            key[j - 1] += (m - r) as u32;
            let coeff = c
                * Rational::from_integer(binomial(m, r))
                * num_traits::pow::pow(minus_power.clone(), m - r);
            out.insert_term(key, coeff);
        }
    }
    Ok(out)
}

/// Evaluates a group word whose letters name abstract generators with given
/// matrices; helper for tests that compare word and matrix routes.
pub fn act_along_word(
    f: &HomogeneousPoly,
    word: &GroupWord,
    images: &[(String, IntMatrix2)],
) -> Result<HomogeneousPoly> {
    let mut m = IntMatrix2::identity();
    for (name, exp) in word.letters() {
        let img = images
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
            .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
        m = m.mul(&img.pow(*exp));
    }
    Ok(f.act(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, ratio};
    use crate::modular::GroupPresentation;
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

    fn random_poly(rng: &mut ChaCha8Rng, degree: usize, variant: Variant) -> HomogeneousPoly {
        let coeffs = (0..=degree).map(|_| ratio(rng.gen_range(-9..10), rng.gen_range(1..10))).collect();
        HomogeneousPoly::new(degree, variant, coeffs).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for variant in [Variant::Standard, Variant::Dual] {
            let f = random_poly(&mut rng, 7, variant);
            assert_eq!(f.act(&IntMatrix2::identity()), f);
        }
    }

    #[test]
    fn dual_action_of_beta_inverse() {
        // beta^-1 = (1 -1; 1 0) sends ex to ey and ey to ey - ex
        let beta_inv = m2(1, -1, 1, 0);
        let ex = HomogeneousPoly::monomial(1, Variant::Dual, 1);
        let ey = HomogeneousPoly::monomial(1, Variant::Dual, 0);
        assert_eq!(ex.act(&beta_inv), ey);
        assert_eq!(ey.act(&beta_inv), HomogeneousPoly::from_i64(1, Variant::Dual, &[-1, 1]));
    }

    #[test]
    fn standard_action_fixes_s_gamma_of_q_generator() {
        let q = m2(2, -1, 1, 0);
        let f = HomogeneousPoly::from_i64(2, Variant::Standard, &[-1, -2, -1]);
        assert_eq!(f.act(&q), f);
        assert_eq!(s_gamma(&q), f);
    }

    #[test]
    fn s_gamma_examples() {
        assert!(s_gamma(&IntMatrix2::identity()).is_zero());
        assert_eq!(
            s_gamma(&m2(1, 1, 0, 1)),
            HomogeneousPoly::from_i64(2, Variant::Standard, &[1, 0, 0])
        );
    }

    #[test]
    fn s_gamma_is_invariant_for_random_elements() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = GroupPresentation::sl2z();
        for _ in 0..200 {
            let m = random_member(&g, &mut rng, 12);
            let s = s_gamma(&m);
            assert_eq!(s.act(&m), s, "s_gamma not fixed by {m}");
        }
    }

    #[test]
    fn action_axiom_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = GroupPresentation::sl2z();
        for variant in [Variant::Standard, Variant::Dual] {
            for _ in 0..200 {
                let x = random_member(&g, &mut rng, 6);
                let y = random_member(&g, &mut rng, 6);
                let deg = rng.gen_range(0..8);
                let f = random_poly(&mut rng, deg, variant);
                assert_eq!(f.act(&y).act(&x), f.act(&x.mul(&y)));
            }
        }
    }

    #[test]
    fn minus_identity_acts_by_degree_parity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for variant in [Variant::Standard, Variant::Dual] {
            for degree in 0..6 {
                let f = random_poly(&mut rng, degree, variant);
                let acted = f.act(&IntMatrix2::minus_identity());
                if degree % 2 == 0 {
                    assert_eq!(acted, f);
                } else {
                    assert_eq!(acted, f.neg());
                }
            }
        }
    }

    #[test]
    fn pairing_normalization() {
        let exx = HomogeneousPoly::monomial(2, Variant::Dual, 2);
        let xx = HomogeneousPoly::monomial(2, Variant::Standard, 2);
        assert_eq!(pairing(&exx, &xx).unwrap(), rat(1));

        let exey = HomogeneousPoly::monomial(2, Variant::Dual, 1);
        assert_eq!(pairing(&exey, &xx).unwrap(), rat(0));

        let w = HomogeneousPoly::from_i64(2, Variant::Dual, &[-1, 2, 0]);
        let v = HomogeneousPoly::from_i64(2, Variant::Standard, &[-1, -2, -1]);
        assert_eq!(pairing(&w, &v).unwrap(), rat(-1));
    }

    #[test]
    fn pairing_rejects_mismatches() {
        let w = HomogeneousPoly::monomial(2, Variant::Dual, 2);
        let v3 = HomogeneousPoly::monomial(3, Variant::Standard, 3);
        assert!(matches!(pairing(&w, &v3), Err(Error::DegreeMismatch(2, 3))));
        let vdual = HomogeneousPoly::monomial(2, Variant::Dual, 2);
        assert!(pairing(&w, &vdual).is_err());
    }

    #[test]
    fn pairing_is_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = GroupPresentation::sl2z();
        for _ in 0..200 {
            let m = random_member(&g, &mut rng, 8);
            let k = rng.gen_range(0..=12);
            let w = random_poly(&mut rng, k, Variant::Dual);
            let v = random_poly(&mut rng, k, Variant::Standard);
            assert_eq!(
                pairing(&w.act(&m), &v.act(&m)).unwrap(),
                pairing(&w, &v).unwrap()
            );
        }
    }

    #[test]
    fn pairing_gram_matrix_has_full_rank() {
        for k in 0..=12 {
            let mut gram = QMatrix::zeros(k + 1, k + 1);
            for i in 0..=k {
                for j in 0..=k {
                    *gram.get_mut(i, j) = pairing(
                        &HomogeneousPoly::monomial(k, Variant::Dual, k - i),
                        &HomogeneousPoly::monomial(k, Variant::Standard, k - j),
                    )
                    .unwrap();
                }
            }
            assert_eq!(gram.rank(), k + 1);
        }
    }

    #[test]
    fn delta_star_examples() {
        let k = 3;
        let f = HomogeneousPoly::monomial(2 * k, Variant::Dual, 2 * k)
            .sub(&HomogeneousPoly::monomial(2 * k, Variant::Dual, 0));
        assert!(delta_star(&f).is_zero());

        // ey^2 - (ey - ex)^2 = -ex^2 + 2 ex ey
        let f = HomogeneousPoly::from_i64(2, Variant::Dual, &[-1, 2, 0]);
        let d = delta_star(&f);
        assert_eq!(d.coeff, rat(1));
        assert_eq!(d.degree, 2);

        assert!(delta_star(&HomogeneousPoly::zero(4, Variant::Dual)).is_zero());
    }

    #[test]
    fn pr_x_examples() {
        // ey^2k - (ey - ex)^2k maps to -ex^2k
        for k in 1..=4usize {
            let ey = HomogeneousPoly::monomial(1, Variant::Dual, 0);
            let ey_minus_ex = HomogeneousPoly::from_i64(1, Variant::Dual, &[-1, 1]);
            let f = ey.pow(2 * k).sub(&ey_minus_ex.pow(2 * k));
            let p = pr_x(&f);
            assert_eq!(p.coeff, rat(-1));
            assert_eq!(p.degree, 2 * k);
        }
        let m = HomogeneousPoly::monomial(5, Variant::Dual, 5);
        assert_eq!(pr_x(&m).coeff, rat(1));
        let exey = HomogeneousPoly::monomial(2, Variant::Dual, 1);
        assert!(pr_x(&exey).is_zero());
    }

    #[test]
    fn delta_star_coequalizes_the_q_generator() {
        let q = m2(2, -1, 1, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let deg = rng.gen_range(0..10);
            let f = random_poly(&mut rng, deg, Variant::Dual);
            assert_eq!(delta_star(&f.act(&q)), delta_star(&f));
        }
    }

    #[test]
    fn coinduced_dimension_and_identity() {
        for k in 0..5 {
            let m = coinduce(k, Variant::Dual, default_coset_reps()).unwrap();
            assert_eq!(m.dim(), 3 * (k + 1));
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            let f = CoinducedElement {
                components: (0..3).map(|_| random_poly(&mut rng, k, Variant::Dual)).collect(),
            };
            assert_eq!(m.act(&IntMatrix2::identity(), &f), f);
        }
    }

    #[test]
    fn coinduced_action_axiom() {
        let module = coinduce(2, Variant::Dual, default_coset_reps()).unwrap();
        let g = GroupPresentation::sl2z();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..100 {
            let x = random_member(&g, &mut rng, 6);
            let y = random_member(&g, &mut rng, 6);
            let f = CoinducedElement {
                components: (0..3).map(|_| random_poly(&mut rng, 2, Variant::Dual)).collect(),
            };
            assert_eq!(module.act(&x.mul(&y), &f), module.act(&x, &module.act(&y, &f)));
        }
    }

    #[test]
    fn coinduced_action_matrix_matches_action() {
        let module = coinduce(1, Variant::Dual, default_coset_reps()).unwrap();
        let g = GroupPresentation::sl2z();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let x = random_member(&g, &mut rng, 6);
            let f = CoinducedElement {
                components: (0..3).map(|_| random_poly(&mut rng, 1, Variant::Dual)).collect(),
            };
            let via_matrix = module
                .action_matrix(&x)
                .matvec(
                    &f.components
                        .iter()
                        .flat_map(|p| p.coeffs().to_vec())
                        .collect::<Vec<_>>(),
                )
                .unwrap();
            let direct: Vec<Rational> = module
                .act(&x, &f)
                .components
                .iter()
                .flat_map(|p| p.coeffs().to_vec())
                .collect();
            assert_eq!(via_matrix, direct);
        }
    }

    #[test]
    fn equivalent_coset_reps_are_rejected() {
        // T^2 lies in the theta subgroup, so {I, T, T^2} is not a valid set
        let t = m2(1, 1, 0, 1);
        let reps = vec![IntMatrix2::identity(), t.clone(), t.mul(&t)];
        assert!(matches!(
            coinduce(2, Variant::Dual, reps),
            Err(Error::InvalidCosetReps(_))
        ));
    }

    #[test]
    fn action_matrix_matches_direct_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let g = GroupPresentation::sl2z();
        for variant in [Variant::Standard, Variant::Dual] {
            let m = random_member(&g, &mut rng, 8);
            let f = random_poly(&mut rng, 5, variant);
            let a = action_matrix(&m, 5, variant);
            assert_eq!(a.matvec(f.coeffs()).unwrap(), f.act(&m).coeffs().to_vec());
        }
    }

    #[test]
    fn sigma_act_example() {
        // d = 2, sigma = (1 -> -2, 2 -> 1)
        let sigma = SignedPermutation::new(vec![-2, 1]).unwrap();
        assert_eq!(sigma.det(), 1);
        let e1 = EulerPontryaginPoly::e(2, 3, 1);
        let e2 = EulerPontryaginPoly::e(2, 3, 2);
        assert_eq!(sigma_act(&sigma, &e1).unwrap(), e2.scale(&rat(-1)));
        assert_eq!(sigma_act(&sigma, &e2).unwrap(), e1);
        let p11 = EulerPontryaginPoly::p(2, 3, 1, 1);
        let p12 = EulerPontryaginPoly::p(2, 3, 1, 2);
        assert_eq!(sigma_act(&sigma, &p11).unwrap(), p12);
    }

    #[test]
    fn sigma_act_rejects_determinant_minus_one() {
        // a single sign flip has determinant -1
        let sigma = SignedPermutation::new(vec![-1, 2]).unwrap();
        assert_eq!(sigma.det(), -1);
        let e1 = EulerPontryaginPoly::e(2, 3, 1);
        assert!(matches!(sigma_act(&sigma, &e1), Err(Error::OddSignedPermutation)));
    }

    fn random_ep_poly(rng: &mut ChaCha8Rng, d: usize, n: u64) -> EulerPontryaginPoly {
        let mut f = EulerPontryaginPoly::zero(d, n);
        for _ in 0..rng.gen_range(1..6) {
            let mut term = EulerPontryaginPoly::one(d, n).scale(&ratio(rng.gen_range(-5..6), rng.gen_range(1..4)));
            for i in 1..=d {
                for _ in 0..rng.gen_range(0..3) {
                    term = term.mul(&EulerPontryaginPoly::e(d, n, i));
                }
                for j in 1..=(n as usize / 2) {
                    for _ in 0..rng.gen_range(0..2) {
                        term = term.mul(&EulerPontryaginPoly::p(d, n, j, i));
                    }
                }
            }
            f = f.add(&term);
        }
        f
    }

    #[test]
    fn sigma_action_axiom_on_powers() {
        let sigma = SignedPermutation::new(vec![-2, 1]).unwrap();
        let sigma2 = sigma.compose(&sigma);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..50 {
            let f = random_ep_poly(&mut rng, 2, 3);
            let twice = sigma_act(&sigma, &sigma_act(&sigma, &f).unwrap()).unwrap();
            assert_eq!(twice, sigma_act(&sigma2, &f).unwrap());
        }
    }

    #[test]
    fn transvection_matches_dual_degree_one_action() {
        // T_12 = (1 1; 0 1) acting on <e_1, e_2> must agree with the dual
        // degree-1 module action on (ex, ey)
        let t = m2(1, 1, 0, 1);
        let ex = HomogeneousPoly::monomial(1, Variant::Dual, 1);
        let ey = HomogeneousPoly::monomial(1, Variant::Dual, 0);
        let ex_img = ex.act(&t);
        let ey_img = ey.act(&t);

        let e1 = EulerPontryaginPoly::e(2, 3, 1);
        let e2 = EulerPontryaginPoly::e(2, 3, 2);
        let e1_img = transvection_act(1, 2, 1, &e1).unwrap();
        let e2_img = transvection_act(1, 2, 1, &e2).unwrap();

        // ex = e_1, ey = e_2 under the obvious dictionary
        let dict = |p: &HomogeneousPoly| {
            EulerPontryaginPoly::e(2, 3, 1)
                .scale(&p.coeffs()[0])
                .add(&EulerPontryaginPoly::e(2, 3, 2).scale(&p.coeffs()[1]))
        };
        assert_eq!(e1_img, dict(&ex_img));
        assert_eq!(e2_img, dict(&ey_img));
    }

    #[test]
    fn transvection_fixes_pontryagin_classes() {
        let p11 = EulerPontryaginPoly::p(2, 3, 1, 1);
        assert_eq!(transvection_act(1, 2, 1, &p11).unwrap(), p11);
        assert_eq!(transvection_act(1, 2, 2, &p11).unwrap(), p11);
        assert_eq!(transvection_act(2, 1, 2, &p11).unwrap(), p11);
        let e1 = EulerPontryaginPoly::e(2, 3, 1);
        assert_eq!(transvection_act(1, 2, 0, &e1).unwrap(), e1);
        assert!(matches!(
            transvection_act(1, 1, 1, &e1),
            Err(Error::EqualTransvectionIndices(1))
        ));
    }

    #[test]
    fn euler_pontryagin_actions_are_ring_homomorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let sigma = SignedPermutation::new(vec![-2, 1]).unwrap();
        for _ in 0..30 {
            let f = random_ep_poly(&mut rng, 2, 3);
            let g = random_ep_poly(&mut rng, 2, 3);
            // use a large cap so no truncation interferes
            let f = f.with_cap(10_000);
            let g = g.with_cap(10_000);
            let prod = f.mul(&g);
            assert_eq!(
                sigma_act(&sigma, &prod).unwrap(),
                sigma_act(&sigma, &f).unwrap().mul(&sigma_act(&sigma, &g).unwrap())
            );
            assert_eq!(
                transvection_act(1, 2, 2, &prod).unwrap(),
                transvection_act(1, 2, 2, &f)
                    .unwrap()
                    .mul(&transvection_act(1, 2, 2, &g).unwrap())
            );
        }
    }

    #[test]
    fn inclusion_and_projection_are_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let sigma = SignedPermutation::new(vec![-2, 1]).unwrap();
        for _ in 0..30 {
            let f = random_ep_poly(&mut rng, 2, 3).with_cap(10_000);
            assert_eq!(
                sigma_act(&sigma, &f).unwrap().project_to_euler(),
                sigma_act(&sigma, &f.project_to_euler()).unwrap()
            );
            assert_eq!(
                transvection_act(1, 2, 2, &f).unwrap().project_to_euler(),
                transvection_act(1, 2, 2, &f.project_to_euler()).unwrap()
            );
            // a pure Euler polynomial stays pure under both actions
            let pure = f.project_to_euler();
            assert!(sigma_act(&sigma, &pure)
                .unwrap()
                .terms()
                .keys()
                .all(|k| k[2..].iter().all(|&e| e == 0)));
        }
    }

    #[test]
    fn poly_json_round_trip() {
        let f = HomogeneousPoly::from_i64(3, Variant::Dual, &[2, 0, -1, 5]);
        let j = f.to_json();
        let back = HomogeneousPoly::from_json(3, Variant::Dual, &j).unwrap();
        assert_eq!(back, f);
        let s = serde_json::to_string(&j).unwrap();
        assert!(s.contains("ex^3"));
        assert!(s.contains("ey^3"));
    }

    #[test]
    fn display_format() {
        let f = HomogeneousPoly::from_i64(2, Variant::Dual, &[-1, 2, 0]);
        assert_eq!(f.to_string(), "-ex^2 + 2*ex^1*ey^1");
        assert_eq!(HomogeneousPoly::zero(2, Variant::Dual).to_string(), "0");
        let u = UniMonomial { var: "ex", degree: 2, coeff: rat(-2) };
        assert_eq!(u.to_string(), "-2*ex^2");
        let one = UniMonomial { var: "e", degree: 2, coeff: rat(1) };
        assert_eq!(one.to_string(), "e^2");
    }
}
