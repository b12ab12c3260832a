//! First group cohomology of a presented group with coefficients in a
//! finite-dimensional rational module, via Fox calculus: cocycles are
//! derivations recorded on generators, coboundaries are principal
//! derivations, and the relators impose exact linear conditions. On top of
//! the raw spaces sit restriction to cyclic subgroups, the parabolic
//! subspace, the pairing against decomposable classes, a Goldman-Millson
//! spanning certificate, and a Shapiro-lemma cross-check for the theta
//! subgroup.
//!
//! Only H^0 and H^1 are computed; the virtual cohomological dimension of
//! both groups is 1, so everything above degree one vanishes over Q.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{QMatrix, Rational};
use crate::modular::{
    classify, cusp_orbits, CuspClass, ElementClass, GroupName, GroupPresentation, GroupWord,
    IntMatrix2,
};
use crate::repr::{
    action_matrix, coinduce, default_coset_reps, pairing, s_gamma, CoinducedModule,
    HomogeneousPoly, Variant,
};

/// Formal Z-linear combination of group words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupRingElement {
    terms: BTreeMap<GroupWord, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, word: GroupWord, coeff: i64) {
        if coeff == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if *e.get() == 0 {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<GroupWord, i64> {
        &self.terms
    }

    /// Matrix of the module action of this element: the integer combination
    /// of the action matrices of its words.
    pub fn action(
        &self,
        pres: &GroupPresentation,
        dim: usize,
        act: &dyn Fn(&IntMatrix2) -> QMatrix,
    ) -> Result<QMatrix> {
        let mut out = QMatrix::zeros(dim, dim);
        for (word, coeff) in &self.terms {
            let m = pres.evaluate_word(word)?;
            let a = act(&m);
            let c = Rational::from_integer((*coeff).into());
            for i in 0..dim {
                for j in 0..dim {
                    let v = out.get(i, j) + &c * a.get(i, j);
                    *out.get_mut(i, j) = v;
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{c}*({w})"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Fox derivative of a word with respect to a generator, by the rules
/// d(uv) = du + u dv, d(g)/dg = 1, d(g^-1)/dg = -g^-1, d(h)/dg = 0.
pub fn fox_derivative(r: &GroupWord, gen: &str) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix = GroupWord::identity();
    for (name, exp) in r.letters() {
        if name == gen {
            if *exp > 0 {
                // d(g^e) = 1 + g + ... + g^(e-1)
                for i in 0..*exp {
                    let mut w = prefix.clone();
                    w.push(name, i);
                    out.add_term(w, 1);
                }
            } else {
                // d(g^-m) = -(g^-1 + ... + g^-m)
                for i in 1..=-*exp {
                    let mut w = prefix.clone();
                    w.push(name, -i);
                    out.add_term(w, -1);
                }
            }
        }
        prefix.push(name, *exp);
    }
    out
}

/// A 1-cocycle: a derivation recorded by its values on the presentation's
/// generators. Construction verifies every Fox relator condition exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocycleClass {
    group: GroupName,
    degree: usize,
    variant: Variant,
    values: Vec<HomogeneousPoly>,
}

impl CocycleClass {
    pub fn new(
        group: GroupName,
        degree: usize,
        variant: Variant,
        values: Vec<HomogeneousPoly>,
    ) -> Result<Self> {
        let pres = GroupPresentation::for_group(group);
        if values.len() != pres.generators().len() {
            return Err(Error::DimensionMismatch {
                expected: pres.generators().len(),
                got: values.len(),
            });
        }
        for v in &values {
            if v.degree() != degree {
                return Err(Error::DegreeMismatch(v.degree(), degree));
            }
            if v.variant() != variant {
                return Err(Error::VariantMismatch {
                    expected: variant.to_string(),
                    got: v.variant().to_string(),
                });
            }
        }
        let c = CocycleClass { group, degree, variant, values };
        c.verify_cocycle_conditions(&pres)?;
        Ok(c)
    }

    /// The principal derivation g -> v - g v.
    pub fn principal(group: GroupName, v: &HomogeneousPoly) -> Self {
        let pres = GroupPresentation::for_group(group);
        let values = pres
            .generators()
            .iter()
            .map(|(_, img)| v.sub(&v.act(img)))
            .collect();
        CocycleClass {
            group,
            degree: v.degree(),
            variant: v.variant(),
            values,
        }
    }

    fn verify_cocycle_conditions(&self, pres: &GroupPresentation) -> Result<()> {
        let dim = self.degree + 1;
        let act = |g: &IntMatrix2| action_matrix(g, self.degree, self.variant);
        for relator in pres.relators() {
            let mut total = vec![Rational::zero(); dim];
            for ((name, _), value) in pres.generators().iter().zip(&self.values) {
                let fox = fox_derivative(relator, name);
                let m = fox.action(pres, dim, &act)?;
                let contrib = m.matvec(value.coeffs())?;
                for (t, c) in total.iter_mut().zip(contrib) {
                    *t += c;
                }
            }
            if !crate::linalg::is_zero_vec(&total) {
                return Err(Error::InvalidArgument(format!(
                    "generator values violate the cocycle condition of relator {relator}"
                )));
            }
        }
        Ok(())
    }

    pub fn group(&self) -> GroupName {
        self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn values(&self) -> &[HomogeneousPoly] {
        &self.values
    }

    pub fn value_of(&self, name: &str) -> Result<&HomogeneousPoly> {
        let pres = GroupPresentation::for_group(self.group);
        let idx = pres
            .generators()
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(&self.values[idx])
    }

    /// Concatenated generator values as one coordinate vector.
    pub fn to_vector(&self) -> Vec<Rational> {
        self.values.iter().flat_map(|p| p.coeffs().to_vec()).collect()
    }

    pub fn from_vector(
        group: GroupName,
        degree: usize,
        variant: Variant,
        v: &[Rational],
    ) -> Result<Self> {
        let dim = degree + 1;
        let pres = GroupPresentation::for_group(group);
        let n = pres.generators().len();
        if v.len() != n * dim {
            return Err(Error::DimensionMismatch { expected: n * dim, got: v.len() });
        }
        let values = (0..n)
            .map(|i| HomogeneousPoly::new(degree, variant, v[i * dim..(i + 1) * dim].to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, degree, variant, values)
    }

    pub fn add(&self, other: &CocycleClass) -> CocycleClass {
        assert_eq!(self.group, other.group);
        CocycleClass {
            group: self.group,
            degree: self.degree,
            variant: self.variant,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> CocycleClass {
        CocycleClass {
            group: self.group,
            degree: self.degree,
            variant: self.variant,
            values: self.values.iter().map(|p| p.scale(factor)).collect(),
        }
    }

    /// Value of the derivation along an explicit word over the presentation
    /// generators, by f(gh) = f(g) + g f(h).
    pub fn derivation_value_along(&self, word: &GroupWord) -> Result<HomogeneousPoly> {
        let pres = GroupPresentation::for_group(self.group);
        let mut value = HomogeneousPoly::zero(self.degree, self.variant);
        let mut prefix = IntMatrix2::identity();
        for (name, exp) in word.letters() {
            let img = pres.generator(name)?;
            let letter_value = self.power_value(img, self.value_of(name)?, *exp);
            value = value.add(&letter_value.act(&prefix));
            prefix = prefix.mul(&img.pow(*exp));
        }
        Ok(value)
    }

    /// f(g^e) from f(g) by the derivation law, with doubling.
    fn power_value(&self, g: &IntMatrix2, fg: &HomogeneousPoly, e: i64) -> HomogeneousPoly {
        if e == 0 {
            return HomogeneousPoly::zero(self.degree, self.variant);
        }
        if e < 0 {
            // 0 = f(1) = f(g^e) + g^e f(g^-e)
            let pos = self.power_value(g, fg, -e);
            return pos.act(&g.pow(e)).neg();
        }
        if e == 1 {
            return fg.clone();
        }
        if e % 2 == 0 {
            let half = self.power_value(g, fg, e / 2);
            half.add(&half.act(&g.pow(e / 2)))
        } else {
            fg.add(&self.power_value(g, fg, e - 1).act(g))
        }
    }

    /// Derivation value at a group element, via word decomposition. The
    /// result is independent of the word by the cocycle conditions.
    pub fn derivation_value(&self, gamma: &IntMatrix2) -> Result<HomogeneousPoly> {
        let pres = GroupPresentation::for_group(self.group);
        let word = pres.word_for(gamma)?;
        self.derivation_value_along(&word)
    }

    /// JSON object mapping generator names to polynomial maps.
    pub fn to_json(&self) -> serde_json::Value {
        let pres = GroupPresentation::for_group(self.group);
        let mut map = serde_json::Map::new();
        for ((name, _), value) in pres.generators().iter().zip(&self.values) {
            map.insert(name.clone(), value.to_json());
        }
        serde_json::Value::Object(map)
    }
}

/// A basis of H^1(group; module) together with the coboundary data needed
/// for membership tests.
#[derive(Debug, Clone)]
pub struct CohomologySpace {
    pub group: GroupName,
    pub degree: usize,
    pub variant: Variant,
    /// Cocycle representatives, linearly independent modulo coboundaries.
    pub basis: Vec<CocycleClass>,
    /// Columns are the principal derivations of the module basis vectors.
    coboundary: QMatrix,
    z1_dim: usize,
}

impl CohomologySpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn z1_dim(&self) -> usize {
        self.z1_dim
    }

    pub fn b1_rank(&self) -> usize {
        self.coboundary.rank()
    }

    /// Whether a cocycle is a principal derivation, decided by solving the
    /// coboundary system exactly.
    pub fn is_coboundary(&self, c: &CocycleClass) -> bool {
        matches!(
            self.coboundary.solve(&c.to_vector()),
            Ok(crate::linalg::Solve::Solution(_))
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "group": self.group.to_string(),
            "degree": self.degree,
            "variant": self.variant.to_string(),
            "dim": self.dim(),
            "basis": self.basis.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Stacked Fox-condition matrix over all relators (the unknowns are the
/// concatenated generator values) together with the coboundary matrix.
fn cocycle_and_coboundary(
    pres: &GroupPresentation,
    dim: usize,
    act: &dyn Fn(&IntMatrix2) -> QMatrix,
) -> Result<(QMatrix, QMatrix)> {
    let gens = pres.generators();
    let n = gens.len();
    let mut fox_rows = QMatrix::zeros(pres.relators().len() * dim, n * dim);
    for (ri, relator) in pres.relators().iter().enumerate() {
        for (gi, (name, _)) in gens.iter().enumerate() {
            let block = fox_derivative(relator, name).action(pres, dim, act)?;
            for r in 0..dim {
                for c in 0..dim {
                    *fox_rows.get_mut(ri * dim + r, gi * dim + c) = block.get(r, c).clone();
                }
            }
        }
    }
    let mut cob = QMatrix::zeros(n * dim, dim);
    for (gi, (_, img)) in gens.iter().enumerate() {
        let a = act(img);
        for r in 0..dim {
            for c in 0..dim {
                let v = if r == c { Rational::one() } else { Rational::zero() };
                *cob.get_mut(gi * dim + r, c) = v - a.get(r, c);
            }
        }
    }
    Ok((fox_rows, cob))
}

/// Dimension of H^1 for an arbitrary module given by its action matrices.
pub fn h1_dim_generic(
    pres: &GroupPresentation,
    dim: usize,
    act: &dyn Fn(&IntMatrix2) -> QMatrix,
) -> Result<usize> {
    let (fox, cob) = cocycle_and_coboundary(pres, dim, act)?;
    let z1 = fox.kernel_basis().len();
    let b1 = cob.rank();
    Ok(z1 - b1)
}

/// H^1(group; weight-k module) with explicit cocycle representatives.
pub fn h1(group: GroupName, degree: usize, variant: Variant) -> CohomologySpace {
    let pres = GroupPresentation::for_group(group);
    let dim = degree + 1;
    let act = |g: &IntMatrix2| action_matrix(g, degree, variant);
    let (fox, cob) = cocycle_and_coboundary(&pres, dim, &act).expect("presentation is well formed");
    let z1_basis = fox.kernel_basis();
    let b1_rank = cob.rank();
    let target = z1_basis.len() - b1_rank;

    // grow a basis of H^1 by keeping the kernel vectors that increase the
    // rank of the coboundary columns
    let mut basis = Vec::with_capacity(target);
    let mut accum = cob.clone();
    let mut rank = b1_rank;
    for v in &z1_basis {
        if basis.len() == target {
            break;
        }
        let col = QMatrix::new(v.len(), 1, v.clone()).unwrap();
        let candidate = accum.hstack(&col).unwrap();
        let r = candidate.rank();
        if r > rank {
            rank = r;
            accum = candidate;
            basis.push(
                CocycleClass::from_vector(group, degree, variant, v)
                    .expect("kernel vectors satisfy the Fox conditions"),
            );
        }
    }
    assert_eq!(basis.len(), target, "independent cocycles exhaust H1");

    CohomologySpace {
        group,
        degree,
        variant,
        basis,
        coboundary: cob,
        z1_dim: z1_basis.len(),
    }
}

/// Basis of the invariants of a list of matrices acting on the weight-k
/// module: the kernel of the stacked (g - 1).
pub fn invariants(mats: &[IntMatrix2], degree: usize, variant: Variant) -> Vec<HomogeneousPoly> {
    let dim = degree + 1;
    let mut stacked = QMatrix::zeros(mats.len() * dim, dim);
    for (gi, g) in mats.iter().enumerate() {
        let a = action_matrix(g, degree, variant);
        for r in 0..dim {
            for c in 0..dim {
                let v = a.get(r, c) - if r == c { Rational::one() } else { Rational::zero() };
                *stacked.get_mut(gi * dim + r, c) = v;
            }
        }
    }
    stacked
        .kernel_basis()
        .into_iter()
        .map(|v| HomogeneousPoly::new(degree, variant, v).unwrap())
        .collect()
}

/// H^0(group; weight-k module): the joint invariants of the generators.
pub fn h0(group: GroupName, degree: usize, variant: Variant) -> Vec<HomogeneousPoly> {
    let pres = GroupPresentation::for_group(group);
    let mats: Vec<IntMatrix2> = pres.generators().iter().map(|(_, m)| m.clone()).collect();
    invariants(&mats, degree, variant)
}

/// dim H^1 of the theta subgroup computed on the SL2(Z) side through the
/// coinduced module; equal to the presentation-based dimension by Shapiro's
/// lemma, which makes it an independent cross-check.
pub fn shapiro_h1(degree: usize, variant: Variant) -> Result<usize> {
    let module: CoinducedModule = coinduce(degree, variant, default_coset_reps())?;
    let pres = GroupPresentation::sl2z();
    let dim = module.dim();
    h1_dim_generic(&pres, dim, &|g| module.action_matrix(g))
}

/// The image of a derivation value in the coinvariants V/(gamma - 1)V.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinvariantClass {
    /// Canonical residual after reduction modulo the image of (gamma - 1).
    pub value: HomogeneousPoly,
    pub is_zero: bool,
}

/// Reduces `v` modulo the column space of `m`: eliminates along the rref of
/// the transpose, leaving a canonical coset representative.
fn reduce_mod_column_space(m: &QMatrix, v: &[Rational]) -> (Vec<Rational>, bool) {
    let (r, rank) = m.transpose().rref();
    let mut out = v.to_vec();
    for i in 0..rank {
        let pivot = (0..r.cols()).find(|&j| !r.get(i, j).is_zero()).unwrap();
        if out[pivot].is_zero() {
            continue;
        }
        let factor = out[pivot].clone();
        for j in 0..r.cols() {
            let delta = &factor * r.get(i, j);
            out[j] -= delta;
        }
    }
    let is_zero = crate::linalg::is_zero_vec(&out);
    (out, is_zero)
}

/// Restriction of a class to the cyclic subgroup generated by `gamma`:
/// its derivation value reduced into the coinvariants V/(gamma - 1)V.
/// For elliptic elements and +-I the restriction vanishes over Q.
pub fn restrict_to_cyclic(c: &CocycleClass, gamma: &IntMatrix2) -> Result<CoinvariantClass> {
    let pres = GroupPresentation::for_group(c.group());
    if !pres.contains(gamma) {
        return Err(Error::NotInGroup(c.group().to_string()));
    }
    match classify(gamma) {
        ElementClass::Identity | ElementClass::MinusIdentity | ElementClass::Elliptic => {
            return Ok(CoinvariantClass {
                value: HomogeneousPoly::zero(c.degree(), c.variant()),
                is_zero: true,
            })
        }
        ElementClass::Parabolic | ElementClass::Hyperbolic => {}
    }
    let value = c.derivation_value(gamma)?;
    let dim = c.degree() + 1;
    let mut m = action_matrix(gamma, c.degree(), c.variant());
    for i in 0..dim {
        let v = m.get(i, i) - Rational::one();
        *m.get_mut(i, i) = v;
    }
    let (residual, is_zero) = reduce_mod_column_space(&m, value.coeffs());
    Ok(CoinvariantClass {
        value: HomogeneousPoly::new(c.degree(), c.variant(), residual)?,
        is_zero,
    })
}

/// A decomposable class: the invariant s_gamma^m attached to gamma.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecomposableClass {
    pub gamma: IntMatrix2,
    pub power: usize,
    /// s_gamma^power, a standard-variant polynomial of degree 2*power.
    pub value: HomogeneousPoly,
}

impl DecomposableClass {
    pub fn new(gamma: IntMatrix2, power: usize) -> Self {
        assert!(power >= 1);
        let value = s_gamma(&gamma).pow(power);
        debug_assert_eq!(value.act(&gamma), value);
        DecomposableClass { gamma, power, value }
    }
}

/// Pairing of a dual-variant class against a decomposable class, evaluated
/// as the module pairing of the derivation value at gamma with the
/// invariant polynomial. Principal derivations pair to zero, so this
/// descends to cohomology.
pub fn pair_decomposable(c: &CocycleClass, d: &DecomposableClass) -> Result<Rational> {
    if c.degree() != d.value.degree() {
        return Err(Error::DegreeMismatch(c.degree(), d.value.degree()));
    }
    pairing(&c.derivation_value(&d.gamma)?, &d.value)
}

/// Certificate that decomposable classes span the pairing dual of H^1.
#[derive(Debug, Clone)]
pub struct SpanningCertificate {
    pub rank: usize,
    pub dim_h1: usize,
    pub radius: u32,
    /// A minimal set of group elements whose decomposable classes already
    /// achieve the full rank, in enumeration order.
    pub detecting_set: Vec<IntMatrix2>,
}

impl SpanningCertificate {
    pub fn is_full(&self) -> bool {
        self.rank == self.dim_h1
    }
}

/// Enumerates group elements up to the given word radius, pairs their
/// decomposable classes s_gamma^m against an H^1 basis of the dual weight-2m
/// module, and greedily extracts a minimal detecting set of full rank.
pub fn spanning_rank(group: GroupName, m: usize, radius: u32) -> SpanningCertificate {
    assert!(m >= 1);
    let space = h1(group, 2 * m, Variant::Dual);
    let dim_h1 = space.dim();
    if dim_h1 == 0 {
        return SpanningCertificate { rank: 0, dim_h1, radius, detecting_set: Vec::new() };
    }
    let pres = GroupPresentation::for_group(group);
    let mut selected = QMatrix::zeros(dim_h1, 0);
    let mut detecting = Vec::new();
    for (gamma, word) in pres.ball(radius) {
        if detecting.len() == dim_h1 {
            break;
        }
        let s = s_gamma(&gamma);
        if s.is_zero() {
            continue;
        }
        let value = s.pow(m);
        let col: Vec<Rational> = space
            .basis
            .iter()
            .map(|c| {
                let dv = c.derivation_value_along(&word).expect("word over presentation");
                pairing(&dv, &value).expect("degrees match")
            })
            .collect();
        if crate::linalg::is_zero_vec(&col) {
            continue;
        }
        let candidate = selected
            .hstack(&QMatrix::new(dim_h1, 1, col).unwrap())
            .unwrap();
        if candidate.rank() > selected.rank() {
            selected = candidate;
            detecting.push(gamma);
        }
    }
    SpanningCertificate {
        rank: selected.rank(),
        dim_h1,
        radius,
        detecting_set: detecting,
    }
}

/// Per-cusp restriction data for the parabolic short exact sequence.
#[derive(Debug, Clone)]
pub struct ParabolicAnalysis {
    pub dim_h1: usize,
    pub cusps: Vec<CuspClass>,
    /// dim of W/(g_p - 1)W for each cusp stabilizer generator.
    pub cusp_coinvariant_dims: Vec<usize>,
    /// Rank of H^1 -> W/(g_p - 1)W for each cusp.
    pub cusp_ranks: Vec<usize>,
    pub dim_parabolic_subspace: usize,
    /// Whether the combined restriction to all cusps is surjective.
    pub surjective: bool,
}

/// Restriction of H^1(group; dual weight 2m) to every cusp stabilizer: the
/// per-cusp coinvariant spaces, their ranks, and the dimension of the joint
/// kernel (the parabolic subspace).
pub fn parabolic_analysis(group: GroupName, m: usize) -> ParabolicAnalysis {
    assert!(m >= 1);
    let degree = 2 * m;
    let space = h1(group, degree, Variant::Dual);
    let pres = GroupPresentation::for_group(group);
    let cusps = cusp_orbits(&pres);
    let dim = degree + 1;

    let mut combined_rows: Vec<Vec<Rational>> = Vec::new();
    let mut cusp_ranks = Vec::new();
    let mut coinv_dims = Vec::new();
    for cusp in &cusps {
        let g_p = &cusp.stabilizer_generator;
        let mut mp = action_matrix(g_p, degree, Variant::Dual);
        for i in 0..dim {
            let v = mp.get(i, i) - Rational::one();
            *mp.get_mut(i, i) = v;
        }
        let rank = mp.rank();
        let coinv_dim = dim - rank;
        coinv_dims.push(coinv_dim);

        // quotient coordinates: entries of the canonical residual at the
        // free positions of the reduced column space
        let (rref_t, r) = mp.transpose().rref();
        let pivot_set: std::collections::HashSet<usize> = (0..r)
            .map(|i| (0..dim).find(|&j| !rref_t.get(i, j).is_zero()).unwrap())
            .collect();
        let free_cols: Vec<usize> = (0..dim).filter(|j| !pivot_set.contains(j)).collect();

        let mut rows: Vec<Vec<Rational>> = vec![Vec::with_capacity(space.dim()); free_cols.len()];
        for class in &space.basis {
            let value = class.derivation_value(g_p).expect("cusp generator is a member");
            let (residual, _) = reduce_mod_column_space(&mp, value.coeffs());
            for (ri, &fc) in free_cols.iter().enumerate() {
                rows[ri].push(residual[fc].clone());
            }
        }
        let block = QMatrix::from_rows(rows.clone()).unwrap();
        cusp_ranks.push(block.rank());
        combined_rows.extend(rows);
    }

    let combined = QMatrix::from_rows(combined_rows).unwrap();
    let combined_rank = if space.dim() == 0 { 0 } else { combined.rank() };
    ParabolicAnalysis {
        dim_h1: space.dim(),
        cusp_coinvariant_dims: coinv_dims,
        surjective: combined_rank == cusps.len(),
        cusps,
        cusp_ranks,
        dim_parabolic_subspace: space.dim() - combined_rank,
    }
}
