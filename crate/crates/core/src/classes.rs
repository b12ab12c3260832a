//! The characteristic-class layer: explicit Eisenstein cocycles E_2k, the
//! weight-to-degree dictionary, exact Poincare-series expansions (with the
//! verbatim and corrected numerators side by side), the modular-forms
//! dimension oracle, evaluation of classes on the explicit detecting
//! bundles, and the detection/spanning reports.

use serde::{Deserialize, Serialize};

use crate::cohomology::{
    h1, restrict_to_cyclic, spanning_rank, CocycleClass, CoinvariantClass,
};
use crate::error::{Error, Result};
use crate::modular::{classify, cusp_orbits, ElementClass, GroupName, GroupPresentation, IntMatrix2};
use crate::repr::{delta_star, pr_x, HomogeneousPoly, UniMonomial, Variant};

/// The Eisenstein cocycle E_2k: the derivation on SL2(Z) with
/// E(A) = ex^2k - ey^2k and E(B) = 0 on the presentation generators.
#[derive(Debug, Clone)]
pub struct EisensteinClass {
    pub k: usize,
    pub underlying: CocycleClass,
}

/// Builds E_2k and verifies both relator conditions exactly; a failure here
/// would be a defect, so it panics rather than returning an error.
pub fn e2k(k: usize) -> EisensteinClass {
    assert!(k >= 1, "k must be positive");
    let degree = 2 * k;
    let value_a = HomogeneousPoly::monomial(degree, Variant::Dual, degree)
        .sub(&HomogeneousPoly::monomial(degree, Variant::Dual, 0));
    let value_b = HomogeneousPoly::zero(degree, Variant::Dual);
    let underlying = CocycleClass::new(GroupName::Sl2z, degree, Variant::Dual, vec![value_a, value_b])
        .expect("E_2k satisfies both relator conditions");
    EisensteinClass { k, underlying }
}

/// Cohomological degree of E_2k on sphere dimension n: 2kn + 2k + 1.
pub fn class_degree(k: u64, n: u64) -> u64 {
    2 * k * n + 2 * k + 1
}

/// Which rational function to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVariant {
    /// The displayed SL2(Z) numerator 1 + z^4l - z^6l + z^8l.
    VerbatimSl2z,
    /// The SL2(Z) numerator with z^4l replaced by z^2l, which matches the
    /// computed cohomology at every weight.
    CorrectedSl2z,
    /// The theta-subgroup series 1 + z (1 + z^2l - z^4l + z^6l) /
    /// ((1 - z^2l)(1 - z^4l)).
    VerbatimTheta,
}

impl std::fmt::Display for SeriesVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SeriesVariant::VerbatimSl2z => "verbatim_sl2z",
            SeriesVariant::CorrectedSl2z => "corrected_sl2z",
            SeriesVariant::VerbatimTheta => "verbatim_theta",
        })
    }
}

impl std::str::FromStr for SeriesVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "verbatim_sl2z" => Ok(SeriesVariant::VerbatimSl2z),
            "corrected_sl2z" => Ok(SeriesVariant::CorrectedSl2z),
            "verbatim_theta" => Ok(SeriesVariant::VerbatimTheta),
            other => Err(Error::Parse(format!("unknown series variant `{other}`"))),
        }
    }
}

/// An exactly expanded Poincare series: the nonzero coefficients up to a
/// degree cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareSeries {
    pub n: u64,
    pub ell: u64,
    pub variant: SeriesVariant,
    pub max_degree: usize,
    /// (degree, count) for every nonzero coefficient, ascending degree.
    pub coefficients: Vec<(usize, i64)>,
}

impl PoincareSeries {
    pub fn coefficient(&self, degree: usize) -> i64 {
        assert!(degree <= self.max_degree, "degree beyond expansion cap");
        self.coefficients
            .iter()
            .find(|(d, _)| *d == degree)
            .map_or(0, |(_, c)| *c)
    }
}

/// Exact power-series expansion of the chosen variant to `max_degree`.
/// The sl2z variants require n in {1, 3, 7}; the theta variant requires an
/// odd n outside that set.
pub fn poincare_coefficients(
    n: u64,
    variant: SeriesVariant,
    max_degree: usize,
) -> Result<PoincareSeries> {
    if n % 2 == 0 {
        return Err(Error::InvalidArgument(format!("n must be odd, got {n}")));
    }
    let sl2z_n = matches!(n, 1 | 3 | 7);
    match variant {
        SeriesVariant::VerbatimSl2z | SeriesVariant::CorrectedSl2z if !sl2z_n => {
            return Err(Error::InvalidArgument(format!(
                "variant {variant} requires n in {{1, 3, 7}}, got {n}"
            )));
        }
        SeriesVariant::VerbatimTheta if sl2z_n => {
            return Err(Error::InvalidArgument(format!(
                "variant {variant} requires n outside {{1, 3, 7}}, got {n}"
            )));
        }
        _ => {}
    }
    let ell = (n + 1) as usize;
    let (shift, numerator, denominators): (usize, Vec<(usize, i64)>, [usize; 2]) = match variant {
        SeriesVariant::VerbatimSl2z => (
            2 * ell + 1,
            vec![(0, 1), (4 * ell, 1), (6 * ell, -1), (8 * ell, 1)],
            [4 * ell, 6 * ell],
        ),
        SeriesVariant::CorrectedSl2z => (
            2 * ell + 1,
            vec![(0, 1), (2 * ell, 1), (6 * ell, -1), (8 * ell, 1)],
            [4 * ell, 6 * ell],
        ),
        SeriesVariant::VerbatimTheta => (
            1,
            vec![(0, 1), (2 * ell, 1), (4 * ell, -1), (6 * ell, 1)],
            [2 * ell, 4 * ell],
        ),
    };

    let mut coeffs = vec![0i64; max_degree + 1];
    if shift <= max_degree {
        let inner_max = max_degree - shift;
        let mut inner = vec![0i64; inner_max + 1];
        for (d, v) in numerator {
            if d <= inner_max {
                inner[d] += v;
            }
        }
        // repeatedly multiply by the geometric series 1/(1 - z^a)
        for a in denominators {
            for i in a..=inner_max {
                inner[i] += inner[i - a];
            }
        }
        for (i, v) in inner.into_iter().enumerate() {
            coeffs[i + shift] = v;
        }
    }
    coeffs[0] += 1;

    Ok(PoincareSeries {
        n,
        ell: ell as u64,
        variant,
        max_degree,
        coefficients: coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .collect(),
    })
}

/// The series coefficient in the degree slot of weight index m, using the
/// canonical sphere dimension for each group (n = 1 for SL2(Z), n = 5 for
/// the theta subgroup); the coefficient does not depend on that choice.
pub fn series_coefficient_for_weight(group: GroupName, m: usize) -> i64 {
    let (n, variant) = match group {
        GroupName::Sl2z => (1, SeriesVariant::CorrectedSl2z),
        GroupName::Theta => (5, SeriesVariant::VerbatimTheta),
    };
    let ell = (n + 1) as usize;
    let degree = 2 * m * ell + 1;
    poincare_coefficients(n, variant, degree)
        .expect("variant matches group")
        .coefficient(degree)
}

/// Dimension of the space of cusp forms of the given even weight >= 4, by
/// the classical dimension formulas: floor(k/12) minus a correction for
/// SL2(Z); the genus-zero two-cusp formula for the theta group.
pub fn cusp_form_dim(weight: u64, group: GroupName) -> Result<u64> {
    if weight % 2 == 1 {
        return Err(Error::InvalidArgument(format!("weight must be even, got {weight}")));
    }
    if weight < 4 {
        return Err(Error::InvalidArgument(format!("weight must be >= 4, got {weight}")));
    }
    Ok(match group {
        GroupName::Sl2z => weight / 12 - u64::from(weight % 12 == 2),
        GroupName::Theta => {
            // (k-1)(g-1) + floor(k/4) eps_2 + (k/2 - 1) t with g = 0,
            // eps_2 = 1, t = 2, clamped at zero
            let k = weight as i64;
            let d = -(k - 1) + k / 4 + (k / 2 - 1) * 2;
            d.max(0) as u64
        }
    })
}

/// Number of cusps of the group.
pub fn cusp_count(group: GroupName) -> usize {
    match group {
        GroupName::Sl2z => 1,
        GroupName::Theta => 2,
    }
}

/// Independent dimension count dim H^1(G; W_2m) = #cusps + 2 dim S_{2m+2},
/// used only as a cross-check against the presentation computation.
pub fn h1_dim_oracle(m: usize, group: GroupName) -> u64 {
    assert!(m >= 1);
    cusp_count(group) as u64 + 2 * cusp_form_dim(2 * m as u64 + 2, group).expect("even weight >= 4")
}

/// The explicit detecting bundles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bundle {
    /// The universal bundle over the cover determined by the cyclic
    /// subgroup of gamma; its algebraic shadow is restriction to gamma.
    ThetaGamma(IntMatrix2),
    /// The mapping-torus bundle over BQ x BSO(n+1); evaluation composes the
    /// restriction to Q with the diagonal specialization.
    MQ11,
    /// The generalized Dehn-twist bundle; evaluation composes restriction
    /// to P with the projection onto the first Euler class.
    MP(GroupName),
    /// The quaternionic restriction of MP; same algebra as MP over SL2(Z).
    MP10,
}

impl std::fmt::Display for Bundle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bundle::ThetaGamma(g) => write!(f, "Theta({g})"),
            Bundle::MQ11 => f.write_str("MQ(1,1)"),
            Bundle::MP(group) => write!(f, "MP[{group}]"),
            Bundle::MP10 => f.write_str("MP(1,0)"),
        }
    }
}

/// Value of a class evaluated on a bundle: a single-variable monomial for
/// the projected evaluations, or a coinvariant class for Theta(gamma).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalValue {
    Monomial(UniMonomial),
    Coinvariant(CoinvariantClass),
}

impl std::fmt::Display for EvalValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvalValue::Monomial(m) => m.fmt(f),
            EvalValue::Coinvariant(c) => c.value.fmt(f),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BundleEvaluation {
    pub bundle: Bundle,
    pub class: String,
    pub value: EvalValue,
    pub nonzero: bool,
}

/// Evaluation on Theta(gamma): the restriction of the class to the cyclic
/// subgroup of gamma.
pub fn evaluate_on_theta_gamma(c: &CocycleClass, gamma: &IntMatrix2) -> Result<BundleEvaluation> {
    let r = restrict_to_cyclic(c, gamma)?;
    Ok(BundleEvaluation {
        bundle: Bundle::ThetaGamma(gamma.clone()),
        class: format!("H1 class of weight {}", c.degree()),
        nonzero: !r.is_zero,
        value: EvalValue::Coinvariant(r),
    })
}

/// The generator of Q, which stabilizes the cusp [1:1].
pub fn q_generator() -> IntMatrix2 {
    IntMatrix2::from_i64(2, -1, 1, 0).unwrap()
}

/// The generator of P = U n G: the translation T for SL2(Z), its square
/// for the theta subgroup.
pub fn p_generator(group: GroupName) -> IntMatrix2 {
    match group {
        GroupName::Sl2z => IntMatrix2::from_i64(1, 1, 0, 1).unwrap(),
        GroupName::Theta => IntMatrix2::from_i64(1, 2, 0, 1).unwrap(),
    }
}

/// E_2k evaluated on MQ(1,1): the derivation value at the Q generator,
/// specialized onto the diagonal. Expected value e^2k.
pub fn evaluate_on_mq11(k: usize) -> BundleEvaluation {
    let class = e2k(k);
    let value = class
        .underlying
        .derivation_value(&q_generator())
        .expect("Q generator lies in SL2(Z)");
    let mono = delta_star(&value);
    BundleEvaluation {
        bundle: Bundle::MQ11,
        class: format!("E_{}", 2 * k),
        nonzero: !mono.is_zero(),
        value: EvalValue::Monomial(mono),
    }
}

/// E_2k evaluated on MP: the derivation value at the P generator, projected
/// onto the first Euler class. Expected -ex^2k over SL2(Z) and -2 ex^2k
/// over the theta subgroup.
pub fn evaluate_on_mp(k: usize, group: GroupName) -> BundleEvaluation {
    let class = e2k(k);
    let value = class
        .underlying
        .derivation_value(&p_generator(group))
        .expect("P generator lies in SL2(Z)");
    let mono = pr_x(&value);
    BundleEvaluation {
        bundle: Bundle::MP(group),
        class: format!("E_{}", 2 * k),
        nonzero: !mono.is_zero(),
        value: EvalValue::Monomial(mono),
    }
}

/// E_2k evaluated on MP(1,0): same algebra as MP over SL2(Z), on the
/// restricted base.
pub fn evaluate_on_mp10(k: usize) -> BundleEvaluation {
    let mut eval = evaluate_on_mp(k, GroupName::Sl2z);
    eval.bundle = Bundle::MP10;
    eval
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Detection {
    pub class_index: usize,
    pub detecting_gamma: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CuspDetection {
    pub cusp: String,
    pub generator: String,
    pub class_index: usize,
    pub value: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SpanningSummary {
    pub rank: usize,
    pub dim: usize,
    pub radius: u32,
    pub detecting_set: Vec<String>,
}

/// Machine-readable detection report for one (group, weight) pair.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DetectionReport {
    pub group: String,
    pub weight: usize,
    pub dim_h1: usize,
    pub series_coefficient: i64,
    pub oracle_dim: u64,
    pub agreement: bool,
    pub detections: Vec<Detection>,
    pub cusp_detections: Vec<CuspDetection>,
    pub spanning: SpanningSummary,
    pub complete: bool,
}

/// Runs the detection search: every basis class must be detected by some
/// group element within the radius, every cusp stabilizer generator must
/// detect some class, and the decomposable classes must span.
pub fn detection_report(group: GroupName, m: usize, radius: u32) -> DetectionReport {
    assert!(m >= 1);
    let degree = 2 * m;
    let space = h1(group, degree, Variant::Dual);
    let pres = GroupPresentation::for_group(group);
    let series_coefficient = series_coefficient_for_weight(group, m);
    let oracle_dim = h1_dim_oracle(m, group);
    let agreement =
        space.dim() == oracle_dim as usize && space.dim() as i64 == series_coefficient;

    let ball = pres.ball(radius);
    let mut detections = Vec::new();
    for (idx, class) in space.basis.iter().enumerate() {
        let found = ball.iter().find_map(|(gamma, _)| {
            match classify(gamma) {
                ElementClass::Identity | ElementClass::MinusIdentity | ElementClass::Elliptic => {
                    return None
                }
                ElementClass::Parabolic | ElementClass::Hyperbolic => {}
            }
            let restricted = restrict_to_cyclic(class, gamma).expect("member");
            (!restricted.is_zero).then(|| Detection {
                class_index: idx,
                detecting_gamma: gamma.to_string(),
                value: restricted.value.to_string(),
            })
        });
        if let Some(d) = found {
            detections.push(d);
        }
    }

    let mut cusp_detections = Vec::new();
    for cusp in cusp_orbits(&pres) {
        let gen = &cusp.stabilizer_generator;
        let found = space.basis.iter().enumerate().find_map(|(idx, class)| {
            let r = restrict_to_cyclic(class, gen).expect("cusp generator is a member");
            (!r.is_zero).then(|| CuspDetection {
                cusp: cusp.label(),
                generator: gen.to_string(),
                class_index: idx,
                value: r.value.to_string(),
            })
        });
        if let Some(d) = found {
            cusp_detections.push(d);
        }
    }

    let cert = spanning_rank(group, m, radius);
    // a zero-dimensional H^1 leaves nothing to detect
    let complete = space.dim() == 0
        || (detections.len() == space.dim()
            && cusp_detections.len() == cusp_count(group)
            && cert.is_full());
    DetectionReport {
        group: group.to_string(),
        weight: m,
        dim_h1: space.dim(),
        series_coefficient,
        oracle_dim,
        agreement,
        detections,
        cusp_detections,
        spanning: SpanningSummary {
            rank: cert.rank,
            dim: cert.dim_h1,
            radius,
            detecting_set: cert.detecting_set.iter().map(|g| g.to_string()).collect(),
        },
        complete,
    }
}

/// One row of the SL2(Z) series comparison.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct DiscrepancyRow {
    pub weight_index: usize,
    pub degree: usize,
    pub dim_h1: usize,
    pub verbatim_coefficient: i64,
    pub corrected_coefficient: i64,
    pub verbatim_agrees: bool,
    pub corrected_agrees: bool,
}

/// Side-by-side comparison of the two SL2(Z) series numerators against the
/// computed cohomology, for weight indices 1..=max_m (n = 1 slots).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeriesDiscrepancyReport {
    pub n: u64,
    pub ell: u64,
    pub rows: Vec<DiscrepancyRow>,
    pub verbatim_consistent: bool,
    pub corrected_consistent: bool,
}

pub fn sl2z_series_discrepancy(max_m: usize) -> SeriesDiscrepancyReport {
    let n = 1u64;
    let ell = 2usize;
    let max_degree = 2 * max_m * ell + 1;
    let verbatim = poincare_coefficients(n, SeriesVariant::VerbatimSl2z, max_degree).unwrap();
    let corrected = poincare_coefficients(n, SeriesVariant::CorrectedSl2z, max_degree).unwrap();
    let rows: Vec<DiscrepancyRow> = (1..=max_m)
        .map(|m| {
            let degree = 2 * m * ell + 1;
            let dim = h1(GroupName::Sl2z, 2 * m, Variant::Dual).dim();
            let v = verbatim.coefficient(degree);
            let c = corrected.coefficient(degree);
            DiscrepancyRow {
                weight_index: m,
                degree,
                dim_h1: dim,
                verbatim_coefficient: v,
                corrected_coefficient: c,
                verbatim_agrees: v == dim as i64,
                corrected_agrees: c == dim as i64,
            }
        })
        .collect();
    SeriesDiscrepancyReport {
        n,
        ell: ell as u64,
        verbatim_consistent: rows.iter().all(|r| r.verbatim_agrees),
        corrected_consistent: rows.iter().all(|r| r.corrected_agrees),
        rows,
    }
}
