//! Exact-arithmetic computation of the first group cohomology of SL2(Z) and
//! its theta subgroup with coefficients in symmetric powers of the standard
//! two-dimensional representation and its dual, together with the explicit
//! Eisenstein cocycles, decomposable-class pairings, parabolic restrictions
//! and Poincare-series bookkeeping built on top of it.

pub mod classes;
pub mod cohomology;
pub mod error;
pub mod linalg;
pub mod modular;
pub mod repr;

pub use error::{Error, Result};

pub use classes::{
    class_degree, cusp_form_dim, detection_report, e2k, evaluate_on_mp, evaluate_on_mp10,
    evaluate_on_mq11, evaluate_on_theta_gamma, h1_dim_oracle, poincare_coefficients,
    sl2z_series_discrepancy, SeriesVariant,
};
pub use cohomology::{
    fox_derivative, h0, h1, pair_decomposable, parabolic_analysis, restrict_to_cyclic,
    shapiro_h1, spanning_rank, CocycleClass, CohomologySpace, DecomposableClass,
};
pub use linalg::{QMatrix, Rational};
pub use modular::{
    classify, cusp_orbits, gamma_d_member, sl2z_word, theta_member, theta_word, GroupName,
    GroupPresentation, GroupWord, IntMatrix2,
};
pub use repr::{
    coinduce, delta_star, pairing, pr_x, s_gamma, HomogeneousPoly, SignedPermutation, Variant,
};
