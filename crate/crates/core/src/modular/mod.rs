//! Point counts of modular curves over finite fields, checked against the
//! trace-formula side assembled from class numbers and lattice counts.
//!
//! The left side enumerates short Weierstrass curves; the right side sums
//! over Frobenius classes `x^2 - a x + d` the product of a global volume,
//! prime-to-`p` orbital integrals and a twisted orbital integral at `p`.

mod config;
mod curves;
mod ff;
mod forms;
mod report;
mod rhs;

pub use config::{Cache, Config, ENV_CACHE_DIR, ENV_JOBS};
pub use curves::{
    count_points, count_points_with, gl2_order_u64, isomorphism_classes, prime_divisors, CountStrategy, Curve, CurveCountRequest,
    LevelKind,
};
pub use ff::FiniteField;
pub use forms::{class_number, fundamental_part, QuadraticOrderData};
pub use report::{compare, ratio_string, PcfReport, Timings, SCHEMA_VERSION};
pub use rhs::{
    norm_preimage_matrix, rhs_assemble, sha_order_quadratic_torus, Convention, RhsOptions, RhsReport, RhsTerm, TermKind,
};
