//! Kottwitz parameters in beta-encoding, the conditions KP0 and KP1, the
//! Kottwitz invariant and the finite Fourier identity over `K(I_0/Q)`.

mod ambient;
pub mod fixtures;
mod kp1;
mod param;

pub use ambient::AmbientData;
pub use kp1::{check_kp1_gl, int_matrix, is_square_qp, rational_charpoly, trace_det, vp, vp_int};
pub use param::{
    beta_infinity_from_mu, check_kp0, fourier_sum, kottwitz_invariant, kottwitz_invariant_with, parameter_fourier_sum,
    random_parameter, validate, KottwitzParameter,
};
