//! Exact arithmetic for counting points on Shimura varieties via
//! Langlands–Kottwitz style formulas.
//!
//! The crate is organised bottom-up:
//!
//! * [`abelian`]: integer matrices, Smith normal form, finitely generated
//!   abelian groups and Pontryagin duals.
//! * [`galois`]: lattices with a finite group action, Tate–Nakayama style
//!   local groups and the Kottwitz groups built from them.
//! * [`rootdata`]: reductive root data, Tamagawa numbers and elliptic
//!   endoscopic data.
//! * [`padic`]: unramified extensions of `Q_p`, isocrystals and their
//!   Newton and Kottwitz invariants.
//! * [`kottwitz`]: parameters, their invariants and Fourier sums.
//! * [`adlv`]: lattice enumeration, affine Deligne–Lusztig sets and
//!   (twisted) orbital integrals for `GL_2`.
//! * [`modular`]: point counts of modular curves and the assembled
//!   geometric side.

pub mod abelian;
pub mod adlv;
pub mod error;
pub mod galois;
pub mod kottwitz;
pub mod modular;
pub mod padic;
pub mod rootdata;

pub use error::{Error, Result};
