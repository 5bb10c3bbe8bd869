//! Unramified extensions of `Q_p`, matrices over them, and isocrystal invariants.

mod element;
pub mod family;
mod field;
mod isocrystal;
pub mod literal;
mod matrix;

pub use element::PadicElement;
pub use field::{first_irreducible, is_prime, max_precision, Unramified};
pub use isocrystal::*;
pub use matrix::PadicMatrix;
