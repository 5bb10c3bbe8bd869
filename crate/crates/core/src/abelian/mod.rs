//! Integer matrices, Smith normal form, finitely generated abelian groups
//! and Pontryagin duals of finite ones.

mod dual;
mod group;
mod matrix;
mod snf;

pub use dual::{cyclotomic, dual_and_pairing, frac, pairing_is_nondegenerate, root_of_unity_sum, Dual, RootOfUnitySum};
pub use group::{max_abs, AbHom, FgAbGroup};
pub use matrix::{bigvec, IntMatrix};
pub use snf::{integer_nullspace, smith_normal_form, solve_integer, Smith};
