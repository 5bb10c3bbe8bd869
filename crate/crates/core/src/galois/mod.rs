//! Lattices with an action of a finite quotient of the Galois group, their
//! local groups at places, and the groups `E` and `K` built from a
//! surjection `pi_1(I) -> pi_1(G)`.

mod egroup;
mod finite_group;
mod lattice;
mod local;
pub mod text;

pub use egroup::{e_group, kottwitz_k_group, tn_sequence_check, EGroup, KGroup, PiMap, TnRow};
pub use finite_group::FiniteGroup;
pub use lattice::GaloisLattice;
pub use local::{a_functor, p_map, LocalA, Place, PlaceKind, PlaceSystem};
