//! Lattices in `Q_{p^n}^d`, affine Deligne–Lusztig sets and the local
//! orbital integrals of `GL_2`.

mod enumerate;
mod hnf;
mod orbital;
mod points;

pub use enumerate::{depth, enumerate_integral, enumerate_lattices, enumerate_vertices, tree_neighbours};
pub use hnf::{relative_position, residues, tree_distance, LatticeHnf};
pub use orbital::{
    classify_quadratic, displacement_level_set, fixed_subtree, gl2_order, orbital_integral_central, orbital_integral_gl2,
    quadratic_roots, sqrt_qp, twisted_orbital_integral, unit_index, LevelSet, LocalOrbital, OrbitalCache, TorusKind,
    TwistedOrbital, DEFAULT_MAX_DEPTH,
};
pub use points::{adlv_points, AdlvReport};

#[cfg(test)]
mod tests;
