use super::enumerate::{enumerate_lattices, enumerate_vertices};
use super::hnf::{relative_position, LatticeHnf};
use crate::padic::{sigma_norm, PadicMatrix};
use crate::Result;
use std::collections::HashSet;

/// Points of `X_mu(b)` found in a bounded window.
#[derive(Clone, Debug)]
pub struct AdlvReport {
    pub points: Vec<LatticeHnf>,
    pub count_at_depth: usize,
    pub count_at_next: usize,
    pub depth_used: u32,
    /// No new points between `depth` and `depth + 1`.
    pub saturated: bool,
    /// `Phi = N(b) sigma^n` maps the points inside the window to points.
    pub frobenius_stable: bool,
}

/// Lattices `L` with `inv(L, b sigma L) = mu`.
///
/// With `homothety` the window is the ball of radius `depth` around the
/// standard vertex (points are homothety classes); otherwise it is
/// `p^depth O^d ⊆ L ⊆ p^{-depth} O^d`.
pub fn adlv_points(b: &PadicMatrix, mu: &[i64], depth: u32, homothety: bool, cap: usize) -> Result<AdlvReport> {
    let ring = b.ring().clone();
    let d = b.rows();
    let mut mu = mu.to_vec();
    mu.sort_unstable_by(|x, y| y.cmp(x));
    let window = |r: u32| -> Result<Vec<LatticeHnf>> {
        if homothety {
            enumerate_vertices(&ring, d, r, cap)
        } else {
            enumerate_lattices(&ring, d, r, cap)
        }
    };
    let is_point = |h: &LatticeHnf| -> Result<bool> {
        let basis = h.basis(&ring);
        Ok(relative_position(&basis, &b.mul(&basis.sigma()))? == mu)
    };
    let mut inner = Vec::new();
    for h in window(depth)? {
        if is_point(&h)? {
            inner.push(h);
        }
    }
    let mut outer = 0;
    for h in window(depth + 1)? {
        if is_point(&h)? {
            outer += 1;
        }
    }
    let norm = sigma_norm(b, ring.n);
    let set: HashSet<&LatticeHnf> = inner.iter().collect();
    let in_window: HashSet<LatticeHnf> = window(depth)?.into_iter().collect();
    let mut stable = true;
    for h in &inner {
        let mut img = LatticeHnf::from_basis(&norm.mul(&h.basis(&ring)))?;
        if homothety {
            img = img.vertex();
        }
        if in_window.contains(&img) && !set.contains(&img) {
            stable = false;
        }
    }
    Ok(AdlvReport {
        count_at_depth: inner.len(),
        count_at_next: outer,
        saturated: inner.len() == outer,
        points: inner,
        depth_used: depth,
        frobenius_stable: stable,
    })
}
