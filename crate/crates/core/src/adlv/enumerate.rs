use super::hnf::{residues, LatticeHnf};
use crate::padic::{PadicElement, PadicMatrix, Unramified};
use crate::{Error, Result};
use std::sync::Arc;

/// Integral lattices `p^big O^d ⊆ M ⊆ O^d` in normal form.
pub fn enumerate_integral(ring: &Arc<Unramified>, d: usize, big: u32, primitive: bool, cap: usize) -> Result<Vec<LatticeHnf>> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; d];
    loop {
        let mut off_choices: Vec<Vec<Vec<i64>>> = Vec::new();
        for j in 1..d {
            for i in 0..j {
                off_choices.push(residues(ring, exps[i]));
            }
        }
        let mut idx = vec![0usize; off_choices.len()];
        loop {
            let off: Vec<Vec<i64>> = idx.iter().zip(&off_choices).map(|(&k, c)| c[k].clone()).collect();
            let h = LatticeHnf { scale: 0, exps: exps.clone(), off };
            if (!primitive || is_primitive(&h, ring)) && contains_power(&h, ring, big)? {
                if out.len() >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                out.push(h);
            }
            if !advance(&mut idx, &off_choices.iter().map(|c| c.len()).collect::<Vec<_>>()) {
                break;
            }
        }
        if !advance_exps(&mut exps, big) {
            break;
        }
    }
    Ok(out)
}

fn advance(idx: &mut [usize], sizes: &[usize]) -> bool {
    for k in 0..idx.len() {
        idx[k] += 1;
        if idx[k] < sizes[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

fn advance_exps(exps: &mut [u32], big: u32) -> bool {
    for e in exps.iter_mut() {
        *e += 1;
        if *e <= big {
            return true;
        }
        *e = 0;
    }
    false
}

fn is_primitive(h: &LatticeHnf, ring: &Unramified) -> bool {
    h.exps.contains(&0) || h.off.iter().any(|v| v.iter().any(|&c| c.rem_euclid(ring.p) != 0))
}

fn contains_power(h: &LatticeHnf, ring: &Arc<Unramified>, big: u32) -> Result<bool> {
    let inv = h.basis(ring).inverse()?;
    Ok(inv.entries().iter().all(|x| x.is_exact_zero() || x.val_lower() + big as i64 >= 0))
}

/// Lattices `p^r O^d ⊆ L ⊆ p^{-r} O^d`.
pub fn enumerate_lattices(ring: &Arc<Unramified>, d: usize, r: u32, cap: usize) -> Result<Vec<LatticeHnf>> {
    let mut out = enumerate_integral(ring, d, 2 * r, false, cap)?;
    for h in &mut out {
        // p^{-r} M, renormalized so that the stored part is primitive
        let b = h.basis(ring).shift(-(r as i64));
        *h = LatticeHnf::from_basis(&b)?;
    }
    Ok(out)
}

/// Homothety classes at distance at most `radius` from the standard lattice,
/// represented by primitive integral lattices containing `p^radius O^d`.
pub fn enumerate_vertices(ring: &Arc<Unramified>, d: usize, radius: u32, cap: usize) -> Result<Vec<LatticeHnf>> {
    enumerate_integral(ring, d, radius, true, cap)
}

/// The `q + 1` neighbours of a vertex in the tree of `PGL_2`.
pub fn tree_neighbours(v: &LatticeHnf, ring: &Arc<Unramified>) -> Result<Vec<LatticeHnf>> {
    let b = v.basis(ring);
    let (b1, b2) = (b.column(0), b.column(1));
    let p = PadicElement::p_power(ring, 1);
    let mut out = Vec::with_capacity(ring.residue_size() as usize + 1);
    for t in residues(ring, 1) {
        let t = PadicElement::from_digits(ring, 0, t, ring.prec);
        let x: Vec<PadicElement> = b1.iter().zip(&b2).map(|(u, w)| u.add(&t.mul(w))).collect();
        let y: Vec<PadicElement> = b2.iter().map(|w| w.mul(&p)).collect();
        out.push(LatticeHnf::from_basis(&PadicMatrix::from_columns(&[x, y]))?.vertex());
    }
    let y: Vec<PadicElement> = b1.iter().map(|w| w.mul(&p)).collect();
    out.push(LatticeHnf::from_basis(&PadicMatrix::from_columns(&[b2, y]))?.vertex());
    Ok(out)
}

/// Distance of a vertex (primitive integral form) from the standard vertex.
pub fn depth(v: &LatticeHnf) -> u32 {
    v.colength()
}
