use crate::padic::{PadicElement, PadicMatrix, Unramified};
use crate::{Error, Result};
use std::sync::Arc;

/// A full-rank `Z_{p^n}`-lattice `p^scale * M` in `Q_{p^n}^d`, with `M`
/// integral and primitive (`M` not inside `p O^d`), stored by the column
/// Hermite normal form of `M`.
///
/// The basis of `M` is upper triangular with diagonal `p^{exps[i]}`; the
/// entry in row `i`, column `j > i` is reduced modulo `p^{exps[i]}` and
/// stored as integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeHnf {
    pub scale: i64,
    pub exps: Vec<u32>,
    /// Off-diagonal entries, column by column: `(0,1), (0,2), (1,2), ...`.
    pub off: Vec<Vec<i64>>,
}

fn off_index(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

impl LatticeHnf {
    pub fn standard(d: usize, n: usize) -> Self {
        LatticeHnf { scale: 0, exps: vec![0; d], off: vec![vec![0; n]; d * (d - 1) / 2] }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &[i64] {
        &self.off[off_index(i, j)]
    }

    /// The homothety class representative (`scale = 0`).
    pub fn vertex(&self) -> Self {
        LatticeHnf { scale: 0, ..self.clone() }
    }

    /// Sum of the diagonal exponents: the length of `O^d / M`.
    pub fn colength(&self) -> u32 {
        self.exps.iter().sum()
    }

    /// Basis matrix (columns span the lattice).
    pub fn basis(&self, ring: &Arc<Unramified>) -> PadicMatrix {
        let d = self.dim();
        let mut m = PadicMatrix::zeros(ring, d, d);
        for j in 0..d {
            m.set(j, j, PadicElement::p_power(ring, self.exps[j] as i64 + self.scale));
            for i in 0..j {
                let e = PadicElement::from_digits(ring, 0, self.entry(i, j).to_vec(), ring.prec);
                m.set(i, j, e.shift(self.scale));
            }
        }
        m
    }

    /// Normal form of the lattice spanned by the columns of `b`.
    pub fn from_basis(b: &PadicMatrix) -> Result<Self> {
        let d = b.rows();
        assert_eq!(d, b.cols());
        let ring = b.ring().clone();
        if b.entries().iter().all(|x| x.is_zero()) {
            return Err(Error::InsufficientPrecision("basis indistinguishable from zero".into()));
        }
        let scale = b.entries().iter().filter(|x| !x.is_zero()).map(|x| x.val_lower()).min().unwrap();
        if b.entries().iter().any(|x| x.is_zero() && !x.is_exact_zero() && x.val_lower() < scale) {
            return Err(Error::InsufficientPrecision("lattice scale undetermined".into()));
        }
        let mut cols: Vec<Vec<PadicElement>> = (0..d).map(|j| b.column(j).iter().map(|x| x.shift(-scale)).collect()).collect();
        let mut exps = vec![0u32; d];
        for i in (0..d).rev() {
            let piv = (0..=i)
                .filter(|&j| cols[j][i].valuation().is_some())
                .min_by_key(|&j| cols[j][i].val_lower())
                .ok_or_else(|| Error::InsufficientPrecision("basis is singular to working precision".into()))?;
            cols.swap(piv, i);
            let e = cols[i][i].val_lower();
            if e < 0 {
                return Err(Error::InsufficientPrecision("lost integrality in normal form".into()));
            }
            let unit_inv = cols[i][i].shift(-e).inv()?;
            cols[i] = cols[i].iter().map(|x| x.mul(&unit_inv)).collect();
            cols[i][i] = PadicElement::p_power(&ring, e);
            exps[i] = e as u32;
            for j in 0..i {
                if cols[j][i].is_exact_zero() {
                    continue;
                }
                let f = cols[j][i].div(&cols[i][i])?;
                let ci = cols[i].clone();
                for (x, y) in cols[j].iter_mut().zip(&ci) {
                    *x = x.sub(&f.mul(y));
                }
                cols[j][i] = PadicElement::zero(&ring);
            }
        }
        let mut off = vec![Vec::new(); d * (d - 1) / 2];
        for j in 1..d {
            for i in (0..j).rev() {
                let a = cols[j][i].clone();
                let r = a.to_digits_mod(exps[i])?;
                let rep = PadicElement::from_digits(&ring, 0, r.clone(), ring.prec);
                let k = a.sub(&rep).shift(-(exps[i] as i64));
                if !k.is_exact_zero() {
                    let ci = cols[i].clone();
                    for (x, y) in cols[j].iter_mut().zip(&ci) {
                        *x = x.sub(&k.mul(y));
                    }
                }
                cols[j][i] = rep;
                off[off_index(i, j)] = r;
            }
        }
        Ok(LatticeHnf { scale, exps, off })
    }

    /// Whether `other` is contained in `self`.
    pub fn contains(&self, other: &LatticeHnf, ring: &Arc<Unramified>) -> Result<bool> {
        let m = self.basis(ring).inverse()?.mul(&other.basis(ring));
        Ok(m.entries().iter().all(|x| x.is_exact_zero() || x.val_lower() >= 0))
    }
}

/// Relative position `inv(L1, L2)`: elementary divisor valuations of
/// `B1^{-1} B2`, largest first.
pub fn relative_position(b1: &PadicMatrix, b2: &PadicMatrix) -> Result<Vec<i64>> {
    b1.inverse()?.mul(b2).elementary_divisors()
}

/// Tree distance between the homothety classes of two rank 2 lattices.
pub fn tree_distance(b1: &PadicMatrix, b2: &PadicMatrix) -> Result<i64> {
    let e = relative_position(b1, b2)?;
    Ok(e[0] - e[e.len() - 1])
}

/// All coefficient vectors of `O / p^k`.
pub fn residues(ring: &Unramified, k: u32) -> Vec<Vec<i64>> {
    let m = ring.pk(k) as i64;
    let mut out = vec![Vec::new()];
    for _ in 0..ring.n {
        out = out.into_iter().flat_map(|v| (0..m).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}
