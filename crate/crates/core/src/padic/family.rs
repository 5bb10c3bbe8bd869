//! Matrices over `Z_p[u, u^-1][1/p]` and the two valuations on that ring: the
//! Gauss valuation and the specialization `u -> u0`.
//!
//! For `h` invertible over the ring both valuations give the same Kottwitz point.

use super::element::PadicElement;
use super::field::Unramified;
use crate::{Error, Result};
use std::sync::Arc;

/// `sum_i coeffs[i] u^(low + i)`.
#[derive(Clone, Debug)]
pub struct Laurent {
    pub low: i64,
    pub coeffs: Vec<PadicElement>,
}

impl Laurent {
    pub fn constant(c: PadicElement) -> Self {
        Laurent { low: 0, coeffs: vec![c] }
    }

    pub fn monomial(c: PadicElement, k: i64) -> Self {
        Laurent { low: k, coeffs: vec![c] }
    }

    fn ring(&self) -> &Arc<Unramified> {
        self.coeffs[0].ring()
    }

    fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64
    }

    fn coeff(&self, k: i64) -> Option<&PadicElement> {
        (k >= self.low && k < self.high()).then(|| &self.coeffs[(k - self.low) as usize])
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let zero = PadicElement::zero(self.ring());
        let coeffs = (low..high)
            .map(|k| self.coeff(k).unwrap_or(&zero).add(o.coeff(k).unwrap_or(&zero)))
            .collect();
        Laurent { low, coeffs }
    }

    pub fn neg(&self) -> Laurent {
        Laurent { low: self.low, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        let mut coeffs = vec![PadicElement::zero(self.ring()); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Laurent { low: self.low + o.low, coeffs }
    }

    /// Minimum coefficient valuation; `None` if the polynomial vanishes to precision.
    pub fn gauss_valuation(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(|c| c.valuation()).min()
    }

    pub fn eval(&self, u0: &PadicElement) -> Result<PadicElement> {
        let mut acc = PadicElement::zero(self.ring());
        let uinv = if self.low < 0 { Some(u0.inv()?) } else { None };
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.low + i as i64;
            let pw = if k >= 0 { u0.pow(k as u64) } else { uinv.as_ref().unwrap().pow((-k) as u64) };
            acc = acc.add(&c.mul(&pw));
        }
        Ok(acc)
    }
}

/// Square matrix with Laurent polynomial entries.
#[derive(Clone, Debug)]
pub struct LaurentMatrix {
    pub d: usize,
    pub entries: Vec<Laurent>,
}

impl LaurentMatrix {
    pub fn new(d: usize, entries: Vec<Laurent>) -> Self {
        assert_eq!(entries.len(), d * d);
        LaurentMatrix { d, entries }
    }

    pub fn det(&self) -> Laurent {
        let idx: Vec<usize> = (0..self.d).collect();
        self.minor(&idx, 0)
    }

    fn minor(&self, cols: &[usize], row: usize) -> Laurent {
        if cols.len() == 1 {
            return self.entries[row * self.d + cols[0]].clone();
        }
        let mut acc: Option<Laurent> = None;
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let mut term = self.entries[row * self.d + c].mul(&self.minor(&rest, row + 1));
            if k % 2 == 1 {
                term = term.neg();
            }
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        acc.unwrap()
    }

    /// Errors unless `det` is a unit `c p^k u^m` of the ring.
    fn unit_det(&self) -> Result<Laurent> {
        let det = self.det();
        let nonzero = det.coeffs.iter().filter(|c| !c.is_zero()).count();
        if nonzero != 1 {
            return Err(Error::Invalid("matrix is not invertible over the family ring".into()));
        }
        Ok(det)
    }

    /// Kottwitz point for the Gauss valuation.
    pub fn kappa_gauss(&self) -> Result<i64> {
        Ok(self.unit_det()?.gauss_valuation().expect("unit determinant"))
    }

    /// Kottwitz point after specializing `u -> u0`.
    pub fn kappa_specialized(&self, u0: &PadicElement) -> Result<i64> {
        let det = self.unit_det()?.eval(u0)?;
        det.valuation()
            .ok_or_else(|| Error::InsufficientPrecision("specialized determinant undetermined".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_and_specialization_agree() {
        let q = Unramified::new(5, 1, 10).unwrap();
        let c = |x: i64| PadicElement::from_int(&q, x);
        // [[p^2 u, 1 + u], [0, p^-1 u^-1]] has det p
        let m = LaurentMatrix::new(
            2,
            vec![
                Laurent::monomial(PadicElement::p_power(&q, 2), 1),
                Laurent { low: 0, coeffs: vec![c(1), c(1)] },
                Laurent::constant(c(0)),
                Laurent::monomial(PadicElement::p_power(&q, -1), -1),
            ],
        );
        assert_eq!(m.kappa_gauss().unwrap(), 1);
        assert_eq!(m.kappa_specialized(&c(3)).unwrap(), 1);
        // 1 + p u is not a unit of the ring
        let bad = LaurentMatrix::new(1, vec![Laurent { low: 0, coeffs: vec![c(1), c(5)] }]);
        assert!(bad.kappa_gauss().is_err());
    }
}
