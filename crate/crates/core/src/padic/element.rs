use super::field::Unramified;
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

const INF: i64 = i64::MAX / 4;

/// Element of `Q_{p^n}` with relative precision: `p^val * unit + O(p^(val + rel))`.
///
/// `rel == 0` means the value is only known to lie in `p^val Z_{p^n}`; the
/// exact zero has `val == INF`.
#[derive(Clone)]
pub struct PadicElement {
    ring: Arc<Unramified>,
    val: i64,
    rel: u32,
    digits: Vec<i64>,
}

impl PadicElement {
    pub fn zero(ring: &Arc<Unramified>) -> Self {
        PadicElement { ring: ring.clone(), val: INF, rel: 0, digits: vec![0; ring.n] }
    }

    /// Zero known only modulo `p^abs`.
    pub fn zero_mod(ring: &Arc<Unramified>, abs: i64) -> Self {
        PadicElement { ring: ring.clone(), val: abs, rel: 0, digits: vec![0; ring.n] }
    }

    pub fn from_int(ring: &Arc<Unramified>, c: i64) -> Self {
        let mut d = vec![0; ring.n];
        d[0] = c;
        Self::from_digits(ring, 0, d, ring.prec)
    }

    pub fn one(ring: &Arc<Unramified>) -> Self {
        Self::from_int(ring, 1)
    }

    /// `p^k`.
    pub fn p_power(ring: &Arc<Unramified>, k: i64) -> Self {
        let mut d = vec![0; ring.n];
        d[0] = 1;
        PadicElement { ring: ring.clone(), val: k, rel: ring.prec, digits: d }
    }

    /// The generator `x` of `Z_{p^n} = Z_p[x]/(f)`.
    pub fn generator(ring: &Arc<Unramified>) -> Self {
        let mut d = vec![0; ring.n];
        if ring.n > 1 {
            d[1] = 1;
        }
        Self::from_digits(ring, 0, d, ring.prec)
    }

    /// `p^shift * (sum_i coeffs[i] x^i)`, known modulo `p^(shift + r)`.
    pub fn from_digits(ring: &Arc<Unramified>, shift: i64, mut digits: Vec<i64>, r: u32) -> Self {
        assert_eq!(digits.len(), ring.n);
        let r = r.min(ring.prec);
        ring.reduce(&mut digits, r);
        let t = ring.vec_valuation(&digits, r);
        if t >= r {
            return Self::zero_mod(ring, shift + r as i64);
        }
        let div = ring.pk(t);
        let digits = digits.into_iter().map(|c| (c as i128 / div) as i64).collect();
        PadicElement { ring: ring.clone(), val: shift + t as i64, rel: r - t, digits }
    }

    /// `p^shift * (c_0 + c_1 t + ...)` from integer coefficients.
    pub fn from_poly(ring: &Arc<Unramified>, shift: i64, coeffs: &[i64]) -> Self {
        let mut d = vec![0; ring.n];
        for (i, &c) in coeffs.iter().enumerate() {
            let mut xi = vec![0; ring.n];
            if ring.n > 1 {
                xi = ring.pow_raw(&Self::generator(ring).digits, i as u64, ring.prec);
            } else {
                xi[0] = 1;
            }
            d = ring.add_raw(&d, &ring.scale_raw(&xi, c as i128, ring.prec), ring.prec);
        }
        Self::from_digits(ring, shift, d, ring.prec)
    }

    pub fn ring(&self) -> &Arc<Unramified> {
        &self.ring
    }

    pub fn is_exact_zero(&self) -> bool {
        self.val >= INF
    }

    /// Whether the value is indistinguishable from zero at its precision.
    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    /// Valuation if determined.
    pub fn valuation(&self) -> Option<i64> {
        (self.rel > 0).then_some(self.val)
    }

    /// Lower bound for the valuation (exact when nonzero).
    pub fn val_lower(&self) -> i64 {
        self.val
    }

    pub fn rel_precision(&self) -> u32 {
        self.rel
    }

    pub fn abs_precision(&self) -> i64 {
        if self.is_exact_zero() { INF } else { self.val + self.rel as i64 }
    }

    /// Unit part digits modulo `p^rel`.
    pub fn unit_digits(&self) -> &[i64] {
        &self.digits
    }

    /// Residue class of the unit part in `F_{p^n}` as a coefficient vector.
    pub fn residue(&self) -> Vec<i64> {
        self.digits.iter().map(|c| c.rem_euclid(self.ring.p)).collect()
    }

    /// Integer coefficients of the element modulo `p^k` (requires `val >= 0`).
    pub fn to_digits_mod(&self, k: u32) -> Result<Vec<i64>> {
        if self.is_zero() {
            if self.val >= k as i64 || self.is_exact_zero() {
                return Ok(vec![0; self.ring.n]);
            }
            return Err(Error::InsufficientPrecision("element unknown modulo requested power".into()));
        }
        if self.val < 0 {
            return Err(Error::Invalid("element is not integral".into()));
        }
        if self.val >= k as i64 {
            return Ok(vec![0; self.ring.n]);
        }
        if self.abs_precision() < k as i64 {
            return Err(Error::InsufficientPrecision("element unknown modulo requested power".into()));
        }
        let r = k - self.val as u32;
        let mut d = self.digits.clone();
        self.ring.reduce(&mut d, r);
        Ok(self.ring.scale_raw(&d, self.ring.pk(self.val as u32), k))
    }

    pub fn neg(&self) -> Self {
        if self.rel == 0 {
            return self.clone();
        }
        let m = self.ring.pk(self.rel);
        let digits = self.digits.iter().map(|&c| ((-(c as i128)).rem_euclid(m)) as i64).collect();
        PadicElement { ring: self.ring.clone(), val: self.val, rel: self.rel, digits }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_exact_zero() {
            return other.clone();
        }
        if other.is_exact_zero() {
            return self.clone();
        }
        let abs = self.abs_precision().min(other.abs_precision());
        let vmin = self.val.min(other.val);
        if abs <= vmin {
            return Self::zero_mod(&self.ring, abs);
        }
        let r = (abs - vmin) as u32;
        let mut acc = vec![0i64; self.ring.n];
        for x in [self, other] {
            if x.rel == 0 {
                continue;
            }
            let shift = (x.val - vmin) as u32;
            if shift >= r {
                continue;
            }
            let mut d = x.digits.clone();
            self.ring.reduce(&mut d, r - shift);
            let scaled = self.ring.scale_raw(&d, self.ring.pk(shift), r);
            acc = self.ring.add_raw(&acc, &scaled, r);
        }
        Self::from_digits(&self.ring, vmin, acc, r)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(&self.ring);
        }
        let val = self.val + other.val;
        if self.rel == 0 || other.rel == 0 {
            return Self::zero_mod(&self.ring, val);
        }
        let rel = self.rel.min(other.rel);
        let digits = self.ring.mul_raw(&self.digits, &other.digits, rel);
        PadicElement { ring: self.ring.clone(), val, rel, digits }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.rel == 0 {
            return Err(Error::InsufficientPrecision("inverting an element indistinguishable from zero".into()));
        }
        let digits = self.ring.inv_raw(&self.digits, self.rel).expect("unit part is a unit");
        Ok(PadicElement { ring: self.ring.clone(), val: -self.val, rel: self.rel, digits })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_exact_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        out.val += k;
        out
    }

    pub fn frobenius(&self) -> Self {
        if self.rel == 0 {
            return self.clone();
        }
        let digits = self.ring.frob_raw(&self.digits, self.rel);
        PadicElement { ring: self.ring.clone(), val: self.val, rel: self.rel, digits }
    }

    pub fn frobenius_inv(&self) -> Self {
        if self.rel == 0 {
            return self.clone();
        }
        let digits = self.ring.frob_inv_raw(&self.digits, self.rel);
        PadicElement { ring: self.ring.clone(), val: self.val, rel: self.rel, digits }
    }

    pub fn frobenius_pow(&self, k: i64) -> Self {
        let n = self.ring.n as i64;
        let k = k.rem_euclid(n);
        (0..k).fold(self.clone(), |x, _| x.frobenius())
    }

    /// Equality up to the smaller of the two precisions.
    pub fn eq_approx(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Whether the element lies in `Q_p` (all non-constant digits vanish).
    pub fn is_in_qp(&self) -> bool {
        self.rel == 0 || self.digits[1..].iter().all(|&c| c == 0)
    }

    /// For an element of `Q_p`, returns `(val, unit mod p^rel, rel)`.
    pub fn qp_parts(&self) -> Option<(i64, i64, u32)> {
        (self.rel > 0 && self.is_in_qp()).then(|| (self.val, self.digits[0], self.rel))
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reduces relative precision to at most `r`.
    pub fn truncate(&self, r: u32) -> Self {
        if self.rel <= r {
            return self.clone();
        }
        Self::from_digits(&self.ring, self.val, self.digits.clone(), r)
    }
}

impl fmt::Debug for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        if self.rel == 0 {
            return write!(f, "O(p^{})", self.val);
        }
        write!(f, "p^{}*{:?}+O(p^{})", self.val, self.digits, self.abs_precision())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<Unramified> {
        Unramified::new(3, 2, 10).unwrap()
    }

    #[test]
    fn arithmetic_and_precision() {
        let r = ring();
        let a = PadicElement::from_poly(&r, 1, &[2, 1]);
        let b = PadicElement::from_poly(&r, 0, &[1, 1]);
        let c = a.mul(&b).div(&b).unwrap();
        assert!(c.eq_approx(&a));
        assert_eq!(a.valuation(), Some(1));
        let s = a.add(&a.neg());
        assert!(s.is_zero());
        let nine = PadicElement::from_int(&r, 9);
        assert_eq!(nine.valuation(), Some(2));
        assert_eq!(nine.rel_precision(), 8);
        assert!(PadicElement::zero(&r).inv().is_err());
    }

    #[test]
    fn frobenius_is_a_field_automorphism() {
        let r = ring();
        let a = PadicElement::from_poly(&r, -1, &[4, 7]);
        let b = PadicElement::from_poly(&r, 2, &[1, 2]);
        assert!(a.mul(&b).frobenius().eq_approx(&a.frobenius().mul(&b.frobenius())));
        assert!(a.frobenius().frobenius().eq_approx(&a));
        assert!(a.frobenius().frobenius_inv().eq_approx(&a));
        // norm a * sigma(a) lies in Q_p
        assert!(a.mul(&a.frobenius()).is_in_qp());
    }
}
