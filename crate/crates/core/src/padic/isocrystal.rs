use super::element::PadicElement;
use super::field::Unramified;
use super::matrix::PadicMatrix;
use crate::abelian::bigvec;
use crate::galois::GaloisLattice;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::Ratio;
use std::sync::Arc;

/// Newton point and Kottwitz point of `b in GL_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsocInvariants {
    /// Weakly decreasing slopes.
    pub newton: Vec<Ratio<i64>>,
    pub kappa: i64,
}

impl IsocInvariants {
    pub fn of(b: &PadicMatrix) -> Result<Self> {
        Ok(IsocInvariants { newton: newton_point(b)?, kappa: kottwitz_point(b)? })
    }

    pub fn is_basic(&self) -> bool {
        self.newton.windows(2).all(|w| w[0] == w[1])
    }
}

/// `b sigma(b) ... sigma^(n-1)(b)`.
pub fn sigma_norm(b: &PadicMatrix, n: usize) -> PadicMatrix {
    let mut acc = b.clone();
    let mut s = b.clone();
    for _ in 1..n {
        s = s.sigma();
        acc = acc.mul(&s);
    }
    acc
}

pub fn frobenius(x: &PadicElement) -> PadicElement {
    x.frobenius()
}

/// `g b sigma(g)^-1`.
pub fn sigma_conjugate(b: &PadicMatrix, g: &PadicMatrix) -> Result<PadicMatrix> {
    Ok(g.mul(b).mul(&g.sigma().inverse()?))
}

/// Slopes of the lower convex hull through `(i, v_i)`, listed as root valuations
/// in increasing order. `None` marks a vanishing coefficient; `vals[0]` must be finite.
pub fn hull_slopes(vals: &[Option<i64>]) -> Vec<Ratio<i64>> {
    let pts: Vec<(i64, i64)> = vals.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i as i64, v))).collect();
    let mut out = Vec::new();
    let mut cur = pts[0];
    while cur.0 < pts.last().unwrap().0 {
        let mut best: Option<((i64, i64), Ratio<i64>)> = None;
        for &q in pts.iter().filter(|q| q.0 > cur.0) {
            let s = Ratio::new(q.1 - cur.1, q.0 - cur.0);
            if best.map_or(true, |(_, bs)| s <= bs) {
                best = Some((q, s));
            }
        }
        let (q, s) = best.unwrap();
        for _ in cur.0..q.0 {
            out.push(s);
        }
        cur = q;
    }
    out
}

/// Root valuations of a polynomial given high-to-low with leading coefficient 1,
/// sorted weakly decreasing. Errors unless every coefficient that could move the
/// polygon has a determined valuation.
pub fn newton_slopes(coeffs: &[PadicElement]) -> Result<Vec<Ratio<i64>>> {
    let d = coeffs.len() - 1;
    let last = &coeffs[d];
    if last.valuation().is_none() {
        return Err(Error::InsufficientPrecision("constant term of the characteristic polynomial is undetermined".into()));
    }
    let vals: Vec<Option<i64>> = coeffs.iter().map(|c| c.valuation()).collect();
    let slopes = hull_slopes(&vals);
    // hull height at each abscissa
    let mut height = vec![Ratio::from_integer(vals[0].unwrap())];
    for s in &slopes {
        let h = *height.last().unwrap() + s;
        height.push(h);
    }
    for (i, c) in coeffs.iter().enumerate() {
        if c.valuation().is_none() && !c.is_exact_zero() && Ratio::from_integer(c.val_lower()) < height[i] {
            return Err(Error::InsufficientPrecision("Newton polygon undetermined at working precision".into()));
        }
    }
    let mut out = slopes;
    out.reverse();
    Ok(out)
}

/// Newton point of `b in GL_d(Q_{p^n})`, with `n` the degree of the ring.
pub fn newton_point(b: &PadicMatrix) -> Result<Vec<Ratio<i64>>> {
    let n = b.ring().n;
    let norm = sigma_norm(b, n);
    let mut cp = norm.charpoly();
    // The Berkowitz constant term loses absolute precision when entries have
    // negative valuation; the norm of det(b) from elimination does not.
    let det = b.det()?;
    if det.valuation().is_some() {
        let nd = (1..n).fold(det.clone(), |acc, i| acc.mul(&det.frobenius_pow(i as i64)));
        let d = b.rows();
        cp[d] = if d % 2 == 1 { nd.neg() } else { nd };
    }
    let slopes = newton_slopes(&cp)?;
    Ok(slopes.into_iter().map(|s| s / n as i64).collect())
}

/// `v_p(det b)`.
pub fn kottwitz_point(b: &PadicMatrix) -> Result<i64> {
    b.det()?
        .valuation()
        .ok_or_else(|| Error::InsufficientPrecision("determinant undetermined at working precision".into()))
}

/// Kottwitz point of a torus element `lambda(p) * u` with `u` integral: the class
/// of the coweight in the coinvariants under `h`.
pub fn kottwitz_point_torus(lattice: &GaloisLattice, h: &[usize], coweight: &[i64]) -> Vec<BigInt> {
    lattice.coinvariants(h).canonical(&bigvec(coweight))
}

/// Checks `b sigma(b) ... sigma^(n-1)(b) = (n nu_b)(p)` up to conjugation: equal
/// characteristic polynomials and the norm annihilated by the product of
/// `(N - p^e)` over distinct exponents.
pub fn is_decent(b: &PadicMatrix, n: usize) -> Result<bool> {
    let ring = b.ring().clone();
    if n % ring.n != 0 {
        return Err(Error::Invalid(format!("decency index {n} is not a multiple of the field degree {}", ring.n)));
    }
    let nu = newton_point(b)?;
    if nu.iter().any(|s| !(s * n as i64).is_integer()) {
        return Ok(false);
    }
    let exps: Vec<i64> = nu.iter().map(|s| (s * n as i64).to_integer()).collect();
    let norm = sigma_norm(b, n);
    let target = PadicMatrix::diag(&ring, &exps.iter().map(|&e| PadicElement::p_power(&ring, e)).collect::<Vec<_>>());
    if exps.iter().all(|&e| e == exps[0]) {
        return Ok(norm.eq_approx(&target));
    }
    let cp = norm.charpoly();
    let tp = target.charpoly();
    if !cp.iter().zip(&tp).all(|(a, b)| a.eq_approx(b)) {
        return Ok(false);
    }
    let mut distinct = exps.clone();
    distinct.dedup();
    let d = b.rows();
    let mut prod = PadicMatrix::identity(&ring, d);
    for e in distinct {
        prod = prod.mul(&norm.sub(&PadicMatrix::scalar(&ring, d, &PadicElement::p_power(&ring, e))));
    }
    Ok(prod.is_zero())
}

/// The degree `n` norm with its characteristic polynomial, certified to have
/// coefficients in `Q_p`.
#[derive(Clone, Debug)]
pub struct NormCertificate {
    pub norm: PadicMatrix,
    pub charpoly: Vec<PadicElement>,
}

pub fn degree_n_norm(delta: &PadicMatrix, n: usize) -> Result<NormCertificate> {
    let ring = delta.ring();
    if n == 0 || n % ring.n != 0 {
        return Err(Error::Invalid(format!("norm degree {n} is not a multiple of the field degree {}", ring.n)));
    }
    let norm = sigma_norm(delta, n);
    let charpoly = norm.charpoly();
    if !charpoly.iter().all(|c| c.is_in_qp()) {
        return Err(Error::InsufficientPrecision("norm characteristic polynomial not in Q_p at working precision".into()));
    }
    Ok(NormCertificate { norm, charpoly })
}

/// Block-diagonal decent representative with the given Newton slopes: a slope
/// `r/s` block is the `s x s` cyclic shift with `p^r` in the corner.
pub fn decent_representative(ring: &Arc<Unramified>, slopes: &[Ratio<i64>]) -> Result<PadicMatrix> {
    let mut sorted = slopes.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    let d = sorted.len();
    let mut m = PadicMatrix::zeros(ring, d, d);
    let mut i = 0;
    while i < d {
        let s = sorted[i];
        let mult = sorted[i..].iter().take_while(|&&x| x == s).count();
        let den = *s.denom() as usize;
        if mult % den != 0 {
            return Err(Error::Invalid(format!("slope {s} has multiplicity {mult}, not a multiple of {den}")));
        }
        for block in 0..mult / den {
            let o = i + block * den;
            if den == 1 {
                m.set(o, o, PadicElement::p_power(ring, *s.numer()));
            } else {
                for k in 0..den - 1 {
                    m.set(o + k, o + k + 1, PadicElement::one(ring));
                }
                m.set(o + den - 1, o, PadicElement::p_power(ring, *s.numer()));
            }
        }
        i += mult;
    }
    Ok(m)
}
