use super::group::FgAbGroup;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Pontryagin dual `Hom(A, Q/Z)` of a finite abelian group.
///
/// Characters are written in the coordinates of [`Dual::group`], which has
/// the same invariants as the torsion subgroup of `A`; a character `chi`
/// sends `x` to `sum_i y_i chi_i / d_i mod 1` where `y` are the SNF torsion
/// coordinates of `x`.
#[derive(Clone, Debug)]
pub struct Dual {
    pub base: FgAbGroup,
    pub group: FgAbGroup,
    moduli: Vec<BigInt>,
}

/// Builds the dual of a finite group together with its pairing.
pub fn dual_and_pairing(a: &FgAbGroup) -> Result<Dual> {
    if !a.is_finite() {
        return Err(Error::InfiniteGroup);
    }
    let (tors, _) = a.invariants();
    let ds: Vec<i64> = tors.iter().map(|d| d.to_i64().expect("invariant exceeds i64")).collect();
    Ok(Dual { base: a.clone(), group: FgAbGroup::from_invariants(&ds), moduli: tors })
}

impl Dual {
    /// Pairing value in `[0, 1)`.
    pub fn pair(&self, x: &[BigInt], chi: &[BigInt]) -> BigRational {
        let y = self.base.torsion_coords(x).expect("finite group element");
        let chi = self.group.canonical(chi);
        let mut acc = BigRational::zero();
        for ((yi, ci), d) in y.iter().zip(&chi).zip(&self.moduli) {
            acc += BigRational::new(yi * ci, d.clone());
        }
        frac(&acc)
    }

    /// All characters, in dual-group coordinates.
    pub fn characters(&self) -> Result<Vec<Vec<BigInt>>> {
        self.group.elements()
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

/// Exact value of a sum of roots of unity `sum_k exp(2 pi i theta_k)`.
///
/// The sum is reduced modulo the cyclotomic polynomial of the common
/// denominator, so the coefficient vector is canonical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootOfUnitySum {
    pub conductor: u64,
    /// Coefficients on `1, zeta, ..., zeta^(phi(n)-1)`.
    pub coeffs: Vec<BigInt>,
}

impl RootOfUnitySum {
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_default())
        } else {
            None
        }
    }
}

pub fn root_of_unity_sum(angles: &[BigRational]) -> RootOfUnitySum {
    let mut n = BigInt::one();
    for a in angles {
        n = n.lcm(a.denom());
    }
    let n = n.to_u64().expect("conductor too large");
    let mut poly = vec![BigInt::zero(); n as usize];
    for a in angles {
        let k = (frac(a) * BigRational::from_integer(BigInt::from(n))).to_integer();
        poly[k.to_usize().unwrap()] += 1;
    }
    let phi = cyclotomic(n);
    let coeffs = poly_rem(&poly, &phi);
    RootOfUnitySum { conductor: n, coeffs }
}

/// Cyclotomic polynomial `Phi_n`, coefficients from low to high degree.
pub fn cyclotomic(n: u64) -> Vec<BigInt> {
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic(d));
        }
    }
    num
}

fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut r = trim(num.to_vec());
    let den = trim(den.to_vec());
    let dl = den.len() - 1;
    if r.len() <= dl {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); r.len() - dl];
    for i in (0..q.len()).rev() {
        let c = r[i + dl].clone() / &den[dl];
        for (j, dj) in den.iter().enumerate() {
            r[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

/// Remainder modulo a monic polynomial; result has length `deg(m)`.
fn poly_rem(p: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let mut r = p.to_vec();
    if r.len() > dm {
        for i in (dm..r.len()).rev() {
            let c = r[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, mj) in m.iter().enumerate() {
                r[i - dm + j] -= &c * mj;
            }
        }
    }
    r.resize(dm.max(1), BigInt::zero());
    r.truncate(dm.max(1));
    r
}

/// Checks nondegeneracy of the dual pairing by exhausting both groups.
pub fn pairing_is_nondegenerate(d: &Dual) -> Result<bool> {
    let xs = d.base.elements()?;
    let chis = d.characters()?;
    for x in &xs {
        if !d.base.is_zero(x) && chis.iter().all(|c| d.pair(x, c).is_zero()) {
            return Ok(false);
        }
    }
    for c in &chis {
        if !d.group.is_zero(c) && xs.iter().all(|x| d.pair(x, c).is_zero()) {
            return Ok(false);
        }
    }
    Ok(xs.len() == chis.len())
}
