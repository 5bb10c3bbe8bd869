use crate::padic::{hull_slopes, IsocInvariants};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `p`-adic valuation of a nonzero integer.
pub fn vp_int(x: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

/// `p`-adic valuation of a rational; `None` for zero.
pub fn vp(x: &BigRational, p: u64) -> Option<i64> {
    (!x.is_zero()).then(|| vp_int(x.numer(), p) - vp_int(x.denom(), p))
}

/// Characteristic polynomial `det(x - A)` of a rational matrix, high to low.
pub fn rational_charpoly(a: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = a.len();
    let mut vect = vec![BigRational::one(), -a[0][0].clone()];
    for r in 1..n {
        let row: Vec<BigRational> = a[r][..r].to_vec();
        let mut col: Vec<BigRational> = (0..r).map(|i| a[i][r].clone()).collect();
        let mut t = vec![BigRational::one(), -a[r][r].clone()];
        for _ in 0..r {
            let rs: BigRational = row.iter().zip(&col).map(|(x, y)| x * y).sum();
            t.push(-rs);
            col = (0..r).map(|i| (0..r).map(|k| &a[i][k] * &col[k]).sum()).collect();
        }
        vect = (0..r + 2)
            .map(|i| (0..=i.min(r)).map(|j| &t[i - j] * &vect[j]).sum())
            .collect();
    }
    vect
}

/// Whether a nonzero rational is a square in `Q_p`.
pub fn is_square_qp(x: &BigRational, p: u64) -> bool {
    let v = vp(x, p).expect("nonzero");
    if v % 2 != 0 {
        return false;
    }
    let pb = BigInt::from(p);
    let strip = |mut y: BigInt| {
        while (&y % &pb).is_zero() {
            y /= &pb;
        }
        y
    };
    let u = strip(x.numer().clone()) * strip(x.denom().clone());
    if p == 2 {
        u.mod_floor(&BigInt::from(8)) == BigInt::one()
    } else {
        let r = u.mod_floor(&pb);
        let e = BigInt::from((p - 1) / 2);
        r.modpow(&e, &pb).is_one()
    }
}

/// KP1 for `GL_d` by the norm criterion: the Newton point of `gamma_0` divided
/// by `n` equals `nu_b`, `v_p(det gamma_0) = n kappa`, and for `d = 2` the
/// slopes are realizable by `B` of the centralizer (integral for a split
/// regular `gamma_0`, half-integral for an elliptic one).
pub fn check_kp1_gl(gamma0: &[Vec<BigRational>], b: &IsocInvariants, n: u64, p: u64) -> bool {
    let d = gamma0.len();
    if b.newton.len() != d || n == 0 {
        return false;
    }
    let cp = rational_charpoly(gamma0);
    if cp[d].is_zero() {
        return false;
    }
    let vals: Vec<Option<i64>> = cp.iter().map(|c| vp(c, p)).collect();
    let mut slopes = hull_slopes(&vals);
    slopes.reverse();
    let n_i = n as i64;
    let nu: Vec<Ratio<i64>> = slopes.iter().map(|s| s / n_i).collect();
    if nu != b.newton {
        return false;
    }
    let vdet = vals[d].unwrap();
    if vdet != n_i * b.kappa {
        return false;
    }
    if d == 2 {
        let scalar = gamma0[0][1].is_zero() && gamma0[1][0].is_zero() && gamma0[0][0] == gamma0[1][1];
        if scalar {
            return true;
        }
        let disc = &cp[1] * &cp[1] - BigRational::from_integer(BigInt::from(4)) * &cp[2];
        if disc.is_zero() {
            // non-semisimple
            return false;
        }
        if is_square_qp(&disc, p) {
            return nu.iter().all(|s| s.is_integer());
        }
        return nu.iter().all(|s| (s * 2).is_integer());
    }
    true
}

/// Convenience: rational matrix from integer rows.
pub fn int_matrix(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect()
}

/// Trace and determinant of a `2 x 2` rational matrix as `i64` when integral.
pub fn trace_det(g: &[Vec<BigRational>]) -> Option<(i64, i64)> {
    let t = &g[0][0] + &g[1][1];
    let d = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
    (t.is_integer() && d.is_integer()).then(|| (t.to_integer().to_i64().unwrap(), d.to_integer().to_i64().unwrap()))
}
