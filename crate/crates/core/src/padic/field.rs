use crate::{Error, Result};
use std::sync::Arc;

/// The ring `Z_{p^n} = Z_p[x]/(f)` truncated at `p^prec`, with its Frobenius.
///
/// `f` lifts the lexicographically first monic irreducible polynomial of
/// degree `n` over `F_p`; Frobenius sends `x` to the root of `f` congruent
/// to `x^p`, found by Newton iteration.
#[derive(Debug)]
pub struct Unramified {
    pub p: i64,
    pub n: usize,
    pub prec: u32,
    pk: Vec<i128>,
    modulus: Vec<i64>,
    sigma: Vec<Vec<i64>>,
    sigma_inv: Vec<Vec<i64>>,
}

pub fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Largest `k` with `p^k < 2^62`.
pub fn max_precision(p: i64) -> u32 {
    let mut k = 0;
    let mut x: i128 = 1;
    while x * (p as i128) < (1i128 << 62) {
        x *= p as i128;
        k += 1;
    }
    k
}

impl Unramified {
    pub fn new(p: i64, n: usize, prec: u32) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if n == 0 || n > 12 {
            return Err(Error::Invalid("degree must be between 1 and 12".into()));
        }
        if prec == 0 || prec > max_precision(p) {
            return Err(Error::InsufficientPrecision(format!(
                "precision {prec} outside 1..={} for p = {p}",
                max_precision(p)
            )));
        }
        let pk = (0..=prec).map(|i| (p as i128).pow(i)).collect();
        let fbar = first_irreducible(p, n);
        let mut ring = Unramified { p, n, prec, pk, modulus: fbar, sigma: vec![], sigma_inv: vec![] };
        ring.init_frobenius();
        Ok(Arc::new(ring))
    }

    pub fn modulus_poly(&self) -> &[i64] {
        &self.modulus
    }

    /// `p^k` for `0 <= k <= prec`.
    pub fn pk(&self, k: u32) -> i128 {
        self.pk[k as usize]
    }

    pub fn residue_size(&self) -> i64 {
        self.p.pow(self.n as u32)
    }

    pub fn reduce(&self, v: &mut [i64], r: u32) {
        let m = self.pk(r);
        for c in v.iter_mut() {
            *c = ((*c as i128).rem_euclid(m)) as i64;
        }
    }

    pub fn add_raw(&self, a: &[i64], b: &[i64], r: u32) -> Vec<i64> {
        let m = self.pk(r);
        a.iter().zip(b).map(|(x, y)| ((*x as i128 + *y as i128).rem_euclid(m)) as i64).collect()
    }

    pub fn sub_raw(&self, a: &[i64], b: &[i64], r: u32) -> Vec<i64> {
        let m = self.pk(r);
        a.iter().zip(b).map(|(x, y)| ((*x as i128 - *y as i128).rem_euclid(m)) as i64).collect()
    }

    pub fn scale_raw(&self, a: &[i64], c: i128, r: u32) -> Vec<i64> {
        let m = self.pk(r);
        let c = c.rem_euclid(m);
        a.iter().map(|x| ((*x as i128 * c).rem_euclid(m)) as i64).collect()
    }

    /// Product in `Z_{p^n} / p^r`.
    pub fn mul_raw(&self, a: &[i64], b: &[i64], r: u32) -> Vec<i64> {
        let n = self.n;
        let m = self.pk(r);
        let mut prod = vec![0i128; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as i128 * y as i128).rem_euclid(m);
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..n {
                prod[k - n + i] = (prod[k - n + i] - c * self.modulus[i] as i128).rem_euclid(m);
            }
            prod[k] = 0;
        }
        prod.truncate(n);
        prod.into_iter().map(|x| x as i64).collect()
    }

    fn apply_linear(&self, images: &[Vec<i64>], a: &[i64], r: u32) -> Vec<i64> {
        let m = self.pk(r);
        let mut out = vec![0i128; self.n];
        for (j, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o = (*o + c as i128 * images[j][i] as i128).rem_euclid(m);
            }
        }
        out.into_iter().map(|x| x as i64).collect()
    }

    pub fn frob_raw(&self, a: &[i64], r: u32) -> Vec<i64> {
        self.apply_linear(&self.sigma, a, r)
    }

    pub fn frob_inv_raw(&self, a: &[i64], r: u32) -> Vec<i64> {
        self.apply_linear(&self.sigma_inv, a, r)
    }

    /// Inverse of a unit modulo `p^r`; `None` if `a` is not a unit.
    pub fn inv_raw(&self, a: &[i64], r: u32) -> Option<Vec<i64>> {
        let p = self.p;
        // Residue inverse from the multiplication-by-a matrix over F_p.
        let n = self.n;
        let mut basis = vec![0i64; n];
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            basis.iter_mut().for_each(|x| *x = 0);
            basis[j] = 1;
            cols.push(self.mul_raw(a, &basis, 1));
        }
        let mut e0 = vec![0i64; n];
        e0[0] = 1;
        let mut y = solve_mod_p(&cols, &e0, p)?;
        let mut k = 1;
        while k < r {
            k = (2 * k).min(r);
            let ay = self.mul_raw(a, &y, k);
            let two_minus: Vec<i64> = ay.iter().enumerate().map(|(i, &c)| if i == 0 { 2 - c } else { -c }).collect();
            y = self.mul_raw(&y, &two_minus, k);
        }
        self.reduce(&mut y, r);
        Some(y)
    }

    fn init_frobenius(&mut self) {
        let n = self.n;
        let k = self.prec;
        let mut x = vec![0i64; n];
        if n > 1 {
            x[1] = 1;
        } else {
            // For n = 1 the generator is the root of f, i.e. -f_0.
            x[0] = -self.modulus[0];
            self.reduce(&mut x, k);
        }
        let mut y = self.pow_raw(&x, self.p as u64, k);
        for _ in 0..(2 * k.max(1)).ilog2() + 3 {
            let fy = self.eval_poly(&self.modulus.clone(), &y, k);
            let df: Vec<i64> = (1..=n).map(|i| self.modulus[i] * i as i64).collect();
            let dfy = self.eval_poly(&df, &y, k);
            let inv = self.inv_raw(&dfy, k).expect("f is separable mod p");
            let step = self.mul_raw(&fy, &inv, k);
            y = self.sub_raw(&y, &step, k);
        }
        let mut sigma = Vec::with_capacity(n);
        let mut cur = vec![0i64; n];
        cur[0] = 1;
        for _ in 0..n {
            sigma.push(cur.clone());
            cur = self.mul_raw(&cur, &y, k);
        }
        if n == 1 {
            sigma = vec![vec![1]];
        }
        self.sigma = sigma;
        let mut inv_images: Vec<Vec<i64>> = (0..n).map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            e
        }).collect();
        for _ in 0..n - 1 {
            inv_images = inv_images.iter().map(|v| self.frob_raw(v, k)).collect();
        }
        self.sigma_inv = inv_images;
    }

    fn eval_poly(&self, coeffs: &[i64], y: &[i64], r: u32) -> Vec<i64> {
        let mut acc = vec![0i64; self.n];
        for &c in coeffs.iter().rev() {
            acc = self.mul_raw(&acc, y, r);
            acc[0] = ((acc[0] as i128 + c as i128).rem_euclid(self.pk(r))) as i64;
        }
        acc
    }

    pub fn pow_raw(&self, a: &[i64], mut e: u64, r: u32) -> Vec<i64> {
        let mut base = a.to_vec();
        let mut acc = vec![0i64; self.n];
        acc[0] = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &base, r);
            }
            base = self.mul_raw(&base, &base, r);
            e >>= 1;
        }
        acc
    }

    /// `p`-adic valuation of a coefficient vector known modulo `p^r`
    /// (returns `r` when it vanishes).
    pub fn vec_valuation(&self, a: &[i64], r: u32) -> u32 {
        let mut t = r;
        for &c in a {
            if c != 0 {
                let mut c = c;
                let mut v = 0;
                while c % self.p == 0 && v < t {
                    c /= self.p;
                    v += 1;
                }
                t = t.min(v);
            }
        }
        t
    }
}

/// Solves a linear system over `F_p` given by columns.
fn solve_mod_p(cols: &[Vec<i64>], rhs: &[i64], p: i64) -> Option<Vec<i64>> {
    let n = rhs.len();
    let mut m: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut row: Vec<i64> = cols.iter().map(|c| c[i].rem_euclid(p)).collect();
            row.push(rhs[i].rem_euclid(p));
            row
        })
        .collect();
    let k = cols.len();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let Some(pr) = (row..n).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, pr);
        let inv = mod_inv(m[row][col], p);
        for x in m[row].iter_mut() {
            *x = (*x * inv).rem_euclid(p);
        }
        for r in 0..n {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..=k {
                    m[r][c] = (m[r][c] - f * m[row][c]).rem_euclid(p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() < k {
        return None;
    }
    let mut x = vec![0; k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][k];
    }
    Some(x)
}

pub fn mod_inv(a: i64, p: i64) -> i64 {
    let (mut t, mut nt, mut r, mut nr) = (0i64, 1i64, p, a.rem_euclid(p));
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    t.rem_euclid(p)
}

/// Polynomials over `F_p`, coefficients low to high.
fn poly_mod(a: &[i64], m: &[i64], p: i64) -> Vec<i64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let c = (r[r.len() - 1] * lead_inv).rem_euclid(p);
        let shift = r.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] - c * mi).rem_euclid(p);
        }
        r.pop();
    }
    r
}

fn poly_mulmod(a: &[i64], b: &[i64], m: &[i64], p: i64) -> Vec<i64> {
    let mut prod = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y).rem_euclid(p);
        }
    }
    poly_mod(&prod, m, p)
}

fn poly_trim(mut a: Vec<i64>) -> Vec<i64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn poly_gcd(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let (mut a, mut b) = (poly_trim(a.to_vec()), poly_trim(b.to_vec()));
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_trim(poly_mod(&a, &b, p));
        let r = if r.is_empty() { vec![0] } else { r };
        a = b;
        b = r;
    }
    a
}

/// Rabin's irreducibility test over `F_p` for a monic polynomial.
pub fn is_irreducible_mod_p(f: &[i64], p: i64) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let xpow = |k: usize| {
        // x^(p^k) mod f
        let mut r = vec![0, 1];
        r = poly_mod(&r, f, p);
        for _ in 0..k {
            let mut acc = vec![1];
            let mut base = r.clone();
            let mut e = p as u64;
            while e > 0 {
                if e & 1 == 1 {
                    acc = poly_mulmod(&acc, &base, f, p);
                }
                base = poly_mulmod(&base, &base, f, p);
                e >>= 1;
            }
            r = acc;
        }
        r
    };
    let mut full = xpow(n);
    full.resize(full.len().max(2), 0);
    full[1] = (full[1] - 1).rem_euclid(p);
    if poly_trim(full).iter().any(|&c| c != 0) {
        return false;
    }
    for q in (2..=n).filter(|q| n % q == 0 && is_prime(*q as i64)) {
        let mut h = xpow(n / q);
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] - 1).rem_euclid(p);
        let g = poly_gcd(f, &h, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically first monic irreducible polynomial of degree `n` over `F_p`.
pub fn first_irreducible(p: i64, n: usize) -> Vec<i64> {
    if n == 1 {
        return vec![0, 1];
    }
    let total = (p as u64).pow(n as u32);
    for idx in 0..total {
        let mut f = Vec::with_capacity(n + 1);
        let mut t = idx;
        for _ in 0..n {
            f.push((t % p as u64) as i64);
            t /= p as u64;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible_mod_p(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibles() {
        assert_eq!(first_irreducible(2, 2), vec![1, 1, 1]);
        assert!(is_irreducible_mod_p(&[1, 0, 1], 3));
        assert!(!is_irreducible_mod_p(&[1, 0, 1], 5));
        assert!(!is_irreducible_mod_p(&[1, 0, 0, 0, 1], 2));
    }

    #[test]
    fn frobenius_has_order_n_and_lifts_pth_power() {
        for (p, n) in [(2, 2), (3, 2), (5, 3), (2, 3), (7, 1)] {
            let r = Unramified::new(p, n, 10).unwrap();
            let mut x = vec![0i64; n];
            x[(n > 1) as usize] = 1;
            let mut y = x.clone();
            for _ in 0..n {
                y = r.frob_raw(&y, 10);
            }
            assert_eq!(y, x);
            let a: Vec<i64> = (0..n as i64).map(|i| i + 2).collect();
            let fa = r.frob_raw(&a, 1);
            assert_eq!(fa, r.pow_raw(&a, p as u64, 1));
            // multiplicativity
            let b: Vec<i64> = (0..n as i64).map(|i| 3 * i + 1).collect();
            assert_eq!(r.frob_raw(&r.mul_raw(&a, &b, 10), 10), r.mul_raw(&r.frob_raw(&a, 10), &r.frob_raw(&b, 10), 10));
            assert_eq!(r.frob_inv_raw(&r.frob_raw(&a, 10), 10), { let mut t = a.clone(); r.reduce(&mut t, 10); t });
        }
    }

    #[test]
    fn unit_inverse() {
        let r = Unramified::new(3, 2, 12).unwrap();
        let a = vec![2, 5];
        let inv = r.inv_raw(&a, 12).unwrap();
        assert_eq!(r.mul_raw(&a, &inv, 12), vec![1, 0]);
        assert!(r.inv_raw(&[3, 6], 12).is_none());
    }
}
