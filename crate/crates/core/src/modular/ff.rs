use crate::padic::{first_irreducible, is_prime};
use crate::{Error, Result};

/// `F_q` with `q = p^m`, elements encoded as `sum c_i p^i` for the
/// coefficients of a polynomial basis. Multiplication goes through
/// discrete-log tables.
#[derive(Clone, Debug)]
pub struct FiniteField {
    pub p: u32,
    pub m: u32,
    pub q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    /// `sqrt[x]` is some square root of `x`, or `u32::MAX` for non-squares.
    sqrt: Vec<u32>,
}

const ADD_TABLE_MAX: u32 = 2048;

impl FiniteField {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p as i64) || m == 0 {
            return Err(Error::Invalid(format!("F_{{{p}^{m}}} is not a field")));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= 1 << 22).ok_or_else(|| Error::Invalid("field too large".into()))? as u32;
        let f = first_irreducible(p as i64, m as usize);
        let digits = |x: u32| -> Vec<u32> { (0..m).scan(x, |t, _| { let d = *t % p; *t /= p; Some(d) }).collect() };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let poly_mul = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0u64; 2 * m as usize];
            for i in 0..m as usize {
                for j in 0..m as usize {
                    prod[i + j] += da[i] as u64 * db[j] as u64;
                }
            }
            for k in (m as usize..2 * m as usize).rev() {
                let c = prod[k] % p as u64;
                prod[k] = 0;
                for (i, &fi) in f[..m as usize].iter().enumerate() {
                    let sub = (c * (fi.rem_euclid(p as i64) as u64)) % p as u64;
                    let idx = k - m as usize + i;
                    prod[idx] = (prod[idx] + p as u64 - sub) % p as u64;
                }
            }
            let out: Vec<u32> = prod[..m as usize].iter().map(|&c| (c % p as u64) as u32).collect();
            encode(&out)
        };
        let order = q - 1;
        let mut gen = None;
        'search: for g in 2..q.max(3) {
            if q == 2 {
                gen = Some(1);
                break;
            }
            let mut x = 1u32;
            for k in 1..=order {
                x = poly_mul(x, g);
                if x == 1 && k < order {
                    continue 'search;
                }
            }
            gen = Some(g);
            break;
        }
        let g = gen.unwrap_or(1);
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x;
            log[x as usize] = k;
            x = poly_mul(x, g);
        }
        let mut field = FiniteField { p, m, q, exp, log, add: None, sqrt: Vec::new() };
        if q <= ADD_TABLE_MAX {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = field.add_digits(a, b);
                }
            }
            field.add = Some(t);
        }
        let mut sqrt = vec![u32::MAX; q as usize];
        for y in 0..q {
            let s = field.mul(y, y);
            if sqrt[s as usize] == u32::MAX {
                sqrt[s as usize] = y;
            }
        }
        field.sqrt = sqrt;
        Ok(field)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_digits(a, b),
        }
    }

    pub fn neg(&self, mut a: u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.m {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[k as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let k = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
        self.exp[k as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let k = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[k as usize]
    }

    /// Element for a small integer.
    pub fn int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    pub fn sqrt(&self, a: u32) -> Option<u32> {
        let s = self.sqrt[a as usize];
        (s != u32::MAX).then_some(s)
    }

    pub fn is_square(&self, a: u32) -> bool {
        self.sqrt[a as usize] != u32::MAX
    }

    /// Discrete logarithm of a nonzero element.
    pub fn log(&self, a: u32) -> u32 {
        self.log[a as usize]
    }

    pub fn generator(&self) -> u32 {
        if self.q == 2 { 1 } else { self.exp[1] }
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms() {
        for (p, m) in [(5, 1), (3, 2), (7, 2), (2, 3)] {
            let f = FiniteField::new(p, m).unwrap();
            let q = f.q;
            assert_eq!(q, p.pow(m));
            let mut seen = vec![false; q as usize];
            for k in 0..q - 1 {
                seen[f.pow(f.generator(), k as u64) as usize] = true;
            }
            assert_eq!(seen.iter().filter(|&&s| s).count() as u32, q - 1);
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                for b in 0..q {
                    for c in [1, q - 1, q / 2] {
                        let l = f.mul(a, f.add(b, c));
                        let r = f.add(f.mul(a, b), f.mul(a, c));
                        assert_eq!(l, r);
                    }
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
            }
            let squares = (1..q).filter(|&a| f.is_square(a)).count() as u32;
            assert_eq!(squares, if p == 2 { q - 1 } else { (q - 1) / 2 });
        }
    }
}
