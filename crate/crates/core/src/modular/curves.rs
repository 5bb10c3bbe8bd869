use super::ff::FiniteField;
use crate::{Error, Result};
use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelKind {
    /// Full level structure `(Z/N)^2 ≅ E[N]`.
    Full,
    /// A point of exact order `N`.
    Gamma1,
}

impl LevelKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "y" | "full" | "y(n)" => Ok(LevelKind::Full),
            "y1" | "gamma1" | "y1(n)" => Ok(LevelKind::Gamma1),
            _ => Err(Error::Invalid(format!("unknown level structure {s}"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LevelKind::Full => "Y(N)",
            LevelKind::Gamma1 => "Y1(N)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CurveCountRequest {
    pub p: u32,
    pub m: u32,
    #[serde(rename = "N")]
    pub level: u32,
    pub kind: LevelKind,
}

impl CurveCountRequest {
    pub fn validate(&self) -> Result<()> {
        if self.level < 3 {
            return Err(Error::LevelNotNeat(self.level as u64));
        }
        if !crate::padic::is_prime(self.p as i64) {
            return Err(Error::Invalid(format!("{} is not prime", self.p)));
        }
        if self.p < 5 {
            return Err(Error::Unsupported(format!("point counts need p >= 5, got {}", self.p)));
        }
        if self.level % self.p == 0 {
            return Err(Error::Invalid(format!("p = {} divides the level {}", self.p, self.level)));
        }
        if self.m == 0 {
            return Err(Error::Invalid("m must be positive".into()));
        }
        Ok(())
    }
}

pub type Point = Option<(u32, u32)>;

/// `y^2 = x^3 + a x + b` over a field of characteristic at least 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Curve {
    pub a: u32,
    pub b: u32,
}

impl Curve {
    pub fn discriminant_nonzero(&self, f: &FiniteField) -> bool {
        let a3 = f.mul(f.mul(self.a, self.a), self.a);
        let b2 = f.mul(self.b, self.b);
        f.add(f.mul(f.int(4), a3), f.mul(f.int(27), b2)) != 0
    }

    pub fn j_invariant(&self, f: &FiniteField) -> u32 {
        let a3 = f.mul(f.mul(self.a, self.a), self.a);
        let four_a3 = f.mul(f.int(4), a3);
        let den = f.add(four_a3, f.mul(f.int(27), f.mul(self.b, self.b)));
        f.mul(f.mul(f.int(1728), four_a3), f.inv(den))
    }

    fn rhs(&self, f: &FiniteField, x: u32) -> u32 {
        let x2 = f.mul(x, x);
        f.add(f.mul(f.add(x2, self.a), x), self.b)
    }

    /// Number of rational points including the point at infinity.
    pub fn order(&self, f: &FiniteField) -> u64 {
        let mut n = 1u64;
        for x in f.elements() {
            let r = self.rhs(f, x);
            n += if r == 0 { 1 } else if f.is_square(r) { 2 } else { 0 };
        }
        n
    }

    pub fn points(&self, f: &FiniteField) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for x in f.elements() {
            let r = self.rhs(f, x);
            if let Some(y) = f.sqrt(r) {
                out.push((x, y));
                if y != 0 {
                    out.push((x, f.neg(y)));
                }
            }
        }
        out
    }

    pub fn add(&self, f: &FiniteField, p1: Point, p2: Point) -> Point {
        let (Some((x1, y1)), Some((x2, y2))) = (p1, p2) else {
            return p1.or(p2);
        };
        let lambda = if x1 == x2 {
            if f.add(y1, y2) == 0 {
                return None;
            }
            let num = f.add(f.mul(f.int(3), f.mul(x1, x1)), self.a);
            f.mul(num, f.inv(f.mul(f.int(2), y1)))
        } else {
            f.mul(f.sub(y2, y1), f.inv(f.sub(x2, x1)))
        };
        let x3 = f.sub(f.sub(f.mul(lambda, lambda), x1), x2);
        let y3 = f.sub(f.mul(lambda, f.sub(x1, x3)), y1);
        Some((x3, y3))
    }

    pub fn mul(&self, f: &FiniteField, mut k: u64, pt: Point) -> Point {
        let mut acc = None;
        let mut base = pt;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(f, acc, base);
            }
            base = self.add(f, base, base);
            k >>= 1;
        }
        acc
    }

    /// `u` in `F_q^x` with `u^4 a = a`, `u^6 b = b`; `u` acts by `(u^2 x, u^3 y)`.
    pub fn automorphisms(&self, f: &FiniteField) -> Vec<u32> {
        (1..f.q)
            .filter(|&u| f.mul(f.pow(u, 4), self.a) == self.a && f.mul(f.pow(u, 6), self.b) == self.b)
            .collect()
    }

    fn act(f: &FiniteField, u: u32, pt: (u32, u32)) -> (u32, u32) {
        (f.mul(f.pow(u, 2), pt.0), f.mul(f.pow(u, 3), pt.1))
    }

    /// Sum over automorphisms `u` of the number of level structures fixed by
    /// `u` (so the number of isomorphism classes of pairs is this divided by
    /// the number of automorphisms).
    pub fn burnside_sum(&self, f: &FiniteField, level: u32, kind: LevelKind, auts: &[u32]) -> u64 {
        let n = level as u64;
        let total = self.order(f);
        match kind {
            LevelKind::Full => {
                if total % (n * n) != 0 {
                    return 0;
                }
                let torsion: Vec<(u32, u32)> =
                    self.points(f).into_iter().filter(|&pt| self.mul(f, n, Some(pt)).is_none()).collect();
                if torsion.len() as u64 + 1 != n * n {
                    return 0;
                }
                let bases = gl2_order_u64(level);
                auts.iter().filter(|&&u| torsion.iter().all(|&pt| Self::act(f, u, pt) == pt)).count() as u64 * bases
            }
            LevelKind::Gamma1 => {
                if total % n != 0 {
                    return 0;
                }
                let exact: Vec<(u32, u32)> =
                    self.points(f).into_iter().filter(|&pt| has_exact_order(self, f, pt, level)).collect();
                auts.iter().map(|&u| exact.iter().filter(|&&pt| Self::act(f, u, pt) == pt).count() as u64).sum()
            }
        }
    }
}

fn has_exact_order(c: &Curve, f: &FiniteField, pt: (u32, u32), n: u32) -> bool {
    if c.mul(f, n as u64, Some(pt)).is_some() {
        return false;
    }
    prime_divisors(n).into_iter().all(|d| c.mul(f, (n / d) as u64, Some(pt)).is_some())
}

pub fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `|GL_2(Z/N)|`.
pub fn gl2_order_u64(n: u32) -> u64 {
    let mut out = 1u64;
    let mut m = n as u64;
    let mut l = 2u64;
    while m > 1 {
        if m % l == 0 {
            let mut e = 0;
            while m % l == 0 {
                m /= l;
                e += 1;
            }
            out *= (l * l - 1) * (l * l - l) * l.pow(4 * (e - 1));
        }
        l += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountStrategy {
    /// Isomorphism classes by `j`-invariant and twists.
    JInvariant,
    /// All Weierstrass pairs `(a, b)`, weighted by `1 / (q - 1)`.
    Weierstrass,
}

/// Number of `F_{p^m}`-points of the moduli space of elliptic curves with
/// the requested level structure.
pub fn count_points(req: &CurveCountRequest) -> Result<u64> {
    count_points_with(req, CountStrategy::JInvariant)
}

pub fn count_points_with(req: &CurveCountRequest, strategy: CountStrategy) -> Result<u64> {
    req.validate()?;
    let f = FiniteField::new(req.p, req.m)?;
    let total = match strategy {
        CountStrategy::Weierstrass => by_weierstrass(&f, req),
        CountStrategy::JInvariant => by_j_invariant(&f, req),
    };
    if !total.is_integer() {
        return Err(Error::Invalid(format!("non-integral point count {total}")));
    }
    Ok(*total.numer() as u64)
}

fn by_weierstrass(f: &FiniteField, req: &CurveCountRequest) -> Ratio<i64> {
    let sum: u64 = (0..f.q)
        .into_par_iter()
        .map(|a| {
            let mut s = 0u64;
            for b in f.elements() {
                let c = Curve { a, b };
                if !c.discriminant_nonzero(f) {
                    continue;
                }
                let auts = c.automorphisms(f);
                s += c.burnside_sum(f, req.level, req.kind, &auts);
            }
            s
        })
        .sum();
    Ratio::new(sum as i64, f.q as i64 - 1)
}

/// One curve per `F_q`-isomorphism class.
pub fn isomorphism_classes(f: &FiniteField) -> Vec<Curve> {
    let g = f.generator();
    let nonsquare = (1..f.q).find(|&c| !f.is_square(c)).expect("odd characteristic");
    let (j0, j1728) = (0, f.int(1728));
    let mut out = Vec::new();
    for j in f.elements() {
        if j == j0 {
            let k = (f.q as u64 - 1).gcd(&6);
            out.extend((0..k).map(|e| Curve { a: 0, b: f.pow(g, e) }));
        } else if j == j1728 {
            let k = (f.q as u64 - 1).gcd(&4);
            out.extend((0..k).map(|e| Curve { a: f.pow(g, e), b: 0 }));
        } else {
            let t = f.sub(j1728, j);
            let a = f.mul(f.int(3), f.mul(j, t));
            let b = f.mul(f.int(2), f.mul(j, f.mul(t, t)));
            out.push(Curve { a, b });
            let c2 = f.mul(nonsquare, nonsquare);
            out.push(Curve { a: f.mul(c2, a), b: f.mul(f.mul(c2, nonsquare), b) });
        }
    }
    out
}

fn by_j_invariant(f: &FiniteField, req: &CurveCountRequest) -> Ratio<i64> {
    isomorphism_classes(f)
        .par_iter()
        .map(|c| {
            let auts = c.automorphisms(f);
            Ratio::new(c.burnside_sum(f, req.level, req.kind, &auts) as i64, auts.len() as i64)
        })
        .reduce(|| Ratio::from_integer(0), |x, y| x + y)
}
