use super::config::Cache;
use super::curves::{prime_divisors, CurveCountRequest, LevelKind};
use super::forms::{class_number, fundamental_part};
use crate::adlv::{
    classify_quadratic, orbital_integral_central, orbital_integral_gl2, quadratic_roots, residues, twisted_orbital_integral,
    unit_index, TorusKind, DEFAULT_MAX_DEPTH,
};
use crate::galois::FiniteGroup;
use crate::kottwitz::{check_kp1_gl, int_matrix, AmbientData};
use crate::padic::{degree_n_norm, max_precision, IsocInvariants, PadicElement, PadicMatrix, Unramified};
use crate::{Error, Result};
use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// Normalization of the Haar measures on the centralizer `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// The maximal compact subgroup of `I(Q_l)` has volume 1 at every `l`.
    Maximal,
    /// The units of the order generated by Frobenius have volume 1 (for a
    /// central class: the pro-`p` radical of `O_D^x` has volume 1).
    Order,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    Ordinary,
    Supersingular,
    Central,
}

/// One stable class `gamma_0` with characteristic polynomial
/// `x^2 - a x + d` and its factors.
#[derive(Clone, Debug, Serialize)]
pub struct RhsTerm {
    pub charpoly: [i64; 3],
    pub kind: TermKind,
    /// Newton point of the `[b]` compatible with `gamma_0`.
    pub newton: Vec<Ratio<i64>>,
    pub c1: Ratio<i64>,
    pub c2: Ratio<i64>,
    pub orbital: Ratio<i64>,
    pub twisted: Ratio<i64>,
}

impl RhsTerm {
    pub fn contribution(&self) -> Ratio<i64> {
        self.c1 * self.c2 * self.orbital * self.twisted
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RhsReport {
    pub convention: Convention,
    pub terms: Vec<RhsTerm>,
    pub total: Ratio<i64>,
}

#[derive(Clone, Copy, Debug)]
pub struct RhsOptions {
    pub convention: Convention,
    pub max_depth: u32,
    pub precision: Option<u32>,
}

impl Default for RhsOptions {
    fn default() -> Self {
        RhsOptions { convention: Convention::Maximal, max_depth: DEFAULT_MAX_DEPTH, precision: None }
    }
}

/// Elements of `B(GL_2, mu)` for `mu = (1, 0)`.
fn b_candidates() -> Vec<IsocInvariants> {
    vec![
        IsocInvariants { newton: vec![Ratio::from_integer(1), Ratio::from_integer(0)], kappa: 1 },
        IsocInvariants { newton: vec![Ratio::new(1, 2), Ratio::new(1, 2)], kappa: 1 },
    ]
}

/// Order of the Tate-Shafarevich group of the centralizer of a regular
/// elliptic `gamma_0`. The centralizer is induced from a quadratic field, so
/// it is split by `C_2`; the group vanishes as soon as some decomposition
/// group is the whole splitting group, which holds when that group is cyclic.
pub fn sha_order_quadratic_torus() -> Result<u64> {
    let g = FiniteGroup::cyclic(2);
    if g.cyclic_subgroups_up_to_conjugacy().iter().any(|h| h.len() == g.order()) {
        Ok(1)
    } else {
        Err(Error::Unsupported("non-cyclic splitting group".into()))
    }
}

/// Checks the global constants that the assembly treats as 1: the order of
/// the Kottwitz group for both behaviours of `p` in the torus, and the
/// Tate-Shafarevich group.
fn global_constants() -> Result<()> {
    for inert in [true, false] {
        let k = AmbientData::gl2_elliptic(inert)?.k_order()?;
        if k != 1 {
            return Err(Error::Unsupported(format!("Kottwitz group of order {k} for GL_2")));
        }
    }
    sha_order_quadratic_torus()?;
    Ok(())
}

fn p_ring(p: u32, m: u32, precision: Option<u32>) -> Result<Arc<Unramified>> {
    let prec = precision.unwrap_or(30).min(max_precision(p as i64));
    Unramified::new(p as i64, m as usize, prec)
}

fn pow_i64(b: i64, e: u32) -> Result<i64> {
    b.checked_pow(e).ok_or_else(|| Error::Invalid("p^m overflows".into()))
}

fn valuation(mut x: i64, l: i64) -> u32 {
    let mut v = 0;
    while x != 0 && x % l == 0 {
        x /= l;
        v += 1;
    }
    v
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn cached_class_number(cache: &Cache, d: i64) -> Result<(u64, u64)> {
    let s = cache.get_or_compute(&format!("class_number {d}"), || {
        let q = class_number(d)?;
        Ok(format!("{} {}", q.h, q.w))
    })?;
    let mut it = s.split_whitespace().map(|t| t.parse::<u64>());
    match (it.next(), it.next()) {
        (Some(Ok(h)), Some(Ok(w))) => Ok((h, w)),
        _ => Err(Error::Io(format!("corrupt cache entry for class number {d}"))),
    }
}

fn parse_ratio(s: &str) -> Option<Ratio<i64>> {
    let (n, d) = s.trim().split_once('/')?;
    Some(Ratio::new(n.parse().ok()?, d.parse().ok()?))
}

fn cached_local_orbital(cache: &Cache, a: i64, d: i64, l: i64, e: u32) -> Result<Ratio<i64>> {
    let s = cache.get_or_compute(&format!("orbital_gl2 {a} {d} {l} {e}"), || {
        let o = orbital_integral_gl2(a, d, l, e)?;
        Ok(format!("{}/{}", o.value.numer(), o.value.denom()))
    })?;
    parse_ratio(&s).ok_or_else(|| Error::Io("corrupt cache entry for an orbital integral".into()))
}

/// `x` with `x sigma(x) ... sigma^(m-1)(x) = target` for a unit `target` of `Z_p`.
fn norm_preimage(ring: &Arc<Unramified>, target: &PadicElement) -> Result<PadicElement> {
    let m = ring.n;
    let norm = |x: &PadicElement| (1..m).fold(x.clone(), |acc, i| acc.mul(&x.frobenius_pow(i as i64)));
    let t0 = target.residue();
    let x0 = residues(ring, 1)
        .into_iter()
        .map(|digits| PadicElement::from_digits(ring, 0, digits, ring.prec))
        .find(|x| !x.is_zero() && norm(x).residue() == t0)
        .ok_or_else(|| Error::Invalid("norm is not surjective on residues".into()))?;
    let c = target.div(&norm(&x0))?;
    Ok(x0.mul(&unit_root(&c, m as u64)?))
}

/// `m`-th root of a principal unit of `Z_p` by Newton's method; needs `p ∤ m`.
fn unit_root(c: &PadicElement, m: u64) -> Result<PadicElement> {
    let ring = c.ring().clone();
    if m % ring.p as u64 == 0 {
        return Err(Error::Unsupported(format!("{m}-th roots of principal units in Z_{}", ring.p)));
    }
    let one = PadicElement::one(&ring);
    let mm = PadicElement::from_int(&ring, m as i64);
    let mut t = one;
    for _ in 0..=2 * ring.prec {
        let f = t.pow(m).sub(c);
        if f.is_zero() {
            return Ok(t);
        }
        t = t.sub(&f.div(&mm.mul(&t.pow(m - 1)))?);
    }
    if t.pow(m).eq_approx(c) {
        Ok(t)
    } else {
        Err(Error::InsufficientPrecision("Newton iteration for a unit root".into()))
    }
}

/// Square root in `Q_{p^n}` (`p` odd) of an element with even valuation.
fn sqrt_unramified(x: &PadicElement) -> Result<PadicElement> {
    let ring = x.ring().clone();
    let v = x.valuation().ok_or_else(|| Error::InsufficientPrecision("square root of zero".into()))?;
    if v % 2 != 0 || ring.p == 2 {
        return Err(Error::Unsupported("square root in a ramified or dyadic extension".into()));
    }
    let u = x.shift(-v);
    let r = u.residue();
    let mut s = residues(&ring, 1)
        .into_iter()
        .map(|digits| PadicElement::from_digits(&ring, 0, digits, ring.prec))
        .find(|s| !s.is_zero() && s.mul(s).residue() == r)
        .ok_or_else(|| Error::Invalid("unit is not a square in the residue field".into()))?;
    let half = PadicElement::from_int(&ring, 2).inv()?;
    for _ in 0..=2 * ring.prec {
        s = s.add(&u.div(&s)?).mul(&half);
    }
    if !s.mul(&s).eq_approx(&u) {
        return Err(Error::InsufficientPrecision("Newton iteration for a square root".into()));
    }
    Ok(s.shift(v / 2))
}

/// An element `delta` of `GL_2(Q_{p^m})` whose degree `m` norm is
/// conjugate to the companion matrix of `x^2 - a x + d`.
pub fn norm_preimage_matrix(ring: &Arc<Unramified>, a: i64, d: i64) -> Result<PadicMatrix> {
    let m = ring.n;
    let el = |x: i64| PadicElement::from_int(ring, x);
    let gamma = PadicMatrix::from_int_rows(ring, &[vec![0, -d], vec![1, a]]);
    if m == 1 {
        return Ok(gamma);
    }
    if a * a == 4 * d {
        if m == 2 && (a / 2).abs() == ring.p {
            return Ok(PadicMatrix::from_int_rows(ring, &[vec![0, 1], vec![a / 2, 0]]));
        }
        return Err(Error::Unsupported(format!("central class {} over an extension of degree {m}", a / 2)));
    }
    let kind = classify_quadratic(&el(-a), &el(d))?.ok_or_else(|| Error::NonElliptic)?;
    match kind {
        TorusKind::Split => {
            let (r0, r1) = quadratic_roots(&el(-a), &el(d)).ok_or_else(|| Error::InsufficientPrecision("roots".into()))?;
            let (pi, pi2) = if r0.valuation() == Some(0) { (r0, r1) } else { (r1, r0) };
            if pi.valuation() != Some(0) {
                return Err(Error::Unsupported("split class without a unit eigenvalue".into()));
            }
            let x = norm_preimage(ring, &pi)?;
            let one = el(1);
            let pmat = PadicMatrix::from_entries(2, 2, vec![pi2, pi, one.neg(), one.neg()]);
            let diag = PadicMatrix::diag(ring, &[x.clone(), x.inv()?.shift(1)]);
            Ok(pmat.mul(&diag).mul(&pmat.inverse()?))
        }
        TorusKind::Unramified if m == 2 => {
            // Q_{p^2}[gamma] splits as Q_{p^2} x Q_{p^2} via the roots
            // (tau, tau'); delta = (tau, 1) there has norm (tau, tau').
            let s = sqrt_unramified(&el(a * a - 4 * d))?;
            let half = el(2).inv()?;
            let tau = el(a).add(&s).mul(&half);
            let tau2 = el(a).sub(&s).mul(&half);
            let c1 = tau.sub(&el(1)).div(&s)?;
            let c0 = el(1).sub(&c1.mul(&tau2));
            Ok(PadicMatrix::scalar(ring, 2, &c0).add(&gamma.scale(&c1)))
        }
        k => Err(Error::Unsupported(format!("{k:?} class over an extension of degree {m}"))),
    }
}

fn check_norm(delta: &PadicMatrix, a: i64, d: i64) -> Result<()> {
    let ring = delta.ring().clone();
    let cert = degree_n_norm(delta, ring.n)?;
    let want = [PadicElement::from_int(&ring, -a), PadicElement::from_int(&ring, d)];
    if cert.charpoly[1].eq_approx(&want[0]) && cert.charpoly[2].eq_approx(&want[1]) {
        Ok(())
    } else {
        Err(Error::InsufficientPrecision("norm of delta does not match gamma_0".into()))
    }
}

struct Context<'a> {
    req: CurveCountRequest,
    q: i64,
    opts: RhsOptions,
    cache: &'a Cache,
}

impl Context<'_> {
    fn level_exponent(&self, l: i64) -> u32 {
        valuation(self.req.level as i64, l)
    }

    fn twisted(&self, a: i64, d: i64) -> Result<Ratio<i64>> {
        let ring = p_ring(self.req.p, self.req.m, self.opts.precision)?;
        let delta = norm_preimage_matrix(&ring, a, d)?;
        check_norm(&delta, a, d)?;
        Ok(twisted_orbital_integral(&delta, &[1, 0], self.opts.max_depth)?.value)
    }

    fn regular_term(&self, a: i64, d: i64, newton: Vec<Ratio<i64>>) -> Result<RhsTerm> {
        let p = self.req.p as i64;
        let disc = a * a - 4 * d;
        let (dk, f) = fundamental_part(disc)?;
        let (h, w) = cached_class_number(self.cache, dk)?;
        let mut c1 = Ratio::new(h as i64, w as i64);
        let mut primes = prime_divisors(self.req.level);
        primes.extend(prime_divisors(f as u32));
        primes.sort_unstable();
        primes.dedup();
        let mut orbital = Ratio::from_integer(1);
        for &l in &primes {
            let l = l as i64;
            if l == p {
                continue;
            }
            orbital *= cached_local_orbital(self.cache, a, d, l, self.level_exponent(l))?;
        }
        let mut twisted = self.twisted(a, d)?;
        if self.opts.convention == Convention::Order {
            let (t, n) = (dk, (dk * dk - dk) / 4);
            let (order_h, order_w) = cached_class_number(self.cache, disc)?;
            c1 = Ratio::new(order_h as i64, order_w as i64);
            for &l in &primes {
                let u = unit_index(l as i64, valuation(f, l as i64), t, n);
                if l as i64 == p {
                    twisted /= u;
                } else {
                    orbital /= u;
                }
            }
        }
        let kind = if a % p == 0 { TermKind::Supersingular } else { TermKind::Ordinary };
        let c2 = Ratio::from_integer(sha_order_quadratic_torus()? as i64);
        Ok(RhsTerm { charpoly: [1, -a, d], kind, newton, c1, c2, orbital, twisted })
    }

    fn central_term(&self, z: i64, newton: Vec<Ratio<i64>>) -> Result<RhsTerm> {
        let p = self.req.p as i64;
        // Mass of the maximal order of the quaternion algebra ramified at p and infinity.
        let mut c1 = Ratio::new(p - 1, 24);
        let mut orbital = Ratio::from_integer(1);
        for l in prime_divisors(self.req.level) {
            orbital *= orbital_integral_central(z, l as i64, self.level_exponent(l as i64));
        }
        let mut twisted = self.twisted(2 * z, z * z)?;
        if self.opts.convention == Convention::Order {
            c1 *= p * p - 1;
            twisted /= p * p - 1;
        }
        // The centralizer is the unit group of a quaternion algebra, whose
        // Tate-Shafarevich group vanishes by Hilbert 90 for the reduced norm.
        let c2 = Ratio::from_integer(1);
        Ok(RhsTerm { charpoly: [1, -2 * z, z * z], kind: TermKind::Central, newton, c1, c2, orbital, twisted })
    }
}

/// Candidate classes `(a, d)`: elliptic at infinity, `d = ±q`, and compatible
/// with some `[b]` in `B(GL_2, mu)`.
fn candidates(p: u32, m: u32, q: i64) -> Vec<(i64, i64, Vec<Ratio<i64>>)> {
    let bound = isqrt(4 * q);
    let mut out = Vec::new();
    for d in [q, -q] {
        for a in -bound..=bound {
            if a * a > 4 * d {
                continue;
            }
            let gamma0 = if a * a == 4 * d {
                int_matrix(&[vec![a / 2, 0], vec![0, a / 2]])
            } else {
                int_matrix(&[vec![0, -d], vec![1, a]])
            };
            if let Some(b) = b_candidates().into_iter().find(|b| check_kp1_gl(&gamma0, b, m as u64, p as u64)) {
                out.push((a, d, b.newton));
            }
        }
    }
    out
}

/// Geometric side for `Y(N)` over `F_{p^m}`.
pub fn rhs_assemble(req: &CurveCountRequest, opts: &RhsOptions, cache: &Cache) -> Result<RhsReport> {
    req.validate()?;
    if req.kind != LevelKind::Full {
        return Err(Error::Unsupported("the geometric side is assembled for Y(N) only".into()));
    }
    global_constants()?;
    let q = pow_i64(req.p as i64, req.m)?;
    let ctx = Context { req: *req, q, opts: *opts, cache };
    let mut terms = candidates(req.p, req.m, ctx.q)
        .into_par_iter()
        .map(|(a, d, newton)| if a * a == 4 * d { ctx.central_term(a / 2, newton) } else { ctx.regular_term(a, d, newton) })
        .collect::<Result<Vec<_>>>()?;
    terms.sort_by_key(|t| (t.charpoly[2], t.charpoly[1]));
    let total = terms.iter().fold(Ratio::zero(), |acc, t| acc + t.contribution());
    Ok(RhsReport { convention: opts.convention, terms, total })
}
