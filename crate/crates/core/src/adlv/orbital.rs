use super::enumerate::{depth, tree_neighbours};
use super::hnf::{relative_position, LatticeHnf};
use crate::padic::{degree_n_norm, max_precision, newton_point, PadicElement, PadicMatrix, Unramified};
use crate::{Error, Result};
use num_rational::Ratio;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

/// Shape of the centralizer of a semisimple element of `GL_2(Q_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusKind {
    Central,
    Split,
    Unramified,
    Ramified,
}

impl TorusKind {
    /// Volume of `T(Q_p) / p^Z` when the maximal compact subgroup has volume 1.
    pub fn volume_mod_center(self) -> i64 {
        match self {
            TorusKind::Ramified => 2,
            _ => 1,
        }
    }
}

/// Square root in `Q_p` of an element of `Q_p`, if one exists.
pub fn sqrt_qp(x: &PadicElement) -> Option<PadicElement> {
    let ring = x.ring().clone();
    let (v, u, rel) = x.qp_parts()?;
    if v % 2 != 0 {
        return None;
    }
    let p = ring.p;
    let unit = PadicElement::from_int(&ring, u).truncate(rel);
    let mut s = if p == 2 {
        if rel < 3 || u.rem_euclid(8) != 1 {
            return None;
        }
        PadicElement::one(&ring)
    } else {
        let r = u.rem_euclid(p);
        let s0 = (0..p).find(|&s| (s * s - r).rem_euclid(p) == 0)?;
        PadicElement::from_int(&ring, s0)
    };
    let half = PadicElement::from_int(&ring, 2).inv().ok()?;
    for _ in 0..2 * ring.prec.max(4) {
        let next = s.add(&unit.div(&s).ok()?).mul(&half);
        if next.eq_approx(&s) && s.mul(&s).eq_approx(&unit) {
            break;
        }
        s = next;
    }
    if !s.mul(&s).eq_approx(&unit) {
        return None;
    }
    Some(s.shift(v / 2))
}

/// Classifies `x^2 + c1 x + c0` over `Q_p`; `None` when the discriminant
/// vanishes.
pub fn classify_quadratic(c1: &PadicElement, c0: &PadicElement) -> Result<Option<TorusKind>> {
    let ring = c1.ring().clone();
    let disc = c1.mul(c1).sub(&c0.mul(&PadicElement::from_int(&ring, 4)));
    if disc.is_zero() {
        return Ok(None);
    }
    let (v, u, rel) = disc
        .qp_parts()
        .ok_or_else(|| Error::InsufficientPrecision("discriminant not in Q_p".into()))?;
    if v % 2 != 0 {
        return Ok(Some(TorusKind::Ramified));
    }
    if sqrt_qp(&disc).is_some() {
        return Ok(Some(TorusKind::Split));
    }
    if ring.p == 2 {
        if rel < 3 {
            return Err(Error::InsufficientPrecision("discriminant unit known modulo less than 8".into()));
        }
        return Ok(Some(if u.rem_euclid(8) == 5 { TorusKind::Unramified } else { TorusKind::Ramified }));
    }
    Ok(Some(TorusKind::Unramified))
}

/// Roots of `x^2 + c1 x + c0` in `Q_p` when it splits.
pub fn quadratic_roots(c1: &PadicElement, c0: &PadicElement) -> Option<(PadicElement, PadicElement)> {
    let ring = c1.ring().clone();
    let disc = c1.mul(c1).sub(&c0.mul(&PadicElement::from_int(&ring, 4)));
    let s = sqrt_qp(&disc)?;
    let half = PadicElement::from_int(&ring, 2).inv().ok()?;
    let a = s.sub(c1).mul(&half);
    let b = s.neg().sub(c1).mul(&half);
    Some((a, b))
}

/// Vertices of a level set of the displacement of a tree isometry.
#[derive(Clone, Debug)]
pub struct LevelSet {
    pub points: Vec<LatticeHnf>,
    /// Number of points at distance at most `k` from the standard vertex.
    pub counts_by_depth: Vec<usize>,
    /// Whether every branch was closed before the depth limit.
    pub complete: bool,
    pub visited: usize,
}

/// Vertices `v` with `inv(v, f(v)) = target` for an isometry `f` of the tree,
/// given by `rel(B) = inv(L_B, f(L_B))`.
///
/// The displacement `d(v, f v)` is convex along geodesics, so once it
/// increases past the target along a ray from the standard vertex, that
/// branch holds no further points.
pub fn displacement_level_set(
    ring: &Arc<Unramified>,
    rel: &dyn Fn(&PadicMatrix) -> Result<Vec<i64>>,
    target: &[i64],
    max_depth: u32,
) -> Result<LevelSet> {
    let goal = target[0] - target[1];
    let root = LatticeHnf::standard(2, ring.n);
    let mut points = Vec::new();
    let mut complete = true;
    let mut visited = 0;
    let inv_root = rel(&root.basis(ring))?;
    if inv_root == target {
        points.push(root.clone());
    }
    let mut stack = vec![(root, inv_root[0] - inv_root[1])];
    while let Some((v, disp)) = stack.pop() {
        visited += 1;
        let dv = depth(&v);
        if dv >= max_depth {
            complete = false;
            continue;
        }
        for w in tree_neighbours(&v, ring)? {
            if depth(&w) != dv + 1 {
                continue;
            }
            let inv = rel(&w.basis(ring))?;
            let dw = inv[0] - inv[1];
            if inv == target {
                points.push(w.clone());
            }
            if dw > disp && dw > goal {
                continue;
            }
            stack.push((w, dw));
        }
    }
    let top = points.iter().map(depth).max().unwrap_or(0).max(max_depth) as usize;
    let counts_by_depth = (0..=top).map(|k| points.iter().filter(|v| depth(v) as usize <= k).count()).collect();
    Ok(LevelSet { points, counts_by_depth, complete, visited })
}

/// Result of a twisted orbital integral of the unit double coset of `mu`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TwistedOrbital {
    pub value: Ratio<i64>,
    /// Points of `X_mu(delta)` modulo `p^Z` (a fundamental domain when split).
    pub count: usize,
    pub volume: i64,
    pub kind: TorusKind,
}

pub const DEFAULT_MAX_DEPTH: u32 = 12;

/// `TO_delta` of the characteristic function of `GL_2(O) p^mu GL_2(O)` for
/// `delta` in `GL_2(Q_{p^n})`: the number of lattices `L` with
/// `inv(L, delta sigma L) = mu`, modulo the twisted centralizer `J`, where
/// `J` has maximal compact subgroup of volume 1.
pub fn twisted_orbital_integral(delta: &PadicMatrix, mu: &[i64], max_depth: u32) -> Result<TwistedOrbital> {
    let ring = delta.ring().clone();
    if delta.rows() != 2 || mu.len() != 2 {
        return Err(Error::Unsupported("twisted orbital integrals are implemented for GL_2".into()));
    }
    let mut mu = mu.to_vec();
    mu.sort_unstable_by(|a, b| b.cmp(a));
    let cert = degree_n_norm(delta, ring.n)?;
    let norm = &cert.norm;
    let (c1, c0) = (&cert.charpoly[1], &cert.charpoly[2]);
    let kappa = delta.det()?.valuation().ok_or_else(|| Error::InsufficientPrecision("det(delta)".into()))?;
    let half = PadicElement::from_int(&ring, 2).inv()?;
    let centre = PadicMatrix::scalar(&ring, 2, &c1.neg().mul(&half));
    let kind = if norm.sub(&centre).is_zero() {
        TorusKind::Central
    } else {
        classify_quadratic(c1, c0)?.ok_or_else(|| Error::Unsupported("norm is not semisimple".into()))?
    };
    if kind == TorusKind::Split {
        return eigenline(delta, norm, c1, c0, &mu);
    }
    let volume = match kind {
        TorusKind::Central => {
            let nu = newton_point(delta)?;
            if !nu[0].is_integer() {
                2
            } else {
                // J is GL_2(Q_p): X is either empty or infinite.
                if kappa != mu[0] + mu[1] {
                    return Ok(TwistedOrbital { value: Ratio::from_integer(0), count: 0, volume: 1, kind });
                }
                return Err(Error::InfiniteOrbit);
            }
        }
        k => k.volume_mod_center(),
    };
    if kappa != mu[0] + mu[1] {
        return Ok(TwistedOrbital { value: Ratio::from_integer(0), count: 0, volume, kind });
    }
    let d2 = delta.clone();
    let rel = move |b: &PadicMatrix| relative_position(b, &d2.mul(&b.sigma()));
    let set = displacement_level_set(&ring, &rel, &mu, max_depth)?;
    if !set.complete {
        return Err(Error::InfiniteOrbit);
    }
    let count = set.points.len();
    Ok(TwistedOrbital { value: Ratio::new(count as i64, volume), count, volume, kind })
}

/// Split norm: the slope decomposition along the eigenlines of the norm
/// forces `X = {p^i O e_0 + p^j O e_1}`, a single orbit of `J = T(Q_p)`
/// with stabilizer `T(Z_p)`, provided `O e_0 + O e_1` itself lies in `X`.
fn eigenline(delta: &PadicMatrix, norm: &PadicMatrix, c1: &PadicElement, c0: &PadicElement, mu: &[i64]) -> Result<TwistedOrbital> {
    let (l0, l1) = quadratic_roots(c1, c0).ok_or_else(|| Error::InsufficientPrecision("eigenvalues of the norm".into()))?;
    let mut cols = Vec::new();
    for lam in [&l0, &l1] {
        let a = norm.get(0, 0).sub(lam);
        let d = norm.get(1, 1).sub(lam);
        let v1 = vec![norm.get(0, 1).clone(), a.neg()];
        let v2 = vec![d.neg(), norm.get(1, 0).clone()];
        let score = |v: &[PadicElement]| v.iter().filter(|x| !x.is_zero()).map(|x| x.val_lower()).min();
        let v = match (score(&v1), score(&v2)) {
            (Some(s1), Some(s2)) if s2 < s1 => v2,
            (Some(_), _) => v1,
            (None, Some(_)) => v2,
            (None, None) => return Err(Error::InsufficientPrecision("eigenvector of the norm".into())),
        };
        let s = score(&v).unwrap();
        cols.push(v.iter().map(|x| x.shift(-s)).collect::<Vec<_>>());
    }
    let e = PadicMatrix::from_columns(&cols);
    let inv = relative_position(&e, &delta.mul(&e.sigma()))?;
    let hit = inv == mu;
    Ok(TwistedOrbital { value: Ratio::from_integer(hit as i64), count: hit as usize, volume: 1, kind: TorusKind::Split })
}

/// Local orbital integral at a prime `l` for `GL_2`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LocalOrbital {
    pub value: Ratio<i64>,
    pub count: usize,
    pub volume: i64,
    pub kind: TorusKind,
}

/// `|GL_2(Z / l^e)|`.
pub fn gl2_order(l: i64, e: u32) -> i64 {
    if e == 0 {
        return 1;
    }
    let base = (l * l - 1) * (l * l - l);
    base * l.pow(4 * (e - 1))
}

fn ell_ring(l: i64) -> Result<Arc<Unramified>> {
    Unramified::new(l, 1, max_precision(l).min(40))
}

/// Orbital integral of the characteristic function of the principal
/// congruence subgroup `K(l^e)` (volume 1) at the regular semisimple class
/// with characteristic polynomial `x^2 - a x + d`, with the centralizer's
/// maximal compact subgroup given volume 1.
pub fn orbital_integral_gl2(a: i64, d: i64, l: i64, e: u32) -> Result<LocalOrbital> {
    let ring = ell_ring(l)?;
    let el = |x: i64| PadicElement::from_int(&ring, x);
    let kind = classify_quadratic(&el(-a), &el(d))?.ok_or_else(|| Error::Unsupported("central or non-semisimple class".into()))?;
    let zero = |kind| Ok(LocalOrbital { value: Ratio::from_integer(0), count: 0, volume: 1, kind });
    if d % l == 0 {
        return zero(kind);
    }
    let gamma = PadicMatrix::from_int_rows(&ring, &[vec![0, -d], vec![1, a]]);
    let factor = gl2_order(l, e);
    match kind {
        TorusKind::Split => {
            let (al, be) = quadratic_roots(&el(-a), &el(d)).unwrap();
            let one = PadicElement::one(&ring);
            let (x, y) = (al.sub(&one), be.sub(&one));
            if x.val_lower() < e as i64 || y.val_lower() < e as i64 {
                return zero(kind);
            }
            let beta = PadicMatrix::diag(&ring, &[x, y]);
            let count = split_fundamental_domain(&ring, &beta, e)?;
            Ok(LocalOrbital { value: Ratio::from_integer(factor * count as i64), count, volume: 1, kind })
        }
        _ => {
            let fixed = fixed_subtree(&ring, &gamma)?;
            let beta = gamma.sub(&PadicMatrix::identity(&ring, 2));
            let mut count = 0;
            for v in &fixed {
                if level_condition(&ring, v, &beta, e)? {
                    count += 1;
                }
            }
            let volume = kind.volume_mod_center();
            Ok(LocalOrbital { value: Ratio::new(factor * count as i64, volume), count, volume, kind })
        }
    }
}

/// Whether `beta L ⊆ l^e L`.
fn level_condition(ring: &Arc<Unramified>, v: &LatticeHnf, beta: &PadicMatrix, e: u32) -> Result<bool> {
    let b = v.basis(ring);
    let m = b.inverse()?.mul(&beta.mul(&b));
    Ok(m.entries().iter().all(|x| x.is_exact_zero() || x.val_lower() >= e as i64))
}

fn displacement(ring: &Arc<Unramified>, g: &PadicMatrix, v: &LatticeHnf) -> Result<i64> {
    let b = v.basis(ring);
    let e = relative_position(&b, &g.mul(&b))?;
    Ok(e[0] - e[1])
}

/// Fixed vertices of an elliptic element with unit determinant.
pub fn fixed_subtree(ring: &Arc<Unramified>, g: &PadicMatrix) -> Result<Vec<LatticeHnf>> {
    let mut v = LatticeHnf::standard(2, ring.n);
    let mut disp = displacement(ring, g, &v)?;
    let mut steps = 0;
    while disp > 0 {
        let mut next = None;
        for w in tree_neighbours(&v, ring)? {
            let dw = displacement(ring, g, &w)?;
            if dw < disp {
                next = Some((w, dw));
                break;
            }
        }
        let (w, dw) = next.ok_or(Error::NonElliptic)?;
        v = w;
        disp = dw;
        steps += 1;
        if steps > 4 * ring.prec {
            return Err(Error::InfiniteOrbit);
        }
    }
    let mut seen: HashSet<LatticeHnf> = HashSet::from([v.clone()]);
    let mut queue = VecDeque::from([v]);
    let mut out = Vec::new();
    while let Some(v) = queue.pop_front() {
        if depth(&v) > 2 * ring.prec / 3 {
            return Err(Error::InfiniteOrbit);
        }
        for w in tree_neighbours(&v, ring)? {
            if !seen.contains(&w) && displacement(ring, g, &w)? == 0 {
                seen.insert(w.clone());
                queue.push_back(w);
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Vertices `L` with `beta L ⊆ l^e L` whose projection to the diagonal
/// apartment is the standard vertex, for diagonal integral `beta`.
fn split_fundamental_domain(ring: &Arc<Unramified>, beta: &PadicMatrix, e: u32) -> Result<usize> {
    let root = LatticeHnf::standard(2, ring.n);
    let apartment = [
        LatticeHnf { scale: 0, exps: vec![1, 0], off: vec![vec![0; ring.n]] },
        LatticeHnf { scale: 0, exps: vec![0, 1], off: vec![vec![0; ring.n]] },
    ];
    let mut count = 1;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let dv = depth(&v);
        if dv > 2 * ring.prec / 3 {
            return Err(Error::InfiniteOrbit);
        }
        for w in tree_neighbours(&v, ring)? {
            if depth(&w) != dv + 1 || (dv == 0 && apartment.contains(&w)) {
                continue;
            }
            if level_condition(ring, &w, beta, e)? {
                count += 1;
                stack.push(w);
            }
        }
    }
    Ok(count)
}

/// Orbital integral at a central element `z`: `|GL_2(Z/l^e)|` if `z` lies in
/// `K(l^e)`, else 0 (the centralizer measure is transported from `GL_2(Z_l)`).
pub fn orbital_integral_central(z: i64, l: i64, e: u32) -> i64 {
    if z % l == 0 {
        return 0;
    }
    let m = l.pow(e);
    if e > 0 && (z - 1).rem_euclid(m) != 0 {
        return 0;
    }
    gl2_order(l, e)
}

/// `[O_{E,l}^x : (Z_l + l^c O_{E,l})^x]` where `O_E = Z[w]`, `w^2 = t w - n`,
/// counted on residues modulo `l^c`.
pub fn unit_index(l: i64, c: u32, t: i64, n: i64) -> i64 {
    if c == 0 {
        return 1;
    }
    let m = l.pow(c);
    let mut units = 0i64;
    for x in 0..m {
        for y in 0..m {
            // N(x + y w) = x^2 + t x y + n y^2
            let norm = (x * x + t * x * y % m + n.rem_euclid(m) * y % m * y) % m;
            if norm % l != 0 {
                units += 1;
            }
        }
    }
    let small = (0..m).filter(|x| x % l != 0).count() as i64;
    units / small
}

/// Memo for repeated local orbital integrals.
#[derive(Default)]
pub struct OrbitalCache {
    map: HashMap<(i64, i64, i64, u32), LocalOrbital>,
}

impl OrbitalCache {
    pub fn get(&mut self, a: i64, d: i64, l: i64, e: u32) -> Result<LocalOrbital> {
        if let Some(v) = self.map.get(&(a, d, l, e)) {
            return Ok(v.clone());
        }
        let v = orbital_integral_gl2(a, d, l, e)?;
        self.map.insert((a, d, l, e), v.clone());
        Ok(v)
    }
}
