use super::ambient::AmbientData;
use crate::abelian::{integer_nullspace, root_of_unity_sum, solve_integer, IntMatrix};
use crate::galois::PlaceKind;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

/// A Kottwitz parameter recorded through its beta-data.
///
/// All vectors live in the lattice `pi_1(I_0)`; each stands for its class in
/// the relevant coinvariants.
#[derive(Clone, Debug)]
pub struct KottwitzParameter {
    pub id: String,
    /// Free-form descriptor of `gamma_0`.
    pub gamma0: String,
    /// `(place index, beta_v)` for finite places away from `p`.
    pub beta_finite: Vec<(usize, Vec<BigInt>)>,
    /// Representative of `kappa_{I_0}([b])`.
    pub beta_p: Vec<BigInt>,
    /// The coweight `mu_h`.
    pub beta_inf: Vec<BigInt>,
    /// Overrides the ambient Hodge lift.
    pub mu_lift: Option<Vec<BigInt>>,
    /// Kottwitz sign `e(c)`; `None` means `+1`.
    pub sign: Option<i8>,
}

impl KottwitzParameter {
    pub fn zero(amb: &AmbientData, id: &str) -> Self {
        let r = amb.pi.i.rank();
        KottwitzParameter {
            id: id.to_string(),
            gamma0: String::new(),
            beta_finite: Vec::new(),
            beta_p: vec![BigInt::zero(); r],
            beta_inf: vec![BigInt::zero(); r],
            mu_lift: None,
            sign: None,
        }
    }

    fn mu_class(&self, amb: &AmbientData) -> Vec<BigInt> {
        match &self.mu_lift {
            Some(m) => amb.pi.i_to_g.mul_vec(m),
            None => amb.mu_class(),
        }
    }

    /// Componentwise sum (same `gamma_0` frame).
    pub fn add(&self, o: &KottwitzParameter) -> KottwitzParameter {
        let addv = |a: &[BigInt], b: &[BigInt]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        let mut beta_finite = self.beta_finite.clone();
        beta_finite.extend(o.beta_finite.iter().cloned());
        let mu_lift = match (&self.mu_lift, &o.mu_lift) {
            (Some(a), Some(b)) => Some(addv(a, b)),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        KottwitzParameter {
            id: format!("{}+{}", self.id, o.id),
            gamma0: self.gamma0.clone(),
            beta_finite,
            beta_p: addv(&self.beta_p, &o.beta_p),
            beta_inf: addv(&self.beta_inf, &o.beta_inf),
            mu_lift,
            sign: None,
        }
    }
}

/// Columns `(1 - h) e_i` spanning the augmentation submodule for the subgroup.
fn augmentation(amb: &AmbientData, place: usize) -> IntMatrix {
    let lat = &amb.pi.i;
    let id = IntMatrix::identity(lat.rank());
    let mut cols = IntMatrix::zeros(lat.rank(), 0);
    for &h in &amb.places.places[place].subgroup {
        if h != 0 {
            cols = cols.hcat(&id.sub(lat.action(h)));
        }
    }
    cols
}

/// Whether `x` lies in the integer column span.
fn in_span(cols: &IntMatrix, x: &[BigInt]) -> bool {
    if cols.cols() == 0 {
        return x.iter().all(|c| c.is_zero());
    }
    solve_integer(cols, x).is_some()
}

/// KP0: the image of `beta_p` in `pi_1(G)_{Gamma_p}` equals that of `-[mu]_X`.
pub fn check_kp0(amb: &AmbientData, c: &KottwitzParameter) -> bool {
    let mut img = amb.pi.i_to_g.mul_vec(&c.beta_p);
    for (a, m) in img.iter_mut().zip(c.mu_class(amb)) {
        *a += m;
    }
    let g_aug = g_augmentation(amb, amb.p_place);
    in_span(&g_aug, &img)
}

fn g_augmentation(amb: &AmbientData, place: usize) -> IntMatrix {
    let lat = &amb.pi.g;
    let id = IntMatrix::identity(lat.rank());
    let mut cols = IntMatrix::zeros(lat.rank(), 0);
    for &h in &amb.places.places[place].subgroup {
        if h != 0 {
            cols = cols.hcat(&id.sub(lat.action(h)));
        }
    }
    cols
}

/// Checks the local conditions on the beta-data other than KP0.
pub fn validate(amb: &AmbientData, c: &KottwitzParameter) -> Result<()> {
    let r = amb.pi.i.rank();
    if c.beta_p.len() != r || c.beta_inf.len() != r {
        return Err(Error::Invalid(format!("parameter {}: beta vectors must have rank {r}", c.id)));
    }
    for (v, x) in &c.beta_finite {
        let place = amb
            .places
            .places
            .get(*v)
            .filter(|pl| pl.kind == PlaceKind::Finite)
            .ok_or_else(|| Error::Invalid(format!("parameter {}: place {v} is not finite", c.id)))?;
        if x.len() != r {
            return Err(Error::Invalid(format!("parameter {}: beta at {} has wrong rank", c.id, place.label)));
        }
        let coinv = amb.pi.i.coinvariants(&place.subgroup);
        if coinv.element_order(x).is_none() {
            return Err(Error::Invalid(format!("parameter {}: beta at {} is not torsion", c.id, place.label)));
        }
        if !in_span(&g_augmentation(amb, *v), &amb.pi.i_to_g.mul_vec(x)) {
            return Err(Error::Invalid(format!("parameter {}: beta at {} is nonzero in pi_1(G)", c.id, place.label)));
        }
    }
    let inf = amb.places.index_of("inf").expect("archimedean place");
    let mut d = amb.pi.i_to_g.mul_vec(&c.beta_inf);
    for (a, m) in d.iter_mut().zip(c.mu_class(amb)) {
        *a -= m;
    }
    if !in_span(&g_augmentation(amb, inf), &d) {
        return Err(Error::Invalid(format!("parameter {}: mu_h does not lie over [mu]_X", c.id)));
    }
    Ok(())
}

/// A lift `x + (1 - h) z` of the class of `x` mapping to `target` in `pi_1(G)`,
/// optionally perturbed by a random element of the lift ambiguity.
fn lift<R: Rng + ?Sized>(amb: &AmbientData, place: usize, x: &[BigInt], target: &[BigInt], rng: Option<&mut R>) -> Result<Vec<BigInt>> {
    let aug = augmentation(amb, place);
    let mut rhs = target.to_vec();
    for (a, b) in rhs.iter_mut().zip(amb.pi.i_to_g.mul_vec(x)) {
        *a -= b;
    }
    let mut out = x.to_vec();
    if aug.cols() == 0 {
        if rhs.iter().any(|c| !c.is_zero()) {
            return Err(Error::Invalid("no lift with the prescribed image".into()));
        }
        return Ok(out);
    }
    let sys = amb.pi.i_to_g.mul(&aug);
    let mut z = if sys.rows() == 0 {
        vec![BigInt::zero(); aug.cols()]
    } else {
        solve_integer(&sys, &rhs).ok_or_else(|| Error::Invalid("no lift with the prescribed image".into()))?
    };
    if let Some(rng) = rng {
        let null = if sys.rows() == 0 { IntMatrix::identity(aug.cols()) } else { integer_nullspace(&sys) };
        for j in 0..null.cols() {
            let t = BigInt::from(rng.gen_range(-5i64..=5));
            for (zi, ni) in z.iter_mut().zip(null.column(j)) {
                *zi += &t * ni;
            }
        }
    }
    for (o, a) in out.iter_mut().zip(aug.mul_vec(&z)) {
        *o += a;
    }
    Ok(out)
}

/// The Kottwitz invariant as canonical coordinates in `E(I_0, G; A/Q)`.
pub fn kottwitz_invariant(amb: &AmbientData, c: &KottwitzParameter) -> Result<Vec<BigInt>> {
    kottwitz_invariant_with::<rand::rngs::StdRng>(amb, c, None)
}

/// As [`kottwitz_invariant`], with randomly perturbed lifts when `rng` is given.
pub fn kottwitz_invariant_with<R: Rng + ?Sized>(amb: &AmbientData, c: &KottwitzParameter, mut rng: Option<&mut R>) -> Result<Vec<BigInt>> {
    validate(amb, c)?;
    if !check_kp0(amb, c) {
        return Err(Error::Kp0Violated);
    }
    let grank = amb.pi.g.rank();
    let zero = vec![BigInt::zero(); grank];
    let mu = c.mu_class(amb);
    let neg_mu: Vec<BigInt> = mu.iter().map(|m| -m).collect();
    let inf = amb.places.index_of("inf").expect("archimedean place");
    let mut total = vec![BigInt::zero(); amb.pi.i.rank()];
    let mut acc = |v: Vec<BigInt>| {
        for (t, x) in total.iter_mut().zip(v) {
            *t += x;
        }
    };
    for (v, x) in &c.beta_finite {
        acc(lift(amb, *v, x, &zero, rng.as_deref_mut())?);
    }
    acc(lift(amb, amb.p_place, &c.beta_p, &neg_mu, rng.as_deref_mut())?);
    acc(lift(amb, inf, &c.beta_inf, &mu, rng.as_deref_mut())?);
    let w = solve_integer(&amb.pi.k_to_i, &total).ok_or_else(|| Error::Invalid("lifted sum is not in K".into()))?;
    amb.kgroup.e.class_of(&w)
}

/// `sign * sum_{kappa in K} <alpha, kappa>`, summed exactly.
pub fn fourier_sum(amb: &AmbientData, alpha: &[BigInt], sign: i8) -> Result<BigInt> {
    let dual = &amb.kgroup.dual;
    let x = amb.kgroup.e.group.from_canonical(alpha);
    let angles: Vec<_> = dual.characters()?.iter().map(|chi| dual.pair(&x, chi)).collect();
    let s = root_of_unity_sum(&angles);
    let v = s.as_integer().ok_or_else(|| Error::Invalid("character sum is not rational".into()))?;
    Ok(v * BigInt::from(sign))
}

/// Fourier sum of a parameter with its own sign (default `+1`).
pub fn parameter_fourier_sum(amb: &AmbientData, c: &KottwitzParameter) -> Result<BigInt> {
    let alpha = kottwitz_invariant(amb, c)?;
    fourier_sum(amb, &alpha, c.sign.unwrap_or(1))
}

/// Class of `mu_h` in `pi_1(I_0)_{Gamma_inf}`, canonical coordinates.
pub fn beta_infinity_from_mu(amb: &AmbientData, mu_h: &[BigInt]) -> Vec<BigInt> {
    let inf = amb.places.archimedean();
    amb.pi.i.coinvariants(&inf.subgroup).canonical(mu_h)
}

/// A random parameter satisfying KP0 and the local conditions, by rejection.
pub fn random_parameter<R: Rng + ?Sized>(amb: &AmbientData, id: &str, rng: &mut R) -> KottwitzParameter {
    let r = amb.pi.i.rank();
    let vec = |rng: &mut R| (0..r).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect::<Vec<_>>();
    loop {
        let mut c = KottwitzParameter::zero(amb, id);
        c.beta_p = vec(rng);
        c.beta_inf = vec(rng);
        let finite: Vec<usize> = amb.places.finite().map(|(i, _)| i).collect();
        for _ in 0..rng.gen_range(0..=2) {
            let v = finite[rng.gen_range(0..finite.len())];
            c.beta_finite.push((v, vec(rng)));
        }
        if validate(amb, &c).is_ok() && check_kp0(amb, &c) {
            return c;
        }
    }
}
