use kottwitz_core::abelian::{smith_normal_form, IntMatrix};
use kottwitz_core::kottwitz::AmbientData;
use kottwitz_core::modular::{class_number, compare, count_points_with, Cache, CountStrategy, CurveCountRequest, LevelKind, RhsOptions};
use kottwitz_core::rootdata::{enumerate_elliptic_endoscopy, sl};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = (String, bool, String);

fn check(name: &str, f: impl FnOnce() -> Result<(bool, String), kottwitz_core::Error>) -> Check {
    match f() {
        Ok((pass, detail)) => (name.to_string(), pass, detail),
        Err(e) => (name.to_string(), false, e.to_string()),
    }
}

fn snf_round(rng: &mut ChaCha8Rng) -> bool {
    let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let entries: Vec<i64> = (0..r * c).map(|_| rng.gen_range(-20..=20)).collect();
    let m = IntMatrix::from_i64(r, c, &entries);
    let s = smith_normal_form(&m);
    let diag = s.diagonal();
    let divides = diag.windows(2).all(|w| w[0] == BigInt::from(0) && w[1] == BigInt::from(0) || (w[1].clone() % &w[0]) == BigInt::from(0));
    s.u.mul(&m).mul(&s.v) == s.d && s.u.is_unimodular() && s.v.is_unimodular() && divides
}

pub fn run(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = |p, m, level| CurveCountRequest { p, m, level, kind: LevelKind::Full };
    vec![
        check("smith normal form", || {
            let ok = (0..50).all(|_| snf_round(&mut rng));
            Ok((ok, "50 random matrices".into()))
        }),
        check("Kottwitz groups", || {
            let gl2 = AmbientData::preset("gl2")?.k_order()?;
            let sl2 = AmbientData::preset("sl2")?.k_order()?;
            Ok((gl2 == 1 && sl2 == 2, format!("|K(GL_2)| = {gl2}, |K(SL_2)| = {sl2}")))
        }),
        check("endoscopy of SL_2", || {
            let n = enumerate_elliptic_endoscopy(&sl(2), 4)?.len();
            Ok((n == 2, format!("{n} elliptic classes")))
        }),
        check("class numbers", || {
            let h = [-3, -4, -23].map(|d| class_number(d).map(|q| q.h));
            let h = [h[0].clone()?, h[1].clone()?, h[2].clone()?];
            Ok((h == [1, 1, 3], format!("h(-3), h(-4), h(-23) = {h:?}")))
        }),
        check("curve count strategies", || {
            let r = CurveCountRequest { kind: LevelKind::Gamma1, ..full(7, 1, 3) };
            let a = count_points_with(&r, CountStrategy::JInvariant)?;
            let b = count_points_with(&r, CountStrategy::Weierstrass)?;
            Ok((a == b, format!("Y1(3)(F_7): {a} and {b}")))
        }),
        check("point counting identity", || {
            let mut detail = Vec::new();
            let mut ok = true;
            for (p, m, n) in [(5, 1, 3), (7, 1, 3), (5, 1, 4)] {
                let rep = compare(&full(p, m, n), &RhsOptions::default(), &Cache::disabled())?;
                ok &= rep.matched();
                detail.push(format!("({p},{m},{n}) {}", rep.lhs.unwrap_or_default()));
            }
            Ok((ok, detail.join("; ")))
        }),
    ]
}
