//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! runtime against the limit; the process exits non-zero if any fails.

use kottwitz_core::abelian::{dual_and_pairing, smith_normal_form, FgAbGroup, IntMatrix};
use kottwitz_core::adlv::{displacement_level_set, enumerate_vertices, relative_position, twisted_orbital_integral, TorusKind, DEFAULT_MAX_DEPTH};
use kottwitz_core::galois::GaloisLattice;
use kottwitz_core::kottwitz::fixtures::{format_fixture, parse_fixtures};
use kottwitz_core::kottwitz::{kottwitz_invariant, kottwitz_invariant_with, parameter_fourier_sum, random_parameter, AmbientData};
use kottwitz_core::modular::{compare, rhs_assemble, Cache, Convention, CurveCountRequest, LevelKind, RhsOptions};
use kottwitz_core::padic::family::{Laurent, LaurentMatrix};
use kottwitz_core::padic::{
    decent_representative, is_decent, kottwitz_point, max_precision, newton_point, sigma_conjugate, sigma_norm, PadicElement, PadicMatrix, Unramified,
};
use kottwitz_core::rootdata::{destabilization_check, enumerate_elliptic_endoscopy, gsp4, iota, sl, SyntheticData};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use std::time::Instant;

struct Outcome {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Outcome { pass, summary: summary.into(), details: Vec::new() }
    }
}

/// Collects failures, keeping the first few messages.
#[derive(Default)]
struct Failures {
    count: usize,
    first: Vec<String>,
}

impl Failures {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.count += 1;
            if self.first.len() < 5 {
                self.first.push(msg());
            }
        }
    }

    fn outcome(self, summary: String) -> Outcome {
        let mut o = Outcome::new(self.count == 0, format!("{summary}, {} failures", self.count));
        o.details = self.first;
        o
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- criterion 1

/// Determinant by fraction-free elimination over i128.
fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Determinantal divisors: gcd of all k x k minors, for k = 1..=min(r, c).
fn determinantal_divisors(m: &[Vec<i64>]) -> Vec<i128> {
    let (r, c) = (m.len(), m[0].len());
    (1..=r.min(c))
        .map(|k| {
            let mut g = 0i128;
            for rows in subsets(r, k) {
                for cols in subsets(c, k) {
                    let minor: Vec<Vec<i128>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j] as i128).collect()).collect();
                    g = g.gcd(&det_i128(&minor));
                }
            }
            g
        })
        .collect()
}

fn snf_case(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-50..=50)).collect()).collect();
    let m = IntMatrix::from_rows(&rows);
    let s = smith_normal_form(&m);
    if s.u.mul(&m).mul(&s.v) != s.d {
        return Err(format!("U M V != D for {rows:?}"));
    }
    if !s.u.is_unimodular() || !s.v.is_unimodular() {
        return Err(format!("transforms not unimodular for {rows:?}"));
    }
    if s.u.mul(&s.u_inv) != IntMatrix::identity(r) || s.v.mul(&s.v_inv) != IntMatrix::identity(c) {
        return Err(format!("stored inverses wrong for {rows:?}"));
    }
    for i in 0..r {
        for j in 0..c {
            if i != j && !s.d.get(i, j).is_zero() {
                return Err(format!("D not diagonal for {rows:?}"));
            }
        }
    }
    let diag = s.diagonal();
    if diag.iter().any(|x| x.is_negative()) {
        return Err(format!("negative invariant for {rows:?}"));
    }
    for w in diag.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
        if !ok {
            return Err(format!("divisibility fails for {rows:?}: {diag:?}"));
        }
    }
    // d_1 ... d_k equals the gcd of the k x k minors.
    let dd = determinantal_divisors(&rows);
    let mut prod = BigInt::from(1);
    for (k, g) in dd.iter().enumerate() {
        prod *= &diag[k];
        if prod != BigInt::from(*g) {
            return Err(format!("invariant factors disagree with minors for {rows:?}"));
        }
    }
    Ok(())
}

fn random_finite_group(rng: &mut ChaCha8Rng) -> (FgAbGroup, u64) {
    loop {
        let k = rng.gen_range(1..=3);
        let entries: Vec<i64> = (0..k * k).map(|_| rng.gen_range(-12..=12)).collect();
        let rel = IntMatrix::from_i64(k, k, &entries);
        let det = rel.det().abs();
        if !det.is_zero() && det <= BigInt::from(1000) {
            let n: u64 = det.try_into().unwrap();
            return (FgAbGroup::new(k, rel), n);
        }
    }
}

fn dual_case(a: &FgAbGroup, n: u64, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let d = dual_and_pairing(a).map_err(|e| e.to_string())?;
    let elems = a.elements().map_err(|e| e.to_string())?;
    let chars = d.characters().map_err(|e| e.to_string())?;
    if elems.len() as u64 != n || chars.len() as u64 != n {
        return Err(format!("|A| = {}, |A^| = {}, expected {n}", elems.len(), chars.len()));
    }
    let zero = Ratio::zero();
    for x in &elems {
        if !a.is_zero(x) && chars.iter().all(|chi| d.pair(x, chi) == zero) {
            return Err(format!("element {x:?} pairs trivially with every character"));
        }
    }
    for chi in &chars {
        if !d.group.is_zero(chi) && elems.iter().all(|x| d.pair(x, chi) == zero) {
            return Err(format!("character {chi:?} is trivial on A"));
        }
    }
    for _ in 0..50 {
        let x = &elems[rng.gen_range(0..elems.len())];
        let y = &elems[rng.gen_range(0..elems.len())];
        let chi = &chars[rng.gen_range(0..chars.len())];
        let xy: Vec<BigInt> = x.iter().zip(y).map(|(u, v)| u + v).collect();
        let lhs = d.pair(&xy, chi);
        let mut rhs = d.pair(x, chi) + d.pair(y, chi);
        if rhs >= Ratio::from_integer(BigInt::from(1)) {
            rhs -= Ratio::from_integer(BigInt::from(1));
        }
        if lhs != rhs {
            return Err("pairing is not additive".into());
        }
    }
    Ok(())
}

fn criterion1() -> Outcome {
    let mut r = rng(1);
    let mut f = Failures::default();
    for _ in 0..500 {
        let res = snf_case(&mut r);
        f.check(res.is_ok(), || res.unwrap_err());
    }
    let mut largest = 0;
    for i in 0..40 {
        let (a, n) = if i < 4 {
            // a few fixed large orders
            let inv = [[1000i64].as_slice(), &[10, 100], &[2, 6, 72], &[5, 195]][i];
            let n = inv.iter().product::<i64>() as u64;
            (FgAbGroup::from_invariants(inv), n)
        } else {
            random_finite_group(&mut r)
        };
        largest = largest.max(n);
        let res = dual_case(&a, n, &mut r);
        f.check(res.is_ok(), || res.unwrap_err());
    }
    f.outcome(format!("500 Smith forms, 40 duals (largest order {largest})"))
}

// ---------------------------------------------------------------- criterion 2

fn relation_columns(l: &GaloisLattice, h: &[usize]) -> Vec<Vec<i64>> {
    let r = l.rank();
    let mut cols: Vec<Vec<i64>> = Vec::new();
    for &g in h {
        let m = l.action(g).to_i64();
        for j in 0..r {
            let col: Vec<i64> = (0..r).map(|i| m[i][j] - (i == j) as i64).collect();
            if col.iter().any(|&x| x != 0) && !cols.contains(&col) {
                cols.push(col);
            }
        }
    }
    cols
}

fn in_span(cols: &[Vec<i64>], x: &[i64], bound: i64) -> bool {
    match cols.split_first() {
        None => x.iter().all(|&v| v == 0),
        Some((c, rest)) => (-bound..=bound).any(|k| {
            let y: Vec<i64> = x.iter().zip(c).map(|(a, b)| a - k * b).collect();
            in_span(rest, &y, bound)
        }),
    }
}

fn box_vectors(rank: usize, c: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|v| (-c..=c).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

/// Order of the quotient of `K_{Gamma, tors}` by the images of the local
/// kernels, found by enumerating a box of `K` and testing membership in the
/// relation spans by exhaustive search.
fn e_group_order_by_enumeration(amb: &AmbientData) -> usize {
    const C: i64 = 3;
    const B: i64 = 8;
    let k = &amb.pi.k;
    let all: Vec<usize> = (0..k.group().order()).collect();
    let span_g = relation_columns(k, &all);
    let torsion = |span: &[Vec<i64>], x: &[i64]| (1..=4).any(|n| in_span(span, &x.iter().map(|v| n * v).collect::<Vec<_>>(), B));
    let equiv = |x: &[i64], y: &[i64]| in_span(&span_g, &x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>(), B);
    let vectors = box_vectors(k.rank(), C);
    let mut reps: Vec<Vec<i64>> = Vec::new();
    for x in vectors.iter().filter(|x| torsion(&span_g, x)) {
        if !reps.iter().any(|r| equiv(x, r)) {
            reps.push(x.clone());
        }
    }
    let class = |x: &[i64]| reps.iter().position(|r| equiv(x, r)).expect("class representative");
    let ki = amb.pi.k_to_i.to_i64();
    let mut killed = vec![class(&vec![0; k.rank()])];
    for place in &amb.places.places {
        let span_k = relation_columns(k, &place.subgroup);
        let span_i = relation_columns(&amb.pi.i, &place.subgroup);
        for y in &vectors {
            let img: Vec<i64> = ki.iter().map(|row| row.iter().zip(y).map(|(a, b)| a * b).sum()).collect();
            if torsion(&span_k, y) && in_span(&span_i, &img, B) {
                let c = class(y);
                if !killed.contains(&c) {
                    killed.push(c);
                }
            }
        }
    }
    // close the killed set under addition
    loop {
        let mut grew = false;
        for a in killed.clone() {
            for b in killed.clone() {
                let s: Vec<i64> = reps[a].iter().zip(&reps[b]).map(|(x, y)| x + y).collect();
                let c = class(&s);
                if !killed.contains(&c) {
                    killed.push(c);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    reps.len() / killed.len()
}

fn criterion2() -> Outcome {
    let mut f = Failures::default();
    let mut seen = Vec::new();
    for (name, expected) in [("gl2", 1u64), ("gl2-split", 1), ("sl2", 2), ("sl2-split", 2)] {
        match AmbientData::preset(name).and_then(|a| Ok((a.k_order()?, a))) {
            Ok((order, amb)) => {
                let oracle = e_group_order_by_enumeration(&amb) as u64;
                let cyclic = amb.kgroup.dual.group.invariants().0.len() <= 1;
                f.check(order == expected && oracle == expected && cyclic, || {
                    format!("{name}: |K| = {order}, enumeration {oracle}, expected {expected}")
                });
                seen.push(format!("{name} {order}/{oracle}"));
            }
            Err(e) => f.check(false, || format!("{name}: {e}")),
        }
    }
    f.outcome(format!("K orders (computed/enumerated): {}", seen.join(", ")))
}

// ---------------------------------------------------------------- p-adic helpers

fn prec_for(p: i64) -> u32 {
    max_precision(p)
}

fn rings() -> Vec<Arc<Unramified>> {
    let mut out = Vec::new();
    for p in [2, 3, 5] {
        for n in 1..=3 {
            out.push(Unramified::new(p, n, prec_for(p)).unwrap());
        }
    }
    out
}

fn unit(ring: &Arc<Unramified>, rng: &mut ChaCha8Rng) -> PadicElement {
    loop {
        let c: Vec<i64> = (0..ring.n).map(|_| rng.gen_range(-40..=40)).collect();
        if c.iter().any(|x| x % ring.p != 0) {
            return PadicElement::from_poly(ring, 0, &c);
        }
    }
}

fn integral(ring: &Arc<Unramified>, rng: &mut ChaCha8Rng) -> PadicElement {
    if rng.gen_ratio(1, 8) {
        return PadicElement::zero(ring);
    }
    let u = unit(ring, rng);
    u.mul(&PadicElement::p_power(ring, rng.gen_range(0..=2)))
}

fn gl_o(ring: &Arc<Unramified>, d: usize, rng: &mut ChaCha8Rng) -> PadicMatrix {
    loop {
        let m = PadicMatrix::from_entries(d, d, (0..d * d).map(|_| integral(ring, rng)).collect());
        if m.det().ok().and_then(|x| x.valuation()) == Some(0) {
            return m;
        }
    }
}

fn p_diag(ring: &Arc<Unramified>, mu: &[i64]) -> PadicMatrix {
    PadicMatrix::diag(ring, &mu.iter().map(|&e| PadicElement::p_power(ring, e)).collect::<Vec<_>>())
}

/// `A p^mu B` with `A, B` in `GL_d(O)`; returns the matrix and `|mu|`.
fn random_gl(ring: &Arc<Unramified>, d: usize, range: i64, rng: &mut ChaCha8Rng) -> (PadicMatrix, i64) {
    let mu: Vec<i64> = (0..d).map(|_| rng.gen_range(-range..=range)).collect();
    let g = gl_o(ring, d, rng).mul(&p_diag(ring, &mu)).mul(&gl_o(ring, d, rng));
    (g, mu.iter().sum())
}

// ---------------------------------------------------------------- criterion 3

fn criterion3() -> Outcome {
    let rs = rings();
    let mut r = rng(3);
    let mut f = Failures::default();
    for _ in 0..1000 {
        let ring = &rs[r.gen_range(0..rs.len())];
        let d = r.gen_range(1..=3);
        let a = gl_o(ring, d, &mut r);
        let mu: Vec<i64> = (0..d).map(|_| r.gen_range(-2..=2)).collect();
        let pm = p_diag(ring, &mu);
        let g = a.mul(&pm).mul(&gl_o(ring, d, &mut r));
        let (h, kh) = random_gl(ring, d, 2, &mut r);
        let k = |m: &PadicMatrix| kottwitz_point(m).map_err(|e| e.to_string());
        let got = (k(&a), k(&pm), k(&g), k(&h), k(&g.mul(&h)));
        let size: i64 = mu.iter().sum();
        let ok = matches!(&got, (Ok(0), Ok(x), Ok(y), Ok(z), Ok(w)) if *x == size && *y == size && *z == kh && *w == size + kh);
        f.check(ok, || format!("p = {}, n = {}, mu = {mu:?}: {got:?}", ring.p, ring.n));
    }
    for _ in 0..100 {
        let ring = &rs[r.gen_range(0..rs.len())];
        let d = r.gen_range(1..=3);
        let a: Vec<i64> = (0..d).map(|_| r.gen_range(-2..=2)).collect();
        let mut entries = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let k = r.gen_range(-2..=2);
                entries.push(match i.cmp(&j) {
                    std::cmp::Ordering::Equal => Laurent::monomial(unit(ring, &mut r).mul(&PadicElement::p_power(ring, a[i])), k),
                    std::cmp::Ordering::Less => Laurent::monomial(integral(ring, &mut r), k),
                    std::cmp::Ordering::Greater => Laurent::constant(PadicElement::zero(ring)),
                });
            }
        }
        let fam = LaurentMatrix::new(d, entries);
        let u0 = unit(ring, &mut r);
        let expected: i64 = a.iter().sum();
        let got = (fam.kappa_gauss().map_err(|e| e.to_string()), fam.kappa_specialized(&u0).map_err(|e| e.to_string()));
        let ok = matches!(&got, (Ok(x), Ok(y)) if *x == expected && *y == expected);
        f.check(ok, || format!("family with exponents {a:?}: {got:?}"));
    }
    f.outcome("1000 elements, 100 Laurent families".into())
}

// ---------------------------------------------------------------- criterion 4

/// Slope multisets of size `d` with denominators at most 3 and `|slope| <= 2`,
/// each slope `r/s` repeated a multiple of `s` times.
fn slope_multisets(d: usize) -> Vec<Vec<Ratio<i64>>> {
    let mut blocks = Vec::new();
    for s in 1..=3i64 {
        for num in -2 * s..=2 * s {
            if num.gcd(&s) == 1 {
                blocks.push(Ratio::new(num, s));
            }
        }
    }
    fn go(blocks: &[Ratio<i64>], start: usize, left: usize, cur: &mut Vec<Ratio<i64>>, out: &mut Vec<Vec<Ratio<i64>>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..blocks.len() {
            let s = *blocks[i].denom() as usize;
            if s <= left {
                cur.extend(std::iter::repeat(blocks[i]).take(s));
                go(blocks, i, left - s, cur, out);
                cur.truncate(cur.len() - s);
            }
        }
    }
    let mut out = Vec::new();
    go(&blocks, 0, d, &mut Vec::new(), &mut out);
    out
}

fn criterion4() -> Outcome {
    let rs = rings();
    let mut r = rng(4);
    let mut f = Failures::default();
    let shapes: Vec<Vec<Vec<Ratio<i64>>>> = (0..=3).map(slope_multisets).collect();
    for i in 0..1000 {
        let ring = &rs[r.gen_range(0..rs.len())];
        let d = r.gen_range(1..=3);
        let b = if i % 2 == 0 {
            let s = &shapes[d][r.gen_range(0..shapes[d].len())];
            decent_representative(ring, s).unwrap()
        } else {
            random_gl(ring, d, 2, &mut r).0
        };
        let g = random_gl(ring, d, 1, &mut r).0;
        let res = (|| {
            let c = sigma_conjugate(&b, &g)?;
            Ok::<_, kottwitz_core::Error>((newton_point(&b)?, newton_point(&c)?, kottwitz_point(&b)?, kottwitz_point(&c)?))
        })();
        match res {
            Ok((n1, n2, k1, k2)) => f.check(n1 == n2 && k1 == k2, || format!("p = {}, n = {}: {n1:?} vs {n2:?}, {k1} vs {k2}", ring.p, ring.n)),
            Err(e) => f.check(false, || format!("p = {}, n = {}, d = {d}: {e}", ring.p, ring.n)),
        }
    }
    let mut reps = 0;
    for ring in &rs {
        for d in 1..=3 {
            for slopes in &shapes[d] {
                reps += 1;
                let b = decent_representative(ring, slopes).unwrap();
                let den = slopes.iter().fold(1i64, |acc, s| acc.lcm(s.denom()));
                let n = den.lcm(&(ring.n as i64)) as usize;
                let mut exps: Vec<i64> = slopes.iter().map(|s| (s * n as i64).to_integer()).collect();
                exps.sort_unstable_by(|a, b| b.cmp(a));
                let literal = sigma_norm(&b, n).eq_approx(&p_diag(ring, &exps));
                let certified = is_decent(&b, n).map_err(|e| e.to_string());
                f.check(literal && certified == Ok(true), || {
                    format!("slopes {slopes:?} over p = {}, n = {}: literal {literal}, certificate {certified:?}", ring.p, ring.n)
                });
            }
        }
    }
    f.outcome(format!("1000 sigma-conjugations, {reps} decent representatives"))
}

// ---------------------------------------------------------------- criterion 5

fn criterion5() -> Outcome {
    let mut r = rng(5);
    let names = ["gl2", "sl2", "gl2-split", "sl2-split"];
    let mut text = String::new();
    for (i, name) in names.iter().cycle().take(200).enumerate() {
        let amb = AmbientData::preset(name).unwrap();
        let c = random_parameter(&amb, &format!("c{i}"), &mut r);
        text += &format_fixture(name, &amb, &c);
    }
    let fixtures = match parse_fixtures(&text, &|n| AmbientData::preset(n)) {
        Ok(x) => x,
        Err(e) => return Outcome::new(false, format!("fixture set does not parse: {e}")),
    };
    let mut f = Failures::default();
    f.check(fixtures.len() == 200, || format!("parsed {} fixtures", fixtures.len()));
    let (mut zero, mut full) = (0, 0);
    for (amb, c) in &fixtures {
        let res = (|| {
            let k = BigInt::from(amb.k_order()?);
            let alpha = kottwitz_invariant(amb, c)?;
            let s = parameter_fourier_sum(amb, c)?;
            let mut lifts_agree = true;
            for _ in 0..100 {
                let again = kottwitz_invariant_with(amb, c, Some(&mut r))?;
                lifts_agree &= amb.kgroup.e.group.equal(&alpha, &again);
            }
            Ok::<_, kottwitz_core::Error>((k, amb.kgroup.e.group.is_zero(&alpha), s, lifts_agree))
        })();
        match res {
            Ok((k, is_zero, s, lifts)) => {
                if is_zero {
                    full += 1;
                } else {
                    zero += 1;
                }
                let ok = (s == k || s.is_zero()) && (s == k) == is_zero && lifts;
                f.check(ok, || format!("{}: sum {s}, |K| = {k}, alpha zero {is_zero}, lifts agree {lifts}", c.id));
            }
            Err(e) => f.check(false, || format!("{}: {e}", c.id)),
        }
    }
    f.outcome(format!("200 parameters ({full} with alpha = 0, {zero} with alpha != 0), 100 lifts each"))
}

// ---------------------------------------------------------------- criterion 6

fn sample_delta(ring: &Arc<Unramified>, attempt: usize, rng: &mut ChaCha8Rng) -> PadicMatrix {
    if ring.n == 2 && attempt % 2 == 0 {
        // central norm: [[0, 1], [z, 0]] with v(z) = 1, twisted by GL_2(O)
        let u = loop {
            let u = rng.gen_range(-60i64..=60);
            if u % ring.p != 0 {
                break u;
            }
        };
        let d0 = PadicMatrix::from_int_rows(ring, &[vec![0, 1], vec![ring.p * u, 0]]);
        return sigma_conjugate(&d0, &gl_o(ring, 2, rng)).unwrap();
    }
    gl_o(ring, 2, rng).mul(&p_diag(ring, &[0, 1])).mul(&gl_o(ring, 2, rng))
}

fn criterion6() -> Outcome {
    let mut r = rng(6);
    let mut f = Failures::default();
    let mut details = Vec::new();
    for p in [2i64, 3, 5] {
        for n in 1..=2usize {
            let ring = Unramified::new(p, n, prec_for(p)).unwrap();
            let ball: Vec<(PadicMatrix, PadicMatrix)> = match enumerate_vertices(&ring, 2, 3, 1 << 20) {
                Ok(v) => v.iter().map(|l| (l.basis(&ring), l.basis(&ring).sigma())).collect(),
                Err(e) => {
                    f.check(false, || format!("p = {p}, n = {n}: {e}"));
                    continue;
                }
            };
            let (mut accepted, mut attempts) = (0, 0);
            let mut kinds = [0usize; 3];
            while accepted < 50 && attempts < 20_000 {
                attempts += 1;
                let delta = sample_delta(&ring, attempts, &mut r);
                let to = match twisted_orbital_integral(&delta, &[1, 0], DEFAULT_MAX_DEPTH) {
                    Ok(t) if t.kind == TorusKind::Split => continue,
                    Ok(t) => t,
                    Err(kottwitz_core::Error::InfiniteOrbit) => continue,
                    Err(e) => {
                        f.check(false, || format!("p = {p}, n = {n}: {e}"));
                        continue;
                    }
                };
                accepted += 1;
                kinds[match to.kind {
                    TorusKind::Central => 0,
                    TorusKind::Unramified => 1,
                    _ => 2,
                }] += 1;
                let exhaustive = ball.iter().filter(|(b, sb)| relative_position(b, &delta.mul(sb)).ok() == Some(vec![1, 0])).count();
                let d2 = delta.clone();
                let rel = move |b: &PadicMatrix| relative_position(b, &d2.mul(&b.sigma()));
                let sat = displacement_level_set(&ring, &rel, &[1, 0], 5).map(|s| s.counts_by_depth);
                let ok = to.count == exhaustive
                    && to.value == Ratio::new(exhaustive as i64, to.volume)
                    && matches!(&sat, Ok(c) if c[3] == exhaustive && c[5] == exhaustive);
                f.check(ok, || format!("p = {p}, n = {n}: TO count {} value {}, exhaustive {exhaustive}, depth counts {sat:?}", to.count, to.value));
            }
            f.check(accepted == 50, || format!("p = {p}, n = {n}: only {accepted} elliptic or central samples"));
            details.push(format!("p = {p}, n = {n}: {} vertices, central/unramified/ramified = {kinds:?}", ball.len()));
        }
    }
    let mut o = f.outcome("6 (p, n) pairs x 50 samples".into());
    o.details.extend(details);
    o
}

// ---------------------------------------------------------------- criterion 7

fn criterion7() -> Outcome {
    let run = || -> Result<Outcome, kottwitz_core::Error> {
        let sl2 = sl(2);
        let e4 = enumerate_elliptic_endoscopy(&sl2, 4)?;
        let e8 = enumerate_elliptic_endoscopy(&sl2, 8)?;
        let mut lambda: Vec<u64> = e4.iter().map(|e| e.out_order).collect();
        lambda.sort_unstable();
        let labels = |v: &[kottwitz_core::rootdata::EndoscopicDatum]| {
            let mut l: Vec<String> = v.iter().map(|e| e.label()).collect();
            l.sort();
            l
        };
        let torus = e4.iter().find(|e| e.out_order == 2).ok_or_else(|| kottwitz_core::Error::Invalid("no torus datum".into()))?;
        let iota_t = iota(&sl2, torus)?;
        let g4 = enumerate_elliptic_endoscopy(&gsp4(), 4)?;
        let g8 = enumerate_elliptic_endoscopy(&gsp4(), 8)?;
        let ok = e4.len() == 2
            && lambda == [1, 2]
            && labels(&e4) == labels(&e8)
            && iota_t == Ratio::new(1, 4)
            && g4.len() == 2
            && labels(&g4) == labels(&g8);
        Ok(Outcome::new(
            ok,
            format!(
                "SL2 classes {:?} with lambda {lambda:?}, iota(SL2, T) = {iota_t}, GSp4 classes {:?}; stable from torsion bound 4 to 8",
                labels(&e4),
                labels(&g4)
            ),
        ))
    };
    run().unwrap_or_else(|e| Outcome::new(false, e.to_string()))
}

// ---------------------------------------------------------------- criterion 8

fn criterion8() -> Outcome {
    let mut r = rng(8);
    let mut f = Failures::default();
    for i in 0..100 {
        let mut d = SyntheticData::random(&mut r);
        let good = destabilization_check(&d);
        f.check(good.passed, || format!("dataset {i}: consistent data rejected ({} vs {})", good.lhs, good.rhs));
        d.corrupt_one_fiber(&mut r);
        let bad = destabilization_check(&d);
        f.check(!bad.passed, || format!("dataset {i}: corruption not detected"));
    }
    f.outcome("100 consistent datasets, 100 corruptions".into())
}

// ---------------------------------------------------------------- criteria 9, 10

fn grid() -> Vec<CurveCountRequest> {
    let mut out = Vec::new();
    for p in [5u32, 7, 11, 13] {
        for m in [1u32, 2] {
            for n in [3u32, 4] {
                if n % p != 0 {
                    out.push(CurveCountRequest { p, m, level: n, kind: LevelKind::Full });
                }
            }
        }
    }
    out
}

fn criterion9(totals: &mut Vec<Option<Ratio<i64>>>) -> Outcome {
    let cache = Cache::disabled();
    let mut details = Vec::new();
    let (mut m2_ok, mut m1_matches, mut m1_total) = (true, 0, 0);
    for req in grid() {
        let tag = format!("({}, {}, {})", req.p, req.m, req.level);
        match compare(&req, &RhsOptions::default(), &cache) {
            Ok(rep) => {
                let matched = rep.matched();
                let total = rep.rhs.as_ref().map(|r| r.total);
                totals.push(total);
                details.push(format!("{tag}: points {} trace formula {} match {matched}", rep.lhs.unwrap_or_default(), total.unwrap_or_default()));
                if req.m == 1 {
                    m1_total += 1;
                    m1_matches += matched as usize;
                } else {
                    m2_ok &= matched;
                }
            }
            Err(e) => {
                totals.push(None);
                details.push(format!("{tag}: {e}"));
                if req.m == 2 {
                    m2_ok = false;
                } else {
                    m1_total += 1;
                }
            }
        }
    }
    let mut o = Outcome::new(m2_ok, format!("m = 2 all match: {m2_ok}; m = 1 matches {m1_matches}/{m1_total}"));
    o.details = details;
    o
}

fn criterion10(totals: &[Option<Ratio<i64>>]) -> Outcome {
    let cache = Cache::disabled();
    let opts = RhsOptions { convention: Convention::Order, ..Default::default() };
    let mut f = Failures::default();
    for (req, base) in grid().iter().zip(totals) {
        let other = rhs_assemble(req, &opts, &cache).map(|r| r.total);
        f.check(base.is_some() && other.as_ref().ok() == base.as_ref(), || {
            format!("({}, {}, {}): maximal {base:?}, order {:?}", req.p, req.m, req.level, other.map_err(|e| e.to_string()))
        });
    }
    f.outcome(format!("{} requests under the order normalization", totals.len()))
}

// ---------------------------------------------------------------- driver

fn main() {
    let _ = rayon::ThreadPoolBuilder::new().num_threads(4).build_global();
    let mut totals = Vec::new();
    let criteria: Vec<(u32, &str, f64, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        (1, "Smith normal form and duals", 10.0, Box::new(criterion1)),
        (2, "Kottwitz group orders", 1.0, Box::new(criterion2)),
        (3, "Kottwitz homomorphism", 30.0, Box::new(criterion3)),
        (4, "sigma-conjugacy invariants", 60.0, Box::new(criterion4)),
        (5, "Fourier identity", 30.0, Box::new(criterion5)),
        (6, "twisted orbital integrals", 300.0, Box::new(criterion6)),
        (7, "endoscopic data", 10.0, Box::new(criterion7)),
        (8, "destabilization bookkeeping", 10.0, Box::new(criterion8)),
    ];
    let mut failed = 0;
    let mut report = |id: u32, name: &str, limit: f64, secs: f64, o: Outcome| {
        let pass = o.pass && secs < limit;
        failed += !pass as usize;
        println!(
            "criterion {id} [{name}]: {} ({secs:.2} s, limit {limit} s) {}",
            if pass { "PASS" } else { "FAIL" },
            o.summary
        );
        for d in o.details {
            println!("    {d}");
        }
    };
    for (id, name, limit, run) in criteria {
        let t = Instant::now();
        let o = run();
        report(id, name, limit, t.elapsed().as_secs_f64(), o);
    }
    let t = Instant::now();
    let o = criterion9(&mut totals);
    report(9, "point counts of Y(N)", 1800.0, t.elapsed().as_secs_f64(), o);
    let t = Instant::now();
    let o = criterion10(&totals);
    report(10, "measure normalization", 1800.0, t.elapsed().as_secs_f64(), o);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
