use kottwitz_core::abelian::{dual_and_pairing, smith_normal_form, FgAbGroup, IntMatrix};
use kottwitz_core::adlv::relative_position;
use kottwitz_core::modular::{class_number, count_points_with, CountStrategy, CurveCountRequest, LevelKind};
use kottwitz_core::padic::{kottwitz_point, newton_point, sigma_conjugate, PadicElement, PadicMatrix, Unramified};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-30i64..=30, c), r))
}

/// Reduced positive definite forms `(a, b, c)` with `b^2 - 4ac = d`.
fn reduced_forms(d: i64) -> i64 {
    let mut h = 0;
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && c == a) || a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            h += 1;
        }
        a += 1;
    }
    h
}

fn ring(p: i64, n: usize) -> std::sync::Arc<Unramified> {
    Unramified::new(p, n, 20.min(kottwitz_core::padic::max_precision(p))).unwrap()
}

fn element(r: &std::sync::Arc<Unramified>, coeffs: &[i64], shift: i64) -> PadicElement {
    PadicElement::from_poly(r, shift, &coeffs[..r.n])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_unimodular_diagonalisation(rows in matrix()) {
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.u_inv.mul(&s.u), IntMatrix::identity(rows.len()));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
    }

    #[test]
    fn dual_has_the_same_order(inv in prop::collection::vec(1i64..=12, 1..=3)) {
        let a = FgAbGroup::from_invariants(&inv);
        let d = dual_and_pairing(&a).unwrap();
        prop_assert_eq!(d.group.order(), a.order());
        let elems = a.elements().unwrap();
        let chars = d.characters().unwrap();
        // <x, chi> is additive in chi.
        for x in elems.iter().take(6) {
            for c1 in chars.iter().take(4) {
                for c2 in chars.iter().take(4) {
                    let sum: Vec<BigInt> = c1.iter().zip(c2).map(|(u, v)| u + v).collect();
                    let mut expect = d.pair(x, c1) + d.pair(x, c2);
                    if expect >= Ratio::one() {
                        expect -= Ratio::one();
                    }
                    prop_assert_eq!(d.pair(x, &sum), expect);
                }
            }
        }
    }

    #[test]
    fn class_number_matches_reduced_forms(k in 3i64..1600) {
        let d = -k;
        prop_assume!(d.rem_euclid(4) == 0 || d.rem_euclid(4) == 1);
        prop_assert_eq!(class_number(d).unwrap().h as i64, reduced_forms(d));
    }

    #[test]
    fn field_operations(p in prop::sample::select(vec![2i64, 3, 5, 7]), n in 1usize..=3,
                        a in prop::collection::vec(-50i64..=50, 3), b in prop::collection::vec(-50i64..=50, 3),
                        sa in -3i64..=3, sb in -3i64..=3) {
        let r = ring(p, n);
        let x = element(&r, &a, sa);
        let y = element(&r, &b, sb);
        prop_assume!(x.valuation().is_some() && y.valuation().is_some());
        prop_assert!(x.mul(&y).div(&y).unwrap().eq_approx(&x));
        prop_assert!(x.add(&y).frobenius().eq_approx(&x.frobenius().add(&y.frobenius())));
        prop_assert!(x.mul(&y).frobenius().eq_approx(&x.frobenius().mul(&y.frobenius())));
        prop_assert!(x.frobenius_pow(n as i64).eq_approx(&x));
        prop_assert_eq!(x.mul(&y).valuation(), Some(x.valuation().unwrap() + y.valuation().unwrap()));
    }

    #[test]
    fn invariants_of_sigma_conjugation(p in prop::sample::select(vec![2i64, 3, 5]), n in 1usize..=2,
                                       e in prop::collection::vec(-20i64..=20, 12), s in prop::collection::vec(-1i64..=1, 4)) {
        let r = ring(p, n);
        let entries = |off: usize, sh: &[i64]| {
            PadicMatrix::from_entries(2, 2, (0..4).map(|i| element(&r, &[e[off + i], e[(off + i + 5) % 12], 1], sh[i])).collect())
        };
        let b = entries(0, &s);
        let g = entries(4, &[0, 0, 0, 0]);
        prop_assume!(b.det().ok().and_then(|d| d.valuation()).is_some());
        prop_assume!(g.det().ok().and_then(|d| d.valuation()).is_some());
        let c = sigma_conjugate(&b, &g).unwrap();
        prop_assert_eq!(kottwitz_point(&b).unwrap(), kottwitz_point(&c).unwrap());
        prop_assert_eq!(newton_point(&b).unwrap(), newton_point(&c).unwrap());
        let nu = newton_point(&b).unwrap();
        prop_assert_eq!(nu.iter().sum::<Ratio<i64>>(), Ratio::from_integer(kottwitz_point(&b).unwrap()));
    }

    #[test]
    fn relative_position_sums_to_the_determinant(p in prop::sample::select(vec![2i64, 3, 5]),
                                                 e in prop::collection::vec(-20i64..=20, 4), s in prop::collection::vec(0i64..=3, 4)) {
        let r = ring(p, 1);
        let g = PadicMatrix::from_entries(2, 2, (0..4).map(|i| element(&r, &[e[i]], s[i])).collect());
        let v = g.det().ok().and_then(|d| d.valuation());
        prop_assume!(v.is_some());
        let id = PadicMatrix::identity(&r, 2);
        let inv = relative_position(&id, &g).unwrap();
        prop_assert_eq!(inv.iter().sum::<i64>(), v.unwrap());
        prop_assert!(inv[0] >= inv[1]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn counting_strategies_agree(p in prop::sample::select(vec![5u32, 7, 11]), level in 3u32..=4,
                                 kind in prop::sample::select(vec![LevelKind::Full, LevelKind::Gamma1])) {
        let req = CurveCountRequest { p, m: 1, level, kind };
        let a = count_points_with(&req, CountStrategy::JInvariant).unwrap();
        let b = count_points_with(&req, CountStrategy::Weierstrass).unwrap();
        prop_assert_eq!(a, b);
    }
}
