use super::*;
use crate::padic::{PadicElement, PadicMatrix, Unramified};
use num_rational::Ratio;

fn ball_count(delta: &PadicMatrix, mu: &[i64], radius: u32) -> usize {
    let ring = delta.ring().clone();
    enumerate_vertices(&ring, 2, radius, 1 << 22)
        .unwrap()
        .into_iter()
        .filter(|v| {
            let b = v.basis(&ring);
            relative_position(&b, &delta.mul(&b.sigma())).unwrap() == mu
        })
        .count()
}

#[test]
fn ramified_supersingular() {
    let ring = Unramified::new(5, 1, 14).unwrap();
    let delta = PadicMatrix::from_int_rows(&ring, &[vec![0, -5], vec![1, 0]]);
    let to = twisted_orbital_integral(&delta, &[1, 0], DEFAULT_MAX_DEPTH).unwrap();
    assert_eq!(to.kind, TorusKind::Ramified);
    assert_eq!(to.count, ball_count(&delta, &[1, 0], 3));
    assert_eq!(ball_count(&delta, &[1, 0], 3), ball_count(&delta, &[1, 0], 4));
    assert_eq!(to.value, Ratio::from_integer(1));
}

#[test]
fn ordinary_line() {
    let ring = Unramified::new(5, 1, 14).unwrap();
    let delta = PadicMatrix::from_int_rows(&ring, &[vec![0, -5], vec![1, 3]]);
    let to = twisted_orbital_integral(&delta, &[1, 0], DEFAULT_MAX_DEPTH).unwrap();
    assert_eq!(to.kind, TorusKind::Split);
    assert_eq!(to.value, Ratio::from_integer(1));
    // X / p^Z is a geodesic line: 2R + 1 vertices in the ball of radius R
    // when the line passes through the standard vertex.
    for r in 0..3 {
        assert_eq!(ball_count(&delta, &[1, 0], r), 2 * r as usize + 1);
    }
}

#[test]
fn basic_central_over_quadratic_extension() {
    let ring = Unramified::new(3, 2, 12).unwrap();
    let delta = PadicMatrix::from_int_rows(&ring, &[vec![0, 1], vec![3, 0]]);
    let to = twisted_orbital_integral(&delta, &[1, 0], DEFAULT_MAX_DEPTH).unwrap();
    assert_eq!(to.kind, TorusKind::Central);
    assert_eq!(to.count, ball_count(&delta, &[1, 0], 3));
    assert_eq!(to.value, Ratio::new(to.count as i64, 2));
}

#[test]
fn sigma_conjugation_invariance() {
    let ring = Unramified::new(2, 2, 16).unwrap();
    let delta = PadicMatrix::from_int_rows(&ring, &[vec![0, 1], vec![2, 0]]);
    let t = PadicElement::generator(&ring);
    let one = PadicElement::one(&ring);
    let g = PadicMatrix::from_entries(2, 2, vec![one.clone(), t.clone(), t.add(&one), t.mul(&t)]);
    let conj = g.mul(&delta).mul(&g.sigma().inverse().unwrap());
    let a = twisted_orbital_integral(&delta, &[1, 0], DEFAULT_MAX_DEPTH).unwrap();
    let b = twisted_orbital_integral(&conj, &[1, 0], DEFAULT_MAX_DEPTH).unwrap();
    assert_eq!(a.value, b.value);
}

fn fixed_ball_count(a: i64, d: i64, l: i64, radius: u32) -> usize {
    let ring = Unramified::new(l, 1, 20).unwrap();
    let g = PadicMatrix::from_int_rows(&ring, &[vec![0, -d], vec![1, a]]);
    enumerate_vertices(&ring, 2, radius, 1 << 22)
        .unwrap()
        .into_iter()
        .filter(|v| {
            let b = v.basis(&ring);
            tree_distance(&b, &g.mul(&b)).unwrap() == 0
        })
        .count()
}

#[test]
fn local_orbital_integrals() {
    // non-unit determinant: no fixed lattice
    let o = orbital_integral_gl2(0, 9, 3, 0).unwrap();
    assert_eq!(o.value, Ratio::from_integer(0));
    // x^2 - 2x + 10: disc -36, l = 3, unramified (-4 nonsquare mod 3), conductor 3
    let o = orbital_integral_gl2(2, 10, 3, 0).unwrap();
    assert_eq!(o.kind, TorusKind::Unramified);
    assert_eq!(o.count, fixed_ball_count(2, 10, 3, 3));
    assert_eq!(o.count, 5);
    // split: x^2 - 3x + 2 = (x-1)(x-2) at l = 3, v(alpha - beta) = 0
    let o = orbital_integral_gl2(3, 2, 3, 0).unwrap();
    assert_eq!(o.kind, TorusKind::Split);
    assert_eq!(o.value, Ratio::from_integer(1));
    // (x-1)(x-10) at l = 3: v(alpha - beta) = 2
    let o = orbital_integral_gl2(11, 10, 3, 0).unwrap();
    assert_eq!(o.value, Ratio::from_integer(9));
    // at l = 2: (x-1)(x-5), v = 2
    let o = orbital_integral_gl2(6, 5, 2, 0).unwrap();
    assert_eq!(o.value, Ratio::from_integer(4));
}

#[test]
fn level_structure() {
    // (x-1)(x-4) at l = 3, level 3: (gamma - 1)/3 = diag(0, 1) in the
    // eigenbasis fixes no lattice off the apartment, so only the standard vertex.
    let o = orbital_integral_gl2(5, 4, 3, 1).unwrap();
    assert_eq!(o.kind, TorusKind::Split);
    assert_eq!(o.value, Ratio::from_integer(gl2_order(3, 1)));
    assert_eq!(orbital_integral_central(4, 3, 1), gl2_order(3, 1));
    assert_eq!(orbital_integral_central(2, 3, 1), 0);
    assert_eq!(gl2_order(2, 1), 6);
    assert_eq!(gl2_order(3, 1), 48);
}

#[test]
fn unit_indices() {
    // Z[i] at l = 3, conductor 3: index 3 + 1
    assert_eq!(unit_index(3, 1, 0, 1), 4);
    // split prime: l = 5 in Z[i], index 5 - 1
    assert_eq!(unit_index(5, 1, 0, 1), 4);
    assert_eq!(unit_index(2, 2, 0, 1), 4);
}

#[test]
fn adlv_window_report() {
    let ring = Unramified::new(2, 1, 20).unwrap();
    let b = PadicMatrix::from_int_rows(&ring, &[vec![0, 1], vec![2, 0]]);
    let rep = adlv_points(&b, &[1, 0], 2, true, 1 << 20).unwrap();
    assert!(rep.saturated);
    assert!(rep.frobenius_stable);
    assert_eq!(rep.count_at_depth, 2);
}
