use crate::{Error, Result};
use num_integer::Integer;
use serde::Serialize;

/// Class number and unit count of the imaginary quadratic order of
/// discriminant `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticOrderData {
    pub discriminant: i64,
    pub h: u64,
    pub w: u64,
}

/// Counts primitive reduced forms `(a, b, c)`, `b^2 - 4ac = d`,
/// `|b| <= a <= c`, with `b >= 0` whenever `|b| = a` or `a = c`.
pub fn class_number(d: i64) -> Result<QuadraticOrderData> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(d));
    }
    let mut h = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (a == c && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += 1;
            }
        }
        a += 1;
    }
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    Ok(QuadraticOrderData { discriminant: d, h, w })
}

/// Writes `d = f^2 d_K` with `d_K` a fundamental discriminant.
pub fn fundamental_part(d: i64) -> Result<(i64, i64)> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(d));
    }
    let mut best = (d, 1);
    let mut f = 1i64;
    while f * f <= -d {
        if d % (f * f) == 0 {
            let dk = d / (f * f);
            if dk.rem_euclid(4) <= 1 && is_fundamental(dk) {
                best = (dk, f);
            }
        }
        f += 1;
    }
    Ok(best)
}

fn is_fundamental(d: i64) -> bool {
    let squarefree = |n: i64| {
        let n = n.abs();
        let mut k = 2;
        while k * k <= n {
            if n % (k * k) == 0 {
                return false;
            }
            k += 1;
        }
        true
    };
    if d.rem_euclid(4) == 1 {
        return squarefree(d);
    }
    if d % 4 != 0 {
        return false;
    }
    let m = d / 4;
    matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_discriminants() {
        let get = |d| class_number(d).unwrap();
        assert_eq!((get(-4).h, get(-4).w), (1, 4));
        assert_eq!((get(-3).h, get(-3).w), (1, 6));
        assert_eq!((get(-23).h, get(-23).w), (3, 2));
        assert_eq!(get(-20).h, 2);
        assert_eq!(get(-56).h, 4);
        // non-maximal orders
        assert_eq!(get(-16).h, 1);
        assert_eq!(get(-12).h, 1);
        assert_eq!(get(-36).h, 2);
        assert!(class_number(-5).is_err());
        assert!(class_number(8).is_err());
    }

    #[test]
    fn fundamental_parts() {
        assert_eq!(fundamental_part(-36).unwrap(), (-4, 3));
        assert_eq!(fundamental_part(-27).unwrap(), (-3, 3));
        assert_eq!(fundamental_part(-100).unwrap(), (-4, 5));
        assert_eq!(fundamental_part(-23).unwrap(), (-23, 1));
        assert_eq!(fundamental_part(-32).unwrap(), (-8, 2));
    }
}
