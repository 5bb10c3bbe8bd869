use super::datum::{trivial_galois, DatumKind, RootDatum};
use crate::abelian::IntMatrix;
use crate::galois::{FiniteGroup, GaloisLattice};
use crate::{Error, Result};
use std::sync::Arc;

fn a_cartan(l: usize) -> Vec<Vec<i64>> {
    (0..l)
        .map(|i| (0..l).map(|j| if i == j { 2 } else if i.abs_diff(j) == 1 { -1 } else { 0 }).collect())
        .collect()
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub fn gl(n: usize) -> RootDatum {
    let roots: Vec<Vec<i64>> = (0..n - 1)
        .map(|i| {
            let mut v = unit(n, i);
            v[i + 1] = -1;
            v
        })
        .collect();
    RootDatum::new(&format!("GL{n}"), n, roots.clone(), roots, trivial_galois(n), DatumKind::Gl(n)).unwrap()
}

/// `SL_n` in the basis of fundamental weights (so coroots are unit vectors).
pub fn sl(n: usize) -> RootDatum {
    let l = n - 1;
    let a = a_cartan(l);
    let coroots = (0..l).map(|i| unit(l, i)).collect();
    RootDatum::new(&format!("SL{n}"), l, a, coroots, trivial_galois(l), DatumKind::Sl(n)).unwrap()
}

/// `PGL_n` in the basis of simple roots.
pub fn pgl(n: usize) -> RootDatum {
    let l = n - 1;
    let a = a_cartan(l);
    let roots = (0..l).map(|i| unit(l, i)).collect();
    let coroots = (0..l).map(|j| (0..l).map(|i| a[i][j]).collect()).collect();
    RootDatum::new(&format!("PGL{n}"), l, roots, coroots, trivial_galois(l), DatumKind::Pgl(n)).unwrap()
}

/// `GSp_4` with torus `(t1, t2, nu) -> diag(t1, t2, nu/t2, nu/t1)`.
pub fn gsp4() -> RootDatum {
    let roots = vec![vec![1, -1, 0], vec![0, 2, -1]];
    let coroots = vec![vec![1, -1, 0], vec![0, 1, 0]];
    RootDatum::new("GSp4", 3, roots, coroots, trivial_galois(3), DatumKind::Gsp4).unwrap()
}

fn quadratic() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}

pub fn norm_one_torus() -> RootDatum {
    let g = GaloisLattice::from_generators(quadratic(), 1, &[(1, IntMatrix::from_i64(1, 1, &[-1]))]).unwrap();
    RootDatum::new("T1", 1, vec![], vec![], g, DatumKind::NormOneTorus).unwrap()
}

pub fn induced_torus() -> RootDatum {
    let g = GaloisLattice::from_generators(quadratic(), 2, &[(1, IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]))]).unwrap();
    RootDatum::new("ResGm", 2, vec![], vec![], g, DatumKind::InducedTorus).unwrap()
}

pub fn split_torus(r: usize) -> RootDatum {
    RootDatum::new(&format!("Gm^{r}"), r, vec![], vec![], trivial_galois(r), DatumKind::SplitTorus(r)).unwrap()
}

/// Looks up a preset by name: `GL2`, `SL3`, `PGL2`, `GSp4`, `T1`, `ResGm`,
/// `Gm`, and `A x B` for products.
pub fn preset(name: &str) -> Result<RootDatum> {
    if let Some((a, b)) = name.split_once('x') {
        if !a.trim().is_empty() && !b.trim().is_empty() && !name.trim().eq_ignore_ascii_case("x") {
            return Ok(preset(a.trim())?.product(&preset(b.trim())?));
        }
    }
    let lower = name.trim().to_ascii_lowercase();
    let num = |prefix: &str| lower.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok()).filter(|&n| (2..=6).contains(&n));
    if let Some(n) = num("pgl") {
        return Ok(pgl(n));
    }
    if let Some(n) = num("gl") {
        return Ok(gl(n));
    }
    if let Some(n) = num("sl") {
        return Ok(sl(n));
    }
    match lower.as_str() {
        "gsp4" => Ok(gsp4()),
        "t1" | "norm1" => Ok(norm_one_torus()),
        "resgm" => Ok(induced_torus()),
        "gm" => Ok(split_torus(1)),
        _ => Err(Error::PresetOnly(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::super::datum::{component_group_of_center_dual, tamagawa_number};
    use super::*;

    #[test]
    fn root_counts() {
        assert_eq!(gl(3).roots().unwrap().len(), 6);
        assert_eq!(sl(2).roots().unwrap().len(), 2);
        assert_eq!(gsp4().roots().unwrap().len(), 8);
        assert_eq!(gsp4().weyl_group().unwrap().len(), 8);
        assert_eq!(sl(3).weyl_group().unwrap().len(), 6);
    }

    #[test]
    fn fundamental_groups() {
        assert!(sl(2).pi1().group.is_trivial());
        assert_eq!(pgl(3).pi1().group.order_u64().unwrap(), 3);
        assert_eq!(gl(2).pi1().group.free_rank(), 1);
        assert_eq!(gsp4().pi1().group.free_rank(), 1);
        assert!(gsp4().pi1().group.invariants().0.is_empty());
        let (lat, _) = induced_torus().pi1().to_lattice().unwrap();
        assert_eq!(lat.rank(), 2);
    }

    #[test]
    fn tamagawa_numbers() {
        assert_eq!(tamagawa_number(&gl(2)).unwrap(), 1);
        assert_eq!(tamagawa_number(&sl(2)).unwrap(), 1);
        assert_eq!(tamagawa_number(&pgl(2)).unwrap(), 2);
        assert_eq!(tamagawa_number(&gsp4()).unwrap(), 1);
        assert_eq!(tamagawa_number(&norm_one_torus()).unwrap(), 2);
        assert_eq!(tamagawa_number(&induced_torus()).unwrap(), 1);
        let prod = sl(2).product(&norm_one_torus());
        assert_eq!(tamagawa_number(&prod).unwrap(), 2);
        assert_eq!(component_group_of_center_dual(&pgl(3)).order_u64().unwrap(), 3);
    }

    #[test]
    fn preset_lookup() {
        assert_eq!(preset("GL2").unwrap().rank, 2);
        assert_eq!(preset("SL2 x SL2").unwrap().rank, 2);
        assert!(matches!(preset("E8"), Err(Error::PresetOnly(_))));
    }
}
