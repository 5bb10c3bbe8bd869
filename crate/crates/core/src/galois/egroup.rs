use super::lattice::GaloisLattice;
use super::local::{a_functor, PlaceSystem};
use crate::abelian::{dual_and_pairing, AbHom, Dual, FgAbGroup, IntMatrix};
use crate::{Error, Result};
use num_bigint::BigInt;
use serde::Serialize;

/// Surjection `pi_1(I) -> pi_1(G)` together with its kernel `K`.
#[derive(Clone, Debug)]
pub struct PiMap {
    pub i: GaloisLattice,
    pub g: GaloisLattice,
    pub i_to_g: IntMatrix,
    pub k: GaloisLattice,
    /// Columns are a basis of `K` inside `pi_1(I)`.
    pub k_to_i: IntMatrix,
}

impl PiMap {
    pub fn from_surjection(i: GaloisLattice, g: GaloisLattice, i_to_g: IntMatrix) -> Result<Self> {
        if i_to_g.rows() != g.rank() || i_to_g.cols() != i.rank() {
            return Err(Error::Invalid("map has the wrong shape".into()));
        }
        let f = AbHom::new(FgAbGroup::free(i.rank()), FgAbGroup::free(g.rank()), i_to_g.clone())?;
        if !f.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let (k, k_to_i) = i.kernel_sublattice(&g, &i_to_g)?;
        Ok(PiMap { i, g, i_to_g, k, k_to_i })
    }
}

/// The quotient of `K_{Gamma, tors}` by the images of the local kernels.
#[derive(Clone, Debug)]
pub struct EGroup {
    /// `K_Gamma`.
    pub k_coinvariants: FgAbGroup,
    /// `K_{Gamma, tors}` presented by its invariants.
    pub k_tors: FgAbGroup,
    /// Quotient group, on the same generators as `k_tors`.
    pub group: FgAbGroup,
    pub projection: AbHom,
}

impl EGroup {
    /// Class of a vector of `K` (in `K`-coordinates) that is torsion in `K_Gamma`.
    pub fn class_of(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let t = self.k_coinvariants.torsion_coords(x)?;
        Ok(self.group.canonical(&t))
    }

    pub fn is_zero_class(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.class_of(x)?.iter().all(|c| c == &BigInt::from(0)))
    }
}

pub fn e_group(pi: &PiMap, places: &PlaceSystem) -> Result<EGroup> {
    let kg = pi.k.full_coinvariants();
    let (kt, _) = kg.torsion_subgroup();
    let mut rel_cols = Vec::new();
    for place in &places.places {
        let ak = a_functor_coinv(&pi.k, &place.subgroup);
        let ai = pi.i.coinvariants(&place.subgroup);
        let (ak_grp, ak_gens) = ak;
        let cols = (0..ak_gens.cols())
            .map(|j| pi.k_to_i.mul_vec(&ak_gens.column(j)))
            .collect::<Vec<_>>();
        let to_i = AbHom::new(ak_grp, ai.clone(), IntMatrix::from_columns(ai.ngens(), &cols))?;
        let (_, incl) = to_i.kernel();
        let lattice_gens = ak_gens.mul(&incl.matrix);
        for j in 0..lattice_gens.cols() {
            rel_cols.push(kg.torsion_coords(&lattice_gens.column(j))?);
        }
    }
    let rel = IntMatrix::from_columns(kt.ngens(), &rel_cols);
    let group = FgAbGroup::new(kt.ngens(), kt.relations().hcat(&rel));
    let projection = AbHom::new(kt.clone(), group.clone(), IntMatrix::identity(kt.ngens()))?;
    Ok(EGroup { k_coinvariants: kg, k_tors: kt, group, projection })
}

/// `K_{Gamma_v, tors}` with generators as lattice vectors.
fn a_functor_coinv(k: &GaloisLattice, h: &[usize]) -> (FgAbGroup, IntMatrix) {
    let c = k.coinvariants(h);
    let (t, incl) = c.torsion_subgroup();
    (t, incl.matrix)
}

/// The Kottwitz group: the dual of [`EGroup`].
#[derive(Clone, Debug)]
pub struct KGroup {
    pub e: EGroup,
    pub dual: Dual,
}

impl KGroup {
    pub fn order(&self) -> Result<u64> {
        self.dual.group.order_u64()
    }
}

pub fn kottwitz_k_group(pi: &PiMap, places: &PlaceSystem) -> Result<KGroup> {
    let e = e_group(pi, places)?;
    let dual = dual_and_pairing(&e.group)?;
    Ok(KGroup { e, dual })
}

/// One row of the exactness report for `A(K) -> A(I) -> A(G)`.
#[derive(Clone, Debug, Serialize)]
pub struct TnRow {
    pub place: String,
    pub order_k: String,
    pub order_i: String,
    pub order_g: String,
    pub composite_zero: bool,
    pub exact_in_middle: bool,
}

/// Checks the three-term sequences of local and global groups.
pub fn tn_sequence_check(pi: &PiMap, places: &PlaceSystem) -> Result<Vec<TnRow>> {
    let mut rows = Vec::new();
    for place in &places.places {
        let ak = a_functor(&pi.k, place);
        let ai = a_functor(&pi.i, place);
        let ag = a_functor(&pi.g, place);
        let f = ak.induced(&ai, &pi.k_to_i)?;
        let g = ai.induced(&ag, &pi.i_to_g)?;
        rows.push(row(&place.label, &f, &g)?);
    }
    let glob = |m: &GaloisLattice| {
        let c = m.full_coinvariants();
        let (t, incl) = c.torsion_subgroup();
        (c, t, incl.matrix)
    };
    let (_, tk, gk) = glob(&pi.k);
    let (ci, ti, gi) = glob(&pi.i);
    let (cg, tg, _) = glob(&pi.g);
    let map = |src: &FgAbGroup, gens: &IntMatrix, lin: &IntMatrix, dst: &FgAbGroup, dst_t: &FgAbGroup| -> Result<AbHom> {
        let img = lin.mul(gens);
        let cols = (0..img.cols()).map(|j| dst.torsion_coords(&img.column(j))).collect::<Result<Vec<_>>>()?;
        AbHom::new(src.clone(), dst_t.clone(), IntMatrix::from_columns(dst_t.ngens(), &cols))
    };
    let f = map(&tk, &gk, &pi.k_to_i, &ci, &ti)?;
    let g = map(&ti, &gi, &pi.i_to_g, &cg, &tg)?;
    rows.push(row("global", &f, &g)?);
    Ok(rows)
}

fn row(label: &str, f: &AbHom, g: &AbHom) -> Result<TnRow> {
    let show = |a: &FgAbGroup| a.order().map_or("inf".to_string(), |o| o.to_string());
    let comp = f.compose(g);
    let ker_order = g.kernel().0.order();
    let img_order = f.image().0.order();
    Ok(TnRow {
        place: label.to_string(),
        order_k: show(&f.source),
        order_i: show(&f.target),
        order_g: show(&g.target),
        composite_zero: comp.is_zero(),
        exact_in_middle: ker_order.is_some() && ker_order == img_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FiniteGroup;
    use std::sync::Arc;

    fn quadratic() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn sl2_torus_gives_z2() {
        let g = quadratic();
        let i = GaloisLattice::from_generators(g.clone(), 1, &[(1, IntMatrix::from_i64(1, 1, &[-1]))]).unwrap();
        let gl = GaloisLattice::trivial_action(g.clone(), 0);
        let pi = PiMap::from_surjection(i, gl, IntMatrix::zeros(0, 1)).unwrap();
        let ps = PlaceSystem::new(&g, 1).unwrap();
        let k = kottwitz_k_group(&pi, &ps).unwrap();
        assert_eq!(k.order().unwrap(), 2);
    }

    #[test]
    fn gl2_torus_is_trivial() {
        let g = quadratic();
        let i = GaloisLattice::from_generators(g.clone(), 2, &[(1, IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]))]).unwrap();
        let gl = GaloisLattice::trivial_action(g.clone(), 1);
        let pi = PiMap::from_surjection(i, gl, IntMatrix::from_i64(1, 2, &[1, 1])).unwrap();
        let ps = PlaceSystem::new(&g, 1).unwrap();
        assert_eq!(kottwitz_k_group(&pi, &ps).unwrap().order().unwrap(), 1);
        for r in tn_sequence_check(&pi, &ps).unwrap() {
            assert!(r.composite_zero, "{r:?}");
        }
    }

    #[test]
    fn non_surjective_rejected() {
        let g = quadratic();
        let i = GaloisLattice::trivial_action(g.clone(), 1);
        let gl = GaloisLattice::trivial_action(g, 1);
        assert_eq!(
            PiMap::from_surjection(i, gl, IntMatrix::from_i64(1, 1, &[2])).unwrap_err(),
            Error::NotSurjective
        );
    }
}
