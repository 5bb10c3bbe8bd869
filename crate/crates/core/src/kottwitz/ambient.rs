use crate::abelian::{bigvec, IntMatrix};
use crate::galois::text::LatticeFile;
use crate::galois::{kottwitz_k_group, FiniteGroup, GaloisLattice, KGroup, PiMap, PlaceKind, PlaceSystem};
use crate::{Error, Result};
use num_bigint::BigInt;
use std::sync::Arc;

/// `pi_1(I_0) -> pi_1(G)` with its places, the place above `p`, and a lift of the Hodge class.
#[derive(Clone, Debug)]
pub struct AmbientData {
    pub name: String,
    pub pi: PiMap,
    pub places: PlaceSystem,
    /// Index into `places` of the place above `p`.
    pub p_place: usize,
    /// Lift `mu` of `[mu]_X` to `pi_1(I_0)`.
    pub mu_lift: Vec<BigInt>,
    pub kgroup: KGroup,
}

impl AmbientData {
    pub fn new(name: &str, pi: PiMap, places: PlaceSystem, p_label: &str, mu_lift: Vec<BigInt>) -> Result<Self> {
        let p_place = places
            .index_of(p_label)
            .filter(|&i| places.places[i].kind == PlaceKind::Finite)
            .ok_or_else(|| Error::Invalid(format!("no finite place '{p_label}'")))?;
        if mu_lift.len() != pi.i.rank() {
            return Err(Error::Invalid("Hodge lift has the wrong rank".into()));
        }
        let kgroup = kottwitz_k_group(&pi, &places)?;
        Ok(AmbientData { name: name.to_string(), pi, places, p_place, mu_lift, kgroup })
    }

    /// `[mu]_X` in `pi_1(G)`.
    pub fn mu_class(&self) -> Vec<BigInt> {
        self.pi.i_to_g.mul_vec(&self.mu_lift)
    }

    pub fn with_mu(&self, mu_lift: Vec<BigInt>) -> Result<Self> {
        if mu_lift.len() != self.pi.i.rank() {
            return Err(Error::Invalid("Hodge lift has the wrong rank".into()));
        }
        Ok(AmbientData { mu_lift, ..self.clone() })
    }

    pub fn k_order(&self) -> Result<u64> {
        self.kgroup.order()
    }

    /// Elliptic torus of `GL_2` split by a quadratic field, `mu = (1, 0)`.
    /// `p_inert` selects whether `p` is inert or split in that field.
    pub fn gl2_elliptic(p_inert: bool) -> Result<Self> {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let i = GaloisLattice::from_generators(g.clone(), 2, &[(1, IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]))])?;
        let target = GaloisLattice::trivial_action(g.clone(), 1);
        let pi = PiMap::from_surjection(i, target, IntMatrix::from_rows(&[vec![1, 1]]))?;
        let places = PlaceSystem::new(&g, 1)?;
        let label = p_place_label(&places, p_inert);
        Self::new("gl2", pi, places, &label, bigvec(&[1, 0]))
    }

    /// Elliptic torus of `SL_2`; `[mu]_X` is necessarily trivial.
    pub fn sl2_elliptic(p_inert: bool) -> Result<Self> {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let i = GaloisLattice::from_generators(g.clone(), 1, &[(1, IntMatrix::from_i64(1, 1, &[-1]))])?;
        let target = GaloisLattice::trivial_action(g.clone(), 0);
        let pi = PiMap::from_surjection(i, target, IntMatrix::zeros(0, 1))?;
        let places = PlaceSystem::new(&g, 1)?;
        let label = p_place_label(&places, p_inert);
        Self::new("sl2", pi, places, &label, bigvec(&[0]))
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "gl2" | "gl2-inert" => Self::gl2_elliptic(true),
            "gl2-split" => Self::gl2_elliptic(false),
            "sl2" | "sl2-inert" => Self::sl2_elliptic(true),
            "sl2-split" => Self::sl2_elliptic(false),
            _ => Err(Error::PresetOnly(name.to_string())),
        }
    }

    /// Ambient data from a lattice file with lattices `I`, `G` and `map I G`.
    pub fn from_lattice_file(name: &str, file: &LatticeFile, p_label: &str, mu_lift: &[i64]) -> Result<Self> {
        let pi = file.pi_map()?;
        let places = PlaceSystem::new(&file.group, file.conj)?;
        Self::new(name, pi, places, p_label, bigvec(mu_lift))
    }
}

/// Label of the finite place whose decomposition group is everything (inert)
/// or trivial (split).
fn p_place_label(places: &PlaceSystem, inert: bool) -> String {
    places
        .finite()
        .find(|(_, pl)| (pl.subgroup.len() > 1) == inert)
        .map(|(_, pl)| pl.label.clone())
        .expect("quadratic place system has split and inert places")
}
