use super::finite_group::FiniteGroup;
use super::lattice::GaloisLattice;
use crate::abelian::{integer_nullspace, solve_integer, AbHom, FgAbGroup, IntMatrix};
use crate::{Error, Result};
use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaceKind {
    Finite,
    Archimedean,
}

/// A place, recorded through its decomposition subgroup.
#[derive(Clone, Debug)]
pub struct Place {
    pub label: String,
    pub kind: PlaceKind,
    pub subgroup: Vec<usize>,
}

/// Decomposition groups of the places that matter for the group computations.
///
/// Finite places run over cyclic subgroups up to conjugacy (every cyclic
/// subgroup occurs as a decomposition group of infinitely many primes);
/// the archimedean place is generated by a chosen complex conjugation.
#[derive(Clone, Debug)]
pub struct PlaceSystem {
    pub places: Vec<Place>,
}

impl PlaceSystem {
    pub fn new(group: &FiniteGroup, conj: usize) -> Result<Self> {
        if group.element_order(conj) > 2 {
            return Err(Error::Invalid("complex conjugation must have order at most 2".into()));
        }
        let mut places = vec![Place {
            label: "inf".into(),
            kind: PlaceKind::Archimedean,
            subgroup: group.generated(&[conj]),
        }];
        for (i, h) in group.cyclic_subgroups_up_to_conjugacy().into_iter().enumerate() {
            places.push(Place { label: format!("v{i}"), kind: PlaceKind::Finite, subgroup: h });
        }
        Ok(PlaceSystem { places })
    }

    pub fn archimedean(&self) -> &Place {
        self.places.iter().find(|p| p.kind == PlaceKind::Archimedean).expect("archimedean place")
    }

    pub fn finite(&self) -> impl Iterator<Item = (usize, &Place)> {
        self.places.iter().enumerate().filter(|(_, p)| p.kind == PlaceKind::Finite)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.places.iter().position(|p| p.label == label)
    }
}

/// Local group attached to a lattice at a place: the torsion of the
/// coinvariants at a finite place, Tate cohomology `H^-1` at infinity.
#[derive(Clone, Debug)]
pub struct LocalA {
    pub kind: PlaceKind,
    pub group: FgAbGroup,
    /// Generators of `group` as lattice vectors.
    pub to_lattice: IntMatrix,
    ambient: FgAbGroup,
}

pub fn a_functor(m: &GaloisLattice, place: &Place) -> LocalA {
    match place.kind {
        PlaceKind::Finite => {
            let c = m.coinvariants(&place.subgroup);
            let (t, incl) = c.torsion_subgroup();
            LocalA { kind: PlaceKind::Finite, group: t, to_lattice: incl.matrix, ambient: c }
        }
        PlaceKind::Archimedean => {
            let iota = place.subgroup.iter().copied().find(|&x| x != 0).unwrap_or(0);
            let id = IntMatrix::identity(m.rank());
            let norm = id.add(m.action(iota));
            let s = integer_nullspace(&norm);
            let quot = FgAbGroup::new(m.rank(), id.sub(m.action(iota)));
            let (sub, _) = quot.subgroup(&s);
            LocalA { kind: PlaceKind::Archimedean, group: sub, to_lattice: s, ambient: quot }
        }
    }
}

impl LocalA {
    /// Coordinates in `self.group` of the class of a lattice vector.
    pub fn coords_of(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        match self.kind {
            PlaceKind::Finite => self.ambient.torsion_coords(x),
            PlaceKind::Archimedean => {
                let k = self.to_lattice.cols();
                let sys = self.to_lattice.hcat(self.ambient.relations());
                let sol = solve_integer(&sys, x)
                    .ok_or_else(|| Error::Invalid("vector is not killed by the norm".into()))?;
                Ok(sol[..k].to_vec())
            }
        }
    }

    /// Homomorphism induced by an equivariant lattice map.
    pub fn induced(&self, dst: &LocalA, f: &IntMatrix) -> Result<AbHom> {
        let img = f.mul(&self.to_lattice);
        let cols = (0..img.cols()).map(|j| dst.coords_of(&img.column(j))).collect::<Result<Vec<_>>>()?;
        AbHom::new(self.group.clone(), dst.group.clone(), IntMatrix::from_columns(dst.group.ngens(), &cols))
    }
}

/// Sum over places `(+)_v A_v(M) -> (M_Gamma)_tors`.
pub fn p_map(m: &GaloisLattice, places: &PlaceSystem) -> Result<AbHom> {
    let glob = m.full_coinvariants();
    let (target, _) = glob.torsion_subgroup();
    let mut source = FgAbGroup::trivial();
    let mut cols = Vec::new();
    for place in &places.places {
        let a = a_functor(m, place);
        source = source.direct_sum(&a.group);
        for j in 0..a.to_lattice.cols() {
            cols.push(glob.torsion_coords(&a.to_lattice.column(j))?);
        }
    }
    AbHom::new(source, target.clone(), IntMatrix::from_columns(target.ngens(), &cols))
}
