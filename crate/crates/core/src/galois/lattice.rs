use super::finite_group::FiniteGroup;
use crate::abelian::{integer_nullspace, solve_integer, FgAbGroup, IntMatrix};
use crate::{Error, Result};
use std::sync::Arc;

/// Free `Z`-module of finite rank with a linear action of a finite group.
#[derive(Clone, Debug)]
pub struct GaloisLattice {
    group: Arc<FiniteGroup>,
    rank: usize,
    mats: Vec<IntMatrix>,
}

impl GaloisLattice {
    /// Takes one matrix per group element and checks the homomorphism law.
    pub fn new(group: Arc<FiniteGroup>, rank: usize, mats: Vec<IntMatrix>) -> Result<Self> {
        if mats.len() != group.order() || mats.iter().any(|m| m.rows() != rank || m.cols() != rank) {
            return Err(Error::Invalid("one rank x rank matrix per group element is required".into()));
        }
        if mats[0] != IntMatrix::identity(rank) {
            return Err(Error::Invalid("identity must act trivially".into()));
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                if mats[group.mul(a, b)] != mats[a].mul(&mats[b]) {
                    return Err(Error::Invalid("action is not a homomorphism".into()));
                }
            }
        }
        Ok(GaloisLattice { group, rank, mats })
    }

    /// Extends an action given on generating elements to the whole group.
    pub fn from_generators(group: Arc<FiniteGroup>, rank: usize, gens: &[(usize, IntMatrix)]) -> Result<Self> {
        let n = group.order();
        let mut mats: Vec<Option<IntMatrix>> = vec![None; n];
        mats[0] = Some(IntMatrix::identity(rank));
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for (g, m) in gens {
                let y = group.mul(x, *g);
                let my = mats[x].as_ref().unwrap().mul(m);
                match &mats[y] {
                    Some(existing) if *existing != my => {
                        return Err(Error::Invalid("generator matrices violate the group relations".into()))
                    }
                    Some(_) => {}
                    None => {
                        mats[y] = Some(my);
                        frontier.push(y);
                    }
                }
            }
        }
        let mats: Option<Vec<IntMatrix>> = mats.into_iter().collect();
        let mats = mats.ok_or_else(|| Error::Invalid("listed elements do not generate the group".into()))?;
        Self::new(group, rank, mats)
    }

    pub fn trivial_action(group: Arc<FiniteGroup>, rank: usize) -> Self {
        let mats = vec![IntMatrix::identity(rank); group.order()];
        GaloisLattice { group, rank, mats }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.mats[g]
    }

    /// Coinvariants `M_H = M / span{(1 - h) m}` for a subgroup `H`.
    pub fn coinvariants(&self, h: &[usize]) -> FgAbGroup {
        let id = IntMatrix::identity(self.rank);
        let mut rel = IntMatrix::zeros(self.rank, 0);
        for &x in h {
            if x != 0 {
                rel = rel.hcat(&id.sub(&self.mats[x]));
            }
        }
        FgAbGroup::new(self.rank, rel)
    }

    /// Coinvariants under the whole group.
    pub fn full_coinvariants(&self) -> FgAbGroup {
        let all: Vec<usize> = (0..self.group.order()).collect();
        self.coinvariants(&all)
    }

    pub fn direct_sum(&self, other: &GaloisLattice) -> Result<GaloisLattice> {
        if self.group != other.group {
            return Err(Error::Invalid("direct sum needs a common group".into()));
        }
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| a.block_diag(b)).collect();
        Ok(GaloisLattice { group: self.group.clone(), rank: self.rank + other.rank, mats })
    }

    /// Whether `map: self -> target` (a `target.rank x self.rank` matrix) commutes with the action.
    pub fn is_equivariant(&self, target: &GaloisLattice, map: &IntMatrix) -> bool {
        (0..self.group.order()).all(|g| map.mul(&self.mats[g]) == target.mats[g].mul(map))
    }

    /// Kernel of an equivariant map, as a lattice with its inclusion matrix.
    pub fn kernel_sublattice(&self, target: &GaloisLattice, map: &IntMatrix) -> Result<(GaloisLattice, IntMatrix)> {
        if !self.is_equivariant(target, map) {
            return Err(Error::Invalid("map is not equivariant".into()));
        }
        let s = integer_nullspace(map);
        let k = s.cols();
        let mut mats = Vec::with_capacity(self.group.order());
        for g in 0..self.group.order() {
            let img = self.mats[g].mul(&s);
            let cols: Vec<_> = (0..k)
                .map(|j| solve_integer(&s, &img.column(j)).expect("kernel is stable"))
                .collect();
            mats.push(IntMatrix::from_columns(k, &cols));
        }
        Ok((GaloisLattice::new(self.group.clone(), k, mats)?, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn swap_lattice() -> GaloisLattice {
        let g = Arc::new(FiniteGroup::cyclic(2));
        GaloisLattice::from_generators(g, 2, &[(1, IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]))]).unwrap()
    }

    #[test]
    fn coinvariants_of_induced_and_sign() {
        let m = swap_lattice();
        let c = m.full_coinvariants();
        assert_eq!(c.free_rank(), 1);
        assert!(c.order().is_none());
        let g = Arc::new(FiniteGroup::cyclic(2));
        let sign = GaloisLattice::from_generators(g, 1, &[(1, IntMatrix::from_i64(1, 1, &[-1]))]).unwrap();
        assert_eq!(sign.full_coinvariants().order(), Some(BigInt::from(2)));
        assert_eq!(sign.coinvariants(&[0]).free_rank(), 1);
    }

    #[test]
    fn kernel_of_sum_map() {
        let m = swap_lattice();
        let z = GaloisLattice::trivial_action(m.group().clone(), 1);
        let (k, incl) = m.kernel_sublattice(&z, &IntMatrix::from_i64(1, 2, &[1, 1])).unwrap();
        assert_eq!(k.rank(), 1);
        assert_eq!(k.action(1), &IntMatrix::from_i64(1, 1, &[-1]));
        assert_eq!(incl.cols(), 1);
    }

    #[test]
    fn rejects_bad_action() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let bad = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        assert!(GaloisLattice::from_generators(g, 2, &[(1, bad)]).is_err());
    }
}
