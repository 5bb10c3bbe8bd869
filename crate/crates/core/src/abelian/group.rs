use super::matrix::IntMatrix;
use super::snf::{integer_nullspace, smith_normal_form, Smith};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

/// Finitely generated abelian group `Z^n / span(relations)`.
///
/// Relations are the columns of an `n x k` matrix. The Smith form is
/// computed lazily and cached.
#[derive(Clone, Debug)]
pub struct FgAbGroup {
    ngens: usize,
    relations: IntMatrix,
    smith: OnceLock<Smith>,
}

impl FgAbGroup {
    pub fn new(ngens: usize, relations: IntMatrix) -> Self {
        assert_eq!(relations.rows(), ngens, "relation columns must have one entry per generator");
        FgAbGroup { ngens, relations, smith: OnceLock::new() }
    }

    pub fn free(n: usize) -> Self {
        Self::new(n, IntMatrix::zeros(n, 0))
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn cyclic(n: i64) -> Self {
        Self::from_invariants(&[n])
    }

    /// `Z/d_1 + ... + Z/d_k`; an invariant of 0 gives a copy of `Z`.
    pub fn from_invariants(ds: &[i64]) -> Self {
        let k = ds.len();
        let mut r = IntMatrix::zeros(k, k);
        for (i, &d) in ds.iter().enumerate() {
            r.set(i, i, BigInt::from(d));
        }
        Self::new(k, r)
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn smith(&self) -> &Smith {
        self.smith.get_or_init(|| smith_normal_form(&self.relations))
    }

    /// Diagonal entry attached to SNF coordinate `i` (0 means a free coordinate).
    fn modulus(&self, i: usize) -> BigInt {
        let d = &self.smith().d;
        if i < d.rows().min(d.cols()) { d.get(i, i).clone() } else { BigInt::zero() }
    }

    /// Nontrivial torsion invariants (each > 1, dividing the next) and free rank.
    pub fn invariants(&self) -> (Vec<BigInt>, usize) {
        let mut tors = Vec::new();
        let mut free = 0;
        for i in 0..self.ngens {
            let d = self.modulus(i);
            if d.is_zero() {
                free += 1;
            } else if !d.is_one() {
                tors.push(d);
            }
        }
        (tors, free)
    }

    pub fn free_rank(&self) -> usize {
        self.invariants().1
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        let (t, f) = self.invariants();
        t.is_empty() && f == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        let (t, f) = self.invariants();
        (f == 0).then(|| t.iter().product())
    }

    /// Order as `u64`, erroring on infinite or huge groups.
    pub fn order_u64(&self) -> Result<u64> {
        self.order().ok_or(Error::InfiniteGroup)?.to_u64().ok_or(Error::CapExceeded(u64::MAX as usize))
    }

    /// Canonical SNF coordinates of an element: torsion coordinates reduced
    /// into `[0, d_i)`, free coordinates untouched.
    pub fn canonical(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.ngens);
        let y = self.smith().u.mul_vec(x);
        y.into_iter()
            .enumerate()
            .map(|(i, yi)| {
                let d = self.modulus(i);
                if d.is_zero() { yi } else { yi.mod_floor(&d) }
            })
            .collect()
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.canonical(x).iter().all(|c| c.is_zero())
    }

    pub fn equal(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        let diff: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero(&diff)
    }

    /// Lifts canonical SNF coordinates back to generator coordinates.
    pub fn from_canonical(&self, y: &[BigInt]) -> Vec<BigInt> {
        self.smith().u_inv.mul_vec(y)
    }

    /// Order of an element, `None` if it has infinite order.
    pub fn element_order(&self, x: &[BigInt]) -> Option<BigInt> {
        let y = self.canonical(x);
        let mut ord = BigInt::one();
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let d = self.modulus(i);
            if d.is_zero() {
                return None;
            }
            let o = &d / d.gcd(yi);
            ord = ord.lcm(&o);
        }
        Some(ord)
    }

    /// All elements of a finite group, in generator coordinates.
    pub fn elements(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        let mods: Vec<BigInt> = (0..self.ngens).map(|i| self.modulus(i)).collect();
        let mut out = Vec::new();
        let mut y = vec![BigInt::zero(); self.ngens];
        loop {
            out.push(self.from_canonical(&y));
            let mut i = 0;
            loop {
                if i == self.ngens {
                    return Ok(out);
                }
                y[i] += 1;
                if y[i] < mods[i] {
                    break;
                }
                y[i] = BigInt::zero();
                i += 1;
            }
        }
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        FgAbGroup::new(self.ngens + other.ngens, self.relations.block_diag(&other.relations))
    }

    /// Subgroup generated by the columns of `gens`, with its inclusion.
    pub fn subgroup(&self, gens: &IntMatrix) -> (FgAbGroup, AbHom) {
        assert_eq!(gens.rows(), self.ngens);
        let k = gens.cols();
        let null = integer_nullspace(&gens.hcat(&self.relations));
        let rel = null.row_range(0, k);
        let sub = FgAbGroup::new(k, rel);
        let incl = AbHom { source: sub.clone(), target: self.clone(), matrix: gens.clone() };
        (sub, incl)
    }

    /// Torsion subgroup, presented by its invariants, with its inclusion.
    pub fn torsion_subgroup(&self) -> (FgAbGroup, AbHom) {
        let s = self.smith();
        let mut ds = Vec::new();
        let mut cols = Vec::new();
        for i in 0..self.ngens {
            let d = self.modulus(i);
            if !d.is_zero() && !d.is_one() {
                ds.push(d);
                cols.push(s.u_inv.column(i));
            }
        }
        let mut rel = IntMatrix::zeros(ds.len(), ds.len());
        for (i, d) in ds.iter().enumerate() {
            rel.set(i, i, d.clone());
        }
        let t = FgAbGroup::new(ds.len(), rel);
        let incl = AbHom { source: t.clone(), target: self.clone(), matrix: IntMatrix::from_columns(self.ngens, &cols) };
        (t, incl)
    }

    /// Coordinates of a torsion element in the presentation returned by
    /// [`FgAbGroup::torsion_subgroup`]. Errors if `x` has infinite order.
    pub fn torsion_coords(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let y = self.canonical(x);
        let mut out = Vec::new();
        for (i, yi) in y.into_iter().enumerate() {
            let d = self.modulus(i);
            if d.is_zero() {
                if !yi.is_zero() {
                    return Err(Error::Invalid("element of infinite order".into()));
                }
            } else if !d.is_one() {
                out.push(yi);
            }
        }
        Ok(out)
    }
}

/// Homomorphism of finitely generated abelian groups given on generators.
#[derive(Clone, Debug)]
pub struct AbHom {
    pub source: FgAbGroup,
    pub target: FgAbGroup,
    /// `target.ngens x source.ngens`.
    pub matrix: IntMatrix,
}

impl AbHom {
    /// Checks that every relation of the source maps to zero.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::Invalid("homomorphism matrix has the wrong shape".into()));
        }
        let img = matrix.mul(source.relations());
        for j in 0..img.cols() {
            if !target.is_zero(&img.column(j)) {
                return Err(Error::Invalid("homomorphism is not well defined on relations".into()));
            }
        }
        Ok(AbHom { source, target, matrix })
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.mul_vec(x)
    }

    pub fn compose(&self, after: &AbHom) -> AbHom {
        AbHom { source: self.source.clone(), target: after.target.clone(), matrix: after.matrix.mul(&self.matrix) }
    }

    /// Cokernel with its projection from the target.
    pub fn cokernel(&self) -> (FgAbGroup, AbHom) {
        let n = self.target.ngens();
        let q = FgAbGroup::new(n, self.target.relations().hcat(&self.matrix));
        let proj = AbHom { source: self.target.clone(), target: q.clone(), matrix: IntMatrix::identity(n) };
        (q, proj)
    }

    /// Kernel with its inclusion into the source.
    pub fn kernel(&self) -> (FgAbGroup, AbHom) {
        let s = self.source.ngens();
        let null = integer_nullspace(&self.matrix.hcat(self.target.relations()));
        let gens = null.row_range(0, s);
        self.source.subgroup(&gens)
    }

    /// Image as a subgroup of the target.
    pub fn image(&self) -> (FgAbGroup, AbHom) {
        self.target.subgroup(&self.matrix)
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero(&self.matrix.column(j)))
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_trivial()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_trivial()
    }
}

/// Largest absolute value of an entry, handy for test generators.
pub fn max_abs(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::matrix::bigvec;

    #[test]
    fn invariants_of_presentation() {
        // Z^2 / <(2,0),(0,4),(2,2)> has invariants (2, 2).
        let g = FgAbGroup::new(2, IntMatrix::from_rows(&[vec![2, 0, 2], vec![0, 4, 2]]));
        let (t, f) = g.invariants();
        assert_eq!(f, 0);
        assert_eq!(g.order().unwrap(), BigInt::from(4));
        assert_eq!(t.iter().product::<BigInt>(), BigInt::from(4));
        assert_eq!(g.elements().unwrap().len(), 4);
    }

    #[test]
    fn kernel_cokernel_of_multiplication() {
        let z = FgAbGroup::free(1);
        let z6 = FgAbGroup::cyclic(6);
        let f = AbHom::new(z.clone(), z6.clone(), IntMatrix::from_i64(1, 1, &[2])).unwrap();
        assert_eq!(f.cokernel().0.order().unwrap(), BigInt::from(2));
        let (k, incl) = f.kernel();
        assert_eq!(k.free_rank(), 1);
        assert!(f.matrix.mul(&incl.matrix).column(0)[0].is_multiple_of(&BigInt::from(6)));
        let g = AbHom::new(z6.clone(), z6.clone(), IntMatrix::from_i64(1, 1, &[3])).unwrap();
        assert_eq!(g.kernel().0.order().unwrap(), BigInt::from(3));
        assert!(AbHom::new(FgAbGroup::cyclic(4), z6, IntMatrix::from_i64(1, 1, &[1])).is_err());
    }

    #[test]
    fn torsion_part() {
        let g = FgAbGroup::from_invariants(&[0, 6, 4]);
        let (t, incl) = g.torsion_subgroup();
        assert_eq!(t.order().unwrap(), BigInt::from(24));
        for j in 0..incl.matrix.cols() {
            assert!(g.element_order(&incl.matrix.column(j)).is_some());
        }
        assert!(g.torsion_coords(&bigvec(&[1, 0, 0])).is_err());
    }
}
