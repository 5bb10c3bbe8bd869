use crate::abelian::{FgAbGroup, IntMatrix};
use crate::galois::{FiniteGroup, GaloisLattice};
use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

/// Shape of a root datum, used to decide which invariants are certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DatumKind {
    Gl(usize),
    Sl(usize),
    Pgl(usize),
    Gsp4,
    /// Kernel of the norm from a quadratic field.
    NormOneTorus,
    /// Restriction of scalars of `G_m` from a quadratic field.
    InducedTorus,
    SplitTorus(usize),
    Product(Vec<(DatumKind, usize)>),
    Other,
}

impl DatumKind {
    /// Groups for which `ker^1(Q, Z(G^))` is known to vanish.
    pub fn tamagawa_certified(&self) -> bool {
        match self {
            DatumKind::Other => false,
            DatumKind::Product(fs) => fs.iter().all(|(k, _)| k.tamagawa_certified()),
            _ => true,
        }
    }
}

/// Small dense integer matrix used for Weyl group elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallMat {
    pub n: usize,
    pub data: Vec<i64>,
}

impl SmallMat {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        SmallMat { n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, o: &SmallMat) -> SmallMat {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a != 0 {
                    for j in 0..n {
                        data[i * n + j] += a * o.get(k, j);
                    }
                }
            }
        }
        SmallMat { n, data }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    pub fn transpose(&self) -> SmallMat {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        SmallMat { n, data }
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64(self.n, self.n, &self.data)
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A based root datum `(X^*, simple roots, X_*, simple coroots)` with an
/// action of a finite Galois quotient on `X_*`.
///
/// Both lattices are `Z^rank` with the standard pairing.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub name: String,
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    pub galois: GaloisLattice,
    pub kind: DatumKind,
}

/// A root with its coroot and its coefficients in the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootPair {
    pub root: Vec<i64>,
    pub coroot: Vec<i64>,
    pub positive: bool,
}

impl RootDatum {
    pub fn new(
        name: &str,
        rank: usize,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
        galois: GaloisLattice,
        kind: DatumKind,
    ) -> Result<Self> {
        if simple_roots.len() != simple_coroots.len()
            || simple_roots.iter().chain(&simple_coroots).any(|v| v.len() != rank)
            || galois.rank() != rank
        {
            return Err(Error::Invalid("root datum vectors have inconsistent lengths".into()));
        }
        let rd = RootDatum { name: name.to_string(), rank, simple_roots, simple_coroots, galois, kind };
        let a = rd.cartan();
        let l = a.len();
        for i in 0..l {
            if a[i][i] != 2 {
                return Err(Error::Invalid("simple root does not pair to 2 with its coroot".into()));
            }
            for j in 0..l {
                if i != j && (a[i][j] > 0 || (a[i][j] == 0) != (a[j][i] == 0)) {
                    return Err(Error::Invalid("not a generalized Cartan matrix".into()));
                }
            }
        }
        Ok(rd)
    }

    /// `A[i][j] = <alpha_i, alpha_j^vee>`.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        self.simple_roots
            .iter()
            .map(|a| self.simple_coroots.iter().map(|c| dot(a, c)).collect())
            .collect()
    }

    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn is_split(&self) -> bool {
        (0..self.galois.group().order()).all(|g| self.galois.action(g) == &IntMatrix::identity(self.rank))
    }

    /// Reflection `x -> x - <x, alpha_i^vee> alpha_i` on `X^*`.
    pub fn reflection(&self, i: usize) -> SmallMat {
        let r = self.rank;
        let mut m = SmallMat::identity(r);
        for a in 0..r {
            for b in 0..r {
                m.data[a * r + b] -= self.simple_roots[i][a] * self.simple_coroots[i][b];
            }
        }
        m
    }

    /// Weyl group as matrices acting on `X^*` (column vectors).
    pub fn weyl_group(&self) -> Result<Vec<SmallMat>> {
        let gens: Vec<SmallMat> = (0..self.semisimple_rank()).map(|i| self.reflection(i)).collect();
        let id = SmallMat::identity(self.rank);
        let mut seen: BTreeSet<SmallMat> = BTreeSet::from([id.clone()]);
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            for g in &gens {
                let w = out[i].mul(g);
                if seen.insert(w.clone()) {
                    out.push(w);
                    if out.len() > 10_000 {
                        return Err(Error::CapExceeded(10_000));
                    }
                }
            }
            i += 1;
        }
        Ok(out)
    }

    /// All roots with their coroots, generated from the simple ones.
    pub fn roots(&self) -> Result<Vec<RootPair>> {
        let l = self.semisimple_rank();
        let a = self.cartan();
        // Work in simple-root / simple-coroot coordinates.
        let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        let mut queue: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        for i in 0..l {
            let mut e = vec![0; l];
            e[i] = 1;
            seen.insert(e.clone(), e.clone());
            queue.push((e.clone(), e));
        }
        while let Some((b, bc)) = queue.pop() {
            for i in 0..l {
                let pb: i64 = (0..l).map(|j| b[j] * a[j][i]).sum();
                let pc: i64 = (0..l).map(|j| bc[j] * a[i][j]).sum();
                let mut nb = b.clone();
                nb[i] -= pb;
                let mut nc = bc.clone();
                nc[i] -= pc;
                if !seen.contains_key(&nb) {
                    if seen.len() > 10_000 {
                        return Err(Error::CapExceeded(10_000));
                    }
                    seen.insert(nb.clone(), nc.clone());
                    queue.push((nb, nc));
                }
            }
        }
        let mut out: Vec<RootPair> = seen
            .into_iter()
            .map(|(b, bc)| {
                let root = (0..self.rank).map(|k| (0..l).map(|j| b[j] * self.simple_roots[j][k]).sum()).collect();
                let coroot = (0..self.rank).map(|k| (0..l).map(|j| bc[j] * self.simple_coroots[j][k]).sum()).collect();
                RootPair { root, coroot, positive: b.iter().all(|&x| x >= 0) }
            })
            .collect();
        out.sort_by(|x, y| (!x.positive, &x.root).cmp(&(!y.positive, &y.root)));
        Ok(out)
    }

    /// `pi_1 = X_* / (coroot lattice)` with the induced Galois action.
    pub fn pi1(&self) -> Pi1 {
        let cols: Vec<_> = self.simple_coroots.iter().map(|c| crate::abelian::bigvec(c)).collect();
        let coroots = IntMatrix::from_columns(self.rank, &cols);
        Pi1 { coroots: coroots.clone(), group: FgAbGroup::new(self.rank, coroots), lattice: self.galois.clone() }
    }

    /// Product root datum on the direct sum of the lattices.
    pub fn product(&self, other: &RootDatum) -> RootDatum {
        let (g1, g2) = (self.galois.group(), other.galois.group());
        let group = Arc::new(g1.direct_product(g2));
        let m = g2.order();
        let mats = (0..group.order())
            .map(|x| self.galois.action(x / m).block_diag(other.galois.action(x % m)))
            .collect();
        let galois = GaloisLattice::new(group, self.rank + other.rank, mats).expect("product action");
        let pad = |v: &Vec<i64>, left: usize, right: usize| {
            let mut out = vec![0; left];
            out.extend(v);
            out.extend(vec![0; right]);
            out
        };
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        for (a, c) in self.simple_roots.iter().zip(&self.simple_coroots) {
            roots.push(pad(a, 0, other.rank));
            coroots.push(pad(c, 0, other.rank));
        }
        for (a, c) in other.simple_roots.iter().zip(&other.simple_coroots) {
            roots.push(pad(a, self.rank, 0));
            coroots.push(pad(c, self.rank, 0));
        }
        let factors = |d: &RootDatum| match &d.kind {
            DatumKind::Product(fs) => fs.clone(),
            k => vec![(k.clone(), d.rank)],
        };
        let mut fs = factors(self);
        fs.extend(factors(other));
        RootDatum {
            name: format!("{} x {}", self.name, other.name),
            rank: self.rank + other.rank,
            simple_roots: roots,
            simple_coroots: coroots,
            galois,
            kind: DatumKind::Product(fs),
        }
    }
}

/// The algebraic fundamental group `X_* / (coroot lattice)`.
#[derive(Clone, Debug)]
pub struct Pi1 {
    pub coroots: IntMatrix,
    pub group: FgAbGroup,
    /// Galois action on `X_*`, which descends to the quotient.
    pub lattice: GaloisLattice,
}

impl Pi1 {
    /// `(pi_1)_H` for a subgroup `H` of the Galois quotient.
    pub fn coinvariants(&self, h: &[usize]) -> FgAbGroup {
        let c = self.lattice.coinvariants(h);
        FgAbGroup::new(self.lattice.rank(), self.coroots.hcat(c.relations()))
    }

    /// When `pi_1` is torsion free, returns it as a lattice together with
    /// the projection matrix from `X_*`.
    pub fn to_lattice(&self) -> Result<(GaloisLattice, IntMatrix)> {
        let s = self.group.smith();
        let (tors, free) = self.group.invariants();
        if !tors.is_empty() {
            return Err(Error::Invalid("pi_1 has torsion".into()));
        }
        let r = self.lattice.rank();
        let start = r - free;
        let proj = s.u.row_range(start, r);
        let basis = s.u_inv.column_range(start, r);
        let group = self.lattice.group().clone();
        let mats = (0..group.order()).map(|g| proj.mul(self.lattice.action(g)).mul(&basis)).collect();
        Ok((GaloisLattice::new(group, free, mats)?, proj))
    }
}

/// `pi_0(Z(G^)^Gamma)` through its character group `(pi_1)_{Gamma, tors}`.
pub fn component_group_of_center_dual(rd: &RootDatum) -> FgAbGroup {
    let all: Vec<usize> = (0..rd.galois.group().order()).collect();
    rd.pi1().coinvariants(&all).torsion_subgroup().0
}

/// `tau(G) = |pi_0(Z(G^)^Gamma)| / |ker^1(Q, Z(G^))|`; the second factor is
/// only known to be trivial for the certified kinds.
pub fn tamagawa_number(rd: &RootDatum) -> Result<u64> {
    if !rd.kind.tamagawa_certified() {
        return Err(Error::TamagawaNotCertified(rd.name.clone()));
    }
    component_group_of_center_dual(rd).order_u64()
}

pub(crate) fn trivial_galois(rank: usize) -> GaloisLattice {
    GaloisLattice::trivial_action(Arc::new(FiniteGroup::trivial()), rank)
}
