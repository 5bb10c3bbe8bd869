use super::datum::{dot, tamagawa_number, DatumKind, RootDatum, RootPair, SmallMat};
use crate::abelian::IntMatrix;
use crate::galois::{FiniteGroup, GaloisLattice};
use crate::{Error, Result};
use num_rational::Ratio;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// An elliptic endoscopic datum of a split group, described combinatorially.
///
/// `s = s_numerators / s_denominator` lies in `X^* (x) Q/Z`, i.e. in the dual
/// torus. The twist is a Weyl element (normalising the roots of `H`) through
/// which a quadratic character acts on `H^`.
#[derive(Clone, Debug)]
pub struct EndoscopicDatum {
    pub s_numerators: Vec<i64>,
    pub s_denominator: i64,
    pub h_roots: Vec<RootPair>,
    pub twist: SmallMat,
    pub twisted: bool,
    pub elliptic: bool,
    /// `|Out(e)|`.
    pub out_order: u64,
    pub h: RootDatum,
}

impl EndoscopicDatum {
    pub fn label(&self) -> String {
        if self.twisted {
            format!("{} [quadratic twist]", self.h.name)
        } else {
            self.h.name.clone()
        }
    }
}

struct Ctx<'a> {
    rd: &'a RootDatum,
    roots: Vec<RootPair>,
    weyl: Vec<SmallMat>,
    n: i64,
}

impl Ctx<'_> {
    fn act(&self, w: &SmallMat, v: &[i64]) -> Vec<i64> {
        w.apply(v).into_iter().map(|x| x.rem_euclid(self.n)).collect()
    }

    /// Class of `s` modulo the centre of the dual group.
    fn center_key(&self, v: &[i64]) -> Vec<i64> {
        self.rd.simple_coroots.iter().map(|c| dot(v, c).rem_euclid(self.n)).collect()
    }

    fn h_roots(&self, v: &[i64]) -> Vec<RootPair> {
        self.roots.iter().filter(|r| dot(v, &r.coroot).rem_euclid(self.n) == 0).cloned().collect()
    }

    fn reflection(&self, r: &RootPair) -> SmallMat {
        let k = self.rd.rank;
        let mut m = SmallMat::identity(k);
        for a in 0..k {
            for b in 0..k {
                m.data[a * k + b] -= r.root[a] * r.coroot[b];
            }
        }
        m
    }

    fn weyl_subgroup(&self, hr: &[RootPair]) -> BTreeSet<SmallMat> {
        let gens: Vec<SmallMat> = hr.iter().map(|r| self.reflection(r)).collect();
        let mut set = BTreeSet::from([SmallMat::identity(self.rd.rank)]);
        let mut frontier: Vec<SmallMat> = set.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = x.mul(g);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    fn inverse(&self, w: &SmallMat) -> SmallMat {
        self.weyl.iter().find(|u| u.mul(w) == SmallMat::identity(self.rd.rank)).cloned().expect("Weyl inverse")
    }

    /// Representative of `tau W_H` that preserves the positive roots of `H`.
    fn normalized_twist(&self, tau: &SmallMat, wh: &BTreeSet<SmallMat>, hr: &[RootPair]) -> SmallMat {
        let pos: BTreeSet<Vec<i64>> = hr.iter().filter(|r| r.positive).map(|r| r.root.clone()).collect();
        wh.iter()
            .map(|u| tau.mul(u))
            .find(|t| pos.iter().all(|r| pos.contains(&t.apply(r))))
            .expect("twist class preserves a positive system")
    }

    fn is_elliptic(&self, hr: &[RootPair], tau: &SmallMat) -> bool {
        let k = self.rd.rank;
        let mut rows: Vec<i64> = Vec::new();
        let mut nrows = 0;
        for r in hr {
            rows.extend(&r.coroot);
            nrows += 1;
        }
        for i in 0..k {
            for j in 0..k {
                rows.push(tau.get(i, j) - i64::from(i == j));
            }
            nrows += 1;
        }
        let dim_h = k - rank_of(nrows, k, &rows);
        let all: Vec<i64> = self.roots.iter().flat_map(|r| r.coroot.clone()).collect();
        let dim_g = k - rank_of(self.roots.len(), k, &all);
        dim_h == dim_g
    }

    /// Whether some representative `s z`, `z` central, is fixed exactly by `tau`.
    fn exactly_invariant(&self, v: &[i64], tau: &SmallMat) -> bool {
        let m = 2 * self.n;
        let k = self.rd.rank;
        let mut u = vec![0i64; k];
        loop {
            let central = self.roots.iter().all(|r| dot(&u, &r.coroot).rem_euclid(m) == 0);
            if central {
                let x: Vec<i64> = v.iter().zip(&u).map(|(a, b)| 2 * a + b).collect();
                let tx = tau.apply(&x);
                if tx.iter().zip(&x).all(|(a, b)| (a - b).rem_euclid(m) == 0) {
                    return true;
                }
            }
            let mut i = 0;
            loop {
                if i == k {
                    return false;
                }
                u[i] += 1;
                if u[i] < m {
                    break;
                }
                u[i] = 0;
                i += 1;
            }
        }
    }

    fn canonical_key(&self, v: &[i64], tau: &SmallMat) -> (Vec<i64>, Vec<i64>) {
        self.weyl
            .iter()
            .map(|w| {
                let wv = self.act(w, v);
                let hr = self.h_roots(&wv);
                let wh = self.weyl_subgroup(&hr);
                let conj = w.mul(tau).mul(&self.inverse(w));
                let tkey = wh.iter().map(|u| conj.mul(u).data).min().unwrap();
                (self.center_key(&wv), tkey)
            })
            .min()
            .unwrap()
    }
}

fn rank_of(nrows: usize, ncols: usize, entries: &[i64]) -> usize {
    if nrows == 0 {
        return 0;
    }
    crate::abelian::smith_normal_form(&IntMatrix::from_i64(nrows, ncols, entries)).rank()
}

/// Enumerates elliptic endoscopic data of a split preset group, searching
/// semisimple `s` of order dividing `torsion_bound`.
pub fn enumerate_elliptic_endoscopy(rd: &RootDatum, torsion_bound: i64) -> Result<Vec<EndoscopicDatum>> {
    if rd.kind == DatumKind::Other {
        return Err(Error::PresetOnly(rd.name.clone()));
    }
    if !rd.is_split() {
        return Err(Error::Unsupported("endoscopy of non-split groups".into()));
    }
    if torsion_bound < 1 || (torsion_bound as u64).pow(rd.rank as u32) > 2_000_000 {
        return Err(Error::CapExceeded(2_000_000));
    }
    let ctx = Ctx { rd, roots: rd.roots()?, weyl: rd.weyl_group()?, n: torsion_bound };
    let k = rd.rank;
    let mut seen_s: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut found: BTreeMap<(Vec<i64>, Vec<i64>), EndoscopicDatum> = BTreeMap::new();
    let mut v = vec![0i64; k];
    loop {
        let key = ctx.center_key(&v);
        if seen_s.insert(key.clone()) {
            let hr = ctx.h_roots(&v);
            let wh = ctx.weyl_subgroup(&hr);
            let stab: Vec<&SmallMat> = ctx.weyl.iter().filter(|w| ctx.center_key(&ctx.act(w, &v)) == key).collect();
            let mut classes: BTreeSet<Vec<i64>> = BTreeSet::new();
            for tau in &stab {
                let tkey = wh.iter().map(|u| tau.mul(u).data).min().unwrap();
                if !classes.insert(tkey) || !wh.contains(&tau.mul(tau)) {
                    continue;
                }
                let tau = ctx.normalized_twist(tau, &wh, &hr);
                if !ctx.is_elliptic(&hr, &tau) || !ctx.exactly_invariant(&v, &tau) {
                    continue;
                }
                let canon = ctx.canonical_key(&v, &tau);
                if found.contains_key(&canon) {
                    continue;
                }
                let tau_inv = ctx.inverse(&tau);
                let commuting = stab
                    .iter()
                    .filter(|w| wh.contains(&w.mul(&tau).mul(&ctx.inverse(w)).mul(&tau_inv)))
                    .count();
                let out_order = (commuting / wh.len()) as u64;
                let twisted = !wh.contains(&tau);
                let h = h_datum(rd, &hr, &tau, twisted)?;
                found.insert(
                    canon,
                    EndoscopicDatum {
                        s_numerators: v.clone(),
                        s_denominator: torsion_bound,
                        h_roots: hr.clone(),
                        twist: tau,
                        twisted,
                        elliptic: true,
                        out_order,
                        h,
                    },
                );
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                let mut out: Vec<EndoscopicDatum> = found.into_values().collect();
                out.sort_by_key(|d| std::cmp::Reverse(d.h_roots.len()));
                return Ok(out);
            }
            v[i] += 1;
            if v[i] < torsion_bound {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

fn h_datum(rd: &RootDatum, hr: &[RootPair], tau: &SmallMat, twisted: bool) -> Result<RootDatum> {
    let pos: Vec<&RootPair> = hr.iter().filter(|r| r.positive).collect();
    let roots_set: BTreeSet<Vec<i64>> = pos.iter().map(|r| r.root.clone()).collect();
    let simple: Vec<&RootPair> = pos
        .iter()
        .copied()
        .filter(|r| {
            !pos.iter().any(|a| {
                let diff: Vec<i64> = r.root.iter().zip(&a.root).map(|(x, y)| x - y).collect();
                roots_set.contains(&diff)
            })
        })
        .collect();
    let galois = if twisted {
        let g = Arc::new(FiniteGroup::cyclic(2));
        GaloisLattice::from_generators(g, rd.rank, &[(1, tau.transpose().to_int_matrix())])?
    } else {
        super::datum::trivial_galois(rd.rank)
    };
    let kind = classify(rd, hr, tau);
    let name = kind_name(&kind, hr.len());
    RootDatum::new(
        &name,
        rd.rank,
        simple.iter().map(|r| r.root.clone()).collect(),
        simple.iter().map(|r| r.coroot.clone()).collect(),
        galois,
        kind,
    )
}

fn kind_name(kind: &DatumKind, nroots: usize) -> String {
    match kind {
        DatumKind::Gl(n) => format!("GL{n}"),
        DatumKind::Sl(n) => format!("SL{n}"),
        DatumKind::Pgl(n) => format!("PGL{n}"),
        DatumKind::Gsp4 => "GSp4".into(),
        DatumKind::NormOneTorus => "T1".into(),
        DatumKind::InducedTorus => "ResGm".into(),
        DatumKind::SplitTorus(r) => format!("Gm^{r}"),
        DatumKind::Product(fs) => fs.iter().map(|(k, _)| kind_name(k, 0)).collect::<Vec<_>>().join(" x "),
        DatumKind::Other => format!("H({nroots} roots)"),
    }
}

/// Identifies `H` block by block against the factors of `G`.
fn classify(rd: &RootDatum, hr: &[RootPair], tau: &SmallMat) -> DatumKind {
    let blocks: Vec<(DatumKind, usize)> = match &rd.kind {
        DatumKind::Product(fs) => fs.clone(),
        k => vec![(k.clone(), rd.rank)],
    };
    let mut out = Vec::new();
    let mut start = 0;
    for (fk, r) in &blocks {
        let range = start..start + r;
        let inside = |v: &[i64]| v.iter().enumerate().all(|(i, &x)| x == 0 || range.contains(&i));
        for i in range.clone() {
            for j in 0..rd.rank {
                if range.contains(&i) != range.contains(&j) && tau.get(i, j) != 0 {
                    return DatumKind::Other;
                }
            }
        }
        let block_roots = hr.iter().filter(|x| inside(&x.root)).count();
        let g_roots = rd.roots().map(|rs| rs.iter().filter(|x| inside(&x.root)).count()).unwrap_or(0);
        let tau_trivial = range.clone().all(|i| range.clone().all(|j| tau.get(i, j) == i64::from(i == j)));
        let k = if block_roots == g_roots && tau_trivial {
            fk.clone()
        } else if block_roots == 0 {
            torus_kind(tau, range.clone())
        } else {
            DatumKind::Other
        };
        if k == DatumKind::Other {
            return DatumKind::Other;
        }
        out.push((k, *r));
        start += r;
    }
    if hr.iter().any(|x| {
        let mut s = 0;
        blocks.iter().filter(|(_, r)| {
            let range = s..s + r;
            s += r;
            x.root.iter().enumerate().any(|(i, &v)| v != 0 && range.contains(&i))
        }).count() > 1
    }) {
        return DatumKind::Other;
    }
    if out.len() == 1 {
        out.pop().unwrap().0
    } else {
        DatumKind::Product(out)
    }
}

/// Recognises split, norm-one and induced tori from the twist matrix.
fn torus_kind(tau: &SmallMat, range: std::ops::Range<usize>) -> DatumKind {
    let t = tau.transpose();
    let idx: Vec<usize> = range.collect();
    let mut parts = Vec::new();
    let mut used = BTreeSet::new();
    for &i in &idx {
        if used.contains(&i) {
            continue;
        }
        let nz: Vec<usize> = idx.iter().copied().filter(|&j| t.get(i, j) != 0).collect();
        match nz.as_slice() {
            [j] if *j == i && t.get(i, i) == 1 => parts.push((DatumKind::SplitTorus(1), 1)),
            [j] if *j == i && t.get(i, i) == -1 => parts.push((DatumKind::NormOneTorus, 1)),
            [j] if *j != i && t.get(i, *j) == 1 && t.get(*j, i) == 1 => {
                used.insert(*j);
                parts.push((DatumKind::InducedTorus, 2));
            }
            _ => return DatumKind::Other,
        }
        used.insert(i);
    }
    if parts.len() == 1 {
        parts.pop().unwrap().0
    } else {
        DatumKind::Product(parts)
    }
}

/// `iota(G, H) = tau(G) tau(H)^{-1} |Out(e)|^{-1}`.
pub fn iota(g: &RootDatum, e: &EndoscopicDatum) -> Result<Ratio<i64>> {
    let tg = tamagawa_number(g)? as i64;
    let th = tamagawa_number(&e.h)? as i64;
    Ok(Ratio::new(tg, th * e.out_order as i64))
}

#[cfg(test)]
mod tests {
    use super::super::presets::*;
    use super::*;

    #[test]
    fn sl2_has_two_classes() {
        let data = enumerate_elliptic_endoscopy(&sl(2), 4).unwrap();
        let lambdas: Vec<u64> = data.iter().map(|d| d.out_order).collect();
        assert_eq!(lambdas, vec![1, 2]);
        assert_eq!(data[1].h.kind, DatumKind::NormOneTorus);
        assert_eq!(iota(&sl(2), &data[1]).unwrap(), Ratio::new(1, 4));
        assert_eq!(iota(&sl(2), &data[0]).unwrap(), Ratio::new(1, 1));
    }

    #[test]
    fn gl_has_only_itself() {
        for n in 2..=3 {
            let data = enumerate_elliptic_endoscopy(&gl(n), 6).unwrap();
            assert_eq!(data.len(), 1);
            assert_eq!(data[0].h_roots.len(), n * (n - 1));
        }
    }

    #[test]
    fn gsp4_has_two_classes() {
        let data = enumerate_elliptic_endoscopy(&gsp4(), 4).unwrap();
        assert_eq!(data.len(), 2);
        assert_eq!(data[1].h_roots.len(), 4);
        assert_eq!(data[1].out_order, 2);
    }

    #[test]
    fn saturation_in_torsion_bound() {
        let sig = |n| {
            let mut v: Vec<(String, u64)> =
                enumerate_elliptic_endoscopy(&sl(2).product(&sl(2)), n).unwrap().iter().map(|d| (d.label(), d.out_order)).collect();
            v.sort();
            v
        };
        assert_eq!(sig(2), sig(4));
    }

    #[test]
    fn rejects_non_preset() {
        let mut rd = sl(2);
        rd.kind = DatumKind::Other;
        assert!(matches!(enumerate_elliptic_endoscopy(&rd, 2), Err(Error::PresetOnly(_))));
    }
}
