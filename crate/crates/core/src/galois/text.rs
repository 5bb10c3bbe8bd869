//! Line-based text format for group actions on lattices.
//!
//! ```text
//! # comments start with '#'
//! group cyclic 2          # or: group table 4, followed by 4 `row` lines
//! lattice I 2
//! act I 1  0 1 1 0        # element index, then rank*rank entries row-major
//! lattice G 1
//! map I G  1 1            # target rank x source rank, row-major
//! conj 1                  # complex conjugation (defaults to identity)
//! ```
//!
//! Actions only need to be listed on generating elements.

use super::egroup::PiMap;
use super::finite_group::FiniteGroup;
use super::lattice::GaloisLattice;
use crate::abelian::IntMatrix;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct LatticeFile {
    pub group: Arc<FiniteGroup>,
    pub lattices: BTreeMap<String, GaloisLattice>,
    pub maps: Vec<(String, String, IntMatrix)>,
    pub conj: usize,
}

impl LatticeFile {
    /// Reads the surjection named `map I G`.
    pub fn pi_map(&self) -> Result<PiMap> {
        let get = |n: &str| self.lattices.get(n).cloned().ok_or_else(|| Error::Invalid(format!("lattice {n} missing")));
        let (i, g) = (get("I")?, get("G")?);
        let (_, _, m) = self
            .maps
            .iter()
            .find(|(a, b, _)| a == "I" && b == "G")
            .ok_or_else(|| Error::Invalid("map I G missing".into()))?;
        PiMap::from_surjection(i, g, m.clone())
    }
}

fn ints(line: usize, toks: &[&str]) -> Result<Vec<i64>> {
    toks.iter()
        .map(|t| t.parse::<i64>().map_err(|_| Error::Parse { line, msg: format!("expected integer, got {t:?}") }))
        .collect()
}

pub fn parse_lattice_file(text: &str) -> Result<LatticeFile> {
    let mut group: Option<Arc<FiniteGroup>> = None;
    let mut pending_rows: Option<(usize, Vec<Vec<usize>>)> = None;
    let mut ranks: BTreeMap<String, usize> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut acts: BTreeMap<String, Vec<(usize, IntMatrix)>> = BTreeMap::new();
    let mut maps_raw: Vec<(usize, String, String, Vec<i64>)> = Vec::new();
    let mut conj = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let perr = |msg: &str| Error::Parse { line, msg: msg.to_string() };
        match toks[0] {
            "group" => match toks.get(1).copied() {
                Some("cyclic") => {
                    let n = ints(line, &toks[2..3.min(toks.len())])?;
                    let n = *n.first().ok_or_else(|| perr("missing order"))?;
                    if n < 1 {
                        return Err(perr("order must be positive"));
                    }
                    group = Some(Arc::new(FiniteGroup::cyclic(n as usize)));
                }
                Some("table") => {
                    let n = ints(line, &toks[2..3.min(toks.len())])?;
                    let n = *n.first().ok_or_else(|| perr("missing order"))?;
                    pending_rows = Some((n as usize, Vec::new()));
                }
                _ => return Err(perr("expected `group cyclic n` or `group table n`")),
            },
            "row" => {
                let (n, rows) = pending_rows.as_mut().ok_or_else(|| perr("row outside a table"))?;
                let r = ints(line, &toks[1..])?;
                if r.len() != *n || r.iter().any(|&x| x < 0) {
                    return Err(perr("row has the wrong length"));
                }
                rows.push(r.into_iter().map(|x| x as usize).collect());
                if rows.len() == *n {
                    let rows = std::mem::take(rows);
                    group = Some(Arc::new(FiniteGroup::from_table(rows).map_err(|e| perr(&e.to_string()))?));
                    pending_rows = None;
                }
            }
            "lattice" => {
                if toks.len() != 3 {
                    return Err(perr("expected `lattice NAME RANK`"));
                }
                let r = ints(line, &toks[2..3])?[0];
                if r < 0 {
                    return Err(perr("negative rank"));
                }
                ranks.insert(toks[1].to_string(), r as usize);
                order.push(toks[1].to_string());
            }
            "act" => {
                let name = toks.get(1).ok_or_else(|| perr("missing lattice name"))?;
                let r = *ranks.get(*name).ok_or_else(|| perr("unknown lattice"))?;
                let v = ints(line, &toks[2..])?;
                if v.len() != 1 + r * r || v[0] < 0 {
                    return Err(perr("expected element index and rank^2 entries"));
                }
                acts.entry(name.to_string())
                    .or_default()
                    .push((v[0] as usize, IntMatrix::from_i64(r, r, &v[1..])));
            }
            "map" => {
                if toks.len() < 3 {
                    return Err(perr("expected `map FROM TO entries`"));
                }
                maps_raw.push((line, toks[1].to_string(), toks[2].to_string(), ints(line, &toks[3..])?));
            }
            "conj" => {
                let v = ints(line, &toks[1..])?;
                conj = *v.first().ok_or_else(|| perr("missing element"))? as usize;
            }
            other => return Err(perr(&format!("unknown keyword {other:?}"))),
        }
    }
    let group = group.ok_or(Error::Parse { line: 0, msg: "no group declared".into() })?;
    if conj >= group.order() {
        return Err(Error::Parse { line: 0, msg: "conjugation index out of range".into() });
    }
    let mut lattices = BTreeMap::new();
    for name in order {
        let r = ranks[&name];
        let gens = acts.remove(&name).unwrap_or_default();
        let lat = if gens.is_empty() {
            GaloisLattice::trivial_action(group.clone(), r)
        } else {
            GaloisLattice::from_generators(group.clone(), r, &gens)?
        };
        lattices.insert(name, lat);
    }
    let mut maps = Vec::new();
    for (line, a, b, v) in maps_raw {
        let (ra, rb) = match (ranks.get(&a), ranks.get(&b)) {
            (Some(x), Some(y)) => (*x, *y),
            _ => return Err(Error::Parse { line, msg: "map refers to an unknown lattice".into() }),
        };
        if v.len() != ra * rb {
            return Err(Error::Parse { line, msg: "map has the wrong number of entries".into() });
        }
        maps.push((a, b, IntMatrix::from_i64(rb, ra, &v)));
    }
    Ok(LatticeFile { group, lattices, maps, conj })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{kottwitz_k_group, PlaceSystem};

    #[test]
    fn parses_gl2_torus() {
        let text = "group cyclic 2\nlattice I 2\nact I 1 0 1 1 0\nlattice G 1\nmap I G 1 1\nconj 1\n";
        let f = parse_lattice_file(text).unwrap();
        let pi = f.pi_map().unwrap();
        let ps = PlaceSystem::new(&f.group, f.conj).unwrap();
        assert_eq!(kottwitz_k_group(&pi, &ps).unwrap().order().unwrap(), 1);
    }

    #[test]
    fn table_and_errors() {
        let text = "group table 2\nrow 0 1\nrow 1 0\nlattice I 1\nact I 1 -1\nlattice G 0\nmap I G\nconj 1";
        let f = parse_lattice_file(text).unwrap();
        assert_eq!(f.group.order(), 2);
        assert!(matches!(parse_lattice_file("group cyclic 2\nlattice I x"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_lattice_file("lattice I 1").is_err());
    }
}
