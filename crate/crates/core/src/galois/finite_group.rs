use crate::{Error, Result};
use std::collections::{BTreeSet, HashMap};

/// Finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table (identity at index 0, Latin square, associative).
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Invalid("malformed multiplication table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if table[0][i] != i || row[0] != i {
                return Err(Error::Invalid("element 0 is not the identity".into()));
            }
            let distinct: BTreeSet<_> = row.iter().collect();
            if distinct.len() != n {
                return Err(Error::Invalid("table is not a Latin square".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Invalid("table is not associative".into()));
                    }
                }
            }
        }
        let inv = (0..n).map(|a| (0..n).find(|&b| table[a][b] == 0).unwrap()).collect();
        Ok(FiniteGroup { table, inv })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table).expect("cyclic table")
    }

    /// Closure of a set of permutations; element indices follow BFS order.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Result<(Self, Vec<Vec<usize>>)> {
        let deg = gens.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..deg).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let prod: Vec<usize> = (0..deg).map(|k| elems[i][g[k]]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elems.len());
                    elems.push(prod);
                }
            }
            i += 1;
            if elems.len() > 100_000 {
                return Err(Error::CapExceeded(100_000));
            }
        }
        let n = elems.len();
        let table = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        let prod: Vec<usize> = (0..deg).map(|k| elems[a][elems[b][k]]).collect();
                        index[&prod]
                    })
                    .collect()
            })
            .collect();
        Ok((Self::from_table(table)?, elems))
    }

    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order(), other.order());
        let table = (0..n * m)
            .map(|x| (0..n * m).map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m)).collect())
            .collect();
        FiniteGroup::from_table(table).expect("product table")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Subgroup generated by the given elements, as a sorted list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut set = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn conjugate_subgroup(&self, h: &[usize], g: usize) -> Vec<usize> {
        let gi = self.inverse(g);
        let mut out: Vec<usize> = h.iter().map(|&x| self.mul(self.mul(g, x), gi)).collect();
        out.sort_unstable();
        out
    }

    /// Cyclic subgroups, one representative per conjugacy class.
    pub fn cyclic_subgroups_up_to_conjugacy(&self) -> Vec<Vec<usize>> {
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut reps = Vec::new();
        for a in 0..self.order() {
            let h = self.generated(&[a]);
            if seen.contains(&h) {
                continue;
            }
            for g in 0..self.order() {
                seen.insert(self.conjugate_subgroup(&h, g));
            }
            reps.push(h);
        }
        reps.sort_by_key(|h| h.len());
        reps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_from_permutations() {
        let (g, _) = FiniteGroup::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(g.order(), 6);
        // trivial, three conjugate transpositions, the rotation subgroup
        assert_eq!(g.cyclic_subgroups_up_to_conjugacy().len(), 3);
    }

    #[test]
    fn products_and_orders() {
        let g = FiniteGroup::cyclic(2).direct_product(&FiniteGroup::cyclic(3));
        assert_eq!(g.order(), 6);
        assert!((0..6).any(|a| g.element_order(a) == 6));
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
    }
}
