use super::element::PadicElement;
use super::field::Unramified;
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

/// Square or rectangular matrix over `Q_{p^n}`.
#[derive(Clone)]
pub struct PadicMatrix {
    rows: usize,
    cols: usize,
    data: Vec<PadicElement>,
}

impl PadicMatrix {
    pub fn from_entries(rows: usize, cols: usize, data: Vec<PadicElement>) -> Self {
        assert_eq!(data.len(), rows * cols);
        PadicMatrix { rows, cols, data }
    }

    pub fn zeros(ring: &Arc<Unramified>, rows: usize, cols: usize) -> Self {
        Self::from_entries(rows, cols, vec![PadicElement::zero(ring); rows * cols])
    }

    pub fn identity(ring: &Arc<Unramified>, n: usize) -> Self {
        Self::scalar(ring, n, &PadicElement::one(ring))
    }

    pub fn scalar(ring: &Arc<Unramified>, n: usize, c: &PadicElement) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diag(ring: &Arc<Unramified>, entries: &[PadicElement]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(ring, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_int_rows(ring: &Arc<Unramified>, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let data = rows.iter().flat_map(|row| row.iter().map(|&x| PadicElement::from_int(ring, x))).collect();
        Self::from_entries(r, c, data)
    }

    pub fn ring(&self) -> &Arc<Unramified> {
        self.data[0].ring()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PadicElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[PadicElement] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(&PadicElement) -> PadicElement) -> Self {
        Self::from_entries(self.rows, self.cols, self.data.iter().map(f).collect())
    }

    pub fn sigma(&self) -> Self {
        self.map(|x| x.frobenius())
    }

    pub fn sigma_inv(&self) -> Self {
        self.map(|x| x.frobenius_inv())
    }

    pub fn scale(&self, c: &PadicElement) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn shift(&self, k: i64) -> Self {
        self.map(|x| x.shift(k))
    }

    pub fn mul(&self, o: &PadicMatrix) -> PadicMatrix {
        assert_eq!(self.cols, o.rows);
        let ring = self.ring().clone();
        let mut out = Self::zeros(&ring, self.rows, o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = PadicElement::zero(&ring);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(o.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[PadicElement]) -> Vec<PadicElement> {
        let ring = self.ring().clone();
        (0..self.rows)
            .map(|i| (0..self.cols).fold(PadicElement::zero(&ring), |acc, k| acc.add(&self.get(i, k).mul(&v[k]))))
            .collect()
    }

    pub fn add(&self, o: &PadicMatrix) -> PadicMatrix {
        Self::from_entries(self.rows, self.cols, self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, o: &PadicMatrix) -> PadicMatrix {
        Self::from_entries(self.rows, self.cols, self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn column(&self, j: usize) -> Vec<PadicElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<PadicElement>]) -> Self {
        let r = cols[0].len();
        let c = cols.len();
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for col in cols {
                data.push(col[i].clone());
            }
        }
        Self::from_entries(r, c, data)
    }

    /// Smallest lower bound on entry valuations.
    pub fn min_valuation(&self) -> i64 {
        self.data.iter().map(|x| x.val_lower()).min().unwrap_or(i64::MAX)
    }

    pub fn eq_approx(&self, o: &PadicMatrix) -> bool {
        self.data.iter().zip(&o.data).all(|(a, b)| a.eq_approx(b))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Row index in `from..` holding the entry of column `col` with least valuation.
    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        (from..self.rows)
            .filter(|&r| self.get(r, col).valuation().is_some())
            .min_by_key(|&r| self.get(r, col).val_lower())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn det(&self) -> Result<PadicElement> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let ring = self.ring().clone();
        let mut a = self.clone();
        let mut det = PadicElement::one(&ring);
        for k in 0..n {
            let Some(pr) = a.pivot_row(k, k) else {
                let bound = (k..n).map(|r| a.get(r, k).val_lower()).min().unwrap();
                return Ok(PadicElement::zero_mod(&ring, bound.saturating_add(det.val_lower())));
            };
            if pr != k {
                a.swap_rows(pr, k);
                det = det.neg();
            }
            let piv = a.get(k, k).clone();
            det = det.mul(&piv);
            let inv = piv.inv()?;
            for i in k + 1..n {
                let f = a.get(i, k).mul(&inv);
                for j in k..n {
                    let v = a.get(i, j).sub(&f.mul(a.get(k, j)));
                    a.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<PadicMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let ring = self.ring().clone();
        let mut a = self.clone();
        let mut inv = Self::identity(&ring, n);
        for k in 0..n {
            let pr = a
                .pivot_row(k, k)
                .ok_or_else(|| Error::InsufficientPrecision("matrix is singular to working precision".into()))?;
            a.swap_rows(pr, k);
            inv.swap_rows(pr, k);
            let pinv = a.get(k, k).inv()?;
            for j in 0..n {
                a.set(k, j, a.get(k, j).mul(&pinv));
                inv.set(k, j, inv.get(k, j).mul(&pinv));
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a.get(i, k).clone();
                if f.is_exact_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(i, j, a.get(i, j).sub(&f.mul(a.get(k, j))));
                    inv.set(i, j, inv.get(i, j).sub(&f.mul(inv.get(k, j))));
                }
            }
        }
        Ok(inv)
    }

    /// Characteristic polynomial `det(x - A)`, coefficients from `x^n` down
    /// to `x^0`, computed division-free (Berkowitz).
    pub fn charpoly(&self) -> Vec<PadicElement> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let ring = self.ring().clone();
        let one = PadicElement::one(&ring);
        if n == 0 {
            return vec![one];
        }
        let mut vect = vec![one.clone(), self.get(0, 0).neg()];
        for r in 1..n {
            let row: Vec<PadicElement> = (0..r).map(|j| self.get(r, j).clone()).collect();
            let mut col: Vec<PadicElement> = (0..r).map(|i| self.get(i, r).clone()).collect();
            let mut t = vec![one.clone(), self.get(r, r).neg()];
            for _ in 0..r {
                let rs = row.iter().zip(&col).fold(PadicElement::zero(&ring), |acc, (a, b)| acc.add(&a.mul(b)));
                t.push(rs.neg());
                col = (0..r)
                    .map(|i| (0..r).fold(PadicElement::zero(&ring), |acc, k| acc.add(&self.get(i, k).mul(&col[k]))))
                    .collect();
            }
            let mut next = Vec::with_capacity(r + 2);
            for i in 0..r + 2 {
                let mut acc = PadicElement::zero(&ring);
                for (j, v) in vect.iter().enumerate() {
                    if j <= i {
                        acc = acc.add(&t[i - j].mul(v));
                    }
                }
                next.push(acc);
            }
            vect = next;
        }
        vect
    }

    /// Valuations of the elementary divisors, largest first.
    pub fn elementary_divisors(&self) -> Result<Vec<i64>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let mut best: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if a.get(i, j).valuation().is_some()
                        && best.map_or(true, |(bi, bj)| a.get(i, j).val_lower() < a.get(bi, bj).val_lower())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let (bi, bj) = best.ok_or_else(|| Error::InsufficientPrecision("elementary divisors undetermined".into()))?;
            a.swap_rows(bi, k);
            for i in 0..n {
                a.data.swap(i * n + bj, i * n + k);
            }
            let piv = a.get(k, k).clone();
            // Any undetermined entry must not be able to undercut the pivot.
            if (k..n).any(|i| (k..n).any(|j| a.get(i, j).valuation().is_none() && a.get(i, j).val_lower() < piv.val_lower())) {
                return Err(Error::InsufficientPrecision("elementary divisors undetermined".into()));
            }
            out.push(piv.val_lower());
            let inv = piv.inv()?;
            for i in k + 1..n {
                let f = a.get(i, k).mul(&inv);
                for j in k..n {
                    a.set(i, j, a.get(i, j).sub(&f.mul(a.get(k, j))));
                }
            }
            for j in k + 1..n {
                let f = a.get(k, j).mul(&inv);
                for i in k..n {
                    a.set(i, j, a.get(i, j).sub(&f.mul(a.get(i, k))));
                }
            }
        }
        out.sort_unstable_by(|x, y| y.cmp(x));
        Ok(out)
    }
}

impl fmt::Debug for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}
