//! Exact dense linear algebra over the rationals.
//!
//! Rank and pivot selection use fraction-free (Bareiss) elimination on an
//! integer-scaled copy; null spaces use reduced row echelon form.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds a symmetric matrix from its upper triangle.
    pub fn symmetric(n: usize, mut entry: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = entry(i, j);
                if i != j {
                    m.set(j, i, v.clone());
                }
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The first `k` rows.
    pub fn top_rows(&self, k: usize) -> Matrix {
        let k = k.min(self.rows);
        Self { rows: k, cols: self.cols, data: self.data[..k * self.cols].to_vec() }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// `u^T M v`.
    pub fn bilinear(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mv = self.mul_vec(v);
        u.iter().zip(&mv).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let lcm = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
                row.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect()
            })
            .collect()
    }

    /// Fraction-free elimination; returns pivot columns in increasing order.
    /// These are the lexicographically first maximal set of independent
    /// columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut a = self.integer_rows();
        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.pivot_columns().len()
    }

    /// Reduced row echelon form with its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of `{v : M v = 0}`, one vector per free column in increasing
    /// order, each with a 1 in its free column.
    pub fn null_space(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }
}

/// Exact Gram-Schmidt of coefficient vectors in the inner product `u^T G v`.
///
/// Vectors whose residual has zero norm are dropped. Returns each orthogonal
/// vector with its squared norm; the result is pairwise exactly orthogonal.
pub fn gram_schmidt(gram: &Matrix, vectors: &[Vec<Rational>]) -> Vec<(Vec<Rational>, Rational)> {
    let mut out: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (b, nb) in &out {
            let c = gram.bilinear(&w, b) / nb;
            if c.is_zero() {
                continue;
            }
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= &c * bi;
            }
        }
        let nw = gram.bilinear(&w, &w);
        if nw.is_positive() {
            out.push((w, nw));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn rank_and_pivots() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.pivot_columns(), vec![0, 1]);
        let dup = mat(&[&[1, 1, 2], &[1, 1, 3]]);
        assert_eq!(dup.pivot_columns(), vec![0, 2]);
        assert_eq!(Matrix::zeros(0, 0).rank(), 0);
        assert_eq!(Matrix::zeros(3, 2).rank(), 0);
    }

    #[test]
    fn rank_with_fractions() {
        let m = Matrix::from_rows(vec![
            vec![frac(1, 2), frac(1, 3)],
            vec![frac(3, 2), int(1)],
        ]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn null_space_is_annihilated() {
        let m = mat(&[&[1, 2, 3, 4], &[0, 1, 1, 1]]);
        let ns = m.null_space();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn orthogonalization_is_exact() {
        let g = mat(&[&[2, 1, 0], &[1, 2, 1], &[0, 1, 2]]);
        let vs: Vec<Vec<Rational>> = vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)], vec![int(1), int(1), int(0)]];
        let ob = gram_schmidt(&g, &vs);
        assert_eq!(ob.len(), 2);
        assert!(g.bilinear(&ob[0].0, &ob[1].0).is_zero());
    }
}
