//! Dense square matrices over polynomials.

use std::fmt;

use crate::arith::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<Poly>,
}

impl Matrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Poly) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Poly::constant(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, |i, j| if i == j { Poly::one() } else { Poly::zero() })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        Matrix::from_fn(self.n, |i, j| {
            (0..self.n)
                .filter(|&l| !self.get(i, l).is_zero() && !other.get(l, j).is_zero())
                .map(|l| self.get(i, l) * other.get(l, j))
                .sum()
        })
    }

    /// The submatrix with the given rows and columns removed.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let keep_r: Vec<usize> = (0..self.n).filter(|i| !rows.contains(i)).collect();
        let keep_c: Vec<usize> = (0..self.n).filter(|j| !cols.contains(j)).collect();
        assert_eq!(keep_r.len(), keep_c.len(), "minor must be square");
        Matrix::from_fn(keep_r.len(), |i, j| self.get(keep_r[i], keep_c[j]).clone())
    }

    /// Leading principal `k x k` block.
    pub fn leading(&self, k: usize) -> Matrix {
        Matrix::from_fn(k, |i, j| self.get(i, j).clone())
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
