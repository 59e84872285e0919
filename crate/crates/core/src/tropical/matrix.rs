//! Dense row-major matrices over the completed max-plus semiring.

use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::{Scalar, Tolerance};
use crate::tropical::ExtendedTropical;

/// A `rows × cols` matrix of [`ExtendedTropical`] entries, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TropicalMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<ExtendedTropical<T>>,
}

impl<T: Scalar> TropicalMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExtendedTropical<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyShape { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(Error::EntryCount {
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if let Some(bad) = entries
            .iter()
            .filter_map(ExtendedTropical::as_finite)
            .find(|v| !v.is_valid())
        {
            return Err(Error::InvalidValue(bad.to_string()));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<ExtendedTropical<T>>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::EntryCount {
                expected: m,
                actual: bad.len(),
            });
        }
        Self::new(n, m, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix of finite entries.
    pub fn from_finite(rows: usize, cols: usize, values: Vec<T>) -> Result<Self> {
        let entries = values
            .into_iter()
            .map(ExtendedTropical::finite)
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, entries)
    }

    pub fn filled(rows: usize, cols: usize, value: ExtendedTropical<T>) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    /// 𝟙 on the diagonal, ⊥ elsewhere.
    pub fn identity(n: usize) -> Result<Self> {
        let mut id = Self::filled(n, n, ExtendedTropical::Bottom)?;
        for i in 0..n {
            id.entries[i * n + i] = ExtendedTropical::one();
        }
        Ok(id)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtendedTropical<T> {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[ExtendedTropical<T>] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<ExtendedTropical<T>> {
        self.entries
    }

    pub fn row(&self, i: usize) -> &[ExtendedTropical<T>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    fn mismatch(&self, other: &Self, op: &'static str) -> Error {
        Error::ShapeMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        op: &'static str,
        f: impl Fn(&ExtendedTropical<T>, &ExtendedTropical<T>) -> ExtendedTropical<T>,
    ) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(self.mismatch(other, op));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Entrywise max.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "oplus", ExtendedTropical::oplus)
    }

    /// Entrywise min.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "wedge", ExtendedTropical::wedge)
    }

    /// Max-plus product: `(A ⊙ B)[i][j] = max_k A[i][k] + B[k][j]`.
    pub fn odot(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(self.mismatch(other, "odot"));
        }
        let (n, m) = (self.rows, other.cols);
        let mut entries = Vec::with_capacity(n * m);
        for i in 0..n {
            let a_row = self.row(i);
            for j in 0..m {
                let acc = a_row
                    .iter()
                    .enumerate()
                    .fold(ExtendedTropical::Bottom, |acc, (k, a)| {
                        acc.oplus(&a.odot(other.get(k, j)))
                    });
                entries.push(acc);
            }
        }
        Ok(Self {
            rows: n,
            cols: m,
            entries,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Left residual `A \ B`: the greatest `X` with `A ⊙ X ≤ B`,
    /// `X[i][j] = min_k A[k][i] \ B[k][j]`.
    pub fn ldiv(&self, b: &Self) -> Result<Self> {
        if self.rows != b.rows {
            return Err(self.mismatch(b, "ldiv"));
        }
        let (n, m) = (self.cols, b.cols);
        let mut entries = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                let x = (0..self.rows).fold(ExtendedTropical::Top, |acc, k| {
                    acc.wedge(&self.get(k, i).ldiv(b.get(k, j)))
                });
                entries.push(x);
            }
        }
        Ok(Self {
            rows: n,
            cols: m,
            entries,
        })
    }

    /// Right residual `D / C`: the greatest `X` with `X ⊙ C ≤ D`,
    /// `X[i][j] = min_l D[i][l] / C[j][l]`.
    pub fn rdiv(&self, c: &Self) -> Result<Self> {
        if self.cols != c.cols {
            return Err(self.mismatch(c, "rdiv"));
        }
        let (n, m) = (self.rows, c.rows);
        let mut entries = Vec::with_capacity(n * m);
        for i in 0..n {
            for j in 0..m {
                let x = (0..self.cols).fold(ExtendedTropical::Top, |acc, l| {
                    acc.wedge(&self.get(i, l).rdiv(c.get(j, l)))
                });
                entries.push(x);
            }
        }
        Ok(Self {
            rows: n,
            cols: m,
            entries,
        })
    }

    /// Entrywise `A ≤ B` with exact comparison.
    pub fn le(&self, other: &Self) -> Result<bool> {
        self.le_within(other, Tolerance::EXACT)
    }

    /// Entrywise `A ≤ B`, finite entries compared up to `tol`.
    pub fn le_within(&self, other: &Self, tol: Tolerance) -> Result<bool> {
        if self.shape() != other.shape() {
            return Err(self.mismatch(other, "le"));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a.le_within(b, tol)))
    }

    pub fn eq_within(&self, other: &Self, tol: Tolerance) -> Result<bool> {
        if self.shape() != other.shape() {
            return Err(self.mismatch(other, "eq"));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a.eq_within(b, tol)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array(self.row(i).iter().map(|e| e.to_json()).collect()))
                .collect(),
        )
    }
}

impl<T: Scalar> fmt::Display for TropicalMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
