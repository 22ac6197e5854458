//! Dense max-plus matrices.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::scalar::TropScalar;

/// Row-major dense matrix over the max-plus semiring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TropMatrix {
    rows: usize,
    cols: usize,
    data: Vec<TropScalar>,
}

impl TropMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<TropScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<TropScalar>>) -> Result<Self> {
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

    /// Integer entries; `None` becomes ε.
    pub fn from_opt_ints<R: AsRef<[Option<i64>]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.as_ref()
                        .iter()
                        .map(|v| v.map_or(TropScalar::Eps, TropScalar::int))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn from_ints<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| TropScalar::int(v)).collect())
                .collect(),
        )
    }

    pub fn filled(rows: usize, cols: usize, value: TropScalar) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    /// The all-ε matrix.
    pub fn eps(rows: usize, cols: usize) -> Result<Self> {
        Self::filled(rows, cols, TropScalar::Eps)
    }

    /// `0` on the diagonal, ε elsewhere.
    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::eps(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = TropScalar::zero();
        }
        Ok(m)
    }

    pub fn column_vector(v: Vec<TropScalar>) -> Result<Self> {
        let n = v.len();
        Self::new(n, 1, v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TropScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TropScalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[TropScalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[TropScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<TropScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<TropScalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub(crate) fn require_square(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                op,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_same_dims(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.dims() == other.dims() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                op,
                left: self.dims(),
                right: other.dims(),
            })
        }
    }

    /// Entrywise maximum.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        self.require_same_dims(other, "oplus")?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.oplus(b))
            .collect();
        Ok(Self { data, ..*self })
    }

    /// Max-plus product, `(A ⊗ B)_ij = max_k a_ik + b_kj`.
    pub fn otimes(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "otimes",
                left: self.dims(),
                right: other.dims(),
            });
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for j in 0..other.cols {
                let mut best = TropScalar::Eps;
                for (k, a) in row.iter().enumerate() {
                    let b = other.get(k, j);
                    if a.is_eps() || b.is_eps() {
                        continue;
                    }
                    let c = a.otimes(b);
                    if c > best {
                        best = c;
                    }
                }
                data.push(best);
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn mul_vec(&self, x: &[TropScalar]) -> Result<Vec<TropScalar>> {
        if x.len() != self.cols {
            return Err(Error::VectorLength {
                expected: self.cols,
                actual: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a.otimes(b))
                    .max()
                    .unwrap_or(TropScalar::Eps)
            })
            .collect())
    }

    /// `A^(k)` by iterated multiplication; `A^(0) = I`.
    pub fn power(&self, k: u64) -> Result<Self> {
        let n = self.require_square("power")?;
        let mut acc = Self::identity(n)?;
        for _ in 0..k {
            acc = self.otimes(&acc)?;
        }
        Ok(acc)
    }

    /// `c ⊗ A`.
    pub fn scale(&self, c: &TropScalar) -> Self {
        Self {
            data: self.data.iter().map(|a| a.otimes(c)).collect(),
            ..*self
        }
    }

    pub fn max_entry(&self) -> TropScalar {
        self.data.iter().max().cloned().unwrap_or(TropScalar::Eps)
    }

    /// `‖A‖₀ = e^{max a_ij}` in conventional arithmetic; `0` for the all-ε matrix.
    pub fn norm0(&self) -> f64 {
        self.max_entry().to_f64().exp()
    }

    /// `O(A)`: `⌈max a_ij⌉` when some entry is positive, else `2`.
    pub fn order_bound(&self) -> u64 {
        match self.max_entry().finite() {
            Some(m) if m.is_positive() => {
                let c: BigInt = m.ceil().to_integer();
                u64::try_from(c).unwrap_or(u64::MAX)
            }
            _ => 2,
        }
    }

    /// Entrywise `A ≤ B`, i.e. `A ⊕ B = B`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.require_same_dims(other, "leq")?;
        Ok(self.data.iter().zip(&other.data).all(|(a, b)| a <= b))
    }

    /// `P A Pᵀ` where row/column `r` of the result is row/column `perm[r]` of `A`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.require_square("permuted")?;
        if perm.len() != n {
            return Err(Error::VectorLength {
                expected: n,
                actual: perm.len(),
            });
        }
        self.principal_submatrix(perm)
    }

    /// Rows and columns `idx` (in that order).
    pub fn principal_submatrix(&self, idx: &[usize]) -> Result<Self> {
        let data = idx
            .iter()
            .flat_map(|&i| idx.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        Self::new(idx.len(), idx.len(), data)
    }

    pub fn diagonal(&self) -> Vec<TropScalar> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }
}

pub fn mat_oplus(a: &TropMatrix, b: &TropMatrix) -> Result<TropMatrix> {
    a.oplus(b)
}

pub fn mat_otimes(a: &TropMatrix, b: &TropMatrix) -> Result<TropMatrix> {
    a.otimes(b)
}

pub fn mat_power(a: &TropMatrix, k: u64) -> Result<TropMatrix> {
    a.power(k)
}

pub fn scalar_mul(c: &TropScalar, a: &TropMatrix) -> TropMatrix {
    a.scale(c)
}

pub fn norm0(a: &TropMatrix) -> f64 {
    a.norm0()
}

pub fn order_bound(a: &TropMatrix) -> u64 {
    a.order_bound()
}

pub fn mat_leq(a: &TropMatrix, b: &TropMatrix) -> Result<bool> {
    a.leq(b)
}

/// `x ⊕ y` for vectors of equal length.
pub fn vec_oplus(x: &[TropScalar], y: &[TropScalar]) -> Vec<TropScalar> {
    x.iter().zip(y).map(|(a, b)| a.oplus(b)).collect()
}

pub fn vec_scale(c: &TropScalar, x: &[TropScalar]) -> Vec<TropScalar> {
    x.iter().map(|a| a.otimes(c)).collect()
}

pub fn is_eps_vector(x: &[TropScalar]) -> bool {
    x.iter().all(TropScalar::is_eps)
}

impl serde::Serialize for TropMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq((0..self.rows).map(|i| self.row(i)))
    }
}

/// Aligned grid, columns right-justified.
/// One line, rows in brackets: `[[0, -inf], [1, 7/2]]`.
impl fmt::Debug for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}
