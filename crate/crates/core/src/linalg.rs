//! Dense integer matrices with exact, fraction-free rank.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// A dense row-major matrix over `Z`. Rank is taken over `Q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major data; `None` if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<i64>) -> Option<Self> {
        if data.len() != rows * cols {
            return None;
        }
        Some(Self {
            rows,
            cols,
            data: data.into_iter().map(BigInt::from).collect(),
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_row_major(r, c, rows.concat()).expect("shape checked")
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

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_row_major(&self) -> Option<Vec<i64>> {
        self.data.iter().map(|v| i64::try_from(v).ok()).collect()
    }

    /// `self * rhs`; panics on inner-dimension mismatch.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum `diag(self, other)`.
    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.get(r, c).clone());
            }
        }
        out
    }

    /// Rank over `Q` by Bareiss fraction-free elimination; all intermediate
    /// values stay integral and every division is exact.
    pub fn rank(&self) -> usize {
        let mut a = self.data.clone();
        let (m, n) = (self.rows, self.cols);
        let mut prev = BigInt::one();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..n {
            if row == m {
                break;
            }
            let Some(p) = (row..m).find(|&r| !a[r * n + col].is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..n {
                    a.swap(p * n + c, row * n + c);
                }
            }
            let pivot = a[row * n + col].clone();
            for r in row + 1..m {
                let factor = a[r * n + col].clone();
                for c in col + 1..n {
                    let v = &pivot * &a[r * n + c] - &factor * &a[row * n + c];
                    a[r * n + c] = v / &prev;
                }
                a[r * n + col] = BigInt::zero();
            }
            prev = pivot;
            row += 1;
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}
