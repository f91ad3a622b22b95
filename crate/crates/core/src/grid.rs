//! Integer grid boxes and point indexing.

use crate::error::{Error, Result};

/// Componentwise `a <= b`.
pub fn leq(a: &[i64], b: &[i64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A bounded box `lo <= v <= hi` in `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridBox {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl GridBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() || !leq(&lo, &hi) {
            return Err(Error::InvalidBox { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    /// Side length along `axis` (number of grid points).
    pub fn side(&self, axis: usize) -> usize {
        (self.hi[axis] - self.lo[axis] + 1) as usize
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        (0..self.n()).map(|i| self.side(i)).product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        p.len() == self.n() && leq(&self.lo, p) && leq(p, &self.hi)
    }

    /// Smallest box containing both.
    pub fn hull(&self, other: &GridBox) -> Result<GridBox> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        let lo = self
            .lo
            .iter()
            .zip(&other.lo)
            .map(|(a, b)| *a.min(b))
            .collect();
        let hi = self
            .hi
            .iter()
            .zip(&other.hi)
            .map(|(a, b)| *a.max(b))
            .collect();
        GridBox::new(lo, hi)
    }

    pub fn contains_box(&self, other: &GridBox) -> bool {
        self.contains(&other.lo) && self.contains(&other.hi)
    }

    /// Row-major index; the last axis varies fastest, so index order is lexicographic order.
    pub fn index_of(&self, p: &[i64]) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let mut idx = 0usize;
        for i in 0..self.n() {
            idx = idx * self.side(i) + (p[i] - self.lo[i]) as usize;
        }
        Some(idx)
    }

    pub fn point_at(&self, mut idx: usize) -> Vec<i64> {
        let mut p = vec![0; self.n()];
        for i in (0..self.n()).rev() {
            let s = self.side(i);
            p[i] = self.lo[i] + (idx % s) as i64;
            idx /= s;
        }
        p
    }

    /// All points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.len()).map(move |i| self.point_at(i))
    }

    /// The sub-box `[lo, hi]`, which must lie inside this box.
    pub fn sub_box(&self, lo: &[i64], hi: &[i64]) -> Result<GridBox> {
        let b = GridBox::new(lo.to_vec(), hi.to_vec())?;
        if !self.contains_box(&b) {
            return Err(Error::OutsideBox(hi.to_vec()));
        }
        Ok(b)
    }
}

/// `p + e_axis`.
pub fn step(p: &[i64], axis: usize) -> Vec<i64> {
    let mut q = p.to_vec();
    q[axis] += 1;
    q
}
