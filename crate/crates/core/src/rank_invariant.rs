//! Generalized rank invariants: integer functions on grid pairs `u <= v` with
//! support inside a box.

use crate::error::{Error, Result};
use crate::grid::{leq, GridBox};

/// Dense table of values on all pairs `lo <= u <= v <= hi`. Pairs outside the
/// table are implicitly zero, so both defining conditions hold by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankInvariant {
    bbox: GridBox,
    /// Per axis: the ordered list of `(u_i, v_i)` offsets with `u_i <= v_i`.
    axis_pairs: Vec<Vec<(usize, usize)>>,
    values: Vec<i64>,
}

fn axis_pairs(side: usize) -> Vec<(usize, usize)> {
    (0..side)
        .flat_map(|u| (u..side).map(move |v| (u, v)))
        .collect()
}

impl RankInvariant {
    pub fn zero(bbox: GridBox) -> Self {
        let axis_pairs: Vec<_> = (0..bbox.n()).map(|i| axis_pairs(bbox.side(i))).collect();
        let len = axis_pairs.iter().map(Vec::len).product();
        Self {
            bbox,
            axis_pairs,
            values: vec![0; len],
        }
    }

    /// Builds an invariant from explicit entries. Entries with `u` not below `v`
    /// or outside the box must be zero.
    pub fn from_entries<I>(bbox: GridBox, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Vec<i64>, i64)>,
    {
        let mut out = Self::zero(bbox);
        for (u, v, val) in entries {
            let n = out.bbox.n();
            if u.len() != n || v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: if u.len() != n { u.len() } else { v.len() },
                });
            }
            match out.pair_index(&u, &v) {
                Some(idx) => out.values[idx] += val,
                None if val == 0 => {}
                None => return Err(Error::NotRankInvariant { u, v }),
            }
        }
        Ok(out)
    }

    pub fn from_fn<F>(bbox: GridBox, mut f: F) -> Self
    where
        F: FnMut(&[i64], &[i64]) -> i64,
    {
        let mut out = Self::zero(bbox);
        for idx in 0..out.values.len() {
            let (u, v) = out.pair_at(idx);
            out.values[idx] = f(&u, &v);
        }
        out
    }

    pub fn bbox(&self) -> &GridBox {
        &self.bbox
    }

    pub fn n(&self) -> usize {
        self.bbox.n()
    }

    /// Number of pairs `u <= v` in the box.
    pub fn pair_count(&self) -> usize {
        self.values.len()
    }

    pub(crate) fn pair_index(&self, u: &[i64], v: &[i64]) -> Option<usize> {
        if !self.bbox.contains(u) || !self.bbox.contains(v) || !leq(u, v) {
            return None;
        }
        let lo = self.bbox.lo();
        let mut idx = 0usize;
        for i in 0..self.n() {
            let side = self.bbox.side(i);
            let a = (u[i] - lo[i]) as usize;
            let b = (v[i] - lo[i]) as usize;
            let local = a * side - a * a.saturating_sub(1) / 2 + (b - a);
            idx = idx * self.axis_pairs[i].len() + local;
        }
        Some(idx)
    }

    pub(crate) fn pair_at(&self, mut idx: usize) -> (Vec<i64>, Vec<i64>) {
        let n = self.n();
        let lo = self.bbox.lo();
        let mut u = vec![0; n];
        let mut v = vec![0; n];
        for i in (0..n).rev() {
            let pairs = &self.axis_pairs[i];
            let (a, b) = pairs[idx % pairs.len()];
            idx /= pairs.len();
            u[i] = lo[i] + a as i64;
            v[i] = lo[i] + b as i64;
        }
        (u, v)
    }

    /// Value at `(u, v)`; zero off the table.
    pub fn get(&self, u: &[i64], v: &[i64]) -> i64 {
        self.pair_index(u, v).map_or(0, |i| self.values[i])
    }

    pub(crate) fn value_at(&self, idx: usize) -> i64 {
        self.values[idx]
    }

    pub(crate) fn add_at(&mut self, idx: usize, delta: i64) {
        self.values[idx] += delta;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// All pairs with their values, in table order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<i64>, Vec<i64>, i64)> + '_ {
        (0..self.values.len()).map(move |i| {
            let (u, v) = self.pair_at(i);
            (u, v, self.values[i])
        })
    }

    /// Nonzero entries in table order.
    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<i64>, Vec<i64>, i64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0)
            .map(move |(i, &val)| {
                let (u, v) = self.pair_at(i);
                (u, v, val)
            })
    }

    /// The same function tabulated over a larger box.
    pub fn extended_to(&self, bbox: &GridBox) -> Result<RankInvariant> {
        if !bbox.contains_box(&self.bbox) {
            return Err(Error::OutsideBox(self.bbox.hi().to_vec()));
        }
        RankInvariant::from_entries(bbox.clone(), self.nonzero())
    }

    /// Pointwise sum over the hull of both boxes.
    pub fn plus(&self, other: &RankInvariant) -> Result<RankInvariant> {
        let hull = self.bbox.hull(&other.bbox)?;
        RankInvariant::from_entries(hull, self.nonzero().chain(other.nonzero()))
    }

    /// True when both tables describe the same function on `Z^n x Z^n`.
    pub fn same_function(&self, other: &RankInvariant) -> bool {
        self.n() == other.n()
            && self.nonzero().all(|(u, v, x)| other.get(&u, &v) == x)
            && other.nonzero().all(|(u, v, x)| self.get(&u, &v) == x)
    }
}
