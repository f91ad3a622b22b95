//! Signed cube sets and the bijection with generalized rank invariants.

use crate::cube::CubeSpec;
use crate::error::{Error, Result};
use crate::grid::{leq, GridBox};
use crate::rank_invariant::RankInvariant;
use std::collections::BTreeMap;

/// A finite integer combination of cubes, kept canonical: one entry per cube,
/// no zero coefficients. Iteration follows the decomposition order on cubes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedCubeSet {
    n: usize,
    terms: BTreeMap<CubeSpec, i64>,
}

impl SignedCubeSet {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (CubeSpec, i64)>,
    {
        let mut out = Self::new(n);
        for (c, k) in terms {
            out.add(c, k)?;
        }
        Ok(out)
    }

    /// Adds `coeff * cube`, merging with an existing entry.
    pub fn add(&mut self, cube: CubeSpec, coeff: i64) -> Result<()> {
        if cube.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: cube.n(),
            });
        }
        let slot = self.terms.entry(cube).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.retain(|_, v| *v != 0);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, cube: &CubeSpec) -> i64 {
        self.terms.get(cube).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CubeSpec, i64)> + '_ {
        self.terms.iter().map(|(c, k)| (c, *k))
    }

    pub fn is_positive(&self) -> bool {
        self.terms.values().all(|&k| k > 0)
    }

    /// Formal sum.
    pub fn plus(&self, other: &SignedCubeSet) -> Result<SignedCubeSet> {
        let mut out = self.clone();
        for (c, k) in other.iter() {
            out.add(c.clone(), k)?;
        }
        Ok(out)
    }

    /// Drops cubes of zero volume. This is lossy for the rank invariant but
    /// leaves every power-sum and integral invariant unchanged.
    pub fn without_degenerate(&self) -> SignedCubeSet {
        SignedCubeSet {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(c, _)| !c.is_degenerate())
                .map(|(c, k)| (c.clone(), *k))
                .collect(),
        }
    }

    pub fn shifted(&self, by: &[i64]) -> SignedCubeSet {
        SignedCubeSet {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(c, k)| (c.shifted(by), *k))
                .collect(),
        }
    }

    /// Smallest box containing every cube, if any.
    pub fn hull(&self) -> Option<GridBox> {
        let mut it = self.terms.keys();
        let first = it.next()?.as_box();
        Some(it.fold(first, |b, c| b.hull(&c.as_box()).expect("same n")))
    }
}

/// `sum_i c_i * rank_{u,v}(cube_i)`.
pub fn signed_rank(x: &SignedCubeSet, u: &[i64], v: &[i64]) -> i64 {
    x.iter().map(|(c, k)| k * c.rank(u, v)).sum()
}

/// Enumerates every pair `(x, y)` in the box in decomposition order:
/// `x` lexicographically ascending, then `y` descending.
fn pairs_in_order(bbox: &GridBox) -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut out = Vec::new();
    for x in bbox.points() {
        let upper = bbox.sub_box(&x, bbox.hi()).expect("x inside box");
        let mut ys: Vec<Vec<i64>> = upper.points().collect();
        ys.reverse();
        out.extend(ys.into_iter().map(|y| (x.clone(), y)));
    }
    out
}

/// Greedy decomposition: repeatedly takes the minimal pair `(x, y)` with a
/// nonzero value `c`, records `c * (x, y)` and subtracts the cube's rank
/// function. Every pair touched by a subtraction comes after the pivot, so a
/// single forward pass over the ordered pairs suffices.
pub fn decompose(rho: &RankInvariant) -> SignedCubeSet {
    let bbox = rho.bbox().clone();
    let mut work = rho.clone();
    let mut out = SignedCubeSet::new(rho.n());
    let order = pairs_in_order(&bbox);
    for (cursor, (x, y)) in order.iter().enumerate() {
        let idx = work.pair_index(x, y).expect("pair inside box");
        let c = work.value_at(idx);
        if c == 0 {
            continue;
        }
        let cube = CubeSpec::new(x.clone(), y.clone()).expect("x <= y by enumeration");
        let span = cube.as_box();
        for u in span.points() {
            let tail = span.sub_box(&u, y).expect("u inside cube");
            for v in tail.points() {
                let k = work.pair_index(&u, &v).expect("inside box");
                work.add_at(k, -c);
            }
        }
        debug_assert!(order[..=cursor].iter().all(|(u, v)| work.get(u, v) == 0));
        out.add(cube, c).expect("same n");
    }
    debug_assert!(work.is_zero());
    out
}

/// Tabulates the rank function of `x` on `bbox`; every cube must lie in the box.
pub fn reconstruct(x: &SignedCubeSet, bbox: &GridBox) -> Result<RankInvariant> {
    if x.n() != bbox.n() {
        return Err(Error::DimensionMismatch {
            expected: bbox.n(),
            found: x.n(),
        });
    }
    let mut out = RankInvariant::zero(bbox.clone());
    for (cube, c) in x.iter() {
        let span = cube.as_box();
        if !bbox.contains_box(&span) {
            return Err(Error::OutsideBox(cube.y().to_vec()));
        }
        for u in span.points() {
            let tail = span.sub_box(&u, cube.y()).expect("u inside cube");
            for v in tail.points() {
                debug_assert!(leq(&u, &v));
                let k = out.pair_index(&u, &v).expect("inside box");
                out.add_at(k, c);
            }
        }
    }
    Ok(out)
}
