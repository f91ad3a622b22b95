//! Integer cubes `(x, y)` with `x <= y` and the total order used by decomposition.

use crate::error::{Error, Result};
use crate::grid::{leq, GridBox};
use std::cmp::Ordering;

/// The cube `{v : x <= v <= y}`; degenerate (`x_i = y_i`) cubes are allowed.
///
/// Ordering compares `x` lexicographically ascending, then `y` lexicographically
/// descending. It refines the constraint that `(x, y)` precedes `(z, w)` whenever
/// `x <= z`, or `x = z` and `y >= w`, componentwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeSpec {
    x: Vec<i64>,
    y: Vec<i64>,
}

impl CubeSpec {
    pub fn new(x: Vec<i64>, y: Vec<i64>) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() || !leq(&x, &y) {
            return Err(Error::InvalidCube { x, y });
        }
        Ok(Self { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[i64] {
        &self.x
    }

    pub fn y(&self) -> &[i64] {
        &self.y
    }

    /// Side lengths `y - x`.
    pub fn eta(&self) -> Vec<i64> {
        self.x.iter().zip(&self.y).map(|(a, b)| b - a).collect()
    }

    /// `y + x` (twice the center).
    pub fn xi(&self) -> Vec<i64> {
        self.x.iter().zip(&self.y).map(|(a, b)| b + a).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        self.x.iter().zip(&self.y).any(|(a, b)| a == b)
    }

    pub fn as_box(&self) -> GridBox {
        GridBox::new(self.x.clone(), self.y.clone()).expect("cube invariant")
    }

    pub fn contains_point(&self, v: &[i64]) -> bool {
        leq(&self.x, v) && leq(v, &self.y)
    }

    /// Rank invariant of the cube module: 1 iff `x <= u <= v <= y`.
    pub fn rank(&self, u: &[i64], v: &[i64]) -> i64 {
        i64::from(leq(&self.x, u) && leq(u, v) && leq(v, &self.y))
    }

    pub fn shifted(&self, by: &[i64]) -> CubeSpec {
        let x = self.x.iter().zip(by).map(|(a, s)| a + s).collect();
        let y = self.y.iter().zip(by).map(|(a, s)| a + s).collect();
        CubeSpec { x, y }
    }
}

impl Ord for CubeSpec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x).then_with(|| other.y.cmp(&self.y))
    }
}

impl PartialOrd for CubeSpec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// 0/1 rank of a single cube at `(u, v)`.
pub fn cube_rank(cube: &CubeSpec, u: &[i64], v: &[i64]) -> i64 {
    cube.rank(u, v)
}

/// The decomposition order on cubes.
pub fn order_cmp(c1: &CubeSpec, c2: &CubeSpec) -> Ordering {
    c1.cmp(c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(x: &[i64], y: &[i64]) -> CubeSpec {
        CubeSpec::new(x.to_vec(), y.to_vec()).unwrap()
    }

    #[test]
    fn cube_rank_examples() {
        let q = c(&[0, 0], &[1, 1]);
        assert_eq!(cube_rank(&q, &[0, 1], &[1, 1]), 1);
        assert_eq!(cube_rank(&q, &[1, 1], &[0, 0]), 0);
        assert_eq!(cube_rank(&c(&[2], &[2]), &[2], &[2]), 1);
    }

    #[test]
    fn order_examples() {
        assert_eq!(order_cmp(&c(&[0], &[2]), &c(&[1], &[3])), Ordering::Less);
        assert_eq!(order_cmp(&c(&[0], &[3]), &c(&[0], &[2])), Ordering::Less);
        assert_eq!(
            order_cmp(&c(&[0, 0], &[1, 1]), &c(&[0, 0], &[1, 1])),
            Ordering::Equal
        );
    }

    #[test]
    fn rejects_inverted_cube() {
        assert!(CubeSpec::new(vec![1, 0], vec![0, 2]).is_err());
        assert!(CubeSpec::new(vec![0], vec![0, 1]).is_err());
    }

    #[test]
    fn derived_coordinates() {
        let q = c(&[1, 2], &[3, 7]);
        assert_eq!(q.eta(), vec![2, 5]);
        assert_eq!(q.xi(), vec![4, 9]);
        assert!(!q.is_degenerate());
        assert!(c(&[1, 1], &[1, 2]).is_degenerate());
    }

    fn arb_cube() -> impl Strategy<Value = CubeSpec> {
        (proptest::collection::vec((-3i64..3, 0i64..3), 2)).prop_map(|v| {
            let x: Vec<i64> = v.iter().map(|p| p.0).collect();
            let y: Vec<i64> = v.iter().map(|p| p.0 + p.1).collect();
            CubeSpec::new(x, y).unwrap()
        })
    }

    proptest! {
        #[test]
        fn order_refines_partial_constraints(a in arb_cube(), b in arb_cube()) {
            if leq(a.x(), b.x()) && a.x() != b.x() {
                prop_assert_eq!(a.cmp(&b), Ordering::Less);
            }
            if a.x() == b.x() && leq(b.y(), a.y()) {
                prop_assert_ne!(a.cmp(&b), Ordering::Greater);
            }
        }
    }
}
