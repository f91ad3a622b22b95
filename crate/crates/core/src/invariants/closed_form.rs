//! Closed-form values of the integral invariants on cubes, the power sums, and
//! the per-coordinate expansion of the former in `(eta, xi)` monomials.

use super::index::InvariantIndex;
use crate::combinatorics::{binomial, factorial};
use crate::cube::CubeSpec;
use crate::decomposition::SignedCubeSet;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn ratio(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// One-dimensional invariant of the interval `[x, y]`.
///
/// For `a = 1` this is `(y^(b+1) - x^(b+1)) / (b+1)`. For `a >= 2` it is the
/// integral over the triangle `x <= z <= z' <= y`, written as a sum over odd `i`
/// of `(a-2)! b! / ((a-1+i)! (b+1-i)!) * eta^(a-1+i) * xi^(b+1-i)`.
pub fn f_interval_1d(a: u32, b: u32, x: i64, y: i64) -> Result<BigRational> {
    if a == 0 {
        return Err(Error::IndexOutsideDomain(format!("a={a}")));
    }
    if x > y {
        return Err(Error::InvalidCube {
            x: vec![x],
            y: vec![y],
        });
    }
    if a == 1 {
        let num = int(y).pow(b + 1) - int(x).pow(b + 1);
        return Ok(ratio(num, BigInt::from(b + 1)));
    }
    let eta = int(y - x);
    let xi = int(y + x);
    let lead = factorial(a - 2) * factorial(b);
    let mut acc = BigRational::zero();
    for i in (1..=b + 1).step_by(2) {
        let den = factorial(a - 1 + i) * factorial(b + 1 - i);
        let mono = eta.pow(a - 1 + i) * xi.pow(b + 1 - i);
        acc += ratio(&lead * mono, den);
    }
    Ok(acc)
}

/// Monomials `coeff * eta^alpha * xi^beta` of the one-dimensional invariant.
/// Every term has `alpha >= a` and `alpha + beta = a + b`.
pub fn interval_expansion(a: u32, b: u32) -> Vec<(u32, u32, BigRational)> {
    assert!(a >= 1, "a must be positive");
    let mut out = Vec::new();
    if a == 1 {
        let den = BigInt::from(b + 1) * BigInt::from(2).pow(b);
        for i in (1..=b + 1).step_by(2) {
            let c = ratio(binomial(u64::from(b + 1), u64::from(i)), den.clone());
            out.push((i, b + 1 - i, c));
        }
    } else {
        let lead = factorial(a - 2) * factorial(b);
        for i in (1..=b + 1).step_by(2) {
            let den = factorial(a - 1 + i) * factorial(b + 1 - i);
            out.push((a - 1 + i, b + 1 - i, ratio(lead.clone(), den)));
        }
    }
    out
}

fn check_n(idx: &InvariantIndex, n: usize) -> Result<()> {
    if idx.n() != n {
        return Err(Error::DimensionMismatch {
            expected: idx.n(),
            found: n,
        });
    }
    Ok(())
}

/// Product of one-dimensional invariants across coordinates; zero for degenerate cubes.
pub fn f_cube(idx: &InvariantIndex, cube: &CubeSpec) -> Result<BigRational> {
    check_n(idx, cube.n())?;
    let mut acc = BigRational::one();
    for i in 0..idx.n() {
        acc *= f_interval_1d(idx.a()[i], idx.b()[i], cube.x()[i], cube.y()[i])?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

pub fn f_signed(idx: &InvariantIndex, x: &SignedCubeSet) -> Result<BigRational> {
    check_n(idx, x.n())?;
    let mut acc = BigRational::zero();
    for (cube, c) in x.iter() {
        acc += f_cube(idx, cube)? * BigInt::from(c);
    }
    Ok(acc)
}

/// `prod_j eta_j^a_j * xi_j^b_j` for one cube.
pub fn p_cube(idx: &InvariantIndex, cube: &CubeSpec) -> Result<BigInt> {
    check_n(idx, cube.n())?;
    let eta = cube.eta();
    let xi = cube.xi();
    Ok((0..idx.n())
        .map(|j| int(eta[j]).pow(idx.a()[j]) * int(xi[j]).pow(idx.b()[j]))
        .product())
}

/// Power sum `sum_i c_i prod_j eta_ij^a_j xi_ij^b_j`.
pub fn p_signed(idx: &InvariantIndex, x: &SignedCubeSet) -> Result<BigRational> {
    check_n(idx, x.n())?;
    let mut acc = BigInt::zero();
    for (cube, c) in x.iter() {
        acc += p_cube(idx, cube)? * c;
    }
    Ok(BigRational::from_integer(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cube(x: &[i64], y: &[i64]) -> CubeSpec {
        CubeSpec::new(x.to_vec(), y.to_vec()).unwrap()
    }

    fn idx(a: &[u32], b: &[u32]) -> InvariantIndex {
        InvariantIndex::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn interval_examples() {
        assert_eq!(f_interval_1d(1, 1, 1, 3).unwrap(), q(4, 1));
        assert_eq!(f_interval_1d(2, 0, 0, 2).unwrap(), q(2, 1));
        assert_eq!(f_interval_1d(3, 0, 0, 1).unwrap(), q(1, 6));
        assert_eq!(f_interval_1d(4, 2, 3, 3).unwrap(), q(0, 1));
        assert!(matches!(
            f_interval_1d(0, 1, 0, 1),
            Err(Error::IndexOutsideDomain(_))
        ));
    }

    #[test]
    fn cube_examples() {
        let c = cube(&[0, 0], &[2, 3]);
        assert_eq!(f_cube(&idx(&[1, 1], &[0, 0]), &c).unwrap(), q(6, 1));
        assert_eq!(f_cube(&idx(&[2, 1], &[0, 0]), &c).unwrap(), q(6, 1));
        assert_eq!(
            f_cube(&idx(&[3, 2], &[1, 4]), &cube(&[1, 1], &[1, 2])).unwrap(),
            q(0, 1)
        );
        assert!(f_cube(&idx(&[1], &[0]), &c).is_err());
    }

    #[test]
    fn signed_examples() {
        let x =
            SignedCubeSet::from_terms(1, [(cube(&[0], &[2]), 1), (cube(&[1], &[3]), 1)]).unwrap();
        assert_eq!(f_signed(&idx(&[1], &[0]), &x).unwrap(), q(4, 1));
        assert_eq!(p_signed(&idx(&[1], &[1]), &x).unwrap(), q(12, 1));

        let one = SignedCubeSet::from_terms(2, [(cube(&[0, 0], &[2, 3]), 1)]).unwrap();
        assert_eq!(p_signed(&idx(&[1, 1], &[0, 0]), &one).unwrap(), q(6, 1));
        let mut padded = one.clone();
        padded.add(cube(&[5, 5], &[5, 7]), 1).unwrap();
        assert_eq!(
            p_signed(&idx(&[1, 1], &[0, 0]), &padded).unwrap(),
            p_signed(&idx(&[1, 1], &[0, 0]), &one).unwrap()
        );
    }

    #[test]
    fn expansion_evaluates_to_closed_form() {
        for a in 1..=5u32 {
            for b in 0..=4u32 {
                let terms = interval_expansion(a, b);
                for (alpha, beta, _) in &terms {
                    assert!(*alpha >= a && alpha + beta == a + b);
                }
                for (x, y) in [(-2i64, 3i64), (0, 1), (1, 4), (2, 2)] {
                    let eta = int(y - x);
                    let xi = int(y + x);
                    let via_terms: BigRational = terms
                        .iter()
                        .map(|(al, be, c)| {
                            c * BigRational::from_integer(eta.pow(*al) * xi.pow(*be))
                        })
                        .sum();
                    assert_eq!(via_terms, f_interval_1d(a, b, x, y).unwrap(), "a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn one_dimensional_sanity() {
        for x in -3i64..=3 {
            for y in x..=3 {
                assert_eq!(f_interval_1d(1, 0, x, y).unwrap(), q(y - x, 1));
                assert_eq!(f_interval_1d(2, 0, x, y).unwrap(), q((y - x) * (y - x), 2));
            }
        }
    }
}
