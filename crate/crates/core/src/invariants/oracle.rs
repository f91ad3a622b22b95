//! Exact integration of the invariant's defining integral against a rank table.
//!
//! With integral semantics the rank function is constant on open unit cells:
//! `rho(z, z') = rho(floor z, ceil z')`. Coordinates with `a_i = 1` contribute
//! one variable and unit cells `(c, c+1)`, which see the pair `(c, c+1)`.
//! Coordinates with `a_i > 1` contribute a pair `(z_i, z'_i)` with
//! `z_i <= z'_i`; the cell `(c, c+1) x (d, d+1)` with `c <= d` sees the pair
//! `(c, d+1)`, and is cut to a triangle when `c = d`. The integrand factors
//! over coordinates, so each table entry contributes its value times a product
//! of one- and two-variable polynomial integrals.

use super::index::InvariantIndex;
use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::rank_invariant::RankInvariant;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

fn r(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

/// `int_c^{c+1} z^p dz`.
fn unit_integral(c: i64, p: u32) -> BigRational {
    let c = BigInt::from(c);
    let c1: BigInt = &c + 1;
    BigRational::new(c1.pow(p + 1) - c.pow(p + 1), BigInt::from(p + 1))
}

/// `int int_{c <= z <= z' <= c+1} z^p z'^q`.
fn triangle_integral(c: i64, p: u32, q: u32) -> BigRational {
    let cb = BigInt::from(c);
    let c1: BigInt = &cb + 1;
    let s = p + q + 2;
    let outer = BigRational::new(c1.pow(s) - cb.pow(s), BigInt::from(s));
    let inner = r(cb.pow(p + 1)) * unit_integral(c, q);
    (outer - inner) / r(BigInt::from(p + 1))
}

/// `(z' - z)^pw * (z + z')^b` as monomials `coeff * z^i z'^j`.
fn pair_polynomial(pw: u32, b: u32) -> Vec<(u32, u32, BigInt)> {
    let mut terms: HashMap<(u32, u32), BigInt> = HashMap::new();
    for s in 0..=pw {
        let sign = if s % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let c1 = binomial(u64::from(pw), u64::from(s)) * sign;
        for t in 0..=b {
            let c2 = binomial(u64::from(b), u64::from(t));
            *terms
                .entry((s + t, pw - s + b - t))
                .or_insert_with(BigInt::zero) += &c1 * c2;
        }
    }
    let mut out: Vec<_> = terms
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((i, j), c)| (i, j, c))
        .collect();
    out.sort_by_key(|t| (t.0, t.1));
    out
}

/// Weight of one coordinate for the table pair `(u, v)` on that axis.
fn coordinate_weight(a: u32, b: u32, u: i64, v: i64) -> BigRational {
    if a == 1 {
        return if v == u + 1 {
            unit_integral(u, b)
        } else {
            BigRational::zero()
        };
    }
    if v < u + 1 {
        return BigRational::zero();
    }
    let (c, d) = (u, v - 1);
    pair_polynomial(a - 2, b)
        .into_iter()
        .map(|(i, j, coeff)| {
            let integral = if c == d {
                triangle_integral(c, i, j)
            } else {
                unit_integral(c, i) * unit_integral(d, j)
            };
            integral * r(coeff)
        })
        .sum()
}

/// The defining integral of the `(a, b)` invariant for the rank function `rho`,
/// computed exactly.
pub fn f_integral_oracle(idx: &InvariantIndex, rho: &RankInvariant) -> Result<BigRational> {
    if idx.n() != rho.n() {
        return Err(Error::DimensionMismatch {
            expected: idx.n(),
            found: rho.n(),
        });
    }
    let mut cache: HashMap<(usize, i64, i64), BigRational> = HashMap::new();
    let mut total = BigRational::zero();
    for (u, v, val) in rho.nonzero() {
        let mut w = BigRational::one();
        for i in 0..idx.n() {
            let f = cache
                .entry((i, u[i], v[i]))
                .or_insert_with(|| coordinate_weight(idx.a()[i], idx.b()[i], u[i], v[i]));
            if f.is_zero() {
                w = BigRational::zero();
                break;
            }
            w *= &*f;
        }
        if !w.is_zero() {
            total += w * BigInt::from(val);
        }
    }
    Ok(total)
}
