//! Counting checks for the algebra generated by the power sums: Hilbert series
//! coefficients, generator counts, admissible monomials and a Pascal identity.

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::invariants::InvariantIndex;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Graded dimensions, index = degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertCoeffs {
    pub n: usize,
    pub coeffs: Vec<BigInt>,
}

/// Coefficients up to `max_degree` of
/// `prod_{d >= 0} (1 - t^(n+d))^-C(d+2n-1, 2n-1)`.
pub fn hilbert_product_coeffs(n: usize, max_degree: usize) -> HilbertCoeffs {
    assert!(n >= 1, "n must be positive");
    let len = max_degree + 1;
    let mut poly = vec![BigInt::zero(); len];
    poly[0] = BigInt::one();
    let two_n = 2 * n as u64;
    for g in n..=max_degree {
        let d = (g - n) as u64;
        let e = binomial(d + two_n - 1, two_n - 1);
        if e.is_zero() {
            continue;
        }
        // (1 - t^g)^-e = sum_j C(e + j - 1, j) t^(g j)
        let mut factor = vec![BigInt::zero(); len];
        let mut coeff = BigInt::one();
        let mut j = 0usize;
        while j * g < len {
            factor[j * g] = coeff.clone();
            j += 1;
            coeff = coeff * (&e + BigInt::from(j - 1)) / BigInt::from(j);
        }
        poly = truncated_product(&poly, &factor);
    }
    HilbertCoeffs { n, coeffs: poly }
}

fn truncated_product(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let len = a.len();
    let mut out = vec![BigInt::zero(); len];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// `C(d+n-1, 2n-1)` for `d >= n`, else 0.
pub fn count_generators(n: usize, d: usize) -> BigInt {
    if d < n {
        return BigInt::zero();
    }
    binomial((d + n - 1) as u64, (2 * n - 1) as u64)
}

/// Number of indices `(a, b)` with `a` positive and degree `d`, by enumeration.
pub fn count_generators_brute(n: usize, d: usize) -> usize {
    InvariantIndex::of_degree(n, d as u32).len()
}

/// Number of multisets of generators whose degrees sum to `d`, by recursion
/// over an explicit generator list.
pub fn free_algebra_dim(n: usize, d: usize) -> BigInt {
    let degrees: Vec<usize> = (n..=d)
        .flat_map(|g| InvariantIndex::of_degree(n, g as u32))
        .map(|idx| idx.degree() as usize)
        .collect();
    let mut memo: HashMap<(usize, usize), BigInt> = HashMap::new();
    multisets(&degrees, 0, d, &mut memo)
}

fn multisets(
    degrees: &[usize],
    i: usize,
    remaining: usize,
    memo: &mut HashMap<(usize, usize), BigInt>,
) -> BigInt {
    if remaining == 0 {
        return BigInt::one();
    }
    if i == degrees.len() {
        return BigInt::zero();
    }
    if let Some(v) = memo.get(&(i, remaining)) {
        return v.clone();
    }
    let g = degrees[i];
    let mut total = BigInt::zero();
    let mut used = 0;
    while used <= remaining {
        total += multisets(degrees, i + 1, remaining - used, memo);
        used += g;
    }
    memo.insert((i, remaining), total.clone());
    total
}

/// Checks the basis condition on an `m x n` array of exponent pairs
/// `(a_ij, b_ij)`: every row that is not identically zero has all `a_ij >= 1`.
pub fn admissible_monomial(n: usize, m: usize, exponents: &[Vec<(u32, u32)>]) -> Result<bool> {
    if exponents.len() != m || exponents.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument(format!(
            "exponent array is not {m} x {n}"
        )));
    }
    Ok(exponents.iter().all(|row| {
        let nonzero = row.iter().any(|&(a, b)| a > 0 || b > 0);
        !nonzero || row.iter().all(|&(a, _)| a >= 1)
    }))
}

/// All rows `(a_1..a_n, b_1..b_n)` of total degree at most `d`.
fn rows_up_to(n: usize, d: usize) -> Vec<Vec<(u32, u32)>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; 2 * n];
    fn rec(pos: usize, left: u32, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<(u32, u32)>>) {
        if pos == cur.len() {
            out.push((0..n).map(|j| (cur[j], cur[n + j])).collect());
            return;
        }
        for v in 0..=left {
            cur[pos] = v;
            rec(pos + 1, left - v, n, cur, out);
        }
        cur[pos] = 0;
    }
    rec(0, d as u32, n, &mut cur, &mut out);
    out
}

fn row_degree(row: &[(u32, u32)]) -> usize {
    row.iter().map(|&(a, b)| (a + b) as usize).sum()
}

/// Number of orbits, under permutation of the `m` rows, of admissible
/// monomials of total degree `d`. Orbits are enumerated as non-increasing
/// sequences of row indices.
pub fn admissible_orbit_count(n: usize, m: usize, d: usize) -> u64 {
    let rows = rows_up_to(n, d);
    let degrees: Vec<usize> = rows.iter().map(|r| row_degree(r)).collect();
    let mut picked: Vec<usize> = Vec::with_capacity(m);
    let mut count = 0u64;
    fn rec(
        rows: &[Vec<(u32, u32)>],
        degrees: &[usize],
        n: usize,
        m: usize,
        max_index: usize,
        left: usize,
        picked: &mut Vec<usize>,
        count: &mut u64,
    ) {
        if picked.len() == m {
            if left == 0 {
                let array: Vec<Vec<(u32, u32)>> = picked.iter().map(|&i| rows[i].clone()).collect();
                if admissible_monomial(n, m, &array).expect("shape by construction") {
                    *count += 1;
                }
            }
            return;
        }
        for i in 0..=max_index {
            if degrees[i] <= left {
                picked.push(i);
                rec(rows, degrees, n, m, i, left - degrees[i], picked, count);
                picked.pop();
            }
        }
    }
    if !rows.is_empty() {
        rec(
            &rows,
            &degrees,
            n,
            m,
            rows.len() - 1,
            d,
            &mut picked,
            &mut count,
        );
    }
    count
}

/// `C(x+k, x) == sum_{k'=0..k} C(x+k'-1, x-1)`.
pub fn pascal_identity_check(x: u64, k: u64) -> bool {
    assert!(x >= 1, "x must be positive");
    let lhs = binomial(x + k, x);
    let rhs: BigInt = (0..=k).map(|kp| binomial(x + kp - 1, x - 1)).sum();
    lhs == rhs
}

/// One line of a verification table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRow {
    pub check: &'static str,
    pub n: usize,
    pub degree: usize,
    pub expected: String,
    pub found: String,
    pub pass: bool,
}

fn row(check: &'static str, n: usize, degree: usize, expected: String, found: String) -> CheckRow {
    let pass = expected == found;
    CheckRow {
        check,
        n,
        degree,
        expected,
        found,
        pass,
    }
}

/// Runs every check for one `n` up to `max_degree`. Orbit stabilization is
/// only enumerated up to degree 6, where it stays cheap.
pub fn run_checks(n: usize, max_degree: usize) -> Vec<CheckRow> {
    let hs = hilbert_product_coeffs(n, max_degree);
    let mut out = Vec::new();
    for d in 0..=max_degree {
        out.push(row(
            "hilbert-vs-free-algebra",
            n,
            d,
            hs.coeffs[d].to_string(),
            free_algebra_dim(n, d).to_string(),
        ));
        out.push(row(
            "generator-count",
            n,
            d,
            count_generators(n, d).to_string(),
            count_generators_brute(n, d).to_string(),
        ));
        if d <= 6 && n <= 2 {
            let dim = free_algebra_dim(n, d).to_string();
            for m in [d.max(1), d + 1] {
                out.push(row(
                    "orbit-stabilization",
                    n,
                    d,
                    dim.clone(),
                    admissible_orbit_count(n, m, d).to_string(),
                ));
            }
        }
    }
    let kmax = max_degree as u64;
    let pascal_ok = (1..=kmax.max(1)).all(|x| (0..=kmax).all(|k| pascal_identity_check(x, k)));
    out.push(row(
        "pascal-identity",
        n,
        max_degree,
        "true".into(),
        pascal_ok.to_string(),
    ));
    out
}
