//! Change of basis between the integral invariants and the power sums in a
//! fixed degree.

use super::closed_form::interval_expansion;
use super::index::InvariantIndex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// `F = T p` in one degree. Indices are in lexicographic order on `(a, b)`,
/// which extends the order `(a, b) <= (a', b')` iff `a <= a'`. Because every
/// monomial of `F_{a,b}` has `eta`-exponent at least `a`, `T` is upper
/// triangular in this order.
#[derive(Debug, Clone, PartialEq)]
pub struct ChangeOfBasis {
    pub indices: Vec<InvariantIndex>,
    /// `t[row][col]`: coefficient of `p_{indices[col]}` in `F_{indices[row]}`.
    pub t: Vec<Vec<BigRational>>,
    pub t_inv: Vec<Vec<BigRational>>,
}

/// Symbolic expansion of `F_{a,b}` on one cube as `p`-monomials.
pub fn expand_f(idx: &InvariantIndex) -> HashMap<InvariantIndex, BigRational> {
    let mut acc: Vec<(Vec<u32>, Vec<u32>, BigRational)> =
        vec![(Vec::new(), Vec::new(), BigRational::one())];
    for i in 0..idx.n() {
        let terms = interval_expansion(idx.a()[i], idx.b()[i]);
        acc = acc
            .into_iter()
            .flat_map(|(al, be, c)| {
                terms.iter().map(move |(a2, b2, c2)| {
                    let mut al = al.clone();
                    let mut be = be.clone();
                    al.push(*a2);
                    be.push(*b2);
                    (al, be, &c * c2)
                })
            })
            .collect();
    }
    let mut out: HashMap<InvariantIndex, BigRational> = HashMap::new();
    for (al, be, c) in acc {
        let key = InvariantIndex::new(al, be).expect("expansion exponents are positive");
        *out.entry(key).or_insert_with(BigRational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Expected diagonal entry: `prod_{a_i = 1} 2^-b_i * prod_{a_i > 1} 1/(a_i (a_i - 1))`.
pub fn diagonal_coefficient(idx: &InvariantIndex) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..idx.n() {
        let (a, b) = (idx.a()[i], idx.b()[i]);
        let den = if a == 1 {
            num_bigint::BigInt::from(2).pow(b)
        } else {
            num_bigint::BigInt::from(a) * (a - 1)
        };
        acc /= BigRational::from_integer(den);
    }
    acc
}

/// Inverse of an upper-triangular matrix with nonzero diagonal, by back substitution.
fn upper_triangular_inverse(t: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = t.len();
    let mut inv = vec![vec![BigRational::zero(); n]; n];
    for col in 0..n {
        for row in (0..=col).rev() {
            let mut s = if row == col {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            for k in row + 1..=col {
                s -= &t[row][k] * &inv[k][col];
            }
            inv[row][col] = s / &t[row][row];
        }
    }
    inv
}

/// Builds `T` and `T^-1` for all indices of exactly `degree` in `n` parameters.
/// Degrees below `n` have no indices and give empty matrices.
pub fn f_to_p_matrix(n: usize, degree: u32) -> ChangeOfBasis {
    let indices = InvariantIndex::of_degree(n, degree);
    let pos: HashMap<&InvariantIndex, usize> =
        indices.iter().enumerate().map(|(k, i)| (i, k)).collect();
    let m = indices.len();
    let mut t = vec![vec![BigRational::zero(); m]; m];
    for (row, idx) in indices.iter().enumerate() {
        for (mono, c) in expand_f(idx) {
            let col = pos[&mono];
            t[row][col] = c;
        }
    }
    let t_inv = upper_triangular_inverse(&t);
    ChangeOfBasis { indices, t, t_inv }
}

impl ChangeOfBasis {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// `T * v`; maps power sums to integral invariants.
    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        mat_vec(&self.t, v)
    }

    /// `T^-1 * v`; maps integral invariants to power sums.
    pub fn apply_inverse(&self, v: &[BigRational]) -> Vec<BigRational> {
        mat_vec(&self.t_inv, v)
    }

    /// True when every nonzero `T[r][c]` has `a_r <= a_c` componentwise.
    pub fn respects_partial_order(&self) -> bool {
        (0..self.len()).all(|r| {
            (0..self.len()).all(|c| {
                self.t[r][c].is_zero()
                    || self.indices[r]
                        .a()
                        .iter()
                        .zip(self.indices[c].a())
                        .all(|(x, y)| x <= y)
            })
        })
    }
}

fn mat_vec(m: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}
