use crate::error::{Error, Result};
use std::fmt;

/// An index `(a, b)` with every `a_i >= 1` and `b_i >= 0`.
///
/// Ordering is lexicographic on `a`, then on `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantIndex {
    a: Vec<u32>,
    b: Vec<u32>,
}

impl InvariantIndex {
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::IndexOutsideDomain(format!("a={a:?} b={b:?}")));
        }
        if a.contains(&0) {
            return Err(Error::IndexOutsideDomain(format!(
                "a={a:?} has a zero entry"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    /// `sum(a) + sum(b)`.
    pub fn degree(&self) -> u32 {
        self.a.iter().sum::<u32>() + self.b.iter().sum::<u32>()
    }

    /// Coordinates with `a_i = 1`.
    pub fn i_set(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.a[i] == 1).collect()
    }

    /// Coordinates with `a_i > 1`.
    pub fn j_set(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.a[i] > 1).collect()
    }

    /// All indices of exactly this degree, in lexicographic order.
    pub fn of_degree(n: usize, degree: u32) -> Vec<InvariantIndex> {
        let mut out = Vec::new();
        if n == 0 || (degree as usize) < n {
            return out;
        }
        let mut parts = vec![0u32; 2 * n];
        fill(&mut parts, 0, n, degree, &mut out);
        out.sort();
        out
    }

    /// All indices with `n <= degree <= max_degree`, graded then lexicographic.
    pub fn up_to_degree(n: usize, max_degree: u32) -> Vec<InvariantIndex> {
        (n as u32..=max_degree)
            .flat_map(|d| Self::of_degree(n, d))
            .collect()
    }
}

fn fill(parts: &mut [u32], pos: usize, n: usize, remaining: u32, out: &mut Vec<InvariantIndex>) {
    if pos == parts.len() {
        if remaining == 0 {
            out.push(InvariantIndex {
                a: parts[..n].to_vec(),
                b: parts[n..].to_vec(),
            });
        }
        return;
    }
    let min = u32::from(pos < n);
    // Leave room for the mandatory 1s in the remaining a-slots.
    let reserved = n.saturating_sub(pos + 1) as u32;
    if remaining < min + reserved {
        return;
    }
    for v in min..=remaining - reserved {
        parts[pos] = v;
        fill(parts, pos + 1, n, remaining - v, out);
    }
}

impl fmt::Display for InvariantIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={:?} b={:?}", self.a, self.b)
    }
}
