use num_bigint::BigInt;
use num_traits::One;

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}
