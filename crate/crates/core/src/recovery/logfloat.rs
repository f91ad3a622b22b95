//! Thin wrapper around `astro_float` for log-domain arithmetic.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision plus the constants cache that `ln` and `exp` need.
pub struct LogCtx {
    p: usize,
    cc: Consts,
}

impl std::fmt::Debug for LogCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LogCtx({} bits)", self.p)
    }
}

impl LogCtx {
    pub fn new(precision: usize) -> Self {
        Self {
            p: precision,
            cc: Consts::new().expect("constants cache allocation"),
        }
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_u64(0, self.p)
    }

    pub fn from_u64(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.p)
    }

    pub fn from_i64(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.p)
    }

    pub fn from_f64(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.p)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.p, RM, &mut self.cc)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.p, RM, &mut self.cc)
    }

    /// `ln(sum exp(l_i))`, or `None` for an empty input.
    pub fn log_sum_exp(&mut self, logs: &[BigFloat]) -> Option<BigFloat> {
        let mut max = logs.first()?.clone();
        for l in &logs[1..] {
            if l > &max {
                max = l.clone();
            }
        }
        let mut acc = self.zero();
        for l in logs {
            let d = self.sub(l, &max);
            let e = self.exp(&d);
            acc = self.add(&acc, &e);
        }
        let lacc = self.ln(&acc);
        Some(self.add(&max, &lacc))
    }
}

/// Nearest `f64`. Values outside the `f64` range saturate to infinity or zero.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    let Some((words, _bits, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let Some(&top) = words.last() else {
        return 0.0;
    };
    if top == 0 {
        return 0.0;
    }
    // The mantissa is normalised with its top bit in the top word: value = 0.m * 2^exp.
    let mut v = top as f64 / 2f64.powi(Word::BITS as i32);
    if words.len() > 1 {
        v += words[words.len() - 2] as f64 / 2f64.powi(2 * Word::BITS as i32);
    }
    let e = exp as i64;
    let v = if e > 2100 {
        f64::INFINITY
    } else if e < -2100 {
        0.0
    } else {
        let half = (e / 2) as i32;
        v * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    };
    match sign {
        Sign::Neg => -v,
        Sign::Pos => v,
    }
}
