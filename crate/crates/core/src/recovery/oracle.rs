//! Power-sum oracles: the only view of a hidden cube multiset that recovery uses.

use super::logfloat::LogCtx;
use crate::cube::CubeSpec;
use crate::decomposition::SignedCubeSet;
use crate::error::{Error, Result};
use astro_float::BigFloat;

/// A per-summand function available to recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SummandFunction {
    /// `p_{1,0}`, the product of side lengths.
    Volume,
    /// Side length `eta_j` (0-based axis).
    Eta(usize),
    /// `xi_j = x_j + y_j` (0-based axis).
    Xi(usize),
}

impl SummandFunction {
    pub fn eval(self, cube: &CubeSpec) -> Result<i64> {
        let n = cube.n();
        let axis_ok = |j: usize| {
            if j < n {
                Ok(j)
            } else {
                Err(Error::DimensionMismatch {
                    expected: j + 1,
                    found: n,
                })
            }
        };
        Ok(match self {
            SummandFunction::Volume => cube.eta().iter().product(),
            SummandFunction::Eta(j) => cube.eta()[axis_ok(j)?],
            SummandFunction::Xi(j) => cube.xi()[axis_ok(j)?],
        })
    }
}

/// `(p_{1,0}, eta_1, .., eta_n, xi_1, .., xi_n)`.
pub fn cube_functions(n: usize) -> Vec<SummandFunction> {
    let mut f = vec![SummandFunction::Volume];
    f.extend((0..n).map(SummandFunction::Eta));
    f.extend((0..n).map(SummandFunction::Xi));
    f
}

/// Access to `ln sum_i w_i prod_j f_j(M_i)^e_j` for a hidden weighted multiset.
pub trait PowerSumOracle {
    fn function_count(&self) -> usize;

    fn precision(&self) -> usize;

    fn log_power_sum(&mut self, exponents: &[u64]) -> Result<BigFloat>;
}

/// Oracle backed by an explicit positive cube set.
#[derive(Debug)]
pub struct CubeSetOracle {
    ctx: LogCtx,
    /// `ln f_j(M_i)` per summand.
    logs: Vec<Vec<BigFloat>>,
    log_weights: Vec<BigFloat>,
    funcs: usize,
}

impl CubeSetOracle {
    pub fn new(x: &SignedCubeSet, funcs: &[SummandFunction], precision: usize) -> Result<Self> {
        if funcs.is_empty() {
            return Err(Error::InvalidArgument("empty function list".into()));
        }
        if !x.is_positive() {
            return Err(Error::SignedSetUnsupported);
        }
        let mut ctx = LogCtx::new(precision);
        let mut logs = Vec::with_capacity(x.len());
        let mut log_weights = Vec::with_capacity(x.len());
        for (cube, c) in x.iter() {
            let mut row = Vec::with_capacity(funcs.len());
            for f in funcs {
                let v = f.eval(cube)?;
                if v <= 0 {
                    return Err(Error::NonPositiveSummand);
                }
                let bv = ctx.from_i64(v);
                row.push(ctx.ln(&bv));
            }
            logs.push(row);
            let bw = ctx.from_i64(c);
            log_weights.push(ctx.ln(&bw));
        }
        Ok(Self {
            ctx,
            logs,
            log_weights,
            funcs: funcs.len(),
        })
    }

    /// Oracle over [`cube_functions`]; every coordinate must be at least 1 so
    /// that all `xi_j` are positive.
    pub fn for_cubes(x: &SignedCubeSet, precision: usize) -> Result<Self> {
        if x.iter().any(|(c, _)| c.x().iter().any(|&v| v < 1)) {
            return Err(Error::NonPositiveSummand);
        }
        Self::new(x, &cube_functions(x.n()), precision)
    }
}

impl PowerSumOracle for CubeSetOracle {
    fn function_count(&self) -> usize {
        self.funcs
    }

    fn precision(&self) -> usize {
        self.ctx.precision()
    }

    fn log_power_sum(&mut self, exponents: &[u64]) -> Result<BigFloat> {
        if exponents.len() != self.funcs {
            return Err(Error::DimensionMismatch {
                expected: self.funcs,
                found: exponents.len(),
            });
        }
        let ctx = &mut self.ctx;
        let exps: Vec<Option<BigFloat>> = exponents
            .iter()
            .map(|&e| (e != 0).then(|| ctx.from_u64(e)))
            .collect();
        let mut terms = Vec::with_capacity(self.logs.len());
        for (row, lw) in self.logs.iter().zip(&self.log_weights) {
            let mut t = lw.clone();
            for (l, e) in row.iter().zip(&exps) {
                if let Some(e) = e {
                    t = ctx.add(&t, &ctx.mul(e, l));
                }
            }
            terms.push(t);
        }
        ctx.log_sum_exp(&terms).ok_or_else(|| {
            Error::InvalidArgument("power sum of an empty set has no logarithm".into())
        })
    }
}

/// `ln sum_i c_i prod_j f_j(M_i)^e_j` for a positive cube set.
pub fn power_sum_eval(
    x: &SignedCubeSet,
    funcs: &[SummandFunction],
    exponents: &[u64],
    precision: usize,
) -> Result<BigFloat> {
    CubeSetOracle::new(x, funcs, precision)?.log_power_sum(exponents)
}

#[cfg(test)]
mod tests {
    use super::super::logfloat::to_f64;
    use super::*;

    fn set(cubes: &[(&[i64], &[i64], i64)]) -> SignedCubeSet {
        SignedCubeSet::from_terms(
            cubes[0].0.len(),
            cubes
                .iter()
                .map(|(x, y, c)| (CubeSpec::new(x.to_vec(), y.to_vec()).unwrap(), *c)),
        )
        .unwrap()
    }

    #[test]
    fn two_intervals_squared() {
        let x = set(&[(&[0], &[3], 1), (&[1], &[2], 1)]);
        let v = power_sum_eval(&x, &[SummandFunction::Eta(0)], &[2], 256).unwrap();
        assert!((to_f64(&v) - 10f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn single_cube_is_exact_sum_of_logs() {
        let x = set(&[(&[1, 1], &[3, 4], 1)]);
        let funcs = cube_functions(2);
        let e = [5, 4, 3, 2, 1];
        let v = power_sum_eval(&x, &funcs, &e, 256).unwrap();
        let expect =
            5.0 * 6f64.ln() + 4.0 * 2f64.ln() + 3.0 * 3f64.ln() + 2.0 * 4f64.ln() + 5f64.ln();
        assert!((to_f64(&v) - expect).abs() < 1e-12);
    }

    #[test]
    fn weights_enter_the_sum() {
        let x = set(&[(&[0], &[3], 2), (&[1], &[2], 1)]);
        let v = power_sum_eval(&x, &[SummandFunction::Eta(0)], &[2], 256).unwrap();
        assert!((to_f64(&v) - 19f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        let degenerate = set(&[(&[1], &[1], 1)]);
        assert_eq!(
            power_sum_eval(&degenerate, &[SummandFunction::Eta(0)], &[1], 128).unwrap_err(),
            Error::NonPositiveSummand
        );
        let signed = set(&[(&[0], &[2], -1)]);
        assert_eq!(
            power_sum_eval(&signed, &[SummandFunction::Eta(0)], &[1], 128).unwrap_err(),
            Error::SignedSetUnsupported
        );
        let at_zero = set(&[(&[0], &[2], 1)]);
        assert_eq!(
            CubeSetOracle::for_cubes(&at_zero, 128).unwrap_err(),
            Error::NonPositiveSummand
        );
    }
}
