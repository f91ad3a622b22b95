//! Recovery of per-summand values of a positive cube multiset from power sums.
//!
//! Summands are recovered one at a time in decreasing lexicographic order of
//! their function vectors `z_i = (f_1(M_i), .., f_L(M_i))`. For row `i` and
//! stage `s` the exponents are `e_t = k^(s+1-t)` for `t <= s`, so that
//!
//! ```text
//! z_{i,s} = lim_k ( (S_e - sum_{i'<i} w_i' z_i'^e) / prod_{t<s} z_{i,t}^e_t )^(1/k)
//! ```
//!
//! The limit is replaced by a finite schedule of `k`. A `k` is used only when
//! the subtraction leaves a remainder that the working precision resolves.
//! Summands that share a prefix of the vector show up as an integer weight
//! `w` in front of the limit, which is estimated from two values of `k`.

mod logfloat;
mod oracle;

pub use logfloat::{to_f64, LogCtx};
pub use oracle::{cube_functions, power_sum_eval, CubeSetOracle, PowerSumOracle, SummandFunction};

use crate::cube::CubeSpec;
use crate::decomposition::SignedCubeSet;
use crate::error::{Error, Result};
use astro_float::BigFloat;

/// Relative precision a remainder must have before its `k` is used.
const RESOLUTION: f64 = 1e-9;
/// How close a weight estimate must be to an integer to count as a tie.
const WEIGHT_SLACK: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct RecoverySchedule {
    pub k_values: Vec<u64>,
    pub precision: usize,
    pub tolerance: f64,
}

impl RecoverySchedule {
    pub const DEFAULT_K: [u64; 11] = [2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64];
    pub const DEFAULT_PRECISION: usize = 512;
    pub const DEFAULT_TOLERANCE: f64 = 1e-6;

    pub fn new(k_values: Vec<u64>, precision: usize, tolerance: f64) -> Result<Self> {
        if k_values.is_empty() || k_values[0] == 0 {
            return Err(Error::InvalidArgument(
                "schedule needs at least one positive k".into(),
            ));
        }
        if k_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "schedule must be strictly increasing".into(),
            ));
        }
        if precision < 64 {
            return Err(Error::InvalidArgument(format!(
                "precision {precision} is below 64 bits"
            )));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(Self {
            k_values,
            precision,
            tolerance,
        })
    }

    /// The default `k` values up to `k_max`, or just `k_max` if none qualify.
    pub fn up_to(k_max: u64, precision: usize) -> Result<Self> {
        let mut ks: Vec<u64> = Self::DEFAULT_K
            .iter()
            .copied()
            .filter(|&k| k <= k_max)
            .collect();
        if ks.last() != Some(&k_max) && k_max > 0 && ks.len() < Self::DEFAULT_K.len() {
            ks.push(k_max);
        }
        Self::new(ks, precision, Self::DEFAULT_TOLERANCE)
    }
}

impl Default for RecoverySchedule {
    fn default() -> Self {
        Self {
            k_values: Self::DEFAULT_K.to_vec(),
            precision: Self::DEFAULT_PRECISION,
            tolerance: Self::DEFAULT_TOLERANCE,
        }
    }
}

/// Returns the last estimate, and whether the last two agree to `tolerance`
/// relative to the last.
pub fn limit_extrapolate(estimates: &[(u64, f64)], tolerance: f64) -> (f64, bool) {
    match estimates {
        [] => (f64::NAN, false),
        [(_, v)] => (*v, false),
        [.., (_, prev), (_, last)] => {
            let scale = last.abs().max(f64::EPSILON);
            (*last, ((last - prev).abs() / scale) < tolerance)
        }
    }
}

/// `sum_j k^(n+1-j) ln a_j`, the logarithm of the nested product.
pub fn nested_log_product(a: &[f64], k: u64) -> f64 {
    let n = a.len() as i32;
    let k = k as f64;
    a.iter()
        .enumerate()
        .map(|(j, aj)| k.powi(n - j as i32) * aj.ln())
        .sum()
}

/// `Q_k = sum_i w_i prod_j (z_ij / z_1j)^(k^(n+1-j))`, evaluated through logs.
pub fn normalized_sum(weights: &[f64], z: &[Vec<f64>], k: u64) -> f64 {
    let Some(first) = z.first() else {
        return 0.0;
    };
    weights
        .iter()
        .zip(z)
        .map(|(w, zi)| {
            let ratios: Vec<f64> = zi.iter().zip(first).map(|(a, b)| a / b).collect();
            w * nested_log_product(&ratios, k).exp()
        })
        .sum()
}

/// Estimates of one stage of one row.
#[derive(Debug, Clone, PartialEq)]
pub struct StageEstimate {
    /// `(k, estimate)` for every usable `k`.
    pub estimates: Vec<(u64, f64)>,
    pub value: f64,
    pub converged: bool,
    /// Number of remaining summands that share this row's prefix up to the stage.
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredRow {
    pub stages: Vec<StageEstimate>,
    pub multiplicity: u64,
}

impl RecoveredRow {
    pub fn values(&self) -> Vec<f64> {
        self.stages.iter().map(|s| s.value).collect()
    }

    /// True when every function was recovered and every stage converged.
    pub fn converged(&self, function_count: usize) -> bool {
        self.stages.len() == function_count && self.stages.iter().all(|s| s.converged)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeadingValues {
    pub function_count: usize,
    /// Number of summands seen by the oracle, counted with weight.
    pub total_count: u64,
    /// Rows in decreasing lexicographic order.
    pub rows: Vec<RecoveredRow>,
}

struct KnownRow {
    ln_z: Vec<BigFloat>,
    relerr: Vec<f64>,
    ln_w: BigFloat,
}

fn stage_exponents(k: u64, s: usize, len: usize) -> Option<Vec<u64>> {
    let mut e = vec![0u64; len];
    for t in 0..s {
        e[t] = k.checked_pow((s - t) as u32)?;
    }
    Some(e)
}

/// Error of the last log-estimate, modelled as `A q^k / k`.
///
/// `gaps[j]` is `|ln v_{j+1} - ln v_j|` for the estimates at `ks`.
/// The gap between consecutive estimates is dominated by the error at the
/// earlier `k`, so the last two gaps fix `q` and extrapolate one more step.
/// With fewer than three estimates the last gap is the bound.
fn tail_error(ks: &[u64], gaps: &[f64]) -> f64 {
    let n = ks.len();
    if n < 2 {
        return 0.0;
    }
    let last_gap = gaps[n - 2];
    if n < 3 || last_gap == 0.0 {
        return last_gap;
    }
    let d0 = gaps[n - 3];
    if d0 == 0.0 {
        return last_gap;
    }
    let (k0, k1, k2) = (ks[n - 3] as f64, ks[n - 2] as f64, ks[n - 1] as f64);
    let ln_q = ((last_gap * k1) / (d0 * k0)).ln() / (k1 - k0);
    if !(ln_q < 0.0) {
        return last_gap;
    }
    (last_gap * (k1 / k2) * (ln_q * (k2 - k1)).exp()).min(last_gap)
}

fn ln_count(ctx: &mut LogCtx, v: u64) -> BigFloat {
    let b = ctx.from_u64(v);
    ctx.ln(&b)
}

/// Recovers the first `m` summands (counted with multiplicity). Raw limit
/// estimates feed later rows.
pub fn recover_leading_values(
    oracle: &mut dyn PowerSumOracle,
    m: usize,
    schedule: &RecoverySchedule,
) -> Result<LeadingValues> {
    recover_leading_values_with(oracle, m, schedule, false)
}

/// Like [`recover_leading_values`]. With `snap_integers`, each recovered value
/// is rounded to the nearest positive integer before it is used further, which
/// keeps errors from compounding when all function values are integers.
pub fn recover_leading_values_with(
    oracle: &mut dyn PowerSumOracle,
    m: usize,
    schedule: &RecoverySchedule,
    snap_integers: bool,
) -> Result<LeadingValues> {
    let len = oracle.function_count();
    let mut ctx = LogCtx::new(oracle.precision());
    let eps = 2f64.powi(-(oracle.precision() as i32 - 8));

    let ln_total = oracle.log_power_sum(&vec![0; len])?;
    let total = to_f64(&ctx.exp(&ln_total)).round().max(0.0) as u64;

    let mut known: Vec<KnownRow> = Vec::new();
    let mut rows: Vec<RecoveredRow> = Vec::new();
    let mut covered = 0u64;
    let mut stalled = false;

    while covered < m as u64 {
        if stalled || covered >= total {
            rows.push(RecoveredRow {
                stages: Vec::new(),
                multiplicity: 1,
            });
            covered += 1;
            continue;
        }
        let mut ln_z: Vec<BigFloat> = Vec::with_capacity(len);
        let mut relerr: Vec<f64> = Vec::with_capacity(len);
        let mut stages: Vec<StageEstimate> = Vec::with_capacity(len);
        for s in 1..=len {
            let mut points: Vec<(u64, BigFloat)> = Vec::new();
            for &k in &schedule.k_values {
                let Some(e) = stage_exponents(k, s, len) else {
                    continue;
                };
                let e_big: Vec<BigFloat> = e.iter().map(|&v| ctx.from_u64(v)).collect();
                let ln_s = oracle.log_power_sum(&e)?;
                let mut known_ratio = ctx.zero();
                let mut known_err = 0.0;
                for row in &known {
                    let mut ln_t = row.ln_w.clone();
                    let mut spread = 0.0;
                    for t in 0..s {
                        ln_t = ctx.add(&ln_t, &ctx.mul(&e_big[t], &row.ln_z[t]));
                        spread += e[t] as f64 * row.relerr[t];
                    }
                    let r = ctx.exp(&ctx.sub(&ln_t, &ln_s));
                    known_err += to_f64(&r) * spread;
                    known_ratio = ctx.add(&known_ratio, &r);
                }
                let remainder = ctx.sub(&ctx.from_u64(1), &known_ratio);
                let rem = to_f64(&remainder);
                let uncertainty = (to_f64(&ln_s).abs() + 1.0) * eps + known_err;
                if !(rem > 0.0) || uncertainty / rem > RESOLUTION {
                    continue;
                }
                let ln_rem = ctx.ln(&remainder);
                let mut l = ctx.add(&ln_s, &ln_rem);
                for t in 0..s - 1 {
                    l = ctx.sub(&l, &ctx.mul(&e_big[t], &ln_z[t]));
                }
                points.push((k, l));
            }
            if points.is_empty() {
                stalled = true;
                break;
            }

            let weight = if points.len() >= 2 {
                let (k1, l1) = &points[points.len() - 2];
                let (k2, l2) = &points[points.len() - 1];
                let dk = ctx.from_u64(k2 - k1);
                let slope = ctx.div(&ctx.sub(l2, l1), &dk);
                let w_log = ctx.sub(l2, &ctx.mul(&ctx.from_u64(*k2), &slope));
                let w = to_f64(&ctx.exp(&w_log));
                let r = w.round();
                if r >= 2.0 && (w - r).abs() < WEIGHT_SLACK {
                    r as u64
                } else {
                    1
                }
            } else {
                1
            };
            let ln_w = ln_count(&mut ctx, weight);
            let mut ln_estimates: Vec<(u64, BigFloat)> = Vec::with_capacity(points.len());
            let mut estimates = Vec::with_capacity(points.len());
            for (k, l) in &points {
                let v = ctx.div(&ctx.sub(l, &ln_w), &ctx.from_u64(*k));
                estimates.push((*k, to_f64(&ctx.exp(&v))));
                ln_estimates.push((*k, v));
            }
            let (value, converged) = limit_extrapolate(&estimates, schedule.tolerance);
            let last_ln = ln_estimates.last().expect("nonempty").1.clone();
            if snap_integers {
                let snapped = value.round().max(1.0) as u64;
                ln_z.push(ln_count(&mut ctx, snapped));
                relerr.push(0.0);
            } else {
                let ks: Vec<u64> = ln_estimates.iter().map(|(k, _)| *k).collect();
                let gaps: Vec<f64> = ln_estimates
                    .windows(2)
                    .map(|w| to_f64(&ctx.sub(&w[1].1, &w[0].1)).abs())
                    .collect();
                let err = tail_error(&ks, &gaps);
                ln_z.push(last_ln);
                relerr.push(err);
            }
            stages.push(StageEstimate {
                estimates,
                value,
                converged,
                weight,
            });
        }
        let multiplicity = if stalled {
            1
        } else {
            stages.last().map_or(1, |s| s.weight)
        };
        if !stalled {
            known.push(KnownRow {
                ln_z,
                relerr,
                ln_w: ln_count(&mut ctx, multiplicity),
            });
        }
        rows.push(RecoveredRow {
            stages,
            multiplicity,
        });
        covered += multiplicity;
    }

    Ok(LeadingValues {
        function_count: len,
        total_count: total,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredCube {
    /// Rounded corners.
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    /// Unrounded `(xi - eta) / 2` and `(xi + eta) / 2`.
    pub x_raw: Vec<f64>,
    pub y_raw: Vec<f64>,
    pub volume_raw: f64,
    pub multiplicity: u64,
    pub converged: bool,
    /// Rounding residual below 1/2 everywhere, and the rounded side lengths,
    /// centres and volume are mutually consistent.
    pub exact: bool,
}

impl RecoveredCube {
    pub fn cube(&self) -> Result<CubeSpec> {
        CubeSpec::new(self.x.clone(), self.y.clone())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubeRecovery {
    pub n: usize,
    pub total_count: u64,
    pub cubes: Vec<RecoveredCube>,
}

impl CubeRecovery {
    /// Every summand recovered, all exact.
    pub fn is_exact(&self) -> bool {
        self.cubes.iter().map(|c| c.multiplicity).sum::<u64>() == self.total_count
            && self.cubes.iter().all(|c| c.exact)
    }

    pub fn to_cube_set(&self) -> Result<SignedCubeSet> {
        let mut out = SignedCubeSet::new(self.n);
        for c in &self.cubes {
            out.add(c.cube()?, c.multiplicity as i64)?;
        }
        Ok(out)
    }
}

/// Recovers cubes from an oracle over `(p_{1,0}, eta_1..eta_n, xi_1..xi_n)`.
pub fn recover_cubes(
    oracle: &mut dyn PowerSumOracle,
    schedule: &RecoverySchedule,
) -> Result<CubeRecovery> {
    let len = oracle.function_count();
    if len < 3 || len % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "{len} functions do not match (volume, eta, xi)"
        )));
    }
    let n = (len - 1) / 2;
    let mut ctx = LogCtx::new(oracle.precision());
    let ln_total = oracle.log_power_sum(&vec![0; len])?;
    let total = to_f64(&ctx.exp(&ln_total)).round().max(0.0) as usize;
    let lead = recover_leading_values_with(oracle, total, schedule, true)?;

    let mut cubes = Vec::new();
    for row in &lead.rows {
        if row.stages.len() != len {
            continue;
        }
        let v = row.values();
        let eta = &v[1..=n];
        let xi = &v[n + 1..];
        let x_raw: Vec<f64> = (0..n).map(|j| (xi[j] - eta[j]) / 2.0).collect();
        let y_raw: Vec<f64> = (0..n).map(|j| (xi[j] + eta[j]) / 2.0).collect();
        let x: Vec<i64> = x_raw.iter().map(|v| v.round() as i64).collect();
        let y: Vec<i64> = y_raw.iter().map(|v| v.round() as i64).collect();
        let residual_ok = x_raw
            .iter()
            .zip(&x)
            .chain(y_raw.iter().zip(&y))
            .all(|(r, i)| (r - *i as f64).abs() < 0.5);
        let eta_int: Vec<i64> = eta.iter().map(|e| e.round() as i64).collect();
        let xi_int: Vec<i64> = xi.iter().map(|e| e.round() as i64).collect();
        let consistent = (0..n)
            .all(|j| eta_int[j] >= 1 && y[j] - x[j] == eta_int[j] && y[j] + x[j] == xi_int[j])
            && eta_int.iter().product::<i64>() == v[0].round() as i64;
        cubes.push(RecoveredCube {
            x,
            y,
            x_raw,
            y_raw,
            volume_raw: v[0],
            multiplicity: row.multiplicity,
            converged: row.converged(len),
            exact: residual_ok && consistent,
        });
    }
    Ok(CubeRecovery {
        n,
        total_count: lead.total_count,
        cubes,
    })
}

/// Per-axis shift that moves every lower corner to at least 1.
pub fn positive_shift(x: &SignedCubeSet) -> Vec<i64> {
    (0..x.n())
        .map(|j| {
            let min = x.iter().map(|(c, _)| c.x()[j]).min().unwrap_or(1);
            (1 - min).max(0)
        })
        .collect()
}

/// Builds the oracle for `x` and recovers it. With `shift_positive` the set is
/// translated so that all coordinates are positive, and the result is
/// translated back.
pub fn recover_cube_set(
    x: &SignedCubeSet,
    schedule: &RecoverySchedule,
    shift_positive: bool,
) -> Result<CubeRecovery> {
    let shift = if shift_positive {
        positive_shift(x)
    } else {
        vec![0; x.n()]
    };
    let shifted = x.shifted(&shift);
    let mut oracle = CubeSetOracle::for_cubes(&shifted, schedule.precision)?;
    let mut out = recover_cubes(&mut oracle, schedule)?;
    for c in &mut out.cubes {
        for j in 0..out.n {
            c.x[j] -= shift[j];
            c.y[j] -= shift[j];
            c.x_raw[j] -= shift[j] as f64;
            c.y_raw[j] -= shift[j] as f64;
        }
    }
    Ok(out)
}
