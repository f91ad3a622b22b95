//! Command implementations. Each returns the bytes to write plus an exit code,
//! so they can be exercised without spawning the binary.

use crate::formats::{
    is_cube_set, to_json, CubeSetFile, FeatureFile, InputError, ModuleFile, RankFile, RecoveryFile,
};
use persinv_core::algebra_checks::{run_checks, CheckRow};
use persinv_core::gen::{cube_box, random_cube_list, random_general_module};
use persinv_core::invariants::{
    f_integral_oracle, feature_vector_signed, feature_vector_with, Family, FeatureEntry,
    FeatureVector, InvariantIndex, Provenance,
};
use persinv_core::recovery::{positive_shift, recover_cubes, CubeSetOracle, RecoverySchedule};
use persinv_core::{
    decompose, rank_table, reconstruct, validate, GridBox, PersistenceModule, RankInvariant,
    SignedCubeSet, Violation,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

/// Exit codes shared by every command.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const MALFORMED: i32 = 2;
    pub const SEMANTIC: i32 = 3;
}

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Malformed(String),
    /// Message plus an optional machine-readable report.
    Semantic(String, Option<String>),
    Failed(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Failed(_) => exit::FAILURE,
            CliError::Malformed(_) => exit::MALFORMED,
            CliError::Semantic(..) => exit::SEMANTIC,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Malformed(m) => write!(f, "malformed input: {m}"),
            CliError::Semantic(m, _) => write!(f, "invalid input: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Malformed(m) => CliError::Malformed(m),
            InputError::Semantic(lines) => CliError::Semantic(lines.join("; "), None),
        }
    }
}

impl From<persinv_core::Error> for CliError {
    fn from(e: persinv_core::Error) -> Self {
        CliError::Semantic(e.to_string(), None)
    }
}

/// Output of a command that ran to completion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self {
            output,
            code: exit::OK,
        }
    }
}

#[derive(Serialize)]
struct ViolationJson {
    kind: &'static str,
    point: Vec<i64>,
    axes: Vec<usize>,
    message: String,
}

#[derive(Serialize)]
struct ReportJson {
    valid: bool,
    violations: Vec<ViolationJson>,
}

fn report_json(report: &[Violation]) -> String {
    let violations = report
        .iter()
        .map(|v| match v {
            Violation::ShapeMismatch {
                point,
                axis,
                expected,
                found,
            } => ViolationJson {
                kind: "shape-mismatch",
                point: point.clone(),
                axes: vec![*axis],
                message: format!(
                    "map along axis {axis} is {}x{}, expected {}x{}",
                    found.0, found.1, expected.0, expected.1
                ),
            },
            Violation::NonCommuting { point, axes } => ViolationJson {
                kind: "non-commuting",
                point: point.clone(),
                axes: vec![axes.0, axes.1],
                message: format!("square on axes {} and {} does not commute", axes.0, axes.1),
            },
        })
        .collect();
    to_json(&ReportJson {
        valid: report.is_empty(),
        violations,
    })
}

/// Parses and validates a module, failing with the report when invalid.
pub fn load_module(text: &str) -> Result<PersistenceModule, CliError> {
    let module = ModuleFile::parse(text)?.to_module()?;
    let report = validate(&module);
    if report.is_empty() {
        Ok(module)
    } else {
        Err(CliError::Semantic(
            format!("module has {} violation(s)", report.len()),
            Some(report_json(&report)),
        ))
    }
}

/// Cube set from either a cube set file or a module file.
fn load_cube_set(text: &str) -> Result<(SignedCubeSet, GridBox), CliError> {
    if is_cube_set(text)? {
        Ok(CubeSetFile::parse(text)?.to_set()?)
    } else {
        let module = load_module(text)?;
        let rho = rank_table(&module)?;
        Ok((decompose(&rho), module.bbox().clone()))
    }
}

pub fn validate_cmd(text: &str) -> Result<Outcome, CliError> {
    let module = ModuleFile::parse(text)?.to_module()?;
    let report = validate(&module);
    Ok(Outcome {
        output: report_json(&report),
        code: if report.is_empty() {
            exit::OK
        } else {
            exit::SEMANTIC
        },
    })
}

pub fn rank_table_cmd(text: &str) -> Result<Outcome, CliError> {
    let rho = rank_table(&load_module(text)?)?;
    Ok(Outcome::ok(to_json(&RankFile::from_rank(&rho))))
}

/// Decomposes a module or a rank file.
pub fn decompose_cmd(text: &str, reduce_degenerate: bool) -> Result<Outcome, CliError> {
    let rho: RankInvariant = if is_rank_file(text)? {
        RankFile::parse(text)?.to_rank()?
    } else {
        rank_table(&load_module(text)?)?
    };
    let mut x = decompose(&rho);
    if reduce_degenerate {
        x = x.without_degenerate();
    }
    Ok(Outcome::ok(to_json(&CubeSetFile::from_set(&x, rho.bbox()))))
}

fn is_rank_file(text: &str) -> Result<bool, CliError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        CliError::Malformed(format!("{e} (line {}, column {})", e.line(), e.column()))
    })?;
    Ok(v.get("values").is_some())
}

pub fn reconstruct_cmd(text: &str) -> Result<Outcome, CliError> {
    let (x, bbox) = CubeSetFile::parse(text)?.to_set()?;
    let rho = reconstruct(&x, &bbox)?;
    Ok(Outcome::ok(to_json(&RankFile::from_rank(&rho))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyChoice {
    F,
    P,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureOptions {
    pub family: FamilyChoice,
    pub max_degree: Option<u32>,
    pub format: FeatureFormat,
    pub oracle: bool,
}

fn oracle_vector(
    x: &SignedCubeSet,
    bbox: &GridBox,
    max_degree: u32,
) -> Result<FeatureVector, CliError> {
    let rho = reconstruct(x, bbox)?;
    let entries = InvariantIndex::up_to_degree(x.n(), max_degree)
        .into_iter()
        .map(|index| {
            let value = f_integral_oracle(&index, &rho)?;
            Ok(FeatureEntry {
                index,
                value,
                provenance: Provenance::Oracle,
            })
        })
        .collect::<Result<Vec<_>, persinv_core::Error>>()?;
    Ok(FeatureVector {
        n: x.n(),
        family: Family::F,
        entries,
    })
}

/// Feature vectors of a module or cube set. The default degree bound is `n + 2`.
pub fn features_cmd(text: &str, opts: &FeatureOptions) -> Result<Outcome, CliError> {
    let families: &[Family] = match opts.family {
        FamilyChoice::F => &[Family::F],
        FamilyChoice::P => &[Family::P],
        FamilyChoice::Both => &[Family::F, Family::P],
    };
    let cube_input = is_cube_set(text)?;
    let (n, vectors, max_degree) = if cube_input {
        let (x, bbox) = CubeSetFile::parse(text)?.to_set()?;
        let d = opts.max_degree.unwrap_or(x.n() as u32 + 2);
        let mut out = Vec::new();
        for &fam in families {
            out.push(match (fam, opts.oracle) {
                (Family::F, true) => oracle_vector(&x, &bbox, d)?,
                _ => feature_vector_signed(&x, d, fam)?,
            });
        }
        (x.n(), out, d)
    } else {
        let module = load_module(text)?;
        let d = opts.max_degree.unwrap_or(module.n() as u32 + 2);
        let mut out = Vec::new();
        for &fam in families {
            let route = if opts.oracle && fam == Family::F {
                Provenance::Oracle
            } else {
                Provenance::ClosedForm
            };
            out.push(feature_vector_with(&module, d, fam, route)?);
        }
        (module.n(), out, d)
    };
    let file = FeatureFile::new(n, max_degree, &vectors);
    Ok(Outcome::ok(match opts.format {
        FeatureFormat::Json => to_json(&file),
        FeatureFormat::Csv => file.to_csv(),
    }))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoverOptions {
    pub k_max: u64,
    pub precision_bits: usize,
    pub shift_positive: bool,
    pub reduce_degenerate: bool,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        Self {
            k_max: 64,
            precision_bits: RecoverySchedule::DEFAULT_PRECISION,
            shift_positive: false,
            reduce_degenerate: false,
        }
    }
}

/// Recovers the cubes of a positive cube set (or of a module's decomposition)
/// from its power sums alone.
pub fn recover_cmd(text: &str, opts: &RecoverOptions) -> Result<Outcome, CliError> {
    let (mut x, _) = load_cube_set(text)?;
    if opts.reduce_degenerate {
        x = x.without_degenerate();
    }
    if x.is_empty() {
        return Err(CliError::Semantic(
            "nothing to recover: the cube set is empty".into(),
            None,
        ));
    }
    let schedule = RecoverySchedule::up_to(opts.k_max, opts.precision_bits)?;
    let shift = if opts.shift_positive {
        positive_shift(&x)
    } else {
        vec![0; x.n()]
    };
    let shifted = x.shifted(&shift);
    let mut oracle = CubeSetOracle::for_cubes(&shifted, schedule.precision).map_err(|e| {
        CliError::Semantic(
            format!("{e}; every cube needs positive side lengths and coordinates (try --shift-positive, --reduce-degenerate)"),
            None,
        )
    })?;
    let mut rec = recover_cubes(&mut oracle, &schedule)?;
    for c in &mut rec.cubes {
        for j in 0..rec.n {
            c.x[j] -= shift[j];
            c.y[j] -= shift[j];
            c.x_raw[j] -= shift[j] as f64;
            c.y_raw[j] -= shift[j] as f64;
        }
    }
    let file = RecoveryFile::new(&rec, shift, schedule.k_values.clone(), schedule.precision);
    Ok(Outcome::ok(to_json(&file)))
}

fn check_table(rows: &[CheckRow]) -> String {
    let mut out = format!(
        "{:<26} {:>2} {:>6} {:>24} {:>24}  result\n",
        "check", "n", "degree", "expected", "found"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<26} {:>2} {:>6} {:>24} {:>24}  {}\n",
            r.check,
            r.n,
            r.degree,
            r.expected,
            r.found,
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    out
}

pub fn check_algebra_cmd(n: usize, max_degree: usize) -> Result<Outcome, CliError> {
    if n == 0 {
        return Err(CliError::Semantic("n must be positive".into(), None));
    }
    let rows = run_checks(n, max_degree);
    let pass = rows.iter().all(|r| r.pass);
    Ok(Outcome {
        output: check_table(&rows),
        code: if pass { exit::OK } else { exit::FAILURE },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    Cubes,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenOptions {
    pub n: usize,
    pub side: i64,
    pub mode: GenMode,
    pub seed: u64,
    pub summands: usize,
}

/// Seeded random module written as a module file.
pub fn gen_random_cmd(opts: &GenOptions) -> Result<Outcome, CliError> {
    if opts.n == 0 || opts.side < 1 || opts.summands == 0 {
        return Err(CliError::Semantic(
            "n, box side and summand count must be positive".into(),
            None,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let bbox = cube_box(opts.n, opts.side);
    let file = match opts.mode {
        GenMode::Cubes => {
            let cubes = random_cube_list(&mut rng, &bbox, opts.summands, 2, false);
            ModuleFile::from_cubes(&bbox, &cubes)
        }
        GenMode::General => {
            let module = random_general_module(&mut rng, &bbox, opts.summands, 8);
            ModuleFile::from_module(&module)?
        }
    };
    Ok(Outcome::ok(to_json(&file)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_INTERVALS: &str =
        r#"{"n": 1, "cubes": [{"x": [0], "y": [2]}, {"x": [1], "y": [3]}]}"#;

    #[test]
    fn features_contain_total_volume() {
        let opts = FeatureOptions {
            family: FamilyChoice::P,
            max_degree: Some(2),
            format: FeatureFormat::Json,
            oracle: false,
        };
        let out = features_cmd(TWO_INTERVALS, &opts).unwrap().output;
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let first = &v["rows"][0];
        assert_eq!(first["a"], serde_json::json!([1]));
        assert_eq!(first["b"], serde_json::json!([0]));
        assert_eq!(first["value"], "4/1");
    }

    #[test]
    fn oracle_route_matches_closed_forms_on_cube_sets() {
        let set = decompose_cmd(TWO_INTERVALS, false).unwrap().output;
        let mut opts = FeatureOptions {
            family: FamilyChoice::F,
            max_degree: Some(4),
            format: FeatureFormat::Json,
            oracle: false,
        };
        let closed: serde_json::Value =
            serde_json::from_str(&features_cmd(&set, &opts).unwrap().output).unwrap();
        opts.oracle = true;
        let oracle: serde_json::Value =
            serde_json::from_str(&features_cmd(&set, &opts).unwrap().output).unwrap();
        let values = |v: &serde_json::Value| -> Vec<String> {
            v["rows"]
                .as_array()
                .unwrap()
                .iter()
                .map(|r| r["value"].as_str().unwrap().to_string())
                .collect()
        };
        assert_eq!(values(&closed), values(&oracle));
    }

    #[test]
    fn generator_is_deterministic_and_valid() {
        for mode in [GenMode::Cubes, GenMode::General] {
            let opts = GenOptions {
                n: 2,
                side: 4,
                mode,
                seed: 5,
                summands: 3,
            };
            let a = gen_random_cmd(&opts).unwrap().output;
            assert_eq!(a, gen_random_cmd(&opts).unwrap().output);
            assert_eq!(validate_cmd(&a).unwrap().code, exit::OK);
        }
    }

    #[test]
    fn recover_reports_cubes() {
        let text = r#"{"n": 1, "box": {"lo": [0], "hi": [5]},
            "terms": [{"x": [0], "y": [5], "coeff": 1}, {"x": [2], "y": [3], "coeff": 1}]}"#;
        let opts = RecoverOptions {
            shift_positive: true,
            ..Default::default()
        };
        let out = recover_cmd(text, &opts).unwrap().output;
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["exact"], true);
        assert_eq!(v["cubes"][0]["x"], serde_json::json!([0]));
        assert_eq!(v["cubes"][0]["y"], serde_json::json!([5]));
        assert_eq!(v["cubes"][1]["x"], serde_json::json!([2]));
    }

    #[test]
    fn unshifted_nonpositive_input_is_rejected() {
        let text = r#"{"n": 1, "box": {"lo": [0], "hi": [5]},
            "terms": [{"x": [0], "y": [5], "coeff": 1}]}"#;
        let err = recover_cmd(text, &RecoverOptions::default()).unwrap_err();
        assert_eq!(err.code(), exit::SEMANTIC);
    }

    #[test]
    fn algebra_table_passes() {
        let out = check_algebra_cmd(1, 5).unwrap();
        assert_eq!(out.code, exit::OK);
        assert!(out.output.lines().skip(1).all(|l| l.ends_with("PASS")));
    }
}
