//! JSON and CSV file formats.
//!
//! Grid points are written as comma-joined integers and pairs as `"u|v"`.
//! Exact rationals are strings `"p/q"`. All writers emit a canonical order so
//! that identical inputs give identical bytes.

use persinv_core::invariants::FeatureVector;
use persinv_core::recovery::CubeRecovery;
use persinv_core::{
    CubeSpec, Error as CoreError, GridBox, IntMatrix, PersistenceModule, RankInvariant,
    SignedCubeSet,
};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use std::fmt;

/// Failure while reading an input file.
#[derive(Debug)]
pub enum InputError {
    /// Not valid JSON, or not the expected shape. Carries serde's position.
    Malformed(String),
    /// Well-formed but describes an invalid object.
    Semantic(Vec<String>),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Malformed(m) => write!(f, "malformed input: {m}"),
            InputError::Semantic(lines) => write!(f, "invalid input: {}", lines.join("; ")),
        }
    }
}

impl From<CoreError> for InputError {
    fn from(e: CoreError) -> Self {
        InputError::Semantic(vec![e.to_string()])
    }
}

fn malformed(e: serde_json::Error) -> InputError {
    InputError::Malformed(format!("{e} (line {}, column {})", e.line(), e.column()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxJson {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl BoxJson {
    pub fn from_box(b: &GridBox) -> Self {
        Self {
            lo: b.lo().to_vec(),
            hi: b.hi().to_vec(),
        }
    }

    pub fn to_box(&self) -> Result<GridBox, CoreError> {
        GridBox::new(self.lo.clone(), self.hi.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimEntry {
    pub v: Vec<i64>,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapEntry {
    pub v: Vec<i64>,
    /// 0-based axis of the step `v -> v + e_axis`.
    pub axis: usize,
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries.
    pub data: Vec<i64>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeEntry {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    #[serde(default = "one")]
    pub mult: usize,
}

/// A module given either by dimensions and maps or by a list of cubes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub n: usize,
    #[serde(rename = "box", default, skip_serializing_if = "Option::is_none")]
    pub bbox: Option<BoxJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<DimEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maps: Option<Vec<MapEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cubes: Option<Vec<CubeEntry>>,
}

impl ModuleFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let file: ModuleFile = serde_json::from_str(text).map_err(malformed)?;
        match (&file.dims, &file.maps, &file.cubes) {
            (Some(_), _, None) | (None, None, Some(_)) => Ok(file),
            (None, None, None) => Err(InputError::Malformed(
                "module needs either \"dims\" (with optional \"maps\") or \"cubes\"".into(),
            )),
            _ => Err(InputError::Malformed(
                "\"cubes\" cannot be combined with \"dims\" or \"maps\"".into(),
            )),
        }
    }

    /// Builds the module. Structural problems are reported; commutativity is
    /// left to the caller's validation.
    pub fn to_module(&self) -> Result<PersistenceModule, InputError> {
        if self.n == 0 {
            return Err(InputError::Semantic(vec!["n must be positive".into()]));
        }
        let check_len = |what: &str, p: &[i64]| -> Result<(), InputError> {
            if p.len() == self.n {
                Ok(())
            } else {
                Err(InputError::Semantic(vec![format!(
                    "{what} {p:?} has {} coordinates, expected {}",
                    p.len(),
                    self.n
                )]))
            }
        };
        if let Some(cubes) = &self.cubes {
            let mut list = Vec::with_capacity(cubes.len());
            for c in cubes {
                check_len("cube corner", &c.x)?;
                check_len("cube corner", &c.y)?;
                if c.mult == 0 {
                    return Err(InputError::Semantic(vec![format!(
                        "cube {:?}..{:?} has multiplicity 0",
                        c.x, c.y
                    )]));
                }
                list.push((CubeSpec::new(c.x.clone(), c.y.clone())?, c.mult));
            }
            let module = match &self.bbox {
                Some(b) => {
                    check_len("box corner", &b.lo)?;
                    persinv_core::module_from_cubes_in(b.to_box()?, &list)?
                }
                None => persinv_core::module_from_cubes(self.n, &list)?,
            };
            return Ok(module);
        }
        let b = self.bbox.as_ref().ok_or_else(|| {
            InputError::Semantic(vec!["a module given by dims needs a \"box\"".into()])
        })?;
        check_len("box corner", &b.lo)?;
        check_len("box corner", &b.hi)?;
        let mut module = PersistenceModule::zero(b.to_box()?);
        for d in self.dims.iter().flatten() {
            check_len("point", &d.v)?;
            module.set_dim(&d.v, d.dim)?;
        }
        for m in self.maps.iter().flatten() {
            check_len("point", &m.v)?;
            let matrix =
                IntMatrix::from_row_major(m.rows, m.cols, m.data.clone()).ok_or_else(|| {
                    InputError::Semantic(vec![format!(
                        "map at {:?} axis {} has {} entries for shape {}x{}",
                        m.v,
                        m.axis,
                        m.data.len(),
                        m.rows,
                        m.cols
                    )])
                })?;
            module.set_map(&m.v, m.axis, matrix)?;
        }
        Ok(module)
    }

    /// Dims-and-maps form of a module. Zero dimensions and empty maps are omitted.
    pub fn from_module(module: &PersistenceModule) -> Result<Self, CoreError> {
        let bbox = module.bbox();
        let dims = bbox
            .points()
            .filter(|v| module.dim(v) > 0)
            .map(|v| DimEntry {
                dim: module.dim(&v),
                v,
            })
            .collect();
        let mut maps = Vec::new();
        for (v, axis, m) in module.stored_maps() {
            if m.rows() == 0 || m.cols() == 0 {
                continue;
            }
            let data = m.to_i64_row_major().ok_or_else(|| {
                CoreError::InvalidArgument(format!("map entry at {v:?} exceeds 64 bits"))
            })?;
            maps.push(MapEntry {
                v,
                axis,
                rows: m.rows(),
                cols: m.cols(),
                data,
            });
        }
        Ok(Self {
            n: module.n(),
            bbox: Some(BoxJson::from_box(bbox)),
            dims: Some(dims),
            maps: Some(maps),
            cubes: None,
        })
    }

    /// Cube-list form on an explicit box.
    pub fn from_cubes(bbox: &GridBox, cubes: &[(CubeSpec, usize)]) -> Self {
        Self {
            n: bbox.n(),
            bbox: Some(BoxJson::from_box(bbox)),
            dims: None,
            maps: None,
            cubes: Some(
                cubes
                    .iter()
                    .map(|(c, m)| CubeEntry {
                        x: c.x().to_vec(),
                        y: c.y().to_vec(),
                        mult: *m,
                    })
                    .collect(),
            ),
        }
    }
}

pub fn point_key(p: &[i64]) -> String {
    p.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn parse_point(s: &str) -> Option<Vec<i64>> {
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Rank table: nonzero values keyed by `"u|v"` in pair order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankFile {
    pub n: usize,
    #[serde(rename = "box")]
    pub bbox: BoxJson,
    pub values: Map<String, Value>,
}

impl RankFile {
    pub fn from_rank(rho: &RankInvariant) -> Self {
        let mut values = Map::new();
        for (u, v, val) in rho.nonzero() {
            values.insert(
                format!("{}|{}", point_key(&u), point_key(&v)),
                Value::from(val),
            );
        }
        Self {
            n: rho.n(),
            bbox: BoxJson::from_box(rho.bbox()),
            values,
        }
    }

    pub fn parse(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(malformed)
    }

    pub fn to_rank(&self) -> Result<RankInvariant, InputError> {
        let bbox = self.bbox.to_box()?;
        let mut entries = Vec::with_capacity(self.values.len());
        for (key, val) in &self.values {
            let bad = || InputError::Semantic(vec![format!("bad rank entry {key:?}: {val}")]);
            let (u, v) = key.split_once('|').ok_or_else(bad)?;
            let u = parse_point(u).ok_or_else(bad)?;
            let v = parse_point(v).ok_or_else(bad)?;
            let val = val.as_i64().ok_or_else(bad)?;
            entries.push((u, v, val));
        }
        Ok(RankInvariant::from_entries(bbox, entries)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub coeff: i64,
}

/// Signed cube set in canonical order, with the box it was computed on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeSetFile {
    pub n: usize,
    #[serde(rename = "box")]
    pub bbox: BoxJson,
    pub terms: Vec<TermEntry>,
}

impl CubeSetFile {
    pub fn from_set(x: &SignedCubeSet, bbox: &GridBox) -> Self {
        Self {
            n: x.n(),
            bbox: BoxJson::from_box(bbox),
            terms: x
                .iter()
                .map(|(c, k)| TermEntry {
                    x: c.x().to_vec(),
                    y: c.y().to_vec(),
                    coeff: k,
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(malformed)
    }

    pub fn to_set(&self) -> Result<(SignedCubeSet, GridBox), InputError> {
        let bbox = self.bbox.to_box()?;
        if bbox.n() != self.n {
            return Err(InputError::Semantic(vec![format!(
                "box has {} coordinates, expected {}",
                bbox.n(),
                self.n
            )]));
        }
        let mut x = SignedCubeSet::new(self.n);
        for t in &self.terms {
            x.add(CubeSpec::new(t.x.clone(), t.y.clone())?, t.coeff)?;
        }
        Ok((x, bbox))
    }
}

/// Whether a JSON document looks like a cube set file.
pub fn is_cube_set(text: &str) -> Result<bool, InputError> {
    let v: Value = serde_json::from_str(text).map_err(malformed)?;
    Ok(v.get("terms").is_some())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureRow {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub family: &'static str,
    pub value: String,
    pub approx: f64,
    pub provenance: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureFile {
    pub n: usize,
    pub max_degree: u32,
    pub rows: Vec<FeatureRow>,
}

impl FeatureFile {
    pub fn new(n: usize, max_degree: u32, vectors: &[FeatureVector]) -> Self {
        let rows = vectors
            .iter()
            .flat_map(|fv| {
                fv.entries.iter().map(move |e| FeatureRow {
                    a: e.index.a().to_vec(),
                    b: e.index.b().to_vec(),
                    family: fv.family.name(),
                    value: e.exact_string(),
                    approx: e.approx(),
                    provenance: e.provenance.name(),
                })
            })
            .collect();
        Self {
            n,
            max_degree,
            rows,
        }
    }

    pub fn to_csv(&self) -> String {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(";");
        let mut out = String::from("a,b,family,value,approx,provenance\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{:e},{}\n",
                join(&r.a),
                join(&r.b),
                r.family,
                r.value,
                r.approx,
                r.provenance
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveredCubeJson {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub multiplicity: u64,
    pub exact: bool,
    pub converged: bool,
    pub volume_raw: f64,
    pub x_raw: Vec<f64>,
    pub y_raw: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveryFile {
    pub n: usize,
    pub total_count: u64,
    pub exact: bool,
    pub shift: Vec<i64>,
    pub k_values: Vec<u64>,
    pub precision_bits: usize,
    pub cubes: Vec<RecoveredCubeJson>,
}

impl RecoveryFile {
    pub fn new(
        rec: &CubeRecovery,
        shift: Vec<i64>,
        k_values: Vec<u64>,
        precision_bits: usize,
    ) -> Self {
        Self {
            n: rec.n,
            total_count: rec.total_count,
            exact: rec.is_exact(),
            shift,
            k_values,
            precision_bits,
            cubes: rec
                .cubes
                .iter()
                .map(|c| RecoveredCubeJson {
                    x: c.x.clone(),
                    y: c.y.clone(),
                    multiplicity: c.multiplicity,
                    exact: c.exact,
                    converged: c.converged,
                    volume_raw: c.volume_raw,
                    x_raw: c.x_raw.clone(),
                    y_raw: c.y_raw.clone(),
                })
                .collect(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
