//! Finite integer-indexed persistence modules stored densely over a grid box.

use crate::cube::CubeSpec;
use crate::error::{Error, Result};
use crate::grid::{leq, step, GridBox};
use crate::linalg::IntMatrix;
use crate::rank_invariant::RankInvariant;
use rayon::prelude::*;
use std::borrow::Cow;

/// A single failure found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The map from `point` along `axis` does not have shape `dim(v+e) x dim(v)`.
    ShapeMismatch {
        point: Vec<i64>,
        axis: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// The two paths from `point` to `point + e_i + e_j` disagree.
    NonCommuting {
        point: Vec<i64>,
        axes: (usize, usize),
    },
}

pub type ValidationReport = Vec<Violation>;

/// A persistence module supported on a box. Dimensions outside the box are zero,
/// as are all maps into or out of it. A missing structure map is the zero map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistenceModule {
    bbox: GridBox,
    dims: Vec<usize>,
    /// `maps[point_index * n + axis]`, present only where `point + e_axis` is in the box.
    maps: Vec<Option<IntMatrix>>,
}

impl PersistenceModule {
    /// The zero module on `bbox`.
    pub fn zero(bbox: GridBox) -> Self {
        let len = bbox.len();
        let n = bbox.n();
        Self {
            bbox,
            dims: vec![0; len],
            maps: vec![None; len * n],
        }
    }

    pub fn bbox(&self) -> &GridBox {
        &self.bbox
    }

    pub fn n(&self) -> usize {
        self.bbox.n()
    }

    pub fn dim(&self, v: &[i64]) -> usize {
        self.bbox.index_of(v).map_or(0, |i| self.dims[i])
    }

    pub fn set_dim(&mut self, v: &[i64], d: usize) -> Result<()> {
        let i = self
            .bbox
            .index_of(v)
            .ok_or_else(|| Error::OutsideBox(v.to_vec()))?;
        self.dims[i] = d;
        Ok(())
    }

    /// Stores the structure map `v -> v + e_axis`. Shapes are not checked here;
    /// see [`validate`].
    pub fn set_map(&mut self, v: &[i64], axis: usize, m: IntMatrix) -> Result<()> {
        if axis >= self.n() {
            return Err(Error::InvalidArgument(format!("axis {axis} out of range")));
        }
        let i = self
            .bbox
            .index_of(v)
            .ok_or_else(|| Error::OutsideBox(v.to_vec()))?;
        let w = step(v, axis);
        if !self.bbox.contains(&w) {
            return Err(Error::OutsideBox(w));
        }
        let n = self.n();
        self.maps[i * n + axis] = Some(m);
        Ok(())
    }

    /// The structure map `v -> v + e_axis`; a zero matrix when it leaves the box or was never set.
    pub fn map(&self, v: &[i64], axis: usize) -> Cow<'_, IntMatrix> {
        let w = step(v, axis);
        let stored = self
            .bbox
            .index_of(v)
            .filter(|_| self.bbox.contains(&w))
            .and_then(|i| self.maps[i * self.n() + axis].as_ref());
        match stored {
            Some(m) => Cow::Borrowed(m),
            None => Cow::Owned(IntMatrix::zeros(self.dim(&w), self.dim(v))),
        }
    }

    /// Explicitly stored maps, as `(point, axis, matrix)`.
    pub fn stored_maps(&self) -> impl Iterator<Item = (Vec<i64>, usize, &IntMatrix)> + '_ {
        let n = self.n();
        self.maps
            .iter()
            .enumerate()
            .filter_map(move |(k, m)| m.as_ref().map(|m| (self.bbox.point_at(k / n), k % n, m)))
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Composite map `u -> v` following the given axis order: all steps along
    /// `order[0]` first, then `order[1]`, and so on. Requires `u <= v` in the box.
    pub fn composite_along(&self, u: &[i64], v: &[i64], order: &[usize]) -> IntMatrix {
        debug_assert!(leq(u, v) && self.bbox.contains(u) && self.bbox.contains(v));
        let mut p = u.to_vec();
        let mut acc = IntMatrix::identity(self.dim(u));
        for &axis in order {
            while p[axis] < v[axis] {
                acc = self.map(&p, axis).mul(&acc);
                p[axis] += 1;
            }
        }
        acc
    }

    /// Composite along the axis-0-first path.
    pub fn composite(&self, u: &[i64], v: &[i64]) -> IntMatrix {
        let order: Vec<usize> = (0..self.n()).collect();
        self.composite_along(u, v, &order)
    }
}

/// Checks matrix shapes and commutativity of every elementary square.
pub fn validate(module: &PersistenceModule) -> ValidationReport {
    let mut report = Vec::new();
    let n = module.n();
    let bbox = module.bbox();
    for (v, axis, m) in module.stored_maps() {
        let expected = (module.dim(&step(&v, axis)), module.dim(&v));
        if m.shape() != expected {
            report.push(Violation::ShapeMismatch {
                point: v,
                axis,
                expected,
                found: m.shape(),
            });
        }
    }
    if !report.is_empty() {
        return report;
    }
    for v in bbox.points() {
        for i in 0..n {
            for j in i + 1..n {
                let corner = step(&step(&v, i), j);
                if !bbox.contains(&corner) {
                    continue;
                }
                let vi = step(&v, i);
                let vj = step(&v, j);
                let path_i = module.map(&vi, j).mul(&module.map(&v, i));
                let path_j = module.map(&vj, i).mul(&module.map(&v, j));
                if path_i != path_j {
                    report.push(Violation::NonCommuting {
                        point: v.clone(),
                        axes: (i, j),
                    });
                }
            }
        }
    }
    report
}

fn ensure_valid(module: &PersistenceModule) -> Result<()> {
    let report = validate(module);
    if report.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidModule(report.len()))
    }
}

/// Direct sum of cube modules, each repeated `multiplicity` times, on the hull of the cubes.
pub fn module_from_cubes(n: usize, cubes: &[(CubeSpec, usize)]) -> Result<PersistenceModule> {
    let first = cubes.first().ok_or(Error::EmptyModule)?;
    let mut bbox = first.0.as_box();
    for (c, _) in cubes {
        if c.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.n(),
            });
        }
        bbox = bbox.hull(&c.as_box())?;
    }
    module_from_cubes_in(bbox, cubes)
}

/// Like [`module_from_cubes`] but on a caller-supplied box, which may be larger
/// than the hull. An empty cube list gives the zero module.
pub fn module_from_cubes_in(
    bbox: GridBox,
    cubes: &[(CubeSpec, usize)],
) -> Result<PersistenceModule> {
    let n = bbox.n();
    // Summand slots in a fixed order: each copy of each cube gets one basis vector.
    let slots: Vec<&CubeSpec> = cubes
        .iter()
        .flat_map(|(c, m)| std::iter::repeat_n(c, *m))
        .collect();
    for c in &slots {
        if c.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.n(),
            });
        }
        if !bbox.contains_box(&c.as_box()) {
            return Err(Error::OutsideBox(c.y().to_vec()));
        }
    }
    let mut module = PersistenceModule::zero(bbox.clone());
    let live = |v: &[i64]| -> Vec<usize> {
        slots
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains_point(v))
            .map(|(k, _)| k)
            .collect()
    };
    for v in bbox.points() {
        let here = live(&v);
        module.set_dim(&v, here.len())?;
        for axis in 0..n {
            let w = step(&v, axis);
            if !bbox.contains(&w) {
                continue;
            }
            let there = live(&w);
            let mut m = IntMatrix::zeros(there.len(), here.len());
            for (c, k) in here.iter().enumerate() {
                if let Some(r) = there.iter().position(|t| t == k) {
                    m.set(r, c, 1.into());
                }
            }
            module.set_map(&v, axis, m)?;
        }
    }
    Ok(module)
}

/// Direct sum on the hull of both boxes; maps are block diagonal with `a` first.
pub fn direct_sum(a: &PersistenceModule, b: &PersistenceModule) -> Result<PersistenceModule> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let bbox = a.bbox().hull(b.bbox())?;
    let mut out = PersistenceModule::zero(bbox.clone());
    for v in bbox.points() {
        out.set_dim(&v, a.dim(&v) + b.dim(&v))?;
        for axis in 0..bbox.n() {
            if bbox.contains(&step(&v, axis)) {
                out.set_map(&v, axis, a.map(&v, axis).block_diag(&b.map(&v, axis)))?;
            }
        }
    }
    Ok(out)
}

/// Rank of the structure map `M_u -> M_v`; zero unless `u <= v` and both lie in the box.
pub fn rank(module: &PersistenceModule, u: &[i64], v: &[i64]) -> Result<usize> {
    check_len(module, u)?;
    check_len(module, v)?;
    ensure_valid(module)?;
    Ok(rank_unchecked(module, u, v))
}

fn rank_unchecked(module: &PersistenceModule, u: &[i64], v: &[i64]) -> usize {
    if !leq(u, v) || !module.bbox().contains(u) || !module.bbox().contains(v) {
        return 0;
    }
    module.composite(u, v).rank()
}

fn check_len(module: &PersistenceModule, p: &[i64]) -> Result<()> {
    if p.len() != module.n() {
        return Err(Error::DimensionMismatch {
            expected: module.n(),
            found: p.len(),
        });
    }
    Ok(())
}

/// Rank at real-valued grid positions: zero unless `u <= v`, otherwise the rank
/// from `floor(u)` to `ceil(v)`.
pub fn rank_real(module: &PersistenceModule, u: &[f64], v: &[f64]) -> Result<usize> {
    if u.len() != module.n() || v.len() != module.n() {
        return Err(Error::DimensionMismatch {
            expected: module.n(),
            found: u.len().min(v.len()),
        });
    }
    ensure_valid(module)?;
    if u.iter().zip(v).any(|(a, b)| a > b) {
        return Ok(0);
    }
    let fu: Vec<i64> = u.iter().map(|x| x.floor() as i64).collect();
    let cv: Vec<i64> = v.iter().map(|x| x.ceil() as i64).collect();
    Ok(rank_unchecked(module, &fu, &cv))
}

/// The full rank invariant on the module's box.
///
/// For each source `u`, composites to every `v >= u` are built by dynamic
/// programming along the axis-0-first path, so each pair costs one matrix
/// product plus one rank computation. Sources are processed in parallel.
pub fn rank_table(module: &PersistenceModule) -> Result<RankInvariant> {
    ensure_valid(module)?;
    let bbox = module.bbox().clone();
    let n = bbox.n();
    let per_source: Vec<Vec<(Vec<i64>, i64)>> = (0..bbox.len())
        .into_par_iter()
        .map(|ui| {
            let u = bbox.point_at(ui);
            let upper = bbox.sub_box(&u, bbox.hi()).expect("u inside box");
            let mut composites: Vec<Option<IntMatrix>> = vec![None; upper.len()];
            let mut out = Vec::with_capacity(upper.len());
            for (k, v) in upper.points().enumerate() {
                let m = match (0..n).rev().find(|&i| v[i] > u[i]) {
                    None => IntMatrix::identity(module.dim(&u)),
                    Some(axis) => {
                        let mut prev = v.clone();
                        prev[axis] -= 1;
                        let pk = upper.index_of(&prev).expect("predecessor in sub-box");
                        let before = composites[pk].as_ref().expect("computed in lex order");
                        module.map(&prev, axis).mul(before)
                    }
                };
                let r = m.rank() as i64;
                composites[k] = Some(m);
                out.push((v, r));
            }
            out
        })
        .collect();
    let mut table = RankInvariant::zero(bbox.clone());
    for (ui, row) in per_source.into_iter().enumerate() {
        let u = bbox.point_at(ui);
        for (v, r) in row {
            if r != 0 {
                let idx = table.pair_index(&u, &v).expect("pair inside box");
                table.add_at(idx, r);
            }
        }
    }
    Ok(table)
}
