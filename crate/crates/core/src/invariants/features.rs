//! Batch evaluation of invariants on modules and signed cube sets.

use super::closed_form::{f_signed, p_signed};
use super::index::InvariantIndex;
use super::oracle::f_integral_oracle;
use crate::decomposition::{decompose, SignedCubeSet};
use crate::error::{Error, Result};
use crate::module::{rank_table, PersistenceModule};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Integral invariants `F_{a,b}`.
    F,
    /// Power sums `p_{a,b}`.
    P,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::F => "F",
            Family::P => "p",
        }
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    ClosedForm,
    Oracle,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureEntry {
    pub index: InvariantIndex,
    pub value: BigRational,
    pub provenance: Provenance,
}

/// Values of one family, graded then lexicographic in the index.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub n: usize,
    pub family: Family,
    pub entries: Vec<FeatureEntry>,
}

impl FeatureEntry {
    /// Nearest `f64`, for display next to the exact value.
    pub fn approx(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    /// `p/q` with `q > 0` and `gcd(p, q) = 1`, always with a denominator.
    pub fn exact_string(&self) -> String {
        format!("{}/{}", self.value.numer(), self.value.denom())
    }
}

impl FeatureVector {
    pub fn get(&self, idx: &InvariantIndex) -> Option<&BigRational> {
        self.entries
            .iter()
            .find(|e| &e.index == idx)
            .map(|e| &e.value)
    }

    pub fn values(&self) -> Vec<BigRational> {
        self.entries.iter().map(|e| e.value.clone()).collect()
    }
}

/// `F_{a,b}` of a module, via its signed cube decomposition.
pub fn f_module(idx: &InvariantIndex, module: &PersistenceModule) -> Result<BigRational> {
    f_signed(idx, &decompose(&rank_table(module)?))
}

/// `p_{a,b}` of a module, via its signed cube decomposition.
pub fn p_module(idx: &InvariantIndex, module: &PersistenceModule) -> Result<BigRational> {
    p_signed(idx, &decompose(&rank_table(module)?))
}

/// Evaluates every index of degree `<= max_degree` on a signed cube set.
pub fn feature_vector_signed(
    x: &SignedCubeSet,
    max_degree: u32,
    family: Family,
) -> Result<FeatureVector> {
    let indices = InvariantIndex::up_to_degree(x.n(), max_degree);
    let entries = indices
        .into_par_iter()
        .map(|index| {
            let value = match family {
                Family::F => f_signed(&index, x)?,
                Family::P => p_signed(&index, x)?,
            };
            Ok(FeatureEntry {
                index,
                value,
                provenance: Provenance::ClosedForm,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureVector {
        n: x.n(),
        family,
        entries,
    })
}

/// Evaluates every index of degree `<= max_degree` on a module. The
/// decomposition is computed once.
pub fn feature_vector(
    module: &PersistenceModule,
    max_degree: u32,
    family: Family,
) -> Result<FeatureVector> {
    feature_vector_with(module, max_degree, family, Provenance::ClosedForm)
}

/// Like [`feature_vector`], but `F` values may be taken from the integration
/// oracle instead of the closed forms. Power sums have no oracle route.
pub fn feature_vector_with(
    module: &PersistenceModule,
    max_degree: u32,
    family: Family,
    route: Provenance,
) -> Result<FeatureVector> {
    if max_degree < module.n() as u32 {
        return Err(Error::InvalidArgument(format!(
            "max degree {max_degree} is below the parameter count {}",
            module.n()
        )));
    }
    let rho = rank_table(module)?;
    match (family, route) {
        (_, Provenance::ClosedForm) => feature_vector_signed(&decompose(&rho), max_degree, family),
        (Family::P, Provenance::Oracle) => Err(Error::InvalidArgument(
            "power sums have no integration oracle".into(),
        )),
        (Family::F, Provenance::Oracle) => {
            let entries = InvariantIndex::up_to_degree(module.n(), max_degree)
                .into_par_iter()
                .map(|index| {
                    let value = f_integral_oracle(&index, &rho)?;
                    Ok(FeatureEntry {
                        index,
                        value,
                        provenance: Provenance::Oracle,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FeatureVector {
                n: module.n(),
                family,
                entries,
            })
        }
    }
}
