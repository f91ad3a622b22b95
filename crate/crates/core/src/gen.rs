//! Seeded random inputs: cube sets, signed cube sets and valid modules.

use crate::cube::CubeSpec;
use crate::decomposition::SignedCubeSet;
use crate::grid::{step, GridBox};
use crate::linalg::IntMatrix;
use crate::module::{direct_sum, module_from_cubes_in, validate, PersistenceModule};
use rand::seq::SliceRandom;
use rand::Rng;

/// The box `[0, side-1]^n`.
pub fn cube_box(n: usize, side: i64) -> GridBox {
    GridBox::new(vec![0; n], vec![side - 1; n]).expect("side >= 1")
}

/// A uniformly placed cube inside `bbox`; with `proper`, every side has
/// positive length (the box must then have side at least 2 on every axis).
pub fn random_cube<R: Rng + ?Sized>(rng: &mut R, bbox: &GridBox, proper: bool) -> CubeSpec {
    let mut x = Vec::with_capacity(bbox.n());
    let mut y = Vec::with_capacity(bbox.n());
    for i in 0..bbox.n() {
        let (lo, hi) = (bbox.lo()[i], bbox.hi()[i]);
        if proper {
            let a = rng.gen_range(lo..hi);
            x.push(a);
            y.push(rng.gen_range(a + 1..=hi));
        } else {
            let a = rng.gen_range(lo..=hi);
            x.push(a);
            y.push(rng.gen_range(a..=hi));
        }
    }
    CubeSpec::new(x, y).expect("ordered by construction")
}

/// A cube inside `bbox` with at least one zero-length side.
pub fn random_degenerate_cube<R: Rng + ?Sized>(rng: &mut R, bbox: &GridBox) -> CubeSpec {
    let c = random_cube(rng, bbox, false);
    let flat = rng.gen_range(0..bbox.n());
    let mut y = c.y().to_vec();
    y[flat] = c.x()[flat];
    CubeSpec::new(c.x().to_vec(), y).expect("ordered by construction")
}

/// Up to `max_terms` cubes in `bbox` with nonzero coefficients in
/// `[-max_coeff, max_coeff]`. Coefficients of repeated cubes are merged.
pub fn random_signed_set<R: Rng + ?Sized>(
    rng: &mut R,
    bbox: &GridBox,
    max_terms: usize,
    max_coeff: i64,
) -> SignedCubeSet {
    let mut x = SignedCubeSet::new(bbox.n());
    let terms = rng.gen_range(0..=max_terms);
    for _ in 0..terms {
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-max_coeff..=max_coeff);
        }
        x.add(random_cube(rng, bbox, false), c).expect("same n");
    }
    x
}

/// Between 1 and `max_cubes` cubes in `bbox` with multiplicities in `1..=max_mult`.
pub fn random_cube_list<R: Rng + ?Sized>(
    rng: &mut R,
    bbox: &GridBox,
    max_cubes: usize,
    max_mult: usize,
    proper: bool,
) -> Vec<(CubeSpec, usize)> {
    let count = rng.gen_range(1..=max_cubes.max(1));
    (0..count)
        .map(|_| {
            (
                random_cube(rng, bbox, proper),
                rng.gen_range(1..=max_mult.max(1)),
            )
        })
        .collect()
}

/// Interval module that is `Q` on `{v in bbox : v >= some p, v <= some q}`
/// with identity maps inside. Such sets are convex, so the maps commute.
pub fn staircase_module(
    bbox: &GridBox,
    lower: &[Vec<i64>],
    upper: &[Vec<i64>],
) -> PersistenceModule {
    let inside = |v: &[i64]| {
        lower.iter().any(|p| crate::grid::leq(p, v)) && upper.iter().any(|q| crate::grid::leq(v, q))
    };
    let mut m = PersistenceModule::zero(bbox.clone());
    for v in bbox.points() {
        if inside(&v) {
            m.set_dim(&v, 1).expect("point in box");
        }
    }
    for v in bbox.points() {
        for axis in 0..bbox.n() {
            let w = step(&v, axis);
            if bbox.contains(&w) && inside(&v) && inside(&w) {
                m.set_map(&v, axis, IntMatrix::identity(1)).expect("in box");
            }
        }
    }
    m
}

fn random_point<R: Rng + ?Sized>(rng: &mut R, bbox: &GridBox) -> Vec<i64> {
    (0..bbox.n())
        .map(|i| rng.gen_range(bbox.lo()[i]..=bbox.hi()[i]))
        .collect()
}

/// A random unimodular matrix and its inverse.
fn unimodular<R: Rng + ?Sized>(rng: &mut R, d: usize) -> (IntMatrix, IntMatrix) {
    let mut b = IntMatrix::identity(d);
    let mut inv = IntMatrix::identity(d);
    if d < 2 {
        if d == 1 && rng.gen_bool(0.5) {
            b.set(0, 0, (-1).into());
            inv.set(0, 0, (-1).into());
        }
        return (b, inv);
    }
    for _ in 0..2 * d {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = *[-1, 1].choose(rng).expect("nonempty");
        let mut e = IntMatrix::identity(d);
        e.set(i, j, c.into());
        let mut e_inv = IntMatrix::identity(d);
        e_inv.set(i, j, (-c).into());
        b = e.mul(&b);
        inv = inv.mul(&e_inv);
    }
    (b, inv)
}

/// Replaces every structure map `phi_{v,v+e}` by `B_{v+e} phi B_v^-1` for
/// random unimodular `B`. Ranks and commutativity are preserved.
pub fn random_base_change<R: Rng + ?Sized>(
    rng: &mut R,
    module: &PersistenceModule,
) -> PersistenceModule {
    let bbox = module.bbox().clone();
    let bases: Vec<(IntMatrix, IntMatrix)> = bbox
        .points()
        .map(|v| unimodular(rng, module.dim(&v)))
        .collect();
    let mut out = module.clone();
    for v in bbox.points() {
        let iv = bbox.index_of(&v).expect("in box");
        for axis in 0..bbox.n() {
            let w = step(&v, axis);
            let Some(iw) = bbox.index_of(&w) else {
                continue;
            };
            let m = module.map(&v, axis);
            let changed = bases[iw].0.mul(&m).mul(&bases[iv].1);
            out.set_map(&v, axis, changed).expect("in box");
        }
    }
    out
}

/// A module that is generally not a direct sum of cubes: at most `max_summands`
/// cube and staircase intervals, single-entry perturbations kept only when the
/// module stays valid, then a random base change at every point. Every
/// dimension is at most `max_summands`.
pub fn random_general_module<R: Rng + ?Sized>(
    rng: &mut R,
    bbox: &GridBox,
    max_summands: usize,
    perturbations: usize,
) -> PersistenceModule {
    let count = rng.gen_range(1..=max_summands.max(1));
    let mut module = PersistenceModule::zero(bbox.clone());
    for _ in 0..count {
        let part = if rng.gen_bool(0.5) {
            module_from_cubes_in(bbox.clone(), &[(random_cube(rng, bbox, false), 1)])
                .expect("cube in box")
        } else {
            let lower: Vec<Vec<i64>> = (0..rng.gen_range(1..=2))
                .map(|_| random_point(rng, bbox))
                .collect();
            let upper: Vec<Vec<i64>> = (0..rng.gen_range(1..=2))
                .map(|_| random_point(rng, bbox))
                .collect();
            staircase_module(bbox, &lower, &upper)
        };
        module = direct_sum(&module, &part).expect("same n");
    }
    let maps: Vec<(Vec<i64>, usize)> = module
        .stored_maps()
        .filter(|(_, _, m)| m.rows() > 0 && m.cols() > 0)
        .map(|(v, axis, _)| (v, axis))
        .collect();
    if !maps.is_empty() {
        for _ in 0..perturbations {
            let (v, axis) = maps.choose(rng).expect("nonempty").clone();
            let mut m = module.map(&v, axis).into_owned();
            let r = rng.gen_range(0..m.rows());
            let c = rng.gen_range(0..m.cols());
            let delta: i64 = *[-2, -1, 1, 2].choose(rng).expect("nonempty");
            let updated = m.get(r, c) + delta;
            m.set(r, c, updated);
            let mut candidate = module.clone();
            candidate.set_map(&v, axis, m).expect("in box");
            if validate(&candidate).is_empty() {
                module = candidate;
            }
        }
    }
    random_base_change(rng, &module)
}

/// Positive cubes with coordinates in `[lo, hi]` and distinct volumes, each at
/// most `ratio` times the next larger one. Gives up and returns fewer summands
/// if the constraint cannot be met after many attempts.
pub fn random_separated_set<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    summands: usize,
    lo: i64,
    hi: i64,
    ratio: f64,
) -> SignedCubeSet {
    let bbox = GridBox::new(vec![lo; n], vec![hi; n]).expect("lo <= hi");
    let volume = |c: &CubeSpec| c.eta().iter().product::<i64>() as f64;
    let mut best: Vec<CubeSpec> = Vec::new();
    for _ in 0..200 {
        let mut picked: Vec<CubeSpec> = Vec::new();
        for _ in 0..summands {
            let limit = picked.last().map_or(f64::INFINITY, |c| volume(c) * ratio);
            let found = (0..200)
                .map(|_| random_cube(rng, &bbox, true))
                .find(|c| volume(c) <= limit + 1e-12);
            match found {
                Some(c) => picked.push(c),
                None => break,
            }
        }
        if picked.len() > best.len() {
            best = picked;
        }
        if best.len() == summands {
            break;
        }
    }
    let mut out = SignedCubeSet::new(n);
    for c in best {
        out.add(c, 1).expect("same n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::decompose;
    use crate::module::rank_table;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn general_modules_are_valid_and_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(1..=2);
            let bbox = cube_box(n, rng.gen_range(2..=5));
            let m = random_general_module(&mut rng, &bbox, 3, 8);
            assert!(validate(&m).is_empty());
            assert!(bbox.points().all(|v| m.dim(&v) <= 3));
        }
    }

    #[test]
    fn staircases_are_not_always_cubes() {
        let bbox = cube_box(2, 3);
        let m = staircase_module(&bbox, &[vec![0, 1], vec![1, 0]], &[vec![2, 2]]);
        assert!(validate(&m).is_empty());
        let x = decompose(&rank_table(&m).unwrap());
        assert!(!x.is_positive());
    }

    #[test]
    fn base_change_keeps_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bbox = cube_box(2, 4);
        let cubes = random_cube_list(&mut rng, &bbox, 3, 2, false);
        let m = module_from_cubes_in(bbox, &cubes).unwrap();
        let b = random_base_change(&mut rng, &m);
        assert!(validate(&b).is_empty());
        assert!(rank_table(&m)
            .unwrap()
            .same_function(&rank_table(&b).unwrap()));
    }

    #[test]
    fn separated_sets_respect_the_ratio() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let x = random_separated_set(&mut rng, 2, 4, 1, 9, 2.0 / 3.0);
            let mut vols: Vec<i64> = x.iter().map(|(c, _)| c.eta().iter().product()).collect();
            vols.sort_unstable_by(|a, b| b.cmp(a));
            assert!(vols.windows(2).all(|w| 3 * w[1] <= 2 * w[0]));
            assert!(x
                .iter()
                .all(|(c, k)| k == 1 && c.x().iter().all(|&v| v >= 1)));
        }
    }
}
