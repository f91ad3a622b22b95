use persinv_core::gen::{cube_box, random_cube_list, random_general_module};
use persinv_core::grid::leq;
use persinv_core::{
    direct_sum, module_from_cubes, module_from_cubes_in, rank, rank_table, validate,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn composites_are_path_independent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=3);
        let side = if n == 2 { r.gen_range(2..=4) } else { r.gen_range(2..=3) };
        let bbox = cube_box(n, side);
        let m = random_general_module(&mut r, &bbox, 3, 6);
        let forward: Vec<usize> = (0..n).collect();
        let backward: Vec<usize> = (0..n).rev().collect();
        for u in bbox.points() {
            for v in bbox.points().filter(|v| leq(&u, v)) {
                prop_assert_eq!(
                    m.composite_along(&u, &v, &forward),
                    m.composite_along(&u, &v, &backward)
                );
            }
        }
    }

    #[test]
    fn rank_is_monotone_under_nesting(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=2);
        let bbox = cube_box(n, r.gen_range(2..=4));
        let m = random_general_module(&mut r, &bbox, 3, 6);
        let t = rank_table(&m).unwrap();
        let pts: Vec<Vec<i64>> = bbox.points().collect();
        for (u, v, val) in t.iter() {
            for u2 in pts.iter().filter(|p| leq(&u, p) && leq(p, &v)) {
                for v2 in pts.iter().filter(|p| leq(u2, p) && leq(p, &v)) {
                    prop_assert!(t.get(u2, v2) >= val);
                }
            }
        }
    }

    #[test]
    fn rank_table_is_additive(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=2);
        let bbox = cube_box(n, r.gen_range(2..=4));
        let a = random_general_module(&mut r, &bbox, 2, 4);
        let b = module_from_cubes_in(bbox.clone(), &random_cube_list(&mut r, &bbox, 3, 2, false)).unwrap();
        let sum = direct_sum(&a, &b).unwrap();
        let expect = rank_table(&a).unwrap().plus(&rank_table(&b).unwrap()).unwrap();
        prop_assert!(rank_table(&sum).unwrap().same_function(&expect));
        for v in bbox.points() {
            prop_assert_eq!(sum.dim(&v), a.dim(&v) + b.dim(&v));
        }
    }

    #[test]
    fn cube_modules_match_counting(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=3);
        let bbox = cube_box(n, r.gen_range(1..=4));
        let cubes = random_cube_list(&mut r, &bbox, 4, 3, false);
        let m = module_from_cubes(n, &cubes).unwrap();
        prop_assert!(validate(&m).is_empty());
        let t = rank_table(&m).unwrap();
        for v in m.bbox().points() {
            let count: usize = cubes.iter().filter(|(c, _)| c.contains_point(&v)).map(|(_, k)| k).sum();
            prop_assert_eq!(m.dim(&v), count);
        }
        for (u, v, val) in t.iter() {
            let count: usize = cubes
                .iter()
                .filter(|(c, _)| c.rank(&u, &v) == 1)
                .map(|(_, k)| k)
                .sum();
            prop_assert_eq!(val as usize, count);
            prop_assert_eq!(rank(&m, &u, &v).unwrap(), count);
        }
    }
}

#[test]
fn zero_dimensional_module_has_zero_table() {
    let m = persinv_core::PersistenceModule::zero(cube_box(2, 3));
    assert!(validate(&m).is_empty());
    assert!(rank_table(&m).unwrap().is_zero());
}
