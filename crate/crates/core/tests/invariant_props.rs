use num_rational::BigRational;
use persinv_core::gen::{
    cube_box, random_cube_list, random_degenerate_cube, random_general_module, random_signed_set,
};
use persinv_core::invariants::{
    diagonal_coefficient, expand_f, f_integral_oracle, f_interval_1d, f_module, f_signed,
    f_to_p_matrix, feature_vector, p_signed, Family, InvariantIndex,
};
use persinv_core::{
    direct_sum, module_from_cubes, module_from_cubes_in, rank_table, SignedCubeSet,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn closed_forms_match_the_integral(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let n = r.gen_range(1..=2);
        let bbox = cube_box(n, r.gen_range(2..=5));
        let m = random_general_module(&mut r, &bbox, 3, 6);
        let rho = rank_table(&m).unwrap();
        for idx in InvariantIndex::up_to_degree(n, 4) {
            prop_assert_eq!(f_module(&idx, &m).unwrap(), f_integral_oracle(&idx, &rho).unwrap());
        }
    }

    #[test]
    fn change_of_basis_links_the_families(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let n = r.gen_range(1..=2);
        let bbox = cube_box(n, 5);
        let x = random_signed_set(&mut r, &bbox, 6, 3);
        for d in n as u32..=5 {
            let cb = f_to_p_matrix(n, d);
            let p: Vec<_> = cb.indices.iter().map(|i| p_signed(i, &x).unwrap()).collect();
            let f: Vec<_> = cb.indices.iter().map(|i| f_signed(i, &x).unwrap()).collect();
            prop_assert_eq!(&cb.apply(&p), &f);
            prop_assert_eq!(&cb.apply_inverse(&f), &p);
        }
    }

    #[test]
    fn degenerate_cubes_change_nothing(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let n = r.gen_range(1..=3);
        let bbox = cube_box(n, 5);
        let x = random_signed_set(&mut r, &bbox, 6, 3);
        let mut y = x.clone();
        for _ in 0..r.gen_range(1..=3) {
            let c = r.gen_range(1..=3) * if r.gen_bool(0.5) { 1 } else { -1 };
            y.add(random_degenerate_cube(&mut r, &bbox), c).unwrap();
        }
        for idx in InvariantIndex::up_to_degree(n, 5) {
            prop_assert_eq!(p_signed(&idx, &x).unwrap(), p_signed(&idx, &y).unwrap());
            prop_assert_eq!(f_signed(&idx, &x).unwrap(), f_signed(&idx, &y).unwrap());
        }
    }

    #[test]
    fn both_families_are_additive(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let n = r.gen_range(1..=2);
        let bbox = cube_box(n, 4);
        let a = random_general_module(&mut r, &bbox, 2, 4);
        let b = random_general_module(&mut r, &bbox, 2, 4);
        let s = direct_sum(&a, &b).unwrap();
        for family in [Family::F, Family::P] {
            let fa = feature_vector(&a, 4, family).unwrap().values();
            let fb = feature_vector(&b, 4, family).unwrap().values();
            let fs = feature_vector(&s, 4, family).unwrap().values();
            let sum: Vec<BigRational> = fa.iter().zip(&fb).map(|(x, y)| x + y).collect();
            prop_assert_eq!(fs, sum);
        }
    }

    #[test]
    fn summand_order_is_irrelevant(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let n = r.gen_range(1..=2);
        let bbox = cube_box(n, 4);
        let mut cubes = random_cube_list(&mut r, &bbox, 4, 2, false);
        let a = module_from_cubes_in(bbox.clone(), &cubes).unwrap();
        cubes.reverse();
        let b = module_from_cubes_in(bbox, &cubes).unwrap();
        for family in [Family::F, Family::P] {
            prop_assert_eq!(
                feature_vector(&a, 4, family).unwrap().values(),
                feature_vector(&b, 4, family).unwrap().values()
            );
        }
    }
}

#[test]
fn one_dimensional_sanity() {
    for x in -3..=3 {
        for y in x..=3 {
            assert_eq!(f_interval_1d(1, 0, x, y).unwrap(), q(y - x, 1));
            assert_eq!(f_interval_1d(2, 0, x, y).unwrap(), q((y - x) * (y - x), 2));
        }
    }
    assert_eq!(f_interval_1d(3, 0, 0, 1).unwrap(), q(1, 6));
}

#[test]
fn expansions_are_homogeneous_and_triangular() {
    for (n, max) in [(1usize, 6u32), (2, 5), (3, 5)] {
        for d in n as u32..=max {
            let cb = f_to_p_matrix(n, d);
            assert!(cb.respects_partial_order());
            for (k, idx) in cb.indices.iter().enumerate() {
                assert_eq!(cb.t[k][k], diagonal_coefficient(idx));
                for mono in expand_f(idx).keys() {
                    assert_eq!(mono.degree(), d);
                    assert!(mono.a().iter().zip(idx.a()).all(|(m, a)| m >= a));
                }
            }
        }
    }
}

#[test]
fn fixture_values() {
    let c = |x: i64, y: i64| persinv_core::CubeSpec::new(vec![x], vec![y]).unwrap();
    let m = module_from_cubes(1, &[(c(0, 2), 1), (c(1, 3), 1)]).unwrap();
    let x = SignedCubeSet::from_terms(1, [(c(0, 2), 1), (c(1, 3), 1)]).unwrap();
    let a10 = InvariantIndex::new(vec![1], vec![0]).unwrap();
    let a11 = InvariantIndex::new(vec![1], vec![1]).unwrap();
    assert_eq!(f_signed(&a10, &x).unwrap(), q(4, 1));
    assert_eq!(f_module(&a10, &m).unwrap(), q(4, 1));
    assert_eq!(p_signed(&a11, &x).unwrap(), q(12, 1));
    let single = module_from_cubes(1, &[(c(0, 2), 1)]).unwrap();
    let rho = rank_table(&single).unwrap();
    let a20 = InvariantIndex::new(vec![2], vec![0]).unwrap();
    assert_eq!(f_integral_oracle(&a10, &rho).unwrap(), q(2, 1));
    assert_eq!(f_integral_oracle(&a20, &rho).unwrap(), q(2, 1));
}
