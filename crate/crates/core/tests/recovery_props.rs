use persinv_core::gen::random_separated_set;
use persinv_core::recovery::{
    nested_log_product, normalized_sum, recover_cube_set, RecoverySchedule,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn separated_sets_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let schedule = RecoverySchedule::default();
    for trial in 0..60 {
        let n = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=4);
        let x = random_separated_set(&mut rng, n, m, 1, 9, 2.0 / 3.0);
        let out = recover_cube_set(&x, &schedule, false).unwrap();
        assert!(out.is_exact(), "trial {trial}: {x:?} -> {out:?}");
        assert_eq!(out.to_cube_set().unwrap(), x, "trial {trial}");
        let mut vols: Vec<f64> = x
            .iter()
            .map(|(c, _)| c.eta().iter().product::<i64>() as f64)
            .collect();
        vols.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (c, v) in out.cubes.iter().zip(vols) {
            assert!((c.volume_raw - v).abs() / v < 1e-6);
        }
    }
}

#[test]
fn recovery_ignores_summand_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..10 {
        let x = random_separated_set(&mut rng, 2, 3, 1, 9, 2.0 / 3.0);
        let mut cubes: Vec<_> = x.iter().map(|(c, k)| (c.clone(), k)).collect();
        cubes.reverse();
        let y = persinv_core::SignedCubeSet::from_terms(2, cubes).unwrap();
        let a = recover_cube_set(&x, &RecoverySchedule::default(), false).unwrap();
        let b = recover_cube_set(&y, &RecoverySchedule::default(), false).unwrap();
        assert_eq!(a, b);
    }
}

proptest! {
    #[test]
    fn nested_products_decrease(
        a1 in 0.05f64..0.9,
        rest in proptest::collection::vec(0.2f64..5.0, 0..3),
    ) {
        let mut a = vec![a1];
        a.extend(rest);
        let vals: Vec<f64> = [24u64, 32, 48, 64].iter().map(|&k| nested_log_product(&a, k)).collect();
        prop_assert!(vals.windows(2).all(|w| w[1] < w[0]), "{:?}", vals);
    }

    #[test]
    fn normalized_sum_bounds(
        rows in proptest::collection::vec(
            (proptest::collection::vec(0.1f64..1.0, 2), 1u32..4), 1..5),
        top_weight in 1u32..4,
    ) {
        // First vector dominates every other one componentwise.
        let mut z = vec![vec![1.0, 1.0]];
        let mut w = vec![top_weight as f64];
        for (zi, wi) in rows {
            z.push(zi);
            w.push(wi as f64);
        }
        let total: f64 = w.iter().sum();
        for k in [2u64, 4, 8, 16, 32, 64] {
            let q = normalized_sum(&w, &z, k);
            prop_assert!(q >= w[0] - 1e-12 && q <= total + 1e-9, "k={} q={}", k, q);
        }
    }
}
