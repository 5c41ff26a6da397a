mod common;

use common::*;
use dualblind::metrics::{comm_sinr_db, radar_mutual_information, spectral_efficiency};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn capacities_are_nonnegative_and_vanish_only_at_zero(seed in any::<u64>(), nr in 1usize..=5, nt in 1usize..=6, t in 1usize..=8, scale in 0.0f64..3.0) {
        let seed = seed % (1 << 40);
        let h = randn(nr, nt, seed);
        let x = randn(nt, t, seed + 1).scale(scale);
        for value in [spectral_efficiency(&h, &x, 0.1).unwrap(), radar_mutual_information(&h, &x, 0.1).unwrap()] {
            prop_assert!(value >= 0.0);
            if scale > 1e-3 {
                prop_assert!(value > 0.0);
            }
        }
        prop_assert_eq!(spectral_efficiency(&h, &x.scale(0.0), 0.1).unwrap(), 0.0);
    }

    #[test]
    fn capacities_ignore_a_unitary_right_factor(seed in any::<u64>(), nr in 1usize..=4, nt in 1usize..=5, t in 1usize..=6) {
        let seed = seed % (1 << 40);
        let h = randn(nr, nt, seed);
        let x = randn(nt, t, seed + 1);
        let q = random_unitary(t, seed + 2);
        let xq = x.matmul(&q);
        let (a, b) = (spectral_efficiency(&h, &x, 0.05).unwrap(), spectral_efficiency(&h, &xq, 0.05).unwrap());
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
        let (a, b) = (radar_mutual_information(&h, &x, 0.05).unwrap(), radar_mutual_information(&h, &xq, 0.05).unwrap());
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn sinr_ignores_a_joint_receiver_rotation(seed in any::<u64>(), nc in 1usize..=4, nt in 1usize..=5, t in 1usize..=6) {
        let seed = seed % (1 << 40);
        let h = randn(nc, nt, seed);
        let x = randn(nt, t, seed + 1);
        let y = &h.matmul(&x) + &randn(nc, t, seed + 2).scale(0.1);
        let u = random_unitary(nc, seed + 3);
        let a = comm_sinr_db(&y, &h, &x).unwrap();
        let b = comm_sinr_db(&u.matmul(&y), &u.matmul(&h), &x).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
    }
}
