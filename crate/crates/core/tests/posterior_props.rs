use mvsv_dfc::posterior::{correlation_percentiles, empirical_hist, percentile_sorted, thin_and_burn};
use mvsv_dfc::SpdMatrix;
use proptest::prelude::*;

fn q_inv(r: f64) -> SpdMatrix {
    SpdMatrix::from_rows(&[[1.0, r], [r, 1.0]]).unwrap().inverse().unwrap()
}

fn probs_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.1f64..99.9, 1..6).prop_map(|mut p| {
        p.sort_by(f64::total_cmp);
        p
    })
}

proptest! {
    #[test]
    fn percentiles_increase_with_probability(
        corr in prop::collection::vec(prop::collection::vec(-0.95f64..0.95, 3), 1..40),
        probs in probs_strategy(),
    ) {
        let samples: Vec<Vec<SpdMatrix>> = corr.iter().map(|s| s.iter().map(|&r| q_inv(r)).collect()).collect();
        for t in correlation_percentiles(&samples, &probs).unwrap() {
            for p in &t.pairs {
                prop_assert!(p.values.windows(2).all(|w| w[0] <= w[1]));
                prop_assert!(p.values.iter().all(|v| (-1.0..=1.0).contains(v)));
            }
        }
    }

    #[test]
    fn percentiles_ignore_sample_order(
        corr in prop::collection::vec(-0.95f64..0.95, 2..40),
        seed in any::<u64>(),
    ) {
        let samples: Vec<Vec<SpdMatrix>> = corr.iter().map(|&r| vec![q_inv(r)]).collect();
        let mut shuffled = samples.clone();
        // Fisher-Yates driven by a simple LCG
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (state >> 33) as usize % (i + 1));
        }
        let probs = [2.5, 50.0, 97.5];
        prop_assert_eq!(
            correlation_percentiles(&samples, &probs).unwrap(),
            correlation_percentiles(&shuffled, &probs).unwrap()
        );
    }

    #[test]
    fn percentile_hits_order_statistics(mut xs in prop::collection::vec(-10.0f64..10.0, 2..50)) {
        xs.sort_by(f64::total_cmp);
        let n = xs.len();
        prop_assert_eq!(percentile_sorted(&xs, 0.0), xs[0]);
        prop_assert_eq!(percentile_sorted(&xs, 100.0), xs[n - 1]);
        for (i, &x) in xs.iter().enumerate() {
            let q = 100.0 * i as f64 / (n - 1) as f64;
            prop_assert!((percentile_sorted(&xs, q) - x).abs() < 1e-9);
        }
    }

    #[test]
    fn histogram_mass_is_one(
        xs in prop::collection::vec(-5.0f64..5.0, 1..200),
        n_bins in 1usize..40,
        lo in -3.0f64..0.0,
        width in 0.1f64..6.0,
    ) {
        let h = empirical_hist(&xs, n_bins, (lo, lo + width)).unwrap();
        prop_assert!((h.mass() - 1.0).abs() < 1e-10);
        prop_assert_eq!(h.counts.iter().sum::<u64>(), xs.len() as u64);
        let outside = xs.iter().filter(|x| !(lo..=lo + width).contains(*x)).count() as u64;
        prop_assert_eq!(h.clipped, outside);
    }

    #[test]
    fn thin_and_burn_schedule(len in 1usize..300, burn_frac in 0.0f64..1.0, thin in 1usize..20) {
        let trace: Vec<usize> = (0..len).collect();
        prop_assert_eq!(thin_and_burn(&trace, 0, 1).unwrap(), trace.clone());
        let burn = ((len as f64) * burn_frac) as usize;
        let kept = thin_and_burn(&trace, burn, thin).unwrap();
        prop_assert_eq!(kept.len(), (len - burn).div_ceil(thin));
        prop_assert!(kept.iter().all(|&i| i >= burn && (i - burn).is_multiple_of(thin)));
    }
}
