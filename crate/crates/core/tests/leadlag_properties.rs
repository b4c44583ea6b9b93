//! Property and robustness tests for the lead-lag test machinery.

use proptest::prelude::*;

use hfmax::leadlag::{
    bootstrap_statistics, contrast, contrast_naive, p_value, test_statistic, BootstrapConfig,
    ContrastOptions, LagGrid, Multiplier,
};
use hfmax::seed::Seed;
use hfmax::sim::{simulate_leadlag, LeadLagModel, PathPair, SamplingScheme, SchemeKind};

fn path_from_parts(t1: Vec<f64>, x1: Vec<f64>, t2: Vec<f64>, x2: Vec<f64>) -> PathPair {
    let horizon = t1.last().unwrap().max(*t2.last().unwrap()) + 1.0;
    PathPair {
        scheme: SamplingScheme {
            times1: t1,
            times2: t2,
            kind: SchemeKind::Custom,
            horizon,
        },
        x1,
        x2,
    }
}

/// Strictly increasing times from positive steps, starting at 0.
fn times_strategy(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..0.2, 2..max_len).prop_map(|steps| {
        let mut t = vec![0.0f64];
        for s in steps {
            t.push(t.last().unwrap() + s);
        }
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sweep_and_naive_agree_bitwise(
        t1 in times_strategy(20),
        t2 in times_strategy(20),
        lag_seed in 0u64..1000,
    ) {
        let n1 = t1.len();
        let n2 = t2.len();
        let mut rng = Seed::new(lag_seed).rng();
        use rand::Rng;
        let x1: Vec<f64> = (0..n1).map(|_| rng.random::<f64>() - 0.5).collect();
        let x2: Vec<f64> = (0..n2).map(|_| rng.random::<f64>() - 0.5).collect();
        let mut lags: Vec<f64> = (0..7).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        lags.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        lags.dedup();
        let grid = LagGrid::new(lags).unwrap();
        let path = path_from_parts(t1, x1, t2, x2);
        let opts = ContrastOptions::default();
        let sweep = contrast(&path, &grid, &opts).unwrap();
        let naive = contrast_naive(&path, &grid, &opts).unwrap();
        prop_assert_eq!(sweep, naive);
    }

    #[test]
    fn asset_swap_with_negated_grid_preserves_statistic(
        t1 in times_strategy(16),
        t2 in times_strategy(16),
        data_seed in 0u64..1000,
    ) {
        let mut rng = Seed::new(data_seed).rng();
        use rand::Rng;
        let x1: Vec<f64> = (0..t1.len()).map(|_| rng.random::<f64>() - 0.5).collect();
        let x2: Vec<f64> = (0..t2.len()).map(|_| rng.random::<f64>() - 0.5).collect();
        let lags: Vec<f64> = vec![-0.31, -0.1, 0.0, 0.07, 0.25];
        let grid = LagGrid::new(lags.clone()).unwrap();
        let negated = LagGrid::new(lags.iter().rev().map(|t| -t).collect()).unwrap();

        let fwd = contrast(&path_from_parts(t1.clone(), x1.clone(), t2.clone(), x2.clone()), &grid, &ContrastOptions::default()).unwrap();
        let swapped = contrast(&path_from_parts(t2, x2, t1, x1), &negated, &ContrastOptions::default()).unwrap();

        // U_swapped(-theta) = U(theta): compare values pairwise (reversed),
        // up to summation-order rounding.
        for (k, u) in fwd.values.iter().enumerate() {
            let v = swapped.values[swapped.values.len() - 1 - k];
            prop_assert!((u - v).abs() <= 1e-12 * u.abs().max(1.0), "U({}) = {u} vs swapped {v}", fwd.thetas[k]);
        }
        let t_fwd = test_statistic(&fwd.values, 0, false).unwrap();
        let t_swp = test_statistic(&swapped.values, 0, false).unwrap();
        prop_assert!((t_fwd - t_swp).abs() <= 1e-12 * t_fwd.max(1.0));
    }
}

#[test]
fn bootstrap_is_independent_of_thread_count() {
    let model = LeadLagModel::with_unit_vols(0.4, 0.1, 1.0);
    let scheme = SamplingScheme::equidistant(0.02, 1.0).unwrap();
    let grid = LagGrid::symmetric(0.02, 0.3).unwrap();
    let path = simulate_leadlag(&model, &scheme, Seed::new(7)).unwrap();
    let cfg = BootstrapConfig {
        replications: 199,
        seed: Seed::new(8),
        ..BootstrapConfig::default()
    };
    let run_with = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| bootstrap_statistics(&path, &grid, &cfg, &ContrastOptions::default()).unwrap())
    };
    let single = run_with(1);
    let multi = run_with(2);
    assert_eq!(single, multi);
}

#[test]
fn null_p_values_reject_at_about_the_nominal_level() {
    // Cheap null study: 500 datasets at a coarse sampling frequency. The
    // empirical rejection rate at the 5% level should land in [0.03, 0.07].
    let model = LeadLagModel::with_unit_vols(0.0, 0.1, 1.0);
    let scheme = SamplingScheme::equidistant(0.02, 1.0).unwrap();
    let grid = LagGrid::symmetric(0.02, 0.3).unwrap();
    let opts = ContrastOptions::default();
    let root = Seed::new(4242);
    use rayon::prelude::*;
    let rejections: usize = (0..500usize)
        .into_par_iter()
        .map(|it| {
            let iter_seed = root.child(it as u64);
            let path = simulate_leadlag(&model, &scheme, iter_seed.child(0)).unwrap();
            let c = contrast(&path, &grid, &opts).unwrap();
            let t = test_statistic(&c.values, 0, false).unwrap();
            let cfg = BootstrapConfig {
                replications: 299,
                multiplier: Multiplier::Rademacher,
                seed: iter_seed.child(1),
                ..BootstrapConfig::default()
            };
            let boot = bootstrap_statistics(&path, &grid, &cfg, &opts).unwrap();
            (p_value(t, &boot) <= 0.05) as usize
        })
        .sum();
    let rate = rejections as f64 / 500.0;
    assert!(
        (0.03..=0.07).contains(&rate),
        "null rejection rate {rate} outside [0.03, 0.07]"
    );
}

#[test]
fn run_test_report_is_internally_consistent() {
    let model = LeadLagModel::with_unit_vols(0.6, 0.1, 1.0);
    let scheme = SamplingScheme::equidistant(0.01, 1.0).unwrap();
    let grid = LagGrid::symmetric(0.01, 0.3).unwrap();
    let cfg = BootstrapConfig {
        replications: 199,
        seed: Seed::new(3),
        ..BootstrapConfig::default()
    };
    let path = simulate_leadlag(&model, &scheme, Seed::new(11)).unwrap();
    let report = hfmax::leadlag::run_test(&path, &grid, 0.05, &cfg, &ContrastOptions::default()).unwrap();

    // The statistic is the max of |contrast| under the recorded scaling.
    let max_abs = report.contrast.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    assert_eq!(report.statistic, max_abs);
    assert!((0.0..=1.0).contains(&report.p_value));
    assert_eq!(report.reject, report.p_value <= report.alpha);
    // The quantile is the recorded order statistic of the bootstrap sample.
    let mut sorted = report.bootstrap_statistics.clone();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(report.quantile, sorted[report.quantile_rank - 1]);
    // The argmax lag carries the largest |contrast|.
    let k = report.thetas.iter().position(|&t| t == report.argmax_theta).unwrap();
    assert_eq!(report.contrast[k].abs(), max_abs);
    // With a strong lag signal the detected lag is the true one.
    assert!((report.argmax_theta - 0.1).abs() < 1e-12);
    assert!(report.reject);
}
