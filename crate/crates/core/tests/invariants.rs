use proptest::prelude::*;
use specmult::experiments::{line_fit, ExperimentConfig};
use specmult::mellin::transform::log_gaussian;
use specmult::mellin::{marcinkiewicz_norm, self_test, ConditionOrder, LinAxis, LogAxis, SweepOptions};
use specmult::norms::PowerOptions;
use specmult::riesz::{discrete_riesz_operator, CyclicGroupSpec, NORMALIZATION};
use specmult::symbol::Symbol;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn line_fit_recovers_lines(slope in -5.0f64..5.0, intercept in -5.0f64..5.0, n in 3usize..40) {
        let x: Vec<f64> = (0..n).map(|i| i as f64 * 0.5).collect();
        let y: Vec<f64> = x.iter().map(|t| slope * t + intercept).collect();
        let fit = line_fit(&x, &y).unwrap();
        prop_assert!((fit.slope - slope).abs() < 1e-9);
        prop_assert!((fit.intercept - intercept).abs() < 1e-9);
        prop_assert!(fit.max_residual < 1e-9);
    }

    #[test]
    fn discrete_riesz_has_l2_norm_sqrt2(k in 2usize..14, d in 1usize..4, r in 0usize..3) {
        let spec = CyclicGroupSpec::simple_walk(k, d).unwrap();
        let op = discrete_riesz_operator(&spec, r % d).unwrap();
        prop_assert!((op.l2_norm() - NORMALIZATION).abs() < 1e-10);
    }

    #[test]
    fn lower_bound_below_upper_bound(k in 3usize..12, p in 1.2f64..6.0) {
        let spec = CyclicGroupSpec::simple_walk(k, 1).unwrap();
        let op = discrete_riesz_operator(&spec, 0).unwrap();
        let opts = PowerOptions { restarts: 2, ..PowerOptions::default() };
        let lower = op.lower_bound(p, &opts);
        prop_assert!(lower <= op.upper_bound(p) * (1.0 + 1e-9));
        prop_assert!(lower > 0.0);
    }

    #[test]
    fn imaginary_power_first_order_norm_scales(u in -12.0f64..12.0) {
        let rho = ConditionOrder::new(vec![1]).unwrap();
        let sweep = SweepOptions { j_min: -3, j_max: 3, ..SweepOptions::default() };
        let report = marcinkiewicz_norm(&Symbol::imaginary_power(vec![u]), &rho, &sweep).unwrap();
        let ln2 = std::f64::consts::LN_2.sqrt();
        prop_assert!((report.get(&[0]).unwrap().norm - ln2).abs() < 1e-8);
        prop_assert!((report.get(&[1]).unwrap().norm - u.abs() * ln2).abs() < 1e-8);
    }

    #[test]
    fn config_rejects_p_at_most_one(p in -3.0f64..=1.0) {
        let mut cfg = ExperimentConfig::new("riesz-dim-sweep", "out");
        cfg.sweep.p = Some(vec![2.0, p]);
        prop_assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_accepts_in_range_sweeps(p in 1.01f64..20.0, k in 2usize..=256, d in 1usize..=4) {
        let mut cfg = ExperimentConfig::new("riesz-dim-sweep", "out");
        cfg.sweep.p = Some(vec![p]);
        cfg.sweep.k = Some(vec![k]);
        cfg.sweep.d = Some(vec![d]);
        prop_assert!(cfg.validate().is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn mellin_plancherel_and_inversion(a in 0.5f64..2.0, b in -1.0f64..1.0, k in -3.0f64..3.0) {
        let m = log_gaussian(vec![LogAxis::standard()], &[a], &[b], &[k]).unwrap();
        let st = self_test(&m, &[LinAxis::standard()]).unwrap();
        prop_assert!(st.plancherel_rel_err < 1e-6);
        prop_assert!(st.round_trip_rel_err < 1e-6);
    }
}
