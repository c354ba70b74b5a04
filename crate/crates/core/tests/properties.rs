use orlicz_core::norms::modular;
use orlicz_core::{
    classify_gate, decreasing_rearrangement, dominates, gagliardo_modular, holder_check, luxemburg_norm, seminorm, Estimator, Field, Gate,
    MeasureSpec, Range, SampledFunction, SmoothnessParams, YoungFunction,
};
use proptest::prelude::*;

fn young() -> impl Strategy<Value = YoungFunction> {
    prop_oneof![
        (1.1f64..6.0).prop_map(|p| YoungFunction::power(p).unwrap()),
        (1.2f64..4.0, -1.0f64..2.0, 1.2f64..5.0, -1.0f64..2.0)
            .prop_map(|(p0, a0, p, a)| YoungFunction::power_log(p0, a0, p, a).unwrap()),
        (0.5f64..2.0).prop_map(|g| YoungFunction::exponential(-1.0, g).unwrap()),
    ]
}

fn step_function(max_cells: usize) -> impl Strategy<Value = SampledFunction> {
    prop::collection::vec((0.05f64..1.0, -3.0f64..3.0), 1..max_cells).prop_map(|cells| {
        let mut grid = vec![0.0];
        let mut values = Vec::new();
        for (w, v) in cells {
            grid.push(grid.last().unwrap() + w);
            values.push(v);
        }
        SampledFunction::step(grid, values).unwrap()
    })
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn conjugate_sandwich(a in young(), lt in -6.0f64..6.0) {
        let t = 10f64.powf(lt);
        let b = a.conjugate();
        let prod = a.inverse(t) * b.inverse(t);
        prop_assert!(prod >= t * (1.0 - 1e-6), "{} < {t}", prod);
        prop_assert!(prod <= 2.0 * t * (1.0 + 1e-6), "{} > 2·{t}", prod);
    }

    #[test]
    fn inverse_is_right_inverse(a in young(), ly in -6.0f64..6.0) {
        let y = 10f64.powf(ly);
        prop_assert!(rel(a.eval(a.inverse(y)), y) < 1e-6);
    }

    #[test]
    fn biconjugate_recovers_the_function(p0 in 1.3f64..4.0, p in 1.3f64..4.0, lt in -3.0f64..3.0) {
        let a = YoungFunction::power_log(p0, 0.0, p, 0.0).unwrap();
        let bb = YoungFunction::numeric_conjugate(&YoungFunction::numeric_conjugate(&a));
        let t = 10f64.powf(lt);
        prop_assert!(rel(bb.eval(t), a.eval(t)) < 1e-4, "{} vs {}", bb.eval(t), a.eval(t));
    }

    #[test]
    fn gate_verdicts_agree_with_their_duals(a in young(), n in 1u32..4, s in 0.2f64..3.5) {
        let Ok(params) = SmoothnessParams::new(n, s) else { return Ok(()) };
        for gate in Gate::ALL {
            if !gate.compatible(&params) {
                continue;
            }
            let report = classify_gate(&a, &params, gate).unwrap();
            if report.dual_verdict.is_some() {
                prop_assert!(report.dual_agrees(), "{gate:?}: {report:?}");
            }
        }
    }

    #[test]
    fn luxemburg_norm_is_homogeneous_and_sits_on_the_unit_ball(a in young(), f in step_function(6), c in 0.1f64..10.0) {
        let m = MeasureSpec::default();
        let nf = luxemburg_norm(&a, &f, &m);
        let nc = luxemburg_norm(&a, &f.scaled(c), &m);
        prop_assert!(rel(nc.value, c * nf.value) < 1e-6 || (nf.value == 0.0 && nc.value == 0.0));
        if nf.value > 0.0 && nf.value.is_finite() {
            prop_assert!(nf.modular_at_value <= 1.0 + 1e-9);
            prop_assert!(modular(&a, &f, &m, 0.99 * nf.value) > 1.0);
        }
    }

    #[test]
    fn norm_is_invariant_under_rearrangement(a in young(), f in step_function(8)) {
        let m = MeasureSpec::default();
        let star = decreasing_rearrangement(&f).unwrap();
        let n1 = luxemburg_norm(&a, &f, &m).value;
        let n2 = luxemburg_norm(&a, &star, &m).value;
        prop_assert!(rel(n1, n2) < 1e-6 || (n1 == 0.0 && n2 == 0.0), "{n1} vs {n2}");
    }

    #[test]
    fn domination_orders_norms(p in 1.2f64..5.0, k in 1.0f64..50.0, f in step_function(5)) {
        let a = YoungFunction::power(p).unwrap();
        let b = YoungFunction::scaled_power(p, k).unwrap();
        let c = dominates(&a, &b, Range::Global).constant.unwrap();
        let m = MeasureSpec::default();
        let na = luxemburg_norm(&a, &f, &m).value;
        let nb = luxemburg_norm(&b, &f, &m).value;
        prop_assert!(nb <= c * na * (1.0 + 1e-9), "{nb} > {c}·{na}");
    }

    #[test]
    fn holder_inequality_on_random_pairs(a in young(), u in step_function(5), v in step_function(5)) {
        let report = holder_check(&u, &v, &a, &MeasureSpec::default());
        prop_assert!(report.holder_holds, "{report:?}");
        prop_assert!(report.hardy_littlewood_holds, "{report:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn gagliardo_modular_scales_like_a_power(p in 1.5f64..4.0, lambda in 0.2f64..5.0, width in 0.3f64..2.0) {
        let a = YoungFunction::power(p).unwrap();
        let params = SmoothnessParams::new(1, 0.5).unwrap();
        let u = Field::radial(1, move |r| (1.0 - r / width).max(0.0), width, 0.0, vec![]);
        let j1 = gagliardo_modular(&a, &params, &u, Estimator::RadialQuadrature).unwrap().value;
        let j2 = gagliardo_modular(&a, &params, &u.scaled(1.0 / lambda), Estimator::RadialQuadrature).unwrap().value;
        prop_assert!(rel(j2, j1 * lambda.powf(-p)) < 1e-9);
    }

    #[test]
    fn seminorm_is_homogeneous(a in young(), c in 0.2f64..5.0) {
        let params = SmoothnessParams::new(1, 0.5).unwrap();
        let u = Field::radial(1, |r| (1.0 - r * r).max(0.0), 1.0, 0.0, vec![]);
        let s1 = seminorm(&a, &params, &u, Estimator::RadialQuadrature).unwrap().value;
        let s2 = seminorm(&a, &params, &u.scaled(c), Estimator::RadialQuadrature).unwrap().value;
        prop_assert!(rel(s2, c * s1) < 1e-6, "{s2} vs {c}·{s1}");
    }
}
