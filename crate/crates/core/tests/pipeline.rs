//! End-to-end: Young function → regime → modulus → seminorm → Hölder quotient.

use orlicz_core::{
    classify_regime, holder_quotient, make_trial, seminorm, sigma, verify_equivalence, Asymptote, End, EquivalenceConfig,
    Estimator, OrliczError, PairSampler, Regime, SmoothnessParams, TrialKind, YoungFunction,
};

#[test]
fn power_modulus_is_a_pure_power_at_both_ends() {
    let a = YoungFunction::power(5.0).unwrap();
    let p = SmoothnessParams::new(2, 0.5).unwrap();
    let m = sigma(&a, &p).unwrap();
    assert_eq!(m.regime(), Some(Regime::Subcritical01));
    let target = Asymptote { power: 0.1, log_power: 0.0, loglog_power: 0.0 };
    for end in [End::NearZero, End::NearInfinity] {
        let rep = verify_equivalence(|r| m.eval(r), |r| target.eval(r, end), end, &EquivalenceConfig::default()).unwrap();
        assert!(rep.verdict, "{end:?}: spread {} slope {}", rep.spread, rep.slope);
    }
}

#[test]
fn exponential_growth_at_the_origin_blocks_the_embedding() {
    let a = YoungFunction::exponential(-1.0, 1.0).unwrap();
    let p = SmoothnessParams::new(2, 1.5).unwrap();
    assert!(matches!(classify_regime(&a, &p), Err(OrliczError::NoEmbedding { .. })));
    assert!(sigma(&a, &p).is_err());
}

#[test]
fn holder_quotient_is_controlled_by_the_seminorm() {
    let a = YoungFunction::power(3.0).unwrap();
    let p = SmoothnessParams::new(1, 0.5).unwrap();
    let omega = sigma(&a, &p).unwrap();
    let sampler = PairSampler::Stratified { n: 1, seed: 3, radius: 2.0, decades: 6, per_decade: 40 };
    let mut ratios = Vec::new();
    for k in [0.5, 1.0, 2.0] {
        let u = make_trial(TrialKind::ScalingFamily, None, &p, Some(k)).unwrap();
        let norm = seminorm(&a, &p, &u, Estimator::RadialQuadrature).unwrap().value;
        let q = holder_quotient(|x| u.eval(x), &omega, &sampler);
        assert!(norm.is_finite() && norm > 0.0 && q.is_finite() && q > 0.0);
        ratios.push(q / norm);
    }
    let (lo, hi) = ratios.iter().fold((f64::MAX, 0f64), |(l, h), &r| (l.min(r), h.max(r)));
    assert!(hi / lo < 20.0, "ratios {ratios:?}");
}
