mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use saiqh::analysis::{
    certify, contraction_factor, empirical_lambda_bounds, lower_bounds, lyapunov_decay_check, lyapunov_v,
    stability_constants, upper_bounds,
};
use saiqh::cli::parse_config;
use saiqh::{comparison_bound, simulate, SaiqhParams, State, TimeScale};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn state_strategy() -> impl Strategy<Value = State> {
    prop::array::uniform6(0.0..1000.0f64).prop_map(|x| State::new(x).unwrap())
}

fn certified_params() -> SaiqhParams {
    SaiqhParams { gamma: 1.0, beta: 0.05, ..parse_config(BUNDLED).unwrap().model }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sigma_is_monotone_and_forward(seed in any::<u64>()) {
        let ts = random_scale(&mut rng(seed));
        let pts = ts.points();
        let mut prev = f64::NEG_INFINITY;
        for g in &pts {
            let s = ts.sigma(g.t).unwrap();
            prop_assert!(s >= g.t);
            prop_assert!(s >= prev);
            prev = s;
        }
    }

    #[test]
    fn exp_semigroup(seed in any::<u64>(), u in 0.0..1.0f64, i in any::<prop::sample::Index>(),
                     j in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let ts = random_scale(&mut rng(seed));
        let pts: Vec<f64> = ts.points().iter().map(|g| g.t).collect();
        let mu = ts.mu_sup();
        let p = if mu > 0.0 { -0.99 / mu + u * (2.0 + 0.99 / mu) } else { -3.0 + 5.0 * u };
        let mut idx = [i.index(pts.len()), j.index(pts.len()), k.index(pts.len())];
        idx.sort_unstable();
        let (r, s, t) = (pts[idx[0]], pts[idx[1]], pts[idx[2]]);
        let lhs = ts.exp(p, t, s).unwrap() * ts.exp(p, s, r).unwrap();
        let rhs = ts.exp(p, t, r).unwrap();
        prop_assert!(rel_err(lhs, rhs) <= 1e-12, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn decaying_exp_stays_in_unit_interval(seed in any::<u64>(), u in 0.01..0.99f64) {
        let ts = random_scale(&mut rng(seed));
        let mu = ts.mu_sup();
        let alpha = if mu > 0.0 { u / mu } else { 5.0 * u };
        prop_assert!(ts.regressive_positive(-alpha));
        let mut prev = 1.0;
        for g in ts.points() {
            let e = ts.exp(-alpha, g.t, ts.min()).unwrap();
            prop_assert!(e > 0.0 && e <= 1.0);
            prop_assert!(e <= prev);
            prev = e;
        }
    }

    #[test]
    fn integer_grid_exp_is_a_power(p in -0.99..3.0f64, n in 1usize..60) {
        let ts = TimeScale::uniform(0.0, 1.0, n).unwrap();
        let got = ts.exp(p, n as f64, 0.0).unwrap();
        prop_assert!(rel_err(got, (1.0 + p).powi(n as i32)) <= 1e-13);
    }

    #[test]
    fn lyapunov_v_is_a_metric(a in state_strategy(), b in state_strategy(), c in state_strategy()) {
        prop_assert!(lyapunov_v(&a, &b) >= 0.0);
        prop_assert_eq!(lyapunov_v(&a, &a), 0.0);
        prop_assert_eq!(lyapunov_v(&a, &b), lyapunov_v(&b, &a));
        if a != b {
            prop_assert!(lyapunov_v(&a, &b) > 0.0);
        }
        let slack = 1e-12 * (lyapunov_v(&a, &b) + lyapunov_v(&b, &c));
        prop_assert!(lyapunov_v(&a, &c) <= lyapunov_v(&a, &b) + lyapunov_v(&b, &c) + slack);
    }

    #[test]
    fn force_of_infection_is_scale_free(seed in any::<u64>(), c in 1e-3..1e3f64) {
        let mut r = rng(seed);
        let p = random_params(&mut r);
        let s = State::new(random_initial(&mut r)).unwrap();
        let l1 = p.force_of_infection(&s).unwrap();
        let l2 = p.force_of_infection(&s.scaled(c).unwrap()).unwrap();
        prop_assert!((l1 - l2).abs() <= 1e-12 * l1.abs().max(1e-300));
    }

    #[test]
    fn transfers_cancel_in_total_population(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_params(&mut r);
        let s = State::new(random_initial(&mut r)).unwrap();
        let x = s.as_array();
        let d = p.rhs_delta(&s, &s).unwrap();
        let want = p.recruitment - p.gamma * s.total() - p.alpha1 * p.f3 * x[4] - p.alpha2 * p.k * x[5];
        let got: f64 = d.iter().sum();
        let scale = p.recruitment + p.gamma * s.total() + d.iter().map(|v| v.abs()).sum::<f64>();
        prop_assert!((got - want).abs() <= 1e-12 * scale);
    }

    #[test]
    fn trajectories_stay_nonnegative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_nonnegative_params(&mut r);
        let ts = random_scale(&mut r);
        let x0 = State::new(random_initial(&mut r)).unwrap();
        let tr = simulate(&p, &ts, x0).unwrap();
        prop_assert_eq!(tr.len(), ts.points().len());
        prop_assert_eq!(tr.first().state, x0);
        for s in &tr.samples {
            prop_assert!(s.state.as_array().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn simulation_is_deterministic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_params(&mut r);
        let ts = random_scale(&mut r);
        let x0 = State::new(random_initial(&mut r)).unwrap();
        prop_assert_eq!(simulate(&p, &ts, x0).unwrap(), simulate(&p, &ts, x0).unwrap());
    }

    #[test]
    fn formulas_match_independent_evaluator(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_params(&mut r);
        let (ll, lu) = random_lambda_pair(&mut r);
        let lo = lower_bounds(&p, ll, lu).unwrap();
        let hi = upper_bounds(&p, ll, lu).unwrap();
        let c = stability_constants(&p, ll, lu, hi.max).unwrap();
        let (om, o_big) = oracle_bounds(&p, ll, lu);
        let (oa, ob) = oracle_constants(&p, ll, lu, hi.max);
        for i in 0..6 {
            prop_assert!(close(lo.m[i], om[i], 1e-12));
            prop_assert!(close(hi.m[i], o_big[i], 1e-12));
            prop_assert!(close(c.a[i], oa[i], 1e-12));
            prop_assert!(close(c.b[i], ob[i], 1e-12));
        }
    }

    #[test]
    fn bound_monotonicity(seed in any::<u64>(), bump in 0.01..1.0f64) {
        let mut r = rng(seed);
        let mut p = random_params(&mut r);
        p.p = p.p.min(0.99);
        let (ll, lu) = random_lambda_pair(&mut r);
        prop_assert!(lower_bounds(&p, ll, lu + bump).unwrap().m[0] < lower_bounds(&p, ll, lu).unwrap().m[0]);
        prop_assert!(
            upper_bounds(&p, ll + bump, lu + bump).unwrap().m[0] < upper_bounds(&p, ll, lu + bump).unwrap().m[0]
        );
        let c1 = stability_constants(&p, ll, lu, 10.0).unwrap();
        let c2 = stability_constants(&p, ll, lu, 10.0 + 100.0 * bump).unwrap();
        prop_assert_eq!(c1.a, c2.a);
        prop_assert!(c2.b_max >= c1.b_max);
    }

    #[test]
    fn certified_verdict_is_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_params(&mut r);
        let (ll, lu) = random_lambda_pair(&mut r);
        let ts = random_scale(&mut r);
        let big_m = upper_bounds(&p, ll, lu).unwrap().max;
        let cert = certify(&p, &ts, ll, lu, big_m).unwrap();
        let (a, b, mu_sup) = (cert.a_min(), cert.b_max(), cert.mu_sup);
        for g in ts.points() {
            let numerator_form = (1.0 + a * (mu_sup - g.mu) + g.mu * b) / (1.0 + a * mu_sup);
            prop_assert!((contraction_factor(cert.psi, g.mu) - numerator_form).abs() <= 1e-12);
            if cert.verdict.is_certified() {
                prop_assert!(cert.psi > 0.0);
                prop_assert!(contraction_factor(cert.psi, g.mu) > 0.0);
            }
        }
    }

    #[test]
    fn total_population_stays_between_start_and_equilibrium(seed in any::<u64>(), step in 0.01..0.2f64) {
        // dense scales only: the scattered update is not mass-conserving
        let mut r = rng(seed);
        let mut p = random_params(&mut r);
        p.alpha1 = 0.0;
        p.alpha2 = 0.0;
        let ts = TimeScale::union(&[(0.0, 5.0)], step).unwrap();
        let x0 = State::new(random_initial(&mut r)).unwrap();
        let n0 = x0.total();
        let eq = p.recruitment / p.gamma;
        let eps = 1e-6 * n0;
        let tr = simulate(&p, &ts, x0).unwrap();
        for s in &tr.samples {
            let n = s.state.total();
            prop_assert!(n >= n0.min(eq) - eps && n <= n0.max(eq) + eps, "N = {} outside [{}, {}]", n, n0.min(eq), n0.max(eq));
        }
    }

    #[test]
    fn certified_pair_contracts(a in state_strategy(), b in state_strategy()) {
        prop_assume!(lyapunov_v(&a, &b) > 1e-6 && a.total() > 1.0 && b.total() > 1.0);
        let p = certified_params();
        let ts = TimeScale::uniform(0.0, 1.0, 200).unwrap();
        let ta = simulate(&p, &ts, a).unwrap();
        let tb = simulate(&p, &ts, b).unwrap();
        let v0 = lyapunov_v(&a, &b);
        let v_end = lyapunov_v(&ta.last().state, &tb.last().state);
        prop_assert!(v_end < v0);
    }
}

#[test]
fn comparison_bound_is_a_lower_envelope_from_above() {
    // the x1 equation dominates y^D = Lambda - alpha y^sigma with the largest outflow
    let p = parse_config(BUNDLED).unwrap().model;
    let ts = TimeScale::uniform(0.0, 0.1, 70).unwrap();
    let x0 = State::new([10283785.0, 13.0, 2.0, 0.0, 0.0, 0.0]).unwrap();
    let tr = simulate(&p, &ts, x0).unwrap();
    let lu = empirical_lambda_bounds(&tr, 0.0).unwrap().upper;
    let alpha = lu * (1.0 - p.p) + p.phi * p.p + p.gamma;
    assert!(ts.regressive_positive(-alpha));
    for s in &tr.samples {
        let bound = comparison_bound(p.recruitment, alpha, x0.get(0), &ts, s.t, 0.0).unwrap();
        assert!(s.state.get(0) >= bound - 1e-9 * x0.get(0), "t = {}: {} < {}", s.t, s.state.get(0), bound);
    }
}

#[test]
fn doubled_decay_rate_reports_violations() {
    let p = certified_params();
    let ts = TimeScale::uniform(0.0, 1.0, 200).unwrap();
    let a = simulate(&p, &ts, State::new([400.0, 5.0, 3.0, 1.0, 1.0, 0.5]).unwrap()).unwrap();
    let b = simulate(&p, &ts, State::new([401.0, 5.0, 3.0, 1.0, 1.0, 0.5]).unwrap()).unwrap();
    let range = empirical_lambda_bounds(&a, 0.0).unwrap().merge(empirical_lambda_bounds(&b, 0.0).unwrap());
    let big_m = upper_bounds(&p, range.lower, range.upper).unwrap().max;
    let cert = certify(&p, &ts, range.lower, range.upper, big_m).unwrap();
    assert!(cert.verdict.is_certified());
    assert!(lyapunov_decay_check(&a, &b, cert.psi).unwrap().passed());

    let forced = lyapunov_decay_check(&a, &b, 2.0 * cert.psi).unwrap();
    assert!(!forced.passed());
    assert!(forced.violations() > 0);
    assert!(forced.worst_margin < 0.0);
}
