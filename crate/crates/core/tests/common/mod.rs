//! Helpers shared by the integration tests: random generators and a second,
//! independently written evaluator of the bound and stability formulas.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use saiqh::{SaiqhParams, TimeScale};

pub const BUNDLED: &str = include_str!("../../data/example_3_7.cfg");

/// Parameters that pass validation, with `gamma > 0`.
pub fn random_params(rng: &mut ChaCha8Rng) -> SaiqhParams {
    let f2 = rng.gen_range(0.0..1.0);
    let f3 = rng.gen_range(0.0..1.0 - f2);
    SaiqhParams {
        recruitment: rng.gen_range(0.1..1000.0),
        omega: rng.gen_range(0.0..1.0),
        n: rng.gen_range(0.0..1.0),
        phi: rng.gen_range(0.0..1.0),
        p: rng.gen_range(0.0..=1.0),
        gamma: rng.gen_range(0.01..2.0),
        q: rng.gen_range(0.0..=1.0),
        nu: rng.gen_range(0.0..1.0),
        delta1: rng.gen_range(0.0..1.0),
        delta2: rng.gen_range(0.0..1.0),
        f1: rng.gen_range(0.0..=1.0),
        f2,
        f3,
        eta: rng.gen_range(0.0..1.0),
        k: rng.gen_range(0.0..=1.0),
        alpha1: rng.gen_range(0.0..1.0),
        alpha2: rng.gen_range(0.0..1.0),
        beta: rng.gen_range(0.01..3.0),
        l_a: rng.gen_range(0.01..2.0),
        l_h: rng.gen_range(0.01..2.0),
        lambda_lower: None,
        lambda_upper: None,
    }
}

/// Like [`random_params`] but with some rates switched off entirely.
pub fn random_nonnegative_params(rng: &mut ChaCha8Rng) -> SaiqhParams {
    let mut p = random_params(rng);
    for r in [
        &mut p.omega,
        &mut p.phi,
        &mut p.gamma,
        &mut p.nu,
        &mut p.delta1,
        &mut p.delta2,
        &mut p.eta,
        &mut p.alpha1,
        &mut p.alpha2,
    ] {
        if rng.gen_bool(0.15) {
            *r = 0.0;
        }
    }
    p
}

pub fn random_lambda_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let lo = rng.gen_range(1e-8..2.0);
    (lo, lo + rng.gen_range(0.0..2.0))
}

/// Z-grid, hZ-grid or a union of intervals and isolated points.
pub fn random_scale(rng: &mut ChaCha8Rng) -> TimeScale {
    match rng.gen_range(0..3) {
        0 => TimeScale::uniform(0.0, 1.0, rng.gen_range(1..60)).unwrap(),
        1 => TimeScale::uniform(rng.gen_range(-5.0..5.0), rng.gen_range(0.02..1.0), rng.gen_range(1..200)).unwrap(),
        _ => {
            let mut segs = Vec::new();
            let mut t = rng.gen_range(0.0..2.0);
            for _ in 0..rng.gen_range(1..6) {
                let len = if rng.gen_bool(0.3) { 0.0 } else { rng.gen_range(0.1..3.0) };
                segs.push((t, t + len));
                t += len + rng.gen_range(0.05..2.0);
            }
            TimeScale::union(&segs, rng.gen_range(0.02..0.25)).unwrap()
        }
    }
}

pub fn random_initial(rng: &mut ChaCha8Rng) -> [f64; 6] {
    let mut x: [f64; 6] = std::array::from_fn(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(0.0..1000.0) });
    if x.iter().sum::<f64>() <= 0.0 {
        x[0] = 1.0;
    }
    x
}

/// `(m1..m6, M1..M6)` evaluated line by line from the printed formulas.
pub fn oracle_bounds(p: &SaiqhParams, ll: f64, lu: f64) -> ([f64; 6], [f64; 6]) {
    let lam = p.recruitment;
    let g = p.gamma;
    let den2 = p.q * p.nu + g;
    let den3 = p.delta1 + g;
    let den4 = p.omega * p.n + g;
    let den5 = p.delta2 * (1.0 - p.f3) + p.alpha1 * p.f3 + g;
    let den6 = p.eta * (1.0 - p.k) + p.alpha2 * p.k + g;

    let m1 = lam / (lu * (1.0 - p.p) + p.phi * p.p + g);
    let m2 = ll * (1.0 - p.p) * m1 / den2;
    let m3 = p.q * p.nu * m2 / den3;
    let m4 = (p.phi * p.p * m1 + p.delta1 * p.f1 * m3) / den4;
    let m5 = p.delta1 * (1.0 - p.f1) * m3 / den5;
    let m6 = p.delta2 * p.f2 * m5 / den6;

    let cap = lam / g;
    let u1 = (lam + p.omega * p.n * cap) / (ll * (1.0 - p.p) + p.phi * p.p + g);
    let u2 = lu * (1.0 - p.p) * u1 / den2;
    let u3 = p.q * p.nu * u2 / den3;
    let u4 = (p.phi * p.p * u1 + p.delta1 * p.f1 * u3 + p.delta2 * (1.0 - p.f2 - p.f3) * cap) / den4;
    let u5 = (p.delta1 * (1.0 - p.f1) * u3 + p.eta * (1.0 - p.k) * cap) / den5;
    let u6 = p.delta2 * p.f2 * u5 / den6;
    ([m1, m2, m3, m4, m5, m6], [u1, u2, u3, u4, u5, u6])
}

/// `(A1..A6, B1..B6)` for a given `M`.
pub fn oracle_constants(p: &SaiqhParams, ll: f64, lu: f64, big_m: f64) -> ([f64; 6], [f64; 6]) {
    let g = p.gamma;
    let share = |l: f64| 2.0 * g * p.beta * l * (1.0 - p.p) * big_m / p.recruitment;
    (
        [
            ll * (1.0 - p.p) + p.phi * p.p + g,
            p.q * p.nu + g,
            p.delta1 + g,
            p.omega * p.n + g,
            p.delta2 * (1.0 - p.f3) + p.alpha1 * p.f3 + g,
            p.eta * (1.0 - p.k) + p.alpha2 * p.k + g,
        ],
        [
            lu * (1.0 - p.p) + p.phi * p.p,
            p.q * p.nu + share(p.l_a),
            p.delta1 + share(1.0),
            p.omega * p.n,
            p.delta2 * (1.0 - p.f3) + share(p.l_h),
            p.eta * (1.0 - p.k),
        ],
    )
}

/// `|a - b| <= rtol |b|`, with exact agreement required at zero.
pub fn close(a: f64, b: f64, rtol: f64) -> bool {
    a == b || (a - b).abs() <= rtol * b.abs()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}
