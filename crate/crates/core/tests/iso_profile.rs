use std::f64::consts::PI;

use sadslab::metric::{make_hyperbolic, make_perturbed, make_sads, PerturbationTerm, RadialMetric};
use sadslab::profile::{
    ball_volume, derivative_laws, drift_quantity, foliation_mass_curve, hyperbolic_reference,
    hyperbolic_reference_excess, isoballs_fit, linear_grid, profile_constant, profile_constant_fit,
    profile_curve, renormalized_volume, volume_excess,
};
use sadslab::quadrature::{integrate, Tolerance};
use sadslab::fit::BasisFn;

/// Renormalized volume of SAdS reduced to one integral in the static radius:
/// `V(M,g) = ∫_{2m}^∞ [4πs²/√V − 4πs + 2πs/(1+s²)] ds + π log(1+4m²) − 8πm² + π(2 log 2 − 1)`.
fn sads_renormalized_oracle(m: f64) -> f64 {
    let f = |s: f64| {
        let v = 1.0 + s * s - 2.0 * m / s;
        // s²/√V − s = s(2m/s − 1)/(√V(s + √V))
        4.0 * PI * s * (2.0 * m / s - 1.0) / (v.sqrt() * (s + v.sqrt())) + 2.0 * PI * s / (1.0 + s * s)
    };
    let tol = Tolerance { abs: 1e-13, rel: 1e-13 };
    let near = integrate(f, 2.0 * m, 10.0, tol).unwrap().value;
    let far = integrate(|x: f64| f(1.0 / x) / (x * x), 1e-12, 0.1, tol).unwrap().value;
    near + far + PI * (1.0 + 4.0 * m * m).ln() - 8.0 * PI * m * m + PI * (2.0 * 2f64.ln() - 1.0)
}

#[test]
fn hyperbolic_ball_volume_closed_form() {
    let h = make_hyperbolic();
    assert_eq!(ball_volume(&h, 0.0).unwrap_err(), sadslab::LabError::NonPositiveWarp(0.0));
    for r in [0.3, 1.0, 2.5, 4.0] {
        let v = ball_volume(&h, r).unwrap();
        assert!((v - (PI * (2.0 * r).sinh() - 2.0 * PI * r)).abs() < 1e-9, "r={r}");
    }
}

#[test]
fn volume_at_boundary_is_zero() {
    let m = make_sads(1.0).unwrap();
    assert_eq!(ball_volume(&m, m.boundary_r()).unwrap(), 0.0);
}

#[test]
fn hyperbolic_profile_is_the_reference() {
    let h = make_hyperbolic();
    let curve = profile_curve(&h, &linear_grid(0.5, 12.0, 0.5)).unwrap();
    for s in &curve.samples {
        let reference = hyperbolic_reference(s.area).unwrap();
        if s.r <= 4.0 {
            assert!((s.volume - reference).abs() < 1e-8);
        }
        assert!((s.volume / reference - 1.0).abs() < 1e-11);
        assert!((s.volume_excess - hyperbolic_reference_excess(s.area).unwrap()).abs() < 1e-8);
        assert!((s.area - 4.0 * PI * s.r.sinh().powi(2)).abs() < 1e-12 * s.area);
    }
}

#[test]
fn reference_limits() {
    // constant term π(1 + log π) at ρ = 10
    let a = 4.0 * PI * 10f64.sinh().powi(2);
    let c = hyperbolic_reference_excess(a).unwrap() + PI * a.ln();
    assert!((c - profile_constant()).abs() < 1e-3);
    assert!((profile_constant() - 6.7378).abs() < 1e-4);
    // Euclidean limit
    let small = 1e-8;
    let ratio = hyperbolic_reference(small).unwrap() / small.powf(1.5);
    assert!((ratio - 1.0 / (6.0 * PI.sqrt())).abs() < 1e-6);
}

#[test]
fn excess_agrees_with_direct_volume() {
    let m = make_sads(1.0).unwrap();
    for r in [1.5, 3.0, 5.0] {
        let direct = ball_volume(&m, r).unwrap() - m.area(r).unwrap() / 2.0;
        assert!((volume_excess(&m, r).unwrap() - direct).abs() < 1e-8 * m.area(r).unwrap());
    }
}

#[test]
fn sads_derivative_of_volume_is_inverse_mean_curvature() {
    let m = make_sads(1.0).unwrap();
    let grid = linear_grid(1.5, 7.0, 0.02);
    let curve = profile_curve(&m, &grid).unwrap();
    for w in curve.samples.windows(3) {
        let dvda = (w[2].volume - w[0].volume) / (w[2].area - w[0].area);
        assert!((dvda * w[1].h - 1.0).abs() < 1e-4, "r={}", w[1].r);
        assert!(w[1].volume > w[0].volume && w[1].area > w[0].area);
    }
}

#[test]
fn renormalized_volume_of_hyperbolic_space_vanishes() {
    let rv = renormalized_volume(&make_hyperbolic()).unwrap();
    assert!(rv.value.abs() < 1e-4, "{}", rv.value);
    assert!(rv.error_estimate < 1e-4);
    assert!(drift_quantity(&make_hyperbolic()).unwrap().abs() < 1e-4);
}

#[test]
fn renormalized_volume_of_sads_matches_static_oracle() {
    for m in [0.5, 1.0, 2.0] {
        let metric = make_sads(m).unwrap();
        let rv = renormalized_volume(&metric).unwrap();
        let oracle = sads_renormalized_oracle(m);
        assert!((rv.value - oracle).abs() < 1e-4, "m={m}: {} vs {oracle}", rv.value);
    }
}

#[test]
fn isoballs_coefficient_is_minus_eight_pi_three_halves_m() {
    for m in [1.0, 2.0] {
        let fit = isoballs_fit(&make_sads(m).unwrap()).unwrap();
        let c = fit.coefficient(&BasisFn::Power { exponent: -0.5 }).unwrap();
        let expected = -8.0 * PI.powf(1.5) * m;
        assert!((c / expected - 1.0).abs() < 0.02, "m={m}: {c}");
    }
    let flat = isoballs_fit(&make_hyperbolic()).unwrap();
    assert!(flat.coefficients[0].abs() < 1e-3);
}

#[test]
fn isoballs_residual_is_order_inverse_area() {
    let fit = isoballs_fit(&make_sads(1.0).unwrap()).unwrap();
    let a_min = 4.0 * PI * 4f64.sinh().powi(2);
    // residual is dominated by what the A^{-1} column cannot absorb
    assert!(fit.residual_norm < 10.0 / a_min);
}

#[test]
fn free_constant_fit_on_hyperbolic_space() {
    let fit = profile_constant_fit(&make_hyperbolic()).unwrap();
    assert!((fit.coefficients[0] - PI * (1.0 + PI.ln())).abs() < 1e-3);
}

#[test]
fn drift_is_positive_and_increasing_in_mass() {
    let d: Vec<f64> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&m| drift_quantity(&make_sads(m).unwrap()).unwrap())
        .collect();
    assert!(d[0] > 0.0);
    assert!(d[0] < d[1] && d[1] < d[2], "{d:?}");
}

#[test]
fn sads_volume_approaches_reference_plus_renormalized_volume() {
    let m = make_sads(1.0).unwrap();
    let v_star = renormalized_volume(&m).unwrap().value;
    let curve = profile_curve(&m, &linear_grid(4.0, 12.0, 0.5)).unwrap();
    let gaps: Vec<f64> = curve
        .samples
        .iter()
        .map(|s| (s.volume_excess - hyperbolic_reference_excess(s.area).unwrap() - v_star).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn foliation_mass_is_constant_on_sads() {
    let m = make_sads(1.0).unwrap();
    for row in foliation_mass_curve(&m, &linear_grid(1.5, 12.0, 0.1)).unwrap() {
        assert!((row.hawking - 1.0).abs() < 1e-8);
        assert!(row.dhawking.abs() < 1e-8);
    }
}

fn perturbed() -> RadialMetric {
    make_perturbed(
        1.0,
        vec![PerturbationTerm { amplitude: 40.0, rate: 5.0 }, PerturbationTerm { amplitude: -15.0, rate: 6.0 }],
    )
    .unwrap()
}

#[test]
fn foliation_mass_on_perturbed_sads() {
    let metric = perturbed();
    let rows = foliation_mass_curve(&metric, &linear_grid(3.0, 12.0, 0.05)).unwrap();
    let mut worst = (0.0f64, 0.0f64);
    for row in &rows {
        worst.0 = worst.0.max((row.hawking - 1.0).abs() * row.area);
        worst.1 = worst.1.max(row.dhawking.abs() * row.area * row.area);
        // oracle: F' = (defect − 2φ(φ'' − φ))/(16πφ) from differentiating φ·defect/2
        let w = metric.warp(row.r).unwrap();
        let exact = (w.sphere_defect - 2.0 * w.phi * w.ddphi_minus_phi) / (16.0 * PI * w.phi);
        assert!((row.dhawking - exact).abs() < 1e-3 * exact.abs() + 1e-15 / row.area, "r={}", row.r);
    }
    assert!(worst.0 < 1e3 && worst.1 < 1e3, "{worst:?}");
}

#[test]
fn second_law_on_sads_follows_closed_form() {
    // 2V''V'^{-3}A² = 16π − 12m(4π)^{3/2}A^{-1/2} exactly on SAdS
    let m = 1.0;
    let metric = make_sads(m).unwrap();
    let curve = profile_curve(&metric, &linear_grid(3.0, 8.0, 0.05)).unwrap();
    let laws = derivative_laws(&curve).unwrap();
    let n = laws.second_law.len();
    for (i, &(a, v)) in laws.second_law.iter().enumerate() {
        let exact = 16.0 * PI - 12.0 * m * (4.0 * PI).powf(1.5) / a.sqrt();
        // the two outermost nodes on each side use one-sided stencils
        let tol = if i < 2 || i + 2 >= n { 1e-4 } else { 1e-6 };
        assert!((v / exact - 1.0).abs() < tol, "A={a}: {v} vs {exact}");
    }
    for (&(a, v1), s) in laws.dvda.iter().zip(&curve.samples) {
        assert!((v1 * s.h - 1.0).abs() < 1e-8, "A={a}");
    }
}

#[test]
fn second_law_on_hyperbolic_space_is_sixteen_pi() {
    let curve = profile_curve(&make_hyperbolic(), &linear_grid(3.0, 9.0, 0.05)).unwrap();
    let laws = derivative_laws(&curve).unwrap();
    let n = laws.second_law.len();
    for (i, &(_, v)) in laws.second_law.iter().enumerate() {
        let tol = if i < 2 || i + 2 >= n { 1e-4 } else { 1e-6 };
        assert!((v / (16.0 * PI) - 1.0).abs() < tol);
    }
}

#[test]
fn mono23_increases_on_sads() {
    let metric = make_sads(1.0).unwrap();
    let curve = profile_curve(&metric, &linear_grid(2.5, 10.0, 0.05)).unwrap();
    let laws = derivative_laws(&curve).unwrap();
    let tail: Vec<f64> = laws.mono23.iter().filter(|(a, _)| *a >= 1e3).map(|&(_, v)| v).collect();
    assert!(tail.len() > 10);
    assert!(tail.windows(2).all(|w| w[1] > w[0]));
    // oracle: H² − 23π/A, with H from the static form
    for &(a, v) in &laws.mono23 {
        let s = (a / (4.0 * PI)).sqrt();
        let h2 = 4.0 / (s * s) * (1.0 + s * s - 2.0 / s);
        assert!((v - (h2 - 23.0 * PI / a)).abs() < 1e-7);
    }
}
