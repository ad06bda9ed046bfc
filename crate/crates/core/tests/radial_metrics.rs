use sadslab::fit::{fit_expansion, BasisFn};
use sadslab::metric::{
    curvature, make_glued, make_hyperbolic, make_perturbed, make_sads, GluingSpec, PerturbationTerm,
    RadialMetric,
};
use sadslab::quadrature::{integrate, Tolerance};
use sadslab::LabError;

fn compliant_perturbed() -> RadialMetric {
    make_perturbed(
        1.0,
        vec![
            PerturbationTerm { amplitude: 40.0, rate: 5.0 },
            PerturbationTerm { amplitude: -15.0, rate: 7.0 },
        ],
    )
    .unwrap()
}

fn sads_knots(m: &RadialMetric, lo: f64, hi: f64, step: f64) -> Vec<[f64; 2]> {
    let n = ((hi - lo) / step).round() as usize;
    (1..n)
        .map(|i| {
            let r = lo + step * i as f64;
            [r, m.warp(r).unwrap().phi]
        })
        .collect()
}

#[test]
fn chart_matches_direct_quadrature_of_inverse_sqrt_potential() {
    // independent route: r(s) − r(s₀) = ∫_{s₀}^{s} V^{-1/2}
    for &m in &[0.5, 1.0, 2.0] {
        let metric = make_sads(m).unwrap();
        let chart = metric.chart().unwrap();
        let s0 = 2.0 * m;
        for &s in &[s0 + 0.1, 5.0, 40.0, 300.0] {
            let direct = integrate(
                |t: f64| 1.0 / (1.0 + t * t - 2.0 * m / t).sqrt(),
                s0,
                s,
                Tolerance::relative(1e-13),
            )
            .unwrap()
            .value;
            let via_chart = chart.r_of_s(s).unwrap() - metric.boundary_r();
            assert!((direct - via_chart).abs() < 1e-11, "m={m} s={s}: {direct} vs {via_chart}");
        }
    }
}

#[test]
fn chart_round_trip() {
    let metric = make_sads(1.0).unwrap();
    let chart = metric.chart().unwrap();
    let s0 = chart.s0();
    let mut s = s0 + 0.1;
    while s <= 1e3 {
        let r = chart.r_of_s(s).unwrap();
        let (back, _) = chart.s_of_r(r).unwrap();
        assert!((back - s).abs() < 1e-9, "s={s} back={back}");
        s *= 1.37;
    }
}

#[test]
fn sads_warp_excess_recovers_two_thirds_mass_coefficient() {
    let metric = make_sads(1.0).unwrap();
    let samples: Vec<(f64, f64)> = (0..=24)
        .map(|i| {
            let r = 6.0 + 0.25 * i as f64;
            (r, metric.warp(r).unwrap().phi_sq_excess)
        })
        .collect();
    let fit = fit_expansion(&samples, &[BasisFn::InvSinh]).unwrap();
    let c = fit.coefficients[0];
    assert!((c / (2.0 / 3.0) - 1.0).abs() < 0.02, "c = {c}");
}

#[test]
fn small_mass_tends_to_hyperbolic_space() {
    let metric = make_sads(1e-7).unwrap();
    let chart = metric.chart().unwrap();
    for &s in &[0.5, 2.0, 30.0] {
        assert!((chart.r_of_s(s).unwrap() - s.asinh()).abs() < 1e-5);
    }
    for &r in &[1.0, 3.0, 8.0] {
        assert!((metric.warp(r).unwrap().phi / r.sinh() - 1.0).abs() < 1e-5);
    }
    assert!(metric.boundary_r() < 1e-5);
}

#[test]
fn warp_approaches_sinh_for_every_family() {
    let bulge = bulge_spec(1.5);
    let metrics = [make_hyperbolic(), make_sads(1.0).unwrap(), compliant_perturbed(), make_glued(bulge).unwrap()];
    for m in &metrics {
        let w = m.warp(12.0).unwrap();
        assert!((w.phi / 12f64.sinh() - 1.0).abs() < 1e-3, "{:?}", m.kind());
        // positivity on the domain
        let mut r = m.boundary_r().max(1e-3);
        while r < 12.0 {
            assert!(m.warp(r).unwrap().phi > 0.0);
            r += 0.1;
        }
    }
}

#[test]
fn sads_ricci_matches_foliation_expansion() {
    let metric = make_sads(1.0).unwrap();
    let c = curvature(&metric, 8.0).unwrap();
    let expected = -16.0 * (-24.0f64).exp();
    assert!(((c.ric_nn + 2.0) / expected - 1.0).abs() < 0.10);
    assert!((c.ric_excess / expected - 1.0).abs() < 0.10);
}

#[test]
fn sads_scalar_curvature_is_minus_six() {
    let metric = make_sads(1.0).unwrap();
    for r in [4.0, 6.0, 8.0] {
        assert!(curvature(&metric, r).unwrap().scalar_r + 6.0 < 1e-6);
        assert!((curvature(&metric, r).unwrap().scalar_r + 6.0).abs() < 1e-6);
    }
}

#[test]
fn static_form_gives_constant_scalar_curvature() {
    // R = −2V'/s + 2(1 − V)/s² for ds²/V + s² g, with V' by central differences
    let m = 1.0;
    let v = |s: f64| 1.0 + s * s - 2.0 * m / s;
    for s in [2.5, 7.0, 40.0] {
        let h = 1e-4 * s;
        let dv = (v(s + h) - v(s - h)) / (2.0 * h);
        let r = -2.0 * dv / s + 2.0 * (1.0 - v(s)) / (s * s);
        assert!((r + 6.0).abs() < 1e-6);
    }
}

#[test]
fn gauss_equation_consistency_on_every_metric() {
    let metrics = [
        make_hyperbolic(),
        make_sads(1.0).unwrap(),
        compliant_perturbed(),
        make_glued(bulge_spec(1.5)).unwrap(),
    ];
    for m in &metrics {
        let mut r = m.boundary_r().max(0.2);
        while r <= 12.0 {
            let w = m.warp(r).unwrap();
            let c = curvature(m, r).unwrap();
            let h = w.mean_curvature();
            let residual = 2.0 * c.sphere_k - (c.scalar_r - 2.0 * c.ric_nn + 0.5 * h * h);
            assert!(residual.abs() < 1e-7, "{:?} r={r} residual={residual}", m.kind());
            r += 0.13;
        }
    }
}

#[test]
fn compliant_perturbation_keeps_scalar_curvature_decay() {
    let metric = compliant_perturbed();
    let mut bound: f64 = 0.0;
    let mut lowest: f64 = f64::INFINITY;
    for i in 0..=24 {
        let r = 6.0 + 0.25 * i as f64;
        let c = curvature(&metric, r).unwrap();
        let scaled = (c.scalar_r + 6.0).abs().max(c.scalar_excess.abs()) * (5.0 * r).exp();
        bound = bound.max(c.scalar_excess.abs() * (5.0 * r).exp());
        lowest = lowest.min(c.scalar_excess.abs() * (5.0 * r).exp());
        assert!(scaled.is_finite());
    }
    // −40·a₅ is the leading coefficient of R + 6
    assert!(bound < 2000.0 && lowest > 1000.0, "{lowest} {bound}");
}

fn bulge_spec(factor: f64) -> GluingSpec {
    let sads = make_sads(1.0).unwrap();
    let (ra, rb) = (2.5, 4.5);
    let knots = [3.0, 3.5, 4.0].iter().map(|&r| [r, factor * sads.warp(r).unwrap().phi]).collect();
    GluingSpec { exterior_mass: 1.0, glue_interval: [ra, rb], interior_profile: knots, boundary_r: None }
}

#[test]
fn gluing_sads_to_itself_reproduces_sads() {
    let sads = make_sads(1.0).unwrap();
    let spec = GluingSpec {
        exterior_mass: 1.0,
        glue_interval: [2.0, 4.0],
        interior_profile: sads_knots(&sads, 2.0, 4.0, 0.02),
        boundary_r: None,
    };
    let glued = make_glued(spec).unwrap();
    let mut r = glued.boundary_r();
    while r < 6.0 {
        let diff = (glued.warp(r).unwrap().phi - sads.warp(r).unwrap().phi).abs();
        assert!(diff < 1e-6, "r={r} diff={diff}");
        r += 0.0137;
    }
}

#[test]
fn bulge_lowers_scalar_curvature_below_minus_six() {
    let glued = make_glued(bulge_spec(1.5)).unwrap();
    let mut min_r = f64::INFINITY;
    let mut r = 2.5;
    while r <= 4.5 {
        min_r = min_r.min(curvature(&glued, r).unwrap().scalar_r);
        r += 0.01;
    }
    assert!(min_r < -6.0, "min R = {min_r}");
}

#[test]
fn glued_joins_are_c2() {
    let glued = make_glued(bulge_spec(1.5)).unwrap();
    let sads = make_sads(1.0).unwrap();
    for r in [2.5, 4.5] {
        let (a, b) = (glued.warp(r).unwrap(), sads.warp(r).unwrap());
        assert!((a.phi - b.phi).abs() < 1e-8 * b.phi);
        assert!((a.dphi - b.dphi).abs() < 1e-8 * b.phi);
        assert!((a.ddphi - b.ddphi).abs() < 1e-8 * b.phi);
    }
}

#[test]
fn degenerate_glue_interval_is_rejected() {
    let spec = GluingSpec { exterior_mass: 1.0, glue_interval: [3.0, 3.0], interior_profile: vec![], boundary_r: None };
    assert!(matches!(make_glued(spec), Err(LabError::InvalidGluing(_))));
}

#[test]
fn spline_through_non_positive_values_is_rejected() {
    let spec = GluingSpec {
        exterior_mass: 1.0,
        glue_interval: [2.5, 4.5],
        interior_profile: vec![[3.5, 1e-3]],
        boundary_r: None,
    };
    assert!(matches!(make_glued(spec), Err(LabError::NonPositiveWarp(_))));
}
