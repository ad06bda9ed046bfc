//! Isoperimetric profile of centered balls and the large-area expansion
//!
//! ```text
//! V(A) = A/2 − π log A + π(1 + log π) + V(M,g) − 8π^{3/2} m A^{−1/2} + O(A^{−1})
//! ```
//!
//! Enclosed volumes are dominated by `A/2` at large radius, so every
//! expansion check works with the excess `W = V − A/2`, integrated directly
//! from `dW/dr = 4πφ(φ − φ')` with `W(boundary) = −2πφ(b)²`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::fit::{fit_expansion, BasisFn, ExpansionFit};
use crate::metric::{MetricKind, RadialMetric};
use crate::quadrature::{integrate_with_breaks, Tolerance};
use crate::sphere::hawking_of;

/// Window in `r` for the renormalized-volume extrapolation.
pub const RENORM_WINDOW: [f64; 2] = [8.0, 14.0];
/// Window in `r` for the `A^{−1/2}` coefficient fit.
pub const ISOBALLS_WINDOW: [f64; 2] = [4.0, 10.0];
/// Window in `r` for the free three-term constant fit.
pub const CONSTANT_WINDOW: [f64; 2] = [6.0, 12.0];
const WINDOW_STEP: f64 = 0.25;
const RENORM_MAX_ERROR: f64 = 1e-4;
/// Largest admissible spacing in `log A` for finite differences.
pub const MAX_LOG_AREA_STEP: f64 = 0.5;

/// `π(1 + log π)`
pub fn profile_constant() -> f64 {
    PI * (1.0 + PI.ln())
}

/// `A/2 − π log A + π(1 + log π)`
pub fn hyperbolic_asymptote(area: f64) -> f64 {
    0.5 * area - PI * area.ln() + profile_constant()
}

fn check_area(area: f64) -> Result<()> {
    if !(area > 0.0) || !area.is_finite() {
        return Err(LabError::InvalidArgument(format!("area must be positive, got {area}")));
    }
    Ok(())
}

fn area_radius(area: f64) -> f64 {
    (area / (4.0 * PI)).sqrt().asinh()
}

/// Volume of the hyperbolic ball whose boundary has area `A`,
/// `π sinh 2ρ − 2πρ` with `A = 4π sinh² ρ`.
pub fn hyperbolic_reference(area: f64) -> Result<f64> {
    check_area(area)?;
    let rho = area_radius(area);
    if rho < 0.5 {
        // sinh 2ρ − 2ρ = Σ_{k≥1} (2ρ)^{2k+1}/(2k+1)!
        let x = 2.0 * rho;
        let (mut term, mut sum, mut k): (f64, f64, f64) = (x * x * x / 6.0, 0.0, 1.0);
        while term.abs() > 1e-17 * sum.abs() || sum == 0.0 {
            sum += term;
            term *= x * x / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
            k += 1.0;
        }
        return Ok(PI * sum);
    }
    Ok(PI * (2.0 * rho).sinh() - 2.0 * PI * rho)
}

/// `hyperbolic_reference(A) − A/2 = π(1 − e^{−2ρ}) − 2πρ`
pub fn hyperbolic_reference_excess(area: f64) -> Result<f64> {
    check_area(area)?;
    let rho = area_radius(area);
    Ok(-PI * (-2.0 * rho).exp_m1() - 2.0 * PI * rho)
}

fn breaks_for(metric: &RadialMetric, lo: f64, hi: f64) -> Vec<f64> {
    let mut breaks = vec![lo];
    let mut interior: Vec<f64> = metric.gluing().map(|g| g.interval().to_vec()).unwrap_or_default();
    let mut x = lo.floor() + 1.0;
    while x < hi {
        interior.push(x);
        x += 1.0;
    }
    interior.sort_by(f64::total_cmp);
    breaks.extend(interior.into_iter().filter(|&b| b > lo && b < hi));
    breaks.push(hi);
    breaks
}

/// `∫_lo^hi 4πφ² dt`
fn volume_between(metric: &RadialMetric, lo: f64, hi: f64) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let f = |t: f64| metric.warp(t).map(|w| 4.0 * PI * w.phi * w.phi).unwrap_or(f64::NAN);
    let tol = Tolerance { abs: 1e-12, rel: 1e-12 };
    Ok(integrate_with_breaks(f, &breaks_for(metric, lo, hi), tol)?.value)
}

/// `∫_lo^hi 4πφ(φ − φ') dt`, the decrement of `V − A/2`.
fn excess_between(metric: &RadialMetric, lo: f64, hi: f64) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let f = |t: f64| metric.warp(t).map(|w| -4.0 * PI * w.phi * w.dphi_minus_phi).unwrap_or(f64::NAN);
    let tol = Tolerance { abs: 1e-13, rel: 1e-13 };
    Ok(integrate_with_breaks(f, &breaks_for(metric, lo, hi), tol)?.value)
}

/// Volume between `∂M` and the centered sphere `S_r`.
pub fn ball_volume(metric: &RadialMetric, r: f64) -> Result<f64> {
    metric.sphere_warp(r)?;
    volume_between(metric, metric.boundary_r(), r)
}

/// `V(r) − A(r)/2` without the cancellation of the two large terms.
pub fn volume_excess(metric: &RadialMetric, r: f64) -> Result<f64> {
    metric.sphere_warp(r)?;
    let b = metric.boundary_r();
    let phi_b = metric.warp(b)?.phi;
    Ok(-2.0 * PI * phi_b * phi_b + excess_between(metric, b, r)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub r: f64,
    #[serde(rename = "A")]
    pub area: f64,
    #[serde(rename = "V")]
    pub volume: f64,
    #[serde(rename = "H")]
    pub h: f64,
    /// `V − A/2`
    pub volume_excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub metric_id: MetricKind,
    pub samples: Vec<ProfileSample>,
}

fn check_grid(metric: &RadialMetric, r_grid: &[f64]) -> Result<()> {
    if r_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(LabError::UnsortedGrid);
    }
    if let Some(&r0) = r_grid.first() {
        metric.check_radius(r0)?;
    }
    Ok(())
}

/// Centered-ball profile on a sorted grid. Segment integrals run in
/// parallel and are summed in grid order.
pub fn profile_curve(metric: &RadialMetric, r_grid: &[f64]) -> Result<ProfileCurve> {
    check_grid(metric, r_grid)?;
    let b = metric.boundary_r();
    let starts: Vec<f64> = std::iter::once(b).chain(r_grid.iter().copied()).collect();
    let segments: Vec<(f64, f64, crate::metric::WarpSample)> = r_grid
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let lo = starts[i].max(b);
            let w = metric.sphere_warp(r)?;
            Ok((volume_between(metric, lo, r)?, excess_between(metric, lo, r)?, w))
        })
        .collect::<Result<_>>()?;

    let phi_b = metric.warp(b)?.phi;
    let (mut volume, mut excess) = (0.0, -2.0 * PI * phi_b * phi_b);
    let mut samples = Vec::with_capacity(r_grid.len());
    for (dv, dw, w) in segments {
        volume += dv;
        excess += dw;
        samples.push(ProfileSample {
            r: w.r,
            area: w.area(),
            volume,
            h: w.mean_curvature(),
            volume_excess: excess,
        });
    }
    if samples.windows(2).any(|p| !(p[1].area > p[0].area)) {
        return Err(LabError::InvalidArgument(
            "centered-sphere area is not increasing on the grid".into(),
        ));
    }
    Ok(ProfileCurve { metric_id: metric.kind(), samples })
}

/// `lo, lo + step, …` up to and including `hi` (to rounding).
pub fn linear_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + step * i as f64).collect()
}

/// `(A, V − A/2 + π log A − π(1 + log π))` over an r-window.
fn renormalized_samples(metric: &RadialMetric, window: [f64; 2]) -> Result<Vec<(f64, f64)>> {
    let grid = linear_grid(window[0].max(metric.boundary_r()), window[1], WINDOW_STEP);
    let curve = profile_curve(metric, &grid)?;
    Ok(curve
        .samples
        .iter()
        .map(|s| (s.area, s.volume_excess + PI * s.area.ln() - profile_constant()))
        .collect())
}

fn mass_term(metric: &RadialMetric, area: f64) -> f64 {
    -8.0 * PI.powf(1.5) * metric.mass() / area.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenormalizedVolume {
    pub value: f64,
    pub error_estimate: f64,
    pub fit: ExpansionFit,
}

fn renorm_fit(metric: &RadialMetric, window: [f64; 2]) -> Result<ExpansionFit> {
    let samples: Vec<(f64, f64)> = renormalized_samples(metric, window)?
        .into_iter()
        .map(|(a, y)| (a, y - mass_term(metric, a)))
        .collect();
    fit_expansion(&samples, &[BasisFn::Constant, BasisFn::Power { exponent: -1.0 }])
}

/// `V(M,g) = lim [V(A) − (A/2 − π log A + π(1 + log π))]`, extrapolated with
/// the known `A^{−1/2}` term removed. The error estimate compares against
/// the same fit on a window shifted down by one unit.
pub fn renormalized_volume(metric: &RadialMetric) -> Result<RenormalizedVolume> {
    let fit = renorm_fit(metric, RENORM_WINDOW)?;
    let shifted = renorm_fit(metric, [RENORM_WINDOW[0] - 1.0, RENORM_WINDOW[1] - 1.0])?;
    let value = fit.coefficients[0];
    let error_estimate = (value - shifted.coefficients[0]).abs() + fit.residual_norm;
    if !(error_estimate < RENORM_MAX_ERROR) {
        return Err(LabError::NonConvergence(format!(
            "renormalized volume extrapolation error {error_estimate:e} exceeds {RENORM_MAX_ERROR:e}"
        )));
    }
    Ok(RenormalizedVolume { value, error_estimate, fit })
}

/// Fit of `V − A/2 + π log A − π(1 + log π) − V(M,g)` against
/// `{A^{−1/2}, A^{−1}}`.
pub fn isoballs_fit(metric: &RadialMetric) -> Result<ExpansionFit> {
    let v_star = renormalized_volume(metric)?.value;
    let samples: Vec<(f64, f64)> = renormalized_samples(metric, ISOBALLS_WINDOW)?
        .into_iter()
        .map(|(a, y)| (a, y - v_star))
        .collect();
    fit_expansion(&samples, &[BasisFn::Power { exponent: -0.5 }, BasisFn::Power { exponent: -1.0 }])
}

/// Free fit of `V − A/2 + π log A` against `{1, A^{−1/2}, A^{−1}}`. The
/// constant should equal `π(1 + log π) + V(M,g)`.
pub fn profile_constant_fit(metric: &RadialMetric) -> Result<ExpansionFit> {
    let samples: Vec<(f64, f64)> = renormalized_samples(metric, CONSTANT_WINDOW)?
        .into_iter()
        .map(|(a, y)| (a, y + profile_constant()))
        .collect();
    fit_expansion(
        &samples,
        &[BasisFn::Constant, BasisFn::Power { exponent: -0.5 }, BasisFn::Power { exponent: -1.0 }],
    )
}

/// `(∗) = V(M,g) + ½·area(∂M)`
pub fn drift_quantity(metric: &RadialMetric) -> Result<f64> {
    let v_star = renormalized_volume(metric)?.value;
    let phi_b = metric.warp(metric.boundary_r())?.phi;
    Ok(v_star + 2.0 * PI * phi_b * phi_b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub renorm_volume: f64,
    pub renorm_error: f64,
    pub drift_star: f64,
    pub isoballs_fit: ExpansionFit,
}

pub fn profile_summary(metric: &RadialMetric) -> Result<ProfileSummary> {
    let rv = renormalized_volume(metric)?;
    let phi_b = metric.warp(metric.boundary_r())?.phi;
    Ok(ProfileSummary {
        renorm_volume: rv.value,
        renorm_error: rv.error_estimate,
        drift_star: rv.value + 2.0 * PI * phi_b * phi_b,
        isoballs_fit: isoballs_fit(metric)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoliationSample {
    pub r: f64,
    #[serde(rename = "A")]
    pub area: f64,
    #[serde(rename = "F")]
    pub hawking: f64,
    #[serde(rename = "dF")]
    pub dhawking: f64,
}

/// Derivative of samples `y(u)` at node `i` on a non-uniform grid, from
/// Fornberg weights over a stencil of `width` neighbours.
fn stencil_derivative(u: &[f64], y: &[f64], i: usize, width: usize, order: usize) -> f64 {
    let n = u.len();
    let width = width.min(n);
    let start = i.saturating_sub(width / 2).min(n - width);
    let nodes = &u[start..start + width];
    let w = fornberg_weights(u[i], nodes, order);
    w.iter().zip(&y[start..start + width]).map(|(a, b)| a * b).sum()
}

/// Finite-difference weights for the `order`-th derivative at `z`
/// (Fornberg's recursion).
fn fornberg_weights(z: f64, x: &[f64], order: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

fn log_area_spacing(areas: &[f64]) -> Result<Vec<f64>> {
    let u: Vec<f64> = areas.iter().map(|a| a.ln()).collect();
    if let Some(w) = u.windows(2).find(|w| w[1] - w[0] > MAX_LOG_AREA_STEP) {
        return Err(LabError::CoarseGrid(format!(
            "log-area step {} exceeds {MAX_LOG_AREA_STEP}",
            w[1] - w[0]
        )));
    }
    Ok(u)
}

/// Hawking mass `F(A)` along the centered foliation and `F'(A)` by five-point
/// central differences in `log A` (one-sided at the ends).
pub fn foliation_mass_curve(metric: &RadialMetric, r_grid: &[f64]) -> Result<Vec<FoliationSample>> {
    check_grid(metric, r_grid)?;
    if r_grid.len() < 3 {
        return Err(LabError::CoarseGrid("need at least 3 radii".into()));
    }
    let warps = r_grid.par_iter().map(|&r| metric.sphere_warp(r)).collect::<Result<Vec<_>>>()?;
    let areas: Vec<f64> = warps.iter().map(|w| w.area()).collect();
    let f: Vec<f64> = warps.iter().map(hawking_of).collect();
    let u = log_area_spacing(&areas)?;
    Ok((0..warps.len())
        .map(|i| FoliationSample {
            r: warps[i].r,
            area: areas[i],
            hawking: f[i],
            dhawking: stencil_derivative(&u, &f, i, 5, 1) / areas[i],
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeLaws {
    /// `(A, dV/dA)`
    pub dvda: Vec<(f64, f64)>,
    /// `(A, 2V''V'^{−3}A²)`
    pub second_law: Vec<(f64, f64)>,
    /// `(A, V'^{−2} − 23π/A)`
    pub mono23: Vec<(f64, f64)>,
}

/// Five-point differences of `W = V − A/2` in `u = log A`:
/// `V' = ½ + W_u/A` and `V'' = (W_uu − W_u)/A²`.
pub fn derivative_laws(profile: &ProfileCurve) -> Result<DerivativeLaws> {
    let s = &profile.samples;
    if s.len() < 5 {
        return Err(LabError::CoarseGrid(format!("need at least 5 samples, got {}", s.len())));
    }
    let areas: Vec<f64> = s.iter().map(|p| p.area).collect();
    let u = log_area_spacing(&areas)?;
    let w: Vec<f64> = s.iter().map(|p| p.volume_excess).collect();
    let mut laws = DerivativeLaws { dvda: vec![], second_law: vec![], mono23: vec![] };
    for (i, &a) in areas.iter().enumerate() {
        let wu = stencil_derivative(&u, &w, i, 5, 1);
        let wuu = stencil_derivative(&u, &w, i, 5, 2);
        let v1 = 0.5 + wu / a;
        laws.dvda.push((a, v1));
        laws.second_law.push((a, 2.0 * (wuu - wu) / v1.powi(3)));
        laws.mono23.push((a, 1.0 / (v1 * v1) - 23.0 * PI / a));
    }
    Ok(laws)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::make_hyperbolic;

    #[test]
    fn fornberg_reproduces_polynomials() {
        let x = [0.0f64, 0.3, 0.7, 1.2, 2.0];
        let y: Vec<f64> = x.iter().map(|t| t * t * t - 2.0 * t).collect();
        let d1: f64 = fornberg_weights(0.7, &x, 1).iter().zip(&y).map(|(a, b)| a * b).sum();
        let d2: f64 = fornberg_weights(0.7, &x, 2).iter().zip(&y).map(|(a, b)| a * b).sum();
        assert!((d1 - (3.0 * 0.49 - 2.0)).abs() < 1e-12);
        assert!((d2 - 6.0 * 0.7).abs() < 1e-11);
    }

    #[test]
    fn reference_closed_form_at_unit_radius() {
        let a = 4.0 * PI * 1f64.sinh().powi(2);
        let v = hyperbolic_reference(a).unwrap();
        assert!((v - (PI * 2f64.sinh() - 2.0 * PI)).abs() < 1e-13);
        assert!(hyperbolic_reference(0.0).is_err());
    }

    #[test]
    fn reference_branches_agree_near_switch() {
        let a = |rho: f64| 4.0 * PI * rho.sinh().powi(2);
        let lo = hyperbolic_reference(a(0.5 - 1e-9)).unwrap();
        let hi = hyperbolic_reference(a(0.5 + 1e-9)).unwrap();
        assert!((lo - hi).abs() < 1e-8);
    }

    #[test]
    fn reference_excess_matches_difference() {
        for rho in [0.7, 2.0, 5.0] {
            let a = 4.0 * PI * f64::sinh(rho).powi(2);
            let direct = hyperbolic_reference(a).unwrap() - a / 2.0;
            assert!((hyperbolic_reference_excess(a).unwrap() - direct).abs() < 1e-9 * a);
        }
    }

    #[test]
    fn unsorted_grid_is_rejected() {
        let m = make_hyperbolic();
        assert_eq!(profile_curve(&m, &[1.0, 0.5]).unwrap_err(), LabError::UnsortedGrid);
    }

    #[test]
    fn derivative_laws_need_five_samples() {
        let m = make_hyperbolic();
        let curve = profile_curve(&m, &[1.0, 1.1, 1.2, 1.3]).unwrap();
        assert!(matches!(derivative_laws(&curve), Err(LabError::CoarseGrid(_))));
    }

    #[test]
    fn coarse_foliation_grid_is_rejected() {
        let m = make_hyperbolic();
        assert!(matches!(foliation_mass_curve(&m, &[2.0, 3.0, 4.0]), Err(LabError::CoarseGrid(_))));
    }
}
