//! Quantities attached to a centered coordinate sphere `S_r`.
//!
//! Centered spheres are umbilic, so `|h|² = H²/2`, the traceless second
//! fundamental form vanishes and `∇_Σ r = 0`. Everything below is a pointwise
//! function of the warp sample at `r`, and the small differences (`H − 2`,
//! `H² − 4`, the Hawking bracket) come from the cancellation-free fields of
//! [`WarpSample`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::metric::{curvature_of, RadialMetric, WarpSample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereReport {
    pub r: f64,
    /// Area radius `√(area/4π)`.
    pub s: f64,
    pub area: f64,
    /// Mean curvature with respect to the outward normal.
    #[serde(rename = "H")]
    pub h: f64,
    /// Gauss curvature.
    #[serde(rename = "K")]
    pub k: f64,
    pub hawking: f64,
    /// `16π − (H² − 4)·area − (2/3)·area·(R + 6)`
    pub cy_slack: f64,
    /// `4K − (H² − 4) − 64m e^{−3r}`
    pub gauss_residual: f64,
    /// `4e^{−2r} − (H − 2)`
    pub deltar_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub r: f64,
    /// `(ℓ, λ_ℓ)` for `ℓ = 0..=l_max`.
    pub lambda: Vec<(u32, f64)>,
}

impl SpectrumReport {
    pub fn eigenvalue(&self, l: u32) -> Option<f64> {
        self.lambda.iter().find(|(k, _)| *k == l).map(|&(_, v)| v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescalingReport {
    pub r: f64,
    pub r_hat: f64,
    pub w: f64,
    pub psi: f64,
    pub xi: f64,
}

/// `√A/(16π)^{3/2} · (16π − (H² − 4)A)`
pub fn hawking_mass(area: f64, h: f64) -> Result<f64> {
    if !(area > 0.0) || !area.is_finite() {
        return Err(LabError::InvalidArgument(format!("area must be positive, got {area}")));
    }
    let c = 16.0 * PI;
    Ok(area.sqrt() / c.powf(1.5) * (c - (h * h - 4.0) * area))
}

/// Hawking mass from a warp sample. The bracket `16π − (H² − 4)A` equals
/// `16π(1 + φ² − φ'²)`, so the mass is `φ·(1 + φ² − φ'²)/2`.
pub fn hawking_of(w: &WarpSample) -> f64 {
    0.5 * w.phi * w.sphere_defect
}

pub fn sphere_report(metric: &RadialMetric, r: f64) -> Result<SphereReport> {
    let w = metric.sphere_warp(r)?;
    Ok(report_of(metric.mass(), &w))
}

pub fn report_of(mass: f64, w: &WarpSample) -> SphereReport {
    let area = w.area();
    let phi2 = w.phi * w.phi;
    let bracket = 16.0 * PI * w.sphere_defect;
    SphereReport {
        r: w.r,
        s: w.phi,
        area,
        h: w.mean_curvature(),
        k: 1.0 / phi2,
        hawking: hawking_of(w),
        cy_slack: bracket - 2.0 / 3.0 * area * w.scalar_excess,
        gauss_residual: 4.0 * w.sphere_defect / phi2 - 64.0 * mass * (-3.0 * w.r).exp(),
        deltar_residual: 4.0 * (-2.0 * w.r).exp() - w.mean_curvature_excess(),
    }
}

/// Eigenvalues of `−Δ − (Ric(ν,ν) + |h|²)` on the centered sphere, one per
/// degree `ℓ`. Written as
/// `λ_ℓ = (ℓ(ℓ+1) − 2)/φ² + 2(1 + φ² − φ'²)/φ² − (Ric(ν,ν) + 2)`
/// so that the small gap `λ₁` is free of cancellation.
pub fn stability_spectrum(metric: &RadialMetric, r: f64, l_max: u32) -> Result<SpectrumReport> {
    if l_max < 1 {
        return Err(LabError::InvalidArgument(format!("l_max must be at least 1, got {l_max}")));
    }
    let w = metric.sphere_warp(r)?;
    Ok(spectrum_of(&w, l_max))
}

pub fn spectrum_of(w: &WarpSample, l_max: u32) -> SpectrumReport {
    let phi2 = w.phi * w.phi;
    let shift = 2.0 * w.sphere_defect / phi2 - curvature_of(w).ric_excess;
    let lambda = (0..=l_max)
        .map(|l| {
            let lf = l as f64;
            (l, (lf * (lf + 1.0) - 2.0) / phi2 + shift)
        })
        .collect();
    SpectrumReport { r: w.r, lambda }
}

/// `ξ = w − log(1 − e^{−2r̂}) + log(1 − e^{−2ρ}) + log coth(ρ/2)` where `ρ` is
/// the coordinate radius seen by the parametrization.
pub fn xi(w: f64, r_hat: f64, rho: f64) -> f64 {
    w - (-(-2.0 * r_hat).exp()).ln_1p() + (-(-2.0 * rho).exp()).ln_1p() + coth_half_log(rho)
}

/// `log coth(ρ/2) = log((1 + e^{−ρ})/(1 − e^{−ρ}))`
fn coth_half_log(rho: f64) -> f64 {
    let e = (-rho).exp();
    e.ln_1p() - (-e).ln_1p()
}

/// Rescaling data of the centered sphere `S_r` measured in the hyperbolic
/// background, where the sphere is its own area-radius sphere.
pub fn rescaling_report(metric: &RadialMetric, r: f64) -> Result<RescalingReport> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(LabError::InvalidArgument(format!("rescaling needs r > 0, got {r}")));
    }
    metric.check_radius(r)?;
    // The background area of S_r is 4π sinh² r, whose area radius is r
    // itself. Taking r̂ = r exactly avoids an asinh(sinh r) rounding error in w.
    let r_hat = r;
    let w = 0.0;
    Ok(RescalingReport { r, r_hat, w, psi: 1.0 + r.cosh(), xi: xi(w, r_hat, r) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{make_hyperbolic, make_sads};

    #[test]
    fn hawking_formula_examples() {
        assert!((hawking_mass(16.0 * PI, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(hawking_mass(0.0, 2.0).is_err());
        assert!(hawking_mass(-1.0, 2.0).is_err());
    }

    #[test]
    fn hyperbolic_sphere_is_massless_and_sharp() {
        let m = make_hyperbolic();
        for r in [0.5, 2.0, 9.0] {
            let rep = sphere_report(&m, r).unwrap();
            assert_eq!(rep.hawking, 0.0);
            assert_eq!(rep.cy_slack, 0.0);
            let direct = hawking_mass(rep.area, rep.h).unwrap();
            assert!(direct.abs() < 1e-12 * rep.area.sqrt().max(1.0) * rep.area);
        }
    }

    #[test]
    fn hyperbolic_gap_vanishes() {
        let sp = stability_spectrum(&make_hyperbolic(), 3.0, 4).unwrap();
        assert_eq!(sp.eigenvalue(1), Some(0.0));
        assert!(stability_spectrum(&make_hyperbolic(), 3.0, 0).is_err());
    }

    #[test]
    fn sads_gap_is_six_m_over_s_cubed() {
        let m = make_sads(1.0).unwrap();
        let w = m.warp(4.0).unwrap();
        let l1 = spectrum_of(&w, 2).eigenvalue(1).unwrap();
        assert!((l1 / (6.0 / w.phi.powi(3)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rescaling_examples() {
        let m = make_hyperbolic();
        let rep = rescaling_report(&m, 3f64.ln()).unwrap();
        assert!((rep.psi - 8.0 / 3.0).abs() < 1e-15);
        assert_eq!(rep.w, 0.0);
        assert!(rescaling_report(&m, 0.0).is_err());
        let far = rescaling_report(&m, 40.0).unwrap();
        assert!(far.xi.abs() < 1e-16);
        let r: f64 = 1.3;
        let direct = (1.0 / (r / 2.0).tanh()).ln();
        assert!((rescaling_report(&m, r).unwrap().xi - direct).abs() < 1e-14);
    }
}
