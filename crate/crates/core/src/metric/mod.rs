//! Rotationally symmetric metrics `dr⊗dr + φ(r)² g_{S²}`.
//!
//! Every family returns its warp through [`WarpSample`], which besides
//! `φ, φ', φ''` carries the small differences (`φ' − φ`, `1 + φ² − φ'²`,
//! `R + 6`, ...) in cancellation-free form. Far out in the end those are
//! many orders of magnitude below `φ` and cannot be recovered by subtraction.

mod glued;
mod perturbed;
mod sads;
mod spec;

use serde::{Deserialize, Serialize};

pub use glued::{GluedWarp, GluingSpec, JOIN_TOLERANCE};
pub use perturbed::{PerturbationTerm, PerturbedWarp, MIN_RATE};
pub use sads::{SadsChart, TAIL_SPLIT};
pub use spec::{GluingPayload, MetricSpec};

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Hyperbolic,
    ExactSads,
    PerturbedSads,
    SplineGlued,
}

/// Warp function and its derivatives at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpSample {
    pub r: f64,
    pub phi: f64,
    pub dphi: f64,
    pub ddphi: f64,
    /// `φ' − φ`
    pub dphi_minus_phi: f64,
    /// `φ'' − φ`
    pub ddphi_minus_phi: f64,
    /// `1 + φ² − φ'²`; zero for hyperbolic space, `2m/s` for SAdS.
    pub sphere_defect: f64,
    /// `φ² − sinh² r`
    pub phi_sq_excess: f64,
    /// `R + 6`
    pub scalar_excess: f64,
}

impl WarpSample {
    /// Builds the sample with the difference fields computed by subtraction.
    pub fn from_derivatives(r: f64, phi: f64, dphi: f64, ddphi: f64) -> Self {
        let sphere_defect = 1.0 + phi * phi - dphi * dphi;
        let ddphi_minus_phi = ddphi - phi;
        Self {
            r,
            phi,
            dphi,
            ddphi,
            dphi_minus_phi: dphi - phi,
            ddphi_minus_phi,
            sphere_defect,
            phi_sq_excess: phi * phi - r.sinh().powi(2),
            scalar_excess: -4.0 * ddphi_minus_phi / phi + 2.0 * sphere_defect / (phi * phi),
        }
    }

    pub fn area(&self) -> f64 {
        4.0 * std::f64::consts::PI * self.phi * self.phi
    }

    /// Mean curvature `2φ'/φ` of the centered sphere.
    pub fn mean_curvature(&self) -> f64 {
        2.0 * self.dphi / self.phi
    }

    /// `H − 2`
    pub fn mean_curvature_excess(&self) -> f64 {
        2.0 * self.dphi_minus_phi / self.phi
    }

    /// `H² − 4 = 4 (1 − defect) / φ²`
    pub fn h_sq_minus_four(&self) -> f64 {
        4.0 * (1.0 - self.sphere_defect) / (self.phi * self.phi)
    }

    /// `Ric(ν,ν) + 2 = −2(φ'' − φ)/φ`
    pub fn ric_excess(&self) -> f64 {
        -2.0 * self.ddphi_minus_phi / self.phi
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Warp {
    Hyperbolic,
    Sads(SadsChart),
    Perturbed(PerturbedWarp),
    Glued(GluedWarp),
}

/// An immutable rotationally symmetric metric with its boundary radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMetric {
    kind: MetricKind,
    mass: f64,
    boundary_r: f64,
    warp: Warp,
}

/// Curvature of the metric at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub r: f64,
    pub scalar_r: f64,
    /// `Ric(ν,ν)` for the radial unit normal.
    pub ric_nn: f64,
    /// Gauss curvature `1/φ²` of the centered sphere.
    pub sphere_k: f64,
    /// `R + 6` without cancellation.
    pub scalar_excess: f64,
    /// `Ric(ν,ν) + 2` without cancellation.
    pub ric_excess: f64,
}

pub fn make_hyperbolic() -> RadialMetric {
    RadialMetric { kind: MetricKind::Hyperbolic, mass: 0.0, boundary_r: 0.0, warp: Warp::Hyperbolic }
}

pub fn make_sads(mass: f64) -> Result<RadialMetric> {
    let chart = SadsChart::new(mass)?;
    Ok(RadialMetric {
        kind: MetricKind::ExactSads,
        mass,
        boundary_r: chart.boundary_r(),
        warp: Warp::Sads(chart),
    })
}

pub fn make_perturbed(mass: f64, terms: Vec<PerturbationTerm>) -> Result<RadialMetric> {
    let warp = PerturbedWarp::new(mass, terms)?;
    Ok(RadialMetric {
        kind: MetricKind::PerturbedSads,
        mass,
        boundary_r: warp.chart().boundary_r(),
        warp: Warp::Perturbed(warp),
    })
}

pub fn make_glued(spec: GluingSpec) -> Result<RadialMetric> {
    let mass = spec.exterior_mass;
    let warp = GluedWarp::new(spec)?;
    Ok(RadialMetric {
        kind: MetricKind::SplineGlued,
        mass,
        boundary_r: warp.chart().boundary_r(),
        warp: Warp::Glued(warp),
    })
}

impl RadialMetric {
    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    /// Mass parameter `m` (exterior mass for glued metrics, zero for hyperbolic space).
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn boundary_r(&self) -> f64 {
        self.boundary_r
    }

    /// The SAdS chart of the end, when there is one.
    pub fn chart(&self) -> Option<&SadsChart> {
        match &self.warp {
            Warp::Hyperbolic => None,
            Warp::Sads(c) => Some(c),
            Warp::Perturbed(p) => Some(p.chart()),
            Warp::Glued(g) => Some(g.chart()),
        }
    }

    pub fn gluing(&self) -> Option<&GluedWarp> {
        match &self.warp {
            Warp::Glued(g) => Some(g),
            _ => None,
        }
    }

    pub fn perturbation(&self) -> Option<&PerturbedWarp> {
        match &self.warp {
            Warp::Perturbed(p) => Some(p),
            _ => None,
        }
    }

    pub fn check_radius(&self, r: f64) -> Result<()> {
        if !r.is_finite() || r < self.boundary_r - 1e-12 * self.boundary_r.abs().max(1.0) {
            return Err(LabError::BelowBoundary { r, boundary: self.boundary_r });
        }
        Ok(())
    }

    /// Warp sample at `r ≥ boundary_r`.
    pub fn warp(&self, r: f64) -> Result<WarpSample> {
        self.check_radius(r)?;
        let r = r.max(self.boundary_r);
        match &self.warp {
            Warp::Hyperbolic => {
                let (sh, ch) = (r.sinh(), r.cosh());
                Ok(WarpSample {
                    r,
                    phi: sh,
                    dphi: ch,
                    ddphi: sh,
                    dphi_minus_phi: (-r).exp(),
                    ddphi_minus_phi: 0.0,
                    sphere_defect: 0.0,
                    phi_sq_excess: 0.0,
                    scalar_excess: 0.0,
                })
            }
            Warp::Sads(c) => c.sample(r),
            Warp::Perturbed(p) => p.sample(r),
            Warp::Glued(g) => g.sample(r),
        }
    }

    /// Like [`warp`](Self::warp) but additionally requires `φ(r) > 0`.
    pub fn sphere_warp(&self, r: f64) -> Result<WarpSample> {
        let w = self.warp(r)?;
        if !(w.phi > 0.0) {
            return Err(LabError::NonPositiveWarp(r));
        }
        Ok(w)
    }

    pub fn area(&self, r: f64) -> Result<f64> {
        Ok(self.warp(r)?.area())
    }

    /// Smallest radius whose centered sphere has area `area`.
    pub fn radius_for_area(&self, area: f64) -> Result<f64> {
        if !(area > 0.0) || !area.is_finite() {
            return Err(LabError::InvalidArgument(format!("area must be positive, got {area}")));
        }
        let phi_target = (area / (4.0 * std::f64::consts::PI)).sqrt();
        match &self.warp {
            Warp::Hyperbolic => Ok(phi_target.asinh()),
            Warp::Sads(c) => c.r_of_s(phi_target),
            _ => self.bracket_radius(phi_target),
        }
    }

    fn bracket_radius(&self, phi_target: f64) -> Result<f64> {
        let f = |r: f64| -> Result<f64> { Ok(self.warp(r)?.phi - phi_target) };
        let mut lo = self.boundary_r;
        if f(lo)? >= 0.0 {
            return Err(LabError::InvalidArgument(format!(
                "no centered sphere with warp {phi_target} beyond the boundary"
            )));
        }
        let step = 0.05;
        let mut hi = lo + step;
        while f(hi)? < 0.0 {
            lo = hi;
            hi += step;
            if hi > 700.0 {
                return Err(LabError::NonConvergence("area search left the representable range".into()));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid)? < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    pub fn to_spec(&self) -> MetricSpec {
        match &self.warp {
            Warp::Hyperbolic => MetricSpec::Hyperbolic { boundary: Some(self.boundary_r) },
            Warp::Sads(_) => MetricSpec::Sads { mass: self.mass, boundary: Some(self.boundary_r) },
            Warp::Perturbed(p) => MetricSpec::Perturbed {
                mass: self.mass,
                boundary: Some(self.boundary_r),
                perturbation: p.terms().to_vec(),
            },
            Warp::Glued(g) => MetricSpec::Glued {
                mass: self.mass,
                boundary: Some(self.boundary_r),
                gluing: GluingPayload {
                    interval: g.spec().glue_interval,
                    knots: g.spec().interior_profile.clone(),
                },
            },
        }
    }

    pub fn from_spec(spec: &MetricSpec) -> Result<Self> {
        spec.build()
    }
}

/// Curvature from the warped-product identities
/// `Ric(ν,ν) = −2φ''/φ`, `K = 1/φ²`, `R = −4φ''/φ + 2(1 − φ'²)/φ²`.
pub fn curvature(metric: &RadialMetric, r: f64) -> Result<CurvatureSample> {
    let w = metric.sphere_warp(r)?;
    Ok(curvature_of(&w))
}

pub fn curvature_of(w: &WarpSample) -> CurvatureSample {
    let ric_excess = w.ric_excess();
    CurvatureSample {
        r: w.r,
        scalar_r: -6.0 + w.scalar_excess,
        ric_nn: -2.0 + ric_excess,
        sphere_k: 1.0 / (w.phi * w.phi),
        scalar_excess: w.scalar_excess,
        ric_excess,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hyperbolic_warp_is_sinh() {
        let h = make_hyperbolic();
        let w = h.warp(1.0).unwrap();
        assert!((w.phi - 1.0f64.sinh()).abs() < 1e-15);
        assert!((w.phi - 1.175_201_193_643_801_4).abs() < 1e-15);
        for r in [0.5, 3.0, 9.0] {
            assert_eq!(h.warp(r).unwrap().phi / r.sinh(), 1.0);
        }
    }

    #[test]
    fn hyperbolic_curvature_is_model_space() {
        let h = make_hyperbolic();
        for r in [1.0, 5.0, 10.0] {
            let c = curvature(&h, r).unwrap();
            assert_eq!(c.scalar_r, -6.0);
            assert_eq!(c.ric_nn, -2.0);
            assert!((c.sphere_k * r.sinh().powi(2) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn generic_identities_reproduce_hyperbolic_curvature() {
        // the identities themselves, applied to sinh with no special casing
        for r in [0.7, 2.0, 4.0] {
            let w = WarpSample::from_derivatives(r, r.sinh(), r.cosh(), r.sinh());
            let c = curvature_of(&w);
            assert!((c.scalar_r + 6.0).abs() < 1e-12);
            assert!((c.ric_nn + 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn generic_identities_match_flat_space() {
        // φ = r: flat R³, all curvatures vanish
        let w = WarpSample::from_derivatives(2.0, 2.0, 1.0, 0.0);
        let c = curvature_of(&w);
        assert!((c.scalar_r).abs() < 1e-14);
        assert!((c.ric_nn).abs() < 1e-14);
    }

    #[test]
    fn below_boundary_is_rejected() {
        let m = make_sads(1.0).unwrap();
        let b = m.boundary_r();
        assert!(matches!(curvature(&m, b - 0.5), Err(LabError::BelowBoundary { .. })));
        assert!(make_hyperbolic().warp(-0.1).is_err());
    }

    #[test]
    fn hyperbolic_origin_has_no_sphere() {
        assert!(matches!(curvature(&make_hyperbolic(), 0.0), Err(LabError::NonPositiveWarp(_))));
    }

    #[test]
    fn radius_for_area_inverts_area() {
        let metrics = [
            make_hyperbolic(),
            make_sads(1.0).unwrap(),
            make_perturbed(1.0, vec![PerturbationTerm { amplitude: 10.0, rate: 5.0 }]).unwrap(),
        ];
        for m in &metrics {
            for r in [2.0, 4.5, 9.0] {
                let a = m.area(r).unwrap();
                let back = m.radius_for_area(a).unwrap();
                assert!((back - r).abs() < 1e-10, "{:?} {r} {back}", m.kind());
            }
        }
    }
}
