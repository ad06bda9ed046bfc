use serde::{Deserialize, Serialize};

use super::sads::SadsChart;
use super::WarpSample;
use crate::error::{LabError, Result};

/// Slowest decay rate admitted for a perturbation term.
pub const MIN_RATE: f64 = 5.0;

/// One term `amplitude · e^{−rate·r}` of the relative warp perturbation `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationTerm {
    pub amplitude: f64,
    pub rate: f64,
}

/// `φ = φ_SAdS · (1 + q)`. With every rate at least 5, `q`, `q'` and `q''`
/// are `O(e^{−5r})`, and so is `R + 6`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedWarp {
    chart: SadsChart,
    terms: Vec<PerturbationTerm>,
}

impl PerturbedWarp {
    pub fn new(mass: f64, terms: Vec<PerturbationTerm>) -> Result<Self> {
        let chart = SadsChart::new(mass)?;
        for t in &terms {
            if !t.amplitude.is_finite() || !(t.rate >= MIN_RATE) || !t.rate.is_finite() {
                return Err(LabError::InvalidArgument(format!(
                    "perturbation term {t:?} must be finite with rate >= {MIN_RATE}"
                )));
            }
        }
        // |q| is largest at the boundary
        let b = chart.boundary_r();
        let bound: f64 = terms.iter().map(|t| t.amplitude.abs() * (-t.rate * b).exp()).sum();
        if bound >= 1.0 {
            return Err(LabError::NonPositiveWarp(b));
        }
        Ok(Self { chart, terms })
    }

    pub fn chart(&self) -> &SadsChart {
        &self.chart
    }

    pub fn terms(&self) -> &[PerturbationTerm] {
        &self.terms
    }

    /// `(q, q', q'')` at `r`.
    pub fn q(&self, r: f64) -> (f64, f64, f64) {
        self.terms.iter().fold((0.0, 0.0, 0.0), |(q, dq, ddq), t| {
            let e = t.amplitude * (-t.rate * r).exp();
            (q + e, dq - t.rate * e, ddq + t.rate * t.rate * e)
        })
    }

    pub fn sample(&self, r: f64) -> Result<WarpSample> {
        let base = self.chart.sample(r)?;
        let (q, dq, ddq) = self.q(r);
        let (s, ds, dds) = (base.phi, base.dphi, base.ddphi);
        let p = 1.0 + q;
        let q2 = q * (2.0 + q);
        let scalar_delta = (-12.0 * (ds / s) * dq - 4.0 * ddq) / p
            - (2.0 / (s * s)) * q2 / (p * p)
            - 2.0 * dq * dq / (p * p);
        Ok(WarpSample {
            r,
            phi: s * p,
            dphi: ds * p + s * dq,
            ddphi: dds * p + 2.0 * ds * dq + s * ddq,
            dphi_minus_phi: base.dphi_minus_phi * p + s * dq,
            ddphi_minus_phi: base.ddphi_minus_phi * p + 2.0 * ds * dq + s * ddq,
            sphere_defect: -q2 + p * p * base.sphere_defect - 2.0 * s * ds * dq * p - s * s * dq * dq,
            phi_sq_excess: base.phi_sq_excess + s * s * q2,
            scalar_excess: base.scalar_excess + scalar_delta,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn warp() -> PerturbedWarp {
        PerturbedWarp::new(
            1.0,
            vec![
                PerturbationTerm { amplitude: 50.0, rate: 5.0 },
                PerturbationTerm { amplitude: -20.0, rate: 6.0 },
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_slow_terms() {
        let err = PerturbedWarp::new(1.0, vec![PerturbationTerm { amplitude: 1.0, rate: 3.0 }]);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_perturbations_that_close_the_warp() {
        let err = PerturbedWarp::new(1.0, vec![PerturbationTerm { amplitude: -1e6, rate: 5.0 }]);
        assert!(matches!(err, Err(LabError::NonPositiveWarp(_))));
    }

    #[test]
    fn stable_fields_agree_with_direct_formulas_at_moderate_radius() {
        let w = warp();
        let s = w.sample(2.5).unwrap();
        let direct = WarpSample::from_derivatives(s.r, s.phi, s.dphi, s.ddphi);
        assert!((s.dphi_minus_phi - direct.dphi_minus_phi).abs() < 1e-12);
        assert!((s.ddphi_minus_phi - direct.ddphi_minus_phi).abs() < 1e-12);
        assert!((s.sphere_defect - direct.sphere_defect).abs() < 1e-11);
        assert!((s.scalar_excess - direct.scalar_excess).abs() < 1e-10);
        assert!(s.scalar_excess.abs() > 1e-6);
    }

    #[test]
    fn q_derivatives_match_finite_differences() {
        let w = warp();
        let r = 2.0;
        let h = 1e-5;
        let (_, dq, ddq) = w.q(r);
        let fd1 = (w.q(r + h).0 - w.q(r - h).0) / (2.0 * h);
        let fd2 = (w.q(r + h).1 - w.q(r - h).1) / (2.0 * h);
        assert!((dq - fd1).abs() < 1e-7 * dq.abs().max(1e-12));
        assert!((ddq - fd2).abs() < 1e-7 * ddq.abs().max(1e-12));
    }
}
