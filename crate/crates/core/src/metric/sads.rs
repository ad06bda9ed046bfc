//! Schwarzschild–anti-de Sitter in the static coordinate `s`, with the
//! geodesic coordinate `r` normalized so that `r − asinh(s) → 0`.
//!
//! The static form is `ds²/V(s) + s² g_{S²}` with `V(s) = 1 + s² − 2m/s`, on
//! `s ≥ s₀ = 2m` where the boundary sphere has mean curvature 2. The chart is
//!
//! ```text
//! r(s) = asinh(s) − T(s),   T(s) = ∫_s^∞ V(t)^{-1/2} − (1 + t²)^{-1/2} dt
//! ```
//!
//! and every derivative of `φ(r) = s(r)` comes from `dV/ds` through the chain
//! rule: `φ' = √V`, `φ'' = s + m/s²`.

use super::WarpSample;
use crate::error::{LabError, Result};
use crate::quadrature::{integrate_with_breaks, Tolerance};

/// Static radius beyond which the tail integral is replaced by its expansion.
pub const TAIL_SPLIT: f64 = 1e6;
const TAIL_RTOL: f64 = 1e-12;
/// Below this static radius the tail integral gets a separate near-boundary piece.
const NEAR_CUT: f64 = 1.0;
const NEWTON_MAX_ITER: usize = 80;

#[derive(Debug, Clone, PartialEq)]
pub struct SadsChart {
    mass: f64,
    s0: f64,
    tail_at_s0: f64,
    boundary_r: f64,
}

/// `V(t)^{-1/2} − (1+t²)^{-1/2}` written without cancellation.
fn tail_integrand(m: f64, t: f64) -> f64 {
    let w = 1.0 + t * t;
    let v = t * t + (t - 2.0 * m) / t;
    (2.0 * m / t) / ((v * w).sqrt() * (v.sqrt() + w.sqrt()))
}

/// `∫_S^∞` of the integrand from its large-`t` expansion
/// `m t⁻⁴ − (3/2) m t⁻⁶ + (3/2) m² t⁻⁷ + …`.
fn analytic_tail(m: f64, big_s: f64) -> f64 {
    let inv = 1.0 / big_s;
    let inv3 = inv * inv * inv;
    m * inv3 / 3.0 - 0.3 * m * inv3 * inv * inv + 0.25 * m * m * inv3 * inv3
}

impl SadsChart {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(LabError::NonPositiveMass(mass));
        }
        let s0 = 2.0 * mass;
        let mut chart = Self { mass, s0, tail_at_s0: 0.0, boundary_r: 0.0 };
        chart.tail_at_s0 = chart.tail(s0)?;
        chart.boundary_r = s0.asinh() - chart.tail_at_s0;
        Ok(chart)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Static radius of the boundary sphere, `2m`.
    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn boundary_r(&self) -> f64 {
        self.boundary_r
    }

    /// `V(s) = 1 + s² − 2m/s`, arranged to stay accurate near `s₀` for small `m`.
    pub fn potential(&self, s: f64) -> f64 {
        s * s + (s - self.s0) / s
    }

    /// `T(s)`, the normalization integral.
    pub fn tail(&self, s: f64) -> Result<f64> {
        let m = self.mass;
        if s >= TAIL_SPLIT {
            return Ok(analytic_tail(m, s));
        }
        let tol = Tolerance::relative(TAIL_RTOL);
        let mut total = analytic_tail(m, TAIL_SPLIT);
        let s_far = s.max(NEAR_CUT);
        if s < NEAR_CUT {
            // For small m the integrand peaks like (4m² + ε)^{-1/2} in
            // ε = t − s₀. Integrating in w = √ε keeps ε exact and smooths the peak.
            let near = |w: f64| {
                let eps = w * w;
                let t = self.s0 + eps;
                let v = t * t + eps / t;
                let big_w = 1.0 + t * t;
                2.0 * w * (2.0 * m / t) / ((v * big_w).sqrt() * (v.sqrt() + big_w.sqrt()))
            };
            let (w_lo, w_hi) = ((s - self.s0).sqrt(), (NEAR_CUT - self.s0).sqrt());
            let mut breaks = vec![w_lo];
            let mut b = 2.0 * m;
            while b < w_hi {
                if b > w_lo {
                    breaks.push(b);
                }
                b *= 8.0;
            }
            breaks.push(w_hi);
            total += integrate_with_breaks(near, &breaks, tol)?.value;
        }
        // t = s_far/x maps [s_far, TAIL_SPLIT] to x ∈ [s_far/TAIL_SPLIT, 1]; the
        // transformed integrand behaves like m x²/s_far³ near x = 0.
        let g = |x: f64| {
            let t = s_far / x;
            tail_integrand(m, t) * s_far / (x * x)
        };
        let x_lo = s_far / TAIL_SPLIT;
        let mut breaks = vec![x_lo];
        breaks.extend([1e-4, 1e-2, 0.25].into_iter().filter(|&b| b > x_lo));
        breaks.push(1.0);
        total += integrate_with_breaks(g, &breaks, tol)?.value;
        Ok(total)
    }

    /// Geodesic coordinate of the static sphere `s`.
    pub fn r_of_s(&self, s: f64) -> Result<f64> {
        if s < self.s0 {
            return Err(LabError::BelowBoundary { r: s, boundary: self.s0 });
        }
        Ok(s.asinh() - self.tail(s)?)
    }

    /// Inverts the chart. Returns `(s, T(s))` with `s = sinh(r + T(s))`.
    pub fn s_of_r(&self, r: f64) -> Result<(f64, f64)> {
        if r < self.boundary_r - 1e-12 * self.boundary_r.abs().max(1.0) {
            return Err(LabError::BelowBoundary { r, boundary: self.boundary_r });
        }
        if r <= self.boundary_r {
            return Ok((self.s0, self.tail_at_s0));
        }
        // g(s) = asinh(s) − T(s) − r is increasing and concave with g' = V^{-1/2}.
        let mut lo = self.s0;
        let mut hi = (r + self.tail_at_s0).sinh();
        let mut s = r.sinh().clamp(lo, hi);
        let scale = 4.0 * f64::EPSILON * r.abs().max(1.0);
        for _ in 0..NEWTON_MAX_ITER {
            let t = self.tail(s)?;
            let g = s.asinh() - t - r;
            if g.abs() <= scale {
                return Ok(((r + t).sinh(), t));
            }
            if g < 0.0 {
                lo = s;
            } else {
                hi = s;
            }
            let mut next = s - g * self.potential(s).sqrt();
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - s).abs() <= 2.0 * f64::EPSILON * s {
                let t = self.tail(next)?;
                return Ok(((r + t).sinh(), t));
            }
            s = next;
        }
        Err(LabError::NonConvergence(format!("chart inversion at r = {r}")))
    }

    pub fn sample(&self, r: f64) -> Result<WarpSample> {
        let (s, t) = self.s_of_r(r)?;
        Ok(self.sample_at(r, s, t))
    }

    pub(crate) fn sample_at(&self, r: f64, s: f64, t: f64) -> WarpSample {
        let m = self.mass;
        let v = self.potential(s);
        let sqrt_v = v.sqrt();
        let ddphi_minus_phi = m / (s * s);
        let sphere_defect = 2.0 * m / s;
        WarpSample {
            r,
            phi: s,
            dphi: sqrt_v,
            ddphi: s + ddphi_minus_phi,
            dphi_minus_phi: (1.0 - 2.0 * m / s) / (sqrt_v + s),
            ddphi_minus_phi,
            sphere_defect,
            phi_sq_excess: t.sinh() * (2.0 * r + t).sinh(),
            scalar_excess: -4.0 * ddphi_minus_phi / s + 2.0 * sphere_defect / (s * s),
        }
    }
}
