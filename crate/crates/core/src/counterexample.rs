//! The shipped non-isoperimetric family: exact SAdS with a dent in the warp
//! function on a compact interval.
//!
//! The dent keeps `φ` increasing but pushes `R` below −6, and it removes
//! enough volume that `(∗) = V(M,g) + ½·area(∂M)` turns negative. A far
//! hyperbolic ball then encloses more volume than the centered ball whose
//! boundary, together with `∂M`, has the same total area.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::metric::{curvature, make_glued, GluingSpec, MetricKind, RadialMetric};
use crate::profile::{
    hyperbolic_reference_excess, linear_grid, profile_curve, renormalized_volume, RENORM_WINDOW,
};

pub const VERDICT_BEATEN: &str = "centered spheres are beaten by far competitors for all A above threshold A*";
pub const VERDICT_SURVIVE: &str = "centered spheres survive the (∗) test";

/// Volume margin a far competitor must win by.
pub const COMPETITOR_MARGIN: f64 = 1e-6;
const CURVATURE_STEP: f64 = 1e-3;
const COMPARISON_STEP: f64 = 0.25;

pub fn shipped_spec() -> GluingSpec {
    GluingSpec {
        exterior_mass: 1.0,
        glue_interval: [2.5, 4.5],
        interior_profile: vec![[3.5, 16.0]],
        boundary_r: None,
    }
}

pub fn shipped_metric() -> Result<RadialMetric> {
    make_glued(shipped_spec())
}

/// Centered ball against the far competitor at one sampled area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompetitorSample {
    pub r: f64,
    #[serde(rename = "A")]
    pub area: f64,
    /// Centered volume minus the volume of the hyperbolic ball of area `A − area(∂M)`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub metric_id: MetricKind,
    pub min_scalar_r: f64,
    pub min_scalar_r_at: f64,
    pub renorm_volume: f64,
    pub boundary_area: f64,
    pub drift_star: f64,
    /// First sampled area from which every later sample loses to the competitor.
    pub threshold_area: Option<f64>,
    pub verdict: String,
    pub comparison: Vec<CompetitorSample>,
}

impl CounterexampleReport {
    pub fn beaten(&self) -> bool {
        self.threshold_area.is_some()
    }
}

fn min_scalar_curvature(metric: &RadialMetric, hi: f64) -> Result<(f64, f64)> {
    let lo = metric.boundary_r();
    let n = ((hi - lo) / CURVATURE_STEP).ceil() as usize;
    let mut best = (f64::INFINITY, lo);
    for i in 0..=n {
        let r = (lo + i as f64 * CURVATURE_STEP).min(hi);
        let c = curvature(metric, r)?;
        if c.scalar_r < best.0 {
            best = (c.scalar_r, r);
        }
    }
    Ok(best)
}

pub fn counterexample_report(metric: &RadialMetric) -> Result<CounterexampleReport> {
    let hi = RENORM_WINDOW[1];
    let (min_scalar_r, min_scalar_r_at) = min_scalar_curvature(metric, hi)?;
    let rv = renormalized_volume(metric)?;
    let phi_b = metric.warp(metric.boundary_r())?.phi;
    let boundary_area = 4.0 * PI * phi_b * phi_b;
    let drift_star = rv.value + 0.5 * boundary_area;

    let grid = linear_grid(metric.boundary_r() + COMPARISON_STEP, hi, COMPARISON_STEP);
    let curve = profile_curve(metric, &grid)?;
    let comparison = curve
        .samples
        .iter()
        .filter(|s| s.area > boundary_area)
        .map(|s| {
            // both volumes relative to half their own sphere area
            let far = s.area - boundary_area;
            let gap = s.volume_excess - hyperbolic_reference_excess(far)? + 0.5 * boundary_area;
            Ok(CompetitorSample { r: s.r, area: s.area, gap })
        })
        .collect::<Result<Vec<_>>>()?;

    let losing_tail = comparison.iter().rev().take_while(|c| c.gap < -COMPETITOR_MARGIN).count();
    let threshold_area =
        (losing_tail > 0).then(|| comparison[comparison.len() - losing_tail].area);
    let verdict = if threshold_area.is_some() { VERDICT_BEATEN } else { VERDICT_SURVIVE };

    Ok(CounterexampleReport {
        metric_id: metric.kind(),
        min_scalar_r,
        min_scalar_r_at,
        renorm_volume: rv.value,
        boundary_area,
        drift_star,
        threshold_area,
        verdict: verdict.to_string(),
        comparison,
    })
}

/// Report for the shipped family.
pub fn counterexample_demo() -> Result<CounterexampleReport> {
    counterexample_report(&shipped_metric()?)
}
