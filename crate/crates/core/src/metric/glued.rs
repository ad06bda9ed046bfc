//! Cubic-spline gluing of an interior warp profile into exact SAdS.
//!
//! On `[r_a, r_b]` the warp is a cubic spline through the user knots. Outside
//! that interval it is SAdS of the exterior mass. Values, first and second
//! derivatives are matched at both ends, which needs two more degrees of
//! freedom than the clamped spline has. Two auxiliary nodes with free values
//! provide them.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::sads::SadsChart;
use super::WarpSample;
use crate::error::{LabError, Result};

pub const JOIN_TOLERANCE: f64 = 1e-8;
const POSITIVITY_SAMPLES: usize = 4000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingSpec {
    pub exterior_mass: f64,
    pub glue_interval: [f64; 2],
    /// `(r, φ)` knots strictly inside the glue interval.
    pub interior_profile: Vec<[f64; 2]>,
    /// When present, must agree with the SAdS boundary of `exterior_mass`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GluedWarp {
    chart: SadsChart,
    spec: GluingSpec,
    nodes: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl GluedWarp {
    pub fn new(spec: GluingSpec) -> Result<Self> {
        let chart = SadsChart::new(spec.exterior_mass)?;
        let [ra, rb] = spec.glue_interval;
        if !(ra.is_finite() && rb.is_finite()) || ra >= rb {
            return Err(LabError::InvalidGluing(format!("degenerate glue interval [{ra}, {rb}]")));
        }
        if ra <= chart.boundary_r() {
            return Err(LabError::InvalidGluing(format!(
                "glue interval must start above the boundary radius {}",
                chart.boundary_r()
            )));
        }
        if let Some(b) = spec.boundary_r {
            if (b - chart.boundary_r()).abs() > 1e-9 {
                return Err(LabError::InvalidGluing(format!(
                    "boundary_r {b} disagrees with the exterior boundary {}",
                    chart.boundary_r()
                )));
            }
        }
        let mut prev = ra;
        for &[r, phi] in &spec.interior_profile {
            if !(r > prev && r < rb) {
                return Err(LabError::InvalidGluing(format!(
                    "knot r = {r} is not strictly increasing inside ({ra}, {rb})"
                )));
            }
            if !(phi > 0.0) {
                return Err(LabError::NonPositiveWarp(r));
            }
            prev = r;
        }

        let left = chart.sample(ra)?;
        let right = chart.sample(rb)?;

        // node layout: r_a, aux, knots..., aux, r_b
        let knots = &spec.interior_profile;
        let (aux_l, aux_r) = match (knots.first(), knots.last()) {
            (Some(first), Some(last)) => (0.5 * (ra + first[0]), 0.5 * (last[0] + rb)),
            _ => (ra + (rb - ra) / 3.0, ra + 2.0 * (rb - ra) / 3.0),
        };
        let mut nodes = vec![ra, aux_l];
        let mut values = vec![left.phi, f64::NAN];
        for &[r, phi] in knots {
            nodes.push(r);
            values.push(phi);
        }
        nodes.push(aux_r);
        values.push(f64::NAN);
        nodes.push(rb);
        values.push(right.phi);

        let n = nodes.len() - 1;
        let aux_idx = [1, n - 1];
        // unknowns: M_0..M_n, then the two auxiliary values
        let dim = n + 3;
        let mut a = DMatrix::<f64>::zeros(dim, dim);
        let mut rhs = DVector::<f64>::zeros(dim);
        let h: Vec<f64> = nodes.windows(2).map(|w| w[1] - w[0]).collect();

        // adds `coef * y_i` to row `row`, moving known values to the rhs
        let add_value = |a: &mut DMatrix<f64>, rhs: &mut DVector<f64>, row: usize, i: usize, coef: f64| {
            if let Some(k) = aux_idx.iter().position(|&j| j == i) {
                a[(row, n + 1 + k)] += coef;
            } else {
                rhs[row] -= coef * values[i];
            }
        };

        let mut row = 0;
        a[(row, 0)] = 1.0;
        rhs[row] = left.ddphi;
        row += 1;
        a[(row, n)] = 1.0;
        rhs[row] = right.ddphi;
        row += 1;
        // S'(r_a) = (y1 − y0)/h0 − h0 (2 M0 + M1)/6
        a[(row, 0)] = -h[0] / 3.0;
        a[(row, 1)] = -h[0] / 6.0;
        rhs[row] = left.dphi;
        add_value(&mut a, &mut rhs, row, 1, 1.0 / h[0]);
        add_value(&mut a, &mut rhs, row, 0, -1.0 / h[0]);
        row += 1;
        // S'(r_b) = (y_n − y_{n−1})/h + h (M_{n−1} + 2 M_n)/6
        let hl = h[n - 1];
        a[(row, n - 1)] = hl / 6.0;
        a[(row, n)] = hl / 3.0;
        rhs[row] = right.dphi;
        add_value(&mut a, &mut rhs, row, n, 1.0 / hl);
        add_value(&mut a, &mut rhs, row, n - 1, -1.0 / hl);
        row += 1;
        for i in 1..n {
            a[(row, i - 1)] = h[i - 1] / 6.0;
            a[(row, i)] = (h[i - 1] + h[i]) / 3.0;
            a[(row, i + 1)] = h[i] / 6.0;
            add_value(&mut a, &mut rhs, row, i + 1, -1.0 / h[i]);
            add_value(&mut a, &mut rhs, row, i, 1.0 / h[i] + 1.0 / h[i - 1]);
            add_value(&mut a, &mut rhs, row, i - 1, -1.0 / h[i - 1]);
            row += 1;
        }
        debug_assert_eq!(row, dim);

        let sol = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| LabError::InvalidGluing("singular spline system".into()))?;
        let second: Vec<f64> = (0..=n).map(|i| sol[i]).collect();
        values[aux_idx[0]] = sol[n + 1];
        values[aux_idx[1]] = sol[n + 2];

        let warp = Self { chart, spec, nodes, values, second };
        warp.verify_joins(&left, &right)?;
        warp.verify_positive()?;
        Ok(warp)
    }

    pub fn spec(&self) -> &GluingSpec {
        &self.spec
    }

    pub fn chart(&self) -> &SadsChart {
        &self.chart
    }

    pub fn interval(&self) -> [f64; 2] {
        self.spec.glue_interval
    }

    /// Spline value and first two derivatives; `r` must lie in the glue interval.
    fn spline(&self, r: f64) -> (f64, f64, f64) {
        let n = self.nodes.len() - 1;
        let i = match self.nodes.partition_point(|&x| x <= r) {
            0 => 0,
            k => (k - 1).min(n - 1),
        };
        let (x0, x1) = (self.nodes[i], self.nodes[i + 1]);
        let h = x1 - x0;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let a = x1 - r;
        let b = r - x0;
        let value = m0 * a.powi(3) / (6.0 * h)
            + m1 * b.powi(3) / (6.0 * h)
            + (y0 / h - m0 * h / 6.0) * a
            + (y1 / h - m1 * h / 6.0) * b;
        let d1 = -m0 * a * a / (2.0 * h) + m1 * b * b / (2.0 * h) - (y0 / h - m0 * h / 6.0)
            + (y1 / h - m1 * h / 6.0);
        let d2 = (m0 * a + m1 * b) / h;
        (value, d1, d2)
    }

    fn verify_joins(&self, left: &WarpSample, right: &WarpSample) -> Result<()> {
        let [ra, rb] = self.spec.glue_interval;
        for (r, exact) in [(ra, left), (rb, right)] {
            let (v, d1, d2) = self.spline(r);
            let scale = exact.phi.abs().max(1.0);
            let mismatch = [(v - exact.phi), (d1 - exact.dphi), (d2 - exact.ddphi)]
                .iter()
                .map(|x| x.abs() / scale)
                .fold(0.0, f64::max);
            if mismatch > JOIN_TOLERANCE {
                return Err(LabError::InvalidGluing(format!(
                    "C² mismatch {mismatch:e} at r = {r}"
                )));
            }
        }
        Ok(())
    }

    fn verify_positive(&self) -> Result<()> {
        let [ra, rb] = self.spec.glue_interval;
        for k in 0..=POSITIVITY_SAMPLES {
            let r = ra + (rb - ra) * k as f64 / POSITIVITY_SAMPLES as f64;
            if !(self.spline(r).0 > 0.0) {
                return Err(LabError::NonPositiveWarp(r));
            }
        }
        Ok(())
    }

    pub fn sample(&self, r: f64) -> Result<WarpSample> {
        let [ra, rb] = self.spec.glue_interval;
        if r < ra || r > rb {
            return self.chart.sample(r);
        }
        let (phi, dphi, ddphi) = self.spline(r);
        Ok(WarpSample::from_derivatives(r, phi, dphi, ddphi))
    }
}
