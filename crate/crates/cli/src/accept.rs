//! The thirteen acceptance criteria, each at its stated tolerance.

use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use sadslab::conformal::{disk_plane_residual, invariance_trials, SphereGrid};
use sadslab::counterexample::{counterexample_demo, counterexample_report, VERDICT_BEATEN, VERDICT_SURVIVE};
use sadslab::fit::{fit_expansion, BasisFn};
use sadslab::metric::{curvature, make_hyperbolic, make_sads, RadialMetric};
use sadslab::profile::{
    derivative_laws, isoballs_fit, linear_grid, profile_constant, profile_constant_fit, profile_curve,
};
use sadslab::sphere::{sphere_report, stability_spectrum};
use sadslab::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2}. {}: {} ({:.2}s)", self.id, self.title, self.detail, self.seconds)
    }
}

type Check = fn() -> Result<(bool, String)>;

pub const CRITERIA: [(u8, &str, Check); 13] = [
    (1, "Hawking constancy", hawking_constancy),
    (2, "exactness of R", scalar_exactness),
    (3, "hyperbolic profile constant", hyperbolic_constant),
    (4, "isoballs mass coefficient", isoballs_mass_coefficient),
    (5, "spectral gap", spectral_gap),
    (6, "16π law", sixteen_pi_law),
    (7, "second-derivative law", second_derivative_law),
    (8, "23π mechanism", mono23_mechanism),
    (9, "conformal invariance of S", conformal_invariance),
    (10, "disk-plane identity", disk_plane),
    (11, "counterexample mechanism", counterexample_mechanism),
    (12, "mean-curvature expansion", mean_curvature_expansion),
    (13, "CY slack closed form", cy_slack_closed_form),
];

pub fn run_criterion(id: u8) -> Option<CriterionResult> {
    let &(id, title, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
    Some(CriterionResult { id, title, passed, detail, seconds: start.elapsed().as_secs_f64() })
}

pub fn run_suite() -> Vec<CriterionResult> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.0)).collect()
}

const MASSES: [f64; 3] = [0.5, 1.0, 2.0];

fn geometric(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
}

/// Centered sphere of area radius `s` on exact SAdS.
fn radius_at(metric: &RadialMetric, s: f64) -> Result<f64> {
    metric.chart().expect("SAdS metric has a chart").r_of_s(s)
}

fn hawking_constancy() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for m in MASSES {
        let metric = make_sads(m)?;
        for s in geometric(2.0 * m + 0.1, 100.0, 120) {
            let rep = sphere_report(&metric, radius_at(&metric, s)?)?;
            worst = worst.max((rep.hawking - m).abs());
        }
    }
    Ok((worst < 1e-9, format!("max |m_H − m| = {worst:.2e} (tol 1e-9)")))
}

fn scalar_exactness() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for m in MASSES {
        let metric = make_sads(m)?;
        for r in linear_grid(metric.boundary_r() + 0.5, 12.0, 0.01) {
            worst = worst.max((curvature(&metric, r)?.scalar_r + 6.0).abs());
        }
    }
    Ok((worst < 1e-6, format!("max |R + 6| = {worst:.2e} (tol 1e-6)")))
}

fn hyperbolic_constant() -> Result<(bool, String)> {
    let c = profile_constant_fit(&make_hyperbolic())?.coefficients[0];
    let err = (c - profile_constant()).abs();
    Ok((err < 1e-3, format!("constant {c:.7} vs π(1+log π) = {:.7}, error {err:.2e} (tol 1e-3)", profile_constant())))
}

fn isoballs_mass_coefficient() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for m in [1.0, 2.0] {
        let fit = isoballs_fit(&make_sads(m)?)?;
        let c = fit.coefficient(&BasisFn::Power { exponent: -0.5 }).unwrap_or(f64::NAN);
        worst = worst.max((c / (-8.0 * PI.powf(1.5) * m) - 1.0).abs());
    }
    Ok((worst < 0.02, format!("max relative error {:.3}% (tol 2%)", 100.0 * worst)))
}

fn spectral_gap() -> Result<(bool, String)> {
    let m = 1.0;
    let metric = make_sads(m)?;
    let ratio = |r: f64| -> Result<f64> {
        let lambda1 = stability_spectrum(&metric, r, 1)?.eigenvalue(1).unwrap_or(f64::NAN);
        Ok(lambda1 * (3.0 * r).exp() / (48.0 * m))
    };
    let (q8, q10) = (ratio(8.0)?, ratio(10.0)?);
    let ok = (0.95..=1.05).contains(&q8) && (0.97..=1.03).contains(&q10);
    Ok((ok, format!("λ₁e^{{3r}}/48m = {q8:.4} at r=8 [0.95,1.05], {q10:.4} at r=10 [0.97,1.03]")))
}

fn sixteen_pi_law() -> Result<(bool, String)> {
    let metric = make_sads(1.0)?;
    let areas: Vec<f64> = geometric(1e4, 1e6, 9).collect();
    let h2 = areas
        .iter()
        .map(|&a| Ok(metric.sphere_warp(radius_at(&metric, (a / (4.0 * PI)).sqrt())?)?.h_sq_minus_four()))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for i in 0..areas.len() {
        for j in i + 1..areas.len() {
            let q = (h2[i] - h2[j]) / (1.0 / areas[i] - 1.0 / areas[j]);
            worst = worst.max((q / (16.0 * PI) - 1.0).abs());
        }
    }
    Ok((worst < 0.01, format!("max |ratio − 1| = {:.3}% over A₁, A₂ ∈ [1e4, 1e6] (tol 1%)", 100.0 * worst)))
}

fn second_derivative_law() -> Result<(bool, String)> {
    let metric = make_sads(1.0)?;
    let curve = profile_curve(&metric, &linear_grid(4.5, 6.0, 0.02))?;
    let laws = derivative_laws(&curve)?;
    let interior = &laws.second_law[2..laws.second_law.len() - 2];
    let &(a, law) = interior
        .iter()
        .min_by(|x, y| (x.0.ln() - 1e5f64.ln()).abs().total_cmp(&(y.0.ln() - 1e5f64.ln()).abs()))
        .expect("non-empty grid");
    let ratio = law / (16.0 * PI);
    Ok(((ratio - 1.0).abs() < 0.01, format!("2V''V'^-3 A²/16π = {ratio:.4} at A = {a:.3e} (tol 1%)")))
}

fn mono23_mechanism() -> Result<(bool, String)> {
    let metric = make_sads(1.0)?;
    let curve = profile_curve(&metric, &linear_grid(2.5, 12.0, 0.05))?;
    let laws = derivative_laws(&curve)?;
    let tail: Vec<f64> = laws.mono23.iter().filter(|p| p.0 >= 1e3).map(|p| p.1).collect();
    let violations = tail.windows(2).filter(|w| !(w[1] > w[0])).count();
    Ok((violations == 0 && tail.len() > 10, format!("{} samples with A ≥ 1e3, {violations} non-increasing steps", tail.len())))
}

fn conformal_invariance() -> Result<(bool, String)> {
    let grid = SphereGrid::new(64, 128)?;
    let trials = invariance_trials(&grid, 42, 100, 8, [0.5, 2.0])?;
    let worst = trials.iter().map(|t| t.defect()).fold(0.0, f64::max);
    Ok((worst < 1e-6, format!("max |S(u) − S(v)| = {worst:.2e} over {} trials (tol 1e-6)", trials.len())))
}

fn disk_plane() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for s in [0.1, 0.5, 0.9, 0.99] {
        worst = worst.max(disk_plane_residual(s)?.abs());
    }
    Ok((worst < 1e-12, format!("max residual {worst:.2e} (tol 1e-12)")))
}

fn counterexample_mechanism() -> Result<(bool, String)> {
    let glued = counterexample_demo()?;
    let control = counterexample_report(&make_sads(1.0)?)?;
    let ok = glued.min_scalar_r < -6.0
        && glued.drift_star < 0.0
        && glued.verdict == VERDICT_BEATEN
        && control.drift_star > 0.0
        && control.verdict == VERDICT_SURVIVE;
    Ok((
        ok,
        format!(
            "glued: min R = {:.4}, (∗) = {:.4}, A* = {:.3e}; SAdS control: (∗) = {:.4}",
            glued.min_scalar_r,
            glued.drift_star,
            glued.threshold_area.unwrap_or(f64::NAN),
            control.drift_star
        ),
    ))
}

fn mean_curvature_expansion() -> Result<(bool, String)> {
    let m = 1.0;
    let metric = make_sads(m)?;
    let samples = linear_grid(6.0, 12.0, 0.25)
        .into_iter()
        .map(|r| Ok((r, metric.warp(r)?.mean_curvature_excess())))
        .collect::<Result<Vec<_>>>()?;
    let basis = [BasisFn::Exp { rate: 2.0 }, BasisFn::Exp { rate: 3.0 }, BasisFn::Exp { rate: 4.0 }];
    let fit = fit_expansion(&samples, &basis)?;
    let (c2, c3) = (fit.coefficients[0], fit.coefficients[1]);
    let ok = (c2 / 4.0 - 1.0).abs() < 0.01 && (c3 / (-16.0 * m) - 1.0).abs() < 0.05;
    Ok((ok, format!("e^{{-2r}} coefficient {c2:.5} (4 ± 1%), e^{{-3r}} coefficient {c3:.4} (−16m ± 5%)")))
}

fn cy_slack_closed_form() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for m in MASSES {
        let metric = make_sads(m)?;
        for s in geometric(2.0 * m + 0.1, 100.0, 120) {
            let w = metric.sphere_warp(radius_at(&metric, s)?)?;
            let bracket = 16.0 * PI - w.h_sq_minus_four() * w.area();
            worst = worst.max((bracket / (32.0 * PI * m / s) - 1.0).abs());
        }
    }
    Ok((worst < 1e-9, format!("max relative error {worst:.2e} (tol 1e-9)")))
}
