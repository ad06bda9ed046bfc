//! Linear least-squares fits of sampled data against small asymptotic bases.
//!
//! Columns are scaled to unit norm before a Householder QR solve; the
//! condition estimate is the singular-value ratio of the scaled design.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

pub const MAX_CONDITION: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BasisFn {
    Constant,
    /// `x`
    Linear,
    /// `e^{−rate·x}`
    Exp { rate: f64 },
    /// `x^exponent`
    Power { exponent: f64 },
    /// `log x`
    Log,
    /// `1/sinh x`
    InvSinh,
}

impl BasisFn {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            BasisFn::Constant => 1.0,
            BasisFn::Linear => x,
            BasisFn::Exp { rate } => (-rate * x).exp(),
            BasisFn::Power { exponent } => x.powf(exponent),
            BasisFn::Log => x.ln(),
            BasisFn::InvSinh => 1.0 / x.sinh(),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            BasisFn::Constant => "1".into(),
            BasisFn::Linear => "x".into(),
            BasisFn::Exp { rate } => format!("exp(-{rate}x)"),
            BasisFn::Power { exponent } => format!("x^{exponent}"),
            BasisFn::Log => "log x".into(),
            BasisFn::InvSinh => "1/sinh x".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionFit {
    pub basis: Vec<BasisFn>,
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    /// Max-norm residual over the window.
    pub residual_norm: f64,
    pub condition_estimate: f64,
    pub window: [f64; 2],
    pub samples: usize,
}

impl ExpansionFit {
    pub fn evaluate(&self, x: f64) -> f64 {
        self.basis.iter().zip(&self.coefficients).map(|(b, c)| c * b.eval(x)).sum()
    }

    /// Coefficient of the first basis function equal to `basis`.
    pub fn coefficient(&self, basis: &BasisFn) -> Option<f64> {
        self.basis.iter().position(|b| b == basis).map(|i| self.coefficients[i])
    }
}

pub fn fit_expansion(samples: &[(f64, f64)], basis: &[BasisFn]) -> Result<ExpansionFit> {
    let (n, k) = (samples.len(), basis.len());
    if k == 0 {
        return Err(LabError::InvalidArgument("empty basis".into()));
    }
    if n < k + 2 {
        return Err(LabError::InvalidArgument(format!(
            "need at least {} samples for {k} basis functions, got {n}",
            k + 2
        )));
    }
    let mut design = DMatrix::<f64>::zeros(n, k);
    let mut rhs = DVector::<f64>::zeros(n);
    for (i, &(x, y)) in samples.iter().enumerate() {
        if !y.is_finite() {
            return Err(LabError::InvalidArgument(format!("non-finite sample value at x = {x}")));
        }
        rhs[i] = y;
        for (j, b) in basis.iter().enumerate() {
            let v = b.eval(x);
            if !v.is_finite() {
                return Err(LabError::InvalidArgument(format!(
                    "basis function {} is not finite at x = {x}",
                    b.name()
                )));
            }
            design[(i, j)] = v;
        }
    }

    let mut scale = Vec::with_capacity(k);
    for j in 0..k {
        let norm = design.column(j).norm();
        if norm == 0.0 {
            return Err(LabError::RankDeficient(f64::INFINITY));
        }
        scale.push(norm);
        design.column_mut(j).scale_mut(1.0 / norm);
    }

    let sv = design.clone().singular_values();
    let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &s| (hi.max(s), lo.min(s)));
    let condition_estimate = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition_estimate <= MAX_CONDITION) {
        return Err(LabError::RankDeficient(condition_estimate));
    }

    let qr = design.clone().qr();
    let qty = qr.q().transpose() * &rhs;
    let scaled = qr
        .r()
        .solve_upper_triangular(&qty)
        .ok_or(LabError::RankDeficient(condition_estimate))?;
    let coefficients: Vec<f64> = (0..k).map(|j| scaled[j] / scale[j]).collect();

    let residual = &rhs - &design * &scaled;
    let residual_norm = residual.amax();
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| (lo.min(x), hi.max(x)));

    Ok(ExpansionFit {
        basis: basis.to_vec(),
        names: basis.iter().map(BasisFn::name).collect(),
        coefficients,
        residual_norm,
        condition_estimate,
        window: [lo, hi],
        samples: n,
    })
}

/// Least-squares slope of `log y` against `x`.
pub fn decay_rate(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(LabError::UnsortedGrid);
    }
    let logs = samples
        .iter()
        .map(|&(x, y)| {
            if y > 0.0 {
                Ok((x, y.ln()))
            } else {
                Err(LabError::InvalidArgument(format!("decay_rate needs y > 0, got {y} at x = {x}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_expansion(&logs, &[BasisFn::Constant, BasisFn::Linear])?;
    Ok(fit.coefficients[1])
}
