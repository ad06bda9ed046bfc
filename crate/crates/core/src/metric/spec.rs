//! Metric specification documents (JSON).
//!
//! ```json
//! {"kind": "sads", "mass": 1.0}
//! {"kind": "perturbed", "mass": 1.0, "perturbation": [{"amplitude": 20.0, "rate": 5.0}]}
//! {"kind": "glued", "mass": 1.0, "gluing": {"interval": [2.5, 4.5], "knots": [[3.5, 16.0]]}}
//! ```
//!
//! `boundary` is optional. It is reported on output and checked on input.

use serde::{Deserialize, Serialize};

use super::{
    make_glued, make_hyperbolic, make_perturbed, make_sads, GluingSpec, PerturbationTerm,
    RadialMetric,
};
use crate::error::{LabError, Result};

const BOUNDARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingPayload {
    pub interval: [f64; 2],
    #[serde(default)]
    pub knots: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MetricSpec {
    Hyperbolic {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary: Option<f64>,
    },
    Sads {
        mass: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary: Option<f64>,
    },
    Perturbed {
        mass: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary: Option<f64>,
        #[serde(default)]
        perturbation: Vec<PerturbationTerm>,
    },
    Glued {
        mass: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary: Option<f64>,
        gluing: GluingPayload,
    },
}

impl MetricSpec {
    pub fn build(&self) -> Result<RadialMetric> {
        let (metric, boundary) = match self {
            MetricSpec::Hyperbolic { boundary } => (make_hyperbolic(), *boundary),
            MetricSpec::Sads { mass, boundary } => (make_sads(*mass)?, *boundary),
            MetricSpec::Perturbed { mass, boundary, perturbation } => {
                (make_perturbed(*mass, perturbation.clone())?, *boundary)
            }
            MetricSpec::Glued { mass, boundary, gluing } => (
                make_glued(GluingSpec {
                    exterior_mass: *mass,
                    glue_interval: gluing.interval,
                    interior_profile: gluing.knots.clone(),
                    boundary_r: None,
                })?,
                *boundary,
            ),
        };
        if let Some(b) = boundary {
            if (b - metric.boundary_r()).abs() > BOUNDARY_TOLERANCE {
                return Err(LabError::InvalidArgument(format!(
                    "boundary {b} disagrees with the computed boundary radius {}",
                    metric.boundary_r()
                )));
            }
        }
        Ok(metric)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LabError::InvalidArgument(format!("metric spec: {e}")))
    }
}
