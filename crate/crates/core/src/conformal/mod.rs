//! Conformal toolkit on the unit sphere: the functional
//! `S(u) = ∫|∇u|² − 2∫u`, Möbius pullbacks `v = u∘ψ − ρ_ψ` (so that
//! `ψ*(e^{−2u} g) = e^{−2v} g`), and the ball-model radial map.

mod grid;
mod harmonics;
mod mobius;

pub use grid::{gauss_legendre, SphereGrid};
pub use harmonics::{
    analyze, coeff_index, coeff_len, normalized_legendre, real_harmonic, synthesize, synthesize_at,
};
pub use mobius::{Mobius, MobiusParams};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Relative spectral content tolerated in the top eighth of the resolved
/// degrees after a pullback.
pub const PULLBACK_TAIL_TOLERANCE: f64 = 1e-8;

/// Values on the nodes of a [`SphereGrid`] plus the degree of the expansion
/// that generated them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereField {
    pub values: Vec<f64>,
    pub band_limit: usize,
}

impl SphereField {
    pub fn constant(grid: &SphereGrid, c: f64) -> Self {
        Self { values: vec![c; grid.len()], band_limit: 0 }
    }

    pub fn from_coefficients(grid: &SphereGrid, coeffs: &[f64], l_max: usize) -> Result<Self> {
        if coeffs.len() != coeff_len(l_max) {
            return Err(LabError::InvalidArgument(format!(
                "expected {} coefficients for degree {l_max}, got {}",
                coeff_len(l_max),
                coeffs.len()
            )));
        }
        check_band(grid, l_max)?;
        Ok(Self { values: synthesize(grid, coeffs, l_max), band_limit: l_max })
    }

    fn check_shape(&self, grid: &SphereGrid) -> Result<()> {
        if self.values.len() != grid.len() {
            return Err(LabError::InvalidArgument(format!(
                "field has {} values, grid has {} nodes",
                self.values.len(),
                grid.len()
            )));
        }
        check_band(grid, self.band_limit)
    }
}

fn check_band(grid: &SphereGrid, band_limit: usize) -> Result<()> {
    if band_limit > grid.capacity() {
        return Err(LabError::Aliasing { band_limit, capacity: grid.capacity() });
    }
    Ok(())
}

/// `S(u) = Σ ℓ(ℓ+1) c_ℓm² − 2∫u` with coefficients up to the quadrature's
/// exactness degree `n_theta − 1`.
pub fn s_functional(u: &SphereField, grid: &SphereGrid) -> Result<f64> {
    u.check_shape(grid)?;
    let l_max = grid.max_degree();
    let coeffs = analyze(grid, &u.values, l_max);
    let mut energy = 0.0;
    for l in 1..=l_max {
        let ll = (l * (l + 1)) as f64;
        let li = l as i64;
        energy += ll * (-li..=li).map(|m| coeffs[coeff_index(l, m)].powi(2)).sum::<f64>();
    }
    Ok(energy - 2.0 * grid.integrate(&u.values))
}

/// `ρ_ψ` at a point (normalized to the unit sphere).
pub fn mobius_conformal_factor(params: &MobiusParams, point: [f64; 3]) -> Result<f64> {
    let psi = Mobius::from_params(params)?;
    let n = (point[0] * point[0] + point[1] * point[1] + point[2] * point[2]).sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Err(LabError::InvalidArgument("point must be a non-zero finite vector".into()));
    }
    Ok(psi.conformal_factor([point[0] / n, point[1] / n, point[2] / n]))
}

/// `v = u∘ψ − ρ_ψ` on the grid. `u` is read through its harmonic expansion,
/// which is exact because `u` respects the grid capacity. The result is not
/// band-limited, but its spectrum decays geometrically; it is flagged when the
/// degrees above `max_degree − n_theta/8` carry more than
/// [`PULLBACK_TAIL_TOLERANCE`] of its norm, since that content would alias
/// into the quadrature.
pub fn mobius_pullback(u: &SphereField, params: &MobiusParams, grid: &SphereGrid) -> Result<SphereField> {
    u.check_shape(grid)?;
    let psi = Mobius::from_params(params)?;
    let l_u = u.band_limit;
    let coeffs = analyze(grid, &u.values, l_u);
    let values: Vec<f64> = grid
        .points()
        .par_iter()
        .map(|&x| synthesize_at(&coeffs, l_u, psi.apply(x)) - psi.conformal_factor(x))
        .collect();

    let l_max = grid.max_degree();
    let spectrum = analyze(grid, &values, l_max);
    let cutoff = l_max - grid.n_theta() / 8;
    let (mut tail, mut total) = (0.0, 0.0);
    for l in 0..=l_max {
        let li = l as i64;
        let e: f64 = (-li..=li).map(|m| spectrum[coeff_index(l, m)].powi(2)).sum();
        total += e;
        if l > cutoff {
            tail += e;
        }
    }
    let tail = tail.sqrt() / total.sqrt().max(1.0);
    if tail > PULLBACK_TAIL_TOLERANCE {
        return Err(LabError::SpectralTail { tail });
    }
    Ok(SphereField { values, band_limit: grid.capacity() })
}

/// Field with independent uniform coefficients in `[−1, 1]/(1 + ℓ)` up to `band_limit`.
pub fn random_field<R: Rng>(grid: &SphereGrid, band_limit: usize, rng: &mut R) -> Result<SphereField> {
    check_band(grid, band_limit)?;
    let coeffs: Vec<f64> = (0..=band_limit)
        .flat_map(|l| std::iter::repeat_n(l, 2 * l + 1))
        .map(|l| rng.gen_range(-1.0..=1.0) / (1.0 + l as f64))
        .collect();
    SphereField::from_coefficients(grid, &coeffs, band_limit)
}

fn random_unit<R: Rng>(rng: &mut R) -> [f64; 3] {
    // uniform on the sphere via z and longitude
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    [s * phi.cos(), s * phi.sin(), z]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceTrial {
    pub trial: usize,
    pub params: MobiusParams,
    pub s_before: f64,
    pub s_after: f64,
}

impl InvarianceTrial {
    pub fn defect(&self) -> f64 {
        (self.s_before - self.s_after).abs()
    }
}

/// Seeded invariance experiment: random fields of degree `band_limit` and
/// random `ψ` with dilation in `[t_lo, t_hi]`. Parameters are drawn
/// sequentially from the seed; trials then run in parallel.
pub fn invariance_trials(
    grid: &SphereGrid,
    seed: u64,
    trials: usize,
    band_limit: usize,
    dilation: [f64; 2],
) -> Result<Vec<InvarianceTrial>> {
    let [t_lo, t_hi] = dilation;
    if !(t_lo > 0.0) || !(t_hi >= t_lo) {
        return Err(LabError::InvalidArgument(format!("bad dilation range [{t_lo}, {t_hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs = (0..trials)
        .map(|_| {
            let u = random_field(grid, band_limit, &mut rng)?;
            let params = MobiusParams {
                axis: random_unit(&mut rng),
                angle: rng.gen_range(0.0..std::f64::consts::TAU),
                dilation: t_lo * (t_hi / t_lo).powf(rng.gen_range(0.0..=1.0)),
                center: random_unit(&mut rng),
            };
            Ok((u, params))
        })
        .collect::<Result<Vec<_>>>()?;
    inputs
        .par_iter()
        .enumerate()
        .map(|(trial, (u, params))| {
            let v = mobius_pullback(u, params, grid)?;
            Ok(InvarianceTrial {
                trial,
                params: *params,
                s_before: s_functional(u, grid)?,
                s_after: s_functional(&v, grid)?,
            })
        })
        .collect()
}

fn check_unit_interval(s: f64) -> Result<()> {
    if !(s > 0.0 && s < 1.0) {
        return Err(LabError::InvalidArgument(format!("s must lie in (0, 1), got {s}")));
    }
    Ok(())
}

/// Hyperbolic distance from the origin of the ball-model point at Euclidean
/// radius `s`, `log((1 + s)/(1 − s))`.
pub fn ball_model_r(s: f64) -> Result<f64> {
    check_unit_interval(s)?;
    Ok(s.ln_1p() - (-s).ln_1p())
}

/// `(1 + cosh r)^{−2} (dr/ds)² − 1`, which vanishes identically.
pub fn disk_plane_residual(s: f64) -> Result<f64> {
    let r = ball_model_r(s)?;
    let drds = 2.0 / ((1.0 - s) * (1.0 + s));
    Ok((drds / (1.0 + r.cosh())).powi(2) - 1.0)
}
