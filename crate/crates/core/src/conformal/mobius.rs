//! Conformal diffeomorphisms of the unit sphere as `SL(2,C)` matrices.
//!
//! A point `x` corresponds to the spinor `(z₁, z₂)` with stereographic
//! coordinate `ζ = z₁/z₂`, where `ζ = 0` is the north pole `(0, 0, 1)`. The
//! matrix acts linearly on spinors, and for `det M = 1`
//!
//! ```text
//! e^{ρ(x)} = (|z₁|² + |z₂|²) / (|a z₁ + b z₂|² + |c z₁ + d z₂|²)
//! ```
//!
//! is the conformal factor, `ψ*g = e^{2ρ} g`.

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Rotation about `axis` by `angle`, then dilation by `t` along `center`.
/// The dilation is `ζ ↦ tζ` in the stereographic chart centered at `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusParams {
    pub axis: [f64; 3],
    pub angle: f64,
    pub dilation: f64,
    pub center: [f64; 3],
}

impl MobiusParams {
    pub fn identity() -> Self {
        Self { axis: [0.0, 0.0, 1.0], angle: 0.0, dilation: 1.0, center: [0.0, 0.0, 1.0] }
    }

    pub fn dilation(t: f64, center: [f64; 3]) -> Self {
        Self { dilation: t, center, ..Self::identity() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    m: [[C; 2]; 2],
}

fn normalize(v: [f64; 3], what: &str) -> Result<[f64; 3]> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !(n > 0.0) || !n.is_finite() {
        return Err(LabError::InvalidArgument(format!("{what} must be a non-zero finite vector")));
    }
    Ok([v[0] / n, v[1] / n, v[2] / n])
}

/// Spinor of a unit vector, choosing the chart that avoids the pole it misses.
fn spinor(x: [f64; 3]) -> [C; 2] {
    if x[2] >= 0.0 {
        [C::new(x[0], x[1]), C::new(1.0 + x[2], 0.0)]
    } else {
        [C::new(1.0 - x[2], 0.0), C::new(x[0], -x[1])]
    }
}

fn point(z: [C; 2]) -> [f64; 3] {
    let n = z[0].norm_sqr() + z[1].norm_sqr();
    let p = z[0] * z[1].conj();
    [2.0 * p.re / n, 2.0 * p.im / n, (z[1].norm_sqr() - z[0].norm_sqr()) / n]
}

impl Mobius {
    pub fn identity() -> Self {
        let (o, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0));
        Self { m: [[i, o], [o, i]] }
    }

    pub fn from_params(p: &MobiusParams) -> Result<Self> {
        if !(p.dilation > 0.0) || !p.dilation.is_finite() {
            return Err(LabError::InvalidArgument(format!("dilation must be positive, got {}", p.dilation)));
        }
        if !p.angle.is_finite() {
            return Err(LabError::InvalidArgument("rotation angle must be finite".into()));
        }
        let rot = Self::rotation(normalize(p.axis, "rotation axis")?, p.angle);
        let dil = Self::dilation_at(normalize(p.center, "dilation center")?, p.dilation);
        Ok(rot.compose(&dil))
    }

    /// `cos(α/2) − i sin(α/2) n·σ`
    pub fn rotation(n: [f64; 3], angle: f64) -> Self {
        let (s, c) = (0.5 * angle).sin_cos();
        Self {
            m: [
                [C::new(c, -s * n[2]), C::new(-s * n[1], -s * n[0])],
                [C::new(s * n[1], -s * n[0]), C::new(c, s * n[2])],
            ],
        }
    }

    /// `R diag(√t, 1/√t) R⁻¹` where the unitary `R` carries the north pole to `center`.
    pub fn dilation_at(center: [f64; 3], t: f64) -> Self {
        let z = spinor(center);
        let n = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
        let (a, b) = (z[0] / n, z[1] / n);
        let r = Self { m: [[b.conj(), a], [-a.conj(), b]] };
        let r_inv = Self { m: [[b, -a], [a.conj(), b.conj()]] };
        let st = t.sqrt();
        let d = Self { m: [[C::new(st, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(1.0 / st, 0.0)]] };
        r.compose(&d).compose(&r_inv)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        let (a, b) = (&self.m, &other.m);
        let mut m = [[C::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m }
    }

    fn act(&self, z: [C; 2]) -> [C; 2] {
        [self.m[0][0] * z[0] + self.m[0][1] * z[1], self.m[1][0] * z[0] + self.m[1][1] * z[1]]
    }

    pub fn apply(&self, x: [f64; 3]) -> [f64; 3] {
        point(self.act(spinor(x)))
    }

    /// `ρ(x)` with `ψ*g = e^{2ρ} g`.
    pub fn conformal_factor(&self, x: [f64; 3]) -> f64 {
        let z = spinor(x);
        let w = self.act(z);
        ((z[0].norm_sqr() + z[1].norm_sqr()) / (w[0].norm_sqr() + w[1].norm_sqr())).ln()
    }
}
