//! Real orthonormal spherical harmonics
//!
//! ```text
//! Y_ℓ0 = P̄_ℓ0(cos θ),  Y_ℓm = √2 P̄_ℓm(cos θ) cos mφ,  Y_ℓ,−m = √2 P̄_ℓm(cos θ) sin mφ
//! ```
//!
//! with `P̄_ℓm` the associated Legendre functions normalized so that
//! `2π ∫ P̄_ℓm² dx = 1`. Coefficients are stored at index `ℓ² + ℓ + m`.

use std::f64::consts::{PI, SQRT_2};

use super::grid::SphereGrid;

pub fn coeff_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

pub fn coeff_len(l_max: usize) -> usize {
    (l_max + 1) * (l_max + 1)
}

fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// `P̄_ℓm(x)` for `0 ≤ m ≤ ℓ ≤ l_max`, stored at `ℓ(ℓ+1)/2 + m`.
pub fn normalized_legendre(l_max: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; (l_max + 1) * (l_max + 2) / 2];
    let s = (1.0 - x * x).max(0.0).sqrt();
    p[0] = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=l_max {
        if m > 0 {
            let mf = m as f64;
            p[tri(m, m)] = ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * p[tri(m - 1, m - 1)];
        }
        if m < l_max {
            p[tri(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * x * p[tri(m, m)];
        }
        for l in m + 2..=l_max {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            p[tri(l, m)] = a * (x * p[tri(l - 1, m)] - b * p[tri(l - 2, m)]);
        }
    }
    p
}

/// `Y_ℓm(θ, φ)` for a single index.
pub fn real_harmonic(l: usize, m: i64, cos_theta: f64, phi: f64) -> f64 {
    let p = normalized_legendre(l, cos_theta);
    let mu = m.unsigned_abs() as usize;
    let base = p[tri(l, mu)];
    match m.signum() {
        0 => base,
        1 => SQRT_2 * base * (mu as f64 * phi).cos(),
        _ => SQRT_2 * base * (mu as f64 * phi).sin(),
    }
}

/// Evaluates `Σ c_ℓm Y_ℓm` at a unit vector.
pub fn synthesize_at(coeffs: &[f64], l_max: usize, x: [f64; 3]) -> f64 {
    let p = normalized_legendre(l_max, x[2].clamp(-1.0, 1.0));
    let phi = x[1].atan2(x[0]);
    let mut total = 0.0;
    for m in 0..=l_max {
        let (s, c) = if m == 0 { (0.0, 1.0) } else { (m as f64 * phi).sin_cos() };
        for l in m..=l_max {
            let pl = p[tri(l, m)];
            if m == 0 {
                total += coeffs[coeff_index(l, 0)] * pl;
            } else {
                let mi = m as i64;
                total += SQRT_2 * pl * (coeffs[coeff_index(l, mi)] * c + coeffs[coeff_index(l, -mi)] * s);
            }
        }
    }
    total
}

/// Harmonic coefficients up to `l_max ≤ n_theta − 1` by exact quadrature:
/// ring Fourier sums first, then a Legendre sum over rings.
pub fn analyze(grid: &SphereGrid, values: &[f64], l_max: usize) -> Vec<f64> {
    let (nt, np) = (grid.n_theta(), grid.n_phi());
    let dphi = 2.0 * PI / np as f64;
    let mut coeffs = vec![0.0; coeff_len(l_max)];
    let trig: Vec<Vec<(f64, f64)>> =
        (0..=l_max).map(|m| (0..np).map(|j| (m as f64 * grid.phi(j)).sin_cos()).collect()).collect();
    for i in 0..nt {
        let ring = &values[i * np..(i + 1) * np];
        let p = normalized_legendre(l_max, grid.cos_theta()[i]);
        let w = grid.ring_weights()[i] * dphi;
        for m in 0..=l_max {
            let (mut fc, mut fs) = (0.0, 0.0);
            for (v, &(s, c)) in ring.iter().zip(&trig[m]) {
                fc += v * c;
                fs += v * s;
            }
            for l in m..=l_max {
                let pl = p[tri(l, m)] * w;
                if m == 0 {
                    coeffs[coeff_index(l, 0)] += pl * fc;
                } else {
                    let mi = m as i64;
                    coeffs[coeff_index(l, mi)] += SQRT_2 * pl * fc;
                    coeffs[coeff_index(l, -mi)] += SQRT_2 * pl * fs;
                }
            }
        }
    }
    coeffs
}

/// Samples `Σ c_ℓm Y_ℓm` on every grid node.
pub fn synthesize(grid: &SphereGrid, coeffs: &[f64], l_max: usize) -> Vec<f64> {
    let np = grid.n_phi();
    let mut out = vec![0.0; grid.len()];
    for i in 0..grid.n_theta() {
        let p = normalized_legendre(l_max, grid.cos_theta()[i]);
        for j in 0..np {
            let phi = grid.phi(j);
            let mut total = 0.0;
            for m in 0..=l_max {
                let (s, c) = (m as f64 * phi).sin_cos();
                for l in m..=l_max {
                    let pl = p[tri(l, m)];
                    if m == 0 {
                        total += coeffs[coeff_index(l, 0)] * pl;
                    } else {
                        let mi = m as i64;
                        total += SQRT_2 * pl * (coeffs[coeff_index(l, mi)] * c + coeffs[coeff_index(l, -mi)] * s);
                    }
                }
            }
            out[i * np + j] = total;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_closed_forms() {
        let (x, phi) = (0.3f64, 1.1f64);
        let st = (1.0 - x * x).sqrt();
        assert!((real_harmonic(0, 0, x, phi) - 0.5 / PI.sqrt()).abs() < 1e-15);
        assert!((real_harmonic(1, 0, x, phi) - (3.0 / (4.0 * PI)).sqrt() * x).abs() < 1e-15);
        let y11 = (3.0 / (4.0 * PI)).sqrt() * st * phi.cos();
        assert!((real_harmonic(1, 1, x, phi) - y11).abs() < 1e-15);
        let y2m2 = 0.25 * (15.0 / PI).sqrt() * st * st * (2.0 * phi).sin();
        assert!((real_harmonic(2, -2, x, phi) - y2m2).abs() < 1e-14);
    }

    #[test]
    fn analysis_inverts_synthesis() {
        let grid = SphereGrid::new(12, 24).unwrap();
        let l_max = 11;
        let coeffs: Vec<f64> = (0..coeff_len(l_max)).map(|k| ((k * 7 % 13) as f64 - 6.0) / 5.0).collect();
        let values = synthesize(&grid, &coeffs, l_max);
        let back = analyze(&grid, &values, l_max);
        for (a, b) in coeffs.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
        let x = [0.48, -0.6, 0.64];
        let direct: f64 = (0..=l_max)
            .flat_map(|l| (-(l as i64)..=l as i64).map(move |m| (l, m)))
            .map(|(l, m)| coeffs[coeff_index(l, m)] * real_harmonic(l, m, x[2], x[1].atan2(x[0])))
            .sum();
        assert!((synthesize_at(&coeffs, l_max, x) - direct).abs() < 1e-12);
    }
}
