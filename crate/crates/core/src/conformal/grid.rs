use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Gauss–Legendre nodes in `cos θ` times uniform nodes in `φ`.
///
/// Integrates every product of two harmonics of degree at most
/// `n_theta − 1` exactly, provided `n_phi ≥ 2·n_theta − 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereGrid {
    n_theta: usize,
    n_phi: usize,
    /// `cos θ` of each ring, north to south.
    cos_theta: Vec<f64>,
    /// Gauss–Legendre weight of each ring.
    ring_weights: Vec<f64>,
}

/// `(P_n(z), P_{n−1}(z))` by the three-term recurrence, `n ≥ 1`.
fn legendre_pair(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`,
/// nodes in decreasing order. Newton iteration from the Tricomi guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (pn, pm) = legendre_pair(n, z);
            let dz = pn / (nf * (z * pn - pm) / (z * z - 1.0));
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (pn, pm) = legendre_pair(n, z);
        let dp = nf * (z * pn - pm) / (z * z - 1.0);
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < 2 {
            return Err(LabError::InvalidArgument(format!("n_theta must be at least 2, got {n_theta}")));
        }
        if n_phi < 2 * n_theta - 1 {
            return Err(LabError::InvalidArgument(format!(
                "n_phi = {n_phi} cannot resolve degree {}; need at least {}",
                n_theta - 1,
                2 * n_theta - 1
            )));
        }
        let (cos_theta, ring_weights) = gauss_legendre(n_theta);
        Ok(Self { n_theta, n_phi, cos_theta, ring_weights })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Highest degree a field may carry without aliasing.
    pub fn capacity(&self) -> usize {
        self.n_theta / 2
    }

    /// Highest degree the quadrature resolves.
    pub fn max_degree(&self) -> usize {
        self.n_theta - 1
    }

    pub fn cos_theta(&self) -> &[f64] {
        &self.cos_theta
    }

    pub fn ring_weights(&self) -> &[f64] {
        &self.ring_weights
    }

    pub fn phi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_phi as f64
    }

    /// Index of node `(ring i, longitude j)` in a field's value array.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_phi + j
    }

    /// `(θ, φ, weight)` of every node in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let dphi = 2.0 * PI / self.n_phi as f64;
        (0..self.n_theta).flat_map(move |i| {
            let theta = self.cos_theta[i].acos();
            let w = self.ring_weights[i] * dphi;
            (0..self.n_phi).map(move |j| (theta, self.phi(j), w))
        })
    }

    /// Unit vector of every node in storage order.
    pub fn points(&self) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n_theta {
            let z = self.cos_theta[i];
            let rho = (1.0 - z * z).sqrt();
            for j in 0..self.n_phi {
                let (s, c) = self.phi(j).sin_cos();
                out.push([rho * c, rho * s, z]);
            }
        }
        out
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        let dphi = 2.0 * PI / self.n_phi as f64;
        (0..self.n_theta)
            .map(|i| {
                let ring: f64 = values[i * self.n_phi..(i + 1) * self.n_phi].iter().sum();
                self.ring_weights[i] * dphi * ring
            })
            .sum()
    }
}
