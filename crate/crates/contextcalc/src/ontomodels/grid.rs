//! Quadrature grids on the unit sphere.
//!
//! The product-Gauss grid uses composite Gauss-Legendre in cos(theta) (one
//! panel per hemisphere, so an equatorial jump is resolved exactly) crossed
//! with a uniform azimuthal rule. The grid is symmetric under the antipodal
//! map, which several model identities rely on.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::ModelError;
use crate::qmath::stream_rng;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n and its derivative at x.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    ProductGauss { order: usize },
    UniformMc { size: usize, seed: u64 },
}

/// Discretization of the unit sphere with weights summing to one.
#[derive(Debug, Clone, Serialize)]
pub struct SphereGrid {
    kind: GridKind,
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
    /// Conservative quadrature-error estimate from a kinked test battery.
    tolerance: f64,
}

impl SphereGrid {
    /// Product Gauss-Legendre x uniform azimuth. `order` is the number of
    /// polar levels (split evenly between hemispheres); the azimuthal count
    /// is `8 * order` because azimuthal kinks converge only quadratically
    /// while the polar rule is spectrally accurate. Requires an even
    /// `order >= 8`.
    pub fn product_gauss(order: usize) -> Result<Self, ModelError> {
        if order < 8 || !order.is_multiple_of(2) {
            return Err(ModelError::InvalidOrder(order));
        }
        let half = order / 2;
        let (gx, gw) = gauss_legendre(half);
        // Map to [-1, 0] and [0, 1].
        let mut us = Vec::with_capacity(order);
        let mut uw = Vec::with_capacity(order);
        for (x, w) in gx.iter().zip(gw.iter()) {
            us.push((x - 1.0) / 2.0);
            uw.push(w / 2.0);
        }
        for (x, w) in gx.iter().zip(gw.iter()) {
            us.push((x + 1.0) / 2.0);
            uw.push(w / 2.0);
        }
        let n_phi = 8 * order;
        let mut nodes = Vec::with_capacity(order * n_phi);
        let mut weights = Vec::with_capacity(order * n_phi);
        for (u, w) in us.iter().zip(uw.iter()) {
            let st = (1.0 - u * u).max(0.0).sqrt();
            let w_node = w / 2.0 / n_phi as f64;
            for j in 0..n_phi {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / n_phi as f64;
                nodes.push([st * phi.cos(), st * phi.sin(), *u]);
                weights.push(w_node);
            }
        }
        let mut grid = SphereGrid {
            kind: GridKind::ProductGauss { order },
            nodes,
            weights,
            tolerance: 0.0,
        };
        grid.verify_and_calibrate()?;
        Ok(grid)
    }

    /// Uniform Monte-Carlo sphere sample, deterministic per seed.
    pub fn uniform_mc(size: usize, seed: u64) -> Result<Self, ModelError> {
        if size < 8 {
            return Err(ModelError::InvalidOrder(size));
        }
        let mut rng = stream_rng(seed, 0);
        let mut nodes = Vec::with_capacity(size);
        while nodes.len() < size {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            let z: f64 = rng.sample(StandardNormal);
            let n = (x * x + y * y + z * z).sqrt();
            if n > 1e-9 {
                nodes.push([x / n, y / n, z / n]);
            }
        }
        let weights = vec![1.0 / size as f64; size];
        let mut grid = SphereGrid {
            kind: GridKind::UniformMc { size, seed },
            nodes,
            weights,
            tolerance: 0.0,
        };
        grid.verify_and_calibrate()?;
        Ok(grid)
    }

    /// Checks low-degree exactness and measures the kinked-integrand error
    /// battery that sets the reported grid tolerance.
    fn verify_and_calibrate(&mut self) -> Result<(), ModelError> {
        // Remove the accumulated rounding bias from the node weights.
        let raw_sum: f64 = self.weights.iter().sum();
        if (raw_sum - 1.0).abs() > 1e-9 {
            return Err(ModelError::GridBuild(format!(
                "weights sum to {raw_sum:.17}"
            )));
        }
        for w in self.weights.iter_mut() {
            *w /= raw_sum;
        }
        let wsum: f64 = self.weights.iter().sum();
        let mut first_moment = [0.0_f64; 3];
        let mut zz = 0.0;
        for (n, w) in self.nodes.iter().zip(self.weights.iter()) {
            for a in 0..3 {
                first_moment[a] += w * n[a];
            }
            zz += w * n[2] * n[2];
        }
        let fm_norm = first_moment.iter().map(|v| v * v).sum::<f64>().sqrt();
        let low_degree = (wsum - 1.0).abs().max((zz - 1.0 / 3.0).abs() / 3.0);
        // Kinked battery at tilted directions: |n.s| -> 1/2 and the
        // half-space first moment (n.s) Theta(n.s) -> 1/4.
        let dirs = [
            normalize([1.0, 1.0, 1.0]),
            normalize([1.0, -2.0, 3.0]),
            normalize([0.3, 0.1, -0.9]),
        ];
        let mut battery: f64 = 0.0;
        for s in dirs {
            let mut abs_int = 0.0;
            let mut half_int = 0.0;
            for (n, w) in self.nodes.iter().zip(self.weights.iter()) {
                let ns = n[0] * s[0] + n[1] * s[1] + n[2] * s[2];
                abs_int += w * ns.abs();
                half_int += w * ns * if ns > 0.0 { 1.0 } else { 0.0 };
            }
            battery = battery.max((abs_int - 0.5).abs());
            battery = battery.max((half_int - 0.25).abs());
        }
        battery = battery.max(fm_norm).max(low_degree);
        self.tolerance = (4.0 * battery).max(1e-12);
        Ok(())
    }

    pub fn kind(&self) -> &GridKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Conservative error estimate for integrands with great-circle kinks.
    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Quadrature of a function of the node direction.
    pub fn integrate<F: FnMut(&[f64; 3]) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(n, w)| w * f(n))
            .sum()
    }
}

pub(crate) fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

pub(crate) fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Orthonormal frame (rows) with `pole` as the +z axis and the azimuth fixed
/// by `azimuth_ref`, so the frame depends only on the two directions'
/// relative geometry. Falls back to a coordinate axis when they are parallel.
pub(crate) fn canonical_frame(pole: [f64; 3], azimuth_ref: [f64; 3]) -> [[f64; 3]; 3] {
    let ez = normalize(pole);
    let along = dot(&azimuth_ref, &ez);
    let mut u = [
        azimuth_ref[0] - along * ez[0],
        azimuth_ref[1] - along * ez[1],
        azimuth_ref[2] - along * ez[2],
    ];
    let un = dot(&u, &u).sqrt();
    if un < 1e-9 {
        // Degenerate reference: take the coordinate axis least aligned
        // with the pole and orthogonalize it.
        let abs = [ez[0].abs(), ez[1].abs(), ez[2].abs()];
        let mut pick = 0;
        if abs[1] < abs[pick] {
            pick = 1;
        }
        if abs[2] < abs[pick] {
            pick = 2;
        }
        let mut e = [0.0; 3];
        e[pick] = 1.0;
        let along = dot(&e, &ez);
        u = [
            e[0] - along * ez[0],
            e[1] - along * ez[1],
            e[2] - along * ez[2],
        ];
    }
    let ex = normalize(u);
    let ey = cross(&ez, &ex);
    [ex, ey, ez]
}

/// Coordinates of `v` in the frame (rows of `frame` are the frame axes).
pub(crate) fn to_frame(frame: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        dot(&frame[0], v),
        dot(&frame[1], v),
        dot(&frame[2], v),
    ]
}
