//! Executable ontological models on the Bloch sphere: the Kochen-Specker
//! qubit model, its noisy preparation-non-contextual variant, the universal
//! outcome-product model, and the bound checkers built on them.

mod discrete;
mod grid;

pub use discrete::{
    discrete_tv, kitchen_sink_model, guessing_lemma_audit, DiscreteModel, GuessingLemmaReport, ONTIC_CAP,
};
pub use grid::{GridKind, SphereGrid};

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use thiserror::Error;

use crate::optable::TableError;
use crate::qmath::{
    density_to_bloch, stream_rng, trace_distance, BlochVector, DensityOperator, QmathError,
};
use grid::{canonical_frame, cross, dot, normalize, to_frame};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid grid order/size {0} (product grids need an even order >= 8)")]
    InvalidOrder(usize),
    #[error("grid construction failed: {0}")]
    GridBuild(String),
    #[error("densities live on different grids")]
    GridMismatch,
    #[error("model requires a pure qubit state (Bloch norm {0:.12})")]
    NotPure(f64),
    #[error("ensemble weights sum to {0}, expected 1")]
    WeightSum(f64),
    #[error("noise parameter {0} below 1/2; the model exists only for p >= 1/2")]
    NoiseTooWeak(f64),
    #[error("ontic space exceeds the cap of {0} states")]
    OnticCap(usize),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("distribution for `{label}` sums to {sum}, expected 1")]
    DistributionSum { label: String, sum: f64 },
    #[error("responses at ontic state {ontic} of `{label}` sum to {sum}, expected 1")]
    ResponseSum { label: String, ontic: usize, sum: f64 },
    #[error("convex-sum and closed-form densities disagree by {0:.3e}")]
    ClosedFormMismatch(f64),
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Qmath(#[from] QmathError),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Heaviside step with the measure-zero convention `Theta(0) = 1/2`.
#[inline]
pub fn theta(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}

/// A probability density over a sphere grid (values are densities with
/// respect to the normalized solid-angle measure the grid discretizes).
#[derive(Debug, Clone)]
pub struct OnticDensity {
    grid: Arc<SphereGrid>,
    values: Vec<f64>,
}

impl OnticDensity {
    pub fn new(grid: Arc<SphereGrid>, values: Vec<f64>) -> Result<Self, ModelError> {
        if values.len() != grid.len() {
            return Err(ModelError::Shape(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(OnticDensity { grid, values })
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Quadrature integral of the density; 1 within grid tolerance for a
    /// normalized model density.
    pub fn total_mass(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights().iter())
            .map(|(v, w)| v * w)
            .sum()
    }
}

fn same_grid(a: &OnticDensity, b: &OnticDensity) -> bool {
    Arc::ptr_eq(&a.grid, &b.grid)
        || (a.grid.kind() == b.grid.kind() && a.grid.len() == b.grid.len())
}

/// Total variation distance `1/2 sum w |a - b|` between two densities on the
/// same grid.
pub fn model_total_variation(a: &OnticDensity, b: &OnticDensity) -> Result<f64, ModelError> {
    if !same_grid(a, b) {
        return Err(ModelError::GridMismatch);
    }
    Ok(0.5
        * a.values
            .iter()
            .zip(b.values.iter())
            .zip(a.grid.weights().iter())
            .map(|((x, y), w)| w * (x - y).abs())
            .sum::<f64>())
}

fn unit_bloch(state: &DensityOperator) -> Result<[f64; 3], ModelError> {
    let b = density_to_bloch(state)?;
    let norm = b.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(ModelError::NotPure(norm));
    }
    Ok(normalize([b.x, b.y, b.z]))
}

/// Density `4 (n.s) Theta(n.s)` of a pure qubit state, on the grid as given.
pub fn ks_density(
    grid: &Arc<SphereGrid>,
    psi: &DensityOperator,
) -> Result<OnticDensity, ModelError> {
    let s = unit_bloch(psi)?;
    let values = grid
        .nodes()
        .iter()
        .map(|n| {
            let ns = dot(n, &s);
            4.0 * ns * theta(ns)
        })
        .collect();
    OnticDensity::new(grid.clone(), values)
}

/// Response `Theta(n.r)` of the outcome projector `phi`, on the grid as given.
pub fn ks_response(
    grid: &Arc<SphereGrid>,
    phi: &DensityOperator,
) -> Result<Vec<f64>, ModelError> {
    let r = unit_bloch(phi)?;
    Ok(grid.nodes().iter().map(|n| theta(dot(n, &r))).collect())
}

/// One model evaluation: density, response, and their quadrature pairing.
#[derive(Debug, Clone)]
pub struct KsEvaluation {
    /// Density evaluated in the measurement-aligned frame (see `frame_pole`).
    pub density: OnticDensity,
    pub response: Vec<f64>,
    pub born: f64,
    /// The world direction the grid's +z axis was rotated onto.
    pub frame_pole: BlochVector,
}

/// Evaluates the model's Born probability `sum w mu xi`.
///
/// The grid is evaluated in the frame whose pole is the measurement axis, so
/// the response jump lies exactly on the grid equator; the model is
/// rotation-covariant, so this is a frame choice, not an approximation.
pub fn ks_model_eval(
    grid: &Arc<SphereGrid>,
    psi: &DensityOperator,
    phi: &DensityOperator,
) -> Result<KsEvaluation, ModelError> {
    let s = unit_bloch(psi)?;
    let r = unit_bloch(phi)?;
    let frame = canonical_frame(r, s);
    let s_frame = to_frame(&frame, &s);
    let r_frame = to_frame(&frame, &r);
    let mut density = Vec::with_capacity(grid.len());
    let mut response = Vec::with_capacity(grid.len());
    let mut born = 0.0;
    for (n, w) in grid.nodes().iter().zip(grid.weights().iter()) {
        let ns = dot(n, &s_frame);
        let nr = dot(n, &r_frame);
        let mu = 4.0 * ns * theta(ns);
        let xi = theta(nr);
        density.push(mu);
        response.push(xi);
        born += w * mu * xi;
    }
    Ok(KsEvaluation {
        density: OnticDensity::new(grid.clone(), density)?,
        response,
        born,
        frame_pole: BlochVector::new(r[0], r[1], r[2])?,
    })
}

/// Pair total variation between the model densities of two pure states,
/// evaluated in the frame whose pole is `s x r` so both kink circles pass
/// through the grid poles.
pub fn ks_pair_tv(
    grid: &Arc<SphereGrid>,
    psi: &DensityOperator,
    phi: &DensityOperator,
) -> Result<f64, ModelError> {
    let s = unit_bloch(psi)?;
    let r = unit_bloch(phi)?;
    let axis = cross(&s, &r);
    let axis_norm = dot(&axis, &axis).sqrt();
    let (s_frame, r_frame) = if axis_norm < 1e-12 {
        // Parallel or antipodal: both kinks share one circle; put it
        // through the poles with s as the azimuth reference.
        let frame = canonical_frame(
            canonical_frame(s, s)[0], // any direction perpendicular to s
            s,
        );
        (to_frame(&frame, &s), to_frame(&frame, &r))
    } else {
        let frame = canonical_frame(axis, s);
        (to_frame(&frame, &s), to_frame(&frame, &r))
    };
    let mut tv = 0.0;
    for (n, w) in grid.nodes().iter().zip(grid.weights().iter()) {
        let ns = dot(n, &s_frame);
        let nr = dot(n, &r_frame);
        let mu_a = 4.0 * ns * theta(ns);
        let mu_b = 4.0 * nr * theta(nr);
        tv += w * (mu_a - mu_b).abs();
    }
    Ok(0.5 * tv)
}

/// Ensemble density by convex linearity, cross-checked nodewise against the
/// closed form `2 (n.a + sum_i p_i |n.s_i|)`.
pub fn ks_ensemble_density(
    grid: &Arc<SphereGrid>,
    ensemble: &[(f64, DensityOperator)],
) -> Result<OnticDensity, ModelError> {
    let wsum: f64 = ensemble.iter().map(|(p, _)| p).sum();
    if (wsum - 1.0).abs() > 1e-12 {
        return Err(ModelError::WeightSum(wsum));
    }
    let blochs: Vec<[f64; 3]> = ensemble
        .iter()
        .map(|(_, s)| unit_bloch(s))
        .collect::<Result<_, _>>()?;
    let avg = {
        let mut a = [0.0_f64; 3];
        for ((p, _), s) in ensemble.iter().zip(blochs.iter()) {
            for k in 0..3 {
                a[k] += p * s[k];
            }
        }
        a
    };
    let mut values = Vec::with_capacity(grid.len());
    let mut worst: f64 = 0.0;
    for n in grid.nodes() {
        let mut convex = 0.0;
        let mut abs_part = 0.0;
        for ((p, _), s) in ensemble.iter().zip(blochs.iter()) {
            let ns = dot(n, s);
            convex += p * 4.0 * ns * theta(ns);
            abs_part += p * ns.abs();
        }
        let closed = 2.0 * (dot(n, &avg) + abs_part);
        worst = worst.max((convex - closed).abs());
        values.push(convex);
    }
    if worst > 1e-10 {
        return Err(ModelError::ClosedFormMismatch(worst));
    }
    OnticDensity::new(grid.clone(), values)
}

/// Density of the noisy preparation-non-contextual qubit model:
/// `2 (1-p) [n.s + 1] + (2p - 1)`.
pub fn noisy_pnc_density(
    grid: &Arc<SphereGrid>,
    p: f64,
    psi: &DensityOperator,
) -> Result<OnticDensity, ModelError> {
    if !(0.5..=1.0).contains(&p) {
        return Err(ModelError::NoiseTooWeak(p));
    }
    let s = unit_bloch(psi)?;
    let values = grid
        .nodes()
        .iter()
        .map(|n| 2.0 * (1.0 - p) * (dot(n, &s) + 1.0) + (2.0 * p - 1.0))
        .collect();
    OnticDensity::new(grid.clone(), values)
}

/// Same density evaluated directly from a Bloch vector (the model is linear
/// in the Bloch vector, so mixed averages are valid inputs).
pub fn noisy_pnc_density_bloch(
    grid: &Arc<SphereGrid>,
    p: f64,
    bloch: &BlochVector,
) -> Result<OnticDensity, ModelError> {
    if !(0.5..=1.0).contains(&p) {
        return Err(ModelError::NoiseTooWeak(p));
    }
    let s = [bloch.x, bloch.y, bloch.z];
    let values = grid
        .nodes()
        .iter()
        .map(|n| 2.0 * (1.0 - p) * (dot(n, &s) + 1.0) + (2.0 * p - 1.0))
        .collect();
    OnticDensity::new(grid.clone(), values)
}

/// Born probability of the noisy model, which reproduces the depolarized
/// statistics `(1-p) |<phi|psi>|^2 + p/2`.
pub fn noisy_pnc_model_eval(
    grid: &Arc<SphereGrid>,
    p: f64,
    psi: &DensityOperator,
    phi: &DensityOperator,
) -> Result<f64, ModelError> {
    if !(0.5..=1.0).contains(&p) {
        return Err(ModelError::NoiseTooWeak(p));
    }
    let s = unit_bloch(psi)?;
    let r = unit_bloch(phi)?;
    let frame = canonical_frame(r, s);
    let s_frame = to_frame(&frame, &s);
    let r_frame = to_frame(&frame, &r);
    let mut born = 0.0;
    for (n, w) in grid.nodes().iter().zip(grid.weights().iter()) {
        let mu = 2.0 * (1.0 - p) * (dot(n, &s_frame) + 1.0) + (2.0 * p - 1.0);
        born += w * mu * theta(dot(n, &r_frame));
    }
    Ok(born)
}

/// Discretizes the noisy model onto the grid as an explicit finite model:
/// node probabilities `w_i mu(n_i)` per preparation, `Theta` responses per
/// two-outcome axis measurement.
pub fn noisy_pnc_discrete_model(
    grid: &Arc<SphereGrid>,
    p: f64,
    preparations: &[(String, DensityOperator)],
    measurements: &[(String, DensityOperator)],
) -> Result<DiscreteModel, ModelError> {
    let mut mu = std::collections::BTreeMap::new();
    for (label, psi) in preparations {
        let dens = noisy_pnc_density(grid, p, psi)?;
        let mut dist: Vec<f64> = dens
            .values()
            .iter()
            .zip(grid.weights().iter())
            .map(|(v, w)| v * w)
            .collect();
        // The quadrature mass differs from 1 only by grid tolerance;
        // normalize so the discrete model is an exact probability model.
        let mass: f64 = dist.iter().sum();
        for d in dist.iter_mut() {
            *d /= mass;
        }
        mu.insert(label.clone(), dist);
    }
    let mut xi = std::collections::BTreeMap::new();
    for (label, phi) in measurements {
        let response = ks_response(grid, phi)?;
        let complement: Vec<f64> = response.iter().map(|x| 1.0 - x).collect();
        xi.insert(label.clone(), vec![response, complement]);
    }
    let labels = (0..grid.len()).map(|i| format!("n{i}")).collect();
    DiscreteModel::new(labels, mu, xi)
}

/// Upper bound on the model's inaccessible information from sampled
/// pure-state pairs: `1 - (1/2D) [1 - max_{overlap >= 1/2D} d_TV]`.
#[derive(Debug, Clone, Serialize)]
pub struct OverlapBound {
    pub bound: f64,
    /// Sampled lower estimate of the inner supremum.
    pub inner_max: f64,
    pub accepted_pairs: usize,
    /// The inner max is sampled from below, so `bound` is itself an
    /// estimate from below of an upper bound.
    pub note: &'static str,
}

pub fn overlap_upper_bound<F>(
    dim: usize,
    mut tv_oracle: F,
    samples: usize,
    seed: u64,
) -> Result<OverlapBound, ModelError>
where
    F: FnMut(&DensityOperator, &DensityOperator) -> Result<f64, ModelError>,
{
    let overlap_floor = 1.0 / (2.0 * dim as f64);
    let mut rng = stream_rng(seed, 0);
    let mut inner_max: f64 = 0.0;
    let mut accepted = 0usize;
    while accepted < samples {
        let mut kets = [Vec::new(), Vec::new()];
        for ket in kets.iter_mut() {
            *ket = (0..dim)
                .map(|_| {
                    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                })
                .collect::<Vec<Complex64>>();
            let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in ket.iter_mut() {
                *z /= norm;
            }
        }
        let overlap: f64 = kets[0]
            .iter()
            .zip(kets[1].iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr();
        if overlap < overlap_floor {
            continue;
        }
        accepted += 1;
        let a = DensityOperator::pure(&kets[0])?;
        let b = DensityOperator::pure(&kets[1])?;
        inner_max = inner_max.max(tv_oracle(&a, &b)?);
    }
    Ok(OverlapBound {
        bound: 1.0 - overlap_floor * (1.0 - inner_max),
        inner_max,
        accepted_pairs: accepted,
        note: "estimate from below of an upper bound",
    })
}

/// One pair in the model-vs-quantum distance sandwich.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichCheck {
    pub d_tv: f64,
    pub d_trace: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceSandwichReport {
    pub checks: Vec<SandwichCheck>,
    pub all_pass: bool,
    pub tolerance: f64,
}

/// Checks `0 <= d_TV - d_trace <= C (1 + d_trace)` per pair, within `tol`
/// on both sides (the model's pair TV can sit exactly on the lower edge, so
/// the quadrature needs the same slack there as on the upper).
pub fn distance_sandwich_audit<F>(
    mut tv_oracle: F,
    pairs: &[(DensityOperator, DensityOperator)],
    c_prep_bound: f64,
    tol: f64,
) -> Result<DistanceSandwichReport, ModelError>
where
    F: FnMut(&DensityOperator, &DensityOperator) -> Result<f64, ModelError>,
{
    let mut checks = Vec::with_capacity(pairs.len());
    let mut all_pass = true;
    for (a, b) in pairs {
        let d_tv = tv_oracle(a, b)?;
        let d_trace = trace_distance(a, b)?;
        let gap = d_tv - d_trace;
        let lower_ok = gap >= -tol;
        let upper_ok = gap <= c_prep_bound * (1.0 + d_trace) + tol;
        all_pass &= lower_ok && upper_ok;
        checks.push(SandwichCheck { d_tv, d_trace, lower_ok, upper_ok });
    }
    Ok(DistanceSandwichReport { checks, all_pass, tolerance: tol })
}
