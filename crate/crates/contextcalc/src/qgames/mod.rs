//! Quantum-side guessing-game quantities: the minimax distinguishability
//! constants over density operators, guessing probabilities, qubit closed
//! forms, and the qudit Haar threshold.

mod minimax;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::qmath::{
    bloch_to_density, density_to_bloch, dmax_quantum, haar_unitary_with, stream_rng,
    BlochVector, ComplexMatrix, DensityOperator, ExtReal, QmathError,
};
use minimax::{alpha_feasible, beta_feasible, max_eig, pgm_lower_bound, Probe, BRACKET_TOL};

/// Enumeration cap on message strings `d^n`.
pub const STRING_CAP: usize = 4096;
/// Below this trace level the beta solver reports +infinity.
pub const BETA_LAMBDA_CUTOFF: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("no states supplied")]
    Empty,
    #[error("states have mixed dimensions {left} and {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("message string count {0} exceeds the enumeration cap {STRING_CAP}")]
    EnumerationCap(usize),
    #[error("solver failed to converge; best bracket [{lo}, {hi}]")]
    NonConvergence { lo: f64, hi: f64 },
    #[error("config is not centered: uniform state average has Bloch vector ({x:.3e}, {y:.3e}, {z:.3e}), norm {norm:.3e}")]
    NotCentered { x: f64, y: f64, z: f64, norm: f64 },
    #[error("operation requires qubit states, got dimension {0}")]
    NotQubit(usize),
    #[error("distribution {index} sums to {sum}, expected 1")]
    BadDistribution { index: usize, sum: f64 },
    #[error("distributions have unequal support sizes {left} and {right}")]
    SupportMismatch { left: usize, right: usize },
    #[error("classical guessing identity violated: |sum_max - minimax| = {0:.3e}")]
    IdentityGap(f64),
    #[error(transparent)]
    Qmath(#[from] QmathError),
}

/// A guessing-game configuration: n alphabets of d states each.
#[derive(Debug, Clone)]
pub struct GameConfig {
    n: usize,
    d: usize,
    states: Vec<Vec<DensityOperator>>,
}

impl GameConfig {
    pub fn new(states: Vec<Vec<DensityOperator>>) -> Result<Self, GameError> {
        let n = states.len();
        let d = states.first().map(|g| g.len()).unwrap_or(0);
        if n == 0 || d == 0 {
            return Err(GameError::Empty);
        }
        let dim = states[0][0].dim();
        for group in &states {
            if group.len() != d {
                return Err(GameError::DimMismatch { left: d, right: group.len() });
            }
            for s in group {
                if s.dim() != dim {
                    return Err(GameError::DimMismatch { left: dim, right: s.dim() });
                }
            }
        }
        let count = (d as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
        if count as usize > STRING_CAP {
            return Err(GameError::EnumerationCap(count as usize));
        }
        Ok(GameConfig { n, d, states })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.states[0][0].dim()
    }

    pub fn states(&self) -> &[Vec<DensityOperator>] {
        &self.states
    }

    pub fn state(&self, k: usize, x: usize) -> &DensityOperator {
        &self.states[k][x]
    }

    /// The `d^n` uniform ensemble states `rho_x = (1/n) sum_k rho_(k, x_k)`.
    pub fn ensemble_states(&self) -> Vec<DensityOperator> {
        let dim = self.dim();
        let mut out = Vec::new();
        let mut digits = vec![0usize; self.n];
        loop {
            let mut acc = ComplexMatrix::zeros(dim, dim);
            for (k, &xk) in digits.iter().enumerate() {
                acc = acc.add(&self.states[k][xk].matrix().scale_re(1.0 / self.n as f64));
            }
            out.push(DensityOperator::new(acc).expect("mixture of states is a state"));
            let mut carry = true;
            for pos in (0..self.n).rev() {
                if carry {
                    digits[pos] += 1;
                    if digits[pos] == self.d {
                        digits[pos] = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                return out;
            }
        }
    }
}

/// Result of a minimax solve, with the optimizer and its certificate.
#[derive(Debug, Clone)]
pub struct MinimaxResult {
    pub value: ExtReal,
    pub sigma_star: Option<DensityOperator>,
    /// `|value - max_x 2^Dmax at sigma_star|`; meaningful for finite values.
    pub certificate_gap: f64,
    /// Indices achieving the max in the certificate (ties reported in full).
    pub argmax: Vec<usize>,
}

fn certificate_alpha(
    states: &[DensityOperator],
    sigma: &DensityOperator,
) -> Result<(ExtReal, Vec<usize>), GameError> {
    let mut best = ExtReal::Finite(0.0);
    let mut values = Vec::with_capacity(states.len());
    for rho in states {
        let v = dmax_quantum(rho, sigma)?;
        values.push(v.as_f64().exp2());
        if v.as_f64() > best.as_f64() {
            best = v;
        }
    }
    let top = best.as_f64().exp2();
    let argmax = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| (v - top).abs() <= 1e-7 * top.max(1.0) || (v.is_infinite() && top.is_infinite()))
        .map(|(i, _)| i)
        .collect();
    let value = match best {
        ExtReal::Finite(v) => ExtReal::Finite(v.exp2()),
        ExtReal::Infinite => ExtReal::Infinite,
    };
    Ok((value, argmax))
}

fn certificate_beta(
    states: &[DensityOperator],
    sigma: &DensityOperator,
) -> Result<(ExtReal, Vec<usize>), GameError> {
    let mut best = ExtReal::Finite(0.0);
    let mut values = Vec::with_capacity(states.len());
    for rho in states {
        let v = dmax_quantum(sigma, rho)?;
        values.push(v.as_f64().exp2());
        if v.as_f64() > best.as_f64() {
            best = v;
        }
    }
    let top = best.as_f64().exp2();
    let argmax = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| (v - top).abs() <= 1e-7 * top.max(1.0) || (v.is_infinite() && top.is_infinite()))
        .map(|(i, _)| i)
        .collect();
    let value = match best {
        ExtReal::Finite(v) => ExtReal::Finite(v.exp2()),
        ExtReal::Infinite => ExtReal::Infinite,
    };
    Ok((value, argmax))
}

fn density_from_probe(point: &ComplexMatrix) -> Result<DensityOperator, GameError> {
    let sym = point.add(&point.adjoint()).scale_re(0.5);
    let tr = sym.trace().re;
    Ok(DensityOperator::new(sym.scale_re(1.0 / tr))?)
}

/// Witness state for the alpha certificate. The projections clip small
/// eigenvalues to exactly zero, which would turn the certificate's
/// max-relative entropy infinite against full-rank states; an epsilon of
/// the maximally mixed state restores full support at a value shift
/// far below the certificate budget.
fn alpha_certificate_state(point: &ComplexMatrix) -> Result<DensityOperator, GameError> {
    let raw = density_from_probe(point)?;
    let dim = raw.dim();
    Ok(DensityOperator::mixture(&[
        (1.0 - 1e-9, raw),
        (1e-9, DensityOperator::maximally_mixed(dim)),
    ])?)
}

/// `inf_sigma max_x 2^{D_max(rho_x || sigma)}`: the smallest `t` such that a
/// density operator `sigma` with `t sigma >= rho_x` for every `x` exists.
pub fn alpha_min_quantum(states: &[DensityOperator]) -> Result<MinimaxResult, GameError> {
    if states.is_empty() {
        return Err(GameError::Empty);
    }
    let dim = states[0].dim();
    for s in states {
        if s.dim() != dim {
            return Err(GameError::DimMismatch { left: dim, right: s.dim() });
        }
    }
    let mats: Vec<ComplexMatrix> = states.iter().map(|s| s.matrix().clone()).collect();
    // Analytic envelopes: t >= lambda_max(rho_x) from Tr sigma = 1, the
    // pretty-good-measurement dual value from below, and sigma proportional
    // to the state sum feasible at t = sum of traces from above.
    let mut lo = mats
        .iter()
        .map(max_eig)
        .fold(0.0, f64::max)
        .max(pgm_lower_bound(&mats) - 1e-9);
    let mut hi: f64 = states.len() as f64;
    let first = alpha_feasible(&mats, hi, None);
    if !first.feasible {
        return Err(GameError::NonConvergence { lo, hi });
    }
    let mut witness = first.point;
    // Jump to the value the witness itself achieves.
    let sigma = alpha_certificate_state(&witness)?;
    if let (ExtReal::Finite(cert), _) = certificate_alpha(states, &sigma)? {
        if cert < hi && cert >= lo - 1e-9 {
            hi = cert.max(lo);
        }
    }
    while hi - lo > BRACKET_TOL {
        let mid = 0.5 * (lo + hi);
        let probe: Probe = alpha_feasible(&mats, mid, Some(&witness));
        if probe.feasible {
            hi = mid;
            witness = probe.point;
            let sigma = alpha_certificate_state(&witness)?;
            if let (ExtReal::Finite(cert), _) = certificate_alpha(states, &sigma)? {
                if cert < hi && cert >= lo - 1e-9 {
                    hi = cert.max(lo);
                }
            }
        } else {
            lo = mid;
        }
    }
    let sigma_star = alpha_certificate_state(&witness)?;
    let (cert, argmax) = certificate_alpha(states, &sigma_star)?;
    let value = 0.5 * (lo + hi);
    let certificate_gap = match cert {
        ExtReal::Finite(c) => (value - c).abs(),
        ExtReal::Infinite => f64::INFINITY,
    };
    Ok(MinimaxResult {
        value: ExtReal::Finite(value.max(1.0)),
        sigma_star: Some(sigma_star),
        certificate_gap,
        argmax,
    })
}

/// `inf_sigma max_x 2^{D_max(sigma || rho_x)} = 1/lambda*` with
/// `lambda* = max{Tr A : 0 <= A <= rho_x for all x}`; +infinity when only
/// `A = 0` fits under every state.
pub fn beta_min_quantum(states: &[DensityOperator]) -> Result<MinimaxResult, GameError> {
    if states.is_empty() {
        return Err(GameError::Empty);
    }
    let dim = states[0].dim();
    for s in states {
        if s.dim() != dim {
            return Err(GameError::DimMismatch { left: dim, right: s.dim() });
        }
    }
    let mats: Vec<ComplexMatrix> = states.iter().map(|s| s.matrix().clone()).collect();
    let mut lo = 0.0_f64; // A = 0 is always feasible
    let mut hi = 1.0_f64;
    let mut witness: Option<ComplexMatrix> = None;
    // Jump the feasible side up to the level its own witness achieves:
    // the largest c with c A' <= rho_x for every x, A' the normalized
    // witness, is exactly min_x 2^{-D_max(A' || rho_x)}.
    let achieved = |point: &ComplexMatrix| -> Result<f64, GameError> {
        let a = density_from_probe(point)?;
        let mut c = f64::INFINITY;
        for rho in states {
            match dmax_quantum(&a, rho)? {
                ExtReal::Finite(d) => c = c.min((-d).exp2()),
                ExtReal::Infinite => return Ok(0.0),
            }
        }
        Ok(c)
    };
    let top = beta_feasible(&mats, hi, None);
    if top.feasible {
        lo = hi;
        witness = Some(top.point);
    }
    // Bisect lambda to a tolerance tight enough that 1/lambda carries
    // single-digit 1e-7 error after inversion.
    while hi - lo > 1e-9 && lo < hi {
        let mid = 0.5 * (lo + hi);
        let probe = beta_feasible(&mats, mid, witness.as_ref());
        if probe.feasible {
            lo = mid;
            let jump = achieved(&probe.point)?;
            if jump > lo && jump <= hi {
                lo = jump;
            }
            witness = Some(probe.point);
        } else {
            hi = mid;
        }
    }
    if lo < BETA_LAMBDA_CUTOFF {
        return Ok(MinimaxResult {
            value: ExtReal::Infinite,
            sigma_star: None,
            certificate_gap: 0.0,
            argmax: Vec::new(),
        });
    }
    let lambda = lo;
    let witness = witness.expect("feasible lambda recorded a witness");
    let sigma_star = density_from_probe(&witness)?;
    let (cert, argmax) = certificate_beta(states, &sigma_star)?;
    let value = 1.0 / lambda;
    let certificate_gap = match cert {
        ExtReal::Finite(c) => (value - c).abs(),
        ExtReal::Infinite => f64::INFINITY,
    };
    Ok(MinimaxResult {
        value: ExtReal::Finite(value.max(1.0)),
        sigma_star: Some(sigma_star),
        certificate_gap,
        argmax,
    })
}

/// Alphabet-blind optimal guessing probability `alpha_min / d` over the
/// config's ensemble states.
pub fn qguess_quantum(cfg: &GameConfig) -> Result<f64, GameError> {
    let ensembles = cfg.ensemble_states();
    let alpha = alpha_min_quantum(&ensembles)?;
    match alpha.value {
        ExtReal::Finite(a) => Ok(a / cfg.d() as f64),
        ExtReal::Infinite => Err(GameError::NonConvergence { lo: 0.0, hi: f64::MAX }),
    }
}

/// A regular-polygon qubit configuration and its exact enumeration companion.
#[derive(Debug, Clone)]
pub struct PolygonConfig {
    pub config: GameConfig,
    /// `max_x ||n_x||` over all sign strings, by exact enumeration.
    pub max_ensemble_bloch_norm: f64,
}

/// The 2n equatorial states `(|0> + e^{i pi (k/n + x)} |1>)/sqrt(2)` for
/// `k = 1..n`, `x in {1, 2}`; each alphabet is an antipodal pair.
pub fn polygon_states(n: usize) -> Result<PolygonConfig, GameError> {
    if n == 0 {
        return Err(GameError::Empty);
    }
    let mut states = Vec::with_capacity(n);
    for k in 1..=n {
        let mut group = Vec::with_capacity(2);
        for x in 1..=2 {
            let phase = std::f64::consts::PI * (k as f64 / n as f64 + x as f64);
            let ket = crate::qmath::kets::equatorial(phase);
            group.push(DensityOperator::pure(&ket)?);
        }
        states.push(group);
    }
    let config = GameConfig::new(states)?;
    let axes: Vec<BlochVector> = (0..n)
        .map(|k| density_to_bloch(config.state(k, 0)))
        .collect::<Result<_, _>>()?;
    let mut max_norm = 0.0_f64;
    for mask in 0..(1u32 << n) {
        let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
        for (k, axis) in axes.iter().enumerate() {
            let sign = if mask & (1 << k) == 0 { 1.0 } else { -1.0 };
            x += sign * axis.x;
            y += sign * axis.y;
            z += sign * axis.z;
        }
        let norm = (x * x + y * y + z * z).sqrt() / n as f64;
        max_norm = max_norm.max(norm);
    }
    Ok(PolygonConfig { config, max_ensemble_bloch_norm: max_norm })
}

/// Closed-form qubit minimax constants and the completion states that make
/// the operational quantities achieve them.
#[derive(Debug, Clone)]
pub struct QubitClosedForm {
    pub alpha: f64,
    pub beta: ExtReal,
    pub max_ensemble_bloch_norm: f64,
    /// `tau_{x,+-}` completion pairs per message string (skipped where the
    /// ensemble Bloch vector vanishes).
    pub completions: Vec<(DensityOperator, DensityOperator)>,
}

/// Evaluates `alpha = 1 + max ||n_x||`, `beta = 1/(1 - max ||n_x||)` for a
/// centered qubit config.
pub fn qubit_closed_form(
    cfg: &GameConfig,
    require_centered: bool,
) -> Result<QubitClosedForm, GameError> {
    if cfg.dim() != 2 {
        return Err(GameError::NotQubit(cfg.dim()));
    }
    let mut avg = (0.0, 0.0, 0.0);
    let total = (cfg.n() * cfg.d()) as f64;
    for group in cfg.states() {
        for s in group {
            let b = density_to_bloch(s)?;
            avg.0 += b.x / total;
            avg.1 += b.y / total;
            avg.2 += b.z / total;
        }
    }
    let avg_norm = (avg.0 * avg.0 + avg.1 * avg.1 + avg.2 * avg.2).sqrt();
    if require_centered && avg_norm > 1e-9 {
        return Err(GameError::NotCentered {
            x: avg.0,
            y: avg.1,
            z: avg.2,
            norm: avg_norm,
        });
    }
    let mut max_norm = 0.0_f64;
    let mut completions = Vec::new();
    for rho_x in cfg.ensemble_states() {
        let b = density_to_bloch(&rho_x)?;
        let norm = b.norm();
        max_norm = max_norm.max(norm);
        if norm > 1e-12 {
            let unit = BlochVector::new(b.x / norm, b.y / norm, b.z / norm)?;
            let anti = BlochVector::new(-unit.x, -unit.y, -unit.z)?;
            completions.push((bloch_to_density(&unit), bloch_to_density(&anti)));
        }
    }
    let beta = if max_norm < 1.0 - 1e-12 {
        ExtReal::Finite(1.0 / (1.0 - max_norm))
    } else {
        ExtReal::Infinite
    };
    Ok(QubitClosedForm {
        alpha: 1.0 + max_norm,
        beta,
        max_ensemble_bloch_norm: max_norm,
        completions,
    })
}

/// Exact and Monte-Carlo values of the Haar guessing threshold `H_D / D`.
#[derive(Debug, Clone, Serialize)]
pub struct HaarThreshold {
    pub exact: f64,
    pub mc_estimate: f64,
    pub std_err: f64,
    pub samples: usize,
}

/// PNC ceiling on the guessing probability for Haar-uniform qudit alphabets:
/// exact `(1 + 1/2 + ... + 1/D)/D` against a seeded Monte-Carlo estimate of
/// the mean of `max_j |<1|U|j>|^2`.
pub fn qudit_haar_threshold(
    dim: usize,
    mc_samples: usize,
    seed: u64,
) -> Result<HaarThreshold, GameError> {
    if dim < 2 {
        return Err(GameError::DimMismatch { left: dim, right: 2 });
    }
    let exact = crate::noise::harmonic(dim) / dim as f64;
    const CHUNK: usize = 2048;
    let chunks = mc_samples.div_ceil(CHUNK);
    // Seed-split sub-streams, merged in chunk order for determinism.
    let partials: Vec<(usize, f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let count = CHUNK.min(mc_samples - c * CHUNK);
            let mut mean = 0.0;
            let mut m2 = 0.0;
            for k in 0..count {
                let u = haar_unitary_with(dim, &mut rng);
                let v = (0..dim)
                    .map(|j| u.get(0, j).norm_sqr())
                    .fold(0.0, f64::max);
                let k1 = (k + 1) as f64;
                let delta = v - mean;
                mean += delta / k1;
                m2 += delta * (v - mean);
            }
            (count, mean, m2)
        })
        .collect();
    let (mut n_acc, mut mean, mut m2) = (0usize, 0.0, 0.0);
    for (n_b, mean_b, m2_b) in partials {
        if n_b == 0 {
            continue;
        }
        let delta = mean_b - mean;
        let n_ab = n_acc + n_b;
        mean += delta * n_b as f64 / n_ab as f64;
        m2 += m2_b + delta * delta * (n_acc as f64 * n_b as f64) / n_ab as f64;
        n_acc = n_ab;
    }
    let std_err = (m2 / (n_acc as f64 - 1.0) / n_acc as f64).sqrt();
    Ok(HaarThreshold { exact, mc_estimate: mean, std_err, samples: n_acc })
}

/// A ready-to-run polygon experiment: states (with their completion
/// preparations), per-alphabet decoder measurements, Pauli tomography
/// measurements, and the group grid feeding the witness pipeline.
#[derive(Debug, Clone)]
pub struct PolygonExperiment {
    pub preparations: Vec<(String, DensityOperator)>,
    pub measurements: Vec<(String, crate::qmath::Povm)>,
    pub groups: Vec<Vec<String>>,
    pub decoders: Vec<String>,
    pub config: GameConfig,
    pub max_ensemble_bloch_norm: f64,
}

/// Assembles the full prepare-measure experiment for the 2n-state polygon:
/// the polygon states plus the completion states `tau_{x,+-}` (deduplicated),
/// one decoder measurement per alphabet aligned with its antipodal pair, and
/// the three Pauli measurements for tomographic completeness.
pub fn polygon_experiment(n: usize) -> Result<PolygonExperiment, GameError> {
    use crate::qmath::Povm;
    let polygon = polygon_states(n)?;
    let cfg = polygon.config.clone();
    let mut preparations: Vec<(String, DensityOperator)> = Vec::new();
    let mut groups = Vec::with_capacity(n);
    for k in 0..n {
        let mut group = Vec::with_capacity(2);
        for x in 0..2 {
            let label = format!("k{}x{}", k + 1, x + 1);
            preparations.push((label.clone(), cfg.state(k, x).clone()));
            group.push(label);
        }
        groups.push(group);
    }
    let closed = qubit_closed_form(&cfg, true)?;
    let mut completion_idx = 0;
    for (plus, minus) in &closed.completions {
        for tau in [plus, minus] {
            let b = density_to_bloch(tau)?;
            let fresh = preparations.iter().all(|(_, existing)| {
                let e = density_to_bloch(existing).expect("qubit state");
                ((e.x - b.x).powi(2) + (e.y - b.y).powi(2) + (e.z - b.z).powi(2)).sqrt() > 1e-9
            });
            if fresh {
                completion_idx += 1;
                preparations.push((format!("t{completion_idx}"), tau.clone()));
            }
        }
    }
    let mut measurements = Vec::new();
    for (k, group) in groups.iter().enumerate() {
        let first = preparations
            .iter()
            .find(|(l, _)| l == &group[0])
            .expect("group label present");
        let axis = density_to_bloch(&first.1)?;
        measurements.push((format!("D{}", k + 1), Povm::qubit_axis(&axis)?));
    }
    for (label, axis) in [
        ("X", BlochVector::new(1.0, 0.0, 0.0)?),
        ("Y", BlochVector::new(0.0, 1.0, 0.0)?),
        ("Z", BlochVector::new(0.0, 0.0, 1.0)?),
    ] {
        measurements.push((label.to_string(), Povm::qubit_axis(&axis)?));
    }
    let decoders = (1..=n).map(|k| format!("D{k}")).collect();
    Ok(PolygonExperiment {
        preparations,
        measurements,
        groups,
        decoders,
        config: cfg,
        max_ensemble_bloch_norm: polygon.max_ensemble_bloch_norm,
    })
}

/// Classical tightness identity: `sum_lambda max_x mu_x`, the optimal prior
/// `nu*`, and the minimax route through the classical max-relative entropy.
#[derive(Debug, Clone)]
pub struct ClassicalGuess {
    pub sum_max: f64,
    pub minimax: f64,
    pub nu_star: Vec<f64>,
}

/// Verifies `sum_lambda max_x mu_x(lambda) = max_x 2^{D_max(mu_x || nu*)}`
/// with `nu*` the normalized pointwise maximum.
pub fn classical_guess_identity(
    distributions: &[Vec<f64>],
) -> Result<ClassicalGuess, GameError> {
    if distributions.is_empty() {
        return Err(GameError::Empty);
    }
    let support = distributions[0].len();
    for (i, d) in distributions.iter().enumerate() {
        if d.len() != support {
            return Err(GameError::SupportMismatch { left: support, right: d.len() });
        }
        let sum: f64 = d.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(GameError::BadDistribution { index: i, sum });
        }
    }
    let pointwise_max: Vec<f64> = (0..support)
        .map(|l| distributions.iter().map(|d| d[l]).fold(0.0, f64::max))
        .collect();
    let sum_max: f64 = pointwise_max.iter().sum();
    let nu_star: Vec<f64> = pointwise_max.iter().map(|v| v / sum_max).collect();
    let mut minimax = 0.0_f64;
    for d in distributions {
        let mut ratio = 0.0_f64;
        for (p, nu) in d.iter().zip(nu_star.iter()) {
            if *nu > 0.0 {
                ratio = ratio.max(p / nu);
            } else if *p > 0.0 {
                ratio = f64::INFINITY;
            }
        }
        minimax = minimax.max(ratio);
    }
    let gap = (sum_max - minimax).abs();
    if gap > 1e-9 {
        return Err(GameError::IdentityGap(gap));
    }
    Ok(ClassicalGuess { sum_max, minimax, nu_star })
}
