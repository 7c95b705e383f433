//! Discrete ontological models: the universal outcome-product construction
//! and audits phrased over explicit probability vectors.

use std::collections::BTreeMap;

use serde::Serialize;

use super::ModelError;
use crate::optable::{
    operational_dmax_mixtures, Mixture, ProbTable,
};
use crate::qmath::ExtReal;

/// Ontic-space size cap for the outcome-product construction.
pub const ONTIC_CAP: usize = 1_000_000;

/// An explicit finite ontological model: distributions per preparation and
/// response functions per measurement outcome.
#[derive(Debug, Clone, Serialize)]
pub struct DiscreteModel {
    pub ontic_labels: Vec<String>,
    /// Preparation label -> distribution over the ontic space.
    pub mu: BTreeMap<String, Vec<f64>>,
    /// Measurement label -> per-outcome response vectors in [0, 1].
    pub xi: BTreeMap<String, Vec<Vec<f64>>>,
}

impl DiscreteModel {
    pub fn new(
        ontic_labels: Vec<String>,
        mu: BTreeMap<String, Vec<f64>>,
        xi: BTreeMap<String, Vec<Vec<f64>>>,
    ) -> Result<Self, ModelError> {
        let size = ontic_labels.len();
        for (label, dist) in &mu {
            if dist.len() != size {
                return Err(ModelError::Shape(format!(
                    "distribution for `{label}` has {} entries for {size} ontic states",
                    dist.len()
                )));
            }
            let sum: f64 = dist.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(ModelError::DistributionSum { label: label.clone(), sum });
            }
        }
        for (label, rows) in &xi {
            for row in rows {
                if row.len() != size {
                    return Err(ModelError::Shape(format!(
                        "response for `{label}` has {} entries for {size} ontic states",
                        row.len()
                    )));
                }
            }
            for l in 0..size {
                let sum: f64 = rows.iter().map(|r| r[l]).sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(ModelError::ResponseSum {
                        label: label.clone(),
                        ontic: l,
                        sum,
                    });
                }
            }
        }
        Ok(DiscreteModel { ontic_labels, mu, xi })
    }

    pub fn ontic_size(&self) -> usize {
        self.ontic_labels.len()
    }

    /// Outcome distribution predicted for `(preparation, measurement)`.
    pub fn predict(&self, prep: &str, meas: &str) -> Result<Vec<f64>, ModelError> {
        let mu = self
            .mu
            .get(prep)
            .ok_or_else(|| ModelError::UnknownLabel(prep.to_string()))?;
        let xi = self
            .xi
            .get(meas)
            .ok_or_else(|| ModelError::UnknownLabel(meas.to_string()))?;
        Ok(xi
            .iter()
            .map(|row| row.iter().zip(mu.iter()).map(|(x, m)| x * m).sum())
            .collect())
    }

    /// Worst reconstruction error against the table over all measurements.
    pub fn reconstruction_residual(
        &self,
        t: &ProbTable,
        prep: &str,
    ) -> Result<f64, ModelError> {
        let pi = t.prep_index(prep)?;
        let mut worst: f64 = 0.0;
        for (mi, meas) in t.measurements().iter().enumerate() {
            let predicted = self.predict(prep, &meas.label)?;
            for (oi, p) in predicted.iter().enumerate() {
                worst = worst.max((p - t.prob(mi, oi, pi)).abs());
            }
        }
        Ok(worst)
    }

    /// Convex-linear extension: the distribution of an ensemble preparation.
    pub fn ensemble_mu(&self, mix: &Mixture) -> Result<Vec<f64>, ModelError> {
        let mut acc = vec![0.0; self.ontic_size()];
        for (label, w) in mix.weights() {
            let mu = self
                .mu
                .get(label)
                .ok_or_else(|| ModelError::UnknownLabel(label.clone()))?;
            for (a, m) in acc.iter_mut().zip(mu.iter()) {
                *a += w * m;
            }
        }
        Ok(acc)
    }
}

/// Total variation distance between two discrete distributions.
pub fn discrete_tv(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Universal outcome-product model: one ontic state per joint outcome list
/// of all measurements, with delta response functions. Assignments are made
/// for the given extremal labels; mixtures extend convex-linearly through
/// [`DiscreteModel::ensemble_mu`].
pub fn kitchen_sink_model(
    t: &ProbTable,
    extremal_labels: &[String],
) -> Result<DiscreteModel, ModelError> {
    let arities: Vec<usize> = t.measurements().iter().map(|m| m.outcomes.len()).collect();
    let mut size = 1usize;
    for a in &arities {
        size = size
            .checked_mul(*a)
            .filter(|&s| s <= ONTIC_CAP)
            .ok_or(ModelError::OnticCap(ONTIC_CAP))?;
    }
    // Enumerate joint outcomes, last measurement fastest.
    let mut ontic_labels = Vec::with_capacity(size);
    let mut outcome_of = vec![vec![0usize; t.measurements().len()]; size];
    let mut digits = vec![0usize; arities.len()];
    for slot_digits in outcome_of.iter_mut() {
        let label = t
            .measurements()
            .iter()
            .zip(digits.iter())
            .map(|(m, &o)| format!("{}={}", m.label, m.outcomes[o]))
            .collect::<Vec<_>>()
            .join(",");
        ontic_labels.push(label);
        slot_digits.copy_from_slice(&digits);
        let mut carry = true;
        for pos in (0..arities.len()).rev() {
            if carry {
                digits[pos] += 1;
                if digits[pos] == arities[pos] {
                    digits[pos] = 0;
                } else {
                    carry = false;
                }
            }
        }
    }
    let mut mu = BTreeMap::new();
    for label in extremal_labels {
        let pi = t.prep_index(label)?;
        let dist: Vec<f64> = (0..size)
            .map(|slot| {
                (0..arities.len())
                    .map(|mi| t.prob(mi, outcome_of[slot][mi], pi))
                    .product()
            })
            .collect();
        mu.insert(label.clone(), dist);
    }
    let mut xi = BTreeMap::new();
    for (mi, meas) in t.measurements().iter().enumerate() {
        let rows: Vec<Vec<f64>> = (0..meas.outcomes.len())
            .map(|o| {
                (0..size)
                    .map(|slot| if outcome_of[slot][mi] == o { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        xi.insert(meas.label.clone(), rows);
    }
    DiscreteModel::new(ontic_labels, mu, xi)
}

/// Result of checking the guessing-lemma inequalities on a model.
#[derive(Debug, Clone, Serialize)]
pub struct GuessingLemmaReport {
    pub sum_max: f64,
    pub sum_min: f64,
    pub gamma1: ExtReal,
    pub gamma2: ExtReal,
    pub n_labels: usize,
    pub c_prep_bound: f64,
    pub holds_max: bool,
    pub holds_min: bool,
}

/// Checks `sum_lambda max_z mu_z <= gamma1 (1 + N C)` and
/// `sum_lambda min_z mu_z >= 1/gamma2 - N C` with the gammas obtained from
/// the operational max-relative entropy over a finite scan of candidate
/// reference preparations (each listed preparation plus the uniform mixture).
pub fn guessing_lemma_audit(
    model: &DiscreteModel,
    labels: &[String],
    theory: &ProbTable,
    c_prep_bound: f64,
) -> Result<GuessingLemmaReport, ModelError> {
    if labels.is_empty() {
        return Err(ModelError::Shape("no labels to audit".into()));
    }
    let mus: Vec<&Vec<f64>> = labels
        .iter()
        .map(|l| {
            model
                .mu
                .get(l)
                .ok_or_else(|| ModelError::UnknownLabel(l.clone()))
        })
        .collect::<Result<_, _>>()?;
    let size = model.ontic_size();
    let mut sum_max = 0.0;
    let mut sum_min = 0.0;
    for l in 0..size {
        let col: Vec<f64> = mus.iter().map(|m| m[l]).collect();
        sum_max += col.iter().cloned().fold(f64::MIN, f64::max);
        sum_min += col.iter().cloned().fold(f64::MAX, f64::min);
    }

    let mut candidates: Vec<Mixture> = theory
        .preparations()
        .iter()
        .map(|p| Mixture::singleton(p))
        .collect();
    candidates.push(Mixture::uniform(theory.preparations())?);

    let z_mixtures: Vec<Mixture> = labels.iter().map(|l| Mixture::singleton(l)).collect();
    let mut gamma1 = ExtReal::Infinite;
    let mut gamma2 = ExtReal::Infinite;
    for f in &candidates {
        let mut worst1 = ExtReal::Finite(1.0);
        let mut worst2 = ExtReal::Finite(1.0);
        for z in &z_mixtures {
            let d1 = operational_dmax_mixtures(theory, z, f)?;
            let d2 = operational_dmax_mixtures(theory, f, z)?;
            if d1.as_f64() > worst1.as_f64() {
                worst1 = d1;
            }
            if d2.as_f64() > worst2.as_f64() {
                worst2 = d2;
            }
        }
        let pow = |e: ExtReal| match e {
            ExtReal::Finite(v) => ExtReal::Finite(v.exp2()),
            ExtReal::Infinite => ExtReal::Infinite,
        };
        let c1 = pow(worst1);
        let c2 = pow(worst2);
        if c1.as_f64() < gamma1.as_f64() {
            gamma1 = c1;
        }
        if c2.as_f64() < gamma2.as_f64() {
            gamma2 = c2;
        }
    }

    let n = labels.len() as f64;
    let tol = 1e-6;
    let holds_max = match gamma1 {
        ExtReal::Finite(g) => sum_max <= g * (1.0 + n * c_prep_bound) + tol,
        ExtReal::Infinite => true,
    };
    let holds_min = {
        let inv = match gamma2 {
            ExtReal::Finite(g) => 1.0 / g,
            ExtReal::Infinite => 0.0,
        };
        sum_min >= inv - n * c_prep_bound - tol
    };
    Ok(GuessingLemmaReport {
        sum_max,
        sum_min,
        gamma1,
        gamma2,
        n_labels: labels.len(),
        c_prep_bound,
        holds_max,
        holds_min,
    })
}
