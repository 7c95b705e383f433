//! Theory-file ingestion, synthetic-experiment generation, and the
//! end-to-end analysis pipeline emitting witness reports.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use contextcalc::noise::{
    average_gate_fidelity, channel_injectivity, depolarizing_report, entanglement_breaking_check,
    ChannelError, ChannelSpec, EbVerdict, ThresholdReport,
};
use contextcalc::optable::{
    invariance_audit, operational_equivalence, table_guess_and_bounds, InvarianceAudit,
    Measurement, Mixture, ProbTable, TableError, WitnessReport,
};
use contextcalc::qgames::{
    alpha_min_quantum, beta_min_quantum, GameConfig, GameError,
};
use contextcalc::qmath::{born_probability, DensityOperator, ExtReal, Povm, QmathError};

pub const FORMAT_VERSION: &str = "1";
/// Default row-sum tolerance for ingestion.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format_version `{0}` (expected \"{FORMAT_VERSION}\")")]
    FormatVersion(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("duplicate probability row for measurement `{measurement}`, preparation `{preparation}`")]
    DuplicateRow { measurement: String, preparation: String },
    #[error("missing probability row for measurement `{measurement}`, preparation `{preparation}`")]
    MissingRow { measurement: String, preparation: String },
    #[error("row for measurement `{measurement}`, preparation `{preparation}` has {got} values for {need} outcomes")]
    RowArity {
        measurement: String,
        preparation: String,
        got: usize,
        need: usize,
    },
    #[error("row for measurement `{measurement}`, preparation `{preparation}` sums to {sum:.12}, beyond tolerance {tol:.1e}")]
    RowSum {
        measurement: String,
        preparation: String,
        sum: f64,
        tol: f64,
    },
    #[error("unknown label `{0}` referenced by a probability row or annotation")]
    UnknownLabel(String),
    #[error("quantum annotation error: {0}")]
    Annotation(String),
    #[error("bad groups/decoders: {0}")]
    Groups(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Qmath(#[from] QmathError),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Game(#[from] GameError),
}

impl CliError {
    /// Process exit code: 2 for validation problems, 3 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Table(TableError::LpFailure(_, _)) => 3,
            CliError::Game(GameError::NonConvergence { .. }) => 3,
            _ => 2,
        }
    }
}

/// One probability row of the on-disk theory file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbRow {
    pub measurement: String,
    pub preparation: String,
    pub values: Vec<f64>,
}

/// Optional quantum annotations carried by a theory file.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct QuantumAnnotations {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub states: BTreeMap<String, DensityOperator>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub povms: BTreeMap<String, Povm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelSpec>,
}

/// On-disk prepare-measure theory (format_version "1").
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoryFile {
    pub format_version: String,
    pub preparations: Vec<String>,
    pub measurements: Vec<Measurement>,
    pub probs: Vec<ProbRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumAnnotations>,
}

/// A validated theory plus whatever annotations and warnings ingestion
/// produced.
#[derive(Debug, Clone)]
pub struct IngestedTheory {
    pub table: ProbTable,
    pub quantum: Option<QuantumAnnotations>,
    pub warnings: Vec<String>,
    pub input_sha256: String,
    pub tolerance: f64,
}

/// Validates a parsed theory file into a `ProbTable`.
///
/// Rows whose sums deviate from 1 by more than `1e-12` but at most the
/// declared tolerance are renormalized with a warning; larger deviations are
/// errors naming the offending row.
pub fn validate_theory(
    file: &TheoryFile,
    tolerance_override: Option<f64>,
    input_sha256: String,
) -> Result<IngestedTheory, CliError> {
    if file.format_version != FORMAT_VERSION {
        return Err(CliError::FormatVersion(file.format_version.clone()));
    }
    let tolerance = tolerance_override
        .or(file.tolerance)
        .unwrap_or(DEFAULT_TOLERANCE);
    let mut warnings = Vec::new();

    let mut seen = std::collections::BTreeSet::new();
    for p in &file.preparations {
        if !seen.insert(p.clone()) {
            return Err(CliError::DuplicateLabel(p.clone()));
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for m in &file.measurements {
        if !seen.insert(m.label.clone()) {
            return Err(CliError::DuplicateLabel(m.label.clone()));
        }
    }

    // Collect rows, checking completeness and arity.
    let mut values: Vec<Vec<Vec<f64>>> = file
        .measurements
        .iter()
        .map(|m| vec![vec![f64::NAN; file.preparations.len()]; m.outcomes.len()])
        .collect();
    for row in &file.probs {
        let mi = file
            .measurements
            .iter()
            .position(|m| m.label == row.measurement)
            .ok_or_else(|| CliError::UnknownLabel(row.measurement.clone()))?;
        let pi = file
            .preparations
            .iter()
            .position(|p| *p == row.preparation)
            .ok_or_else(|| CliError::UnknownLabel(row.preparation.clone()))?;
        let need = file.measurements[mi].outcomes.len();
        if row.values.len() != need {
            return Err(CliError::RowArity {
                measurement: row.measurement.clone(),
                preparation: row.preparation.clone(),
                got: row.values.len(),
                need,
            });
        }
        if !values[mi][0][pi].is_nan() {
            return Err(CliError::DuplicateRow {
                measurement: row.measurement.clone(),
                preparation: row.preparation.clone(),
            });
        }
        let sum: f64 = row.values.iter().sum();
        if !sum.is_finite() || (sum - 1.0).abs() > tolerance {
            return Err(CliError::RowSum {
                measurement: row.measurement.clone(),
                preparation: row.preparation.clone(),
                sum,
                tol: tolerance,
            });
        }
        let renorm = (sum - 1.0).abs() > 1e-12;
        if renorm {
            warnings.push(format!(
                "renormalized row ({}, {}): sum deviated by {:.3e}",
                row.measurement,
                row.preparation,
                (sum - 1.0).abs()
            ));
        }
        for (oi, v) in row.values.iter().enumerate() {
            values[mi][oi][pi] = if renorm { v / sum } else { *v };
        }
    }
    for (mi, m) in file.measurements.iter().enumerate() {
        for (pi, p) in file.preparations.iter().enumerate() {
            if values[mi][0][pi].is_nan() {
                return Err(CliError::MissingRow {
                    measurement: m.label.clone(),
                    preparation: p.clone(),
                });
            }
        }
    }
    let table = ProbTable::new(
        file.preparations.clone(),
        file.measurements.clone(),
        values,
    )?;

    if let Some(q) = &file.quantum {
        for label in q.states.keys() {
            if !file.preparations.contains(label) {
                return Err(CliError::UnknownLabel(label.clone()));
            }
        }
        for label in q.povms.keys() {
            if !file.measurements.iter().any(|m| &m.label == label) {
                return Err(CliError::UnknownLabel(label.clone()));
            }
        }
        for (label, s) in &q.states {
            if s.dim() != q.dim {
                return Err(CliError::Annotation(format!(
                    "state `{label}` has dimension {} but the file declares {}",
                    s.dim(),
                    q.dim
                )));
            }
        }
        if let Some(ch) = &q.channel {
            if ch.dim() != q.dim {
                return Err(CliError::Annotation(format!(
                    "channel dimension {} does not match declared {}",
                    ch.dim(),
                    q.dim
                )));
            }
        }
    }

    Ok(IngestedTheory {
        table,
        quantum: file.quantum.clone(),
        warnings,
        input_sha256,
        tolerance,
    })
}

/// Parses and validates a theory file from a JSON string.
pub fn ingest_theory_str(
    json: &str,
    tolerance_override: Option<f64>,
) -> Result<IngestedTheory, CliError> {
    let sha = format!("{:x}", Sha256::digest(json.as_bytes()));
    let file: TheoryFile =
        serde_json::from_str(json).map_err(|e| CliError::Parse(e.to_string()))?;
    validate_theory(&file, tolerance_override, sha)
}

/// Parses and validates a theory file on disk.
pub fn ingest_theory(
    path: &Path,
    tolerance_override: Option<f64>,
) -> Result<IngestedTheory, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ingest_theory_str(&text, tolerance_override)
}

/// Shot model for table synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shots {
    Exact,
    Finite(u64),
}

/// Builds a theory file from labeled states and POVMs, optionally behind a
/// noise channel. Exact mode writes Born probabilities at full precision;
/// finite-shot mode draws one multinomial sample per (measurement,
/// preparation) cell, deterministically per seed.
pub fn simulate_table(
    states: &[(String, DensityOperator)],
    povms: &[(String, Povm)],
    channel: Option<&ChannelSpec>,
    shots: Shots,
    seed: u64,
) -> Result<TheoryFile, CliError> {
    use rand::Rng;
    use rand::SeedableRng;

    let dim = states
        .first()
        .map(|(_, s)| s.dim())
        .ok_or_else(|| CliError::Annotation("no states supplied".into()))?;
    let evolved: Vec<(String, DensityOperator)> = states
        .iter()
        .map(|(l, s)| {
            let out = match channel {
                Some(ch) => ch.apply(s)?,
                None => s.clone(),
            };
            Ok((l.clone(), out))
        })
        .collect::<Result<_, CliError>>()?;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut probs = Vec::new();
    let mut measurements = Vec::new();
    for (m_label, povm) in povms {
        let outcomes: Vec<String> = (1..=povm.len()).map(|i| i.to_string()).collect();
        measurements.push(Measurement { label: m_label.clone(), outcomes });
        for (p_label, rho) in &evolved {
            let exact: Vec<f64> = povm
                .effects()
                .iter()
                .map(|e| born_probability(rho, e).map(|v| v.clamp(0.0, 1.0)))
                .collect::<Result<_, _>>()?;
            let values = match shots {
                Shots::Exact => exact,
                Shots::Finite(n) => {
                    let mut counts = vec![0u64; exact.len()];
                    for _ in 0..n {
                        let draw: f64 = rng.gen_range(0.0..1.0);
                        let mut acc = 0.0;
                        let mut chosen = exact.len() - 1;
                        for (oi, p) in exact.iter().enumerate() {
                            acc += p;
                            if draw < acc {
                                chosen = oi;
                                break;
                            }
                        }
                        counts[chosen] += 1;
                    }
                    counts.iter().map(|c| *c as f64 / n as f64).collect()
                }
            };
            probs.push(ProbRow {
                measurement: m_label.clone(),
                preparation: p_label.clone(),
                values,
            });
        }
    }

    Ok(TheoryFile {
        format_version: FORMAT_VERSION.to_string(),
        preparations: states.iter().map(|(l, _)| l.clone()).collect(),
        measurements,
        probs,
        tolerance: Some(DEFAULT_TOLERANCE),
        quantum: Some(QuantumAnnotations {
            dim,
            states: evolved.into_iter().collect(),
            povms: povms.iter().cloned().collect(),
            channel: channel.cloned(),
        }),
    })
}

/// Quantum-side results attached to an analysis when state annotations
/// exist.
///
/// These are minimax values over *all* density operators for the annotated
/// (post-noise) states. The witness's own bounds always use the table-side
/// constants: under noise the annotated states shrink while the operational
/// constants stay invariant, and only the latter are valid in the
/// non-contextuality inequality.
#[derive(Debug, Clone, Serialize)]
pub struct QuantumBlock {
    pub alpha_quantum: ExtReal,
    pub beta_quantum: ExtReal,
    pub alpha_certificate_gap: f64,
    pub beta_certificate_gap: f64,
    pub qguess: ExtReal,
    /// |table alpha - quantum alpha| (and mirror), finite cases only.
    pub alpha_deviation: Option<f64>,
    pub beta_deviation: Option<f64>,
}

/// Channel-related results attached when a channel annotation exists.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdsBlock {
    pub average_gate_fidelity: f64,
    pub injective: bool,
    pub transfer_rank: usize,
    pub eb_verdict: EbVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depolarizing: Option<ThresholdReport>,
    pub invariance: InvarianceAudit,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool_version: String,
    pub input_sha256: String,
    pub seed: u64,
    pub tolerance: f64,
    pub groups: Vec<Vec<String>>,
    pub decoders: Vec<String>,
}

/// Full analysis output: witness values, equivalence classes, optional
/// quantum and noise blocks, and reproducibility provenance.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub witness: WitnessReport,
    pub equivalence_classes: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantum: Option<QuantumBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdsBlock>,
    pub warnings: Vec<String>,
    pub provenance: Provenance,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Short human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        use std::fmt::Write;
        let w = &self.witness;
        let _ = writeln!(out, "P_guess            = {:.9}", w.p_guess);
        let _ = writeln!(out, "alpha_min (table)  = {}", w.alpha_min);
        let _ = writeln!(out, "beta_min  (table)  = {}", w.beta_min);
        let _ = writeln!(out, "bound alpha/d      = {}", w.bound_alpha);
        let _ = writeln!(out, "bound 1-(d-1)/(d b)= {:.9}", w.bound_beta);
        let _ = writeln!(out, "c_lower            = {:.9}", w.c_lower);
        let _ = writeln!(out, "violated           = {}", w.violated);
        if let Some(q) = &self.quantum {
            let _ = writeln!(out, "alpha_min (quantum)= {}", q.alpha_quantum);
            let _ = writeln!(out, "beta_min  (quantum)= {}", q.beta_quantum);
            let _ = writeln!(out, "Q_guess            = {}", q.qguess);
        }
        if let Some(t) = &self.thresholds {
            let _ = writeln!(out, "avg gate fidelity  = {:.9}", t.average_gate_fidelity);
            let _ = writeln!(out, "injective          = {}", t.injective);
            if let Some(d) = &t.depolarizing {
                let _ = writeln!(out, "regime             = {}", d.regime);
            }
        }
        let _ = writeln!(out, "equivalence classes: {}", self.equivalence_classes.len());
        out
    }
}

/// Options for `analyze`.
#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub seed: u64,
    pub equivalence_tolerance: f64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { seed: 0, equivalence_tolerance: DEFAULT_TOLERANCE }
    }
}

fn equivalence_classes(
    table: &ProbTable,
    tol: f64,
) -> Result<Vec<Vec<String>>, CliError> {
    let labels = table.preparations();
    let mut class_of: Vec<usize> = (0..labels.len()).collect();
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            if class_of[j] != j {
                continue;
            }
            let eq = operational_equivalence(
                table,
                &Mixture::singleton(&labels[i]),
                &Mixture::singleton(&labels[j]),
                tol,
            )?;
            if eq.equivalent {
                class_of[j] = class_of[i];
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (i, label) in labels.iter().enumerate() {
        classes.entry(class_of[i]).or_default().push(label.clone());
    }
    Ok(classes.into_values().collect())
}

/// Runs the witness pipeline on an ingested theory: the table-side LP
/// quantities always, the quantum minimax side when state annotations
/// exist, and the noise blocks when a channel annotation exists.
pub fn analyze(
    ingested: &IngestedTheory,
    groups: &[Vec<String>],
    decoders: &[String],
    opts: &AnalyzeOptions,
) -> Result<AnalysisReport, CliError> {
    let table = &ingested.table;
    let witness = table_guess_and_bounds(table, groups, decoders)?;
    let classes = equivalence_classes(table, opts.equivalence_tolerance)?;

    let quantum = match &ingested.quantum {
        Some(q) if !q.states.is_empty() => {
            let mut grid = Vec::with_capacity(groups.len());
            for group in groups {
                let mut row = Vec::with_capacity(group.len());
                for label in group {
                    let s = q
                        .states
                        .get(label)
                        .ok_or_else(|| CliError::UnknownLabel(label.clone()))?;
                    row.push(s.clone());
                }
                grid.push(row);
            }
            let cfg = GameConfig::new(grid)?;
            let ensembles = cfg.ensemble_states();
            let alpha = alpha_min_quantum(&ensembles)?;
            let beta = beta_min_quantum(&ensembles)?;
            let qguess = match alpha.value {
                ExtReal::Finite(a) => ExtReal::Finite(a / cfg.d() as f64),
                ExtReal::Infinite => ExtReal::Infinite,
            };
            let alpha_deviation = match (witness.alpha_min, alpha.value) {
                (ExtReal::Finite(t), ExtReal::Finite(qv)) => Some((t - qv).abs()),
                _ => None,
            };
            let beta_deviation = match (witness.beta_min, beta.value) {
                (ExtReal::Finite(t), ExtReal::Finite(qv)) => Some((t - qv).abs()),
                _ => None,
            };
            Some(QuantumBlock {
                alpha_quantum: alpha.value,
                beta_quantum: beta.value,
                alpha_certificate_gap: alpha.certificate_gap,
                beta_certificate_gap: beta.certificate_gap,
                qguess,
                alpha_deviation,
                beta_deviation,
            })
        }
        _ => None,
    };

    let thresholds = match &ingested.quantum {
        Some(q) if q.channel.is_some() && !q.states.is_empty() && !q.povms.is_empty() => {
            let ch = q.channel.as_ref().unwrap();
            let inj = channel_injectivity(ch)?;
            let pairs: Vec<(String, String)> = groups
                .iter()
                .flat_map(|g| {
                    g.windows(2)
                        .map(|w| (w[0].clone(), w[1].clone()))
                        .collect::<Vec<_>>()
                })
                .collect();
            let invariance =
                invariance_audit(table, ch, &q.states, &q.povms, &pairs, Some(groups))?;
            let depolarizing = match ch.form() {
                contextcalc::noise::ChannelForm::Depolarizing(p) => {
                    Some(depolarizing_report(ch.dim(), *p)?)
                }
                _ => None,
            };
            Some(ThresholdsBlock {
                average_gate_fidelity: average_gate_fidelity(ch)?,
                injective: inj.injective,
                transfer_rank: inj.transfer_rank,
                eb_verdict: entanglement_breaking_check(ch)?,
                depolarizing,
                invariance,
            })
        }
        _ => None,
    };

    Ok(AnalysisReport {
        witness,
        equivalence_classes: classes,
        quantum,
        thresholds,
        warnings: ingested.warnings.clone(),
        provenance: Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_sha256: ingested.input_sha256.clone(),
            seed: opts.seed,
            tolerance: ingested.tolerance,
            groups: groups.to_vec(),
            decoders: decoders.to_vec(),
        },
    })
}

/// Parses `--groups "a,b;c,d"` into the n-by-d label grid.
pub fn parse_groups(spec: &str) -> Result<Vec<Vec<String>>, CliError> {
    let groups: Vec<Vec<String>> = spec
        .split(';')
        .map(|g| g.split(',').map(|s| s.trim().to_string()).collect())
        .collect();
    if groups.is_empty() || groups.iter().any(|g: &Vec<String>| g.is_empty()) {
        return Err(CliError::Groups(format!("empty group in `{spec}`")));
    }
    let d = groups[0].len();
    if groups.iter().any(|g| g.len() != d) {
        return Err(CliError::Groups(format!(
            "groups must share one width in `{spec}`"
        )));
    }
    Ok(groups)
}

/// Parses `--decoders "D1,D2"`.
pub fn parse_decoders(spec: &str) -> Vec<String> {
    spec.split(',').map(|s| s.trim().to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use contextcalc::qgames::polygon_experiment;

    fn square_file() -> TheoryFile {
        let exp = polygon_experiment(2).unwrap();
        simulate_table(&exp.preparations, &exp.measurements, None, Shots::Exact, 1).unwrap()
    }

    #[test]
    fn round_trip_and_validate() {
        let file = square_file();
        let json = serde_json::to_string_pretty(&file).unwrap();
        let ingested = ingest_theory_str(&json, None).unwrap();
        assert_eq!(ingested.table.n_preparations(), 8);
        assert!(ingested.warnings.is_empty());
        assert!(ingested.quantum.is_some());
    }

    #[test]
    fn rejects_bad_row_sum() {
        let mut file = square_file();
        file.probs[0].values = vec![0.6, 0.38];
        let json = serde_json::to_string(&file).unwrap();
        let err = ingest_theory_str(&json, None).unwrap_err();
        assert!(matches!(err, CliError::RowSum { .. }));
    }

    #[test]
    fn renormalizes_tiny_deviation_with_warning() {
        let mut file = square_file();
        // Within tolerance 1e-9 but above the warning floor of 1e-12.
        file.probs[0].values = vec![0.5 + 3e-10, 0.5];
        let json = serde_json::to_string(&file).unwrap();
        let ingested = ingest_theory_str(&json, None).unwrap();
        assert_eq!(ingested.warnings.len(), 1);
    }

    #[test]
    fn rejects_duplicate_and_missing_rows() {
        let mut file = square_file();
        let dup = file.probs[0].clone();
        file.probs.push(dup);
        let json = serde_json::to_string(&file).unwrap();
        assert!(matches!(
            ingest_theory_str(&json, None).unwrap_err(),
            CliError::DuplicateRow { .. }
        ));

        let mut file = square_file();
        file.probs.pop();
        let json = serde_json::to_string(&file).unwrap();
        assert!(matches!(
            ingest_theory_str(&json, None).unwrap_err(),
            CliError::MissingRow { .. }
        ));
    }

    #[test]
    fn rejects_duplicate_preparation_label() {
        let mut file = square_file();
        file.preparations[1] = file.preparations[0].clone();
        let json = serde_json::to_string(&file).unwrap();
        assert!(matches!(
            ingest_theory_str(&json, None).unwrap_err(),
            CliError::DuplicateLabel(_)
        ));
    }

    #[test]
    fn finite_shots_deterministic() {
        let exp = polygon_experiment(2).unwrap();
        let a = simulate_table(
            &exp.preparations,
            &exp.measurements,
            None,
            Shots::Finite(10_000),
            42,
        )
        .unwrap();
        let b = simulate_table(
            &exp.preparations,
            &exp.measurements,
            None,
            Shots::Finite(10_000),
            42,
        )
        .unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn groups_parsing() {
        let g = parse_groups("a,b;c,d").unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[1][1], "d");
        assert!(parse_groups("a,b;c").is_err());
    }
}
