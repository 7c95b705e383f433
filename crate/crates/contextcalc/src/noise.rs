//! Channel bookkeeping and noise-threshold analysis: average gate fidelity,
//! depolarizing thresholds, entanglement-breaking and injectivity tests.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qmath::{hermitian_eig, ComplexMatrix, DensityOperator, QmathError};

/// Kraus-completeness tolerance.
pub const KRAUS_TOL: f64 = 1e-10;
/// Relative singular-value cutoff for the transfer-matrix rank.
pub const RANK_TOL: f64 = 1e-10;
/// PPT tolerance on the minimum eigenvalue of the partially transposed Choi.
pub const PPT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("depolarizing parameter {0} outside [0, 1]")]
    BadParameter(f64),
    #[error("Kraus operators must be {dim}x{dim}, got {rows}x{cols}")]
    KrausShape { dim: usize, rows: usize, cols: usize },
    #[error("Kraus completeness violated: sum K^dag K deviates from I by {0:.3e}")]
    KrausIncomplete(f64),
    #[error("channel dimension {left} does not match state dimension {right}")]
    DimMismatch { left: usize, right: usize },
    #[error(transparent)]
    Qmath(#[from] QmathError),
}

/// Channel form: a named depolarizing family or an explicit Kraus list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelForm {
    Depolarizing(f64),
    Kraus(Vec<ComplexMatrix>),
}

/// A quantum channel on a D-dimensional system.
#[derive(Debug, Clone)]
pub struct ChannelSpec {
    dim: usize,
    form: ChannelForm,
}

impl Serialize for ChannelSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ChannelSpec", 2)?;
        st.serialize_field("dim", &self.dim)?;
        match &self.form {
            ChannelForm::Depolarizing(p) => st.serialize_field("depolarizing", p)?,
            ChannelForm::Kraus(ops) => st.serialize_field("kraus", ops)?,
        }
        st.end()
    }
}

impl ChannelSpec {
    pub fn depolarizing(dim: usize, p: f64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ChannelError::BadParameter(p));
        }
        Ok(ChannelSpec { dim, form: ChannelForm::Depolarizing(p) })
    }

    pub fn identity(dim: usize) -> Self {
        ChannelSpec { dim, form: ChannelForm::Depolarizing(0.0) }
    }

    pub fn kraus(dim: usize, operators: Vec<ComplexMatrix>) -> Result<Self, ChannelError> {
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &operators {
            if k.rows() != dim || k.cols() != dim {
                return Err(ChannelError::KrausShape {
                    dim,
                    rows: k.rows(),
                    cols: k.cols(),
                });
            }
            sum = sum.add(&k.adjoint().matmul(k));
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > KRAUS_TOL {
            return Err(ChannelError::KrausIncomplete(dev));
        }
        Ok(ChannelSpec { dim, form: ChannelForm::Kraus(operators) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &ChannelForm {
        &self.form
    }

    /// Linear action on an arbitrary operator.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix, ChannelError> {
        if x.rows() != self.dim || x.cols() != self.dim {
            return Err(ChannelError::DimMismatch { left: self.dim, right: x.rows() });
        }
        match &self.form {
            ChannelForm::Depolarizing(p) => {
                let tr = x.trace();
                let mixed = ComplexMatrix::identity(self.dim)
                    .scale(tr * Complex64::new(*p / self.dim as f64, 0.0));
                Ok(x.scale_re(1.0 - p).add(&mixed))
            }
            ChannelForm::Kraus(ops) => {
                let mut out = ComplexMatrix::zeros(self.dim, self.dim);
                for k in ops {
                    out = out.add(&k.matmul(x).matmul(&k.adjoint()));
                }
                Ok(out)
            }
        }
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator, ChannelError> {
        let out = self.apply_matrix(rho.matrix())?;
        Ok(DensityOperator::new(out)?)
    }

    /// Choi state `(1/D) sum_ij |i><j| (x) E(|i><j|)` on the D^2 space.
    pub fn choi(&self) -> Result<ComplexMatrix, ChannelError> {
        let d = self.dim;
        let mut j = ComplexMatrix::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                let mut unit = ComplexMatrix::zeros(d, d);
                unit.set(a, b, Complex64::new(1.0, 0.0));
                let out = self.apply_matrix(&unit)?;
                for k in 0..d {
                    for l in 0..d {
                        j.set(a * d + k, b * d + l, out.get(k, l) / d as f64);
                    }
                }
            }
        }
        Ok(j)
    }

    /// Transfer matrix `T[(i,j),(k,l)] = <i| E(|k><l|) |j>`.
    pub fn transfer_matrix(&self) -> Result<ComplexMatrix, ChannelError> {
        let d = self.dim;
        let mut t = ComplexMatrix::zeros(d * d, d * d);
        for k in 0..d {
            for l in 0..d {
                let mut unit = ComplexMatrix::zeros(d, d);
                unit.set(k, l, Complex64::new(1.0, 0.0));
                let out = self.apply_matrix(&unit)?;
                for i in 0..d {
                    for j in 0..d {
                        t.set(i * d + j, k * d + l, out.get(i, j));
                    }
                }
            }
        }
        Ok(t)
    }
}

impl<'de> Deserialize<'de> for ChannelSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            #[serde(default)]
            depolarizing: Option<f64>,
            #[serde(default)]
            kraus: Option<Vec<ComplexMatrix>>,
        }
        let raw = Raw::deserialize(d)?;
        match (raw.depolarizing, raw.kraus) {
            (Some(p), None) => ChannelSpec::depolarizing(raw.dim, p).map_err(D::Error::custom),
            (None, Some(ops)) => ChannelSpec::kraus(raw.dim, ops).map_err(D::Error::custom),
            _ => Err(D::Error::custom(
                "channel needs exactly one of `depolarizing` or `kraus`",
            )),
        }
    }
}

/// Harmonic number `1 + 1/2 + ... + 1/D`.
pub fn harmonic(d: usize) -> f64 {
    (1..=d).map(|k| 1.0 / k as f64).sum()
}

/// Average gate fidelity via the entanglement-fidelity relation
/// `F = (D F_e + 1) / (D + 1)` with `F_e` read off the Choi state.
pub fn average_gate_fidelity(ch: &ChannelSpec) -> Result<f64, ChannelError> {
    let d = ch.dim();
    let mut fe = 0.0;
    for a in 0..d {
        for b in 0..d {
            let mut unit = ComplexMatrix::zeros(d, d);
            unit.set(a, b, Complex64::new(1.0, 0.0));
            let out = ch.apply_matrix(&unit)?;
            fe += out.get(a, b).re;
        }
    }
    fe /= (d * d) as f64;
    Ok((d as f64 * fe + 1.0) / (d as f64 + 1.0))
}

/// Monte-Carlo cross-check of the average gate fidelity over Haar-random
/// pure states. Returns the sample mean and its standard error.
pub fn average_gate_fidelity_mc(
    ch: &ChannelSpec,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64), ChannelError> {
    let d = ch.dim();
    let mut rng = crate::qmath::stream_rng(seed, 0);
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 0..samples {
        let ket: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let ket: Vec<Complex64> = ket.iter().map(|z| z / norm).collect();
        let proj = ComplexMatrix::projector(&ket);
        let evolved = ch.apply_matrix(&proj)?;
        let v = proj.re_trace_product(&evolved);
        let k1 = (k + 1) as f64;
        let delta = v - mean;
        mean += delta / k1;
        m2 += delta * (v - mean);
    }
    let se = (m2 / (samples as f64 - 1.0) / samples as f64).sqrt();
    Ok((mean, se))
}

/// Noise regime of a depolarizing channel at a given strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Below the contextuality threshold: no PNC model exists.
    PreparationContextual,
    /// Qubit band `[1/2, 2/3)`: a PNC model exists but MNC fails.
    PncModelExistsMncFails,
    /// Between the two thresholds for D > 2: not decided by these bounds.
    Indeterminate,
    /// Entanglement-breaking regime: PNC and MNC both hold.
    PncAndMnc,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::PreparationContextual => "preparation-contextual",
            Regime::PncModelExistsMncFails => "PNC model exists, MNC fails",
            Regime::Indeterminate => "indeterminate",
            Regime::PncAndMnc => "preparation- and measurement-non-contextual",
        };
        write!(f, "{s}")
    }
}

/// Depolarizing-noise thresholds for dimension D and the regime of `p`.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport {
    pub dim: usize,
    pub p: f64,
    /// Average-gate-fidelity ceiling `H_D / D` for non-contextuality.
    pub fidelity_threshold: f64,
    /// Contextual for `p` strictly below `(D - H_D)/(D - 1)`.
    pub depol_contextual_below: f64,
    /// Entanglement-breaking at and above `D/(D + 1)`.
    pub depol_eb_at: f64,
    pub regime: Regime,
}

pub fn depolarizing_report(dim: usize, p: f64) -> Result<ThresholdReport, ChannelError> {
    if dim < 2 {
        return Err(ChannelError::DimMismatch { left: dim, right: 2 });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(ChannelError::BadParameter(p));
    }
    let d = dim as f64;
    let h = harmonic(dim);
    let contextual_below = (d - h) / (d - 1.0);
    let eb_at = d / (d + 1.0);
    let regime = if p < contextual_below {
        Regime::PreparationContextual
    } else if p >= eb_at {
        Regime::PncAndMnc
    } else if dim == 2 {
        Regime::PncModelExistsMncFails
    } else {
        Regime::Indeterminate
    };
    Ok(ThresholdReport {
        dim,
        p,
        fidelity_threshold: h / d,
        depol_contextual_below: contextual_below,
        depol_eb_at: eb_at,
        regime,
    })
}

/// Entanglement-breaking verdict from the Choi partial transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EbVerdict {
    /// Qubit channels only: PPT of the 2x2 Choi is sufficient.
    EntanglementBreaking,
    NotEntanglementBreaking,
    /// D > 2 and PPT passed: necessary condition only.
    PptNecessaryOnly,
}

/// Tests the Choi state's partial transpose. For qubits PPT decides
/// entanglement breaking; for D > 2 only a PPT failure is conclusive.
pub fn entanglement_breaking_check(ch: &ChannelSpec) -> Result<EbVerdict, ChannelError> {
    let d = ch.dim();
    let choi = ch.choi()?;
    // Partial transpose on the first tensor factor.
    let mut pt = ComplexMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for k in 0..d {
            for b in 0..d {
                for l in 0..d {
                    pt.set(b * d + k, a * d + l, choi.get(a * d + k, b * d + l));
                }
            }
        }
    }
    let eig = hermitian_eig(&pt)?;
    let min_eig = *eig.values.last().unwrap();
    if min_eig < -PPT_TOL {
        Ok(EbVerdict::NotEntanglementBreaking)
    } else if d == 2 {
        Ok(EbVerdict::EntanglementBreaking)
    } else {
        Ok(EbVerdict::PptNecessaryOnly)
    }
}

/// Injectivity report from the transfer-matrix rank.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Injectivity {
    pub injective: bool,
    pub transfer_rank: usize,
}

/// A channel is one-to-one iff its D^2 x D^2 transfer matrix has full rank
/// (singular values above `1e-10` relative to the largest).
pub fn channel_injectivity(ch: &ChannelSpec) -> Result<Injectivity, ChannelError> {
    let d = ch.dim();
    let t = ch.transfer_matrix()?;
    let gram = t.adjoint().matmul(&t);
    let sym = gram.add(&gram.adjoint()).scale_re(0.5);
    let eig = hermitian_eig(&sym)?;
    let smax = eig.values[0].max(0.0).sqrt();
    let rank = eig
        .values
        .iter()
        .filter(|&&v| v.max(0.0).sqrt() > RANK_TOL * smax)
        .count();
    Ok(Injectivity { injective: rank == d * d, transfer_rank: rank })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::test_support::random_density;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agf_identity_and_depolarizing() {
        assert!((average_gate_fidelity(&ChannelSpec::identity(3)).unwrap() - 1.0).abs() < 1e-12);
        for (d, p) in [(2usize, 0.3), (3, 0.7), (5, 0.1)] {
            let ch = ChannelSpec::depolarizing(d, p).unwrap();
            let expect = 1.0 - p * (d as f64 - 1.0) / d as f64;
            assert!((average_gate_fidelity(&ch).unwrap() - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn agf_affine_in_p() {
        // Three-point collinearity.
        let f = |p: f64| {
            average_gate_fidelity(&ChannelSpec::depolarizing(3, p).unwrap()).unwrap()
        };
        let (f0, f1, f2) = (f(0.2), f(0.5), f(0.8));
        assert!((f1 - 0.5 * (f0 + f2)).abs() < 1e-12);
    }

    #[test]
    fn agf_mc_cross_check() {
        // Random 2-Kraus qubit channel: amplitude damping.
        let g: f64 = 0.23;
        let mut k0 = ComplexMatrix::zeros(2, 2);
        k0.set(0, 0, Complex64::new(1.0, 0.0));
        k0.set(1, 1, Complex64::new((1.0 - g).sqrt(), 0.0));
        let mut k1 = ComplexMatrix::zeros(2, 2);
        k1.set(0, 1, Complex64::new(g.sqrt(), 0.0));
        let ch = ChannelSpec::kraus(2, vec![k0, k1]).unwrap();
        let formula = average_gate_fidelity(&ch).unwrap();
        let (mc, se) = average_gate_fidelity_mc(&ch, 100_000, 11).unwrap();
        assert!(
            (formula - mc).abs() < 3.0 * se,
            "formula {formula} mc {mc} se {se}"
        );
    }

    #[test]
    fn kraus_validation() {
        let half = ComplexMatrix::identity(2).scale_re(0.5);
        assert!(matches!(
            ChannelSpec::kraus(2, vec![half]),
            Err(ChannelError::KrausIncomplete(_))
        ));
    }

    #[test]
    fn depolarizing_thresholds() {
        let r = depolarizing_report(2, 0.2).unwrap();
        assert!((r.depol_contextual_below - 0.5).abs() < 1e-15);
        assert!((r.depol_eb_at - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.fidelity_threshold - 0.75).abs() < 1e-15);
        assert_eq!(r.regime, Regime::PreparationContextual);

        let r = depolarizing_report(3, 0.6).unwrap();
        assert!((r.depol_contextual_below - 7.0 / 12.0).abs() < 1e-15);
        assert!((r.depol_eb_at - 0.75).abs() < 1e-15);
        assert!((r.fidelity_threshold - 11.0 / 18.0).abs() < 1e-15);
        assert_eq!(r.regime, Regime::Indeterminate);

        assert_eq!(
            depolarizing_report(2, 0.55).unwrap().regime,
            Regime::PncModelExistsMncFails
        );
        assert_eq!(depolarizing_report(2, 0.7).unwrap().regime, Regime::PncAndMnc);
    }

    #[test]
    fn threshold_ordering() {
        for d in 2..=16 {
            let df = d as f64;
            let below = (df - harmonic(d)) / (df - 1.0);
            let eb = df / (df + 1.0);
            assert!(below < eb, "d={d}");
        }
    }

    #[test]
    fn eb_check_depolarizing() {
        let eb = |p: f64| {
            entanglement_breaking_check(&ChannelSpec::depolarizing(2, p).unwrap()).unwrap()
        };
        assert_eq!(eb(2.0 / 3.0), EbVerdict::EntanglementBreaking);
        assert_eq!(eb(0.8), EbVerdict::EntanglementBreaking);
        assert_eq!(eb(0.5), EbVerdict::NotEntanglementBreaking);
        assert_eq!(
            entanglement_breaking_check(&ChannelSpec::identity(2)).unwrap(),
            EbVerdict::NotEntanglementBreaking
        );
        // D=3: PPT pass is necessary-only.
        assert_eq!(
            entanglement_breaking_check(&ChannelSpec::depolarizing(3, 0.8).unwrap()).unwrap(),
            EbVerdict::PptNecessaryOnly
        );
    }

    #[test]
    fn injectivity_rank() {
        let inj = channel_injectivity(&ChannelSpec::identity(2)).unwrap();
        assert!(inj.injective);
        assert_eq!(inj.transfer_rank, 4);

        let inj = channel_injectivity(&ChannelSpec::depolarizing(2, 1.0).unwrap()).unwrap();
        assert!(!inj.injective);
        assert_eq!(inj.transfer_rank, 1);

        let inj = channel_injectivity(&ChannelSpec::depolarizing(2, 0.999).unwrap()).unwrap();
        assert!(inj.injective);
        assert_eq!(inj.transfer_rank, 4);
    }

    #[test]
    fn apply_preserves_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(3, &mut rng);
        let ch = ChannelSpec::depolarizing(3, 0.4).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert_eq!(out.dim(), 3);
    }
}
