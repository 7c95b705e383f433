//! Dense complex linear algebra and the primitive quantum objects and
//! distances the rest of the toolkit is built on.
//!
//! Everything here is immutable after construction and safe to share across
//! threads; RNG state is caller-owned and seed-derived.

mod eig;
mod haar;

pub use eig::{hermitian_eig, HermitianEigen};
pub use haar::{haar_unitary, haar_unitary_with};

pub(crate) use eig::eig2_hermitian;
pub(crate) use haar::stream_rng;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Hermiticity tolerance for density operators (entrywise).
pub const DENSITY_HERM_TOL: f64 = 1e-12;
/// Trace tolerance for density operators.
pub const DENSITY_TRACE_TOL: f64 = 1e-12;
/// Minimum-eigenvalue tolerance for positivity checks.
pub const PSD_TOL: f64 = 1e-10;
/// Relative support cutoff used by `dmax_quantum`.
pub const DMAX_SUPPORT_CUTOFF: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum QmathError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {max_dev:.3e})")]
    NotHermitian { max_dev: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("matrix contains a non-finite entry")]
    NonFiniteEntry,
    #[error("density operator trace is {trace:.17} (expected 1)")]
    TraceNotOne { trace: f64 },
    #[error("operator has negative eigenvalue {min_eig:.3e}")]
    NotPositive { min_eig: f64 },
    #[error("effect eigenvalue {eig:.6} outside [0, 1]")]
    EffectOutOfRange { eig: f64 },
    #[error("POVM effects sum to identity with deviation {max_dev:.3e}")]
    PovmNotComplete { max_dev: f64 },
    #[error("operation requires a qubit, got dimension {dim}")]
    NotQubit { dim: usize },
    #[error("Bloch vector norm {norm:.17} exceeds 1")]
    BlochTooLong { norm: f64 },
    #[error("eigenvector extraction expected {expected} vectors, got {got}")]
    EigenExtraction { expected: usize, got: usize },
}

/// Extended real: a finite value or a distinguished +infinity.
///
/// Keeps infinities out of ordinary floating-point arithmetic; callers must
/// branch explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinite,
}

impl ExtReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// The finite value, or `f64::INFINITY` for display and comparisons.
    pub fn as_f64(&self) -> f64 {
        match self {
            ExtReal::Finite(v) => *v,
            ExtReal::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(*v),
            ExtReal::Infinite => None,
        }
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ExtReal::Finite(v)),
            Raw::Str(s) if s == "inf" => Ok(ExtReal::Infinite),
            Raw::Str(s) => Err(D::Error::custom(format!("invalid ExtReal: {s}"))),
        }
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self, QmathError> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(QmathError::DimMismatch {
                    left: c,
                    right: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        let m = ComplexMatrix { rows: r, cols: c, data };
        if !m.all_finite() {
            return Err(QmathError::NonFiniteEntry);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + aik * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `M = M^dagger`.
    pub fn hermitian_deviation(&self) -> f64 {
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// `Re Tr(self * other)`.
    pub fn re_trace_product(&self, other: &Self) -> f64 {
        assert_eq!(self.cols, other.rows);
        let mut acc = 0.0;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let z = self.get(i, k) * other.get(k, i);
                acc += z.re;
            }
        }
        acc
    }

    pub fn pauli_x() -> Self {
        ComplexMatrix::from_rows(vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
        .unwrap()
    }

    pub fn pauli_y() -> Self {
        ComplexMatrix::from_rows(vec![
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ])
        .unwrap()
    }

    pub fn pauli_z() -> Self {
        ComplexMatrix::from_rows(vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
        ])
        .unwrap()
    }

    /// Outer product `|ket><ket|` of a (not necessarily normalized) vector.
    pub fn projector(ket: &[Complex64]) -> Self {
        let n = ket.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, ket[i] * ket[j].conj());
            }
        }
        m
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| [self.get(i, j).re, self.get(i, j).im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = ComplexMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(D::Error::custom("ragged complex matrix"));
            }
            for (j, &[re, im]) in row.iter().enumerate() {
                if !re.is_finite() || !im.is_finite() {
                    return Err(D::Error::custom("non-finite matrix entry"));
                }
                m.set(i, j, Complex64::new(re, im));
            }
        }
        Ok(m)
    }
}

/// Hermitian, unit-trace, positive matrix on a D-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dim: usize,
    matrix: ComplexMatrix,
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, QmathError> {
        if matrix.rows() != matrix.cols() {
            return Err(QmathError::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if !matrix.all_finite() {
            return Err(QmathError::NonFiniteEntry);
        }
        let dev = matrix.hermitian_deviation();
        if dev > DENSITY_HERM_TOL {
            return Err(QmathError::NotHermitian { max_dev: dev });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TRACE_TOL || tr.im.abs() > DENSITY_TRACE_TOL {
            return Err(QmathError::TraceNotOne { trace: tr.re });
        }
        let eig = hermitian_eig(&matrix)?;
        let min_eig = *eig.values.last().unwrap();
        if min_eig < -PSD_TOL {
            return Err(QmathError::NotPositive { min_eig });
        }
        Ok(DensityOperator { dim: matrix.rows(), matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator {
            dim,
            matrix: ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64),
        }
    }

    /// Pure state from a ket; the ket is normalized first.
    pub fn pure(ket: &[Complex64]) -> Result<Self, QmathError> {
        let norm: f64 = ket.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(QmathError::TraceNotOne { trace: 0.0 });
        }
        let normed: Vec<Complex64> = ket.iter().map(|z| z / norm).collect();
        DensityOperator::new(ComplexMatrix::projector(&normed))
    }

    /// Convex mixture of density operators.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self, QmathError> {
        let dim = parts
            .first()
            .map(|(_, d)| d.dim)
            .ok_or(QmathError::DimMismatch { left: 0, right: 0 })?;
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (w, d) in parts {
            if d.dim != dim {
                return Err(QmathError::DimMismatch { left: dim, right: d.dim });
            }
            acc = acc.add(&d.matrix.scale_re(*w));
        }
        DensityOperator::new(acc)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        DensityOperator::new(m).map_err(D::Error::custom)
    }
}

/// POVM: positive effects summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    effects: Vec<ComplexMatrix>,
}

impl Serialize for Povm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.effects.serialize(s)
    }
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>) -> Result<Self, QmathError> {
        let dim = effects
            .first()
            .map(|e| e.rows())
            .ok_or(QmathError::DimMismatch { left: 0, right: 0 })?;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for e in &effects {
            if e.rows() != dim || e.cols() != dim {
                return Err(QmathError::DimMismatch { left: dim, right: e.rows() });
            }
            let dev = e.hermitian_deviation();
            if dev > PSD_TOL {
                return Err(QmathError::NotHermitian { max_dev: dev });
            }
            let eig = hermitian_eig(e)?;
            let min_eig = *eig.values.last().unwrap();
            if min_eig < -PSD_TOL {
                return Err(QmathError::NotPositive { min_eig });
            }
            sum = sum.add(e);
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > PSD_TOL {
            return Err(QmathError::PovmNotComplete { max_dev: dev });
        }
        Ok(Povm { dim, effects })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Two-outcome projective measurement along a Bloch axis; the first
    /// outcome projects onto the +axis eigenstate.
    pub fn qubit_axis(axis: &BlochVector) -> Result<Self, QmathError> {
        let n = axis.norm();
        if n < 1e-12 {
            return Err(QmathError::BlochTooLong { norm: n });
        }
        let unit = BlochVector::new(axis.x / n, axis.y / n, axis.z / n)?;
        let plus = bloch_to_density(&unit);
        let minus =
            BlochVector::new(-unit.x, -unit.y, -unit.z).map(|b| bloch_to_density(&b))?;
        Povm::new(vec![plus.matrix().clone(), minus.matrix().clone()])
    }
}

impl<'de> Deserialize<'de> for Povm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let effects: Vec<ComplexMatrix> = Vec::deserialize(d)?;
        Povm::new(effects).map_err(D::Error::custom)
    }
}

/// Point in (or on) the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, QmathError> {
        let v = BlochVector { x, y, z };
        let n = v.norm();
        if !n.is_finite() || n > 1.0 + 1e-12 {
            return Err(QmathError::BlochTooLong { norm: n });
        }
        Ok(v)
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// Bloch vector of a qubit density operator.
pub fn density_to_bloch(rho: &DensityOperator) -> Result<BlochVector, QmathError> {
    if rho.dim() != 2 {
        return Err(QmathError::NotQubit { dim: rho.dim() });
    }
    let m = rho.matrix();
    let x = m.re_trace_product(&ComplexMatrix::pauli_x());
    let y = m.re_trace_product(&ComplexMatrix::pauli_y());
    let z = m.re_trace_product(&ComplexMatrix::pauli_z());
    BlochVector::new(x, y, z)
}

/// Qubit density operator `(I + v . sigma)/2`.
pub fn bloch_to_density(v: &BlochVector) -> DensityOperator {
    let mut m = ComplexMatrix::zeros(2, 2);
    m.set(0, 0, Complex64::new((1.0 + v.z) / 2.0, 0.0));
    m.set(1, 1, Complex64::new((1.0 - v.z) / 2.0, 0.0));
    m.set(0, 1, Complex64::new(v.x / 2.0, -v.y / 2.0));
    m.set(1, 0, Complex64::new(v.x / 2.0, v.y / 2.0));
    DensityOperator::new(m).expect("Bloch ball point is a valid state")
}

/// Trace distance `0.5 * sum |eig(a - b)|`.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64, QmathError> {
    if a.dim() != b.dim() {
        return Err(QmathError::DimMismatch { left: a.dim(), right: b.dim() });
    }
    let diff = a.matrix().sub(b.matrix());
    let eig = hermitian_eig(&diff)?;
    Ok(0.5 * eig.values.iter().map(|v| v.abs()).sum::<f64>())
}

/// Max-relative entropy `-log2 max{y : y a <= b}`.
///
/// Computed as `log2 lambda_max(b^{-1/2} a b^{-1/2})` on the support of `b`;
/// `Infinite` when `a` has weight outside that support.
pub fn dmax_quantum(a: &DensityOperator, b: &DensityOperator) -> Result<ExtReal, QmathError> {
    if a.dim() != b.dim() {
        return Err(QmathError::DimMismatch { left: a.dim(), right: b.dim() });
    }
    let dim = a.dim();
    let eig_b = hermitian_eig(b.matrix())?;
    let max_eig = eig_b.values[0].max(0.0);
    let cutoff = DMAX_SUPPORT_CUTOFF * max_eig;
    let kept: Vec<usize> = (0..dim).filter(|&i| eig_b.values[i] > cutoff).collect();
    // Weight of a on the discarded directions.
    for i in 0..dim {
        if eig_b.values[i] > cutoff {
            continue;
        }
        let v = &eig_b.vectors[i];
        let mut comp = 0.0;
        for r in 0..dim {
            let mut av = Complex64::new(0.0, 0.0);
            for (c, vc) in v.iter().enumerate() {
                av += a.matrix().get(r, c) * vc;
            }
            comp += (v[r].conj() * av).re;
        }
        if comp > 1e-9 {
            return Ok(ExtReal::Infinite);
        }
    }
    // b^{-1/2} on the kept support.
    let mut b_inv_half = ComplexMatrix::zeros(dim, dim);
    for &i in &kept {
        let w = 1.0 / eig_b.values[i].sqrt();
        let v = &eig_b.vectors[i];
        for r in 0..dim {
            for c in 0..dim {
                let cur = b_inv_half.get(r, c);
                b_inv_half.set(r, c, cur + v[r] * v[c].conj() * w);
            }
        }
    }
    let sandwiched = b_inv_half.matmul(a.matrix()).matmul(&b_inv_half);
    // Symmetrize rounding noise before the eigen call.
    let sym = sandwiched.add(&sandwiched.adjoint()).scale_re(0.5);
    let eig = hermitian_eig(&sym)?;
    let lam = eig.values[0];
    if lam <= 0.0 {
        return Ok(ExtReal::Infinite);
    }
    Ok(ExtReal::Finite(lam.log2().max(0.0)))
}

/// Born rule `Re Tr(state * effect)`.
pub fn born_probability(
    state: &DensityOperator,
    effect: &ComplexMatrix,
) -> Result<f64, QmathError> {
    if effect.rows() != state.dim() || effect.cols() != state.dim() {
        return Err(QmathError::DimMismatch { left: state.dim(), right: effect.rows() });
    }
    let eig = hermitian_eig(effect)?;
    let max_eig = eig.values[0];
    let min_eig = *eig.values.last().unwrap();
    if min_eig < -PSD_TOL || max_eig > 1.0 + PSD_TOL {
        return Err(QmathError::EffectOutOfRange {
            eig: if min_eig < -PSD_TOL { min_eig } else { max_eig },
        });
    }
    Ok(state.matrix().re_trace_product(effect))
}

/// Common computational-basis kets for tests and configs.
pub mod kets {
    use num_complex::Complex64;

    pub fn zero() -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
    }

    pub fn one() -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
    }

    pub fn plus() -> Vec<Complex64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)]
    }

    pub fn minus() -> Vec<Complex64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)]
    }

    /// Equatorial qubit state `(|0> + e^{i phase}|1>)/sqrt(2)`.
    pub fn equatorial(phase: f64) -> Vec<Complex64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![
            Complex64::new(s, 0.0),
            Complex64::new(phase.cos() * s, phase.sin() * s),
        ]
    }
}

#[doc(hidden)]
pub mod test_support {
    //! Random quantum objects for tests; seeded RNG is caller-owned.

    use super::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            let d: f64 = rng.sample(StandardNormal);
            m.set(i, i, Complex64::new(d, 0.0));
            for j in (i + 1)..dim {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                m.set(i, j, Complex64::new(re, im));
                m.set(j, i, Complex64::new(re, -im));
            }
        }
        m
    }

    /// Random full-rank density operator from a Ginibre square.
    pub fn random_density<R: Rng>(dim: usize, rng: &mut R) -> DensityOperator {
        let mut g = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                g.set(i, j, Complex64::new(re, im));
            }
        }
        let gg = g.matmul(&g.adjoint());
        let tr = gg.trace().re;
        DensityOperator::new(gg.scale_re(1.0 / tr)).unwrap()
    }

    pub fn random_pure<R: Rng>(dim: usize, rng: &mut R) -> DensityOperator {
        let ket: Vec<Complex64> = (0..dim)
            .map(|_| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })
            .collect();
        DensityOperator::pure(&ket).unwrap()
    }

    pub fn random_unit_bloch<R: Rng>(rng: &mut R) -> BlochVector {
        loop {
            let x: f64 = rng.sample(StandardNormal);
            let y: f64 = rng.sample(StandardNormal);
            let z: f64 = rng.sample(StandardNormal);
            let n = (x * x + y * y + z * z).sqrt();
            if n > 1e-6 {
                return BlochVector::new(x / n, y / n, z / n).unwrap();
            }
        }
    }
}
