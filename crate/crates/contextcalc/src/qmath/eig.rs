//! Hermitian eigendecomposition via cyclic Jacobi on the real symmetric
//! embedding, plus an analytic 2x2 fast path used by the minimax solver.

use num_complex::Complex64;

use super::{ComplexMatrix, QmathError};

/// Off-diagonal convergence threshold, relative to the Frobenius norm.
const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;

/// Eigenvalues (descending) and matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
}

impl HermitianEigen {
    /// Rebuilds `V diag(values) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, v) in self.vectors.iter().enumerate() {
            let lam = self.values[k];
            for i in 0..n {
                for j in 0..n {
                    let add = v[i] * v[j].conj() * lam;
                    let cur = out.get(i, j);
                    out.set(i, j, cur + add);
                }
            }
        }
        out
    }
}

/// Cyclic Jacobi on a dense symmetric matrix. Returns eigenvalues and the
/// accumulated rotation matrix with eigenvectors as columns.
fn jacobi_symmetric(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = {
        let fro: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        fro.max(1.0)
    };
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= JACOBI_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = c * apj - s * aqj;
                    a[q * n + j] = s * apj + c * aqj;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    let values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    (values, v)
}

/// Analytic eigendecomposition for a 2x2 Hermitian matrix, descending order.
pub(crate) fn eig2_hermitian(
    a: f64,
    b: Complex64,
    d: f64,
) -> ([f64; 2], [[Complex64; 2]; 2]) {
    let m = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = (half * half + b.norm_sqr()).sqrt();
    let l1 = m + r;
    let l2 = m - r;
    if r <= 1e-300 || b.norm_sqr() <= 1e-300 * r * r {
        // Already diagonal.
        if a >= d {
            (
                [a, d],
                [
                    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                ],
            )
        } else {
            (
                [d, a],
                [
                    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                ],
            )
        }
    } else {
        let v1 = [b, Complex64::new(l1 - a, 0.0)];
        let n1 = (v1[0].norm_sqr() + v1[1].norm_sqr()).sqrt();
        let v1 = [v1[0] / n1, v1[1] / n1];
        let v2 = [-v1[1].conj(), v1[0].conj()];
        ([l1, l2], [v1, v2])
    }
}

/// Eigendecomposition of a Hermitian `ComplexMatrix`.
///
/// The matrix is embedded as the real symmetric `[[Re, -Im], [Im, Re]]`, the
/// embedding is diagonalized by cyclic Jacobi, and one complex eigenvector is
/// recovered from each doubled real pair by residual-pivoted Gram-Schmidt.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen, QmathError> {
    if m.rows() != m.cols() {
        return Err(QmathError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dev = m.hermitian_deviation();
    if dev > 1e-10 {
        return Err(QmathError::NotHermitian { max_dev: dev });
    }
    let n = m.rows();
    if n == 1 {
        return Ok(HermitianEigen {
            values: vec![m.get(0, 0).re],
            vectors: vec![vec![Complex64::new(1.0, 0.0)]],
        });
    }
    if n == 2 {
        let (vals, vecs) = eig2_hermitian(m.get(0, 0).re, m.get(0, 1), m.get(1, 1).re);
        return Ok(HermitianEigen {
            values: vals.to_vec(),
            vectors: vec![vecs[0].to_vec(), vecs[1].to_vec()],
        });
    }

    // Symmetrize against rounding before embedding.
    let mut emb = vec![0.0; (2 * n) * (2 * n)];
    for i in 0..n {
        for j in 0..n {
            let z = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
            emb[i * 2 * n + j] = z.re;
            emb[(i + n) * 2 * n + (j + n)] = z.re;
            emb[i * 2 * n + (j + n)] = -z.im;
            emb[(i + n) * 2 * n + j] = z.im;
        }
    }
    let (vals, vmat) = jacobi_symmetric(&mut emb, 2 * n);

    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());

    let scale = vals.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
    let group_tol = 1e-13 * scale;

    let mut kept_vecs: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut kept_vals: Vec<f64> = Vec::with_capacity(n);

    let mut g_start = 0;
    while g_start < 2 * n {
        let mut g_end = g_start + 1;
        while g_end < 2 * n
            && (vals[order[g_end - 1]] - vals[order[g_end]]).abs() <= group_tol
        {
            g_end += 1;
        }
        // Complexify every real eigenvector of the group.
        let mut cands: Vec<Vec<Complex64>> = order[g_start..g_end]
            .iter()
            .map(|&col| {
                (0..n)
                    .map(|i| Complex64::new(vmat[i * 2 * n + col], vmat[(i + n) * 2 * n + col]))
                    .collect()
            })
            .collect();
        let group_val: f64 = order[g_start..g_end].iter().map(|&c| vals[c]).sum::<f64>()
            / (g_end - g_start) as f64;
        // Residual-pivoted Gram-Schmidt: each doubled copy collapses to zero.
        loop {
            let mut best = None;
            let mut best_norm = 0.0;
            for (ci, cand) in cands.iter().enumerate() {
                let nrm: f64 = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if nrm > best_norm {
                    best_norm = nrm;
                    best = Some(ci);
                }
            }
            let Some(ci) = best else { break };
            if best_norm < 0.5 {
                break;
            }
            let mut v = cands.swap_remove(ci);
            for _ in 0..2 {
                for k in &kept_vecs {
                    let inner: Complex64 =
                        k.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
                    for (vi, ki) in v.iter_mut().zip(k.iter()) {
                        *vi -= inner * ki;
                    }
                }
            }
            let nrm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm < 0.5 {
                continue;
            }
            for vi in v.iter_mut() {
                *vi /= nrm;
            }
            kept_vecs.push(v);
            kept_vals.push(group_val);
            // Orthogonalize remaining candidates in the group against the keep.
            let kept = kept_vecs.last().unwrap().clone();
            for cand in cands.iter_mut() {
                let inner: Complex64 = kept
                    .iter()
                    .zip(cand.iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (c, k) in cand.iter_mut().zip(kept.iter()) {
                    *c -= inner * k;
                }
            }
        }
        g_start = g_end;
    }

    if kept_vecs.len() != n {
        return Err(QmathError::EigenExtraction {
            expected: n,
            got: kept_vecs.len(),
        });
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| kept_vals[j].partial_cmp(&kept_vals[i]).unwrap());
    Ok(HermitianEigen {
        values: idx.iter().map(|&i| kept_vals[i]).collect(),
        vectors: idx.iter().map(|&i| kept_vecs[i].clone()).collect(),
    })
}
