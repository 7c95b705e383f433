//! Minimax over density operators by bisection on the level parameter with
//! Dykstra alternating projections deciding feasibility at each level.
//!
//! The feasibility sets are spectrahedra with cheap eigen-projections:
//! `{X >= L}` clips the negative part of `X - L`, and the unit-trace PSD set
//! projects the eigenvalue vector onto a scaled simplex.

use num_complex::Complex64;

use crate::qmath::{eig2_hermitian, ComplexMatrix};

/// Feasibility slack on the minimum eigenvalue.
const FEAS_EPS: f64 = 1e-10;
/// Max Dykstra sweeps per feasibility probe.
pub(crate) const MAX_SWEEPS: usize = 10_000;
/// Bisection stops when the bracket is narrower than this.
pub(crate) const BRACKET_TOL: f64 = 1e-7;

/// In-place cyclic Jacobi with complex rotations, for the projection hot
/// loop. Eigenvalues come out unsorted; the projections never need order.
fn complex_jacobi(m: &ComplexMatrix) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let n = m.rows();
    let mut a: Vec<Complex64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            (m.get(i, j) + m.get(j, i).conj()) * 0.5
        })
        .collect();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let scale = m.frobenius_norm().max(1.0);
    for _ in 0..40 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let b = apq.norm();
                if b <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / b;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns: A <- A U with U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]],
                // the phase chosen so the rotated off-diagonal is real.
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q] * phase.conj();
                    a[i * n + p] = aip * c - aiq * s;
                    a[i * n + q] = aip * s + aiq * c;
                }
                // Rows: A <- U^dagger A.
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j] * phase;
                    a[p * n + j] = apj * c - aqj * s;
                    a[q * n + j] = apj * s + aqj * c;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q] * phase.conj();
                    v[i * n + p] = vip * c - viq * s;
                    v[i * n + q] = vip * s + viq * c;
                }
            }
        }
    }
    let values: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    let vectors: Vec<Vec<Complex64>> = (0..n)
        .map(|col| (0..n).map(|row| v[row * n + col]).collect())
        .collect();
    (values, vectors)
}

/// Eigendecomposition with a fast analytic path for qubits.
fn eigh(m: &ComplexMatrix) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    if m.rows() == 2 {
        let (vals, vecs) = eig2_hermitian(m.get(0, 0).re, m.get(0, 1), m.get(1, 1).re);
        (vals.to_vec(), vec![vecs[0].to_vec(), vecs[1].to_vec()])
    } else {
        complex_jacobi(m)
    }
}

fn assemble(values: &[f64], vectors: &[Vec<Complex64>], dim: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (lam, v) in values.iter().zip(vectors.iter()) {
        if *lam == 0.0 {
            continue;
        }
        for i in 0..dim {
            for j in 0..dim {
                let cur = out.get(i, j);
                out.set(i, j, cur + v[i] * v[j].conj() * *lam);
            }
        }
    }
    out
}

/// Positive part: negative eigenvalues clipped to zero.
fn psd_clip(m: &ComplexMatrix) -> ComplexMatrix {
    let (vals, vecs) = eigh(m);
    let clipped: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
    assemble(&clipped, &vecs, m.rows())
}

fn min_eig(m: &ComplexMatrix) -> f64 {
    if m.rows() == 2 {
        let (vals, _) = eig2_hermitian(m.get(0, 0).re, m.get(0, 1), m.get(1, 1).re);
        vals[1]
    } else {
        let (vals, _) = complex_jacobi(m);
        vals.into_iter().fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn max_eig(m: &ComplexMatrix) -> f64 {
    if m.rows() == 2 {
        let (vals, _) = eig2_hermitian(m.get(0, 0).re, m.get(0, 1), m.get(1, 1).re);
        vals[0]
    } else {
        let (vals, _) = complex_jacobi(m);
        vals.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Euclidean projection of `d` onto `{x >= 0, sum x = total}`.
fn simplex_project(d: &[f64], total: f64) -> Vec<f64> {
    let mut sorted = d.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut css = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        css += u;
        let cand = (css - total) / (k + 1) as f64;
        if u - cand > 0.0 {
            theta = cand;
        }
    }
    d.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Projection onto `{X >= 0, Tr X = total}`.
fn project_trace_psd(m: &ComplexMatrix, total: f64) -> ComplexMatrix {
    let (vals, vecs) = eigh(m);
    let lam = simplex_project(&vals, total);
    assemble(&lam, &vecs, m.rows())
}

fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    m.add(&m.adjoint()).scale_re(0.5)
}

pub(crate) struct Probe {
    pub feasible: bool,
    pub point: ComplexMatrix,
}

/// One Dykstra feasibility probe over the listed spectrahedra.
///
/// `lower_bounds` supplies per-set projections `X -> max(X, L_x)`; when
/// `upper` is set the sets are `X <= U_x` instead. The last set is always
/// `{X >= 0, Tr X = trace_total}`. Violation is measured after the trace
/// projection, so a `feasible` verdict certifies the returned point.
fn dykstra_probe(
    bounds: &[ComplexMatrix],
    upper: bool,
    trace_total: f64,
    start: Option<&ComplexMatrix>,
    max_sweeps: usize,
) -> Probe {
    let dim = bounds[0].rows();
    let m = bounds.len();
    let mut point = match start {
        Some(p) => p.clone(),
        None => ComplexMatrix::identity(dim).scale_re(trace_total / dim as f64),
    };
    let mut corrections = vec![ComplexMatrix::zeros(dim, dim); m + 1];
    let mut prev_viol = f64::INFINITY;
    for sweep in 0..max_sweeps {
        for (i, bound) in bounds.iter().enumerate() {
            let y = point.add(&corrections[i]);
            let projected = if upper {
                bound.sub(&psd_clip(&bound.sub(&y)))
            } else {
                bound.add(&psd_clip(&y.sub(bound)))
            };
            corrections[i] = y.sub(&projected);
            point = projected;
        }
        let y = point.add(&corrections[m]);
        let projected = project_trace_psd(&symmetrize(&y), trace_total);
        corrections[m] = y.sub(&projected);
        point = projected;

        let mut viol: f64 = 0.0;
        for bound in bounds {
            let gap = if upper {
                -min_eig(&symmetrize(&bound.sub(&point)))
            } else {
                -min_eig(&symmetrize(&point.sub(bound)))
            };
            viol = viol.max(gap);
        }
        if upper {
            viol = viol.max(-min_eig(&point));
        }
        if viol <= FEAS_EPS {
            return Probe { feasible: true, point };
        }
        // Stalled well above the slack: the sets do not intersect. Dykstra
        // converges linearly toward a nonempty intersection, so a relative
        // plateau this flat only appears at a genuine positive gap.
        if sweep % 100 == 99 {
            if viol > 50.0 * FEAS_EPS && viol > 0.9995 * prev_viol {
                return Probe { feasible: false, point };
            }
            prev_viol = viol;
        }
    }
    Probe { feasible: false, point }
}

/// Pretty-good-measurement dual value: a rigorous lower bound on the alpha
/// level, since `min t` equals the best POVM guessing sum and the PGM is a
/// feasible POVM.
pub(crate) fn pgm_lower_bound(states: &[ComplexMatrix]) -> f64 {
    let dim = states[0].rows();
    let mut total = ComplexMatrix::zeros(dim, dim);
    for s in states {
        total = total.add(s);
    }
    let (vals, vecs) = eigh(&total);
    let cutoff = 1e-12 * vals[0].max(0.0);
    let mut inv_half = ComplexMatrix::zeros(dim, dim);
    for (lam, v) in vals.iter().zip(vecs.iter()) {
        if *lam > cutoff {
            let w = 1.0 / lam.sqrt();
            for i in 0..dim {
                for j in 0..dim {
                    let cur = inv_half.get(i, j);
                    inv_half.set(i, j, cur + v[i] * v[j].conj() * w);
                }
            }
        }
    }
    states
        .iter()
        .map(|rho| {
            let e = inv_half.matmul(rho).matmul(&inv_half);
            e.re_trace_product(rho)
        })
        .sum()
}

/// Decides `exists sigma: sigma >= 0, Tr sigma = 1, t sigma >= rho_x` by
/// alternating projections; the witness is returned on success.
pub(crate) fn alpha_feasible(
    scaled_states: &[ComplexMatrix],
    t: f64,
    start: Option<&ComplexMatrix>,
) -> Probe {
    let bounds: Vec<ComplexMatrix> =
        scaled_states.iter().map(|r| r.scale_re(1.0 / t)).collect();
    dykstra_probe(&bounds, false, 1.0, start, MAX_SWEEPS)
}

/// Decides `exists A: 0 <= A <= rho_x for all x, Tr A = lambda`.
pub(crate) fn beta_feasible(
    states: &[ComplexMatrix],
    lambda: f64,
    start: Option<&ComplexMatrix>,
) -> Probe {
    dykstra_probe(states, true, lambda, start, MAX_SWEEPS)
}


#[cfg(test)]
mod jacobi_tests {
    use super::*;
    use crate::qmath::test_support::random_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn complex_jacobi_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for dim in [3usize, 4, 5] {
            for _ in 0..20 {
                let m = random_hermitian(dim, &mut rng);
                let (vals, vecs) = complex_jacobi(&m);
                let rec = assemble(&vals, &vecs, dim);
                let err = rec.max_abs_diff(&m);
                assert!(err < 1e-11, "dim {dim} reconstruction err {err:.3e}");
                // Orthonormality.
                for i in 0..dim {
                    for j in i..dim {
                        let inner: num_complex::Complex64 = vecs[i]
                            .iter()
                            .zip(vecs[j].iter())
                            .map(|(a, b)| a.conj() * b)
                            .sum();
                        let want = if i == j { 1.0 } else { 0.0 };
                        assert!((inner.norm() - want).abs() < 1e-12);
                    }
                }
            }
        }
    }
}
