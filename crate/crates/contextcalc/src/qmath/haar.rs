//! Haar-distributed unitaries: Ginibre sample + QR with a positive real
//! R-diagonal (the phase-corrected decomposition).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::ComplexMatrix;

/// Deterministic sub-stream RNG for seed-split Monte-Carlo loops.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn ginibre<R: Rng>(dim: usize, rng: &mut R) -> Vec<Vec<Complex64>> {
    // Column-major storage: columns are orthonormalized in place.
    (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                })
                .collect()
        })
        .collect()
}

fn qr_unitary(mut cols: Vec<Vec<Complex64>>) -> ComplexMatrix {
    let dim = cols.len();
    for j in 0..dim {
        // Two rounds of modified Gram-Schmidt keep the defect near machine eps.
        for _ in 0..2 {
            for i in 0..j {
                let qi = &cols[i];
                let inner: Complex64 = qi
                    .iter()
                    .zip(cols[j].iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let qi = qi.clone();
                for (vj, qik) in cols[j].iter_mut().zip(qi.iter()) {
                    *vj -= inner * qik;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for v in cols[j].iter_mut() {
            *v /= norm;
        }
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u.set(i, j, *z);
        }
    }
    u
}

/// Haar-random unitary, deterministic per seed.
pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_unitary_with(dim, &mut rng)
}

/// Haar-random unitary drawn from a caller-owned RNG.
pub fn haar_unitary_with<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    qr_unitary(ginibre(dim, rng))
}
