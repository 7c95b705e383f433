//! Distance and divergence properties over random states.

use contextcalc::qmath::test_support::{random_density, random_pure};
use contextcalc::qmath::{
    density_to_bloch, dmax_quantum, haar_unitary, trace_distance, ComplexMatrix,
    DensityOperator, ExtReal,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn conjugate(u: &ComplexMatrix, rho: &DensityOperator) -> DensityOperator {
    DensityOperator::new(u.matmul(rho.matrix()).matmul(&u.adjoint())).unwrap()
}

#[test]
fn trace_distance_metric_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for dim in [2usize, 3] {
        for trial in 0..100 {
            let a = random_density(dim, &mut rng);
            let b = random_density(dim, &mut rng);
            let c = random_density(dim, &mut rng);
            let dab = trace_distance(&a, &b).unwrap();
            let dba = trace_distance(&b, &a).unwrap();
            let dac = trace_distance(&a, &c).unwrap();
            let dcb = trace_distance(&c, &b).unwrap();
            assert!((dab - dba).abs() < 1e-12);
            assert!((0.0..=1.0 + 1e-12).contains(&dab));
            assert!(dab <= dac + dcb + 1e-10, "triangle violated at trial {trial}");
            // Unitary invariance.
            let u = haar_unitary(dim, 1000 + trial);
            let dab_u = trace_distance(&conjugate(&u, &a), &conjugate(&u, &b)).unwrap();
            assert!((dab - dab_u).abs() < 1e-10);
        }
    }
}

#[test]
fn qubit_trace_distance_is_half_bloch_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..100 {
        let a = random_density(2, &mut rng);
        let b = random_density(2, &mut rng);
        let ba = density_to_bloch(&a).unwrap();
        let bb = density_to_bloch(&b).unwrap();
        let euclid = ((ba.x - bb.x).powi(2) + (ba.y - bb.y).powi(2) + (ba.z - bb.z).powi(2))
            .sqrt();
        let td = trace_distance(&a, &b).unwrap();
        assert!((td - euclid / 2.0).abs() < 1e-10);
    }
}

#[test]
fn dmax_nonnegative_and_zero_iff_equal() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for dim in [2usize, 3] {
        for _ in 0..50 {
            let a = random_density(dim, &mut rng);
            let b = random_density(dim, &mut rng);
            match dmax_quantum(&a, &b).unwrap() {
                ExtReal::Finite(v) => {
                    assert!(v >= 0.0);
                    if trace_distance(&a, &b).unwrap() >= 1e-9 {
                        assert!(v > 0.0);
                    }
                }
                ExtReal::Infinite => {}
            }
            let self_v = dmax_quantum(&a, &a).unwrap().finite().unwrap();
            assert!(self_v.abs() < 1e-9);
        }
    }
}

#[test]
fn dmax_dominates_projector_ratios() {
    // D_max(a||b) >= log2 Tr(a Pi) / Tr(b Pi) for any projector Pi.
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for _ in 0..50 {
        let a = random_density(3, &mut rng);
        let b = random_density(3, &mut rng);
        let d = match dmax_quantum(&a, &b).unwrap() {
            ExtReal::Finite(v) => v,
            ExtReal::Infinite => continue,
        };
        for _ in 0..10 {
            let proj = random_pure(3, &mut rng);
            let ta = a.matrix().re_trace_product(proj.matrix());
            let tb = b.matrix().re_trace_product(proj.matrix());
            if tb > 1e-12 {
                assert!(d >= (ta / tb).log2() - 1e-9);
            }
        }
    }
}

#[test]
fn dmax_quasi_convexity() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for _ in 0..40 {
        let k = rng.gen_range(2..4usize);
        let parts: Vec<(f64, DensityOperator, DensityOperator)> = {
            let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            raw.iter()
                .map(|w| (w / sum, random_density(2, &mut rng), random_density(2, &mut rng)))
                .collect()
        };
        let mixed_a = DensityOperator::mixture(
            &parts.iter().map(|(w, a, _)| (*w, a.clone())).collect::<Vec<_>>(),
        )
        .unwrap();
        let mixed_b = DensityOperator::mixture(
            &parts.iter().map(|(w, _, b)| (*w, b.clone())).collect::<Vec<_>>(),
        )
        .unwrap();
        let lhs = dmax_quantum(&mixed_a, &mixed_b).unwrap().as_f64();
        let rhs = parts
            .iter()
            .map(|(_, a, b)| dmax_quantum(a, b).unwrap().as_f64())
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(lhs <= rhs + 1e-9, "lhs {lhs} rhs {rhs}");
    }
}

#[test]
fn haar_unitary_defect_small() {
    for dim in [2usize, 3, 4, 8] {
        let u = haar_unitary(dim, 4242);
        let defect = u
            .adjoint()
            .matmul(&u)
            .max_abs_diff(&ComplexMatrix::identity(dim));
        assert!(defect < 1e-12);
    }
}
