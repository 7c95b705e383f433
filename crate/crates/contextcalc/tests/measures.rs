//! Operational measures against their quantum counterparts on synthetic
//! tables with known states.


use contextcalc::optable::{
    alpha_beta_operational, born_table, operational_dmax, operational_dtv,
    operational_equivalence, Mixture, ProbTable,
};
use contextcalc::qmath::test_support::random_density;
use contextcalc::qmath::{
    dmax_quantum, hermitian_eig, trace_distance, BlochVector, ComplexMatrix, DensityOperator,
    ExtReal, Povm,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pauli_povms() -> Vec<(String, Povm)> {
    [
        ("X", BlochVector::new(1.0, 0.0, 0.0).unwrap()),
        ("Y", BlochVector::new(0.0, 1.0, 0.0).unwrap()),
        ("Z", BlochVector::new(0.0, 0.0, 1.0).unwrap()),
    ]
    .into_iter()
    .map(|(l, a)| (l.to_string(), Povm::qubit_axis(&a).unwrap()))
    .collect()
}

fn table_of(states: Vec<(String, DensityOperator)>) -> ProbTable {
    born_table(&states, &pauli_povms()).unwrap()
}

/// The state `tau` completing `rho_b = y rho_a + (1-y) tau` at the
/// max-relative-entropy weight `y`.
fn dmax_completion(
    a: &DensityOperator,
    b: &DensityOperator,
) -> Option<DensityOperator> {
    let y = match dmax_quantum(a, b).unwrap() {
        ExtReal::Finite(d) => (-d).exp2(),
        ExtReal::Infinite => return None,
    };
    if y > 1.0 - 1e-6 {
        return None;
    }
    let m = b.matrix().sub(&a.matrix().scale_re(y)).scale_re(1.0 / (1.0 - y));
    DensityOperator::new(m).ok()
}

/// The two states supported on the positive and negative eigenspaces of
/// `rho_a - rho_b` that make the disturbance LP reach the trace distance.
fn dtv_completions(
    a: &DensityOperator,
    b: &DensityOperator,
) -> Option<(DensityOperator, DensityOperator)> {
    let diff = a.matrix().sub(b.matrix());
    let eig = hermitian_eig(&diff).unwrap();
    let dim = a.dim();
    let mut plus = ComplexMatrix::zeros(dim, dim);
    let mut minus = ComplexMatrix::zeros(dim, dim);
    for (lam, v) in eig.values.iter().zip(eig.vectors.iter()) {
        let target = if *lam >= 0.0 { &mut plus } else { &mut minus };
        for i in 0..dim {
            for j in 0..dim {
                let cur = target.get(i, j);
                target.set(i, j, cur + v[i] * v[j].conj() * Complex64::new(*lam, 0.0));
            }
        }
    }
    let tp = plus.trace().re;
    let tm = minus.trace().re;
    if tp < 1e-9 || -tm < 1e-9 {
        return None;
    }
    let sigma_a = DensityOperator::new(plus.scale_re(1.0 / tp)).ok()?;
    let sigma_b = DensityOperator::new(minus.scale_re(1.0 / tm)).ok()?;
    Some((sigma_a, sigma_b))
}

#[test]
fn dmax_dominance_and_equality_with_completion() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..40 {
        let a = random_density(2, &mut rng);
        let b = random_density(2, &mut rng);
        let quantum = dmax_quantum(&a, &b).unwrap();
        // Restricted table: just the pair.
        let t = table_of(vec![("a".into(), a.clone()), ("b".into(), b.clone())]);
        let operational = operational_dmax(&t, "a", "b").unwrap();
        assert!(
            operational.as_f64() >= quantum.as_f64() - 1e-7,
            "dominance: {operational:?} vs {quantum:?}"
        );
        // Completed table: the LP reaches the quantum value.
        if let Some(tau) = dmax_completion(&a, &b) {
            let t = table_of(vec![
                ("a".into(), a.clone()),
                ("b".into(), b.clone()),
                ("tau".into(), tau),
            ]);
            let completed = operational_dmax(&t, "a", "b").unwrap();
            let q = quantum.finite().unwrap();
            assert!(
                (completed.finite().unwrap() - q).abs() < 1e-6,
                "equality: {completed:?} vs {q}"
            );
        }
    }
}

#[test]
fn dtv_dominance_and_equality_with_completions() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    for _ in 0..40 {
        let a = random_density(2, &mut rng);
        let b = random_density(2, &mut rng);
        let td = trace_distance(&a, &b).unwrap();
        let t = table_of(vec![("a".into(), a.clone()), ("b".into(), b.clone())]);
        let restricted = operational_dtv(&t, "a", "b").unwrap();
        assert!(restricted >= td - 1e-7, "dominance {restricted} vs {td}");
        if let Some((sa, sb)) = dtv_completions(&a, &b) {
            let t = table_of(vec![
                ("a".into(), a.clone()),
                ("b".into(), b.clone()),
                ("ca".into(), sa),
                ("cb".into(), sb),
            ]);
            let completed = operational_dtv(&t, "a", "b").unwrap();
            assert!(
                (completed - td).abs() < 1e-7,
                "equality {completed} vs {td}"
            );
        }
    }
}

#[test]
fn dtv_is_a_metric_on_labels() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let states: Vec<(String, DensityOperator)> = (0..4)
        .map(|i| (format!("p{i}"), random_density(2, &mut rng)))
        .collect();
    let t = table_of(states);
    let labels: Vec<&str> = vec!["p0", "p1", "p2", "p3"];
    for &a in &labels {
        assert!(operational_dtv(&t, a, a).unwrap() < 1e-10);
        for &b in &labels {
            let ab = operational_dtv(&t, a, b).unwrap();
            let ba = operational_dtv(&t, b, a).unwrap();
            assert!((ab - ba).abs() < 1e-8);
            for &c in &labels {
                let ac = operational_dtv(&t, a, c).unwrap();
                let cb = operational_dtv(&t, c, b).unwrap();
                assert!(ab <= ac + cb + 1e-8);
            }
        }
    }
}

#[test]
fn zero_measures_iff_operational_equivalence() {
    // Two distinct preparation procedures with the same state are
    // operationally equivalent; measures vanish exactly on them.
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    let rho = random_density(2, &mut rng);
    let other = random_density(2, &mut rng);
    let t = table_of(vec![
        ("first".into(), rho.clone()),
        ("twin".into(), rho.clone()),
        ("off".into(), other),
    ]);
    let eq = operational_equivalence(
        &t,
        &Mixture::singleton("first"),
        &Mixture::singleton("twin"),
        1e-9,
    )
    .unwrap();
    assert!(eq.equivalent);
    assert!(operational_dtv(&t, "first", "twin").unwrap() < 1e-9);
    assert!(operational_dmax(&t, "first", "twin").unwrap().finite().unwrap() < 1e-7);

    let eq = operational_equivalence(
        &t,
        &Mixture::singleton("first"),
        &Mixture::singleton("off"),
        1e-9,
    )
    .unwrap();
    assert!(!eq.equivalent);
    assert!(operational_dtv(&t, "first", "off").unwrap() > 1e-6);
    assert!(operational_dmax(&t, "first", "off").unwrap().as_f64() > 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Random Bloch tables: the disturbance LP stays a bounded symmetric
    /// measure, the divergence of a label against itself vanishes, and the
    /// minimax constants never drop below one.
    #[test]
    fn lp_measures_behave_on_random_tables(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3;
        let states: Vec<(String, DensityOperator)> = (0..n)
            .map(|i| (format!("p{i}"), random_density(2, &mut rng)))
            .collect();
        let t = table_of(states);
        let d01 = operational_dtv(&t, "p0", "p1").unwrap();
        let d10 = operational_dtv(&t, "p1", "p0").unwrap();
        prop_assert!((0.0..=1.0 + 1e-9).contains(&d01));
        prop_assert!((d01 - d10).abs() < 1e-8);
        let self_dmax = operational_dmax(&t, "p2", "p2").unwrap();
        prop_assert!(self_dmax.finite().unwrap() < 1e-9);

        let groups = vec![vec!["p0".to_string(), "p1".to_string()]];
        let (alpha, beta) = alpha_beta_operational(&t, &groups).unwrap();
        prop_assert!(alpha.as_f64() >= 1.0);
        prop_assert!(beta.as_f64() >= 1.0);
    }
}

#[test]
fn ext_real_serde_round_trip() {
    let inf: ExtReal = serde_json::from_str(&serde_json::to_string(&ExtReal::Infinite).unwrap())
        .unwrap();
    assert_eq!(inf, ExtReal::Infinite);
    let v: ExtReal =
        serde_json::from_str(&serde_json::to_string(&ExtReal::Finite(1.25)).unwrap()).unwrap();
    assert_eq!(v, ExtReal::Finite(1.25));
}
