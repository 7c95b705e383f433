use std::collections::BTreeMap;

use super::*;
use crate::noise::ChannelSpec;
use crate::qmath::{bloch_to_density, BlochVector, Povm};

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn bloch(x: f64, y: f64, z: f64) -> BlochVector {
    BlochVector::new(x, y, z).unwrap()
}

/// Born-rule qubit table for Bloch states against Bloch-axis measurements.
fn qubit_table(states: &[(&str, BlochVector)], axes: &[(&str, BlochVector)]) -> ProbTable {
    let labeled: Vec<(String, crate::qmath::DensityOperator)> = states
        .iter()
        .map(|(l, b)| (l.to_string(), bloch_to_density(b)))
        .collect();
    let povms: Vec<(String, Povm)> = axes
        .iter()
        .map(|(l, a)| (l.to_string(), Povm::qubit_axis(a).unwrap()))
        .collect();
    born_table(&labeled, &povms).unwrap()
}

fn xyz_axes() -> Vec<(&'static str, BlochVector)> {
    vec![
        ("X", bloch(1.0, 0.0, 0.0)),
        ("Y", bloch(0.0, 1.0, 0.0)),
        ("Z", bloch(0.0, 0.0, 1.0)),
    ]
}

fn ideal_five_state_table() -> ProbTable {
    qubit_table(
        &[
            ("s0", bloch(0.0, 0.0, 1.0)),
            ("s1", bloch(0.0, 0.0, -1.0)),
            ("s+", bloch(1.0, 0.0, 0.0)),
            ("s-", bloch(-1.0, 0.0, 0.0)),
            ("mm", bloch(0.0, 0.0, 0.0)),
        ],
        &xyz_axes(),
    )
}

/// The 8-state square experiment: antipodal pairs on the y and x axes plus
/// the four diagonal completion states, measured along the decoder axes and
/// the three Pauli axes.
fn square_table() -> (ProbTable, Vec<Vec<String>>, Vec<String>) {
    let states = vec![
        ("k1x1", bloch(0.0, -1.0, 0.0)),
        ("k1x2", bloch(0.0, 1.0, 0.0)),
        ("k2x1", bloch(1.0, 0.0, 0.0)),
        ("k2x2", bloch(-1.0, 0.0, 0.0)),
        ("t1", bloch(SQRT_HALF, SQRT_HALF, 0.0)),
        ("t2", bloch(SQRT_HALF, -SQRT_HALF, 0.0)),
        ("t3", bloch(-SQRT_HALF, SQRT_HALF, 0.0)),
        ("t4", bloch(-SQRT_HALF, -SQRT_HALF, 0.0)),
    ];
    let axes = vec![
        ("D1", bloch(0.0, -1.0, 0.0)),
        ("D2", bloch(1.0, 0.0, 0.0)),
        ("X", bloch(1.0, 0.0, 0.0)),
        ("Y", bloch(0.0, 1.0, 0.0)),
        ("Z", bloch(0.0, 0.0, 1.0)),
    ];
    let table = qubit_table(&states, &axes);
    let groups = vec![
        vec!["k1x1".to_string(), "k1x2".to_string()],
        vec!["k2x1".to_string(), "k2x2".to_string()],
    ];
    let decoders = vec!["D1".to_string(), "D2".to_string()];
    (table, groups, decoders)
}

fn hexagon_table() -> (ProbTable, Vec<Vec<String>>, Vec<String>) {
    use std::f64::consts::PI;
    let mut states = Vec::new();
    let mut groups = Vec::new();
    let mut axes = Vec::new();
    for k in 1..=3 {
        let mut group = Vec::new();
        for x in 1..=2 {
            let angle = PI * (k as f64 / 3.0 + x as f64);
            let label = format!("k{k}x{x}");
            states.push((label.clone(), bloch(angle.cos(), angle.sin(), 0.0)));
            group.push(label);
        }
        let first = states[states.len() - 2].1;
        axes.push((format!("D{k}"), first));
        groups.push(group);
    }
    axes.push(("X".to_string(), bloch(1.0, 0.0, 0.0)));
    axes.push(("Y".to_string(), bloch(0.0, 1.0, 0.0)));
    axes.push(("Z".to_string(), bloch(0.0, 0.0, 1.0)));
    let labeled: Vec<(String, crate::qmath::DensityOperator)> = states
        .iter()
        .map(|(l, b)| (l.clone(), bloch_to_density(b)))
        .collect();
    let povms: Vec<(String, Povm)> = axes
        .iter()
        .map(|(l, a)| (l.clone(), Povm::qubit_axis(a).unwrap()))
        .collect();
    let table = born_table(&labeled, &povms).unwrap();
    let decoders = (1..=3).map(|k| format!("D{k}")).collect();
    (table, groups, decoders)
}

#[test]
fn table_validation_errors() {
    let m = Measurement {
        label: "Z".into(),
        outcomes: vec!["+".into(), "-".into()],
    };
    // Row sum off.
    let err = ProbTable::new(
        vec!["a".into()],
        vec![m.clone()],
        vec![vec![vec![0.6], vec![0.6]]],
    )
    .unwrap_err();
    assert!(matches!(err, TableError::RowSum { .. }));
    // Duplicate preparation label.
    let err = ProbTable::new(
        vec!["a".into(), "a".into()],
        vec![m.clone()],
        vec![vec![vec![0.5, 0.5], vec![0.5, 0.5]]],
    )
    .unwrap_err();
    assert!(matches!(err, TableError::DuplicateLabel(_)));
    // Out-of-range probability.
    let err = ProbTable::new(
        vec!["a".into()],
        vec![m],
        vec![vec![vec![1.4], vec![-0.4]]],
    )
    .unwrap_err();
    assert!(matches!(err, TableError::ProbRange { .. }));
}

#[test]
fn equivalence_cases() {
    let t = ideal_five_state_table();
    let a = Mixture::singleton("s0");
    let r = operational_equivalence(&t, &a, &a, 1e-9).unwrap();
    assert!(r.equivalent && r.max_deviation == 0.0);

    // {1/2 |0>, 1/2 |1>} ~ {1/2 |+>, 1/2 |->}: same density operator.
    let zmix = Mixture::new(BTreeMap::from([("s0".into(), 0.5), ("s1".into(), 0.5)])).unwrap();
    let xmix = Mixture::new(BTreeMap::from([("s+".into(), 0.5), ("s-".into(), 0.5)])).unwrap();
    let r = operational_equivalence(&t, &zmix, &xmix, 1e-9).unwrap();
    assert!(r.equivalent, "deviation {}", r.max_deviation);

    // |0> vs |1>: deviation 1 witnessed at the Z measurement.
    let r = operational_equivalence(
        &t,
        &Mixture::singleton("s0"),
        &Mixture::singleton("s1"),
        1e-9,
    )
    .unwrap();
    assert!(!r.equivalent);
    assert!((r.max_deviation - 1.0).abs() < 1e-12);

    assert!(matches!(
        operational_equivalence(&t, &Mixture::singleton("nope"), &a, 1e-9),
        Err(TableError::UnknownPreparation(_))
    ));
}

#[test]
fn dmax_self_is_zero() {
    let t = ideal_five_state_table();
    let v = operational_dmax(&t, "s0", "s0").unwrap();
    assert!(v.finite().unwrap().abs() < 1e-9);
}

#[test]
fn dmax_against_maximally_mixed_is_one_bit() {
    // The complement state |1> is listed, so the decomposition
    // I/2 = (1/2)|0><0| + (1/2)|1><1| is available to the LP.
    let t = ideal_five_state_table();
    let v = operational_dmax(&t, "s0", "mm").unwrap().finite().unwrap();
    assert!((v - 1.0).abs() < 1e-9, "got {v}");
}

#[test]
fn dmax_infinite_on_restricted_set() {
    // Without any -z weight in the hull, no mixture reaches I/2 from |0>.
    let t = qubit_table(
        &[
            ("s0", bloch(0.0, 0.0, 1.0)),
            ("s+", bloch(1.0, 0.0, 0.0)),
            ("mm", bloch(0.0, 0.0, 0.0)),
        ],
        &xyz_axes(),
    );
    assert_eq!(
        operational_dmax(&t, "s0", "mm").unwrap(),
        crate::qmath::ExtReal::Infinite
    );
}

#[test]
fn dtv_self_and_completed_pair() {
    let t = ideal_five_state_table();
    assert!(operational_dtv(&t, "s0", "s0").unwrap().abs() < 1e-10);

    // Antipodal completions of the |0> vs |+> pair lie on the axis
    // (z - x)/sqrt(2); with them the LP reaches the trace distance.
    let t = qubit_table(
        &[
            ("s0", bloch(0.0, 0.0, 1.0)),
            ("s+", bloch(1.0, 0.0, 0.0)),
            ("c+", bloch(-SQRT_HALF, 0.0, SQRT_HALF)),
            ("c-", bloch(SQRT_HALF, 0.0, -SQRT_HALF)),
        ],
        &xyz_axes(),
    );
    let v = operational_dtv(&t, "s0", "s+").unwrap();
    assert!((v - SQRT_HALF).abs() < 1e-9, "got {v}");
}

#[test]
fn dtv_restricted_pair_is_one() {
    let t = qubit_table(
        &[("s0", bloch(0.0, 0.0, 1.0)), ("s+", bloch(1.0, 0.0, 0.0))],
        &xyz_axes(),
    );
    let v = operational_dtv(&t, "s0", "s+").unwrap();
    assert!((v - 1.0).abs() < 1e-9, "got {v}");
}

#[test]
fn alpha_beta_single_preparation() {
    let t = qubit_table(&[("s0", bloch(0.0, 0.0, 1.0))], &xyz_axes());
    let (a, b) = alpha_beta_operational(&t, &[vec!["s0".to_string()]]).unwrap();
    assert!((a.finite().unwrap() - 1.0).abs() < 1e-9);
    assert!((b.finite().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn alpha_beta_square() {
    let (t, groups, _) = square_table();
    let (a, b) = alpha_beta_operational(&t, &groups).unwrap();
    let alpha_expect = 1.0 + SQRT_HALF;
    let beta_expect = 1.0 / (1.0 - SQRT_HALF);
    assert!((a.finite().unwrap() - alpha_expect).abs() < 1e-8, "alpha {a}");
    assert!((b.finite().unwrap() - beta_expect).abs() < 1e-7, "beta {b}");
}

#[test]
fn alpha_beta_hexagon() {
    let (t, groups, _) = hexagon_table();
    let (a, b) = alpha_beta_operational(&t, &groups).unwrap();
    assert!((a.finite().unwrap() - 5.0 / 3.0).abs() < 1e-8, "alpha {a}");
    assert!((b.finite().unwrap() - 3.0).abs() < 1e-7, "beta {b}");
}

#[test]
fn witness_square_ideal() {
    let (t, groups, decoders) = square_table();
    let w = table_guess_and_bounds(&t, &groups, &decoders).unwrap();
    assert!((w.p_guess - 1.0).abs() < 1e-12);
    let expect = (2.0 - 2.0_f64.sqrt()) / 8.0;
    assert!((w.c_lower - expect).abs() < 1e-8, "c_lower {}", w.c_lower);
    assert!(w.violated);
}

#[test]
fn witness_square_depolarized_half() {
    // Depolarizing p = 0.5 shrinks every Bloch vector by half.
    let shrink = 0.5;
    let states = [
        ("k1x1", bloch(0.0, -shrink, 0.0)),
        ("k1x2", bloch(0.0, shrink, 0.0)),
        ("k2x1", bloch(shrink, 0.0, 0.0)),
        ("k2x2", bloch(-shrink, 0.0, 0.0)),
        ("t1", bloch(shrink * SQRT_HALF, shrink * SQRT_HALF, 0.0)),
        ("t2", bloch(shrink * SQRT_HALF, -shrink * SQRT_HALF, 0.0)),
        ("t3", bloch(-shrink * SQRT_HALF, shrink * SQRT_HALF, 0.0)),
        ("t4", bloch(-shrink * SQRT_HALF, -shrink * SQRT_HALF, 0.0)),
    ];
    let axes = vec![
        ("D1", bloch(0.0, -1.0, 0.0)),
        ("D2", bloch(1.0, 0.0, 0.0)),
        ("X", bloch(1.0, 0.0, 0.0)),
        ("Y", bloch(0.0, 1.0, 0.0)),
        ("Z", bloch(0.0, 0.0, 1.0)),
    ];
    let t = qubit_table(&states, &axes);
    let groups = vec![
        vec!["k1x1".to_string(), "k1x2".to_string()],
        vec!["k2x1".to_string(), "k2x2".to_string()],
    ];
    let decoders = vec!["D1".to_string(), "D2".to_string()];
    let w = table_guess_and_bounds(&t, &groups, &decoders).unwrap();
    // P_guess = 1 - p/2 = 0.75, below the ceiling (2 + sqrt 2)/4.
    assert!((w.p_guess - 0.75).abs() < 1e-12);
    assert!(w.p_guess <= (2.0 + 2.0_f64.sqrt()) / 4.0);
    assert!(w.c_lower.abs() < 1e-9);
    assert!(!w.violated);
}

#[test]
fn witness_hexagon_ideal() {
    let (t, groups, decoders) = hexagon_table();
    let w = table_guess_and_bounds(&t, &groups, &decoders).unwrap();
    assert!((w.p_guess - 1.0).abs() < 1e-12);
    assert!((w.c_lower - 1.0 / 24.0).abs() < 1e-8, "c_lower {}", w.c_lower);
}

#[test]
fn decoder_arity_mismatch() {
    let (t, groups, _) = square_table();
    // Z has 2 outcomes but the group width is fine; use a 3-wide group.
    let bad_groups = vec![vec![
        "k1x1".to_string(),
        "k1x2".to_string(),
        "k2x1".to_string(),
    ]];
    let err = table_guess_and_bounds(&t, &bad_groups, &["Z".to_string()]).unwrap_err();
    assert!(matches!(err, TableError::DecoderArity { .. }));
    let _ = groups;
}

fn square_annotations() -> (
    BTreeMap<String, crate::qmath::DensityOperator>,
    BTreeMap<String, Povm>,
) {
    let (t, _, _) = square_table();
    let states = [
        ("k1x1", bloch(0.0, -1.0, 0.0)),
        ("k1x2", bloch(0.0, 1.0, 0.0)),
        ("k2x1", bloch(1.0, 0.0, 0.0)),
        ("k2x2", bloch(-1.0, 0.0, 0.0)),
        ("t1", bloch(SQRT_HALF, SQRT_HALF, 0.0)),
        ("t2", bloch(SQRT_HALF, -SQRT_HALF, 0.0)),
        ("t3", bloch(-SQRT_HALF, SQRT_HALF, 0.0)),
        ("t4", bloch(-SQRT_HALF, -SQRT_HALF, 0.0)),
    ];
    let mut smap = BTreeMap::new();
    for (l, b) in states {
        smap.insert(l.to_string(), bloch_to_density(&b));
    }
    let axes = [
        ("D1", bloch(0.0, -1.0, 0.0)),
        ("D2", bloch(1.0, 0.0, 0.0)),
        ("X", bloch(1.0, 0.0, 0.0)),
        ("Y", bloch(0.0, 1.0, 0.0)),
        ("Z", bloch(0.0, 0.0, 1.0)),
    ];
    let mut pmap = BTreeMap::new();
    for (l, a) in axes {
        pmap.insert(l.to_string(), Povm::qubit_axis(&a).unwrap());
    }
    let _ = t;
    (smap, pmap)
}

#[test]
fn invariance_under_unitary_channel() {
    let (t, groups, _) = square_table();
    let (states, povms) = square_annotations();
    // A z-rotation as an explicit one-element Kraus channel.
    let angle = 0.7_f64;
    let mut u = crate::qmath::ComplexMatrix::zeros(2, 2);
    u.set(0, 0, num_complex::Complex64::from_polar(1.0, -angle / 2.0));
    u.set(1, 1, num_complex::Complex64::from_polar(1.0, angle / 2.0));
    let ch = ChannelSpec::kraus(2, vec![u]).unwrap();
    let pairs = vec![("k1x1".to_string(), "k2x1".to_string())];
    let audit = invariance_audit(&t, &ch, &states, &povms, &pairs, Some(&groups)).unwrap();
    assert!(audit.injective);
    assert!(audit.asserted && audit.holds, "deviation {}", audit.max_deviation);
    assert!(audit.max_deviation < 1e-7);
}

#[test]
fn invariance_under_depolarizing() {
    let (t, groups, _) = square_table();
    let (states, povms) = square_annotations();
    let ch = ChannelSpec::depolarizing(2, 0.3).unwrap();
    let pairs = vec![("k1x1".to_string(), "t1".to_string())];
    let audit = invariance_audit(&t, &ch, &states, &povms, &pairs, Some(&groups)).unwrap();
    assert!(audit.injective);
    assert!(audit.holds, "deviation {}", audit.max_deviation);
}

#[test]
fn invariance_holds_for_entanglement_breaking_but_injective_channel() {
    // Depolarizing p = 0.7 is entanglement-breaking yet still one-to-one,
    // so the invariance assertion applies and must hold.
    let (t, groups, _) = square_table();
    let (states, povms) = square_annotations();
    let ch = ChannelSpec::depolarizing(2, 0.7).unwrap();
    assert_eq!(
        crate::noise::entanglement_breaking_check(&ch).unwrap(),
        crate::noise::EbVerdict::EntanglementBreaking
    );
    let pairs = vec![("k1x1".to_string(), "k2x2".to_string())];
    let audit = invariance_audit(&t, &ch, &states, &povms, &pairs, Some(&groups)).unwrap();
    assert!(audit.injective && audit.asserted && audit.holds);
}

#[test]
fn invariance_skipped_for_non_injective() {
    let (t, _, _) = square_table();
    let (states, povms) = square_annotations();
    let ch = ChannelSpec::depolarizing(2, 1.0).unwrap();
    let pairs = vec![("k1x1".to_string(), "k1x2".to_string())];
    let audit = invariance_audit(&t, &ch, &states, &povms, &pairs, None).unwrap();
    assert!(!audit.injective);
    assert_eq!(audit.transfer_rank, 1);
    assert!(!audit.asserted);
    assert!(audit.holds);
}
