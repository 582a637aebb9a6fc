//! Values frozen from an independent implementation: the rotation matrix as
//! `exp(iγJz) exp(iβJy) exp(iαJz)` from matrix exponentials, and the
//! two-qubit frame from explicit Pauli algebra.

use spintomo_core::frames::{tomogram_2q, tomogram_qudit, werner_qudit_closed};
use spintomo_core::steering::{chsh_max, correlation_tensor, max_correlation};
use spintomo_core::su2::wigner_d;
use spintomo_core::{
    Basis, ComplexMatrix, DensityMatrix, EulerAngles, FramePoint2Q, FramePointQudit, HalfInt, C64,
};

fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

/// `0.7 |v⟩⟨v| + 0.3 I/4` with `v ∝ (1, 2i, −1, 1/2)`.
fn fixed_state() -> DensityMatrix {
    let v = [
        C64::new(1.0, 0.0),
        C64::new(0.0, 2.0),
        C64::new(-1.0, 0.0),
        C64::new(0.5, 0.0),
    ];
    let norm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let mut entries = Vec::new();
    for (r, a) in v.iter().enumerate() {
        for (c, b) in v.iter().enumerate() {
            let diag = if r == c { 0.075 } else { 0.0 };
            entries.push(0.7 * a * b.conj() / norm2 + diag);
        }
    }
    DensityMatrix::new(
        ComplexMatrix::from_row_major(4, &entries).unwrap(),
        Basis::TwoQubit,
    )
    .unwrap()
}

#[test]
fn wigner_small_d_entries() {
    let cases = [
        (1, -1, 0.9, 0.6230511348421868),
        (3, -1, 1.3, 0.5050073985144764),
        (-3, 1, 2.2, 0.6240041653384651),
        (1, 3, 0.4, -0.33052370671857834),
    ];
    for (mp, m, beta, want) in cases {
        let got = wigner_d(h(3), h(mp), h(m), beta).unwrap();
        assert!(
            (got - want).abs() < 1e-13,
            "d({mp}/2, {m}/2, {beta}) = {got}, want {want}"
        );
    }
}

#[test]
fn fixed_state_entries() {
    let rho = fixed_state();
    let m = rho.matrix();
    assert!((m[(0, 0)].re - 0.187).abs() < 1e-15);
    assert!((m[(1, 2)] - C64::new(0.0, -0.224)).norm() < 1e-15);
    assert!((m[(3, 3)].re - 0.103).abs() < 1e-15);
}

#[test]
fn qudit_tomogram_of_fixed_state() {
    let rho = *fixed_state().matrix();
    let n = EulerAngles::new(0.4, 1.2, 2.0).unwrap();
    let want = [
        0.3880908879234652,
        0.18810593287164956,
        0.286203306401224,
        0.1375998728036611,
    ];
    for (p, w) in FramePointQudit::all_projections(n).iter().zip(want) {
        assert!((tomogram_qudit(&rho, p) - w).abs() < 1e-13, "m = {}", p.m);
    }
}

#[test]
fn two_qubit_tomogram_of_fixed_state() {
    let rho = *fixed_state().matrix();
    let n1 = EulerAngles::new(0.3, 1.0, 0.0).unwrap();
    let n2 = EulerAngles::new(2.2, 0.5, 0.0).unwrap();
    let want = [
        0.3814215716796209,
        0.2942261333364075,
        0.07902854402088233,
        0.24532375096308928,
    ];
    for (p, w) in FramePoint2Q::all_projections(n1, n2).iter().zip(want) {
        assert!((tomogram_2q(&rho, p) - w).abs() < 1e-13);
    }
}

#[test]
fn tensor_and_bounds_of_fixed_state() {
    let t = correlation_tensor(&fixed_state()).unwrap();
    let want = [
        [0.112, -0.448, -0.224],
        [0.448, -0.112, 0.224],
        [0.112, 0.448, -0.42],
    ];
    for i in 0..3 {
        for j in 0..3 {
            assert!((t.t[i][j] - want[i][j]).abs() < 1e-14);
        }
    }
    assert!((max_correlation(&t).value - 0.7).abs() < 1e-12);
    let c = chsh_max(&t);
    assert!((c.singular_value_bound - 1.6771976627696572).abs() < 1e-12);
    assert!((c.search.value - 1.6771976627696572).abs() < 1e-6);
}

#[test]
fn werner_qudit_values() {
    let n = EulerAngles::new(0.8, 0.5, 0.0).unwrap();
    let rho = spintomo_core::werner(0.6).unwrap();
    let want = [
        0.3421897043482079,
        0.1699989057757079,
        0.13343307540396068,
        0.35437831447212365,
    ];
    for (p, w) in FramePointQudit::all_projections(n).iter().zip(want) {
        assert!((tomogram_qudit(rho.matrix(), p) - w).abs() < 1e-13);
        assert!((werner_qudit_closed(0.6, p.m, 0.8, 0.5) - w).abs() < 1e-13);
    }
}
