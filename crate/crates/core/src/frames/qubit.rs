//! Two-qubit dequantizer/quantizer built from the single-qubit operator
//! `F(φ, θ) = [[cosθ, −e^{iφ} sinθ], [−e^{−iφ} sinθ, −cosθ]]`.

use std::f64::consts::PI;

use crate::matrix::{kron2, ComplexMatrix, C64};
use crate::su2::EulerAngles;

use super::FramePoint2Q;

/// `F(φ, θ)`; equals `n·σ` with `n = (−sinθ cosφ, sinθ sinφ, cosθ)`.
pub fn f_operator(angles: &EulerAngles) -> ComplexMatrix {
    let (phi, theta) = (angles.first, angles.second);
    let (c, s) = (theta.cos(), theta.sin());
    let mut f = ComplexMatrix::zeros2();
    f[(0, 0)] = C64::new(c, 0.0);
    f[(1, 1)] = C64::new(-c, 0.0);
    f[(0, 1)] = C64::from_polar(-s, phi);
    f[(1, 0)] = C64::from_polar(-s, -phi);
    f
}

/// Bloch vector of the measurement axis selected by `(φ, θ)`.
pub fn frame_axis(angles: &EulerAngles) -> [f64; 3] {
    let (phi, theta) = (angles.first, angles.second);
    [
        -theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

fn half_identity_plus(scale: f64, angles: &EulerAngles) -> ComplexMatrix {
    let f = f_operator(angles);
    let mut out = f.scale_real(scale);
    out[(0, 0)] += 0.5;
    out[(1, 1)] += 0.5;
    out
}

/// Single-qubit dequantizer `½I + m F(φ, θ)`, a rank-1 projector.
pub fn qubit_dequantizer(m: f64, angles: &EulerAngles) -> ComplexMatrix {
    half_identity_plus(m, angles)
}

/// Single-qubit quantizer `(½I + 3m F(φ, θ)) / 8π²`.
pub fn qubit_quantizer(m: f64, angles: &EulerAngles) -> ComplexMatrix {
    half_identity_plus(3.0 * m, angles).scale_real(1.0 / (8.0 * PI * PI))
}

pub fn dequantizer_2q(p: &FramePoint2Q) -> ComplexMatrix {
    kron2(
        &qubit_dequantizer(p.m1.value(), &p.n1),
        &qubit_dequantizer(p.m2.value(), &p.n2),
    )
}

pub fn quantizer_2q(p: &FramePoint2Q) -> ComplexMatrix {
    kron2(
        &qubit_quantizer(p.m1.value(), &p.n1),
        &qubit_quantizer(p.m2.value(), &p.n2),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::FramePoint2Q;
    use crate::matrix::sigma_dot;
    use crate::su2::{qubit_rotation, HalfInt};

    fn angles(k: usize) -> (EulerAngles, EulerAngles) {
        let t = k as f64;
        (
            EulerAngles::new(0.7 * t + 0.2, (0.53 * t + 0.3) % PI, 1.9 * t).unwrap(),
            EulerAngles::new(1.3 * t + 0.5, (0.71 * t + 1.1) % PI, 0.4 * t).unwrap(),
        )
    }

    #[test]
    fn f_is_axis_dot_sigma() {
        for k in 0..20 {
            let (a, _) = angles(k);
            assert!((f_operator(&a) - sigma_dot(frame_axis(&a))).max_abs() < 1e-15);
        }
    }

    #[test]
    fn completeness_sums_to_identity() {
        let id = ComplexMatrix::identity(4).unwrap();
        for k in 0..100 {
            let (n1, n2) = angles(k);
            let mut sum = ComplexMatrix::zeros4();
            for p in FramePoint2Q::all_projections(n1, n2) {
                sum = sum + dequantizer_2q(&p);
            }
            assert!((sum - id).max_abs() < 1e-12);
        }
    }

    #[test]
    fn north_pole_up_up() {
        let p = FramePoint2Q::new(
            HalfInt::HALF,
            HalfInt::HALF,
            EulerAngles::zero(),
            EulerAngles::zero(),
        )
        .unwrap();
        let u = dequantizer_2q(&p);
        let want = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((u - want).max_abs() < 1e-15);
    }

    #[test]
    fn single_qubit_factors_are_projectors() {
        for k in 0..20 {
            let (a, _) = angles(k);
            for m in [0.5, -0.5] {
                let u = qubit_dequantizer(m, &a);
                let ev = u.hermitian_eigenvalues();
                assert!(ev[0].abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
                assert!((u * u - u).max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn quantizer_hermitian_with_factor_trace() {
        let norm = 1.0 / (8.0 * PI * PI);
        for k in 0..20 {
            let (n1, n2) = angles(k);
            for p in FramePoint2Q::all_projections(n1, n2) {
                let d = quantizer_2q(&p);
                assert!(d.hermiticity_defect() < 1e-14);
                // Tr F = 0, so each factor has trace 1/8π².
                assert!((d.trace() - C64::new(norm * norm, 0.0)).norm() < 1e-18);
            }
        }
    }

    #[test]
    fn projector_matches_rotated_basis_state() {
        // ½I + ½F(φ, θ) = u†|+⟩⟨+|u for the rotation with ψ' = π − φ.
        for k in 0..20 {
            let (a, _) = angles(k);
            let u = qubit_rotation(&EulerAngles::new(0.3, a.second, PI - a.first).unwrap());
            let mut up = ComplexMatrix::zeros2();
            up[(0, 0)] = C64::new(1.0, 0.0);
            let proj = u.adjoint() * up * u;
            assert!((proj - qubit_dequantizer(0.5, &a)).max_abs() < 1e-14);
        }
    }
}
