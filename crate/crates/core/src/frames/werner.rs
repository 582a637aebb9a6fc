//! Closed-form tomograms of the Werner family.

use serde::Serialize;

use crate::matrix::{werner_matrix, C64};
use crate::su2::{EulerAngles, HalfInt};

use super::{tomogram_2q, tomogram_qudit, FramePoint2Q, FramePointQudit};

/// Qudit tomogram `W(m, α, β)` of the Werner matrix read in the spin-3/2 basis,
/// transcribed term by term.
pub fn werner_qudit_closed(p: f64, m: HalfInt, alpha: f64, beta: f64) -> f64 {
    let s2 = 2.0 * (1.5 * alpha).sin().powi(2) - 1.0;
    let (sb, s3b) = (beta.sin(), (3.0 * beta).sin());
    let c3a = (3.0 * alpha).cos();
    match m.twice() {
        -3 => {
            p / 16.0 + 3.0 * p / 16.0 * (2.0 * beta).cos() - 3.0 * p / 32.0 * sb * c3a
                + p / 32.0 * c3a * s3b
                + 0.25
        }
        -1 => {
            3.0 * p / 16.0 * (2.0 * sb * sb - 1.0) - p / 16.0 + 3.0 * p / 32.0 * s3b * s2
                - 9.0 * p / 32.0 * sb * s2
                + 0.25
        }
        1 => {
            3.0 * p / 16.0 * (2.0 * sb * sb - 1.0) - p / 16.0 - 3.0 * p / 32.0 * s3b * s2
                + 9.0 * p / 32.0 * sb * s2
                + 0.25
        }
        3 => {
            p / 16.0 + 3.0 * p / 16.0 * (2.0 * beta).cos() + 3.0 * p / 32.0 * sb * c3a
                - p / 32.0 * c3a * s3b
                + 0.25
        }
        _ => f64::NAN,
    }
}

/// Two-qubit Werner tomogram
/// `1/4 + p m1 m2 (cosθ1 cosθ2 + sinθ1 sinθ2 cos(φ1 + φ2))`.
pub fn werner_two_qubit_closed(p: f64, point: &FramePoint2Q) -> f64 {
    let (t1, t2) = (point.n1.second, point.n2.second);
    let (f1, f2) = (point.n1.first, point.n2.first);
    0.25 + p
        * point.m1.value()
        * point.m2.value()
        * (t1.cos() * t2.cos() + t1.sin() * t2.sin() * (f1 + f2).cos())
}

/// The same expression with a bare `e^{iφ1} e^{iφ2}` phase in place of
/// `cos(φ1 + φ2)`; complex whenever `φ1 + φ2 ∉ πℤ`.
pub fn werner_two_qubit_phase_form(p: f64, point: &FramePoint2Q) -> C64 {
    let (t1, t2) = (point.n1.second, point.n2.second);
    let phase = C64::from_polar(1.0, point.n1.first + point.n2.first);
    C64::new(0.25, 0.0)
        + p * point.m1.value()
            * point.m2.value()
            * (C64::new(t1.cos() * t2.cos(), 0.0) + t1.sin() * t2.sin() * phase)
}

/// Largest deviation between direct traces and the closed forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WernerClosedFormCheck {
    pub p: f64,
    /// Per `m = 3/2, 1/2, −1/2, −3/2`.
    pub qudit_max_deviation: [f64; 4],
    /// `|W(m, α, 0) − (1 ± p)/4|`, maximised over m and α samples.
    pub qudit_beta_zero_deviation: f64,
    pub two_qubit_max_deviation: f64,
    /// Deviation of the bare-phase form (real and imaginary parts).
    pub two_qubit_phase_form_deviation: f64,
    pub two_qubit_phase_form_max_imag: f64,
}

/// Compares direct traces with the closed forms at the supplied angle samples.
pub fn check_werner_closed_forms(
    p: f64,
    samples: &[(EulerAngles, EulerAngles)],
) -> WernerClosedFormCheck {
    let rho = werner_matrix(p);
    let mut qudit_max_deviation = [0f64; 4];
    let mut qudit_beta_zero_deviation = 0f64;
    let mut two_qubit_max_deviation = 0f64;
    let mut two_qubit_phase_form_deviation = 0f64;
    let mut two_qubit_phase_form_max_imag = 0f64;
    for (a, b) in samples {
        for (k, point) in FramePointQudit::all_projections(*a).iter().enumerate() {
            let direct = tomogram_qudit(&rho, point);
            let closed = werner_qudit_closed(p, point.m, a.first, a.second);
            qudit_max_deviation[k] = qudit_max_deviation[k].max((direct - closed).abs());

            let flat = EulerAngles { second: 0.0, ..*a };
            let at_pole = tomogram_qudit(
                &rho,
                &FramePointQudit {
                    m: point.m,
                    n: flat,
                },
            );
            // |m| = 3/2 gives (1 + p)/4, |m| = 1/2 gives (1 − p)/4.
            let want = if point.m.twice().abs() == 3 {
                (1.0 + p) / 4.0
            } else {
                (1.0 - p) / 4.0
            };
            qudit_beta_zero_deviation = qudit_beta_zero_deviation.max((at_pole - want).abs());
        }
        for point in FramePoint2Q::all_projections(*a, *b) {
            let direct = tomogram_2q(&rho, &point);
            two_qubit_max_deviation =
                two_qubit_max_deviation.max((direct - werner_two_qubit_closed(p, &point)).abs());
            let phase = werner_two_qubit_phase_form(p, &point);
            two_qubit_phase_form_deviation =
                two_qubit_phase_form_deviation.max((phase - C64::new(direct, 0.0)).norm());
            two_qubit_phase_form_max_imag = two_qubit_phase_form_max_imag.max(phase.im.abs());
        }
    }
    WernerClosedFormCheck {
        p,
        qudit_max_deviation,
        qudit_beta_zero_deviation,
        two_qubit_max_deviation,
        two_qubit_phase_form_deviation,
        two_qubit_phase_form_max_imag,
    }
}
