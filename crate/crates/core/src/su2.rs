//! SU(2) rotations: the spin-1/2 rotation matrix and Wigner `d`/`D` matrices
//! for half-integer and integer spin up to `j = 2`.
//!
//! Angular-momentum labels are carried as [`HalfInt`], i.e. as the integer
//! `2j` or `2m`, so index logic never compares floats.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const HALF: HalfInt = HalfInt(1);
    pub const MINUS_HALF: HalfInt = HalfInt(-1);
    pub const THREE_HALVES: HalfInt = HalfInt(3);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Parses decimal text such as `1.5`, `-0.5`, `3/2`.
    pub fn parse(text: &str) -> Option<Self> {
        let t = text.trim();
        let v = if let Some((n, d)) = t.split_once('/') {
            n.trim().parse::<f64>().ok()? / d.trim().parse::<f64>().ok()?
        } else {
            t.parse::<f64>().ok()?
        };
        let twice = (2.0 * v).round();
        ((2.0 * v - twice).abs() < 1e-9).then_some(HalfInt(twice as i32))
    }

    /// Projections `j, j−1, …, −j` for spin `self`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j = self.0;
        (0..=j).map(move |k| HalfInt(j - 2 * k))
    }

    fn neg(self) -> Self {
        HalfInt(-self.0)
    }

    fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Rotation angles `(first, second, third)`.
///
/// For a qubit these are `(φ, θ, ψ)`; for the qudit `(α, β, γ)`. The first
/// and third angles are wrapped into `[0, 2π)`, the second is clamped to `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub first: f64,
    pub second: f64,
    pub third: f64,
}

impl EulerAngles {
    pub fn new(first: f64, second: f64, third: f64) -> Result<Self> {
        if !(first.is_finite() && second.is_finite() && third.is_finite()) {
            return Err(Error::NonFiniteAngle);
        }
        Ok(Self {
            first: first.rem_euclid(TAU),
            second: second.clamp(0.0, PI),
            third: third.rem_euclid(TAU),
        })
    }

    pub fn zero() -> Self {
        Self {
            first: 0.0,
            second: 0.0,
            third: 0.0,
        }
    }

    pub fn with_third(self, third: f64) -> Result<Self> {
        Self::new(self.first, self.second, third)
    }
}

/// Unit measurement direction `(kx, ky, kz)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction([f64; 3]);

impl Direction {
    /// Accepts vectors whose norm is within `1e-9` of one, then renormalizes.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() || (n - 1.0).abs() > 1e-9 {
            return Err(Error::NonUnitDirection(n));
        }
        Ok(Self([x / n, y / n, z / n]))
    }

    /// Normalizes any non-zero finite vector.
    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NonUnitDirection(n));
        }
        Ok(Self([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        Self([
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ])
    }

    pub fn x() -> Self {
        Self([1.0, 0.0, 0.0])
    }

    pub fn y() -> Self {
        Self([0.0, 1.0, 0.0])
    }

    pub fn z() -> Self {
        Self([0.0, 0.0, 1.0])
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

/// The spin-1/2 rotation for angles `(φ, θ, ψ)`:
///
/// ```text
/// [ cos(θ/2) e^{i(φ+ψ)/2}    sin(θ/2) e^{i(φ−ψ)/2} ]
/// [ −sin(θ/2) e^{i(ψ−φ)/2}   cos(θ/2) e^{−i(φ+ψ)/2} ]
/// ```
pub fn qubit_rotation(angles: &EulerAngles) -> ComplexMatrix {
    let (phi, theta, psi) = (angles.first, angles.second, angles.third);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let mut u = ComplexMatrix::zeros2();
    u[(0, 0)] = C64::from_polar(c, (phi + psi) / 2.0);
    u[(0, 1)] = C64::from_polar(s, (phi - psi) / 2.0);
    u[(1, 0)] = C64::from_polar(-s, (psi - phi) / 2.0);
    u[(1, 1)] = C64::from_polar(c, -(phi + psi) / 2.0);
    u
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` by the three-term recurrence.
///
/// Where a recurrence denominator vanishes (possible only for negative
/// parameters) the hypergeometric series is summed instead.
pub fn jacobi_poly(n: u32, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let p1 = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    if n == 1 {
        return p1;
    }
    let (mut prev, mut cur) = (1.0, p1);
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + a + b;
        let denom = 2.0 * k * (k + a + b) * (s - 2.0);
        if denom == 0.0 {
            return jacobi_hypergeometric(n, a, b, x);
        }
        let next = ((s - 1.0) * (s * (s - 2.0) * x + a * a - b * b) * cur
            - 2.0 * (k + a - 1.0) * (k + b - 1.0) * s * prev)
            / denom;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_n^{(a,b)}(x) = (a+1)_n / n! · ₂F₁(−n, n+a+b+1; a+1; (1−x)/2)`.
fn jacobi_hypergeometric(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let z = (1.0 - x) / 2.0;
    // (a+1)_n / n! · Σ_k (−n)_k (n+a+b+1)_k / ((a+1)_k k!) z^k, written as
    // Σ_k [(a+k+1)_{n−k} / (n−k)!] · [(n+a+b+1)_k / k!] · (−z)^k to avoid (a+1)_k = 0.
    let n = n as i64;
    let mut total = 0.0;
    for k in 0..=n {
        let mut lead = 1.0;
        for i in 0..(n - k) {
            lead *= (a + (k + 1 + i) as f64) / (i + 1) as f64;
        }
        let mut tail = 1.0;
        for i in 0..k {
            tail *= (n as f64 + a + b + 1.0 + i as f64) / (i + 1) as f64;
        }
        total += lead * tail * (-z).powi(k as i32);
    }
    total
}

fn factorial(n: i32) -> f64 {
    (1..=n as u64).product::<u64>() as f64
}

fn check_index(j: HalfInt, m: HalfInt, label: &str) -> Result<()> {
    if m.abs() > j || (j.twice() - m.twice()) % 2 != 0 {
        return Err(Error::Index(format!("{label} = {m} invalid for j = {j}")));
    }
    Ok(())
}

/// Direct evaluation, valid when `mp ≥ |m|` (non-negative exponents and
/// Jacobi parameters).
fn wigner_d_direct(j: HalfInt, mp: HalfInt, m: HalfInt, beta: f64) -> f64 {
    let (j2, mp2, m2) = (j.twice(), mp.twice(), m.twice());
    let norm = (factorial((j2 + mp2) / 2) * factorial((j2 - mp2) / 2)
        / (factorial((j2 + m2) / 2) * factorial((j2 - m2) / 2)))
    .sqrt();
    let cos_pow = (mp2 + m2) / 2;
    let sin_pow = (mp2 - m2) / 2;
    let poly = jacobi_poly(
        ((j2 - mp2) / 2) as u32,
        sin_pow as f64,
        cos_pow as f64,
        beta.cos(),
    );
    norm * (beta / 2.0).cos().powi(cos_pow) * (beta / 2.0).sin().powi(sin_pow) * poly
}

/// Small Wigner matrix element `d^{(j)}_{m',m}(β)`.
///
/// The closed form
/// `√((j+m')!(j−m')!/((j+m)!(j−m)!)) cos(β/2)^{m'+m} sin(β/2)^{m'−m} P_{j−m'}^{(m'−m, m'+m)}(cosβ)`
/// is evaluated directly when `m' ≥ |m|`; other index pairs are reduced with
/// `d_{m',m} = (−1)^{m−m'} d_{m,m'} = d_{−m,−m'}`.
pub fn wigner_d(j: HalfInt, mp: HalfInt, m: HalfInt, beta: f64) -> Result<f64> {
    if j.twice() < 1 || j.twice() > 4 {
        return Err(Error::Index(format!("j = {j} outside 1/2..=2")));
    }
    check_index(j, mp, "m'")?;
    check_index(j, m, "m")?;
    let sign = |a: HalfInt, b: HalfInt| {
        if ((a.twice() - b.twice()) / 2) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    let top = mp.abs().max(m.abs());
    let value = if mp == top {
        wigner_d_direct(j, mp, m, beta)
    } else if m == top {
        sign(m, mp) * wigner_d_direct(j, m, mp, beta)
    } else if m.neg() == top {
        wigner_d_direct(j, m.neg(), mp.neg(), beta)
    } else {
        sign(m, mp) * wigner_d_direct(j, mp.neg(), m.neg(), beta)
    };
    Ok(value)
}

/// Where the Euler phases attach in `D^{(j)}_{m',m}(α, β, γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhaseConvention {
    /// `e^{i m' γ} d_{m',m}(β) e^{i m α}`: row index with γ, column index with α.
    RowGammaColumnAlpha,
}

/// Phase placement used by [`wigner_big_d`].
pub const PHASE_CONVENTION: PhaseConvention = PhaseConvention::RowGammaColumnAlpha;

/// Wigner `D^{(j)}(α, β, γ)` for `j ∈ {1/2, 3/2}` with rows and columns
/// ordered by descending projection. `angles = (α, β, γ)`.
pub fn wigner_big_d(j: HalfInt, angles: &EulerAngles) -> Result<ComplexMatrix> {
    if j != HalfInt::HALF && j != HalfInt::THREE_HALVES {
        return Err(Error::Index(format!(
            "D-matrix only for j = 1/2, 3/2 (got {j})"
        )));
    }
    let dim = (j.twice() + 1) as usize;
    let (alpha, beta, gamma) = (angles.first, angles.second, angles.third);
    let mut out = ComplexMatrix::zeros(dim)?;
    for (r, mp) in j.projections().enumerate() {
        for (c, m) in j.projections().enumerate() {
            let d = wigner_d(j, mp, m, beta)?;
            let phase = match PHASE_CONVENTION {
                PhaseConvention::RowGammaColumnAlpha => mp.value() * gamma + m.value() * alpha,
            };
            out[(r, c)] = C64::from_polar(d, phase);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;

    const J32: HalfInt = HalfInt::THREE_HALVES;

    fn h(twice: i32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    /// Explicit finite sum, independent of the recurrence:
    /// `Σ_s C(n+a, n−s) C(n+b, s) ((x−1)/2)^s ((x+1)/2)^{n−s}`.
    fn jacobi_sum(n: u32, a: f64, b: f64, x: f64) -> (f64, f64) {
        let binom = |r: f64, k: u32| -> f64 {
            (0..k).fold(1.0, |acc, i| acc * (r - i as f64) / (i + 1) as f64)
        };
        let mut sum = 0.0;
        let mut scale = 0.0;
        for s in 0..=n {
            let t = binom(n as f64 + a, n - s)
                * binom(n as f64 + b, s)
                * ((x - 1.0) / 2.0).powi(s as i32)
                * ((x + 1.0) / 2.0).powi((n - s) as i32);
            sum += t;
            scale += t.abs();
        }
        (sum, scale)
    }

    #[test]
    fn jacobi_base_cases() {
        assert_eq!(jacobi_poly(0, 2.5, -1.2, 0.7), 1.0);
        assert!((jacobi_poly(1, 0.0, 0.0, 0.3) - 0.3).abs() < 1e-15);
        let (want, _) = jacobi_sum(3, 1.0, 2.0, 0.5);
        assert!((jacobi_poly(3, 1.0, 2.0, 0.5) - want).abs() < 1e-12 * want.abs().max(1.0));
    }

    #[test]
    fn jacobi_degenerate_recurrence_falls_back() {
        // n + a + b = 0 at k = 2
        let (want, scale) = jacobi_sum(3, -1.0, -1.0, 0.4);
        let got = jacobi_poly(3, -1.0, -1.0, 0.4);
        assert!(
            (got - want).abs() <= 1e-12 * (1.0 + scale),
            "{got} vs {want}"
        );
    }

    proptest::proptest! {
        #[test]
        fn jacobi_recurrence_matches_sum(n in 0u32..=6, a in -4.0f64..4.0, b in -4.0f64..4.0, x in -1.0f64..1.0) {
            let (want, scale) = jacobi_sum(n, a, b, x);
            let got = jacobi_poly(n, a, b, x);
            proptest::prop_assert!((got - want).abs() <= 1e-10 * (1.0 + scale), "n={} a={} b={} x={}: {} vs {}", n, a, b, x, got, want);
        }
    }

    #[test]
    fn qubit_rotation_cases() {
        let u = qubit_rotation(&EulerAngles::zero());
        assert!((u - ComplexMatrix::identity(2).unwrap()).max_abs() < 1e-15);
        let u = qubit_rotation(&EulerAngles::new(0.0, PI, 0.0).unwrap());
        assert!((u[(0, 1)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((u[(1, 0)] + C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(u[(0, 0)].norm() < 1e-15 && u[(1, 1)].norm() < 1e-15);
    }

    #[test]
    fn qubit_rotation_unitary_unit_det() {
        for k in 0..50 {
            let t = k as f64;
            let a = EulerAngles::new(0.37 * t, (0.91 * t) % PI, 1.3 * t + 0.2).unwrap();
            let u = qubit_rotation(&a);
            let uu = u * u.adjoint();
            assert!((uu - ComplexMatrix::identity(2).unwrap()).max_abs() < 1e-14);
            let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
            assert!((det - C64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn small_d_identity_at_zero() {
        for j2 in 1..=4 {
            let j = h(j2);
            for mp in j.projections() {
                for m in j.projections() {
                    let d = wigner_d(j, mp, m, 0.0).unwrap();
                    assert_eq!(d, if mp == m { 1.0 } else { 0.0 }, "j={j} {mp} {m}");
                }
            }
        }
    }

    #[test]
    fn small_d_spin_half() {
        for beta in [0.1, 0.9, 2.2, 3.0] {
            let d = wigner_d(HalfInt::HALF, HalfInt::HALF, HalfInt::HALF, beta).unwrap();
            assert!((d - (beta / 2.0).cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn small_d_index_errors() {
        assert!(wigner_d(HalfInt::HALF, h(3), h(1), 0.2).is_err());
        assert!(wigner_d(J32, h(1), h(5), 0.2).is_err());
        assert!(wigner_d(J32, h(0), h(1), 0.2).is_err());
        assert!(wigner_d(h(5), h(1), h(1), 0.2).is_err());
    }

    #[test]
    fn small_d_orthogonal_j32() {
        let beta = PI / 3.0;
        let ms: Vec<_> = J32.projections().collect();
        for a in &ms {
            for b in &ms {
                let dot: f64 = ms
                    .iter()
                    .map(|m| {
                        wigner_d(J32, *a, *m, beta).unwrap() * wigner_d(J32, *b, *m, beta).unwrap()
                    })
                    .sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn small_d_symmetries() {
        for k in 0..20 {
            let beta = 0.05 + 0.155 * k as f64;
            for j2 in 1..=4 {
                let j = h(j2);
                for mp in j.projections() {
                    for m in j.projections() {
                        let d = wigner_d(j, mp, m, beta).unwrap();
                        let sign = if ((m.twice() - mp.twice()) / 2) % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        };
                        assert!((d - sign * wigner_d(j, m, mp, beta).unwrap()).abs() < 1e-13);
                        assert!((d - wigner_d(j, m.neg(), mp.neg(), beta).unwrap()).abs() < 1e-13);
                    }
                }
            }
        }
    }

    #[test]
    fn big_d_identity_and_unitarity() {
        let d = wigner_big_d(J32, &EulerAngles::zero()).unwrap();
        assert!((d - ComplexMatrix::identity(4).unwrap()).max_abs() < 1e-15);
        for k in 0..100 {
            let t = k as f64;
            let a = EulerAngles::new(0.61 * t, (0.83 * t + 0.1) % PI, 1.7 * t).unwrap();
            for j in [HalfInt::HALF, J32] {
                let d = wigner_big_d(j, &a).unwrap();
                let dim = d.dim();
                assert!(
                    (d * d.adjoint() - ComplexMatrix::identity(dim).unwrap()).max_abs() < 1e-12
                );
            }
        }
        assert!(wigner_big_d(h(2), &EulerAngles::zero()).is_err());
    }

    #[test]
    fn big_d_spin_half_matches_qubit_rotation() {
        // D^{1/2}(α, β, γ) = u(φ = γ, θ = β, ψ = α)
        for k in 0..20 {
            let t = k as f64;
            let (alpha, beta, gamma) = (0.4 * t + 0.1, (0.37 * t) % PI, 1.1 * t + 0.3);
            let d = wigner_big_d(
                HalfInt::HALF,
                &EulerAngles::new(alpha, beta, gamma).unwrap(),
            )
            .unwrap();
            let u = qubit_rotation(&EulerAngles::new(gamma, beta, alpha).unwrap());
            for r in 0..2 {
                for c in 0..2 {
                    assert!((d[(r, c)].norm() - u[(r, c)].norm()).abs() < 1e-12);
                }
            }
            assert!((d - u).max_abs() < 1e-12);
        }
    }

    #[test]
    fn half_int_parse_and_display() {
        assert_eq!(HalfInt::parse("1.5"), Some(h(3)));
        assert_eq!(HalfInt::parse("-3/2"), Some(h(-3)));
        assert_eq!(HalfInt::parse("0.3"), None);
        assert_eq!(h(-3).to_string(), "-3/2");
        assert_eq!(h(4).to_string(), "2");
    }

    #[test]
    fn direction_validation() {
        assert!(Direction::new(1.0, 1.0, 0.0).is_err());
        let d = Direction::new(0.6, 0.8, 1e-10).unwrap();
        let c = d.components();
        assert!(((c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt() - 1.0).abs() < 1e-15);
    }
}
