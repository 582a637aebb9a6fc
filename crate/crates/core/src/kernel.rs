//! Intertwining kernels between the spin-3/2 and two-qubit tomograms.
//!
//! `K12 = Tr(D_qudit(m, n) U_2q(m1, m2, n1, n2))` maps qudit tomograms to
//! two-qubit tomograms and `K21 = Tr(D_2q U_qudit)` maps back. Sums over the
//! qudit projection `m` are always taken.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{
    dequantizer_2q, dequantizer_qudit, quantizer_2q, FramePoint2Q, FramePointQudit, QuadratureGrid,
    QuditFrame, SignReading,
};
use crate::matrix::{ComplexMatrix, C64};
use crate::su2::{EulerAngles, HalfInt};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelPoint {
    pub m: HalfInt,
    pub m1: HalfInt,
    pub m2: HalfInt,
    /// `(α, β, γ)`.
    pub qudit: EulerAngles,
    pub n1: EulerAngles,
    pub n2: EulerAngles,
}

impl KernelPoint {
    pub fn new(
        m: HalfInt,
        m1: HalfInt,
        m2: HalfInt,
        qudit: EulerAngles,
        n1: EulerAngles,
        n2: EulerAngles,
    ) -> Result<Self> {
        FramePointQudit::new(m, qudit)?;
        FramePoint2Q::new(m1, m2, n1, n2)?;
        Ok(Self {
            m,
            m1,
            m2,
            qudit,
            n1,
            n2,
        })
    }

    pub fn qudit_point(&self) -> FramePointQudit {
        FramePointQudit {
            m: self.m,
            n: self.qudit,
        }
    }

    pub fn two_qubit_point(&self) -> FramePoint2Q {
        FramePoint2Q {
            m1: self.m1,
            m2: self.m2,
            n1: self.n1,
            n2: self.n2,
        }
    }
}

/// `Tr(D_qudit U_2q)` with the qudit quantizer of the shared frame.
pub fn kernel_k12(p: &KernelPoint) -> C64 {
    QuditFrame::shared()
        .quantizer_qudit(&p.qudit_point())
        .trace_product(&dequantizer_2q(&p.two_qubit_point()))
}

/// `Tr(D_2q U_qudit)`.
pub fn kernel_k21(p: &KernelPoint) -> C64 {
    quantizer_2q(&p.two_qubit_point()).trace_product(&dequantizer_qudit(&p.qudit_point()))
}

/// Kernels that transport dual symbols: `K12ᵈ = K21` and `K21ᵈ = K12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualKernels {
    pub k12_dual: C64,
    pub k21_dual: C64,
}

pub fn dual_kernels(p: &KernelPoint) -> DualKernels {
    DualKernels {
        k12_dual: kernel_k21(p),
        k21_dual: kernel_k12(p),
    }
}

/// Arguments of the closed-form kernel. Projections are plain reals so the
/// projection-dependent terms can be switched off by hand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormArgs {
    pub m: f64,
    pub m1: f64,
    pub m2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl From<&KernelPoint> for ClosedFormArgs {
    fn from(p: &KernelPoint) -> Self {
        Self {
            m: p.m.value(),
            m1: p.m1.value(),
            m2: p.m2.value(),
            alpha: p.qudit.first,
            beta: p.qudit.second,
            theta1: p.n1.second,
            theta2: p.n2.second,
            phi1: p.n1.first,
            phi2: p.n2.first,
        }
    }
}

pub const CLOSED_FORM_TERMS: [&str; 9] = [
    "constant",
    "cos_beta_polar",
    "sin_beta_azimuthal",
    "cubic_cos_beta_polar",
    "m_m1_m2_polar",
    "sqrt3_m2_sin_beta",
    "sqrt3_m2_m1_cos2alpha",
    "sqrt3_m2_m_m1_sin2_beta",
    "m1_m2_sin_beta_cross",
];

/// `(−1)^m` for a real projection under `reading`; `m` is rounded to the
/// nearest half-integer.
fn sign_factor(m: f64, reading: SignReading) -> C64 {
    reading.sign(HalfInt::from_twice((2.0 * m).round() as i32))
}

fn factorial(x: f64) -> f64 {
    let n = x.round() as i64;
    (1..=n).map(|k| k as f64).product()
}

/// Signed contributions of the nine closed-form terms; their sum is the
/// closed-form kernel. The trailing bracket of the printed expression is not
/// closed, so the last term is read as lying inside the prefactor bracket.
pub fn kernel_k12_closed_terms(a: &ClosedFormArgs, reading: SignReading) -> [C64; 9] {
    let (m, m1, m2) = (a.m, a.m1, a.m2);
    let (cb, sb) = (a.beta.cos(), a.beta.sin());
    let (ct1, st1, ct2, st2) = (
        a.theta1.cos(),
        a.theta1.sin(),
        a.theta2.cos(),
        a.theta2.sin(),
    );
    let (ca, c2a, c3a) = (a.alpha.cos(), (2.0 * a.alpha).cos(), (3.0 * a.alpha).cos());
    let e1 = C64::from_polar(1.0, a.phi1);
    let e2 = C64::from_polar(1.0, a.phi2);
    let s3 = 3f64.sqrt();
    let real = |x: f64| C64::new(x, 0.0);

    let lead = 3.0 * m / 5.0;
    let pref = -sign_factor(m, reading) * C64::i() / (factorial(m + 1.5) * factorial(1.5 - m));

    let t1 = real(cb * (2.0 * m1 * ct1 + m2 * ct2));
    let t2 = m2 * sb * ca * st2 * e2 * (-s3 + 2.0 * m1 * st1 * e1);
    let t3 = real(21.0 * cb * (-0.6 + cb * cb) * (m1 / 2.0 * ct1 - m2 * ct2));
    let t4 = real(10.0 * m * m1 * m2 * ct1 * ct2 * (1.0 - 3.0 * cb * cb));
    let t5 = 10.5 * sb * st2 * e2 * ca * (cb * cb - 0.2);
    let t6 = 21.0 * m1 * cb * sb * sb * ct2 * st1 * e1 * c2a;
    let t7 = 10.0 * m * m1 * sb * sb * (e1 * ct2 * st1 * c2a + 4.0 * e2 * ct1 * st2 * ca);
    let t8 = 10.5
        * m1
        * m2
        * sb
        * st1
        * st2
        * e1
        * e2
        * (-0.6 * ca + 3.0 * cb * cb * ca - sb * sb * c3a);

    [
        real(0.25),
        lead * t1,
        lead * t2,
        pref * t3,
        pref * t4,
        pref * s3 * m2 * t5,
        pref * s3 * m2 * t6,
        pref * s3 * m2 * t7,
        pref * t8,
    ]
}

/// Literal evaluation of the printed closed-form kernel.
pub fn kernel_k12_closed(a: &ClosedFormArgs, reading: SignReading) -> C64 {
    kernel_k12_closed_terms(a, reading).iter().sum()
}

/// Split of a function of `(m1, m2)` into `c + a·m1 + b·m2 + d·m1·m2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sectors {
    pub constant: C64,
    pub m1: C64,
    pub m2: C64,
    pub m1_m2: C64,
}

impl Sectors {
    pub fn of(f: impl Fn(HalfInt, HalfInt) -> C64) -> Self {
        let mut s = Sectors {
            constant: C64::new(0.0, 0.0),
            m1: C64::new(0.0, 0.0),
            m2: C64::new(0.0, 0.0),
            m1_m2: C64::new(0.0, 0.0),
        };
        for a in [HalfInt::HALF, HalfInt::MINUS_HALF] {
            for b in [HalfInt::HALF, HalfInt::MINUS_HALF] {
                let v = f(a, b);
                s.constant += v / 4.0;
                s.m1 += a.value() * v;
                s.m2 += b.value() * v;
                s.m1_m2 += 4.0 * a.value() * b.value() * v;
            }
        }
        s
    }

    fn deviations(&self, other: &Sectors) -> [f64; 4] {
        [
            (self.constant - other.constant).norm(),
            (self.m1 - other.m1).norm(),
            (self.m2 - other.m2).norm(),
            (self.m1_m2 - other.m1_m2).norm(),
        ]
    }
}

/// One sampled point where the closed form and the trace kernel differ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelDiscrepancy {
    pub point: KernelPoint,
    pub trace: C64,
    pub closed: C64,
    pub deviation: f64,
    /// `(label, contribution)` for each closed-form term.
    pub terms: Vec<(&'static str, C64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadingComparison {
    pub reading: SignReading,
    pub max_deviation: f64,
    pub max_imaginary: f64,
    /// Largest deviation of the constant, `m1`, `m2` and `m1·m2` sectors.
    pub sector_max_deviation: [f64; 4],
    pub agrees: bool,
    /// The worst few points with their term breakdown.
    pub worst: Vec<KernelDiscrepancy>,
}

/// Comparison of the trace-defined kernel with the closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelCrossCheck {
    pub points: usize,
    pub tolerance: f64,
    pub trace_max_imaginary: f64,
    pub readings: Vec<ReadingComparison>,
    pub agrees: bool,
}

const WORST_KEPT: usize = 5;

/// Evaluates both kernels at every sample and reports the deviations.
pub fn cross_check_closed_form(samples: &[KernelPoint], tolerance: f64) -> KernelCrossCheck {
    let trace_max_imaginary = samples
        .iter()
        .map(|p| kernel_k12(p).im.abs())
        .fold(0.0, f64::max);
    let readings: Vec<ReadingComparison> = SignReading::ALL
        .iter()
        .map(|&reading| {
            let mut rows: Vec<KernelDiscrepancy> = samples
                .iter()
                .map(|p| {
                    let args = ClosedFormArgs::from(p);
                    let terms = kernel_k12_closed_terms(&args, reading);
                    let closed: C64 = terms.iter().sum();
                    let trace = kernel_k12(p);
                    KernelDiscrepancy {
                        point: *p,
                        trace,
                        closed,
                        deviation: (trace - closed).norm(),
                        terms: CLOSED_FORM_TERMS.iter().copied().zip(terms).collect(),
                    }
                })
                .collect();
            let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
            let max_imaginary = rows.iter().map(|r| r.closed.im.abs()).fold(0.0, f64::max);

            let mut sector_max_deviation = [0f64; 4];
            for p in samples {
                let at = |m1, m2| KernelPoint { m1, m2, ..*p };
                let trace = Sectors::of(|m1, m2| kernel_k12(&at(m1, m2)));
                let closed = Sectors::of(|m1, m2| {
                    kernel_k12_closed(&ClosedFormArgs::from(&at(m1, m2)), reading)
                });
                for (acc, d) in sector_max_deviation
                    .iter_mut()
                    .zip(trace.deviations(&closed))
                {
                    *acc = acc.max(d);
                }
            }

            rows.sort_by(|a, b| b.deviation.total_cmp(&a.deviation));
            rows.truncate(WORST_KEPT);
            ReadingComparison {
                reading,
                max_deviation,
                max_imaginary,
                sector_max_deviation,
                agrees: max_deviation <= tolerance,
                worst: rows,
            }
        })
        .collect();
    let agrees = readings.iter().any(|r| r.agrees);
    KernelCrossCheck {
        points: samples.len(),
        tolerance,
        trace_max_imaginary,
        readings,
        agrees,
    }
}

/// Frame operators cached on fixed grids, for mapping many target points.
///
/// Kernel values are formed on demand from the cached quantizers; each
/// mapping is a sequential weighted sum in grid order.
#[derive(Debug, Clone)]
pub struct KernelMapper {
    qudit_points: Vec<(FramePointQudit, f64)>,
    qudit_quantizers: Vec<ComplexMatrix>,
    qudit_dequantizers: Vec<ComplexMatrix>,
    two_points: Vec<(FramePoint2Q, f64)>,
    two_quantizers: Vec<ComplexMatrix>,
    two_dequantizers: Vec<ComplexMatrix>,
}

fn require_spheres(grid: &QuadratureGrid, spheres: usize) -> Result<()> {
    grid.require_exact()?;
    if grid.spheres() != spheres {
        return Err(Error::Domain {
            name: "spheres",
            value: grid.spheres() as f64,
            min: spheres as f64,
            max: spheres as f64,
        });
    }
    Ok(())
}

fn qudit_points(grid: &QuadratureGrid) -> Vec<(FramePointQudit, f64)> {
    grid.sphere_nodes()
        .iter()
        .flat_map(|n| FramePointQudit::all_projections(n.angles()).map(|p| (p, n.weight)))
        .collect()
}

fn two_points(grid: &QuadratureGrid) -> Vec<(FramePoint2Q, f64)> {
    let nodes = grid.sphere_nodes();
    let mut out = Vec::with_capacity(4 * nodes.len() * nodes.len());
    for a in nodes {
        for b in nodes {
            out.extend(
                FramePoint2Q::all_projections(a.angles(), b.angles())
                    .map(|p| (p, a.weight * b.weight)),
            );
        }
    }
    out
}

impl KernelMapper {
    /// `qudit_grid` must be a single-sphere grid and `two_qubit_grid` a
    /// two-sphere grid, both meeting the exactness minimum.
    pub fn new(qudit_grid: &QuadratureGrid, two_qubit_grid: &QuadratureGrid) -> Result<Self> {
        require_spheres(qudit_grid, 1)?;
        require_spheres(two_qubit_grid, 2)?;
        let frame = QuditFrame::shared();
        let qudit_points = qudit_points(qudit_grid);
        let two_points = two_points(two_qubit_grid);
        Ok(Self {
            qudit_quantizers: qudit_points
                .iter()
                .map(|(p, _)| frame.quantizer_qudit(p))
                .collect(),
            qudit_dequantizers: qudit_points
                .iter()
                .map(|(p, _)| dequantizer_qudit(p))
                .collect(),
            two_quantizers: two_points.iter().map(|(p, _)| quantizer_2q(p)).collect(),
            two_dequantizers: two_points.iter().map(|(p, _)| dequantizer_2q(p)).collect(),
            qudit_points,
            two_points,
        })
    }

    /// Source points of the qudit grid, in summation order.
    pub fn qudit_points(&self) -> &[(FramePointQudit, f64)] {
        &self.qudit_points
    }

    pub fn two_qubit_points(&self) -> &[(FramePoint2Q, f64)] {
        &self.two_points
    }

    pub fn sample_qudit(&self, mut f: impl FnMut(&FramePointQudit) -> f64) -> Vec<f64> {
        self.qudit_points.iter().map(|(p, _)| f(p)).collect()
    }

    pub fn sample_two_qubit(&self, mut f: impl FnMut(&FramePoint2Q) -> f64) -> Vec<f64> {
        self.two_points.iter().map(|(p, _)| f(p)).collect()
    }

    fn transport(
        weights: impl Iterator<Item = f64>,
        values: &[f64],
        kernels: impl Iterator<Item = C64>,
    ) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for ((w, v), k) in weights.zip(values).zip(kernels) {
            acc += w * v * k;
        }
        acc
    }

    fn check_len(expected: usize, found: usize) -> Result<()> {
        if expected != found {
            return Err(Error::DimensionMismatch { expected, found });
        }
        Ok(())
    }

    /// `ω(target) = Σ_m ∫ W(m, n) K12 dn`.
    pub fn qudit_to_2q(&self, w: &[f64], target: &FramePoint2Q) -> Result<C64> {
        Self::check_len(self.qudit_points.len(), w.len())?;
        let u = dequantizer_2q(target);
        Ok(Self::transport(
            self.qudit_points.iter().map(|(_, w)| *w),
            w,
            self.qudit_quantizers.iter().map(|d| d.trace_product(&u)),
        ))
    }

    /// `W(target) = Σ_{m1,m2} ∫∫ ω K21 dn1 dn2`.
    pub fn two_q_to_qudit(&self, omega: &[f64], target: &FramePointQudit) -> Result<C64> {
        Self::check_len(self.two_points.len(), omega.len())?;
        let u = dequantizer_qudit(target);
        Ok(Self::transport(
            self.two_points.iter().map(|(_, w)| *w),
            omega,
            self.two_quantizers.iter().map(|d| d.trace_product(&u)),
        ))
    }

    /// Dual two-qubit symbol from dual qudit values, through `K12ᵈ = K21`.
    pub fn dual_qudit_to_2q(&self, w_dual: &[f64], target: &FramePoint2Q) -> Result<C64> {
        Self::check_len(self.qudit_points.len(), w_dual.len())?;
        let d = quantizer_2q(target);
        Ok(Self::transport(
            self.qudit_points.iter().map(|(_, w)| *w),
            w_dual,
            self.qudit_dequantizers.iter().map(|u| d.trace_product(u)),
        ))
    }

    /// Dual qudit symbol from dual two-qubit values, through `K21ᵈ = K12`.
    pub fn dual_2q_to_qudit(&self, omega_dual: &[f64], target: &FramePointQudit) -> Result<C64> {
        Self::check_len(self.two_points.len(), omega_dual.len())?;
        let d = QuditFrame::shared().quantizer_qudit(target);
        Ok(Self::transport(
            self.two_points.iter().map(|(_, w)| *w),
            omega_dual,
            self.two_dequantizers.iter().map(|u| d.trace_product(u)),
        ))
    }
}

/// One-shot `map_qudit_to_2q` over a single-sphere grid.
pub fn map_qudit_to_2q(
    mut w: impl FnMut(&FramePointQudit) -> f64,
    grid: &QuadratureGrid,
    target: &FramePoint2Q,
) -> Result<C64> {
    require_spheres(grid, 1)?;
    let frame = QuditFrame::shared();
    let u = dequantizer_2q(target);
    let mut acc = C64::new(0.0, 0.0);
    for (p, weight) in qudit_points(grid) {
        acc += weight * w(&p) * frame.quantizer_qudit(&p).trace_product(&u);
    }
    Ok(acc)
}

/// One-shot `map_2q_to_qudit` over a two-sphere grid.
pub fn map_2q_to_qudit(
    mut omega: impl FnMut(&FramePoint2Q) -> f64,
    grid: &QuadratureGrid,
    target: &FramePointQudit,
) -> Result<C64> {
    require_spheres(grid, 2)?;
    let u = dequantizer_qudit(target);
    let mut acc = C64::new(0.0, 0.0);
    for (p, weight) in two_points(grid) {
        acc += weight * omega(&p) * quantizer_2q(&p).trace_product(&u);
    }
    Ok(acc)
}

/// Deterministic pseudo-random kernel points for cross-checks.
pub fn sample_kernel_points(count: usize, seed: u64) -> Vec<KernelPoint> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let angles = |rng: &mut rand_chacha::ChaCha8Rng| {
        EulerAngles::new(
            rng.random_range(0.0..2.0 * PI),
            rng.random_range(0.0..PI),
            rng.random_range(0.0..2.0 * PI),
        )
        .expect("finite angles")
    };
    let qubit = [HalfInt::HALF, HalfInt::MINUS_HALF];
    (0..count)
        .map(|_| {
            let m = HalfInt::from_twice(2 * rng.random_range(0..4) - 3);
            let m1 = qubit[rng.random_range(0..2)];
            let m2 = qubit[rng.random_range(0..2)];
            KernelPoint {
                m,
                m1,
                m2,
                qudit: angles(&mut rng),
                n1: angles(&mut rng),
                n2: angles(&mut rng),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{make_grid, tomogram_2q, tomogram_qudit};
    use crate::matrix::{random_density, werner_matrix};

    fn grids() -> (QuadratureGrid, QuadratureGrid) {
        (make_grid(8, 8, 1).unwrap(), make_grid(8, 8, 2).unwrap())
    }

    #[test]
    fn closed_form_constant_term() {
        let args = ClosedFormArgs {
            m: 0.0,
            m1: 0.0,
            m2: 0.0,
            alpha: 0.4,
            beta: 1.1,
            theta1: 0.3,
            theta2: 2.0,
            phi1: 1.0,
            phi2: 4.0,
        };
        for reading in SignReading::ALL {
            let k = kernel_k12_closed(&args, reading);
            assert!((k - C64::new(0.25, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn closed_form_finite_at_the_pole() {
        for p in sample_kernel_points(10, 3) {
            let mut a = ClosedFormArgs::from(&p);
            a.beta = 0.0;
            let at0 = kernel_k12_closed(&a, SignReading::ShiftedInteger);
            a.beta = 1e-8;
            let near = kernel_k12_closed(&a, SignReading::ShiftedInteger);
            assert!(at0.re.is_finite() && at0.im.is_finite());
            assert!((at0 - near).norm() < 1e-6);
        }
    }

    #[test]
    fn cross_check_reports_terms() {
        let check = cross_check_closed_form(&sample_kernel_points(10, 5), 1e-10);
        assert_eq!(check.readings.len(), 2);
        assert!(check.trace_max_imaginary < 1e-12);
        for r in &check.readings {
            assert!(!r.worst.is_empty());
            assert_eq!(r.worst[0].terms.len(), 9);
            let sum: C64 = r.worst[0].terms.iter().map(|(_, v)| v).sum();
            assert!((sum - r.worst[0].closed).norm() < 1e-12);
        }
    }

    #[test]
    fn kernels_are_real_and_gamma_free() {
        for p in sample_kernel_points(10, 9) {
            let k12 = kernel_k12(&p);
            let k21 = kernel_k21(&p);
            assert!(k12.im.abs() < 1e-12 && k21.im.abs() < 1e-12);
            for g in [0.0, 1.0, 2.5, 5.0] {
                let q = KernelPoint {
                    qudit: p.qudit.with_third(g).unwrap(),
                    n1: p.n1.with_third(g * 0.5).unwrap(),
                    n2: p.n2.with_third(g * 0.3).unwrap(),
                    ..p
                };
                assert!((kernel_k12(&q) - k12).norm() < 1e-12);
                assert!((kernel_k21(&q) - k21).norm() < 1e-12);
            }
            let d = dual_kernels(&p);
            assert_eq!(d.k12_dual, k21);
            assert_eq!(d.k21_dual, k12);
        }
    }

    #[test]
    fn flat_tomograms_map_to_flat() {
        let (g1, g2) = grids();
        for p in sample_kernel_points(5, 11) {
            let v = map_qudit_to_2q(|_| 0.25, &g1, &p.two_qubit_point()).unwrap();
            assert!((v - C64::new(0.25, 0.0)).norm() < 1e-12);
            let v = map_2q_to_qudit(|_| 0.25, &g2, &p.qudit_point()).unwrap();
            assert!((v - C64::new(0.25, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn mapping_intertwines_tomograms() {
        let (g1, g2) = grids();
        let mapper = KernelMapper::new(&g1, &g2).unwrap();
        for seed in 0..4 {
            let rho = *random_density(4, seed).unwrap().matrix();
            let w = mapper.sample_qudit(|p| tomogram_qudit(&rho, p));
            let omega = mapper.sample_two_qubit(|p| tomogram_2q(&rho, p));
            for p in sample_kernel_points(5, 100 + seed) {
                let t2 = p.two_qubit_point();
                let tq = p.qudit_point();
                let a = mapper.qudit_to_2q(&w, &t2).unwrap();
                assert!((a.re - tomogram_2q(&rho, &t2)).abs() < 1e-10 && a.im.abs() < 1e-10);
                let b = mapper.two_q_to_qudit(&omega, &tq).unwrap();
                assert!((b.re - tomogram_qudit(&rho, &tq)).abs() < 1e-10 && b.im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn mapping_is_linear() {
        let (g1, g2) = grids();
        let mapper = KernelMapper::new(&g1, &g2).unwrap();
        let (a, b) = (werner_matrix(0.2), werner_matrix(0.9));
        let mix = a.scale_real(0.3) + b.scale_real(0.7);
        let wa = mapper.sample_qudit(|p| tomogram_qudit(&a, p));
        let wb = mapper.sample_qudit(|p| tomogram_qudit(&b, p));
        let wm = mapper.sample_qudit(|p| tomogram_qudit(&mix, p));
        for p in sample_kernel_points(5, 21) {
            let t = p.two_qubit_point();
            let lhs = mapper.qudit_to_2q(&wm, &t).unwrap();
            let rhs = 0.3 * mapper.qudit_to_2q(&wa, &t).unwrap()
                + 0.7 * mapper.qudit_to_2q(&wb, &t).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn dual_symbols_transport() {
        let (g1, g2) = grids();
        let mapper = KernelMapper::new(&g1, &g2).unwrap();
        let frame = QuditFrame::shared();
        let rho = werner_matrix(0.5);
        let w_dual = mapper.sample_qudit(|p| rho.trace_product(&frame.quantizer_qudit(p)).re);
        let omega_dual = mapper.sample_two_qubit(|p| rho.trace_product(&quantizer_2q(p)).re);
        for p in sample_kernel_points(5, 31) {
            let t2 = p.two_qubit_point();
            let want = rho.trace_product(&quantizer_2q(&t2));
            assert!((mapper.dual_qudit_to_2q(&w_dual, &t2).unwrap() - want).norm() < 1e-12);
            let tq = p.qudit_point();
            let want = rho.trace_product(&frame.quantizer_qudit(&tq));
            assert!((mapper.dual_2q_to_qudit(&omega_dual, &tq).unwrap() - want).norm() < 1e-12);
        }
    }

    #[test]
    fn wrong_grids_rejected() {
        let (g1, g2) = grids();
        assert!(KernelMapper::new(&g2, &g1).is_err());
        let coarse = QuadratureGrid::unchecked(4, 4, 1).unwrap();
        assert!(map_qudit_to_2q(
            |_| 0.25,
            &coarse,
            &sample_kernel_points(1, 0)[0].two_qubit_point()
        )
        .is_err());
    }

    #[test]
    fn sectors_recover_bilinear_coefficients() {
        let s = Sectors::of(|a, b| {
            C64::new(
                0.25 + 0.5 * a.value() - 0.2 * b.value() + 3.0 * a.value() * b.value(),
                0.0,
            )
        });
        assert!((s.constant.re - 0.25).abs() < 1e-15);
        assert!((s.m1.re - 0.5).abs() < 1e-15);
        assert!((s.m2.re + 0.2).abs() < 1e-15);
        assert!((s.m1_m2.re - 3.0).abs() < 1e-15);
    }
}
