//! Spin-3/2 frame operators.
//!
//! The dequantizer `U†(α,β,γ)|m⟩⟨m|U(α,β,γ)` is built from the Wigner
//! `D^{(3/2)}` matrix. For the quantizer two sources exist: the closed-form
//! `B^{3/2}_m(α, β)` matrices (kept verbatim, including the ambiguous
//! `(−1)^m` sign) and the canonical dual frame `S⁻¹ vec(U)`, where
//! `S = Σ_m ∫ vec(U) vec(U)† dn` is the 16×16 frame operator. [`QuditFrame`]
//! tests the closed form against reconstruction and records which one is used.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{random_density, ComplexMatrix, C64, I, ZERO};
use crate::su2::{wigner_big_d, HalfInt};

use super::grid::{make_grid, QuadratureGrid, MIN_AZIMUTH, MIN_POLAR};
use super::{Frame, FramePointQudit, Representation};

/// Residual above which the closed-form quantizer is rejected.
pub const PRINTED_ACCEPT_THRESHOLD: f64 = 1e-6;

const PROBE_STATES: u64 = 5;
const ENTRY_DEFECT_FLOOR: f64 = 1e-9;

/// Row index of projection `m` in the descending basis.
pub(crate) fn qudit_row(m: HalfInt) -> usize {
    ((3 - m.twice()) / 2) as usize
}

pub fn dequantizer_qudit(p: &FramePointQudit) -> ComplexMatrix {
    let d = wigner_big_d(HalfInt::THREE_HALVES, &p.n).expect("j = 3/2 is supported");
    let r = qudit_row(p.m);
    let mut out = ComplexMatrix::zeros4();
    for a in 0..4 {
        for b in 0..4 {
            out[(a, b)] = d[(r, a)].conj() * d[(r, b)];
        }
    }
    out
}

/// How `(−1)^m` is read for half-integer `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignReading {
    /// `(−1)^{m+3/2}`, a real sign.
    ShiftedInteger,
    /// `e^{iπm}`.
    ComplexPhase,
}

impl SignReading {
    pub const ALL: [SignReading; 2] = [SignReading::ShiftedInteger, SignReading::ComplexPhase];

    pub fn sign(self, m: HalfInt) -> C64 {
        match self {
            SignReading::ShiftedInteger => {
                if ((m.twice() + 3) / 2) % 2 == 0 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(-1.0, 0.0)
                }
            }
            SignReading::ComplexPhase => C64::from_polar(1.0, PI * m.value()),
        }
    }
}

impl fmt::Display for SignReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignReading::ShiftedInteger => write!(f, "(-1)^(m+3/2)"),
            SignReading::ComplexPhase => write!(f, "exp(i pi m)"),
        }
    }
}

/// The three closed-form blocks. `sin_b3` is `sinβ · B3`, multiplied out so
/// that the `cosβ/sinβ` diagonal has no pole at `β ∈ {0, π}`.
#[derive(Debug, Clone, Copy)]
pub struct PrintedBlocks {
    pub b1: ComplexMatrix,
    pub b2: ComplexMatrix,
    pub sin_b3: ComplexMatrix,
}

fn from_rows(rows: [[C64; 4]; 4]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros4();
    for (r, row) in rows.iter().enumerate() {
        for (c, z) in row.iter().enumerate() {
            m[(r, c)] = *z;
        }
    }
    m
}

pub fn printed_blocks(m: HalfInt, alpha: f64, beta: f64) -> PrintedBlocks {
    let mv = m.value();
    let (s, c) = (beta.sin(), beta.cos());
    let r3 = 3f64.sqrt();
    let e = |k: f64| C64::from_polar(1.0, k * alpha);
    let re = |x: f64| C64::new(x, 0.0);
    let z = ZERO;

    let off = 3.0 * r3 * mv / 10.0 * s;
    let mid = 63.0 * mv / 105.0 * s;
    let b1 = from_rows([
        [re(0.25 + 0.9 * mv * c), e(-1.0) * off, z, z],
        [e(1.0) * off, re(0.25 + 0.3 * mv * c), e(1.0) * mid, z],
        [z, e(1.0) * mid, re(0.25 - 0.3 * mv * c), e(-1.0) * off],
        [z, z, e(1.0) * off, re(0.25 - 0.9 * mv * c)],
    ]);

    let p2 = 3.0 * c * c - 1.0;
    let s2b = r3 * (2.0 * beta).sin();
    let ss = r3 * s * s;
    let b2 = from_rows([
        [re(p2), e(-1.0) * s2b, e(-2.0) * ss, z],
        [e(1.0) * s2b, re(-p2), z, e(-2.0) * -ss],
        [e(2.0) * ss, z, re(-p2), e(-1.0) * -s2b],
        [z, e(2.0) * -ss, e(1.0) * -s2b, re(p2)],
    ]);

    let q = c * (c * c - 0.6);
    let a1 = r3 * (c * c - 0.2) * s;
    let a2 = r3 * s * c * s;
    let a3 = s * s * s;
    let a4 = 3.0 * (0.2 - c * c) * s;
    let sin_b3 = from_rows([
        [re(q), e(-1.0) * a1, e(-2.0) * a2, e(-3.0) * a3],
        [e(1.0) * a1, re(3.0 * q), e(-1.0) * a4, e(-2.0) * -a2],
        [e(2.0) * a2, e(1.0) * a4, re(-3.0 * q), e(-1.0) * a1],
        [e(3.0) * a3, e(2.0) * a2, e(1.0) * a1, re(-q)],
    ]);
    PrintedBlocks { b1, b2, sin_b3 }
}

/// `i (−1)^m / (2 (m + 3/2)! (3/2 − m)!)` under the given sign reading.
pub fn printed_prefactor(m: HalfInt, reading: SignReading) -> C64 {
    let fact = |n: i32| (1..=n).product::<i32>() as f64;
    let denom = 2.0 * fact((m.twice() + 3) / 2) * fact((3 - m.twice()) / 2);
    I * reading.sign(m) / denom
}

/// `B^{3/2}_m(α, β) = B1 + prefactor · (5m B2 + (21/2) sinβ B3)`.
pub fn printed_b_matrix(m: HalfInt, alpha: f64, beta: f64, reading: SignReading) -> ComplexMatrix {
    let blocks = printed_blocks(m, alpha, beta);
    let pref = printed_prefactor(m, reading);
    let mut out = blocks.b1;
    out.add_scaled(pref * 5.0 * m.value(), &blocks.b2);
    out.add_scaled(pref * 10.5, &blocks.sin_b3);
    out
}

/// The closed-form quantizer `B^{3/2}_m(α, β) / 8π²`.
pub fn printed_quantizer_qudit(p: &FramePointQudit, reading: SignReading) -> ComplexMatrix {
    printed_b_matrix(p.m, p.n.first, p.n.second, reading).scale_real(1.0 / (8.0 * PI * PI))
}

/// Which quantizer family a [`QuditFrame`] hands out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "reading")]
pub enum QuantizerAuthority {
    Printed(SignReading),
    CanonicalDual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockLabel {
    B1,
    B2Term,
    B3Term,
    Total,
}

/// One matrix entry that fails a check, with the size of the failure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryDefect {
    /// Projection label, absent when the defect aggregates over all `m`.
    pub m: Option<String>,
    pub block: BlockLabel,
    pub row: usize,
    pub col: usize,
    pub defect: f64,
}

/// Behaviour of the closed-form quantizer under one sign reading.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrintedTrial {
    pub reading: SignReading,
    /// Largest Frobenius reconstruction error over the probe states.
    pub max_residual: f64,
    /// `max |Tr B − 1|` over probe angles and projections.
    pub trace_defect: f64,
    pub hermiticity_failures: Vec<EntryDefect>,
    /// Entries `(a, b)` whose reconstruction row `Σ_m ∫ Q_ab U_dc dn` differs
    /// from `δ_ac δ_bd`.
    pub reconstruction_failures: Vec<EntryDefect>,
    pub accepted: bool,
}

/// Machine-readable record of the quantizer selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantizerCapability {
    pub authority: QuantizerAuthority,
    pub selection_threshold: f64,
    pub probe_states: u64,
    pub printed_trials: Vec<PrintedTrial>,
    pub canonical_max_residual: f64,
    pub frame_operator_condition: f64,
    pub grid: (usize, usize),
}

/// Spin-3/2 frame: dequantizers plus the selected quantizer family.
#[derive(Debug, Clone)]
pub struct QuditFrame {
    authority: QuantizerAuthority,
    inverse_frame_op: DMatrix<C64>,
    capability: QuantizerCapability,
}

/// Column-stacking vectorization.
fn vec_of(m: &ComplexMatrix) -> DVector<C64> {
    DVector::from_fn(16, |k, _| m[(k % 4, k / 4)])
}

fn unvec(v: &DVector<C64>) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros4();
    for k in 0..16 {
        m[(k % 4, k / 4)] = v[k];
    }
    m
}

fn sphere_points(grid: &QuadratureGrid) -> impl Iterator<Item = (FramePointQudit, f64)> + '_ {
    grid.sphere_nodes().iter().flat_map(|node| {
        FramePointQudit::all_projections(node.angles())
            .into_iter()
            .map(move |p| (p, node.weight))
    })
}

fn reconstruct_probe(
    grid: &QuadratureGrid,
    rho: &ComplexMatrix,
    quantizer: &dyn Fn(&FramePointQudit) -> ComplexMatrix,
) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros4();
    for (p, w) in sphere_points(grid) {
        let t = rho.trace_product(&dequantizer_qudit(&p));
        acc.add_scaled(C64::new(w, 0.0) * t, &quantizer(&p));
    }
    acc
}

impl QuditFrame {
    /// Builds the frame operator on `grid`, tests the closed-form quantizer
    /// under both sign readings and selects the authority.
    pub fn build(grid: &QuadratureGrid) -> Result<Self> {
        grid.require_exact()?;
        if grid.spheres() != 1 {
            return Err(Error::Domain {
                name: "spheres",
                value: grid.spheres() as f64,
                min: 1.0,
                max: 1.0,
            });
        }
        let mut s = DMatrix::<C64>::zeros(16, 16);
        for (p, w) in sphere_points(grid) {
            let v = vec_of(&dequantizer_qudit(&p));
            s += (&v * v.adjoint()) * C64::new(w, 0.0);
        }
        let eig = s.clone().symmetric_eigenvalues();
        let (lo, hi) = eig.iter().fold((f64::INFINITY, 0f64), |(lo, hi), e| {
            (lo.min(*e), hi.max(*e))
        });
        let inverse_frame_op = s.cholesky().ok_or(Error::SingularFrame)?.inverse();

        let probes: Vec<ComplexMatrix> = (0..PROBE_STATES)
            .map(|seed| random_density(4, 1000 + seed).map(|r| *r.matrix()))
            .collect::<Result<_>>()?;

        let canonical =
            |p: &FramePointQudit| unvec(&(&inverse_frame_op * vec_of(&dequantizer_qudit(p))));
        let canonical_max_residual = probes
            .iter()
            .map(|rho| (reconstruct_probe(grid, rho, &canonical) - *rho).frobenius_norm())
            .fold(0.0, f64::max);

        let printed_trials: Vec<PrintedTrial> = SignReading::ALL
            .iter()
            .map(|&reading| assess_printed(grid, &probes, reading))
            .collect();

        let authority = printed_trials
            .iter()
            .filter(|t| t.accepted)
            .min_by(|a, b| a.max_residual.total_cmp(&b.max_residual))
            .map(|t| QuantizerAuthority::Printed(t.reading))
            .unwrap_or(QuantizerAuthority::CanonicalDual);

        let capability = QuantizerCapability {
            authority,
            selection_threshold: PRINTED_ACCEPT_THRESHOLD,
            probe_states: PROBE_STATES,
            printed_trials,
            canonical_max_residual,
            frame_operator_condition: hi / lo,
            grid: (grid.n_azimuth(), grid.n_polar()),
        };
        Ok(Self {
            authority,
            inverse_frame_op,
            capability,
        })
    }

    /// Frame built once on the minimal exact grid and shared process-wide.
    pub fn shared() -> &'static QuditFrame {
        static FRAME: OnceLock<QuditFrame> = OnceLock::new();
        FRAME.get_or_init(|| {
            let grid = make_grid(MIN_AZIMUTH, MIN_POLAR, 1).expect("minimal grid is valid");
            QuditFrame::build(&grid).expect("spin-3/2 frame is informationally complete")
        })
    }

    pub fn authority(&self) -> QuantizerAuthority {
        self.authority
    }

    pub fn capability(&self) -> &QuantizerCapability {
        &self.capability
    }

    /// `unvec(S⁻¹ vec(U(p)))`.
    pub fn canonical_quantizer(&self, p: &FramePointQudit) -> ComplexMatrix {
        unvec(&(&self.inverse_frame_op * vec_of(&dequantizer_qudit(p))))
    }

    /// Quantizer from the selected authority.
    pub fn quantizer_qudit(&self, p: &FramePointQudit) -> ComplexMatrix {
        match self.authority {
            QuantizerAuthority::Printed(reading) => printed_quantizer_qudit(p, reading),
            QuantizerAuthority::CanonicalDual => self.canonical_quantizer(p),
        }
    }
}

impl Frame for QuditFrame {
    type Point = FramePointQudit;
    const REPRESENTATION: Representation = Representation::Qudit;

    fn dequantizer(&self, p: &FramePointQudit) -> ComplexMatrix {
        dequantizer_qudit(p)
    }

    fn quantizer(&self, p: &FramePointQudit) -> ComplexMatrix {
        self.quantizer_qudit(p)
    }

    fn weighted_points(&self, grid: &QuadratureGrid) -> Result<Vec<(FramePointQudit, f64)>> {
        super::check_grid(grid, 1)?;
        Ok(sphere_points(grid).collect())
    }
}

const PROBE_ANGLES: [(f64, f64); 6] = [
    (0.3, 0.4),
    (1.1, 1.2),
    (2.0, 2.5),
    (4.1, 0.9),
    (5.5, 2.9),
    (0.0, 1.57),
];

fn assess_printed(
    grid: &QuadratureGrid,
    probes: &[ComplexMatrix],
    reading: SignReading,
) -> PrintedTrial {
    let quantizer = move |p: &FramePointQudit| printed_quantizer_qudit(p, reading);
    let max_residual = probes
        .iter()
        .map(|rho| (reconstruct_probe(grid, rho, &quantizer) - *rho).frobenius_norm())
        .fold(0.0, f64::max);

    let mut trace_defect = 0f64;
    let mut hermiticity_failures = Vec::new();
    for m in HalfInt::THREE_HALVES.projections() {
        let pref = printed_prefactor(m, reading);
        let mut worst = [[[0f64; 4]; 4]; 4];
        for &(alpha, beta) in &PROBE_ANGLES {
            let blocks = printed_blocks(m, alpha, beta);
            let total = printed_b_matrix(m, alpha, beta, reading);
            trace_defect = trace_defect.max((total.trace() - C64::new(1.0, 0.0)).norm());
            let parts = [
                blocks.b1,
                blocks.b2.scale(pref * 5.0 * m.value()),
                blocks.sin_b3.scale(pref * 10.5),
                total,
            ];
            for (k, part) in parts.iter().enumerate() {
                for r in 0..4 {
                    for c in r..4 {
                        let d = (part[(r, c)] - part[(c, r)].conj()).norm();
                        worst[k][r][c] = worst[k][r][c].max(d);
                    }
                }
            }
        }
        let labels = [
            BlockLabel::B1,
            BlockLabel::B2Term,
            BlockLabel::B3Term,
            BlockLabel::Total,
        ];
        for (k, label) in labels.iter().enumerate() {
            for r in 0..4 {
                for c in r..4 {
                    if worst[k][r][c] > ENTRY_DEFECT_FLOOR {
                        hermiticity_failures.push(EntryDefect {
                            m: Some(m.to_string()),
                            block: *label,
                            row: r,
                            col: c,
                            defect: worst[k][r][c],
                        });
                    }
                }
            }
        }
    }

    // R[(a,b),(c,d)] = Σ_m Σ_x w Q_ab U_dc must equal δ_ac δ_bd.
    let mut rows = [[[[ZERO; 4]; 4]; 4]; 4];
    for (p, w) in sphere_points(grid) {
        let q = quantizer(&p);
        let u = dequantizer_qudit(&p);
        for a in 0..4 {
            for b in 0..4 {
                let qab = q[(a, b)] * w;
                if qab == ZERO {
                    continue;
                }
                for c in 0..4 {
                    for d in 0..4 {
                        rows[a][b][c][d] += qab * u[(d, c)];
                    }
                }
            }
        }
    }
    let mut reconstruction_failures = Vec::new();
    for (a, row_a) in rows.iter().enumerate() {
        for (b, row) in row_a.iter().enumerate() {
            let mut defect = 0f64;
            for (c, row_c) in row.iter().enumerate() {
                for (d, v) in row_c.iter().enumerate() {
                    let want = if a == c && b == d { 1.0 } else { 0.0 };
                    defect = defect.max((v - C64::new(want, 0.0)).norm());
                }
            }
            if defect > PRINTED_ACCEPT_THRESHOLD {
                reconstruction_failures.push(EntryDefect {
                    m: None,
                    block: BlockLabel::Total,
                    row: a,
                    col: b,
                    defect,
                });
            }
        }
    }

    PrintedTrial {
        reading,
        max_residual,
        trace_defect,
        hermiticity_failures,
        reconstruction_failures,
        accepted: max_residual <= PRINTED_ACCEPT_THRESHOLD,
    }
}
