//! Dequantizer/quantizer frames for the two-qubit and spin-3/2 pictures.
//!
//! A tomogram is `ω(x) = Tr(ρ U(x))`; the state comes back as
//! `ρ = Σ ∫ ω(x) D(x) dx`. Swapping the roles of `U` and `D` gives the dual
//! symbol `Tr(A D(x))`, and `Σ ∫ Tr(A U) Tr(ρ D) dx = Tr(Aρ)`.
//!
//! All sums over grid nodes run sequentially in a fixed order, so results are
//! bit-reproducible for a given grid.

pub mod grid;
pub mod qubit;
pub mod qudit;
pub mod table;
pub mod werner;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Basis, ComplexMatrix, DensityMatrix, C64};
use crate::su2::{EulerAngles, HalfInt};

pub use grid::{make_grid, QuadratureGrid, SphereNode, MIN_AZIMUTH, MIN_POLAR};
pub use qubit::{dequantizer_2q, quantizer_2q};
pub use qudit::{
    dequantizer_qudit, printed_quantizer_qudit, QuantizerAuthority, QuditFrame, SignReading,
};
pub use table::TomogramTable;
pub use werner::{werner_qudit_closed, werner_two_qubit_closed};

/// Tomographic picture a tomogram or frame belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    TwoQubit,
    Qudit,
}

impl Representation {
    pub fn basis(self) -> Basis {
        match self {
            Representation::TwoQubit => Basis::TwoQubit,
            Representation::Qudit => Basis::Qudit,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Representation::TwoQubit => "two_qubit",
            Representation::Qudit => "qudit",
        }
    }

    /// Number of sphere factors integrated over.
    pub fn spheres(self) -> usize {
        match self {
            Representation::TwoQubit => 2,
            Representation::Qudit => 1,
        }
    }
}

/// `(m1, m2 | n1, n2)` for two spin-1/2 particles. `ψ` in the angles is carried
/// but no frame operator depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FramePoint2Q {
    pub m1: HalfInt,
    pub m2: HalfInt,
    pub n1: EulerAngles,
    pub n2: EulerAngles,
}

const QUBIT_PROJECTIONS: [HalfInt; 2] = [HalfInt::HALF, HalfInt::MINUS_HALF];

impl FramePoint2Q {
    pub fn new(m1: HalfInt, m2: HalfInt, n1: EulerAngles, n2: EulerAngles) -> Result<Self> {
        for m in [m1, m2] {
            if m.twice().abs() != 1 {
                return Err(Error::Index(format!("qubit projection {m} not ±1/2")));
            }
        }
        Ok(Self { m1, m2, n1, n2 })
    }

    /// The four projection pairs at fixed angles, in basis order.
    pub fn all_projections(n1: EulerAngles, n2: EulerAngles) -> [FramePoint2Q; 4] {
        let mk = |m1, m2| FramePoint2Q { m1, m2, n1, n2 };
        let [up, down] = QUBIT_PROJECTIONS;
        [mk(up, up), mk(up, down), mk(down, up), mk(down, down)]
    }
}

/// `(m | n)` for the spin-3/2 qudit, `n = (α, β, γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FramePointQudit {
    pub m: HalfInt,
    pub n: EulerAngles,
}

impl FramePointQudit {
    pub fn new(m: HalfInt, n: EulerAngles) -> Result<Self> {
        if m.twice().abs() > 3 || m.twice() % 2 == 0 {
            return Err(Error::Index(format!(
                "qudit projection {m} not in ±1/2, ±3/2"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn all_projections(n: EulerAngles) -> [FramePointQudit; 4] {
        let mut out = [FramePointQudit {
            m: HalfInt::THREE_HALVES,
            n,
        }; 4];
        for (slot, m) in out.iter_mut().zip(HalfInt::THREE_HALVES.projections()) {
            slot.m = m;
        }
        out
    }
}

/// A point of either frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FramePoint {
    TwoQubit(FramePoint2Q),
    Qudit(FramePointQudit),
}

impl FramePoint {
    pub fn representation(&self) -> Representation {
        match self {
            FramePoint::TwoQubit(_) => Representation::TwoQubit,
            FramePoint::Qudit(_) => Representation::Qudit,
        }
    }
}

/// An operator frame: dequantizers, quantizers and the grid points to sum over.
pub trait Frame {
    type Point: Copy;
    const REPRESENTATION: Representation;

    fn dequantizer(&self, p: &Self::Point) -> ComplexMatrix;
    fn quantizer(&self, p: &Self::Point) -> ComplexMatrix;

    /// Every projection combination at every grid node, with its weight.
    fn weighted_points(&self, grid: &QuadratureGrid) -> Result<Vec<(Self::Point, f64)>>;
}

pub(crate) fn check_grid(grid: &QuadratureGrid, spheres: usize) -> Result<()> {
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

/// Product of the two single-qubit frames.
#[derive(Debug, Clone, Copy, Default)]
pub struct TwoQubitFrame;

impl Frame for TwoQubitFrame {
    type Point = FramePoint2Q;
    const REPRESENTATION: Representation = Representation::TwoQubit;

    fn dequantizer(&self, p: &FramePoint2Q) -> ComplexMatrix {
        dequantizer_2q(p)
    }

    fn quantizer(&self, p: &FramePoint2Q) -> ComplexMatrix {
        quantizer_2q(p)
    }

    fn weighted_points(&self, grid: &QuadratureGrid) -> Result<Vec<(FramePoint2Q, f64)>> {
        check_grid(grid, 2)?;
        let nodes = grid.sphere_nodes();
        let mut out = Vec::with_capacity(4 * nodes.len() * nodes.len());
        for a in nodes {
            for b in nodes {
                let w = a.weight * b.weight;
                for p in FramePoint2Q::all_projections(a.angles(), b.angles()) {
                    out.push((p, w));
                }
            }
        }
        Ok(out)
    }
}

/// Two-qubit tomogram `Tr(ρ U(m1, m2, n1, n2))` of a raw matrix.
pub fn tomogram_2q(rho: &ComplexMatrix, p: &FramePoint2Q) -> f64 {
    rho.trace_product(&dequantizer_2q(p)).re
}

/// Qudit tomogram `Tr(ρ U(m, n))` of a raw matrix.
pub fn tomogram_qudit(rho: &ComplexMatrix, p: &FramePointQudit) -> f64 {
    rho.trace_product(&dequantizer_qudit(p)).re
}

/// Tomogram of a state at a point of the matching frame.
pub fn tomogram(rho: &DensityMatrix, point: &FramePoint) -> Result<f64> {
    let want = point.representation().basis();
    if rho.basis() != want {
        return Err(Error::RepresentationMismatch {
            expected: want.name(),
            found: rho.basis().name(),
        });
    }
    Ok(match point {
        FramePoint::TwoQubit(p) => tomogram_2q(rho.matrix(), p),
        FramePoint::Qudit(p) => tomogram_qudit(rho.matrix(), p),
    })
}

/// `Σ_x w(x) ω(x) D(x)` over the grid. The result is not validated, so
/// reconstruction defects stay visible.
pub fn reconstruct<F: Frame>(
    frame: &F,
    grid: &QuadratureGrid,
    mut tomogram: impl FnMut(&F::Point) -> f64,
) -> Result<ComplexMatrix> {
    let mut acc = ComplexMatrix::zeros4();
    for (p, w) in frame.weighted_points(grid)? {
        acc.add_scaled(C64::new(w * tomogram(&p), 0.0), &frame.quantizer(&p));
    }
    Ok(acc)
}

fn check_operand(a: &ComplexMatrix) -> Result<()> {
    if a.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: a.dim(),
        });
    }
    Ok(())
}

/// Tomographic symbol `Tr(A U(x))`.
pub fn symbol<F: Frame>(frame: &F, a: &ComplexMatrix, p: &F::Point) -> Result<C64> {
    check_operand(a)?;
    Ok(a.trace_product(&frame.dequantizer(p)))
}

/// Dual symbol `Tr(A D(x))`: the quantizer used as dequantizer.
pub fn dual_symbol<F: Frame>(frame: &F, a: &ComplexMatrix, p: &F::Point) -> Result<C64> {
    check_operand(a)?;
    Ok(a.trace_product(&frame.quantizer(p)))
}

/// `Σ ∫ Tr(A U(x)) Tr(B D(x)) dx`, which equals `Tr(AB)`.
pub fn pairing<F: Frame>(
    frame: &F,
    grid: &QuadratureGrid,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<C64> {
    check_operand(a)?;
    check_operand(b)?;
    let mut acc = C64::new(0.0, 0.0);
    for (p, w) in frame.weighted_points(grid)? {
        acc += w * symbol(frame, a, &p)? * dual_symbol(frame, b, &p)?;
    }
    Ok(acc)
}

/// Frame operators evaluated once on a grid, for repeated reconstruction
/// and pairing with the same grid. Sums run in grid order.
#[derive(Debug, Clone)]
pub struct FrameCache<P> {
    points: Vec<(P, f64)>,
    dequantizers: Vec<ComplexMatrix>,
    quantizers: Vec<ComplexMatrix>,
}

impl<P: Copy> FrameCache<P> {
    pub fn new<F: Frame<Point = P>>(frame: &F, grid: &QuadratureGrid) -> Result<Self> {
        let points = frame.weighted_points(grid)?;
        Ok(Self {
            dequantizers: points.iter().map(|(p, _)| frame.dequantizer(p)).collect(),
            quantizers: points.iter().map(|(p, _)| frame.quantizer(p)).collect(),
            points,
        })
    }

    pub fn points(&self) -> &[(P, f64)] {
        &self.points
    }

    /// `Tr(ρ U(x))` at every cached point.
    pub fn tomogram(&self, rho: &ComplexMatrix) -> Vec<f64> {
        self.dequantizers
            .iter()
            .map(|u| rho.trace_product(u).re)
            .collect()
    }

    /// `Σ_x w(x) ω(x) D(x)`; `values` must follow the cached point order.
    pub fn reconstruct(&self, values: &[f64]) -> Result<ComplexMatrix> {
        if values.len() != self.points.len() {
            return Err(Error::DimensionMismatch {
                expected: self.points.len(),
                found: values.len(),
            });
        }
        let mut acc = ComplexMatrix::zeros4();
        for (((_, w), v), d) in self.points.iter().zip(values).zip(&self.quantizers) {
            acc.add_scaled(C64::new(w * v, 0.0), d);
        }
        Ok(acc)
    }

    /// Frobenius norm of `reconstruct(tomogram(ρ)) − ρ`.
    pub fn round_trip_residual(&self, rho: &ComplexMatrix) -> f64 {
        let back = self
            .reconstruct(&self.tomogram(rho))
            .expect("lengths match");
        (back - *rho).frobenius_norm()
    }

    /// `Σ ∫ Tr(A U(x)) Tr(B D(x)) dx`.
    pub fn pairing(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
        check_operand(a)?;
        check_operand(b)?;
        let mut acc = C64::new(0.0, 0.0);
        for (((_, w), u), d) in self
            .points
            .iter()
            .zip(&self.dequantizers)
            .zip(&self.quantizers)
        {
            acc += *w * a.trace_product(u) * b.trace_product(d);
        }
        Ok(acc)
    }
}
