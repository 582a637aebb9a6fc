//! Correlation functions, the correlation tensor, CHSH bounds and the
//! steering inequality.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::werner::{check_werner_closed_forms, WernerClosedFormCheck};
use crate::frames::{
    pairing, tomogram_2q, tomogram_qudit, QuadratureGrid, QuditFrame, TwoQubitFrame,
};
use crate::kernel::{sample_kernel_points, KernelMapper};
use crate::matrix::{kron2, pauli, sigma_dot, werner, ComplexMatrix, DensityMatrix, C64};
use crate::su2::{Direction, EulerAngles};

/// Degenerate singular values closer than this (relative) are tied.
pub const SINGULAR_TIE: f64 = 1e-10;

/// Points per sphere of the CHSH and max-correlation searches.
pub const SEARCH_POINTS_PER_SPHERE: usize = 64;

/// Polar × azimuth resolution of the max-correlation verification grid.
pub const MAX_CORRELATION_GRID: usize = 64;

fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2).expect("dimension 2")
}

pub fn observable_o1(k1: &Direction) -> ComplexMatrix {
    kron2(&sigma_dot(k1.components()), &identity2())
}

pub fn observable_o2(k2: &Direction) -> ComplexMatrix {
    kron2(&identity2(), &sigma_dot(k2.components()))
}

/// `O1 = k1·σ ⊗ 1`, `O2 = 1 ⊗ k2·σ` and their product `O = k1·σ ⊗ k2·σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableTriple {
    pub o1: ComplexMatrix,
    pub o2: ComplexMatrix,
    pub o: ComplexMatrix,
    pub k1: Direction,
    pub k2: Direction,
}

impl ObservableTriple {
    pub fn commutator_norm(&self) -> f64 {
        self.o1.commutator(&self.o2).frobenius_norm()
    }

    pub fn product_defect(&self) -> f64 {
        (self.o1 * self.o2 - self.o).max_abs()
    }
}

pub fn observable_o(k1: &Direction, k2: &Direction) -> ObservableTriple {
    ObservableTriple {
        o1: observable_o1(k1),
        o2: observable_o2(k2),
        o: kron2(&sigma_dot(k1.components()), &sigma_dot(k2.components())),
        k1: *k1,
        k2: *k2,
    }
}

fn plus_minus(k: &Direction) -> (C64, C64, C64) {
    let [x, y, z] = k.components();
    (C64::new(z, 0.0), C64::new(x, -y), C64::new(x, y))
}

fn layout(rows: [[C64; 4]; 4]) -> ComplexMatrix {
    let flat: Vec<C64> = rows.iter().flatten().copied().collect();
    ComplexMatrix::from_row_major(4, &flat).expect("finite entries")
}

/// Entry-by-entry transcription of the printed `O1` layout.
pub fn printed_o1_layout(k1: &Direction) -> ComplexMatrix {
    let (z, m, p) = plus_minus(k1);
    let o = C64::new(0.0, 0.0);
    layout([[z, o, m, o], [o, z, o, m], [p, o, -z, o], [o, p, o, -z]])
}

/// Entry-by-entry transcription of the printed `O2` layout. Entry (3, 2)
/// carries `k2x − i k2y` as printed.
pub fn printed_o2_layout(k2: &Direction) -> ComplexMatrix {
    let (z, m, p) = plus_minus(k2);
    let o = C64::new(0.0, 0.0);
    layout([[z, m, o, o], [p, -z, o, o], [o, o, z, m], [o, o, m, -z]])
}

/// Entry-by-entry transcription of the printed `O` layout.
pub fn printed_o_layout(k1: &Direction, k2: &Direction) -> ComplexMatrix {
    let (z1, m1, p1) = plus_minus(k1);
    let (z2, m2, p2) = plus_minus(k2);
    layout([
        [z1 * z2, z1 * m2, z2 * m1, m1 * m2],
        [z1 * p2, -z1 * z2, m1 * p2, -z2 * m1],
        [z2 * p1, p1 * m2, -z1 * z2, -z1 * m2],
        [p1 * p2, -z2 * p1, -z1 * p2, z1 * z2],
    ])
}

/// `(row, col)` positions (0-based) where `a` and `b` differ by more than `tol`.
pub fn layout_mismatches(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Vec<(usize, usize)> {
    let n = a.dim();
    (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| (a[(r, c)] - b[(r, c)]).norm() > tol)
        .collect()
}

fn require_dim4(rho: &DensityMatrix) -> Result<()> {
    if rho.matrix().dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.matrix().dim(),
        });
    }
    Ok(())
}

/// `E(k1, k2) = Tr(k1·σ ⊗ k2·σ ρ)`.
pub fn correlation_direct(rho: &DensityMatrix, k1: &Direction, k2: &Direction) -> Result<f64> {
    require_dim4(rho)?;
    Ok(observable_o(k1, k2).o.trace_product(rho.matrix()).re)
}

/// Which factor carries the dual symbol in the two-qubit tomographic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TomographicVariant {
    /// `∫ ω_B(x) ω_ρᵈ(x) dx`.
    SymbolDual,
    /// `∫ ω_ρ(x) ω_Bᵈ(x) dx`.
    DualSymbol,
}

pub fn correlation_tomographic_2q(
    rho: &DensityMatrix,
    k1: &Direction,
    k2: &Direction,
    grid: &QuadratureGrid,
    variant: TomographicVariant,
) -> Result<f64> {
    require_dim4(rho)?;
    let b = observable_o(k1, k2).o;
    let value = match variant {
        TomographicVariant::SymbolDual => pairing(&TwoQubitFrame, grid, &b, rho.matrix())?,
        TomographicVariant::DualSymbol => pairing(&TwoQubitFrame, grid, rho.matrix(), &b)?,
    };
    Ok(value.re)
}

/// `∫ W_O(y) W_ρᵈ(y) dy` with `ρ` and `O` read in the spin-3/2 basis.
pub fn correlation_tomographic_qudit(
    rho: &DensityMatrix,
    k1: &Direction,
    k2: &Direction,
    grid: &QuadratureGrid,
) -> Result<f64> {
    require_dim4(rho)?;
    let o = observable_o(k1, k2).o;
    Ok(pairing(QuditFrame::shared(), grid, &o, rho.matrix())?.re)
}

/// `T_ij = Tr(ρ σ_i ⊗ σ_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationTensor {
    pub t: [[f64; 3]; 3],
}

impl CorrelationTensor {
    pub fn from_rows(t: [[f64; 3]; 3]) -> Self {
        Self { t }
    }

    /// `k1ᵀ T k2`.
    pub fn bilinear(&self, k1: &Direction, k2: &Direction) -> f64 {
        let (a, b) = (k1.components(), k2.components());
        (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| a[i] * self.t[i][j] * b[j])
            .sum()
    }

    pub fn sum_all(&self) -> f64 {
        self.t.iter().flatten().sum()
    }

    pub fn trace(&self) -> f64 {
        (0..3).map(|i| self.t[i][i]).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut t = self.t;
        t.iter_mut().flatten().for_each(|x| *x *= s);
        Self { t }
    }

    fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.t[i][j])
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> [f64; 3] {
        let mut s: Vec<f64> = self.matrix().singular_values().iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        [s[0], s[1], s[2]]
    }

    /// `|Tᵀ k|`: the best correlation reachable with `k1 = k`.
    fn best_partner_norm(&self, k: [f64; 3]) -> f64 {
        (self.matrix().transpose() * Vector3::from(k)).norm()
    }
}

pub fn correlation_tensor(rho: &DensityMatrix) -> Result<CorrelationTensor> {
    require_dim4(rho)?;
    let mut t = [[0.0; 3]; 3];
    for (i, row) in t.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = kron2(&pauli(i), &pauli(j)).trace_product(rho.matrix()).re;
        }
    }
    Ok(CorrelationTensor { t })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxCorrelation {
    pub value: f64,
    pub k1: Direction,
    pub k2: Direction,
}

/// The lexicographically largest unit vector in the span of orthonormal `basis`.
fn lexicographic_max(basis: &[Vector3<f64>]) -> Vector3<f64> {
    for axis in 0..3 {
        let e = Vector3::ith(axis, 1.0);
        let proj: Vector3<f64> = basis.iter().map(|q| q * q.dot(&e)).sum();
        if proj.norm() > 1e-9 {
            return proj.normalize();
        }
    }
    Vector3::x()
}

fn direction_of(v: Vector3<f64>) -> Direction {
    Direction::normalized([v.x, v.y, v.z]).unwrap_or_else(|_| Direction::x())
}

/// Largest singular value of `T` with its singular directions; ties go to the
/// lexicographically largest `k1*`, and `k2* = Tᵀ k1* / σ1`.
pub fn max_correlation(t: &CorrelationTensor) -> MaxCorrelation {
    let svd = t.matrix().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let s = svd.singular_values;
    let top = s.max();
    if top <= f64::EPSILON {
        return MaxCorrelation {
            value: 0.0,
            k1: Direction::x(),
            k2: Direction::x(),
        };
    }
    let basis: Vec<Vector3<f64>> = (0..3)
        .filter(|&i| s[i] >= top * (1.0 - SINGULAR_TIE))
        .map(|i| u.column(i).into_owned())
        .collect();
    let k1 = lexicographic_max(&basis);
    let k2 = t.matrix().transpose() * k1 / top;
    MaxCorrelation {
        value: top,
        k1: direction_of(k1),
        k2: direction_of(k2),
    }
}

/// Coordinate pattern search maximising `f`, starting from `x` with `step`.
fn refine(
    f: impl Fn(&[f64]) -> f64,
    mut x: Vec<f64>,
    mut step: f64,
    min_step: f64,
) -> (Vec<f64>, f64) {
    let mut best = f(&x);
    while step > min_step {
        let mut improved = false;
        for i in 0..x.len() {
            for delta in [step, -step] {
                let mut y = x.clone();
                y[i] += delta;
                let v = f(&y);
                if v > best {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (x, best)
}

fn spherical(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

/// Grid-search check of `max_correlation`: a square `(θ, φ)` grid for `k1`
/// with the optimal `k2` in closed form, then local refinement.
pub fn max_correlation_search(t: &CorrelationTensor, n: usize) -> f64 {
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..n {
        let theta = PI * (i as f64 + 0.5) / n as f64;
        for j in 0..n {
            let phi = 2.0 * PI * j as f64 / n as f64;
            let v = t.best_partner_norm(spherical(theta, phi));
            if v > best.0 {
                best = (v, theta, phi);
            }
        }
    }
    let f = |x: &[f64]| t.best_partner_norm(spherical(x[0], x[1]));
    refine(f, vec![best.1, best.2], PI / n as f64, 1e-9).1
}

/// A CHSH setting `(a, b, c, d)` with its value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshSetting {
    pub value: f64,
    pub a: Direction,
    pub b: Direction,
    pub c: Direction,
    pub d: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshMax {
    /// Refined grid-search maximum.
    pub search: ChshSetting,
    /// `2 √(s1² + s2²)` from the two largest singular values.
    pub singular_value_bound: f64,
}

/// `|E(a,b) + E(a,c) + E(d,b) − E(d,c)|` from direct traces.
pub fn chsh_value(
    rho: &DensityMatrix,
    a: &Direction,
    b: &Direction,
    c: &Direction,
    d: &Direction,
) -> Result<f64> {
    Ok((correlation_direct(rho, a, b)?
        + correlation_direct(rho, a, c)?
        + correlation_direct(rho, d, b)?
        - correlation_direct(rho, d, c)?)
    .abs())
}

fn sphere_points(n: usize) -> Vec<(f64, f64)> {
    let side = (n as f64).sqrt().round() as usize;
    (0..side)
        .flat_map(|i| {
            (0..side).map(move |j| {
                (
                    PI * (i as f64 + 0.5) / side as f64,
                    2.0 * PI * j as f64 / side as f64,
                )
            })
        })
        .collect()
}

/// For fixed `(a, d)` the best `b, c` give `|Tᵀ(a + d)| + |Tᵀ(a − d)|`.
fn chsh_for(t: &CorrelationTensor, a: [f64; 3], d: [f64; 3]) -> f64 {
    let plus = [a[0] + d[0], a[1] + d[1], a[2] + d[2]];
    let minus = [a[0] - d[0], a[1] - d[1], a[2] - d[2]];
    t.best_partner_norm(plus) + t.best_partner_norm(minus)
}

/// CHSH maximum by a 64-point-per-sphere search over `(a, d)` followed by
/// local refinement; `b` and `c` are optimal in closed form.
pub fn chsh_max(t: &CorrelationTensor) -> ChshMax {
    let pts = sphere_points(SEARCH_POINTS_PER_SPHERE);
    let mut best = (f64::NEG_INFINITY, [0.0; 4]);
    for &(ta, pa) in &pts {
        for &(td, pd) in &pts {
            let v = chsh_for(t, spherical(ta, pa), spherical(td, pd));
            if v > best.0 {
                best = (v, [ta, pa, td, pd]);
            }
        }
    }
    let f = |x: &[f64]| chsh_for(t, spherical(x[0], x[1]), spherical(x[2], x[3]));
    let (x, value) = refine(f, best.1.to_vec(), PI / 8.0, 1e-10);
    let (a, d) = (spherical(x[0], x[1]), spherical(x[2], x[3]));
    let tt = t.matrix().transpose();
    let partner = |v: [f64; 3]| direction_of(tt * Vector3::from(v));
    let s = t.singular_values();
    ChshMax {
        search: ChshSetting {
            value,
            a: direction_of(Vector3::from(a)),
            b: partner([a[0] + d[0], a[1] + d[1], a[2] + d[2]]),
            c: partner([a[0] - d[0], a[1] - d[1], a[2] - d[2]]),
            d: direction_of(Vector3::from(d)),
        },
        singular_value_bound: 2.0 * (s[0] * s[0] + s[1] * s[1]).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxDirections {
    pub k1: Direction,
    pub k2: Direction,
    /// Grid-search value used to confirm the singular value.
    pub grid_value: f64,
}

/// The four correlation-function forms at one direction pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationForms {
    pub k1: Direction,
    pub k2: Direction,
    pub direct: f64,
    pub tomo_2q_a: f64,
    pub tomo_2q_b: f64,
    pub tomo_qudit: f64,
    pub max_pairwise_deviation: f64,
}

pub fn correlation_forms(
    rho: &DensityMatrix,
    k1: &Direction,
    k2: &Direction,
    qudit_grid: &QuadratureGrid,
    two_qubit_grid: &QuadratureGrid,
) -> Result<CorrelationForms> {
    let direct = correlation_direct(rho, k1, k2)?;
    let tomo_2q_a =
        correlation_tomographic_2q(rho, k1, k2, two_qubit_grid, TomographicVariant::SymbolDual)?;
    let tomo_2q_b =
        correlation_tomographic_2q(rho, k1, k2, two_qubit_grid, TomographicVariant::DualSymbol)?;
    let tomo_qudit = correlation_tomographic_qudit(rho, k1, k2, qudit_grid)?;
    let all = [direct, tomo_2q_a, tomo_2q_b, tomo_qudit];
    let max_pairwise_deviation = all
        .iter()
        .flat_map(|a| all.iter().map(move |b| (a - b).abs()))
        .fold(0.0, f64::max);
    Ok(CorrelationForms {
        k1: *k1,
        k2: *k2,
        direct,
        tomo_2q_a,
        tomo_2q_b,
        tomo_qudit,
        max_pairwise_deviation,
    })
}

pub const NOTE_ZZ_ONLY: &str =
    "E = k1z k2z p keeps only the zz term of the tensor; for the Werner family \
     E(k1, k2) = p (k1x k2x - k1y k2y + k1z k2z), which is what correlation_direct computes";

pub const NOTE_WERNER_DOMAIN: &str = "for the Werner family lhs = |p| and both rhs readings equal 2p/3, so \
     lhs >= rhs on the whole domain -1/3 <= p <= 1; the inequality does not single out 1/3 < p < 1/2 or \
     0 < p < 1/2";

/// Steering and Bell diagnostics; verdicts come with the raw numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteeringReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub tensor: [[f64; 3]; 3],
    pub lhs: f64,
    pub rhs_all_entries: f64,
    pub rhs_diagonal: f64,
    pub inequality_holds: bool,
    pub chsh_max: f64,
    pub chsh_singular_value_bound: f64,
    pub bell_violated: bool,
    pub chsh_setting: ChshSetting,
    pub max_directions: MaxDirections,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correlation_forms: Option<CorrelationForms>,
    pub notes: Vec<String>,
}

pub fn steering_check(rho: &DensityMatrix) -> Result<SteeringReport> {
    let t = correlation_tensor(rho)?;
    let max = max_correlation(&t);
    let chsh = chsh_max(&t);
    let rhs_all_entries = 2.0 / 3.0 * t.sum_all();
    Ok(SteeringReport {
        p: None,
        tensor: t.t,
        lhs: max.value,
        rhs_all_entries,
        rhs_diagonal: 2.0 / 3.0 * t.trace(),
        inequality_holds: max.value >= rhs_all_entries,
        chsh_max: chsh.search.value,
        chsh_singular_value_bound: chsh.singular_value_bound,
        bell_violated: chsh.search.value > 2.0,
        chsh_setting: chsh.search,
        max_directions: MaxDirections {
            k1: max.k1,
            k2: max.k2,
            grid_value: max_correlation_search(&t, MAX_CORRELATION_GRID),
        },
        correlation_forms: None,
        notes: Vec::new(),
    })
}

/// Aggregated Werner-family diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WernerReport {
    pub p: f64,
    pub entangled: bool,
    pub e_zz: f64,
    pub steering: SteeringReport,
    pub closed_forms: WernerClosedFormCheck,
    /// Largest `|mapped − direct|` over sampled points, both directions.
    pub kernel_mapping_residual: f64,
}

pub fn werner_report(
    p: f64,
    qudit_grid: &QuadratureGrid,
    two_qubit_grid: &QuadratureGrid,
) -> Result<WernerReport> {
    let rho = werner(p)?;
    let z = Direction::z();
    let mut steering = steering_check(&rho)?;
    steering.p = Some(p);
    steering.correlation_forms = Some(correlation_forms(&rho, &z, &z, qudit_grid, two_qubit_grid)?);
    steering.notes = vec![NOTE_ZZ_ONLY.to_string(), NOTE_WERNER_DOMAIN.to_string()];

    let samples: Vec<(EulerAngles, EulerAngles)> = sample_kernel_points(20, 0x5eed)
        .iter()
        .map(|k| (k.qudit, k.n1))
        .collect();
    let closed_forms = check_werner_closed_forms(p, &samples);

    let mapper = KernelMapper::new(qudit_grid, two_qubit_grid)?;
    let m = *rho.matrix();
    let w = mapper.sample_qudit(|x| tomogram_qudit(&m, x));
    let omega = mapper.sample_two_qubit(|x| tomogram_2q(&m, x));
    let mut kernel_mapping_residual = 0f64;
    for k in sample_kernel_points(8, 0xfeed) {
        let (t2, tq) = (k.two_qubit_point(), k.qudit_point());
        let a = mapper.qudit_to_2q(&w, &t2)? - C64::new(tomogram_2q(&m, &t2), 0.0);
        let b = mapper.two_q_to_qudit(&omega, &tq)? - C64::new(tomogram_qudit(&m, &tq), 0.0);
        kernel_mapping_residual = kernel_mapping_residual.max(a.norm()).max(b.norm());
    }

    Ok(WernerReport {
        p,
        entangled: p > 1.0 / 3.0,
        e_zz: correlation_direct(&rho, &z, &z)?,
        steering,
        closed_forms,
        kernel_mapping_residual,
    })
}
