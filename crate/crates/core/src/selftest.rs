//! The acceptance suite: criteria 1–12 with pass/fail and the numbers behind
//! each verdict.

use std::f64::consts::{PI, SQRT_2};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::frames::werner::check_werner_closed_forms;
use crate::frames::{
    dequantizer_2q, dequantizer_qudit, make_grid, printed_quantizer_qudit, tomogram_2q,
    tomogram_qudit, FrameCache, FramePoint2Q, FramePointQudit, QuadratureGrid, QuantizerAuthority,
    QuditFrame, SignReading, TwoQubitFrame,
};
use crate::kernel::{cross_check_closed_form, sample_kernel_points, KernelMapper};
use crate::matrix::{kron, random_density, werner, Basis, ComplexMatrix, DensityMatrix, C64};
use crate::steering::{
    chsh_max, correlation_direct, correlation_tensor, correlation_tomographic_2q,
    correlation_tomographic_qudit, werner_report, TomographicVariant, NOTE_WERNER_DOMAIN,
};
use crate::su2::{Direction, EulerAngles};

/// Total wall-clock budget of the suite, seconds.
pub const SUITE_BUDGET: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SelftestConfig {
    pub n_azimuth: usize,
    pub n_polar: usize,
    pub seed: u64,
    /// Run on a 4×4 grid below the exactness minimum.
    pub force_coarse: bool,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self {
            n_azimuth: 8,
            n_polar: 8,
            seed: 20240601,
            force_coarse: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget_seconds: Option<f64>,
    pub within_budget: bool,
    /// Wall-clock time; kept out of the serialized form so reports are reproducible.
    #[serde(skip)]
    pub elapsed_seconds: f64,
    pub data: Value,
}

impl CriterionResult {
    /// `criterion  3 PASS  qudit reconstruction: ...`
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}  {}: {} [{:.3} s]",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.summary,
            self.elapsed_seconds
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub config: SelftestConfig,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

struct Outcome {
    passed: bool,
    summary: String,
    data: Value,
}

struct Context {
    cfg: SelftestConfig,
    qudit_grid: QuadratureGrid,
    two_qubit_grid: QuadratureGrid,
}

impl Context {
    fn new(cfg: SelftestConfig) -> Result<Self> {
        let (qudit_grid, two_qubit_grid) = if cfg.force_coarse {
            (
                QuadratureGrid::unchecked(4, 4, 1)?,
                QuadratureGrid::unchecked(4, 4, 2)?,
            )
        } else {
            (
                make_grid(cfg.n_azimuth, cfg.n_polar, 1)?,
                make_grid(cfg.n_azimuth, cfg.n_polar, 2)?,
            )
        };
        Ok(Self {
            cfg,
            qudit_grid,
            two_qubit_grid,
        })
    }

    fn rng(&self, id: u8) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed.wrapping_mul(31).wrapping_add(id as u64))
    }

    fn state_seed(&self, id: u8, k: usize) -> u64 {
        self.cfg
            .seed
            .wrapping_mul(1_000_003)
            .wrapping_add(1000 * id as u64 + k as u64)
    }
}

fn random_angles(rng: &mut ChaCha8Rng) -> EulerAngles {
    EulerAngles::new(
        rng.random_range(0.0..2.0 * PI),
        rng.random_range(0.0..=PI),
        rng.random_range(0.0..2.0 * PI),
    )
    .expect("finite angles")
}

fn random_direction(rng: &mut ChaCha8Rng) -> Direction {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| StandardNormal.sample(rng));
        if let Ok(d) = Direction::normalized(v) {
            return d;
        }
    }
}

fn identity4() -> ComplexMatrix {
    ComplexMatrix::identity(4).expect("dimension 4")
}

fn fmt(x: f64) -> String {
    format!("{x:.3e}")
}

fn criterion_1(ctx: &Context) -> Result<Outcome> {
    let mut rng = ctx.rng(1);
    let id = identity4();
    let (mut two, mut qudit) = (0f64, 0f64);
    for _ in 0..100 {
        let (a, b, c) = (
            random_angles(&mut rng),
            random_angles(&mut rng),
            random_angles(&mut rng),
        );
        let s2 = FramePoint2Q::all_projections(a, b)
            .iter()
            .fold(ComplexMatrix::zeros(4)?, |acc, p| acc + dequantizer_2q(p));
        let sq = FramePointQudit::all_projections(c)
            .iter()
            .fold(ComplexMatrix::zeros(4)?, |acc, p| {
                acc + dequantizer_qudit(p)
            });
        two = two.max((s2 - id).max_abs());
        qudit = qudit.max((sq - id).max_abs());
    }
    let mut norm = 0f64;
    for k in 0..20 {
        let rho = *random_density(4, ctx.state_seed(1, k))?.matrix();
        for _ in 0..20 {
            let (a, b, c) = (
                random_angles(&mut rng),
                random_angles(&mut rng),
                random_angles(&mut rng),
            );
            let s2: f64 = FramePoint2Q::all_projections(a, b)
                .iter()
                .map(|p| tomogram_2q(&rho, p))
                .sum();
            let sq: f64 = FramePointQudit::all_projections(c)
                .iter()
                .map(|p| tomogram_qudit(&rho, p))
                .sum();
            norm = norm.max((s2 - 1.0).abs()).max((sq - 1.0).abs());
        }
    }
    Ok(Outcome {
        passed: two <= 1e-12 && qudit <= 1e-12 && norm <= 1e-12,
        summary: format!(
            "completeness defect 2q {} qudit {}, normalization defect {} (tol 1e-12)",
            fmt(two),
            fmt(qudit),
            fmt(norm)
        ),
        data: json!({"completeness_two_qubit": two, "completeness_qudit": qudit, "normalization": norm}),
    })
}

fn criterion_2(ctx: &Context) -> Result<Outcome> {
    let cache = FrameCache::new(&TwoQubitFrame, &ctx.two_qubit_grid)?;
    let mut worst = 0f64;
    for k in 0..100 {
        let rho = *random_density(4, ctx.state_seed(2, k))?.matrix();
        worst = worst.max(cache.round_trip_residual(&rho));
    }
    Ok(Outcome {
        passed: worst <= 1e-8,
        summary: format!(
            "max Frobenius residual {} over 100 states (tol 1e-8)",
            fmt(worst)
        ),
        data: json!({"states": 100, "max_residual": worst}),
    })
}

fn criterion_3(ctx: &Context) -> Result<Outcome> {
    let frame = QuditFrame::shared();
    let cache = FrameCache::new(frame, &ctx.qudit_grid)?;
    let states: Vec<ComplexMatrix> = (0..100)
        .map(|k| random_density(4, ctx.state_seed(3, k)).map(|r| *r.matrix()))
        .collect::<Result<_>>()?;
    let canonical = states
        .iter()
        .map(|r| cache.round_trip_residual(r))
        .fold(0.0, f64::max);

    let mut printed = Vec::new();
    for reading in SignReading::ALL {
        let quantizers: Vec<ComplexMatrix> = cache
            .points()
            .iter()
            .map(|(p, _)| printed_quantizer_qudit(p, reading))
            .collect();
        let mut worst = 0f64;
        for rho in &states {
            let mut acc = ComplexMatrix::zeros(4)?;
            for (((_, w), t), d) in cache
                .points()
                .iter()
                .zip(cache.tomogram(rho))
                .zip(&quantizers)
            {
                acc.add_scaled(C64::new(w * t, 0.0), d);
            }
            worst = worst.max((acc - *rho).frobenius_norm());
        }
        printed.push((reading, worst));
    }
    let best_printed = printed
        .iter()
        .map(|(_, r)| *r)
        .fold(f64::INFINITY, f64::min);
    let cap = frame.capability();
    let enumerated = cap.printed_trials.iter().all(|t| {
        t.accepted || !t.hermiticity_failures.is_empty() || !t.reconstruction_failures.is_empty()
    });
    let passed = if best_printed <= 1e-6 {
        best_printed <= 1e-8
    } else {
        canonical <= 1e-8 && enumerated && cap.authority == QuantizerAuthority::CanonicalDual
    };
    let printed_text: Vec<String> = printed
        .iter()
        .map(|(r, v)| format!("{r} {}", fmt(*v)))
        .collect();
    Ok(Outcome {
        passed,
        summary: format!(
            "printed quantizer residual {}; canonical dual residual {} (tol 1e-8); authority {:?}",
            printed_text.join(", "),
            fmt(canonical),
            cap.authority
        ),
        data: json!({
            "printed_max_residual": printed.iter().map(|(r, v)| json!({"reading": r.to_string(), "max_residual": v})).collect::<Vec<_>>(),
            "canonical_max_residual": canonical,
            "capability": serde_json::to_value(cap).unwrap_or(Value::Null),
        }),
    })
}

fn criterion_4(ctx: &Context) -> Result<Outcome> {
    let mut rng = ctx.rng(4);
    let samples: Vec<(EulerAngles, EulerAngles)> = (0..20)
        .map(|_| (random_angles(&mut rng), random_angles(&mut rng)))
        .collect();
    let mut checks = Vec::new();
    let (mut dev, mut pole) = (0f64, 0f64);
    for p in [-1.0 / 3.0, 0.0, 0.5, 1.0] {
        let c = check_werner_closed_forms(p, &samples);
        dev = c.qudit_max_deviation.iter().fold(dev, |a, b| a.max(*b));
        pole = pole.max(c.qudit_beta_zero_deviation);
        checks.push(c);
    }
    Ok(Outcome {
        passed: dev <= 1e-10 && pole <= 1e-12,
        summary: format!(
            "max |direct - printed W(m,a,b)| {} (tol 1e-10), beta=0 deviation {} (tol 1e-12)",
            fmt(dev),
            fmt(pole)
        ),
        data: serde_json::to_value(&checks).unwrap_or(Value::Null),
    })
}

fn criterion_5(ctx: &Context) -> Result<Outcome> {
    let mapper = KernelMapper::new(&ctx.qudit_grid, &ctx.two_qubit_grid)?;
    let points = sample_kernel_points(50, ctx.cfg.seed.wrapping_add(5));
    let (mut forward, mut backward, mut imag) = (0f64, 0f64, 0f64);
    for (k, point) in points.iter().enumerate() {
        let rho = match k {
            0..=3 => *werner([-1.0 / 3.0, 0.0, 1.0 / 3.0, 1.0][k])?.matrix(),
            _ => *random_density(4, ctx.state_seed(5, k))?.matrix(),
        };
        let w = mapper.sample_qudit(|p| tomogram_qudit(&rho, p));
        let omega = mapper.sample_two_qubit(|p| tomogram_2q(&rho, p));
        let (t2, tq) = (point.two_qubit_point(), point.qudit_point());
        let a = mapper.qudit_to_2q(&w, &t2)?;
        let b = mapper.two_q_to_qudit(&omega, &tq)?;
        forward = forward.max((a.re - tomogram_2q(&rho, &t2)).abs());
        backward = backward.max((b.re - tomogram_qudit(&rho, &tq)).abs());
        imag = imag.max(a.im.abs()).max(b.im.abs());
    }
    Ok(Outcome {
        passed: forward <= 1e-8 && backward <= 1e-8 && imag <= 1e-10,
        summary: format!(
            "qudit->2q {} 2q->qudit {} (tol 1e-8), imaginary residue {} (tol 1e-10)",
            fmt(forward),
            fmt(backward),
            fmt(imag)
        ),
        data: json!({"pairs": 50, "qudit_to_2q": forward, "two_q_to_qudit": backward, "imaginary": imag}),
    })
}

fn criterion_6(ctx: &Context) -> Result<Outcome> {
    let check = cross_check_closed_form(
        &sample_kernel_points(100, ctx.cfg.seed.wrapping_add(6)),
        1e-10,
    );
    let report_complete = check
        .readings
        .iter()
        .all(|r| !r.worst.is_empty() && r.worst.iter().all(|w| w.terms.len() == 9));
    let devs: Vec<String> = check
        .readings
        .iter()
        .map(|r| format!("{} {}", r.reading, fmt(r.max_deviation)))
        .collect();
    let summary = if check.agrees {
        format!(
            "closed form agrees with the trace kernel: {}",
            devs.join(", ")
        )
    } else {
        format!(
            "closed form disagrees ({}); term discrepancy report emitted",
            devs.join(", ")
        )
    };
    Ok(Outcome {
        passed: check.agrees || report_complete,
        summary,
        data: serde_json::to_value(&check).unwrap_or(Value::Null),
    })
}

fn criterion_7(ctx: &Context) -> Result<Outcome> {
    let mut rng = ctx.rng(7);
    let mut worst = 0f64;
    for k in 0..50 {
        let rho = random_density(4, ctx.state_seed(7, k))?;
        let (k1, k2) = (random_direction(&mut rng), random_direction(&mut rng));
        let forms = [
            correlation_direct(&rho, &k1, &k2)?,
            correlation_tomographic_2q(
                &rho,
                &k1,
                &k2,
                &ctx.two_qubit_grid,
                TomographicVariant::SymbolDual,
            )?,
            correlation_tomographic_2q(
                &rho,
                &k1,
                &k2,
                &ctx.two_qubit_grid,
                TomographicVariant::DualSymbol,
            )?,
            correlation_tomographic_qudit(
                &rho.reinterpret(Basis::Qudit)?,
                &k1,
                &k2,
                &ctx.qudit_grid,
            )?,
        ];
        for a in forms {
            for b in forms {
                worst = worst.max((a - b).abs());
            }
        }
    }
    Ok(Outcome {
        passed: worst <= 1e-8,
        summary: format!(
            "max pairwise deviation of the four forms {} (tol 1e-8)",
            fmt(worst)
        ),
        data: json!({"triples": 50, "max_pairwise_deviation": worst}),
    })
}

fn criterion_8(_: &Context) -> Result<Outcome> {
    let (mut ezz, mut tensor) = (0f64, 0f64);
    for p in [-1.0 / 3.0, 0.0, 0.25, 0.4, 0.5, 1.0] {
        let rho = werner(p)?;
        ezz = ezz.max((correlation_direct(&rho, &Direction::z(), &Direction::z())? - p).abs());
        let t = correlation_tensor(&rho)?;
        let want = [p, -p, p];
        for i in 0..3 {
            for j in 0..3 {
                let w = if i == j { want[i] } else { 0.0 };
                tensor = tensor.max((t.t[i][j] - w).abs());
            }
        }
    }
    Ok(Outcome {
        passed: ezz <= 1e-12 && tensor <= 1e-12,
        summary: format!(
            "|E(z,z) - p| {}, |T - diag(p,-p,p)| {} (tol 1e-12)",
            fmt(ezz),
            fmt(tensor)
        ),
        data: json!({"e_zz": ezz, "tensor": tensor}),
    })
}

fn product_state(seed: u64) -> Result<DensityMatrix> {
    let a = random_density(2, seed)?;
    let b = random_density(2, seed.wrapping_add(7_777))?;
    DensityMatrix::new(kron(a.matrix(), b.matrix())?, Basis::TwoQubit)
}

fn criterion_9(ctx: &Context) -> Result<Outcome> {
    let mut werner_dev = 0f64;
    let mut rows = Vec::new();
    for p in [0.2, 0.5, 1.0 / SQRT_2, 1.0] {
        let c = chsh_max(&correlation_tensor(&werner(p)?)?);
        werner_dev = werner_dev.max((c.search.value - 2.0 * SQRT_2 * p).abs());
        rows.push(json!({"p": p, "chsh_max": c.search.value, "singular_value_bound": c.singular_value_bound}));
    }
    let mut separable = 0f64;
    for k in 0..20 {
        let rho = product_state(ctx.state_seed(9, k))?;
        separable = separable.max(chsh_max(&correlation_tensor(&rho)?).search.value);
    }
    for p in [-1.0 / 3.0, 0.0, 0.2, 1.0 / 3.0] {
        separable = separable.max(chsh_max(&correlation_tensor(&werner(p)?)?).search.value);
    }
    let full = chsh_max(&correlation_tensor(&werner(1.0)?)?).search.value;
    let saturates = (full - 2.0 * SQRT_2).abs() <= 1e-3;
    Ok(Outcome {
        passed: werner_dev <= 1e-3 && separable <= 2.0 + 1e-6 && full > 2.0 && saturates,
        summary: format!(
            "max |CHSH - 2 sqrt2 |p|| {} (tol 1e-3), separable max {:.6} (<= 2), werner(1) {:.6}",
            fmt(werner_dev),
            separable,
            full
        ),
        data: json!({"werner": rows, "separable_max": separable, "werner_1": full}),
    })
}

fn criterion_10(ctx: &Context) -> Result<Outcome> {
    let (mut lhs_dev, mut grid_dev) = (0f64, 0f64);
    let mut noted = true;
    let mut reports = Vec::new();
    for p in [-1.0 / 3.0, 0.0, 0.2, 0.4, 0.5, 1.0] {
        let r = werner_report(p, &ctx.qudit_grid, &ctx.two_qubit_grid)?.steering;
        lhs_dev = lhs_dev.max((r.lhs - p.abs()).abs());
        grid_dev = grid_dev.max((r.max_directions.grid_value - r.lhs).abs());
        noted &= r.notes.iter().any(|n| n == NOTE_WERNER_DOMAIN);
        noted &= r.rhs_all_entries.is_finite() && r.rhs_diagonal.is_finite();
        reports.push(r);
    }
    Ok(Outcome {
        passed: lhs_dev <= 1e-10 && grid_dev <= 1e-3 && noted,
        summary: format!(
            "|lhs - |p|| {} (tol 1e-10), grid search deviation {} (tol 1e-3), both sum readings and domain note reported",
            fmt(lhs_dev),
            fmt(grid_dev)
        ),
        data: serde_json::to_value(&reports).unwrap_or(Value::Null),
    })
}

fn criterion_11(ctx: &Context) -> Result<Outcome> {
    let mut rng = ctx.rng(11);
    let (mut signaling, mut third) = (0f64, 0f64);
    for k in 0..20 {
        let rho = *random_density(4, ctx.state_seed(11, k))?.matrix();
        let n1 = random_angles(&mut rng);
        for m1 in [0.5, -0.5] {
            let marginals: Vec<f64> = (0..20)
                .map(|_| {
                    let n2 = random_angles(&mut rng);
                    FramePoint2Q::all_projections(n1, n2)
                        .iter()
                        .filter(|p| p.m1.value() == m1)
                        .map(|p| tomogram_2q(&rho, p))
                        .sum()
                })
                .collect();
            let (lo, hi) = marginals
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
                    (l.min(*v), h.max(*v))
                });
            signaling = signaling.max(hi - lo);
        }
        let (a, b, c) = (
            random_angles(&mut rng),
            random_angles(&mut rng),
            random_angles(&mut rng),
        );
        for g in 0..10 {
            let g = 0.6 * g as f64;
            for (p, q) in
                FramePoint2Q::all_projections(a, b)
                    .iter()
                    .zip(FramePoint2Q::all_projections(
                        a.with_third(g)?,
                        b.with_third(2.0 * g % (2.0 * PI))?,
                    ))
            {
                third = third.max((tomogram_2q(&rho, p) - tomogram_2q(&rho, &q)).abs());
            }
            for (p, q) in FramePointQudit::all_projections(c)
                .iter()
                .zip(FramePointQudit::all_projections(c.with_third(g)?))
            {
                third = third.max((tomogram_qudit(&rho, p) - tomogram_qudit(&rho, &q)).abs());
            }
        }
    }
    Ok(Outcome {
        passed: signaling <= 1e-12 && third <= 1e-12,
        summary: format!(
            "marginal variation {}, third-angle variation {} (tol 1e-12)",
            fmt(signaling),
            fmt(third)
        ),
        data: json!({"marginal_variation": signaling, "third_angle_variation": third}),
    })
}

type CriterionFn = fn(&Context) -> Result<Outcome>;

const CRITERIA: [(u8, &str, Option<f64>, CriterionFn); 11] = [
    (
        1,
        "frame completeness and normalization",
        Some(1.0),
        criterion_1,
    ),
    (2, "two-qubit reconstruction", Some(10.0), criterion_2),
    (3, "qudit reconstruction", Some(10.0), criterion_3),
    (4, "Werner qudit tomogram closed forms", None, criterion_4),
    (5, "kernel intertwining", Some(30.0), criterion_5),
    (6, "closed-form kernel cross-check", None, criterion_6),
    (7, "correlation equivalence", Some(30.0), criterion_7),
    (8, "Werner correlations", None, criterion_8),
    (9, "Bell bounds", None, criterion_9),
    (10, "steering report", None, criterion_10),
    (
        11,
        "no-signaling and third-angle independence",
        None,
        criterion_11,
    ),
];

fn run_one(
    ctx: &Context,
    id: u8,
    name: &'static str,
    budget: Option<f64>,
    f: CriterionFn,
) -> CriterionResult {
    let start = Instant::now();
    let outcome = f(ctx);
    let elapsed = start.elapsed().as_secs_f64();
    let within_budget = budget.is_none_or(|b| elapsed < b);
    let (passed, summary, data) = match outcome {
        Ok(o) => (o.passed && within_budget, o.summary, o.data),
        Err(e) => (false, format!("error: {e}"), Value::Null),
    };
    let summary = if within_budget {
        summary
    } else {
        format!(
            "{summary}; over the {:.0} s budget",
            budget.unwrap_or_default()
        )
    };
    CriterionResult {
        id,
        name,
        passed,
        summary,
        budget_seconds: budget,
        within_budget,
        elapsed_seconds: elapsed,
        data,
    }
}

/// Runs a single criterion (1–11) on its own.
pub fn run_criterion(id: u8, cfg: &SelftestConfig) -> Option<CriterionResult> {
    let (_, name, budget, f) = CRITERIA.iter().find(|c| c.0 == id)?;
    Some(match Context::new(*cfg) {
        Ok(ctx) => run_one(&ctx, id, name, *budget, *f),
        Err(e) => setup_failure(id, name, &e),
    })
}

fn setup_failure(id: u8, name: &'static str, e: &crate::error::Error) -> CriterionResult {
    CriterionResult {
        id,
        name,
        passed: false,
        summary: format!("error: {e}"),
        budget_seconds: None,
        within_budget: true,
        elapsed_seconds: 0.0,
        data: Value::Null,
    }
}

/// Runs every criterion in order; criterion 12 is the total wall-clock time.
pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let start = Instant::now();
    let mut criteria: Vec<CriterionResult> = match Context::new(*cfg) {
        Ok(ctx) => CRITERIA
            .iter()
            .map(|(id, name, budget, f)| run_one(&ctx, *id, name, *budget, *f))
            .collect(),
        Err(e) => CRITERIA
            .iter()
            .map(|(id, name, _, _)| setup_failure(*id, name, &e))
            .collect(),
    };
    let total = start.elapsed().as_secs_f64();
    let within_budget = total < SUITE_BUDGET;
    criteria.push(CriterionResult {
        id: 12,
        name: "full selftest wall-clock",
        passed: within_budget,
        summary: format!(
            "criteria 1-11 finished within the {SUITE_BUDGET:.0} s budget: {within_budget}"
        ),
        budget_seconds: Some(SUITE_BUDGET),
        within_budget,
        elapsed_seconds: total,
        data: Value::Null,
    });
    let passed = criteria.iter().all(|c| c.passed);
    SelftestReport {
        config: *cfg,
        criteria,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_grid_fails_reconstruction_criteria() {
        let cfg = SelftestConfig {
            force_coarse: true,
            ..SelftestConfig::default()
        };
        for id in [2, 3, 5, 7] {
            let r = run_criterion(id, &cfg).unwrap();
            assert!(!r.passed, "{}", r.line());
            assert!(r.summary.contains("error"));
        }
        assert!(run_criterion(8, &cfg).unwrap().passed);
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(12, &SelftestConfig::default()).is_none());
        assert!(run_criterion(0, &SelftestConfig::default()).is_none());
    }

    #[test]
    fn cheap_criteria_are_deterministic() {
        let cfg = SelftestConfig::default();
        for id in [1, 4, 8, 11] {
            let a = run_criterion(id, &cfg).unwrap();
            let b = run_criterion(id, &cfg).unwrap();
            assert!(a.passed, "{}", a.line());
            assert_eq!(
                serde_json::to_string(&a).unwrap(),
                serde_json::to_string(&b).unwrap()
            );
        }
    }
}
