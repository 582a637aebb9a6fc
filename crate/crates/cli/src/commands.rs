use std::f64::consts::PI;

use log::{debug, info};
use serde_json::{json, Value};
use spintomo_core::frames::{
    make_grid, tomogram_2q, tomogram_qudit, FrameCache, QuadratureGrid, QuditFrame, TomogramTable,
    TwoQubitFrame,
};
use spintomo_core::kernel::{map_2q_to_qudit, map_qudit_to_2q, KernelMapper};
use spintomo_core::matrix::{MatrixJson, DEFAULT_STATE_TOLERANCE};
use spintomo_core::selftest::{run_selftest, SelftestConfig};
use spintomo_core::steering::{
    correlation_forms, steering_check, NOTE_WERNER_DOMAIN, NOTE_ZZ_ONLY,
};
use spintomo_core::{
    validate_density, Basis, DensityMatrix, Direction, EulerAngles, FramePoint, FramePoint2Q,
    FramePointQudit, HalfInt,
};

use crate::args::{Cli, Command, Common, DirectionArgs, MapDirection, PointArgs, Rep};
use crate::output::{emit, Output};
use crate::state::{rep_name, Input};
use crate::Failure;

/// Default pass/fail tolerance for round trips and cross-checks.
const CHECK_TOLERANCE: f64 = 1e-8;

/// Runs the command and writes its output; `Ok(false)` means a check failed.
pub fn run(cli: &Cli) -> Result<bool, Failure> {
    let c = &cli.common;
    if let Some(tol) = c.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Failure::Usage(format!(
                "--tol must be a non-negative number, got {tol}"
            )));
        }
    }
    // Grids may only grow: make_grid rejects anything below the exact minimum.
    make_grid(c.grid_azimuth, c.grid_polar, 1)?;

    let (output, passed) = match &cli.command {
        Command::Validate => validate(c)?,
        Command::Tomogram { point, full_grid } => tomogram(c, point, *full_grid)?,
        Command::Reconstruct => reconstruct(c)?,
        Command::Map { direction, point } => map(c, *direction, point)?,
        Command::Correlation { dirs } => correlation(c, dirs)?,
        Command::Steering { dirs } => steering(c, dirs)?,
        Command::Selftest { force_coarse } => selftest(c, *force_coarse)?,
    };
    emit(&output.render(c.format), c.out.as_deref())?;
    Ok(passed)
}

fn grid(c: &Common, spheres: usize) -> Result<QuadratureGrid, Failure> {
    Ok(make_grid(c.grid_azimuth, c.grid_polar, spheres)?)
}

fn grid_json(g: &QuadratureGrid) -> Value {
    json!({ "azimuth": g.n_azimuth(), "polar": g.n_polar(), "spheres": g.spheres() })
}

fn tol(c: &Common, default: f64) -> f64 {
    c.tol.unwrap_or(default)
}

fn validate(c: &Common) -> Result<(Output, bool), Failure> {
    let input = Input::load(c.state.as_deref(), c.seed)?;
    let tol = tol(c, DEFAULT_STATE_TOLERANCE);
    let report = validate_density(&input.matrix, tol);
    info!("validate {}: passed = {}", input.label, report.passed());
    let mut v = serde_json::to_value(report).expect("report serializes");
    v["state"] = json!(input.label);
    v["dim"] = json!(input.matrix.dim());
    v["basis"] = json!(input.declared.map(Basis::name));
    v["tolerance"] = json!(tol);
    v["passed"] = json!(report.passed());
    Ok((Output::Report(v), report.passed()))
}

fn projection(text: &str, allowed: &[i32]) -> Result<HalfInt, Failure> {
    HalfInt::parse(text)
        .filter(|h| allowed.contains(&h.twice()))
        .ok_or_else(|| Failure::Usage(format!("invalid projection {text:?}")))
}

fn projections(text: Option<&str>, allowed: &[i32]) -> Result<Vec<HalfInt>, Failure> {
    match text {
        Some(t) => Ok(vec![projection(t, allowed)?]),
        None => Ok(allowed.iter().map(|&t| HalfInt::from_twice(t)).collect()),
    }
}

fn angles(name: &str, first: f64, second: f64, third: f64) -> Result<EulerAngles, Failure> {
    if !(0.0..=PI).contains(&second) {
        return Err(Failure::Usage(format!(
            "{name} polar angle {second} outside [0, pi]"
        )));
    }
    Ok(EulerAngles::new(first, second, third)?)
}

const QUDIT_M: [i32; 4] = [3, 1, -1, -3];
const QUBIT_M: [i32; 2] = [1, -1];

fn qudit_points(p: &PointArgs) -> Result<Vec<FramePointQudit>, Failure> {
    let n = angles("qudit", p.alpha, p.beta, p.gamma)?;
    projections(p.m.as_deref(), &QUDIT_M)?
        .into_iter()
        .map(|m| Ok(FramePointQudit::new(m, n)?))
        .collect()
}

fn two_qubit_points(p: &PointArgs) -> Result<Vec<FramePoint2Q>, Failure> {
    let n1 = angles("first qubit", p.phi1, p.theta1, p.psi1)?;
    let n2 = angles("second qubit", p.phi2, p.theta2, p.psi2)?;
    let mut out = Vec::new();
    for m1 in projections(p.m1.as_deref(), &QUBIT_M)? {
        for m2 in projections(p.m2.as_deref(), &QUBIT_M)? {
            out.push(FramePoint2Q::new(m1, m2, n1, n2)?);
        }
    }
    Ok(out)
}

fn tomogram(c: &Common, point: &PointArgs, full_grid: bool) -> Result<(Output, bool), Failure> {
    let input = Input::load(c.state.as_deref(), c.seed)?;
    let rep = input.representation(c.rep)?;
    let rho = input.state(rep)?;
    let table = if full_grid {
        let spheres = match rep {
            Rep::TwoQubit => 2,
            Rep::Qudit => 1,
        };
        TomogramTable::from_grid(&rho, &grid(c, spheres)?)?
    } else {
        let points: Vec<FramePoint> = match rep {
            Rep::TwoQubit => two_qubit_points(point)?
                .into_iter()
                .map(FramePoint::TwoQubit)
                .collect(),
            Rep::Qudit => qudit_points(point)?
                .into_iter()
                .map(FramePoint::Qudit)
                .collect(),
        };
        TomogramTable::from_points(&rho, &points)?
    };
    debug!(
        "{} tomogram rows, normalization defect {:.3e}",
        table.entries().len(),
        table.max_normalization_defect()
    );
    Ok((Output::Table(table), true))
}

fn reconstruct(c: &Common) -> Result<(Output, bool), Failure> {
    let input = Input::load(c.state.as_deref(), c.seed)?;
    let rep = input.representation(c.rep)?;
    let rho = input.state(rep)?;
    let tol = tol(c, CHECK_TOLERANCE);
    let (g, matrix, capability) = match rep {
        Rep::TwoQubit => {
            let g = grid(c, 2)?;
            let cache = FrameCache::new(&TwoQubitFrame, &g)?;
            let m = cache.reconstruct(&cache.tomogram(rho.matrix()))?;
            (g, m, None)
        }
        Rep::Qudit => {
            let g = grid(c, 1)?;
            let frame = QuditFrame::shared();
            let cache = FrameCache::new(frame, &g)?;
            let m = cache.reconstruct(&cache.tomogram(rho.matrix()))?;
            (g, m, Some(frame.capability()))
        }
    };
    let residual = (matrix - *rho.matrix()).frobenius_norm();
    let passed = residual <= tol;
    info!("reconstruct {}: residual {residual:.3e}", input.label);
    let mut v = json!({
        "state": input.label,
        "representation": rep_name(rep),
        "grid": grid_json(&g),
        "matrix": MatrixJson::from_matrix(&matrix, Some(rho.basis())),
        "residual": residual,
        "tolerance": tol,
        "passed": passed,
    });
    if let Some(cap) = capability {
        v["quantizer"] = serde_json::to_value(cap).expect("capability serializes");
    }
    Ok((Output::Report(v), passed))
}

/// The input as a two-qubit-labelled state; the kernel and correlation
/// commands use the same numbers in both pictures.
fn any_state(input: &Input) -> Result<DensityMatrix, Failure> {
    if input.declared == Some(Basis::Qubit) {
        return Err(Failure::Usage(
            "single-qubit states are not supported here".into(),
        ));
    }
    input.state(Rep::TwoQubit)
}

fn single<T: Copy>(points: Vec<T>, what: &str) -> Result<T, Failure> {
    match points.as_slice() {
        [p] => Ok(*p),
        _ => Err(Failure::Usage(format!(
            "map needs a single {what} target; set the projection flags"
        ))),
    }
}

fn map(c: &Common, direction: MapDirection, point: &PointArgs) -> Result<(Output, bool), Failure> {
    let input = Input::load(c.state.as_deref(), c.seed)?;
    let rho = *any_state(&input)?.matrix();
    let tol = tol(c, CHECK_TOLERANCE);
    let with_default =
        |m: &Option<String>, d: &str| Some(m.clone().unwrap_or_else(|| d.to_string()));
    let pinned = PointArgs {
        m: with_default(&point.m, "3/2"),
        m1: with_default(&point.m1, "1/2"),
        m2: with_default(&point.m2, "1/2"),
        ..*point
    };

    let mut v = json!({ "state": input.label });
    let (value, direct) = match direction {
        MapDirection::QuditTo2q => {
            let target = single(two_qubit_points(&pinned)?, "two-qubit")?;
            let g = grid(c, 1)?;
            let mapped = map_qudit_to_2q(|p| tomogram_qudit(&rho, p), &g, &target)?;
            v["direction"] = json!("qudit-to-2q");
            v["target"] = json!(target);
            v["grid"] = grid_json(&g);
            (mapped, tomogram_2q(&rho, &target))
        }
        MapDirection::TwoQToQudit => {
            let target = single(qudit_points(&pinned)?, "qudit")?;
            let g = grid(c, 2)?;
            let mapped = map_2q_to_qudit(|p| tomogram_2q(&rho, p), &g, &target)?;
            v["direction"] = json!("2q-to-qudit");
            v["target"] = json!(target);
            v["grid"] = grid_json(&g);
            (mapped, tomogram_qudit(&rho, &target))
        }
        MapDirection::RoundTrip => {
            let target = single(qudit_points(&pinned)?, "qudit")?;
            let (g1, g2) = (grid(c, 1)?, grid(c, 2)?);
            let mapper = KernelMapper::new(&g1, &g2)?;
            let w = mapper.sample_qudit(|p| tomogram_qudit(&rho, p));
            let mut omega = Vec::with_capacity(mapper.two_qubit_points().len());
            let mut intermediate = 0.0f64;
            for (p, _) in mapper.two_qubit_points() {
                let x = mapper.qudit_to_2q(&w, p)?;
                intermediate = intermediate
                    .max((x.re - tomogram_2q(&rho, p)).abs())
                    .max(x.im.abs());
                omega.push(x.re);
            }
            v["direction"] = json!("round-trip");
            v["target"] = json!(target);
            v["grid"] = json!({ "qudit": grid_json(&g1), "two_qubit": grid_json(&g2) });
            v["intermediate_residual"] = json!(intermediate);
            (
                mapper.two_q_to_qudit(&omega, &target)?,
                tomogram_qudit(&rho, &target),
            )
        }
    };
    let residual = (value - direct).norm();
    let passed = residual <= tol;
    v["value"] = json!(value.re);
    v["imaginary"] = json!(value.im);
    v["direct"] = json!(direct);
    v["residual"] = json!(residual);
    v["tolerance"] = json!(tol);
    v["passed"] = json!(passed);
    Ok((Output::Report(v), passed))
}

fn direction(text: Option<&str>, flag: &str) -> Result<Direction, Failure> {
    let bad = || {
        Failure::Usage(format!(
            "--{flag}: expected x, y, z (optionally signed) or kx,ky,kz"
        ))
    };
    let Some(t) = text else {
        return Ok(Direction::z());
    };
    let t = t.trim();
    let (sign, axis) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    let unit = match axis {
        "x" => Some([sign, 0.0, 0.0]),
        "y" => Some([0.0, sign, 0.0]),
        "z" => Some([0.0, 0.0, sign]),
        _ => None,
    };
    let [x, y, z] = match unit {
        Some(u) => u,
        None => {
            let parts: Vec<f64> = t
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?;
            <[f64; 3]>::try_from(parts).map_err(|_| bad())?
        }
    };
    Direction::new(x, y, z).map_err(|e| Failure::Usage(format!("--{flag}: {e}")))
}

fn correlation(c: &Common, dirs: &DirectionArgs) -> Result<(Output, bool), Failure> {
    let input = Input::load(c.state.as_deref(), c.seed)?;
    let rho = any_state(&input)?;
    let k1 = direction(dirs.k1.as_deref(), "k1")?;
    let k2 = direction(dirs.k2.as_deref(), "k2")?;
    let tol = tol(c, CHECK_TOLERANCE);
    let forms = correlation_forms(&rho, &k1, &k2, &grid(c, 1)?, &grid(c, 2)?)?;
    let passed = forms.max_pairwise_deviation <= tol;
    let mut v = serde_json::to_value(forms).expect("forms serialize");
    v["state"] = json!(input.label);
    v["tolerance"] = json!(tol);
    v["passed"] = json!(passed);
    Ok((Output::Report(v), passed))
}

fn steering(c: &Common, dirs: &DirectionArgs) -> Result<(Output, bool), Failure> {
    let input = Input::load(c.state.as_deref(), c.seed)?;
    let rho = any_state(&input)?;
    let k1 = direction(dirs.k1.as_deref(), "k1")?;
    let k2 = direction(dirs.k2.as_deref(), "k2")?;
    let mut report = steering_check(&rho)?;
    report.correlation_forms = Some(correlation_forms(
        &rho,
        &k1,
        &k2,
        &grid(c, 1)?,
        &grid(c, 2)?,
    )?);
    if let Some(p) = input.werner_p {
        report.p = Some(p);
        report.notes = vec![NOTE_ZZ_ONLY.to_string(), NOTE_WERNER_DOMAIN.to_string()];
    }
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["state"] = json!(input.label);
    // Verdicts are data; a completed analysis always succeeds.
    Ok((Output::Report(v), true))
}

fn selftest(c: &Common, force_coarse: bool) -> Result<(Output, bool), Failure> {
    let cfg = SelftestConfig {
        n_azimuth: c.grid_azimuth,
        n_polar: c.grid_polar,
        seed: c.seed.unwrap_or(SelftestConfig::default().seed),
        force_coarse,
    };
    let report = run_selftest(&cfg);
    for r in &report.criteria {
        eprintln!("{}", r.line());
    }
    let passed = report.passed;
    Ok((
        Output::Report(serde_json::to_value(&report).expect("report serializes")),
        passed,
    ))
}
