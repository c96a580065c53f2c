//! One function per subcommand. Each validates its merged parameters fully
//! before any computation.

use std::f64::consts::PI;
use std::path::Path;

use hjwave::kinematics::{self, dispersion_omega, kinetic_frequency, PlaneWave};
use hjwave::limits::{run_limit_study, schrodinger_frequency, LimitStudyConfig};
use hjwave::mechanics::{free_action_duality_defect, integrate_newton, Integrator, PotentialPreset};
use hjwave::pde::{
    decomposition_field, linearize, log_transform, residual_linear_field, residual_nonlinear_field, sample_stack,
    AffineField, ExpField, FieldStack, PdeSpec,
};
use hjwave::report::fmt_float;
use hjwave::solvers::{
    eigen_checks, factored_stability_limit, hje_residual, leapfrog_stability_limit, log_curvature_check,
    solve_relativistic, solve_relativistic_factored, solve_schrodinger, solve_wave, Scheme, SolverConfig,
};
use hjwave::{vec3, Grid, PhysicalConstants, Region, ScalarField};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::args::{
    Builtin, Check, Cli, Command, CommonArgs, DispersionArgs, Equation, LimitArgs, NewtonArgs, PotentialKind,
    RegionArg, ResidualArgs, SolveArgs, TransformArgs, VerifyArgs,
};
use crate::output::{invalid, read_bytes, read_text, CliError, Sink};
use crate::scenario::{overlay, Scenario};

struct Context {
    consts: PhysicalConstants,
    common: CommonArgs,
    scenario: Option<String>,
    sink: Sink,
}

impl Context {
    /// Summary skeleton shared by every command.
    fn summary(&self, command: &str) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("command".into(), json!(command));
        m.insert("scenario".into(), json!(self.scenario));
        m.insert(
            "constants".into(),
            json!({ "hbar": self.consts.hbar, "c": self.consts.c, "m0": self.consts.m0 }),
        );
        m
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let scenario = cli.scenario.as_deref().map(Scenario::load).transpose()?;
    let command = cli.command;
    let (common_params, params) = match &scenario {
        Some(s) if s.command != command.name() => {
            return Err(invalid(format!(
                "scenario '{}' is for '{}', not '{}'",
                s.name,
                s.command,
                command.name()
            )))
        }
        Some(s) => s.split_parameters(),
        None => (Map::new(), Map::new()),
    };
    let common: CommonArgs = overlay(common_params, &cli.common)?;
    let consts = PhysicalConstants::new(
        common.hbar.unwrap_or(1.0),
        common.c.unwrap_or(1.0),
        common.m0.unwrap_or(1.0),
    )?;
    let out = cli.out.or_else(|| scenario.as_ref().and_then(|s| s.output_dir.clone()));

    // parse command parameters before touching the output directory
    enum Parsed {
        Dispersion(DispersionArgs),
        Transform(TransformArgs),
        Solve(SolveArgs),
        Residual(ResidualArgs),
        Newton(NewtonArgs),
        Limit(LimitArgs),
        Verify(VerifyArgs),
    }
    let parsed = match &command {
        Command::Dispersion(a) => Parsed::Dispersion(overlay(params, a)?),
        Command::Transform(a) => Parsed::Transform(overlay(params, a)?),
        Command::Solve(a) => Parsed::Solve(overlay(params, a)?),
        Command::Residual(a) => Parsed::Residual(overlay(params, a)?),
        Command::Newton(a) => Parsed::Newton(overlay(params, a)?),
        Command::LimitStudy(a) => Parsed::Limit(overlay(params, a)?),
        Command::VerifyAll(a) => Parsed::Verify(overlay(params, a)?),
    };
    let ctx = Context { consts, common, scenario: scenario.map(|s| s.name), sink: Sink::new(out)? };
    match parsed {
        Parsed::Dispersion(a) => dispersion(&ctx, a),
        Parsed::Transform(a) => transform(&ctx, a),
        Parsed::Solve(a) => solve(&ctx, a),
        Parsed::Residual(a) => residual(&ctx, a),
        Parsed::Newton(a) => newton(&ctx, a),
        Parsed::Limit(a) => limit_study(&ctx, a),
        Parsed::Verify(a) => verify_all(&ctx, a),
    }
}

fn required<T>(value: Option<T>, name: &str) -> Result<T, CliError> {
    value.ok_or_else(|| invalid(format!("missing parameter '{name}'")))
}

fn forbid<T>(value: &Option<T>, name: &str, why: &str) -> Result<(), CliError> {
    match value {
        Some(_) => Err(invalid(format!("parameter '{name}' is not allowed {why}"))),
        None => Ok(()),
    }
}

fn vec3_param(v: Option<Vec<f64>>, name: &str) -> Result<[f64; 3], CliError> {
    let v = required(v, name)?;
    <[f64; 3]>::try_from(v.as_slice()).map_err(|_| invalid(format!("'{name}' needs 3 components, got {}", v.len())))
}

/// Parses the transform constant: `hbar/i`, `1` or `[re,im]`.
pub fn parse_transform_constant(text: &str, consts: &PhysicalConstants) -> Result<Complex64, CliError> {
    match text.trim() {
        "hbar/i" => Ok(consts.transform_constant()),
        "1" => Ok(Complex64::new(1.0, 0.0)),
        other => {
            let pair: [f64; 2] = serde_json::from_str(other)
                .map_err(|_| invalid(format!("A must be \"hbar/i\", \"1\" or \"[re,im]\", got {other:?}")))?;
            Ok(Complex64::new(pair[0], pair[1]))
        }
    }
}

fn dispersion(ctx: &Context, args: DispersionArgs) -> Result<(), CliError> {
    let ks = required(args.k, "k")?;
    if ks.is_empty() {
        return Err(invalid("'k' needs at least one value"));
    }
    if let Some(k) = ks.iter().find(|k| !(k.is_finite() && **k >= 0.0)) {
        return Err(invalid(format!("wavenumbers must be finite and >= 0, got {k}")));
    }
    let consts = &ctx.consts;
    let blank = String::new;
    let mut csv = String::from("k,omega,energy,momentum,phase_velocity,group_velocity,particle_velocity\n");
    for &k in &ks {
        let omega = dispersion_omega(k, consts);
        let kv = [k, 0.0, 0.0];
        let phase = kinematics::phase_velocity(k, consts).map(fmt_float).unwrap_or_else(|_| blank());
        let group = vec3::norm(kinematics::group_velocity(kv, consts));
        let particle = kinematics::particle_velocity(kinematics::de_broglie_momentum(kv, consts), consts)
            .map(|v| fmt_float(vec3::norm(v)))
            .unwrap_or_else(|_| blank());
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_float(k),
            fmt_float(omega),
            fmt_float(kinematics::planck_energy(omega, consts)),
            fmt_float(consts.hbar * k),
            phase,
            fmt_float(group),
            particle
        ));
    }
    ctx.sink.primary("dispersion.csv", &csv)?;
    let mut s = ctx.summary("dispersion");
    s.insert("rows".into(), json!(ks.len()));
    ctx.sink.summary(&Value::Object(s))
}

fn builtin_spec(kind: Builtin, dims: usize, consts: &PhysicalConstants) -> Result<PdeSpec, CliError> {
    let consts = match kind {
        Builtin::HjeMassive => *consts,
        Builtin::HjeMassless => PhysicalConstants::massless(consts.hbar, consts.c),
    };
    Ok(PdeSpec::hamilton_jacobi(dims, &consts)?)
}

/// Exactly one of a spec file or a builtin.
fn load_spec(
    file: Option<&Path>,
    builtin: Option<Builtin>,
    dims: usize,
    consts: &PhysicalConstants,
) -> Result<PdeSpec, CliError> {
    match (file, builtin) {
        (Some(p), None) => Ok(PdeSpec::from_json(&read_text(p)?)?),
        (None, Some(b)) => builtin_spec(b, dims, consts),
        (Some(_), Some(_)) => Err(invalid("give either 'spec' or 'builtin', not both")),
        (None, None) => Err(invalid("missing parameter 'spec' or 'builtin'")),
    }
}

fn transform(ctx: &Context, args: TransformArgs) -> Result<(), CliError> {
    if args.spec.is_some() {
        forbid(&args.dims, "dims", "with a spec file")?;
    }
    let a = parse_transform_constant(&required(args.a, "A")?, &ctx.consts)?;
    if args.sign_normalize && !args.emit_linear {
        return Err(invalid("'sign_normalize' applies to the linear output only"));
    }
    let spec = load_spec(args.spec.as_deref(), args.builtin, args.dims.unwrap_or(3), &ctx.consts)?;
    let (text, form) = if args.emit_linear {
        let lin = linearize(&spec, a)?;
        let lin = if args.sign_normalize { lin.sign_normalized() } else { lin };
        (lin.to_json_pretty(), "linear")
    } else {
        (log_transform(&spec, a)?.to_json_pretty(), "homogeneous")
    };
    ctx.sink.primary("transform.json", &format!("{text}\n"))?;
    let mut s = ctx.summary("transform");
    s.insert("form".into(), json!(form));
    s.insert("n".into(), json!(spec.n()));
    s.insert("transform_constant".into(), json!([a.re, a.im]));
    ctx.sink.summary(&Value::Object(s))
}

/// Grid and wave vector of a plane-wave source.
struct PlaneSource {
    grid: Grid,
    k: [f64; 3],
}

fn plane_source(
    dims: Option<usize>,
    points: Option<usize>,
    length: Option<f64>,
    mode: Option<Vec<i64>>,
) -> Result<PlaneSource, CliError> {
    let dims = dims.unwrap_or(1);
    let grid = Grid::new(dims, required(points, "points")?, length.unwrap_or(2.0 * PI))?;
    let mode = required(mode, "mode")?;
    if mode.len() != dims {
        return Err(invalid(format!("'mode' needs {dims} components, got {}", mode.len())));
    }
    let mut k = [0.0; 3];
    for (ka, &m) in k.iter_mut().zip(&mode) {
        *ka = 2.0 * PI * m as f64 / grid.length();
    }
    Ok(PlaneSource { grid, k })
}

fn plane_field(grid: Grid, k: [f64; 3], omega: f64, t: f64) -> ScalarField {
    ScalarField::from_fn(grid, t, |r| Complex64::new(0.0, vec3::dot(k, r) - omega * t).exp())
}

fn read_field(path: &Path) -> Result<ScalarField, CliError> {
    Ok(ScalarField::from_bytes(&read_bytes(path)?)?)
}

fn solve(ctx: &Context, args: SolveArgs) -> Result<(), CliError> {
    let consts = &ctx.consts;
    let equation = required(args.equation, "equation")?;
    let steps = required(args.steps, "steps")?;
    let leapfrog = equation != Equation::Schrodinger;
    if !leapfrog {
        forbid(&args.rate, "rate", "for the Schrodinger equation")?;
        forbid(&args.cfl, "cfl", "for the Schrodinger equation")?;
    }
    let (initial, rate, plane) = match (&args.input, &args.mode) {
        (Some(_), Some(_)) => return Err(invalid("give either 'input' or a plane-wave 'mode', not both")),
        (Some(path), None) => {
            for (v, n) in [(args.dims.is_some(), "dims"), (args.points.is_some(), "points"), (args.length.is_some(), "length")] {
                if v {
                    return Err(invalid(format!("parameter '{n}' is not allowed with an input field")));
                }
            }
            let psi = read_field(path)?;
            let rate = match &args.rate {
                Some(p) => read_field(p)?,
                None => ScalarField::zeros(*psi.grid(), psi.time()),
            };
            (psi, rate, None)
        }
        (None, _) => {
            forbid(&args.rate, "rate", "for a plane-wave start")?;
            let src = plane_source(args.dims, args.points, args.length, args.mode.clone())?;
            let kn = vec3::norm(src.k);
            let omega = match equation {
                Equation::Wave => consts.c * kn,
                Equation::Relativistic => dispersion_omega(kn, consts),
                Equation::Factored => kinetic_frequency(kn, consts),
                Equation::Schrodinger => schrodinger_frequency(kn, consts),
            };
            let psi = plane_field(src.grid, src.k, omega, 0.0);
            let rate = psi.map(|v| Complex64::new(0.0, -omega) * v);
            (psi, rate, Some((src, omega)))
        }
    };
    let grid = *initial.grid();
    let dt = match (args.dt, args.cfl) {
        (Some(dt), None) => dt,
        (None, Some(cfl)) => {
            if !(cfl > 0.0 && cfl.is_finite()) {
                return Err(invalid(format!("cfl must be > 0, got {cfl}")));
            }
            let limit = match equation {
                Equation::Wave => leapfrog_stability_limit(&grid, consts.c, 0.0),
                Equation::Relativistic => leapfrog_stability_limit(&grid, consts.c, consts.rest_frequency()),
                _ => factored_stability_limit(&grid, consts.c, consts.rest_frequency()),
            };
            cfl * limit
        }
        (Some(_), Some(_)) => return Err(invalid("give either 'dt' or 'cfl', not both")),
        (None, None) => return Err(invalid("missing parameter 'dt' or 'cfl'")),
    };
    let scheme = if leapfrog { Scheme::Leapfrog } else { Scheme::CrankNicolson };
    let mut cfg = SolverConfig::new(dt, steps, scheme)?;
    if args.no_stability_check {
        cfg = cfg.without_stability_check();
    }

    let report = match equation {
        Equation::Wave => solve_wave(&initial, &rate, consts, &cfg)?,
        Equation::Relativistic => solve_relativistic(&initial, &rate, consts, &cfg)?,
        Equation::Factored => solve_relativistic_factored(&initial, &rate, consts, &cfg)?,
        Equation::Schrodinger => solve_schrodinger(&initial, consts, &cfg)?,
    };
    let final_time = report.final_field.time();
    let plane_error = match &plane {
        Some((src, omega)) => Some(report.final_field.max_abs_diff(&plane_field(src.grid, src.k, *omega, final_time))?),
        None => None,
    };
    ctx.sink.primary("diagnostics.csv", &report.diagnostics_csv())?;
    ctx.sink.file("final.bin", &report.final_field.to_bytes())?;
    let initial_norm = initial.l2_norm();
    let mut s = ctx.summary("solve");
    s.insert("equation".into(), json!(equation));
    s.insert("scheme".into(), json!(scheme));
    s.insert("dt".into(), json!(dt));
    s.insert("steps".into(), json!(steps));
    s.insert("final_time".into(), json!(final_time));
    s.insert("initial_norm".into(), json!(initial_norm));
    s.insert("final_norm".into(), json!(report.final_field.l2_norm()));
    s.insert("max_step_norm_drift".into(), json!(report.max_step_norm_drift(initial_norm)));
    s.insert("energy_drift".into(), json!(report.energy_drift()));
    s.insert("plane_wave_error".into(), json!(plane_error));
    ctx.sink.summary(&Value::Object(s))
}

fn region_of(r: Option<RegionArg>, fallback: Region) -> Region {
    match r {
        Some(RegionArg::Interior) => Region::Interior,
        Some(RegionArg::Full) => Region::Full,
        None => fallback,
    }
}

fn max_over(field: &ScalarField, region: Region) -> f64 {
    let grid = field.grid();
    field
        .values()
        .iter()
        .enumerate()
        .filter(|(i, _)| region.contains(grid, *i))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max)
}

fn residual(ctx: &Context, args: ResidualArgs) -> Result<(), CliError> {
    let consts = &ctx.consts;
    let check = required(args.check, "check")?;
    // a sampled action is not periodic, so its wrap-around stencils are garbage
    let action_source = matches!(check, Check::Hje | Check::HjeMassless) && args.fields.is_none();
    let region = region_of(args.region, if action_source { Region::Interior } else { Region::Full });
    let levels = match check {
        Check::Hje | Check::HjeMassless | Check::Eigen => 2,
        _ => 3,
    };
    let needs_spec = matches!(check, Check::Linear | Check::Nonlinear | Check::Decomposition);
    if !needs_spec {
        forbid(&args.spec, "spec", "for this check")?;
        forbid(&args.builtin, "builtin", "for this check")?;
        forbid(&args.a, "A", "for this check")?;
    }
    if check != Check::Eigen {
        forbid(&args.momentum, "momentum", "outside the eigen check")?;
        forbid(&args.energy, "energy", "outside the eigen check")?;
    }
    let a = args.a.as_deref().map(|t| parse_transform_constant(t, consts)).transpose()?;

    // the stack plus, for plane-wave sources, the eigenvalues it was built with
    let (stack, eigen): (FieldStack, Option<([f64; 3], f64)>) = match (&args.fields, &args.mode) {
        (Some(_), Some(_)) => return Err(invalid("give either 'field' files or a plane-wave 'mode', not both")),
        (Some(paths), None) => {
            if !(levels..=3).contains(&paths.len()) {
                return Err(invalid(format!("this check needs {levels} to 3 field levels, got {}", paths.len())));
            }
            let fields = paths.iter().map(|p| read_field(p)).collect::<Result<Vec<_>, _>>()?;
            (FieldStack::new(fields, required(args.dt, "dt")?)?, None)
        }
        (None, _) => {
            let src = plane_source(args.dims, args.points, args.length, args.mode.clone())?;
            let dt = args.dt.unwrap_or(0.5 * src.grid.spacing());
            let d = src.grid.dims();
            let p = vec3::scale(src.k, consts.hbar);
            match check {
                Check::Hje | Check::HjeMassless => {
                    let c = if check == Check::HjeMassless {
                        PhysicalConstants::massless(consts.hbar, consts.c)
                    } else {
                        *consts
                    };
                    let action = AffineField::particle_action(kinematics::energy_from_momentum(p, &c), p, d);
                    (sample_stack(&action, src.grid, 0.0, dt, levels)?, None)
                }
                _ => {
                    let wave = PlaneWave::on_shell(Complex64::new(1.0, 0.0), src.k, consts);
                    let field = ExpField::plane_wave(&wave, d);
                    (sample_stack(&field, src.grid, 0.0, dt, levels)?, Some((p, consts.hbar * wave.omega)))
                }
            }
        }
    };
    let dims = stack.grid().dims();

    let mut metrics: Vec<(&str, f64)> = Vec::new();
    match check {
        Check::Hje | Check::HjeMassless => {
            let r = hje_residual(&stack, consts, check == Check::HjeMassless)?;
            metrics.push(("max_abs_residual", max_over(&r, region)));
        }
        Check::Eigen => {
            let p = match args.momentum {
                Some(v) => vec3_param(Some(v), "momentum")?,
                None => eigen.map(|x| x.0).ok_or_else(|| invalid("missing parameter 'momentum'"))?,
            };
            let e = args.energy.or(eigen.map(|x| x.1)).ok_or_else(|| invalid("missing parameter 'energy'"))?;
            let d = eigen_checks(&stack, p, e, consts)?;
            metrics.push(("momentum_defect", d.momentum));
            metrics.push(("energy_defect", d.energy));
        }
        Check::LogCurvature => {
            let d = log_curvature_check(&stack, region)?;
            metrics.push(("space_defect", d.space));
            metrics.push(("time_defect", d.time));
        }
        Check::Linear | Check::Nonlinear | Check::Decomposition => {
            let spec = load_spec(args.spec.as_deref(), args.builtin, dims, consts)?;
            match check {
                Check::Linear => {
                    let lin = linearize(&spec, required(a, "A")?)?;
                    metrics.push(("max_abs_residual", max_over(&residual_linear_field(&lin, &stack)?, region)));
                }
                Check::Nonlinear => {
                    let spec = match a {
                        Some(a) => log_transform(&spec, a)?,
                        None => spec,
                    };
                    metrics.push(("max_abs_residual", max_over(&residual_nonlinear_field(&spec, &stack)?, region)));
                }
                _ => {
                    let s = decomposition_field(&spec, required(a, "A")?, &stack)?;
                    metrics.push(("max_mismatch", s.max_mismatch));
                    metrics.push(("worst_index", s.worst_index as f64));
                    metrics.push(("max_abs_lhs", s.max_abs_lhs));
                    metrics.push(("max_abs_log_term", s.max_abs_log_term));
                }
            }
        }
    }

    let mut csv = String::from("metric,value\n");
    for (name, v) in &metrics {
        csv.push_str(&format!("{name},{}\n", fmt_float(*v)));
    }
    ctx.sink.primary("residual.csv", &csv)?;
    let mut s = ctx.summary("residual");
    s.insert("check".into(), json!(check));
    s.insert("points".into(), json!(stack.grid().points()));
    s.insert("dims".into(), json!(dims));
    for (name, v) in metrics {
        s.insert(name.into(), json!(v));
    }
    ctx.sink.summary(&Value::Object(s))
}

fn potential_preset(args: &NewtonArgs) -> Result<PotentialPreset, CliError> {
    let kind = required(args.potential, "potential")?;
    let given = [
        ("force", args.force.is_some(), PotentialKind::Linear),
        ("kappa", args.kappa.is_some(), PotentialKind::Harmonic),
        ("value", args.value.is_some(), PotentialKind::Constant),
    ];
    for (name, present, owner) in given {
        if present && owner != kind {
            return Err(invalid(format!("parameter '{name}' does not apply to the {kind:?} potential")));
        }
    }
    Ok(match kind {
        PotentialKind::Free => PotentialPreset::Free,
        PotentialKind::Linear => PotentialPreset::Linear { force: vec3_param(args.force.clone(), "force")? },
        PotentialKind::Harmonic => PotentialPreset::Harmonic { kappa: required(args.kappa, "kappa")? },
        PotentialKind::Constant => PotentialPreset::Constant { value: required(args.value, "value")? },
    })
}

fn newton(ctx: &Context, args: NewtonArgs) -> Result<(), CliError> {
    let preset = potential_preset(&args)?;
    let r0 = vec3_param(args.r0, "r0")?;
    let p0 = vec3_param(args.p0, "p0")?;
    let dt = required(args.dt, "dt")?;
    let steps = required(args.steps, "steps")?;
    let traj = integrate_newton(&preset, r0, p0, &ctx.consts, dt, steps, Integrator::Rk4)?;
    ctx.sink.primary("trajectory.csv", &traj.to_csv())?;
    let last = traj.last().expect("trajectories hold the initial sample");
    let mut s = ctx.summary("newton");
    s.insert("potential".into(), json!(preset));
    s.insert("dt".into(), json!(dt));
    s.insert("steps".into(), json!(steps));
    s.insert("max_energy_error".into(), json!(traj.max_energy_error()));
    s.insert("final".into(), json!({ "t": last.t, "r": last.r, "p": last.p, "energy": last.energy }));
    if preset == PotentialPreset::Free {
        s.insert("duality_defect".into(), json!(free_action_duality_defect(&traj, &ctx.consts, 1e-2)?));
    }
    ctx.sink.summary(&Value::Object(s))
}

fn limit_study(ctx: &Context, args: LimitArgs) -> Result<(), CliError> {
    if ctx.common.c.is_some() {
        return Err(invalid("limit-study sweeps the speed of light; use 'c_values' instead of 'c'"));
    }
    let base = LimitStudyConfig::default();
    let cfg = LimitStudyConfig {
        k: args.k.unwrap_or(base.k),
        c_values: args.c_values.unwrap_or(base.c_values),
        m0: ctx.common.m0.unwrap_or(base.m0),
        hbar: ctx.common.hbar.unwrap_or(base.hbar),
        time: args.time.unwrap_or(base.time),
        resolution: args.resolution.unwrap_or(base.resolution),
        phase_per_step: args.phase_per_step.unwrap_or(base.phase_per_step),
    };
    cfg.validate()?;
    let report = run_limit_study(&cfg)?;
    ctx.sink.primary("limit_study.csv", &report.to_csv())?;
    let mut s = ctx.summary("limit-study");
    s.remove("constants");
    s.insert("config".into(), json!(cfg));
    let study: Value = serde_json::from_str(&report.summary_json()).expect("summary is valid JSON");
    s.insert("study".into(), study);
    ctx.sink.summary(&Value::Object(s))
}

fn verify_all(ctx: &Context, args: VerifyArgs) -> Result<(), CliError> {
    let seed = ctx.common.seed.unwrap_or(hjwave_verify::DEFAULT_SEED);
    let ids: Vec<u8> = match args.only {
        Some(ids) => ids,
        None => hjwave_verify::criterion_ids().collect(),
    };
    if ids.is_empty() {
        return Err(invalid("'only' needs at least one criterion"));
    }
    // reject unknown ids before running anything
    if let Some(bad) = ids.iter().find(|id| !hjwave_verify::criterion_ids().any(|k| k == **id)) {
        return Err(invalid(format!("no criterion {bad}, expected 1..=10")));
    }
    let reports = ids
        .iter()
        .map(|&id| hjwave_verify::run_criterion(id, seed))
        .collect::<Result<Vec<_>, _>>()?;
    print!("{}", hjwave_verify::render(&reports));

    let mut csv = String::from("criterion,title,measurement,value,bound,passed\n");
    for r in &reports {
        for m in &r.measurements {
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.id,
                r.title,
                m.name.replace(',', ";"),
                fmt_float(m.value),
                m.bound,
                m.passed()
            ));
        }
    }
    ctx.sink.file("verify.csv", csv.as_bytes())?;
    let mut s = ctx.summary("verify-all");
    s.remove("constants");
    s.insert("seed".into(), json!(seed));
    s.insert(
        "criteria".into(),
        json!(reports
            .iter()
            .map(|r| json!({ "id": r.id, "title": r.title, "passed": r.passed(), "error": r.error }))
            .collect::<Vec<_>>()),
    );
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed()).map(|r| r.id).collect();
    s.insert("passed".into(), json!(reports.len() - failed.len()));
    s.insert("total".into(), json!(reports.len()));
    ctx.sink.summary(&Value::Object(s))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::CriteriaFailed(format!("criteria {failed:?} failed")))
    }
}
