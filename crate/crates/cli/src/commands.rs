use std::f64::consts::TAU;

use serde_json::{json, Value};
use zernike::algebra::verify_all;
use zernike::coordinates::{from_ambient, lift_orbit, to_ambient, CoordSystem, SurfaceParams};
use zernike::dynamics::{drift_series, initial_state, integrate, IntegratorConfig};
use zernike::orbit::{
    classify, compute_constants, ellipse_area, period, phi_of_t, r_squared_of_t, semi_axes, xy_of_t,
};
use zernike::sweep::{region_grid, GridSpec};
use zernike::{EllipseConstants, Error, OrbitClass, OrbitSpec, Params};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::table::{format_real, Column, Table};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const TOLERANCE_ENV: &str = "ZERNIKE_TOL";

/// Rendered artifact plus an optional failure to report once it is written.
pub struct Outcome {
    pub body: String,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Self {
            body,
            failure: None,
        }
    }
}

pub fn execute(cmd: &Command) -> CliResult<Outcome> {
    match cmd {
        Command::Classify(a) => run_classify(a),
        Command::Constants(a) => run_constants(a),
        Command::Trajectory(a) => run_trajectory(a),
        Command::Integrate(a) => run_integrate(a),
        Command::VerifyAlgebra(a) => run_verify(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Lift(a) => run_lift(a),
    }
}

pub fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Classify(a) => &a.out,
        Command::Constants(a) => &a.out,
        Command::Trajectory(a) => &a.out,
        Command::Integrate(a) => &a.out,
        Command::VerifyAlgebra(a) => a,
        Command::Sweep(a) => &a.out,
        Command::Lift(a) => &a.out,
    }
}

fn params(p: &ParamArgs) -> CliResult<Params> {
    Ok(Params::new(p.alpha, p.beta)?)
}

fn orbit(o: &OrbitArgs) -> CliResult<(Params, OrbitSpec)> {
    if !o.energy.is_finite() || !o.pphi.is_finite() {
        return Err(CliError::Input(format!(
            "energy and pphi must be finite, got {} and {}",
            o.energy, o.pphi
        )));
    }
    Ok((params(&o.params)?, OrbitSpec::new(o.energy, o.pphi)))
}

fn closed_orbit(o: &OrbitArgs) -> CliResult<(Params, OrbitSpec, EllipseConstants)> {
    let (params, spec) = orbit(o)?;
    let consts = compute_constants(params, &spec)?;
    if !consts.region.is_closed() {
        return Err(Error::RegionForbidden(format!(
            "no closed orbit at E = {}, p_phi = {} (class {})",
            spec.energy, spec.p_phi, consts.region
        ))
        .into());
    }
    Ok((params, spec, consts))
}

fn render(table: &Table, format: Format) -> CliResult<String> {
    match format {
        Format::Csv => Ok(table.to_csv()?),
        Format::Json => Ok(json_text(&table.to_json())),
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn check_samples(n: usize) -> CliResult<()> {
    if n == 0 {
        return Err(CliError::Input("samples must be at least 1".into()));
    }
    Ok(())
}

fn check_t_end(t: f64) -> CliResult<f64> {
    if t.is_finite() && t >= 0.0 {
        Ok(t)
    } else {
        Err(CliError::Input(format!(
            "t-end must be finite and non-negative, got {t}"
        )))
    }
}

pub const SAMPLES_PER_PERIOD: usize = 512;

/// Explicit sample count, else [`SAMPLES_PER_PERIOD`] per radial period.
fn time_samples(flag: Option<usize>, t_end: f64, t_period: f64) -> CliResult<usize> {
    let n = flag
        .unwrap_or_else(|| ((SAMPLES_PER_PERIOD as f64 * t_end / t_period).ceil() as usize).max(1));
    check_samples(n)?;
    Ok(n)
}

fn uniform(end: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            if k == n {
                end
            } else {
                end * k as f64 / n as f64
            }
        })
        .collect()
}

fn run_classify(a: &ClassifyArgs) -> CliResult<Outcome> {
    let (params, spec) = orbit(&a.orbit)?;
    let class = classify(params, &spec);
    let table = || {
        Table::new()
            .column("p_phi", Column::Real(vec![spec.p_phi]))
            .column("E", Column::Real(vec![spec.energy]))
            .column("class", Column::Text(vec![class.to_string()]))
    };
    let body = match a.out.format {
        None => format!("{class}\n"),
        Some(f) => render(&table(), f)?,
    };
    let failure = (class == OrbitClass::Forbidden).then(|| {
        Error::RegionForbidden(format!("E = {}, p_phi = {}", spec.energy, spec.p_phi)).into()
    });
    Ok(Outcome { body, failure })
}

fn run_constants(a: &OrbitCommand) -> CliResult<Outcome> {
    let (_, _, c) = closed_orbit(&a.orbit)?;
    let t = period(&c)?;
    let (mu_x, mu_y) = semi_axes(&c)?;
    let area = ellipse_area(&c)?;
    let body = match a.out.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({
            "constants": c,
            "period": t,
            "revolution_period": 2.0 * t,
            "mu_x": mu_x,
            "mu_y": mu_y,
            "area": area,
        })),
        Format::Csv => {
            let rows = [
                ("A", c.a),
                ("B", c.b),
                ("C", c.c),
                ("D", c.d),
                ("eps", c.eps),
                ("U", c.u),
                ("period", t),
                ("revolution_period", 2.0 * t),
                ("mu_x", mu_x),
                ("mu_y", mu_y),
                ("area", area),
            ];
            let table = Table::new()
                .meta("class", c.region.to_string())
                .column(
                    "name",
                    Column::Text(rows.iter().map(|r| r.0.to_string()).collect()),
                )
                .column("value", Column::Real(rows.iter().map(|r| r.1).collect()));
            table.to_csv()?
        }
    };
    Ok(Outcome::ok(body))
}

fn run_trajectory(a: &TrajectoryArgs) -> CliResult<Outcome> {
    let (_, _, c) = closed_orbit(&a.orbit)?;
    let t_period = period(&c)?;
    let t_end = check_t_end(a.t_end.unwrap_or(2.0 * t_period))?;
    let ts = uniform(t_end, time_samples(a.samples, t_end, t_period)?);
    let mut xs = Vec::with_capacity(ts.len());
    let mut ys = Vec::with_capacity(ts.len());
    let mut r2 = Vec::with_capacity(ts.len());
    let mut phi = Vec::with_capacity(ts.len());
    for &t in &ts {
        let (x, y) = xy_of_t(&c, t)?;
        xs.push(x);
        ys.push(y);
        r2.push(r_squared_of_t(&c, t)?);
        phi.push(phi_of_t(&c, t)?);
    }
    let table = Table::new()
        .meta("period", format_real(t_period))
        .column("t", Column::Real(ts))
        .column("x", Column::Real(xs))
        .column("y", Column::Real(ys))
        .column("r2", Column::Real(r2))
        .column("phi", Column::Real(phi));
    Ok(Outcome::ok(render(
        &table,
        a.out.format.unwrap_or(Format::Csv),
    )?))
}

/// `--tol`, else `ZERNIKE_TOL`, else [`DEFAULT_TOLERANCE`].
fn tolerance(flag: Option<f64>) -> CliResult<f64> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(TOLERANCE_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{TOLERANCE_ENV}={s:?} is not a number"))),
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

fn run_integrate(a: &IntegrateArgs) -> CliResult<Outcome> {
    let (params, spec, c) = closed_orbit(&a.orbit)?;
    let t_period = period(&c)?;
    let t_end = check_t_end(a.t_end.unwrap_or(2.0 * t_period))?;
    let n = time_samples(a.samples, t_end, t_period)?;
    let mut cfg = match a.method {
        MethodArg::Rk45 => {
            let mut cfg = IntegratorConfig::rk45(tolerance(a.tol)?);
            cfg.step = a.step.unwrap_or(0.0);
            cfg
        }
        MethodArg::Rk4 => IntegratorConfig::rk4(a.step.unwrap_or(1e-4)),
    }
    .with_samples(n);
    if let Some(n) = a.max_steps {
        cfg = cfg.with_max_steps(n);
    }
    let s0 = initial_state(params, &spec)?;
    let traj = integrate(params, s0, t_end, &cfg)?;
    let samples = traj.samples();
    let drift = drift_series(params, samples);
    let col = |f: &dyn Fn(usize) -> f64| Column::Real((0..samples.len()).map(f).collect());
    let table = Table::new()
        .meta("method", format!("{:?}", a.method).to_lowercase())
        .meta("tolerance", format_real(cfg.tolerance))
        .meta("period", format_real(t_period))
        .column("t", col(&|i| samples[i].t))
        .column("re_x", col(&|i| samples[i].state.x.re))
        .column("im_x", col(&|i| samples[i].state.x.im))
        .column("re_y", col(&|i| samples[i].state.y.re))
        .column("im_y", col(&|i| samples[i].state.y.im))
        .column("drift_I1", col(&|i| drift[i].i1))
        .column("drift_I2", col(&|i| drift[i].i2))
        .column("drift_I3", col(&|i| drift[i].i3))
        .column("drift_H", col(&|i| drift[i].h));
    let body = render(&table, a.out.format.unwrap_or(Format::Csv))?;
    let worst = drift
        .iter()
        .map(|d| d.i1.max(d.i2).max(d.i3).max(d.h))
        .fold(0.0, f64::max);
    let failure = (worst.is_nan() || worst > a.max_drift).then(|| {
        CliError::Verification(format!(
            "invariant drift {worst:e} exceeds {:e}",
            a.max_drift
        ))
    });
    Ok(Outcome { body, failure })
}

fn run_verify(out: &OutputArgs) -> CliResult<Outcome> {
    let reports = verify_all();
    let all_pass = reports.iter().all(|r| r.pass);
    let body = match out.format.unwrap_or(Format::Json) {
        Format::Json => json_text(&json!({ "all_pass": all_pass, "reports": reports })),
        Format::Csv => Table::new()
            .column(
                "identity",
                Column::Text(reports.iter().map(|r| r.identity.clone()).collect()),
            )
            .column(
                "pass",
                Column::Flag(reports.iter().map(|r| r.pass).collect()),
            )
            .column(
                "residual_term_count",
                Column::Count(reports.iter().map(|r| r.residual.term_count()).collect()),
            )
            .to_csv()?,
    };
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.identity.as_str())
        .collect();
    let failure =
        (!all_pass).then(|| CliError::Verification(format!("identities with residue: {failed:?}")));
    Ok(Outcome { body, failure })
}

fn energy_unit(p: Params) -> String {
    if p.alpha == 0.0 {
        "undefined for alpha = 0".into()
    } else {
        format!(
            "beta^2/(4|alpha|) = {}",
            format_real(p.beta * p.beta / (4.0 * p.alpha.abs()))
        )
    }
}

fn run_sweep(a: &SweepArgs) -> CliResult<Outcome> {
    let p = params(&a.params)?;
    let grid = GridSpec {
        p_min: a.pmin,
        p_max: a.pmax,
        p_steps: a.psteps,
        e_min: a.emin,
        e_max: a.emax,
        e_steps: a.esteps,
    };
    if a.psteps == 0 || a.esteps == 0 {
        return Err(CliError::Input(
            "empty grid: psteps and esteps must be positive".into(),
        ));
    }
    let cells = region_grid(p, &grid)?;
    let table = Table::new()
        .meta("energy_unit", energy_unit(p))
        .meta("E_column", "absolute energy")
        .column(
            "p_phi",
            Column::Real(cells.iter().map(|c| c.p_phi).collect()),
        )
        .column("E", Column::Real(cells.iter().map(|c| c.energy).collect()))
        .column(
            "class",
            Column::Text(cells.iter().map(|c| c.class.to_string()).collect()),
        );
    Ok(Outcome::ok(render(
        &table,
        a.out.format.unwrap_or(Format::Csv),
    )?))
}

fn run_lift(a: &LiftArgs) -> CliResult<Outcome> {
    check_samples(a.samples)?;
    let (params, _, c) = closed_orbit(&a.orbit)?;
    let surf = SurfaceParams::from_alpha(params.alpha)?;
    let target: Option<CoordSystem> = a.system.as_deref().map(str::parse).transpose()?;
    let phis = uniform(TAU, a.samples);
    let (mut u1, mut u2, mut xi) = (Vec::new(), Vec::new(), [Vec::new(), Vec::new(), Vec::new()]);
    let mut systems: Vec<&'static str> = Vec::new();
    for &phi in &phis {
        let mut coords = lift_orbit(params, &c, phi)?;
        let p = to_ambient(&coords, &surf)?;
        if let Some(sys) = target {
            coords = from_ambient(&p, sys, &surf)?;
        }
        if !systems.contains(&coords.system.name()) {
            systems.push(coords.system.name());
        }
        u1.push(coords.u1);
        u2.push(coords.u2);
        xi[0].push(p.xi1);
        xi[1].push(p.xi2);
        xi[2].push(p.xi3);
    }
    let [xi1, xi2, xi3] = xi;
    let table = Table::new()
        .meta("system", systems.join(" "))
        .column("phi", Column::Real(phis))
        .column("u1", Column::Real(u1))
        .column("u2", Column::Real(u2))
        .column("xi1", Column::Real(xi1))
        .column("xi2", Column::Real(xi2))
        .column("xi3", Column::Real(xi3));
    Ok(Outcome::ok(render(
        &table,
        a.out.format.unwrap_or(Format::Csv),
    )?))
}
