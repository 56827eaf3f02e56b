//! Subcommand implementations; each builds its whole output before writing it.

use crate::{
    ConvolveArgs, DensityArgs, HeightArgs, MomentsArgs, OracleArgs, Output, PresetCurveArgs, PresetParams,
    VelocityArgs,
};
use gtls_core::charparams::{p_prime_series, scaling_sequence};
use gtls_core::finiten::{measure_table, oracle_summary, OracleSummary};
use gtls_core::fps::{parse_rational, q_to_f64, Q};
use gtls_core::hydro::{velocity, Hydro, VelocityKind};
use gtls_core::io::{csv, fmt_num};
use gtls_core::limitshape::{
    c_coefficient, density_curve, moments, moments_by_route, preset_density, shape_function, trivial_moment,
    DensityCurve, Preset, Route,
};
use gtls_core::paramfile::{parse_param_file, ParamFile};
use gtls_core::qfc::{convolve, QfcMeasure};
use gtls_core::{LimitParams, TSeries};
use rayon::prelude::*;
use serde::Serialize;
use std::path::Path;
use thiserror::Error;

/// Largest moment order accepted on the command line.
pub const MAX_ORDER: usize = 24;
/// Largest density grid accepted on the command line.
pub const MAX_GRID: usize = 1_000_000;
/// Moments used to guess a plotting range.
const RANGE_ORDER: usize = 16;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
    #[error(transparent)]
    Core(#[from] gtls_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Core(e) if e.is_input_error() => 2,
            CliError::Core(_) => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cmd: crate::Command) -> Result<()> {
    init_threads()?;
    use crate::Command::*;
    match cmd {
        Moments(a) => run_moments(&a),
        Density(a) => run_density(&a, false),
        Shape(a) => run_density(&a, true),
        Preset(a) => run_preset(&a),
        Oracle(a) => run_oracle(&a),
        Convolve(a) => run_convolve(&a),
        Velocity(a) => run_velocity(&a),
        Height(a) => run_height(&a),
    }
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("GTLS_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("GTLS_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Numeric(format!("thread pool: {e}")))
}

fn read_params(path: &Path) -> Result<ParamFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_param_file(&text)?)
}

fn write_to(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &Output, text: &str) -> Result<()> {
    match &out.output {
        Some(p) => write_to(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 || order > MAX_ORDER {
        return Err(CliError::Input(format!("order must lie in 1..={MAX_ORDER}, got {order}")));
    }
    Ok(())
}

/// Moment JSON with every number an exact rational string.
#[derive(Serialize)]
struct MomentJson {
    t: Vec<String>,
    c: Vec<String>,
    m: Vec<String>,
    m_tilde: Vec<String>,
    route: &'static str,
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(|q| q.to_string()).collect()
}

fn moment_json(t: &TSeries, m: &[Q], route: Route) -> Result<String> {
    let k = m.len();
    let c: Vec<Q> = (1..=k).map(|j| c_coefficient(t, j)).collect::<gtls_core::Result<_>>()?;
    let m_tilde: Vec<Q> = m.iter().enumerate().map(|(i, v)| v - trivial_moment(i + 1)).collect();
    let j = MomentJson { t: strings(&t.ts()[..k]), c: strings(&c), m: strings(m), m_tilde: strings(&m_tilde), route: route.name() };
    Ok(serde_json::to_string_pretty(&j).expect("moment JSON serializes") + "\n")
}

/// `t_1..t_K` from a limit file, or from a moment file through the moment map.
fn pprime_of(file: &ParamFile, order: usize) -> Result<TSeries> {
    match file {
        ParamFile::Limit { params, .. } => Ok(p_prime_series(params, order)?),
        ParamFile::Moments(m) => {
            if m.len() < order {
                return Err(CliError::Input(format!("moment file has {} moments, order {order} requested", m.len())));
            }
            Ok(QfcMeasure::from_moments(m[..order].to_vec())?.p_prime().clone())
        }
        ParamFile::FiniteN(_) => Err(CliError::Input("expected a limit parameter file or a moment file".into())),
    }
}

fn run_moments(a: &MomentsArgs) -> Result<()> {
    check_order(a.order)?;
    let route = Route::from_name(&a.route)?;
    let file = read_params(&a.params)?;
    let t = pprime_of(&file, a.order)?;
    // all routes are cross-checked; the requested one supplies m
    moments(&t, a.order)?;
    let m = moments_by_route(&t, a.order, route)?;
    emit(&a.out, &moment_json(&t, &m, route)?)
}

fn preset_from(name: &str, p: &PresetParams) -> Result<Preset> {
    let mut vals: Vec<(&str, Q)> = Vec::new();
    for (k, v) in [
        ("gamma", &p.gamma),
        ("alpha", &p.alpha),
        ("a", &p.a),
        ("beta", &p.beta),
        ("b", &p.b),
        ("gamma1", &p.gamma1),
        ("gamma2", &p.gamma2),
        ("alpha_tilde", &p.alpha_tilde),
        ("a_tilde", &p.a_tilde),
    ] {
        if let Some(s) = v {
            let q = parse_rational(s).map_err(|_| CliError::Input(format!("--{k}: not a rational: {s:?}")))?;
            vals.push((k, q));
        }
    }
    Ok(Preset::from_name(name, |k| vals.iter().find(|(n, _)| *n == k).map(|(_, q)| q.clone()))?)
}

fn any_preset_param(p: &PresetParams) -> bool {
    [&p.gamma, &p.alpha, &p.a, &p.beta, &p.b, &p.gamma1, &p.gamma2, &p.alpha_tilde, &p.a_tilde]
        .iter()
        .any(|v| v.is_some())
}

/// `[-B, B]` with `B` from the growth of the first moments.
fn range_from_moments(lim: &LimitParams) -> Result<(f64, f64)> {
    let t = p_prime_series(lim, RANGE_ORDER)?;
    let m = moments_by_route(&t, RANGE_ORDER, Route::Inverse)?;
    let r = m
        .iter()
        .enumerate()
        .map(|(i, v)| q_to_f64(v).abs().powf(1.0 / (i as f64 + 1.0)))
        .fold(1.0, f64::max);
    let b = 1.25 * r + 0.5;
    Ok((-b, b))
}

fn grid_range(xmin: Option<f64>, xmax: Option<f64>, default: impl FnOnce() -> Result<(f64, f64)>) -> Result<(f64, f64)> {
    let (lo, hi) = match (xmin, xmax) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let (a, b) = default()?;
            (xmin.unwrap_or(a), xmax.unwrap_or(b))
        }
    };
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(CliError::Input(format!("need finite xmin < xmax, got [{lo}, {hi}]")));
    }
    Ok((lo, hi))
}

fn check_grid(n: usize) -> Result<()> {
    if !(2..=MAX_GRID).contains(&n) {
        return Err(CliError::Input(format!("grid must lie in 2..={MAX_GRID}, got {n}")));
    }
    Ok(())
}

fn run_density(a: &DensityArgs, shape: bool) -> Result<()> {
    check_grid(a.grid)?;
    let (lim, preset) = match (&a.params, &a.preset) {
        (Some(path), None) => {
            if any_preset_param(&a.preset_params) {
                return Err(CliError::Input("preset parameters need --preset".into()));
            }
            match read_params(path)? {
                ParamFile::Limit { params, preset } => (params, preset),
                _ => return Err(CliError::Input("expected a file with \"mode\": \"limit\"".into())),
            }
        }
        (None, Some(name)) => {
            let p = preset_from(name, &a.preset_params)?;
            (p.limit_params(), Some(p))
        }
        _ => return Err(CliError::Input("give exactly one of --params and --preset".into())),
    };
    if !(a.root_tol > 0.0 && a.root_tol < 1.0) {
        return Err(CliError::Input(format!("--root-tol must lie in (0, 1), got {}", a.root_tol)));
    }
    let (lo, hi) = grid_range(a.xmin, a.xmax, || range_from_moments(&lim))?;
    let curve = density_curve(&lim, lo, hi, a.grid, a.root_tol)?;
    if let Some(path) = &a.sidecar {
        write_to(path, &curve.sidecar_json())?;
    }
    if shape {
        return emit(&a.out, &shape_function(&curve).to_csv());
    }
    if !a.compare_preset {
        return emit(&a.out, &curve.to_csv());
    }
    let preset = preset
        .filter(Preset::has_closed_density)
        .ok_or_else(|| CliError::Input("--compare-preset needs planch, multi_alpha or multi_beta".into()))?;
    let (text, sup) = compare_csv(&curve, &preset, a.edge_band)?;
    emit(&a.out, &text)?;
    if sup > a.tol {
        return Err(CliError::Numeric(format!("sup deviation from the closed form {} exceeds tol {}", fmt_num(sup), a.tol)));
    }
    Ok(())
}

/// `x,p,p_closed` rows and the sup deviation away from the breakpoints.
fn compare_csv(curve: &DensityCurve, preset: &Preset, band: f64) -> Result<(String, f64)> {
    let bps = preset.breakpoints();
    let mut rows = Vec::with_capacity(curve.xs.len());
    let mut sup: f64 = 0.0;
    for (&x, &p) in curve.xs.iter().zip(&curve.ps) {
        let c = preset_density(preset, x)?;
        if !bps.iter().any(|b| (x - b).abs() < band) {
            sup = sup.max((p - c).abs());
        }
        rows.push([x, p, c]);
    }
    Ok((csv("x,p,p_closed", rows.iter().map(|r| &r[..])), sup))
}

fn run_preset(a: &PresetCurveArgs) -> Result<()> {
    check_grid(a.grid)?;
    let p = preset_from(&a.name, &a.preset_params)?;
    if !p.has_closed_density() {
        return Err(CliError::Input(format!("preset {} has no closed-form density; use `density --preset`", p.name())));
    }
    let bps = p.breakpoints();
    let (lo, hi) = grid_range(a.xmin, a.xmax, || Ok((bps[0] - 0.25, bps[bps.len() - 1] + 0.25)))?;
    let h = (hi - lo) / (a.grid - 1) as f64;
    let rows: Vec<[f64; 2]> = (0..a.grid)
        .map(|i| {
            let x = if i + 1 == a.grid { hi } else { lo + h * i as f64 };
            Ok([x, preset_density(&p, x)?])
        })
        .collect::<Result<_>>()?;
    emit(&a.out, &csv("x,p", rows.iter().map(|r| &r[..])))
}

fn run_oracle(a: &OracleArgs) -> Result<()> {
    let params = match read_params(&a.params)? {
        ParamFile::FiniteN(p) => p,
        // a limit file stands for its scaling sequence at this N
        ParamFile::Limit { params, .. } => scaling_sequence(&params, a.n as u64)?,
        ParamFile::Moments(_) => return Err(CliError::Input("oracle needs character parameters".into())),
    };
    let params = &params;
    if a.kmax == 0 {
        return Err(CliError::Input("--kmax must be positive".into()));
    }
    let summary = oracle_summary(params, a.n, a.cutoff, a.delta, a.kmax)?;
    if let Some(path) = &a.table {
        let cutoff = a.cutoff.ok_or_else(|| CliError::Input("--table needs --cutoff".into()))?;
        write_to(path, &measure_table(params, a.n, cutoff, a.delta)?.to_csv())?;
    }
    emit(&a.out, &summary_json(&summary))
}

/// Oracle summary JSON with numbers at 12 significant digits.
fn summary_json(s: &OracleSummary) -> String {
    let cutoff = s.cutoff.map_or("null".to_string(), |c| c.to_string());
    let rows: Vec<String> = s
        .moments
        .iter()
        .map(|m| {
            format!(
                "    {{\"k\": {}, \"scaled_E\": {}, \"scaled_E2\": {}}}",
                m.k,
                fmt_num(m.scaled_e),
                fmt_num(m.scaled_e2)
            )
        })
        .collect();
    format!(
        "{{\n  \"N\": {},\n  \"cutoff\": {cutoff},\n  \"captured_mass\": {},\n  \"moments\": [\n{}\n  ]\n}}\n",
        s.n,
        fmt_num(s.captured_mass),
        rows.join(",\n")
    )
}

fn measure_of(path: &Path, order: usize) -> Result<QfcMeasure> {
    match read_params(path)? {
        ParamFile::Limit { params, .. } => Ok(QfcMeasure::from_limit(&params, order)?),
        ParamFile::Moments(m) => Ok(QfcMeasure::from_moments(m)?),
        ParamFile::FiniteN(_) => Err(CliError::Input(format!("{}: expected limit or moment data", path.display()))),
    }
}

fn run_convolve(a: &ConvolveArgs) -> Result<()> {
    check_order(a.order)?;
    let x = measure_of(&a.first, a.order)?;
    let y = measure_of(&a.second, a.order)?;
    let z = convolve(&x, &y)?;
    emit(&a.out, &moment_json(z.p_prime(), z.moments(), Route::Inverse)?)
}

/// `"a"` or `"a:b:n"` (n evenly spaced values from a to b).
fn parse_axis(name: &str, s: &str) -> Result<Vec<f64>> {
    let bad = || CliError::Input(format!("--{name}: expected a number or a:b:n, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b, n] => {
            let (a, b) = (num(a)?, num(b)?);
            let n: usize = n.trim().parse().ok().filter(|&n| n >= 1 && n <= MAX_GRID).ok_or_else(bad)?;
            if n == 1 {
                return Ok(vec![a]);
            }
            Ok((0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect())
        }
        _ => Err(bad()),
    }
}

/// `x,y,value` over the grid, x-major, computed in parallel.
fn xy_table(xs: &[f64], ys: &[f64], f: impl Fn(f64, f64) -> Result<f64> + Sync) -> Result<String> {
    let pts: Vec<(f64, f64)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    let rows: Vec<[f64; 3]> = pts.par_iter().map(|&(x, y)| Ok([x, y, f(x, y)?])).collect::<Result<_>>()?;
    Ok(csv("x,y,value", rows.iter().map(|r| &r[..])))
}

fn run_velocity(a: &VelocityArgs) -> Result<()> {
    let kind = VelocityKind::from_name(&a.kind, a.value)?;
    let lim = read_params(&a.params)?.limit()?.clone();
    let (xs, ys) = (parse_axis("x", &a.x)?, parse_axis("y", &a.y)?);
    let h = Hydro::new(&lim);
    // frozen points have no velocity and print as nan
    let text = xy_table(&xs, &ys, |x, y| match velocity(kind, &h.critical_point(x, y)?) {
        Err(gtls_core::Error::Frozen { .. }) => Ok(f64::NAN),
        r => Ok(r?),
    })?;
    emit(&a.out, &text)
}

fn run_height(a: &HeightArgs) -> Result<()> {
    let lim = read_params(&a.params)?.limit()?.clone();
    let (xs, ys) = (parse_axis("x", &a.x)?, parse_axis("y", &a.y)?);
    let h = Hydro::new(&lim);
    emit(&a.out, &xy_table(&xs, &ys, |x, y| Ok(h.height(x, y)?))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_specs() {
        assert_eq!(parse_axis("x", "0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_axis("x", "-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(parse_axis("x", "2:3:1").unwrap(), vec![2.0]);
        for bad in ["", "a", "1:2", "1:2:0", "1:2:x", "nan"] {
            assert_eq!(parse_axis("x", bad).unwrap_err().exit_code(), 2, "{bad}");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Core(gtls_core::Error::Parse("x".into())).exit_code(), 2);
        assert_eq!(CliError::Core(gtls_core::Error::NoRoot("x".into())).exit_code(), 3);
        assert_eq!(CliError::Numeric("x".into()).exit_code(), 3);
    }

    #[test]
    fn moment_range_covers_plancherel_support() {
        let (lo, hi) = range_from_moments(&LimitParams::plancherel(gtls_core::fps::qi(1)).unwrap()).unwrap();
        assert!(lo < -1.0 && hi > 3.0, "[{lo}, {hi}]");
    }
}
