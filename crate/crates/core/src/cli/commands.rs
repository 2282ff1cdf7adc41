//! The five subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::analysis::{
    certify, contraction_factor, empirical_lambda_bounds, lyapunov_decay_check, permanence_bounds, upper_bounds,
    BoundsSource, LambdaRange, StabilityCertificate, Verdict,
};
use crate::cli::config::RunConfig;
use crate::cli::csv_io::{format_real, lyapunov_csv, read_columns, trajectory_csv, write_atomic};
use crate::cli::{svg, CliError};
use crate::model::{State, COMPARTMENTS};
use crate::solver::{simulate, Trajectory};
use crate::timescale::TimeScale;

/// Relative difference above which a recomputed value is flagged against
/// its published counterpart.
pub const REFERENCE_RTOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Simulate,
    Bounds,
    Certify,
    Compare,
    Plot,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options {
    pub empirical: bool,
    pub second_initial: Option<[f64; COMPARTMENTS]>,
    /// Decay rate forced on `compare` instead of the certified one.
    pub psi: Option<f64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Rejected,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Rejected => 1,
        }
    }
}

pub fn run(cmd: Command, cfg: &RunConfig, opts: &Options, stdout: &mut dyn Write) -> Result<Status, CliError> {
    match cmd {
        Command::Simulate => cmd_simulate(cfg, opts, stdout),
        Command::Bounds => cmd_bounds(cfg, opts, stdout),
        Command::Certify => cmd_certify(cfg, opts, stdout),
        Command::Compare => cmd_compare(cfg, opts, stdout),
        Command::Plot => cmd_plot(cfg, opts),
    }
}

fn scale(cfg: &RunConfig) -> Result<TimeScale, CliError> {
    let ts = cfg.timescale.as_ref().ok_or_else(|| CliError::Usage("missing section [timescale]".into()))?;
    Ok(ts.build()?)
}

fn initial(cfg: &RunConfig) -> Result<State, CliError> {
    let x = cfg.initial.ok_or_else(|| CliError::Usage("missing section [initial]".into()))?;
    Ok(State::new(x)?)
}

fn primary_run(cfg: &RunConfig) -> Result<Trajectory, CliError> {
    Ok(simulate(&cfg.model, &scale(cfg)?, initial(cfg)?)?)
}

fn emit(text: &str, dest: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match dest {
        Some(path) => write_atomic(path, text),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn lambda_bounds(
    cfg: &RunConfig,
    opts: &Options,
    runs: impl FnOnce() -> Result<Vec<Trajectory>, CliError>,
) -> Result<(LambdaRange, BoundsSource), CliError> {
    if opts.empirical {
        let mut range: Option<LambdaRange> = None;
        for tr in runs()? {
            let r = empirical_lambda_bounds(&tr, cfg.analysis.transient_fraction)?;
            range = Some(range.map_or(r, |acc| acc.merge(r)));
        }
        let range = range.ok_or_else(|| CliError::Usage("no trajectory to estimate lambda bounds from".into()))?;
        return Ok((range, BoundsSource::Empirical));
    }
    match cfg.lambda_bounds() {
        Some((lower, upper)) => Ok((LambdaRange { lower, upper }, BoundsSource::Supplied)),
        None => Err(CliError::Usage("missing lambda bounds: set lambdaL and lambdaU or pass --empirical".into())),
    }
}

fn differs(value: f64, reference: f64) -> bool {
    (value - reference).abs() > REFERENCE_RTOL * reference.abs()
}

/// `name = value` report lines.
struct Report {
    lines: Vec<(String, String)>,
    digits: usize,
}

impl Report {
    fn new(digits: usize) -> Self {
        Report { lines: Vec::new(), digits }
    }

    fn text(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    fn real(&mut self, key: &str, value: f64) {
        let v = format_real(value, self.digits);
        self.lines.push((key.to_string(), v));
    }

    fn reference(&mut self, cfg: &RunConfig, key: &str, value: f64) {
        if let Some(&r) = cfg.reference.get(key) {
            self.real(&format!("paper_{key}"), r);
            self.text(&format!("{key}_discrepancy"), differs(value, r));
        }
    }

    fn render(&self) -> String {
        self.lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

fn cmd_simulate(cfg: &RunConfig, opts: &Options, stdout: &mut dyn Write) -> Result<Status, CliError> {
    let traj = primary_run(cfg)?;
    let text = trajectory_csv(&traj, cfg.output.precision)?;
    emit(&text, opts.out.as_deref().or(cfg.output.csv_path.as_deref()), stdout)?;
    Ok(Status::Success)
}

fn cmd_bounds(cfg: &RunConfig, opts: &Options, stdout: &mut dyn Write) -> Result<Status, CliError> {
    let (range, source) = lambda_bounds(cfg, opts, || Ok(vec![primary_run(cfg)?]))?;
    let pb = permanence_bounds(&cfg.model, range.lower, range.upper, source)?;
    let digits = cfg.output.precision;

    let named: Vec<(String, f64)> = (0..COMPARTMENTS)
        .map(|i| (format!("m{}", i + 1), pb.lower[i]))
        .chain((0..COMPARTMENTS).map(|i| (format!("M{}", i + 1), pb.upper[i])))
        .chain([("m".to_string(), pb.m), ("M".to_string(), pb.big_m)])
        .collect();

    let mut rep = Report::new(digits);
    rep.text("source", source.as_str());
    rep.real("lambdaL", range.lower);
    rep.real("lambdaU", range.upper);
    for (k, v) in &named {
        rep.real(k, *v);
    }
    for (k, v) in &named {
        rep.reference(cfg, k, *v);
    }
    for w in &pb.warnings {
        rep.text("warning", w);
    }
    emit(&rep.render(), None, stdout)?;

    if let Some(path) = opts.out.as_deref() {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Csv(e.to_string());
        w.write_record(["name", "value", "paper", "paper_discrepancy"]).map_err(err)?;
        for (k, v) in &named {
            let (paper, flag) = match cfg.reference.get(k) {
                Some(&r) => (format_real(r, digits), if differs(*v, r) { "1" } else { "0" }.to_string()),
                None => (String::new(), String::new()),
            };
            w.write_record([k.clone(), format_real(*v, digits), paper, flag]).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Csv(e.to_string()))?;
        write_atomic(path, &String::from_utf8_lossy(&bytes))?;
    }
    Ok(Status::Success)
}

/// Without `M_override`, `M` comes from the upper bounds, which exist only
/// when (H1) holds; an (H1) failure is then reported as the rejection reason.
fn h1_rejection(cfg: &RunConfig, range: LambdaRange) -> Option<&'static str> {
    (cfg.analysis.m_override.is_none() && !range.satisfies_h1()).then_some("(H1) 0<lambdaL<=lambdaU fails")
}

fn certificate(cfg: &RunConfig, ts: &TimeScale, range: LambdaRange) -> Result<StabilityCertificate, CliError> {
    let big_m = match cfg.analysis.m_override {
        Some(m) => m,
        None => upper_bounds(&cfg.model, range.lower, range.upper)?.max,
    };
    Ok(certify(&cfg.model, ts, range.lower, range.upper, big_m)?)
}

fn certificate_report(cfg: &RunConfig, cert: &StabilityCertificate, source: BoundsSource) -> Report {
    let mut rep = Report::new(cfg.output.precision);
    for (i, a) in cert.constants.a.iter().enumerate() {
        rep.real(&format!("A{}", i + 1), *a);
    }
    for (i, b) in cert.constants.b.iter().enumerate() {
        rep.real(&format!("B{}", i + 1), *b);
    }
    rep.real("A", cert.a_min());
    rep.real("B", cert.b_max());
    rep.text("lambda_source", source.as_str());
    rep.real("lambdaL", cert.lambda_lower);
    rep.real("lambdaU", cert.lambda_upper);
    rep.real("M", cert.big_m);
    rep.real("mu_sup", cert.mu_sup);
    rep.real("psi", cert.psi);
    let one_minus = contraction_factor(cert.psi, cert.mu_sup);
    rep.real("one_minus_psi_mu", one_minus);
    rep.text("h1", cert.h1_holds);
    rep.text("h2", cert.h2_holds);
    rep.text("regressive", cert.regressive_ok);
    rep.text("verdict", &cert.verdict);
    if let Verdict::Rejected(reason) = &cert.verdict {
        rep.text("reason", reason);
    }
    rep.reference(cfg, "A", cert.a_min());
    rep.reference(cfg, "B", cert.b_max());
    rep.reference(cfg, "psi", cert.psi);
    rep.reference(cfg, "one_minus_psi_mu", one_minus);
    rep
}

fn cmd_certify(cfg: &RunConfig, opts: &Options, stdout: &mut dyn Write) -> Result<Status, CliError> {
    let ts = scale(cfg)?;
    let (range, source) = lambda_bounds(cfg, opts, || Ok(vec![primary_run(cfg)?]))?;
    if let Some(reason) = h1_rejection(cfg, range) {
        let mut rep = Report::new(cfg.output.precision);
        rep.text("lambda_source", source.as_str());
        rep.real("lambdaL", range.lower);
        rep.real("lambdaU", range.upper);
        rep.text("h1", false);
        rep.text("verdict", Verdict::Rejected(reason.into()));
        rep.text("reason", reason);
        emit(&rep.render(), None, stdout)?;
        return Ok(Status::Rejected);
    }
    let cert = certificate(cfg, &ts, range)?;
    let text = certificate_report(cfg, &cert, source).render();
    emit(&text, None, stdout)?;
    if let Some(path) = opts.out.as_deref() {
        write_atomic(path, &text)?;
    }
    Ok(if cert.verdict.is_certified() { Status::Success } else { Status::Rejected })
}

fn cmd_compare(cfg: &RunConfig, opts: &Options, stdout: &mut dyn Write) -> Result<Status, CliError> {
    let second =
        opts.second_initial.ok_or_else(|| CliError::Usage("compare needs --second-initial x1,...,x6".into()))?;
    let ts = scale(cfg)?;
    let a = simulate(&cfg.model, &ts, initial(cfg)?)?;
    let b = simulate(&cfg.model, &ts, State::new(second)?)?;

    let psi = match opts.psi {
        Some(psi) => psi,
        None => {
            let (range, _) = lambda_bounds(cfg, opts, || Ok(vec![a.clone(), b.clone()]))?;
            if let Some(reason) = h1_rejection(cfg, range) {
                eprintln!("certificate rejected: {reason}; pass --psi to check a chosen rate");
                return Ok(Status::Rejected);
            }
            let cert = certificate(cfg, &ts, range)?;
            if let Verdict::Rejected(reason) = &cert.verdict {
                eprintln!("certificate rejected: {reason}; pass --psi to check a chosen rate");
                return Ok(Status::Rejected);
            }
            cert.psi
        }
    };

    let report = lyapunov_decay_check(&a, &b, psi)?;
    emit(&lyapunov_csv(&report, cfg.output.precision)?, opts.out.as_deref(), stdout)?;
    if report.passed() {
        Ok(Status::Success)
    } else {
        eprintln!("{} of {} samples violate the decay bound at psi = {psi}", report.violations(), report.points.len());
        Ok(Status::Rejected)
    }
}

fn cmd_plot(cfg: &RunConfig, opts: &Options) -> Result<Status, CliError> {
    let input = cfg
        .output
        .csv_path
        .as_deref()
        .ok_or_else(|| CliError::Usage("plot needs csv_path in section [output]".into()))?;
    let dest = opts
        .out
        .as_deref()
        .or(cfg.output.svg_path.as_deref())
        .ok_or_else(|| CliError::Usage("plot needs --out or svg_path in section [output]".into()))?;
    let text =
        std::fs::read_to_string(input).map_err(|source| CliError::Io { path: input.display().to_string(), source })?;
    let rows = read_columns(&text, &["t", "x1", "x2", "x3", "x4", "x5", "x6"])?;
    if rows.is_empty() {
        return Err(CliError::Csv(format!("{}: no data rows", input.display())));
    }
    let t: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let series = std::array::from_fn(|i| rows.iter().map(|r| r[i + 1]).collect());
    write_atomic(dest, &svg::render(&t, &series))?;
    Ok(Status::Success)
}
