//! The `mqi` command-line front end.
//!
//! Every command writes a CSV table, prefixed by `#` metadata lines, to
//! `--out` or standard output. Values come from flags, then from an optional
//! `key = value` config file, then from per-command defaults.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::JointOperator;
use crate::dynamics::{numeric_amplitudes, simulate_default, WavePacket};
use crate::error::{Error, Result};
use crate::gates::{ideal_bell_state, local_swap_equivalence, remote_entanglement, scattering_operator};
use crate::metrics::{sweep_bandwidth, sweep_beta, MetricsRow, SpectralAverage};
use crate::params::{Detuning, SystemParams};
use crate::scattering::{amplitudes, ScatteringAmplitudes};
use crate::spectrum::{GaussianSpectrum, DEFAULT_POINTS, DEFAULT_SPAN};

const MAX_ROWS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// |T| and |R| versus detuning
    Amplitudes,
    /// Wave-packet simulation against the stationary amplitudes
    Dynamics,
    /// Gate and memory metrics versus β
    Gates,
    /// Gate and memory metrics versus pulse bandwidth
    Bandwidth,
    /// Scattering matrix dump with gate-identity defects
    Matrix,
    /// Memory metrics and resonant filter versus β
    Memory,
    /// Two-node entanglement distribution
    Network,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Amplitudes => "amplitudes",
            Command::Dynamics => "dynamics",
            Command::Gates => "gates",
            Command::Bandwidth => "bandwidth",
            Command::Matrix => "matrix",
            Command::Memory => "memory",
            Command::Network => "network",
        }
    }
}

/// Raw command-line values. Numbers stay as text until merged with the
/// config file so both sources share one parser.
#[derive(Debug, Parser)]
#[command(name = "mqi", version, about = "Chiral waveguide-QED network interface simulator")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Directional coupling ratio Γ/γ (node A for `network`)
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// β sweep: `a,b:step` range or comma list
    #[arg(long, allow_hyphen_values = true)]
    pub betas: Option<String>,
    /// Pulse bandwidth σ_ω/γ; packet width σ_k/γ for `dynamics`
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// σ_ω sweep for `bandwidth`: `a,b:step` range or comma list
    #[arg(long, allow_hyphen_values = true)]
    pub sigmas: Option<String>,
    /// Detuning Δ/γ
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Detuning sweep `min,max,step`
    #[arg(long, allow_hyphen_values = true)]
    pub delta_range: Option<String>,
    /// Spectral quadrature nodes (odd, or 1 for a monochromatic photon)
    #[arg(long)]
    pub n_points: Option<String>,
    /// Spectral window half-width in units of σ_ω
    #[arg(long, allow_hyphen_values = true)]
    pub span: Option<String>,
    /// Write the table to this CSV file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `key = value` file of defaults; command-line flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Also write a gnuplot script next to `--out`
    #[arg(long)]
    pub emit_plot: bool,
    /// β of node B for `network` (defaults to --beta)
    #[arg(long, allow_hyphen_values = true)]
    pub beta_b: Option<String>,
    /// Matrix detuning for `matrix`: 0, +gamma_cap or -gamma_cap
    #[arg(long, allow_hyphen_values = true)]
    pub delta_kind: Option<String>,
    /// Set γ = 0 and treat --beta as the coupling Γ
    #[arg(long)]
    pub gamma_zero: bool,
    /// Spectral average for metrics: detuning or pulse
    #[arg(long)]
    pub average: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaKind {
    Resonant,
    PlusCoupling,
    MinusCoupling,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub beta: Option<f64>,
    pub betas: Option<Vec<f64>>,
    pub sigma: Option<f64>,
    pub sigmas: Option<Vec<f64>>,
    pub delta: Option<f64>,
    pub delta_range: Option<Vec<f64>>,
    pub n_points: usize,
    pub span: f64,
    pub out: Option<PathBuf>,
    pub emit_plot: bool,
    pub beta_b: Option<f64>,
    pub delta_kind: DeltaKind,
    pub gamma_zero: bool,
    pub average: SpectralAverage,
}

#[rustfmt::skip]
const CONFIG_KEYS: &[&str] = &[
    "beta", "betas", "sigma", "sigmas", "delta", "delta-range", "n-points", "span", "out", "emit-plot", "beta-b",
    "delta-kind", "gamma-zero", "average",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::invalid(format!("config line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(Error::invalid(format!("config line {}: unknown key `{key}`", lineno + 1)));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::invalid(format!("--{key}: not a number: `{s}`")))?;
    if !v.is_finite() {
        return Err(Error::invalid(format!("--{key}: must be finite")));
    }
    Ok(v)
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::invalid(format!("{key}: expected true or false, got `{other}`"))),
    }
}

/// Evenly spaced values from `lo` to `hi` inclusive, computed by index so
/// that no rounding accumulates.
fn linspace_step(key: &str, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::invalid(format!("--{key}: step must be > 0")));
    }
    if hi < lo {
        return Err(Error::invalid(format!("--{key}: end {hi} is below start {lo}")));
    }
    let count = ((hi - lo) / step * (1.0 + 1e-12)).floor() + 1.0;
    if count > MAX_ROWS as f64 {
        return Err(Error::invalid(format!("--{key}: more than {MAX_ROWS} points")));
    }
    Ok((0..count as usize).map(|k| lo + k as f64 * step).collect())
}

/// `a,b:step` is an inclusive range; anything else is a comma list.
pub fn parse_sweep(key: &str, s: &str) -> Result<Vec<f64>> {
    let values = if let Some((bounds, step)) = s.split_once(':') {
        let (lo, hi) =
            bounds.split_once(',').ok_or_else(|| Error::invalid(format!("--{key}: expected `a,b:step`, got `{s}`")))?;
        linspace_step(key, parse_f64(key, lo)?, parse_f64(key, hi)?, parse_f64(key, step)?)?
    } else {
        s.split(',').map(|v| parse_f64(key, v)).collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() {
        return Err(Error::invalid(format!("--{key}: empty sweep")));
    }
    Ok(values)
}

/// `min,max,step`.
pub fn parse_delta_range(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!("--delta-range: expected `min,max,step`, got `{s}`")));
    }
    let key = "delta-range";
    linspace_step(key, parse_f64(key, parts[0])?, parse_f64(key, parts[1])?, parse_f64(key, parts[2])?)
}

fn parse_delta_kind(s: &str) -> Result<DeltaKind> {
    match s.trim() {
        "0" => Ok(DeltaKind::Resonant),
        "+gamma_cap" | "gamma_cap" => Ok(DeltaKind::PlusCoupling),
        "-gamma_cap" => Ok(DeltaKind::MinusCoupling),
        other => Err(Error::invalid(format!("--delta-kind: expected 0, +gamma_cap or -gamma_cap, got `{other}`"))),
    }
}

fn parse_average(s: &str) -> Result<SpectralAverage> {
    match s.trim() {
        "detuning" => Ok(SpectralAverage::DetuningAverage),
        "pulse" => Ok(SpectralAverage::PulseOverlap),
        other => Err(Error::invalid(format!("--average: expected detuning or pulse, got `{other}`"))),
    }
}

impl RunConfig {
    /// Merges flags over the config file (if any).
    pub fn resolve(cli: Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(path) => parse_config(&fs::read_to_string(path).map_err(|e| at_path(path, e))?)?,
            None => BTreeMap::new(),
        };
        let pick = |flag: Option<String>, key: &str| flag.or_else(|| file.get(key).cloned());
        let num = |flag: Option<String>, key: &str| pick(flag, key).map(|s| parse_f64(key, &s)).transpose();
        let switch = |flag: bool, key: &str| -> Result<bool> {
            if flag {
                return Ok(true);
            }
            file.get(key).map(|s| parse_bool(key, s)).transpose().map(|b| b.unwrap_or(false))
        };

        let n_points = match pick(cli.n_points, "n-points") {
            Some(s) => s.trim().parse().map_err(|_| Error::invalid(format!("--n-points: not an integer: `{s}`")))?,
            None => DEFAULT_POINTS,
        };
        Ok(Self {
            command: cli.command,
            beta: num(cli.beta, "beta")?,
            betas: pick(cli.betas, "betas").map(|s| parse_sweep("betas", &s)).transpose()?,
            sigma: num(cli.sigma, "sigma")?,
            sigmas: pick(cli.sigmas, "sigmas").map(|s| parse_sweep("sigmas", &s)).transpose()?,
            delta: num(cli.delta, "delta")?,
            delta_range: pick(cli.delta_range, "delta-range").map(|s| parse_delta_range(&s)).transpose()?,
            n_points,
            span: num(cli.span, "span")?.unwrap_or(DEFAULT_SPAN),
            out: cli.out.or_else(|| file.get("out").map(PathBuf::from)),
            emit_plot: switch(cli.emit_plot, "emit-plot")?,
            beta_b: num(cli.beta_b, "beta-b")?,
            delta_kind: pick(cli.delta_kind, "delta-kind")
                .map(|s| parse_delta_kind(&s))
                .transpose()?
                .unwrap_or(DeltaKind::Resonant),
            gamma_zero: switch(cli.gamma_zero, "gamma-zero")?,
            average: pick(cli.average, "average").map(|s| parse_average(&s)).transpose()?.unwrap_or_default(),
        })
    }

    fn params(&self, beta: f64) -> Result<SystemParams> {
        if self.gamma_zero {
            SystemParams::lossless(beta)
        } else {
            SystemParams::from_beta(beta)
        }
    }

    /// Spectrum shape from --sigma/--n-points/--span, centered at zero.
    fn shape(&self, sigma: f64) -> Result<GaussianSpectrum> {
        if self.n_points == 1 {
            return Ok(GaussianSpectrum::monochromatic(0.0));
        }
        GaussianSpectrum::new(0.0, sigma)?.with_points(self.n_points)?.with_span(self.span)
    }

    fn betas_or(&self, default: &str) -> Result<Vec<f64>> {
        match (&self.betas, self.beta) {
            (Some(b), _) => Ok(b.clone()),
            (None, Some(b)) => Ok(vec![b]),
            (None, None) => parse_sweep("betas", default),
        }
    }
}

/// `%.9g`: nine significant digits, trailing zeros removed, exponent form
/// outside `1e-4 ≤ |x| < 1e9`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..9).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        trim(&format!("{x:.*}", (8 - exp) as usize))
    }
}

/// CSV text with a `#` metadata header.
struct Table {
    text: String,
}

impl Table {
    fn new(cfg: &RunConfig, meta: &[(&str, String)], columns: &[&str]) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "# mqi {} {}", cfg.command.name(), env!("CARGO_PKG_VERSION"));
        for (k, v) in meta {
            let _ = writeln!(text, "# {k} = {v}");
        }
        text.push_str(&columns.join(","));
        text.push('\n');
        Self { text }
    }

    fn comment(&mut self, k: &str, v: String) {
        let _ = writeln!(self.text, "# {k} = {v}");
    }

    fn row(&mut self, cells: &[f64]) {
        let cells: Vec<String> = cells.iter().map(|&x| fmt_num(x)).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    fn raw_row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }
}

fn at_path(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| at_path(path, e))
}

fn write_output(path: Option<&Path>, text: &str, stdout: &mut dyn std::io::Write) -> Result<()> {
    match path {
        Some(p) => write_file(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn plot_path(out: &Path) -> PathBuf {
    out.with_extension("gp")
}

/// Gnuplot script plotting columns `ys` of `data` against column 1.
fn gnuplot_script(data: &Path, xlabel: &str, ylabel: &str, ys: &[(usize, &str)]) -> String {
    let file = data.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    let _ = writeln!(s, "set xlabel '{xlabel}'");
    let _ = writeln!(s, "set ylabel '{ylabel}'");
    s.push_str("set key best\n");
    let series: Vec<String> = ys
        .iter()
        .enumerate()
        .map(|(i, (col, title))| {
            let src = if i == 0 { format!("'{file}'") } else { "''".into() };
            format!("{src} every ::1 using 1:{col} with lines title '{title}'")
        })
        .collect();
    let _ = writeln!(s, "plot {}", series.join(", \\\n     "));
    s
}

struct Output {
    table: String,
    /// Second table and its path, for `dynamics`.
    extra: Option<(PathBuf, String)>,
    plot: Option<String>,
}

fn need_plot_out(cfg: &RunConfig) -> Result<Option<&Path>> {
    match (cfg.emit_plot, cfg.out.as_deref()) {
        (false, _) => Ok(None),
        (true, Some(p)) => Ok(Some(p)),
        (true, None) => Err(Error::invalid("--emit-plot requires --out")),
    }
}

fn metrics_columns(key: &'static str) -> [&'static str; 7] {
    [key, "f_swap", "eta_swap", "f_ent", "eta_ent", "f_mem", "eta_mem"]
}

fn metrics_cells(r: &MetricsRow) -> [f64; 7] {
    [r.key, r.f_swap, r.eta_swap, r.f_ent, r.eta_ent, r.f_mem, r.eta_mem]
}

fn average_name(a: SpectralAverage) -> String {
    match a {
        SpectralAverage::DetuningAverage => "detuning".into(),
        SpectralAverage::PulseOverlap => "pulse".into(),
    }
}

fn metrics_plot(out: &Path, xlabel: &str) -> String {
    gnuplot_script(
        out,
        xlabel,
        "average fidelity / efficiency",
        &[(2, "F swap"), (3, "eta swap"), (4, "F ent"), (5, "eta ent"), (6, "F mem"), (7, "eta mem")],
    )
}

fn cmd_amplitudes(cfg: &RunConfig) -> Result<Output> {
    let beta = cfg.beta.unwrap_or(10.0);
    let p = cfg.params(beta)?;
    let deltas = match (&cfg.delta_range, cfg.delta) {
        (Some(r), _) => r.clone(),
        (None, Some(d)) => vec![d],
        (None, None) => parse_delta_range("-40,40,0.1")?,
    };
    let rows: Vec<ScatteringAmplitudes> =
        deltas.par_iter().map(|&d| Detuning::new(d).map(|d| amplitudes(&p, d))).collect::<Result<_>>()?;
    let mut t = Table::new(
        cfg,
        &[("beta", fmt_num(beta)), ("gamma", fmt_num(p.gamma()))],
        &["delta_over_gamma", "abs_T", "abs_R", "re_T", "im_T", "re_R", "im_R", "loss"],
    );
    for (d, a) in deltas.iter().zip(&rows) {
        t.row(&[*d, a.t.norm(), a.r.norm(), a.t.re, a.t.im, a.r.re, a.r.im, a.loss()]);
    }
    let plot =
        need_plot_out(cfg)?.map(|out| gnuplot_script(out, "detuning / gamma", "amplitude", &[(2, "|T|"), (3, "|R|")]));
    Ok(Output { table: t.text, extra: None, plot })
}

fn cmd_gates(cfg: &RunConfig) -> Result<Output> {
    let sigma = cfg.sigma.unwrap_or(5.0);
    let betas = cfg.betas_or("10,50:1")?;
    if cfg.gamma_zero {
        return Err(Error::invalid("--gamma-zero is not supported by gates; metrics are indexed by beta"));
    }
    let rows = sweep_beta(&betas, &cfg.shape(sigma)?, cfg.average)?;
    let mut t = Table::new(cfg, &spectrum_meta(cfg, sigma), &metrics_columns("beta"));
    for r in &rows {
        t.row(&metrics_cells(r));
    }
    let plot = need_plot_out(cfg)?.map(|out| metrics_plot(out, "Gamma / gamma"));
    Ok(Output { table: t.text, extra: None, plot })
}

fn spectrum_meta(cfg: &RunConfig, sigma: f64) -> Vec<(&'static str, String)> {
    vec![
        ("sigma", fmt_num(sigma)),
        ("n_points", cfg.n_points.to_string()),
        ("span", fmt_num(cfg.span)),
        ("average", average_name(cfg.average)),
    ]
}

fn cmd_bandwidth(cfg: &RunConfig) -> Result<Output> {
    let beta = cfg.beta.unwrap_or(50.0);
    let sigmas = match (&cfg.sigmas, cfg.sigma) {
        (Some(s), _) => s.clone(),
        (None, Some(s)) => vec![s],
        (None, None) => parse_sweep("sigmas", "1,30:1")?,
    };
    if cfg.gamma_zero {
        return Err(Error::invalid("--gamma-zero is not supported by bandwidth"));
    }
    let shape = cfg.shape(sigmas[0])?;
    let rows = sweep_bandwidth(&sigmas, beta, &shape, cfg.average)?;
    let mut t = Table::new(
        cfg,
        &[
            ("beta", fmt_num(beta)),
            ("n_points", cfg.n_points.to_string()),
            ("span", fmt_num(cfg.span)),
            ("average", average_name(cfg.average)),
        ],
        &metrics_columns("sigma_over_gamma"),
    );
    for r in &rows {
        t.row(&metrics_cells(r));
    }
    let plot = need_plot_out(cfg)?.map(|out| metrics_plot(out, "sigma / gamma"));
    Ok(Output { table: t.text, extra: None, plot })
}

fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = out.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    out.with_file_name(format!("{stem}_summary{ext}"))
}

fn cmd_dynamics(cfg: &RunConfig) -> Result<Output> {
    let beta = cfg.beta.unwrap_or(50.0);
    let p = cfg.params(beta)?;
    let delta = cfg.delta.unwrap_or(0.0);
    let cap = p.gamma_f();
    let sigma_k = cfg.sigma.unwrap_or(if cap > 0.0 { 0.1 * cap } else { 0.1 });
    let wp = WavePacket::new(delta, sigma_k)?;
    let res = simulate_default(&p, &wp)?;
    let num = numeric_amplitudes(&res, &wp, &p);
    let exact = amplitudes(&p, Detuning::new(delta)?);

    let meta = [
        ("beta", fmt_num(beta)),
        ("gamma", fmt_num(p.gamma())),
        ("delta", fmt_num(delta)),
        ("sigma_k", fmt_num(sigma_k)),
    ];
    let mut series = Table::new(cfg, &meta, &["t", "p_forward", "p_backward", "p_excited", "p_loss"]);
    for s in &res.samples {
        series.row(&[s.t, s.p_forward, s.p_backward, s.p_excited, s.p_loss]);
    }

    let mut summary = Table::new(
        cfg,
        &meta,
        &["abs_T_numeric", "abs_R_numeric", "abs_T_analytic", "abs_R_analytic", "max_abs_error"],
    );
    let err = (num.abs_t - exact.t.norm()).abs().max((num.abs_r - exact.r.norm()).abs());
    summary.row(&[num.abs_t, num.abs_r, exact.t.norm(), exact.r.norm(), err]);
    summary.comment("p_transmit", fmt_num(res.p_transmit));
    summary.comment("p_reflect", fmt_num(res.p_reflect));
    summary.comment("p_loss", fmt_num(res.p_loss));
    summary.comment("residual_excitation", fmt_num(res.residual_excitation));
    summary.comment("narrowband", num.narrowband.to_string());

    // without --out only the summary is printed
    match cfg.out.as_deref() {
        Some(out) => {
            let plot = cfg.emit_plot.then(|| {
                gnuplot_script(
                    out,
                    "t gamma",
                    "probability",
                    &[(2, "forward"), (3, "backward"), (4, "excited"), (5, "loss")],
                )
            });
            Ok(Output { table: series.text, extra: Some((summary_path(out), summary.text)), plot })
        }
        None => {
            need_plot_out(cfg)?;
            Ok(Output { table: summary.text, extra: None, plot: None })
        }
    }
}

fn cmd_matrix(cfg: &RunConfig) -> Result<Output> {
    if cfg.emit_plot {
        return Err(Error::invalid("--emit-plot is not available for matrix"));
    }
    let beta = cfg.beta.unwrap_or(50.0);
    let p = cfg.params(beta)?;
    let cap = p.coupling()?;
    let (delta, label) = match cfg.delta_kind {
        DeltaKind::Resonant => (0.0, "0"),
        DeltaKind::PlusCoupling => (cap, "+gamma_cap"),
        DeltaKind::MinusCoupling => (-cap, "-gamma_cap"),
    };
    let s = scattering_operator(&amplitudes(&p, Detuning::new(delta)?));
    let local = local_swap_equivalence(&s);
    let resonant_ideal = scattering_operator(&ScatteringAmplitudes::ideal_reflection());
    let (square_target, local_target) = match cfg.delta_kind {
        DeltaKind::Resonant => (JointOperator::identity(), JointOperator::swap()),
        DeltaKind::PlusCoupling => (resonant_ideal, JointOperator::sqrt_swap().adjoint()),
        DeltaKind::MinusCoupling => (resonant_ideal, JointOperator::sqrt_swap()),
    };

    let mut t = Table::new(
        cfg,
        &[
            ("beta", fmt_num(beta)),
            ("gamma", fmt_num(p.gamma())),
            ("delta_kind", label.into()),
            ("delta", fmt_num(delta)),
        ],
        &["quantity", "row", "col", "re", "im"],
    );
    for (name, op) in [("S", &s), ("local", &local)] {
        for r in 0..4 {
            for c in 0..4 {
                let z: Complex64 = op.entry(r, c);
                t.raw_row(&[name.into(), r.to_string(), c.to_string(), fmt_num(z.re), fmt_num(z.im)]);
            }
        }
    }
    for (name, v) in [
        ("unitarity_defect", s.unitarity_defect()),
        ("square_defect", (s * s).max_deviation(&square_target)),
        ("local_defect", local.max_deviation(&local_target)),
    ] {
        t.raw_row(&[name.into(), String::new(), String::new(), fmt_num(v), "0".into()]);
    }
    Ok(Output { table: t.text, extra: None, plot: None })
}

fn cmd_memory(cfg: &RunConfig) -> Result<Output> {
    let sigma = cfg.sigma.unwrap_or(5.0);
    let betas = cfg.betas_or("10,50:1")?;
    if cfg.gamma_zero {
        return Err(Error::invalid("--gamma-zero is not supported by memory"));
    }
    let rows = sweep_beta(&betas, &cfg.shape(sigma)?, cfg.average)?;
    let mut t = Table::new(
        cfg,
        &spectrum_meta(cfg, sigma),
        &["beta", "sigma_over_gamma", "f_mem", "eta_mem", "re_R2", "im_R2", "re_T", "im_T"],
    );
    for r in &rows {
        let a = amplitudes(&SystemParams::from_beta(r.key)?, Detuning::new(0.0)?);
        let r2 = a.r * a.r;
        t.row(&[r.key, sigma, r.f_mem, r.eta_mem, r2.re, r2.im, a.t.re, a.t.im]);
    }
    let plot =
        need_plot_out(cfg)?.map(|out| gnuplot_script(out, "Gamma / gamma", "memory", &[(3, "F mem"), (4, "eta mem")]));
    Ok(Output { table: t.text, extra: None, plot })
}

fn cmd_network(cfg: &RunConfig) -> Result<Output> {
    if cfg.emit_plot {
        return Err(Error::invalid("--emit-plot is not available for network"));
    }
    let beta_a = cfg.beta.unwrap_or(50.0);
    let beta_b = cfg.beta_b.unwrap_or(beta_a);
    let sigma = cfg.sigma.unwrap_or(5.0);
    let (pa, pb) = (cfg.params(beta_a)?, cfg.params(beta_b)?);
    let spec = cfg.shape(sigma)?.with_center(pa.coupling()?)?;
    let state = remote_entanglement(&pa, &pb, &spec)?;
    let bell = ideal_bell_state();
    let shown_sigma = if spec.is_monochromatic() { 0.0 } else { sigma };
    let mut t = Table::new(
        cfg,
        &[("gamma", fmt_num(pa.gamma())), ("n_points", cfg.n_points.to_string()), ("span", fmt_num(cfg.span))],
        &["beta_A", "beta_B", "sigma_over_gamma", "concurrence", "bell_fidelity", "success_prob"],
    );
    t.row(&[beta_a, beta_b, shown_sigma, state.concurrence(), state.fidelity_with(&bell), state.success_prob]);
    Ok(Output { table: t.text, extra: None, plot: None })
}

/// Runs one resolved configuration, writing to `--out` or `stdout`.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn std::io::Write) -> Result<()> {
    let output = match cfg.command {
        Command::Amplitudes => cmd_amplitudes(cfg),
        Command::Dynamics => cmd_dynamics(cfg),
        Command::Gates => cmd_gates(cfg),
        Command::Bandwidth => cmd_bandwidth(cfg),
        Command::Matrix => cmd_matrix(cfg),
        Command::Memory => cmd_memory(cfg),
        Command::Network => cmd_network(cfg),
    }?;
    write_output(cfg.out.as_deref(), &output.table, stdout)?;
    if let Some((path, text)) = &output.extra {
        write_file(path, text)?;
    }
    if let (Some(script), Some(out)) = (&output.plot, cfg.out.as_deref()) {
        write_file(&plot_path(out), script)?;
    }
    Ok(())
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            eprintln!("error: kind=invalid-argument message={first}");
            return 2;
        }
    };
    let result = RunConfig::resolve(cli).and_then(|cfg| {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        execute(&cfg, &mut lock)?;
        lock.flush()?;
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error: kind={} message={msg}", e.kind());
            e.exit_code()
        }
    }
}
