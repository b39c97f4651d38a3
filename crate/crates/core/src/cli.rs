//! Command-line front end. [`run_cli`] does all the work and returns the exit
//! code with the text destined for stdout and stderr, so the binary is a thin
//! shell and tests can drive it in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dynamics::{self, Evolution, Measure, OperatorMatrix, ResponseFit};
use crate::entropy::{self, EntanglementReport};
use crate::error::{Error, Result};
use crate::fock::{self, FockOp, FockSpace, QuantumState, StateFile, Statistics, C64};
use crate::linalg;
use crate::measures::{self, WoottersReport};
use crate::omar::{self, OmarReport};
use crate::overlap::{self, BellKind, BellOptions, CurvePoint, Orthogonalization};
use crate::teleport::{self, BranchAnalysis, Mode, SweepPoint, TeleportConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Structured,
    #[value(name = "csv-series", alias = "csv")]
    CsvSeries,
}

#[derive(Debug, Parser)]
#[command(name = "fockent", version, about = "Entanglement of indistinguishable particles in the occupation basis")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load a state file and describe it.
    StateInfo(StateArgs),
    /// Every applicable entanglement measure of a state.
    Measure(MeasureArgs),
    /// Order at which a measure responds to a small transformation.
    Perturb(PerturbArgs),
    /// η against orbital overlap for one Bell state.
    BellCurve(BellArgs),
    /// The two-pair beam-splitter experiment.
    Omar(OmarArgs),
    /// Two-qubit teleportation through the molecular orbital.
    Teleport(TeleportArgs),
}

#[derive(Debug, Args)]
struct StateArgs {
    /// State file (JSON).
    #[arg(long)]
    state: PathBuf,
}

#[derive(Debug, Args)]
struct MeasureArgs {
    #[arg(long)]
    state: PathBuf,
    /// Sites whose entropy is reported; all sites by default.
    #[arg(long = "site")]
    sites: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Generator {
    Hubbard,
    Hopping,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MeasureName {
    SiteEntropy,
    Eta,
    ReducedMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EvolutionArg {
    Exact,
    FirstOrder,
}

#[derive(Debug, Args)]
struct PerturbArgs {
    /// State file; the molecular-orbital state by default.
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, value_enum)]
    generator: Generator,
    #[arg(long, value_enum)]
    measure: MeasureName,
    /// U or t.
    #[arg(long, default_value_t = 1.0)]
    strength: f64,
    /// Site of the on-site generator.
    #[arg(long, default_value = "A")]
    generator_site: String,
    /// Site whose reduction is measured.
    #[arg(long, default_value = "B")]
    site: String,
    /// ε grid: `start:end:count` or a comma-separated list.
    #[arg(long, value_parser = parse_grid, default_value = "0.01,0.001,0.0001")]
    eps: Grid,
    #[arg(long, value_enum, default_value = "exact")]
    evolution: EvolutionArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StatisticsArg {
    Fermion,
    Boson,
}

impl From<StatisticsArg> for Statistics {
    fn from(s: StatisticsArg) -> Self {
        match s {
            StatisticsArg::Fermion => Statistics::Fermion,
            StatisticsArg::Boson => Statistics::Boson,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Symmetric,
    Sequential,
}

#[derive(Debug, Args)]
struct BellArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: BellKind,
    /// Overlap grid: `start:end:count` or a comma-separated list.
    #[arg(long, value_parser = parse_grid, default_value = "0:0.95:20")]
    grid: Grid,
    #[arg(long, value_enum, default_value = "fermion")]
    statistics: StatisticsArg,
    #[arg(long, value_enum, default_value = "symmetric")]
    scheme: SchemeArg,
    /// Prenormalization norm below which a state counts as destroyed.
    #[arg(long, value_parser = parse_positive, default_value_t = overlap::DEFAULT_DESTROYED_THRESHOLD)]
    destroyed_threshold: f64,
}

#[derive(Debug, Args)]
struct OmarArgs {
    /// Arm phase of both beam splitters.
    #[arg(long, default_value_t = 0.0)]
    phase: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Ideal,
    Coherent,
}

#[derive(Debug, Args)]
struct TeleportArgs {
    /// Four amplitudes for ↑↑, ↑↓, ↓↑, ↓↓, e.g. `0.5,0.5i,-0.5,0.5`.
    #[arg(long, value_parser = parse_source, default_value = "0.5,0.5,0.5,0.5")]
    source: [C64; 4],
    #[arg(long, value_enum, default_value = "ideal")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "fermion")]
    statistics: StatisticsArg,
    /// Mean sink occupations |α|² for the coherent mode.
    #[arg(long = "alpha-sq", value_parser = parse_grid, default_value = "1,4,25,100")]
    alpha_sq: Grid,
    /// Largest accepted Poisson tail beyond the sink cutoff.
    #[arg(long, value_parser = parse_positive, default_value_t = teleport::DEFAULT_TAIL_TOLERANCE)]
    tail_tolerance: f64,
}

#[derive(Clone, Debug, PartialEq)]
struct Grid(Vec<f64>);

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not a positive number"))
    }
}

/// `start:end:count` (inclusive, evenly spaced) or `a,b,c`; must be monotone.
fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    let values: Vec<f64> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid {s:?} is not start:end:count"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
        let end: f64 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
        let count: usize = parts[2].trim().parse().map_err(|e| format!("{e}"))?;
        match count {
            0 => return Err("grid count must be positive".into()),
            1 => vec![start],
            n => (0..n).map(|k| start + (end - start) * k as f64 / (n - 1) as f64).collect(),
        }
    } else {
        s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"))).collect::<std::result::Result<_, _>>()?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(format!("grid {s:?} is empty or not finite"));
    }
    let up = values.windows(2).all(|w| w[1] > w[0]);
    let down = values.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return Err(format!("grid {s:?} is not sorted"));
    }
    Ok(Grid(values))
}

fn parse_kind(s: &str) -> std::result::Result<BellKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_source(s: &str) -> std::result::Result<[C64; 4], String> {
    let parts: Vec<C64> = s
        .split(',')
        .map(|x| x.trim().parse::<C64>().map_err(|_| format!("{x:?} is not a complex number")))
        .collect::<std::result::Result<_, _>>()?;
    <[C64; 4]>::try_from(parts).map_err(|p| format!("expected four amplitudes, got {}", p.len()))
}

/// Tolerances in force, embedded in every report.
#[derive(Clone, Debug, Serialize)]
pub struct Tolerances {
    pub prune: f64,
    pub norm: f64,
    pub hermitian: f64,
    pub eigenvalue_clamp: f64,
    pub trace: f64,
    pub block: f64,
    pub symmetry: f64,
    pub rank: f64,
    pub invariance_floor: f64,
    pub slope: f64,
    pub destroyed_threshold: f64,
    pub channel_tie: f64,
    pub tail: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            prune: fock::PRUNE_TOLERANCE,
            norm: fock::NORM_TOLERANCE,
            hermitian: linalg::HERMITIAN_TOLERANCE,
            eigenvalue_clamp: linalg::EIGEN_CLAMP,
            trace: entropy::TRACE_TOLERANCE,
            block: entropy::BLOCK_TOLERANCE,
            symmetry: measures::SYMMETRY_TOLERANCE,
            rank: measures::RANK_TOLERANCE,
            invariance_floor: dynamics::INVARIANCE_FLOOR,
            slope: dynamics::SLOPE_TOLERANCE,
            destroyed_threshold: overlap::DEFAULT_DESTROYED_THRESHOLD,
            channel_tie: omar::CHANNEL_TIE_TOLERANCE,
            tail: teleport::DEFAULT_TAIL_TOLERANCE,
        }
    }
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parse `args` (including the program name) and run the subcommand.
pub fn run_cli<I, T>(args: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    CliOutcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => CliOutcome { code: EXIT_USAGE, stdout: String::new(), stderr: text },
            };
        }
    };
    match dispatch(&cli) {
        Ok(stdout) => CliOutcome { code: EXIT_OK, stdout, stderr: String::new() },
        Err(e) => CliOutcome { code: EXIT_DOMAIN, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn dispatch(cli: &Cli) -> Result<String> {
    let f = cli.format;
    match &cli.command {
        Command::StateInfo(a) => state_info(a, f),
        Command::Measure(a) => measure(a, f),
        Command::Perturb(a) => perturb(a, f),
        Command::BellCurve(a) => bell_curve(a, f),
        Command::Omar(a) => omar_cmd(a, f),
        Command::Teleport(a) => teleport_cmd(a, f),
    }
}

fn load_state(path: &PathBuf) -> Result<(QuantumState, f64)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::StateFile(format!("{}: {e}", path.display())))?;
    StateFile::from_json(&text)?.to_state()
}

fn structured<T: Serialize>(command: &str, report: &T) -> String {
    #[derive(Serialize)]
    struct Envelope<'a, T> {
        command: &'a str,
        tolerances: Tolerances,
        report: &'a T,
    }
    let mut s = serde_json::to_string_pretty(&Envelope { command, tolerances: Tolerances::default(), report })
        .expect("reports serialize");
    s.push('\n');
    s
}

fn csv_key_values(rows: &[(String, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

fn tolerance_line() -> String {
    let t = Tolerances::default();
    format!(
        "tolerances: norm {:e}, hermitian {:e}, clamp {:e}, rank {:e}, invariance {:e}, destroyed {:e}, tail {:e}\n",
        t.norm, t.hermitian, t.eigenvalue_clamp, t.rank, t.invariance_floor, t.destroyed_threshold, t.tail
    )
}

fn complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{:.4}", z.re)
    } else {
        format!("{:.4}{:+.4}i", z.re, z.im)
    }
}

#[derive(Serialize)]
struct StateTermReport {
    pattern: String,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct StateInfoReport {
    statistics: Statistics,
    modes: Vec<String>,
    nmax: Option<u32>,
    original_norm: f64,
    particle_numbers: Vec<u32>,
    terms: Vec<StateTermReport>,
}

fn state_info(a: &StateArgs, f: Format) -> Result<String> {
    let (state, norm) = load_state(&a.state)?;
    let space = state.space();
    let report = StateInfoReport {
        statistics: space.statistics(),
        modes: space.modes().iter().map(|m| m.to_string()).collect(),
        nmax: match space.statistics() {
            Statistics::Boson => space.caps().iter().copied().max(),
            Statistics::Fermion => None,
        },
        original_norm: norm,
        particle_numbers: state.particle_numbers(),
        terms: state.iter().map(|(p, z)| StateTermReport { pattern: p.to_string(), re: z.re, im: z.im }).collect(),
    };
    Ok(match f {
        Format::Structured => structured("state-info", &report),
        Format::CsvSeries => {
            let mut out = String::from("pattern,re,im\n");
            for t in &report.terms {
                let _ = writeln!(out, "{},{},{}", t.pattern, t.re, t.im);
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(out, "statistics: {}", report.statistics);
            let _ = writeln!(out, "modes: {}", report.modes.join(" "));
            if let Some(n) = report.nmax {
                let _ = writeln!(out, "nmax: {n}");
            }
            let _ = writeln!(out, "norm in file: {:.4}", report.original_norm);
            let _ = writeln!(out, "particle numbers: {:?}", report.particle_numbers);
            let _ = writeln!(out, "terms (normalized):");
            for (p, z) in state.iter() {
                let _ = writeln!(out, "  |{p}⟩  {}", complex(*z));
            }
            out.push_str(&tolerance_line());
            out
        }
    })
}

#[derive(Serialize)]
struct SiteReport {
    site: String,
    report: EntanglementReport,
}

#[derive(Serialize)]
struct MeasureReport {
    statistics: Statistics,
    site_entropy: Vec<SiteReport>,
    eta: Option<f64>,
    eta_dual: Option<f64>,
    slater_rank: Option<usize>,
    slater_coefficients: Option<Vec<f64>>,
    wootters: Option<WoottersReport>,
}

/// Amplitudes `(a, b, c, d)` if the state is a two-site state with one
/// particle per site.
fn wootters_amplitudes(state: &QuantumState) -> Option<[C64; 4]> {
    let space = state.space();
    if space.len() != 4 || *space.modes() != fock::two_site_modes()[..] {
        return None;
    }
    let patterns = [[1, 0, 1, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 0, 1]];
    let mut amps = [C64::new(0.0, 0.0); 4];
    let mut captured = 0.0;
    for (k, p) in patterns.iter().enumerate() {
        amps[k] = state.amplitude(&fock::OccupationPattern::new(p.to_vec()));
        captured += amps[k].norm_sqr();
    }
    ((captured - 1.0).abs() <= fock::NORM_TOLERANCE).then_some(amps)
}

fn measure(a: &MeasureArgs, f: Format) -> Result<String> {
    let (state, _) = load_state(&a.state)?;
    let space = state.space().clone();
    let sites: Vec<String> = if a.sites.is_empty() {
        let mut s: Vec<String> = space.modes().iter().map(|m| m.site.clone()).collect();
        s.dedup();
        s
    } else {
        a.sites.clone()
    };
    let site_entropy = sites
        .iter()
        .map(|s| Ok(SiteReport { site: s.clone(), report: measures::site_entropy(&state, s)? }))
        .collect::<Result<Vec<_>>>()?;
    let w = if space.statistics() == Statistics::Fermion { measures::w_from_state(&state).ok() } else { None };
    let (eta, eta_dual, rank, coeffs) = match &w {
        Some(w) => {
            let sd = measures::slater_decompose(w)?;
            (
                Some(measures::schliemann_eta(w)?),
                Some(measures::schliemann_eta_dual(w)?),
                Some(sd.rank),
                Some(sd.state_coefficients()),
            )
        }
        None => (None, None, None, None),
    };
    let wootters = match wootters_amplitudes(&state) {
        Some([a, b, c, d]) => Some(measures::wootters_report(a, b, c, d)?),
        None => None,
    };
    let report = MeasureReport {
        statistics: space.statistics(),
        site_entropy,
        eta,
        eta_dual,
        slater_rank: rank,
        slater_coefficients: coeffs,
        wootters,
    };
    Ok(match f {
        Format::Structured => structured("measure", &report),
        Format::CsvSeries => {
            let mut rows: Vec<(String, String)> = report
                .site_entropy
                .iter()
                .map(|s| (format!("site_entropy_{}", s.site), s.report.total_entropy.to_string()))
                .collect();
            if let (Some(e), Some(r)) = (report.eta, report.slater_rank) {
                rows.push(("eta".into(), e.to_string()));
                rows.push(("slater_rank".into(), r.to_string()));
            }
            if let Some(w) = &report.wootters {
                rows.push(("tangle".into(), w.tangle.to_string()));
                rows.push(("wootters_entanglement".into(), w.entanglement.to_string()));
            }
            csv_key_values(&rows)
        }
        Format::Human => {
            let mut out = String::new();
            for s in &report.site_entropy {
                let _ = writeln!(out, "site entropy {}: {:.4}", s.site, s.report.total_entropy);
                write_sectors(&mut out, &s.report);
            }
            match (report.eta, report.slater_rank) {
                (Some(e), Some(r)) => {
                    let _ = writeln!(out, "eta: {e:.4}");
                    let _ = writeln!(out, "slater rank: {r}");
                }
                _ => out.push_str("eta: undefined for this state\n"),
            }
            if let Some(w) = &report.wootters {
                let _ = writeln!(out, "tangle: {:.4}  entanglement: {:.4}", w.tangle, w.entanglement);
            }
            out.push_str(&tolerance_line());
            out
        }
    })
}

fn write_sectors(out: &mut String, r: &EntanglementReport) {
    for s in r.occupied_sectors() {
        let eig: Vec<String> = s.eigenvalues.iter().map(|e| format!("{e:.4}")).collect();
        let _ = writeln!(out, "  sector {:<5} eigenvalues [{}]  contributes {:.4}", s.sector, eig.join(", "), s.entropy);
    }
    let _ = writeln!(out, "  off-block norm {:.4}", r.off_block_norm);
}

#[derive(Serialize)]
struct PerturbReport {
    generator: String,
    strength: f64,
    measure: String,
    evolution: Evolution,
    fit: ResponseFit,
}

fn molecular_state() -> QuantumState {
    let space = FockSpace::two_site(Statistics::Fermion);
    ((FockOp::create(0) + FockOp::create(2)) * (FockOp::create(1) + FockOp::create(3)))
        .build(&space)
        .expect("nonzero state")
}

fn perturb(a: &PerturbArgs, f: Format) -> Result<String> {
    let state = match &a.state {
        Some(p) => load_state(p)?.0,
        None => molecular_state(),
    };
    let space = state.space().clone();
    let op = match a.generator {
        Generator::Hubbard => dynamics::hubbard_onsite(&space, &a.generator_site, a.strength)?,
        Generator::Hopping => dynamics::spinflip_hopping(&space, a.strength)?,
    };
    let h = OperatorMatrix::for_state(&op, &state)?;
    let keep = space.site_modes(&a.site);
    if keep.is_empty() && a.measure != MeasureName::Eta {
        return Err(Error::UnknownMode(a.site.clone()));
    }
    let m = match a.measure {
        MeasureName::SiteEntropy => Measure::SiteEntropy(keep),
        MeasureName::Eta => Measure::SchliemannEta,
        MeasureName::ReducedMatrix => Measure::ReducedMatrixChange(keep),
    };
    let evolution = match a.evolution {
        EvolutionArg::Exact => Evolution::Exact,
        EvolutionArg::FirstOrder => Evolution::FirstOrder,
    };
    let fit = dynamics::response_order(&m, &h, &state, &a.eps.0, evolution)?;
    let report = PerturbReport {
        generator: format!("{:?}", a.generator).to_lowercase(),
        strength: a.strength,
        measure: m.to_string(),
        evolution,
        fit,
    };
    Ok(match f {
        Format::Structured => structured("perturb", &report),
        Format::CsvSeries => {
            let mut out = String::from("epsilon,value,change\n");
            for p in &report.fit.points {
                let _ = writeln!(out, "{},{},{}", p.epsilon, p.value, p.change);
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(out, "generator {} ({}), measure {}, {:?} evolution", report.generator, report.strength, report.measure, evolution);
            let _ = writeln!(out, "{:>12} {:>14} {:>14}", "epsilon", "value", "change");
            for p in &report.fit.points {
                let _ = writeln!(out, "{:>12.4e} {:>14.4} {:>14.4e}", p.epsilon, p.value, p.change);
            }
            let _ = writeln!(out, "order: {}", report.fit.order);
            let _ = writeln!(out, "coefficient: {:.4}", report.fit.coefficient);
            if let Some(s) = report.fit.slope {
                let _ = writeln!(out, "log-slope: {s:.4}");
            }
            if let Some(d) = &report.fit.diagnostic {
                let _ = writeln!(out, "diagnostic: {d}");
            }
            out.push_str(&tolerance_line());
            out
        }
    })
}

#[derive(Serialize)]
struct CurveReport {
    kind: BellKind,
    statistics: Statistics,
    scheme: Orthogonalization,
    destroyed_threshold: f64,
    points: Vec<CurvePoint>,
}

fn bell_curve(a: &BellArgs, f: Format) -> Result<String> {
    let options = BellOptions {
        statistics: a.statistics.into(),
        scheme: match a.scheme {
            SchemeArg::Symmetric => Orthogonalization::Symmetric,
            SchemeArg::Sequential => Orthogonalization::Sequential,
        },
        destroyed_threshold: a.destroyed_threshold,
    };
    let points = overlap::eta_vs_overlap_curve(a.kind, &a.grid.0, &options)?;
    let report = CurveReport {
        kind: a.kind,
        statistics: options.statistics,
        scheme: options.scheme,
        destroyed_threshold: options.destroyed_threshold,
        points,
    };
    Ok(match f {
        Format::Structured => structured("bell-curve", &report),
        Format::CsvSeries => {
            let mut out = String::from("overlap,eta,prenormalization_norm,destroyed\n");
            for p in &report.points {
                let eta = match (p.destroyed, p.eta) {
                    (false, Some(e)) => e.to_string(),
                    _ => String::new(),
                };
                let _ = writeln!(out, "{},{},{},{}", p.overlap, eta, p.prenormalization_norm, u8::from(p.destroyed));
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            let _ = writeln!(out, "{} ({}, {:?} orthogonalization)", report.kind, report.statistics, report.scheme);
            let _ = writeln!(out, "{:>8} {:>8} {:>10}", "S", "eta", "norm");
            for p in &report.points {
                let eta = match p.eta {
                    Some(e) if !p.destroyed => format!("{e:.4}"),
                    _ => "-".into(),
                };
                let flag = if p.destroyed { "  destroyed" } else { "" };
                let _ = writeln!(out, "{:>8.4} {:>8} {:>10.4}{flag}", p.overlap, eta, p.prenormalization_norm);
            }
            out.push_str(&tolerance_line());
            out
        }
    })
}

fn omar_cmd(a: &OmarArgs, f: Format) -> Result<String> {
    let report: OmarReport = omar::run_experiment(a.phase)?;
    Ok(match f {
        Format::Structured => structured("omar", &report),
        Format::CsvSeries => {
            let mut out = String::from("variant,p,residual\n");
            for fit in &report.channel.fits {
                let _ = writeln!(out, "{},{},{}", fit.variant, fit.p, fit.residual);
            }
            out
        }
        Format::Human => {
            let mut out = String::new();
            for (name, r) in [
                ("side 1, input", &report.side_input),
                ("side 1, output", &report.side_output),
                ("arm 1L, input", &report.arm_input),
                ("arm 1L, output", &report.arm_output),
            ] {
                let _ = writeln!(out, "S({name}) = {:.4}", r.total_entropy);
                write_sectors(&mut out, r);
            }
            let pops: Vec<String> = report.arm_output_populations.iter().map(|p| format!("{p:.4}")).collect();
            let _ = writeln!(out, "arm 1L output populations (00, 01, 10, 11): [{}]", pops.join(", "));
            let _ = writeln!(out, "channel scan:");
            for fit in &report.channel.fits {
                let _ = writeln!(out, "  {:<20} p = {:.4}  residual {:.4e}", fit.variant, fit.p, fit.residual);
            }
            out.push_str(&tolerance_line());
            let b = report.channel.best;
            let _ = writeln!(out, "best channel: {} p = {:.4} (residual {:.4e})", b.variant, b.p, b.residual);
            out
        }
    })
}

#[derive(Serialize)]
#[serde(untagged)]
enum TeleportReport {
    Ideal { mode: &'static str, statistics: Statistics, analysis: BranchAnalysis },
    Coherent { mode: &'static str, statistics: Statistics, sweep: Vec<SweepPoint> },
}

fn teleport_cmd(a: &TeleportArgs, f: Format) -> Result<String> {
    let statistics: Statistics = a.statistics.into();
    let config = TeleportConfig { tail_tolerance: a.tail_tolerance, ..TeleportConfig::default() };
    let report = match a.mode {
        ModeArg::Ideal => TeleportReport::Ideal {
            mode: "ideal",
            statistics,
            analysis: teleport::branch_analysis(&a.source, statistics, Mode::Ideal, &config)?,
        },
        ModeArg::Coherent => {
            if statistics != Statistics::Boson {
                return Err(Error::RequiresBosons("coherent-source teleportation".into()));
            }
            if a.alpha_sq.0.iter().any(|&n| n <= 0.0) {
                return Err(Error::OutOfRange("|α|² values must be positive".into()));
            }
            TeleportReport::Coherent {
                mode: "coherent",
                statistics,
                sweep: teleport::coherent_sweep(&a.source, &a.alpha_sq.0, &config)?,
            }
        }
    };
    let bits = |b: &[bool; 4]| b.iter().map(|&x| if x { '1' } else { '0' }).collect::<String>();
    Ok(match f {
        Format::Structured => structured("teleport", &report),
        Format::CsvSeries => match &report {
            TeleportReport::Ideal { analysis, .. } => {
                let mut out = String::from("bits,probability,fidelity\n");
                for b in &analysis.branches {
                    let _ = writeln!(out, "{},{},{}", bits(&b.bits), b.probability, b.fidelity);
                }
                out
            }
            TeleportReport::Coherent { sweep, .. } => {
                let mut out = String::from("mean_occupation,cutoff,average_fidelity\n");
                for p in sweep {
                    let _ = writeln!(out, "{},{},{}", p.mean_occupation, p.cutoff, p.average_fidelity);
                }
                out
            }
        },
        Format::Human => {
            let mut out = String::new();
            match &report {
                TeleportReport::Ideal { analysis, statistics, .. } => {
                    let _ = writeln!(out, "ideal mode, {statistics} channel");
                    for b in &analysis.branches {
                        let _ = writeln!(out, "  bits {}  probability {:.4}  fidelity {:.4}", bits(&b.bits), b.probability, b.fidelity);
                    }
                    let _ = writeln!(out, "average fidelity: {:.4}", analysis.average_fidelity);
                }
                TeleportReport::Coherent { sweep, .. } => {
                    let _ = writeln!(out, "coherent mode, boson channel");
                    for p in sweep {
                        let _ = writeln!(
                            out,
                            "  |alpha|^2 = {:<8} cutoff {:<4} average fidelity {:.4}",
                            p.mean_occupation, p.cutoff, p.average_fidelity
                        );
                    }
                }
            }
            out.push_str(&tolerance_line());
            out
        }
    })
}
