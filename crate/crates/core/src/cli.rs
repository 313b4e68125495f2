//! `diracwalk` command-line front end.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bench::{run_bench, BenchConfig, Lattice};
use crate::error::{Error, Result};
use crate::fixed_mu::{exclusion_report, fixed_mu_l, relativistic_limit_probe, ExclusionReport, ProbeSummary};
use crate::io;
use crate::lattice::{
    build_fixed_mass_walk, build_variable_mass_walk, evolve, Band, Packet, Representation, SpinorField,
};
use crate::spectral::dispersion;
use crate::symmetry::{apply_frame_change, dsr_boost, PhaseBase, PhaseFunction};
use crate::verify::{run_verify, VerifyConfig, GENERATOR};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Impl {
    Stencil,
    Spectral,
}

impl From<Impl> for Representation {
    fn from(i: Impl) -> Self {
        match i {
            Impl::Stencil => Representation::Stencil,
            Impl::Spectral => Representation::Spectral,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "diracwalk", version, about = "Dirac quantum walks and their frame changes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve a Gaussian wavepacket and write marginals and a snapshot.
    Evolve,
    /// Dump `(k, μ, ω, n)` over the Brillouin zone.
    Dispersion,
    /// Dump cone samples with their region labels.
    Cone,
    /// Apply a nonlinear boost to a list of modes.
    Boost,
    /// Fixed-mass exclusion checks and the relativistic-limit probe.
    #[command(name = "fixedmu-report")]
    FixedmuReport,
    /// Run every invariant suite.
    Verify,
    /// Time stencil and spectral evolution.
    Bench,
}

#[derive(Debug, Default, Clone, clap::Args)]
pub struct Flags {
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long = "lattice-n", global = true)]
    pub lattice_n: Option<usize>,
    #[arg(long = "lattice-ntau", global = true)]
    pub lattice_ntau: Option<usize>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long = "impl", global = true, value_enum)]
    pub implementation: Option<Impl>,
    /// `a0,a1,a2`.
    #[arg(long, global = true, value_delimiter = ',', num_args = 3, allow_hyphen_values = true)]
    pub phase: Option<Vec<f64>>,
    /// JSON file with any of the fields above plus command-specific ones;
    /// flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// Fields accepted in `--config`.
#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mu: Option<f64>,
    pub xi: Option<f64>,
    pub beta: Option<f64>,
    pub lattice_n: Option<usize>,
    pub lattice_ntau: Option<usize>,
    pub steps: Option<usize>,
    pub grid: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    #[serde(rename = "impl")]
    pub implementation: Option<Impl>,
    pub phase: Option<Vec<f64>>,
    /// Constant imaginary part added to the phase.
    pub phase_imag: Option<f64>,
    /// Output dilation of the boost: `"appendixA"` (alias `"reciprocal"`), the
    /// reciprocal dilation, is the only one accepted.
    pub f: Option<String>,
    pub modes_file: Option<PathBuf>,
    pub k0: Option<f64>,
    pub sigma_k: Option<f64>,
    pub x0: Option<f64>,
    pub band: Option<Band>,
    pub mu0: Option<f64>,
    pub sigma_mu: Option<f64>,
    pub samples: Option<usize>,
    pub fault: Option<String>,
    pub mu_list: Option<Vec<f64>>,
    pub beta_step: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| {
            Error::InvalidParameter(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
        })
    }

    /// Overlay command-line flags.
    pub fn merge(mut self, f: &Flags) -> Self {
        macro_rules! take {
            ($($field:ident),*) => { $( if f.$field.is_some() { self.$field = f.$field.clone(); } )* };
        }
        take!(mu, xi, beta, lattice_n, lattice_ntau, steps, grid, seed, tol, out, format, implementation, phase);
        self
    }

    fn positive_tol(&self, default: f64) -> Result<f64> {
        let tol = self.tol.unwrap_or(default);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("field `tol`: must be positive, got {tol}")));
        }
        Ok(tol)
    }

    fn linear_phase(&self) -> Result<PhaseFunction> {
        let imag = self.phase_imag.unwrap_or(0.0);
        match self.phase.as_deref() {
            None if imag == 0.0 => Ok(PhaseFunction::zero()),
            None => Ok(PhaseFunction::from_base(PhaseBase::Linear { a0: 0.0, a1: 0.0, a2: 0.0, imag })),
            Some(&[a0, a1, a2]) => Ok(PhaseFunction::from_base(PhaseBase::Linear { a0, a1, a2, imag })),
            Some(other) => Err(Error::InvalidParameter(format!(
                "field `phase`: expected three numbers a0,a1,a2, got {}",
                other.len()
            ))),
        }
    }
}

/// Where a command writes: `--out` file, or stdout.
fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            Box::new(File::create(p)?)
        }
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

fn write_table<T: Serialize>(rows: &[T], cfg: &RunConfig) -> Result<()> {
    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => io::write_rows(rows, sink(&cfg.out)?),
        Format::Json => write_json(&rows, &cfg.out),
    }
}

fn grid(cfg: &RunConfig, default: usize) -> Result<usize> {
    match cfg.grid.unwrap_or(default) {
        0 => Err(Error::InvalidParameter("field `grid`: must be at least 1".into())),
        g => Ok(g),
    }
}

#[derive(Debug, Serialize)]
struct EvolveSummary {
    mode: String,
    representation: Representation,
    n: usize,
    n_tau: usize,
    steps: usize,
    mu: Option<f64>,
    k0: f64,
    initial_norm: f64,
    final_norm: f64,
    norm_drift: f64,
    initial_peak: usize,
    final_peak: usize,
    /// Periodic displacement of the `|ψ|²` peak, in sites.
    peak_displacement: f64,
    /// `steps · cos μ sin k0 / sin ω(k0)`, fixed mass only.
    predicted_displacement: Option<f64>,
    group_velocity: Option<f64>,
}

fn argmax(v: &[f64]) -> usize {
    v.iter().enumerate().fold((0, f64::MIN), |acc, (i, &x)| if x > acc.1 { (i, x) } else { acc }).0
}

/// Group velocity of the `e^{−iω}` band of the fixed-mass walk.
pub fn group_velocity(k: f64, mu: f64) -> f64 {
    mu.cos() * k.sin() / dispersion(k, mu).sin()
}

fn cmd_evolve(cfg: &RunConfig) -> Result<i32> {
    let n = cfg.lattice_n.unwrap_or(512);
    let steps = cfg.steps.unwrap_or(100);
    let repr: Representation = cfg.implementation.unwrap_or(Impl::Spectral).into();
    let packet = Packet {
        x0: cfg.x0.unwrap_or(n as f64 / 4.0),
        k0: cfg.k0.unwrap_or(std::f64::consts::FRAC_PI_4),
        sigma_k: cfg.sigma_k.unwrap_or(0.1),
        band: cfg.band.unwrap_or(Band::Minus),
    };
    let (op, psi, mu) = match cfg.lattice_ntau {
        None => {
            let mu = cfg.mu.unwrap_or(0.0);
            (build_fixed_mass_walk(mu, n, repr)?, SpinorField::gaussian_packet(mu, n, packet)?, Some(mu))
        }
        Some(nt) => {
            let mu0 = cfg.mu0.or(cfg.mu).unwrap_or(0.3);
            let psi = SpinorField::gaussian_packet_variable(n, nt, packet, mu0, cfg.sigma_mu.unwrap_or(0.1))?;
            (build_variable_mass_walk(n, nt, repr)?, psi, None)
        }
    };
    let out = evolve(&op, &psi, steps)?;
    let (m0, m1) = (psi.position_marginal(), out.position_marginal());
    let (p0, p1) = (argmax(&m0), argmax(&m1));
    let raw = (p1 as f64 - p0 as f64).rem_euclid(n as f64);
    let displacement = if raw > n as f64 / 2.0 { raw - n as f64 } else { raw };
    let velocity = mu.map(|m| group_velocity(packet.k0, m));
    let summary = EvolveSummary {
        mode: if mu.is_some() { "fixed_mass".into() } else { "variable_mass".into() },
        representation: repr,
        n,
        n_tau: op.n_tau(),
        steps,
        mu,
        k0: packet.k0,
        initial_norm: psi.norm(),
        final_norm: out.norm(),
        norm_drift: (out.norm() - psi.norm()).abs(),
        initial_peak: p0,
        final_peak: p1,
        peak_displacement: displacement,
        predicted_displacement: velocity.map(|v| v * steps as f64),
        group_velocity: velocity,
    };
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            #[derive(Serialize)]
            struct MarginalRow {
                x: usize,
                prob: f64,
            }
            let rows: Vec<MarginalRow> = m1.iter().enumerate().map(|(x, &prob)| MarginalRow { x, prob }).collect();
            io::write_rows(&rows, File::create(dir.join("marginal.csv"))?)?;
            io::save_snapshot(&dir.join("snapshot.csv"), &out, steps)?;
            write_json(&summary, &Some(dir.join("summary.json")))?;
        }
        None => write_json(&summary, &None)?,
    }
    let tol = cfg.positive_tol(1e-10)?;
    Ok(if summary.norm_drift < tol { EXIT_OK } else { EXIT_INVARIANT })
}

fn cmd_boost(cfg: &RunConfig) -> Result<i32> {
    match cfg.f.as_deref() {
        None | Some("appendixA") | Some("reciprocal") => {}
        Some(other) => {
            return Err(Error::InvalidParameter(format!("field `f`: only \"appendixA\" is supported, got {other:?}")))
        }
    }
    let xi = cfg.xi.ok_or_else(|| Error::InvalidParameter("field `xi`: required".into()))?;
    let modes_file = cfg
        .modes_file
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("field `modes_file`: required (set it in --config)".into()))?;
    let modes = io::read_modes(File::open(modes_file)?)?;
    let fc = dsr_boost(xi, cfg.linear_phase()?)?;
    let out = apply_frame_change(&fc, &modes)?;
    let rows: Vec<io::TransformedRow> = out.modes.iter().map(Into::into).collect();
    write_table(&rows, cfg)?;
    eprintln!(
        "boost: {} modes transformed, {} truncated, {} with non-unitary phase",
        out.modes.len(),
        out.truncated,
        out.non_unitary
    );
    let tol = cfg.positive_tol(1e-9)?;
    Ok(if out.modes.iter().all(|m| m.residual < tol) { EXIT_OK } else { EXIT_INVARIANT })
}

#[derive(Debug, Serialize)]
struct OrthochronousChecks {
    t2_plus: bool,
    t2_minus: bool,
    l_minus: bool,
    l_plus: bool,
}

#[derive(Debug, Serialize)]
struct FixedMuOutput {
    generator: String,
    mu: f64,
    beta: f64,
    orthochronous_checks: OrthochronousChecks,
    exclusion: ExclusionReport,
    l_matrix: [[f64; 3]; 3],
    deviation_norms: Vec<ProbeSummary>,
    lower_bound: f64,
    bounded_away: bool,
    threshold: f64,
    probe: crate::fixed_mu::ProbeReport,
}

fn cmd_fixedmu(cfg: &RunConfig) -> Result<i32> {
    let mu = cfg.mu.unwrap_or(0.4);
    let beta = cfg.beta.unwrap_or(0.2);
    let mu_list = cfg.mu_list.clone().unwrap_or_else(|| vec![0.1, 0.05, 0.025]);
    let xi = cfg.xi.unwrap_or(0.7);
    let exclusion = exclusion_report(mu, beta)?;
    let l = fixed_mu_l(beta, mu)?;
    let probe = relativistic_limit_probe(&mu_list, cfg.beta_step.unwrap_or(1e-3), grid(cfg, 32)?, &[xi], cfg.tol.unwrap_or(0.01))?;
    let mut l_matrix = [[0.0; 3]; 3];
    for (i, row) in l_matrix.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = l.matrix()[(i, j)];
        }
    }
    let ok = exclusion.certified && probe.bounded_away && probe.contrast.iter().all(|c| c.deviation < 1e-5);
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir)?;
        io::write_rows(&probe.rows, File::create(dir.join("generator.csv"))?)?;
    }
    let report = FixedMuOutput {
        generator: GENERATOR.into(),
        mu,
        beta,
        orthochronous_checks: OrthochronousChecks {
            t2_plus: exclusion.t2_plus.orthochronous,
            t2_minus: exclusion.t2_minus.orthochronous,
            l_minus: exclusion.l_minus.orthochronous,
            l_plus: exclusion.l_plus.orthochronous,
        },
        exclusion,
        l_matrix,
        deviation_norms: probe.summaries.clone(),
        lower_bound: probe.lower_bound,
        bounded_away: probe.bounded_away,
        threshold: probe.threshold,
        probe,
    };
    write_json(&report, &cfg.out.as_ref().map(|d| d.join("report.json")))?;
    Ok(if ok { EXIT_OK } else { EXIT_INVARIANT })
}

fn cmd_verify(cfg: &RunConfig) -> Result<i32> {
    let defaults = VerifyConfig::default();
    let vc = VerifyConfig {
        seed: cfg.seed.unwrap_or(defaults.seed),
        samples: cfg.samples.unwrap_or(defaults.samples),
        fault: cfg.fault.clone(),
    };
    let report = run_verify(&vc)?;
    write_json(&report, &cfg.out)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_INVARIANT })
}

fn cmd_bench(cfg: &RunConfig) -> Result<i32> {
    let mut bc = BenchConfig::default();
    if let Some(s) = cfg.seed {
        bc.seed = s;
    }
    if let Some(s) = cfg.steps {
        bc.steps = s;
    }
    if let Some(m) = cfg.mu {
        bc.mu = m;
    }
    if let Some(n) = cfg.lattice_n {
        bc.lattices = vec![Lattice { n, n_tau: cfg.lattice_ntau }];
    }
    if let Some(i) = cfg.implementation {
        bc.impls = vec![i.into()];
    }
    bc.tol = cfg.positive_tol(bc.tol)?;
    let report = run_bench(&bc)?;
    write_json(&report, &cfg.out)?;
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let base = match &cli.flags.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cfg = base.merge(&cli.flags);
    match cli.command {
        Command::Evolve => cmd_evolve(&cfg),
        Command::Dispersion => write_table(&io::dispersion_grid(grid(&cfg, 64)?), &cfg).map(|_| EXIT_OK),
        Command::Cone => write_table(&io::cone_samples(grid(&cfg, 64)?), &cfg).map(|_| EXIT_OK),
        Command::Boost => cmd_boost(&cfg),
        Command::FixedmuReport => cmd_fixedmu(&cfg),
        Command::Verify => cmd_verify(&cfg),
        Command::Bench => cmd_bench(&cfg),
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_)
        | Error::InvalidLattice(_)
        | Error::Io(_)
        | Error::Csv(_)
        | Error::Json(_) => EXIT_CONFIG,
        _ => EXIT_NUMERIC,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
