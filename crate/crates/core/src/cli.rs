//! Batch front-end producing CSV tables.
//!
//! Every subcommand accepts `--config <file.json>` whose keys mirror the long
//! flag names with underscores (`snr_db`, `lambda_scaled`, ...). Flags given on
//! the command line override the file. SNR values are in dB with
//! `rho = 10^(dB/10)`.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use crate::asymptotics::{optimal_exponent, random_coding_exponent, singleton_bound, Asymptote, BlockLengthScale};
use crate::bound::{outage_lower_bound, ChannelSpec, DEFAULT_CELLS};
use crate::constellation::Constellation;
use crate::error::{Error, Result};
use crate::fading::NakagamiParam;
use crate::montecarlo::{mc_lower_bound, mc_outage_with_table, McEstimate};
use crate::mutual_info::{mi_discrete, MiTable, QuadratureRule, Snr, DEFAULT_QUADRATURE_ORDER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

const DEFAULT_SNR_GRID: &str = "0:40:2";
const DEFAULT_LAMBDA_SCALED: [f64; 2] = [0.5, 2.0];

#[derive(Debug, Parser)]
#[command(name = "nakfade", version, about = "Outage bounds for Nakagami-m block-fading channels with discrete inputs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lower bound on outage probability over an SNR grid.
    Curve(Flags),
    /// Lower bound over a grid of rates at one SNR.
    Ratesweep(Flags),
    /// Lower bound next to its high-SNR asymptote.
    Asymptote(Flags),
    /// Singleton, optimal and random-coding SNR exponents over rates.
    Exponent(Flags),
    /// Monte Carlo estimate of outage or of the lower bound.
    Mc(Flags),
    /// Coded-modulation mutual information of a constellation.
    Mi(Flags),
}

/// Subcommand selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Curve,
    Ratesweep,
    Asymptote,
    Exponent,
    Mc,
    Mi,
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Task::Curve => "curve",
            Task::Ratesweep => "ratesweep",
            Task::Asymptote => "asymptote",
            Task::Exponent => "exponent",
            Task::Mc => "mc",
            Task::Mi => "mi",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum McMode {
    /// Outage with the constellation's mutual information.
    Outage,
    /// Outage with the capped Gaussian mutual information.
    Lowerbound,
}

/// A scalar or `start:stop:step` text, from a flag or a JSON number/string.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum Text {
    Num(f64),
    Str(String),
}

impl Text {
    fn as_str(&self) -> String {
        match self {
            Text::Num(v) => v.to_string(),
            Text::Str(s) => s.clone(),
        }
    }
}

impl std::str::FromStr for Text {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(Text::Str(s.to_string()))
    }
}

/// Flags shared by every subcommand; all optional so that a config file can
/// fill the gaps.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
struct Flags {
    /// JSON file with default values for the flags below.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Number of fading blocks B.
    #[arg(long)]
    blocks: Option<u32>,
    /// Bits per symbol M.
    #[arg(long)]
    bits: Option<u32>,
    /// Nakagami parameter m.
    #[arg(long, allow_hyphen_values = true)]
    m: Option<f64>,
    /// Rate in bits per channel use, or a `start:stop:step` grid for ratesweep and exponent.
    #[arg(long)]
    rate: Option<Text>,
    /// SNR grid in dB as `start:stop:step`, rho = 10^(dB/10).
    #[arg(long, allow_hyphen_values = true)]
    snr_db: Option<Text>,
    /// Fixed SNR in dB for ratesweep.
    #[arg(long, allow_hyphen_values = true)]
    snr_db_fixed: Option<f64>,
    /// Cells per tabulated density.
    #[arg(long)]
    cells: Option<usize>,
    /// Gauss-Hermite order per real dimension.
    #[arg(long)]
    order: Option<usize>,
    /// Constellation: qam4, qam16, qam64, psk2, psk4 or psk8.
    #[arg(long)]
    constellation: Option<String>,
    /// Monte Carlo sample count.
    #[arg(long)]
    samples: Option<u64>,
    /// Monte Carlo seed; required by mc.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    mode: Option<McMode>,
    /// Add per-term columns to curve output.
    #[arg(long)]
    #[serde(default)]
    per_term: bool,
    /// Block-length scale as a multiple of m, i.e. lambda M ln2 = v m. Repeatable.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default)]
    lambda_scaled: Vec<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Flags {
    fn merged_over(self, file: Flags) -> Flags {
        Flags {
            config: self.config,
            blocks: self.blocks.or(file.blocks),
            bits: self.bits.or(file.bits),
            m: self.m.or(file.m),
            rate: self.rate.or(file.rate),
            snr_db: self.snr_db.or(file.snr_db),
            snr_db_fixed: self.snr_db_fixed.or(file.snr_db_fixed),
            cells: self.cells.or(file.cells),
            order: self.order.or(file.order),
            constellation: self.constellation.or(file.constellation),
            samples: self.samples.or(file.samples),
            seed: self.seed.or(file.seed),
            mode: self.mode.or(file.mode),
            per_term: self.per_term || file.per_term,
            lambda_scaled: if self.lambda_scaled.is_empty() { file.lambda_scaled } else { self.lambda_scaled },
            output: self.output.or(file.output),
        }
    }
}

/// Uniform grid `start, start+step, ..., <= stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::domain("grid bounds must be finite"));
        }
        if step <= 0.0 {
            return Err(Error::domain("grid step must be positive"));
        }
        if stop < start {
            return Err(Error::domain("grid stop must not be below start"));
        }
        Ok(Grid { start, stop, step })
    }

    pub fn single(value: f64) -> Result<Self> {
        Grid::new(value, value, 1.0)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("`{s}` is not a number")))
        };
        match parts.as_slice() {
            [v] => Grid::single(num(v)?),
            [a, b, c] => Grid::new(num(a)?, num(b)?, num(c)?),
            _ => Err(Error::domain(format!("expected start:stop:step, got `{text}`"))),
        }
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid points, rounded to 1e-9 so that printed values stay short.
    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let x = self.start + i as f64 * self.step;
                (x * 1e9).round() / 1e9
            })
            .collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() == 1 {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}:{}:{}", self.start, self.stop, self.step)
        }
    }
}

/// Validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub blocks: u32,
    pub bits: u32,
    pub m: NakagamiParam,
    pub rates: Grid,
    pub snr_db: Grid,
    pub n_cells: usize,
    pub order: usize,
    pub constellation: String,
    pub samples: u64,
    pub seed: Option<u64>,
    pub mode: McMode,
    pub per_term: bool,
    pub lambda_scaled: Vec<f64>,
    pub output: Option<PathBuf>,
}

fn field(name: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Domain(msg) | Error::Numerical(msg) => Error::config(name, msg),
        other => other,
    }
}

impl RunConfig {
    fn from_flags(task: Task, f: Flags) -> Result<Self> {
        let blocks = f.blocks.unwrap_or(4);
        let bits = f.bits.unwrap_or(4);
        let m = NakagamiParam::new(f.m.unwrap_or(2.0)).map_err(field("m"))?;
        if blocks == 0 {
            return Err(Error::config("blocks", "must be at least 1"));
        }
        if !(1..=16).contains(&bits) {
            return Err(Error::config("bits", "must lie in 1..=16"));
        }

        let rates = match (&f.rate, task) {
            (Some(t), _) => Grid::parse(&t.as_str()).map_err(field("rate"))?,
            (None, Task::Exponent) => {
                let d = bits as f64 / 200.0;
                Grid::new(d, bits as f64, d)?
            }
            (None, _) => Grid::single(1.0)?,
        };
        if !matches!(task, Task::Ratesweep | Task::Exponent) && rates.len() != 1 {
            return Err(Error::config("rate", format!("{task} takes a single rate")));
        }
        for r in rates.points() {
            ChannelSpec::new(blocks, bits, m, r).map_err(field("rate"))?;
        }

        let snr_db = match (task, f.snr_db_fixed) {
            (Task::Ratesweep, Some(v)) => Grid::single(v).map_err(field("snr_db_fixed"))?,
            (Task::Ratesweep, None) if f.snr_db.is_none() => {
                return Err(Error::config("snr_db_fixed", "ratesweep needs a fixed SNR"))
            }
            _ => Grid::parse(&f.snr_db.map(|t| t.as_str()).unwrap_or_else(|| DEFAULT_SNR_GRID.into()))
                .map_err(field("snr_db"))?,
        };
        if task == Task::Ratesweep && snr_db.len() != 1 {
            return Err(Error::config("snr_db_fixed", "ratesweep takes a single SNR"));
        }
        for db in snr_db.points() {
            Snr::from_db(db).map_err(field("snr_db"))?;
        }

        let n_cells = f.cells.unwrap_or(DEFAULT_CELLS);
        if n_cells < 2 {
            return Err(Error::config("cells", "need at least 2 cells"));
        }
        let order = f.order.unwrap_or(DEFAULT_QUADRATURE_ORDER);
        if order == 0 {
            return Err(Error::config("order", "must be positive"));
        }
        let constellation = f.constellation.unwrap_or_else(|| format!("qam{}", 1u64 << bits));
        if matches!(task, Task::Mi) || (task == Task::Mc && f.mode == Some(McMode::Outage)) {
            let c = Constellation::from_name(&constellation).map_err(field("constellation"))?;
            if task == Task::Mc && c.bits() != bits {
                return Err(Error::config(
                    "constellation",
                    format!("{} carries {} bits but bits = {bits}", c.name(), c.bits()),
                ));
            }
        }

        let samples = f.samples.unwrap_or(100_000);
        if samples == 0 {
            return Err(Error::config("samples", "must be positive"));
        }
        if task == Task::Mc && f.seed.is_none() {
            return Err(Error::config("seed", "mc requires an explicit seed"));
        }
        let lambda_scaled = if f.lambda_scaled.is_empty() { DEFAULT_LAMBDA_SCALED.to_vec() } else { f.lambda_scaled };
        for &v in &lambda_scaled {
            BlockLengthScale::from_scaled(v, bits, m).map_err(field("lambda_scaled"))?;
        }

        Ok(RunConfig {
            task,
            blocks,
            bits,
            m,
            rates,
            snr_db,
            n_cells,
            order,
            constellation,
            samples,
            seed: f.seed,
            mode: f.mode.unwrap_or(McMode::Lowerbound),
            per_term: f.per_term,
            lambda_scaled,
            output: f.output,
        })
    }

    /// Parses command-line arguments (program name first) and an optional
    /// config file.
    pub fn from_args<I, T>(args: I) -> std::result::Result<Self, CliError>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
        let (task, flags) = match cli.command {
            Command::Curve(f) => (Task::Curve, f),
            Command::Ratesweep(f) => (Task::Ratesweep, f),
            Command::Asymptote(f) => (Task::Asymptote, f),
            Command::Exponent(f) => (Task::Exponent, f),
            Command::Mc(f) => (Task::Mc, f),
            Command::Mi(f) => (Task::Mi, f),
        };
        let flags = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Lib(Error::config("config", format!("{}: {e}", path.display()))))?;
                let file: Flags = serde_json::from_str(&text)
                    .map_err(|e| CliError::Lib(Error::config("config", e.to_string())))?;
                flags.merged_over(file)
            }
            None => flags,
        };
        RunConfig::from_flags(task, flags).map_err(CliError::Lib)
    }

    fn spec(&self, rate: f64) -> Result<ChannelSpec> {
        ChannelSpec::new(self.blocks, self.bits, self.m, rate)
    }

    fn header(&self) -> String {
        let seed = match (self.task, self.seed) {
            (Task::Mc, Some(s)) => s.to_string(),
            _ => "none".to_string(),
        };
        format!(
            "# nakfade {} B={} M={} m={} R={} cells={} seed={}",
            self.task,
            self.blocks,
            self.bits,
            self.m.m(),
            self.rates,
            self.n_cells,
            seed
        )
    }
}

/// Failure of a CLI invocation, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Lib(Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(e) if !e.use_stderr() => EXIT_OK,
            CliError::Usage(_) => EXIT_CONFIG,
            CliError::Lib(Error::Numerical(_)) => EXIT_NUMERICAL,
            CliError::Lib(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(e) => write!(f, "{e}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Numerical(format!("{what} is not finite")))
    }
}

fn collect_rows<T: Sync, F>(items: &[T], f: F) -> Result<Vec<String>>
where
    F: Fn(&T) -> Result<String> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Computes the CSV table for `cfg`, header included.
pub fn render(cfg: &RunConfig) -> Result<String> {
    let mut lines = vec![cfg.header()];
    let snrs = cfg.snr_db.points();
    let rates = cfg.rates.points();
    match cfg.task {
        Task::Curve => {
            let spec = cfg.spec(rates[0])?;
            let mut cols = String::from("snr_db,p_out_lower");
            if cfg.per_term {
                for t in 0..spec.term_count() {
                    cols.push_str(&format!(",t{t}_cdf,t{t}_weight"));
                }
            }
            lines.push(cols);
            lines.extend(collect_rows(&snrs, |&db| {
                let res = outage_lower_bound(Snr::from_db(db)?, &spec, cfg.n_cells)?;
                let mut row = format!("{db},{:e}", res.value);
                if cfg.per_term {
                    for term in &res.terms {
                        row.push_str(&format!(",{:e},{:e}", finite(term.cdf, "cdf")?, finite(term.weight, "weight")?));
                    }
                }
                Ok(row)
            })?);
        }
        Task::Ratesweep => {
            let snr = Snr::from_db(snrs[0])?;
            lines.push("rate,p_out_lower".into());
            lines.extend(collect_rows(&rates, |&r| {
                let res = outage_lower_bound(snr, &cfg.spec(r)?, cfg.n_cells)?;
                Ok(format!("{r},{:e}", res.value))
            })?);
        }
        Task::Asymptote => {
            let spec = cfg.spec(rates[0])?;
            let asym = Asymptote::new(&spec, cfg.n_cells)?;
            lines.push("snr_db,p_out_lower,asymptote".into());
            lines.extend(collect_rows(&snrs, |&db| {
                let snr = Snr::from_db(db)?;
                let res = outage_lower_bound(snr, &spec, cfg.n_cells)?;
                Ok(format!("{db},{:e},{:e}", res.value, finite(asym.eval(snr), "asymptote")?))
            })?);
        }
        Task::Exponent => {
            let mut cols = String::from("rate,d_singleton,d_optimal");
            for v in &cfg.lambda_scaled {
                cols.push_str(&format!(",d_random_lambda{v}"));
            }
            lines.push(cols);
            let scales = cfg
                .lambda_scaled
                .iter()
                .map(|&v| BlockLengthScale::from_scaled(v, cfg.bits, cfg.m))
                .collect::<Result<Vec<_>>>()?;
            lines.extend(collect_rows(&rates, |&r| {
                let spec = cfg.spec(r)?;
                let mut row = format!(
                    "{r},{},{}",
                    singleton_bound(cfg.blocks, cfg.bits, r)?,
                    optimal_exponent(&spec).value
                );
                for &s in &scales {
                    row.push_str(&format!(",{}", finite(random_coding_exponent(&spec, s), "exponent")?));
                }
                Ok(row)
            })?);
        }
        Task::Mc => {
            let spec = cfg.spec(rates[0])?;
            let seed = cfg.seed.ok_or_else(|| Error::config("seed", "mc requires an explicit seed"))?;
            let table = match cfg.mode {
                McMode::Outage => {
                    let c = Constellation::from_name(&cfg.constellation)?;
                    Some(MiTable::new(&c, &QuadratureRule::gauss_hermite(cfg.order)?))
                }
                McMode::Lowerbound => None,
            };
            lines.push("snr_db,p_hat,std_err,n".into());
            // The estimators parallelise internally; points run in order.
            for &db in &snrs {
                let snr = Snr::from_db(db)?;
                let est: McEstimate = match &table {
                    Some(t) => mc_outage_with_table(snr, &spec, t, cfg.samples, seed)?,
                    None => mc_lower_bound(snr, &spec, cfg.samples, seed)?,
                };
                lines.push(format!("{db},{:e},{:e},{}", est.p_hat, est.std_err, est.n_samples));
            }
        }
        Task::Mi => {
            let c = Constellation::from_name(&cfg.constellation)?;
            let q = QuadratureRule::gauss_hermite(cfg.order)?;
            lines.push("rho_db,mi_bits".into());
            lines.extend(collect_rows(&snrs, |&db| {
                Ok(format!("{db},{}", finite(mi_discrete(Snr::from_db(db)?, &c, &q), "mutual information")?))
            })?);
        }
    }
    let mut out = lines.join("\n");
    out.push('\n');
    Ok(out)
}

/// Runs `cfg`, writing to the configured output or to `stdout`.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> std::result::Result<(), CliError> {
    let table = render(cfg).map_err(CliError::Lib)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, table).map_err(CliError::Io),
        None => stdout.write_all(table.as_bytes()).map_err(CliError::Io),
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = RunConfig::from_args(args).and_then(|cfg| run(&cfg, &mut std::io::stdout().lock()));
    match result {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            CliError::Usage(e).exit_code()
        }
        Err(e) => {
            eprintln!("nakfade: {e}");
            e.exit_code()
        }
    }
}
