//! Command-line front end: encode / decode / simulate / weights / bounds /
//! profile.
//!
//! Configuration resolves in two layers: an optional TOML config file, then
//! command-line flags (flags win). The fully resolved configuration is
//! written as `# `-prefixed header lines into every output file, so a run
//! can be reproduced from its own output; the worker-thread count is
//! deliberately excluded because results never depend on it.

use crate::analysis::{self, BaselineCode, CompareConfig, Crc8, WeightSpectrum};
use crate::codespec::{self, CodeSpec, Generator, ProfileRule};
use crate::encoder::{self, DataWord};
use crate::error::{Error, Result};
use crate::fano::{FanoDecoder, DEFAULT_CYCLE_CAP};
use crate::harness::{self, BiasRule, DecoderKind, StoppingRule};
use crate::scl::{decision_node_count, decision_node_count_inclusive, ListDecoder};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::PathBuf;

/// Fully resolved run configuration; serialized into output headers.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub code: CodeSection,
    pub decoder: DecoderSection,
    pub channel: ChannelSection,
    pub sim: SimSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CodeSection {
    pub n: usize,
    pub k: usize,
    pub profile: String,
    pub generator: String,
    pub design_snr_db: f64,
}

impl Default for CodeSection {
    fn default() -> Self {
        CodeSection {
            n: 128,
            k: 64,
            profile: "rm".into(),
            generator: Generator::arikan().to_string(),
            design_snr_db: 2.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecoderSection {
    pub kind: String,
    pub list_size: usize,
    pub delta: f64,
    pub cycle_cap: u64,
    pub bias: String,
}

impl Default for DecoderSection {
    fn default() -> Self {
        DecoderSection {
            kind: "list".into(),
            list_size: 128,
            delta: 2.0,
            cycle_cap: DEFAULT_CYCLE_CAP,
            bias: "reliability".into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelSection {
    pub seed: u64,
    pub snr_list: String,
}

impl Default for ChannelSection {
    fn default() -> Self {
        ChannelSection { seed: 1, snr_list: "1.0:0.5:3.0".into() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for SimSection {
    fn default() -> Self {
        let d = StoppingRule::default();
        SimSection { min_frame_errors: d.min_frame_errors, max_frames: d.max_frames }
    }
}

impl RunConfig {
    pub fn load(path: &PathBuf) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Parse(format!("config {path:?}: {e}")))
    }

    /// Header lines embedding the tool version and the resolved config.
    pub fn header_lines(&self) -> Vec<String> {
        let mut lines = vec![format!("pac-codes {}", env!("CARGO_PKG_VERSION"))];
        let toml = toml::to_string(self).expect("config serializes");
        lines.extend(toml.lines().map(|l| l.to_string()));
        lines
    }

    pub fn build_spec(&self) -> Result<CodeSpec> {
        let generator = Generator::parse(&self.code.generator)?;
        let rule = parse_profile_rule(&self.code.profile, self.code.design_snr_db)?;
        CodeSpec::new(self.code.n, self.code.k, &rule, generator)
    }

    pub fn decoder_kind(&self) -> Result<DecoderKind> {
        match self.decoder.kind.as_str() {
            "list" => Ok(DecoderKind::List { list_size: self.decoder.list_size }),
            "fano" => Ok(DecoderKind::Fano {
                delta: self.decoder.delta,
                cycle_cap: self.decoder.cycle_cap,
                bias: parse_bias(&self.decoder.bias)?,
            }),
            other => Err(Error::InvalidArgument(format!(
                "unknown decoder {other:?} (expected list or fano)"
            ))),
        }
    }
}

pub fn parse_profile_rule(s: &str, design_snr_db: f64) -> Result<ProfileRule> {
    match s {
        "rm" => Ok(ProfileRule::Rm),
        "polar" => Ok(ProfileRule::Polar { design_snr_db }),
        other => {
            if let Some(path) = other.strip_prefix("file:") {
                let file = std::fs::File::open(path)?;
                let set = codespec::read_profile(BufReader::new(file))?;
                Ok(ProfileRule::Explicit(set))
            } else {
                Err(Error::InvalidArgument(format!(
                    "unknown profile {other:?} (expected rm, polar, or file:<path>)"
                )))
            }
        }
    }
}

pub fn parse_bias(s: &str) -> Result<BiasRule> {
    if s == "reliability" {
        return Ok(BiasRule::Reliability);
    }
    if let Some(b) = s.strip_prefix("const:") {
        let v: f64 =
            b.parse().map_err(|e| Error::Parse(format!("bad bias constant {b:?}: {e}")))?;
        return Ok(BiasRule::Constant(v));
    }
    Err(Error::InvalidArgument(format!(
        "unknown bias rule {s:?} (expected reliability or const:<B>)"
    )))
}

#[derive(Parser, Debug)]
#[command(name = "pac", version, about = "PAC code toolkit", disable_help_subcommand = true)]
struct Cli {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (0 = all cores). Results never depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Output path (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    /// Block length (power of two).
    #[arg(long)]
    n: Option<usize>,
    /// Data dimension.
    #[arg(long)]
    k: Option<usize>,
    /// Rate profile: rm | polar | file:<path>.
    #[arg(long)]
    profile: Option<String>,
    /// Convolutional generator, binary (c_0 first) or octal 0o… notation.
    #[arg(long)]
    generator: Option<String>,
    /// Design SNR (dB) for the polar profile and reliability bias.
    #[arg(long)]
    design_snr: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct DecArgs {
    /// Decoder: list | fano.
    #[arg(long)]
    decoder: Option<String>,
    #[arg(long)]
    list_size: Option<usize>,
    /// Fano threshold spacing.
    #[arg(long)]
    delta: Option<f64>,
    /// Fano move cap.
    #[arg(long)]
    cycle_cap: Option<u64>,
    /// Fano bias: reliability | const:<B>.
    #[arg(long)]
    bias: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode data words (one per line, binary or 0x-hex) into codewords.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// Input file (default: stdin).
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Decode LLR frames (one per line, n space-separated values).
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        dec: DecArgs,
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Monte-Carlo FER sweep; emits the per-SNR CSV report.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        dec: DecArgs,
        /// SNR grid, start:step:stop or comma list (Eb/N0 dB).
        #[arg(long)]
        snr_list: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        min_errors: Option<u64>,
        #[arg(long)]
        max_frames: Option<u64>,
    },
    /// Weight-spectrum estimation; emits weight,count,saturated CSV.
    Weights {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        list_size: Option<usize>,
        /// High-SNR operating point of the experiment (Eb/N0 dB).
        #[arg(long, default_value_t = analysis::DEFAULT_SPECTRUM_SNR_DB)]
        spectrum_snr: f64,
        #[arg(long, default_value_t = analysis::DEFAULT_SPECTRUM_TRIALS)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Compare baselines instead (comma list of
        /// pac-rm,pac-polar,polar,polar-crc8,reed-muller or "all").
        #[arg(long)]
        baselines: Option<String>,
    },
    /// Bound curves; emits snr_db,value,kind CSV.
    Bounds {
        #[command(flatten)]
        code: CodeArgs,
        /// union | normal.
        #[arg(long)]
        kind: String,
        /// Spectrum CSV (from `weights`) for the union bound.
        #[arg(long)]
        spectrum: Option<PathBuf>,
        #[arg(long)]
        snr_list: Option<String>,
    },
    /// Emit a rate profile, one index per line.
    Profile {
        #[command(flatten)]
        code: CodeArgs,
    },
}

fn apply_code_args(cfg: &mut RunConfig, a: &CodeArgs) {
    if let Some(n) = a.n {
        cfg.code.n = n;
    }
    if let Some(k) = a.k {
        cfg.code.k = k;
    }
    if let Some(p) = &a.profile {
        cfg.code.profile = p.clone();
    }
    if let Some(g) = &a.generator {
        cfg.code.generator = g.clone();
    }
    if let Some(s) = a.design_snr {
        cfg.code.design_snr_db = s;
    }
}

fn apply_dec_args(cfg: &mut RunConfig, a: &DecArgs) {
    if let Some(d) = &a.decoder {
        cfg.decoder.kind = d.clone();
    }
    if let Some(l) = a.list_size {
        cfg.decoder.list_size = l;
    }
    if let Some(d) = a.delta {
        cfg.decoder.delta = d;
    }
    if let Some(c) = a.cycle_cap {
        cfg.decoder.cycle_cap = c;
    }
    if let Some(b) = &a.bias {
        cfg.decoder.bias = b.clone();
    }
}

/// Parse argv, run the requested command, and map the result to an exit
/// status: 0 success, 1 usage error, 2 runtime failure.
pub fn parse_and_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version as "errors" with success status
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.threads > 0 {
        // ignore failure: the global pool may already exist in-process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidArgument(_) | Error::Parse(_) => 1,
                Error::Resource(_) | Error::Io(_) => 2,
            }
        }
    }
}

fn open_output(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn open_input(input: &Option<PathBuf>) -> Result<Box<dyn Read>> {
    Ok(match input {
        Some(path) => Box::new(std::fs::File::open(path)?),
        None => Box::new(std::io::stdin().lock()),
    })
}

fn base_config(path: &Option<PathBuf>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Encode { code, input } => {
            let mut cfg = base_config(&cli.config)?;
            apply_code_args(&mut cfg, code);
            let spec = cfg.build_spec()?;
            let mut out = open_output(&cli.out)?;
            let reader = BufReader::new(open_input(input)?);
            for line in reader.lines() {
                let line = line?;
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                let d = parse_data_word(t, spec.k())?;
                let x = encoder::encode(&d, &spec)?;
                writeln!(out, "{}", bits_to_string(&x.0))?;
            }
            Ok(())
        }
        Command::Decode { code, dec, input } => {
            let mut cfg = base_config(&cli.config)?;
            apply_code_args(&mut cfg, code);
            apply_dec_args(&mut cfg, dec);
            let spec = cfg.build_spec()?;
            let kind = cfg.decoder_kind()?;
            let mut out = open_output(&cli.out)?;
            let reader = BufReader::new(open_input(input)?);
            let mut list_dec = match &kind {
                DecoderKind::List { list_size } => Some(ListDecoder::new(&spec, *list_size)?),
                _ => None,
            };
            let mut fano_state = match &kind {
                DecoderKind::Fano { delta, cycle_cap, bias } => Some((
                    FanoDecoder::new(&spec),
                    harness::build_fano_config(
                        &spec,
                        cfg.code.design_snr_db,
                        *delta,
                        *cycle_cap,
                        *bias,
                    )?,
                )),
                _ => None,
            };
            for line in reader.lines() {
                let line = line?;
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    continue;
                }
                let llrs = parse_llrs(t, spec.n())?;
                if let Some(d) = list_dec.as_mut() {
                    let list = d.decode(&llrs)?;
                    let best = list.best();
                    writeln!(out, "{} {:.9e}", bits_to_string(&best.codeword().0), best.metric())?;
                } else if let Some((d, fcfg)) = fano_state.as_mut() {
                    let o = d.decode(&llrs, fcfg)?;
                    match o.result {
                        Some(c) => writeln!(
                            out,
                            "{} {:.9e}",
                            bits_to_string(&c.codeword.0),
                            c.metric
                        )?,
                        None => writeln!(out, "failure cycles={}", o.cycles)?,
                    }
                }
            }
            Ok(())
        }
        Command::Simulate { code, dec, snr_list, seed, min_errors, max_frames } => {
            let mut cfg = base_config(&cli.config)?;
            apply_code_args(&mut cfg, code);
            apply_dec_args(&mut cfg, dec);
            if let Some(s) = snr_list {
                cfg.channel.snr_list = s.clone();
            }
            if let Some(s) = seed {
                cfg.channel.seed = *s;
            }
            if let Some(m) = min_errors {
                cfg.sim.min_frame_errors = *m;
            }
            if let Some(m) = max_frames {
                cfg.sim.max_frames = *m;
            }
            let spec = cfg.build_spec()?;
            let kind = cfg.decoder_kind()?;
            let snrs = harness::parse_snr_list(&cfg.channel.snr_list)?;
            let stop = StoppingRule {
                min_frame_errors: cfg.sim.min_frame_errors,
                max_frames: cfg.sim.max_frames,
            };
            let report = harness::run_fer(&spec, &kind, &snrs, &stop, cfg.channel.seed)?;
            let mut header = cfg.header_lines();
            if let DecoderKind::List { list_size } = kind {
                header.push(format!(
                    "decision_nodes_per_frame = {} (per active path and data phase; \
doubling-inclusive convention gives {})",
                    decision_node_count(list_size as u64, spec.k() as u64),
                    decision_node_count_inclusive(list_size as u64, spec.k() as u64),
                ));
            }
            let out = open_output(&cli.out)?;
            report.write_csv(out, &header)
        }
        Command::Weights { code, list_size, spectrum_snr, trials, seed, baselines } => {
            let mut cfg = base_config(&cli.config)?;
            apply_code_args(&mut cfg, code);
            if let Some(l) = list_size {
                cfg.decoder.list_size = *l;
            }
            if let Some(s) = seed {
                cfg.channel.seed = *s;
            }
            let mut header = cfg.header_lines();
            header.push(format!("spectrum_snr_db = {spectrum_snr}"));
            header.push(format!("trials = {trials}"));
            let out = open_output(&cli.out)?;
            match baselines {
                Some(list) => {
                    let set = parse_baselines(list)?;
                    let table = analysis::compare_codes(
                        &set,
                        &CompareConfig {
                            n: cfg.code.n,
                            k: cfg.code.k,
                            list_size: cfg.decoder.list_size,
                            high_snr_db: *spectrum_snr,
                            trials: *trials,
                            seed: cfg.channel.seed,
                            design_snr_db: cfg.code.design_snr_db,
                            generator: Generator::parse(&cfg.code.generator)?,
                            crc: Crc8::default(),
                        },
                    )?;
                    table.write_csv(out, &header)
                }
                None => {
                    let spec = cfg.build_spec()?;
                    let spectrum = analysis::estimate_spectrum(
                        &spec,
                        cfg.decoder.list_size,
                        *spectrum_snr,
                        *trials,
                        cfg.channel.seed,
                    )?;
                    spectrum.write_csv(out, &header)
                }
            }
        }
        Command::Bounds { code, kind, spectrum, snr_list } => {
            let mut cfg = base_config(&cli.config)?;
            apply_code_args(&mut cfg, code);
            if let Some(s) = snr_list {
                cfg.channel.snr_list = s.clone();
            }
            let snrs = harness::parse_snr_list(&cfg.channel.snr_list)?;
            let rate = cfg.code.k as f64 / cfg.code.n as f64;
            let curve = match kind.as_str() {
                "normal" => analysis::normal_approximation(cfg.code.n, rate, &snrs)?,
                "union" => {
                    let path = spectrum.as_ref().ok_or_else(|| {
                        Error::InvalidArgument("union bound needs --spectrum <csv>".into())
                    })?;
                    let s = read_spectrum_csv(path)?;
                    analysis::truncated_union_bound(&s, rate, &snrs)
                }
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "unknown bound kind {other:?} (expected normal or union)"
                    )))
                }
            };
            let out = open_output(&cli.out)?;
            curve.write_csv(out, &cfg.header_lines())
        }
        Command::Profile { code } => {
            let mut cfg = base_config(&cli.config)?;
            apply_code_args(&mut cfg, code);
            let spec = cfg.build_spec()?;
            let out = open_output(&cli.out)?;
            codespec::write_profile(out, spec.profile())
        }
    }
}

fn parse_baselines(s: &str) -> Result<Vec<BaselineCode>> {
    if s == "all" {
        return Ok(BaselineCode::ALL.to_vec());
    }
    s.split(',')
        .map(|t| match t.trim() {
            "pac-rm" => Ok(BaselineCode::PacRm),
            "pac-polar" => Ok(BaselineCode::PacPolar),
            "polar" => Ok(BaselineCode::Polar),
            "polar-crc8" => Ok(BaselineCode::PolarCrc8),
            "reed-muller" => Ok(BaselineCode::ReedMuller),
            other => Err(Error::InvalidArgument(format!("unknown baseline {other:?}"))),
        })
        .collect()
}

fn parse_data_word(s: &str, k: usize) -> Result<DataWord> {
    let bits: Vec<bool> = if let Some(hex) = s.strip_prefix("0x") {
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for ch in hex.chars() {
            let v = ch
                .to_digit(16)
                .ok_or_else(|| Error::Parse(format!("bad hex digit {ch:?}")))?;
            for b in (0..4).rev() {
                bits.push((v >> b) & 1 == 1);
            }
        }
        bits
    } else {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("bad data bit {other:?}"))),
            })
            .collect::<Result<_>>()?
    };
    if bits.len() < k {
        return Err(Error::InvalidArgument(format!(
            "data word has {} bits, need {k}",
            bits.len()
        )));
    }
    Ok(DataWord(bits[..k].to_vec()))
}

fn parse_llrs(s: &str, n: usize) -> Result<Vec<f64>> {
    let vals: Result<Vec<f64>> = s
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("bad LLR {t:?}: {e}"))))
        .collect();
    let vals = vals?;
    if vals.len() != n {
        return Err(Error::InvalidArgument(format!("expected {n} LLRs per line, got {}", vals.len())));
    }
    Ok(vals)
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn read_spectrum_csv(path: &PathBuf) -> Result<WeightSpectrum> {
    let text = std::fs::read_to_string(path)?;
    let mut counts = BTreeMap::new();
    let mut saturated = BTreeMap::new();
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with("weight") {
            continue;
        }
        let parts: Vec<&str> = t.split(',').collect();
        if parts.len() < 2 {
            return Err(Error::Parse(format!("bad spectrum line {t:?}")));
        }
        let w: u32 =
            parts[0].parse().map_err(|e| Error::Parse(format!("bad weight {:?}: {e}", parts[0])))?;
        let c: u64 =
            parts[1].parse().map_err(|e| Error::Parse(format!("bad count {:?}: {e}", parts[1])))?;
        counts.insert(w, c);
        if parts.len() > 2 {
            saturated.insert(w, parts[2] == "true");
        }
    }
    Ok(WeightSpectrum { counts, list_size_used: 0, saturated })
}
