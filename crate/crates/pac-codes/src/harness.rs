//! Monte-Carlo frame-error-rate engine.
//!
//! Outcomes follow the three-way taxonomy: decoding *errors* (wrong codeword
//! delivered), *failures* (Fano move cap exhausted before the last level),
//! and, for list decoding, errors additionally flagged as *selection errors*
//! when the transmitted codeword was on the final list but not the metric
//! minimizer. FER = (errors + failures) / frames. Every error is also tested
//! against the ML lower-bound rule: if the delivered path is at least as
//! likely as the transmitted one, an ML decoder would have erred too.
//!
//! Frames are embarrassingly parallel; all randomness is keyed by
//! (seed, frame index) and aggregation is commutative, so reports do not
//! depend on the worker count.

use crate::channel::{modulate, random_data, ChannelConfig};
use crate::codespec::CodeSpec;
use crate::encoder::{self, DataWord, PrecodedWord};
use crate::error::Result;
use crate::fano::{FanoConfig, FanoDecoder, FanoOutcome};
use crate::bits;
use crate::scl::{path_metric_of, CandidateList, ListDecoder};
use rayon::prelude::*;
use std::io::Write;

/// Stop a point after this many frame errors, or give up at the frame cap.
#[derive(Debug, Clone, Copy)]
pub struct StoppingRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
}

impl Default for StoppingRule {
    fn default() -> Self {
        StoppingRule { min_frame_errors: 100, max_frames: 10_000_000 }
    }
}

/// Decoder selection for a simulation run.
#[derive(Debug, Clone)]
pub enum DecoderKind {
    List { list_size: usize },
    Fano { delta: f64, cycle_cap: u64, bias: BiasRule },
}

/// How the Fano per-phase bias vector is produced at each SNR point.
#[derive(Debug, Clone, Copy)]
pub enum BiasRule {
    /// Bit-channel mutual information at the operating SNR.
    Reliability,
    Constant(f64),
}

/// Classification of one decoded frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Correct,
    Error { selection: bool, ml_lb: bool },
    Failure,
}

/// ML lower-bound counting rule: an erroneous output counts iff its penalty
/// does not exceed the transmitted path's penalty (i.e. it is at least as
/// likely, so ML decoding errs as well).
pub fn ml_lower_bound_update(
    transmitted: &PrecodedWord,
    output_penalty: f64,
    llrs: &[f64],
    spec: &CodeSpec,
) -> Result<bool> {
    let tx_pm = path_metric_of(transmitted, llrs, spec)?;
    Ok(output_penalty <= tx_pm)
}

/// Classify a list-decoding result against the transmitted precoded word.
pub fn classify_list(
    tx_u_words: &[u64],
    tx_u: &PrecodedWord,
    list: &CandidateList,
    llrs: &[f64],
    spec: &CodeSpec,
) -> Result<Outcome> {
    let best = list.best();
    if best.u_words() == tx_u_words {
        return Ok(Outcome::Correct);
    }
    let rank = list.position_of_u(tx_u_words);
    let ml_lb = match rank {
        // transmitted on the list but beaten: its penalty is >= the best's
        Some(_) => true,
        None => ml_lower_bound_update(tx_u, best.metric(), llrs, spec)?,
    };
    Ok(Outcome::Error { selection: rank.is_some(), ml_lb })
}

/// Classify a Fano result against the transmitted precoded word.
pub fn classify_fano(
    tx_u: &PrecodedWord,
    out: &FanoOutcome,
    llrs: &[f64],
    spec: &CodeSpec,
) -> Result<Outcome> {
    match &out.result {
        None => Ok(Outcome::Failure),
        Some(c) if c.precoded == *tx_u => Ok(Outcome::Correct),
        Some(c) => {
            let ml_lb = ml_lower_bound_update(tx_u, c.metric, llrs, spec)?;
            Ok(Outcome::Error { selection: false, ml_lb })
        }
    }
}

/// Aggregates for one SNR point.
#[derive(Debug, Clone, Copy)]
pub struct SnrRow {
    pub snr_db: f64,
    pub frames: u64,
    pub errors: u64,
    pub failures: u64,
    pub selection_errors: u64,
    pub ml_lb: u64,
    pub fer: f64,
    pub fer_stderr: f64,
    pub mean_nodes: f64,
    pub max_nodes: u64,
    pub mean_flops: f64,
    pub max_flops: u64,
    pub mean_cycles: f64,
    pub max_cycles: u64,
    /// True when the frame cap was hit before reaching the error target.
    pub truncated: bool,
}

/// Per-SNR simulation report.
#[derive(Debug, Clone, Default)]
pub struct SimReport {
    pub rows: Vec<SnrRow>,
}

impl SimReport {
    pub const CSV_HEADER: &'static str = "snr_db,frames,errors,failures,selection_errors,fer,\
fer_stderr,ml_lb,mean_nodes,max_nodes,mean_flops,max_flops,mean_cycles,max_cycles";

    /// Write rows as CSV after optional `# `-prefixed header lines.
    pub fn write_csv<W: Write>(&self, mut w: W, header_lines: &[String]) -> Result<()> {
        for line in header_lines {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for r in &self.rows {
            writeln!(
                w,
                "{:.3},{},{},{},{},{:.6e},{:.6e},{},{:.3},{},{:.3},{},{:.3},{}",
                r.snr_db,
                r.frames,
                r.errors,
                r.failures,
                r.selection_errors,
                r.fer,
                r.fer_stderr,
                r.ml_lb,
                r.mean_nodes,
                r.max_nodes,
                r.mean_flops,
                r.max_flops,
                r.mean_cycles,
                r.max_cycles
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Agg {
    frames: u64,
    errors: u64,
    failures: u64,
    selection: u64,
    ml_lb: u64,
    nodes_sum: u64,
    nodes_max: u64,
    flops_sum: u64,
    flops_max: u64,
    cycles_sum: u64,
    cycles_max: u64,
}

impl Agg {
    fn merge(mut self, o: Agg) -> Agg {
        self.frames += o.frames;
        self.errors += o.errors;
        self.failures += o.failures;
        self.selection += o.selection;
        self.ml_lb += o.ml_lb;
        self.nodes_sum += o.nodes_sum;
        self.nodes_max = self.nodes_max.max(o.nodes_max);
        self.flops_sum += o.flops_sum;
        self.flops_max = self.flops_max.max(o.flops_max);
        self.cycles_sum += o.cycles_sum;
        self.cycles_max = self.cycles_max.max(o.cycles_max);
        self
    }
}

enum Worker {
    List(ListDecoder),
    Fano(Box<FanoDecoder>, FanoConfig),
}

/// Run the FER sweep. Deterministic given `seed` for any worker count.
pub fn run_fer(
    spec: &CodeSpec,
    decoder: &DecoderKind,
    snr_list: &[f64],
    stop: &StoppingRule,
    seed: u64,
) -> Result<SimReport> {
    let mut report = SimReport::default();
    for &snr in snr_list {
        report.rows.push(run_point(spec, decoder, snr, stop, seed)?);
    }
    Ok(report)
}

fn run_point(
    spec: &CodeSpec,
    decoder: &DecoderKind,
    snr_db: f64,
    stop: &StoppingRule,
    seed: u64,
) -> Result<SnrRow> {
    let cfg = ChannelConfig::new(snr_db, spec.rate(), seed)?;
    let fano_cfg = match decoder {
        DecoderKind::Fano { delta, cycle_cap, bias } => Some(match bias {
            BiasRule::Reliability => FanoConfig::reliability(spec, snr_db, *delta, *cycle_cap)?,
            BiasRule::Constant(b) => FanoConfig::constant(spec, *b, *delta, *cycle_cap)?,
        }),
        DecoderKind::List { .. } => None,
    };
    // validate decoder construction once up front
    if let DecoderKind::List { list_size } = decoder {
        ListDecoder::new(spec, *list_size)?;
    }

    const BATCH: u64 = 256;
    let mut agg = Agg::default();
    let mut next_frame = 0u64;
    while next_frame < stop.max_frames {
        let hi = (next_frame + BATCH).min(stop.max_frames);
        let batch_agg: Agg = (next_frame..hi)
            .into_par_iter()
            .map_init(
                || match decoder {
                    DecoderKind::List { list_size } => {
                        Worker::List(ListDecoder::new(spec, *list_size).expect("validated above"))
                    }
                    DecoderKind::Fano { .. } => Worker::Fano(
                        Box::new(FanoDecoder::new(spec)),
                        fano_cfg.clone().expect("fano config built above"),
                    ),
                },
                |worker, frame| run_frame(spec, &cfg, worker, frame),
            )
            .try_reduce(Agg::default, |a, b| Ok(a.merge(b)))?;
        agg = agg.merge(batch_agg);
        next_frame = hi;
        if agg.errors + agg.failures >= stop.min_frame_errors {
            break;
        }
    }

    let frames = agg.frames;
    let fer = (agg.errors + agg.failures) as f64 / frames as f64;
    Ok(SnrRow {
        snr_db,
        frames,
        errors: agg.errors,
        failures: agg.failures,
        selection_errors: agg.selection,
        ml_lb: agg.ml_lb,
        fer,
        fer_stderr: (fer * (1.0 - fer) / frames as f64).sqrt(),
        mean_nodes: agg.nodes_sum as f64 / frames as f64,
        max_nodes: agg.nodes_max,
        mean_flops: agg.flops_sum as f64 / frames as f64,
        max_flops: agg.flops_max,
        mean_cycles: agg.cycles_sum as f64 / frames as f64,
        max_cycles: agg.cycles_max,
        truncated: agg.errors + agg.failures < stop.min_frame_errors,
    })
}

fn run_frame(spec: &CodeSpec, cfg: &ChannelConfig, worker: &mut Worker, frame: u64) -> Result<Agg> {
    let mut rng = cfg.frame_rng(frame);
    let d = DataWord(random_data(&mut rng, spec.k()));
    let v = encoder::insert_profile(&d, spec)?;
    let tx_u = encoder::convolve(&v, spec.generator());
    let x = encoder::polar_transform(&tx_u)?;
    let y = cfg.transmit(&modulate(&x.0), &mut rng);
    let llrs = cfg.llr(&y);
    let tx_u_words = bits::pack(&tx_u.0);

    let mut agg = Agg { frames: 1, ..Agg::default() };
    let outcome = match worker {
        Worker::List(dec) => {
            let list = dec.decode(&llrs)?;
            let c = dec.counters();
            agg.nodes_sum = c.decision_nodes;
            agg.nodes_max = c.decision_nodes;
            agg.flops_sum = c.flops.total();
            agg.flops_max = c.flops.total();
            classify_list(&tx_u_words, &tx_u, &list, &llrs, spec)?
        }
        Worker::Fano(dec, fcfg) => {
            let out = dec.decode(&llrs, fcfg)?;
            agg.nodes_sum = out.nodes_visited;
            agg.nodes_max = out.nodes_visited;
            agg.flops_sum = out.flops.total();
            agg.flops_max = out.flops.total();
            agg.cycles_sum = out.cycles;
            agg.cycles_max = out.cycles;
            classify_fano(&tx_u, &out, &llrs, spec)?
        }
    };
    match outcome {
        Outcome::Correct => {}
        Outcome::Failure => agg.failures = 1,
        Outcome::Error { selection, ml_lb } => {
            agg.errors = 1;
            agg.selection = selection as u64;
            agg.ml_lb = ml_lb as u64;
        }
    }
    Ok(agg)
}

/// Replay a single frame in isolation (same data, noise, and decode as in a
/// sweep) and return its classification.
pub fn replay_frame(
    spec: &CodeSpec,
    decoder: &DecoderKind,
    snr_db: f64,
    seed: u64,
    frame: u64,
) -> Result<Outcome> {
    let cfg = ChannelConfig::new(snr_db, spec.rate(), seed)?;
    let mut worker = match decoder {
        DecoderKind::List { list_size } => Worker::List(ListDecoder::new(spec, *list_size)?),
        DecoderKind::Fano { delta, cycle_cap, bias } => {
            let fcfg = match bias {
                BiasRule::Reliability => FanoConfig::reliability(spec, snr_db, *delta, *cycle_cap)?,
                BiasRule::Constant(b) => FanoConfig::constant(spec, *b, *delta, *cycle_cap)?,
            };
            Worker::Fano(Box::new(FanoDecoder::new(spec)), fcfg)
        }
    };
    let agg = run_frame(spec, &cfg, &mut worker, frame)?;
    Ok(if agg.failures == 1 {
        Outcome::Failure
    } else if agg.errors == 1 {
        Outcome::Error { selection: agg.selection == 1, ml_lb: agg.ml_lb == 1 }
    } else {
        Outcome::Correct
    })
}

/// Parse an SNR grid `"start:step:stop"` (inclusive) or a comma list.
pub fn parse_snr_list(s: &str) -> Result<Vec<f64>> {
    let parse_one = |t: &str| -> Result<f64> {
        t.trim()
            .parse::<f64>()
            .map_err(|e| crate::error::Error::Parse(format!("bad SNR value {t:?}: {e}")))
    };
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(crate::error::Error::Parse(format!(
                "SNR range must be start:step:stop, got {s:?}"
            )));
        }
        let (start, step, stop) = (parse_one(parts[0])?, parse_one(parts[1])?, parse_one(parts[2])?);
        if step <= 0.0 || stop < start {
            return Err(crate::error::Error::Parse("SNR range must ascend".into()));
        }
        let mut out = Vec::new();
        let mut i = 0u32;
        loop {
            let v = start + step * i as f64;
            if v > stop + 1e-9 {
                break;
            }
            out.push((v * 1e6).round() / 1e6);
            i += 1;
        }
        Ok(out)
    } else {
        s.split(',').map(parse_one).collect()
    }
}

/// Fano bias per spec at a given SNR (exposed for the CLI decode path).
pub fn build_fano_config(
    spec: &CodeSpec,
    snr_db: f64,
    delta: f64,
    cycle_cap: u64,
    bias: BiasRule,
) -> Result<FanoConfig> {
    match bias {
        BiasRule::Reliability => FanoConfig::reliability(spec, snr_db, delta, cycle_cap),
        BiasRule::Constant(b) => FanoConfig::constant(spec, b, delta, cycle_cap),
    }
}
