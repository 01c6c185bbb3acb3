//! Fano sequential decoding over the irregular polar search tree.
//!
//! The search walks the tree of precoded words `u`: nodes at frozen levels
//! have a single outgoing edge labeled by the dynamic frozen value of the
//! path's carrier history, data levels have two. The classic Fano rules
//! apply: move forward while the running metric stays at or above the
//! threshold, tighten the threshold on first visits, back up when stuck, and
//! loosen by `delta` once backward movement is exhausted. A move cap turns
//! pathological searches into explicit decoding failures.
//!
//! Branch metric at phase `i` for bit `u`, in bits:
//! `gamma_i(u) = log2 P(u | y, u^{i-1}) + 1 - bias[i]`,
//! where the conditional comes from the successive-cancellation LLR. With
//! the default reliability bias `bias[i] = I(W_i)` the expected drift on the
//! correct path is zero and negative on wrong paths. The running metric of a
//! full path relates to the list decoder's penalty `pm` by the affine map
//! `M = -pm / ln 2 + sum_i (1 - bias[i])`.
//!
//! LLRs are recomputed from the stored path on re-visits: only the
//! single-path partial-sum arrays plus a per-depth LLR cache along the
//! current path are kept, and resuming forward movement after a rewind
//! replays the prefix.

use crate::codespec::{reliability_table, CodeSpec};
use crate::encoder::{self, CarrierWord, PrecodedWord};
use crate::error::{Error, Result};
use crate::flops::FlopCounter;
use crate::numerics::softplus;
use crate::scl::Candidate;
use crate::sctree::ScState;

/// Cap on forward+backward moves used throughout the experiments.
pub const DEFAULT_CYCLE_CAP: u64 = 1_300_000;

/// Search parameters: threshold spacing, per-phase metric bias, move cap.
#[derive(Debug, Clone)]
pub struct FanoConfig {
    pub delta: f64,
    pub bias: Vec<f64>,
    pub cycle_cap: u64,
}

impl FanoConfig {
    pub fn new(delta: f64, bias: Vec<f64>, cycle_cap: u64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidArgument("delta must be positive and finite".into()));
        }
        if cycle_cap == 0 {
            return Err(Error::InvalidArgument("cycle cap must be >= 1".into()));
        }
        if bias.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument("bias values must be finite".into()));
        }
        Ok(FanoConfig { delta, bias, cycle_cap })
    }

    /// Default bias: per-phase mutual-information estimates of the bit
    /// channels at the given SNR (Eb/N0 dB, rate taken from the spec as
    /// Es/N0-equivalent at rate 1/2).
    pub fn reliability(spec: &CodeSpec, snr_db: f64, delta: f64, cycle_cap: u64) -> Result<Self> {
        let table = reliability_table(spec.n(), snr_db)?;
        FanoConfig::new(delta, table.mutual_information(), cycle_cap)
    }

    /// Constant bias `b` at every phase.
    pub fn constant(spec: &CodeSpec, b: f64, delta: f64, cycle_cap: u64) -> Result<Self> {
        FanoConfig::new(delta, vec![b; spec.n()], cycle_cap)
    }
}

/// One move along the search tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Forward,
    Backward,
}

/// Move log of a completed decode.
#[derive(Debug, Clone, Default)]
pub struct FanoTrace {
    pub moves: Vec<Move>,
}

/// Cycles consumed by a trace: forward plus backward moves.
pub fn count_cycles(trace: &FanoTrace) -> u64 {
    trace.moves.len() as u64
}

/// Decode result with complexity accounting.
#[derive(Debug, Clone)]
pub struct FanoOutcome {
    /// Decoded candidate, or `None` when the cycle cap was reached before
    /// the last tree level (a decoding failure).
    pub result: Option<Candidate>,
    pub cycles: u64,
    /// Arrivals at decision nodes (levels with two outgoing edges),
    /// including the starting node and re-visits.
    pub nodes_visited: u64,
    /// Fano metric (bits, bias applied) of the output path; NaN on failure.
    pub final_metric: f64,
    pub flops: FlopCounter,
}

/// Reusable Fano decoder for one code.
pub struct FanoDecoder {
    spec: CodeSpec,
    sc: ScState,
    u_path: Vec<u8>,
    v_path: Vec<bool>,
    taken_rank: Vec<u8>,
    next_rank: Vec<u8>,
    node_metric: Vec<f64>,
    llr_cache: Vec<f64>,
}

impl FanoDecoder {
    pub fn new(spec: &CodeSpec) -> Self {
        let n = spec.n();
        FanoDecoder {
            spec: spec.clone(),
            sc: ScState::new(spec.m()),
            u_path: Vec::with_capacity(n),
            v_path: Vec::with_capacity(n),
            taken_rank: vec![0; n],
            next_rank: vec![0; n + 1],
            node_metric: vec![0.0; n + 1],
            llr_cache: vec![0.0; n],
        }
    }

    pub fn decode(&mut self, llrs: &[f64], cfg: &FanoConfig) -> Result<FanoOutcome> {
        self.run(llrs, cfg, None)
    }

    pub fn decode_traced(&mut self, llrs: &[f64], cfg: &FanoConfig) -> Result<(FanoOutcome, FanoTrace)> {
        let mut trace = FanoTrace::default();
        let outcome = self.run(llrs, cfg, Some(&mut trace))?;
        Ok((outcome, trace))
    }

    fn run(
        &mut self,
        llrs: &[f64],
        cfg: &FanoConfig,
        mut trace: Option<&mut FanoTrace>,
    ) -> Result<FanoOutcome> {
        let n = self.spec.n();
        if llrs.len() != n {
            return Err(Error::InvalidArgument(format!("expected {n} LLRs, got {}", llrs.len())));
        }
        if cfg.bias.len() != n {
            return Err(Error::InvalidArgument(format!(
                "bias vector has {} entries, expected {n}",
                cfg.bias.len()
            )));
        }
        if llrs.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidArgument("LLRs must be finite".into()));
        }
        let delta = cfg.delta;
        let gen = self.spec.generator();

        self.sc.flops.reset();
        self.sc.reset(llrs);
        self.u_path.clear();
        self.v_path.clear();
        self.next_rank[0] = 0;
        self.node_metric[0] = 0.0;
        self.llr_cache[0] = self.sc.llr();
        let mut metric_evals: u64 = 0;

        let mut depth = 0usize;
        let mut threshold = 0.0f64;
        let mut cycles = 0u64;
        let mut nodes_visited = self.spec.is_data(0) as u64;
        let mut failed = false;

        // branch metric in bits for deciding `u` at `depth`
        macro_rules! gamma {
            ($u:expr) => {{
                metric_evals += 1;
                let lam = self.llr_cache[depth];
                let pen = softplus(if $u { lam } else { -lam });
                -pen / std::f64::consts::LN_2 + 1.0 - cfg.bias[depth]
            }};
        }

        'search: loop {
            // candidate branches at the current node, best metric first
            let frozen = self.spec.is_frozen(depth);
            let feedback = encoder::dynamic_frozen_value(&self.v_path, gen);
            let branch_count: u8 = if frozen { 1 } else { 2 };
            let mut advanced = false;
            if self.next_rank[depth] < branch_count {
                let u = if frozen {
                    feedback
                } else {
                    // rank 0 follows the hard decision, rank 1 opposes it
                    let best = self.llr_cache[depth] < 0.0;
                    if self.next_rank[depth] == 0 {
                        best
                    } else {
                        !best
                    }
                };
                let forward_metric = self.node_metric[depth] + gamma!(u);
                if forward_metric >= threshold {
                    // forward move
                    if self.sc.phase() != depth {
                        self.sc.replay(&self.u_path[..depth]);
                    }
                    self.sc.advance(u);
                    self.u_path.push(u as u8);
                    self.v_path.push(u ^ feedback);
                    self.taken_rank[depth] = self.next_rank[depth];
                    let origin_metric = self.node_metric[depth];
                    depth += 1;
                    self.node_metric[depth] = forward_metric;
                    self.next_rank[depth] = 0;
                    cycles += 1;
                    if let Some(t) = trace.as_deref_mut() {
                        t.moves.push(Move::Forward);
                    }
                    if depth < n {
                        self.llr_cache[depth] = self.sc.llr();
                        nodes_visited += self.spec.is_data(depth) as u64;
                    }
                    // tighten only on first visits
                    if origin_metric < threshold + delta {
                        threshold += delta * ((forward_metric - threshold) / delta).floor();
                    }
                    if depth == n {
                        break 'search;
                    }
                    if cycles >= cfg.cycle_cap {
                        failed = true;
                        break 'search;
                    }
                    advanced = true;
                }
            }
            if advanced {
                continue;
            }
            // cannot move forward: back up or loosen
            if depth > 0 && self.node_metric[depth - 1] >= threshold {
                depth -= 1;
                self.u_path.pop();
                self.v_path.pop();
                self.next_rank[depth] = self.taken_rank[depth] + 1;
                cycles += 1;
                if let Some(t) = trace.as_deref_mut() {
                    t.moves.push(Move::Backward);
                }
                nodes_visited += self.spec.is_data(depth) as u64;
                if cycles >= cfg.cycle_cap {
                    failed = true;
                    break 'search;
                }
            } else {
                threshold -= delta;
                self.next_rank[depth] = 0;
            }
        }

        let mut flops = self.sc.flops;
        flops.metric_updates += metric_evals;
        if failed {
            return Ok(FanoOutcome {
                result: None,
                cycles,
                nodes_visited,
                final_metric: f64::NAN,
                flops,
            });
        }
        let u = PrecodedWord(self.u_path.iter().map(|&b| b != 0).collect());
        let v = CarrierWord(self.v_path.clone());
        let codeword = encoder::polar_transform(&u)?;
        let data = encoder::extract_data(&v, &self.spec)?;
        Ok(FanoOutcome {
            result: Some(Candidate {
                data,
                carrier: v,
                precoded: u,
                codeword,
                metric: natural_penalty_of(self.node_metric[n], &cfg.bias),
            }),
            cycles,
            nodes_visited,
            final_metric: self.node_metric[n],
            flops,
        })
    }
}

/// Invert the affine relation: recover the list-decoder penalty (natural
/// log) from a full-path Fano metric.
fn natural_penalty_of(fano_metric: f64, bias: &[f64]) -> f64 {
    let bias_sum: f64 = bias.iter().map(|b| 1.0 - b).sum();
    (bias_sum - fano_metric) * std::f64::consts::LN_2
}

/// One-shot decode.
pub fn fano_decode(llrs: &[f64], spec: &CodeSpec, cfg: &FanoConfig) -> Result<FanoOutcome> {
    FanoDecoder::new(spec).decode(llrs, cfg)
}
