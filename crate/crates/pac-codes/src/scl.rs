//! Successive-cancellation list decoding of PAC codes.
//!
//! PAC codes are decoded here as polar codes with dynamically frozen bits:
//! the list decoder keeps the usual lazily-copied LLR/partial-sum arrays per
//! path, plus one convolutional shift register per path holding the last
//! `nu` decided carrier bits. At a frozen phase every path extends with the
//! precoded bit forced by its own register; at a data phase paths fork and
//! the best `L` of the `2L` children survive globally.
//!
//! Path metrics are exact additive penalties in the natural-log domain,
//! `pm += ln(1 + exp(-(1-2u) lambda))`, with the exact box-plus LLR
//! recursion, so the final metric of a path equals `-ln P(y | x)` up to a
//! path-independent constant and candidate ranking is exactly
//! likelihood ranking.

use crate::bits;
use crate::codespec::CodeSpec;
use crate::encoder::{self, CarrierWord, Codeword, DataWord, PrecodedWord};
use crate::error::{Error, Result};
use crate::flops::FlopCounter;
use crate::numerics::boxplus;
use crate::sctree::{penalty, ScState};

/// Memory budget for one decoder instance; construction fails with a
/// resource error (naming the feasible maximum list size) beyond it.
const DEFAULT_MEMORY_BUDGET: usize = 4 << 30;

/// Counters accumulated over one decode call.
#[derive(Debug, Clone, Copy, Default)]
pub struct DecodeCounters {
    /// Visits to decision nodes: one per (active path, data phase) pair.
    pub decision_nodes: u64,
    pub flops: FlopCounter,
}

/// Decision-node visits of the list decoder under the counting convention
/// used by the runtime counter: sum over data phases of the number of active
/// paths entering that phase, `sum_{i=1..k} min(2^(i-1), L)`.
pub fn decision_node_count(list_size: u64, k: u64) -> u64 {
    let mut total = 0u64;
    let mut active = 1u64;
    for _ in 0..k {
        total += active;
        active = (2 * active).min(list_size);
    }
    total
}

/// The alternative closed form `L(k + 1 - ceil(log2 L)) + 2^ceil(log2 L) - 1`,
/// which additionally counts the children created while the list is still
/// doubling. It exceeds [`decision_node_count`] by exactly
/// `2^ceil(log2 L)`; reports print both with a convention note.
pub fn decision_node_count_inclusive(list_size: u64, k: u64) -> u64 {
    let lg = list_size.next_power_of_two().trailing_zeros() as u64;
    list_size * (k + 1 - lg) + (1u64 << lg) - 1
}

#[derive(Debug, Clone, Copy)]
struct Fork {
    metric: f64,
    path: u32,
    bit: u8,
}

/// Lazy-copy list decoder. One instance owns its scratch memory and is
/// reused across frames; instances are independent.
pub struct ListDecoder {
    spec: CodeSpec,
    list_size: usize,
    m: usize,
    n: usize,
    wpb: usize,
    // per-level array pools, indexed 1..=m (level 0 is the channel)
    p_data: Vec<Vec<f64>>,
    p_ref: Vec<Vec<u32>>,
    p_free: Vec<Vec<u32>>,
    p_of: Vec<Vec<u32>>,
    c_data: Vec<Vec<u8>>,
    c_ref: Vec<Vec<u32>>,
    c_free: Vec<Vec<u32>>,
    c_of: Vec<Vec<u32>>,
    channel: Vec<f64>,
    active: Vec<bool>,
    inactive: Vec<u32>,
    metrics: Vec<f64>,
    regs: Vec<u64>,
    u_hist: Vec<u64>,
    v_hist: Vec<u64>,
    counters: DecodeCounters,
    // scratch
    act_scratch: Vec<u32>,
    slot_scratch: Vec<(u32, u32, u32)>,
    fork_buf: Vec<Fork>,
    keep0: Vec<bool>,
    keep1: Vec<bool>,
}

impl ListDecoder {
    pub fn new(spec: &CodeSpec, list_size: usize) -> Result<Self> {
        Self::with_memory_budget(spec, list_size, DEFAULT_MEMORY_BUDGET)
    }

    pub fn with_memory_budget(spec: &CodeSpec, list_size: usize, budget: usize) -> Result<Self> {
        if list_size == 0 {
            return Err(Error::InvalidArgument("list size must be >= 1".into()));
        }
        let n = spec.n();
        let m = spec.m();
        let wpb = bits::words_for(n);
        let per_path = (n - 1) * 8 + (n - 1) * 2 + 2 * wpb * 8 + 64;
        if per_path.saturating_mul(list_size) > budget {
            let feasible = budget / per_path;
            return Err(Error::Resource(format!(
                "list size {list_size} needs ~{} MiB; feasible maximum at this budget is L={feasible}",
                per_path.saturating_mul(list_size) >> 20
            )));
        }
        let l = list_size;
        let mut p_data = vec![Vec::new()];
        let mut c_data = vec![Vec::new()];
        for lambda in 1..=m {
            let size = 1usize << (m - lambda);
            p_data.push(vec![0.0; l * size]);
            c_data.push(vec![0u8; l * 2 * size]);
        }
        let per_level_u32 = |fill: u32| -> Vec<Vec<u32>> {
            (0..=m).map(|_| vec![fill; l]).collect()
        };
        Ok(ListDecoder {
            spec: spec.clone(),
            list_size: l,
            m,
            n,
            wpb,
            p_data,
            p_ref: per_level_u32(0),
            p_free: (0..=m).map(|_| Vec::with_capacity(l)).collect(),
            p_of: per_level_u32(0),
            c_data,
            c_ref: per_level_u32(0),
            c_free: (0..=m).map(|_| Vec::with_capacity(l)).collect(),
            c_of: per_level_u32(0),
            channel: vec![0.0; n],
            active: vec![false; l],
            inactive: Vec::with_capacity(l),
            metrics: vec![0.0; l],
            regs: vec![0; l],
            u_hist: vec![0; l * wpb],
            v_hist: vec![0; l * wpb],
            counters: DecodeCounters::default(),
            act_scratch: Vec::with_capacity(l),
            slot_scratch: Vec::with_capacity(l),
            fork_buf: Vec::with_capacity(2 * l),
            keep0: vec![false; l],
            keep1: vec![false; l],
        })
    }

    pub fn list_size(&self) -> usize {
        self.list_size
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    /// Counters of the most recent decode.
    pub fn counters(&self) -> DecodeCounters {
        self.counters
    }

    pub fn decode(&mut self, llrs: &[f64]) -> Result<CandidateList> {
        self.decode_inspect(llrs, |_, _| {})
    }

    /// Decode, invoking `inspect(phase, self)` after every phase. Intended
    /// for tests and instrumentation.
    pub fn decode_inspect(
        &mut self,
        llrs: &[f64],
        mut inspect: impl FnMut(usize, &ListDecoder),
    ) -> Result<CandidateList> {
        if llrs.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected {} LLRs, got {}",
                self.n,
                llrs.len()
            )));
        }
        self.init(llrs);
        for phi in 0..self.n {
            self.calc_p(self.m, phi);
            if self.spec.is_frozen(phi) {
                self.continue_frozen(phi);
            } else {
                self.counters.decision_nodes += self.active_count() as u64;
                self.continue_unfrozen(phi);
            }
            if phi & 1 == 1 && phi != self.n - 1 {
                self.update_c(self.m, phi);
            }
            inspect(phi, self);
        }
        Ok(self.finalize())
    }

    fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    fn init(&mut self, llrs: &[f64]) {
        self.channel.copy_from_slice(llrs);
        self.counters = DecodeCounters::default();
        self.active.fill(false);
        self.inactive.clear();
        for p in (0..self.list_size as u32).rev() {
            self.inactive.push(p);
        }
        for lambda in 1..=self.m {
            self.p_ref[lambda].fill(0);
            self.c_ref[lambda].fill(0);
            self.p_free[lambda].clear();
            self.c_free[lambda].clear();
            for s in (0..self.list_size as u32).rev() {
                self.p_free[lambda].push(s);
                self.c_free[lambda].push(s);
            }
        }
        // initial path
        let p0 = self.inactive.pop().unwrap() as usize;
        self.active[p0] = true;
        self.metrics[p0] = 0.0;
        self.regs[p0] = 0;
        self.u_hist[p0 * self.wpb..(p0 + 1) * self.wpb].fill(0);
        self.v_hist[p0 * self.wpb..(p0 + 1) * self.wpb].fill(0);
        for lambda in 1..=self.m {
            let ps = self.p_free[lambda].pop().unwrap();
            self.p_ref[lambda][ps as usize] = 1;
            self.p_of[lambda][p0] = ps;
            let cs = self.c_free[lambda].pop().unwrap();
            self.c_ref[lambda][cs as usize] = 1;
            self.c_of[lambda][p0] = cs;
        }
    }

    fn kill_path(&mut self, path: usize) {
        debug_assert!(self.active[path]);
        self.active[path] = false;
        self.inactive.push(path as u32);
        for lambda in 1..=self.m {
            let ps = self.p_of[lambda][path] as usize;
            self.p_ref[lambda][ps] -= 1;
            if self.p_ref[lambda][ps] == 0 {
                self.p_free[lambda].push(ps as u32);
            }
            let cs = self.c_of[lambda][path] as usize;
            self.c_ref[lambda][cs] -= 1;
            if self.c_ref[lambda][cs] == 0 {
                self.c_free[lambda].push(cs as u32);
            }
        }
    }

    fn clone_path(&mut self, src: usize) -> usize {
        let dst = self.inactive.pop().expect("list capacity exceeded") as usize;
        self.active[dst] = true;
        self.metrics[dst] = self.metrics[src];
        self.regs[dst] = self.regs[src];
        let (s, d) = (src * self.wpb, dst * self.wpb);
        self.u_hist.copy_within(s..s + self.wpb, d);
        self.v_hist.copy_within(s..s + self.wpb, d);
        for lambda in 1..=self.m {
            let ps = self.p_of[lambda][src];
            self.p_of[lambda][dst] = ps;
            self.p_ref[lambda][ps as usize] += 1;
            let cs = self.c_of[lambda][src];
            self.c_of[lambda][dst] = cs;
            self.c_ref[lambda][cs as usize] += 1;
        }
        dst
    }

    /// Writable P slot for (level, path); no copy since callers overwrite
    /// every entry.
    fn cow_p_overwrite(&mut self, lambda: usize, path: usize) -> u32 {
        let slot = self.p_of[lambda][path];
        if self.p_ref[lambda][slot as usize] == 1 {
            return slot;
        }
        self.p_ref[lambda][slot as usize] -= 1;
        let fresh = self.p_free[lambda].pop().expect("P pool exhausted");
        self.p_ref[lambda][fresh as usize] = 1;
        self.p_of[lambda][path] = fresh;
        fresh
    }

    /// Writable C slot for (level, path); copies on clone since writes are
    /// partial.
    fn cow_c(&mut self, lambda: usize, path: usize) -> u32 {
        let slot = self.c_of[lambda][path];
        if self.c_ref[lambda][slot as usize] == 1 {
            return slot;
        }
        self.c_ref[lambda][slot as usize] -= 1;
        let fresh = self.c_free[lambda].pop().expect("C pool exhausted");
        self.c_ref[lambda][fresh as usize] = 1;
        self.c_of[lambda][path] = fresh;
        let size = 2 << (self.m - lambda);
        let (from, to) = (slot as usize * size, fresh as usize * size);
        self.c_data[lambda].copy_within(from..from + size, to);
        fresh
    }

    fn calc_p(&mut self, lambda: usize, phi: usize) {
        if lambda == 0 {
            return;
        }
        let branch = phi >> (self.m - lambda);
        if branch & 1 == 0 {
            self.calc_p(lambda - 1, phi);
        }
        let size = 1usize << (self.m - lambda);
        // resolve slots first, then compute with disjoint borrows
        let mut scratch = std::mem::take(&mut self.act_scratch);
        scratch.clear();
        scratch.extend((0..self.list_size as u32).filter(|&p| self.active[p as usize]));
        let mut slots = std::mem::take(&mut self.slot_scratch);
        slots.clear();
        for &p in &scratch {
            let src = if lambda == 1 { 0 } else { self.p_of[lambda - 1][p as usize] };
            let dst = self.cow_p_overwrite(lambda, p as usize);
            let cslot = self.c_of[lambda][p as usize];
            slots.push((src, dst, cslot));
        }
        let n_act = slots.len() as u64;
        if branch & 1 == 0 {
            let (lo, hi) = self.p_data.split_at_mut(lambda);
            let src_pool: &[f64] = if lambda == 1 { &self.channel } else { &lo[lambda - 1] };
            let dst_pool = &mut hi[0];
            for &(src, dst, _) in &slots {
                let s = &src_pool[src as usize * 2 * size..(src as usize + 1) * 2 * size];
                let d = &mut dst_pool[dst as usize * size..(dst as usize + 1) * size];
                for beta in 0..size {
                    d[beta] = boxplus(s[2 * beta], s[2 * beta + 1]);
                }
            }
            self.counters.flops.f_evals += n_act * size as u64;
        } else {
            let (lo, hi) = self.p_data.split_at_mut(lambda);
            let src_pool: &[f64] = if lambda == 1 { &self.channel } else { &lo[lambda - 1] };
            let dst_pool = &mut hi[0];
            let c_pool = &self.c_data[lambda];
            for &(src, dst, cslot) in &slots {
                let s = &src_pool[src as usize * 2 * size..(src as usize + 1) * 2 * size];
                let d = &mut dst_pool[dst as usize * size..(dst as usize + 1) * size];
                let cs = &c_pool[cslot as usize * 2 * size..(cslot as usize + 1) * 2 * size];
                for beta in 0..size {
                    let sign = 1.0 - 2.0 * cs[2 * beta] as f64;
                    d[beta] = sign * s[2 * beta] + s[2 * beta + 1];
                }
            }
            self.counters.flops.g_evals += n_act * size as u64;
        }
        self.act_scratch = scratch;
        self.slot_scratch = slots;
    }

    fn update_c(&mut self, lambda: usize, phi: usize) {
        if lambda < 2 {
            return;
        }
        let branch = phi >> (self.m - lambda);
        debug_assert!(branch & 1 == 1);
        let size = 1usize << (self.m - lambda);
        let pcol = (branch >> 1) & 1;
        let mut scratch = std::mem::take(&mut self.act_scratch);
        scratch.clear();
        scratch.extend((0..self.list_size as u32).filter(|&p| self.active[p as usize]));
        let mut slots = std::mem::take(&mut self.slot_scratch);
        slots.clear();
        for &p in &scratch {
            let src = self.c_of[lambda][p as usize];
            let dst = self.cow_c(lambda - 1, p as usize);
            slots.push((src, dst, 0));
        }
        {
            let (lo, hi) = self.c_data.split_at_mut(lambda);
            let dst_pool = &mut lo[lambda - 1];
            let src_pool = &hi[0];
            for &(src, dst, _) in &slots {
                let s = &src_pool[src as usize * 2 * size..(src as usize + 1) * 2 * size];
                let d = &mut dst_pool[dst as usize * 4 * size..(dst as usize + 1) * 4 * size];
                for beta in 0..size {
                    d[2 * (2 * beta) + pcol] = s[2 * beta] ^ s[2 * beta + 1];
                    d[2 * (2 * beta + 1) + pcol] = s[2 * beta + 1];
                }
            }
        }
        self.act_scratch = scratch;
        self.slot_scratch = slots;
        if (branch >> 1) & 1 == 1 {
            self.update_c(lambda - 1, phi);
        }
    }

    #[inline]
    fn decision_llr(&self, path: usize) -> f64 {
        let slot = self.p_of[self.m][path] as usize;
        self.p_data[self.m][slot]
    }

    #[inline]
    fn feedback(&self, path: usize) -> bool {
        bits::parity64(self.regs[path] & self.spec.generator().feedback_mask())
    }

    /// Commit (u, v) for `path` at phase `phi` with the given new metric.
    fn set_decision(&mut self, path: usize, phi: usize, u: bool, v: bool, metric: f64) {
        let slot = self.cow_c(self.m, path) as usize;
        self.c_data[self.m][2 * slot + (phi & 1)] = u as u8;
        let row = &mut self.u_hist[path * self.wpb..(path + 1) * self.wpb];
        bits::set_bit(row, phi, u);
        let row = &mut self.v_hist[path * self.wpb..(path + 1) * self.wpb];
        bits::set_bit(row, phi, v);
        let nu = self.spec.generator().memory();
        let mask = if nu == 0 { 0 } else { (1u64 << nu) - 1 };
        self.regs[path] = ((self.regs[path] << 1) | v as u64) & mask;
        self.metrics[path] = metric;
    }

    fn continue_frozen(&mut self, phi: usize) {
        let mut scratch = std::mem::take(&mut self.act_scratch);
        scratch.clear();
        scratch.extend((0..self.list_size as u32).filter(|&p| self.active[p as usize]));
        for &p in &scratch {
            let path = p as usize;
            let u = self.feedback(path);
            let lam = self.decision_llr(path);
            let metric = self.metrics[path] + penalty(lam, u);
            self.set_decision(path, phi, u, false, metric);
        }
        self.counters.flops.metric_updates += scratch.len() as u64;
        self.act_scratch = scratch;
    }

    fn continue_unfrozen(&mut self, phi: usize) {
        let mut act = std::mem::take(&mut self.act_scratch);
        act.clear();
        act.extend((0..self.list_size as u32).filter(|&p| self.active[p as usize]));

        self.fork_buf.clear();
        for &p in &act {
            let path = p as usize;
            let lam = self.decision_llr(path);
            let pm = self.metrics[path];
            self.fork_buf.push(Fork { metric: pm + penalty(lam, false), path: p, bit: 0 });
            self.fork_buf.push(Fork { metric: pm + penalty(lam, true), path: p, bit: 1 });
        }
        self.counters.flops.metric_updates += 2 * act.len() as u64;

        let keep = self.fork_buf.len().min(self.list_size);
        if keep < self.fork_buf.len() {
            // O(L) selection; the key (metric, path, bit) is a total order,
            // so the surviving set is deterministic
            self.fork_buf.select_nth_unstable_by(keep - 1, |a, b| {
                a.metric
                    .total_cmp(&b.metric)
                    .then(a.path.cmp(&b.path))
                    .then(a.bit.cmp(&b.bit))
            });
        }
        for &p in &act {
            self.keep0[p as usize] = false;
            self.keep1[p as usize] = false;
        }
        for f in &self.fork_buf[..keep] {
            if f.bit == 0 {
                self.keep0[f.path as usize] = true;
            } else {
                self.keep1[f.path as usize] = true;
            }
        }

        for &p in &act {
            let path = p as usize;
            if !self.keep0[path] && !self.keep1[path] {
                self.kill_path(path);
            }
        }
        for &p in &act {
            let path = p as usize;
            let (k0, k1) = (self.keep0[path], self.keep1[path]);
            if !k0 && !k1 {
                continue;
            }
            let lam = self.decision_llr(path);
            let pm = self.metrics[path];
            let fb = self.feedback(path);
            if k0 && k1 {
                // both children survive: the original keeps v = 0 (precoded
                // bit = feedback), the clone flips the newest register bit
                let clone = self.clone_path(path);
                let (m_fb, m_nfb) = (pm + penalty(lam, fb), pm + penalty(lam, !fb));
                self.set_decision(path, phi, fb, false, m_fb);
                self.set_decision(clone, phi, !fb, true, m_nfb);
            } else {
                let u = k1; // surviving precoded bit value
                let v = u ^ fb;
                self.set_decision(path, phi, u, v, pm + penalty(lam, u));
            }
        }
        self.act_scratch = act;
    }

    fn finalize(&mut self) -> CandidateList {
        let mut entries: Vec<(f64, usize, Vec<u64>)> = Vec::new();
        for path in 0..self.list_size {
            if !self.active[path] {
                continue;
            }
            let mut x = self.u_hist[path * self.wpb..(path + 1) * self.wpb].to_vec();
            encoder::polar_transform_words(&mut x, self.n);
            entries.push((self.metrics[path], path, x));
        }
        entries.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.2.cmp(&b.2)));
        let wpb = self.wpb;
        let mut list = CandidateList {
            n: self.n,
            k: self.spec.k(),
            wpb,
            profile: self.spec.profile().to_vec(),
            u: Vec::with_capacity(entries.len() * wpb),
            v: Vec::with_capacity(entries.len() * wpb),
            x: Vec::with_capacity(entries.len() * wpb),
            metrics: Vec::with_capacity(entries.len()),
        };
        for (metric, path, x) in entries {
            list.u.extend_from_slice(&self.u_hist[path * wpb..(path + 1) * wpb]);
            list.v.extend_from_slice(&self.v_hist[path * wpb..(path + 1) * wpb]);
            list.x.extend_from_slice(&x);
            list.metrics.push(metric);
        }
        list
    }

    /// Snapshot of the live paths (prefixes cover the phases decided so
    /// far). For tests and instrumentation.
    pub fn active_snapshot(&self, phases_done: usize) -> Vec<PathSnapshot> {
        let mut out = Vec::new();
        for path in 0..self.list_size {
            if !self.active[path] {
                continue;
            }
            let u_row = &self.u_hist[path * self.wpb..(path + 1) * self.wpb];
            let v_row = &self.v_hist[path * self.wpb..(path + 1) * self.wpb];
            out.push(PathSnapshot {
                index: path,
                u_prefix: bits::unpack(u_row, phases_done),
                v_prefix: bits::unpack(v_row, phases_done),
                register: self.regs[path],
                metric: self.metrics[path],
            });
        }
        out
    }
}

/// One live path, as seen by [`ListDecoder::active_snapshot`].
#[derive(Debug, Clone)]
pub struct PathSnapshot {
    pub index: usize,
    pub u_prefix: Vec<bool>,
    pub v_prefix: Vec<bool>,
    pub register: u64,
    pub metric: f64,
}

/// Decoded candidates sorted by metric (ascending; ties broken by codeword
/// comparison). Storage is packed; accessors materialize words on demand.
#[derive(Debug, Clone)]
pub struct CandidateList {
    n: usize,
    k: usize,
    wpb: usize,
    profile: Vec<usize>,
    u: Vec<u64>,
    v: Vec<u64>,
    x: Vec<u64>,
    metrics: Vec<f64>,
}

impl CandidateList {
    pub fn len(&self) -> usize {
        self.metrics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metrics.is_empty()
    }

    pub fn get(&self, i: usize) -> CandidateRef<'_> {
        assert!(i < self.len());
        CandidateRef { list: self, idx: i }
    }

    /// The most likely candidate.
    pub fn best(&self) -> CandidateRef<'_> {
        self.get(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = CandidateRef<'_>> {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Rank of the candidate whose precoded word matches `u_words`, if any.
    pub fn position_of_u(&self, u_words: &[u64]) -> Option<usize> {
        (0..self.len()).find(|&i| &self.u[i * self.wpb..(i + 1) * self.wpb] == u_words)
    }

    /// First candidate satisfying `pred`, e.g. a CRC check for CRC-aided
    /// selection.
    pub fn best_where(&self, mut pred: impl FnMut(CandidateRef<'_>) -> bool) -> Option<CandidateRef<'_>> {
        self.iter().find(|c| pred(*c))
    }

    /// True when every candidate re-encodes to its own codeword.
    pub fn all_reencode(&self, spec: &CodeSpec) -> bool {
        self.iter().all(|c| {
            encoder::encode(&c.data(), spec).map(|x| x.0 == c.codeword().0).unwrap_or(false)
        })
    }

    pub fn to_vec(&self) -> Vec<Candidate> {
        self.iter()
            .map(|c| Candidate {
                data: c.data(),
                carrier: c.carrier(),
                precoded: c.precoded(),
                codeword: c.codeword(),
                metric: c.metric(),
            })
            .collect()
    }
}

/// Borrowed view of one candidate.
#[derive(Debug, Clone, Copy)]
pub struct CandidateRef<'a> {
    list: &'a CandidateList,
    idx: usize,
}

impl CandidateRef<'_> {
    pub fn metric(&self) -> f64 {
        self.list.metrics[self.idx]
    }

    pub fn u_words(&self) -> &[u64] {
        &self.list.u[self.idx * self.list.wpb..(self.idx + 1) * self.list.wpb]
    }

    pub fn x_words(&self) -> &[u64] {
        &self.list.x[self.idx * self.list.wpb..(self.idx + 1) * self.list.wpb]
    }

    pub fn v_words(&self) -> &[u64] {
        &self.list.v[self.idx * self.list.wpb..(self.idx + 1) * self.list.wpb]
    }

    /// Hamming weight of the codeword.
    pub fn weight(&self) -> u32 {
        bits::weight(self.x_words(), self.list.n)
    }

    /// Data bits packed into a dedup key; requires k <= 128.
    pub fn data_key(&self) -> u128 {
        debug_assert!(self.list.k <= 128);
        let v = self.v_words();
        let mut key = 0u128;
        for (j, &pos) in self.list.profile.iter().enumerate() {
            if bits::get_bit(v, pos) {
                key |= 1 << j;
            }
        }
        key
    }

    pub fn codeword(&self) -> Codeword {
        Codeword(bits::unpack(self.x_words(), self.list.n))
    }

    pub fn precoded(&self) -> PrecodedWord {
        PrecodedWord(bits::unpack(self.u_words(), self.list.n))
    }

    pub fn carrier(&self) -> CarrierWord {
        CarrierWord(bits::unpack(self.v_words(), self.list.n))
    }

    pub fn data(&self) -> DataWord {
        let v = self.v_words();
        DataWord(self.list.profile.iter().map(|&i| bits::get_bit(v, i)).collect())
    }
}

/// Fully materialized candidate.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub data: DataWord,
    pub carrier: CarrierWord,
    pub precoded: PrecodedWord,
    pub codeword: Codeword,
    pub metric: f64,
}

/// Teacher-forced penalty of one precoded path: the metric the list decoder
/// assigns to exactly this path.
pub fn path_metric_of(u: &PrecodedWord, llrs: &[f64], spec: &CodeSpec) -> Result<f64> {
    if u.0.len() != spec.n() || llrs.len() != spec.n() {
        return Err(Error::InvalidArgument("length mismatch".into()));
    }
    let mut sc = ScState::new(spec.m());
    sc.reset(llrs);
    let mut pm = 0.0;
    for &bit in &u.0 {
        pm += penalty(sc.llr(), bit);
        sc.advance(bit);
    }
    Ok(pm)
}
