//! Single-path successive-cancellation engine.
//!
//! Owns one set of LLR and partial-sum arrays (levels 0..=m, level 0 being
//! the channel) and advances phase by phase given externally chosen bits.
//! The list decoder keeps its own lazily-copied variant; this one backs
//! teacher-forced metric evaluation, the Fano search, and the naive
//! full-copy reference decoder used as a test oracle.

use crate::flops::FlopCounter;
use crate::numerics::{boxplus, softplus};

#[derive(Debug, Clone)]
pub(crate) struct ScState {
    m: usize,
    n: usize,
    /// p[0] is the channel; p[lambda] has 2^(m-lambda) entries.
    p: Vec<Vec<f64>>,
    /// c[lambda] holds 2^(m-lambda) (col0, col1) pairs, interleaved.
    c: Vec<Vec<u8>>,
    /// Next phase to decide; P arrays are current for this phase.
    phase: usize,
    pub flops: FlopCounter,
}

impl ScState {
    pub fn new(m: usize) -> Self {
        let n = 1 << m;
        let p = (0..=m).map(|l| vec![0.0; 1 << (m - l)]).collect();
        let c = (0..=m).map(|l| vec![0u8; 2 << (m - l)]).collect();
        ScState { m, n, p, c, phase: 0, flops: FlopCounter::default() }
    }

    /// Load channel LLRs and prepare phase 0.
    pub fn reset(&mut self, llrs: &[f64]) {
        assert_eq!(llrs.len(), self.n);
        self.p[0].copy_from_slice(llrs);
        self.phase = 0;
        self.calc_p(self.m, 0);
    }

    /// Replay a decided prefix from scratch; afterwards the decision LLR for
    /// phase `prefix.len()` is available.
    pub fn replay(&mut self, prefix: &[u8]) {
        self.phase = 0;
        self.calc_p(self.m, 0);
        for &u in prefix {
            self.advance(u != 0);
        }
    }

    #[inline]
    pub fn phase(&self) -> usize {
        self.phase
    }

    /// Decision LLR for the current phase.
    #[inline]
    pub fn llr(&self) -> f64 {
        self.p[self.m][0]
    }

    /// Commit the bit for the current phase and advance.
    pub fn advance(&mut self, u: bool) {
        let phase = self.phase;
        debug_assert!(phase < self.n);
        self.c[self.m][phase & 1] = u as u8;
        if phase & 1 == 1 && phase != self.n - 1 {
            self.update_c(self.m, phase);
        }
        self.phase = phase + 1;
        if self.phase < self.n {
            self.calc_p(self.m, self.phase);
        }
    }

    fn calc_p(&mut self, lambda: usize, phi: usize) {
        if lambda == 0 {
            return;
        }
        let branch = phi >> (self.m - lambda);
        if branch & 1 == 0 {
            self.calc_p(lambda - 1, phi);
        }
        let size = 1 << (self.m - lambda);
        let (lo, hi) = self.p.split_at_mut(lambda);
        let src = &lo[lambda - 1];
        let dst = &mut hi[0];
        if branch & 1 == 0 {
            for beta in 0..size {
                dst[beta] = boxplus(src[2 * beta], src[2 * beta + 1]);
            }
            self.flops.f_evals += size as u64;
        } else {
            let cs = &self.c[lambda];
            for beta in 0..size {
                let sign = 1.0 - 2.0 * cs[2 * beta] as f64;
                dst[beta] = sign * src[2 * beta] + src[2 * beta + 1];
            }
            self.flops.g_evals += size as u64;
        }
    }

    fn update_c(&mut self, lambda: usize, branch: usize) {
        if lambda < 2 {
            return;
        }
        let size = 1 << (self.m - lambda);
        let pcol = (branch >> 1) & 1;
        let (lo, hi) = self.c.split_at_mut(lambda);
        let dst = &mut lo[lambda - 1];
        let src = &hi[0];
        for beta in 0..size {
            dst[2 * (2 * beta) + pcol] = src[2 * beta] ^ src[2 * beta + 1];
            dst[2 * (2 * beta + 1) + pcol] = src[2 * beta + 1];
        }
        if (branch >> 1) & 1 == 1 {
            self.update_c(lambda - 1, branch >> 1);
        }
    }
}

/// Additive penalty for deciding `u` against decision LLR `l`:
/// `ln(1 + exp(-(1-2u) l))`.
#[inline]
pub(crate) fn penalty(l: f64, u: bool) -> f64 {
    softplus(if u { l } else { -l })
}
