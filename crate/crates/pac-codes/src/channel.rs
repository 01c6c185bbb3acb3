//! BIAWGN channel: BPSK modulation, calibrated noise, LLR computation.
//!
//! Randomness is reproducible and parallel-safe: every frame draws from its
//! own ChaCha stream keyed by `(master seed, frame index)`, so results do not
//! depend on how frames are distributed over workers.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Channel calibration: `sigma^2 = 1 / (2 R 10^(EbN0/10))` under unit-energy
/// BPSK.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub ebno_db: f64,
    pub rate: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl ChannelConfig {
    pub fn new(ebno_db: f64, rate: f64, seed: u64) -> Result<Self> {
        if !ebno_db.is_finite() || !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "bad channel parameters: ebno_db={ebno_db}, rate={rate}"
            )));
        }
        let sigma = (1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0))).sqrt();
        Ok(ChannelConfig { ebno_db, rate, sigma, seed })
    }

    /// Independent, reproducible substream for one frame.
    pub fn frame_rng(&self, frame: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(frame);
        rng
    }

    /// Add calibrated Gaussian noise to BPSK symbols.
    pub fn transmit(&self, s: &[f64], rng: &mut impl Rng) -> Vec<f64> {
        s.iter()
            .map(|&si| si + self.sigma * rng.sample::<f64, _>(StandardNormal))
            .collect()
    }

    /// Channel LLRs, natural-log domain, positive favors bit 0:
    /// `lambda_i = 2 y_i / sigma^2`.
    pub fn llr(&self, y: &[f64]) -> Vec<f64> {
        let scale = 2.0 / (self.sigma * self.sigma);
        y.iter().map(|&yi| scale * yi).collect()
    }
}

/// BPSK map `s_i = 1 - 2 x_i`.
pub fn modulate(x: &[bool]) -> Vec<f64> {
    x.iter().map(|&b| if b { -1.0 } else { 1.0 }).collect()
}

/// Draw `k` uniform data bits from a frame stream.
pub fn random_data(rng: &mut impl Rng, k: usize) -> Vec<bool> {
    (0..k).map(|_| rng.random()).collect()
}
