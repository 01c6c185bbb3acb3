//! Code parameters, rate profiles, and index utilities.
//!
//! A PAC code is described by its block length `n = 2^m`, dimension `k`, a
//! rate profile (the set `A` of carrier positions holding data bits), and the
//! generator of the rate-1 convolutional precoder. Profiles are constructed
//! either from index weights (RM rule) or from bit-channel reliabilities
//! obtained by Gaussian-approximation density evolution.

use crate::error::{Error, Result};
use crate::numerics::gauss_hermite;
use std::io::{BufRead, Write};

/// Generator of the rate-1 convolutional precoder, `c = (c_0, ..., c_nu)`
/// with `c_0 = c_nu = 1`. Tap `c_j` is stored at bit `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Generator {
    taps: u64,
    len: usize,
}

impl Generator {
    /// Arıkan's generator `c = (1,0,1,1,0,1,1)` (octal 0o133).
    pub fn arikan() -> Self {
        Generator::from_bits(&[true, false, true, true, false, true, true]).unwrap()
    }

    /// The identity precoder `c = (1)`; PAC degenerates to a polar code.
    pub fn identity() -> Self {
        Generator { taps: 1, len: 1 }
    }

    /// Build from coefficients `c_0, c_1, ..., c_nu` in that order.
    pub fn from_bits(coeffs: &[bool]) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > 64 {
            return Err(Error::InvalidArgument(format!(
                "generator must have 1..=64 taps, got {}",
                coeffs.len()
            )));
        }
        if !coeffs[0] {
            return Err(Error::InvalidArgument("generator requires c_0 = 1".into()));
        }
        if !*coeffs.last().unwrap() {
            return Err(Error::InvalidArgument("generator requires c_nu = 1".into()));
        }
        let mut taps = 0u64;
        for (j, &c) in coeffs.iter().enumerate() {
            if c {
                taps |= 1 << j;
            }
        }
        Ok(Generator { taps, len: coeffs.len() })
    }

    /// Parse `"1011011"` (binary, c_0 first) or `"0o133"` (octal value,
    /// most-significant bit = c_0).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bin: String = if let Some(oct) = s.strip_prefix("0o") {
            let v = u64::from_str_radix(oct, 8)
                .map_err(|e| Error::Parse(format!("bad octal generator {s:?}: {e}")))?;
            if v == 0 {
                return Err(Error::Parse("generator must be nonzero".into()));
            }
            format!("{v:b}")
        } else {
            s.to_string()
        };
        let coeffs: Result<Vec<bool>> = bin
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("bad generator digit {other:?} in {s:?}"))),
            })
            .collect();
        Generator::from_bits(&coeffs?)
    }

    /// Memory of the precoder (`nu`); the shift registers hold this many bits.
    #[inline]
    pub fn memory(&self) -> usize {
        self.len - 1
    }

    /// Number of coefficients, `nu + 1`.
    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coefficient `c_j`.
    #[inline]
    pub fn coeff(&self, j: usize) -> bool {
        j < self.len && (self.taps >> j) & 1 == 1
    }

    /// Taps `c_1..c_nu` packed at bit positions `0..nu`: the mask applied to
    /// a shift register holding `(v_{i-1}, ..., v_{i-nu})` to form the
    /// feedback sum of the convolution.
    #[inline]
    pub fn feedback_mask(&self) -> u64 {
        self.taps >> 1
    }

    pub fn coeffs(&self) -> Vec<bool> {
        (0..self.len).map(|j| self.coeff(j)).collect()
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for j in 0..self.len {
            write!(f, "{}", if self.coeff(j) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// How the profile set `A` is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileRule {
    /// Highest index weights (generates Reed-Muller codes when used with the
    /// identity precoder).
    Rm,
    /// Most reliable bit-channels under Gaussian-approximation density
    /// evolution at the given design SNR.
    Polar { design_snr_db: f64 },
    /// Explicit index set.
    Explicit(Vec<usize>),
}

/// Immutable description of an (n, k) PAC code.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    m: usize,
    n: usize,
    k: usize,
    profile: Vec<usize>,
    mask: Vec<bool>,
    generator: Generator,
}

impl CodeSpec {
    pub fn new(n: usize, k: usize, rule: &ProfileRule, generator: Generator) -> Result<Self> {
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::InvalidArgument(format!(
                "block length must be a power of two >= 2, got {n}"
            )));
        }
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        let profile = match rule {
            ProfileRule::Rm => rm_profile(n, k)?,
            ProfileRule::Polar { design_snr_db } => polar_profile(n, k, *design_snr_db)?,
            ProfileRule::Explicit(set) => {
                let mut set = set.clone();
                set.sort_unstable();
                set.dedup();
                if set.len() != k {
                    return Err(Error::InvalidArgument(format!(
                        "explicit profile has {} distinct indices, expected k={k}",
                        set.len()
                    )));
                }
                if set.iter().any(|&i| i >= n) {
                    return Err(Error::InvalidArgument("profile index out of range".into()));
                }
                set
            }
        };
        let mut mask = vec![false; n];
        for &i in &profile {
            mask[i] = true;
        }
        Ok(CodeSpec { m: n.trailing_zeros() as usize, n, k, profile, mask, generator })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    /// Tree depth m with n = 2^m.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Data positions, ascending.
    pub fn profile(&self) -> &[usize] {
        &self.profile
    }

    /// Frozen positions, ascending.
    pub fn frozen(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.mask[i]).collect()
    }

    /// O(1) membership test: is carrier position `i` a data position?
    #[inline]
    pub fn is_data(&self, i: usize) -> bool {
        self.mask[i]
    }

    #[inline]
    pub fn is_frozen(&self, i: usize) -> bool {
        !self.mask[i]
    }

    #[inline]
    pub fn generator(&self) -> Generator {
        self.generator
    }
}

/// Reverse the m-bit binary expansion of `i`.
pub fn bit_reverse(i: usize, m: usize) -> Result<usize> {
    if m >= usize::BITS as usize || i >= (1usize << m) {
        return Err(Error::InvalidArgument(format!("index {i} out of range for m={m}")));
    }
    Ok(bit_reverse_unchecked(i, m))
}

#[inline]
pub(crate) fn bit_reverse_unchecked(i: usize, m: usize) -> usize {
    let mut out = 0usize;
    for b in 0..m {
        out |= ((i >> b) & 1) << (m - 1 - b);
    }
    out
}

/// RM rate profile: the `k` indices of highest binary weight; ties at the
/// boundary weight prefer the larger index.
pub fn rm_profile(n: usize, k: usize) -> Result<Vec<usize>> {
    check_profile_args(n, k)?;
    let mut idx: Vec<usize> = (0..n).collect();
    // sort by (weight desc, index desc), keep first k
    idx.sort_unstable_by(|&a, &b| {
        (b.count_ones(), b).cmp(&(a.count_ones(), a))
    });
    let mut chosen = idx[..k].to_vec();
    chosen.sort_unstable();
    Ok(chosen)
}

/// Polar rate profile: the `k` most reliable bit-channels per
/// [`reliability_table`]; ties prefer the smaller index.
pub fn polar_profile(n: usize, k: usize, design_snr_db: f64) -> Result<Vec<usize>> {
    check_profile_args(n, k)?;
    if !design_snr_db.is_finite() {
        return Err(Error::InvalidArgument("design SNR must be finite".into()));
    }
    let table = reliability_table(n, design_snr_db)?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_unstable_by(|&a, &b| {
        table.values[b]
            .partial_cmp(&table.values[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut chosen = idx[..k].to_vec();
    chosen.sort_unstable();
    Ok(chosen)
}

fn check_profile_args(n: usize, k: usize) -> Result<()> {
    if !n.is_power_of_two() || n == 0 {
        return Err(Error::InvalidArgument(format!("n must be a power of two, got {n}")));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got k={k}")));
    }
    Ok(())
}

/// Per-index bit-channel reliability scores (higher = more reliable).
#[derive(Debug, Clone)]
pub struct ReliabilityTable {
    /// Mean LLR of each bit-channel under the Gaussian approximation.
    pub values: Vec<f64>,
    pub design_snr_db: f64,
}

impl ReliabilityTable {
    /// Mutual-information estimate I(W_i) of each bit-channel, computed from
    /// the mean LLR under the consistent-Gaussian assumption.
    pub fn mutual_information(&self) -> Vec<f64> {
        let gh = gauss_hermite(63);
        self.values.iter().map(|&m| mi_from_mean_llr(m, &gh)).collect()
    }
}

/// Bit-channel reliabilities by Gaussian-approximation density evolution.
///
/// Tracks the mean LLR through the polar recursion, with the check-node step
/// solved through the exactly-integrated phi function (no closed-form fit).
/// The design SNR is Eb/N0 in dB at rate 1/2; equivalently Es/N0, since the
/// two coincide when 2R = 1. Noise variance: sigma^2 = 10^(-snr/10).
pub fn reliability_table(n: usize, design_snr_db: f64) -> Result<ReliabilityTable> {
    if !n.is_power_of_two() || n == 0 {
        return Err(Error::InvalidArgument(format!("n must be a power of two, got {n}")));
    }
    if !design_snr_db.is_finite() {
        return Err(Error::InvalidArgument("design SNR must be finite".into()));
    }
    let sigma_sq = 10f64.powf(-design_snr_db / 10.0);
    let gh = gauss_hermite(63);
    let mut means = vec![2.0 / sigma_sq];
    while means.len() < n {
        let mut next = Vec::with_capacity(2 * means.len());
        for &mu in &means {
            let e = 1.0 - phi(mu, &gh);
            next.push(phi_inv(1.0 - e * e, &gh)); // check node (worse)
            next.push(2.0 * mu); // variable node (better)
        }
        means = next;
    }
    Ok(ReliabilityTable { values: means, design_snr_db })
}

/// phi(m) = 1 - E[tanh(L/2)] for L ~ N(m, 2m), by Gauss-Hermite quadrature.
fn phi(mean: f64, gh: &(Vec<f64>, Vec<f64>)) -> f64 {
    if mean <= 0.0 {
        return 1.0;
    }
    let (x, w) = gh;
    let s = (2.0 * 2.0 * mean).sqrt(); // sqrt(2 * var)
    let mut acc = 0.0;
    for (&t, &wi) in x.iter().zip(w) {
        acc += wi * ((mean + s * t) / 2.0).tanh();
    }
    1.0 - acc / std::f64::consts::PI.sqrt()
}

/// Inverse of [`phi`] by bisection (phi is strictly decreasing).
fn phi_inv(target: f64, gh: &(Vec<f64>, Vec<f64>)) -> f64 {
    if target >= 1.0 {
        return 0.0;
    }
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while phi(hi, gh) > target {
        hi *= 2.0;
        if hi > 1e9 {
            break;
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if phi(mid, gh) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// I(W) = 1 - E[log2(1 + e^-L)] for L ~ N(m, 2m).
pub(crate) fn mi_from_mean_llr(mean: f64, gh: &(Vec<f64>, Vec<f64>)) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let (x, w) = gh;
    let s = (2.0 * 2.0 * mean).sqrt();
    let mut acc = 0.0;
    for (&t, &wi) in x.iter().zip(w) {
        let l = mean + s * t;
        let sp = if l > 0.0 { (-l).exp().ln_1p() } else { -l + l.exp().ln_1p() };
        acc += wi * sp;
    }
    (1.0 - acc / (std::f64::consts::PI.sqrt() * std::f64::consts::LN_2)).clamp(0.0, 1.0)
}

/// Read a profile: one index per line, ascending.
pub fn read_profile<R: BufRead>(reader: R) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let v: usize = t
            .parse()
            .map_err(|e| Error::Parse(format!("profile line {}: {e}", lineno + 1)))?;
        out.push(v);
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parse("profile indices must be strictly ascending".into()));
    }
    Ok(out)
}

/// Write a profile: one index per line, ascending.
pub fn write_profile<W: Write>(mut writer: W, profile: &[usize]) -> Result<()> {
    for &i in profile {
        writeln!(writer, "{i}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_reverse_examples() {
        assert_eq!(bit_reverse(0, 3).unwrap(), 0);
        assert_eq!(bit_reverse(3, 3).unwrap(), 6);
        assert_eq!(bit_reverse(1, 7).unwrap(), 64);
        assert!(bit_reverse(8, 3).is_err());
    }

    #[test]
    fn bit_reverse_involution() {
        for m in 1..=10 {
            for i in 0..(1usize << m) {
                assert_eq!(bit_reverse(bit_reverse(i, m).unwrap(), m).unwrap(), i);
            }
        }
    }

    #[test]
    fn rm_profile_examples() {
        assert_eq!(rm_profile(8, 4).unwrap(), vec![3, 5, 6, 7]);
        assert_eq!(rm_profile(8, 1).unwrap(), vec![7]);
        // (128, 64): exactly the indices of weight >= 4, no tie-breaking
        let a = rm_profile(128, 64).unwrap();
        let by_weight: Vec<usize> = (0..128).filter(|i: &usize| i.count_ones() >= 4).collect();
        assert_eq!(a, by_weight);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn rm_profile_nesting_and_threshold() {
        // when k equals the count at or above a weight threshold, the set is
        // exactly that threshold set
        let n = 16;
        for t in 0..=4u32 {
            let k = (0..n).filter(|i: &usize| i.count_ones() >= t).count();
            if k == 0 {
                continue;
            }
            let a = rm_profile(n, k).unwrap();
            let expect: Vec<usize> = (0..n).filter(|i: &usize| i.count_ones() >= t).collect();
            assert_eq!(a, expect, "t={t}");
        }
        // the deterministic tie-break makes profiles prefixes of one fixed
        // ordering, so nesting holds for every k
        for k in 1..16 {
            let a: std::collections::BTreeSet<_> = rm_profile(16, k).unwrap().into_iter().collect();
            let b: std::collections::BTreeSet<_> =
                rm_profile(16, k + 1).unwrap().into_iter().collect();
            assert!(a.is_subset(&b), "k={k}");
        }
    }

    #[test]
    fn polar_profile_trivial() {
        assert_eq!(polar_profile(2, 1, 0.0).unwrap(), vec![1]);
        assert_eq!(polar_profile(2, 1, 3.0).unwrap(), vec![1]);
        assert_eq!(polar_profile(4, 1, 0.0).unwrap(), vec![3]);
        assert_eq!(polar_profile(4, 1, 2.0).unwrap(), vec![3]);
    }

    #[test]
    fn reliability_trivial_sizes() {
        let t1 = reliability_table(1, 2.0).unwrap();
        let sigma_sq = 10f64.powf(-0.2);
        assert!((t1.values[0] - 2.0 / sigma_sq).abs() < 1e-12);

        let t2 = reliability_table(2, 2.0).unwrap();
        assert!(t2.values[1] >= t2.values[0]);
    }

    #[test]
    fn reliability_respects_partial_order() {
        // i dominated bitwise by j => score_i <= score_j
        let t = reliability_table(64, 2.0).unwrap();
        for j in 0..64usize {
            for i in 0..64usize {
                if i & j == i && t.values[i] > t.values[j] + 1e-9 {
                    panic!("partial order violated: {i} vs {j}");
                }
            }
        }
    }

    #[test]
    fn polar_profile_respects_domination() {
        let a = polar_profile(128, 64, 2.0).unwrap();
        let mask: Vec<bool> = {
            let mut m = vec![false; 128];
            for &i in &a {
                m[i] = true;
            }
            m
        };
        for &j in &a {
            for i in 0..128usize {
                if i & j == j && !mask[i] {
                    panic!("{i} dominates {j} bitwise but is not in the profile");
                }
            }
        }
    }

    #[test]
    fn mutual_information_monotone() {
        let t = reliability_table(16, 2.0).unwrap();
        let mi = t.mutual_information();
        assert!(mi.iter().all(|&v| (0.0..=1.0).contains(&v)));
        // MI ordering follows mean-LLR ordering
        let mut idx: Vec<usize> = (0..16).collect();
        idx.sort_by(|&a, &b| t.values[a].partial_cmp(&t.values[b]).unwrap());
        for w in idx.windows(2) {
            assert!(mi[w[0]] <= mi[w[1]] + 1e-12);
        }
    }

    #[test]
    fn generator_parse_and_validate() {
        let g = Generator::parse("1011011").unwrap();
        assert_eq!(g, Generator::arikan());
        assert_eq!(g.memory(), 6);
        assert_eq!(Generator::parse("0o133").unwrap(), g);
        assert_eq!(g.to_string(), "1011011");
        assert!(Generator::parse("1011010").is_err()); // c_nu != 1
        assert!(Generator::parse("011011").is_err()); // c_0 != 1
        assert!(Generator::parse("10x1").is_err());
        assert_eq!(Generator::identity().memory(), 0);
    }

    #[test]
    fn generator_feedback_mask() {
        let g = Generator::arikan();
        // c_1..c_6 = 0,1,1,0,1,1 -> bits 0..5
        assert_eq!(g.feedback_mask(), 0b110110);
    }

    #[test]
    fn profile_io_roundtrip() {
        let a = rm_profile(32, 10).unwrap();
        let mut buf = Vec::new();
        write_profile(&mut buf, &a).unwrap();
        let back = read_profile(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(back, a);
        assert!(read_profile(std::io::Cursor::new(b"3\n1\n".as_slice())).is_err());
    }

    #[test]
    fn codespec_validation() {
        let g = Generator::arikan();
        assert!(CodeSpec::new(12, 4, &ProfileRule::Rm, g).is_err());
        assert!(CodeSpec::new(16, 0, &ProfileRule::Rm, g).is_err());
        assert!(CodeSpec::new(16, 17, &ProfileRule::Rm, g).is_err());
        let spec = CodeSpec::new(16, 8, &ProfileRule::Rm, g).unwrap();
        assert_eq!(spec.profile(), &[7, 9, 10, 11, 12, 13, 14, 15]);
        assert_eq!(spec.frozen().len(), 8);
        assert!(spec.is_data(15) && spec.is_frozen(0));
        assert_eq!(spec.m(), 4);
        assert!((spec.rate() - 0.5).abs() < 1e-12);
    }
}
