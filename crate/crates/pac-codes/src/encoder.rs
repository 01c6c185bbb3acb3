//! The three-step PAC encoding chain and its inverses.
//!
//! Encoding maps a k-bit data word through profile insertion (`d -> v`),
//! convolutional precoding (`u = v * T` for the upper-triangular Toeplitz
//! matrix built from the generator), and the polar transform
//! (`x = u * B_n * F^(m)` over GF(2), `F = [[1,0],[1,1]]`). All maps are
//! linear and invertible given the profile, which is what the decoders rely
//! on: `deconvolve` runs the precoder backwards bit by bit, and
//! [`dynamic_frozen_value`] gives the precoded bit forced at a frozen
//! position by the carrier history.

use crate::bits;
use crate::codespec::{bit_reverse_unchecked, CodeSpec, Generator};
use crate::error::{Error, Result};

/// The k data bits, `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataWord(pub Vec<bool>);

/// The length-n carrier vector `v`; zero at every frozen position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrierWord(pub Vec<bool>);

/// The length-n precoded vector `u = v * T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecodedWord(pub Vec<bool>);

/// The length-n codeword `x = u * B_n * F^(m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword(pub Vec<bool>);

impl Codeword {
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

/// Embed data bits into the carrier vector at the profile positions.
pub fn insert_profile(d: &DataWord, spec: &CodeSpec) -> Result<CarrierWord> {
    if d.0.len() != spec.k() {
        return Err(Error::InvalidArgument(format!(
            "data word has {} bits, spec expects k={}",
            d.0.len(),
            spec.k()
        )));
    }
    let mut v = vec![false; spec.n()];
    for (&pos, &bit) in spec.profile().iter().zip(&d.0) {
        v[pos] = bit;
    }
    Ok(CarrierWord(v))
}

/// Inverse of [`insert_profile`]: read the data bits back out of a carrier.
pub fn extract_data(v: &CarrierWord, spec: &CodeSpec) -> Result<DataWord> {
    if v.0.len() != spec.n() {
        return Err(Error::InvalidArgument(format!(
            "carrier word has {} bits, spec expects n={}",
            v.0.len(),
            spec.n()
        )));
    }
    Ok(DataWord(spec.profile().iter().map(|&i| v.0[i]).collect()))
}

/// Convolve the carrier with the generator: `u_i = sum_j c_j v_{i-j}` mod 2.
pub fn convolve(v: &CarrierWord, generator: Generator) -> PrecodedWord {
    let n = v.0.len();
    let nu = generator.memory();
    let fb = generator.feedback_mask();
    let mut u = vec![false; n];
    // register bit j holds v_{i-1-j}
    let mut reg: u64 = 0;
    let reg_mask = if nu == 0 { 0 } else { (1u64 << nu) - 1 };
    for i in 0..n {
        u[i] = v.0[i] ^ bits::parity64(reg & fb);
        reg = ((reg << 1) | v.0[i] as u64) & reg_mask;
    }
    PrecodedWord(u)
}

/// Run the precoder backwards: `v_i = u_i - sum_{j>=1} c_j v_{i-j}` mod 2,
/// left to right. Exact inverse of [`convolve`].
pub fn deconvolve(u: &PrecodedWord, generator: Generator) -> CarrierWord {
    let n = u.0.len();
    let nu = generator.memory();
    let fb = generator.feedback_mask();
    let mut v = vec![false; n];
    let mut reg: u64 = 0;
    let reg_mask = if nu == 0 { 0 } else { (1u64 << nu) - 1 };
    for i in 0..n {
        v[i] = u[i] ^ bits::parity64(reg & fb);
        reg = ((reg << 1) | v[i] as u64) & reg_mask;
    }
    CarrierWord(v)
}

impl std::ops::Index<usize> for PrecodedWord {
    type Output = bool;
    fn index(&self, i: usize) -> &bool {
        &self.0[i]
    }
}

/// Precoded bit forced at a frozen position by the last `nu` carrier bits.
///
/// `v_prefix` is the decided carrier prefix `v_0..v_{i-1}` (any length; only
/// the last `nu` bits enter the sum). The `c_0 v_i` term vanishes because
/// frozen positions carry `v_i = 0`.
pub fn dynamic_frozen_value(v_prefix: &[bool], generator: Generator) -> bool {
    let nu = generator.memory();
    let mut acc = false;
    for j in 1..=nu.min(v_prefix.len()) {
        acc ^= generator.coeff(j) && v_prefix[v_prefix.len() - j];
    }
    acc
}

/// The polar transform `x = u * B_n * F^(m)`: bit-reversal permutation first,
/// then the butterfly, run on machine words.
pub fn polar_transform(u: &PrecodedWord) -> Result<Codeword> {
    let n = u.0.len();
    if !n.is_power_of_two() || n == 0 {
        return Err(Error::InvalidArgument(format!("length must be a power of two, got {n}")));
    }
    let mut words = bits::pack(&u.0);
    polar_transform_words(&mut words, n);
    Ok(Codeword(bits::unpack(&words, n)))
}

/// In-place packed-word polar transform used by the decode hot paths.
pub(crate) fn polar_transform_words(words: &mut [u64], n: usize) {
    let m = n.trailing_zeros() as usize;
    // bit-reversal permutation (swap pairs i < rev(i))
    let mut permuted = vec![0u64; words.len()];
    for i in 0..n {
        if bits::get_bit(words, i) {
            bits::set_bit(&mut permuted, bit_reverse_unchecked(i, m), true);
        }
    }
    words.copy_from_slice(&permuted);
    bits::butterfly(words, n);
}

/// Full PAC encode: insert, convolve, transform.
pub fn encode(d: &DataWord, spec: &CodeSpec) -> Result<Codeword> {
    let v = insert_profile(d, spec)?;
    let u = convolve(&v, spec.generator());
    polar_transform(&u)
}
