//! Packed-bit helpers for the GF(2) hot paths.
//!
//! Bit vectors are packed little-endian into `u64` words: bit `i` lives in
//! word `i / 64` at position `i % 64`. The per-bit semantic interface of the
//! encoder stays `&[bool]`; packing is an internal representation used by the
//! polar transform and by the list decoder's path histories.

/// Number of 64-bit words needed for `n` bits.
#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub fn get_bit(words: &[u64], i: usize) -> bool {
    (words[i >> 6] >> (i & 63)) & 1 == 1
}

#[inline]
pub fn set_bit(words: &mut [u64], i: usize, v: bool) {
    let mask = 1u64 << (i & 63);
    if v {
        words[i >> 6] |= mask;
    } else {
        words[i >> 6] &= !mask;
    }
}

pub fn pack(bits: &[bool]) -> Vec<u64> {
    let mut words = vec![0u64; words_for(bits.len())];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            words[i >> 6] |= 1u64 << (i & 63);
        }
    }
    words
}

pub fn unpack(words: &[u64], n: usize) -> Vec<bool> {
    (0..n).map(|i| get_bit(words, i)).collect()
}

/// Hamming weight of the first `n` bits.
pub fn weight(words: &[u64], n: usize) -> u32 {
    let full = n / 64;
    let mut w: u32 = words[..full].iter().map(|x| x.count_ones()).sum();
    let rem = n % 64;
    if rem != 0 {
        w += (words[full] & ((1u64 << rem) - 1)).count_ones();
    }
    w
}

#[inline]
pub fn parity64(x: u64) -> bool {
    x.count_ones() & 1 == 1
}

/// Mask with ones at positions `j` where `j mod 2h < h`, for `h < 64`.
/// These are the lower halves of every `2h` block inside a word.
fn stride_mask(h: usize) -> u64 {
    debug_assert!(h < 64 && h.is_power_of_two());
    let block = (1u64 << h) - 1;
    let mut mask = 0u64;
    let mut pos = 0;
    while pos < 64 {
        mask |= block << pos;
        pos += 2 * h;
    }
    mask
}

/// In-place GF(2) butterfly `x[j] ^= x[j + h]` over all strides `h = 1, 2,
/// ..., n/2`, i.e. multiplication by the Kronecker power of `[[1,0],[1,1]]`
/// on a natural-order input. Bit-reversal is applied by the caller.
pub fn butterfly(words: &mut [u64], n: usize) {
    debug_assert!(n.is_power_of_two());
    let mut h = 1usize;
    while h < n {
        if h < 64 {
            let mask = stride_mask(h);
            for w in words.iter_mut() {
                *w ^= (*w >> h) & mask;
            }
        } else {
            let hw = h / 64; // stride in words
            let mut base = 0;
            while base < words.len() {
                for j in 0..hw {
                    words[base + j] ^= words[base + j + hw];
                }
                base += 2 * hw;
            }
        }
        h *= 2;
    }
}
