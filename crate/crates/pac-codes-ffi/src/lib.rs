//! C ABI for the PAC code toolkit.
//!
//! Opaque handles own all state; every function returns a [`PacStatus`]
//! code and writes results through caller-provided buffers. Bit buffers are
//! one byte per bit (0 or 1). The generated header lives at
//! `include/pac_codes.h` (regenerated by the build script).

use pac_codes::encoder::{self, DataWord};
use pac_codes::fano::{FanoConfig, FanoDecoder};
use pac_codes::scl::ListDecoder;
use pac_codes::{CodeSpec, Error, Generator, ProfileRule};
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ResourceLimit = 3,
    /// Fano decoding hit its cycle cap before reaching the last tree level.
    DecodeFailure = 4,
    InternalError = 5,
}

fn status_of(err: &Error) -> PacStatus {
    match err {
        Error::InvalidArgument(_) | Error::Parse(_) => PacStatus::InvalidArgument,
        Error::Resource(_) => PacStatus::ResourceLimit,
        Error::Io(_) => PacStatus::InternalError,
    }
}

/// An immutable PAC code description (opaque).
pub struct PacCode {
    spec: CodeSpec,
}

/// A reusable list decoder bound to one code (opaque).
pub struct PacListDecoder {
    spec: CodeSpec,
    inner: ListDecoder,
}

/// A reusable Fano decoder bound to one code (opaque).
pub struct PacFanoDecoder {
    spec: CodeSpec,
    inner: FanoDecoder,
    config: FanoConfig,
}

/// Build a code. `profile` is `"rm"` or `"polar"` (the latter uses
/// `design_snr_db`); `generator` is the binary/octal tap string, e.g.
/// `"1011011"` or `"0o133"`.
///
/// # Safety
/// `profile` and `generator` must be valid NUL-terminated C strings and
/// `out` a valid pointer; the returned handle must be released with
/// [`pac_code_destroy`].
#[no_mangle]
pub unsafe extern "C" fn pac_code_create(
    n: u32,
    k: u32,
    profile: *const c_char,
    design_snr_db: f64,
    generator: *const c_char,
    out: *mut *mut PacCode,
) -> PacStatus {
    if profile.is_null() || generator.is_null() || out.is_null() {
        return PacStatus::NullPointer;
    }
    let profile = match CStr::from_ptr(profile).to_str() {
        Ok(s) => s,
        Err(_) => return PacStatus::InvalidArgument,
    };
    let generator = match CStr::from_ptr(generator).to_str() {
        Ok(s) => s,
        Err(_) => return PacStatus::InvalidArgument,
    };
    let rule = match profile {
        "rm" => ProfileRule::Rm,
        "polar" => ProfileRule::Polar { design_snr_db },
        _ => return PacStatus::InvalidArgument,
    };
    let gen = match Generator::parse(generator) {
        Ok(g) => g,
        Err(e) => return status_of(&e),
    };
    match CodeSpec::new(n as usize, k as usize, &rule, gen) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(PacCode { spec }));
            PacStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Release a code handle. NULL is ignored.
///
/// # Safety
/// `code` must be NULL or a pointer from [`pac_code_create`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pac_code_destroy(code: *mut PacCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// # Safety
/// `code` must be a live handle from [`pac_code_create`].
#[no_mangle]
pub unsafe extern "C" fn pac_code_block_length(code: *const PacCode) -> u32 {
    if code.is_null() {
        return 0;
    }
    (*code).spec.n() as u32
}

/// # Safety
/// `code` must be a live handle from [`pac_code_create`].
#[no_mangle]
pub unsafe extern "C" fn pac_code_dimension(code: *const PacCode) -> u32 {
    if code.is_null() {
        return 0;
    }
    (*code).spec.k() as u32
}

/// Encode `k` data bits (bytes 0/1) into `n` codeword bits.
///
/// # Safety
/// `data` must point to `k` readable bytes and `codeword` to `n` writable
/// bytes for the handle's code.
#[no_mangle]
pub unsafe extern "C" fn pac_encode(
    code: *const PacCode,
    data: *const u8,
    codeword: *mut u8,
) -> PacStatus {
    if code.is_null() || data.is_null() || codeword.is_null() {
        return PacStatus::NullPointer;
    }
    let spec = &(*code).spec;
    let d = std::slice::from_raw_parts(data, spec.k());
    if d.iter().any(|&b| b > 1) {
        return PacStatus::InvalidArgument;
    }
    let word = DataWord(d.iter().map(|&b| b == 1).collect());
    match encoder::encode(&word, spec) {
        Ok(x) => {
            let out = std::slice::from_raw_parts_mut(codeword, spec.n());
            for (o, b) in out.iter_mut().zip(&x.0) {
                *o = *b as u8;
            }
            PacStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Create a list decoder bound to the code.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer; release the
/// result with [`pac_list_decoder_destroy`].
#[no_mangle]
pub unsafe extern "C" fn pac_list_decoder_create(
    code: *const PacCode,
    list_size: u32,
    out: *mut *mut PacListDecoder,
) -> PacStatus {
    if code.is_null() || out.is_null() {
        return PacStatus::NullPointer;
    }
    let spec = (*code).spec.clone();
    match ListDecoder::new(&spec, list_size as usize) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(PacListDecoder { spec, inner }));
            PacStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `dec` must be NULL or a pointer from [`pac_list_decoder_create`], not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn pac_list_decoder_destroy(dec: *mut PacListDecoder) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Decode one frame of `n` channel LLRs (positive favors bit 0). Writes the
/// best candidate's data bits, codeword bits, and path metric; any output
/// pointer may be NULL to skip it.
///
/// # Safety
/// `llrs` must point to `n` readable doubles; non-NULL outputs must be
/// writable for `k` bytes (`data_out`), `n` bytes (`codeword_out`), and one
/// double (`metric_out`).
#[no_mangle]
pub unsafe extern "C" fn pac_list_decode(
    dec: *mut PacListDecoder,
    llrs: *const f64,
    data_out: *mut u8,
    codeword_out: *mut u8,
    metric_out: *mut f64,
) -> PacStatus {
    if dec.is_null() || llrs.is_null() {
        return PacStatus::NullPointer;
    }
    let handle = &mut *dec;
    let n = handle.spec.n();
    let k = handle.spec.k();
    let input = std::slice::from_raw_parts(llrs, n);
    let result = catch_unwind(AssertUnwindSafe(|| handle.inner.decode(input)));
    let list = match result {
        Ok(Ok(list)) => list,
        Ok(Err(e)) => return status_of(&e),
        Err(_) => return PacStatus::InternalError,
    };
    let best = list.best();
    if !data_out.is_null() {
        let out = std::slice::from_raw_parts_mut(data_out, k);
        for (o, b) in out.iter_mut().zip(&best.data().0) {
            *o = *b as u8;
        }
    }
    if !codeword_out.is_null() {
        let out = std::slice::from_raw_parts_mut(codeword_out, n);
        for (o, b) in out.iter_mut().zip(&best.codeword().0) {
            *o = *b as u8;
        }
    }
    if !metric_out.is_null() {
        *metric_out = best.metric();
    }
    PacStatus::Ok
}

/// Create a Fano decoder. `bias_snr_db` selects the SNR at which the
/// reliability-derived per-phase bias is computed.
///
/// # Safety
/// `code` must be a live handle and `out` a valid pointer; release the
/// result with [`pac_fano_decoder_destroy`].
#[no_mangle]
pub unsafe extern "C" fn pac_fano_decoder_create(
    code: *const PacCode,
    delta: f64,
    cycle_cap: u64,
    bias_snr_db: f64,
    out: *mut *mut PacFanoDecoder,
) -> PacStatus {
    if code.is_null() || out.is_null() {
        return PacStatus::NullPointer;
    }
    let spec = (*code).spec.clone();
    let config = match FanoConfig::reliability(&spec, bias_snr_db, delta, cycle_cap) {
        Ok(c) => c,
        Err(e) => return status_of(&e),
    };
    let inner = FanoDecoder::new(&spec);
    *out = Box::into_raw(Box::new(PacFanoDecoder { spec, inner, config }));
    PacStatus::Ok
}

/// # Safety
/// `dec` must be NULL or a pointer from [`pac_fano_decoder_create`], not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn pac_fano_decoder_destroy(dec: *mut PacFanoDecoder) {
    if !dec.is_null() {
        drop(Box::from_raw(dec));
    }
}

/// Fano-decode one frame. On success writes the outputs as in
/// [`pac_list_decode`] plus the consumed cycle count; returns
/// `DecodeFailure` (cycles still written) when the cap is exhausted.
///
/// # Safety
/// Pointer contracts as in [`pac_list_decode`]; `cycles_out` may be NULL or
/// must be writable for one u64.
#[no_mangle]
pub unsafe extern "C" fn pac_fano_decode(
    dec: *mut PacFanoDecoder,
    llrs: *const f64,
    data_out: *mut u8,
    codeword_out: *mut u8,
    metric_out: *mut f64,
    cycles_out: *mut u64,
) -> PacStatus {
    if dec.is_null() || llrs.is_null() {
        return PacStatus::NullPointer;
    }
    let handle = &mut *dec;
    let n = handle.spec.n();
    let k = handle.spec.k();
    let input = std::slice::from_raw_parts(llrs, n);
    let result = catch_unwind(AssertUnwindSafe(|| handle.inner.decode(input, &handle.config)));
    let outcome = match result {
        Ok(Ok(o)) => o,
        Ok(Err(e)) => return status_of(&e),
        Err(_) => return PacStatus::InternalError,
    };
    if !cycles_out.is_null() {
        *cycles_out = outcome.cycles;
    }
    match outcome.result {
        Some(c) => {
            if !data_out.is_null() {
                let out = std::slice::from_raw_parts_mut(data_out, k);
                for (o, b) in out.iter_mut().zip(&c.data.0) {
                    *o = *b as u8;
                }
            }
            if !codeword_out.is_null() {
                let out = std::slice::from_raw_parts_mut(codeword_out, n);
                for (o, b) in out.iter_mut().zip(&c.codeword.0) {
                    *o = *b as u8;
                }
            }
            if !metric_out.is_null() {
                *metric_out = c.metric;
            }
            PacStatus::Ok
        }
        None => PacStatus::DecodeFailure,
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn pac_status_message(status: PacStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        PacStatus::Ok => b"ok\0",
        PacStatus::NullPointer => b"null pointer argument\0",
        PacStatus::InvalidArgument => b"invalid argument\0",
        PacStatus::ResourceLimit => b"resource limit exceeded\0",
        PacStatus::DecodeFailure => b"decoding failure (cycle cap reached)\0",
        PacStatus::InternalError => b"internal error\0",
    };
    msg.as_ptr() as *const c_char
}
