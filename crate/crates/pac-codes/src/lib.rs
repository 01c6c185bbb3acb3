//! PAC code toolkit.
//!
//! Polarization-adjusted convolutional codes: a rate-1 convolutional
//! precoder feeding the polar transform, with frozen carrier positions set
//! by a rate profile. The crate provides
//!
//! - code construction ([`codespec`]): RM and Gaussian-approximation polar
//!   rate profiles, reliability tables, index utilities;
//! - the encoding chain and its inverses ([`encoder`]);
//! - successive-cancellation list decoding with per-path convolutional
//!   shift registers and exact path metrics ([`scl`]);
//! - Fano sequential decoding over the polar search tree ([`fano`]);
//! - a BIAWGN channel with reproducible per-frame randomness ([`channel`]);
//! - a Monte-Carlo FER harness with the error/failure/selection-error
//!   taxonomy and complexity accounting ([`harness`]);
//! - weight-spectrum estimation and finite-blocklength bounds
//!   ([`analysis`]).
//!
//! The `pac` binary exposes all of it as subcommands; see [`cli`].

pub mod analysis;
pub mod bits;
pub mod channel;
pub mod cli;
pub mod codespec;
pub mod encoder;
pub mod error;
pub mod fano;
pub mod flops;
pub mod harness;
pub mod numerics;
pub mod scl;
mod sctree;

pub use codespec::{CodeSpec, Generator, ProfileRule};
pub use error::{Error, Result};
