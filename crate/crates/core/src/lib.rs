//! Exact computations with factorials modulo a prime.
//!
//! The crate is `no_std` (with `alloc`) so the arithmetic can be embedded
//! anywhere; file formats, configuration and the command line live in the
//! companion `faclab` crate. Enable the `parallel` feature to spread frequency
//! scans, block factorials and energy counts over a rayon pool. Results are
//! bit-identical with and without it.
//!
//! Module map:
//!
//! * [`modular`]: prime moduli, residue arithmetic, primality, unit phases.
//! * [`factorial`]: `n! mod p` over index windows, checkpoints, block evaluation.
//! * [`sets`]: residue sets, product/quotient/sum sets, multiplicative energy.
//! * [`expsum`]: exponential sums over factorials and their moments.
//! * [`represent`]: representation search and certificates.
//! * [`combinatorics`]: additive-combinatorics checkers and bound curves.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod bitset;
pub mod combinatorics;
mod error;
pub mod expsum;
pub mod factorial;
pub mod modular;
mod par;
pub mod represent;
pub mod sets;
mod sum;

pub use error::{Error, Result};
pub use modular::{is_prime, next_prime, PrimeModulus, Residue};

/// Default cap on "pair operations" (|A|·|B| products and the like) a single
/// call may perform before refusing.
pub const DEFAULT_PAIR_BUDGET: u128 = 1 << 34;
