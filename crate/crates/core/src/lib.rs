//! Exact root-system combinatorics for locating the Dirac series of
//! complex simple Lie groups, with the complex `E_7` as the main target.
//!
//! All arithmetic is exact: weights carry doubled integer coordinates and
//! norms are rationals.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod rootsystem;
pub mod sieve;
pub mod spinnorm;
pub mod strings;
pub mod tables;
pub mod weight;
pub mod weylgroup;

pub use error::{Error, Result};
pub use rootsystem::{RootDatum, RootType};
pub use sieve::{Parameter, SieveReport};
pub use spinnorm::PencilQuery;
pub use weight::Weight;
pub use weylgroup::{DiagramDual, InvolutionRecord, WeylElement};

pub type Rational = num_rational::Ratio<i64>;

/// Runs `f` inside a rayon pool with `workers` threads, or in the global
/// pool when `workers == 0`.
pub fn with_workers<R, F>(workers: usize, f: F) -> R
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    if workers == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
