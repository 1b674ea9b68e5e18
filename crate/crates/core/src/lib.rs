//! Observable lower and upper bounds on entanglement of formation and
//! quantum discord for finite-dimensional bipartite states.
//!
//! The crate is `no_std` with `alloc`. Everything here is pure computation:
//! file formats, the CLI and figure generation live in the `eofqd` crate.
//!
//! ## Layout
//!
//! - [`linalg`], [`state`], [`entropy`], [`sample`]: dense complex linear
//!   algebra, validated states, entropies, purification and seeded sampling.
//! - [`curves`]: extremal entropy-versus-purity curves and their
//!   convex/concave envelopes.
//! - [`observables`]: two-copy observables, measured probabilities,
//!   purities and the six `Lambda` functionals.
//! - [`bounds`]: EOF and discord bound intervals.
//! - [`oracles`]: independent ground truth (Wootters EOF, brute-force
//!   discord, Koashi-Winter cross-check).

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod curves;
pub mod entropy;
pub mod error;
pub mod linalg;
mod math;
pub mod observables;
pub mod oracles;
pub mod sample;
pub mod state;

pub use error::{Error, Result};
