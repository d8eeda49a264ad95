//! Numerical library for multiple polyexponential functions and integrals.
//!
//! The crate evaluates three families of special functions indexed by a
//! composition (s₁,…,sₙ) of positive integers:
//!
//! * `el` — undressed multiple polyexponential functions, entire functions
//!   defined by strictly nested Taylor sums with factorial damping,
//! * `EL` — dressed multiple polyexponential functions, the variant obeying
//!   simple level-lowering derivative rules,
//! * `ELi` — multiple polyexponential integrals, iterated-integral
//!   generalizations of the exponential integral Ei that vanish as z → −∞.
//!
//! Supporting infrastructure: exact composition algebra (ordered partitions,
//! the ⊕ operator, stuffle products), exact multiple harmonic numbers
//! (strict and star), MZV-valued connection constants (γ, ζ(s⃗), cLi, cli,
//! Γ-derivative ratios), exact asymptotic coefficient tables, an independent
//! adaptive-quadrature oracle, and a CLI front end.
//!
//! All combinatorial and coefficient computations are exact rational
//! arithmetic; floating-point enters only at final evaluation.

pub mod cli;
pub mod combinatorics;
pub mod constants;
mod dd;
pub mod harmonic;
pub mod integrals;
pub mod oracle;
pub mod series;

mod error;

pub use error::{Error, Result};

/// Lazily initialized, mutex-guarded memo cache shared by the exact
/// combinatorial routines.
pub(crate) type SyncCache<K, V> =
    once_cell::sync::Lazy<std::sync::Mutex<std::collections::HashMap<K, V>>>;

/// Number of memo-cache entries allowed per cache, read from the
/// `POLYEXP_CACHE_LIMIT` environment variable (default 1 << 20).
/// Caches stop inserting once the bound is reached.
pub fn cache_limit() -> usize {
    static LIMIT: once_cell::sync::Lazy<usize> = once_cell::sync::Lazy::new(|| {
        std::env::var("POLYEXP_CACHE_LIMIT")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(1 << 20)
    });
    *LIMIT
}
