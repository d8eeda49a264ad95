//! Exact multiple harmonic numbers, strict and star, plus the
//! binomial-transform identities used as an exact test surface.
//!
//! Strict: H_m^{(s₁,…,sₙ)} = Σ_{m ≥ k₁ > k₂ > … > kₙ ≥ 1} Π kᵢ^{−sᵢ}.
//! Star:  *H_m^{(s₁,…,sₙ)} = Σ_{m ≥ k₁ ≥ k₂ ≥ … ≥ kₙ ≥ 1} Π kᵢ^{−sᵢ}.
//!
//! The production path is the incremental outer-sum recurrence (split the
//! most external sum at k₁ = m); the naive nested summation is retained as a
//! reference oracle. Everything is exact `BigRational`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::combinatorics::{binomial, Composition, ExactRational};
use crate::{cache_limit, Error, Result};

/// Index of a multiple harmonic number: upper limit m, index vector, and the
/// strict (`star = false`) vs non-strict (`star = true`) inequality variant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    pub m: u32,
    pub indices: Composition,
    pub star: bool,
}

impl HarmonicIndex {
    pub fn new(m: u32, indices: Composition, star: bool) -> Self {
        Self { m, indices, star }
    }
}

/// 1 / k^s as an exact rational.
fn inv_pow(k: u32, s: u32) -> ExactRational {
    ExactRational::new(BigInt::one(), BigInt::from(k).pow(s))
}

static HARMONIC_CACHE: crate::SyncCache<(u32, Vec<u32>, bool), ExactRational> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Multiple harmonic number for `h`; 0 when the sum is empty (level > m).
pub fn multi_harmonic(h: &HarmonicIndex) -> ExactRational {
    let key = (h.m, h.indices.parts().to_vec(), h.star);
    if let Some(hit) = HARMONIC_CACHE.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let value = multi_harmonic_incremental(h.m, h.indices.parts(), h.star);
    let mut cache = HARMONIC_CACHE.lock().unwrap();
    if cache.len() < cache_limit() {
        cache.insert(key, value.clone());
    }
    value
}

/// Incremental recurrence: one pass k = 1..m maintaining all suffix values.
///
/// Strict: H_k[i] = H_{k−1}[i] + k^{−sᵢ}·H_{k−1}[i+1] (uses previous-k suffix,
/// so the array is updated front to back). Star: *H_k[i] = *H_{k−1}[i] +
/// k^{−sᵢ}·*H_k[i+1] (uses current-k suffix, so back to front).
fn multi_harmonic_incremental(m: u32, parts: &[u32], star: bool) -> ExactRational {
    let n = parts.len();
    // h[i] = harmonic number with indices (sᵢ,…,sₙ); h[n] = empty product 1.
    let mut h = vec![ExactRational::zero(); n + 1];
    h[n] = ExactRational::one();
    for k in 1..=m {
        if star {
            for i in (0..n).rev() {
                let add = inv_pow(k, parts[i]) * h[i + 1].clone();
                h[i] += add;
            }
        } else {
            for i in 0..n {
                let add = inv_pow(k, parts[i]) * h[i + 1].clone();
                h[i] += add;
            }
        }
    }
    h[0].clone()
}

/// Naive nested summation; reference oracle for the incremental path.
pub fn multi_harmonic_nested(h: &HarmonicIndex) -> ExactRational {
    fn rec(upper: u32, parts: &[u32], star: bool) -> ExactRational {
        let Some((&s, rest)) = parts.split_first() else {
            return ExactRational::one();
        };
        let mut sum = ExactRational::zero();
        for k in 1..=upper {
            let inner_upper = if star { k } else { k.saturating_sub(1) };
            sum += inv_pow(k, s) * rec(inner_upper, rest, star);
        }
        sum
    }
    rec(h.m, h.indices.parts(), h.star)
}

/// Splits the most external sum of `h` at k₁ = m: returns the two pieces
/// (k₁ = m term, k₁ ≤ m−1 remainder) whose sum equals `multi_harmonic(h)`.
///
/// Strict: (H_{m−1}^{(s₂,…)}/m^{s₁}, H_{m−1}^{(s⃗)}).
/// Star: the k₁ = m piece keeps the inner sums at upper limit m:
/// (*H_m^{(s₂,…)}/m^{s₁}, *H_{m−1}^{(s⃗)}).
pub fn harmonic_split(h: &HarmonicIndex) -> Result<(ExactRational, ExactRational)> {
    if h.m == 0 {
        return Err(Error::Domain("harmonic_split requires m ≥ 1".into()));
    }
    let inner_upper = if h.star { h.m } else { h.m - 1 };
    let first = match h.indices.tail() {
        Some(tail) => {
            multi_harmonic(&HarmonicIndex::new(inner_upper, tail, h.star))
                * inv_pow(h.m, h.indices.head())
        }
        None => inv_pow(h.m, h.indices.head()),
    };
    let second = multi_harmonic(&HarmonicIndex::new(h.m - 1, h.indices.clone(), h.star));
    Ok((first, second))
}

/// Alternating double-binomial sum equal to the star harmonic number
/// *H_m^{(s₂,…,sₙ)}:
///
/// Σ_{m ≥ k₁ ≥ k₂ ≥ … ≥ kₙ ≥ 1} (−1)^{k₁+k₂} C(m,k₁) C(k₁,k₂)
///   / (k₁^{k_exp} k₂^{s₂−1} k₃^{s₃} … kₙ^{sₙ}),
///
/// where `indices` = (s₂,…,sₙ). The identity itself has k_exp = 1; the
/// exponent on k₁ is kept general for the iterated variants.
pub fn binomial_transform_star(m: u32, indices: &Composition, k_exp: u32) -> ExactRational {
    assert!(m >= 1, "binomial_transform_star requires m ≥ 1");
    let parts = indices.parts();
    // Chain exponents after k₁: (s₂−1, s₃, …, sₙ).
    let mut exps = vec![parts[0] - 1];
    exps.extend_from_slice(&parts[1..]);

    let mut sum = ExactRational::zero();
    for k1 in 1..=m {
        let c_mk1 = binomial(m as u64, k1 as u64);
        for k2 in 1..=k1 {
            let sign = if (k1 + k2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let outer = ExactRational::from(sign * c_mk1.clone() * binomial(k1 as u64, k2 as u64))
                * inv_pow(k1, k_exp)
                * inv_pow(k2, exps[0]);
            sum += outer * weak_chain(k2, &exps[1..]);
        }
    }
    sum
}

/// Σ over k ≥ k₃ ≥ … ≥ kₙ ≥ 1 of Π kᵢ^{−eᵢ} (weakly decreasing chain below
/// an upper bound); 1 for an empty exponent list.
fn weak_chain(upper: u32, exps: &[u32]) -> ExactRational {
    let Some((&e, rest)) = exps.split_first() else {
        return ExactRational::one();
    };
    let mut sum = ExactRational::zero();
    for k in 1..=upper {
        sum += inv_pow(k, e) * weak_chain(k, rest);
    }
    sum
}

/// Mixed alternating sum equal to the strict harmonic number H_m^{(s₂,…,sₙ)}:
/// the two outer indices are weakly ordered (m ≥ k₁ ≥ k₂) and the rest
/// strictly (k₂ > k₃ > … > kₙ ≥ 1):
///
/// Σ (−1)^{k₁+k₂} C(m,k₁) C(k₁,k₂) / (k₁ k₂^{s₂−1} k₃^{s₃} … kₙ^{sₙ}).
///
/// Requires level(indices) ≥ 2 so at least one strict inequality remains.
pub fn strict_from_binomial(m: u32, indices: &Composition) -> ExactRational {
    assert!(indices.level() >= 2, "strict_from_binomial requires level ≥ 2");
    let parts = indices.parts();
    let mut sum = ExactRational::zero();
    for k1 in 1..=m {
        let c_mk1 = binomial(m as u64, k1 as u64);
        for k2 in 1..=k1 {
            let sign = if (k1 + k2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let outer = ExactRational::from(sign * c_mk1.clone() * binomial(k1 as u64, k2 as u64))
                * inv_pow(k1, 1)
                * inv_pow(k2, parts[0] - 1);
            sum += outer * strict_chain(k2.saturating_sub(1), &parts[1..]);
        }
    }
    sum
}

/// Σ over upper ≥ k₃ > … > kₙ ≥ 1 of Π kᵢ^{−sᵢ} (strictly decreasing chain).
fn strict_chain(upper: u32, exps: &[u32]) -> ExactRational {
    let Some((&e, rest)) = exps.split_first() else {
        return ExactRational::one();
    };
    let mut sum = ExactRational::zero();
    for k in 1..=upper {
        sum += inv_pow(k, e) * strict_chain(k - 1, rest);
    }
    sum
}

/// Right-hand side of the iterated binomial reduction: the k-fold nested
/// average of the plain binomial transform,
///
/// Σ_{l₁=1}^{n} 1/l₁ Σ_{l₂=1}^{l₁} 1/l₂ … Σ_{l_k=1}^{l_{k−1}} 1/l_k
///   Σ_{m=1}^{l_k} (−1)^{m−1} C(l_k, m) a_m,
///
/// which equals the left side Σ_{j=1}^{n} (−1)^{j−1} C(n,j) a_j / j^k.
/// `a` is 1-indexed conceptually: a\[0\] is a₁. Requires a.len() ≥ n.
pub fn iterative_binomial_reduction(n: u32, k: u32, a: &[ExactRational]) -> ExactRational {
    assert!(a.len() >= n as usize, "need at least n sequence entries");
    assert!(n >= 1 && k >= 1);
    // f₀(l) = inner alternating binomial transform.
    let mut f: Vec<ExactRational> = (1..=n)
        .map(|l| {
            let mut s = ExactRational::zero();
            for m in 1..=l {
                let sign = if m % 2 == 1 { BigInt::one() } else { -BigInt::one() };
                s += ExactRational::from(sign * binomial(l as u64, m as u64))
                    * a[(m - 1) as usize].clone();
            }
            s
        })
        .collect();
    // k prefix passes: f_i(l) = Σ_{j ≤ l} f_{i−1}(j)/j.
    for _ in 0..k {
        let mut acc = ExactRational::zero();
        for (j, slot) in f.iter_mut().enumerate() {
            acc += slot.clone() * inv_pow(j as u32 + 1, 1);
            *slot = acc.clone();
        }
    }
    f[(n - 1) as usize].clone()
}

/// Alternating binomial transform of a sequence (a₀, a₁, …):
/// b_n = Σ_{j=0}^{n} (−1)^j C(n,j) a_j. The transform is an involution.
pub fn binomial_transform(seq: &[ExactRational]) -> Vec<ExactRational> {
    (0..seq.len())
        .map(|n| {
            let mut s = ExactRational::zero();
            for (j, a) in seq.iter().enumerate().take(n + 1) {
                let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                s += ExactRational::from(sign * binomial(n as u64, j as u64)) * a.clone();
            }
            s
        })
        .collect()
}

/// Star harmonic number as f64 (final conversion only).
pub fn multi_harmonic_f64(m: u32, indices: &Composition, star: bool) -> f64 {
    use num_traits::ToPrimitive;
    let v = multi_harmonic(&HarmonicIndex::new(m, indices.clone(), star));
    v.to_f64().expect("harmonic value representable")
}
