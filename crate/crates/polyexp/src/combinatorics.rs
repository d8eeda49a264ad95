//! Exact index-vector algebra: compositions, ordered partitions, the ⊕
//! operator, stuffle products, and binomial/multinomial helpers.
//!
//! A `Composition` (s₁,…,sₙ) is the universal key of the crate: its length is
//! the *level* n, the sum of its parts the *weight* Σsᵢ. All arithmetic here
//! is exact (`BigInt`/`BigRational`); nothing in this module touches floats.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::{cache_limit, Error, Result};

/// Arbitrary-precision rational; exact carrier for harmonic numbers,
/// asymptotic coefficients, α tables and binomials.
pub type ExactRational = num_rational::BigRational;

/// An ordered sequence of positive integers (s₁,…,sₙ).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    /// Builds a composition, rejecting empty part lists and zero parts.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Domain("composition must have level ≥ 1".into()));
        }
        if parts.contains(&0) {
            return Err(Error::Domain("composition parts must be ≥ 1".into()));
        }
        Ok(Self { parts })
    }

    /// The index vector (s₁,…,sₙ).
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Level n = number of parts.
    pub fn level(&self) -> usize {
        self.parts.len()
    }

    /// Weight Σ sᵢ.
    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// First part s₁.
    pub fn head(&self) -> u32 {
        self.parts[0]
    }

    /// Composition (s₂,…,sₙ), or `None` at level 1.
    pub fn tail(&self) -> Option<Composition> {
        if self.parts.len() > 1 {
            Some(Self { parts: self.parts[1..].to_vec() })
        } else {
            None
        }
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Parses the comma-separated text format, e.g. `"2,1,3"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<u32> = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("invalid composition part {p:?}")))
            })
            .collect::<Result<_>>()?;
        Composition::new(parts).map_err(|_| Error::Parse(format!("invalid composition {s:?}")))
    }
}

/// Unordered collection of compositions with multiplicities. Equality
/// compares canonical (sorted) forms; all members share one weight.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompositionMultiset {
    entries: std::collections::BTreeMap<Composition, usize>,
}

impl CompositionMultiset {
    /// Adds `mult` copies of `c`.
    pub fn insert(&mut self, c: Composition, mult: usize) {
        *self.entries.entry(c).or_insert(0) += mult;
    }

    /// Iterates (composition, multiplicity) pairs in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Composition, usize)> {
        self.entries.iter().map(|(c, &m)| (c, m))
    }

    /// Number of distinct compositions.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    /// Total multiplicity.
    pub fn total_multiplicity(&self) -> usize {
        self.entries.values().sum()
    }
}

impl FromIterator<(Composition, usize)> for CompositionMultiset {
    fn from_iter<T: IntoIterator<Item = (Composition, usize)>>(iter: T) -> Self {
        let mut ms = CompositionMultiset::default();
        for (c, m) in iter {
            ms.insert(c, m);
        }
        ms
    }
}

/// All 2^(n−1) compositions of n, each exactly once, in lexicographic order
/// by parts.
pub fn ordered_partitions(n: u32) -> Result<Vec<Composition>> {
    if n == 0 {
        return Err(Error::Domain("ordered_partitions requires n ≥ 1".into()));
    }
    let mut out = Vec::with_capacity(1 << (n - 1).min(31));
    let mut current = Vec::new();
    fn rec(remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if remaining == 0 {
            out.push(Composition { parts: current.clone() });
            return;
        }
        for first in 1..=remaining {
            current.push(first);
            rec(remaining - first, current, out);
            current.pop();
        }
    }
    rec(n, &mut current, &mut out);
    Ok(out)
}

/// The ⊕ operator: (v₁,…,vᵢ) ⊕ (u₁,…,uⱼ) = (v₁,…,vᵢ₋₁, vᵢ+u₁, u₂,…,uⱼ).
/// The result has weight(v)+weight(u) and level(v)+level(u)−1.
pub fn oplus(v: &Composition, u: &Composition) -> Composition {
    let mut parts = v.parts.clone();
    let last = parts.last_mut().expect("compositions are nonempty");
    *last += u.parts[0];
    parts.extend_from_slice(&u.parts[1..]);
    Composition { parts }
}

static STUFFLE_CACHE: crate::SyncCache<(Vec<u32>, Vec<u32>), CompositionMultiset> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Quasi-shuffle (stuffle) product of two index vectors: every interleaving
/// of `a` into `b` that preserves both internal orders, additionally allowing
/// any aᵢ to merge additively with any bⱼ. Memoized; commutative as a
/// multiset; every output has weight(a)+weight(b).
pub fn stuffle(a: &Composition, b: &Composition) -> CompositionMultiset {
    // Canonical key ordering exploits commutativity.
    let key = if a.parts <= b.parts {
        (a.parts.clone(), b.parts.clone())
    } else {
        (b.parts.clone(), a.parts.clone())
    };
    if let Some(hit) = STUFFLE_CACHE.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let result = stuffle_uncached(&key.0, &key.1);
    let mut cache = STUFFLE_CACHE.lock().unwrap();
    if cache.len() < cache_limit() {
        cache.insert(key, result.clone());
    }
    result
}

fn stuffle_uncached(a: &[u32], b: &[u32]) -> CompositionMultiset {
    if a.is_empty() {
        return std::iter::once((Composition { parts: b.to_vec() }, 1)).collect();
    }
    if b.is_empty() {
        return std::iter::once((Composition { parts: a.to_vec() }, 1)).collect();
    }
    let mut out = CompositionMultiset::default();
    let mut extend = |head: u32, rest: CompositionMultiset| {
        for (c, m) in rest.iter() {
            let mut parts = Vec::with_capacity(c.parts.len() + 1);
            parts.push(head);
            parts.extend_from_slice(&c.parts);
            out.insert(Composition { parts }, m);
        }
    };
    extend(a[0], stuffle_uncached(&a[1..], b));
    extend(b[0], stuffle_uncached(a, &b[1..]));
    extend(a[0] + b[0], stuffle_uncached(&a[1..], &b[1..]));
    out
}

/// Expands a dressed index (r₁,s₁,…,r_k,s_k[,r_{k+1}]) into the multiset of
/// undressed indices it is a sum of: one term per choice of ordered
/// partitions, (r₁−1)⊕op(s₁+1)⊕⋯⊕(r_k−1)⊕op(s_k+1)[⊕r_{k+1}], where a zero
/// scalar (rᵢ = 1) acts as the identity of ⊕.
pub fn dressed_expansion(parts: &[u32]) -> CompositionMultiset {
    fn join(acc: &[u32], piece: &[u32]) -> Vec<u32> {
        match (acc.last(), piece.first()) {
            (Some(&a), Some(&p)) => {
                let mut v = acc[..acc.len() - 1].to_vec();
                v.push(a + p);
                v.extend_from_slice(&piece[1..]);
                v
            }
            _ => acc.iter().chain(piece.iter()).copied().collect(),
        }
    }
    fn rec(rest: &[u32], acc: Vec<u32>, out: &mut CompositionMultiset) {
        match rest {
            [] => out.insert(Composition::new(acc).expect("expansion is nonempty"), 1),
            [r_last] => {
                let joined = join(&acc, &[*r_last]);
                out.insert(Composition::new(joined).expect("expansion is nonempty"), 1);
            }
            [r, s, more @ ..] => {
                for q in ordered_partitions(s + 1).expect("s+1 ≥ 2") {
                    let piece = if *r == 1 {
                        q.parts().to_vec()
                    } else {
                        let mut p = vec![r - 1 + q.parts()[0]];
                        p.extend_from_slice(&q.parts()[1..]);
                        p
                    };
                    rec(more, join(&acc, &piece), out);
                }
            }
        }
    }
    let mut out = CompositionMultiset::default();
    rec(parts, Vec::new(), &mut out);
    out
}

/// Exact binomial coefficient C(n, k); zero for k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Exact factorial n!.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Multinomial coefficient n! / Π(partsᵢ!); requires weight(parts) == n.
pub fn multinomial(n: u32, parts: &Composition) -> Result<ExactRational> {
    if parts.weight() != n {
        return Err(Error::Domain(format!(
            "multinomial weight mismatch: parts sum to {} but n = {n}",
            parts.weight()
        )));
    }
    let mut den = BigInt::one();
    for &p in parts.parts() {
        den *= factorial(p as u64);
    }
    Ok(ExactRational::new(factorial(n as u64), den))
}

/// Hockey-Stick sum Σ_{l=k}^{j} C(l+m−k−1, m−1), asserted equal to
/// C(j+m−k, m). Requires j ≥ k.
pub fn hockey_stick(m: u32, k: u32, j: u32) -> Result<ExactRational> {
    if j < k {
        return Err(Error::Domain(format!("hockey_stick requires j ≥ k, got k={k}, j={j}")));
    }
    let mut sum = BigInt::zero();
    for l in k..=j {
        sum += binomial((l + m - k - 1) as u64, (m - 1) as u64);
    }
    let closed = binomial((j + m - k) as u64, m as u64);
    assert_eq!(sum, closed, "Hockey-Stick identity violated for m={m}, k={k}, j={j}");
    Ok(ExactRational::from(sum))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comp(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn ordered_partitions_small_cases() {
        let op1 = ordered_partitions(1).unwrap();
        assert_eq!(op1, vec![comp(&[1])]);

        let op2 = ordered_partitions(2).unwrap();
        assert_eq!(op2, vec![comp(&[1, 1]), comp(&[2])]);

        let op3 = ordered_partitions(3).unwrap();
        assert_eq!(op3, vec![comp(&[1, 1, 1]), comp(&[1, 2]), comp(&[2, 1]), comp(&[3])]);

        assert!(ordered_partitions(0).is_err());
    }

    #[test]
    fn ordered_partitions_count_and_weight() {
        for n in 1..=16u32 {
            let ops = ordered_partitions(n).unwrap();
            assert_eq!(ops.len(), 1usize << (n - 1), "count for n={n}");
            assert!(ops.iter().all(|c| c.weight() == n));
            // Deterministic lexicographic order.
            let mut sorted = ops.clone();
            sorted.sort();
            assert_eq!(ops, sorted);
        }
    }

    #[test]
    fn oplus_examples() {
        assert_eq!(oplus(&comp(&[1]), &comp(&[1, 1])), comp(&[2, 1]));
        assert_eq!(oplus(&comp(&[2, 3]), &comp(&[4])), comp(&[2, 7]));
        assert_eq!(oplus(&comp(&[1, 1]), &comp(&[1, 2])), comp(&[1, 2, 2]));
    }

    #[test]
    fn oplus_weight_level() {
        let v = comp(&[3, 1, 2]);
        let u = comp(&[2, 2]);
        let r = oplus(&v, &u);
        assert_eq!(r.weight(), v.weight() + u.weight());
        assert_eq!(r.level(), v.level() + u.level() - 1);
    }

    /// Decomposition of ordered partitions: op(n+1) = {(1,p)} ∪ {1⊕p} over
    /// p ∈ op(n), as multisets.
    #[test]
    fn ordered_partition_decomposition() {
        for n in 1..=12u32 {
            let expected: CompositionMultiset =
                ordered_partitions(n + 1).unwrap().into_iter().map(|c| (c, 1)).collect();
            let mut built = CompositionMultiset::default();
            let one = comp(&[1]);
            for p in ordered_partitions(n).unwrap() {
                let mut parts = vec![1u32];
                parts.extend_from_slice(p.parts());
                built.insert(Composition::new(parts).unwrap(), 1);
                built.insert(oplus(&one, &p), 1);
            }
            assert_eq!(built, expected, "op decomposition at n={n}");
        }
    }

    #[test]
    fn stuffle_paper_example() {
        let got = stuffle(&comp(&[1]), &comp(&[2, 3]));
        let want: CompositionMultiset = [
            (comp(&[1, 2, 3]), 1),
            (comp(&[2, 1, 3]), 1),
            (comp(&[2, 3, 1]), 1),
            (comp(&[2, 4]), 1),
            (comp(&[3, 3]), 1),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn stuffle_smallest_case() {
        let got = stuffle(&comp(&[1]), &comp(&[1]));
        let want: CompositionMultiset =
            [(comp(&[1, 1]), 2), (comp(&[2]), 1)].into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn stuffle_weight_conservation_and_count() {
        // Total multiplicity follows the Delannoy-style recursion
        // N(i,j) = N(i−1,j) + N(i,j−1) + N(i−1,j−1), N(0,·) = N(·,0) = 1.
        fn count(i: usize, j: usize) -> usize {
            if i == 0 || j == 0 {
                return 1;
            }
            count(i - 1, j) + count(i, j - 1) + count(i - 1, j - 1)
        }
        let a = comp(&[2, 1]);
        let b = comp(&[3, 1]);
        let got = stuffle(&a, &b);
        assert_eq!(got.total_multiplicity(), count(a.level(), b.level()));
        for (c, _) in got.iter() {
            assert_eq!(c.weight(), a.weight() + b.weight());
        }
        // (2) ⋆ (3,1): 5 compositions of weight 6.
        let got = stuffle(&comp(&[2]), &comp(&[3, 1]));
        assert_eq!(got.total_multiplicity(), 5);
        assert!(got.iter().all(|(c, _)| c.weight() == 6));
    }

    #[test]
    fn stuffle_commutes() {
        let a = comp(&[1, 2]);
        let b = comp(&[2, 1, 1]);
        assert_eq!(stuffle(&a, &b), stuffle(&b, &a));
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(3, &comp(&[2, 1])).unwrap(), ExactRational::from(BigInt::from(3)));
        assert_eq!(
            multinomial(4, &comp(&[1, 1, 1, 1])).unwrap(),
            ExactRational::from(BigInt::from(24))
        );
        assert_eq!(
            multinomial(5, &comp(&[2, 2, 1])).unwrap(),
            ExactRational::from(BigInt::from(30))
        );
        assert!(multinomial(4, &comp(&[2, 1])).is_err());
    }

    #[test]
    fn hockey_stick_examples() {
        assert_eq!(hockey_stick(2, 0, 2).unwrap(), ExactRational::from(BigInt::from(6)));
        assert_eq!(hockey_stick(1, 0, 5).unwrap(), ExactRational::from(BigInt::from(6)));
        assert_eq!(hockey_stick(3, 1, 1).unwrap(), ExactRational::from(BigInt::from(1)));
        assert!(hockey_stick(2, 3, 1).is_err());
    }

    /// Partial-sum identity Σ_{m=0}^{j} (−1)^m C(l,m) = (−1)^j C(l−1,j).
    #[test]
    fn partial_sum_identity() {
        for l in 1..=30u64 {
            let mut sum = BigInt::zero();
            for j in 0..l {
                let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                sum += sign.clone() * binomial(l, j);
                assert_eq!(sum, sign * binomial(l - 1, j), "l={l}, j={j}");
            }
        }
    }

    #[test]
    fn composition_text_round_trip() {
        let c: Composition = "2,1,3".parse().unwrap();
        assert_eq!(c, comp(&[2, 1, 3]));
        assert_eq!(c.to_string(), "2,1,3");
        assert!("".parse::<Composition>().is_err());
        assert!("2,0,1".parse::<Composition>().is_err());
        assert!("a,b".parse::<Composition>().is_err());
    }
}
