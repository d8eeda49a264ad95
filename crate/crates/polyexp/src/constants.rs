//! Numerical constants: γ, polygamma values at positive integers, ratios
//! Γ^{(m)}(k)/Γ(k), multiple zeta values, and the connection constants
//! cLi/cli linking the integral functions to the series functions near 0.
//!
//! MZVs ζ(s₁,…,sₙ) = Σ_{k₁>…>kₙ≥1} Π kᵢ^{−sᵢ} (s₁ ≥ 2) are evaluated by a
//! truncated outer sum plus an exact resummation of the tail into pure
//! inverse-power series handled by Euler–Maclaurin. cli constants reduce to
//! γ/ζ combinations through the polygamma representation of Γ^{(m)}(k)/Γ(k);
//! cLi constants expand into cli via ordered partitions and the ⊕ chain.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde::Serialize;

use crate::combinatorics::{
    binomial, dressed_expansion, factorial, multinomial, ordered_partitions, stuffle, Composition,
    CompositionMultiset,
};
use crate::dd::{inv_pow, Dd};
use crate::{cache_limit, Error, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// ζ(2) = π²/6.
pub const ZETA_2: f64 = 1.644_934_066_848_226_4;
/// ζ(3) (Apéry's constant).
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

/// How a constant's numeric value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    ClosedForm,
    NestedSum,
    Quadrature,
}

/// A numeric constant with an absolute error estimate.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConstantValue {
    pub value: f64,
    pub abs_error: f64,
    pub provenance: Provenance,
}

impl ConstantValue {
    pub fn new(value: f64, abs_error: f64, provenance: Provenance) -> Self {
        assert!(abs_error >= 0.0 && abs_error.is_finite(), "invalid error bound");
        Self { value, abs_error, provenance }
    }
}

/// Identifier for every constant the crate can evaluate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstantKey {
    EulerGamma,
    /// ζ(s₁,…,sₙ) with s₁ ≥ 2.
    Zeta(Composition),
    /// Γ^{(m)}(k)/Γ(k), m ≥ 0, k ≥ 1.
    GammaRatio { m: u32, k: u32 },
    /// cLi with full index (s₀, r₁, s₁, …), level ≥ 2.
    CLi(Composition),
    /// cli with full index (s₀, s₁, …, sₘ), level ≥ 2.
    Cli(Composition),
    /// Γ^{(m)}(1).
    GammaDerivAtOne(u32),
}

impl std::fmt::Display for ConstantKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstantKey::EulerGamma => write!(f, "gamma"),
            ConstantKey::Zeta(c) => write!(f, "zeta({c})"),
            ConstantKey::GammaRatio { m, k } => write!(f, "Gamma^({m})({k})/Gamma({k})"),
            ConstantKey::CLi(c) => write!(f, "cLi({c})"),
            ConstantKey::Cli(c) => write!(f, "cli({c})"),
            ConstantKey::GammaDerivAtOne(m) => write!(f, "Gamma^({m})(1)"),
        }
    }
}

/// Evaluates any [`ConstantKey`] at the requested tolerance.
pub fn evaluate_key(key: &ConstantKey, tol: f64) -> Result<ConstantValue> {
    match key {
        ConstantKey::EulerGamma => {
            Ok(ConstantValue::new(EULER_GAMMA, 1e-16, Provenance::ClosedForm))
        }
        ConstantKey::Zeta(c) => mzv(c, tol),
        ConstantKey::GammaRatio { m, k } => {
            if *k < 1 {
                return Err(Error::Domain("gamma_ratio requires k ≥ 1".into()));
            }
            Ok(gamma_ratio(*m, *k))
        }
        ConstantKey::CLi(c) => {
            if c.level() < 2 {
                return Err(Error::Domain("cLi keys need level ≥ 2".into()));
            }
            Ok(cLi_constant(c, tol))
        }
        ConstantKey::Cli(c) => {
            let rest = c
                .tail()
                .ok_or_else(|| Error::Domain("cli keys need level ≥ 2".into()))?;
            Ok(cli_constant(c.head(), &rest, tol))
        }
        ConstantKey::GammaDerivAtOne(m) => Ok(gamma_deriv_at_one(*m)),
    }
}

fn comp(parts: &[u32]) -> Composition {
    Composition::new(parts.to_vec()).expect("internal composition is valid")
}

// ---------------------------------------------------------------------------
// Euler–Maclaurin power tails
// ---------------------------------------------------------------------------

/// B₂ᵢ/(2i)! for i = 1..7.
const BERN_FACT: [f64; 7] = [
    1.0 / 12.0,                     // B₂/2!
    -1.0 / 720.0,                   // B₄/4!
    1.0 / 30_240.0,                 // B₆/6!
    -1.0 / 1_209_600.0,             // B₈/8!
    1.0 / 47_900_160.0,             // B₁₀/10!
    -691.0 / 1_307_674_368_000.0,   // B₁₂/12!
    1.0 / 74_724_249_600.0,         // B₁₄/14!
];

/// A finite inverse-power series Σ_p a_p·j^{−p}; the closed tail form of the
/// nested-sum remainders Σ_{k>j} k^{−s}·(lower tail).
#[derive(Debug, Clone, Default)]
struct PowerTail {
    coeffs: BTreeMap<u32, f64>,
}

impl PowerTail {
    /// Tail of a single zeta sum, Σ_{k>j} k^{−s}, as a power series in 1/j:
    /// j^{1−s}/(s−1) − j^{−s}/2 + Σᵢ (B₂ᵢ/(2i)!)·s(s+1)⋯(s+2i−2)·j^{−s−2i+1}.
    fn zeta_tail(s: u32) -> PowerTail {
        assert!(s >= 2);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(s - 1, 1.0 / (s as f64 - 1.0));
        coeffs.insert(s, -0.5);
        for (i, bf) in BERN_FACT.iter().enumerate() {
            let m = 2 * (i as u32 + 1) - 1; // derivative order 2i−1
            let mut rising = 1.0;
            for t in 0..m {
                rising *= (s + t) as f64;
            }
            coeffs.insert(s + m, bf * rising);
        }
        PowerTail { coeffs }
    }

    /// Σ_{k>j} k^{−s}·self(k), truncated at powers ≤ p_cap.
    fn weighted_tail(&self, s: u32, p_cap: u32) -> PowerTail {
        let mut out = PowerTail::default();
        for (&p, &a) in &self.coeffs {
            if s + p > p_cap + 1 {
                continue;
            }
            for (&q, &b) in &PowerTail::zeta_tail(s + p).coeffs {
                if q <= p_cap {
                    *out.coeffs.entry(q).or_insert(0.0) += a * b;
                }
            }
        }
        out
    }

    /// Value at j plus a (heuristic) truncation + rounding error estimate.
    fn eval_with_error(&self, j: u32) -> (f64, f64) {
        let x = j as f64;
        let mut value = 0.0;
        let mut abs_sum = 0.0;
        let mut band = 0.0;
        let p_max = self.coeffs.keys().max().copied().unwrap_or(0);
        for (&p, &a) in &self.coeffs {
            let term = a * x.powi(-(p as i32));
            value += term;
            abs_sum += term.abs();
            if p + 2 >= p_max {
                band += term.abs();
            }
        }
        (value, 4.0 * band / x + 4e-16 * abs_sum)
    }

    fn min_power(&self) -> u32 {
        self.coeffs.keys().next().copied().unwrap_or(0)
    }
}

// ---------------------------------------------------------------------------
// Multiple zeta values
// ---------------------------------------------------------------------------

/// ζ(s₁,…,sₙ) by a truncated outer sum K terms deep plus exact resummation:
/// ζ = head(K) + Σᵢ H_K^{(s_{i+1},…,sₙ)}·Φᵢ(K), where Φ₁ is the zeta tail of
/// s₁ and Φ_{i+1}(j) = Σ_{k>j} k^{−s_{i+1}}·Φᵢ(k); each Φ is a pure power
/// tail evaluated by Euler–Maclaurin.
pub fn mzv(s: &Composition, tol: f64) -> Result<ConstantValue> {
    assert!(tol > 0.0, "tolerance must be positive");
    if s.head() < 2 {
        return Err(Error::Divergence(format!("zeta({s}) diverges: first index must be ≥ 2")));
    }
    let mut k_top = 60u32;
    let (mut value, mut err) = mzv_resummed(s.parts(), k_top);
    while err > tol / 2.0 && k_top < 2000 {
        k_top *= 2;
        (value, err) = mzv_resummed(s.parts(), k_top);
    }
    Ok(ConstantValue::new(value, err, Provenance::NestedSum))
}

fn mzv_resummed(parts: &[u32], k_top: u32) -> (f64, f64) {
    let n = parts.len();
    // h[i] trails H_k^{(parts[i..])} in double-double; h[n] = 1 (empty index).
    let mut h = vec![Dd::ZERO; n + 1];
    h[n] = Dd::ONE;
    let mut head = Dd::ZERO;
    for k in 1..=k_top {
        // Strict outer sum needs the inner value at k−1, i.e. before update.
        head += inv_pow(k, parts[0]) * h[1];
        for i in 0..n {
            let add = inv_pow(k, parts[i]) * h[i + 1];
            h[i] += add;
        }
    }
    let mut value = head.to_f64();
    let mut err = 2e-16 * value.abs();
    let mut phi = PowerTail::zeta_tail(parts[0]);
    for i in 1..=n {
        if i > 1 {
            let cap = phi.min_power() + parts[i - 1] + 13;
            phi = phi.weighted_tail(parts[i - 1], cap);
        }
        let (v, e) = phi.eval_with_error(k_top);
        let hi = h[i].to_f64();
        value += hi * v;
        err += hi.abs() * e + 1e-16 * (hi * v).abs();
    }
    (value, err)
}

static MZV_CACHE: crate::SyncCache<Vec<u32>, (f64, f64)> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Cached MZV at working precision; `parts` must have first entry ≥ 2.
fn mzv_cached(parts: &[u32]) -> (f64, f64) {
    if let Some(&hit) = MZV_CACHE.lock().unwrap().get(parts) {
        return hit;
    }
    let c = mzv(&comp(parts), 1e-14).expect("first index ≥ 2");
    let pair = (c.value, c.abs_error);
    let mut cache = MZV_CACHE.lock().unwrap();
    if cache.len() < cache_limit() {
        cache.insert(parts.to_vec(), pair);
    }
    pair
}

// ---------------------------------------------------------------------------
// Polygamma and gamma-derivative ratios
// ---------------------------------------------------------------------------

/// Single zeta value ζ(m), m ≥ 2. ζ(2), ζ(3) come from decimal literals
/// (validated against the summation path in tests), the rest is computed.
pub fn zeta_single(m: u32) -> f64 {
    match m {
        0 | 1 => panic!("zeta_single requires m ≥ 2"),
        2 => ZETA_2,
        3 => ZETA_3,
        _ => mzv_cached(&[m]).0,
    }
}

/// ψ^{(l)}(k) for integer k ≥ 1: ψ(k) = −γ + Σ_{j<k} 1/j, and for l ≥ 1
/// ψ^{(l)}(k) = (−1)^{l+1} l! Σ_{j≥k} j^{−(l+1)} = (−1)^{l+1} l! (ζ(l+1) −
/// Σ_{j<k} j^{−(l+1)}).
pub fn polygamma_at_integer(l: u32, k: u32) -> ConstantValue {
    assert!(k >= 1, "polygamma_at_integer requires k ≥ 1");
    // Σ_{j<k} j^{−(l+1)} in f64; all terms positive, no cancellation.
    let head: f64 = (1..k).map(|j| (j as f64).powi(-(l as i32 + 1))).sum();
    if l == 0 {
        let value = -EULER_GAMMA + head;
        return ConstantValue::new(value, 4e-16 * (1.0 + head), Provenance::ClosedForm);
    }
    let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
    let lfact = factorial(l as u64).to_f64().expect("l! fits f64");
    let zeta = zeta_single(l + 1);
    let value = sign * lfact * (zeta - head);
    let err = lfact * (1e-15 * zeta + 4e-16 * head) + 1e-16 * value.abs();
    ConstantValue::new(value, err, Provenance::ClosedForm)
}

/// Polynomial representation of Γ^{(m)}(x)/Γ(x) in ψ, ψ^{(1)}, ψ^{(2)}, …:
/// a monomial is the sorted multiset of derivative orders (ψ ≡ order 0).
/// R₀ = 1 and R_m = ∂ₓR_{m−1} + ψ·R_{m−1}, with ∂ₓ raising one order.
pub(crate) fn gamma_ratio_poly(m: u32) -> BTreeMap<Vec<u32>, BigInt> {
    static POLY_CACHE: crate::SyncCache<u32, BTreeMap<Vec<u32>, BigInt>> =
        Lazy::new(|| Mutex::new(HashMap::new()));
    if let Some(hit) = POLY_CACHE.lock().unwrap().get(&m) {
        return hit.clone();
    }
    let result = if m == 0 {
        let mut base = BTreeMap::new();
        base.insert(Vec::new(), BigInt::one());
        base
    } else {
        let prev = gamma_ratio_poly(m - 1);
        let mut next: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (mono, coeff) in &prev {
            // ψ·monomial.
            let mut with_psi = mono.clone();
            with_psi.insert(0, 0);
            *next.entry(with_psi).or_insert_with(BigInt::zero) += coeff;
            // ∂ₓ monomial: raise each factor once (grouped by distinct order).
            let mut idx = 0;
            while idx < mono.len() {
                let d = mono[idx];
                let run = mono[idx..].iter().take_while(|&&x| x == d).count();
                let mut raised = mono.clone();
                raised.remove(idx);
                let pos = raised.partition_point(|&x| x <= d + 1);
                raised.insert(pos, d + 1);
                *next.entry(raised).or_insert_with(BigInt::zero) +=
                    coeff * BigInt::from(run);
                idx += run;
            }
        }
        next
    };
    let mut cache = POLY_CACHE.lock().unwrap();
    if cache.len() < cache_limit() {
        cache.insert(m, result.clone());
    }
    result
}

/// Γ^{(m)}(k)/Γ(k): the polygamma polynomial of order m evaluated at k.
pub fn gamma_ratio(m: u32, k: u32) -> ConstantValue {
    assert!(k >= 1, "gamma_ratio requires k ≥ 1");
    let poly = gamma_ratio_poly(m);
    let mut value = 0.0;
    let mut err = 0.0;
    for (mono, coeff) in &poly {
        let c = coeff.to_f64().expect("coefficient fits f64");
        let mut prod = 1.0_f64;
        let mut prod_err = 0.0_f64;
        for &d in mono {
            let f = polygamma_at_integer(d, k);
            prod_err = prod_err.abs() * f.value.abs() + prod.abs() * f.abs_error;
            prod *= f.value;
        }
        value += c * prod;
        err += c.abs() * (prod_err + 1e-16 * prod.abs());
    }
    ConstantValue::new(value, err, Provenance::ClosedForm)
}

/// Γ^{(m)}(1); Γ(1) = 1 so this is gamma_ratio(m, 1).
pub fn gamma_deriv_at_one(m: u32) -> ConstantValue {
    gamma_ratio(m, 1)
}

// ---------------------------------------------------------------------------
// cli and cLi connection constants
// ---------------------------------------------------------------------------

/// cli_{s₀,s₁,…,sₙ} = Σ_{k₁>…>kₙ≥1} [Γ^{(s₀−1)}(k₁)/Γ(k₁)] / (k₁^{s₁+1}
/// k₂^{s₂} ⋯ kₙ^{sₙ}), reduced to a γ/ζ combination: the gamma ratio becomes
/// a polygamma polynomial, digamma powers expand through ordered partitions
/// and multinomials, polygamma tail sums through stuffle products.
pub fn cli_constant(s0: u32, rest: &Composition, tol: f64) -> ConstantValue {
    assert!(s0 >= 1, "cli_constant requires s₀ ≥ 1");
    assert!(tol > 0.0, "tolerance must be positive");
    let s1 = rest.head();
    let tail = rest.tail();
    let poly = gamma_ratio_poly(s0 - 1);
    let mut value = 0.0;
    let mut err = 0.0;
    for (mono, coeff) in &poly {
        let r = mono.iter().filter(|&&d| d == 0).count() as u32;
        let ls: Vec<u32> = mono.iter().copied().filter(|&d| d >= 1).collect();
        let (v, e) = psi_monomial_sum(r, &ls, s1, tail.as_ref());
        let c = coeff.to_f64().expect("coefficient fits f64");
        value += c * v;
        err += c.abs() * e;
    }
    ConstantValue::new(value, err, Provenance::NestedSum)
}

/// Σ_{k₁>…>kₙ≥1} ψ(k₁)^r·ψ^{(l₁)}(k₁)⋯ψ^{(lᵢ)}(k₁) / (k₁^{s₁+1} k₂^{s₂} ⋯)
/// as a γ/ζ combination:
///
/// (−1)^{Σ(lⱼ+1)} l₁!⋯lᵢ! Σ_{j=0}^r Σ_{q∈op(j)} Σ_{u∈q⋆(s₂,…,sₙ)}
///   Σ_{v∈(l₁+1)⋆⋯⋆(lᵢ+1)} (−γ)^{r−j} C(r,j) (j;q)multinomial
///   [ζ(v⊕(s₁+1), u) + ζ(v, s₁+1, u)],
///
/// where the bracket degenerates to ζ(s₁+1, u) when no polygammas are
/// present, op(0)⋆tail = {tail}, and an empty tail leaves u = q.
fn psi_monomial_sum(r: u32, ls: &[u32], s1: u32, tail: Option<&Composition>) -> (f64, f64) {
    // Prefactor (−1)^{Σ(lⱼ+1)}·Π lⱼ!.
    let mut prefactor = 1.0;
    for &l in ls {
        let sgn = if (l + 1) % 2 == 0 { 1.0 } else { -1.0 };
        prefactor *= sgn * factorial(l as u64).to_f64().expect("l! fits f64");
    }
    // v-multiset: iterated stuffle of the singletons (l₁+1), …, (lᵢ+1).
    let v_set: Option<CompositionMultiset> = ls.split_first().map(|(&first, restls)| {
        let mut ms: CompositionMultiset =
            std::iter::once((comp(&[first + 1]), 1usize)).collect();
        for &l in restls {
            let single = comp(&[l + 1]);
            let mut next = CompositionMultiset::default();
            for (c, m) in ms.iter() {
                for (d, m2) in stuffle(c, &single).iter() {
                    next.insert(d.clone(), m * m2);
                }
            }
            ms = next;
        }
        ms
    });

    let mut total = 0.0;
    let mut total_err = 0.0;
    for j in 0..=r {
        let crj = binomial(r as u64, j as u64).to_f64().expect("binomial fits f64");
        let gamma_pow = (-EULER_GAMMA).powi((r - j) as i32);
        // (q, multinomial weight) choices; q = None encodes the empty index.
        let q_choices: Vec<(Option<Composition>, f64)> = if j == 0 {
            vec![(None, 1.0)]
        } else {
            ordered_partitions(j)
                .expect("j ≥ 1")
                .into_iter()
                .map(|q| {
                    let w = multinomial(j, &q)
                        .expect("weights match")
                        .to_f64()
                        .expect("multinomial fits f64");
                    (Some(q), w)
                })
                .collect()
        };
        for (q, q_weight) in q_choices {
            // u ∈ q ⋆ (s₂,…,sₙ), degenerating when either side is empty.
            let u_choices: Vec<(Option<Vec<u32>>, f64)> = match (&q, tail) {
                (None, None) => vec![(None, 1.0)],
                (Some(q), None) => vec![(Some(q.parts().to_vec()), 1.0)],
                (None, Some(t)) => vec![(Some(t.parts().to_vec()), 1.0)],
                (Some(q), Some(t)) => stuffle(q, t)
                    .iter()
                    .map(|(u, m)| (Some(u.parts().to_vec()), m as f64))
                    .collect(),
            };
            for (u, u_weight) in u_choices {
                let w = crj * gamma_pow * q_weight * u_weight;
                let u_parts = u.as_deref().unwrap_or(&[]);
                match &v_set {
                    None => {
                        // ζ(s₁+1, u).
                        let mut key = vec![s1 + 1];
                        key.extend_from_slice(u_parts);
                        let (zv, ze) = mzv_cached(&key);
                        total += w * zv;
                        total_err += w.abs() * ze;
                    }
                    Some(vs) => {
                        for (v, vm) in vs.iter() {
                            let vw = w * vm as f64;
                            // ζ(v ⊕ (s₁+1), u): merge into v's last entry.
                            let mut merged = v.parts().to_vec();
                            *merged.last_mut().expect("v nonempty") += s1 + 1;
                            merged.extend_from_slice(u_parts);
                            let (z1, e1) = mzv_cached(&merged);
                            // ζ(v, s₁+1, u).
                            let mut listed = v.parts().to_vec();
                            listed.push(s1 + 1);
                            listed.extend_from_slice(u_parts);
                            let (z2, e2) = mzv_cached(&listed);
                            total += vw * (z1 + z2);
                            total_err += vw.abs() * (e1 + e2);
                        }
                    }
                }
            }
        }
    }
    (prefactor * total, prefactor.abs() * total_err)
}

/// cLi_{s₀,r₁,s₁,…,r_k,s_k[,r_{k+1}]}: the index after s₀ is read as
/// alternating pairs (rᵢ, sᵢ) with an optional trailing r_{k+1}, and the
/// constant expands into cli constants,
///
/// cLi = Σ_{op(s₁+1)} ⋯ Σ_{op(s_k+1)} cli_{s₀, (r₁−1)⊕op(s₁+1)⊕⋯⊕(r_k−1)⊕op(s_k+1)[⊕r_{k+1}]},
///
/// where (0)⊕u = u so the factor drops out when rᵢ = 1.
#[allow(non_snake_case)]
pub fn cLi_constant(s: &Composition, tol: f64) -> ConstantValue {
    assert!(s.level() >= 2, "cLi_constant requires level ≥ 2");
    let s0 = s.head();
    let expanded = dressed_expansion(&s.parts()[1..]);
    let mut value = 0.0;
    let mut err = 0.0;
    for (idx, mult) in expanded.iter() {
        let c = cli_constant(s0, idx, tol);
        value += mult as f64 * c.value;
        err += mult as f64 * c.abs_error;
    }
    ConstantValue::new(value, err, Provenance::NestedSum)
}
