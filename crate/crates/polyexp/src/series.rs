//! Taylor-regime evaluation of the entire functions el (undressed, strict
//! multiple-harmonic coefficients) and EL (dressed, star coefficients):
//!
//!   el_{s₁,…,sₙ}(z) = Σ_{k≥n} z^k/(k!·k^{s₁}) · H_{k−1}^{(s₂,…,sₙ)},
//!   EL: coefficient of z^k/(k!·k^{r₁}) is the star harmonic *H_k over the
//!   slot exponents read off the alternating index (r₁,s₁,r₂,s₂,…[,r_{k+1}]).
//!
//! Also: the dressed↔undressed expansion as a second evaluation path, the
//! derivative rules z·d/dz (index lowering for s₁ > 1, ordered-partition
//! reflection sums for s₁ = 1), and the quadratic identities
//! EL_m(z)EL_n(−z) + α₀EL_{m+n}(z) + Σ_j α_j EL_{m+n−j,j}(z) + (z ↦ −z) = 0
//! with the α tables computed exactly.
//!
//! Summation runs in double-double arithmetic; each coefficient is advanced
//! by the O(weight) incremental harmonic recurrence rather than re-summed.

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use once_cell::sync::Lazy;

use crate::combinatorics::{
    binomial, dressed_expansion, ordered_partitions, Composition, ExactRational,
};
use crate::dd::{inv_pow, Cdd, Dd};
use crate::{cache_limit, Error, Result};

/// The argument/value type used throughout; both components finite for
/// valid results.
pub type ComplexValue = Complex64;

/// Tuning for Taylor summation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesParams {
    pub max_terms: usize,
    pub tail_tol: f64,
}

impl Default for SeriesParams {
    fn default() -> Self {
        SeriesParams { max_terms: 2000, tail_tol: 1e-16 }
    }
}

/// How an [`EvalResult`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Taylor,
    Asymptotic,
    Relation,
    Quadrature,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Taylor => "Taylor",
            Method::Asymptotic => "Asymptotic",
            Method::Relation => "Relation",
            Method::Quadrature => "Quadrature",
        };
        f.write_str(s)
    }
}

/// A numeric evaluation with an absolute error estimate and bookkeeping.
/// `terms_used ≤ max_terms` whenever `method == Taylor`.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: ComplexValue,
    pub abs_error: f64,
    pub method: Method,
    pub terms_used: usize,
}

/// Shared Taylor driver: sums Σ_{k≥1} a_k z^k/k! where `coeff(k)` yields a_k
/// and is called once per k in increasing order (so it may carry incremental
/// state). Stops once |term| ≤ tail_tol·max(1,|partial|), k ≥ |z| + 10
/// (past the term-magnitude peak) and k > min_k (past any zero prefix of the
/// coefficients). Exhausting max_terms is flagged by abs_error = |last term|.
fn taylor_sum_core(
    z: Complex64,
    p: &SeriesParams,
    min_k: u32,
    tail_tol: f64,
    unit_round: f64,
    mut coeff: impl FnMut(u32) -> Dd,
) -> (Cdd, f64, usize) {
    assert!(p.max_terms >= 1 && tail_tol > 0.0, "invalid SeriesParams");
    let zc = Cdd::from_complex(z);
    let z_abs = z.norm();
    let mut pow = Cdd { re: Dd::ONE, im: Dd::ZERO };
    let mut sum = Cdd::ZERO;
    let mut abs_sum = 0.0_f64;
    let mut last = 0.0_f64;
    let mut used = p.max_terms;
    let mut converged = false;
    let k_max = p.max_terms.min(u32::MAX as usize) as u32;
    for k in 1..=k_max {
        pow = pow * zc / k as f64;
        let contrib = pow.scale(coeff(k));
        sum += contrib;
        last = contrib.norm();
        abs_sum += last;
        if last <= tail_tol * sum.norm().max(1.0) && k as f64 >= z_abs + 10.0 && k > min_k {
            used = k as usize;
            converged = true;
            break;
        }
    }
    let mut abs_error = 1e-30 * abs_sum + unit_round * sum.norm();
    if converged {
        // Beyond the peak the term ratio is below 2|z|/(k+1) (the harmonic
        // coefficient ratio tends to 1 from above), giving a geometric tail.
        let rho = (2.0 * z_abs / (used as f64 + 1.0)).min(0.95);
        abs_error += last * rho / (1.0 - rho);
    } else {
        abs_error += last;
    }
    (sum, abs_error, used)
}

fn taylor_sum(
    z: Complex64,
    p: &SeriesParams,
    min_k: u32,
    coeff: impl FnMut(u32) -> Dd,
) -> EvalResult {
    let (sum, abs_error, used) = taylor_sum_core(z, p, min_k, p.tail_tol, f64::EPSILON, coeff);
    EvalResult { value: sum.to_complex(), abs_error, method: Method::Taylor, terms_used: used }
}

/// Undressed el_{s₁,…,sₙ}(z): entire; the Taylor sum starts at k = n.
pub fn el_eval(s: &Composition, z: Complex64, p: &SeriesParams) -> EvalResult {
    let parts = s.parts();
    let s1 = parts[0];
    let tail: Vec<u32> = parts[1..].to_vec();
    let m = tail.len();
    // h[i] = H_{k−1}^{(tail_i,…)} (strict); suffix of length 0 is 1.
    let mut h = vec![Dd::ZERO; m + 1];
    h[m] = Dd::ONE;
    taylor_sum(z, p, s.level() as u32, move |k| {
        let c = inv_pow(k, s1) * h[0];
        for i in 0..m {
            let add = inv_pow(k, tail[i]) * h[i + 1];
            h[i] += add;
        }
        c
    })
}

/// Reads the alternating dressed index (r₁,s₁,r₂,s₂,…[,r_{k+1}]) and returns
/// (r₁, slot exponents): W = Σsᵢ slots initialised to 1, with r_{j+1} added
/// onto the slot at cumulative position s₁+⋯+s_j.
fn star_index(parts: &[u32]) -> (u32, Vec<u32>) {
    let rs: Vec<u32> = parts.iter().step_by(2).copied().collect();
    let ss: Vec<u32> = parts.iter().skip(1).step_by(2).copied().collect();
    let w: usize = ss.iter().map(|&x| x as usize).sum();
    let mut slots = vec![1u32; w];
    let mut pos = 0usize;
    for j in 1..rs.len() {
        pos += ss[j - 1] as usize;
        slots[pos - 1] += rs[j];
    }
    (rs[0], slots)
}

/// Taylor coefficient stream of the dressed EL: a_k = *H_k^{(slots)}/k^{r₁}
/// with the star-harmonic state updated incrementally.
#[allow(non_snake_case)]
fn EL_coeff(parts: &[u32]) -> impl FnMut(u32) -> Dd {
    let (r1, slots) = star_index(parts);
    let m = slots.len();
    // h[i] = *H_k^{(slots_i,…)} (star); updated tail-first so the upper
    // index may repeat.
    let mut h = vec![Dd::ZERO; m + 1];
    h[m] = Dd::ONE;
    move |k| {
        for i in (0..m).rev() {
            let add = inv_pow(k, slots[i]) * h[i + 1];
            h[i] += add;
        }
        inv_pow(k, r1) * h[0]
    }
}

/// Dressed EL_{s₁,…,sₙ}(z) via its Taylor expansion with star-harmonic
/// coefficients; entire, EL(0) = 0. A level-1 index reduces to el.
#[allow(non_snake_case)]
pub fn EL_eval(s: &Composition, z: Complex64, p: &SeriesParams) -> EvalResult {
    taylor_sum(z, p, 1, EL_coeff(s.parts()))
}

/// Dressed EL kept in double-double with the tail driven to ~1e−29:
/// consumers that difference nearby evaluations (finite-difference probes on
/// the relation evaluator) need the result smooth in z below the f64 ulp.
#[allow(non_snake_case)]
pub(crate) fn EL_eval_dd(s: &Composition, z: Complex64, p: &SeriesParams) -> (Cdd, f64, usize) {
    taylor_sum_core(z, p, 1, p.tail_tol.min(1e-29), 1e-31, EL_coeff(s.parts()))
}

/// Dressed EL as the ordered-partition sum of undressed el: one el term per
/// element of the ⊕-chain expansion of the index. Agrees with [`EL_eval`]
/// within the combined error estimates.
#[allow(non_snake_case)]
pub fn EL_from_undressed(s: &Composition, z: Complex64, p: &SeriesParams) -> EvalResult {
    let mut value = Complex64::new(0.0, 0.0);
    let mut abs_error = 0.0;
    let mut terms_used = 0;
    for (idx, mult) in dressed_expansion(s.parts()).iter() {
        let r = el_eval(idx, z, p);
        value += mult as f64 * r.value;
        abs_error += mult as f64 * r.abs_error;
        terms_used = terms_used.max(r.terms_used);
    }
    EvalResult { value, abs_error, method: Method::Relation, terms_used }
}

/// z·d/dz el_{s₁,…,sₙ}(z). Index lowering for s₁ > 1; for s₁ = 1 the rule
///
///   z·d/dz el_{1,s₂,…,sₙ}(z) = −el_{s₂,…,sₙ}(z)
///        − (−1)ⁿ e^z Σ_{op(s₂)}⋯Σ_{op(sₙ)} el_{op(s₂),…,op(sₙ)}(−z),
///
/// where the partition blocks concatenate; z·d/dz el₁ = e^z − 1.
pub fn el_derivative(s: &Composition, z: Complex64, p: &SeriesParams) -> Result<EvalResult> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("el derivative rule needs z ≠ 0".into()));
    }
    let parts = s.parts();
    let n = s.level();
    if parts[0] > 1 {
        let mut lowered = parts.to_vec();
        lowered[0] -= 1;
        return Ok(el_eval(&Composition::new(lowered).unwrap(), z, p));
    }
    if n == 1 {
        let value = z.exp() - 1.0;
        return Ok(EvalResult {
            value,
            abs_error: f64::EPSILON * (value.norm() + 1.0),
            method: Method::Relation,
            terms_used: 0,
        });
    }
    let tail = Composition::new(parts[1..].to_vec()).unwrap();
    let a = el_eval(&tail, z, p);
    // Cartesian product of ordered partitions of s₂,…,sₙ, blocks concatenated.
    let mut combos: Vec<Vec<u32>> = vec![Vec::new()];
    for &si in &parts[1..] {
        let mut next = Vec::new();
        for q in ordered_partitions(si).unwrap() {
            for c in &combos {
                let mut v = c.clone();
                v.extend_from_slice(q.parts());
                next.push(v);
            }
        }
        combos = next;
    }
    let mut refl = Complex64::new(0.0, 0.0);
    let mut refl_err = 0.0;
    let mut terms_used = a.terms_used;
    for c in combos {
        let r = el_eval(&Composition::new(c).unwrap(), -z, p);
        refl += r.value;
        refl_err += r.abs_error;
        terms_used = terms_used.max(r.terms_used);
    }
    let sgn = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let ez = z.exp();
    let value = -a.value - sgn * ez * refl;
    let abs_error =
        a.abs_error + ez.norm() * refl_err + f64::EPSILON * value.norm();
    Ok(EvalResult { value, abs_error, method: Method::Relation, terms_used })
}

/// z·d/dz EL_{s₁,…,sₙ}(z) = EL_{s₁−1,s₂,…,sₙ}(z) for s₁ > 1,
/// −e^z EL_{s₂,…,sₙ}(−z) for s₁ = 1 (level ≥ 2), and e^z − 1 for EL₁.
#[allow(non_snake_case)]
pub fn EL_derivative(s: &Composition, z: Complex64, p: &SeriesParams) -> Result<EvalResult> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("EL derivative rule needs z ≠ 0".into()));
    }
    let parts = s.parts();
    if parts[0] > 1 {
        let mut lowered = parts.to_vec();
        lowered[0] -= 1;
        return Ok(EL_eval(&Composition::new(lowered).unwrap(), z, p));
    }
    if s.level() == 1 {
        let value = z.exp() - 1.0;
        return Ok(EvalResult {
            value,
            abs_error: f64::EPSILON * (value.norm() + 1.0),
            method: Method::Relation,
            terms_used: 0,
        });
    }
    let tail = Composition::new(parts[1..].to_vec()).unwrap();
    let inner = EL_eval(&tail, -z, p);
    let ez = z.exp();
    let value = -ez * inner.value;
    Ok(EvalResult {
        value,
        abs_error: ez.norm() * inner.abs_error + f64::EPSILON * value.norm(),
        method: Method::Relation,
        terms_used: inner.terms_used,
    })
}

static ALPHA_CACHE: crate::SyncCache<(u32, u32), Vec<ExactRational>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn rat(x: u64) -> ExactRational {
    ExactRational::from_integer(x.into())
}

/// α coefficients of the quadratic identity for (m, n), 1 ≤ m ≤ n, as exact
/// rationals α₀..α_n. Computed by the double recursion
/// α_j^{(m,n)} = α_j^{(m,n−1)} + α_j^{(m−1,n)} (j ≤ n−1),
/// α_n^{(m,n)} = α_n^{(m−1,n)}, boundary α^{(m,m)} = 2α^{(m−1,m)} and base
/// α^{(1,n)} = (n+1, 2, 1, …, 1); every value is checked against the
/// closed forms α₀ = C(m+n,m), α₁ = 2C(m+n−2,m−1), α₂ = C(m+n−2,m−1),
/// α_j = C(n−j+m−1,m−1) for m < j ≤ n, α_m = 1 + C(n−1,m−1) for m ≥ 3.
pub fn alpha_coefficients(m: u32, n: u32) -> Result<Vec<ExactRational>> {
    if m < 1 || n < 1 {
        return Err(Error::Domain("alpha coefficients need m, n ≥ 1".into()));
    }
    if m > n {
        return Err(Error::Domain(format!(
            "alpha coefficients are tabulated for m ≤ n; got ({m},{n}) — use symmetry by swapping"
        )));
    }
    Ok(alpha_inner(m, n))
}

fn alpha_inner(m: u32, n: u32) -> Vec<ExactRational> {
    if let Some(hit) = ALPHA_CACHE.lock().unwrap().get(&(m, n)) {
        return hit.clone();
    }
    let v: Vec<ExactRational> = if m == 1 {
        let mut v = vec![rat(n as u64 + 1), rat(2)];
        v.resize(n as usize + 1, rat(1));
        v
    } else if m == n {
        alpha_inner(m - 1, m).iter().map(|a| a * rat(2)).collect()
    } else {
        let shorter = alpha_inner(m, n - 1);
        let prev = alpha_inner(m - 1, n);
        let mut v = Vec::with_capacity(n as usize + 1);
        for j in 0..n as usize {
            v.push(&shorter[j] + &prev[j]);
        }
        v.push(prev[n as usize].clone());
        v
    };
    let c = |a: u64, b: u64| ExactRational::from_integer(binomial(a, b));
    debug_assert_eq!(v.len(), n as usize + 1);
    assert_eq!(v[0], c((m + n) as u64, m as u64));
    assert_eq!(v[1], rat(2) * c((m + n - 2) as u64, (m - 1) as u64));
    if n >= 2 {
        assert_eq!(v[2], c((m + n - 2) as u64, (m - 1) as u64));
    }
    for j in (m + 1)..=n {
        assert_eq!(v[j as usize], c((n - j + m - 1) as u64, (m - 1) as u64));
    }
    if m >= 3 {
        assert_eq!(v[m as usize], rat(1) + c((n - 1) as u64, (m - 1) as u64));
    }
    if m == n {
        assert_eq!(v[m as usize], rat(2));
    }
    let mut cache = ALPHA_CACHE.lock().unwrap();
    if cache.len() < cache_limit() {
        cache.insert((m, n), v.clone());
    }
    v
}

/// Residual of the quadratic identity
/// EL_m(z)EL_n(−z) + α₀EL_{m+n}(z) + Σ_{j=1}^n α_j EL_{m+n−j,j}(z) + (z ↦ −z);
/// vanishes identically, so the value must be zero within abs_error.
pub fn quadratic_identity_residual(
    m: u32,
    n: u32,
    z: Complex64,
    p: &SeriesParams,
) -> EvalResult {
    assert!((1..=n).contains(&m), "requires 1 ≤ m ≤ n");
    let alpha: Vec<f64> = alpha_coefficients(m, n)
        .unwrap()
        .iter()
        .map(|a| a.to_f64().unwrap())
        .collect();
    let idx = |v: &[u32]| Composition::new(v.to_vec()).unwrap();
    let mut value = Complex64::new(0.0, 0.0);
    let mut abs_error = 0.0;
    let mut terms_used = 0;
    for w in [z, -z] {
        let a = EL_eval(&idx(&[m]), w, p);
        let b = EL_eval(&idx(&[n]), -w, p);
        value += a.value * b.value;
        abs_error += a.abs_error * b.value.norm()
            + b.abs_error * a.value.norm()
            + a.abs_error * b.abs_error;
        let lin = EL_eval(&idx(&[m + n]), w, p);
        value += alpha[0] * lin.value;
        abs_error += alpha[0] * lin.abs_error;
        terms_used = terms_used.max(a.terms_used).max(b.terms_used).max(lin.terms_used);
        for j in 1..=n {
            let r = EL_eval(&idx(&[m + n - j, j]), w, p);
            value += alpha[j as usize] * r.value;
            abs_error += alpha[j as usize] * r.abs_error;
            terms_used = terms_used.max(r.terms_used);
        }
    }
    abs_error += f64::EPSILON * value.norm();
    EvalResult { value, abs_error, method: Method::Relation, terms_used }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::multi_harmonic_f64;

    fn c(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// All compositions of weights 1..=w.
    fn comps_up_to(w: u32) -> Vec<Composition> {
        (1..=w)
            .flat_map(|k| ordered_partitions(k).unwrap())
            .collect()
    }

    /// el by direct f64 summation with exact-rational harmonic coefficients.
    fn brute_el(parts: &[u32], zz: Complex64, kmax: u32) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        for k in 1..=kmax {
            pow *= zz / k as f64;
            if k < parts.len() as u32 {
                continue;
            }
            let h = if parts.len() == 1 {
                1.0
            } else {
                multi_harmonic_f64(k - 1, &c(&parts[1..]), false)
            };
            sum += pow * h / (k as f64).powi(parts[0] as i32);
        }
        sum
    }

    #[test]
    fn el_at_zero_is_zero() {
        for s in [c(&[1]), c(&[2, 1]), c(&[1, 1, 1])] {
            let r = el_eval(&s, z(0.0, 0.0), &SeriesParams::default());
            assert_eq!(r.value, Complex64::new(0.0, 0.0));
            assert!(r.abs_error <= 1e-30);
        }
    }

    #[test]
    fn el11_leading_term() {
        let zz = z(1e-3, 0.0);
        let r = el_eval(&c(&[1, 1]), zz, &SeriesParams::default());
        let lead = zz * zz / 4.0;
        assert!((r.value / lead - 1.0).norm() < 1e-3);
    }

    #[test]
    fn el1_matches_exponential_integral_value() {
        // el₁(1) = Ei(1) − γ with Ei(1) = 1.8951178163559367555.
        let r = el_eval(&c(&[1]), z(1.0, 0.0), &SeriesParams::default());
        assert!((r.value.re - 1.3179021514544039).abs() < 1e-14);
        assert_eq!(r.value.im, 0.0);
        assert_eq!(r.method, Method::Taylor);
        assert!(r.terms_used >= 11);
    }

    #[test]
    fn el_matches_brute_force() {
        let p = SeriesParams::default();
        for s in [vec![2], vec![1, 1], vec![2, 1], vec![1, 1, 1], vec![3, 2]] {
            for zz in [z(0.8, 0.0), z(-1.7, 0.0), z(0.4, 1.1)] {
                let fast = el_eval(&c(&s), zz, &p).value;
                let slow = brute_el(&s, zz, 45);
                assert!(
                    (fast - slow).norm() < 1e-12,
                    "el_{s:?}({zz}) fast={fast} slow={slow}"
                );
            }
        }
    }

    #[test]
    fn dressed_taylor_matches_nested_sums() {
        // EL_{1,2}(z) = Σ_{k₁≥k₂≥k₃≥1} z^{k₁}/(k₁!·k₁k₂k₃): independent loops.
        let zz = z(0.8, 0.0);
        let mut direct = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for k1 in 1u32..=30 {
            pow *= zz;
            fact *= k1 as f64;
            let mut inner = 0.0;
            for k2 in 1..=k1 {
                for k3 in 1..=k2 {
                    inner += 1.0 / (k2 as f64 * k3 as f64);
                }
            }
            direct += pow / fact * inner / (k1 as f64);
        }
        let r = EL_eval(&c(&[1, 2]), zz, &SeriesParams::default());
        assert!((r.value - direct).norm() < 1e-13, "{} vs {direct}", r.value);

        // EL_{2,1}(z) = Σ_{k₁≥k₂} z^{k₁}/(k₁!·k₁²k₂).
        let zz = z(0.9, 0.0);
        let mut direct = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for k1 in 1u32..=30 {
            pow *= zz;
            fact *= k1 as f64;
            let inner: f64 = (1..=k1).map(|k2| 1.0 / k2 as f64).sum();
            direct += pow / fact * inner / (k1 as f64).powi(2);
        }
        let r = EL_eval(&c(&[2, 1]), zz, &SeriesParams::default());
        assert!((r.value - direct).norm() < 1e-13);

        // EL_{1,1,1}(z) = Σ_{k₁≥k₂} z^{k₁}/(k₁!·k₁k₂²).
        let zz = z(-1.3, 0.0);
        let mut direct = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for k1 in 1u32..=35 {
            pow *= zz;
            fact *= k1 as f64;
            let inner: f64 = (1..=k1).map(|k2| 1.0 / (k2 as f64).powi(2)).sum();
            direct += pow / fact * inner / (k1 as f64);
        }
        let r = EL_eval(&c(&[1, 1, 1]), zz, &SeriesParams::default());
        assert!((r.value - direct).norm() < 1e-13);
    }

    #[test]
    fn el_at_zero_dressed() {
        for s in [c(&[1]), c(&[2, 1]), c(&[1, 1, 1, 1])] {
            let r = EL_eval(&s, z(0.0, 0.0), &SeriesParams::default());
            assert_eq!(r.value, Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn dual_paths_agree() {
        let p = SeriesParams::default();
        let grid = [z(0.5, 0.0), z(-0.5, 0.0), z(2.0, 0.0), z(-2.0, 0.0), z(0.0, 3.0)];
        for s in comps_up_to(5) {
            for &zz in &grid {
                let star = EL_eval(&s, zz, &p);
                let rel = EL_from_undressed(&s, zz, &p);
                let diff = (star.value - rel.value).norm();
                assert!(
                    diff <= 1e-11,
                    "EL_{{{s}}}({zz}): star {} vs undressed {} (diff {diff:.2e})",
                    star.value,
                    rel.value
                );
            }
        }
    }

    #[test]
    fn level_one_dressed_equals_undressed() {
        let p = SeriesParams::default();
        for n in 1..=4 {
            for zz in [z(1.1, 0.0), z(-2.4, 0.7)] {
                let a = EL_eval(&c(&[n]), zz, &p);
                let b = el_eval(&c(&[n]), zz, &p);
                assert!((a.value - b.value).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn derivative_examples() {
        let p = SeriesParams::default();
        let zz = z(0.8, 0.0);
        // z·d/dz el_{1,1} = −el₁(z) − e^z el₁(−z).
        let d = el_derivative(&c(&[1, 1]), zz, &p).unwrap();
        let expect = -el_eval(&c(&[1]), zz, &p).value
            - zz.exp() * el_eval(&c(&[1]), -zz, &p).value;
        assert!((d.value - expect).norm() < 1e-14);
        // z·d/dz el_{2,1} = el_{1,1}.
        let d = el_derivative(&c(&[2, 1]), zz, &p).unwrap();
        assert!((d.value - el_eval(&c(&[1, 1]), zz, &p).value).norm() < 1e-15);
        // z·d/dz el_{1,2} = −el₂(z) − e^z el₂(−z) − e^z el_{1,1}(−z).
        let d = el_derivative(&c(&[1, 2]), zz, &p).unwrap();
        let expect = -el_eval(&c(&[2]), zz, &p).value
            - zz.exp()
                * (el_eval(&c(&[2]), -zz, &p).value + el_eval(&c(&[1, 1]), -zz, &p).value);
        assert!((d.value - expect).norm() < 1e-14);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = SeriesParams::default();
        let h = 1e-5;
        for s in comps_up_to(4) {
            for &x in &[0.7, -0.7, 1.3] {
                let zz = z(x, 0.0);
                let d = el_derivative(&s, zz, &p).unwrap();
                let fd = zz
                    * (el_eval(&s, zz + h, &p).value - el_eval(&s, zz - h, &p).value)
                    / (2.0 * h);
                let rel = (d.value - fd).norm() / d.value.norm().max(1e-9);
                assert!(rel < 1e-6, "el_{{{s}}} at {x}: rule {} fd {fd}", d.value);

                let d = EL_derivative(&s, zz, &p).unwrap();
                let fd = zz
                    * (EL_eval(&s, zz + h, &p).value - EL_eval(&s, zz - h, &p).value)
                    / (2.0 * h);
                let rel = (d.value - fd).norm() / d.value.norm().max(1e-9);
                assert!(rel < 1e-6, "EL_{{{s}}} at {x}: rule {} fd {fd}", d.value);
            }
        }
    }

    #[test]
    fn derivative_rejects_zero() {
        assert!(el_derivative(&c(&[1, 1]), z(0.0, 0.0), &SeriesParams::default()).is_err());
        assert!(EL_derivative(&c(&[2]), z(0.0, 0.0), &SeriesParams::default()).is_err());
    }

    #[test]
    fn partition_sum_derivative_identity() {
        // z·d/dz Σ_{op(n)} el_{1,op(n)} = −Σ_{op(n)} el_{op(n)}(z) − e^z el_n(−z).
        let p = SeriesParams::default();
        for n in 1..=4u32 {
            for &x in &[0.9, -1.1] {
                let zz = z(x, 0.0);
                let mut lhs = Complex64::new(0.0, 0.0);
                let mut rhs = -zz.exp() * el_eval(&c(&[n]), -zz, &p).value;
                for q in ordered_partitions(n).unwrap() {
                    let mut idx = vec![1u32];
                    idx.extend_from_slice(q.parts());
                    lhs += el_derivative(&Composition::new(idx).unwrap(), zz, &p)
                        .unwrap()
                        .value;
                    rhs -= el_eval(&q, zz, &p).value;
                }
                assert!((lhs - rhs).norm() < 1e-12, "n={n} z={x}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn alpha_tables() {
        let to_u64 = |v: Vec<ExactRational>| -> Vec<u64> {
            v.iter().map(|a| a.to_f64().unwrap() as u64).collect()
        };
        assert_eq!(to_u64(alpha_coefficients(2, 2).unwrap()), vec![6, 4, 2]);
        assert_eq!(to_u64(alpha_coefficients(4, 4).unwrap()), vec![70, 40, 20, 8, 2]);
        for n in 1..=6 {
            let mut expect = vec![n as u64 + 1, 2];
            expect.resize(n as usize + 1, 1);
            assert_eq!(to_u64(alpha_coefficients(1, n).unwrap()), expect);
        }
        assert!(matches!(alpha_coefficients(3, 2), Err(Error::Domain(_))));
        // The closed-form cross-checks run inside alpha_inner for every pair.
        for n in 1..=12u32 {
            for m in 1..=n {
                let v = alpha_coefficients(m, n).unwrap();
                assert_eq!(v.len(), n as usize + 1);
            }
        }
    }

    #[test]
    fn undressed_quadratic_identities() {
        // el_{1,1}(z) + el_{1,1}(−z) + 2el₂(z) + 2el₂(−z) + el₁(z)el₁(−z) = 0
        // and the weight-3 analogue, on a 9-point grid with |z| ≤ 5.
        let p = SeriesParams::default();
        let grid = [
            z(0.0, 0.0),
            z(1.0, 0.0),
            z(-1.0, 0.0),
            z(2.5, 0.0),
            z(-2.5, 0.0),
            z(5.0, 0.0),
            z(-5.0, 0.0),
            z(2.0, 2.0),
            z(-2.0, -2.0),
        ];
        for &zz in &grid {
            let e = |s: &[u32], w: Complex64| el_eval(&c(s), w, &p).value;
            let r2 = e(&[1, 1], zz) + e(&[1, 1], -zz)
                + 2.0 * (e(&[2], zz) + e(&[2], -zz))
                + e(&[1], zz) * e(&[1], -zz);
            assert!(r2.norm() <= 1e-11, "weight 2 at {zz}: {r2}");
            let r3 = e(&[1, 1, 1], zz) + e(&[1, 1, 1], -zz)
                + e(&[1, 2], zz) + e(&[1, 2], -zz)
                + 3.0 * (e(&[2, 1], zz) + e(&[2, 1], -zz))
                + 6.0 * (e(&[3], zz) + e(&[3], -zz))
                + e(&[1], zz) * e(&[2], -zz)
                + e(&[1], -zz) * e(&[2], zz);
            assert!(r3.norm() <= 1e-11, "weight 3 at {zz}: {r3}");
        }
    }

    #[test]
    fn dressed_quadratic_residuals() {
        let p = SeriesParams::default();
        let r = quadratic_identity_residual(1, 1, z(1.0, 0.0), &p);
        assert!(r.value.norm() <= 1e-12, "residual {}", r.value);
        let r = quadratic_identity_residual(1, 2, z(-2.0, 0.0), &p);
        assert!(r.value.norm() <= 1e-12, "residual {}", r.value);
        assert!(r.value.norm() <= r.abs_error.max(1e-13));
        let r = quadratic_identity_residual(3, 3, z(0.0, 0.0), &p);
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn truncation_is_flagged() {
        let p = SeriesParams { max_terms: 10, tail_tol: 1e-16 };
        let r = el_eval(&c(&[1]), z(30.0, 0.0), &p);
        assert_eq!(r.terms_used, 10);
        assert!(r.abs_error > 1e6, "unconverged sum must carry a large bound");
        let ok = el_eval(&c(&[1]), z(30.0, 0.0), &SeriesParams::default());
        assert!(ok.terms_used < 200);
        assert!(ok.abs_error < 1e-3 * ok.value.norm());
    }
}
