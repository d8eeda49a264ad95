//! Multiple polyexponential integrals ELi: exact asymptotic coefficient
//! tables, large-|z| asymptotic evaluation with optimal truncation (plus a
//! Levin-u fallback), finite-z evaluation through the ELi↔EL relations, and
//! the Euler-operator derivative rules.
//!
//! Asymptotics at z → −∞: odd level behaves like e^z Σ_j c_j/z^j, even level
//! like Σ_j c_j/z^j (no exponential prefactor), with exact rational c_j given
//! both by recurrences over sub-indices and by closed forms built from strict
//! multiple harmonic numbers; the two derivations must agree exactly.
//!
//! Finite z: ELi equals EL plus a polynomial in log(±z) with Γ-derivative and
//! cLi-constant coefficients and lower-level ELi factors. All logarithms are
//! principal-branch; the upper edge of the negative real axis is selected by
//! z = x + 0.0i and the reflections −z flip the sign of zero, so lower-edge
//! continuations (needed by the s₁ = 1 reflection rules) are reached with
//! z = x − 0.0i.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::combinatorics::{binomial, factorial, Composition, ExactRational};
use crate::constants::{cLi_constant, gamma_deriv_at_one};
use crate::dd::{ln_dd, Cdd, Dd};
use crate::harmonic::{multi_harmonic, HarmonicIndex};
use crate::series::{EvalResult, Method, SeriesParams, EL_eval};
use crate::{Error, Result};

/// Tolerance at which connection constants are evaluated inside relations.
const CONST_TOL: f64 = 1e-12;

/// Whether an asymptotic expansion carries the e^z prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Odd level: ELi ~ e^z Σ c_j/z^j.
    OddLevel,
    /// Even level: ELi ~ Σ c_j/z^j.
    EvenLevel,
}

/// Exact asymptotic coefficients c_j, j = 1..=N, for one index.
#[derive(Debug, Clone)]
pub struct AsymptoticTable {
    pub index: Composition,
    pub coefficients: Vec<ExactRational>,
    pub parity: Parity,
}

impl AsymptoticTable {
    /// c_j (1-based); zero beyond the stored range is not implied.
    pub fn coeff(&self, j: usize) -> &ExactRational {
        &self.coefficients[j - 1]
    }

    /// CSV rows `j,numerator,denominator` with a header line.
    pub fn csv(&self) -> String {
        let mut out = String::from("j,numerator,denominator\n");
        for (i, c) in self.coefficients.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, c.numer(), c.denom()));
        }
        out
    }

    /// JSON row objects with bit-exact decimal strings.
    pub fn json_rows(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| {
                serde_json::json!({
                    "j": i + 1,
                    "numerator": c.numer().to_string(),
                    "denominator": c.denom().to_string(),
                })
            })
            .collect();
        serde_json::json!({
            "index": self.index.to_string(),
            "parity": match self.parity {
                Parity::OddLevel => "OddLevel",
                Parity::EvenLevel => "EvenLevel",
            },
            "rows": rows,
        })
    }
}

fn parity_of(s: &Composition) -> Parity {
    if s.level() % 2 == 1 {
        Parity::OddLevel
    } else {
        Parity::EvenLevel
    }
}

fn rat_int(x: u64) -> ExactRational {
    ExactRational::from_integer(x.into())
}

/// c_1..c_N by the recursive relations over sub-indices (c_0 ≡ 0):
/// level 1: c_j^{(1)} = Γ(j); c_j^{(s)} = 0, 1, c_{j−1}^{(s−1)} + (j−1)c_{j−1}^{(s)}
/// for j <, =, > s. Even level: c_j = (−1)^j c_j^{(s₂,…)}/j (s₁ = 1) or
/// −c_j^{(s₁−1,…)}/j. Odd level ≥ 3: c_j = (−1)^j c_{j−1}^{(s₂,…)} +
/// (j−1)c_{j−1}^{(s⃗)} (s₁ = 1) or c_{j−1}^{(s₁−1,…)} + (j−1)c_{j−1}^{(s⃗)}.
fn recurrence_vec(parts: &[u32], n: usize) -> Vec<ExactRational> {
    let mut v = vec![ExactRational::zero(); n];
    let level = parts.len();
    let s1 = parts[0];
    if level == 1 && s1 == 1 {
        for j in 1..=n {
            v[j - 1] = ExactRational::from_integer(factorial(j as u64 - 1));
        }
        return v;
    }
    let sign = |j: usize| if j.is_multiple_of(2) { rat_int(1) } else { -rat_int(1) };
    if level == 1 {
        let prev = recurrence_vec(&[s1 - 1], n);
        for j in 1..=n {
            v[j - 1] = if (j as u32) < s1 {
                ExactRational::zero()
            } else if j as u32 == s1 {
                rat_int(1)
            } else {
                &prev[j - 2] + rat_int(j as u64 - 1) * &v[j - 2]
            };
        }
    } else if level.is_multiple_of(2) {
        let sub = if s1 == 1 {
            recurrence_vec(&parts[1..], n)
        } else {
            let mut lowered = parts.to_vec();
            lowered[0] -= 1;
            recurrence_vec(&lowered, n)
        };
        for j in 1..=n {
            let num = if s1 == 1 { sign(j) * &sub[j - 1] } else { -&sub[j - 1] };
            v[j - 1] = num / rat_int(j as u64);
        }
    } else {
        let sub = if s1 == 1 {
            recurrence_vec(&parts[1..], n)
        } else {
            let mut lowered = parts.to_vec();
            lowered[0] -= 1;
            recurrence_vec(&lowered, n)
        };
        for j in 2..=n {
            let lead = if s1 == 1 { sign(j) * &sub[j - 2] } else { sub[j - 2].clone() };
            v[j - 1] = lead + rat_int(j as u64 - 1) * &v[j - 2];
        }
    }
    v
}

/// Asymptotic coefficients from the recursive relations.
pub fn asymptotic_coeffs_recurrence(s: &Composition, n: usize) -> AsymptoticTable {
    assert!(n >= 1, "need at least one coefficient");
    AsymptoticTable {
        index: s.clone(),
        coefficients: recurrence_vec(s.parts(), n),
        parity: parity_of(s),
    }
}

/// Asymptotic coefficients from the closed forms. Odd level 2n+1:
/// c_j = (−1)^{Σ s₂ₘ} Γ(j) H_{j−1}^{(1^{s₁−1}, s₂+1, 1^{s₃−1}, s₄+1, …, 1^{s₂ₙ₊₁−1})},
/// vanishing for j ≤ Σ s₂ₘ₊₁ − 1. Even level 2n:
/// c_j = (−1)^{j−1+Σ s₂ₘ₋₁} Γ(j)/j^{s₁} · H_{j−1}^{(1^{s₂−1}, s₃+1, …, 1^{s₂ₙ−1})},
/// vanishing for j ≤ Σ s₂ₘ − 1 (strict multiple harmonic numbers; 1⁰ = ∅).
pub fn asymptotic_coeffs_closed(s: &Composition, n: usize) -> AsymptoticTable {
    assert!(n >= 1, "need at least one coefficient");
    let parts = s.parts();
    let level = parts.len();
    let odd: Vec<u32> = parts.iter().step_by(2).copied().collect();
    let even: Vec<u32> = parts.iter().skip(1).step_by(2).copied().collect();
    // Harmonic index pattern and the static sign exponent.
    let (pattern, sign_flip, s1_power) = if level % 2 == 1 {
        let mut pat: Vec<u32> = Vec::new();
        for i in 0..even.len() {
            pat.extend(std::iter::repeat_n(1, odd[i] as usize - 1));
            pat.push(even[i] + 1);
        }
        pat.extend(std::iter::repeat_n(1, *odd.last().unwrap() as usize - 1));
        let flip = even.iter().sum::<u32>() % 2 == 1;
        (pat, flip, 0u32)
    } else {
        let mut pat: Vec<u32> = Vec::new();
        for i in 0..even.len() - 1 {
            pat.extend(std::iter::repeat_n(1, even[i] as usize - 1));
            pat.push(odd[i + 1] + 1);
        }
        pat.extend(std::iter::repeat_n(1, *even.last().unwrap() as usize - 1));
        let flip = odd.iter().sum::<u32>() % 2 == 1;
        (pat, flip, parts[0])
    };
    let mut v = vec![ExactRational::zero(); n];
    for j in 1..=n {
        let h = if pattern.is_empty() {
            rat_int(1)
        } else {
            multi_harmonic(&HarmonicIndex::new(
                j as u32 - 1,
                Composition::new(pattern.clone()).unwrap(),
                false,
            ))
        };
        if h.is_zero() {
            continue;
        }
        // Even level carries a j-dependent sign (−1)^{j−1}.
        let mut negative = sign_flip;
        if level.is_multiple_of(2) && j.is_multiple_of(2) {
            negative = !negative;
        }
        let mut c = ExactRational::from_integer(factorial(j as u64 - 1)) * h;
        if s1_power > 0 {
            c /= ExactRational::from_integer(num_bigint::BigInt::from(j).pow(s1_power));
        }
        v[j - 1] = if negative { -c } else { c };
    }
    AsymptoticTable { index: s.clone(), coefficients: v, parity: parity_of(s) }
}

/// Levin u-transform (β = 1, ω_j = (β+j)a_j) of the sequence of terms;
/// returns the accelerated sum estimate and a successive-difference error
/// heuristic. Designed for the divergent alternating tails of asymptotic
/// series past optimal truncation.
fn levin_u(terms: &[Complex64]) -> (Complex64, f64) {
    let beta = 1.0;
    let n = terms.len();
    let mut num: Vec<Complex64> = Vec::with_capacity(n);
    let mut den: Vec<Complex64> = Vec::with_capacity(n);
    let mut s = Complex64::new(0.0, 0.0);
    for (j, &a) in terms.iter().enumerate() {
        s += a;
        let w = (beta + j as f64) * a;
        num.push(s / w);
        den.push(Complex64::new(1.0, 0.0) / w);
    }
    let mut best = s;
    let mut best_err = f64::INFINITY;
    let mut prev_est: Option<Complex64> = None;
    for k in 1..n {
        for j in 0..(n - k) {
            let bjk = beta + (j + k) as f64;
            // (β+j)(β+j+k−1)^{k−2}/(β+j+k)^{k−1}
            let c = (beta + j as f64) * (beta + (j + k - 1) as f64).powi(k as i32 - 2)
                / bjk.powi(k as i32 - 1);
            num[j] = num[j + 1] - c * num[j];
            den[j] = den[j + 1] - c * den[j];
        }
        if den[0].norm() < 1e-280 {
            break;
        }
        let est = num[0] / den[0];
        if let Some(prev) = prev_est {
            let diff = (est - prev).norm();
            if diff < best_err {
                best_err = diff;
                best = est;
            }
        }
        prev_est = Some(est);
    }
    (best, best_err.max(f64::EPSILON * best.norm()))
}

/// Large-|z| evaluation: sums the asymptotic series truncated at
/// j* = min(N_opt, argmin_j |c_j z^{−j}|) with abs_error = the first omitted
/// term (times |e^z| for odd level). If that misses `tol`, a Levin-u resummed
/// estimate is tried; failing that, a regime error asks for relation-based
/// evaluation.
#[allow(non_snake_case)]
pub fn ELi_asymptotic(
    s: &Composition,
    z: Complex64,
    n_opt: Option<usize>,
    tol: f64,
) -> Result<EvalResult> {
    assert!(tol > 0.0, "tolerance must be positive");
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("asymptotic evaluation needs z ≠ 0".into()));
    }
    let z_abs = z.norm();
    let n_table = (z_abs.ceil() as usize + 15).clamp(20, 150);
    let table = asymptotic_coeffs_recurrence(s, n_table);
    let zinv = Complex64::new(1.0, 0.0) / z;
    let mut terms: Vec<Complex64> = Vec::with_capacity(n_table);
    let mut powz = Complex64::new(1.0, 0.0);
    for c in &table.coefficients {
        powz *= zinv;
        terms.push(c.to_f64().unwrap_or(f64::INFINITY) * powz);
    }
    let prefactor = match table.parity {
        Parity::OddLevel => z.exp(),
        Parity::EvenLevel => Complex64::new(1.0, 0.0),
    };
    let scale = prefactor.norm();
    // Optimal truncation: smallest nonzero term magnitude.
    let mut j_best = 0usize;
    let mut t_best = f64::INFINITY;
    for (i, t) in terms.iter().enumerate() {
        let m = t.norm();
        if m > 0.0 && m < t_best {
            t_best = m;
            j_best = i + 1;
        }
    }
    let j_star = n_opt.map_or(j_best, |cap| cap.min(j_best)).max(1);
    let partial: Complex64 = terms[..j_star].iter().sum();
    let omitted = if j_star < terms.len() { terms[j_star].norm() } else { t_best };
    let trunc = EvalResult {
        value: prefactor * partial,
        abs_error: scale * omitted + f64::EPSILON * scale * partial.norm(),
        method: Method::Asymptotic,
        terms_used: j_star,
    };
    if trunc.abs_error <= tol {
        return Ok(trunc);
    }
    // Past-optimal terms still carry information; resum them (skipping the
    // zero prefix, whose ω weights would vanish).
    let start = terms.iter().position(|t| t.norm() > 0.0).unwrap_or(0);
    let usable = terms[start..].iter().take_while(|t| t.norm().is_finite()).count() + start;
    let (lv, lerr) = levin_u(&terms[start..usable]);
    if scale * lerr <= tol {
        return Ok(EvalResult {
            value: prefactor * lv,
            abs_error: scale * lerr,
            method: Method::Asymptotic,
            terms_used: usable,
        });
    }
    Err(Error::Regime(format!(
        "asymptotic series for ({s}) at |z| = {z_abs:.3} reaches {:.3e} (optimal truncation) / {:.3e} (resummed), above tol {tol:.3e}; use relation evaluation",
        trunc.abs_error,
        scale * lerr,
    )))
}

/// All weakly decreasing chains top ≥ k₁ ≥ k₂ ≥ … ≥ k_len ≥ floor.
fn chains(top: u32, len: usize, floor: u32) -> Vec<Vec<u32>> {
    fn rec(hi: u32, left: usize, floor: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in floor..=hi {
            cur.push(v);
            rec(v, left - 1, floor, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(top, len, floor, &mut Vec::new(), &mut out);
    out
}

fn fact_f64(n: u32) -> f64 {
    factorial(n as u64).to_f64().unwrap()
}

fn binom_f64(n: u64, k: u64) -> f64 {
    binomial(n, k).to_f64().unwrap()
}

type Memo<T> = HashMap<Vec<u32>, (T, f64, usize)>;

/// Scalar abstraction for the relation evaluator: plain complex f64 off the
/// real axis; complex double-double on it, where finite differencing of the
/// result demands smoothness in z below the f64 ulp (the relation's terms
/// are O(1) while the value can be exponentially small, so per-term f64
/// rounding would dominate a difference quotient).
trait RelScalar: Copy {
    fn eval_dressed(s: &Composition, z: Complex64, p: &SeriesParams) -> (Self, f64, usize);
    fn ln_neg(z: Complex64) -> Self;
    fn ln_pos(z: Complex64) -> Self;
    fn add(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn mulf(self, k: f64) -> Self;
    fn powu(self, k: u32) -> Self;
    fn norm(self) -> f64;
    fn to_c64(self) -> Complex64;
}

impl RelScalar for Complex64 {
    fn eval_dressed(s: &Composition, z: Complex64, p: &SeriesParams) -> (Self, f64, usize) {
        let r = EL_eval(s, z, p);
        (r.value, r.abs_error, r.terms_used)
    }
    fn ln_neg(z: Complex64) -> Self {
        (-z).ln()
    }
    fn ln_pos(z: Complex64) -> Self {
        z.ln()
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn mulf(self, k: f64) -> Self {
        self * k
    }
    fn powu(self, k: u32) -> Self {
        Complex64::powu(&self, k)
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn to_c64(self) -> Complex64 {
        self
    }
}

/// log of a point on the real axis (x ± 0.0i) with the imaginary part ±0 or
/// ±π chosen exactly as num_complex's principal branch would.
fn ln_axis(x: f64, im_zero: f64) -> Cdd {
    if x > 0.0 {
        Cdd { re: ln_dd(x), im: Dd::from_f64(im_zero) }
    } else {
        Cdd { re: ln_dd(-x), im: Dd::from_f64(std::f64::consts::PI.copysign(im_zero)) }
    }
}

impl RelScalar for Cdd {
    fn eval_dressed(s: &Composition, z: Complex64, p: &SeriesParams) -> (Self, f64, usize) {
        crate::series::EL_eval_dd(s, z, p)
    }
    fn ln_neg(z: Complex64) -> Self {
        ln_axis(-z.re, -z.im)
    }
    fn ln_pos(z: Complex64) -> Self {
        ln_axis(z.re, z.im)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn mulf(self, k: f64) -> Self {
        self.scale(Dd::from_f64(k))
    }
    fn powu(self, k: u32) -> Self {
        Cdd::powu(self, k)
    }
    fn norm(self) -> f64 {
        Cdd::norm(self)
    }
    fn to_c64(self) -> Complex64 {
        self.to_complex()
    }
}

/// ELi via the finite-z relations: level 1 uses
/// ELi_m(z) = EL_m(z) + Σ_{k=0}^m (−1)^{m−k}/(k!(m−k)!) Γ^{(m−k)}(1) log(−z)^k;
/// level n ≥ 2 uses the general expansion into EL, cLi·log powers, and
/// lower-level ELi values (memoized per top-level call).
#[allow(non_snake_case)]
pub fn ELi_relation_eval(s: &Composition, z: Complex64, p: &SeriesParams) -> Result<EvalResult> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("ELi has a logarithmic singularity at z = 0".into()));
    }
    if z.re > 0.0 && z.im == 0.0 && z.im.is_sign_positive() {
        return Err(Error::Domain(
            "the positive real axis lies on the branch cut; pass z with a signed −0.0 \
             imaginary part for the lower-edge continuation"
                .into(),
        ));
    }
    let (value, abs_error, terms_used) = if z.im == 0.0 {
        let mut memo: Memo<Cdd> = HashMap::new();
        let (v, e, t) = relation_inner::<Cdd>(s.parts(), z, p, &mut memo);
        (v.to_c64(), e, t)
    } else {
        let mut memo: Memo<Complex64> = HashMap::new();
        relation_inner::<Complex64>(s.parts(), z, p, &mut memo)
    };
    Ok(EvalResult { value, abs_error, method: Method::Relation, terms_used })
}

fn relation_inner<T: RelScalar>(
    parts: &[u32],
    z: Complex64,
    p: &SeriesParams,
    memo: &mut Memo<T>,
) -> (T, f64, usize) {
    if let Some(&hit) = memo.get(parts) {
        return hit;
    }
    let n = parts.len();
    let comp = |v: &[u32]| Composition::new(v.to_vec()).unwrap();
    let log_neg = T::ln_neg(z);
    let log_pos = T::ln_pos(z);
    let result = if n == 1 {
        let m = parts[0];
        let (el_v, el_e, el_t) = T::eval_dressed(&comp(parts), z, p);
        let mut v = el_v;
        let mut e = el_e;
        for k in 0..=m {
            let g = gamma_deriv_at_one(m - k);
            let sgn = if (m - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            let coef = sgn / (fact_f64(k) * fact_f64(m - k));
            let lp = log_neg.powu(k);
            let term = lp.mulf(coef * g.value);
            v = v.add(term);
            e += coef.abs() * (g.abs_error * lp.norm()) + f64::EPSILON * term.norm();
        }
        (v, e, el_t)
    } else {
        let (el_v, el_e, el_t) = T::eval_dressed(&comp(parts), z, p);
        let mut v = el_v;
        let mut e = el_e;
        let mut t = el_t;
        let s1 = parts[0];
        // Pure cLi·log(−z) polynomial.
        for k1 in 1..=s1 {
            let mut idx = vec![k1];
            idx.extend_from_slice(&parts[1..]);
            let c = cLi_constant(&comp(&idx), CONST_TOL);
            let sgn = if (k1 - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let coef = sgn / (fact_f64(k1 - 1) * fact_f64(s1 - k1));
            let lp = log_neg.powu(s1 - k1);
            v = v.add(lp.mulf(coef * c.value));
            e += coef.abs() * c.abs_error * lp.norm();
        }
        // Middle blocks i = 2..n−1: cLi of the right tail times a lower-level
        // ELi of the ⊕-shifted left indices.
        for i in 2..n {
            let si = parts[i - 1];
            let lg = if i % 2 == 0 { log_pos } else { log_neg };
            for ch in chains(si, i, 1) {
                let k1 = ch[0];
                let ki = ch[i - 1];
                let mut bin = 1.0;
                for j in 1..i {
                    bin *= binom_f64(
                        (parts[j - 1] - 1 + ch[j - 1] - ch[j]) as u64,
                        (parts[j - 1] - 1) as u64,
                    );
                }
                let mut cidx = vec![ki];
                cidx.extend_from_slice(&parts[i..]);
                let c = cLi_constant(&comp(&cidx), CONST_TOL);
                let inner_idx: Vec<u32> =
                    (1..i).map(|j| parts[j - 1] + ch[j - 1] - ch[j]).collect();
                let (iv, ie, it) = relation_inner(&inner_idx, z, p, memo);
                t = t.max(it);
                let sgn = if k1 % 2 == 0 { 1.0 } else { -1.0 };
                let coef = sgn * bin / (fact_f64(ki - 1) * fact_f64(si - k1));
                let lp = lg.powu(si - k1);
                let term = lp.mul(iv).mulf(coef * c.value);
                v = v.add(term);
                e += coef.abs() * lp.norm() * (c.abs_error * iv.norm() + c.value.abs() * ie)
                    + f64::EPSILON * term.norm();
            }
        }
        // Final block i = n: Γ-derivative coefficients, chain floor 0.
        let sn = parts[n - 1];
        let lg = if n.is_multiple_of(2) { log_pos } else { log_neg };
        for ch in chains(sn, n, 0) {
            let k1 = ch[0];
            let kn = ch[n - 1];
            let mut bin = 1.0;
            for j in 1..n {
                bin *= binom_f64(
                    (parts[j - 1] - 1 + ch[j - 1] - ch[j]) as u64,
                    (parts[j - 1] - 1) as u64,
                );
            }
            let g = gamma_deriv_at_one(kn);
            let inner_idx: Vec<u32> = (1..n).map(|j| parts[j - 1] + ch[j - 1] - ch[j]).collect();
            let (iv, ie, it) = relation_inner(&inner_idx, z, p, memo);
            t = t.max(it);
            let sgn = if k1 % 2 == 0 { -1.0 } else { 1.0 };
            let coef = sgn * bin / (fact_f64(kn) * fact_f64(sn - k1));
            let lp = lg.powu(sn - k1);
            let term = lp.mul(iv).mulf(coef * g.value);
            v = v.add(term);
            e += coef.abs() * lp.norm() * (g.abs_error * iv.norm() + g.value.abs() * ie)
                + f64::EPSILON * term.norm();
        }
        (v, e, t)
    };
    memo.insert(parts.to_vec(), result);
    result
}

/// Regime dispatcher: asymptotics for |z| ≥ weight + 15 (falling back on the
/// relations if the series cannot reach `tol`), relations otherwise.
#[allow(non_snake_case)]
pub fn ELi_eval(s: &Composition, z: Complex64, tol: f64) -> Result<EvalResult> {
    assert!(tol > 0.0, "tolerance must be positive");
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("ELi has a logarithmic singularity at z = 0".into()));
    }
    if z.re > 0.0 && z.im == 0.0 && z.im.is_sign_positive() {
        return Err(Error::Domain(
            "the positive real axis lies on the branch cut; pass z with a signed −0.0 \
             imaginary part for the lower-edge continuation"
                .into(),
        ));
    }
    let switch = (s.weight() + 15) as f64;
    if z.norm() >= switch {
        match ELi_asymptotic(s, z, None, tol) {
            Ok(r) => return Ok(r),
            Err(Error::Regime(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let r = ELi_relation_eval(s, z, &SeriesParams::default())?;
    if r.abs_error > tol {
        return Err(Error::Regime(format!(
            "neither regime reaches tol {tol:.3e} for ({s}) at z = {z} (relation error {:.3e})",
            r.abs_error
        )));
    }
    Ok(r)
}

/// z·d/dz ELi_{s₁,…,sₙ}(z): ELi_{s₁−1,…}(z) for s₁ > 1, −e^z ELi_{s₂,…}(−z)
/// for s₁ = 1 at level ≥ 2, and e^z for ELi₁.
#[allow(non_snake_case)]
pub fn ELi_derivative(s: &Composition, z: Complex64, p: &SeriesParams) -> Result<EvalResult> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("ELi derivative rule needs z ≠ 0".into()));
    }
    let parts = s.parts();
    if parts[0] > 1 {
        let mut lowered = parts.to_vec();
        lowered[0] -= 1;
        return ELi_relation_eval(&Composition::new(lowered).unwrap(), z, p);
    }
    if s.level() == 1 {
        let value = z.exp();
        return Ok(EvalResult {
            value,
            abs_error: f64::EPSILON * value.norm(),
            method: Method::Relation,
            terms_used: 0,
        });
    }
    let tail = Composition::new(parts[1..].to_vec()).unwrap();
    let inner = ELi_relation_eval(&tail, -z, p)?;
    let ez = z.exp();
    let value = -ez * inner.value;
    Ok(EvalResult {
        value,
        abs_error: ez.norm() * inner.abs_error + f64::EPSILON * value.norm(),
        method: Method::Relation,
        terms_used: inner.terms_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::ordered_partitions;
    use crate::constants::EULER_GAMMA;
    use crate::series::el_eval;
    use num_traits::Signed;

    fn c(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn zc(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn comps_up_to(w: u32) -> Vec<Composition> {
        (1..=w).flat_map(|k| ordered_partitions(k).unwrap()).collect()
    }

    #[test]
    fn recurrence_examples() {
        let t = asymptotic_coeffs_recurrence(&c(&[1]), 6);
        assert_eq!(*t.coeff(5), rat_int(24));
        assert_eq!(t.parity, Parity::OddLevel);
        let t = asymptotic_coeffs_recurrence(&c(&[2]), 6);
        assert_eq!(*t.coeff(1), rat_int(0));
        assert_eq!(*t.coeff(2), rat_int(1));
        assert_eq!(*t.coeff(4), rat_int(11));
    }

    #[test]
    fn closed_form_examples() {
        // ((2), j=3) → Γ(3)·H₂ = 2·3/2 = 3.
        let t = asymptotic_coeffs_closed(&c(&[2]), 6);
        assert_eq!(*t.coeff(3), rat_int(3));
        // ((1,1), j=1) → −1; even level, no e^z prefactor.
        let t = asymptotic_coeffs_closed(&c(&[1, 1]), 6);
        assert_eq!(*t.coeff(1), -rat_int(1));
        assert_eq!(t.parity, Parity::EvenLevel);
        // ((1,1,1)): zero below j = 2.
        let t = asymptotic_coeffs_closed(&c(&[1, 1, 1]), 6);
        assert!(t.coeff(1).is_zero());
        assert!(!t.coeff(2).is_zero());
    }

    #[test]
    fn recurrence_equals_closed_form() {
        for s in comps_up_to(6) {
            let a = asymptotic_coeffs_recurrence(&s, 12);
            let b = asymptotic_coeffs_closed(&s, 12);
            assert_eq!(a.parity, b.parity);
            for j in 1..=12 {
                assert_eq!(a.coeff(j), b.coeff(j), "({s}) at j = {j}");
            }
        }
    }

    #[test]
    fn zero_prefix_pattern() {
        for s in comps_up_to(6) {
            let parts = s.parts();
            let bound: u32 = if parts.len() % 2 == 1 {
                parts.iter().step_by(2).sum::<u32>() - 1
            } else {
                parts.iter().skip(1).step_by(2).sum::<u32>() - 1
            };
            let t = asymptotic_coeffs_recurrence(&s, 12);
            for j in 1..=12u32.min(bound) {
                assert!(t.coeff(j as usize).is_zero(), "({s}) c_{j} should vanish");
            }
            if bound < 12 {
                assert!(!t.coeff(bound as usize + 1).is_zero(), "({s}) starts at {}", bound + 1);
            }
        }
    }

    #[test]
    fn even_level_signs_alternate() {
        for s in comps_up_to(6) {
            if s.level() % 2 == 1 {
                continue;
            }
            let odd_sum: u32 = s.parts().iter().step_by(2).sum();
            let t = asymptotic_coeffs_recurrence(&s, 12);
            for j in 1..=12usize {
                let cj = t.coeff(j);
                if cj.is_zero() {
                    continue;
                }
                let expect_neg = (j as u32 - 1 + odd_sum) % 2 == 1;
                assert_eq!(cj.is_negative(), expect_neg, "({s}) c_{j} = {cj}");
            }
        }
    }

    #[test]
    fn tail_integral_identity() {
        // ∫_T^∞ ln(t)^b t^{−j−1} dt = b!/j^{b+1} · T^{−j} Σ_{i≤b} (j lnT)^i/i!
        // — cross-checked on [T, U] by numeric integration (oracle tails).
        let closed = |t: f64, b: u32, j: u32| {
            fact_f64(b) / (j as f64).powi(b as i32 + 1)
                * (-(j as f64) * t.ln()).exp()
                * (0..=b)
                    .map(|i| (j as f64 * t.ln()).powi(i as i32) / fact_f64(i))
                    .sum::<f64>()
        };
        let (t0, upper) = (7.0_f64, 90.0_f64);
        for b in 0..4u32 {
            for j in 1..4u32 {
                let exact = closed(t0, b, j) - closed(upper, b, j);
                let mut num = 0.0;
                let n_steps = 200_000;
                let h = (upper - t0) / n_steps as f64;
                for k in 0..n_steps {
                    let t = t0 + (k as f64 + 0.5) * h;
                    num += t.ln().powi(b as i32) * t.powi(-(j as i32) - 1) * h;
                }
                assert!(
                    (exact - num).abs() < 1e-6 * exact.abs() + 1e-12,
                    "b={b} j={j}: {exact} vs {num}"
                );
            }
        }
    }

    #[test]
    fn level1_relation_reproduces_exponential_integral() {
        // ELi₁(−1) = Ei(−1) = −0.21938393439552027.
        let r = ELi_relation_eval(&c(&[1]), zc(-1.0), &SeriesParams::default()).unwrap();
        assert!((r.value.re - (-0.21938393439552027)).abs() < 1e-15);
        assert_eq!(r.value.im, 0.0);
    }

    #[test]
    fn level2_relation_matches_textbook_expansion() {
        // ELi_{1,1}(z) = EL_{1,1}(z) + ELi₂(z) − (γ+log z)ELi₁(z) + π²/6.
        let p = SeriesParams::default();
        let z = Complex64::new(-3.0, 0.0);
        let lhs = ELi_relation_eval(&c(&[1, 1]), z, &p).unwrap().value;
        let el11 = EL_eval(&c(&[1, 1]), z, &p).value;
        let eli2 = ELi_relation_eval(&c(&[2]), z, &p).unwrap().value;
        let eli1 = ELi_relation_eval(&c(&[1]), z, &p).unwrap().value;
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        let rhs = el11 + eli2 - (EULER_GAMMA + z.ln()) * eli1 + pi2_6;
        assert!((lhs - rhs).norm() < 1e-13, "{lhs} vs {rhs}");

        // ELi_{2,1}(z) = EL_{2,1} + 2ELi₃ − (γ+log z)ELi₂ + π²/6(γ+log(−z)) − ζ(3).
        let lhs = ELi_relation_eval(&c(&[2, 1]), z, &p).unwrap().value;
        let el21 = EL_eval(&c(&[2, 1]), z, &p).value;
        let eli3 = ELi_relation_eval(&c(&[3]), z, &p).unwrap().value;
        let zeta3 = 1.2020569031595943;
        let rhs = el21 + 2.0 * eli3 - (EULER_GAMMA + z.ln()) * eli2
            + pi2_6 * (EULER_GAMMA + (-z).ln())
            - zeta3;
        assert!((lhs - rhs).norm() < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn relation_rejects_cut_and_origin() {
        let p = SeriesParams::default();
        assert!(ELi_relation_eval(&c(&[1]), Complex64::new(0.0, 0.0), &p).is_err());
        assert!(ELi_relation_eval(&c(&[1]), Complex64::new(2.0, 0.0), &p).is_err());
        // Lower-edge continuation is explicit and accepted.
        let r = ELi_relation_eval(&c(&[1]), Complex64::new(2.0, -0.0), &p).unwrap();
        assert!((r.value.im - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn asymptotic_level1_against_relation() {
        // ((1), −30): e^z-prefactored series against γ + log(30) + EL₁(−30).
        let asym = ELi_asymptotic(&c(&[1]), zc(-30.0), None, 1e-12).unwrap();
        let p = SeriesParams::default();
        let rel = EULER_GAMMA + 30.0_f64.ln() + el_eval(&c(&[1]), zc(-30.0), &p).value.re;
        assert!(
            (asym.value.re - rel).abs() < 5e-15,
            "asym {} vs relation {rel}",
            asym.value.re
        );
        assert!(asym.value.im == 0.0);
        assert_eq!(asym.method, Method::Asymptotic);
    }

    #[test]
    fn asymptotic_leading_order() {
        // ELi_n(z) → e^z/z^n for z → −∞.
        for n in 1..=3u32 {
            let z = zc(-60.0);
            let r = ELi_asymptotic(&c(&[n]), z, None, 1e-10).unwrap();
            let lead = z.exp() / z.powu(n);
            let ratio = (r.value / lead).re;
            assert!((ratio - 1.0).abs() < 0.1, "n={n}: ratio {ratio}");
        }
    }

    #[test]
    fn asymptotic_dual_path_overlap() {
        // ((2), −25): asymptotics vs relation, diff ≤ 1e−9.
        let asym = ELi_asymptotic(&c(&[2]), zc(-25.0), None, 1e-10).unwrap();
        let rel = ELi_relation_eval(&c(&[2]), zc(-25.0), &SeriesParams::default()).unwrap();
        assert!((asym.value - rel.value).norm() <= 1e-9);
    }

    #[test]
    fn regime_consistency_with_documented_floor() {
        // Even-level relations on the upper edge carry an exponentially small
        // imaginary part (the reflected lower-edge iπ terms), so agreement is
        // checked against max(1e−8, |Im relation| + combined errors).
        let p = SeriesParams::default();
        for s in comps_up_to(4) {
            for &x in &[-12.0, -20.0, -30.0] {
                let z = zc(x);
                let asym = ELi_asymptotic(&s, z, None, 1e-3)
                    .unwrap_or_else(|e| panic!("asym ({s}) at {x}: {e}"));
                let rel = ELi_relation_eval(&s, z, &p).unwrap();
                let floor = (rel.value.im.abs() + rel.abs_error + asym.abs_error).max(1e-8);
                let diff = (asym.value - rel.value).norm();
                assert!(
                    diff <= floor,
                    "({s}) at {x}: asym {} rel {} diff {diff:.3e} floor {floor:.3e}",
                    asym.value,
                    rel.value
                );
            }
        }
    }

    #[test]
    fn level1_truncation_remainder_bound() {
        // |Ei-series truncation at order n| ≤ 2·n!/|z|^n for z ≤ −2n.
        let p = SeriesParams::default();
        for n in 2..=6usize {
            for &x in &[-2.0 * n as f64, -2.0 * n as f64 - 7.0] {
                let z = zc(x);
                let exact = ELi_relation_eval(&c(&[1]), z, &p).unwrap().value.re;
                let mut trunc = 0.0;
                for j in 1..=n {
                    trunc += fact_f64(j as u32 - 1) / x.powi(j as i32);
                }
                trunc *= x.exp();
                let bound = 2.0 * fact_f64(n as u32) / x.abs().powi(n as i32);
                assert!(
                    (exact - trunc).abs() <= bound,
                    "n={n} z={x}: err {} bound {bound}",
                    (exact - trunc).abs()
                );
            }
        }
    }

    #[test]
    fn dispatcher_selects_regimes() {
        let r = ELi_eval(&c(&[1]), zc(-40.0), 1e-9).unwrap();
        assert_eq!(r.method, Method::Asymptotic);
        let r = ELi_eval(&c(&[1]), zc(-1.0), 1e-9).unwrap();
        assert_eq!(r.method, Method::Relation);
        assert!((r.value.re - (-0.21938393439552027)).abs() < 1e-13);
        assert!(ELi_eval(&c(&[1]), Complex64::new(3.0, 0.0), 1e-9).is_err());
    }

    #[test]
    fn derivative_rules() {
        let p = SeriesParams::default();
        let z = zc(-6.0);
        // ((2,1)) → ELi_{1,1}(z).
        let d = ELi_derivative(&c(&[2, 1]), z, &p).unwrap();
        let direct = ELi_relation_eval(&c(&[1, 1]), z, &p).unwrap();
        assert!((d.value - direct.value).norm() < 1e-13);
        // ((1,1)) → −e^z ELi₁(−z) (lower-edge inner value).
        let d = ELi_derivative(&c(&[1, 1]), z, &p).unwrap();
        let inner = ELi_relation_eval(&c(&[1]), Complex64::new(6.0, -0.0), &p).unwrap();
        assert!((d.value - (-z.exp() * inner.value)).norm() < 1e-13);
        // ELi₁: z·d/dz = e^z.
        let d = ELi_derivative(&c(&[1]), z, &p).unwrap();
        assert!((d.value - z.exp()).norm() < 1e-18);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        // Five-point stencil: the function values are O(1) while z·f′ can be
        // ~1e−4, so a plain central difference sits at its noise floor.
        let p = SeriesParams::default();
        let h = 1e-3;
        for s in comps_up_to(3) {
            let z = zc(-6.0);
            let d = ELi_derivative(&s, z, &p).unwrap();
            let f = |x: f64| ELi_relation_eval(&s, zc(x), &p).unwrap().value;
            let fd = z * (-f(-6.0 + 2.0 * h) + 8.0 * f(-6.0 + h) - 8.0 * f(-6.0 - h)
                + f(-6.0 - 2.0 * h))
                / (12.0 * h);
            let rel = (d.value - fd).norm() / d.value.norm().max(1e-9);
            assert!(rel < 1e-6, "({s}): rule {} fd {fd}", d.value);
        }
    }

    #[test]
    fn export_formats() {
        let t = asymptotic_coeffs_recurrence(&c(&[1, 1]), 3);
        let csv = t.csv();
        assert!(csv.starts_with("j,numerator,denominator\n"));
        assert!(csv.contains("1,-1,1\n"));
        let json = t.json_rows();
        assert_eq!(json["index"], "1,1");
        assert_eq!(json["parity"], "EvenLevel");
        assert_eq!(json["rows"][0]["numerator"], "-1");
    }
}
