//! Closed-form counts and bounds, evaluated with arbitrary-precision integers.
//!
//! Every count here has a brute-force counterpart in [`crate::census`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::attenuated::SpaceParams;
use crate::error::{Error, Result};

/// A named count together with the parameters it was evaluated at.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub value: BigInt,
    pub formula_id: &'static str,
    pub params: Vec<(&'static str, i64)>,
}

impl CountResult {
    fn new(formula_id: &'static str, params: Vec<(&'static str, i64)>, value: BigInt) -> Result<Self> {
        if value.is_negative() {
            return Err(Error::BadParams(format!("{formula_id} evaluated to a negative value {value}")));
        }
        Ok(Self { value, formula_id, params })
    }
}

pub(crate) fn qpow(q: u32, e: i64) -> BigInt {
    assert!(e >= 0, "negative exponent {e}");
    BigInt::from(q).pow(e as u32)
}

fn choose2(k: i64) -> i64 {
    if k < 2 {
        0
    } else {
        k * (k - 1) / 2
    }
}

fn sp_params(sp: &SpaceParams) -> Vec<(&'static str, i64)> {
    vec![("q", sp.q() as i64), ("n", sp.n() as i64), ("l", sp.l() as i64)]
}

/// `∏_{s=lo}^{hi} (q^{base+s} - 1)`; empty product is 1.
fn prod_minus_one(q: u32, base: i64, lo: i64, hi: i64) -> BigInt {
    let mut acc = BigInt::one();
    for s in lo..=hi {
        let e = base + s;
        if e == 0 {
            return BigInt::zero();
        }
        acc *= qpow(q, e) - 1;
    }
    acc
}

/// Gaussian binomial `[n choose k]_q` as a plain integer.
pub fn gbinom(n: i64, k: i64, q: u32) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= qpow(q, n - i) - 1;
        den *= qpow(q, i + 1) - 1;
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

pub fn gaussian_binomial(n: u32, k: u32, q: u32) -> CountResult {
    let params = vec![("n", n as i64), ("k", k as i64), ("q", q as i64)];
    CountResult { value: gbinom(n as i64, k as i64, q), formula_id: "gaussian_binomial", params }
}

/// Number of `n x l` matrices of rank `m`.
pub fn rank_count(n: u32, l: u32, m: u32, q: u32) -> Result<CountResult> {
    if m > n.min(l) {
        return Err(Error::BadRank { n, l, m });
    }
    let (n, l, m) = (n as i64, l as i64, m as i64);
    let v = qpow(q, choose2(m)) * gbinom(n, m, q) * prod_minus_one(q, l - m, 1, m);
    CountResult::new("rank_count", vec![("n", n), ("l", l), ("m", m), ("q", q as i64)], v)
}

/// `|M'_j(τ)|` for `τ ∈ M_i`: `q^{l(j-i)} [n-i choose j-i]_q`.
pub fn count_through(i: usize, j: usize, sp: &SpaceParams) -> Result<CountResult> {
    if i < 1 || i > j || j > sp.n() {
        return Err(Error::BadIndices(format!("need 1 <= i <= j <= n, got i={i}, j={j}, n={}", sp.n())));
    }
    let (i, j, n, l) = (i as i64, j as i64, sp.n() as i64, sp.l() as i64);
    let v = qpow(sp.q(), l * (j - i)) * gbinom(n - i, j - i, sp.q());
    let mut params = sp_params(sp);
    params.extend([("i", i), ("j", j)]);
    CountResult::new("count_through", params, v)
}

fn nl(sp: &SpaceParams) -> (u32, i64, i64) {
    (sp.q(), sp.n() as i64, sp.l() as i64)
}

/// `|M̄_n(π)|`: vertices disjoint from a fixed vertex.
pub fn count_disjoint_pair(sp: &SpaceParams) -> CountResult {
    let (q, n, l) = nl(sp);
    let v = qpow(q, choose2(n)) * prod_minus_one(q, l - n, 1, n);
    CountResult { value: v, formula_id: "disjoint_pair", params: sp_params(sp) }
}

pub(crate) fn delta_value(q: u32, n: i64, l: i64) -> BigInt {
    qpow(q, choose2(n)) * prod_minus_one(q, l - n, 1, n - 1)
}

/// `Δ(q,n,l)`: vertices through a point that are disjoint from a vertex missing it.
pub fn delta(sp: &SpaceParams) -> CountResult {
    let (q, n, l) = nl(sp);
    CountResult { value: delta_value(q, n, l), formula_id: "delta", params: sp_params(sp) }
}

/// `C(q,n,l) = q^{(n-1)l} - Δ`.
pub fn c_count(sp: &SpaceParams) -> CountResult {
    let (q, n, l) = nl(sp);
    let v = qpow(q, (n - 1) * l) - delta_value(q, n, l);
    CountResult { value: v, formula_id: "c", params: sp_params(sp) }
}

/// `|M_n(V) ∩ M̄_n(π)|` for a typed hyperplane `V`.
pub fn count_hyperplane_disjoint(sp: &SpaceParams, pi_in_v: bool) -> CountResult {
    let (q, n, l) = nl(sp);
    let v = if pi_in_v {
        qpow(q, choose2(n)) * prod_minus_one(q, l - n, 0, n - 1)
    } else {
        qpow(q, l - 1 + choose2(n - 1)) * prod_minus_one(q, l - n, 1, n - 1)
    };
    let mut params = sp_params(sp);
    params.push(("pi_in_v", pi_in_v as i64));
    CountResult { value: v, formula_id: "hyperplane_disjoint", params }
}

fn check_kmn(k: u32, m: u32, n: u32, k_min: u32) -> Result<()> {
    if k < k_min || k > m || m > n {
        return Err(Error::BadIndices(format!("need {k_min} <= k <= m <= n, got k={k}, m={m}, n={n}")));
    }
    Ok(())
}

fn d_km_value(q: u32, n: i64, k: i64, m: i64) -> BigInt {
    let e = (m - k) * (m + k - 1) / 2;
    let mut v = qpow(q, e) * gbinom(n - k, m - k, q);
    for i in 1..=m - k {
        v *= qpow(q, n - k - i + 1) - 1;
    }
    v
}

/// `m`-spaces of `F_q^{2n}` through a fixed `k`-space, disjoint from two
/// disjoint `n`-spaces that the `k`-space also misses.
pub fn d_km(q: u32, n: u32, k: u32, m: u32) -> Result<CountResult> {
    check_kmn(k, m, n, 1)?;
    let v = d_km_value(q, n as i64, k as i64, m as i64);
    CountResult::new("d_km", kmn_params(q, n, k, m), v)
}

fn kmn_params(q: u32, n: u32, k: u32, m: u32) -> Vec<(&'static str, i64)> {
    vec![("q", q as i64), ("n", n as i64), ("k", k as i64), ("m", m as i64)]
}

fn x_km_value(q: u32, n: i64, k: i64, m: i64) -> BigInt {
    gbinom(n, k, q) * d_km_value(q, n, k, m)
}

/// Pairs `(τ, σ)` with `τ` a `k`-space of `π_3` and `σ ⊇ τ` an `m`-space missing `π_1, π_2`.
pub fn x_km(q: u32, n: u32, k: u32, m: u32) -> Result<CountResult> {
    check_kmn(k, m, n, 1)?;
    CountResult::new("x_km", kmn_params(q, n, k, m), x_km_value(q, n as i64, k as i64, m as i64))
}

fn z_km_value(q: u32, n: i64, k: i64, m: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for i in k..=m {
        let term = gbinom(i, k, q) * qpow(q, choose2(i - k)) * x_km_value(q, n, i, m);
        if (i - k) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `m`-spaces of `F_q^{2n}` missing `π_1, π_2` and meeting `π_3` in dimension `k`,
/// by inclusion-exclusion over the `x_im`.
pub fn z_km(q: u32, n: u32, k: u32, m: u32) -> Result<CountResult> {
    check_kmn(k, m, n, 1)?;
    CountResult::new("z_km", kmn_params(q, n, k, m), z_km_value(q, n as i64, k as i64, m as i64))
}

pub(crate) fn z_0m_value(q: u32, n: i64, m: i64) -> BigInt {
    let mut sum = BigInt::zero();
    for i in 0..=m {
        let mut term = gbinom(m, i, q);
        for j in 1..=m - i {
            term *= qpow(q, n - i - j + 1) - 1;
        }
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    qpow(q, choose2(m)) * gbinom(n, m, q) * sum
}

/// `m`-spaces of `F_q^{2n}` missing three pairwise disjoint `n`-spaces.
pub fn z_0m(q: u32, n: u32, m: u32) -> Result<CountResult> {
    if m > n {
        return Err(Error::BadIndices(format!("need m <= n, got m={m}, n={n}")));
    }
    let params = vec![("q", q as i64), ("n", n as i64), ("m", m as i64)];
    CountResult::new("z_0m", params, z_0m_value(q, n as i64, m as i64))
}

/// Recovers `x_km = Σ_{i=k}^{m} z_im [i choose k]_q` from the `z` values.
pub fn x_km_from_z(q: u32, n: u32, k: u32, m: u32) -> Result<BigInt> {
    check_kmn(k, m, n, 1)?;
    let mut acc = BigInt::zero();
    for i in k..=m {
        acc += z_km_value(q, n as i64, i as i64, m as i64) * gbinom(i as i64, k as i64, q);
    }
    Ok(acc)
}

/// The `W` family of counts for two disjoint vertices `π, π'` spanning `Σ`.
///
/// `W_Σ` and `W_Σ̄` come out of a double count, so they are averages over the
/// points `τ` (resp. `τ'`) and are kept as exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WCounts {
    #[serde(serialize_with = "crate::serde_util::bigint_vec_str")]
    pub w_i: Vec<BigInt>,
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub w: BigInt,
    /// `W_Σ` with the denominator `(q^n - 1)(q^n - 2)`; `None` when that vanishes.
    #[serde(serialize_with = "crate::serde_util::opt_rational_str")]
    pub w_sigma: Option<BigRational>,
    /// `W_Σ` from `([2n choose 1] - 3[n choose 1]) W_Σ = Σ W_i [i choose 1]`.
    #[serde(serialize_with = "crate::serde_util::opt_rational_str")]
    pub w_sigma_double_count: Option<BigRational>,
    /// `W_Σ̄`; `None` when `l = n` (no points outside `Σ`).
    #[serde(serialize_with = "crate::serde_util::opt_rational_str")]
    pub w_sigma_bar: Option<BigRational>,
}

impl WCounts {
    pub fn w_sigma_is_integer(&self) -> bool {
        self.w_sigma.as_ref().is_some_and(|v| v.is_integer())
    }
}

pub(crate) fn w_i_value(q: u32, n: i64, l: i64, i: i64) -> BigInt {
    let mut prod = BigInt::one();
    for s in 1..=n - i {
        let e = l - 2 * n + i + s;
        if e <= 0 {
            // the factor with exponent 0 vanishes and all earlier ones are below it
            return BigInt::zero();
        }
        prod *= qpow(q, e) - 1;
    }
    z_0m_value(q, n, i) * qpow(q, n * (n - i) + choose2(n - i)) * prod
}

fn ratio(num: BigInt, den: BigInt) -> Option<BigRational> {
    (!den.is_zero()).then(|| BigRational::new(num, den))
}

pub fn w_counts(sp: &SpaceParams) -> WCounts {
    let (q, n, l) = nl(sp);
    let w_i: Vec<BigInt> = (0..=n).map(|i| w_i_value(q, n, l, i)).collect();
    let w = w_i.iter().sum();

    let qn = qpow(q, n);
    let num: BigInt = (1..=n).map(|i| &w_i[i as usize] * (qpow(q, i) - 1)).sum();
    let w_sigma = ratio(num, (&qn - 1) * (&qn - 2));

    let num: BigInt = (1..=n).map(|i| &w_i[i as usize] * gbinom(i, 1, q)).sum();
    let w_sigma_double_count = ratio(num, gbinom(2 * n, 1, q) - 3 * gbinom(n, 1, q));

    let num: BigInt = (0..n).map(|i| &w_i[i as usize] * (&qn - qpow(q, i))).sum();
    let w_sigma_bar = ratio(num, &qn * (qpow(q, l - n) - 1) * (&qn - 1));

    WCounts { w_i, w, w_sigma, w_sigma_double_count, w_sigma_bar }
}

/// `s_1`, `d_2'` and `s_2'` for a Cameron-Liebler set with parameter `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SBounds {
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub s1: BigInt,
    #[serde(serialize_with = "crate::serde_util::opt_rational_str")]
    pub d2_prime: Option<BigRational>,
    #[serde(serialize_with = "crate::serde_util::opt_rational_str")]
    pub s2_prime: Option<BigRational>,
}

pub(crate) fn s1_value(q: u32, n: i64, l: i64, x: &BigInt) -> BigInt {
    x * qpow(q, (n - 1) * l) - (x - 1) * delta_value(q, n, l)
}

/// `d_2'` and `s_2'` are only produced when `l >= 2n` and `W_Σ` is defined.
pub fn s_bounds(sp: &SpaceParams, x: &BigInt) -> SBounds {
    s_bounds_with(sp, x, w_counts(sp).w_sigma)
}

/// As [`s_bounds`], with a caller-chosen `W_Σ` (for instance a census maximum).
pub fn s_bounds_with(sp: &SpaceParams, x: &BigInt, w_sigma: Option<BigRational>) -> SBounds {
    let (q, n, l) = nl(sp);
    let s1 = s1_value(q, n, l, x);
    let (d2_prime, s2_prime) = match w_sigma {
        Some(ws) if l >= 2 * n => {
            let d2 = BigRational::from_integer(x - 2) * ws;
            let base = x * qpow(q, (n - 1) * l) - 2 * (x - 1) * delta_value(q, n, l);
            let s2 = BigRational::from_integer(base) + &d2;
            (Some(d2), Some(s2))
        }
        _ => (None, None),
    };
    SBounds { s1, d2_prime, s2_prime }
}

/// `d_2 = (W_Σ - W_Σ̄)|S_0 ∩ L| - 2 W_Σ + x W_Σ̄` for a given `|S_0 ∩ L|`.
pub fn d2_value(sp: &SpaceParams, x: &BigInt, s0_meet: u64) -> Option<BigRational> {
    let w = w_counts(sp);
    let (ws, wb) = (w.w_sigma?, w.w_sigma_bar?);
    let meet = BigRational::from_integer(BigInt::from(s0_meet));
    let x = BigRational::from_integer(x.clone());
    Some((&ws - &wb) * meet - BigRational::from_integer(2.into()) * &ws + x * wb)
}

/// Eigenvalue / multiplicity pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenPair {
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub value: BigInt,
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub multiplicity: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectra {
    /// Point graph `G`.
    pub g: Vec<EigenPair>,
    /// Gram matrix `N = M M^t`.
    pub gram: Vec<EigenPair>,
    /// Attenuated q-Kneser graph, `λ_0..λ_n` with `dim V_j`.
    pub kneser: Vec<EigenPair>,
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub rank_m: BigInt,
}

fn pair(value: BigInt, multiplicity: BigInt) -> EigenPair {
    EigenPair { value, multiplicity }
}

pub fn kneser_eigenvalue(q: u32, n: i64, l: i64, j: i64) -> BigInt {
    let v = qpow(q, choose2(n)) * prod_minus_one(q, l - n, 1, n - j);
    if j % 2 == 0 {
        v
    } else {
        -v
    }
}

pub fn spectra(sp: &SpaceParams) -> Spectra {
    let (q, n, l) = nl(sp);
    let ql = qpow(q, l);
    let n1 = gbinom(n, 1, q);
    let nm1 = gbinom(n - 1, 1, q);
    let g = vec![
        pair(qpow(q, l + 1) * &nm1, BigInt::one()),
        pair(BigInt::zero(), (&ql - 1) * &n1),
        pair(-&ql, BigInt::from(q) * &nm1),
    ];
    let top = qpow(q, (n - 1) * l);
    let gram = vec![
        pair(&top * &n1, BigInt::one()),
        pair(top.clone(), (&ql - 1) * &n1),
        pair(BigInt::zero(), BigInt::from(q) * &nm1),
    ];
    let kneser = (0..=n)
        .map(|j| {
            let mut dim = gbinom(n, j, q);
            for s in 0..j {
                dim *= &ql - qpow(q, s);
            }
            pair(kneser_eigenvalue(q, n, l, j), dim)
        })
        .collect();
    let rank_m = (&ql - 1) * &n1 + 1;
    Spectra { g, gram, kneser, rank_m }
}

/// `q^{C(n-1,2)+1} [n-1 choose 1]_q ∏_{s=2}^{n-1} (q^{l-n+s} - 1)`.
pub fn lemma46_count(sp: &SpaceParams) -> CountResult {
    let (q, n, l) = nl(sp);
    let v = qpow(q, choose2(n - 1) + 1) * gbinom(n - 1, 1, q) * prod_minus_one(q, l - n, 2, n - 1);
    CountResult { value: v, formula_id: "lemma46", params: sp_params(sp) }
}

/// `x^2 <= (q-1)^n q^{l-2n+1}`, the squared form of the parameter bound.
pub fn in_classification_range(q: u32, n: i64, l: i64, x: &BigInt) -> bool {
    if l - 2 * n + 1 < 0 {
        return false;
    }
    x * x <= BigInt::from(q - 1).pow(n as u32) * qpow(q, l - 2 * n + 1)
}

/// Largest `x` with `x^2 <= (q-1)^n q^{l-2n+1}`.
pub fn classification_x_max(q: u32, n: i64, l: i64) -> BigInt {
    if l - 2 * n + 1 < 0 {
        return BigInt::zero();
    }
    (BigInt::from(q - 1).pow(n as u32) * qpow(q, l - 2 * n + 1)).sqrt()
}

/// Hilton-Milner style bound for intersecting families with trivial common
/// intersection, when its hypotheses `l >= n + 1 >= 3`, `(q, l) != (2, n + 1)` hold.
pub fn hm_bound(sp: &SpaceParams) -> Option<BigInt> {
    let (q, n, l) = nl(sp);
    if !(l > n && n >= 2) || (q == 2 && l == n + 1) {
        return None;
    }
    Some(if n == 3 {
        qpow(q, l) * (q * q + q + 1) - q * (q + 1)
    } else {
        qpow(q, (n - 1) * l) - delta_value(q, n, l) + qpow(q, n - 1) * (q - 1)
    })
}

/// Truth values of the classification inequalities at `(q, n, l, x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationBounds {
    pub in_range: bool,
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub ekr_bound: BigInt,
    #[serde(serialize_with = "crate::serde_util::opt_bigint_str")]
    pub hm_bound: Option<BigInt>,
    /// `q^{(n-1)l} > Δ > W_Σ`.
    pub lemma44_ok: bool,
    /// `Δ > x^2 C`.
    pub lemma441_ok: bool,
    /// `W_Σ <= Δ - C`.
    pub lemma442_ok: bool,
    /// `f s_1 - C(f,2) s_2' > x q^{(n-1)l}` with `f = floor(3x/2)`.
    pub lemma45_ok: bool,
    #[serde(serialize_with = "crate::serde_util::bigint_str")]
    pub lemma46_count: BigInt,
    /// `(x-1)Δ/(f-2) - (f-3) s_2'` exceeds `C + q^{n-1}(q-1)`, or
    /// `q^l(q^2+q+1) - q(q+1)` when `n = 3`.
    pub lemma47_ok: bool,
    /// `C <= [n choose 1] q^{l(n-2)} < q^{n+l(n-2)}/(q-1)`.
    pub inequality5_ok: bool,
    #[serde(serialize_with = "crate::serde_util::rational_str")]
    pub w_sigma: BigRational,
}

/// Requires `l >= 2n >= 4` and `x >= 2`. Uses the closed-form `W_Σ`.
pub fn classification_bounds(sp: &SpaceParams, x: &BigInt) -> Result<ClassificationBounds> {
    let w_sigma = w_counts(sp).w_sigma;
    classification_bounds_with(sp, x, w_sigma)
}

/// As [`classification_bounds`] with a caller-supplied `W_Σ`.
pub fn classification_bounds_with(
    sp: &SpaceParams,
    x: &BigInt,
    w_sigma: Option<BigRational>,
) -> Result<ClassificationBounds> {
    let (q, n, l) = nl(sp);
    if !(l >= 2 * n && n >= 2) {
        return Err(Error::OutOfScopeParams(format!("need l >= 2n >= 4, got n={n}, l={l}")));
    }
    if x < &BigInt::from(2) {
        return Err(Error::OutOfScopeParams(format!("need x >= 2, got x={x}")));
    }
    let w_sigma = w_sigma.ok_or_else(|| Error::OutOfScopeParams("W_Sigma undefined".into()))?;
    let int = |v: &BigInt| BigRational::from_integer(v.clone());
    let top = qpow(q, (n - 1) * l);
    let delta = delta_value(q, n, l);
    let c = &top - &delta;
    let sb = s_bounds_with(sp, x, Some(w_sigma.clone()));
    let s1 = int(&sb.s1);
    let s2p = sb.s2_prime.expect("l >= 2n");

    let f: BigInt = (x * 3) / 2;
    let f_choose_2 = &f * (&f - 1) / 2;
    let lemma45_ok = int(&f) * &s1 - int(&f_choose_2) * &s2p > int(&(x * &top));

    let rhs = if n == 3 { qpow(q, l) * (q * q + q + 1) - q * (q + 1) } else { &c + qpow(q, n - 1) * (q - 1) };
    let lhs47 = BigRational::new((x - 1) * &delta, &f - 2) - int(&(&f - 3)) * &s2p;
    let lemma47_ok = lhs47 > int(&rhs);

    let n1 = gbinom(n, 1, q);
    let mid = &n1 * qpow(q, l * (n - 2));
    let inequality5_ok = c <= mid && (BigInt::from(q) - 1) * &mid < qpow(q, n + l * (n - 2));

    Ok(ClassificationBounds {
        in_range: in_classification_range(q, n, l, x),
        ekr_bound: top.clone(),
        hm_bound: hm_bound(sp),
        lemma44_ok: top > delta && int(&delta) > w_sigma,
        lemma441_ok: delta > x * x * &c,
        lemma442_ok: w_sigma <= int(&(&delta - &c)),
        lemma45_ok,
        lemma46_count: lemma46_count(sp).value,
        lemma47_ok,
        inequality5_ok,
        w_sigma,
    })
}

/// `(c+1) s_1 - C(c+1, 2) s_2' >= x q^{(n-1)l}`: when true, no CL set with
/// parameter `x` holds `c + 1` pairwise disjoint members.
pub fn lemma36_holds(sp: &SpaceParams, x: &BigInt, c: u64) -> Result<bool> {
    let (q, n, l) = nl(sp);
    let sb = s_bounds(sp, x);
    let s2p = sb.s2_prime.ok_or_else(|| Error::OutOfScopeParams("s_2' needs l >= 2n".into()))?;
    let c1 = BigInt::from(c + 1);
    let pairs = &c1 * (&c1 - 1) / 2;
    let lhs = BigRational::from_integer(&c1 * sb.s1) - BigRational::from_integer(pairs) * s2p;
    Ok(lhs >= BigRational::from_integer(x * qpow(q, (n - 1) * l)))
}
