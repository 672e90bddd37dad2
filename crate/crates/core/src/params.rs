//! Parameter derivation: paper-exact constants and practical presets.
//!
//! Paper mode derives every quantity exactly from `δ`: `L_max = ⌊log₂(2/δ)⌋`,
//! `i_max = ⌊10/δ⌋`, `ε = 1/200^{L_max+i_max+1}`, `τ_max = 1000/ε³`,
//! `α_L = 2^{(20000/ε²)^L}`, `c_L = 100·α_{L−1}`, `β_L = c_L^{τ_max+2}`, and
//! symbolic `t_min`/`n_min`. Several of these overflow any machine word (and
//! some cannot be materialized at all), so scalars are kept in the exact
//! form `mant · 100^h · 2^p` with big-integer exponents, and runtime
//! comparisons against machine-sized quantities go through [`Threshold`].
//!
//! Practical mode replaces the tower constants with small configurable
//! values (validated: `c ≥ 2`, `τ_max ≥ 3`, `ρ > 1`) and holds them fixed
//! across recursion levels. The `desk` preset is tuned for inputs in the
//! thousands.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Paper,
    Practical,
}

/// How a discovered edge is priced in the estimate matrix.
///
/// `BetaTimesRung` is the literal aggregation rule (`β_L · Δ_query` for
/// every edge of the rung); with any β beyond `d/γ` it clamps to `d` and
/// carries no information. `Certificate` prices each edge with the sound
/// per-pair bound that the query already holds: the memoized estimate
/// itself for a leaf edge, and the sum of the two center estimates for a
/// big-clique edge. Both rules never undershoot the true distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateRule {
    BetaTimesRung,
    Certificate,
}

/// Top-level additive target when none is given explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaPolicy {
    /// `Δ = ⌊n^{1−ε′}⌋`, the smallest admissible paper target.
    PaperPow,
    /// `Δ = ⌊n·num/den⌋`.
    Fraction(u64, u64),
    Fixed(u64),
}

/// An exactly represented positive scalar `mant · 100^hundreds · 2^pow2`.
///
/// Covers every Table-1 constant: `α_L` has `mant = 1, hundreds = 0`;
/// `c_L = 100·α_{L−1}` has `hundreds = 1`; `β_L = c_L^{τ_max+2}` scales both
/// exponents by `τ_max + 2`. Practical constants live in `mant` alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgScalar {
    #[serde(with = "biguint_str")]
    pub mant: BigUint,
    #[serde(with = "biguint_str")]
    pub hundreds: BigUint,
    #[serde(with = "biguint_str")]
    pub pow2: BigUint,
}

impl AlgScalar {
    pub fn from_u64(x: u64) -> Self {
        AlgScalar { mant: BigUint::from(x), hundreds: BigUint::zero(), pow2: BigUint::zero() }
    }

    pub fn log2(&self) -> f64 {
        big_log2(&self.mant)
            + big_to_f64_saturating(&self.hundreds) * 100f64.log2()
            + big_to_f64_saturating(&self.pow2)
    }

    /// Exact value when it fits in a u128.
    pub fn to_u128(&self) -> Option<u128> {
        if self.log2() > 126.0 {
            return None;
        }
        let mut v = self.mant.to_u128()?;
        for _ in 0..self.hundreds.to_u64()? {
            v = v.checked_mul(100)?;
        }
        v.checked_shl(self.pow2.to_u32()?)
    }

    /// `self^e` for a big-integer exponent.
    pub fn pow_big(&self, e: &BigUint) -> AlgScalar {
        if self.mant.is_one() || e.to_u32().is_some() {
            let mant = match e.to_u32() {
                Some(e32) => self.mant.pow(e32),
                None => BigUint::one(), // mant is 1
            };
            AlgScalar { mant, hundreds: &self.hundreds * e, pow2: &self.pow2 * e }
        } else {
            // A non-trivial mantissa under an astronomical exponent cannot
            // be materialized; fold it into the power-of-two exponent
            // conservatively via its floor log2 (only reached by synthetic
            // configurations, never by Table-1 constants).
            let bits = self.mant.bits().saturating_sub(1);
            AlgScalar {
                mant: BigUint::one(),
                hundreds: &self.hundreds * e,
                pow2: (&self.pow2 + BigUint::from(bits)) * e,
            }
        }
    }

    /// `self · x` as a machine-comparable threshold.
    pub fn times_u64(&self, x: u64) -> Threshold {
        if x == 0 {
            return Threshold::Exact(0);
        }
        match self.to_u128() {
            Some(v) => v
                .checked_mul(u128::from(x))
                .map(Threshold::Exact)
                .unwrap_or(Threshold::Huge),
            None => Threshold::Huge,
        }
    }
}

/// A scalar compared against machine-sized quantities: either its exact
/// value or "beyond any feasible distance".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    Exact(u128),
    Huge,
}

impl Threshold {
    /// Does `x ≤ self` hold?
    pub fn admits(&self, x: u64) -> bool {
        match self {
            Threshold::Exact(v) => u128::from(x) <= *v,
            Threshold::Huge => true,
        }
    }

    /// `min(self, cap)` as a plain integer.
    pub fn clamp_to(&self, cap: u64) -> u64 {
        match self {
            Threshold::Exact(v) => (*v).min(u128::from(cap)) as u64,
            Threshold::Huge => cap,
        }
    }
}

/// A value of the form `base^exp`, too large to materialize (`t_min`,
/// `n_min`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowForm {
    #[serde(with = "biguint_str")]
    pub base: BigUint,
    #[serde(with = "biguint_str")]
    pub exp: BigUint,
}

impl PowForm {
    pub fn log2(&self) -> f64 {
        big_log2(&self.base) * big_to_f64_saturating(&self.exp)
    }

    /// Is `x ≥ self`? (Practically always false at desk scale.)
    pub fn le_u64(&self, x: u64) -> bool {
        self.log2() <= (x as f64).log2()
    }
}

/// Per-level constants of the recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelConsts {
    pub alpha: AlgScalar,
    pub c: AlgScalar,
    pub beta: AlgScalar,
}

/// Everything the pipeline needs, either paper-derived or configured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub mode: Mode,
    /// δ, the target-runtime exponent knob.
    #[serde(with = "bigrational_str")]
    pub delta_frac: BigRational,
    pub l_max: u32,
    pub i_max: u32,
    #[serde(with = "bigrational_str")]
    pub eps: BigRational,
    #[serde(with = "bigrational_str")]
    pub eps_prime: BigRational,
    #[serde(with = "biguint_str")]
    pub tau_max: BigUint,
    /// ρ = t^{rho_exp}.
    pub rho_exp: Ratio<i64>,
    /// Interval multipliers participating in density decisions.
    pub lambdas: Vec<u32>,
    /// Fixed query-tree branching in practical mode; paper mode computes
    /// `⌈t^{ε_{i+1}}·ρ⌉` per level when absent.
    pub child_count_override: Option<u32>,
    /// Inputs below this length take the exact DP path at L ≥ 1.
    pub exact_fallback_n: usize,
    /// Shrinkage slack exponent: live sets must shrink by at least
    /// `t^{slack_exp}·ρ^{−1}` per small-clique step (paper form: 5ε).
    #[serde(with = "bigrational_str")]
    pub slack_exp: BigRational,
    pub estimate_rule: EstimateRule,
    /// Practical metric-ball expansion rate, constant across levels.
    pub practical_c: Option<u64>,
    pub delta_policy: DeltaPolicy,
    pub t_min: Option<PowForm>,
    pub n_min: Option<PowForm>,
    pub seed: u64,
}

/// Practical-mode knobs; unset fields take the desk defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub i_max: Option<u32>,
    pub l_max: Option<u32>,
    pub tau_max: Option<u64>,
    pub c: Option<u64>,
    pub child_count: Option<u32>,
    pub rho_exp: Option<Ratio<i64>>,
    pub eps: Option<Ratio<i64>>,
    pub exact_fallback_n: Option<usize>,
    pub delta_policy: Option<DeltaPolicy>,
    pub estimate_rule: Option<EstimateRule>,
    pub seed: Option<u64>,
}

/// Derive a full parameter set from `δ ∈ (0, 2]`.
pub fn derive_params(delta: &BigRational, mode: Mode, overrides: &Overrides) -> Result<ParamSet> {
    if !delta.is_positive() || delta > &BigRational::from_integer(BigInt::from(2)) {
        return Err(Error::InvalidParams(format!("δ = {delta} outside (0, 2]")));
    }
    match mode {
        Mode::Paper => derive_paper(delta, overrides),
        Mode::Practical => derive_practical(delta, overrides),
    }
}

fn derive_paper(delta: &BigRational, overrides: &Overrides) -> Result<ParamSet> {
    if overrides.i_max.is_some()
        || overrides.l_max.is_some()
        || overrides.tau_max.is_some()
        || overrides.c.is_some()
        || overrides.child_count.is_some()
        || overrides.rho_exp.is_some()
        || overrides.eps.is_some()
    {
        return Err(Error::InvalidParams(
            "paper mode derives its constants from δ; structural overrides are practical-only"
                .into(),
        ));
    }
    // L_max = ⌊log₂(2/δ)⌋: largest k with δ·2^k ≤ 2.
    let two = BigRational::from_integer(BigInt::from(2));
    let mut l_max = 0u32;
    while delta * BigRational::from_integer(BigInt::from(2).pow(l_max + 1)) <= two {
        l_max += 1;
    }
    // i_max = ⌊10/δ⌋.
    let i_max = (BigRational::from_integer(BigInt::from(10)) / delta)
        .floor()
        .to_integer()
        .to_u32()
        .ok_or_else(|| Error::InvalidParams("i_max overflows u32".into()))?;
    if i_max < 1 {
        return Err(Error::InvalidParams("paper mode needs i_max ≥ 1 (δ ≤ 10)".into()));
    }

    let base = BigUint::from(200u32);
    let eps_den = base.pow(l_max + i_max + 1);
    let eps = BigRational::new(BigInt::one(), BigInt::from(eps_den.clone()));
    let eps_prime = BigRational::new(BigInt::one(), BigInt::from(base.pow(l_max + i_max + 2)));

    // τ_max = 1000/ε³ = 1000·(1/ε)³.
    let inv_eps = eps_den;
    let tau_max = BigUint::from(1000u32) * inv_eps.pow(3u32);

    // t_min = (1000/ε^10)^(4^{L+1}/ε²), n_min analogous with ε′ and L+2.
    let t_min = PowForm {
        base: BigUint::from(1000u32) * inv_eps.pow(10u32),
        exp: BigUint::from(4u32).pow(l_max + 1) * inv_eps.pow(2u32),
    };
    let inv_eps_prime = base.pow(l_max + i_max + 2);
    let n_min = PowForm {
        base: BigUint::from(1000u32) * inv_eps_prime.pow(10u32),
        exp: BigUint::from(4u32).pow(l_max + 2) * inv_eps_prime.pow(2u32),
    };

    Ok(ParamSet {
        mode: Mode::Paper,
        delta_frac: delta.clone(),
        l_max,
        i_max,
        rho_exp: Ratio::new(1, i64::from(i_max.max(1))),
        slack_exp: &eps * BigRational::from_integer(BigInt::from(5)),
        eps,
        eps_prime,
        tau_max,
        lambdas: vec![1, 7],
        child_count_override: None,
        exact_fallback_n: overrides.exact_fallback_n.unwrap_or(DEFAULT_EXACT_FALLBACK),
        estimate_rule: overrides.estimate_rule.unwrap_or(EstimateRule::BetaTimesRung),
        practical_c: None,
        delta_policy: overrides.delta_policy.clone().unwrap_or(DeltaPolicy::PaperPow),
        t_min: Some(t_min),
        n_min: Some(n_min),
        seed: overrides.seed.unwrap_or(0),
    })
}

pub const DEFAULT_EXACT_FALLBACK: usize = 2048;

fn derive_practical(delta: &BigRational, overrides: &Overrides) -> Result<ParamSet> {
    let desk = ParamSet::desk();
    let c = overrides.c.unwrap_or(DESK_C);
    if c < 2 {
        return Err(Error::InvalidParams(format!("c = {c} < 2")));
    }
    let tau_max = overrides.tau_max.unwrap_or(DESK_TAU_MAX);
    if tau_max < 3 {
        return Err(Error::InvalidParams(format!("τ_max = {tau_max} < 3")));
    }
    let rho_exp = overrides.rho_exp.unwrap_or(desk.rho_exp);
    if rho_exp <= Ratio::new(0, 1) {
        return Err(Error::InvalidParams(format!("ρ exponent {rho_exp} must be positive")));
    }
    let i_max = overrides.i_max.unwrap_or(desk.i_max);
    if i_max < 1 {
        return Err(Error::InvalidParams("i_max must be ≥ 1".into()));
    }
    let eps = overrides
        .eps
        .map(|e| BigRational::new(BigInt::from(*e.numer()), BigInt::from(*e.denom())))
        .unwrap_or_else(|| desk.eps.clone());
    if !eps.is_positive() {
        return Err(Error::InvalidParams("ε must be positive".into()));
    }
    Ok(ParamSet {
        mode: Mode::Practical,
        delta_frac: delta.clone(),
        l_max: overrides.l_max.unwrap_or(desk.l_max),
        i_max,
        slack_exp: &eps * BigRational::from_integer(BigInt::from(5)),
        eps,
        eps_prime: desk.eps_prime.clone(),
        tau_max: BigUint::from(tau_max),
        rho_exp,
        lambdas: vec![1, 7],
        child_count_override: Some(overrides.child_count.unwrap_or(DESK_CHILD_COUNT)),
        exact_fallback_n: overrides.exact_fallback_n.unwrap_or(DEFAULT_EXACT_FALLBACK),
        estimate_rule: overrides.estimate_rule.unwrap_or(EstimateRule::Certificate),
        practical_c: Some(c),
        delta_policy: overrides.delta_policy.clone().unwrap_or(DeltaPolicy::Fraction(1, 16)),
        t_min: None,
        n_min: None,
        seed: overrides.seed.unwrap_or(0),
    })
}

const DESK_C: u64 = 2;
const DESK_TAU_MAX: u64 = 6;
const DESK_CHILD_COUNT: u32 = 4;

impl ParamSet {
    /// The desk preset: practical parameters tuned for inputs in the
    /// thousands. ε = 1/4, τ_max = 6, child count 4, one query level,
    /// ρ = t^{1/4}, and c = 2 so the clique radii `Δ_q·c^τ` sweep every
    /// scale between `Δ_q` and `d` (β = c^{τ_max+2} = 256).
    pub fn desk() -> ParamSet {
        ParamSet {
            mode: Mode::Practical,
            delta_frac: BigRational::one(),
            l_max: 1,
            i_max: 1,
            eps: BigRational::new(BigInt::one(), BigInt::from(4)),
            eps_prime: BigRational::new(BigInt::one(), BigInt::from(8)),
            tau_max: BigUint::from(DESK_TAU_MAX),
            rho_exp: Ratio::new(1, 4),
            lambdas: vec![1, 7],
            child_count_override: Some(DESK_CHILD_COUNT),
            exact_fallback_n: DEFAULT_EXACT_FALLBACK,
            slack_exp: BigRational::new(BigInt::from(5), BigInt::from(4)),
            estimate_rule: EstimateRule::Certificate,
            practical_c: Some(DESK_C),
            delta_policy: DeltaPolicy::Fraction(1, 16),
            t_min: None,
            n_min: None,
            seed: 0,
        }
    }

    /// `ε_i = 100^{i+1}·ε`.
    pub fn eps_i(&self, i: u32) -> BigRational {
        &self.eps * BigRational::from_integer(BigInt::from(100u32).pow(i + 1))
    }

    /// Constants of recursion level `l ≥ 1`.
    pub fn level_consts(&self, l: u32) -> LevelConsts {
        match self.mode {
            Mode::Practical => {
                let c = self.practical_c.expect("practical mode has c");
                let c = AlgScalar::from_u64(c);
                let beta = c.pow_big(&(&self.tau_max + BigUint::from(2u32)));
                LevelConsts { alpha: c.clone(), c, beta }
            }
            Mode::Paper => {
                // α_L = 2^{(20000/ε²)^L}; exponent base 20000·(1/ε)².
                let inv_eps = self
                    .eps
                    .recip()
                    .to_integer()
                    .to_biguint()
                    .expect("paper ε is a unit fraction");
                let e_base = BigUint::from(20000u32) * inv_eps.pow(2u32);
                let alpha = AlgScalar {
                    mant: BigUint::one(),
                    hundreds: BigUint::zero(),
                    pow2: e_base.pow(l),
                };
                let c = AlgScalar {
                    mant: BigUint::one(),
                    hundreds: BigUint::one(),
                    pow2: e_base.pow(l.saturating_sub(1)),
                };
                let beta = c.pow_big(&(&self.tau_max + BigUint::from(2u32)));
                LevelConsts { alpha, c, beta }
            }
        }
    }

    /// Branching factor of the query tree at depth `i`:
    /// `⌈t^{ε_{i+1}}·ρ⌉` unless overridden.
    pub fn child_count(&self, i: u32, t: u64) -> u64 {
        if let Some(cc) = self.child_count_override {
            return u64::from(cc);
        }
        let exp = self.eps_i(i + 1)
            + BigRational::new(
                BigInt::from(*self.rho_exp.numer()),
                BigInt::from(*self.rho_exp.denom()),
            );
        let exp_f = exp.to_f64().unwrap_or(0.0);
        (t as f64).powf(exp_f).ceil().max(1.0) as u64
    }

    /// The default additive target for length `n`.
    pub fn default_delta(&self, n: usize) -> u64 {
        match &self.delta_policy {
            DeltaPolicy::Fixed(v) => *v,
            DeltaPolicy::Fraction(num, den) => {
                ((n as u128 * u128::from(*num)) / u128::from(*den)).max(1) as u64
            }
            DeltaPolicy::PaperPow => floor_pow(n, &(BigRational::one() - &self.eps_prime)),
        }
    }
}

/// `⌊n^e⌋` for a rational exponent `e ∈ (0, 1]`, decided by comparing
/// logarithms; the margins at feasible `n` dwarf f64 rounding. For `e < 1`
/// the result is capped at `n − 1` (the true power is strictly below `n`
/// even when `1 − e` underflows f64).
pub fn floor_pow(n: usize, e: &BigRational) -> u64 {
    let ef = e.to_f64().unwrap_or(1.0);
    let top = if e < &BigRational::one() { n as u64 - 1 } else { n as u64 };
    let guess = (n as f64).powf(ef).floor() as u64;
    let ln_n = (n as f64).ln();
    // Walk to the exact floor: largest m with ln m ≤ e·ln n.
    let fits = |m: u64| -> bool {
        if m <= 1 {
            return true;
        }
        (m as f64).ln() <= ef * ln_n + 1e-12
    };
    let mut m = guess.clamp(1, top);
    while m < top && fits(m + 1) {
        m += 1;
    }
    while m > 1 && !fits(m) {
        m -= 1;
    }
    m
}

/// Compare `x/y` against `t^e` exactly when the exponent has a small
/// denominator, in log space otherwise (paper-mode exponents have
/// astronomical denominators, and the compared quantities then differ by
/// enormous margins).
pub fn cmp_ratio_vs_tpow(x: u128, y: u128, t: u64, e: &BigRational) -> Ordering {
    assert!(y > 0, "density denominators are positive");
    if x == 0 {
        // t^e > 0 always.
        return Ordering::Less;
    }
    let (num, den) = (e.numer(), e.denom());
    if let (Some(p), Some(q)) = (num.to_i64(), den.to_u32()) {
        if q <= 64 && p.unsigned_abs() <= 64 {
            let xb = BigUint::from(x);
            let yb = BigUint::from(y);
            let tb = BigUint::from(t);
            return if p >= 0 {
                (xb.pow(q)).cmp(&(yb.pow(q) * tb.pow(p as u32)))
            } else {
                (xb.pow(q) * tb.pow(p.unsigned_abs() as u32)).cmp(&yb.pow(q))
            };
        }
    }
    let lhs = (x as f64).ln() - (y as f64).ln();
    let rhs = e.to_f64().unwrap_or(0.0) * (t as f64).ln();
    lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal)
}

fn big_to_f64_saturating(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::MAX)
}

fn big_log2(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 52 {
        (x.to_u64().unwrap() as f64).log2()
    } else {
        // log2(x) = log2(top 52 bits) + shift
        let shift = bits - 52;
        let top = (x >> shift).to_u64().unwrap();
        (top as f64).log2() + shift as f64
    }
}

mod biguint_str {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        v.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::from_str(&s).map_err(serde::de::Error::custom)
    }
}

mod bigrational_str {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        format!("{}/{}", v.numer(), v.denom()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        let (n, m) = s
            .split_once('/')
            .ok_or_else(|| serde::de::Error::custom("expected num/den"))?;
        Ok(BigRational::new(
            BigInt::from_str(n).map_err(serde::de::Error::custom)?,
            BigInt::from_str(m).map_err(serde::de::Error::custom)?,
        ))
    }
}

/// Parse a rational from "p/q" or a plain integer/decimal string.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    use std::str::FromStr;
    let bad = || Error::InvalidParams(format!("cannot parse rational {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let int = BigInt::from_str(int.trim()).map_err(|_| bad())?;
        let frac_v = BigInt::from_str(frac.trim()).map_err(|_| bad())?;
        return Ok(BigRational::new(int * &scale + frac_v, scale));
    }
    Ok(BigRational::from_integer(BigInt::from_str(s.trim()).map_err(|_| bad())?))
}
