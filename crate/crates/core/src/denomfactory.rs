//! Integer approximants `a_n`, `b_n` to `h±` from the Padé pair at `z = ∓p2^n`,
//! cleared by one of three denominator factors, with certified residuals
//! `b_n h± - a_n`.

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{int_rat, lcm_nonzero, log2_abs_int, pow_int, pow_rat, Rat};
use crate::ball::{BallReal, Dyadic};
use crate::cyclotomic::{common_factor_c, common_multiple_calm, common_multiple_m, cyclotomic_value, primes_dividing};
use crate::measures;
use crate::qjacobi::{build_q, eval_at_special_point, norm_squared, primitive_integer_poly};
use crate::qseries::{eval_h, partial_h, q_pochhammer, residual_precision, QParams, SeriesError, Sign};

/// Slack added to asymptotic exponent ceilings at finite n.
pub const EXPONENT_SLACK: f64 = 0.15;

/// Number of precision doublings after the scheduled start.
pub const MAX_DOUBLINGS: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    General,
    Special,
    Xi,
}

impl FactorKind {
    pub fn name(self) -> &'static str {
        match self {
            FactorKind::General => "general",
            FactorKind::Special => "special",
            FactorKind::Xi => "xi",
        }
    }
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FactorKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "general" => Ok(FactorKind::General),
            "special" => Ok(FactorKind::Special),
            "xi" => Ok(FactorKind::Xi),
            _ => Err(format!("unknown factor kind '{s}', expected general, special or xi")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DenomError {
    #[error("the {0} factor needs special parameters q1 = p^-r1, q2 = p^-r2")]
    MissingSpecialStructure(FactorKind),
    #[error("n = {n}, sign {sign}, {kind} factor: {which} is not an integer (denominator {denominator})")]
    IntegralityViolation {
        n: usize,
        sign: Sign,
        kind: FactorKind,
        which: String,
        denominator: String,
    },
    #[error("n = {n}: residual enclosure still contains 0 at {bits} bits")]
    PrecisionExhausted { n: usize, bits: u64 },
    #[error("index n must be at least {0}")]
    IndexTooSmall(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn special_parts(params: &QParams, kind: FactorKind) -> Result<(BigInt, u32, u32), DenomError> {
    params
        .special_case()
        .map(|s| (s.p.clone(), s.r1, s.r2))
        .ok_or(DenomError::MissingSpecialStructure(kind))
}

fn check_n(n: usize) -> Result<(), DenomError> {
    if n == 0 {
        Err(DenomError::IndexTooSmall(1))
    } else {
        Ok(())
    }
}

/// The three parts of the general factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralFactorParts {
    /// `(Π_{k<n} (t1 p2^k - s1))²`
    pub square_product: BigInt,
    /// `s1^n`
    pub s1_power: BigInt,
    /// `lcm{p2^k ± 1}`, k from 1 (sign −) or 0 (sign +) to n-1, zeros skipped.
    pub lcm: BigInt,
}

impl GeneralFactorParts {
    pub fn product(&self) -> BigInt {
        &self.square_product * &self.s1_power * &self.lcm
    }
}

pub fn general_factor_parts(params: &QParams, n: usize, sign: Sign) -> Result<GeneralFactorParts, DenomError> {
    check_n(n)?;
    let mut prod = BigInt::one();
    let mut p2k = BigInt::one();
    for _ in 0..n {
        prod *= params.t1() * &p2k - params.s1();
        p2k *= params.p2();
    }
    let start = match sign {
        Sign::Minus => 1,
        Sign::Plus => 0,
    };
    let pm = BigInt::from(sign.pm());
    let lcm = lcm_nonzero((start..n).map(|k| pow_int(params.p2(), k as u64) + &pm));
    Ok(GeneralFactorParts {
        square_product: &prod * &prod,
        s1_power: pow_int(params.s1(), n as u64),
        lcm,
    })
}

/// `(Π_{k<n}(t1 p2^k - s1))² s1^n lcm{p2^k ± 1}`.
pub fn factor_general(params: &QParams, n: usize, sign: Sign) -> Result<BigInt, DenomError> {
    Ok(general_factor_parts(params, n, sign)?.product())
}

/// lcm of the reduced denominators of `(p1 p2^n; p2)_k / (p1; p2)_k`, `0 ≤ k ≤ k_max`.
pub fn ratio_denominator_lcm(params: &QParams, n: usize, k_max: usize) -> BigInt {
    let p1 = params.p1();
    let p2 = params.p2_rat();
    let top = &p1 * pow_rat(&p2, n as i64);
    let mut num = Rat::one();
    let mut den = Rat::one();
    let mut l = BigInt::one();
    let mut top_k = top.clone();
    let mut p1_k = p1.clone();
    for _ in 0..k_max {
        num *= Rat::one() - &top_k;
        den *= Rat::one() - &p1_k;
        top_k *= &p2;
        p1_k *= &p2;
        l = l.lcm((&num / &den).denom());
    }
    l
}

/// `lcm{p2^j ± 1, p1 p2^k - 1 : 1 ≤ j ≤ n-1, 0 ≤ k ≤ n-1}` (special case, p1 integral).
pub fn difference_lcm(params: &QParams, n: usize, sign: Sign) -> BigInt {
    let pm = BigInt::from(sign.pm());
    let p1 = params.t1();
    let js = (1..n).map(|j| pow_int(params.p2(), j as u64) + &pm);
    let ks = (0..n).map(|k| p1 * pow_int(params.p2(), k as u64) - 1);
    lcm_nonzero(js.chain(ks))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialFactorParts {
    /// Denominator lcm over `0 ≤ k ≤ n`.
    pub denominators: BigInt,
    pub differences: BigInt,
}

pub fn special_factor_parts(params: &QParams, n: usize, sign: Sign) -> Result<SpecialFactorParts, DenomError> {
    check_n(n)?;
    special_parts(params, FactorKind::Special)?;
    Ok(SpecialFactorParts {
        denominators: ratio_denominator_lcm(params, n, n),
        differences: difference_lcm(params, n, sign),
    })
}

/// Special-case factor. The denominator lcm runs over the full range
/// `0 ≤ k ≤ n` of the sum for `Q_n(∓p2^n)`; stopping at `n-1` leaves
/// non-integral approximants once `r2 > 1`.
pub fn factor_special(params: &QParams, n: usize, sign: Sign) -> Result<BigInt, DenomError> {
    let p = special_factor_parts(params, n, sign)?;
    Ok(p.denominators * p.differences)
}

/// The special factor with the denominator lcm cut at `k ≤ n-1`.
/// Kept for the divisibility chain; it does not clear denominators for `r2 > 1`.
pub fn factor_special_lemma_range(params: &QParams, n: usize, sign: Sign) -> Result<BigInt, DenomError> {
    check_n(n)?;
    special_parts(params, FactorKind::Special)?;
    Ok(ratio_denominator_lcm(params, n, n - 1) * difference_lcm(params, n, sign))
}

fn largest_odd_factor(mut i: u64) -> u64 {
    while i % 2 == 0 {
        i /= 2;
    }
    i
}

/// The empirical factor `ξ_n±` as an exact positive rational.
pub fn factor_xi(params: &QParams, n: usize, sign: Sign) -> Result<Rat, DenomError> {
    check_n(n)?;
    let (p, _, r2) = special_parts(params, FactorKind::Xi)?;
    let p1 = params.p1();
    let p2 = params.p2_rat();
    let lcm = int_rat(&difference_lcm(params, n, sign));
    let v = match sign {
        Sign::Minus => q_pochhammer(&p1, &p2, n) / q_pochhammer(&p2, &p2, n - 1),
        Sign::Plus => {
            let mut v = q_pochhammer(&p1, &p2, n) / q_pochhammer(&p2, &p2, n);
            for i in 1..=n as u64 {
                let m = largest_odd_factor(i);
                let num = pow_int(&p, r2 as u64 * m) - 1;
                let den = pow_int(&p, m) - 1;
                v *= Rat::new(num, den);
            }
            for d in primes_dividing(r2 as u64).into_iter().filter(|&d| d != 2) {
                let mut dk = d;
                while dk <= n as u64 {
                    let c = cyclotomic_value(dk, &p);
                    v *= int_rat(&pow_int(&c, n as u64 / dk));
                    dk *= d;
                }
            }
            v
        }
    };
    Ok(v.abs() * lcm)
}

/// The factor magnitude for `kind` as an exact rational.
pub fn factor(params: &QParams, n: usize, sign: Sign, kind: FactorKind) -> Result<Rat, DenomError> {
    Ok(match kind {
        FactorKind::General => int_rat(&factor_general(params, n, sign)?),
        FactorKind::Special => int_rat(&factor_special(params, n, sign)?),
        FactorKind::Xi => factor_xi(params, n, sign)?,
    })
}

/// Approximants with the factor oriented so that `b > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactApprox {
    pub e: Rat,
    pub a: BigInt,
    pub b: BigInt,
}

fn integral(r: Rat, n: usize, sign: Sign, kind: FactorKind, which: &str) -> Result<BigInt, DenomError> {
    if r.denom().is_one() {
        Ok(r.to_integer())
    } else {
        Err(DenomError::IntegralityViolation {
            n,
            sign,
            kind,
            which: which.to_string(),
            denominator: r.denom().to_string(),
        })
    }
}

/// `(e, a, b)` before the integrality check: `a = e[p1^n Q_n(∓p2^n) partial_h(n) ∓ p2^n P_n(∓p2^n)]`,
/// `b = e p1^n Q_n(∓p2^n)`.
pub fn rational_approximants(
    params: &QParams,
    n: usize,
    sign: Sign,
    kind: FactorKind,
) -> Result<(Rat, Rat, Rat), DenomError> {
    check_n(n)?;
    let mag = factor(params, n, sign, kind)?;
    let (qz, pz) = eval_at_special_point(params, n, sign);
    let p1n = pow_rat(&params.p1(), n as i64);
    let p2n = int_rat(&pow_int(params.p2(), n as u64));
    let pm = Rat::from_integer(BigInt::from(sign.pm()));
    let raw_b = &p1n * &qz;
    let raw_a = &raw_b * partial_h(params, sign, n) - pm * p2n * pz;
    let e = if qz.is_negative() { -mag } else { mag };
    let a = &e * raw_a;
    let b = &e * raw_b;
    Ok((e, a, b))
}

/// Approximants required to be integers.
pub fn exact_approximants(params: &QParams, n: usize, sign: Sign, kind: FactorKind) -> Result<ExactApprox, DenomError> {
    let (e, a, b) = rational_approximants(params, n, sign, kind)?;
    let a = integral(a, n, sign, kind, "a")?;
    let b = integral(b, n, sign, kind, "b")?;
    Ok(ExactApprox { e, a, b })
}

/// Enclosure of `L (b h± - a)` with `L` the common denominator of `a` and `b`
/// (1 when they are integers), so its sign is that of the residual even when
/// the factor fails to clear denominators.
pub fn cleared_residual(
    params: &QParams,
    n: usize,
    sign: Sign,
    kind: FactorKind,
    start_bits: u64,
) -> Result<BallReal, DenomError> {
    let (_, a, b) = rational_approximants(params, n, sign, kind)?;
    let l = int_rat(&a.denom().lcm(b.denom()));
    let (a, b) = ((a * &l).to_integer(), (b * &l).to_integer());
    let mut bits = start_bits.max(8) + log2_abs_int(l.numer()).ceil() as u64;
    for attempt in 0..=MAX_DOUBLINGS {
        let h = eval_h(params, sign, bits)?.value;
        let r = h.mul_int(&b).sub(&BallReal::from_int(a.clone()));
        if r.excludes_zero() {
            return Ok(r.coarsen(64));
        }
        if attempt < MAX_DOUBLINGS {
            bits *= 2;
        }
    }
    Err(DenomError::PrecisionExhausted { n, bits })
}

/// A shared, monotonically refined enclosure of `h±` for one parameter set.
pub struct HCache {
    params: QParams,
    sign: Sign,
    slot: Mutex<Option<(u64, BallReal)>>,
}

impl HCache {
    pub fn new(params: &QParams, sign: Sign) -> Self {
        HCache {
            params: params.clone(),
            sign,
            slot: Mutex::new(None),
        }
    }

    /// Enclosure of `h±` with radius at most `2^-bits`.
    pub fn get(&self, bits: u64) -> Result<BallReal, DenomError> {
        let mut slot = self.slot.lock().unwrap();
        if let Some((have, ball)) = slot.as_ref() {
            if *have >= bits {
                return Ok(ball.clone());
            }
        }
        let v = eval_h(&self.params, self.sign, bits)?.value;
        *slot = Some((bits, v.clone()));
        Ok(v)
    }
}

/// One approximation step.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproxRecord {
    pub n: usize,
    pub sign: Sign,
    pub kind: FactorKind,
    #[serde(with = "rat_string")]
    pub e: Rat,
    #[serde(with = "int_string")]
    pub a: BigInt,
    #[serde(with = "int_string")]
    pub b: BigInt,
    pub residual: BallReal,
    /// `log|residual| / (n² log p2)`.
    pub exponent: f64,
    #[serde(with = "int_string")]
    pub gcd_ab: BigInt,
    pub precision_bits: u64,
    /// Whether the factor itself is an integer (ξ need not be).
    pub e_integral: bool,
}

impl ApproxRecord {
    /// `log|b| / (n² log p2)`.
    pub fn b_exponent(&self, p2: &BigInt) -> f64 {
        log2_abs_int(&self.b) / ((self.n * self.n) as f64 * log2_abs_int(p2))
    }
}

mod int_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

mod rat_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::arith::{parse_rat, Rat};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational '{s}'")))
    }
}

/// The asymptotic exponent of `e_n` for the kind: `η±`, `γ±(r2)` or `δ±(r2)`.
pub fn factor_exponent(params: &QParams, sign: Sign, kind: FactorKind) -> measures::PiSqLinear {
    let r2 = params.special_case().map(|s| s.r2 as u64);
    match (kind, r2) {
        (FactorKind::Special, Some(r2)) => measures::gamma(sign, r2).expect("r2 > 0"),
        (FactorKind::Xi, Some(r2)) => measures::delta(sign, r2).expect("r2 > 0"),
        _ => measures::eta(sign),
    }
}

/// Starting precision for the residual at index n: `⌈(γ + 3/2) n² log2 p2⌉ + 64`.
pub fn scheduled_precision(params: &QParams, n: usize, sign: Sign, kind: FactorKind) -> u64 {
    residual_precision(factor_exponent(params, sign, kind).to_f64(), n, params.p2())
}

fn residual_exponent(residual: &BallReal, n: usize, p2: &BigInt) -> f64 {
    residual.mid().log2_abs() / ((n * n) as f64 * log2_abs_int(p2))
}

/// Approximants plus the certified residual `b h± - a`, computed with `h` from `cache`.
pub fn build_approximants_cached(
    params: &QParams,
    n: usize,
    sign: Sign,
    kind: FactorKind,
    start_bits: u64,
    cache: &HCache,
) -> Result<ApproxRecord, DenomError> {
    let ex = exact_approximants(params, n, sign, kind)?;
    let mut bits = start_bits.max(8);
    for attempt in 0..=MAX_DOUBLINGS {
        let h = cache.get(bits)?;
        let residual = h.mul_int(&ex.b).sub(&BallReal::from_int(ex.a.clone()));
        if residual.excludes_zero() {
            let residual = residual.coarsen(64);
            let exponent = residual_exponent(&residual, n, params.p2());
            let gcd_ab = ex.a.gcd(&ex.b);
            let e_integral = ex.e.denom().is_one();
            return Ok(ApproxRecord {
                n,
                sign,
                kind,
                e: ex.e,
                a: ex.a,
                b: ex.b,
                residual,
                exponent,
                gcd_ab,
                precision_bits: bits,
                e_integral,
            });
        }
        if attempt < MAX_DOUBLINGS {
            bits *= 2;
        }
    }
    Err(DenomError::PrecisionExhausted { n, bits })
}

/// Approximants plus the certified residual, starting at `precision_bits`.
pub fn build_approximants(
    params: &QParams,
    n: usize,
    sign: Sign,
    kind: FactorKind,
    precision_bits: u64,
) -> Result<ApproxRecord, DenomError> {
    build_approximants_cached(params, n, sign, kind, precision_bits, &HCache::new(params, sign))
}

/// Enclosure of `R_n = Σ_k q1^k Q_n(q2^k) / (p2^n ± q2^k)` with radius at most `2^-bits`.
pub fn eval_rn(params: &QParams, n: usize, sign: Sign, bits: u64) -> BallReal {
    let q = build_q(params, n);
    let num = primitive_integer_poly(&q);
    let dn = (&q[0] * int_rat(&num[0]).recip()).recip().to_integer();
    // Q_n(x) = (1/dn) Σ num_i x^i and |Q_n| ≤ qmax on [0, 1]
    let qmax = q.iter().fold(Rat::zero(), |acc, c| acc + c.abs());
    let q1 = params.q1();
    let p2 = params.p2();
    let p2n = pow_int(p2, n as u64);
    let scale = &qmax / ((Rat::one() - &q1) * int_rat(&(&p2n - 1)));
    let target = crate::arith::pow2_rat(-(bits as i64) - 1);
    let mut k_max = 0usize;
    let mut tail = &scale * &q1;
    while tail > target {
        tail *= &q1;
        k_max += 1;
    }
    let wp = bits as i64 + 2 + (64 - (k_max as u64 + 1).leading_zeros() as i64);
    let pm = BigInt::from(sign.pm());
    let mut sum = BigInt::zero();
    let mut sk = BigInt::one();
    let mut tk = BigInt::one();
    let mut pk = BigInt::one();
    for k in 0..=k_max {
        if k > 0 {
            sk *= params.s1();
            tk *= params.t1();
            pk *= p2;
        }
        // Σ_i num_i p2^(k(n-i)) = p2^(kn) Q_n(q2^k) dn
        let mut nk = BigInt::zero();
        let mut pw = BigInt::one();
        for c in num.iter().rev() {
            nk += c * &pw;
            pw *= &pk;
        }
        let pkn = pow_int(&pk, n as u64);
        let top = (&sk * &pk * nk) << (wp as u64);
        let bottom = &tk * &dn * pkn * (&p2n * &pk + &pm);
        sum += top.div_floor(&bottom);
    }
    let tail_up = Dyadic::ceil_rational(&tail, -wp);
    let rounding = Dyadic::new(BigInt::from(k_max as u64 + 1), -wp);
    BallReal::new(Dyadic::new(sum, -wp), rounding.add(&tail_up))
}

/// Enclosure of `e p2^n R_n`, the residual computed from the error integral.
pub fn residual_via_integral(params: &QParams, n: usize, sign: Sign, e: &Rat, bits: u64) -> BallReal {
    let scale = e * int_rat(&pow_int(params.p2(), n as u64));
    let extra = crate::arith::log2_abs_rat(&scale).max(0.0).ceil() as u64;
    let rn = eval_rn(params, n, sign, bits + extra + 8);
    let num = rn.mul_int(scale.numer());
    let den_bits = bits as i64 + 8;
    // divide by the (positive) denominator with outward rounding
    let d = scale.denom();
    if d.is_one() {
        return num;
    }
    let lo = Dyadic::floor_rational(&(num.lower().to_rational() / int_rat(d)), -den_bits);
    let hi = Dyadic::ceil_rational(&(num.upper().to_rational() / int_rat(d)), -den_bits);
    let mid = lo.add(&hi).shl(-1).floor_at(-den_bits - 1);
    let rad = hi.sub(&mid).max(mid.sub(&lo));
    BallReal::new(mid, rad)
}

/// `‖Q_n‖²/(p2^n + 1) ≤ Q_n(∓p2^n) R_n ≤ ‖Q_n‖²/(p2^n - 1)`, certified by enclosure
/// with `bits` bits relative to the lower bound.
pub fn check_sandwich(params: &QParams, n: usize, sign: Sign, bits: u64) -> bool {
    let (qz, _) = eval_at_special_point(params, n, sign);
    if qz.is_zero() {
        return false;
    }
    let norm = norm_squared(params, n);
    let p2n = int_rat(&pow_int(params.p2(), n as u64));
    let (mut lo, mut hi) = (&norm / (&p2n + Rat::one()) / &qz, &norm / (&p2n - Rat::one()) / &qz);
    if qz.is_negative() {
        std::mem::swap(&mut lo, &mut hi);
    }
    let scale = -crate::arith::log2_abs_rat(&lo).floor() as i64;
    let rn = eval_rn(params, n, sign, (bits as i64 + scale.max(0)) as u64);
    lo <= rn.lower().to_rational() && rn.upper().to_rational() <= hi
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub params: QParams,
    pub sign: Sign,
    pub kind: FactorKind,
    pub n_max: usize,
    pub records: Vec<ApproxRecord>,
    pub all_positive: bool,
    /// First index from which `|residual|` is certified strictly decreasing.
    pub burn_in: Option<usize>,
    /// `γ - 3/2` for the kind (η, γ(r2) or δ(r2)).
    pub ceiling: f64,
    /// Exponent at `n_max` is at most `ceiling + EXPONENT_SLACK`.
    pub ceiling_ok: bool,
}

impl VerifyReport {
    /// Integral (guaranteed once a report exists) and all residuals positive.
    pub fn passed(&self) -> bool {
        self.all_positive
    }
}

fn abs_bounds(b: &BallReal) -> (Dyadic, Dyadic) {
    if b.is_negative() {
        (b.upper().neg(), b.lower().neg())
    } else {
        (b.lower(), b.upper())
    }
}

/// Records for `n = 1..=n_max`, computed in parallel and ordered by n.
pub fn verify_range_with(
    params: &QParams,
    sign: Sign,
    kind: FactorKind,
    n_max: usize,
    start_bits: Option<u64>,
) -> Result<VerifyReport, DenomError> {
    check_n(n_max)?;
    if kind != FactorKind::General {
        special_parts(params, kind)?;
    }
    let cache = HCache::new(params, sign);
    let start = |n: usize| start_bits.unwrap_or_else(|| scheduled_precision(params, n, sign, kind));
    cache.get(2 * start(n_max))?;
    let records: Vec<ApproxRecord> = (1..=n_max)
        .into_par_iter()
        .map(|n| build_approximants_cached(params, n, sign, kind, start(n), &cache))
        .collect::<Result<_, _>>()?;
    Ok(summarize(params, sign, kind, n_max, records))
}

pub fn verify_range(params: &QParams, sign: Sign, kind: FactorKind, n_max: usize) -> Result<VerifyReport, DenomError> {
    verify_range_with(params, sign, kind, n_max, None)
}

/// Builds the report from records ordered by n.
pub fn summarize(
    params: &QParams,
    sign: Sign,
    kind: FactorKind,
    n_max: usize,
    records: Vec<ApproxRecord>,
) -> VerifyReport {
    let all_positive = records.iter().all(|r| r.residual.is_positive());
    let mut burn_in = records.last().map(|r| r.n);
    for w in records.windows(2).rev() {
        let (_, cur_hi) = abs_bounds(&w[1].residual);
        let (prev_lo, _) = abs_bounds(&w[0].residual);
        if cur_hi < prev_lo {
            burn_in = Some(w[0].n);
        } else {
            break;
        }
    }
    let ceiling = factor_exponent(params, sign, kind).to_f64() - 1.5;
    let ceiling_ok = records.last().is_some_and(|r| r.exponent <= ceiling + EXPONENT_SLACK);
    VerifyReport {
        params: params.clone(),
        sign,
        kind,
        n_max,
        records,
        all_positive,
        burn_in,
        ceiling,
        ceiling_ok,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    /// `(n, log|b_n| / (n² log p2))`.
    pub values: Vec<(usize, f64)>,
    /// `γ + 3/2 + EXPONENT_SLACK`.
    pub ceiling: f64,
    /// Ceiling respected for n in the top half of the range.
    pub within_ceiling: bool,
    /// `|b_n|` strictly increasing from n = 2 on.
    pub increasing: bool,
}

/// Growth of `|b_n|`; only the top half of `1..=n_max` is held to the ceiling.
pub fn b_growth_check(
    params: &QParams,
    sign: Sign,
    kind: FactorKind,
    n_max: usize,
) -> Result<GrowthReport, DenomError> {
    if n_max < 4 {
        return Err(DenomError::IndexTooSmall(4));
    }
    let bs: Vec<(usize, BigInt)> = (1..=n_max)
        .into_par_iter()
        .map(|n| exact_approximants(params, n, sign, kind).map(|x| (n, x.b)))
        .collect::<Result<_, _>>()?;
    let lp = log2_abs_int(params.p2());
    let values: Vec<(usize, f64)> = bs
        .iter()
        .map(|(n, b)| (*n, log2_abs_int(b) / ((n * n) as f64 * lp)))
        .collect();
    let ceiling = factor_exponent(params, sign, kind).to_f64() + 1.5 + EXPONENT_SLACK;
    let within_ceiling = values
        .iter()
        .filter(|(n, _)| *n > n_max / 2)
        .all(|(_, v)| *v <= ceiling);
    let increasing = bs.windows(2).skip(1).all(|w| w[1].1.abs() > w[0].1.abs());
    Ok(GrowthReport {
        values,
        ceiling,
        within_ceiling,
        increasing,
    })
}

/// Divisibility of the special factor by the cyclotomic bound `M_n 𝓜_n / C_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialChain {
    /// `factor_special | M 𝓜 / C`.
    pub factor_divides: bool,
    /// Same with the denominator lcm cut at `k ≤ n-1`.
    pub lemma_range_factor_divides: bool,
    /// `lcm{p2^j ± 1, p1 p2^k - 1} | M 𝓜 / C`.
    pub differences_divide: bool,
    /// Denominator lcm (`k ≤ n`) divides `𝓜_n`.
    pub denominators_divide_calm: bool,
}

pub fn special_divisibility_chain(params: &QParams, n: usize, sign: Sign) -> Result<SpecialChain, DenomError> {
    check_n(n)?;
    let (p, r1, r2) = special_parts(params, FactorKind::Special)?;
    let (r1, r2) = (r1 as u64, r2 as u64);
    let m = common_multiple_m(n as u64, &p, r2, sign).value();
    let calm = common_multiple_calm(n as u64, &p, r1, r2).value();
    let c = common_factor_c(n as u64, &p, r1, r2, sign).value();
    let bound = Rat::new(&m * &calm, c);
    let divides = |x: &BigInt| bound.denom().is_one() && bound.numer().is_multiple_of(x);
    let parts = special_factor_parts(params, n, sign)?;
    Ok(SpecialChain {
        factor_divides: divides(&factor_special(params, n, sign)?),
        lemma_range_factor_divides: divides(&factor_special_lemma_range(params, n, sign)?),
        differences_divide: divides(&parts.differences),
        denominators_divide_calm: calm.is_multiple_of(&parts.denominators),
    })
}
