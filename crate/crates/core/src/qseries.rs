//! The Lambert-type series `h±(q1, q2) = Σ_{k≥1} q1^k / (1 ± q2^k)`, its
//! Markov function `f(z) = Σ_{k≥0} q1^k / (z - q2^k)`, moments and
//! q-Pochhammer symbols.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ceil_log2_rat, pow_int, Rat};
use crate::ball::{BallReal, Dyadic};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("q1 must satisfy 0 < q1 < 1, got {0}")]
    Q1OutOfRange(String),
    #[error("p2 must be an integer >= 2, got {0}")]
    P2TooSmall(String),
    #[error("special base p must be an integer >= 2, got {0}")]
    BaseTooSmall(String),
    #[error("exponents r1, r2 must be positive, got r1={r1}, r2={r2}")]
    NonPositiveExponent { r1: u32, r2: u32 },
    #[error("exponents r1, r2 must be coprime, got gcd({r1}, {r2}) = {gcd}")]
    ExponentsNotCoprime { r1: u32, r2: u32, gcd: u32 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("z = {0} lies in [0, 1], the pole region of the Markov function")]
    PoleRegion(String),
    #[error("precision must be at least 8 bits, got {0}")]
    PrecisionTooLow(u64),
}

/// The special structure `q1 = p^-r1`, `q2 = p^-r2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpecialCase {
    pub p: BigInt,
    pub r1: u32,
    pub r2: u32,
}

/// `q1 = s1/t1` in lowest terms and `q2 = 1/p2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QParams {
    s1: BigInt,
    t1: BigInt,
    p2: BigInt,
    special: Option<SpecialCase>,
}

impl QParams {
    pub fn new(q1: Rat, p2: BigInt) -> Result<Self, ParamError> {
        if !q1.is_positive() || q1 >= Rat::one() {
            return Err(ParamError::Q1OutOfRange(q1.to_string()));
        }
        if p2 < BigInt::from(2) {
            return Err(ParamError::P2TooSmall(p2.to_string()));
        }
        Ok(QParams {
            s1: q1.numer().clone(),
            t1: q1.denom().clone(),
            p2,
            special: None,
        })
    }

    pub fn special(p: BigInt, r1: u32, r2: u32) -> Result<Self, ParamError> {
        if p < BigInt::from(2) {
            return Err(ParamError::BaseTooSmall(p.to_string()));
        }
        if r1 == 0 || r2 == 0 {
            return Err(ParamError::NonPositiveExponent { r1, r2 });
        }
        let g = r1.gcd(&r2);
        if g != 1 {
            return Err(ParamError::ExponentsNotCoprime { r1, r2, gcd: g });
        }
        Ok(QParams {
            s1: BigInt::one(),
            t1: pow_int(&p, r1 as u64),
            p2: pow_int(&p, r2 as u64),
            special: Some(SpecialCase { p, r1, r2 }),
        })
    }

    pub fn s1(&self) -> &BigInt {
        &self.s1
    }

    pub fn t1(&self) -> &BigInt {
        &self.t1
    }

    pub fn p2(&self) -> &BigInt {
        &self.p2
    }

    pub fn special_case(&self) -> Option<&SpecialCase> {
        self.special.as_ref()
    }

    pub fn q1(&self) -> Rat {
        Rat::new(self.s1.clone(), self.t1.clone())
    }

    pub fn p1(&self) -> Rat {
        Rat::new(self.t1.clone(), self.s1.clone())
    }

    pub fn q2(&self) -> Rat {
        Rat::new(BigInt::one(), self.p2.clone())
    }

    pub fn p2_rat(&self) -> Rat {
        Rat::from_integer(self.p2.clone())
    }
}

impl fmt::Display for QParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.special {
            Some(s) => write!(f, "p={},r1={},r2={}", s.p, s.r1, s.r2),
            None => write!(f, "q1={}/{},p2={}", self.s1, self.t1, self.p2),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SpecialRepr {
    p: String,
    r1: u32,
    r2: u32,
}

#[derive(Serialize, Deserialize)]
struct ParamsRepr {
    s1: String,
    t1: String,
    p2: String,
    special: Option<SpecialRepr>,
}

impl Serialize for QParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ParamsRepr {
            s1: self.s1.to_string(),
            t1: self.t1.to_string(),
            p2: self.p2.to_string(),
            special: self.special.as_ref().map(|c| SpecialRepr {
                p: c.p.to_string(),
                r1: c.r1,
                r2: c.r2,
            }),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QParams {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = ParamsRepr::deserialize(d)?;
        let int = |s: &str| s.parse::<BigInt>().map_err(D::Error::custom);
        match r.special {
            Some(c) => QParams::special(int(&c.p)?, c.r1, c.r2).map_err(D::Error::custom),
            None => {
                let (s1, t1) = (int(&r.s1)?, int(&r.t1)?);
                if t1.is_zero() {
                    return Err(D::Error::custom("zero denominator"));
                }
                QParams::new(Rat::new(s1, t1), int(&r.p2)?).map_err(D::Error::custom)
            }
        }
    }
}

/// Which of the two series: `1 - q2^k` (Minus) or `1 + q2^k` (Plus).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];

    /// The `±` of `1 ± q2^k` as ±1.
    pub fn pm(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    /// The Padé evaluation point `∓p2^n`.
    pub fn eval_point(self, params: &QParams, n: usize) -> Rat {
        Rat::from_integer(pow_int(params.p2(), n as u64) * BigInt::from(-self.pm()))
    }

    pub fn name(self) -> &'static str {
        match self {
            Sign::Minus => "minus",
            Sign::Plus => "plus",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "minus" | "-" => Ok(Sign::Minus),
            "plus" | "+" => Ok(Sign::Plus),
            _ => Err(format!("unknown sign '{s}', expected minus or plus")),
        }
    }
}

/// A certified enclosure of `h±`.
#[derive(Clone, Debug)]
pub struct SeriesValue {
    pub sign: Sign,
    pub value: BallReal,
    pub terms_used: usize,
    pub tail_bound: Dyadic,
}

/// `(a; q)_k = Π_{i<k} (1 - a q^i)`.
pub fn q_pochhammer(a: &Rat, q: &Rat, k: usize) -> Rat {
    let mut out = Rat::one();
    let mut aq = a.clone();
    for _ in 0..k {
        out *= Rat::one() - &aq;
        aq *= q;
    }
    out
}

/// `μ_m = 1 / (1 - q1 q2^m)`.
pub fn moment(params: &QParams, m: usize) -> Rat {
    let denom = Rat::one() - params.q1() * crate::arith::pow_rat(&params.q2(), m as i64);
    denom.recip()
}

/// `Σ_{k=1}^{n-1} q1^k / (1 ± q2^k)`.
pub fn partial_h(params: &QParams, sign: Sign, n: usize) -> Rat {
    let q1 = params.q1();
    let q2 = params.q2();
    let pm = Rat::from_integer(BigInt::from(sign.pm()));
    let mut q1k = Rat::one();
    let mut q2k = Rat::one();
    let mut sum = Rat::zero();
    for _ in 1..n {
        q1k *= &q1;
        q2k *= &q2;
        sum += &q1k / (Rat::one() + &pm * &q2k);
    }
    sum
}

/// Smallest K with `q1^(K+1) * scale <= 2^-(prec+1)`, together with that bound.
fn truncation(q1: &Rat, scale: &Rat, prec: u64) -> (usize, Rat) {
    let target = crate::arith::pow2_rat(-(prec as i64) - 1);
    let per = -crate::arith::log2_abs_rat(q1);
    let need = crate::arith::log2_abs_rat(scale) + prec as f64 + 1.0;
    let mut k = ((need / per).ceil() as i64 - 1).max(0) as usize;
    let mut tail = crate::arith::pow_rat(q1, k as i64 + 1) * scale;
    while k > 0 && &tail * q1.recip() <= target {
        tail /= q1;
        k -= 1;
    }
    while tail > target {
        tail *= q1;
        k += 1;
    }
    (k, tail)
}

fn working_precision(prec: u64, terms: usize) -> i64 {
    prec as i64 + 2 + ceil_log2_rat(&Rat::from_integer(BigInt::from(terms as u64 + 1))).max(0)
}

/// Certified enclosure of `h±` with radius at most `2^-precision_bits`.
pub fn eval_h(params: &QParams, sign: Sign, precision_bits: u64) -> Result<SeriesValue, SeriesError> {
    if precision_bits < 8 {
        return Err(SeriesError::PrecisionTooLow(precision_bits));
    }
    let q1 = params.q1();
    let scale = ((Rat::one() - &q1) * (Rat::one() - params.q2())).recip();
    let (k_max, tail) = truncation(&q1, &scale, precision_bits);
    let wp = working_precision(precision_bits, k_max);
    let pm = BigInt::from(sign.pm());

    // term k = s1^k p2^k / (t1^k (p2^k ± 1))
    let mut sk = BigInt::one();
    let mut tk = BigInt::one();
    let mut pk = BigInt::one();
    let mut sum = BigInt::zero();
    for _ in 1..=k_max {
        sk *= params.s1();
        tk *= params.t1();
        pk *= params.p2();
        let num = (&sk * &pk) << (wp as u64);
        let den = &tk * (&pk + &pm);
        sum += num.div_floor(&den);
    }
    let tail_up = Dyadic::ceil_rational(&tail, -wp);
    let rounding = Dyadic::new(BigInt::from(k_max as u64), -wp);
    let value = BallReal::new(Dyadic::new(sum, -wp), rounding.add(&tail_up));
    Ok(SeriesValue {
        sign,
        value,
        terms_used: k_max,
        tail_bound: tail_up,
    })
}

/// Certified enclosure of the Markov function `f(z)`, `z` outside `[0, 1]`.
pub fn eval_f(params: &QParams, z: &Rat, precision_bits: u64) -> Result<BallReal, SeriesError> {
    if precision_bits < 8 {
        return Err(SeriesError::PrecisionTooLow(precision_bits));
    }
    let dist = if z > &Rat::one() {
        z - Rat::one()
    } else if z.is_negative() {
        -z
    } else {
        return Err(SeriesError::PoleRegion(z.to_string()));
    };
    let q1 = params.q1();
    let scale = ((Rat::one() - &q1) * dist).recip();
    let (k_max, tail) = truncation(&q1, &scale, precision_bits);
    let wp = working_precision(precision_bits, k_max + 1);
    let (zn, zd) = (z.numer(), z.denom());

    // term k = s1^k p2^k zd / (t1^k (zn p2^k - zd))
    let mut sk = BigInt::one();
    let mut tk = BigInt::one();
    let mut pk = BigInt::one();
    let mut sum = BigInt::zero();
    for k in 0..=k_max {
        if k > 0 {
            sk *= params.s1();
            tk *= params.t1();
            pk *= params.p2();
        }
        let num = (&sk * &pk * zd) << (wp as u64);
        let den = &tk * (zn * &pk - zd);
        sum += num.div_floor(&den);
    }
    let tail_up = Dyadic::ceil_rational(&tail, -wp);
    let rounding = Dyadic::new(BigInt::from(k_max as u64 + 1), -wp);
    Ok(BallReal::new(Dyadic::new(sum, -wp), rounding.add(&tail_up)))
}

/// Working precision for residuals at index n: `⌈(γ + 3/2) n² log2 p2⌉ + 64`.
pub fn residual_precision(exponent: f64, n: usize, p2: &BigInt) -> u64 {
    let bits = (exponent + 1.5) * (n * n) as f64 * crate::arith::log2_abs_int(p2);
    bits.max(0.0).ceil() as u64 + 64
}
