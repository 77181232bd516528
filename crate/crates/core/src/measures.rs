//! Exponents of the form `a + b/π²` and measure bounds `(Aπ² + B)/(Cπ² + D)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{log2_abs_int, log2_abs_rat, Rat};
use crate::ball::BallReal;
use crate::cyclotomic::primes_dividing;
use crate::qseries::Sign;

const PI_SQ: f64 = std::f64::consts::PI * std::f64::consts::PI;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("3 - 2*({0}) is not positive")]
    NonpositiveDenominator(String),
    #[error("fraction has zero denominator")]
    ZeroDenominator,
    #[error("entry for n = {0} is zero or its enclosure contains zero")]
    ZeroEntry(u64),
    #[error("base must be at least 2")]
    BadBase,
    #[error("r2 must be positive")]
    ZeroR2,
    #[error("no table {0}, expected 1 or 2")]
    NoSuchTable(u8),
}

/// `a + b/π²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiSqLinear {
    pub a: Rat,
    pub b: Rat,
}

impl PiSqLinear {
    pub fn new(a: Rat, b: Rat) -> Self {
        PiSqLinear { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        PiSqLinear::new(Rat::from_integer(a.into()), Rat::from_integer(b.into()))
    }

    pub fn add(&self, o: &PiSqLinear) -> PiSqLinear {
        PiSqLinear::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &PiSqLinear) -> PiSqLinear {
        PiSqLinear::new(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn to_f64(&self) -> f64 {
        rat_f64(&self.a) + rat_f64(&self.b) / PI_SQ
    }
}

impl fmt::Display for PiSqLinear {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}/π²", self.b),
            (false, false) => write!(f, "{} + {}/π²", self.a, self.b),
        }
    }
}

fn rat_f64(r: &Rat) -> f64 {
    (log2_abs_rat(r)).exp2() * if r.is_negative() { -1.0 } else { 1.0 }
}

/// `(Aπ² + B)/(Cπ² + D)` with `gcd(A,B,C,D) = 1` and `C > 0`, or `C = 0, D > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiSqFraction {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl PiSqFraction {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self, MeasureError> {
        if c.is_zero() && d.is_zero() {
            return Err(MeasureError::ZeroDenominator);
        }
        let g = a.gcd(&b).gcd(&c).gcd(&d);
        let flip = c.is_negative() || (c.is_zero() && d.is_negative());
        let s = if flip { -g } else { g };
        Ok(PiSqFraction {
            a: a / &s,
            b: b / &s,
            c: c / &s,
            d: d / &s,
        })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self, MeasureError> {
        PiSqFraction::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        (f(&self.a) * PI_SQ + f(&self.b)) / (f(&self.c) * PI_SQ + f(&self.d))
    }

    /// Same value, decided by cross-multiplication.
    pub fn same_value(&self, o: &PiSqFraction) -> bool {
        // (Ax+B)(C'x+D') = (A'x+B')(Cx+D) as polynomials in x = π² (transcendental).
        &self.a * &o.c == &o.a * &self.c
            && &self.a * &o.d + &self.b * &o.c == &o.a * &self.d + &o.b * &self.c
            && &self.b * &o.d == &o.b * &self.d
    }
}

fn lin_term(coef: &BigInt, constant: &BigInt) -> String {
    let mut s = String::new();
    if !coef.is_zero() {
        if coef == &BigInt::one() {
            s.push_str("π²");
        } else if coef == &BigInt::from(-1) {
            s.push_str("-π²");
        } else {
            s.push_str(&format!("{coef}π²"));
        }
    }
    if !constant.is_zero() || s.is_empty() {
        if s.is_empty() {
            s.push_str(&constant.to_string());
        } else if constant.is_negative() {
            s.push_str(&format!("-{}", -constant));
        } else {
            s.push_str(&format!("+{constant}"));
        }
    }
    s
}

impl fmt::Display for PiSqFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = lin_term(&self.a, &self.b);
        let num = if !self.a.is_zero() && !self.b.is_zero() {
            format!("({num})")
        } else {
            num
        };
        if self.c.is_zero() && self.d.is_one() {
            return f.write_str(&num);
        }
        write!(f, "{}/({})", num, lin_term(&self.c, &self.d))
    }
}

fn coprime_inverse_squares(r2: u64, from: u64) -> Rat {
    (from.max(1)..=r2)
        .filter(|l| l.gcd(&r2) == 1)
        .fold(Rat::zero(), |acc, l| acc + Rat::new(BigInt::one(), BigInt::from(l * l)))
}

fn prod_sq(r2: u64) -> Rat {
    primes_dividing(r2).into_iter().fold(Rat::one(), |acc, w| {
        acc * Rat::new(BigInt::from(w * w), BigInt::from(w * w - 1))
    })
}

fn prod_lin(r2: u64) -> Rat {
    primes_dividing(r2).into_iter().fold(Rat::one(), |acc, w| {
        acc * Rat::new(BigInt::from(w), BigInt::from(w + 1))
    })
}

fn int(x: i64) -> Rat {
    Rat::from_integer(x.into())
}

/// `η⁻ = 1 + 3/π²`, `η⁺ = 1 + 4/π²`.
pub fn eta(sign: Sign) -> PiSqLinear {
    match sign {
        Sign::Minus => PiSqLinear::from_ints(1, 3),
        Sign::Plus => PiSqLinear::from_ints(1, 4),
    }
}

/// `γ±(r2)`.
pub fn gamma(sign: Sign, r2: u64) -> Result<PiSqLinear, MeasureError> {
    if r2 == 0 {
        return Err(MeasureError::ZeroR2);
    }
    let pa = prod_sq(r2);
    let pb = prod_lin(r2);
    let s = coprime_inverse_squares(r2, 1);
    let r = int(r2 as i64);
    let b = match sign {
        Sign::Minus => int(3) * (int(1) + int(2) * &pa * &s - &pb / &r),
        Sign::Plus => {
            let mut v = int(4) + int(6) * &pa * &s;
            if r2 % 2 == 1 {
                let tail = coprime_inverse_squares(r2, r2.div_ceil(2));
                v -= int(2) * &pb / &r + &pa * tail;
            }
            v
        }
    };
    Ok(PiSqLinear::new(Rat::zero(), b))
}

/// `θ±(r2) = γ±(r2) - (3/π²) Π ϖ²/(ϖ²-1) Σ_{(l,r2)=1} 1/l²`.
pub fn theta(sign: Sign, r2: u64) -> Result<PiSqLinear, MeasureError> {
    let g = gamma(sign, r2)?;
    let m = int(3) * prod_sq(r2) * coprime_inverse_squares(r2, 1);
    Ok(PiSqLinear::new(g.a, g.b - m))
}

/// `δ⁻ = θ⁻`, `δ⁺ = θ⁺ + 1/3 - 1/(3 r2)`.
pub fn delta(sign: Sign, r2: u64) -> Result<PiSqLinear, MeasureError> {
    let t = theta(sign, r2)?;
    Ok(match sign {
        Sign::Minus => t,
        Sign::Plus => PiSqLinear::new(
            t.a + Rat::new(1.into(), 3.into()) - Rat::new(1.into(), BigInt::from(3 * r2)),
            t.b,
        ),
    })
}

/// `6 / (3 - 2·exponent)` in canonical `(Aπ²+B)/(Cπ²+D)` form.
pub fn measure_bound(exponent: &PiSqLinear) -> Result<PiSqFraction, MeasureError> {
    if 3.0 - 2.0 * exponent.to_f64() <= 0.0 {
        return Err(MeasureError::NonpositiveDenominator(exponent.to_string()));
    }
    // 6π² / ((3 - 2a)π² - 2b)
    let c = int(3) - int(2) * &exponent.a;
    let d = int(-2) * &exponent.b;
    let l = c.denom().lcm(d.denom());
    let scale = Rat::from_integer(l.clone());
    PiSqFraction::new(
        BigInt::from(6) * &l,
        BigInt::zero(),
        (c * &scale).to_integer(),
        (d * &scale).to_integer(),
    )
}

/// `ν± = 6π²/(π² - 6)` and `6π²/(π² - 8)`, i.e. the bound at `η±`.
pub fn nu(sign: Sign) -> PiSqFraction {
    measure_bound(&eta(sign)).expect("η± < 3/2")
}

/// `m±(r2)`, the bound from `γ±(r2)`.
pub fn m_bound(sign: Sign, r2: u64) -> Result<PiSqFraction, MeasureError> {
    measure_bound(&gamma(sign, r2)?)
}

/// `χ±(r2)`, the bound from `δ±(r2)`.
pub fn chi_bound(sign: Sign, r2: u64) -> Result<PiSqFraction, MeasureError> {
    measure_bound(&delta(sign, r2)?)
}

/// `x` rounded to `sig` significant digits, printed positionally.
pub fn format_significant(x: f64, sig: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i64;
    let decimals = (sig as i64 - 1 - e).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    // rounding may carry into a new leading digit (9.99.. -> 10.0..)
    let digits = s.chars().filter(|c| c.is_ascii_digit()).count();
    let lead_zeros = s
        .trim_start_matches('-')
        .chars()
        .take_while(|c| *c == '0' || *c == '.')
        .filter(|c| *c == '0')
        .count();
    if digits - lead_zeros > sig && decimals > 0 {
        format!("{:.*}", decimals - 1, x)
    } else {
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub r2: u64,
    pub minus: String,
    pub minus_decimal: String,
    pub plus: String,
    pub plus_decimal: String,
    #[serde(skip)]
    pub minus_value: PiSqFraction,
    #[serde(skip)]
    pub plus_value: PiSqFraction,
}

/// Table 1 (`m±(r2)`) or Table 2 (`χ±(r2)`) for `r2 = 1..10`.
pub fn table(which: u8) -> Result<Vec<TableRow>, MeasureError> {
    let f: fn(Sign, u64) -> Result<PiSqFraction, MeasureError> = match which {
        1 => m_bound,
        2 => chi_bound,
        w => return Err(MeasureError::NoSuchTable(w)),
    };
    (1..=10)
        .map(|r2| {
            let m = f(Sign::Minus, r2)?;
            let p = f(Sign::Plus, r2)?;
            Ok(TableRow {
                r2,
                minus: m.to_string(),
                minus_decimal: format_significant(m.to_f64(), 10),
                plus: p.to_string(),
                plus_decimal: format_significant(p.to_f64(), 10),
                minus_value: m,
                plus_value: p,
            })
        })
        .collect()
}

/// Values whose magnitude can be measured in bits.
pub trait Magnitude {
    /// `log2 |x|`, `None` when `x` is (or may be) zero.
    fn log2_magnitude(&self) -> Option<f64>;
}

impl Magnitude for BigInt {
    fn log2_magnitude(&self) -> Option<f64> {
        (!self.is_zero()).then(|| log2_abs_int(self))
    }
}

impl Magnitude for Rat {
    fn log2_magnitude(&self) -> Option<f64> {
        (!self.is_zero()).then(|| log2_abs_rat(self))
    }
}

impl Magnitude for BallReal {
    fn log2_magnitude(&self) -> Option<f64> {
        self.excludes_zero().then(|| self.mid().log2_abs())
    }
}

/// `log|value_n| / (n² log base)` for each `(n, value_n)`.
pub fn empirical_exponent<T: Magnitude>(values: &[(u64, T)], base: &BigInt) -> Result<Vec<f64>, MeasureError> {
    if base < &BigInt::from(2) {
        return Err(MeasureError::BadBase);
    }
    let lb = log2_abs_int(base);
    values
        .iter()
        .map(|(n, v)| {
            let l = v.log2_magnitude().ok_or(MeasureError::ZeroEntry(*n))?;
            Ok(l / ((n * n) as f64 * lb))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_values() {
        assert_eq!(eta(Sign::Minus), PiSqLinear::from_ints(1, 3));
        assert_eq!(eta(Sign::Plus), PiSqLinear::from_ints(1, 4));
        assert!(eta(Sign::Minus).to_f64() < 1.5 && eta(Sign::Plus).to_f64() < 1.5);
    }

    #[test]
    fn gamma_r2_one() {
        assert_eq!(gamma(Sign::Minus, 1).unwrap(), PiSqLinear::from_ints(0, 6));
        assert_eq!(gamma(Sign::Plus, 1).unwrap(), PiSqLinear::from_ints(0, 7));
        assert_eq!(theta(Sign::Minus, 1).unwrap(), PiSqLinear::from_ints(0, 3));
        assert_eq!(theta(Sign::Plus, 1).unwrap(), PiSqLinear::from_ints(0, 4));
        assert_eq!(delta(Sign::Plus, 1).unwrap(), PiSqLinear::from_ints(0, 4));
    }

    #[test]
    fn delta_plus_two() {
        let t = theta(Sign::Plus, 2).unwrap();
        let d = delta(Sign::Plus, 2).unwrap();
        assert_eq!(d.b, t.b);
        assert_eq!(d.a, Rat::new(1.into(), 6.into()));
    }

    #[test]
    fn bound_examples() {
        let m = measure_bound(&PiSqLinear::from_ints(0, 6)).unwrap();
        assert_eq!(m, PiSqFraction::from_i64(2, 0, 1, -4).unwrap());
        assert_eq!(format_significant(m.to_f64(), 10), "3.362953864");
        let m = measure_bound(&gamma(Sign::Plus, 2).unwrap()).unwrap();
        assert_eq!(m, PiSqFraction::from_i64(2, 0, 1, -8).unwrap());
        let m = measure_bound(&PiSqLinear::from_ints(0, 3)).unwrap();
        assert_eq!(m, PiSqFraction::from_i64(2, 0, 1, -2).unwrap());
        assert!(measure_bound(&PiSqLinear::from_ints(2, 0)).is_err());
    }

    #[test]
    fn nu_values() {
        assert_eq!(nu(Sign::Plus), PiSqFraction::from_i64(6, 0, 1, -8).unwrap());
        assert_eq!(nu(Sign::Minus), PiSqFraction::from_i64(6, 0, 1, -6).unwrap());
    }

    #[test]
    fn fraction_normalization() {
        let f = PiSqFraction::from_i64(-32, 0, -16, 114).unwrap();
        assert_eq!(f, PiSqFraction::from_i64(16, 0, 8, -57).unwrap());
        let g = PiSqFraction::from_i64(0, -4, 0, -2).unwrap();
        assert_eq!(g.parts().3, &BigInt::one());
        assert!(PiSqFraction::from_i64(1, 0, 0, 0).is_err());
        assert!(f.same_value(&PiSqFraction::from_i64(32, 0, 16, -114).unwrap()));
        assert_eq!(f.to_string(), "16π²/(8π²-57)");
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(10.557960171, 10), "10.55796017");
        assert_eq!(format_significant(9.9999999999, 10), "10.00000000");
        assert_eq!(format_significant(0.30396355, 4), "0.3040");
    }

    #[test]
    fn empirical_exponent_examples() {
        let base = BigInt::from(3);
        let v: Vec<(u64, Rat)> = (1..5)
            .map(|n| {
                (
                    n,
                    crate::arith::pow_rat(&Rat::from_integer(3.into()), -((n * n) as i64)),
                )
            })
            .collect();
        for x in empirical_exponent(&v, &base).unwrap() {
            assert!((x + 1.0).abs() < 1e-12);
        }
        let zero = vec![(1u64, BigInt::zero())];
        assert_eq!(empirical_exponent(&zero, &base), Err(MeasureError::ZeroEntry(1)));
    }
}
