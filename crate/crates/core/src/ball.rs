//! Dyadic midpoint-radius balls.
//!
//! A [`BallReal`] stands for the closed interval `[mid - rad, mid + rad]`. The
//! midpoint and radius are dyadic rationals `m * 2^e`, so additions and
//! multiplications are exact; only explicit rounding steps (`from_rational`,
//! `round_mid`, `coarsen`) lose information, and they widen the radius to
//! cover what was dropped.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{log2_abs_int, Rat};

/// `mant * 2^exp`, kept with an odd mantissa (or zero with exp 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { mant, exp }
        } else {
            Dyadic {
                mant: mant >> tz,
                exp: exp + tz as i64,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic::new(BigInt::zero(), 0)
    }

    pub fn from_int(n: BigInt) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn pow2(e: i64) -> Self {
        Dyadic::new(BigInt::one(), e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn to_rational(&self) -> Rat {
        if self.exp >= 0 {
            Rat::from_integer(&self.mant << (self.exp as u64))
        } else {
            Rat::new(self.mant.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let l = self.log2_abs();
        let s = if self.is_negative() { -1.0 } else { 1.0 };
        s * l.exp2()
    }

    /// log2 of the absolute value; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            log2_abs_int(&self.mant) + self.exp as f64
        }
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        (
            &self.mant << ((self.exp - e) as u64),
            &other.mant << ((other.exp - e) as u64),
            e,
        )
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_int(&self, k: &BigInt) -> Dyadic {
        Dyadic::new(&self.mant * k, self.exp)
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn shl(&self, k: i64) -> Dyadic {
        Dyadic::new(self.mant.clone(), self.exp + k)
    }

    /// Largest multiple of `2^e` that is `<= self`.
    pub fn floor_at(&self, e: i64) -> Dyadic {
        if self.exp >= e {
            return self.clone();
        }
        let sh = (e - self.exp) as u64;
        let q = self.mant.div_floor(&(BigInt::one() << sh));
        Dyadic::new(q, e)
    }

    /// Smallest multiple of `2^e` that is `>= self`.
    pub fn ceil_at(&self, e: i64) -> Dyadic {
        self.neg().floor_at(e).neg()
    }

    pub fn floor_rational(r: &Rat, e: i64) -> Dyadic {
        let scaled = if e <= 0 {
            (r.numer() << ((-e) as u64)).div_floor(r.denom())
        } else {
            r.numer().div_floor(&(r.denom() << (e as u64)))
        };
        Dyadic::new(scaled, e)
    }

    pub fn ceil_rational(r: &Rat, e: i64) -> Dyadic {
        Dyadic::floor_rational(&-r, e).neg()
    }

    /// Round the mantissa up in magnitude to at most `bits` bits (for radii).
    pub fn round_up_bits(&self, bits: u64) -> Dyadic {
        let have = self.mant.bits();
        if have <= bits {
            return self.clone();
        }
        let e = self.exp + (have - bits) as i64;
        if self.is_negative() {
            self.floor_at(e)
        } else {
            self.ceil_at(e)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

/// Closed interval `[mid - rad, mid + rad]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallReal {
    mid: Dyadic,
    rad: Dyadic,
}

const RAD_BITS: u64 = 64;

impl BallReal {
    pub fn new(mid: Dyadic, rad: Dyadic) -> Self {
        assert!(!rad.is_negative(), "ball radius must be nonnegative");
        BallReal {
            mid,
            rad: rad.round_up_bits(RAD_BITS),
        }
    }

    pub fn exact(mid: Dyadic) -> Self {
        BallReal {
            mid,
            rad: Dyadic::zero(),
        }
    }

    pub fn from_int(n: BigInt) -> Self {
        BallReal::exact(Dyadic::from_int(n))
    }

    /// Enclosure of `r` with radius at most `2^-prec`.
    pub fn from_rational(r: &Rat, prec: i64) -> Self {
        if r.denom().is_one() {
            return BallReal::from_int(r.numer().clone());
        }
        let mid = Dyadic::floor_rational(r, -prec);
        BallReal::new(mid, Dyadic::pow2(-prec))
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn add(&self, o: &BallReal) -> BallReal {
        BallReal::new(self.mid.add(&o.mid), self.rad.add(&o.rad))
    }

    pub fn sub(&self, o: &BallReal) -> BallReal {
        BallReal::new(self.mid.sub(&o.mid), self.rad.add(&o.rad))
    }

    pub fn neg(&self) -> BallReal {
        BallReal {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
        }
    }

    pub fn mul(&self, o: &BallReal) -> BallReal {
        let mid = self.mid.mul(&o.mid);
        let rad = self
            .mid
            .abs()
            .mul(&o.rad)
            .add(&o.mid.abs().mul(&self.rad))
            .add(&self.rad.mul(&o.rad));
        BallReal::new(mid, rad)
    }

    pub fn mul_int(&self, k: &BigInt) -> BallReal {
        BallReal::new(self.mid.mul_int(k), self.rad.mul_int(&k.abs()))
    }

    pub fn shl(&self, k: i64) -> BallReal {
        BallReal::new(self.mid.shl(k), self.rad.shl(k))
    }

    /// Widen the radius by `err >= 0`.
    pub fn inflate(&self, err: &Dyadic) -> BallReal {
        BallReal::new(self.mid.clone(), self.rad.add(&err.abs()))
    }

    /// Drop midpoint bits below `2^e`, moving the discarded part into the radius.
    pub fn round_mid(&self, e: i64) -> BallReal {
        if self.mid.exponent() >= e {
            return self.clone();
        }
        let m = self.mid.floor_at(e);
        let err = self.mid.sub(&m);
        BallReal::new(m, self.rad.add(&err))
    }

    /// Keep only `extra` midpoint bits below the radius scale.
    pub fn coarsen(&self, extra: i64) -> BallReal {
        if self.rad.is_zero() {
            return self.clone();
        }
        let e = self.rad.log2_abs().floor() as i64 - extra;
        self.round_mid(e)
    }

    pub fn contains_rational(&self, r: &Rat) -> bool {
        let lo = self.lower().to_rational();
        let hi = self.upper().to_rational();
        &lo <= r && r <= &hi
    }

    pub fn contains(&self, o: &BallReal) -> bool {
        self.lower() <= o.lower() && o.upper() <= self.upper()
    }

    pub fn overlaps(&self, o: &BallReal) -> bool {
        self.lower() <= o.upper() && o.lower() <= self.upper()
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    pub fn excludes_zero(&self) -> bool {
        self.is_positive() || self.is_negative()
    }

    /// log2 of the radius; `-inf` for exact balls.
    pub fn rad_log2(&self) -> f64 {
        self.rad.log2_abs()
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Decimal string with `sig` significant digits, every one of which is
    /// correct for all points of the ball (truncation, not rounding).
    /// `None` if the ball is too wide to decide them.
    pub fn certified_decimal(&self, sig: usize) -> Option<String> {
        if sig == 0 || !self.excludes_zero() {
            return None;
        }
        let neg = self.is_negative();
        let (lo, hi) = if neg {
            (self.upper().neg().to_rational(), self.lower().neg().to_rational())
        } else {
            (self.lower().to_rational(), self.upper().to_rational())
        };
        let ten = BigInt::from(10);
        let pow10 = |e: i64| -> Rat {
            if e >= 0 {
                Rat::from_integer(num_traits::pow(ten.clone(), e as usize))
            } else {
                Rat::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
            }
        };
        let mut e10 = ((crate::arith::log2_abs_rat(&lo)) / std::f64::consts::LOG2_10).floor() as i64;
        while pow10(e10) > lo {
            e10 -= 1;
        }
        while pow10(e10 + 1) <= lo {
            e10 += 1;
        }
        let k = sig as i64 - 1 - e10;
        let a = (&lo * pow10(k)).floor().to_integer();
        let b = (&hi * pow10(k)).floor().to_integer();
        if a != b {
            return None;
        }
        let digits = a.to_string();
        let body = if k > 0 {
            let k = k as usize;
            let padded = if digits.len() <= k {
                format!("{}{}", "0".repeat(k + 1 - digits.len()), digits)
            } else {
                digits
            };
            let split = padded.len() - k;
            format!("{}.{}", &padded[..split], &padded[split..])
        } else {
            format!("{}{}", digits, "0".repeat((-k) as usize))
        };
        Some(if neg { format!("-{body}") } else { body })
    }
}

impl fmt::Display for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.6e} +/- {:.1e}]", self.mid.to_f64(), self.rad.to_f64())
    }
}

/// Serialized form: `mid * 2^exp` and `rad * 2^exp` with decimal-string integers.
#[derive(Serialize, Deserialize)]
struct BallRepr {
    mid: String,
    rad: String,
    exp: i64,
}

impl Serialize for BallReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let e = if self.rad.is_zero() {
            self.mid.exponent()
        } else if self.mid.is_zero() {
            self.rad.exponent()
        } else {
            self.mid.exponent().min(self.rad.exponent())
        };
        let m = self.mid.mantissa() << ((self.mid.exponent() - e) as u64);
        let r = self.rad.mantissa() << ((self.rad.exponent() - e) as u64);
        BallRepr {
            mid: m.to_string(),
            rad: r.to_string(),
            exp: e,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BallReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = BallRepr::deserialize(d)?;
        let m: BigInt = r.mid.parse().map_err(D::Error::custom)?;
        let rad: BigInt = r.rad.parse().map_err(D::Error::custom)?;
        if rad.is_negative() {
            return Err(D::Error::custom("negative ball radius"));
        }
        Ok(BallReal {
            mid: Dyadic::new(m, r.exp),
            rad: Dyadic::new(rad, r.exp),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn dyadic_normalizes_trailing_zeros() {
        let d = Dyadic::new(BigInt::from(12), -4);
        assert_eq!(d.mantissa(), &BigInt::from(3));
        assert_eq!(d.exponent(), -2);
        assert_eq!(d.to_rational(), rat(3, 4));
    }

    #[test]
    fn floor_and_ceil() {
        let d = Dyadic::new(BigInt::from(-5), -2); // -1.25
        assert_eq!(d.floor_at(0).to_rational(), rat(-2, 1));
        assert_eq!(d.ceil_at(0).to_rational(), rat(-1, 1));
        assert_eq!(Dyadic::floor_rational(&rat(1, 3), -4).to_rational(), rat(5, 16));
        assert_eq!(Dyadic::ceil_rational(&rat(1, 3), -4).to_rational(), rat(6, 16));
    }

    #[test]
    fn from_rational_encloses() {
        let r = rat(1, 3);
        let b = BallReal::from_rational(&r, 40);
        assert!(b.contains_rational(&r));
        assert!(b.rad_log2() <= -40.0);
    }

    #[test]
    fn mul_encloses_product() {
        let a = BallReal::from_rational(&rat(2, 7), 30);
        let b = BallReal::from_rational(&rat(-5, 11), 30);
        assert!(a.mul(&b).contains_rational(&rat(-10, 77)));
    }

    #[test]
    fn round_mid_keeps_enclosure() {
        let r = rat(22, 7);
        let b = BallReal::from_rational(&r, 200).round_mid(-20);
        assert!(b.contains_rational(&r));
        assert!(b.mid().exponent() >= -20);
    }

    #[test]
    fn certified_decimal_truncates() {
        let b = BallReal::from_rational(&rat(1, 3), 80);
        assert_eq!(b.certified_decimal(5).unwrap(), "0.33333");
        let b = BallReal::from_rational(&rat(-2000, 3), 80);
        assert_eq!(b.certified_decimal(4).unwrap(), "-666.6");
        let b = BallReal::from_int(BigInt::from(123456));
        assert_eq!(b.certified_decimal(3).unwrap(), "123000");
        let wide = BallReal::new(Dyadic::from_int(BigInt::one()), Dyadic::pow2(-3));
        assert!(wide.certified_decimal(4).is_none());
    }

    #[test]
    fn serde_round_trip() {
        let b = BallReal::from_rational(&rat(-17, 9), 70).coarsen(16);
        let s = serde_json::to_string(&b).unwrap();
        let back: BallReal = serde_json::from_str(&s).unwrap();
        assert_eq!(b, back);
    }
}
