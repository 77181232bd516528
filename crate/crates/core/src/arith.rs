//! Small exact-arithmetic helpers shared by the other modules.

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// `r^e` for any integer exponent (r must be nonzero when e < 0).
pub fn pow_rat(r: &Rat, e: i64) -> Rat {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

pub fn pow_int(b: &BigInt, e: u64) -> BigInt {
    num_traits::pow(b.clone(), e as usize)
}

/// Least common multiple of the absolute values, skipping zeros. Empty gives 1.
pub fn lcm_nonzero<I: IntoIterator<Item = BigInt>>(items: I) -> BigInt {
    items
        .into_iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(&x.abs()))
}

/// log2|x| for a nonzero integer, accurate well beyond f64 range.
pub fn log2_abs_int(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    let top: BigInt = x.abs() >> shift;
    top.to_f64().unwrap().log2() + shift as f64
}

pub fn log2_abs_rat(x: &Rat) -> f64 {
    log2_abs_int(x.numer()) - log2_abs_int(x.denom())
}

/// Smallest e with `2^e >= x` for a positive rational (used for tail bounds).
pub fn ceil_log2_rat(x: &Rat) -> i64 {
    assert!(x.is_positive());
    let mut e = (log2_abs_int(x.numer()) - log2_abs_int(x.denom())).ceil() as i64;
    while pow2_rat(e - 1) >= *x {
        e -= 1;
    }
    while pow2_rat(e) < *x {
        e += 1;
    }
    e
}

pub fn pow2_rat(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << (e as u64))
    } else {
        Rat::new(BigInt::one(), BigInt::one() << ((-e) as u64))
    }
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        BigSign::Minus => -1,
        BigSign::NoSign => 0,
        BigSign::Plus => 1,
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}
