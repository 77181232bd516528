//! Cyclotomic polynomials, the totient function, the product identities that
//! turn lcm's of `p^k ± 1` into cyclotomic products, and the factor sets
//! `M_n^±`, `𝓜_n`, `C_n^±` used to bound the special-case denominators.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("sigma = {0} is not prime")]
    NotPrime(u64),
    #[error("a = {a} and b = {b} must be coprime")]
    NotCoprime { a: u64, b: u64 },
    #[error("N = {0} is too small, need N >= 1000")]
    RangeTooSmall(u64),
    #[error("argument must be positive")]
    ZeroArgument,
}

/// Integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPolynomial::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn one() -> Self {
        IntPolynomial::new(vec![BigInt::one()])
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] = BigInt::one();
        IntPolynomial::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn mul(&self, o: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::new(vec![]);
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial::new(c)
    }

    /// Division by a monic polynomial: `(quotient, remainder)`.
    pub fn div_rem_monic(&self, d: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() < d.coeffs.len() {
            return (IntPolynomial::new(vec![]), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[i + j] -= &c * dj;
            }
            q[i] = c;
        }
        r.truncate(dd);
        (IntPolynomial::new(q), IntPolynomial::new(r))
    }

    /// `Some(self / d)` when `d` (monic) divides exactly.
    pub fn div_exact(&self, d: &IntPolynomial) -> Option<IntPolynomial> {
        let (q, r) = self.div_rem_monic(d);
        r.is_zero().then_some(q)
    }

    /// `p(x^r)`.
    pub fn compose_x_pow(&self, r: usize) -> IntPolynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); (self.coeffs.len() - 1) * r + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * r] = a.clone();
        }
        IntPolynomial::new(c)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

type PolyCache = RwLock<HashMap<u64, Arc<IntPolynomial>>>;

fn cache() -> &'static PolyCache {
    static CACHE: OnceLock<PolyCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `Φ_d`, from `x^d - 1 = Π_{e|d} Φ_e(x)` by exact division. Memoized.
pub fn cyclotomic_poly(d: u64) -> Arc<IntPolynomial> {
    assert!(d >= 1, "cyclotomic index must be positive");
    if let Some(p) = cache().read().unwrap().get(&d) {
        return p.clone();
    }
    let mut p = IntPolynomial::x_pow_minus_one(d as usize);
    for e in divisors(d) {
        if e < d {
            p = p
                .div_exact(&cyclotomic_poly(e))
                .expect("x^d - 1 is divisible by each Φ_e, e | d");
        }
    }
    let p = Arc::new(p);
    cache().write().unwrap().entry(d).or_insert(p).clone()
}

/// `Φ_d(x)` at an integer.
pub fn cyclotomic_value(d: u64, x: &BigInt) -> BigInt {
    cyclotomic_poly(d).eval(x)
}

pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn primes_dividing(n: u64) -> Vec<u64> {
    prime_factors(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == vec![(n, 1)]
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    assert!(n >= 1, "totient needs n >= 1");
    prime_factors(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// `a |_c b`: `a | b` and `a` carries the full power of every prime dividing both `b` and `c`.
pub fn divides_covering(a: u64, b: u64, c: u64) -> bool {
    if b % a != 0 {
        return false;
    }
    prime_factors(b)
        .into_iter()
        .filter(|(p, _)| c % p == 0)
        .all(|(p, e)| valuation(a, p) == e)
}

/// `r φ(n) = Σ_{d |_n r} φ(n d)`, checked literally and via the cofactor `g`
/// (the smallest divisor of r with r/g free of primes of n).
pub fn check_totient_tb1(n: u64, r: u64) -> bool {
    let lhs = r * totient(n);
    let literal: u64 = divisors(r)
        .into_iter()
        .filter(|&d| divides_covering(d, r, n))
        .map(|d| totient(n * d))
        .sum();
    let g = shared_part(r, n);
    let via_g: u64 = divisors(r / g).into_iter().map(|d| totient(n * d * g)).sum();
    lhs == literal && lhs == via_g
}

/// `r φ(σ n) = Σ_{d |_n r'} φ(σ^(τ+1) n d)` with `r = σ^τ r'`.
pub fn check_totient_tb2(n: u64, r: u64, sigma: u64) -> Result<bool, CycloError> {
    if !is_prime(sigma) {
        return Err(CycloError::NotPrime(sigma));
    }
    let tau = valuation(r, sigma);
    let r_prime = r / sigma.pow(tau);
    let base = sigma.pow(tau + 1) * n;
    let lhs = r * totient(sigma * n);
    let literal: u64 = divisors(r_prime)
        .into_iter()
        .filter(|&d| divides_covering(d, r_prime, n))
        .map(|d| totient(base * d))
        .sum();
    let g = shared_part(r_prime, n);
    let via_g: u64 = divisors(r_prime / g).into_iter().map(|d| totient(base * d * g)).sum();
    Ok(lhs == literal && lhs == via_g)
}

/// Part of `r` made of primes that also divide `n` (full powers).
fn shared_part(r: u64, n: u64) -> u64 {
    prime_factors(r)
        .into_iter()
        .filter(|(p, _)| n % p == 0)
        .map(|(p, e)| p.pow(e))
        .product()
}

/// Is `Π lhs == Π_{e ∈ rhs} Φ_e` as polynomials? Each left factor carries a
/// bound `m` with every root order dividing `m`; a cyclotomic factor `Φ_e` is
/// only tried against left factors with `e | m`. Both sides are monic, so
/// exact cancellation down to 1 on every left factor decides equality.
fn cyclotomic_product_equals(lhs: Vec<(IntPolynomial, u64)>, rhs: &[u64]) -> bool {
    let ldeg: usize = lhs.iter().map(|(p, _)| p.degree().unwrap_or(0)).sum();
    let rdeg: u64 = rhs.iter().map(|&e| totient(e)).sum();
    if ldeg as u64 != rdeg {
        return false;
    }
    let mut rest = lhs;
    for &e in rhs {
        let phi = cyclotomic_poly(e);
        let hit = rest.iter_mut().find_map(|(p, m)| {
            if *m % e != 0 {
                return None;
            }
            p.div_exact(&phi).map(|q| *p = q)
        });
        if hit.is_none() {
            return false;
        }
    }
    rest.iter().all(|(p, _)| p.is_one())
}

/// Index set `{d : d | r k for some 1 ≤ k ≤ n-1}`.
pub fn divisor_union(n: u64, r: u64) -> Vec<u64> {
    let mut s = BTreeSet::new();
    for k in 1..n {
        s.extend(divisors(r * k));
    }
    s.into_iter().collect()
}

/// Index set `{d : d | σ r k, d ∤ r k for some 1 ≤ k ≤ n-1}`.
pub fn new_divisor_union(n: u64, r: u64, sigma: u64) -> Vec<u64> {
    let mut s = BTreeSet::new();
    for k in 1..n {
        s.extend(divisors(sigma * r * k).into_iter().filter(|d| (r * k) % d != 0));
    }
    s.into_iter().collect()
}

/// `Π_{d=1}^{n-1} Φ_d(x^r) = Π_{d | rk, some 1≤k≤n-1} Φ_d(x)`.
pub fn check_lemma_a1(n: u64, r: u64) -> Result<bool, CycloError> {
    if n == 0 || r == 0 {
        return Err(CycloError::ZeroArgument);
    }
    let lhs = (1..n)
        .map(|d| (cyclotomic_poly(d).compose_x_pow(r as usize), d * r))
        .collect();
    Ok(cyclotomic_product_equals(lhs, &divisor_union(n, r)))
}

/// `Π_{d=1}^{n-1} Φ_{σd}(x^r) = Π_{d | σrk, d ∤ rk, some 1≤k≤n-1} Φ_d(x)`.
pub fn check_lemma_a2(n: u64, r: u64, sigma: u64) -> Result<bool, CycloError> {
    if n == 0 || r == 0 {
        return Err(CycloError::ZeroArgument);
    }
    if !is_prime(sigma) {
        return Err(CycloError::NotPrime(sigma));
    }
    let lhs = (1..n)
        .map(|d| (cyclotomic_poly(sigma * d).compose_x_pow(r as usize), sigma * d * r))
        .collect();
    Ok(cyclotomic_product_equals(lhs, &new_divisor_union(n, r, sigma)))
}

/// `x^n - 1 = Π_{d|n} Φ_d(x)` by full expansion.
pub fn check_x_pow_minus_one(n: u64) -> bool {
    let prod = divisors(n)
        .into_iter()
        .fold(IntPolynomial::one(), |acc, d| acc.mul(&cyclotomic_poly(d)));
    prod == IntPolynomial::x_pow_minus_one(n as usize)
}

/// Multiset of cyclotomic indices evaluated at `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicFactorSet {
    indices: Vec<u64>,
    base: BigInt,
}

impl CyclotomicFactorSet {
    pub fn new(mut indices: Vec<u64>, base: BigInt) -> Self {
        indices.sort_unstable();
        CyclotomicFactorSet { indices, base }
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }

    pub fn base(&self) -> &BigInt {
        &self.base
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn value(&self) -> BigInt {
        self.indices
            .iter()
            .fold(BigInt::one(), |acc, &d| acc * cyclotomic_value(d, &self.base))
    }

    fn counts(&self) -> HashMap<u64, usize> {
        let mut m = HashMap::new();
        for &d in &self.indices {
            *m.entry(d).or_insert(0) += 1;
        }
        m
    }

    pub fn is_submultiset_of(&self, o: &CyclotomicFactorSet) -> bool {
        let theirs = o.counts();
        self.counts()
            .iter()
            .all(|(d, c)| theirs.get(d).copied().unwrap_or(0) >= *c)
    }

    /// Multiset sum (product of the represented values).
    pub fn union(&self, o: &CyclotomicFactorSet) -> CyclotomicFactorSet {
        let mut v = self.indices.clone();
        v.extend_from_slice(&o.indices);
        CyclotomicFactorSet::new(v, self.base.clone())
    }

    /// Multiset difference, `None` unless `o` is a sub-multiset.
    pub fn difference(&self, o: &CyclotomicFactorSet) -> Option<CyclotomicFactorSet> {
        let mut left = self.counts();
        for &d in &o.indices {
            let c = left.get_mut(&d)?;
            if *c == 0 {
                return None;
            }
            *c -= 1;
        }
        let v = left.into_iter().flat_map(|(d, c)| std::iter::repeat_n(d, c)).collect();
        Some(CyclotomicFactorSet::new(v, self.base.clone()))
    }
}

/// `M_n^-` (indices `d | r2 k`) or `M_n^+` (indices `d | 2 r2 k`, `d ∤ r2 k`), `1 ≤ k ≤ n-1`.
pub fn common_multiple_m(n: u64, p: &BigInt, r2: u64, sign: crate::Sign) -> CyclotomicFactorSet {
    let idx = match sign {
        crate::Sign::Minus => divisor_union(n, r2),
        crate::Sign::Plus => new_divisor_union(n, r2, 2),
    };
    CyclotomicFactorSet::new(idx, p.clone())
}

/// `Π_{d=1}^{n-1} Φ_d(p^r2)` (sign −) or `Π_{d=1}^{n-1} Φ_{2d}(p^r2)` (sign +).
pub fn common_multiple_m_direct(n: u64, p: &BigInt, r2: u64, sign: crate::Sign) -> BigInt {
    let x = crate::arith::pow_int(p, r2);
    let f = match sign {
        crate::Sign::Minus => 1,
        crate::Sign::Plus => 2,
    };
    (1..n).fold(BigInt::one(), |acc, d| acc * cyclotomic_value(f * d, &x))
}

/// `(l, b_l)` for `1 ≤ l ≤ r2`, `gcd(l, r2) = 1`, `b_l ≡ r1 / l (mod r2)` in `1..=r2`.
pub fn calm_residues(r1: u64, r2: u64) -> Vec<(u64, u64)> {
    (1..=r2)
        .filter(|l| l.gcd(&r2) == 1)
        .map(|l| {
            let b = if r2 == 1 {
                1
            } else {
                let inv = mod_inverse(l % r2, r2);
                let b = (r1 % r2) * inv % r2;
                if b == 0 {
                    r2
                } else {
                    b
                }
            };
            (l, b)
        })
        .collect()
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let e = (a as i64).extended_gcd(&(m as i64));
    e.x.rem_euclid(m as i64) as u64
}

/// `⌊(n-1)/l - (l b_l - r1)/(l r2)⌋`, `None` when negative.
fn calm_bound(n: u64, r1: u64, r2: u64, l: u64, b: u64) -> Option<u64> {
    let num = ((n as i64) - 1) * r2 as i64 - (l * b) as i64 + r1 as i64;
    let j = Integer::div_floor(&num, &((l * r2) as i64));
    (j >= 0).then_some(j as u64)
}

/// `𝓜_n = Π_l Π_{j=0}^{bound_l} Φ_{j r2 + b_l}(p)`.
pub fn common_multiple_calm(n: u64, p: &BigInt, r1: u64, r2: u64) -> CyclotomicFactorSet {
    let mut idx = Vec::new();
    for (l, b) in calm_residues(r1, r2) {
        if let Some(top) = calm_bound(n, r1, r2, l, b) {
            idx.extend((0..=top).map(|j| j * r2 + b));
        }
    }
    CyclotomicFactorSet::new(idx, p.clone())
}

/// `{d : d | r2 k + r1 for some 0 ≤ k ≤ n-1}`, the defining index set of `𝓜_n`.
pub fn calm_direct_indices(n: u64, r1: u64, r2: u64) -> Vec<u64> {
    let mut s = BTreeSet::new();
    for k in 0..n {
        s.extend(divisors(r2 * k + r1));
    }
    s.into_iter().collect()
}

/// `C_n^-` or `C_n^+` (empty for sign + with even r2).
pub fn common_factor_c(n: u64, p: &BigInt, r1: u64, r2: u64, sign: crate::Sign) -> CyclotomicFactorSet {
    let mut idx = Vec::new();
    match sign {
        crate::Sign::Minus => {
            let top = ((n as i64 - 1) / r2 as i64) - 1;
            for (_, b) in calm_residues(r1, r2) {
                if top >= 0 {
                    idx.extend((0..=top as u64).map(|j| j * r2 + b));
                }
            }
        }
        crate::Sign::Plus if r2 % 2 == 1 => {
            let a = (2 * (n as i64 - 1)) / r2 as i64 - 1;
            for (l, b) in calm_residues(r1, r2) {
                let Some(c) = calm_bound(n, r1, r2, l, b) else { continue };
                let top = a.min(c as i64);
                if top >= 0 {
                    idx.extend((0..=top as u64).filter(|j| j % 2 == b % 2).map(|j| j * r2 + b));
                }
            }
        }
        crate::Sign::Plus => {}
    }
    CyclotomicFactorSet::new(idx, p.clone())
}

#[derive(Clone, Debug)]
pub struct CommonFactorReport {
    /// `(n, C | M, C | 𝓜)` for each n tested.
    pub rows: Vec<(u64, bool, bool)>,
    /// First n from which both divisibilities hold through the end of the range.
    pub threshold: Option<u64>,
}

/// Checks `C_n | M_n` and `C_n | 𝓜_n` as integers for `2 ≤ n ≤ n_max`.
pub fn common_factor_threshold(p: &BigInt, r1: u64, r2: u64, sign: crate::Sign, n_max: u64) -> CommonFactorReport {
    let rows: Vec<(u64, bool, bool)> = (2..=n_max)
        .map(|n| {
            let c = common_factor_c(n, p, r1, r2, sign).value();
            let m = common_multiple_m(n, p, r2, sign).value();
            let cm = common_multiple_calm(n, p, r1, r2).value();
            (n, m.is_multiple_of(&c), cm.is_multiple_of(&c))
        })
        .collect();
    let mut threshold = None;
    for &(n, a, b) in rows.iter().rev() {
        if a && b {
            threshold = Some(n);
        } else {
            break;
        }
    }
    CommonFactorReport { rows, threshold }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TotientVariant {
    /// `Σ φ(a j)`, limit `(3a/π²) Π_{ϖ|a} ϖ/(ϖ+1)`.
    Azonderb,
    /// `Σ φ(a j + b)`, limit `(3a/π²) Π_{ϖ|a} ϖ²/(ϖ²-1)`.
    Ametb,
    /// `Σ φ(2(a j + b))`, limit `(4a/π²) Π_{ϖ|a, ϖ≥3} ϖ²/(ϖ²-1)`.
    A2metb,
}

impl std::str::FromStr for TotientVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "azonderb" => Ok(TotientVariant::Azonderb),
            "ametb" => Ok(TotientVariant::Ametb),
            "a2metb" => Ok(TotientVariant::A2metb),
            _ => Err(format!("unknown variant '{s}', expected azonderb, ametb or a2metb")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TotientSumReport {
    pub empirical: f64,
    /// The limit is `theoretical_coeff / π²`.
    pub theoretical_coeff: Ratio<u64>,
    pub theoretical: f64,
    pub rel_error: f64,
}

fn totient_sieve(limit: usize) -> Vec<u32> {
    let mut phi: Vec<u32> = (0..=limit as u32).collect();
    for i in 2..=limit {
        if phi[i] == i as u32 {
            let mut j = i;
            while j <= limit {
                phi[j] -= phi[j] / i as u32;
                j += i;
            }
        }
    }
    if limit >= 1 {
        phi[0] = 0;
    }
    phi
}

/// `(1/N²) Σ_{j=0}^N φ(·)` against its closed-form limit.
pub fn totient_sum_check(a: u64, b: u64, variant: TotientVariant, big_n: u64) -> Result<TotientSumReport, CycloError> {
    if big_n < 1000 {
        return Err(CycloError::RangeTooSmall(big_n));
    }
    if a == 0 {
        return Err(CycloError::ZeroArgument);
    }
    if variant != TotientVariant::Azonderb && a.gcd(&b) != 1 {
        return Err(CycloError::NotCoprime { a, b });
    }
    let arg = |j: u64| match variant {
        TotientVariant::Azonderb => a * j,
        TotientVariant::Ametb => a * j + b,
        TotientVariant::A2metb => 2 * (a * j + b),
    };
    let phi = totient_sieve(arg(big_n) as usize);
    let sum: u64 = (0..=big_n).map(|j| phi[arg(j) as usize] as u64).sum();
    let empirical = sum as f64 / (big_n as f64 * big_n as f64);

    let primes = primes_dividing(a);
    let coeff = match variant {
        TotientVariant::Azonderb => primes
            .iter()
            .fold(Ratio::from_integer(3 * a), |acc, &w| acc * Ratio::new(w, w + 1)),
        TotientVariant::Ametb => primes
            .iter()
            .fold(Ratio::from_integer(3 * a), |acc, &w| acc * Ratio::new(w * w, w * w - 1)),
        TotientVariant::A2metb => primes
            .iter()
            .filter(|&&w| w >= 3)
            .fold(Ratio::from_integer(4 * a), |acc, &w| acc * Ratio::new(w * w, w * w - 1)),
    };
    let theoretical = (*coeff.numer() as f64 / *coeff.denom() as f64) / (std::f64::consts::PI.powi(2));
    Ok(TotientSumReport {
        empirical,
        theoretical_coeff: coeff,
        theoretical,
        rel_error: (empirical - theoretical).abs() / theoretical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Sign;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic_poly(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(*cyclotomic_poly(6), IntPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(*cyclotomic_poly(8), IntPolynomial::from_i64(&[1, 0, 0, 0, 1]));
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        // φ(12)/12 = (1/2)(2/3)
        let prod = primes_dividing(12)
            .into_iter()
            .fold(Ratio::from_integer(1u64), |acc, p| acc * Ratio::new(p - 1, p));
        assert_eq!(prod, Ratio::new(totient(12), 12));
    }

    #[test]
    fn lemma_examples() {
        assert!(check_lemma_a1(3, 2).unwrap());
        assert_eq!(divisor_union(3, 2), vec![1, 2, 4]);
        assert!(check_lemma_a1(2, 1).unwrap());
        assert!(check_lemma_a1(5, 3).unwrap());
        assert!(check_lemma_a2(2, 1, 2).unwrap());
        assert_eq!(new_divisor_union(2, 1, 2), vec![2]);
        assert!(check_lemma_a2(3, 1, 2).unwrap());
        assert!(check_lemma_a2(4, 2, 3).unwrap());
        assert_eq!(check_lemma_a2(3, 1, 4), Err(CycloError::NotPrime(4)));
    }

    #[test]
    fn m_examples() {
        let two = BigInt::from(2);
        let m = common_multiple_m(3, &two, 1, Sign::Minus);
        assert_eq!(m.indices(), &[1, 2]);
        assert_eq!(m.value(), BigInt::from(3));
        let m = common_multiple_m(3, &two, 1, Sign::Plus);
        assert_eq!(m.indices(), &[2, 4]);
        assert_eq!(m.value(), BigInt::from(15));
        assert_eq!(common_multiple_m(2, &two, 3, Sign::Minus).indices(), &[1, 3]);
    }

    #[test]
    fn calm_examples() {
        let two = BigInt::from(2);
        let m = common_multiple_calm(2, &two, 1, 1);
        assert_eq!(calm_residues(1, 1), vec![(1, 1)]);
        assert_eq!(m.indices(), &[1, 2]);
        assert_eq!(m.value(), BigInt::from(3));
        let v = common_multiple_calm(1, &two, 1, 2).value();
        assert!(v.is_multiple_of(&BigInt::from(1)));
        let v = common_multiple_calm(3, &two, 1, 2).value();
        for d in [1, 7, 31] {
            assert!(v.is_multiple_of(&BigInt::from(d)));
        }
    }

    #[test]
    fn c_examples() {
        let two = BigInt::from(2);
        assert!(common_factor_c(9, &two, 1, 2, Sign::Plus).is_empty());
        assert!(common_factor_c(2, &two, 1, 2, Sign::Minus).is_empty());
        assert_eq!(common_factor_c(2, &two, 1, 1, Sign::Minus).value(), BigInt::one());
        let c = common_factor_c(5, &two, 1, 1, Sign::Minus).value();
        assert!(common_multiple_m(5, &two, 1, Sign::Minus).value().is_multiple_of(&c));
        assert!(common_multiple_calm(5, &two, 1, 1).value().is_multiple_of(&c));
    }

    #[test]
    fn multiset_ops() {
        let b = BigInt::from(3);
        let a = CyclotomicFactorSet::new(vec![1, 2, 2, 5], b.clone());
        let c = CyclotomicFactorSet::new(vec![2, 5], b.clone());
        assert!(c.is_submultiset_of(&a));
        assert_eq!(a.difference(&c).unwrap().indices(), &[1, 2]);
        assert!(a.difference(&CyclotomicFactorSet::new(vec![7], b.clone())).is_none());
        assert_eq!(a.union(&c).value(), a.value() * c.value());
    }

    #[test]
    fn covering_divisibility() {
        // shared prime 2 of 12 and 10 must appear fully (2^2)
        assert!(divides_covering(4, 12, 10));
        assert!(divides_covering(12, 12, 10));
        assert!(!divides_covering(2, 12, 10));
        assert!(!divides_covering(3, 12, 10));
        assert!(divides_covering(12, 12, 6) && !divides_covering(4, 12, 6));
        assert!(divides_covering(3, 12, 5) && divides_covering(1, 12, 5));
    }

    #[test]
    fn totient_sum_rejects() {
        assert_eq!(
            totient_sum_check(2, 4, TotientVariant::Ametb, 1000).unwrap_err(),
            CycloError::NotCoprime { a: 2, b: 4 }
        );
        assert!(totient_sum_check(1, 0, TotientVariant::Azonderb, 999).is_err());
    }
}
