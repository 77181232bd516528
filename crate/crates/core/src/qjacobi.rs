//! Little q-Jacobi denominators `Q_n` and Padé numerators `P_n` for the
//! Markov function `f(z) = ∫ dμ(x)/(z - x)`, `dμ = Σ_k q1^k δ_{q2^k}`.
//!
//! Both polynomials are available in two independent closed forms: the
//! monomial form and the `(q2 z; q2)_k` basis form. All arithmetic is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{log2_abs_rat, pow_rat, Rat};
use crate::qseries::{moment, q_pochhammer, QParams, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QJacobiError {
    #[error("divided difference needs distinct points, got z = x = {0}")]
    CoincidentPoints(String),
    #[error("index must be at least 1")]
    ZeroIndex,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    pub formula1_checked: bool,
    pub formula2_checked: bool,
}

/// `Q_n` (n+1 coefficients), `P_n` (n coefficients) and `κ_n`, ascending powers.
#[derive(Clone, Debug)]
pub struct PadePair {
    pub n: usize,
    pub q_coeffs: Vec<Rat>,
    pub p_coeffs: Vec<Rat>,
    pub kappa: Rat,
    pub provenance: Provenance,
}

impl PadePair {
    /// Builds both polynomials and cross-checks each against its second form
    /// at a handful of rational points.
    pub fn new(params: &QParams, n: usize) -> Self {
        let q_coeffs = build_q(params, n);
        let p_coeffs = build_p(params, n);
        let kappa = q_coeffs[n].clone();
        let pts = sample_points(params, n);
        let formula1_checked = pts
            .iter()
            .all(|z| horner(&q_coeffs, z) == eval_q_basistransformed(params, n, z));
        let formula2_checked = pts
            .iter()
            .all(|z| horner(&p_coeffs, z) == eval_p_basistransformed(params, n, z));
        PadePair {
            n,
            q_coeffs,
            p_coeffs,
            kappa,
            provenance: Provenance {
                formula1_checked,
                formula2_checked,
            },
        }
    }
}

fn sample_points(params: &QParams, n: usize) -> Vec<Rat> {
    let p2n = Rat::from_integer(crate::arith::pow_int(params.p2(), n as u64));
    vec![
        Rat::zero(),
        Rat::new(BigInt::from(1), BigInt::from(3)),
        Rat::from_integer(BigInt::from(-2)),
        p2n.clone(),
        -p2n,
    ]
}

pub fn horner(coeffs: &[Rat], z: &Rat) -> Rat {
    coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * z + c)
}

/// Coefficients of `Q_n`: `(p2^n;q2)_k (q1 q2^n;q2)_k / [(q1;q2)_k (q2;q2)_k] q2^k`.
pub fn build_q(params: &QParams, n: usize) -> Vec<Rat> {
    let q1 = params.q1();
    let q2 = params.q2();
    let one = Rat::one();
    let p2n = pow_rat(&params.p2_rat(), n as i64);
    let q1q2n = &q1 * pow_rat(&q2, n as i64);
    let mut out = Vec::with_capacity(n + 1);
    let mut c = Rat::one();
    let mut q2k = Rat::one();
    out.push(c.clone());
    for _ in 0..n {
        let num = (&one - &p2n * &q2k) * (&one - &q1q2n * &q2k);
        let den = (&one - &q1 * &q2k) * (&one - &q2k * &q2);
        c = c * num / den * &q2;
        q2k *= &q2;
        out.push(c.clone());
    }
    out
}

/// Coefficient `k` of `Q_n` written out with explicit q-Pochhammer products.
fn q_term(params: &QParams, n: usize, k: usize) -> Rat {
    let q1 = params.q1();
    let q2 = params.q2();
    let p2n = pow_rat(&params.p2_rat(), n as i64);
    q_pochhammer(&p2n, &q2, k) * q_pochhammer(&(&q1 * pow_rat(&q2, n as i64)), &q2, k)
        / (q_pochhammer(&q1, &q2, k) * q_pochhammer(&q2, &q2, k))
        * pow_rat(&q2, k as i64)
}

/// Coefficients of `P_n` from the double sum over `k, j` with denominators
/// `1 - q1 q2^(k-j-1)`.
pub fn build_p(params: &QParams, n: usize) -> Vec<Rat> {
    let q1 = params.q1();
    let q2 = params.q2();
    let mut p = vec![Rat::zero(); n];
    for k in 1..=n {
        let t = q_term(params, n, k);
        for (j, pj) in p.iter_mut().enumerate().take(k) {
            let den = Rat::one() - &q1 * pow_rat(&q2, (k - j - 1) as i64);
            *pj += &t / den;
        }
    }
    p
}

fn basis_prefactor(params: &QParams, n: usize) -> Rat {
    let p2n = pow_rat(&params.p2_rat(), n as i64);
    q_pochhammer(&p2n, &params.q2(), n) / q_pochhammer(&params.q1(), &params.q2(), n)
}

fn basis_weight(params: &QParams, n: usize, k: usize) -> Rat {
    let q1 = params.q1();
    let q2 = params.q2();
    let p2n = pow_rat(&params.p2_rat(), n as i64);
    let qq = q_pochhammer(&q2, &q2, k);
    q_pochhammer(&p2n, &q2, k) * q_pochhammer(&(&q1 * pow_rat(&q2, n as i64)), &q2, k) / (&qq * &qq)
        * pow_rat(&q2, k as i64)
}

/// `Q_n(z)` evaluated in the `(q2 z; q2)_k` basis.
pub fn eval_q_basistransformed(params: &QParams, n: usize, z: &Rat) -> Rat {
    let q2 = params.q2();
    let q2z = &q2 * z;
    let sum = (0..=n).fold(Rat::zero(), |acc, k| {
        acc + basis_weight(params, n, k) * q_pochhammer(&q2z, &q2, k)
    });
    basis_prefactor(params, n) * sum
}

/// `P_n(z)` evaluated in the second closed form (no negative powers of p2).
pub fn eval_p_basistransformed(params: &QParams, n: usize, z: &Rat) -> Rat {
    let q1 = params.q1();
    let q2 = params.q2();
    let mut sum = Rat::zero();
    for k in 1..=n {
        let mut inner = Rat::zero();
        for j in 1..=k {
            let a = &pow_rat(&q2, (j + 1) as i64) * z;
            inner += pow_rat(&q2, j as i64) * q_pochhammer(&a, &q2, k - j) * q_pochhammer(&q2, &q2, j - 1)
                / q_pochhammer(&q1, &q2, j);
        }
        sum += basis_weight(params, n, k) * inner;
    }
    -basis_prefactor(params, n) * sum
}

/// Checks `[(q2z;q2)_k - (q2x;q2)_k]/(z-x) = -Σ_{j=1}^k q2^j (q2^(j+1)z;q2)_(k-j) (q2x;q2)_(j-1)`.
pub fn check_divided_difference_identity(k: usize, z: &Rat, x: &Rat, params: &QParams) -> Result<bool, QJacobiError> {
    if k == 0 {
        return Err(QJacobiError::ZeroIndex);
    }
    if z == x {
        return Err(QJacobiError::CoincidentPoints(z.to_string()));
    }
    let q2 = params.q2();
    let lhs = (q_pochhammer(&(&q2 * z), &q2, k) - q_pochhammer(&(&q2 * x), &q2, k)) / (z - x);
    let mut rhs = Rat::zero();
    for j in 1..=k {
        rhs -= pow_rat(&q2, j as i64)
            * q_pochhammer(&(pow_rat(&q2, (j + 1) as i64) * z), &q2, k - j)
            * q_pochhammer(&(&q2 * x), &q2, j - 1);
    }
    Ok(lhs == rhs)
}

/// Checks `∫ (q2 x; q2)_(j-1) dμ = (q2;q2)_(j-1) / (q1;q2)_j` by truncating the
/// q-integral at L = 20, 40, 80 and requiring the exact gap to lie in
/// `(0, q1^(L+1)/(1-q1)]`, shrinking with L.
pub fn check_weighted_pochhammer_integral(params: &QParams, j: usize) -> Result<bool, QJacobiError> {
    if j == 0 {
        return Err(QJacobiError::ZeroIndex);
    }
    let q1 = params.q1();
    let q2 = params.q2();
    let rhs = q_pochhammer(&q2, &q2, j - 1) / q_pochhammer(&q1, &q2, j);
    let mut partial = Rat::zero();
    let mut q1i = Rat::one();
    let mut q2i = Rat::one();
    let mut last_gap: Option<Rat> = None;
    let mut ok = true;
    for i in 0..=80usize {
        q2i *= &q2;
        partial += &q1i * q_pochhammer(&q2i, &q2, j - 1);
        q1i *= &q1;
        if i == 20 || i == 40 || i == 80 {
            let gap = &rhs - &partial;
            let bound = &q1i / (Rat::one() - &q1);
            ok &= gap.is_positive() && gap <= bound;
            if let Some(prev) = &last_gap {
                ok &= &gap < prev;
            }
            last_gap = Some(gap);
        }
    }
    Ok(ok)
}

/// `Σ_k c_k μ_(m+k)` for `m = 0..n-1`; all zero iff `c` is orthogonal to `1..x^(n-1)`.
pub fn orthogonality_residuals(params: &QParams, q_coeffs: &[Rat]) -> Vec<Rat> {
    let n = q_coeffs.len().saturating_sub(1);
    (0..n)
        .map(|m| {
            q_coeffs
                .iter()
                .enumerate()
                .fold(Rat::zero(), |acc, (k, c)| acc + c * moment(params, m + k))
        })
        .collect()
}

pub fn check_orthogonality(params: &QParams, n: usize) -> bool {
    orthogonality_residuals(params, &build_q(params, n))
        .iter()
        .all(Zero::is_zero)
}

/// Padé order of `P/Q` at infinity, decided on the formal expansion
/// `f(z) = Σ μ_m z^(-m-1)`: the polynomial part of `Q f` must be `P` and the
/// coefficients of `z^-1 .. z^-n` in `Q f - P` must vanish.
pub fn pade_order_holds(params: &QParams, q: &[Rat], p: &[Rat]) -> bool {
    let n = q.len().saturating_sub(1);
    for i in 0..n.max(p.len()) {
        let mut coeff = Rat::zero();
        for (k, c) in q.iter().enumerate().skip(i + 1) {
            coeff += c * moment(params, k - 1 - i);
        }
        let pi = p.get(i).cloned().unwrap_or_else(Rat::zero);
        if coeff != pi {
            return false;
        }
    }
    for l in 1..=n {
        let mut coeff = Rat::zero();
        for (k, c) in q.iter().enumerate() {
            coeff += c * moment(params, k + l - 1);
        }
        if !coeff.is_zero() {
            return false;
        }
    }
    true
}

pub fn check_pade_order(params: &QParams, n: usize) -> bool {
    pade_order_holds(params, &build_q(params, n), &build_p(params, n))
}

/// `∫ Q_n² dμ = q1^n / (1 - q1 q2^(2n)) · [(q2;q2)_n / (q1;q2)_n]²`.
pub fn norm_squared(params: &QParams, n: usize) -> Rat {
    let q1 = params.q1();
    let q2 = params.q2();
    let r = q_pochhammer(&q2, &q2, n) / q_pochhammer(&q1, &q2, n);
    pow_rat(&q1, n as i64) / (Rat::one() - &q1 * pow_rat(&q2, 2 * n as i64)) * &r * &r
}

/// `κ_n = (p2^n;q2)_n (q1 q2^n;q2)_n / [(q1;q2)_n (q2;q2)_n] q2^n`.
pub fn kappa_closed_form(params: &QParams, n: usize) -> Rat {
    q_term(params, n, n)
}

/// `(p2^n;q2)_k (p1 p2^n;p2)_k / [(p1;p2)_k (p2;p2)_k]`.
fn integer_form_weight(params: &QParams, n: usize, k: usize) -> Rat {
    let p1 = params.p1();
    let p2 = params.p2_rat();
    let p2n = pow_rat(&p2, n as i64);
    q_pochhammer(&p2n, &params.q2(), k) * q_pochhammer(&(&p1 * &p2n), &p2, k)
        / (q_pochhammer(&p1, &p2, k) * q_pochhammer(&p2, &p2, k))
}

/// `(Q_n(∓p2^n), P_n(∓p2^n))` from the forms written in powers of `p1, p2`
/// (z = +p2^n for sign −, z = −p2^n for sign +).
pub fn eval_at_special_point(params: &QParams, n: usize, sign: Sign) -> (Rat, Rat) {
    let p1 = params.p1();
    let p2 = params.p2_rat();
    let q_sign = sign.pm(); // (±1)^k
    let p_sign = -sign.pm(); // (∓1)^j
    let mut q_val = Rat::zero();
    let mut p_val = Rat::zero();
    for k in 0..=n {
        let w = integer_form_weight(params, n, k);
        let ki = k as i64;
        let qs = if q_sign < 0 && k % 2 == 1 {
            -Rat::one()
        } else {
            Rat::one()
        };
        q_val += &w * pow_rat(&p2, (ki * ki - ki) / 2) * qs;
        let mut inner = Rat::zero();
        for j in 0..k {
            let ji = j as i64;
            let e = (ki * ki + ki) / 2 + (n as i64) * (ji - ki) - ji - 1;
            let den = &p1 * pow_rat(&p2, ki - ji - 1) - Rat::one();
            let term = &p1 * pow_rat(&p2, e) / den;
            if p_sign < 0 && j % 2 == 1 {
                inner -= term;
            } else {
                inner += term;
            }
        }
        if k % 2 == 1 {
            p_val -= w * inner;
        } else {
            p_val += w * inner;
        }
    }
    (q_val, p_val)
}

/// Sign of an integer polynomial (ascending coefficients) at `a/b`, `b > 0`.
fn sign_at(coeffs: &[BigInt], a: &BigInt, b: &BigInt) -> i32 {
    let deg = coeffs.len() - 1;
    let mut acc = BigInt::zero();
    let mut apow = BigInt::one();
    let mut bpows = vec![BigInt::one(); deg + 1];
    for i in 1..=deg {
        bpows[i] = &bpows[i - 1] * b;
    }
    for (i, c) in coeffs.iter().enumerate() {
        acc += c * &apow * &bpows[deg - i];
        apow *= a;
    }
    crate::arith::sign_of(&acc)
}

fn sign_at_rat(coeffs: &[BigInt], x: &Rat) -> i32 {
    sign_at(coeffs, x.numer(), x.denom())
}

/// Clears denominators of a rational coefficient vector.
pub fn primitive_integer_poly(coeffs: &[Rat]) -> Vec<BigInt> {
    let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    coeffs
        .iter()
        .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
        .collect()
}

/// Brackets `[lo, hi]` of width at most `2^-20` isolating the real roots of
/// the polynomial in `(0, 1)` by exact sign changes. Returns `None` unless
/// exactly `deg` roots are isolated there (so every real root lies in (0,1)).
pub fn isolate_unit_roots(coeffs: &[Rat], grid_ratio: &Rat) -> Option<Vec<(Rat, Rat)>> {
    let deg = coeffs.len().checked_sub(1)?;
    if deg == 0 {
        return Some(vec![]);
    }
    let ip = primitive_integer_poly(coeffs);
    if sign_at_rat(&ip, &Rat::zero()) == 0 || sign_at_rat(&ip, &Rat::one()) == 0 {
        return None;
    }
    let mut pts: Vec<Rat> = vec![Rat::zero(), Rat::one()];
    let mut g = Rat::one();
    for _ in 0..(deg + 6) {
        for j in 1..8 {
            pts.push(&g * Rat::new(BigInt::from(j), BigInt::from(8)));
        }
        g *= grid_ratio;
    }
    pts.retain(|x| !x.is_negative() && x <= &Rat::one());
    pts.sort();
    pts.dedup();

    let mut brackets = Vec::new();
    for _round in 0..16 {
        let signs: Vec<i32> = pts.iter().map(|x| sign_at_rat(&ip, x)).collect();
        brackets.clear();
        for i in 0..pts.len() - 1 {
            if signs[i] == 0 {
                brackets.push((pts[i].clone(), pts[i].clone()));
            } else if signs[i + 1] != 0 && signs[i] != signs[i + 1] {
                brackets.push((pts[i].clone(), pts[i + 1].clone()));
            }
        }
        if brackets.len() == deg {
            break;
        }
        let mut refined = Vec::with_capacity(2 * pts.len());
        for w in pts.windows(2) {
            refined.push(w[0].clone());
            refined.push((&w[0] + &w[1]) / Rat::from_integer(BigInt::from(2)));
        }
        refined.push(pts.last().unwrap().clone());
        pts = refined;
    }
    if brackets.len() != deg {
        return None;
    }
    let width = crate::arith::pow2_rat(-20);
    let two = Rat::from_integer(BigInt::from(2));
    for (lo, hi) in brackets.iter_mut() {
        let slo = sign_at_rat(&ip, lo);
        while &*hi - &*lo > width {
            let mid = (&*lo + &*hi) / &two;
            let sm = sign_at_rat(&ip, &mid);
            if sm == 0 {
                *lo = mid.clone();
                *hi = mid;
            } else if sm == slo {
                *lo = mid;
            } else {
                *hi = mid;
            }
        }
    }
    Some(brackets)
}

/// `log|Q̂_n(∓p2^n)| / (n² log p2)` with `Q̂_n = Q_n / κ_n` monic.
pub fn monic_special_exponent(params: &QParams, n: usize, sign: Sign) -> f64 {
    let (q, _) = eval_at_special_point(params, n, sign);
    let hat = q / kappa_closed_form(params, n);
    log2_abs_rat(&hat) / ((n * n) as f64 * crate::arith::log2_abs_int(params.p2()))
}
