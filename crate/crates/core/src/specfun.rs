//! Gamma, digamma and the Gauss hypergeometric function ₂F₁ for real
//! arguments.
//!
//! The validated regime for `hyp2f1` is the one needed by the cardioid gain
//! integrals: `a = 1/2`, `b ∈ [-1, 0)`, `c = 1` and `z ≤ 1`. Other real
//! parameters go through the same code paths and are best-effort.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this |z| the defining power series is summed directly.
pub const Z_SWITCH: f64 = 0.9;

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 100_000;

/// Relative size of a term at which the series is considered converged.
pub const TAIL_TOL: f64 = 1e-16;

/// Distance from an integer below which `c - a - b` is treated as
/// "nearly integer" in the connection formula around `z = 1`.
const NEAR_INTEGER: f64 = 1e-3;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler's Gamma function for `x > 0`.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain("gamma", format!("argument must be positive and finite, got {x}")));
    }
    Ok(gamma_real(x))
}

/// Gamma on the whole real line, `NaN` at the poles.
pub(crate) fn gamma_real(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        // reflection
        return PI / ((PI * x).sin() * gamma_real(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// 1/Γ(x), which is entire: zero at the nonpositive integers.
pub(crate) fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        0.0
    } else {
        1.0 / gamma_real(x)
    }
}

/// Digamma ψ(x) for real `x` away from the poles.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.5 {
        return digamma(1.0 - x) - PI / (PI * x).tan();
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli tail: B2/2, B4/4, ... B12/12
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    shift + x.ln() - 0.5 / x - series
}

/// Parameters of ₂F₁(a, b; c; z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Params {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub z: f64,
}

impl Hyp2F1Params {
    pub fn new(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self { a, b, c, z }
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Gauss hypergeometric function ₂F₁(a, b; c; z) for real `z ≤ 1`.
///
/// Evaluation routes:
/// * terminating polynomial when `a` or `b` is a nonpositive integer;
/// * Pfaff transformation for `z < 0`, mapping into `(0, 1)`;
/// * the power series for `0 ≤ z ≤ Z_SWITCH`;
/// * the connection formula around `z = 1` above `Z_SWITCH`, with the
///   logarithmic form when `c - a - b` is an integer;
/// * Gauss's summation theorem at `z = 1` (needs `c - a - b > 0`).
pub fn hyp2f1(p: Hyp2F1Params) -> Result<f64> {
    let Hyp2F1Params { a, b, c, z } = p;
    if ![a, b, c, z].iter().all(|v| v.is_finite()) {
        return Err(Error::domain("hyp2f1", format!("non-finite parameter in {p:?}")));
    }
    if z > 1.0 {
        return Err(Error::domain("hyp2f1", format!("z = {z} > 1 is outside the real branch")));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::domain("hyp2f1", format!("c = {c} is a nonpositive integer")));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) {
        return Ok(terminating(-a as u64, b, c, z));
    }
    if is_nonpositive_integer(b) {
        return Ok(terminating(-b as u64, a, c, z));
    }
    if z < 0.0 {
        return pfaff(p);
    }
    if z <= Z_SWITCH {
        return series(a, b, c, z);
    }
    if z == 1.0 {
        return gauss_sum(a, b, c);
    }
    near_one(a, b, c, z)
}

/// Pfaff route for negative `z`. Of the two equivalent forms the one whose
/// transformed `c - a - b` is larger is used, which keeps the near-1 branch
/// on its convergent side.
fn pfaff(p: Hyp2F1Params) -> Result<f64> {
    if p.b > p.a {
        pfaff_keep_a(p)
    } else {
        pfaff_keep_b(p)
    }
}

/// (1 − z)^(−a) ₂F₁(a, c − b; c; z/(z − 1))
pub(crate) fn pfaff_keep_a(p: Hyp2F1Params) -> Result<f64> {
    let w = p.z / (p.z - 1.0);
    let inner = hyp2f1(Hyp2F1Params::new(p.a, p.c - p.b, p.c, w))?;
    Ok((1.0 - p.z).powf(-p.a) * inner)
}

/// (1 − z)^(−b) ₂F₁(c − a, b; c; z/(z − 1))
pub(crate) fn pfaff_keep_b(p: Hyp2F1Params) -> Result<f64> {
    let w = p.z / (p.z - 1.0);
    let inner = hyp2f1(Hyp2F1Params::new(p.c - p.a, p.b, p.c, w))?;
    Ok((1.0 - p.z).powf(-p.b) * inner)
}

/// Polynomial for ₂F₁(−n, b; c; z).
fn terminating(n: u64, b: f64, c: f64, z: f64) -> f64 {
    let a = -(n as f64);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
    }
    sum
}

/// Direct power series, valid for |z| < 1.
pub(crate) fn series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut small_run = 0;
    for n in 0..MAX_TERMS {
        let k = n as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        if term.abs() <= TAIL_TOL * sum.abs() {
            small_run += 1;
            if small_run == 2 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
        if term == 0.0 {
            return Ok(sum);
        }
    }
    Err(Error::numerical(
        "hyp2f1",
        format!(
            "series for (a={a}, b={b}, c={c}, z={z}) did not converge in {MAX_TERMS} terms; \
             partial sum {sum:e}, last term {term:e}"
        ),
    ))
}

fn gauss_sum(a: f64, b: f64, c: f64) -> Result<f64> {
    let m = c - a - b;
    if m <= 0.0 {
        return Err(Error::domain(
            "hyp2f1",
            format!("series diverges at z = 1 since c - a - b = {m} <= 0"),
        ));
    }
    Ok(gamma_real(c) * gamma_real(m) * rgamma(c - a) * rgamma(c - b))
}

fn near_one(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let m = c - a - b;
    let nearest = m.round();
    let dist = (m - nearest).abs();
    if dist == 0.0 {
        return integer_connection(a, b, c, z, nearest as i64);
    }
    if dist < NEAR_INTEGER {
        // The two terms of the generic formula cancel catastrophically
        // here. Interpolate in b through the exact integer case and generic
        // evaluations well away from it.
        let b_int = b + (m - nearest);
        let step = 2.0 * NEAR_INTEGER;
        let offsets = [-2.0 * step, -step, 0.0, step, 2.0 * step];
        let mut values = [0.0; 5];
        for (v, &off) in values.iter_mut().zip(&offsets) {
            *v = if off == 0.0 {
                integer_connection(a, b_int, c, z, nearest as i64)?
            } else {
                generic_connection(a, b_int + off, c, z)?
            };
        }
        let t = b - b_int;
        let mut total = 0.0;
        for (i, &xi) in offsets.iter().enumerate() {
            let mut basis = 1.0;
            for (k, &xk) in offsets.iter().enumerate() {
                if k != i {
                    basis *= (t - xk) / (xi - xk);
                }
            }
            total += basis * values[i];
        }
        return Ok(total);
    }
    generic_connection(a, b, c, z)
}

/// DLMF 15.8.4 for non-integer `c - a - b`.
fn generic_connection(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let m = c - a - b;
    let w = 1.0 - z;
    let gc = gamma_real(c);
    let first = gc * gamma_real(m) * rgamma(c - a) * rgamma(c - b);
    let second = gc * gamma_real(-m) * rgamma(a) * rgamma(b);
    let mut total = 0.0;
    if first != 0.0 {
        total += first * series(a, b, 1.0 - m, w)?;
    }
    if second != 0.0 {
        total += second * w.powf(m) * series(c - a, c - b, 1.0 + m, w)?;
    }
    Ok(total)
}

/// Connection formula when `c - a - b = m` is an integer (AS 15.3.10–12).
fn integer_connection(a: f64, b: f64, c: f64, z: f64, m: i64) -> Result<f64> {
    if m < 0 {
        // Euler: F(a,b;c;z) = (1-z)^(c-a-b) F(c-a, c-b; c; z)
        let inner = integer_connection(c - a, c - b, c, z, -m)?;
        return Ok((1.0 - z).powi(m as i32) * inner);
    }
    let m_usize = m as usize;
    let mf = m as f64;
    let w = 1.0 - z;
    let ln_w = w.ln();

    // finite part, present only for m >= 1
    let mut finite = 0.0;
    if m_usize >= 1 {
        let pref = gamma_real(mf) * gamma_real(a + b + mf) * rgamma(a + mf) * rgamma(b + mf);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 0..m_usize.saturating_sub(1) {
            let k = n as f64;
            term *= (a + k) * (b + k) / ((k + 1.0) * (1.0 - mf + k)) * w;
            sum += term;
        }
        finite = pref * sum;
    }

    // logarithmic series
    let pref = gamma_real(a + b + mf) * rgamma(a) * rgamma(b);
    if pref == 0.0 {
        return Ok(finite);
    }
    let mut coef = 1.0 / gamma_real(mf + 1.0); // (a+m)_0 (b+m)_0 / (0! m!)
    let mut sum = 0.0;
    let mut small_run = 0;
    let mut converged = false;
    for n in 0..MAX_TERMS {
        let k = n as f64;
        let bracket = ln_w - digamma(k + 1.0) - digamma(k + mf + 1.0)
            + digamma(a + k + mf)
            + digamma(b + k + mf);
        let term = coef * bracket;
        sum += term;
        if term.abs() <= TAIL_TOL * sum.abs() || coef == 0.0 {
            small_run += 1;
            if small_run == 2 {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        coef *= (a + mf + k) * (b + mf + k) / ((k + 1.0) * (k + mf + 1.0)) * w;
    }
    if !converged {
        return Err(Error::numerical(
            "hyp2f1",
            format!("logarithmic connection series for (a={a}, b={b}, c={c}, z={z}) did not converge"),
        ));
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    // -(z-1)^m = -(-1)^m w^m
    Ok(finite - sign * w.powi(m as i32) * pref * sum)
}
