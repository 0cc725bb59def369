//! Gauss hypergeometric function on [0, 1), with the 1−t connection formulas.

use super::gamma::{check_not_pole, digamma, gamma_ratio, rgamma};
use super::series::{pfq, PFQParams, ITERATION_CAP};
use crate::error::{Error, Result};
use crate::numvalue::NumValue;
use crate::rational::{self, Q};
use num_traits::{One, Signed};

fn series(a: &Q, b: &Q, c: &Q, t: f64, tol: f64) -> Result<NumValue> {
    pfq(&PFQParams::new(vec![a.clone(), b.clone()], vec![c.clone()])?, t, tol)
}

/// ₂F₁(a, b; c; t) for t in [0, 1).
pub fn hyp2f1(a: &Q, b: &Q, c: &Q, t: f64, tol: f64) -> Result<NumValue> {
    hyp2f1_split(a, b, c, t, 1.0 - t, tol)
}

/// As `hyp2f1`, with 1 − t supplied by the caller so that arguments within
/// rounding of 1 keep their distance from the singular point.
pub fn hyp2f1_split(a: &Q, b: &Q, c: &Q, t: f64, one_minus_t: f64, tol: f64) -> Result<NumValue> {
    check_not_pole(c, "hyp2f1 lower parameter")?;
    if !(0.0..=1.0).contains(&t) || !(one_minus_t > 0.0) {
        return Err(Error::InvalidParams(format!("hyp2f1 argument {t} outside [0,1)")));
    }
    let terminating =
        rational::is_nonpositive_integer(a) || rational::is_nonpositive_integer(b);
    if t <= 0.5 || terminating {
        return series(a, b, c, t, tol);
    }
    let x = one_minus_t;
    let m = c - a - b;
    match rational::to_i64(&m) {
        None => generic_near_one(a, b, c, &m, x, tol),
        Some(mi) if mi < 0 => {
            // Euler: F(a,b;c;t) = (1−t)^{c−a−b} F(c−a, c−b; c; t)
            let f = log_case(&(c - a), &(c - b), (-mi) as u32, x, tol)?;
            let s = x.powi(mi as i32);
            Ok(f.scale_re(s))
        }
        Some(mi) => log_case(a, b, mi as u32, x, tol),
    }
}

/// c − a − b not an integer: the two-term connection formula.
fn generic_near_one(a: &Q, b: &Q, c: &Q, m: &Q, x: f64, tol: f64) -> Result<NumValue> {
    let one = Q::one();
    // A1 = Γ(c)Γ(m)/(Γ(c−a)Γ(c−b)), zero if c−a or c−b is a pole
    let ca = c - a;
    let cb = c - b;
    let a1 = if rational::is_nonpositive_integer(&ca) || rational::is_nonpositive_integer(&cb) {
        NumValue::real(0.0, 0.0)
    } else {
        gamma_ratio(&[c.clone(), m.clone()], &[ca.clone(), cb.clone()])?
    };
    let a2 = {
        let g = gamma_ratio(&[c.clone(), -m.clone()], &[])?;
        g * rgamma(rational::to_f64(a))? * rgamma(rational::to_f64(b))?
    };
    let inner_tol = tol * 0.25;
    let mut total = NumValue::real(0.0, 0.0);
    if a1.re() != 0.0 {
        let f1 = series(a, b, &(&one - m), x, inner_tol)?;
        total = total + a1 * f1;
    }
    if a2.re() != 0.0 {
        let f2 = series(&ca, &cb, &(m + &one), x, inner_tol)?;
        let xm = NumValue::exact(x.powf(rational::to_f64(m)));
        total = total + a2 * xm * f2;
    }
    Ok(total)
}

/// c = a + b + m with integer m ≥ 0: the logarithmic connection formula
/// in the variable x = 1 − t.
fn log_case(a: &Q, b: &Q, m: u32, x: f64, tol: f64) -> Result<NumValue> {
    let mq = Q::from_integer(m.into());
    let c = a + b + &mq;
    let af = rational::to_f64(a);
    let bf = rational::to_f64(b);
    let mf = m as f64;

    // finite part: Γ(m)Γ(c)/(Γ(a+m)Γ(b+m)) Σ_{n<m} (a)_n(b)_n/(n!(1−m)_n) x^n
    let mut finite = NumValue::real(0.0, 0.0);
    if m > 0 {
        let pre = gamma_ratio(&[mq.clone(), c.clone()], &[a + &mq, b + &mq])?;
        let mut term = 1.0;
        let mut acc = 0.0;
        let mut mag = 0.0;
        for n in 0..m {
            acc += term;
            mag += term.abs();
            let nf = n as f64;
            term *= (af + nf) * (bf + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * x;
        }
        finite = pre * NumValue::real(acc, 4.0 * f64::EPSILON * mag * (m as f64 + 1.0));
    }

    // log part: −(−x)^m Γ(c)/(Γ(a)Γ(b)) Σ_n (a+m)_n(b+m)_n/(n!(n+m)!) x^n [ln x − ψ(n+1) − ψ(n+m+1) + ψ(a+n+m) + ψ(b+n+m)]
    let pre = {
        let g = gamma_ratio(&[c.clone()], &[])?;
        let r = g * rgamma(af)? * rgamma(bf)?;
        let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
        r.scale_re(sign * x.powi(m as i32))
    };
    if pre.re() == 0.0 {
        return Ok(finite);
    }
    let lnx = x.ln();
    let mut psi1 = digamma(1.0)?;
    let mut psi2 = digamma(mf + 1.0)?;
    let mut psi3 = digamma(af + mf)?;
    let mut psi4 = digamma(bf + mf)?;
    let psi_err = psi1.err + psi2.err + psi3.err + psi4.err;
    let mut coef = 1.0 / (1..=m).map(|k| k as f64).product::<f64>();
    let mut acc = 0.0;
    let mut comp = 0.0;
    let mut mag = 0.0;
    let mut coef_mag = 0.0;
    for n in 0..ITERATION_CAP {
        let bracket = lnx - psi1.re() - psi2.re() + psi3.re() + psi4.re();
        let term = coef * bracket;
        // Neumaier summation
        let s = acc + term;
        comp += if acc.abs() >= term.abs() {
            (acc - s) + term
        } else {
            (term - s) + acc
        };
        acc = s;
        mag += term.abs() * (1.0 + n as f64);
        coef_mag += coef.abs();
        let nf = n as f64;
        let next = coef * (af + mf + nf) * (bf + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * x;
        // ψ(y+1) = ψ(y) + 1/y
        psi1 = NumValue::real(psi1.re() + 1.0 / (nf + 1.0), psi1.err);
        psi2 = NumValue::real(psi2.re() + 1.0 / (nf + mf + 1.0), psi2.err);
        psi3 = NumValue::real(psi3.re() + 1.0 / (af + mf + nf), psi3.err);
        psi4 = NumValue::real(psi4.re() + 1.0 / (bf + mf + nf), psi4.err);
        if n > 2 && next.abs() <= coef.abs() {
            // ratios settle below x; brackets grow like ln n
            let rho = (next / coef).abs().max(x);
            let br = (lnx.abs() + psi1.re().abs() + psi2.re().abs() + psi3.re().abs() + psi4.re().abs()) * 2.0;
            let tail = next.abs() * br / (1.0 - rho);
            let v = acc + comp;
            if tail <= 0.25 * tol * v.abs().max(f64::MIN_POSITIVE) || tail == 0.0 {
                let err = tail + 4.0 * f64::EPSILON * mag + psi_err * coef_mag * (1.0 + n as f64);
                let sum = NumValue::real(v, err);
                return Ok(finite + pre * sum);
            }
        }
        coef = next;
    }
    Err(Error::NonConvergence(format!(
        "log-case series at x={x} (m={m}) exceeded {ITERATION_CAP} terms"
    )))
}

/// Gauss's formula F(a,b;c;1) = Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b)).
pub fn hyp2f1_at1(a: &Q, b: &Q, c: &Q) -> Result<NumValue> {
    let s = c - a - b;
    if !s.is_positive() {
        return Err(Error::Divergence(format!(
            "F(a,b;c;1) needs c−a−b > 0, got {}",
            rational::fmt_q(&s)
        )));
    }
    check_not_pole(c, "hyp2f1_at1 lower parameter")?;
    let ca = c - a;
    let cb = c - b;
    if rational::is_nonpositive_integer(&ca) || rational::is_nonpositive_integer(&cb) {
        return Ok(NumValue::real(0.0, 0.0));
    }
    gamma_ratio(&[c.clone(), s], &[ca, cb])
}
