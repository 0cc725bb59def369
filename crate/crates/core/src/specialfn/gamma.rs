//! Gamma, Beta, digamma and Pochhammer symbols.

use crate::error::{Error, Result};
use crate::numvalue::NumValue;
use crate::rational::{self, Q};
use num_traits::{One, Signed};
use std::f64::consts::PI;

// Lanczos coefficients for g = 607/128, 15 terms (Godfrey).
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// Relative accuracy claimed for `gamma` on its core interval, in ulps.
const GAMMA_ULPS: f64 = 10.0;

fn lanczos_series(x: f64) -> f64 {
    let mut s = LANCZOS[0];
    for (j, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (x + j as f64);
    }
    s
}

fn gamma_core(x: f64) -> f64 {
    let t = x + LANCZOS_G + 0.5;
    SQRT_2PI * lanczos_series(x) / x * t.powf(x + 0.5) * (-t).exp()
}

fn ln_gamma_core(x: f64) -> f64 {
    let t = x + LANCZOS_G + 0.5;
    (x + 0.5) * t.ln() - t + (SQRT_2PI * lanczos_series(x) / x).ln()
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Γ(x) for real x; relative error about 10 ulp.
pub fn gamma(x: f64) -> Result<NumValue> {
    if is_pole(x) || x.is_nan() {
        return Err(Error::Pole {
            func: "gamma",
            at: format!("{x}"),
        });
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        let g = gamma(1.0 - x)?;
        let v = PI / (s * g.re());
        // sin(πx) loses relative accuracy near the poles
        let ds = f64::EPSILON * PI * x.abs().max(1.0) / s.abs();
        return Ok(NumValue::real(v, v.abs() * (g.rel_err() + ds + 2.0 * f64::EPSILON)));
    }
    if x > 20.0 {
        let v = gamma_core(x);
        return Ok(NumValue::real(v, v.abs() * (GAMMA_ULPS + x) * f64::EPSILON));
    }
    let mut y = x;
    let mut f = 1.0;
    let mut steps = 0.0;
    while y > 2.0 {
        y -= 1.0;
        f *= y;
        steps += 1.0;
    }
    while y < 1.0 {
        f /= y;
        y += 1.0;
        steps += 1.0;
    }
    let v = f * gamma_core(y);
    Ok(NumValue::real(v, v.abs() * (GAMMA_ULPS + steps) * f64::EPSILON))
}

/// ln|Γ(x)| together with the sign of Γ(x).
pub fn ln_gamma(x: f64) -> Result<(f64, f64)> {
    if is_pole(x) || x.is_nan() {
        return Err(Error::Pole {
            func: "ln_gamma",
            at: format!("{x}"),
        });
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        let (lg, sg) = ln_gamma(1.0 - x)?;
        return Ok((PI.ln() - s.abs().ln() - lg, s.signum() * sg));
    }
    if x <= 20.0 {
        let g = gamma(x)?.re();
        return Ok((g.ln(), 1.0));
    }
    Ok((ln_gamma_core(x), 1.0))
}

pub fn gamma_q(x: &Q) -> Result<NumValue> {
    if rational::is_nonpositive_integer(x) {
        return Err(Error::Pole {
            func: "gamma",
            at: rational::fmt_q(x),
        });
    }
    gamma(rational::to_f64(x))
}

/// ΠΓ(upper)/ΠΓ(lower), accumulated in log space.
pub fn gamma_ratio(upper: &[Q], lower: &[Q]) -> Result<NumValue> {
    let mut log = 0.0;
    let mut sign = 1.0;
    let mut terms = 0.0;
    for (list, s) in [(upper, 1.0), (lower, -1.0)] {
        for x in list {
            if rational::is_nonpositive_integer(x) {
                return Err(Error::Pole {
                    func: "gamma_ratio",
                    at: rational::fmt_q(x),
                });
            }
            let (lg, sg) = ln_gamma(rational::to_f64(x))?;
            log += s * lg;
            sign *= sg;
            terms += 1.0 + lg.abs();
        }
    }
    let v = sign * log.exp();
    Ok(NumValue::real(v, v.abs() * (GAMMA_ULPS + 4.0) * terms * f64::EPSILON))
}

/// B(x, y) = Γ(x)Γ(y)/Γ(x+y).
pub fn beta(x: &Q, y: &Q) -> Result<NumValue> {
    let s = x + y;
    if rational::is_nonpositive_integer(&s) && !rational::is_nonpositive_integer(x)
        && !rational::is_nonpositive_integer(y)
    {
        return Ok(NumValue::real(0.0, 0.0));
    }
    gamma_ratio(&[x.clone(), y.clone()], &[s])
}

/// Exact f with Γ(x) = f·Γ({x}).
pub fn gamma_shift_factor(x: &Q) -> Result<Q> {
    if rational::is_integer(x) {
        return Err(Error::InvalidParams(format!(
            "gamma_shift_factor needs a non-integer, got {}",
            rational::fmt_q(x)
        )));
    }
    let fl = x.floor();
    let mut f = Q::one();
    if fl.is_positive() {
        let mut y = x.clone();
        while y > Q::one() {
            y -= Q::one();
            f *= &y;
        }
    } else if fl.is_negative() {
        let mut y = x.clone();
        while y.is_negative() {
            f /= &y;
            y += Q::one();
        }
    }
    Ok(f)
}

/// (x)_n = x(x+1)…(x+n−1).
pub fn pochhammer(x: &Q, n: u32) -> Q {
    let mut r = Q::one();
    let mut y = x.clone();
    for _ in 0..n {
        r *= &y;
        y += Q::one();
    }
    r
}

pub fn pochhammer_f64(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (x + i as f64))
}

/// ψ(x), the logarithmic derivative of Γ.
pub fn digamma(x: f64) -> Result<NumValue> {
    if is_pole(x) || x.is_nan() {
        return Err(Error::Pole {
            func: "digamma",
            at: format!("{x}"),
        });
    }
    if x < 0.0 {
        // ψ(1−x) − ψ(x) = π cot(πx)
        let r = digamma(1.0 - x)?;
        let c = PI / (PI * x).tan();
        let dc = PI * PI * f64::EPSILON * x.abs().max(1.0) / (PI * x).sin().powi(2);
        let v = r.re() - c;
        return Ok(NumValue::real(v, r.err + dc + 4.0 * f64::EPSILON * v.abs()));
    }
    let mut y = x;
    let mut acc = 0.0;
    let mut acc_mag = 0.0;
    while y < 10.0 {
        acc -= 1.0 / y;
        acc_mag += 1.0 / y;
        y += 1.0;
    }
    // asymptotic expansion with Bernoulli numbers B2..B14
    let y2 = 1.0 / (y * y);
    let series = y2
        * (1.0 / 12.0
            - y2 * (1.0 / 120.0
                - y2 * (1.0 / 252.0
                    - y2 * (1.0 / 240.0 - y2 * (1.0 / 132.0 - y2 * (691.0 / 32760.0 - y2 / 12.0))))));
    let v = acc + y.ln() - 0.5 / y - series;
    let mag = acc_mag + y.ln().abs() + 1.0;
    Ok(NumValue::real(v, 16.0 * f64::EPSILON * mag))
}

pub fn digamma_q(x: &Q) -> Result<NumValue> {
    if rational::is_nonpositive_integer(x) {
        return Err(Error::Pole {
            func: "digamma",
            at: rational::fmt_q(x),
        });
    }
    digamma(rational::to_f64(x))
}

/// 1/Γ(x), zero at the poles.
pub fn rgamma(x: f64) -> Result<NumValue> {
    if is_pole(x) {
        return Ok(NumValue::real(0.0, 0.0));
    }
    Ok(gamma(x)?.recip())
}

pub(crate) fn check_not_pole(x: &Q, func: &'static str) -> Result<()> {
    if rational::is_nonpositive_integer(x) {
        Err(Error::Pole {
            func,
            at: rational::fmt_q(x),
        })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    const EULER: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn classical_values() {
        assert_eq!(gamma(1.0).unwrap().re(), 1.0);
        let h = gamma(0.5).unwrap();
        assert!((h.re() - PI.sqrt()).abs() <= 4.0 * f64::EPSILON * PI.sqrt());
        assert!((gamma(5.0).unwrap().re() - 24.0).abs() < 1e-13);
        // Γ(1/3) to 19 digits
        let g = gamma(1.0 / 3.0).unwrap();
        assert!((g.re() - 2.678_938_534_707_747_6).abs() < 1e-14);
        assert!(gamma(-1.0).is_err());
        assert!(gamma(0.0).is_err());
    }

    #[test]
    fn reflection_at_thirds() {
        let g = gamma(1.0 / 3.0).unwrap().re() * gamma(2.0 / 3.0).unwrap().re();
        assert!((g - PI / (PI / 3.0).sin()).abs() < 1e-14);
    }

    #[test]
    fn ratio_examples() {
        assert!((gamma_ratio(&[q(1, 1)], &[q(1, 1)]).unwrap().re() - 1.0).abs() < 1e-15);
        let r = gamma_ratio(&[q(2, 1), q(1, 1)], &[q(3, 2), q(3, 2)]).unwrap();
        assert!((r.re() - 4.0 / PI).abs() < 1e-14);
        let r = gamma_ratio(&[q(1, 3), q(2, 3)], &[q(1, 1)]).unwrap();
        assert!((r.re() - 2.0 * PI / 3f64.sqrt()).abs() < 1e-14);
        // negative arguments keep their sign
        let r = gamma_ratio(&[q(-1, 2)], &[]).unwrap();
        assert!((r.re() + 2.0 * PI.sqrt()).abs() < 1e-13);
        assert!(gamma_ratio(&[q(-2, 1)], &[]).is_err());
    }

    #[test]
    fn beta_examples() {
        assert!((beta(&q(1, 1), &q(1, 1)).unwrap().re() - 1.0).abs() < 1e-15);
        assert!((beta(&q(1, 2), &q(1, 2)).unwrap().re() - PI).abs() < 1e-14);
        assert!((beta(&q(2, 3), &q(1, 3)).unwrap().re() - 2.0 * PI / 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn shift_factor_examples() {
        assert_eq!(gamma_shift_factor(&q(1, 3)).unwrap(), q(1, 1));
        assert_eq!(gamma_shift_factor(&q(4, 3)).unwrap(), q(1, 3));
        assert_eq!(gamma_shift_factor(&q(-2, 3)).unwrap(), q(-3, 2));
        assert!(gamma_shift_factor(&q(2, 1)).is_err());
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&q(1, 2), 0), q(1, 1));
        assert_eq!(pochhammer(&q(1, 1), 5), q(120, 1));
        assert_eq!(pochhammer(&q(1, 3), 3), q(28, 27));
    }

    #[test]
    fn digamma_values() {
        let tol = 100.0 * f64::EPSILON;
        assert!((digamma(1.0).unwrap().re() + EULER).abs() < tol);
        assert!((digamma(0.5).unwrap().re() + EULER + 2.0 * 2f64.ln()).abs() < tol * 2.0);
        assert!((digamma(2.0).unwrap().re() - 1.0 + EULER).abs() < tol);
        // mpmath: digamma(-1/3)
        assert!((digamma(-1.0 / 3.0).unwrap().re() - 1.681_765_584_213_411_5).abs() < 1e-13);
        assert!(digamma(-3.0).is_err());
    }

    #[test]
    fn ln_gamma_large() {
        // ln Γ(50) = ln(49!)
        let (lg, s) = ln_gamma(50.0).unwrap();
        assert_eq!(s, 1.0);
        assert!((lg - 144.565_743_946_344_9).abs() < 1e-11);
    }
}
