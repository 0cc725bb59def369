//! Generalized hypergeometric series pFq on [0, 1].

use super::dd::{Real, DD};
use super::Precision;
use crate::error::{Error, Result};
use crate::numvalue::NumValue;
use crate::rational::{self, Q};
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Hard cap on the number of series terms.
pub const ITERATION_CAP: usize = 1_000_000;
/// Highest Levin transform order tried at z = 1.
pub const LEVIN_ORDER_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PFQParams {
    #[serde(with = "crate::rational::serde_q_vec")]
    pub upper: Vec<Q>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub lower: Vec<Q>,
}

impl PFQParams {
    pub fn new(upper: Vec<Q>, lower: Vec<Q>) -> Result<Self> {
        if let Some(b) = lower.iter().find(|b| rational::is_nonpositive_integer(b)) {
            return Err(Error::InvalidParams(format!(
                "lower parameter {} is a nonpositive integer",
                rational::fmt_q(b)
            )));
        }
        Ok(PFQParams { upper, lower })
    }

    /// Convergence margin Σlower − Σupper.
    pub fn margin(&self) -> Q {
        let su: Q = self.upper.iter().sum();
        let sl: Q = self.lower.iter().sum();
        sl - su
    }

    /// Number of terms if some upper parameter is a nonpositive integer.
    fn terminating_len(&self) -> Option<usize> {
        self.upper
            .iter()
            .filter(|a| rational::is_nonpositive_integer(a))
            .map(|a| (-a).to_integer().to_usize().unwrap_or(usize::MAX) + 1)
            .min()
    }
}

struct Terms<R: Real> {
    upper: Vec<(f64, f64)>,
    lower: Vec<(f64, f64)>,
    z: R,
    k: usize,
    term: R,
}

impl<R: Real> Terms<R> {
    fn new(p: &PFQParams, z: f64) -> Self {
        let split = |x: &Q| (x.numer().to_f64().unwrap(), x.denom().to_f64().unwrap());
        Terms {
            upper: p.upper.iter().map(split).collect(),
            lower: p.lower.iter().map(split).collect(),
            z: R::from_f64(z),
            k: 0,
            term: R::from_f64(1.0),
        }
    }

    /// Current term t_k, then advance to t_{k+1}.
    fn next_term(&mut self) -> R {
        let t = self.term;
        let k = self.k as f64;
        let mut r = self.z / R::from_f64(k + 1.0);
        for &(n, d) in &self.upper {
            r = r * R::from_ratio(n + k * d, d);
        }
        for &(n, d) in &self.lower {
            r = r / R::from_ratio(n + k * d, d);
        }
        self.term = self.term * r;
        self.k += 1;
        t
    }

    fn ratio_bound(&self) -> f64 {
        // |t_{k+1}/t_k| at the current k
        let k = self.k as f64;
        let mut r = self.z.abs_f64() / (k + 1.0);
        for &(n, d) in &self.upper {
            r *= ((n + k * d) / d).abs();
        }
        for &(n, d) in &self.lower {
            r /= ((n + k * d) / d).abs();
        }
        r
    }
}

/// pFq(upper; lower; z) for z in [0, 1] in binary64.
pub fn pfq(params: &PFQParams, z: f64, tol: f64) -> Result<NumValue> {
    pfq_with(params, z, tol, Precision::Double)
}

pub fn pfq_with(params: &PFQParams, z: f64, tol: f64, precision: Precision) -> Result<NumValue> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::InvalidParams(format!("pfq argument {z} outside [0,1]")));
    }
    if let Some(b) = params.lower.iter().find(|b| rational::is_nonpositive_integer(b)) {
        return Err(Error::InvalidParams(format!(
            "lower parameter {} is a nonpositive integer",
            rational::fmt_q(b)
        )));
    }
    if z == 0.0 {
        return Ok(NumValue::real(1.0, 0.0));
    }
    if let Some(n) = params.terminating_len() {
        return match precision {
            Precision::Double => finite_sum::<f64>(params, z, n),
            Precision::Extended => finite_sum::<DD>(params, z, n),
        };
    }
    if z < 1.0 {
        return match precision {
            Precision::Double => direct::<f64>(params, z, tol),
            Precision::Extended => direct::<DD>(params, z, tol),
        };
    }
    let s = params.margin();
    if !s.is_positive() {
        return Err(Error::Divergence(format!(
            "pFq at 1 needs positive margin, got {}",
            rational::fmt_q(&s)
        )));
    }
    if params.upper.len() != params.lower.len() + 1 {
        return Err(Error::Unsupported(
            "evaluation at z = 1 requires p = q + 1".into(),
        ));
    }
    match precision {
        Precision::Double => levin_at_one::<f64>(params, tol),
        Precision::Extended => levin_at_one::<DD>(params, tol),
    }
}

fn finite_sum<R: Real>(params: &PFQParams, z: f64, n: usize) -> Result<NumValue> {
    let mut terms = Terms::<R>::new(params, z);
    let mut acc = DD::ZERO;
    let mut mag = 0.0;
    let width = (params.upper.len() + params.lower.len() + 2) as f64;
    for k in 0..n {
        let t = terms.next_term();
        acc = acc + DD::new(t.to_f64());
        mag += t.abs_f64() * (1.0 + k as f64 * width);
    }
    Ok(NumValue::real(acc.to_f64(), R::eps() * mag + f64::EPSILON * acc.to_f64().abs()))
}

fn direct<R: Real>(params: &PFQParams, z: f64, tol: f64) -> Result<NumValue> {
    let mut terms = Terms::<R>::new(params, z);
    let mut acc = DD::ZERO;
    let mut mag = 0.0;
    let width = (params.upper.len() + params.lower.len() + 2) as f64;
    // past this index the term ratio has settled near z
    let settle = params
        .upper
        .iter()
        .chain(params.lower.iter())
        .map(|x| rational::to_f64(&x.abs()))
        .fold(0.0, f64::max) as usize
        * 2
        + 2;
    for k in 0..ITERATION_CAP {
        let t = terms.next_term();
        acc = if R::eps() < f64::EPSILON {
            // keep the low word of double-double terms
            acc + DD::new(t.to_f64()) + DD::new((t - R::from_f64(t.to_f64())).to_f64())
        } else {
            acc + DD::new(t.to_f64())
        };
        mag += t.abs_f64() * (1.0 + k as f64 * width);
        if k >= settle {
            let rho = terms.ratio_bound().max(z);
            if rho < 1.0 {
                let tail = t.abs_f64() * rho / (1.0 - rho);
                let v = acc.to_f64();
                let round = R::eps() * mag + f64::EPSILON * v.abs();
                if tail <= 0.25 * tol * v.abs().max(f64::MIN_POSITIVE) || tail == 0.0 {
                    return Ok(NumValue::real(v, tail + round));
                }
            }
        }
    }
    Err(Error::NonConvergence(format!(
        "pFq series at z={z} did not reach tol {tol:e} within {ITERATION_CAP} terms"
    )))
}

/// Levin u-transform of the partial sums with n = 0, β = 1.
fn levin_u<R: Real>(sums: &[R], terms: &[R], k: usize) -> R {
    let mut num = R::from_f64(0.0);
    let mut den = R::from_f64(0.0);
    let kk = R::from_f64((k + 1) as f64);
    let mut binom = 1.0f64;
    for j in 0..=k {
        let w = R::from_f64((j + 1) as f64);
        let omega = w * terms[j];
        let c = (w / kk).powi(k.saturating_sub(1) as u32) * R::from_f64(binom);
        let c = if j % 2 == 0 { c } else { -c };
        num = num + c * sums[j] / omega;
        den = den + c / omega;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    num / den
}

fn levin_at_one<R: Real>(params: &PFQParams, tol: f64) -> Result<NumValue> {
    let mut gen = Terms::<R>::new(params, 1.0);
    let mut terms = Vec::with_capacity(LEVIN_ORDER_CAP + 1);
    let mut sums = Vec::with_capacity(LEVIN_ORDER_CAP + 1);
    let mut s = R::from_f64(0.0);
    for _ in 0..=LEVIN_ORDER_CAP {
        let t = gen.next_term();
        s = s + t;
        terms.push(t);
        sums.push(s);
    }
    let mut prev = levin_u(&sums, &terms, 1);
    let mut best: Option<(f64, f64)> = None;
    for k in 2..=LEVIN_ORDER_CAP {
        let cur = levin_u(&sums, &terms, k);
        let v = cur.to_f64();
        let err = 4.0 * (cur - prev).abs_f64() + (4.0 * R::eps()).max(8.0 * f64::EPSILON) * v.abs();
        if best.map_or(true, |(_, e)| err < e) {
            best = Some((v, err));
        }
        if err <= tol * v.abs() {
            return Ok(NumValue::real(v, err));
        }
        prev = cur;
    }
    let (v, e) = best.expect("at least one transform");
    Err(Error::NonConvergence(format!(
        "Levin transform reached {:.1e} (value {v}), tol {tol:.1e}",
        e / v.abs()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use std::f64::consts::PI;

    // mpmath, 40 digits
    const LEGENDRE_3F2: f64 = 1.120_161_039_749_660_941_8;

    fn p(u: &[Q], l: &[Q]) -> PFQParams {
        PFQParams::new(u.to_vec(), l.to_vec()).unwrap()
    }

    #[test]
    fn zero_argument_is_one() {
        let v = pfq(&p(&[q(1, 3), q(2, 5)], &[q(7, 4)]), 0.0, 1e-14).unwrap();
        assert_eq!(v.re(), 1.0);
    }

    #[test]
    fn gauss_value_at_one() {
        let v = pfq(&p(&[q(1, 2), q(1, 2)], &[q(2, 1)]), 1.0, 1e-10).unwrap();
        assert!((v.re() - 4.0 / PI).abs() < 1e-10, "{v}");
        assert!(v.err <= 1e-10 * v.re());
    }

    #[test]
    fn legendre_3f2_extended() {
        let par = p(&[q(1, 2), q(1, 2), q(1, 3)], &[q(1, 1), q(4, 3)]);
        let v = pfq_with(&par, 1.0, 1e-14, Precision::Extended).unwrap();
        assert!((v.re() - LEGENDRE_3F2).abs() < 4e-15, "{v}");
        assert!((v.re() - LEGENDRE_3F2).abs() <= v.err, "{v}");
        let d = pfq_with(&par, 1.0, 1e-9, Precision::Double).unwrap();
        assert!((d.re() - LEGENDRE_3F2).abs() < 1e-10, "{d}");
        assert!((d.re() - LEGENDRE_3F2).abs() <= d.err);
    }

    #[test]
    fn divergent_at_one() {
        let par = p(&[q(1, 2), q(1, 2)], &[q(1, 1)]);
        assert!(matches!(pfq(&par, 1.0, 1e-10), Err(Error::Divergence(_))));
    }

    #[test]
    fn lower_pole_rejected() {
        assert!(PFQParams::new(vec![q(1, 2)], vec![q(-1, 1)]).is_err());
    }

    #[test]
    fn terminating_series() {
        // 2F1(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
        let v = pfq(&p(&[q(-2, 1), q(1, 3)], &[q(1, 2)]), 0.5, 1e-14).unwrap();
        let b = 1.0 / 3.0;
        let c = 0.5;
        let e = 1.0 - 2.0 * b * 0.5 / c + b * (b + 1.0) * 0.25 / (c * (c + 1.0));
        assert!((v.re() - e).abs() < 1e-15);
    }

    #[test]
    fn regulator_family_value() {
        // (α, β, μ) = (1/3, 1/3, 1/5), mpmath
        let a = q(1, 3);
        let b = q(1, 3);
        let mu = q(1, 5);
        let one = q(1, 1);
        let par = p(
            &[&one - &a, b.clone(), &b - &a + &mu],
            &[&one - &a + &b, &b - &a + &mu + &one],
        );
        let v = pfq_with(&par, 1.0, 1e-14, Precision::Extended).unwrap();
        assert!((v.re() - 1.068_354_998_142_695_5).abs() < 1e-15, "{v}");
    }

    #[test]
    fn direct_series_near_one() {
        // mpmath hyp2f1(1/2,1/2,1,0.99)
        let v = pfq(&p(&[q(1, 2), q(1, 2)], &[q(1, 1)]), 0.99, 1e-13).unwrap();
        assert!((v.re() - 2.352_715_816_779_742_3).abs() < 1e-12, "{v}");
    }
}
