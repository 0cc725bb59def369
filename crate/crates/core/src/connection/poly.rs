//! Dense univariate polynomials and rational functions over ℚ.

use crate::error::{Error, Result};
use crate::rational::{fmt_q, qi, Q};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients low to high, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn constant(c: Q) -> Poly {
        Poly::new(vec![c])
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    /// c·t^k
    pub fn monomial(c: Q, k: usize) -> Poly {
        let mut v = vec![Q::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    /// 1 − t^k
    pub fn one_minus_pow(k: usize) -> Poly {
        Poly::one() - Poly::monomial(Q::one(), k)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with deg 0 = −1 by convention folded into None.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: num_complex::Complex64) -> num_complex::Complex64 {
        self.0
            .iter()
            .rev()
            .fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| acc * x + crate::rational::to_f64(c))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * qi(k as i64))
                .collect(),
        )
    }

    /// Quotient and remainder.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or_else(|| Error::Singular("polynomial division by zero".into()))?;
        let mut r = self.0.clone();
        let lead = d.lead();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut qv = vec![Q::zero(); r.len() - dd];
        for k in (0..qv.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            qv[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(qv), Poly::new(r)))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        self.scale(&(Q::one() / l))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn divides(&self, o: &Poly) -> bool {
        o.divrem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Multiplicity of t as a factor.
    pub fn t_valuation(&self) -> usize {
        self.0.iter().take_while(|c| c.is_zero()).count()
    }

    /// Drop a factor t^k (caller checks divisibility).
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.0[k.min(self.0.len())..].to_vec())
    }

    /// t^deg · p(1/t) for deg ≥ degree.
    pub fn reversed(&self, deg: usize) -> Poly {
        let mut v = vec![Q::zero(); deg + 1];
        for (k, c) in self.0.iter().enumerate() {
            v[deg - k] = c.clone();
        }
        Poly::new(v)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|k| {
                    self.0.get(k).cloned().unwrap_or_else(Q::zero) + o.0.get(k).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

/// Writes the polynomial in the variable `var`, highest degree first.
pub fn fmt_poly(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.0.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if k == 0 {
            out.push_str(&fmt_q(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", fmt_q(&a), mono));
        }
    }
    out
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_poly(self, "t"))
    }
}

/// num/den in lowest terms with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::Singular("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = num.gcd(&den);
        let (n, _) = num.divrem(&g)?;
        let (d, _) = den.divrem(&g)?;
        let l = d.lead();
        Ok(RatFunc {
            num: n.scale(&(Q::one() / &l)),
            den: d.monic(),
        })
    }

    pub fn zero() -> RatFunc {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn constant(c: Q) -> RatFunc {
        RatFunc {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::constant(Q::one())
    }

    pub fn poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }

    /// c·t^k for any integer k.
    pub fn monomial(c: Q, k: i64) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        if k >= 0 {
            RatFunc::poly(Poly::monomial(c, k as usize))
        } else {
            RatFunc {
                num: Poly::constant(c),
                den: Poly::monomial(Q::one(), (-k) as usize),
            }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// If the function is c·t^k, returns (c, k).
    pub fn as_monomial(&self) -> Option<(Q, i64)> {
        let single = |p: &Poly| {
            let nz: Vec<_> = p.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            (nz.len() == 1).then(|| (nz[0].1.clone(), nz[0].0 as i64))
        };
        if self.is_zero() {
            return None;
        }
        let (cn, kn) = single(&self.num)?;
        let (cd, kd) = single(&self.den)?;
        Some((cn / cd, kn - kd))
    }

    pub fn derivative(&self) -> RatFunc {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den).expect("nonzero denominator")
    }

    /// Value at a rational point, or None at a pole.
    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn eval_c(&self, x: num_complex::Complex64) -> num_complex::Complex64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn recip(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// f(1/s) as a function of s.
    pub fn invert_variable(&self) -> RatFunc {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let d = dn.max(dd);
        RatFunc::new(self.num.reversed(d), self.den.reversed(d)).expect("nonzero denominator")
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    pub fn fmt_var(&self, var: &str) -> String {
        let n = fmt_poly(&self.num, var);
        if self.den == Poly::one() {
            return n;
        }
        let wrap = |s: String, p: &Poly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(fmt_poly(&self.den, var), &self.den))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::new(n, &self.den * &o.den).expect("nonzero denominator")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero denominator")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|x| qi(*x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (t^2 − 1) = (t − 1)(t + 1)
        let (qq, r) = p(&[-1, 0, 1]).divrem(&p(&[-1, 1])).unwrap();
        assert_eq!(qq, p(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[2, 2])), p(&[1, 1]));
    }

    #[test]
    fn reduces_to_lowest_terms() {
        let f = RatFunc::new(p(&[-1, 0, 1]), p(&[-2, 2])).unwrap();
        assert_eq!(f, RatFunc::poly(Poly::new(vec![q(1, 2), q(1, 2)])));
        assert_eq!(f.to_string(), "1/2*t + 1/2");
    }

    #[test]
    fn derivative_of_quotient() {
        // d/dt 1/(1−t) = 1/(1−t)^2
        let f = RatFunc::new(Poly::one(), Poly::one_minus_pow(1)).unwrap();
        let g = RatFunc::new(Poly::one(), &Poly::one_minus_pow(1) * &Poly::one_minus_pow(1)).unwrap();
        assert_eq!(f.derivative(), g);
    }

    #[test]
    fn variable_inversion() {
        // 1/(1 − t^3) at t = 1/s is s^3/(s^3 − 1)
        let f = RatFunc::new(Poly::one(), Poly::one_minus_pow(3)).unwrap();
        let g = f.invert_variable();
        assert_eq!(g.to_string(), "t^3/(t^3 - 1)");
        assert_eq!(RatFunc::monomial(q(2, 3), -2).invert_variable(), RatFunc::monomial(q(2, 3), 2));
    }

    #[test]
    fn monomial_roundtrip() {
        assert_eq!(RatFunc::monomial(q(-3, 2), -4).as_monomial(), Some((q(-3, 2), -4)));
        assert_eq!(RatFunc::new(p(&[1, 1]), Poly::one()).unwrap().as_monomial(), None);
    }
}
