//! Complex values carrying an absolute error estimate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Relative rounding charged by every arithmetic combinator.
const ROUND: f64 = 2.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumValue {
    pub value: Complex64,
    pub err: f64,
}

impl NumValue {
    pub fn new(value: Complex64, err: f64) -> Self {
        debug_assert!(err.is_finite() && err >= 0.0, "bad error bound {err}");
        NumValue { value, err }
    }

    pub fn real(x: f64, err: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), err)
    }

    /// A value known to working precision.
    pub fn exact(x: f64) -> Self {
        Self::real(x, x.abs() * f64::EPSILON)
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::new(z, z.norm() * f64::EPSILON)
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    pub fn rel_err(&self) -> f64 {
        let a = self.abs();
        if a == 0.0 {
            f64::INFINITY
        } else {
            self.err / a
        }
    }

    pub fn conj(&self) -> Self {
        Self::new(self.value.conj(), self.err)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let v = self.value * c;
        Self::new(v, self.err * c.norm() + ROUND * v.norm())
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn recip(&self) -> Self {
        let v = self.value.inv();
        let n = self.value.norm();
        Self::new(v, self.err / (n * n) + ROUND * v.norm())
    }

    /// Real power of a positive real value.
    pub fn powf(&self, e: f64) -> Self {
        let x = self.re();
        let v = x.powf(e);
        let d = (e * x.powf(e - 1.0)).abs();
        Self::real(v, d * self.err + ROUND * 4.0 * v.abs())
    }

    /// True when the two values agree within their combined error plus `slack`.
    pub fn agrees(&self, other: &NumValue, slack: f64) -> bool {
        (self.value - other.value).norm() <= self.err + other.err + slack
    }

    pub fn is_finite(&self) -> bool {
        self.value.re.is_finite() && self.value.im.is_finite() && self.err.is_finite()
    }
}

impl Add for NumValue {
    type Output = NumValue;
    fn add(self, o: NumValue) -> NumValue {
        let v = self.value + o.value;
        NumValue::new(v, self.err + o.err + ROUND * v.norm())
    }
}

impl Sub for NumValue {
    type Output = NumValue;
    fn sub(self, o: NumValue) -> NumValue {
        let v = self.value - o.value;
        NumValue::new(v, self.err + o.err + ROUND * v.norm())
    }
}

impl Mul for NumValue {
    type Output = NumValue;
    fn mul(self, o: NumValue) -> NumValue {
        let v = self.value * o.value;
        let e = self.err * o.value.norm() + o.err * self.value.norm() + self.err * o.err;
        NumValue::new(v, e + ROUND * v.norm())
    }
}

impl Div for NumValue {
    type Output = NumValue;
    fn div(self, o: NumValue) -> NumValue {
        self * o.recip()
    }
}

impl Neg for NumValue {
    type Output = NumValue;
    fn neg(self) -> NumValue {
        NumValue::new(-self.value, self.err)
    }
}

impl fmt::Display for NumValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.im == 0.0 {
            write!(f, "{:.15e} ± {:.1e}", self.value.re, self.err)
        } else {
            write!(
                f,
                "({:.15e} {:+.15e}i) ± {:.1e}",
                self.value.re, self.value.im, self.err
            )
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    re: f64,
    im: f64,
    err: f64,
}

impl Serialize for NumValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            re: self.value.re,
            im: self.value.im,
            err: self.err,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NumValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        Ok(NumValue {
            value: Complex64::new(w.re, w.im),
            err: w.err,
        })
    }
}
