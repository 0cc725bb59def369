//! Double-double arithmetic (about 32 significant digits).

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> DD {
        DD { hi: x, lo: 0.0 }
    }

    /// num/den rounded to double-double.
    pub fn ratio(num: f64, den: f64) -> DD {
        DD::new(num) / DD::new(den)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> DD {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn powi(self, n: u32) -> DD {
        let mut r = DD::ONE;
        let mut b = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b;
            }
            b = b * b;
            e >>= 1;
        }
        r
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, o: DD) -> DD {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DD { hi, lo }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, o: DD) -> DD {
        self + (-o)
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, o: DD) -> DD {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, o: DD) -> DD {
        let q1 = self.hi / o.hi;
        let r = self - o * DD::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * DD::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DD { hi, lo } + DD::new(q3)
    }
}

/// Arithmetic needed by the series code, implemented for `f64` and `DD`.
pub trait Real:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn from_ratio(num: f64, den: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs_f64(self) -> f64 {
        self.to_f64().abs()
    }
    fn powi(self, n: u32) -> Self;
    /// Unit roundoff of the representation.
    fn eps() -> f64;
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_ratio(num: f64, den: f64) -> Self {
        num / den
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn powi(self, n: u32) -> Self {
        f64::powi(self, n as i32)
    }
    fn eps() -> f64 {
        f64::EPSILON
    }
}

impl Real for DD {
    fn from_f64(x: f64) -> Self {
        DD::new(x)
    }
    fn from_ratio(num: f64, den: f64) -> Self {
        DD::ratio(num, den)
    }
    fn to_f64(self) -> f64 {
        DD::to_f64(self)
    }
    fn powi(self, n: u32) -> Self {
        DD::powi(self, n)
    }
    fn eps() -> f64 {
        f64::EPSILON * f64::EPSILON
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_times_three() {
        let t = DD::ratio(1.0, 3.0);
        let one = t * DD::new(3.0);
        assert!((one - DD::ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn recovers_cancelled_digits() {
        let big = DD::new(1e16);
        let s = (big + DD::new(1.0)) - big;
        assert_eq!(s.to_f64(), 1.0);
    }

    #[test]
    fn powers() {
        let x = DD::ratio(7.0, 5.0);
        let p = x.powi(10);
        assert!((p.to_f64() - 1.4f64.powi(10)).abs() < 1e-12);
    }
}
