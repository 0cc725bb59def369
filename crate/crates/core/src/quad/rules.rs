//! Gauss–Jacobi and double-exponential rules on [0, 1] with weight x^a (1−x)^b.

use crate::error::{Error, Result};
use crate::numvalue::NumValue;
use crate::specialfn::ln_gamma;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

type Rule = Rc<(Vec<f64>, Vec<f64>)>;

thread_local! {
    static RULES: RefCell<HashMap<(usize, u64, u64), Rule>> = RefCell::new(HashMap::new());
}

fn cached_rule(n: usize, w: JacobiWeight) -> Result<Rule> {
    let key = (n, w.exponent_at_0.to_bits(), w.exponent_at_1.to_bits());
    if let Some(r) = RULES.with(|m| m.borrow().get(&key).cloned()) {
        return Ok(r);
    }
    let r = Rc::new(gauss_jacobi_rule(n, w.exponent_at_0, w.exponent_at_1)?);
    RULES.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() > 4096 {
            m.clear();
        }
        m.insert(key, r.clone());
    });
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobiWeight {
    pub exponent_at_0: f64,
    pub exponent_at_1: f64,
}

impl JacobiWeight {
    pub fn new(exponent_at_0: f64, exponent_at_1: f64) -> Result<Self> {
        if !(exponent_at_0 > -1.0 && exponent_at_1 > -1.0) {
            return Err(Error::InvalidParams(format!(
                "Jacobi exponents must exceed -1, got ({exponent_at_0}, {exponent_at_1})"
            )));
        }
        Ok(JacobiWeight {
            exponent_at_0,
            exponent_at_1,
        })
    }

    pub const UNIT: JacobiWeight = JacobiWeight {
        exponent_at_0: 0.0,
        exponent_at_1: 0.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadMethod {
    /// Gauss–Jacobi first, double-exponential if the doubling sequence stalls.
    Auto,
    GaussJacobi,
    DoubleExponential,
}

const GJ_MIN: usize = 16;
const GJ_MAX: usize = 512;
const DE_MAX_LEVEL: usize = 12;
const DE_UMAX: f64 = 9.0;

/// ∫₀¹ f(x) x^a (1−x)^b dx. The integrand receives both x and 1−x so
/// that it can stay accurate next to the right endpoint.
pub fn jacobi_quad<F: FnMut(f64) -> f64>(mut f: F, w: JacobiWeight, tol: f64) -> Result<NumValue> {
    jacobi_quad_with(|x, _| f(x), w, tol, QuadMethod::Auto)
}

pub fn jacobi_quad_with<F: FnMut(f64, f64) -> f64>(
    mut f: F,
    w: JacobiWeight,
    tol: f64,
    method: QuadMethod,
) -> Result<NumValue> {
    match method {
        QuadMethod::GaussJacobi => gauss_jacobi(&mut f, w, tol),
        QuadMethod::DoubleExponential => double_exponential(&mut f, w, tol),
        QuadMethod::Auto => match gauss_jacobi(&mut f, w, tol) {
            Ok(v) => Ok(v),
            Err(Error::NonConvergence(_)) => double_exponential(&mut f, w, tol),
            Err(e) => Err(e),
        },
    }
}

fn converged(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(f64::MIN_POSITIVE)
}

fn gauss_jacobi<F: FnMut(f64, f64) -> f64>(f: &mut F, w: JacobiWeight, tol: f64) -> Result<NumValue> {
    let mut prev: Option<f64> = None;
    let mut n = GJ_MIN;
    while n <= GJ_MAX {
        let rule = cached_rule(n, w)?;
        let (x, wt) = (&rule.0, &rule.1);
        let mut s = 0.0;
        let mut c = 0.0;
        for (xi, wi) in x.iter().zip(wt) {
            let v = f(*xi, 1.0 - *xi);
            if !v.is_finite() {
                return Err(Error::Quadrature(format!("integrand not finite at x={xi}")));
            }
            let y = wi * v - c;
            let t = s + y;
            c = (t - s) - y;
            s = t;
        }
        if let Some(p) = prev {
            if converged(p, s, tol) {
                let err = (p - s).abs() + 16.0 * f64::EPSILON * s.abs();
                return Ok(NumValue::real(s, err));
            }
        }
        prev = Some(s);
        n *= 2;
    }
    Err(Error::NonConvergence(format!(
        "Gauss–Jacobi rules up to {GJ_MAX} nodes disagree beyond {tol:e}"
    )))
}

/// Nodes and weights on [0, 1] for x^a (1−x)^b via Golub–Welsch.
pub fn gauss_jacobi_rule(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    // Jacobi (α, β) on [−1, 1] with (1−y)^α (1+y)^β; x = (1+y)/2
    let (al, be) = (b, a);
    let ab = al + be;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    diag[0] = (be - al) / (ab + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        diag[k] = (be * be - al * al) / (s * (s + 2.0));
    }
    for k in 0..n.saturating_sub(1) {
        let kf = k as f64 + 1.0;
        let s = 2.0 * kf + ab;
        // at k = 1 the factor (k+α+β)/(2k+α+β−1) is cancelled by hand
        let sq = if k == 0 {
            4.0 * kf * (kf + al) * (kf + be) / (s * s * (s + 1.0))
        } else {
            4.0 * kf * (kf + al) * (kf + be) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
        };
        off[k] = sq.sqrt();
    }
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tql_first_row(&mut diag, &mut off, &mut first)?;
    // μ₀ = 2^{α+β+1} B(α+1, β+1), then rescale to [0,1]: factor 2^{−(α+β+1)}
    let (lb1, _) = ln_gamma(al + 1.0)?;
    let (lb2, _) = ln_gamma(be + 1.0)?;
    let (lb3, _) = ln_gamma(ab + 2.0)?;
    let mu0 = (lb1 + lb2 - lb3).exp();
    let mut pairs: Vec<(f64, f64)> = diag
        .iter()
        .zip(&first)
        .map(|(y, v)| ((1.0 + y) * 0.5, mu0 * v * v))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(pairs.into_iter().unzip())
}

/// Implicit QL on a symmetric tridiagonal matrix, tracking only the first
/// component of each eigenvector.
fn tql_first_row(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NonConvergence("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn double_exponential<F: FnMut(f64, f64) -> f64>(f: &mut F, w: JacobiWeight, tol: f64) -> Result<NumValue> {
    let (a, b) = (w.exponent_at_0, w.exponent_at_1);
    let half_pi = std::f64::consts::FRAC_PI_2;
    // term at abscissa u, with weight handled in log space
    let mut term = |u: f64| -> Result<f64> {
        let v = half_pi * u.sinh();
        // x = 1/(1+e^{−2v}), 1−x = 1/(1+e^{2v})
        let (lnx, ln1mx) = if v >= 0.0 {
            let l = (-2.0 * v).exp().ln_1p();
            (-l, -2.0 * v - l)
        } else {
            let l = (2.0 * v).exp().ln_1p();
            (2.0 * v - l, -l)
        };
        let x = lnx.exp();
        let omx = ln1mx.exp();
        let lw = (a + 1.0) * lnx + (b + 1.0) * ln1mx + (std::f64::consts::PI * u.cosh()).ln();
        if lw < -745.0 {
            return Ok(0.0);
        }
        let fv = f(x, omx);
        if !fv.is_finite() {
            return Err(Error::Quadrature(format!("integrand not finite at x={x}")));
        }
        Ok(fv * lw.exp())
    };
    let mut h = 0.5;
    let mut sum = term(0.0)?;
    let mut k = 1;
    loop {
        let u = k as f64 * h;
        if u > DE_UMAX {
            break;
        }
        sum += term(u)? + term(-u)?;
        k += 1;
    }
    let mut est = sum * h;
    for _level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        let mut add = 0.0;
        loop {
            let u = k as f64 * h;
            if u > DE_UMAX {
                break;
            }
            add += term(u)? + term(-u)?;
            k += 2;
        }
        sum += add;
        let next = sum * h;
        if converged(est, next, tol) {
            let err = (est - next).abs() + 64.0 * f64::EPSILON * next.abs();
            return Ok(NumValue::real(next, err));
        }
        est = next;
    }
    Err(Error::NonConvergence(format!(
        "double-exponential rule did not reach {tol:e} after {DE_MAX_LEVEL} halvings"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_weight() {
        let v = jacobi_quad(|_| 1.0, JacobiWeight::UNIT, 1e-14).unwrap();
        assert!((v.re() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn beta_integrals_both_methods() {
        let cases = [(-0.5, -0.5, PI), (-2.0 / 3.0, -1.0 / 3.0, 2.0 * PI / 3f64.sqrt())];
        for (a, b, e) in cases {
            let w = JacobiWeight::new(a, b).unwrap();
            for m in [QuadMethod::GaussJacobi, QuadMethod::DoubleExponential] {
                let v = jacobi_quad_with(|_, _| 1.0, w, 1e-13, m).unwrap();
                assert!((v.re() - e).abs() < 1e-12 * e, "{m:?} {a} {b}: {v}");
            }
        }
    }

    #[test]
    fn smooth_integrand_gauss_jacobi() {
        // ∫ e^x x^{-1/2} dx over [0,1] = √π erf(1)
        let w = JacobiWeight::new(-0.5, 0.0).unwrap();
        let v = jacobi_quad_with(|x, _| x.exp(), w, 1e-14, QuadMethod::GaussJacobi).unwrap();
        let e = 2.925_303_491_814_363_2;
        assert!((v.re() - e).abs() < 1e-13, "{v}");
    }

    #[test]
    fn strong_endpoint_singularity_de() {
        // ∫ x^{-0.97} dx = 1/0.03
        let w = JacobiWeight::new(-0.97, 0.0).unwrap();
        let v = jacobi_quad_with(|_, _| 1.0, w, 1e-12, QuadMethod::DoubleExponential).unwrap();
        assert!((v.re() - 1.0 / 0.03).abs() < 1e-10 / 0.03, "{v}");
    }

    #[test]
    fn rejects_bad_weight() {
        assert!(JacobiWeight::new(-1.0, 0.0).is_err());
    }
}
