//! Period integrals by direct quadrature of their Euler-type integrands.

use super::rules::{jacobi_quad_with, JacobiWeight, QuadMethod};
use crate::error::{Error, Result};
use crate::fibration::{frac_params, FibrationParams};
use crate::numvalue::NumValue;
use crate::periods::{delta1_phase, form_exponents, lemma_params, Cycle, Form, FormExponents};
use crate::rational::{self, Q};
use num_complex::Complex64;

struct Exps {
    al: f64,
    be: f64,
    ga: f64,
}

fn exps(fp: &FibrationParams, n: i64, e: FormExponents) -> Result<Exps> {
    let (a, b, g) = lemma_params(fp, n, e)?;
    let f = |x: &Q| rational::to_f64(x);
    let x = Exps {
        al: f(&a),
        be: f(&b),
        ga: f(&g),
    };
    Ok(x)
}

/// Runs a quadrature whose integrand may fail; the first failure wins.
fn quad_fallible<F: FnMut(f64, f64) -> Result<f64>>(
    mut f: F,
    w: JacobiWeight,
    tol: f64,
    method: QuadMethod,
) -> Result<NumValue> {
    let mut fail = None;
    let v = jacobi_quad_with(
        |x, y| match f(x, y) {
            Ok(v) => v,
            Err(e) => {
                fail.get_or_insert(e);
                f64::NAN
            }
        },
        w,
        tol,
        method,
    );
    match fail {
        Some(e) => Err(e),
        None => v,
    }
}

/// ∫₀¹ s^{−α}(1−s)^{−γ}(1 − ts)^{−β} ds, with 1 − t passed separately.
fn delta0_inner(x: &Exps, t: f64, omt: f64, tol: f64) -> Result<NumValue> {
    let w = JacobiWeight::new(-x.al, -x.ga)?;
    quad_fallible(
        |s, oms| {
            // 1 − ts = (1 − t) + t(1 − s)
            let v = if s > 0.5 { omt + t * oms } else { 1.0 - t * s };
            Ok(v.powf(-x.be))
        },
        w,
        tol,
        QuadMethod::Auto,
    )
}

/// ∫₀¹ s^{−γ}(1−s)^{−β}(t + (1−t)s)^{−α} ds.
fn delta1_inner(x: &Exps, t: f64, omt: f64, tol: f64) -> Result<NumValue> {
    let w = JacobiWeight::new(-x.ga, -x.be)?;
    quad_fallible(|s, _| Ok((t + omt * s).powf(-x.al)), w, tol, QuadMethod::Auto)
}

/// ∫_{δ_c} x^i(1−x)^j(t−x)^k dx/y^n from the integrands behind the Lemma,
/// without any hypergeometric evaluation.
pub fn oracle_one_period(
    fp: &FibrationParams,
    n: i64,
    e: FormExponents,
    cycle: Cycle,
    t: f64,
    tol: f64,
) -> Result<NumValue> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParams(format!("t = {t} must lie in (0, 1)")));
    }
    let x = exps(fp, n, e)?;
    match cycle {
        Cycle::Delta0 => {
            let v = delta0_inner(&x, t, 1.0 - t, tol)?;
            Ok(v.scale_re(t.powf(1.0 - x.al - x.ga)))
        }
        Cycle::Delta1 => {
            let v = delta1_inner(&x, t, 1.0 - t, tol)?;
            let pw = (1.0 - t).powf(1.0 - x.be - x.ga);
            Ok(v.scale_re(pw).scale(delta1_phase(fp, n, e)))
        }
    }
}

fn check_two_period(fp: &FibrationParams, m: i64, n: i64, cycle: Cycle) -> Result<()> {
    let f = frac_params(fp, n, m)?;
    let ok = match cycle {
        Cycle::Delta1 => f.mu > &f.alpha - &f.beta && f.mu > Q::from_integer(0.into()),
        Cycle::Delta0 => f.shift() > Q::from_integer(0.into()),
    };
    if !ok {
        return Err(Error::Precondition(format!(
            "{cycle:?} oracle outside its convergence range (m = {m}, n = {n})"
        )));
    }
    Ok(())
}

/// (1/l)∫₀¹ u^{μ−1} δ₀(u) du: inner Euler integral, outer double-exponential
/// rule for the logarithmic end at u = 1.
fn two_period_delta0(fp: &FibrationParams, m: i64, n: i64, form: Form, tol: f64) -> Result<NumValue> {
    let e = form_exponents(fp, n, form)?;
    let x = exps(fp, n, e)?;
    let mu = m as f64 / fp.l() as f64;
    let w = JacobiWeight::new(mu - 1.0 + 1.0 - x.al - x.ga, 0.0)?;
    let inner_tol = tol * 1e-2;
    let v = quad_fallible(|u, omu| Ok(delta0_inner(&x, u, omu, inner_tol)?.re()), w, tol, QuadMethod::DoubleExponential)?;
    Ok(v.scale_re(1.0 / fp.l() as f64))
}

/// Same integral in the original variable, ∫₀¹ t^{m−1} δ₀(t^l) dt.
pub fn oracle_two_period_direct(fp: &FibrationParams, m: i64, n: i64, form: Form, tol: f64) -> Result<NumValue> {
    check_two_period(fp, m, n, Cycle::Delta0)?;
    let e = form_exponents(fp, n, form)?;
    let x = exps(fp, n, e)?;
    let l = fp.l() as f64;
    let w = JacobiWeight::new(m as f64 - 1.0 + l * (1.0 - x.al - x.ga), 0.0)?;
    let inner_tol = tol * 1e-2;
    quad_fallible(
        |t, omt| {
            let u = t.powf(l);
            // 1 − t^l without cancellation near t = 1
            let omu = if t > 0.5 { -(l * (-omt).ln_1p()).exp_m1() } else { 1.0 - u };
            Ok(delta0_inner(&x, u, omu, inner_tol)?.re())
        },
        w,
        tol,
        QuadMethod::DoubleExponential,
    )
}

/// (1/l)∫₀¹ u^{μ−1}δ₁(u) du as a double integral over (u, s). The strip
/// s ≥ 1/2 is smooth in u; on s ≤ 1/2 the corner (u, s) = (0, 0) is split
/// into two triangles and blown up (Duffy), which leaves product weights.
fn two_period_delta1(fp: &FibrationParams, m: i64, n: i64, form: Form, tol: f64) -> Result<NumValue> {
    let e = form_exponents(fp, n, form)?;
    let x = exps(fp, n, e)?;
    let mu = m as f64 / fp.l() as f64;
    let ex = 1.0 - x.be - x.ga;
    let inner_tol = tol * 1e-2;
    let corner = mu - x.ga - x.al;
    let c = 2f64.powf(x.ga - 1.0);

    // s = (1 + σ)/2
    let upper = quad_fallible(
        |u, omu| {
            let inner = quad_fallible(
                |sg, _| {
                    let s = 0.5 * (1.0 + sg);
                    Ok(s.powf(-x.ga) * (u + omu * s).powf(-x.al))
                },
                JacobiWeight::new(0.0, -x.be)?,
                inner_tol,
                QuadMethod::Auto,
            )?;
            Ok(inner.re())
        },
        JacobiWeight::new(mu - 1.0, ex)?,
        tol,
        QuadMethod::Auto,
    )?
    .scale_re(2f64.powf(x.be - 1.0));

    // s = σ/2, u = σv
    let tri_a = quad_fallible(
        |sg, _| {
            let inner = quad_fallible(
                |v, _| {
                    let sv = sg * v;
                    Ok((1.0 - sv).powf(ex) * (1.0 - 0.5 * sg).powf(-x.be) * (v + 0.5 * (1.0 - sv)).powf(-x.al))
                },
                JacobiWeight::new(mu - 1.0, 0.0)?,
                inner_tol,
                QuadMethod::Auto,
            )?;
            Ok(inner.re())
        },
        JacobiWeight::new(corner, 0.0)?,
        tol,
        QuadMethod::Auto,
    )?
    .scale_re(c);

    // s = σ/2, σ = uw
    let tri_b = quad_fallible(
        |u, omu| {
            let inner = quad_fallible(
                |w, _| Ok((1.0 - 0.5 * u * w).powf(-x.be) * (1.0 + 0.5 * omu * w).powf(-x.al)),
                JacobiWeight::new(-x.ga, 0.0)?,
                inner_tol,
                QuadMethod::Auto,
            )?;
            Ok(inner.re())
        },
        JacobiWeight::new(corner, ex)?,
        tol,
        QuadMethod::Auto,
    )?
    .scale_re(c);

    let total = upper + tri_a + tri_b;
    let phase: Complex64 = delta1_phase(fp, n, e);
    Ok(total.scale(phase / fp.l() as f64))
}

/// ∫_{Δ_c} of ω_{m,n} or η_{m,n} by nested quadrature.
pub fn oracle_two_period_form(
    fp: &FibrationParams,
    m: i64,
    n: i64,
    cycle: Cycle,
    form: Form,
    tol: f64,
) -> Result<NumValue> {
    check_two_period(fp, m, n, cycle)?;
    match cycle {
        Cycle::Delta0 => two_period_delta0(fp, m, n, form, tol),
        Cycle::Delta1 => two_period_delta1(fp, m, n, form, tol),
    }
}

/// ∫_{Δ_c} ω_{m,n}.
pub fn oracle_two_period(fp: &FibrationParams, m: i64, n: i64, cycle: Cycle, tol: f64) -> Result<NumValue> {
    oracle_two_period_form(fp, m, n, cycle, Form::Omega, tol)
}
