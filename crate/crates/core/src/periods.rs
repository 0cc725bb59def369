//! Periods of ω_n, η_n on the fibres and of ω_{m,n}, η_{m,n} on the surface.

use crate::connection::{gm_matrix_base, QMat2};
use crate::error::{Error, Result};
use crate::fibration::{eps_support, frac_params, hodge_position, index_set_position, FibrationParams};
use crate::numvalue::NumValue;
use crate::rational::{self, floor_i64, fmt_q, frac, q, qi, Q};
use crate::specialfn::{gamma_ratio, gamma_shift_factor, hyp2f1, ln_gamma, pfq_integral_3f2, pfq_with, PFQParams, Precision};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// ε = i for p = 2 and −1 for odd p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonSign {
    pub value: Complex64,
}

impl EpsilonSign {
    pub fn new(p: i64) -> EpsilonSign {
        let value = if p == 2 {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(-1.0, 0.0)
        };
        EpsilonSign { value }
    }

    /// ε^k, exact for integer k.
    pub fn pow(&self, k: i64) -> Complex64 {
        if self.value.im != 0.0 {
            match k.rem_euclid(4) {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            }
        } else if k.rem_euclid(2) == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Omega,
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cycle {
    Delta0,
    Delta1,
}

/// Exponents (i, j, k) of x^i(1−x)^j(t−x)^k dx / y^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormExponents {
    pub i: i64,
    pub j: i64,
    pub k: i64,
}

/// The holomorphic choice for ω_n; η_n raises j by one.
pub fn form_exponents(fp: &FibrationParams, n: i64, form: Form) -> Result<FormExponents> {
    fp.check_n(n)?;
    let p = fp.p();
    let i = floor_i64(&q(n * fp.a(), p));
    let j = floor_i64(&q(n * fp.b(), p));
    let k = floor_i64(&q(n * fp.c(), p));
    Ok(match form {
        Form::Omega => FormExponents { i, j, k },
        Form::Eta => FormExponents { i, j: j + 1, k },
    })
}

/// (α, β, γ) = (na/p − i, nb/p − j, nc/p − k).
pub fn lemma_params(fp: &FibrationParams, n: i64, e: FormExponents) -> Result<(Q, Q, Q)> {
    fp.check_n(n)?;
    let p = fp.p();
    Ok((
        q(n * fp.a(), p) - qi(e.i),
        q(n * fp.b(), p) - qi(e.j),
        q(n * fp.c(), p) - qi(e.k),
    ))
}

/// Phase of the δ₁ branch: ε^{−pγ} with γ = nc/p − k.
pub fn delta1_phase(fp: &FibrationParams, n: i64, e: FormExponents) -> Complex64 {
    let pg = n * fp.c() - fp.p() * e.k;
    EpsilonSign::new(fp.p()).pow(-pg)
}

/// ε^{pβ} for β = {nb/p}.
pub fn eps_p_beta(fp: &FibrationParams, n: i64) -> Complex64 {
    EpsilonSign::new(fp.p()).pow((n * fp.b()).rem_euclid(fp.p()))
}

pub fn zeta_p_pow(fp: &FibrationParams, n: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * n as f64 / fp.p() as f64)
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParams(format!("t = {t} must lie in (0, 1)")));
    }
    Ok(())
}

fn beta_q(x: &Q, y: &Q) -> Result<NumValue> {
    gamma_ratio(&[x.clone(), y.clone()], &[x + y])
}

fn pos(x: &Q, what: &str) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::Precondition(format!("{what} = {} must be positive", fmt_q(x))));
    }
    Ok(())
}

/// ∫_{δ₀} x^i(1−x)^j(t−x)^k dx/y^n.
pub fn one_period_delta0(fp: &FibrationParams, n: i64, e: FormExponents, t: f64, tol: f64) -> Result<NumValue> {
    check_t(t)?;
    let (al, be, ga) = lemma_params(fp, n, e)?;
    let one = Q::one();
    let (a1, g1) = (&one - &al, &one - &ga);
    pos(&a1, "1 − α")?;
    pos(&g1, "1 − γ")?;
    let b = beta_q(&a1, &g1)?;
    let f = hyp2f1(&a1, &be, &(&a1 + &g1), t, tol)?;
    let pw = t.powf(rational::to_f64(&(&a1 + &g1 - &one)));
    Ok((b * f).scale_re(pw))
}

/// ∫_{δ₁} x^i(1−x)^j(t−x)^k dx/y^n.
pub fn one_period_delta1(fp: &FibrationParams, n: i64, e: FormExponents, t: f64, tol: f64) -> Result<NumValue> {
    check_t(t)?;
    let (al, be, ga) = lemma_params(fp, n, e)?;
    let one = Q::one();
    let (b1, g1) = (&one - &be, &one - &ga);
    pos(&b1, "1 − β")?;
    pos(&g1, "1 − γ")?;
    let b = beta_q(&b1, &g1)?;
    let f = hyp2f1(&al, &b1, &(&b1 + &g1), 1.0 - t, tol)?;
    let pw = (1.0 - t).powf(rational::to_f64(&(&b1 + &g1 - &one)));
    Ok((b * f).scale_re(pw).scale(delta1_phase(fp, n, e)))
}

/// (∫_{δ₀} ω_n, ∫_{δ₁} ω_n) or the same for η_n.
pub fn form_periods(fp: &FibrationParams, n: i64, form: Form, t: f64, tol: f64) -> Result<[NumValue; 2]> {
    let e = form_exponents(fp, n, form)?;
    Ok([one_period_delta0(fp, n, e, t, tol)?, one_period_delta1(fp, n, e, t, tol)?])
}

/// (∫_{δ₀} η_n, ∫_{δ₁} η_n).
pub fn eta_periods(fp: &FibrationParams, n: i64, t: f64, tol: f64) -> Result<[NumValue; 2]> {
    form_periods(fp, n, Form::Eta, t, tol)
}

/// Rows κ₀, κ₁; columns ω_n, η_n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodMatrix {
    pub entries: [[NumValue; 2]; 2],
    pub t: f64,
}

impl PeriodMatrix {
    pub fn det(&self) -> NumValue {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }
}

pub fn period_matrix(fp: &FibrationParams, n: i64, t: f64, tol: f64) -> Result<PeriodMatrix> {
    let z = Complex64::new(1.0, 0.0) - zeta_p_pow(fp, n);
    let w = form_periods(fp, n, Form::Omega, t, tol)?;
    let h = form_periods(fp, n, Form::Eta, t, tol)?;
    Ok(PeriodMatrix {
        entries: [[w[0].scale(z), h[0].scale(z)], [w[1].scale(z), h[1].scale(z)]],
        t,
    })
}

/// ε^{pβ}(1−ζ_p^n)² B(β, 1−β)/(1−α).
pub fn det_limit(fp: &FibrationParams, n: i64) -> Result<NumValue> {
    let f = frac_params(fp, n, 0)?;
    let one = Q::one();
    let z = Complex64::new(1.0, 0.0) - zeta_p_pow(fp, n);
    let b = beta_q(&f.beta, &(&one - &f.beta))?;
    let c = eps_p_beta(fp, n) * z * z / rational::to_f64(&(&one - &f.alpha));
    Ok(b.scale(c))
}

/// Richardson extrapolation of det M_n(1 − 2^{−k}), k = 4..10, eliminating
/// h, h², h³, h⁴ with h = 2^{−k}.
pub fn det_limit_extrapolated(fp: &FibrationParams, n: i64, tol: f64) -> Result<NumValue> {
    const ORDER: usize = 4;
    let mut col: Vec<Complex64> = Vec::new();
    let mut err = 0.0f64;
    for k in 4..=10 {
        let d = period_matrix(fp, n, 1.0 - 2f64.powi(-k), tol)?.det();
        err = err.max(d.err);
        col.push(d.value);
    }
    let mut last_two = (col[col.len() - 2], col[col.len() - 1]);
    for j in 1..=ORDER {
        let f = 2f64.powi(j as i32) - 1.0;
        col = col.windows(2).map(|w| w[1] + (w[1] - w[0]) / f).collect();
        if col.len() >= 2 {
            last_two = (col[col.len() - 2], col[col.len() - 1]);
        }
    }
    let v = *col.last().expect("nonempty table");
    Ok(NumValue::new(v, (last_two.1 - last_two.0).norm() + err))
}

/// max |t M′ − M·A| / max |M·A| with a five-point difference, A the dt/t
/// matrix of the base connection.
pub fn ode_residual(fp: &FibrationParams, n: i64, t: f64, h: f64, tol: f64) -> Result<f64> {
    let f = frac_params(fp, n, 0)?;
    let a = gm_matrix_base(&f.alpha, &f.beta);
    let tq = rational_approx(t);
    let am: QMat2 = [
        [a.entries[0][0].eval(&tq).unwrap(), a.entries[0][1].eval(&tq).unwrap()],
        [a.entries[1][0].eval(&tq).unwrap(), a.entries[1][1].eval(&tq).unwrap()],
    ];
    let af = |i: usize, j: usize| rational::to_f64(&am[i][j]);
    let m = |x: f64| period_matrix(fp, n, x, tol);
    let t = rational::to_f64(&tq);
    let (m2, m1, p1, p2) = (m(t - 2.0 * h)?, m(t - h)?, m(t + h)?, m(t + 2.0 * h)?);
    let m0 = m(t)?;
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let e = |x: &PeriodMatrix| x.entries[i][j].value;
            let d = (-e(&p2) + 8.0 * e(&p1) - 8.0 * e(&m1) + e(&m2)) / (12.0 * h);
            let lhs = d * t;
            let rhs = m0.entries[i][0].value * af(0, j) + m0.entries[i][1].value * af(1, j);
            num = num.max((lhs - rhs).norm());
            den = den.max(rhs.norm());
        }
    }
    Ok(num / den)
}

/// Sample points are given in decimal; evaluate the exact matrix at the same rational.
fn rational_approx(t: f64) -> Q {
    let d = 1_000_000i64;
    q((t * d as f64).round() as i64, d)
}

/// (∫_{Δ₁} ω_{m,n}, ∫_{Δ₁} η_{m,n}) for μ = m/l > α − β.
pub fn two_period_delta1(fp: &FibrationParams, m: i64, n: i64) -> Result<[NumValue; 2]> {
    let f = frac_params(fp, n, m)?;
    if f.mu <= &f.alpha - &f.beta {
        return Err(Error::Precondition(format!(
            "Δ₁ period needs μ > α − β, got μ = {}, α − β = {}",
            fmt_q(&f.mu),
            fmt_q(&(&f.alpha - &f.beta))
        )));
    }
    let one = Q::one();
    let bb = beta_q(&f.beta, &f.mu)? * beta_q(&(&one - &f.beta), &f.shift())?;
    let w = bb.scale(-eps_p_beta(fp, n) / fp.l() as f64);
    let ratio = (&one - &f.beta) / (&one - &f.alpha + &f.mu);
    Ok([w, w.scale_re(rational::to_f64(&ratio))])
}

fn delta0_params(fp: &FibrationParams, m: i64, n: i64, form: Form) -> Result<(PFQParams, NumValue)> {
    let f = frac_params(fp, n, m)?;
    let x = f.shift();
    if !x.is_positive() {
        return Err(Error::Precondition(format!(
            "Δ₀ period needs β − α + μ > 0, got {}",
            fmt_q(&x)
        )));
    }
    let one = Q::one();
    let a1 = &one - &f.alpha;
    let b2 = match form {
        Form::Omega => f.beta.clone(),
        Form::Eta => &f.beta - &one,
    };
    let pre = beta_q(&a1, &f.beta)?.scale_re(1.0 / (fp.l() as f64 * rational::to_f64(&x)));
    let params = PFQParams::new(vec![a1.clone(), b2, x.clone()], vec![&a1 + &f.beta, &x + &one])?;
    Ok((params, pre))
}

/// ∫_{Δ₀} ω_{m,n} or η_{m,n} through the ₃F₂ at 1.
pub fn two_period_delta0_form(
    fp: &FibrationParams,
    m: i64,
    n: i64,
    form: Form,
    tol: f64,
    precision: Precision,
) -> Result<NumValue> {
    let (params, pre) = delta0_params(fp, m, n, form)?;
    Ok(pre * pfq_with(&params, 1.0, tol, precision)?)
}

/// (∫_{Δ₀} ω_{m,n}, ∫_{Δ₀} η_{m,n}).
pub fn two_period_delta0(fp: &FibrationParams, m: i64, n: i64, tol: f64, precision: Precision) -> Result<[NumValue; 2]> {
    Ok([
        two_period_delta0_form(fp, m, n, Form::Omega, tol, precision)?,
        two_period_delta0_form(fp, m, n, Form::Eta, tol, precision)?,
    ])
}

/// The ω value recomputed from the Euler integral of the ₃F₂; returns
/// (series value, integral value).
pub fn two_period_delta0_crosscheck(fp: &FibrationParams, m: i64, n: i64, tol: f64) -> Result<(NumValue, NumValue)> {
    let (params, pre) = delta0_params(fp, m, n, Form::Omega)?;
    let series = pre * pfq_with(&params, 1.0, tol, Precision::Extended)?;
    let (u, l) = (&params.upper, &params.lower);
    // c = β − α + μ, e = c + 1
    let integral = pre * pfq_integral_3f2(&u[0], &u[1], &u[2], &l[0], &l[1], 1.0, tol)?;
    Ok((series, integral))
}

/// Π_i Γ({hi/lp})^{ε(i)}, summed in log space.
pub fn per_gamma_product(fp: &FibrationParams, h: i64) -> Result<NumValue> {
    fp.check_h(h)?;
    let lp = fp.lp();
    let mut log = 0.0;
    let mut mag = 0.0;
    for (i, e) in eps_support(fp) {
        let x = frac(&q(h * i, lp));
        if x.is_zero() {
            return Err(Error::Internal(format!("ε supported on i = {i} with {{hi/lp}} = 0")));
        }
        let (lg, _) = ln_gamma(rational::to_f64(&x))?;
        log += e as f64 * lg;
        mag += (e as f64).abs() * (1.0 + lg.abs());
    }
    let v = log.exp();
    Ok(NumValue::real(v, v * 8.0 * mag * f64::EPSILON))
}

/// B(β, μ)·B(1−β, β−α+μ) with μ = {m/l}, Beta as a Γ-quotient.
pub fn per_bb_product(fp: &FibrationParams, h: i64) -> Result<NumValue> {
    let f = crate::fibration::char_frac_params(fp, h)?;
    let one = Q::one();
    Ok(beta_q(&f.beta, &f.mu)? * beta_q(&(&one - &f.beta), &f.shift())?)
}

/// Exact rational with Γ-product = factor · BB-product.
pub fn gamma_bb_shift(fp: &FibrationParams, h: i64) -> Result<Q> {
    let f = crate::fibration::char_frac_params(fp, h)?;
    let one = Q::one();
    let s = |x: &Q| gamma_shift_factor(x);
    Ok(s(&(&f.beta + &f.mu))? * s(&(&one - &f.alpha + &f.mu))? / s(&f.shift())?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrossDeligneRow {
    pub h: i64,
    pub m: i64,
    pub n: i64,
    pub hodge_from_eps: u8,
    pub hodge_from_sets: u8,
    pub gamma_product: NumValue,
    pub bb_product: NumValue,
    #[serde(with = "rational::serde_q")]
    pub shift: Q,
    /// |Γ-product/BB-product − shift| / |shift|
    pub shift_residual: f64,
    /// k with Γ-product / (shift · l·Ω) = exp(2πik/2lp), if found.
    pub root_of_unity: Option<i64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrossDeligneReport {
    pub params: FibrationParams,
    pub rows: Vec<GrossDeligneRow>,
    pub pass: bool,
}

pub const GROSS_DELIGNE_TOL: f64 = 1e-9;

/// Hodge sides and the period/Γ-product comparison for every unit h.
pub fn gross_deligne_check(fp: &FibrationParams) -> Result<GrossDeligneReport> {
    let mut rows = Vec::new();
    let order = 2 * fp.lp();
    for h in fp.units() {
        let (m, n) = fp.char_components(h)?;
        let hodge_from_eps = hodge_position(fp, h)?;
        let hodge_from_sets = index_set_position(fp, h)?;
        let gamma_product = per_gamma_product(fp, h)?;
        let bb_product = per_bb_product(fp, h)?;
        let shift = gamma_bb_shift(fp, h)?;
        let sf = rational::to_f64(&shift);
        let ratio = gamma_product / bb_product;
        let shift_residual = (ratio.value - sf).norm() / sf.abs();
        // l·Ω_{m,n} = −ε^{pβ}·BB
        let period = bb_product.scale(-eps_p_beta(fp, n));
        let z = (gamma_product / period).value / sf;
        let root_of_unity = (0..order).find(|k| {
            (z - Complex64::from_polar(1.0, 2.0 * PI * *k as f64 / order as f64)).norm() <= GROSS_DELIGNE_TOL
        });
        let pass = hodge_from_eps == hodge_from_sets
            && shift_residual <= GROSS_DELIGNE_TOL
            && root_of_unity.is_some();
        rows.push(GrossDeligneRow {
            h,
            m,
            n,
            hodge_from_eps,
            hodge_from_sets,
            gamma_product,
            bb_product,
            shift,
            shift_residual,
            root_of_unity,
            pass,
        });
    }
    Ok(GrossDeligneReport {
        params: *fp,
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}

/// Γ(x)Γ(1−x) = π/sin πx applied to the pair h, −h: the product of the two
/// Γ-products equals Π_i (π/sin(π{hi/lp}))^{ε(i)}.
pub fn reflection_product(fp: &FibrationParams, h: i64) -> Result<f64> {
    fp.check_h(h)?;
    let lp = fp.lp();
    let mut log = 0.0;
    for (i, e) in eps_support(fp) {
        let x = rational::to_f64(&frac(&q(h * i, lp)));
        log += e as f64 * (PI / (PI * x).sin()).ln();
    }
    Ok(log.exp())
}

#[cfg(test)]
mod tests;
