//! Regulator values R_{m,n}, normalizing periods Ω_{m,n}, the real pairing
//! and the triviality criterion.

use crate::connection::Poly;
use crate::error::{Error, Result};
use crate::fibration::{frac_params, index_sets, FibrationParams};
use crate::numvalue::NumValue;
use crate::periods::{two_period_delta0_crosscheck, two_period_delta0_form, two_period_delta1, Form};
use crate::rational::{self, floor_i64, fmt_q, qi, Q};
use crate::specialfn::{gamma_ratio, pfq_with, PFQParams, Precision};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

/// Default tolerance for regulator evaluations.
pub const REGULATOR_TOL: f64 = 1e-13;
/// Allowed relative gap between the series and the integral evaluation.
pub const CROSSCHECK_TOL: f64 = 1e-8;
/// A pairing counts as nonzero when it exceeds this multiple of its error.
pub const NONVANISHING_FACTOR: f64 = 10.0;
pub const CF_DENOMINATOR_BOUND: i64 = 1_000_000;

fn totient(n: i64) -> usize {
    (1..=n).filter(|k| rational::gcd_i64(*k, n) == 1).count()
}

/// The n-th cyclotomic polynomial over ℚ.
pub fn cyclotomic(n: i64) -> Poly {
    let n = n as usize;
    let mut num = Poly::monomial(Q::one(), n) - Poly::one();
    for d in 1..n {
        if n % d == 0 {
            let (q, r) = num.divrem(&cyclotomic(d as i64)).expect("nonzero divisor");
            debug_assert!(r.is_zero());
            num = q;
        }
    }
    num
}

/// Element of ℚ(ζ_lp) in the power basis 1, ζ, …, ζ^{φ(lp)−1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloElem {
    pub order: i64,
    #[serde(with = "rational::serde_q_vec")]
    pub coeffs: Vec<Q>,
}

impl CycloElem {
    fn reduce(order: i64, p: Poly) -> CycloElem {
        let (_, r) = p.divrem(&cyclotomic(order)).expect("nonzero modulus");
        let deg = totient(order);
        let mut coeffs = r.coeffs().to_vec();
        coeffs.resize(deg, Q::zero());
        CycloElem { order, coeffs }
    }

    pub fn from_coeffs(order: i64, coeffs: Vec<Q>) -> Result<CycloElem> {
        if order < 1 {
            return Err(Error::InvalidParams(format!("cyclotomic order {order} must be positive")));
        }
        Ok(Self::reduce(order, Poly::new(coeffs)))
    }

    pub fn constant(order: i64, c: Q) -> CycloElem {
        Self::reduce(order, Poly::constant(c))
    }

    pub fn one(order: i64) -> CycloElem {
        Self::constant(order, Q::one())
    }

    /// ζ^k.
    pub fn zeta_pow(order: i64, k: i64) -> CycloElem {
        Self::reduce(order, Poly::monomial(Q::one(), k.rem_euclid(order) as usize))
    }

    pub fn zeta(order: i64) -> CycloElem {
        Self::zeta_pow(order, 1)
    }

    /// ζ_l = ζ_lp^p.
    pub fn zeta_l(fp: &FibrationParams) -> CycloElem {
        Self::zeta_pow(fp.lp(), fp.p())
    }

    /// ζ_p = ζ_lp^l.
    pub fn zeta_p(fp: &FibrationParams) -> CycloElem {
        Self::zeta_pow(fp.lp(), fp.l())
    }

    fn poly(&self) -> Poly {
        Poly::new(self.coeffs.clone())
    }

    /// Image under ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> CycloElem {
        let mut out = Poly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            out = out + Poly::monomial(c.clone(), (self.order - k as i64).rem_euclid(self.order) as usize);
        }
        Self::reduce(self.order, out)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Value at ζ = e^{2πik/order}.
    pub fn eval_at(&self, k: i64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let ang = 2.0 * PI * ((k * j as i64).rem_euclid(self.order)) as f64 / self.order as f64;
                Complex64::from_polar(rational::to_f64(c), ang)
            })
            .sum()
    }

    fn check_same(&self, o: &CycloElem) {
        assert_eq!(self.order, o.order, "cyclotomic elements of different orders");
    }
}

impl Add for CycloElem {
    type Output = CycloElem;
    fn add(self, o: CycloElem) -> CycloElem {
        self.check_same(&o);
        Self::reduce(self.order, self.poly() + o.poly())
    }
}

impl Sub for CycloElem {
    type Output = CycloElem;
    fn sub(self, o: CycloElem) -> CycloElem {
        self.check_same(&o);
        Self::reduce(self.order, self.poly() - o.poly())
    }
}

impl Mul for CycloElem {
    type Output = CycloElem;
    fn mul(self, o: CycloElem) -> CycloElem {
        self.check_same(&o);
        Self::reduce(self.order, self.poly() * o.poly())
    }
}

impl Neg for CycloElem {
    type Output = CycloElem;
    fn neg(self) -> CycloElem {
        Self::reduce(self.order, self.poly().scale(&-Q::one()))
    }
}

/// χ_{m,n}(x): ζ_l ↦ e^{2πim/l}, ζ_p ↦ e^{2πin/p}.
pub fn cyclo_eval(x: &CycloElem, fp: &FibrationParams, m: i64, n: i64) -> Result<NumValue> {
    if x.order != fp.lp() {
        return Err(Error::InvalidParams(format!(
            "element lives in ℚ(ζ_{}), expected ℚ(ζ_{})",
            x.order,
            fp.lp()
        )));
    }
    let h = fp.char_index(m, n)?;
    let v = x.eval_at(h);
    let mag: f64 = x.coeffs.iter().map(|c| rational::to_f64(c).abs()).sum();
    Ok(NumValue::new(v, 4.0 * f64::EPSILON * mag.max(v.norm())))
}

fn check_regulator(fp: &FibrationParams, m: i64, n: i64) -> Result<()> {
    let f = frac_params(fp, n, m)?;
    if !index_sets(fp, n)?.i1.contains(&m) {
        return Err(Error::Precondition(format!("m = {m} is not in I¹(n) for n = {n}")));
    }
    if f.mu <= &f.alpha - &f.beta {
        return Err(Error::Precondition(format!(
            "R_{{m,n}} needs μ > α − β, got μ = {}, α − β = {}",
            fmt_q(&f.mu),
            fmt_q(&(&f.alpha - &f.beta))
        )));
    }
    Ok(())
}

/// R_{m,n} from the accelerated ₃F₂ series, checked against its Euler integral.
pub fn regulator_value(fp: &FibrationParams, m: i64, n: i64) -> Result<NumValue> {
    regulator_value_with(fp, m, n, REGULATOR_TOL, Precision::Extended)
}

pub fn regulator_value_with(fp: &FibrationParams, m: i64, n: i64, tol: f64, precision: Precision) -> Result<NumValue> {
    check_regulator(fp, m, n)?;
    let v = two_period_delta0_form(fp, m, n, Form::Omega, tol, precision)?;
    let (_, integral) = two_period_delta0_crosscheck(fp, m, n, tol.max(1e-12))?;
    let gap = (v.value - integral.value).norm();
    if gap > CROSSCHECK_TOL * v.abs().max(1.0) {
        return Err(Error::NonConvergence(format!(
            "R_{{{m},{n}}}: series {} and integral {} differ by {gap:e}",
            v, integral
        )));
    }
    Ok(v)
}

/// Ω_{m,n}, the Δ₁ period of ω_{m,n}.
pub fn omega_cap(fp: &FibrationParams, m: i64, n: i64) -> Result<NumValue> {
    Ok(two_period_delta1(fp, m, n)?[0])
}

fn good_window(fp: &FibrationParams, n: i64) -> Result<(i64, i64)> {
    let f = frac_params(fp, n, 0)?;
    let l = qi(fp.l());
    let x = floor_i64(&(&f.alpha * &l));
    let y = floor_i64(&((Q::one() - &f.beta) * &l));
    Ok((x.min(y), x.max(y)))
}

pub fn is_good_m(fp: &FibrationParams, m: i64, n: i64) -> Result<bool> {
    let (lo, hi) = good_window(fp, n)?;
    Ok(lo < m && m <= hi)
}

/// Im χ_{m,n}(x)·(Ω_{m,n}⁻¹R_{m,n} − Ω_{m',n'}⁻¹R_{m',n'}) with
/// (m', n') = (l − m, p − n). Real for odd p.
pub fn rho_r_pairing(fp: &FibrationParams, m: i64, n: i64, x: &CycloElem) -> Result<NumValue> {
    if !is_good_m(fp, m, n)? {
        let (lo, hi) = good_window(fp, n)?;
        return Err(Error::Precondition(format!("m = {m} is outside the window ({lo}, {hi}] for n = {n}")));
    }
    let (m2, n2) = (fp.l() - m, fp.p() - n);
    let r1 = regulator_value(fp, m, n)? / omega_cap(fp, m, n)?;
    let r2 = regulator_value(fp, m2, n2)? / omega_cap(fp, m2, n2)?;
    let chi = cyclo_eval(x, fp, m, n)?;
    Ok((r1 - r2).scale_re(chi.im()) + NumValue::real(0.0, chi.err * (r1 - r2).abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    /// No m in the window meets the preconditions.
    NoWindow,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonvanishingRow {
    pub n: i64,
    pub m: Option<i64>,
    pub omega: Option<NumValue>,
    pub omega_dual: Option<NumValue>,
    pub regulator: Option<NumValue>,
    pub regulator_dual: Option<NumValue>,
    pub pairing: Option<NumValue>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonvanishingReport {
    pub params: FibrationParams,
    pub rows: Vec<NonvanishingRow>,
    pub pass: bool,
}

fn admissible(fp: &FibrationParams, m: i64, n: i64) -> bool {
    check_regulator(fp, m, n).is_ok() && two_period_delta1(fp, m, n).is_ok()
}

pub fn nonvanishing_check(fp: &FibrationParams) -> Result<NonvanishingReport> {
    if fp.p() >= fp.l() || fp.a() + fp.b() == fp.p() {
        return Err(Error::Precondition(format!(
            "non-vanishing needs p < l and a + b ≠ p, got {fp}"
        )));
    }
    let x = CycloElem::zeta(fp.lp());
    let mut rows = Vec::new();
    for n in fp.ns() {
        let (lo, hi) = good_window(fp, n)?;
        let n2 = fp.p() - n;
        let m = (lo + 1..=hi).find(|&m| admissible(fp, m, n) && admissible(fp, fp.l() - m, n2));
        let Some(m) = m else {
            rows.push(NonvanishingRow {
                n,
                m: None,
                omega: None,
                omega_dual: None,
                regulator: None,
                regulator_dual: None,
                pairing: None,
                verdict: Verdict::NoWindow,
            });
            continue;
        };
        let m2 = fp.l() - m;
        let omega = omega_cap(fp, m, n)?;
        let omega_dual = omega_cap(fp, m2, n2)?;
        let reg = regulator_value(fp, m, n)?;
        let reg_dual = regulator_value(fp, m2, n2)?;
        let pairing = rho_r_pairing(fp, m, n, &x)?;
        let signs = (omega * omega_dual).re() < 0.0 && reg.re() > 0.0 && reg_dual.re() > 0.0;
        let verdict = if !signs {
            Verdict::Fail
        } else if pairing.abs() > NONVANISHING_FACTOR * pairing.err {
            Verdict::Pass
        } else {
            Verdict::Inconclusive
        };
        rows.push(NonvanishingRow {
            n,
            m: Some(m),
            omega: Some(omega),
            omega_dual: Some(omega_dual),
            regulator: Some(reg),
            regulator_dual: Some(reg_dual),
            pairing: Some(pairing),
            verdict,
        });
    }
    let pass = rows.iter().any(|r| r.verdict == Verdict::Pass)
        && rows.iter().all(|r| matches!(r.verdict, Verdict::Pass | Verdict::NoWindow));
    Ok(NonvanishingReport {
        params: *fp,
        rows,
        pass,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioEntry {
    pub m: i64,
    pub n: i64,
    pub h: i64,
    pub ratio: NumValue,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReport {
    pub params: FibrationParams,
    pub ratios: Vec<RatioEntry>,
    /// Unknowns of the fit: φ(lp) rational coordinates of x.
    pub unknowns: usize,
    /// Real equations: two per ratio.
    pub equations: usize,
    /// ‖Ax − r‖/‖r‖ of the least-squares fit.
    pub relative_residual: f64,
    pub fitted_x: Vec<f64>,
    /// max |r_{l−m,p−n} − conj r_{m,n}| over pairs present in the list.
    pub conjugation_gap: Option<f64>,
}

pub fn criterion_ratios(fp: &FibrationParams) -> Result<CriterionReport> {
    if fp.a() + fp.b() != fp.p() {
        return Err(Error::Precondition(format!("criterion ratios need a + b = p, got {fp}")));
    }
    let mut ratios = Vec::new();
    for n in fp.ns() {
        for m in index_sets(fp, n)?.i1 {
            if !admissible(fp, m, n) {
                continue;
            }
            let ratio = regulator_value(fp, m, n)? / omega_cap(fp, m, n)?;
            let h = fp.char_index(m, n)?;
            ratios.push(RatioEntry { m, n, h, ratio });
        }
    }
    let lp = fp.lp();
    let unknowns = totient(lp);
    let rows = 2 * ratios.len();
    let mut a = DMatrix::<f64>::zeros(rows, unknowns);
    let mut r = DVector::<f64>::zeros(rows);
    for (i, e) in ratios.iter().enumerate() {
        for k in 0..unknowns {
            let z = Complex64::from_polar(1.0, 2.0 * PI * ((e.h * k as i64).rem_euclid(lp)) as f64 / lp as f64);
            a[(2 * i, k)] = z.re;
            a[(2 * i + 1, k)] = z.im;
        }
        r[2 * i] = e.ratio.re();
        r[2 * i + 1] = e.ratio.im();
    }
    let (fitted_x, relative_residual) = if rows == 0 {
        (vec![0.0; unknowns], 0.0)
    } else {
        let svd = a.clone().svd(true, true);
        let x = svd
            .solve(&r, 1e-12)
            .map_err(|e| Error::Internal(format!("least squares failed: {e}")))?;
        let res = (&a * &x - &r).norm() / r.norm().max(f64::MIN_POSITIVE);
        (x.iter().copied().collect(), res)
    };
    let mut gap: Option<f64> = None;
    for e in &ratios {
        let (m2, n2) = (fp.l() - e.m, fp.p() - e.n);
        if let Some(d) = ratios.iter().find(|d| d.m == m2 && d.n == n2) {
            let g = (d.ratio.value - e.ratio.value.conj()).norm();
            gap = Some(gap.map_or(g, |x| x.max(g)));
        }
    }
    Ok(CriterionReport {
        params: *fp,
        ratios,
        unknowns,
        equations: rows,
        relative_residual,
        fitted_x,
        conjugation_gap: gap,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalApprox {
    pub num: i64,
    pub den: i64,
    /// |V − num/den|·den².
    pub quality: f64,
}

/// Best continued-fraction convergent of `v` with denominator at most `bound`.
pub fn best_rational(v: f64, bound: i64) -> RationalApprox {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut x = v;
    let mut best = (v.round() as i64, 1i64);
    for _ in 0..64 {
        let a = x.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i64;
        let h2 = ai.checked_mul(h1).and_then(|y| y.checked_add(h0));
        let k2 = ai.checked_mul(k1).and_then(|y| y.checked_add(k0));
        let (Some(h2), Some(k2)) = (h2, k2) else { break };
        if k2 > bound {
            break;
        }
        best = (h2, k2);
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = x - a;
        if frac.abs() < 1e-300 {
            break;
        }
        x = 1.0 / frac;
    }
    let (num, den) = best;
    let quality = (v - num as f64 / den as f64).abs() * (den as f64) * (den as f64);
    RationalApprox { num, den, quality }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LegendreReport {
    /// √3·(Γ(5/6)/Γ(1/3))²·₃F₂(1/2,1/2,1/3;1,4/3;1).
    pub value: NumValue,
    pub hypergeometric: NumValue,
    /// V from |R_{1,1}/Ω_{1,1}| on (p, l, a, b) = (2, 3, 1, 1).
    pub from_regulator: NumValue,
    pub assembly_gap: f64,
    /// |V(extended) − V(double)|.
    pub precision_gap: f64,
    pub approx: RationalApprox,
    pub denominator_bound: i64,
}

fn legendre_value(precision: Precision) -> Result<(NumValue, NumValue)> {
    // double-precision Levin stalls near 1e-11 on this series
    let tol = match precision {
        Precision::Double => 1e-10,
        Precision::Extended => REGULATOR_TOL,
    };
    let h = |a: i64, b: i64| rational::q(a, b);
    let f = pfq_with(
        &PFQParams::new(vec![h(1, 2), h(1, 2), h(1, 3)], vec![h(1, 1), h(4, 3)])?,
        1.0,
        tol,
        precision,
    )?;
    let g = gamma_ratio(&[h(5, 6), h(5, 6)], &[h(1, 3), h(1, 3)])?;
    Ok((g.scale_re(3f64.sqrt()) * f, f))
}

pub fn legendre_probe() -> Result<LegendreReport> {
    let (value, hypergeometric) = legendre_value(Precision::Extended)?;
    let (coarse, _) = legendre_value(Precision::Double)?;
    let fp = FibrationParams::new(2, 3, 1, 1)?;
    let r = regulator_value(&fp, 1, 1)? / omega_cap(&fp, 1, 1)?;
    // B(1/2,1/3)² = πΓ(1/3)²/Γ(5/6)² leaves the factor 1/√3
    let from_regulator = NumValue::real(r.abs(), r.err).scale_re(1.0 / 3f64.sqrt());
    Ok(LegendreReport {
        value,
        hypergeometric,
        from_regulator,
        assembly_gap: (value.value - from_regulator.value).norm(),
        precision_gap: (value.value - coarse.value).norm(),
        approx: best_rational(value.re(), CF_DENOMINATOR_BOUND),
        denominator_bound: CF_DENOMINATOR_BOUND,
    })
}

#[cfg(test)]
mod tests;
