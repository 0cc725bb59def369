//! Special functions: Γ, B, ψ, Pochhammer symbols and hypergeometric series.

mod contiguous;
pub mod dd;
mod gamma;
mod hyp2f1;
mod series;

pub use contiguous::{contiguous_residual, Relation};
pub use gamma::{
    beta, digamma, digamma_q, gamma, gamma_q, gamma_ratio, gamma_shift_factor, ln_gamma,
    pochhammer, pochhammer_f64, rgamma,
};
pub use hyp2f1::{hyp2f1, hyp2f1_at1, hyp2f1_split};
pub use series::{pfq, pfq_with, PFQParams, ITERATION_CAP, LEVIN_ORDER_CAP};

use crate::error::{Error, Result};
use crate::numvalue::NumValue;
use crate::quad::{jacobi_quad_with, JacobiWeight, QuadMethod};
use crate::rational::{self, Q};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Double,
    Extended,
}

/// ₃F₂(a,b,c;d,e;t) through its Euler-type integral over ₂F₁(a,b;d;tx).
pub fn pfq_integral_3f2(a: &Q, b: &Q, c: &Q, d: &Q, e: &Q, t: f64, tol: f64) -> Result<NumValue> {
    let ec = e - c;
    if !c.is_positive() || !ec.is_positive() {
        return Err(Error::Precondition(format!(
            "integral representation needs 0 < c < e, got c={}, e={}",
            rational::fmt_q(c),
            rational::fmt_q(e)
        )));
    }
    if t == 0.0 {
        return Ok(NumValue::real(1.0, 0.0));
    }
    let w = JacobiWeight::new(rational::to_f64(c) - 1.0, rational::to_f64(&ec) - 1.0)?;
    let inner_tol = (tol * 1e-2).max(1e-15);
    let mut fail = None;
    let integral = jacobi_quad_with(
        |x, omx| match hyp2f1_split(a, b, d, t * x, (1.0 - t) + t * omx, inner_tol) {
            Ok(v) => v.re(),
            Err(e) => {
                fail.get_or_insert(e);
                f64::NAN
            }
        },
        w,
        tol,
        QuadMethod::DoubleExponential,
    );
    if let Some(e) = fail {
        return Err(e);
    }
    let pre = gamma_ratio(&[e.clone()], &[c.clone(), ec])?;
    Ok(pre * integral?)
}
