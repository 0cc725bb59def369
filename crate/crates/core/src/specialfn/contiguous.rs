//! Contiguous relations of ₂F₁ used for the connection matrices.

use super::hyp2f1::hyp2f1;
use crate::error::Result;
use crate::numvalue::NumValue;
use crate::rational::{self, Q};
use num_traits::One;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    R1,
    R3,
    R5,
    R9,
    R13,
}

impl Relation {
    pub const ALL: [Relation; 5] = [Relation::R1, Relation::R3, Relation::R5, Relation::R9, Relation::R13];
}

const EVAL_TOL: f64 = 1e-14;

/// LHS − RHS of the selected relation, with F = F(a,b;c;t) and shifted neighbours.
pub fn contiguous_residual(rel: Relation, a: &Q, b: &Q, c: &Q, t: f64) -> Result<NumValue> {
    let one = Q::one();
    let f = |a: &Q, b: &Q, c: &Q| hyp2f1(a, b, c, t, EVAL_TOL);
    let r = |x: Q| NumValue::exact(rational::to_f64(&x));
    let tt = NumValue::exact(t);
    let omt = NumValue::exact(1.0 - t);
    let af = r(a.clone());
    let f0 = f(a, b, c)?;
    Ok(match rel {
        Relation::R1 => {
            let lhs = (r(c - a - a) + r(a - b) * tt) * f0 + af * omt * f(&(a + &one), b, c)?;
            lhs - r(c - a) * f(&(a - &one), b, c)?
        }
        Relation::R3 => {
            let lhs = r(c - a - b) * f0 + af * omt * f(&(a + &one), b, c)?;
            lhs - r(c - b) * f(a, &(b - &one), c)?
        }
        Relation::R5 => {
            let lhs = r(c - a - &one) * f0 + af * f(&(a + &one), b, c)?;
            lhs - r(c - &one) * f(a, b, &(c - &one))?
        }
        Relation::R9 => {
            let lhs = (r(a - &one) + r(&one + b - c) * tt) * f0 + r(c - a) * f(&(a - &one), b, c)?;
            lhs - r(c - &one) * omt * f(a, b, &(c - &one))?
        }
        Relation::R13 => {
            let lhs = r(c.clone()) * omt * f0 + r(c - a) * tt * f(a, b, &(c + &one))?;
            lhs - r(c.clone()) * f(a, &(b - &one), c)?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn r5_at_zero() {
        let v = contiguous_residual(Relation::R5, &q(1, 3), &q(1, 4), &q(7, 3), 0.0).unwrap();
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn r1_and_r13_examples() {
        let v = contiguous_residual(Relation::R1, &q(1, 3), &q(2, 3), &q(5, 4), 0.37).unwrap();
        assert!(v.abs() <= 1e-10 && v.abs() <= v.err.max(1e-14), "{v}");
        let v = contiguous_residual(Relation::R13, &q(1, 2), &q(1, 2), &q(1, 1), 0.6).unwrap();
        assert!(v.abs() <= 1e-10, "{v}");
    }

    #[test]
    fn all_relations_near_one() {
        for rel in Relation::ALL {
            let v = contiguous_residual(rel, &q(2, 5), &q(3, 7), &q(9, 5), 0.93).unwrap();
            assert!(v.abs() <= 1e-10, "{rel:?}: {v}");
        }
    }
}
