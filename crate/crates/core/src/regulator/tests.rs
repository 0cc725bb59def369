use super::*;
use crate::periods::two_period_delta0;
use crate::rational::q;

fn fp(p: i64, l: i64, a: i64, b: i64) -> FibrationParams {
    FibrationParams::new(p, l, a, b).unwrap()
}

// mpmath, 30 digits
const F_LEGENDRE: f64 = 1.120_161_039_749_660_941_822;
const V_LEGENDRE: f64 = 0.344_460_647_301_881_909_90;

fn admissible_pairs(x: &FibrationParams) -> Vec<(i64, i64)> {
    let mut v = Vec::new();
    for n in x.ns() {
        for m in index_sets(x, n).unwrap().i1 {
            if admissible(x, m, n) {
                v.push((m, n));
            }
        }
    }
    v
}

#[test]
fn cyclotomic_polynomials() {
    assert_eq!(cyclotomic(6).coeffs(), &[q(1, 1), q(-1, 1), q(1, 1)]);
    assert_eq!(cyclotomic(15).degree(), Some(8));
    assert_eq!(cyclotomic(35).degree(), Some(24));
    let z = CycloElem::zeta(6);
    let mut w = CycloElem::one(6);
    for _ in 0..6 {
        w = w * z.clone();
    }
    assert_eq!(w, CycloElem::one(6));
}

#[test]
fn cyclo_eval_examples() {
    let x = fp(2, 3, 1, 1);
    let one = CycloElem::one(6);
    let v = cyclo_eval(&one, &x, 1, 1).unwrap();
    assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 1e-15);

    let e = (CycloElem::one(6) - CycloElem::zeta_l(&x)) * (CycloElem::one(6) - CycloElem::zeta_p(&x));
    let v = cyclo_eval(&e, &x, 1, 1).unwrap();
    let want = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, 2.0 * PI / 3.0)) * 2.0;
    assert!((v.value - want).norm() < 1e-14);

    let y = fp(3, 5, 1, 1);
    let e = CycloElem::from_coeffs(15, vec![q(2, 1), q(-1, 3), q(0, 1), q(5, 7)]).unwrap();
    for h in y.units() {
        let (m, n) = y.char_components(h).unwrap();
        let a = cyclo_eval(&e, &y, m, n).unwrap();
        let b = cyclo_eval(&e, &y, 5 - m, 3 - n).unwrap();
        assert!((a.value - b.value.conj()).norm() < 1e-13);
    }
}

#[test]
fn conjugation_and_reality() {
    let z = CycloElem::zeta(15);
    let r = z.clone() + z.conj();
    assert!(r.is_real());
    assert!(!z.is_real());
    assert_eq!(z.conj().conj(), z);
}

#[test]
fn regulator_matches_closed_form() {
    for x in [fp(2, 3, 1, 1), fp(3, 5, 1, 1), fp(3, 5, 1, 2), fp(5, 7, 2, 3)] {
        for (m, n) in admissible_pairs(&x) {
            let r = regulator_value(&x, m, n).unwrap();
            let d = two_period_delta0(&x, m, n, REGULATOR_TOL, Precision::Extended).unwrap()[0];
            assert_eq!(r.value, d.value);
            assert!(r.re() > 0.0 && r.im() == 0.0, "{x} ({m},{n})");
        }
    }
}

#[test]
fn legendre_regulator_value() {
    let r = regulator_value(&fp(2, 3, 1, 1), 1, 1).unwrap();
    assert!((r.re() - PI * F_LEGENDRE).abs() < 1e-12);
}

#[test]
fn regulator_preconditions() {
    let x = fp(3, 5, 1, 2);
    // n = 1: α = 1/3, β = 2/3, I¹ contains −1; m = 4 is outside I¹
    assert!(matches!(regulator_value(&x, 4, 1), Err(Error::Precondition(_))));
    assert!(regulator_value(&x, -1, 1).is_ok());
}

#[test]
fn omega_signs() {
    for x in [fp(3, 5, 1, 1), fp(3, 7, 2, 2), fp(5, 7, 1, 1), fp(3, 7, 1, 1)] {
        for n in x.ns() {
            for m in 1..x.l() {
                if !is_good_m(&x, m, n).unwrap() || !admissible(&x, m, n) || !admissible(&x, x.l() - m, x.p() - n) {
                    continue;
                }
                let o1 = omega_cap(&x, m, n).unwrap();
                let o2 = omega_cap(&x, x.l() - m, x.p() - n).unwrap();
                assert!(o1.im() == 0.0 && o2.im() == 0.0);
                assert!(o1.re() * o2.re() < 0.0, "{x} ({m},{n})");
            }
        }
    }
}

#[test]
fn pairing_properties() {
    let x = fp(3, 5, 1, 1);
    let (m, n) = (2, 2);
    let z = CycloElem::zeta(15);
    let real = z.clone() + z.conj();
    let v = rho_r_pairing(&x, m, n, &real).unwrap();
    assert!(v.abs() <= v.err.max(1e-14));
    let a = rho_r_pairing(&x, m, n, &z).unwrap();
    let b = rho_r_pairing(&x, m, n, &z.conj()).unwrap();
    assert!((a.value + b.value).norm() < 1e-13);
    let w = CycloElem::zeta_pow(15, 4);
    let c = rho_r_pairing(&x, m, n, &w).unwrap();
    let s = z.clone() * CycloElem::constant(15, q(3, 1)) - w.clone();
    let d = rho_r_pairing(&x, m, n, &s).unwrap();
    assert!((d.value - (a.value * 3.0 - c.value)).norm() < 1e-12);
    assert!(a.im() == 0.0);
    assert!(matches!(rho_r_pairing(&x, 4, 2, &z), Err(Error::Precondition(_))));
}

#[test]
fn nonvanishing_examples() {
    for x in [fp(3, 5, 1, 1), fp(3, 7, 2, 2)] {
        let r = nonvanishing_check(&x).unwrap();
        assert!(r.pass, "{x}: {:?}", r.rows);
        for row in &r.rows {
            assert_eq!(row.verdict, Verdict::Pass);
        }
    }
    assert!(matches!(nonvanishing_check(&fp(2, 5, 1, 1)), Err(Error::Precondition(_))));
    assert!(matches!(nonvanishing_check(&fp(5, 3, 1, 1)), Err(Error::Precondition(_))));
}

#[test]
fn criterion_reports() {
    let r = criterion_ratios(&fp(2, 3, 1, 1)).unwrap();
    assert_eq!(r.ratios.len(), 1);
    assert_eq!((r.ratios[0].m, r.ratios[0].n), (1, 1));
    let r = criterion_ratios(&fp(3, 5, 1, 2)).unwrap();
    assert_eq!(r.unknowns, 8);
    assert!(r.relative_residual.is_finite());
    for e in &r.ratios {
        assert!(e.ratio.im().abs() <= e.ratio.err);
    }
    assert!(matches!(criterion_ratios(&fp(3, 5, 1, 1)), Err(Error::Precondition(_))));
}

#[test]
fn continued_fractions() {
    let a = best_rational(PI, 1000);
    assert_eq!((a.num, a.den), (355, 113));
    let b = best_rational(0.75, 100);
    assert_eq!((b.num, b.den), (3, 4));
    assert_eq!(b.quality, 0.0);
}

#[test]
fn legendre() {
    let r = legendre_probe().unwrap();
    assert!(r.value.re() > 0.0 && r.value.im() == 0.0);
    assert!((r.value.re() - V_LEGENDRE).abs() < 1e-12);
    assert!((r.hypergeometric.re() - F_LEGENDRE).abs() < 1e-12);
    assert!(r.value.err < 1e-12);
    assert!(r.assembly_gap < 1e-10);
    assert!(r.precision_gap < 1e-10);
    assert!(r.approx.den <= CF_DENOMINATOR_BOUND);
}
