use super::*;
use crate::quad::{oracle_one_period, oracle_two_period_direct, oracle_two_period_form};
use crate::specialfn::gamma;

fn fp(p: i64, l: i64, a: i64, b: i64) -> FibrationParams {
    FibrationParams::new(p, l, a, b).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

const TOL: f64 = 1e-13;

#[test]
fn epsilon_powers() {
    let e = EpsilonSign::new(2);
    assert_eq!(e.pow(1), Complex64::new(0.0, 1.0));
    assert_eq!(e.pow(-1), Complex64::new(0.0, -1.0));
    assert_eq!(EpsilonSign::new(5).pow(3), Complex64::new(-1.0, 0.0));
    // (p = 2, n = 1): ε^{pβ} = i
    assert_eq!(eps_p_beta(&fp(2, 7, 1, 1), 1), Complex64::new(0.0, 1.0));
}

#[test]
fn delta1_phase_matches_holomorphic_display() {
    // −ε^{pβ} for the holomorphic exponents
    for (p, l) in [(2, 3), (3, 5), (5, 7)] {
        for x in FibrationParams::all_for(p, l).unwrap() {
            for n in x.ns() {
                let e = form_exponents(&x, n, Form::Omega).unwrap();
                assert_eq!(delta1_phase(&x, n, e), -eps_p_beta(&x, n), "{x} n={n}");
            }
        }
    }
}

#[test]
fn one_periods_against_oracle() {
    for (x, n) in [(fp(3, 5, 1, 1), 1), (fp(3, 5, 1, 2), 2), (fp(2, 3, 1, 1), 1), (fp(5, 7, 2, 3), 3)] {
        for form in [Form::Omega, Form::Eta] {
            let e = form_exponents(&x, n, form).unwrap();
            for t in [0.37, 0.05, 0.93] {
                let d0 = one_period_delta0(&x, n, e, t, TOL).unwrap();
                let o0 = oracle_one_period(&x, n, e, Cycle::Delta0, t, 1e-12).unwrap();
                assert!(rel(d0.value, o0.value) < 1e-8, "{x} n={n} {form:?} t={t}: {d0} vs {o0}");
                let d1 = one_period_delta1(&x, n, e, t, TOL).unwrap();
                let o1 = oracle_one_period(&x, n, e, Cycle::Delta1, t, 1e-12).unwrap();
                assert!(rel(d1.value, o1.value) < 1e-8, "{x} n={n} {form:?} t={t}: {d1} vs {o1}");
                if x.p() > 2 {
                    assert_eq!(d1.im(), 0.0);
                }
            }
        }
    }
}

#[test]
fn eta_periods_match_displays() {
    let x = fp(3, 5, 1, 2);
    let n = 1;
    let f = frac_params(&x, n, 0).unwrap();
    let t = 0.4;
    let [d0, d1] = eta_periods(&x, n, t, TOL).unwrap();
    let one = Q::one();
    let a1 = &one - &f.alpha;
    let b = beta_q(&a1, &f.beta).unwrap();
    let want0 = b.re() * t.powf(rational::to_f64(&(&f.beta - &f.alpha)))
        * hyp2f1(&a1, &(&f.beta - &one), &(&a1 + &f.beta), t, TOL).unwrap().re();
    assert!((d0.re() - want0).abs() < 1e-13 * want0.abs());
    let b1 = &one - &f.beta;
    let want1 = -eps_p_beta(&x, n)
        * beta_q(&b1, &f.beta).unwrap().re()
        * rational::to_f64(&b1)
        * (1.0 - t)
        * hyp2f1(&f.alpha, &(&one + &b1), &qi(2), 1.0 - t, TOL).unwrap().re();
    assert!(rel(d1.value, want1) < 1e-13);
}

#[test]
fn small_t_scaling() {
    let x = fp(3, 5, 1, 2);
    let n = 1;
    let f = frac_params(&x, n, 0).unwrap();
    let (al, be) = (rational::to_f64(&f.alpha), rational::to_f64(&f.beta));
    let b = beta_q(&(Q::one() - &f.alpha), &f.beta).unwrap().re();
    let e = form_exponents(&x, n, Form::Omega).unwrap();
    for t in [1e-3, 1e-5] {
        let v = oracle_one_period(&x, n, e, Cycle::Delta0, t, 1e-12).unwrap().re() / t.powf(be - al);
        // F = 1 + (1−α)β/(1−α+β)·t + O(t²)
        let slope = (v / b - 1.0) / t;
        assert!((slope - (1.0 - al) * be / (1.0 - al + be)).abs() < 2.0 * t, "{slope}");
    }
    let v = one_period_delta0(&x, n, e, 1e-5, TOL).unwrap().re() / 1e-5f64.powf(be - al);
    assert!((v - b).abs() < 1e-4);
}

#[test]
fn period_matrix_determinants() {
    for x in [fp(3, 5, 1, 1), fp(2, 3, 1, 1), fp(5, 7, 2, 3)] {
        for t in [0.25, 0.5, 0.75] {
            for n in x.ns() {
                assert!(period_matrix(&x, n, t, TOL).unwrap().det().abs() > 1e-6);
            }
        }
        let prod = |t: f64| {
            x.ns()
                .map(|n| period_matrix(&x, n, t, TOL).unwrap().det().value)
                .fold(Complex64::new(1.0, 0.0), |a, b| a * b)
        };
        assert!(rel(prod(0.3), prod(0.7)) < 1e-6, "{x}");
    }
}

#[test]
fn ode_consistency() {
    for x in [fp(2, 3, 1, 1), fp(3, 5, 1, 1), fp(3, 5, 1, 2), fp(3, 7, 2, 1)] {
        for n in x.ns() {
            for t in [0.2, 0.5, 0.8] {
                let r = ode_residual(&x, n, t, 1e-3, TOL).unwrap();
                assert!(r < 1e-6, "{x} n={n} t={t}: {r}");
            }
        }
    }
}

#[test]
fn det_limit_by_extrapolation() {
    for x in [fp(2, 3, 1, 1), fp(3, 5, 1, 1), fp(3, 5, 2, 1), fp(5, 7, 2, 3)] {
        for n in x.ns() {
            let d = det_limit(&x, n).unwrap();
            let r = det_limit_extrapolated(&x, n, TOL).unwrap();
            assert!((d.value - r.value).norm() < 1e-5, "{x} n={n}: {d} vs {r}");
            // (1−ζ_p^n)² is not real; what remains is
            if x.p() > 2 {
                let z = Complex64::new(1.0, 0.0) - zeta_p_pow(&x, n);
                assert!((d.value / (z * z)).im.abs() < 1e-14 * d.abs());
            }
        }
    }
}

#[test]
fn delta1_closed_form_examples() {
    let x = fp(2, 3, 1, 1);
    let [w, h] = two_period_delta1(&x, 1, 1).unwrap();
    let b = beta_q(&q(1, 2), &q(1, 3)).unwrap().re();
    let want = Complex64::new(0.0, -b * b / 3.0);
    assert!(rel(w.value, want) < 1e-14);
    // (1−β)/(1−α+μ) = (1/2)/(5/6)
    assert!(rel(h.value, want * 0.6) < 1e-14);
    assert!(matches!(two_period_delta1(&fp(3, 5, 2, 1), 0, 1), Err(Error::Precondition(_))));
}

#[test]
fn two_periods_against_oracles() {
    let cases = [(fp(2, 3, 1, 1), 1, 1), (fp(3, 5, 1, 1), 2, 1), (fp(3, 5, 1, 2), 4, 2), (fp(5, 7, 2, 3), 3, 4)];
    for (x, m, n) in cases {
        let d1 = two_period_delta1(&x, m, n).unwrap();
        let d0 = two_period_delta0(&x, m, n, 1e-13, Precision::Extended).unwrap();
        for (k, form) in [Form::Omega, Form::Eta].into_iter().enumerate() {
            let o1 = oracle_two_period_form(&x, m, n, Cycle::Delta1, form, 1e-9).unwrap();
            assert!(rel(d1[k].value, o1.value) < 1e-7, "Δ₁ {x} m={m} n={n} {form:?}: {} vs {o1}", d1[k]);
            let o0 = oracle_two_period_form(&x, m, n, Cycle::Delta0, form, 1e-9).unwrap();
            assert!(rel(d0[k].value, o0.value) < 1e-7, "Δ₀ {x} m={m} n={n} {form:?}: {} vs {o0}", d0[k]);
        }
    }
}

#[test]
fn l_fold_substitution() {
    let x = fp(3, 5, 1, 1);
    let (m, n) = (2, 1);
    let u = oracle_two_period_form(&x, m, n, Cycle::Delta0, Form::Omega, 1e-10).unwrap();
    let t = oracle_two_period_direct(&x, m, n, Form::Omega, 1e-10).unwrap();
    assert!(rel(u.value, t.value) < 1e-8, "{u} vs {t}");
}

#[test]
fn delta0_series_and_integral_agree() {
    let (s, i) = two_period_delta0_crosscheck(&fp(3, 5, 1, 1), 2, 1, 1e-12).unwrap();
    assert!(rel(s.value, i.value) < 1e-9, "{s} vs {i}");
}

#[test]
fn gamma_product_small_case() {
    let x = fp(2, 3, 1, 1);
    let g = |v: f64| gamma(v).unwrap().re();
    let want = (g(0.5) * g(1.0 / 3.0) / g(5.0 / 6.0)).powi(2);
    let v = per_gamma_product(&x, 1).unwrap();
    assert!((v.re() - want).abs() < 1e-13 * want);
    assert_eq!(gamma_bb_shift(&x, 1).unwrap(), qi(1));
    assert!((per_bb_product(&x, 1).unwrap().re() - want).abs() < 1e-12 * want);
}

#[test]
fn gross_deligne_examples() {
    for x in [fp(2, 3, 1, 1), fp(3, 5, 1, 1), fp(5, 7, 2, 3)] {
        let r = gross_deligne_check(&x).unwrap();
        for row in &r.rows {
            assert!(row.pass, "{x} {row:?}");
        }
    }
}

#[test]
fn reflection_pairs() {
    for x in [fp(3, 5, 1, 2), fp(5, 7, 2, 3)] {
        for h in x.units() {
            let a = per_gamma_product(&x, h).unwrap().re();
            let b = per_gamma_product(&x, x.lp() - h).unwrap().re();
            let want = reflection_product(&x, h).unwrap();
            assert!((a * b - want).abs() < 1e-9 * want);
        }
    }
}
