use super::*;
use crate::fibration::{hodge_dims, FibrationParams};
use crate::rational::q;

fn fp(p: i64, l: i64, a: i64, b: i64) -> FibrationParams {
    FibrationParams::new(p, l, a, b).unwrap()
}

const SWEEP: [(i64, i64); 6] = [(2, 3), (2, 5), (3, 5), (5, 3), (3, 7), (5, 7)];

fn each_case(mut f: impl FnMut(&FibrationParams, i64)) {
    for (p, l) in SWEEP {
        for x in FibrationParams::all_for(p, l).unwrap() {
            for n in x.ns() {
                f(&x, n);
            }
        }
    }
}

fn constant_at(m: &ConnMat, t: &Q) -> QMat2 {
    let e = |i: usize, j: usize| m.entries[i][j].eval(t).unwrap();
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

#[test]
fn base_matrix_examples() {
    let a = gm_matrix_base(&q(1, 2), &q(1, 2));
    let half = q(1, 2);
    assert_eq!(constant_at(&a, &Q::zero()), [[-half.clone(), -half.clone()], [half.clone(), half]]);
    let (al, be) = (q(1, 3), q(3, 5));
    let a = gm_matrix_base(&al, &be);
    assert_eq!(a.trace().eval(&q(1, 7)), Some(&be - &al));
    assert!(a.poles_in_divisor(1));
    assert_eq!(a.to_one_form().pole_order_at_origin(), 1);
}

#[test]
fn chart_change_is_consistent() {
    each_case(|x, n| {
        let t = gm_matrix(x, n, Chart::T).unwrap();
        let s = gm_matrix(x, n, Chart::S).unwrap();
        assert_eq!(t.change_chart(), s);
        assert_eq!(s.change_chart(), t);
        assert!(t.poles_in_divisor(x.l()));
    });
}

#[test]
fn residue_at_roots_of_unity() {
    let x = fp(3, 5, 1, 2);
    for n in x.ns() {
        let a = gm_matrix(&x, n, Chart::T).unwrap().to_one_form();
        let al = frac_params(&x, n, 0).unwrap().alpha;
        let r = residue_at(&a, &Q::one()).unwrap();
        assert_eq!(r, [[qi(0), qi(0)], [-(qi(1) - al.clone()), qi(0)]]);
        // same at a primitive root, numerically
        let z = num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * 2.0 / 5.0);
        let h = 1e-7;
        let v = a.entries[1][0].eval_c(z * (1.0 + h)) * (z * h);
        assert!((v.re + (1.0 - crate::rational::to_f64(&al))).abs() < 1e-5, "{v}");
    }
}

#[test]
fn gauge_examples() {
    let x = fp(3, 5, 1, 2);
    let a = gm_matrix(&x, 1, Chart::T).unwrap().to_one_form();
    assert_eq!(gauge_transform(&a, &GaugeMat::identity()).unwrap(), a);
    let k = 3;
    let p = GaugeMat::diag_monomial(0, k);
    let got = gauge_transform(&a, &p).unwrap();
    let pinv = GaugeMat::diag_monomial(0, -k);
    let conj = rmat_mul(&rmat_mul(&pinv.entries, &a.entries), &p.entries);
    let mut want = conj;
    want[1][1] = &want[1][1] + &RatFunc::monomial(qi(k), -1);
    assert_eq!(got.entries, want);
    // α ≠ β at 0
    let f = frac_params(&x, 1, 0).unwrap();
    assert_ne!(f.alpha, f.beta);
    let r = residue_matrix(&x, 1, Point::Zero).unwrap();
    assert_eq!(r, diag_q(qi(0), frac(&((&f.beta - &f.alpha) * qi(5)))));
    assert!(GaugeMat::new(rmat_const(&[[qi(1), qi(2)], [qi(2), qi(4)]])).is_err());
}

#[test]
fn canonical_basis_examples() {
    assert_eq!(canonical_basis_matrix(&fp(3, 5, 1, 1), 1, Point::Zeta).unwrap(), GaugeMat::identity());
    assert_eq!(canonical_basis_matrix(&fp(3, 5, 1, 1), 1, Point::Zero).unwrap(), GaugeMat::identity());
    // α + β = 1 for (3,5,1,2), n = 1: α = 1/3, β = 2/3, ⌊αl⌋ = 1
    let p = canonical_basis_matrix(&fp(3, 5, 1, 2), 1, Point::Infinity).unwrap();
    assert_eq!(p.invert_variable(), GaugeMat::diag_monomial(1, 1 - 5));
}

#[test]
fn residue_examples() {
    let x = fp(3, 5, 1, 1);
    let r = residue_matrix(&x, 1, Point::Zero).unwrap();
    let c = q(10, 3);
    assert_eq!(r, [[-c.clone(), -c.clone()], [c.clone(), c]]);
    assert_eq!(rational_eigenvalues(&r), Some([qi(0), qi(0)]));
    let r = residue_matrix(&x, 1, Point::Zeta).unwrap();
    assert_eq!(r, [[qi(0), qi(0)], [q(-2, 3), qi(0)]]);
    let r = residue_matrix(&x, 1, Point::Infinity).unwrap();
    // {(1−β)l} = {10/3}, {αl} = {5/3}
    assert_eq!(r, diag_q(q(1, 3), q(2, 3)));
}

#[test]
fn residue_at_infinity_when_alpha_plus_beta_is_one() {
    let x = fp(3, 5, 1, 2);
    let r = residue_matrix(&x, 1, Point::Infinity).unwrap();
    // lower-left entry is (1 − α)l = 10/3
    assert_eq!(r, [[q(2, 3), qi(0)], [q(10, 3), q(2, 3)]]);
}

#[test]
fn gauge_coherence_and_spectra_over_sweep() {
    each_case(|x, n| {
        let rep = residue_spectrum_check(x, n).unwrap();
        for row in &rep.rows {
            assert!(row.matches_table, "{x} n={n} {}: {}", row.point, fmt_qmat(&row.residue));
        }
        assert!(rep.pass, "{x} n={n}");
        let inf = &rep.rows[1];
        let f = frac_params(x, n, 0).unwrap();
        let mut want = [frac(&((qi(1) - &f.beta) * qi(x.l()))), frac(&(&f.alpha * qi(x.l())))];
        want.sort();
        assert_eq!(inf.spectrum.clone().unwrap(), want);
    });
}

#[test]
fn pole_discipline_over_sweep() {
    each_case(|x, n| {
        for point in Point::ALL {
            assert!(pole_discipline(x, n, point).unwrap(), "{x} n={n} {point}");
        }
    });
}

#[test]
fn infinity_residue_agrees_across_charts() {
    // transport the t-chart gauge-transformed connection to s and read off s = 0
    each_case(|x, n| {
        let p_t = canonical_basis_matrix(x, n, Point::Infinity).unwrap().invert_variable();
        let a_t = gauge_transform(&gm_matrix(x, n, Chart::T).unwrap(), &p_t).unwrap();
        let a_s = a_t.change_chart();
        let r = residue_at(&a_s.to_one_form(), &Q::zero()).unwrap();
        assert_eq!(r, residue_table(x, n, Point::Infinity).unwrap());
    });
}

#[test]
fn n_subspaces() {
    each_case(|x, n| {
        let f = frac_params(x, n, 0).unwrap();
        let z = n_subspace(x, n, Point::Zero).unwrap();
        assert_eq!((z.dim, z.codim), (1, 1));
        // proportional to t^{⌈(α−β)l⌉}((1−β)ω − (1−α)η)
        let k = ceil_i64(&((&f.alpha - &f.beta) * qi(x.l())));
        let w = [RatFunc::monomial(qi(1) - &f.beta, k), RatFunc::monomial(-(qi(1) - &f.alpha), k)];
        let v = &z.in_forms[0];
        assert_eq!(&v[0] * &w[1], &v[1] * &w[0]);
        let i = n_subspace(x, n, Point::Infinity).unwrap();
        assert_eq!(i.codim, 0);
        let e = n_subspace(x, n, Point::Zeta).unwrap();
        assert_eq!(e.codim, 1);
        assert!(e.in_forms[0][0].is_zero());
    });
}

#[test]
fn f1_lines() {
    assert_eq!(f1_hodge_line(&fp(3, 5, 1, 1), 1).unwrap(), (1, 0));
    assert_eq!(f1_hodge_line(&fp(2, 3, 1, 1), 1).unwrap(), (1, 0));
    // p > l can push the degree to −1
    assert_eq!(f1_hodge_line(&fp(5, 3, 3, 1), 1).unwrap(), (-1, 2));
    each_case(|x, n| {
        let (i, _) = f1_hodge_line(x, n).unwrap();
        if x.p() < x.l() {
            assert!((0..x.l()).contains(&i));
        }
        let f = frac_params(x, n, 0).unwrap();
        let drop = i64::from(f.alpha > f.beta);
        assert_eq!(gr1_cohomology_dim(x, n).unwrap() - drop, hodge_dims(x, n).unwrap().gr1, "{x} n={n}");
    });
}

#[test]
fn display_strings() {
    let a = gm_matrix(&fp(3, 5, 1, 1), 1, Chart::T).unwrap();
    assert_eq!(a.to_string(), "[[-10/3, -10/3], [(-10/3)/(t^5 - 1), 10/3]] dt/t");
}
