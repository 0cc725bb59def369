//! The Gauss–Manin connection on the (ω_n, η_n) eigencomponents, its gauge
//! transforms to Deligne canonical-extension bases, residues and N_t.
//!
//! Matrices act on row vectors of forms: ∇(ω, η) = (ω, η)·A.

mod poly;

pub use poly::{fmt_poly, Poly, RatFunc};

use crate::error::{Error, Result};
use crate::fibration::{frac_params, gr0_twist, FibrationParams};
use crate::rational::{ceil_i64, floor_i64, fmt_q, frac, qi, sqrt_exact, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;

pub type QMat2 = [[Q; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    T,
    S,
}

impl Chart {
    pub fn var(self) -> &'static str {
        match self {
            Chart::T => "t",
            Chart::S => "s",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Point {
    Zero,
    Infinity,
    Zeta,
}

impl Point {
    pub const ALL: [Point; 3] = [Point::Zero, Point::Infinity, Point::Zeta];
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Point::Zero => "0",
            Point::Infinity => "inf",
            Point::Zeta => "zeta",
        })
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

type RMat = [[RatFunc; 2]; 2];

fn rmat_mul(x: &RMat, y: &RMat) -> RMat {
    let e = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn rmat_add(x: &RMat, y: &RMat) -> RMat {
    let e = |i: usize, j: usize| &x[i][j] + &y[i][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn rmat_map(x: &RMat, f: impl Fn(&RatFunc) -> RatFunc) -> RMat {
    [[f(&x[0][0]), f(&x[0][1])], [f(&x[1][0]), f(&x[1][1])]]
}

fn rmat_const(m: &QMat2) -> RMat {
    rmat_map(
        &[
            [RatFunc::constant(m[0][0].clone()), RatFunc::constant(m[0][1].clone())],
            [RatFunc::constant(m[1][0].clone()), RatFunc::constant(m[1][1].clone())],
        ],
        |r| r.clone(),
    )
}

/// Connection matrix in one chart. With `log_form` the matrix is the
/// coefficient of dt/t (ds/s in chart s), otherwise of dt (ds).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConnMat {
    pub entries: [[RatFunc; 2]; 2],
    pub chart: Chart,
    pub log_form: bool,
}

impl ConnMat {
    /// Same connection written as the coefficient of dt.
    pub fn to_one_form(&self) -> ConnMat {
        if !self.log_form {
            return self.clone();
        }
        let inv_t = RatFunc::monomial(Q::one(), -1);
        ConnMat {
            entries: rmat_map(&self.entries, |r| r * &inv_t),
            chart: self.chart,
            log_form: false,
        }
    }

    /// Same connection written as the coefficient of dt/t.
    pub fn to_log_form(&self) -> ConnMat {
        if self.log_form {
            return self.clone();
        }
        let t = RatFunc::monomial(Q::one(), 1);
        ConnMat {
            entries: rmat_map(&self.entries, |r| r * &t),
            chart: self.chart,
            log_form: true,
        }
    }

    /// Rewrites the connection in the other chart, t = 1/s.
    pub fn change_chart(&self) -> ConnMat {
        let lf = self.to_log_form();
        // dt/t = −ds/s
        let e = rmat_map(&lf.entries, |r| -&r.invert_variable());
        let out = ConnMat {
            entries: e,
            chart: match self.chart {
                Chart::T => Chart::S,
                Chart::S => Chart::T,
            },
            log_form: true,
        };
        if self.log_form {
            out
        } else {
            out.to_one_form()
        }
    }

    pub fn trace(&self) -> RatFunc {
        &self.entries[0][0] + &self.entries[1][1]
    }

    /// Checks that every denominator divides t^k(1 − t^l)^j for some k, j.
    pub fn poles_in_divisor(&self, l: i64) -> bool {
        let cyc = Poly::one_minus_pow(l as usize);
        self.entries.iter().flatten().all(|r| {
            let d = r.den();
            let mut rest = d.shift_down(d.t_valuation());
            for _ in 0..=rest.degree().unwrap_or(0) {
                if rest.degree() == Some(0) {
                    return true;
                }
                let g = rest.gcd(&cyc);
                if g.degree() == Some(0) {
                    return false;
                }
                rest = rest.divrem(&g).expect("nonzero gcd").0;
            }
            rest.degree() == Some(0)
        })
    }

    /// Largest pole order at t = 0 of the entries of the stated form.
    pub fn pole_order_at_origin(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .map(|r| r.den().t_valuation())
            .max()
            .unwrap_or(0)
    }

    /// Largest pole order at the roots of 1 − t^l.
    pub fn pole_order_at_roots(&self, l: i64) -> usize {
        let cyc = Poly::one_minus_pow(l as usize);
        self.entries
            .iter()
            .flatten()
            .map(|r| {
                let mut d = r.den().clone();
                let mut k = 0;
                loop {
                    let g = d.gcd(&cyc);
                    if g.degree() == Some(0) {
                        break k;
                    }
                    d = d.divrem(&g).expect("nonzero gcd").0;
                    k += 1;
                }
            })
            .max()
            .unwrap_or(0)
    }

    pub fn fmt_entries(&self) -> [[String; 2]; 2] {
        let v = self.chart.var();
        let f = |r: &RatFunc| r.fmt_var(v);
        [
            [f(&self.entries[0][0]), f(&self.entries[0][1])],
            [f(&self.entries[1][0]), f(&self.entries[1][1])],
        ]
    }
}

impl fmt::Display for ConnMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.fmt_entries();
        let form = if self.log_form {
            format!("d{0}/{0}", self.chart.var())
        } else {
            format!("d{}", self.chart.var())
        };
        write!(f, "[[{}, {}], [{}, {}]] {}", e[0][0], e[0][1], e[1][0], e[1][1], form)
    }
}

/// Change of basis (e₁, e₂) = (ω, η)·P with monomial entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaugeMat {
    pub entries: [[RatFunc; 2]; 2],
}

impl GaugeMat {
    /// Validates monomial entries and a nonzero monomial determinant.
    pub fn new(entries: [[RatFunc; 2]; 2]) -> Result<GaugeMat> {
        for r in entries.iter().flatten() {
            if !r.is_zero() && r.as_monomial().is_none() {
                return Err(Error::InvalidParams(format!("gauge entry {r} is not a monomial")));
            }
        }
        let g = GaugeMat { entries };
        match g.det() {
            d if d.is_zero() => Err(Error::Singular("gauge matrix has zero determinant".into())),
            d if d.as_monomial().is_none() => Err(Error::Singular(format!(
                "gauge determinant {d} is not a monomial"
            ))),
            _ => Ok(g),
        }
    }

    pub fn identity() -> GaugeMat {
        GaugeMat {
            entries: rmat_const(&[[qi(1), qi(0)], [qi(0), qi(1)]]),
        }
    }

    /// diag(c₀t^{k₀}, c₁t^{k₁})
    pub fn diag_monomial(k0: i64, k1: i64) -> GaugeMat {
        GaugeMat {
            entries: [
                [RatFunc::monomial(qi(1), k0), RatFunc::zero()],
                [RatFunc::zero(), RatFunc::monomial(qi(1), k1)],
            ],
        }
    }

    pub fn det(&self) -> RatFunc {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }

    fn inverse(&self) -> Result<RMat> {
        let d = self.det();
        if d.is_zero() {
            return Err(Error::Singular("gauge matrix has zero determinant".into()));
        }
        let di = d.recip()?;
        let e = &self.entries;
        Ok([
            [&e[1][1] * &di, &(-&e[0][1]) * &di],
            [&(-&e[1][0]) * &di, &e[0][0] * &di],
        ])
    }

    pub fn mul(&self, o: &GaugeMat) -> Result<GaugeMat> {
        GaugeMat::new(rmat_mul(&self.entries, &o.entries))
    }

    /// The same matrix after t = 1/s.
    pub fn invert_variable(&self) -> GaugeMat {
        GaugeMat {
            entries: rmat_map(&self.entries, RatFunc::invert_variable),
        }
    }
}

/// A_P = P⁻¹AP + P⁻¹P′ for the dt-form, or + t·P⁻¹P′ for the dt/t-form.
pub fn gauge_transform(a: &ConnMat, p: &GaugeMat) -> Result<ConnMat> {
    let pinv = p.inverse()?;
    let conj = rmat_mul(&rmat_mul(&pinv, &a.entries), &p.entries);
    let dp = rmat_map(&p.entries, RatFunc::derivative);
    let mut corr = rmat_mul(&pinv, &dp);
    if a.log_form {
        let t = RatFunc::monomial(Q::one(), 1);
        corr = rmat_map(&corr, |r| r * &t);
    }
    Ok(ConnMat {
        entries: rmat_add(&conj, &corr),
        chart: a.chart,
        log_form: a.log_form,
    })
}

fn diag_q(x: Q, y: Q) -> QMat2 {
    [[x, Q::zero()], [Q::zero(), y]]
}

/// The dt/t coefficient l·diag(1−β, 1−α)·[[−1, −1], [1/(1−t^l), 1]] with
/// l = 1 giving the base family over the t-line.
fn gm_log_matrix(alpha: &Q, beta: &Q, l: i64) -> RMat {
    let one = Q::one();
    let d0 = qi(l) * (&one - beta);
    let d1 = qi(l) * (&one - alpha);
    let inv = RatFunc::new(Poly::one(), Poly::one_minus_pow(l as usize)).expect("nonzero");
    [
        [RatFunc::constant(-d0.clone()), RatFunc::constant(-d0)],
        [inv.scale(&d1), RatFunc::constant(d1)],
    ]
}

/// ∇ on (ω, η) over the base family, as the dt/t coefficient.
pub fn gm_matrix_base(alpha: &Q, beta: &Q) -> ConnMat {
    ConnMat {
        entries: gm_log_matrix(alpha, beta, 1),
        chart: Chart::T,
        log_form: true,
    }
}

/// ∇ on (ω_n, η_n) for the l-fold pulled back family in the given chart,
/// as the coefficient of dt/t or ds/s.
pub fn gm_matrix(fp: &FibrationParams, n: i64, chart: Chart) -> Result<ConnMat> {
    let f = frac_params(fp, n, 0)?;
    let l = fp.l();
    Ok(match chart {
        Chart::T => ConnMat {
            entries: gm_log_matrix(&f.alpha, &f.beta, l),
            chart,
            log_form: true,
        },
        Chart::S => {
            let one = Q::one();
            let d0 = qi(l) * (&one - &f.beta);
            let d1 = qi(l) * (&one - &f.alpha);
            // s^l/(1 − s^l)
            let r = RatFunc::new(Poly::monomial(Q::one(), l as usize), Poly::one_minus_pow(l as usize))?;
            ConnMat {
                entries: [
                    [RatFunc::constant(d0.clone()), RatFunc::constant(d0)],
                    [r.scale(&d1), RatFunc::constant(-d1)],
                ],
                chart,
                log_form: true,
            }
        }
    })
}

fn mono(c: Q, k: i64) -> RatFunc {
    RatFunc::monomial(c, k)
}

/// P for the local basis of the canonical extension at `point`, written in
/// the chart used at that point (s = 1/t at infinity).
pub fn canonical_basis_matrix(fp: &FibrationParams, n: i64, point: Point) -> Result<GaugeMat> {
    let f = frac_params(fp, n, 0)?;
    let l = qi(fp.l());
    let one = Q::one();
    match point {
        Point::Zeta => Ok(GaugeMat::identity()),
        Point::Zero if f.alpha == f.beta => Ok(GaugeMat::identity()),
        Point::Zero => {
            let k = ceil_i64(&((&f.alpha - &f.beta) * &l));
            GaugeMat::new([
                [mono(one.clone(), 0), mono(&one - &f.beta, k)],
                [mono(-one.clone(), 0), mono(-(&one - &f.alpha), k)],
            ])
        }
        Point::Infinity => {
            let li = fp.l();
            let i0 = floor_i64(&((&one - &f.beta) * &l));
            let i1 = floor_i64(&(&f.alpha * &l));
            let p_t = if &f.alpha + &f.beta == one {
                GaugeMat::diag_monomial(i1, i1 - li)
            } else {
                let mid = GaugeMat::new(rmat_const(&[
                    [&one - &f.alpha - &f.beta, Q::zero()],
                    [&one - &f.alpha, one.clone()],
                ]))?;
                GaugeMat::diag_monomial(0, -li)
                    .mul(&mid)?
                    .mul(&GaugeMat::diag_monomial(i0, i1))?
            };
            Ok(p_t.invert_variable())
        }
    }
}

/// The connection in the canonical local basis at `point`, dt/t (ds/s) form.
pub fn local_connection(fp: &FibrationParams, n: i64, point: Point) -> Result<ConnMat> {
    let chart = match point {
        Point::Infinity => Chart::S,
        _ => Chart::T,
    };
    gauge_transform(&gm_matrix(fp, n, chart)?, &canonical_basis_matrix(fp, n, point)?)
}

fn residue_at(one_form: &ConnMat, t0: &Q) -> Result<QMat2> {
    // (t − t₀)·entry evaluated at t₀
    let lin = Poly::new(vec![-t0.clone(), Q::one()]);
    let mut out: QMat2 = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            let r = &one_form.entries[i][j];
            let prod = &RatFunc::poly(lin.clone()) * r;
            out[i][j] = prod.eval(t0).ok_or_else(|| {
                Error::NonLogPole(format!(
                    "entry ({i},{j}) = {} at {}",
                    r.fmt_var(one_form.chart.var()),
                    fmt_q(t0)
                ))
            })?;
        }
    }
    Ok(out)
}

/// Residue of the connection in the canonical local basis, computed from the
/// gauge transform. At ζ the point t = 1 stands for every root of unity.
pub fn residue_matrix(fp: &FibrationParams, n: i64, point: Point) -> Result<QMat2> {
    let a = local_connection(fp, n, point)?.to_one_form();
    match point {
        Point::Zero | Point::Infinity => residue_at(&a, &Q::zero()),
        Point::Zeta => residue_at(&a, &Q::one()),
    }
}

/// Closed-form residues of the canonical extension.
pub fn residue_table(fp: &FibrationParams, n: i64, point: Point) -> Result<QMat2> {
    let f = frac_params(fp, n, 0)?;
    let l = qi(fp.l());
    let one = Q::one();
    let z = Q::zero();
    Ok(match point {
        Point::Zeta => [[z.clone(), z.clone()], [-(&one - &f.alpha), z]],
        Point::Zero if f.alpha == f.beta => {
            let c = &l * (&one - &f.alpha);
            [[-c.clone(), -c.clone()], [c.clone(), c]]
        }
        Point::Zero => diag_q(z, frac(&((&f.beta - &f.alpha) * &l))),
        Point::Infinity if &f.alpha + &f.beta == one => {
            let x = frac(&(&f.alpha * &l));
            [[x.clone(), z], [(&one - &f.alpha) * &l, x]]
        }
        Point::Infinity => diag_q(frac(&((&one - &f.beta) * &l)), frac(&(&f.alpha * &l))),
    })
}

pub fn fmt_qmat(m: &QMat2) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        fmt_q(&m[0][0]),
        fmt_q(&m[0][1]),
        fmt_q(&m[1][0]),
        fmt_q(&m[1][1])
    )
}

/// Eigenvalues of a rational 2×2 matrix when both are rational.
pub fn rational_eigenvalues(m: &QMat2) -> Option<[Q; 2]> {
    let tr = &m[0][0] + &m[1][1];
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    let disc = &tr * &tr - qi(4) * det;
    let r = sqrt_exact(&disc)?;
    let two = qi(2);
    let mut e = [(&tr - &r) / &two, (&tr + &r) / &two];
    e.sort();
    Some(e)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumRow {
    pub point: Point,
    #[serde(serialize_with = "ser_qmat")]
    pub residue: QMat2,
    /// None when the characteristic polynomial has no rational roots.
    #[serde(serialize_with = "ser_opt_pair")]
    pub spectrum: Option<[Q; 2]>,
    pub matches_table: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub params: FibrationParams,
    pub n: i64,
    pub rows: Vec<SpectrumRow>,
    pub pass: bool,
}

fn ser_qmat<S: Serializer>(m: &QMat2, s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
    v.serialize(s)
}

fn ser_opt_pair<S: Serializer>(m: &Option<[Q; 2]>, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.as_ref()
        .map(|p| p.iter().map(fmt_q).collect::<Vec<_>>())
        .serialize(s)
}

/// Residues at 0, ∞ and ζ from the gauge computation, their exact spectra,
/// and agreement with the closed-form table.
pub fn residue_spectrum_check(fp: &FibrationParams, n: i64) -> Result<SpectrumReport> {
    let mut rows = Vec::new();
    for point in Point::ALL {
        let residue = residue_matrix(fp, n, point)?;
        let table = residue_table(fp, n, point)?;
        let spectrum = rational_eigenvalues(&residue);
        let in_range = spectrum
            .as_ref()
            .is_some_and(|e| e.iter().all(|x| !x.is_negative() && *x < Q::one()));
        let matches_table = residue == table;
        rows.push(SpectrumRow {
            point,
            residue,
            spectrum,
            matches_table,
            pass: in_range && matches_table,
        });
    }
    Ok(SpectrumReport {
        params: *fp,
        n,
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}

/// Simple poles at the roots of unity, a logarithmic pole at the base point
/// of the chart, and nothing outside {0, ∞} ∪ μ_l.
pub fn pole_discipline(fp: &FibrationParams, n: i64, point: Point) -> Result<bool> {
    let a = local_connection(fp, n, point)?;
    let l = fp.l();
    let log_ok = match point {
        Point::Zeta => true,
        _ => a.pole_order_at_origin() == 0,
    };
    let one = a.to_one_form();
    Ok(log_ok && a.poles_in_divisor(l) && one.pole_order_at_roots(l) <= 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subspace {
    pub point: Point,
    pub dim: usize,
    pub codim: usize,
    /// Basis in coordinates of the canonical local basis.
    #[serde(serialize_with = "ser_vecs")]
    pub basis: Vec<[Q; 2]>,
    /// The same vectors as coefficients of (ω_n, η_n).
    pub in_forms: Vec<[RatFunc; 2]>,
}

fn ser_vecs<S: Serializer>(m: &[[Q; 2]], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
    v.serialize(s)
}

/// N_t, the image of the residue on the fibre of the canonical extension.
pub fn n_subspace(fp: &FibrationParams, n: i64, point: Point) -> Result<Subspace> {
    let r = residue_matrix(fp, n, point)?;
    let cols = [[r[0][0].clone(), r[1][0].clone()], [r[0][1].clone(), r[1][1].clone()]];
    let nonzero: Vec<[Q; 2]> = cols.iter().filter(|c| c.iter().any(|x| !x.is_zero())).cloned().collect();
    let det = &r[0][0] * &r[1][1] - &r[0][1] * &r[1][0];
    let basis: Vec<[Q; 2]> = if !det.is_zero() {
        vec![[qi(1), qi(0)], [qi(0), qi(1)]]
    } else if let Some(c) = nonzero.first() {
        let piv = c.iter().find(|x| !x.is_zero()).expect("nonzero").clone();
        vec![[&c[0] / &piv, &c[1] / &piv]]
    } else {
        vec![]
    };
    let p = canonical_basis_matrix(fp, n, point)?;
    let p = if point == Point::Infinity { p.invert_variable() } else { p };
    let in_forms = basis
        .iter()
        .map(|v| {
            let c = |i: usize| {
                &(&p.entries[i][0] * &RatFunc::constant(v[0].clone()))
                    + &(&p.entries[i][1] * &RatFunc::constant(v[1].clone()))
            };
            [c(0), c(1)]
        })
        .collect();
    Ok(Subspace {
        point,
        dim: basis.len(),
        codim: 2 - basis.len(),
        basis,
        in_forms,
    })
}

/// (i, j) with F¹ of the canonical extension equal to O(i)·t^j·ω_n.
pub fn f1_hodge_line(fp: &FibrationParams, n: i64) -> Result<(i64, i64)> {
    let f = frac_params(fp, n, 0)?;
    let l = qi(fp.l());
    let one = Q::one();
    let al = floor_i64(&(&f.alpha * &l));
    let ombl = floor_i64(&((&one - &f.beta) * &l));
    let c = ceil_i64(&((&f.alpha - &f.beta) * &l));
    let (i, j) = match (al >= ombl, f.alpha <= f.beta) {
        (true, true) => (ombl, 0),
        (true, false) => (ombl - c, c),
        (false, true) => (al, 0),
        (false, false) => (al - c, c),
    };
    // i = −1 happens when p > l; O(−1) has no sections and h⁰ = i + 1 still holds
    if !(-1..fp.l()).contains(&i) {
        return Err(Error::Internal(format!("F¹ degree {i} outside [-1, {})", fp.l())));
    }
    Ok((i, j))
}

/// dim Gr¹ of H¹(P¹, canonical extension), l + k − i. The quotient by the
/// image of Res₀ loses one more dimension when α > β.
pub fn gr1_cohomology_dim(fp: &FibrationParams, n: i64) -> Result<i64> {
    let (i, _) = f1_hodge_line(fp, n)?;
    Ok(fp.l() + gr0_twist(fp, n)? - i)
}

#[cfg(test)]
mod tests;
