//! Monodromy of y′ = y·A(t)/t along loops based at t = 1/2.

use crate::connection::{gm_matrix, residue_table, Chart, ConnMat, Point};
use crate::error::{Error, Result};
use crate::fibration::FibrationParams;
use crate::rational;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type CMat2 = [[Complex64; 2]; 2];

/// Orientation pairing between residue eigenvalues λ and monodromy
/// eigenvalues e^{2πisλ}, fixed by `calibrate_sign` and checked in tests.
pub const MONODROMY_SIGN: i32 = 1;

pub const BASEPOINT: f64 = 0.5;
const STEP_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopCenter {
    Finite(Complex64),
    /// Radius is then measured in s = 1/t.
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopPath {
    pub center: LoopCenter,
    pub radius: f64,
    /// Minimum number of integration steps per path piece.
    pub samples: usize,
}

impl LoopPath {
    /// Standard loop around 0, ∞ or the k-th root of unity e^{2πik/l},
    /// with radius a quarter of the distance to the nearest other singularity.
    pub fn around(l: i64, point: Point, k: i64) -> LoopPath {
        let gap = if l == 1 { 1.0 } else { (2.0 * (PI / l as f64).sin()).min(1.0) };
        let (center, radius) = match point {
            Point::Zero => (LoopCenter::Finite(Complex64::new(0.0, 0.0)), 0.25),
            Point::Infinity => (LoopCenter::Infinity, 0.25),
            Point::Zeta => (
                LoopCenter::Finite(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / l as f64)),
                0.25 * gap,
            ),
        };
        LoopPath {
            center,
            radius,
            samples: 32,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Line(Complex64, Complex64),
    /// center, radius, start angle, end angle
    Arc(Complex64, f64, f64, f64),
}

impl Piece {
    fn at(&self, tau: f64) -> (Complex64, Complex64) {
        match *self {
            Piece::Line(a, b) => (a + (b - a) * tau, b - a),
            Piece::Arc(c, r, t0, t1) => {
                let th = t0 + (t1 - t0) * tau;
                let z = Complex64::from_polar(r, th);
                (c + z, z * Complex64::new(0.0, t1 - t0))
            }
        }
    }

    fn reversed(&self) -> Piece {
        match *self {
            Piece::Line(a, b) => Piece::Line(b, a),
            Piece::Arc(c, r, t0, t1) => Piece::Arc(c, r, t1, t0),
        }
    }
}

fn pieces(path: &LoopPath, l: i64) -> Result<Vec<Piece>> {
    let o = Complex64::new(0.0, 0.0);
    let b = BASEPOINT;
    let mut tail = Vec::new();
    let circle;
    match path.center {
        LoopCenter::Finite(c) if c.norm() == 0.0 => {
            if path.radius >= b {
                return Err(Error::InvalidParams("loop around 0 must stay inside |t| < 1/2".into()));
            }
            tail.push(Piece::Line(Complex64::new(b, 0.0), Complex64::new(path.radius, 0.0)));
            circle = Piece::Arc(o, path.radius, 0.0, 2.0 * PI);
        }
        LoopCenter::Finite(c) => {
            let th = c.arg().rem_euclid(2.0 * PI);
            if th > 0.0 {
                tail.push(Piece::Arc(o, b, 0.0, th));
            }
            let near = c * (1.0 - path.radius / c.norm());
            tail.push(Piece::Line(Complex64::from_polar(b, th), near));
            circle = Piece::Arc(c, path.radius, th + PI, th + 3.0 * PI);
        }
        LoopCenter::Infinity => {
            let big = 1.0 / path.radius;
            let th = PI / l as f64;
            tail.push(Piece::Arc(o, b, 0.0, th));
            tail.push(Piece::Line(Complex64::from_polar(b, th), Complex64::from_polar(big, th)));
            // positive around s = 0 is clockwise in t
            circle = Piece::Arc(o, big, th, th - 2.0 * PI);
        }
    }
    let mut out = tail.clone();
    out.push(circle);
    out.extend(tail.iter().rev().map(Piece::reversed));
    Ok(out)
}

fn mat_mul(a: &CMat2, b: &CMat2) -> CMat2 {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn identity() -> CMat2 {
    let (z, o) = (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
    [[o, z], [z, o]]
}

pub fn inverse(m: &CMat2) -> CMat2 {
    let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

pub fn product(ms: &[CMat2]) -> CMat2 {
    ms.iter().fold(identity(), |acc, m| mat_mul(&acc, m))
}

fn rhs(a: &ConnMat, piece: &Piece, tau: f64, y: &CMat2) -> CMat2 {
    let (t, dt) = piece.at(tau);
    let g = |i: usize, j: usize| a.entries[i][j].eval_c(t) / t * dt;
    let m = [[g(0, 0), g(0, 1)], [g(1, 0), g(1, 1)]];
    mat_mul(y, &m)
}

fn axpy(y: &CMat2, ks: &[(f64, &CMat2)], h: f64) -> CMat2 {
    let mut out = *y;
    for (c, k) in ks {
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] += k[i][j] * (c * h);
            }
        }
    }
    out
}

/// Dormand–Prince 5(4) over τ ∈ [0, 1].
fn dopri5(a: &ConnMat, piece: &Piece, y0: CMat2, min_steps: usize) -> Result<CMat2> {
    let mut y = y0;
    let mut tau = 0.0;
    let hmax = 1.0 / min_steps.max(1) as f64;
    let mut h = hmax;
    let f = |tau: f64, y: &CMat2| rhs(a, piece, tau, y);
    let mut k1 = f(tau, &y);
    while tau < 1.0 {
        if tau + h > 1.0 {
            h = 1.0 - tau;
        }
        let k2 = f(tau + h / 5.0, &axpy(&y, &[(1.0 / 5.0, &k1)], h));
        let k3 = f(tau + 3.0 * h / 10.0, &axpy(&y, &[(3.0 / 40.0, &k1), (9.0 / 40.0, &k2)], h));
        let k4 = f(
            tau + 4.0 * h / 5.0,
            &axpy(&y, &[(44.0 / 45.0, &k1), (-56.0 / 15.0, &k2), (32.0 / 9.0, &k3)], h),
        );
        let k5 = f(
            tau + 8.0 * h / 9.0,
            &axpy(
                &y,
                &[(19372.0 / 6561.0, &k1), (-25360.0 / 2187.0, &k2), (64448.0 / 6561.0, &k3), (-212.0 / 729.0, &k4)],
                h,
            ),
        );
        let k6 = f(
            tau + h,
            &axpy(
                &y,
                &[
                    (9017.0 / 3168.0, &k1),
                    (-355.0 / 33.0, &k2),
                    (46732.0 / 5247.0, &k3),
                    (49.0 / 176.0, &k4),
                    (-5103.0 / 18656.0, &k5),
                ],
                h,
            ),
        );
        let y5 = axpy(
            &y,
            &[(35.0 / 384.0, &k1), (500.0 / 1113.0, &k3), (125.0 / 192.0, &k4), (-2187.0 / 6784.0, &k5), (11.0 / 84.0, &k6)],
            h,
        );
        let k7 = f(tau + h, &y5);
        let y4 = axpy(
            &y,
            &[
                (5179.0 / 57600.0, &k1),
                (7571.0 / 16695.0, &k3),
                (393.0 / 640.0, &k4),
                (-92097.0 / 339200.0, &k5),
                (187.0 / 2100.0, &k6),
                (1.0 / 40.0, &k7),
            ],
            h,
        );
        let mut err = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let sc = STEP_TOL * (1.0 + y[i][j].norm().max(y5[i][j].norm()));
                err = err.max((y5[i][j] - y4[i][j]).norm() / sc);
            }
        }
        if err <= 1.0 {
            tau += h;
            y = y5;
            k1 = k7;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * fac).min(hmax);
        if h < 1e-14 {
            let (t, _) = piece.at(tau);
            return Err(Error::StepUnderflow(format!("{t}")));
        }
    }
    Ok(y)
}

/// Φ with y(end) = y(start)·Φ for row solutions of y′ = y·A/t, A the dt/t
/// matrix of ∇ on (ω_n, η_n).
pub fn monodromy(fp: &FibrationParams, n: i64, path: &LoopPath) -> Result<CMat2> {
    let a = gm_matrix(fp, n, Chart::T)?;
    monodromy_of(&a, fp.l(), path)
}

pub fn monodromy_of(a: &ConnMat, l: i64, path: &LoopPath) -> Result<CMat2> {
    let mut y = identity();
    for p in pieces(path, l)? {
        y = dopri5(a, &p, y, path.samples)?;
    }
    Ok(y)
}

pub fn eigenvalues(m: &CMat2) -> [Complex64; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (tr * tr - det * 4.0).sqrt();
    [(tr - disc) / 2.0, (tr + disc) / 2.0]
}

/// Distance between two unordered pairs.
pub fn pair_distance(a: &[Complex64; 2], b: &[Complex64; 2]) -> f64 {
    let d1 = (a[0] - b[0]).norm().max((a[1] - b[1]).norm());
    let d2 = (a[0] - b[1]).norm().max((a[1] - b[0]).norm());
    d1.min(d2)
}

/// Distance from the spectrum of `m` to a predicted pair. A repeated
/// prediction λ is compared through tr m/2 and ‖(m − λ)²‖, since the
/// individual eigenvalues of a Jordan block move like the square root of
/// the integration error.
pub fn spectrum_distance(m: &CMat2, want: &[Complex64; 2]) -> f64 {
    if (want[0] - want[1]).norm() > 1e-3 {
        return pair_distance(&eigenvalues(m), want);
    }
    let lam = (want[0] + want[1]) / 2.0;
    let mut s = *m;
    s[0][0] -= lam;
    s[1][1] -= lam;
    let tr = (m[0][0] + m[1][1]) / 2.0 - lam;
    tr.norm().max(frob(&mat_mul(&s, &s)))
}

/// e^{2πisλ} for the eigenvalues λ of the tabulated residue at `point`.
pub fn predicted_eigenvalues(fp: &FibrationParams, n: i64, point: Point, sign: i32) -> Result<[Complex64; 2]> {
    let r = residue_table(fp, n, point)?;
    let ev = crate::connection::rational_eigenvalues(&r)
        .ok_or_else(|| Error::Internal("residue spectrum is not rational".into()))?;
    let e = |x: &rational::Q| Complex64::from_polar(1.0, 2.0 * PI * sign as f64 * rational::to_f64(x));
    Ok([e(&ev[0]), e(&ev[1])])
}

/// Sign s making the 0-loop eigenvalues e^{2πisλ}, read off from the first
/// sweep case with α ≠ β and a nonreal prediction; the ζ-loop must be
/// unipotent for the result to count.
pub fn calibrate_sign() -> Result<i32> {
    let fp = FibrationParams::new(3, 5, 1, 2)?;
    let n = 1;
    let z = monodromy(&fp, n, &LoopPath::around(fp.l(), Point::Zeta, 0))?;
    let u = mat_mul(&sub_identity(&z), &sub_identity(&z));
    if frob(&u) > 1e-6 {
        return Err(Error::Internal("ζ-loop is not unipotent".into()));
    }
    let m = eigenvalues(&monodromy(&fp, n, &LoopPath::around(fp.l(), Point::Zero, 0))?);
    let plus = pair_distance(&m, &predicted_eigenvalues(&fp, n, Point::Zero, 1)?);
    let minus = pair_distance(&m, &predicted_eigenvalues(&fp, n, Point::Zero, -1)?);
    match (plus < 1e-6, minus < 1e-6) {
        (true, false) => Ok(1),
        (false, true) => Ok(-1),
        _ => Err(Error::Internal(format!("sign calibration inconclusive ({plus:e}, {minus:e})"))),
    }
}

/// M_{ζ_1}···M_{ζ_{l−1}}·M_0·M_{ζ_0} for the standard loops, which is the
/// big counterclockwise circle and so the inverse of the ∞-loop.
pub fn finite_composite(fp: &FibrationParams, n: i64) -> Result<CMat2> {
    let l = fp.l();
    let a = gm_matrix(fp, n, Chart::T)?;
    let mut ms = Vec::with_capacity(l as usize + 1);
    for k in 1..l {
        ms.push(monodromy_of(&a, l, &LoopPath::around(l, Point::Zeta, k))?);
    }
    ms.push(monodromy_of(&a, l, &LoopPath::around(l, Point::Zero, 0))?);
    ms.push(monodromy_of(&a, l, &LoopPath::around(l, Point::Zeta, 0))?);
    Ok(product(&ms))
}

pub fn sub_identity(m: &CMat2) -> CMat2 {
    let mut o = *m;
    o[0][0] -= 1.0;
    o[1][1] -= 1.0;
    o
}

pub fn frob(m: &CMat2) -> f64 {
    m.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
