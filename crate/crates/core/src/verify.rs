//! The acceptance checks, runnable on one parameter set or on a sweep.

use crate::connection::{residue_spectrum_check, Point};
use crate::error::Result;
use crate::fibration::{hodge_dims, hodge_position, index_set_position, index_sets, frac_params, FibrationParams};
use crate::periods::{
    det_limit, det_limit_extrapolated, form_exponents, gross_deligne_check, ode_residual, one_period_delta0,
    one_period_delta1, two_period_delta0, two_period_delta0_crosscheck, two_period_delta1, Cycle, Form,
    GROSS_DELIGNE_TOL,
};
use crate::quad::{
    calibrate_sign, frob, monodromy_of, oracle_one_period, oracle_two_period_form, predicted_eigenvalues,
    spectrum_distance, sub_identity, LoopPath, MONODROMY_SIGN,
};
use crate::rational::{self, q, Q};
use crate::regulator::{legendre_probe, nonvanishing_check, regulator_value, Verdict};
use crate::specialfn::{contiguous_residual, Precision, Relation};
use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// (p, l) pairs of the default sweep.
pub const SWEEP_PRIMES: [(i64, i64); 6] = [(2, 3), (2, 5), (3, 5), (5, 3), (3, 7), (5, 7)];

pub const CONTIGUOUS_SAMPLES: usize = 50;
pub const CONTIGUOUS_SEED: u64 = 0x5eed_c0de;
pub const ODE_POINTS: [f64; 3] = [0.2, 0.5, 0.8];
pub const ONE_PERIOD_POINTS: [f64; 2] = [0.37, 0.81];

const SERIES_TOL: f64 = 1e-13;
const ORACLE_TOL: f64 = 1e-9;
const FD_STEP: f64 = 1e-3;
/// Stop collecting failure messages after this many.
const MAX_NOTES: usize = 8;

/// Default gates per criterion; zero means exact.
pub const GATES: [f64; 13] = [0.0, 0.0, 0.0, 0.0, 1e-10, 1e-6, 1e-5, 1e-7, 1e-9, 1e-6, 1e-7, 0.0, 1e-10];
/// Series against Euler integral for the regulator.
pub const SERIES_INTEGRAL_GATE: f64 = 1e-8;
/// Wall-time budgets in seconds.
pub const BUDGETS: [f64; 13] = [1.0, 1.0, 1.0, 5.0, 5.0, 30.0, 30.0, 300.0, 60.0, 120.0, 120.0, 60.0, 10.0];

pub const NAMES: [&str; 13] = [
    "hodge dimensions sum to l-1",
    "hodge position duality",
    "epsilon sum matches index sets",
    "residue tables and spectra",
    "contiguous relations",
    "gauss-manin ode",
    "determinant limit",
    "period oracles",
    "gamma product vs beta product",
    "monodromy",
    "regulator identity",
    "regulator non-vanishing",
    "legendre probe",
];

/// Test hooks that corrupt one input on purpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Perturb the (0,0) residue entry at 0 before comparison.
    ResidueEntry,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// When set, every numeric gate becomes max(gate, tol).
    pub tol: Option<f64>,
    pub parallel: bool,
    pub fault: Option<Fault>,
    /// Restrict to these criterion ids (1-based); empty runs all.
    pub only: Vec<u8>,
}

impl VerifyConfig {
    fn gate(&self, id: u8) -> f64 {
        let g = GATES[id as usize - 1];
        if g == 0.0 {
            return 0.0;
        }
        self.tol.map_or(g, |t| g.max(t))
    }

    fn wants(&self, id: u8) -> bool {
        self.only.is_empty() || self.only.contains(&id)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub checks: usize,
    /// Largest residual seen (0 for exact criteria).
    pub worst: f64,
    pub gate: f64,
    pub elapsed_s: f64,
    pub budget_s: f64,
    pub notes: Vec<String>,
}

impl CriterionResult {
    pub fn within_budget(&self) -> bool {
        self.elapsed_s <= self.budget_s
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<32} checks={:<5} worst={:.2e} gate={:.0e} time={:.2}s/{:.0}s",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checks,
            self.worst,
            self.gate,
            self.elapsed_s,
            self.budget_s
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub cells: Vec<FibrationParams>,
    pub criteria: Vec<CriterionResult>,
    pub pass: bool,
}

pub fn default_sweep() -> Result<Vec<FibrationParams>> {
    let mut v = Vec::new();
    for (p, l) in SWEEP_PRIMES {
        v.extend(FibrationParams::all_for(p, l)?);
    }
    v.sort();
    Ok(v)
}

#[derive(Default)]
struct Tally {
    checks: usize,
    worst: f64,
    notes: Vec<String>,
    failed: bool,
}

impl Tally {
    fn note(&mut self, msg: String) {
        self.failed = true;
        if self.notes.len() < MAX_NOTES {
            self.notes.push(msg);
        }
    }

    fn exact(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.note(msg());
        }
    }

    fn value(&mut self, r: f64, gate: f64, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if r.is_finite() {
            self.worst = self.worst.max(r);
        }
        if !(r <= gate) {
            self.note(format!("{} (residual {r:.2e})", msg()));
        }
    }

    fn error(&mut self, what: String, e: crate::error::Error) {
        self.checks += 1;
        self.note(format!("{what}: {e}"));
    }

    fn merge(&mut self, o: Tally) {
        self.checks += o.checks;
        self.worst = self.worst.max(o.worst);
        self.failed |= o.failed;
        for n in o.notes {
            if self.notes.len() < MAX_NOTES {
                self.notes.push(n);
            }
        }
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn per_cell(cells: &[FibrationParams], parallel: bool, f: impl Fn(&FibrationParams, &mut Tally) + Sync) -> Tally {
    let run = |x: &FibrationParams| {
        let mut t = Tally::default();
        f(x, &mut t);
        t
    };
    let parts: Vec<Tally> = if parallel {
        cells.par_iter().map(run).collect()
    } else {
        cells.iter().map(run).collect()
    };
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    total
}

fn c1(x: &FibrationParams, t: &mut Tally) {
    let mut total = 0;
    for n in x.ns() {
        match hodge_dims(x, n) {
            Ok(d) => {
                total += d.total();
                t.exact(d.total() == x.l() - 1, || format!("{x} n={n}: {d:?}"));
            }
            Err(e) => t.error(format!("{x} n={n}"), e),
        }
    }
    t.exact(total == (x.l() - 1) * (x.p() - 1), || format!("{x}: total {total}"));
}

fn c2(x: &FibrationParams, t: &mut Tally) {
    for h in x.units() {
        match (hodge_position(x, h), hodge_position(x, x.lp() - h)) {
            (Ok(a), Ok(b)) => t.exact(a + b == 2 && a <= 2, || format!("{x} h={h}: {a} + {b}")),
            (Err(e), _) | (_, Err(e)) => t.error(format!("{x} h={h}"), e),
        }
    }
}

fn c3(x: &FibrationParams, t: &mut Tally) {
    for h in x.units() {
        match (hodge_position(x, h), index_set_position(x, h)) {
            (Ok(a), Ok(b)) => t.exact(a == b, || format!("{x} h={h}: eps {a}, sets {b}")),
            (Err(e), _) | (_, Err(e)) => t.error(format!("{x} h={h}"), e),
        }
    }
}

fn c4(x: &FibrationParams, t: &mut Tally, fault: Option<Fault>) {
    for n in x.ns() {
        match residue_spectrum_check(x, n) {
            Ok(mut r) => {
                if fault == Some(Fault::ResidueEntry) {
                    let row = r.rows.iter_mut().find(|r| r.point == Point::Zero).expect("row at 0");
                    row.residue[0][0] += q(1, 1000);
                    row.matches_table = false;
                }
                for row in &r.rows {
                    let ok = row.matches_table && row.pass;
                    t.exact(ok, || format!("{x} n={n} at {}: residue differs from table or spectrum out of [0,1)", row.point));
                }
            }
            Err(e) => t.error(format!("{x} n={n}"), e),
        }
    }
}

fn random_q(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Q {
    loop {
        let den = rng.gen_range(2..=12);
        let num = rng.gen_range(lo * den + 1..hi * den);
        let v = q(num, den);
        if !rational::is_integer(&v) {
            return v;
        }
    }
}

fn c5(gate: f64, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(CONTIGUOUS_SEED);
    for _ in 0..CONTIGUOUS_SAMPLES {
        let a = random_q(&mut rng, 0, 2);
        let b = random_q(&mut rng, 0, 2);
        let c = random_q(&mut rng, 1, 3);
        let s: f64 = rng.gen_range(0.05..0.95);
        let tt = (s * 1000.0).round() / 1000.0;
        for rel in Relation::ALL {
            let tag = || format!("{rel:?} a={} b={} c={} t={tt}", rational::fmt_q(&a), rational::fmt_q(&b), rational::fmt_q(&c));
            match contiguous_residual(rel, &a, &b, &c, tt) {
                Ok(v) => t.value(v.abs(), gate, tag),
                Err(e) => t.error(tag(), e),
            }
        }
    }
}

fn c6(x: &FibrationParams, gate: f64, t: &mut Tally) {
    if x.p() > 3 {
        return;
    }
    for n in x.ns() {
        for s in ODE_POINTS {
            match ode_residual(x, n, s, FD_STEP, SERIES_TOL) {
                Ok(r) => t.value(r, gate, || format!("{x} n={n} t={s}")),
                Err(e) => t.error(format!("{x} n={n} t={s}"), e),
            }
        }
    }
}

fn c7(x: &FibrationParams, gate: f64, t: &mut Tally) {
    for n in x.ns() {
        match (det_limit(x, n), det_limit_extrapolated(x, n, SERIES_TOL)) {
            (Ok(d), Ok(r)) => t.value(rel(r.value, d.value), gate, || format!("{x} n={n}")),
            (Err(e), _) | (_, Err(e)) => t.error(format!("{x} n={n}"), e),
        }
    }
}

/// (m, n) with m ∈ I¹(n) for which the cycle's integral converges.
pub fn admissible_pairs(x: &FibrationParams, cycle: Cycle) -> Result<Vec<(i64, i64)>> {
    let mut v = Vec::new();
    for n in x.ns() {
        for m in index_sets(x, n)?.i1 {
            let f = frac_params(x, n, m)?;
            let ok = match cycle {
                Cycle::Delta0 => f.shift().is_positive(),
                Cycle::Delta1 => f.mu > &f.alpha - &f.beta && f.mu > Q::zero(),
            };
            if ok {
                v.push((m, n));
            }
        }
    }
    Ok(v)
}

fn c8(x: &FibrationParams, gate: f64, t: &mut Tally) {
    for n in x.ns() {
        for form in [Form::Omega, Form::Eta] {
            let e = match form_exponents(x, n, form) {
                Ok(e) => e,
                Err(err) => {
                    t.error(format!("{x} n={n}"), err);
                    continue;
                }
            };
            for s in ONE_PERIOD_POINTS {
                for cycle in [Cycle::Delta0, Cycle::Delta1] {
                    let closed = match cycle {
                        Cycle::Delta0 => one_period_delta0(x, n, e, s, SERIES_TOL),
                        Cycle::Delta1 => one_period_delta1(x, n, e, s, SERIES_TOL),
                    };
                    let tag = || format!("{x} n={n} {form:?} {cycle:?} t={s}");
                    match (closed, oracle_one_period(x, n, e, cycle, s, ORACLE_TOL * 1e-3)) {
                        (Ok(a), Ok(b)) => t.value(rel(a.value, b.value), gate, tag),
                        (Err(err), _) | (_, Err(err)) => t.error(tag(), err),
                    }
                }
            }
        }
    }
    for cycle in [Cycle::Delta0, Cycle::Delta1] {
        let pairs = match admissible_pairs(x, cycle) {
            Ok(p) => p,
            Err(e) => {
                t.error(format!("{x}"), e);
                continue;
            }
        };
        for (m, n) in pairs {
            let closed = match cycle {
                Cycle::Delta0 => two_period_delta0(x, m, n, SERIES_TOL, Precision::Extended),
                Cycle::Delta1 => two_period_delta1(x, m, n),
            };
            let closed = match closed {
                Ok(c) => c,
                Err(e) => {
                    t.error(format!("{x} ({m},{n}) {cycle:?}"), e);
                    continue;
                }
            };
            for (k, form) in [Form::Omega, Form::Eta].into_iter().enumerate() {
                let tag = || format!("{x} ({m},{n}) {cycle:?} {form:?}");
                match oracle_two_period_form(x, m, n, cycle, form, ORACLE_TOL) {
                    Ok(o) => t.value(rel(closed[k].value, o.value), gate, tag),
                    Err(e) => t.error(tag(), e),
                }
            }
        }
    }
}

fn c9(x: &FibrationParams, gate: f64, t: &mut Tally) {
    match gross_deligne_check(x) {
        Ok(r) => {
            for row in r.rows {
                let tag = || format!("{x} h={}", row.h);
                t.value(row.shift_residual, gate, tag);
                t.exact(row.root_of_unity.is_some() || gate > GROSS_DELIGNE_TOL, || {
                    format!("{x} h={}: no root of unity of order {}", row.h, 2 * x.lp())
                });
            }
        }
        Err(e) => t.error(format!("{x}"), e),
    }
}

fn c10(x: &FibrationParams, gate: f64, t: &mut Tally) {
    let l = x.l();
    for n in x.ns() {
        let a = match crate::connection::gm_matrix(x, n, crate::connection::Chart::T) {
            Ok(a) => a,
            Err(e) => {
                t.error(format!("{x} n={n}"), e);
                continue;
            }
        };
        for k in 0..l {
            let tag = || format!("{x} n={n} zeta^{k} loop");
            match monodromy_of(&a, l, &LoopPath::around(l, Point::Zeta, k)) {
                Ok(m) => {
                    let s = sub_identity(&m);
                    let sq = [
                        [s[0][0] * s[0][0] + s[0][1] * s[1][0], s[0][0] * s[0][1] + s[0][1] * s[1][1]],
                        [s[1][0] * s[0][0] + s[1][1] * s[1][0], s[1][0] * s[0][1] + s[1][1] * s[1][1]],
                    ];
                    t.value(frob(&sq), gate, tag);
                }
                Err(e) => t.error(tag(), e),
            }
        }
        for point in [Point::Zero, Point::Infinity] {
            let tag = || format!("{x} n={n} {point} loop");
            let m = monodromy_of(&a, l, &LoopPath::around(l, point, 0));
            let want = predicted_eigenvalues(x, n, point, MONODROMY_SIGN);
            match (m, want) {
                (Ok(m), Ok(w)) => t.value(spectrum_distance(&m, &w), gate, tag),
                (Err(e), _) | (_, Err(e)) => t.error(tag(), e),
            }
        }
    }
}

fn c11(x: &FibrationParams, gate: f64, series_gate: f64, t: &mut Tally) {
    let pairs = match admissible_pairs(x, Cycle::Delta0) {
        Ok(p) => p,
        Err(e) => return t.error(format!("{x}"), e),
    };
    for (m, n) in pairs {
        let f = match frac_params(x, n, m) {
            Ok(f) => f,
            Err(e) => {
                t.error(format!("{x} ({m},{n})"), e);
                continue;
            }
        };
        if f.mu <= &f.alpha - &f.beta {
            continue;
        }
        let tag = || format!("{x} ({m},{n})");
        match (regulator_value(x, m, n), two_period_delta0_crosscheck(x, m, n, 1e-12)) {
            (Ok(r), Ok((_, integral))) => {
                t.value(rel(r.value, integral.value), series_gate, || format!("{} series vs integral", tag()));
                match oracle_two_period_form(x, m, n, Cycle::Delta0, Form::Omega, ORACLE_TOL) {
                    Ok(o) => t.value(rel(r.value, o.value), gate, || format!("{} vs quadrature", tag())),
                    Err(e) => t.error(tag(), e),
                }
                t.exact(r.re() > 0.0, || format!("{}: R not positive", tag()));
            }
            (Err(e), _) | (_, Err(e)) => t.error(tag(), e),
        }
    }
}

fn c12(x: &FibrationParams, t: &mut Tally) {
    if x.p() >= x.l() || x.a() + x.b() == x.p() {
        return;
    }
    match nonvanishing_check(x) {
        Ok(r) => {
            for row in r.rows {
                t.exact(row.verdict == Verdict::Pass, || format!("{x} n={}: {:?}", row.n, row.verdict));
            }
        }
        Err(e) => t.error(format!("{x}"), e),
    }
}

// mpmath, 30 digits
const V_LEGENDRE: f64 = 0.344_460_647_301_881_909_90;

fn c13(gate: f64, t: &mut Tally) {
    match legendre_probe() {
        Ok(r) => {
            t.value(r.value.err / r.value.re(), 1e-12, || "V not resolved to 12 digits".into());
            t.value((r.value.re() - V_LEGENDRE).abs(), 1e-12, || "V differs from the reference".into());
            t.value(r.precision_gap, gate, || "precision doubling moved V".into());
            t.value(r.assembly_gap, gate, || "assembly paths disagree".into());
        }
        Err(e) => t.error("legendre probe".into(), e),
    }
}

fn finish(id: u8, gate: f64, start: Instant, t: Tally) -> CriterionResult {
    CriterionResult {
        id,
        name: NAMES[id as usize - 1].to_string(),
        pass: !t.failed,
        checks: t.checks,
        worst: t.worst,
        gate,
        elapsed_s: start.elapsed().as_secs_f64(),
        budget_s: BUDGETS[id as usize - 1],
        notes: t.notes,
    }
}

/// Runs criterion `id` on `cells`.
pub fn run_criterion(id: u8, cells: &[FibrationParams], cfg: &VerifyConfig) -> CriterionResult {
    let gate = cfg.gate(id);
    let start = Instant::now();
    let par = cfg.parallel;
    let t = match id {
        1 => per_cell(cells, par, c1),
        2 => per_cell(cells, par, c2),
        3 => per_cell(cells, par, c3),
        4 => per_cell(cells, par, |x, t| c4(x, t, cfg.fault)),
        5 => {
            let mut t = Tally::default();
            c5(gate, &mut t);
            t
        }
        6 => per_cell(cells, par, |x, t| c6(x, gate, t)),
        7 => per_cell(cells, par, |x, t| c7(x, gate, t)),
        8 => per_cell(cells, par, |x, t| c8(x, gate, t)),
        9 => per_cell(cells, par, |x, t| c9(x, gate, t)),
        10 => {
            let mut t = per_cell(cells, par, |x, t| c10(x, gate, t));
            match calibrate_sign() {
                Ok(s) => t.exact(s == MONODROMY_SIGN, || format!("calibrated sign {s} differs from {MONODROMY_SIGN}")),
                Err(e) => t.error("sign calibration".into(), e),
            }
            t
        }
        11 => {
            let series_gate = cfg.tol.map_or(SERIES_INTEGRAL_GATE, |t| t.max(SERIES_INTEGRAL_GATE));
            per_cell(cells, par, |x, t| c11(x, gate, series_gate, t))
        }
        12 => per_cell(cells, par, c12),
        13 => {
            let mut t = Tally::default();
            c13(gate, &mut t);
            t
        }
        _ => {
            let mut t = Tally::default();
            t.note(format!("unknown criterion {id}"));
            t
        }
    };
    finish(id, gate, start, t)
}

pub fn verify(cells: &[FibrationParams], cfg: &VerifyConfig) -> VerifyReport {
    let criteria: Vec<CriterionResult> = (1..=13u8)
        .filter(|id| cfg.wants(*id))
        .map(|id| run_criterion(id, cells, cfg))
        .collect();
    VerifyReport {
        schema_version: 1,
        cells: cells.to_vec(),
        pass: criteria.iter().all(|c| c.pass),
        criteria,
    }
}
