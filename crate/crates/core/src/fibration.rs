//! Exact combinatorics of the surface family: eigencomponent data, the
//! ε-function, Hodge positions, Hodge numbers and basis index sets.

use crate::error::{Error, Result};
use crate::rational::{self, ceil_i64, floor_i64, frac, gcd_i64, mod_floor, q, qi, Q};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

const PRIME_CAP: i64 = 1_000_000;

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The integers (p, l, a, b) of y^p = x^a (1−x)^b (t^l − x)^c with c = p − b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct FibrationParams {
    p: i64,
    l: i64,
    a: i64,
    b: i64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    p: i64,
    l: i64,
    a: i64,
    b: i64,
    c: i64,
}

impl TryFrom<RawParams> for FibrationParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        let fp = FibrationParams::new(r.p, r.l, r.a, r.b)?;
        if r.c != fp.c() {
            return Err(Error::InvalidParams(format!("c must equal p - b = {}", fp.c())));
        }
        Ok(fp)
    }
}

impl From<FibrationParams> for RawParams {
    fn from(f: FibrationParams) -> Self {
        RawParams {
            p: f.p,
            l: f.l,
            a: f.a,
            b: f.b,
            c: f.c(),
        }
    }
}

impl FibrationParams {
    pub fn new(p: i64, l: i64, a: i64, b: i64) -> Result<Self> {
        for (name, v) in [("p", p), ("l", l)] {
            if v > PRIME_CAP {
                return Err(Error::InvalidParams(format!("{name} exceeds the trial-division cap {PRIME_CAP}")));
            }
            if !is_prime(v) {
                return Err(Error::InvalidParams(format!("{name} must be prime")));
            }
        }
        if p == l {
            return Err(Error::InvalidParams("p and l must be distinct".into()));
        }
        if !(0 < a && a < p) {
            return Err(Error::InvalidParams(format!("a must satisfy 0 < a < p, got a={a}")));
        }
        if !(0 < b && b < p) {
            return Err(Error::InvalidParams(format!("b must satisfy 0 < b < p, got b={b}")));
        }
        Ok(FibrationParams { p, l, a, b })
    }

    pub fn p(&self) -> i64 {
        self.p
    }
    pub fn l(&self) -> i64 {
        self.l
    }
    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.p - self.b
    }
    pub fn lp(&self) -> i64 {
        self.l * self.p
    }

    /// All n in 1..p.
    pub fn ns(&self) -> impl Iterator<Item = i64> {
        1..self.p
    }

    /// All units h of ℤ/lpℤ, as representatives in 1..lp.
    pub fn units(&self) -> Vec<i64> {
        let lp = self.lp();
        (1..lp).filter(|h| gcd_i64(*h, lp) == 1).collect()
    }

    pub fn check_n(&self, n: i64) -> Result<()> {
        if !(1..self.p).contains(&n) {
            return Err(Error::InvalidParams(format!("n must lie in 1..{}, got {n}", self.p - 1)));
        }
        Ok(())
    }

    pub fn check_h(&self, h: i64) -> Result<()> {
        if gcd_i64(h, self.lp()) != 1 {
            return Err(Error::InvalidParams(format!(
                "h = {h} is not a unit mod lp = {}",
                self.lp()
            )));
        }
        Ok(())
    }

    /// (m, n) = (h mod l, h mod p) with m in 1..l and n in 1..p.
    pub fn char_components(&self, h: i64) -> Result<(i64, i64)> {
        self.check_h(h)?;
        Ok((mod_floor(h, self.l), mod_floor(h, self.p)))
    }

    /// The unit h with h ≡ m mod l and h ≡ n mod p.
    pub fn char_index(&self, m: i64, n: i64) -> Result<i64> {
        let lp = self.lp();
        let h = (0..lp)
            .find(|h| mod_floor(*h, self.l) == mod_floor(m, self.l) && mod_floor(*h, self.p) == mod_floor(n, self.p))
            .expect("CRT solution exists for coprime moduli");
        self.check_h(h)?;
        Ok(h)
    }

    /// Every admissible (a, b) for the given primes.
    pub fn all_for(p: i64, l: i64) -> Result<Vec<FibrationParams>> {
        let mut v = Vec::new();
        for a in 1..p {
            for b in 1..p {
                v.push(FibrationParams::new(p, l, a, b)?);
            }
        }
        Ok(v)
    }
}

impl fmt::Display for FibrationParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, l={}, a={}, b={})", self.p, self.l, self.a, self.b)
    }
}

/// α = {na/p}, β = {nb/p}, γ = 1 − β and μ for an eigencomponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FracParams {
    #[serde(with = "rational::serde_q")]
    pub alpha: Q,
    #[serde(with = "rational::serde_q")]
    pub beta: Q,
    #[serde(with = "rational::serde_q")]
    pub gamma: Q,
    #[serde(with = "rational::serde_q")]
    pub mu: Q,
}

impl FracParams {
    /// β − α + μ, the recurring shifted parameter.
    pub fn shift(&self) -> Q {
        &self.beta - &self.alpha + &self.mu
    }
}

/// Fractional parameters for the form ω_{m,n}; μ = m/l is not reduced.
pub fn frac_params(fp: &FibrationParams, n: i64, m: i64) -> Result<FracParams> {
    fp.check_n(n)?;
    let alpha = frac(&q(n * fp.a, fp.p));
    let beta = frac(&q(n * fp.b, fp.p));
    let gamma = qi(1) - &beta;
    Ok(FracParams {
        alpha,
        beta,
        gamma,
        mu: q(m, fp.l),
    })
}

/// Fractional parameters for the character h, with μ = {h/l}.
pub fn char_frac_params(fp: &FibrationParams, h: i64) -> Result<FracParams> {
    let (m, n) = fp.char_components(h)?;
    frac_params(fp, n, m)
}

/// ε(i) counted with multiplicity over the six congruence classes.
pub fn eps(fp: &FibrationParams, i: i64) -> i64 {
    let (p, l, a, b) = (fp.p, fp.l, fp.a, fp.b);
    let lp = fp.lp();
    let i = mod_floor(i, lp);
    let plus = [l * b, p, l * (p - b), l * (b - a) + p];
    let minus = [l * b + p, l * (p - a) + p];
    let hits = |v: &[i64]| v.iter().filter(|x| mod_floor(**x, lp) == i).count() as i64;
    hits(&plus) - hits(&minus)
}

/// The nonzero entries of ε as (i, ε(i)), i in 0..lp.
pub fn eps_support(fp: &FibrationParams) -> Vec<(i64, i64)> {
    (0..fp.lp())
        .map(|i| (i, eps(fp, i)))
        .filter(|(_, e)| *e != 0)
        .collect()
}

/// p(h) = Σ_i ε(i) {−hi/lp}.
pub fn hodge_position(fp: &FibrationParams, h: i64) -> Result<u8> {
    fp.check_h(h)?;
    let lp = fp.lp();
    let mut s = Q::zero();
    for (i, e) in eps_support(fp) {
        s += qi(e) * frac(&q(-h * i, lp));
    }
    match rational::to_i64(&s) {
        Some(v) if (0..=2).contains(&v) => Ok(v as u8),
        _ => Err(Error::Internal(format!(
            "Hodge position sum {} for h={h} is not in {{0,1,2}}",
            rational::fmt_q(&s)
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeDims {
    pub f2: i64,
    pub gr1: i64,
    pub gr0: i64,
}

impl HodgeDims {
    pub fn total(&self) -> i64 {
        self.f2 + self.gr1 + self.gr0
    }
}

struct Floors {
    al: i64,
    oml: i64,
    ombl: i64,
    bl: i64,
    amb: Q,
}

fn floors(fp: &FibrationParams, n: i64) -> Result<(FracParams, Floors)> {
    let f = frac_params(fp, n, 0)?;
    let l = qi(fp.l);
    let one = qi(1);
    let fl = Floors {
        al: floor_i64(&(&f.alpha * &l)),
        oml: floor_i64(&((&one - &f.alpha) * &l)),
        ombl: floor_i64(&((&one - &f.beta) * &l)),
        bl: floor_i64(&(&f.beta * &l)),
        amb: (&f.alpha - &f.beta) * &l,
    };
    Ok((f, fl))
}

pub fn hodge_dims(fp: &FibrationParams, n: i64) -> Result<HodgeDims> {
    let (_, fl) = floors(fp, n)?;
    let f2 = fl.al.min(fl.ombl) - 0.max(floor_i64(&fl.amb));
    let gr1 = (fl.al - fl.ombl).abs() + floor_i64(&fl.amb.abs());
    let gr0 = fl.oml.min(fl.bl) - 0.max(floor_i64(&(-&fl.amb)));
    Ok(HodgeDims { f2, gr1, gr0 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSets {
    #[serde(rename = "I1")]
    pub i1: Vec<i64>,
    #[serde(rename = "I2")]
    pub i2: Vec<i64>,
}

pub fn index_sets(fp: &FibrationParams, n: i64) -> Result<IndexSets> {
    let (f, fl) = floors(fp, n)?;
    let lo2 = 1.max(ceil_i64(&fl.amb));
    let hi = fl.al.min(fl.ombl);
    let i2: Vec<i64> = (lo2..=hi).collect();
    let top = fl.al.max(fl.ombl);
    let mut i1 = Vec::new();
    if f.alpha < f.beta {
        let k = floor_i64(&(-&fl.amb));
        i1.extend(-k..=-1);
    }
    i1.extend(1..=top);
    Ok(IndexSets { i1, i2 })
}

/// Twist k of Gr⁰ of the canonical extension, Gr⁰ ≅ O(k).
pub fn gr0_twist(fp: &FibrationParams, n: i64) -> Result<i64> {
    let (f, fl) = floors(fp, n)?;
    let l = qi(fp.l);
    let one = qi(1);
    let bma_floor = floor_i64(&(-&fl.amb));
    let k = match (fl.al >= fl.ombl, f.alpha <= f.beta) {
        (true, true) => -ceil_i64(&((&one - &f.alpha) * &l)) + bma_floor,
        (true, false) => -ceil_i64(&((&one - &f.alpha) * &l)),
        (false, true) => bma_floor - ceil_i64(&(&f.beta * &l)),
        (false, false) => -ceil_i64(&(&f.beta * &l)),
    };
    Ok(k)
}

/// The Hodge side read off the index sets: 2 if m ≡ I², 1 if m ≡ I¹ \ I², else 0.
pub fn index_set_position(fp: &FibrationParams, h: i64) -> Result<u8> {
    let (m, n) = fp.char_components(h)?;
    let sets = index_sets(fp, n)?;
    let hit = |v: &[i64]| v.iter().any(|x| mod_floor(*x, fp.l) == m);
    Ok(if hit(&sets.i2) {
        2
    } else if hit(&sets.i1) {
        1
    } else {
        0
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmRankRow {
    pub n: i64,
    pub dims: HodgeDims,
    pub total: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmRankReport {
    pub params: FibrationParams,
    pub rows: Vec<CmRankRow>,
    pub total: i64,
    pub expected: i64,
    pub offending_n: Vec<i64>,
    pub pass: bool,
}

pub fn cm_rank_check(fp: &FibrationParams) -> Result<CmRankReport> {
    let mut rows = Vec::new();
    let mut offending_n = Vec::new();
    for n in fp.ns() {
        let dims = hodge_dims(fp, n)?;
        if dims.total() != fp.l - 1 {
            offending_n.push(n);
        }
        rows.push(CmRankRow {
            n,
            dims,
            total: dims.total(),
        });
    }
    let total: i64 = rows.iter().map(|r| r.total).sum();
    let expected = (fp.l - 1) * (fp.p - 1);
    Ok(CmRankReport {
        params: *fp,
        pass: offending_n.is_empty() && total == expected,
        rows,
        total,
        expected,
        offending_n,
    })
}

/// True when (α − β)·l is an integer; only possible for α = β.
pub fn amb_is_integral(fp: &FibrationParams, n: i64) -> Result<bool> {
    let (_, fl) = floors(fp, n)?;
    Ok(rational::is_integer(&fl.amb))
}

/// Nonnegative rational check used by tests and reports.
pub fn in_unit_interval(x: &Q) -> bool {
    !x.is_negative() && *x < qi(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: i64, l: i64, a: i64, b: i64) -> FibrationParams {
        FibrationParams::new(p, l, a, b).unwrap()
    }

    #[test]
    fn validation() {
        let e = FibrationParams::new(4, 5, 1, 1).unwrap_err();
        assert_eq!(e.to_string(), "invalid parameters: p must be prime");
        assert!(FibrationParams::new(3, 3, 1, 1).is_err());
        assert!(FibrationParams::new(3, 5, 0, 1).is_err());
        assert!(FibrationParams::new(3, 5, 1, 3).is_err());
        assert_eq!(fp(5, 3, 2, 1).c(), 4);
    }

    #[test]
    fn frac_params_examples() {
        let f = frac_params(&fp(3, 5, 1, 1), 1, 1).unwrap();
        assert_eq!((f.alpha.clone(), f.beta.clone(), f.gamma.clone(), f.mu.clone()), (q(1, 3), q(1, 3), q(2, 3), q(1, 5)));
        let f = frac_params(&fp(2, 3, 1, 1), 1, 1).unwrap();
        assert_eq!((f.alpha, f.beta, f.mu), (q(1, 2), q(1, 2), q(1, 3)));
        let f = frac_params(&fp(5, 3, 2, 1), 3, 1).unwrap();
        assert_eq!((f.alpha, f.beta), (q(1, 5), q(3, 5)));
    }

    #[test]
    fn eps_examples() {
        let f = fp(3, 5, 1, 1);
        assert_eq!(eps(&f, 5), 1);
        // 3 ≡ p and 3 ≡ l(b−a)+p coincide
        assert_eq!(eps(&f, 3), 2);
        assert_eq!(eps(&f, 10), 1);
        assert_eq!(eps(&f, 8), -1);
        assert_eq!(eps(&f, 13), -1);
        let g = fp(2, 3, 1, 1);
        assert_eq!(eps_support(&g), vec![(2, 2), (3, 2), (5, -2)]);
    }

    #[test]
    fn hodge_positions_by_hand() {
        let g = fp(2, 3, 1, 1);
        assert_eq!(hodge_position(&g, 1).unwrap(), 2);
        assert_eq!(hodge_position(&g, 5).unwrap(), 0);
        let f = fp(3, 5, 1, 1);
        assert_eq!(hodge_position(&f, 1).unwrap(), 2);
        assert_eq!(hodge_position(&f, 4).unwrap(), 0);
        assert!(hodge_position(&f, 5).is_err());
    }

    #[test]
    fn dims_and_sets() {
        let f = fp(3, 5, 1, 1);
        assert_eq!(hodge_dims(&f, 1).unwrap(), HodgeDims { f2: 1, gr1: 2, gr0: 1 });
        assert_eq!(index_sets(&f, 1).unwrap(), IndexSets { i1: vec![1, 2, 3], i2: vec![1] });
        let g = fp(2, 3, 1, 1);
        assert_eq!(hodge_dims(&g, 1).unwrap().gr1, 0);
        assert_eq!(index_sets(&g, 1).unwrap(), IndexSets { i1: vec![1], i2: vec![1] });
    }

    #[test]
    fn cm_rank_examples() {
        for (f, t) in [(fp(3, 5, 1, 1), 8), (fp(2, 3, 1, 1), 2), (fp(5, 3, 2, 3), 8)] {
            let r = cm_rank_check(&f).unwrap();
            assert!(r.pass && r.total == t, "{f}");
        }
    }

    #[test]
    fn degree_identity_and_serde() {
        let f = fp(5, 3, 2, 1);
        let k = gr0_twist(&f, 1).unwrap();
        assert_eq!(hodge_dims(&f, 1).unwrap().gr0, -k - 1);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"p":5,"l":3,"a":2,"b":1,"c":4}"#);
        let back: FibrationParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<FibrationParams>(r#"{"p":4,"l":3,"a":1,"b":1,"c":3}"#).is_err());
    }
}

#[cfg(test)]
mod sweep_tests {
    use super::*;

    fn sweep() -> Vec<FibrationParams> {
        [(2, 3), (2, 5), (3, 5), (5, 3), (3, 7), (5, 7)]
            .iter()
            .flat_map(|(p, l)| FibrationParams::all_for(*p, *l).unwrap())
            .collect()
    }

    #[test]
    fn hodge_consistency_over_sweep() {
        for f in sweep() {
            assert_eq!(eps_support(&f).iter().map(|x| x.1).sum::<i64>(), 2);
            assert_eq!(eps(&f, 0), 0);
            for h in f.units() {
                let ph = hodge_position(&f, h).unwrap();
                let pm = hodge_position(&f, f.lp() - h).unwrap();
                assert_eq!(ph + pm, 2, "{f} h={h}");
                assert_eq!(ph, index_set_position(&f, h).unwrap(), "{f} h={h}");
            }
            for n in f.ns() {
                let d = hodge_dims(&f, n).unwrap();
                let s = index_sets(&f, n).unwrap();
                assert_eq!(d.total(), f.l() - 1);
                assert_eq!(s.i2.len() as i64, d.f2, "{f} n={n}");
                assert_eq!(s.i1.len() as i64, d.f2 + d.gr1, "{f} n={n}");
                assert_eq!(d.f2, hodge_dims(&f, f.p() - n).unwrap().gr0);
                let k = gr0_twist(&f, n).unwrap();
                assert_eq!(d.gr0, -k - 1, "{f} n={n}");
            }
        }
    }
}
