use crate::render::{self, num, sci, verdict, Section};
use crate::{CliError, CommonArgs, OutputFormat, VerifyArgs};
use cmreg::connection::{
    fmt_qmat, gm_matrix, residue_matrix, residue_spectrum_check, residue_table, Chart, Point,
};
use cmreg::fibration::{
    char_frac_params, hodge_dims, hodge_position, index_set_position, index_sets, FibrationParams,
    HodgeDims, IndexSets,
};
use cmreg::periods::{gross_deligne_check, Cycle, GrossDeligneRow};
use cmreg::quad::{
    eigenvalues, frob, monodromy_of, predicted_eigenvalues, spectrum_distance, sub_identity, LoopPath,
    MONODROMY_SIGN,
};
use cmreg::rational::fmt_q;
use cmreg::regulator::{
    criterion_ratios, is_good_m, legendre_probe, nonvanishing_check, omega_cap, regulator_value_with,
    rho_r_pairing, CriterionReport, CycloElem, LegendreReport, NonvanishingReport, REGULATOR_TOL,
};
use cmreg::verify::{admissible_pairs, default_sweep, verify as run_verify, Fault, VerifyConfig, GATES};
use cmreg::NumValue;
use num_complex::Complex64;
use serde::Serialize;

const SCHEMA_VERSION: u32 = 1;
/// Gate for the monodromy rows of `gm`, shared with the sweep.
const MONODROMY_GATE: f64 = GATES[9];
/// Agreement required between the Legendre value and the regulator route.
const LEGENDRE_GATE: f64 = GATES[12];

type Outcome = Result<bool, CliError>;

fn ns(fp: &FibrationParams, n: Option<i64>) -> Result<Vec<i64>, CliError> {
    match n {
        Some(n) => {
            fp.check_n(n)?;
            Ok(vec![n])
        }
        None => Ok(fp.ns().collect()),
    }
}

fn hs(fp: &FibrationParams, h: Option<i64>) -> Result<Vec<i64>, CliError> {
    match h {
        Some(h) => {
            fp.check_h(h)?;
            Ok(vec![h])
        }
        None => Ok(fp.units()),
    }
}

fn join(v: &[i64]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", s.join(","))
}

#[derive(Serialize)]
struct HodgeRow {
    n: i64,
    dims: HodgeDims,
    index_sets: IndexSets,
}

#[derive(Serialize)]
struct PositionRow {
    h: i64,
    m: i64,
    n: i64,
    from_eps: u8,
    from_sets: u8,
}

#[derive(Serialize)]
struct HodgeReport {
    schema_version: u32,
    params: FibrationParams,
    components: Vec<HodgeRow>,
    positions: Vec<PositionRow>,
    pass: bool,
}

pub fn hodge(args: &CommonArgs) -> Outcome {
    let fp = args.params()?;
    let mut components = Vec::new();
    for n in ns(&fp, args.n)? {
        components.push(HodgeRow {
            n,
            dims: hodge_dims(&fp, n)?,
            index_sets: index_sets(&fp, n)?,
        });
    }
    let mut positions = Vec::new();
    for h in hs(&fp, args.h)? {
        let (m, n) = fp.char_components(h)?;
        positions.push(PositionRow {
            h,
            m,
            n,
            from_eps: hodge_position(&fp, h)?,
            from_sets: index_set_position(&fp, h)?,
        });
    }
    let pass = positions.iter().all(|r| r.from_eps == r.from_sets)
        && components.iter().all(|c| c.dims.total() == fp.l() - 1);
    let report = HodgeReport {
        schema_version: SCHEMA_VERSION,
        params: fp,
        components,
        positions,
        pass,
    };

    let mut dims = Section::new(format!("hodge numbers {fp}"), vec!["n", "f2", "gr1", "gr0", "total", "I1", "I2"]);
    for c in &report.components {
        dims.push(vec![
            c.n.to_string(),
            c.dims.f2.to_string(),
            c.dims.gr1.to_string(),
            c.dims.gr0.to_string(),
            c.dims.total().to_string(),
            join(&c.index_sets.i1),
            join(&c.index_sets.i2),
        ]);
    }
    let mut pos = Section::new("hodge positions", vec!["h", "m", "n", "eps", "sets", "check"]);
    for r in &report.positions {
        pos.push(vec![
            r.h.to_string(),
            r.m.to_string(),
            r.n.to_string(),
            r.from_eps.to_string(),
            r.from_sets.to_string(),
            verdict(r.from_eps == r.from_sets),
        ]);
    }
    render::emit(args.output, &report, &[dims, pos], &[]);
    Ok(pass)
}

#[derive(Serialize)]
struct PeriodRow {
    #[serde(flatten)]
    row: GrossDeligneRow,
    alpha: String,
    beta: String,
    mu: String,
}

#[derive(Serialize)]
struct PeriodReport {
    schema_version: u32,
    params: FibrationParams,
    rows: Vec<PeriodRow>,
    pass: bool,
}

pub fn period(args: &CommonArgs) -> Outcome {
    let fp = args.params()?;
    let wanted = hs(&fp, args.h)?;
    let gd = gross_deligne_check(&fp)?;
    let mut rows = Vec::new();
    for row in gd.rows.into_iter().filter(|r| wanted.contains(&r.h)) {
        let f = char_frac_params(&fp, row.h)?;
        rows.push(PeriodRow {
            alpha: fmt_q(&f.alpha),
            beta: fmt_q(&f.beta),
            mu: fmt_q(&f.mu),
            row,
        });
    }
    let pass = rows.iter().all(|r| r.row.pass);
    let report = PeriodReport {
        schema_version: SCHEMA_VERSION,
        params: fp,
        rows,
        pass,
    };

    let mut s = Section::new(
        format!("gamma products {fp}"),
        vec!["h", "m", "n", "alpha", "beta", "mu", "hodge", "gamma product", "beta product", "shift", "residual", "root", "check"],
    );
    for r in &report.rows {
        let g = &r.row;
        s.push(vec![
            g.h.to_string(),
            g.m.to_string(),
            g.n.to_string(),
            r.alpha.clone(),
            r.beta.clone(),
            r.mu.clone(),
            format!("{}/{}", g.hodge_from_eps, g.hodge_from_sets),
            num(&g.gamma_product),
            num(&g.bb_product),
            fmt_q(&g.shift),
            sci(g.shift_residual),
            g.root_of_unity.map_or("-".into(), |k| k.to_string()),
            verdict(g.pass),
        ]);
    }
    render::emit(args.output, &report, &[s], &[]);
    Ok(pass)
}

#[derive(Serialize)]
struct RegulatorRow {
    m: i64,
    n: i64,
    regulator: NumValue,
    omega: NumValue,
    ratio: NumValue,
    good_m: bool,
    pairing: Option<NumValue>,
}

#[derive(Serialize)]
struct RegulatorReport {
    schema_version: u32,
    params: FibrationParams,
    tol: f64,
    precision: cmreg::Precision,
    values: Vec<RegulatorRow>,
    nonvanishing: Option<NonvanishingReport>,
    criterion: Option<CriterionReport>,
    legendre: Option<LegendreReport>,
    notes: Vec<String>,
    pass: bool,
}

fn regulator_row(fp: &FibrationParams, m: i64, n: i64, tol: f64, args: &CommonArgs) -> Result<RegulatorRow, CliError> {
    let regulator = regulator_value_with(fp, m, n, tol, args.precision())?;
    let omega = omega_cap(fp, m, n)?;
    let good_m = is_good_m(fp, m, n)?;
    let pairing = if good_m {
        Some(rho_r_pairing(fp, m, n, &CycloElem::zeta(fp.lp()))?)
    } else {
        None
    };
    Ok(RegulatorRow {
        m,
        n,
        regulator,
        omega,
        ratio: regulator / omega,
        good_m,
        pairing,
    })
}

pub fn regulator(args: &CommonArgs) -> Outcome {
    let fp = args.params()?;
    let tol = args.tol.unwrap_or(REGULATOR_TOL);
    let mut notes = Vec::new();
    let mut values = Vec::new();
    match (args.m, args.n) {
        (Some(m), Some(n)) => values.push(regulator_row(&fp, m, n, tol, args)?),
        (Some(_), None) | (None, Some(_)) => {
            return Err(CliError::Usage("--m and --n go together".into()));
        }
        (None, None) => {
            let d1 = admissible_pairs(&fp, Cycle::Delta1)?;
            for (m, n) in admissible_pairs(&fp, Cycle::Delta0)? {
                if d1.contains(&(m, n)) {
                    values.push(regulator_row(&fp, m, n, tol, args)?);
                }
            }
            if values.is_empty() {
                notes.push("no (m, n) with m in I1(n) has both periods convergent".into());
            }
        }
    }

    let whole = args.m.is_none();
    let nonvanishing = if !whole {
        None
    } else if fp.p() < fp.l() && fp.a() + fp.b() != fp.p() {
        Some(nonvanishing_check(&fp)?)
    } else {
        notes.push("non-vanishing check skipped: it needs p < l and a + b != p".into());
        None
    };
    let criterion = if whole && fp.a() + fp.b() == fp.p() {
        Some(criterion_ratios(&fp)?)
    } else {
        None
    };
    let legendre = if whole && (fp.p(), fp.l()) == (2, 3) {
        Some(legendre_probe()?)
    } else {
        None
    };

    let mut pass = values.iter().all(|v| v.regulator.re() > 0.0);
    if let Some(nv) = &nonvanishing {
        pass &= nv.pass;
    }
    if let Some(lg) = &legendre {
        pass &= lg.assembly_gap <= LEGENDRE_GATE;
    }

    let report = RegulatorReport {
        schema_version: SCHEMA_VERSION,
        params: fp,
        tol,
        precision: args.precision(),
        values,
        nonvanishing,
        criterion,
        legendre,
        notes,
        pass,
    };

    let mut sections = Vec::new();
    let mut s = Section::new(format!("regulator values {fp}"), vec!["m", "n", "R", "Omega", "R/Omega", "good m", "pairing"]);
    for v in &report.values {
        s.push(vec![
            v.m.to_string(),
            v.n.to_string(),
            num(&v.regulator),
            num(&v.omega),
            num(&v.ratio),
            if v.good_m { "yes" } else { "no" }.into(),
            v.pairing.as_ref().map_or("-".into(), num),
        ]);
    }
    sections.push(s);
    if let Some(nv) = &report.nonvanishing {
        let mut s = Section::new("non-vanishing", vec!["n", "m", "pairing", "err", "verdict"]);
        for r in &nv.rows {
            s.push(vec![
                r.n.to_string(),
                r.m.map_or("-".into(), |m| m.to_string()),
                r.pairing.as_ref().map_or("-".into(), num),
                r.pairing.as_ref().map_or("-".into(), |p| sci(p.err)),
                serde_json::to_value(r.verdict)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
            ]);
        }
        sections.push(s);
    }
    if let Some(c) = &report.criterion {
        let mut s = Section::new(
            format!(
                "criterion ratios (unknowns {}, equations {}, residual {})",
                c.unknowns,
                c.equations,
                sci(c.relative_residual)
            ),
            vec!["h", "m", "n", "ratio"],
        );
        for r in &c.ratios {
            s.push(vec![r.h.to_string(), r.m.to_string(), r.n.to_string(), num(&r.ratio)]);
        }
        sections.push(s);
    }
    if let Some(lg) = &report.legendre {
        let mut s = Section::new("legendre probe", vec!["quantity", "value"]);
        s.push(vec!["V".into(), num(&lg.value)]);
        s.push(vec!["3F2 at 1".into(), num(&lg.hypergeometric)]);
        s.push(vec!["V from R/Omega".into(), num(&lg.from_regulator)]);
        s.push(vec!["assembly gap".into(), sci(lg.assembly_gap)]);
        s.push(vec!["precision gap".into(), sci(lg.precision_gap)]);
        s.push(vec![
            format!("best p/q, q <= {}", lg.denominator_bound),
            format!("{}/{} (|V - p/q| q^2 = {})", lg.approx.num, lg.approx.den, sci(lg.approx.quality)),
        ]);
        s.push(vec!["check".into(), verdict(lg.assembly_gap <= LEGENDRE_GATE)]);
        sections.push(s);
    }
    render::emit(args.output, &report, &sections, &report.notes);
    Ok(pass)
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let cells = if args.sweep {
        default_sweep()?
    } else {
        vec![args.common.params()?]
    };
    for &id in &args.criteria {
        if !(1..=13).contains(&id) {
            return Err(CliError::Usage(format!("criterion ids run from 1 to 13, got {id}")));
        }
    }
    let cfg = VerifyConfig {
        tol: args.common.tol,
        parallel: args.common.parallel,
        fault: args.inject_fault.then_some(Fault::ResidueEntry),
        only: args.criteria.clone(),
    };
    let report = run_verify(&cells, &cfg);
    if let Some(path) = &args.report {
        let text = serde_json::to_string_pretty(&report).expect("reports serialize");
        std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    match args.common.output {
        OutputFormat::Table => {
            let mut out = String::new();
            for c in &report.criteria {
                out.push_str(&c.line());
                out.push('\n');
                for n in &c.notes {
                    out.push_str(&format!("     {n}\n"));
                }
            }
            out.push_str(&format!(
                "{} cells, {} criteria: {}\n",
                report.cells.len(),
                report.criteria.len(),
                if report.pass { "PASS" } else { "FAIL" }
            ));
            print!("{out}");
        }
        format => {
            let mut s = Section::new("criteria", vec!["id", "name", "pass", "checks", "worst", "gate", "elapsed_s", "budget_s"]);
            for c in &report.criteria {
                s.push(vec![
                    c.id.to_string(),
                    c.name.clone(),
                    c.pass.to_string(),
                    c.checks.to_string(),
                    format!("{:e}", c.worst),
                    format!("{:e}", c.gate),
                    format!("{:.3}", c.elapsed_s),
                    format!("{}", c.budget_s),
                ]);
            }
            render::emit(format, &report, &[s], &[]);
        }
    }
    Ok(report.pass)
}

#[derive(Serialize)]
struct ConnectionRow {
    n: i64,
    t_chart: String,
    s_chart: String,
}

#[derive(Serialize)]
struct ResidueRow {
    n: i64,
    point: Point,
    computed: String,
    table: String,
    spectrum: Option<[String; 2]>,
    matches_table: bool,
    pass: bool,
}

#[derive(Serialize)]
struct C64 {
    re: f64,
    im: f64,
}

impl From<Complex64> for C64 {
    fn from(z: Complex64) -> C64 {
        C64 { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
struct MonodromyRow {
    n: i64,
    point: Point,
    eigenvalues: [C64; 2],
    predicted: [C64; 2],
    moduli: [f64; 2],
    distance: f64,
    /// ‖(M − 1)²‖ on the ζ loop.
    unipotency: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct GmReport {
    schema_version: u32,
    params: FibrationParams,
    monodromy_sign: i32,
    connection: Vec<ConnectionRow>,
    residues: Vec<ResidueRow>,
    monodromy: Vec<MonodromyRow>,
    pass: bool,
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.10}{:+.10}i", z.re, z.im)
}

pub fn gm(args: &CommonArgs) -> Outcome {
    let fp = args.params()?;
    let l = fp.l();
    let mut connection = Vec::new();
    let mut residues = Vec::new();
    let mut monodromy = Vec::new();
    for n in ns(&fp, args.n)? {
        let a = gm_matrix(&fp, n, Chart::T)?;
        connection.push(ConnectionRow {
            n,
            t_chart: a.to_string(),
            s_chart: gm_matrix(&fp, n, Chart::S)?.to_string(),
        });
        let spec = residue_spectrum_check(&fp, n)?;
        for row in spec.rows {
            residues.push(ResidueRow {
                n,
                point: row.point,
                computed: fmt_qmat(&residue_matrix(&fp, n, row.point)?),
                table: fmt_qmat(&residue_table(&fp, n, row.point)?),
                spectrum: row.spectrum.map(|s| [fmt_q(&s[0]), fmt_q(&s[1])]),
                matches_table: row.matches_table,
                pass: row.pass,
            });
        }
        for point in Point::ALL {
            let m = monodromy_of(&a, l, &LoopPath::around(l, point, 0))?;
            let ev = eigenvalues(&m);
            let want = predicted_eigenvalues(&fp, n, point, MONODROMY_SIGN)?;
            let distance = spectrum_distance(&m, &want);
            let unipotency = (point == Point::Zeta).then(|| {
                let s = sub_identity(&m);
                let mut sq = [[Complex64::new(0.0, 0.0); 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        sq[i][j] = s[i][0] * s[0][j] + s[i][1] * s[1][j];
                    }
                }
                frob(&sq)
            });
            let pass = distance <= MONODROMY_GATE && unipotency.is_none_or(|u| u <= MONODROMY_GATE);
            monodromy.push(MonodromyRow {
                n,
                point,
                eigenvalues: [ev[0].into(), ev[1].into()],
                predicted: [want[0].into(), want[1].into()],
                moduli: [ev[0].norm(), ev[1].norm()],
                distance,
                unipotency,
                pass,
            });
        }
    }
    let pass = residues.iter().all(|r| r.pass) && monodromy.iter().all(|r| r.pass);
    let report = GmReport {
        schema_version: SCHEMA_VERSION,
        params: fp,
        monodromy_sign: MONODROMY_SIGN,
        connection,
        residues,
        monodromy,
        pass,
    };

    let mut conn = Section::new(format!("connection matrices {fp}"), vec!["n", "chart", "matrix"]);
    for c in &report.connection {
        conn.push(vec![c.n.to_string(), "t".into(), c.t_chart.clone()]);
        conn.push(vec![c.n.to_string(), "s".into(), c.s_chart.clone()]);
    }
    let mut res = Section::new("residues", vec!["n", "point", "computed", "table", "spectrum", "check"]);
    for r in &report.residues {
        res.push(vec![
            r.n.to_string(),
            r.point.to_string(),
            r.computed.clone(),
            r.table.clone(),
            r.spectrum.as_ref().map_or("-".into(), |s| format!("{}, {}", s[0], s[1])),
            verdict(r.pass),
        ]);
    }
    let mut mono = Section::new(
        "monodromy",
        vec!["n", "loop", "eigenvalue 1", "eigenvalue 2", "|ev|", "distance", "(M-1)^2", "check"],
    );
    for r in &report.monodromy {
        mono.push(vec![
            r.n.to_string(),
            r.point.to_string(),
            fmt_c(Complex64::new(r.eigenvalues[0].re, r.eigenvalues[0].im)),
            fmt_c(Complex64::new(r.eigenvalues[1].re, r.eigenvalues[1].im)),
            format!("{:.10}, {:.10}", r.moduli[0], r.moduli[1]),
            sci(r.distance),
            r.unipotency.map_or("-".into(), sci),
            verdict(r.pass),
        ]);
    }
    render::emit(args.output, &report, &[conn, res, mono], &[]);
    Ok(pass)
}
