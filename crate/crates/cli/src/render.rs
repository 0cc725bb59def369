use crate::OutputFormat;
use cmreg::NumValue;
use serde::Serialize;
use std::io::{IsTerminal, Write};

pub struct Section {
    pub title: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Section {
    pub fn new(title: impl Into<String>, columns: Vec<&'static str>) -> Section {
        Section {
            title: title.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn color_enabled() -> bool {
    std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal()
}

fn paint(cell: &str) -> String {
    match cell {
        "pass" | "PASS" => format!("\x1b[32m{cell}\x1b[0m"),
        "fail" | "FAIL" => format!("\x1b[31m{cell}\x1b[0m"),
        _ => cell.to_string(),
    }
}

pub fn table(sections: &[Section], notes: &[String]) -> String {
    let color = color_enabled();
    let mut out = String::new();
    for (k, s) in sections.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        out.push_str(&format!("== {} ==\n", s.title));
        let mut width: Vec<usize> = s.columns.iter().map(|c| c.chars().count()).collect();
        for r in &s.rows {
            for (i, c) in r.iter().enumerate() {
                width[i] = width[i].max(c.chars().count());
            }
        }
        let line = |cells: Vec<String>, out: &mut String| {
            let mut parts = Vec::new();
            for (i, c) in cells.iter().enumerate() {
                let pad = width[i] - c.chars().count();
                let shown = if color { paint(c) } else { c.clone() };
                parts.push(format!("{shown}{}", " ".repeat(pad)));
            }
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(s.columns.iter().map(|c| c.to_string()).collect(), &mut out);
        line(width.iter().map(|w| "-".repeat(*w)).collect(), &mut out);
        for r in &s.rows {
            line(r.clone(), &mut out);
        }
    }
    for n in notes {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}

pub fn csv(sections: &[Section]) -> String {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for s in sections {
        w.write_record(["section", &s.title]).expect("write to memory");
        w.write_record(&s.columns).expect("write to memory");
        for r in &s.rows {
            w.write_record(r).expect("write to memory");
        }
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

pub fn emit<T: Serialize>(format: OutputFormat, report: &T, sections: &[Section], notes: &[String]) {
    let text = match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        OutputFormat::Csv => csv(sections),
        OutputFormat::Table => table(sections, notes),
    };
    let mut out = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = out.write_all(text.as_bytes());
}

pub fn num(v: &NumValue) -> String {
    if v.im() == 0.0 {
        format!("{:.12e}", v.re())
    } else {
        format!("{:.12e}{:+.12e}i", v.re(), v.im())
    }
}

pub fn sci(x: f64) -> String {
    format!("{x:.2e}")
}

pub fn verdict(pass: bool) -> String {
    if pass { "pass" } else { "fail" }.to_string()
}
