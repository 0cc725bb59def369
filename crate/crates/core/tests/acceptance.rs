//! One line per acceptance criterion over the default sweep.

use cmreg::verify::{default_sweep, run_criterion, VerifyConfig, NAMES};

#[test]
fn acceptance() {
    let cells = default_sweep().unwrap();
    let cfg = VerifyConfig {
        parallel: true,
        ..Default::default()
    };
    let mut failed = Vec::new();
    for id in 1..=NAMES.len() as u8 {
        let r = run_criterion(id, &cells, &cfg);
        println!("{}", r.line());
        for n in &r.notes {
            println!("       {n}");
        }
        if !r.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
