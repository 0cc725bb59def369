use cmreg::connection::{residue_spectrum_check, Point};
use cmreg::fibration::FibrationParams;
use cmreg::quad::{monodromy, LoopPath};
use cmreg::rational::q;
use cmreg::regulator::{regulator_value, regulator_value_with};
use cmreg::specialfn::{hyp2f1, pfq_with, PFQParams};
use cmreg::Precision;
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn special(c: &mut Criterion) {
    c.bench_function("hyp2f1 near 1", |b| {
        b.iter(|| hyp2f1(&q(1, 3), &q(2, 5), &q(6, 5), black_box(0.9), 1e-13).unwrap())
    });
    let p = PFQParams::new(vec![q(1, 2), q(1, 2), q(1, 3)], vec![q(1, 1), q(4, 3)]).unwrap();
    c.bench_function("3F2 at 1, extended", |b| {
        b.iter(|| pfq_with(&p, black_box(1.0), 1e-13, Precision::Extended).unwrap())
    });
}

fn connection(c: &mut Criterion) {
    let cells: Vec<_> = FibrationParams::all_for(5, 7).unwrap();
    c.bench_function("residue spectra (5,7)", |b| {
        b.iter(|| {
            for fp in &cells {
                for n in fp.ns() {
                    black_box(residue_spectrum_check(fp, n).unwrap());
                }
            }
        })
    });
    let fp = FibrationParams::new(3, 5, 1, 2).unwrap();
    c.bench_function("monodromy 0-loop", |b| {
        b.iter(|| monodromy(&fp, 1, &LoopPath::around(5, Point::Zero, 0)).unwrap())
    });
}

fn regulator(c: &mut Criterion) {
    let fp = FibrationParams::new(3, 5, 1, 1).unwrap();
    c.bench_function("regulator (3,5,1,1) m=2", |b| b.iter(|| regulator_value(&fp, black_box(2), 1).unwrap()));
    c.bench_function("regulator double", |b| {
        b.iter(|| regulator_value_with(&fp, black_box(2), 1, 1e-10, Precision::Double).unwrap())
    });
}

criterion_group!(benches, special, connection, regulator);
criterion_main!(benches);
