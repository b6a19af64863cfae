//! The fourteen acceptance criteria, each against its time bound.

use std::time::{Duration, Instant};

use treesib::canon::iso_oracle_sweep;
use treesib::construct::{build_t, min_radius, spine_recovered, verify_nonisomorphism, Registry};
use treesib::gadget::gadget_table;
use treesib::harness::{report_body, run_suite, run_suites, RunConfig};
use treesib::report::Report;
use treesib::rtree::{build_rball, lab_check, sweep_colpreserv, verify_spin_lemmas, verify_unisign};
use treesib::spine::Truncation;
use treesib::Result;

struct Outcome {
    passed: bool,
    detail: String,
}

impl From<Report> for Outcome {
    fn from(r: Report) -> Self {
        let first = r.violations.first().map(|v| format!("; first: {} at {:?}: {}", v.check, v.at, v.detail)).unwrap_or_default();
        Outcome {
            passed: r.passed(),
            detail: format!("{} cases, {} violations{first}", r.cases, r.violations.len()),
        }
    }
}

fn suite(name: &str) -> Result<Outcome> {
    let r = run_suite(&RunConfig::default(), name)?;
    Ok(Report { cases: r.cases, violations: r.violations, notes: r.notes }.into())
}

fn criterion(no: u32, title: &str, bound: u64, f: impl FnOnce() -> Result<Outcome>) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let in_time = took < Duration::from_secs(bound);
    let (ok, detail) = match out {
        Ok(o) => (o.passed && in_time, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "criterion {no:>2} {:<4} {title}: {detail} [{:.2}s of {bound}s]",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64()
    );
    ok
}

#[test]
fn acceptance() {
    let reg = Registry::frozen();
    let results = [
        criterion(1, "gadget table", 5, || Ok(gadget_table(12, 4)?.into())),
        criterion(2, "isomorphism oracle", 30, || Ok(iso_oracle_sweep(8, 200, 0)?.into())),
        criterion(3, "label reconstruction", 5, || Ok(lab_check(&build_rball(8, 8, false)?).into())),
        criterion(4, "colour lemma", 60, || Ok(sweep_colpreserv(&build_rball(6, 6, false)?)?.into())),
        criterion(5, "spin lemmas", 60, || Ok(verify_spin_lemmas(&build_rball(6, 6, false)?)?.into())),
        criterion(6, "unimodal sign antisymmetry", 10, || Ok(verify_unisign(&build_rball(8, 8, false)?, 3)?.into())),
        criterion(7, "ray centres", 5, || suite("ray-centres")),
        criterion(8, "non-isomorphism", 60, || {
            let mut rep = Report::new();
            for k in 0..=1 {
                rep.merge(verify_nonisomorphism(k, Truncation::for_stage(k, min_radius(1)), &reg)?);
            }
            Ok(rep.into())
        }),
        criterion(9, "similarity uniqueness", 120, || suite("similarity-unique")),
        criterion(10, "MAIN-lemma check", 120, || suite("main-lemma")),
        criterion(11, "finite difference", 60, || suite("embfinite")),
        criterion(12, "spine recovery", 30, || {
            let mut rep = Report::new();
            for k in 0..=1 {
                for s in 0..3 {
                    let tb = build_t(s, k, Truncation::for_stage(k, min_radius(1)), &reg)?;
                    rep.expect(spine_recovered(&tb)?, "spine-recovery", || vec![format!("T_{s}({k})")], String::new);
                }
            }
            Ok(rep.into())
        }),
        criterion(13, "poset monoid equality", 120, || suite("poset-monoid")),
        criterion(14, "determinism", 600, || {
            let cfg = RunConfig::default();
            let a = report_body(&run_suites(&cfg)?)?;
            let b = report_body(&run_suites(&cfg)?)?;
            Ok(Outcome {
                passed: a == b,
                detail: format!("{} report lines, {} bytes, identical: {}", a.lines().count(), a.len(), a == b),
            })
        }),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
