//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use hilbert_geom::experiments::{run_suite, ExperimentReport};

const SEED: u64 = 20_261_014;

const CRITERIA: &[(u32, &str, &[&str])] = &[
    (1, "metric axioms", &["metric-axioms"]),
    (2, "known values", &["known-values"]),
    (3, "projective invariance", &["projective-invariance"]),
    (4, "Lambda isometry", &["lambda-isometry"]),
    (5, "gamma suite", &["gamma", "focusing"]),
    (6, "cone/slice agreement", &["cone-slice"]),
    (7, "rigidity", &["rigidity"]),
    (8, "asymptotics", &["asymptotics"]),
    (9, "index-2 structure", &["index2", "focusing"]),
    (10, "planar classifier", &["classify2d"]),
    (11, "Vinberg star map", &["vinberg"]),
    (12, "conjugation scaling", &["conjugation"]),
];

fn failures(r: &ExperimentReport) -> Vec<String> {
    r.checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}.{} = {} (want {} {})", r.id, c.name, c.value, c.relation, c.bound))
        .collect()
}

fn main() -> ExitCode {
    let mut all = true;
    for &(id, label, suites) in CRITERIA {
        let start = Instant::now();
        let mut failed = Vec::new();
        for suite in suites {
            match run_suite(suite, SEED, None) {
                Ok(r) if r.passed => {}
                Ok(r) => failed.extend(failures(&r)),
                Err(e) => failed.push(format!("{suite}: {e}")),
            }
        }
        let secs = start.elapsed().as_secs_f64();
        let status = if failed.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} criterion {id:>2} {label} ({}) [{secs:.2}s]", suites.join(", "));
        for f in &failed {
            println!("     {f}");
        }
        all &= failed.is_empty();
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
