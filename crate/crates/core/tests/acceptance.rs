//! End-to-end acceptance run at full sample sizes.
//!
//! Every criterion prints one `PASS`/`FAIL` line straight to stdout (so the
//! lines survive output capture); the test fails if any criterion does.

use std::io::Write;
use std::time::{Duration, Instant};

use x3ent_core::cones::{member, ConeId};
use x3ent_core::report::SuiteReport;
use x3ent_core::suites::{
    completeness_suite, consistency_suite, duality_suite, ghz_paths_suite, identity_suite, redundancy_suite,
    table2_suite, Table2Options,
};
use x3ent_core::xcore::XState;
use x3ent_core::Surd;

const SEED: u64 = 20_240_611;

struct Outcome {
    passed: bool,
    summary: String,
}

fn emit(id: usize, title: &str, elapsed: Duration, o: &Outcome) {
    let line = format!(
        "criterion {id} [{}] {title} ({:.1}s): {}\n",
        if o.passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        o.summary
    );
    let mut out = std::io::stdout().lock();
    out.write_all(line.as_bytes()).unwrap();
    out.flush().unwrap();
}

fn failures(r: &SuiteReport) -> String {
    r.failures().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
}

fn suite_outcome(r: &SuiteReport) -> Outcome {
    let summary = if r.passed { format!("{} checks passed", r.checks.len()) } else { failures(r) };
    Outcome { passed: r.passed, summary }
}

fn enumeration() -> Outcome {
    let start = Instant::now();
    let r = table2_suite(Table2Options { witnesses: false, others: false }).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let counts: Vec<String> = r
        .checks
        .iter()
        .filter(|c| c.name.ends_with("extreme ray count"))
        .map(|c| format!("{}={}", c.name.trim_end_matches(": extreme ray count"), c.found.clone().unwrap_or_default()))
        .collect();
    let relevant = r.checks.iter().filter(|c| !c.name.contains("witness"));
    let ok = relevant.clone().all(|c| !c.failed()) && secs < 60.0;
    let mut summary = format!("{} in {secs:.2}s (limit 60s)", counts.join(", "));
    if !r.passed {
        summary.push_str(&format!("; {}", failures(&r)));
    }
    Outcome { passed: ok, summary }
}

fn extremality() -> Outcome {
    let r = table2_suite(Table2Options { witnesses: true, others: false }).unwrap();
    let witnessed = r.checks.iter().filter(|c| c.name.contains("extremality witnesses")).count();
    let published = r.checks.iter().filter(|c| c.name.contains(": witness ")).count();
    let ok = r.passed && witnessed == 9 && published == 9;
    let summary = if ok {
        format!("witnesses for every candidate of {witnessed} cones; {published} exhibited pairs re-verify")
    } else {
        failures(&r)
    };
    Outcome { passed: ok, summary }
}

fn counterexamples() -> Outcome {
    let rho = |z: [i64; 4]| XState::from_i64([2, 1, 1, 2], [2, 1, 1, 2], z.map(|v| (v, 0)));
    let cases = [("ρ1", rho([2, 0, 1, 0]), "β∨(γ∧α)"), ("ρ2", rho([2, 1, 0, 0]), "γ∨(β∧α)")];
    let distributive: ConeId = "(α∧β)∨(α∧γ)".parse().unwrap();
    let mut bad = Vec::new();
    for (name, x, upper) in &cases {
        let upper: ConeId = upper.parse().unwrap();
        let alpha: ConeId = "α".parse().unwrap();
        let holds = |c: &ConeId| member::<Surd>(x, c).unwrap().holds;
        if !holds(&alpha) {
            bad.push(format!("{name} not in α"));
        }
        if !holds(&upper) {
            bad.push(format!("{name} not in {upper}"));
        }
        if holds(&distributive) {
            bad.push(format!("{name} in {distributive}"));
        }
    }
    Outcome {
        passed: bad.is_empty(),
        summary: if bad.is_empty() {
            "ρ1, ρ2 lie in α and in the modular side, outside (α∧β)∨(α∧γ)".into()
        } else {
            bad.join("; ")
        },
    }
}

fn identities() -> Outcome {
    let start = Instant::now();
    let r = identity_suite().unwrap();
    let secs = start.elapsed().as_secs_f64();
    let mut o = suite_outcome(&r);
    o.passed &= secs < 120.0;
    o.summary = format!("{} in {secs:.2}s (limit 120s)", o.summary);
    o
}

fn redundancy() -> Outcome {
    let r = redundancy_suite();
    let refuted = r.checks.iter().filter(|c| c.name.contains('⇏') && !c.failed()).count();
    let mut o = suite_outcome(&r);
    o.passed &= refuted >= 3;
    o.summary = format!("{}; {refuted} non-implications with verified counterexamples", o.summary);
    o
}

fn consistency() -> Outcome {
    let a = consistency_suite(100_000, SEED + 3).unwrap();
    let b = ghz_paths_suite(10_000, SEED + 4).unwrap();
    let found: Vec<String> = a.checks.iter().chain(&b.checks).map(|c| c.found.clone().unwrap_or_default()).collect();
    Outcome {
        passed: a.passed && b.passed,
        summary: if a.passed && b.passed {
            format!("violations: {}", found.join("; "))
        } else {
            format!("{} {}", failures(&a), failures(&b))
        },
    }
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("GHZ-diagonal extreme ray counts", enumeration),
        ("extremality certificates", extremality),
        ("modularity counterexamples", counterexamples),
        ("lattice identities", identities),
        ("redundancy suite", redundancy),
        ("duality, 10^4 pairs per cone pair", || suite_outcome(&duality_suite(10_000, SEED + 1).unwrap())),
        ("certification completeness, 10^3 states per cone", || {
            suite_outcome(&completeness_suite(1_000, SEED + 2).unwrap())
        }),
        ("consistency 10^5 states, GHZ paths 10^4 states", consistency),
    ];
    let mut failed = Vec::new();
    for (k, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        emit(k + 1, title, start.elapsed(), &o);
        if !o.passed {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
