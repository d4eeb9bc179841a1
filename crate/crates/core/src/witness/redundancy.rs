//! Redundancy among the dual criteria of the `(α°∧β°)∨(α°∧γ°)` cone, decided
//! by exact implication checks.

use crate::ineq::{LinForm, WitnessIneq};
use crate::report::{Check, SuiteReport};

use super::{check_counterexample, implies, implies_form, Counterexample, LinSystem};

fn w(s: &str) -> WitnessIneq {
    s.parse().expect("valid inequality name")
}

fn render_form(f: &LinForm) -> String {
    let side = |v: &[i64; 4], var: fn(usize) -> String| {
        let terms: Vec<String> = (0..4)
            .filter(|&i| v[i] != 0)
            .map(|i| if v[i] == 1 { var(i + 1) } else { format!("{}{}", v[i], var(i + 1)) })
            .collect();
        terms.join("+")
    };
    format!("{} ≥ {}", side(&f.pos, |i| format!("r{i}")), side(&f.neg, |i| format!("|u{i}|")))
}

fn render_cx(cx: &Counterexample) -> String {
    let join = |v: &[crate::Q; 4]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
    format!("r=({}), u=({})", join(&cx.r), join(&cx.u))
}

/// Claimed implications that hold.
pub fn claimed_implications() -> Vec<(Vec<WitnessIneq>, WitnessIneq)> {
    let base = vec![w("W1[1,4]"), w("W1[2,3]")];
    ["W3", "W2[1,2]", "W2[1,3]", "W2[2,4]", "W2[3,4]", "W4[1,4]", "W4[2,3]"]
        .into_iter()
        .map(|c| (base.clone(), w(c)))
        .collect()
}

/// Implications that must fail.
pub fn non_implications() -> Vec<(Vec<WitnessIneq>, WitnessIneq)> {
    vec![
        (vec![w("W3")], w("W1[1,4]")),
        (vec![w("W1[1,4]")], w("W3")),
        (vec![w("W1[1,4]"), w("W1[2,3]")], w("W1[1,2]")),
        (vec![w("W4a[1,2]")], w("W1[1,2]")),
        (vec![w("W1[1,4]"), w("W1[2,3]")], w("W4b[1,2]")),
    ]
}

const W4_PAIRS: [&str; 4] = ["1,2", "1,3", "2,4", "3,4"];

pub fn redundancy_suite() -> SuiteReport {
    let mut checks = Vec::new();
    let set = |v: &[WitnessIneq]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ");

    for (assumed, claimed) in claimed_implications() {
        let out = implies(&assumed, &claimed);
        let mut c = Check::new(format!("{{{}}} ⇒ {claimed}", set(&assumed)), out.holds);
        if let Some(cx) = &out.counterexample {
            c = c.detail(format!("counterexample {}", render_cx(cx)));
        }
        checks.push(c);
    }

    // Each scalar form of W4b[p] follows from one W1 among the α pairs and
    // one W4a; record the first such pair.
    let w1s = [w("W1[1,4]"), w("W1[2,3]")];
    for p in W4_PAIRS {
        let claimed = w(&format!("W4b[{p}]"));
        for form in claimed.forms() {
            let source = w1s
                .iter()
                .flat_map(|a| W4_PAIRS.iter().map(move |q| [*a, w(&format!("W4a[{q}]"))]))
                .find(|assumed| implies_form(&LinSystem::from_ineqs(assumed), &form).holds);
            let name = format!("{claimed} part {}", render_form(&form));
            checks.push(match source {
                Some(a) => Check::new(name, true).found(format!("from {{{}}}", set(&a))),
                None => Check::new(name, false).detail("no W1 + W4a pair implies it"),
            });
        }
    }
    let example_form = w("W4b[1,2]").forms().into_iter().find(|f| f.neg[2] == 2).expect("form carrying 2|u3|");
    checks.push(
        Check::new(
            "{W1[2,3], W4a[1,3]} ⇒ part of W4b[1,2]",
            implies_form(&LinSystem::from_ineqs(&[w("W1[2,3]"), w("W4a[1,3]")]), &example_form).holds,
        )
        .found(render_form(&example_form)),
    );

    for (assumed, claimed) in non_implications() {
        let out = implies(&assumed, &claimed);
        let verified = out.counterexample.as_ref().is_some_and(|cx| check_counterexample(&assumed, &claimed, cx));
        let mut c = Check::new(format!("{{{}}} ⇏ {claimed}", set(&assumed)), !out.holds && verified);
        if let Some(cx) = &out.counterexample {
            c = c.found(format!("counterexample {}", render_cx(cx)));
        }
        checks.push(c);
    }
    SuiteReport::new("redundancy", checks)
}
