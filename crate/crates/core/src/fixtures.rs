//! Named reference objects with hand-derived expected facts.
//!
//! Each fact carries a note with the arithmetic behind it, so it can be
//! checked without running the library. [`fixtures_suite`] re-verifies them
//! all.

use serde::{Deserialize, Serialize};

use crate::arith::{Surd, Q};
use crate::cones::{member, ConeId};
use crate::error::{Error, Result};
use crate::ghzpoly::suite::rays_of;
use crate::ghzpoly::{check_condi, table2, Ray};
use crate::ineq::{eval_state, StateIneq};
use crate::report::{Check, SuiteReport};
use crate::witness::certify;
use crate::xcore::{GhzDiagonal, XMatrix, XState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    State { matrix: XMatrix },
    Witness { ghz: GhzDiagonal },
    Cone { cone: ConeId },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum Fact {
    Psd {
        holds: bool,
    },
    Member {
        cone: ConeId,
        holds: bool,
    },
    /// Exact slack of a named state inequality.
    Slack {
        ineq: String,
        value: Q,
    },
    Certificate {
        cone: ConeId,
        exists: bool,
    },
    /// Pairing of a witness with a GHZ-diagonal state.
    Pairing {
        state: GhzDiagonal,
        value: Q,
    },
    /// The witness exposes `ray` among the cone's candidate rays.
    Exposes {
        cone: ConeId,
        ray: GhzDiagonal,
    },
    RayCount {
        count: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedFact {
    #[serde(flatten)]
    pub fact: Fact,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub payload: Payload,
    pub facts: Vec<ExpectedFact>,
}

fn cone(s: &str) -> ConeId {
    s.parse().expect("valid cone expression")
}

fn fact(fact: Fact, note: impl Into<String>) -> ExpectedFact {
    ExpectedFact { fact, note: note.into() }
}

fn ghz_state(a: [i64; 4], z: [i64; 4]) -> Payload {
    Payload::State { matrix: GhzDiagonal::from_i64(a, z).to_matrix() }
}

fn rho_fixture(name: &str, z: [i64; 4], upper: &str, s4: &str, s4_note: &str) -> Fixture {
    Fixture {
        name: name.into(),
        description: format!("GHZ-diagonal state X(2,1,1,2 / {z:?}), a strict failure of the modular law"),
        payload: ghz_state([2, 1, 1, 2], z),
        facts: vec![
            fact(Fact::Psd { holds: true }, "each block has a_i = b_i ≥ |z_i|"),
            fact(Fact::Member { cone: cone("α"), holds: true }, "c = (2,1,1,2) with c1 = c4 = 2 covers every m_i ≤ 2"),
            fact(
                Fact::Slack { ineq: "S1[1,4]".into(), value: Q::zero() },
                "min over i,j in {1,4} of c_i − m_j is c1 − m1 = 2 − 2",
            ),
            fact(Fact::Member { cone: cone(upper), holds: true }, "meets the larger side of the modular inclusion"),
            fact(Fact::Slack { ineq: s4.into(), value: Q::from_i64(-1) }, s4_note),
            fact(
                Fact::Member { cone: cone("(α∧β)∨(α∧γ)"), holds: false },
                "the violated S4 inequality is one of this cone's criteria",
            ),
            fact(
                Fact::Certificate { cone: cone("(α∧β)∨(α∧γ)"), exists: true },
                "criteria are complete, so a separating witness exists",
            ),
        ],
    }
}

pub fn all() -> Vec<Fixture> {
    let mut out = vec![
        rho_fixture("rho1", [2, 0, 1, 0], "β∨(γ∧α)", "S4[1,3|2,3]", "m = (2,0,1,0); c2 + c3 − (m1 + m3) = 2 − 3"),
        rho_fixture("rho2", [2, 1, 0, 0], "γ∨(α∧β)", "S4[1,2|2,3]", "m = (2,1,0,0); c2 + c3 − (m1 + m2) = 2 − 3"),
        Fixture {
            name: "top-violator".into(),
            description: "X(1,1,1,1 / 4,0,0,0), not psd, outside the largest cone".into(),
            payload: ghz_state([1, 1, 1, 1], [4, 0, 0, 0]),
            facts: vec![
                fact(Fact::Psd { holds: false }, "a1 b1 = 1 < 16 = |z1|²"),
                fact(Fact::Slack { ineq: "S3".into(), value: Q::from_i64(-1) }, "c2 + c3 + c4 − m1 = 3 − 4"),
                fact(Fact::Member { cone: cone("α∨β∨γ"), holds: false }, "S3 is the criterion of the largest cone"),
                fact(Fact::Certificate { cone: cone("α∨β∨γ"), exists: true }, "S3 fails and the criteria are complete"),
            ],
        },
        Fixture {
            name: "zero".into(),
            description: "the zero matrix, on the boundary of every cone".into(),
            payload: Payload::State { matrix: XMatrix::zero() },
            facts: vec![
                fact(Fact::Psd { holds: true }, "all entries vanish"),
                fact(Fact::Member { cone: cone("α∧β∧γ"), holds: true }, "every criterion reads 0 ≥ 0"),
                fact(Fact::Slack { ineq: "S3".into(), value: Q::zero() }, "0 − 0"),
                fact(Fact::Certificate { cone: cone("α∧β∧γ"), exists: false }, "a member has no certificate"),
            ],
        },
    ];
    for (k, (c, state, w)) in table2::published_witnesses().into_iter().enumerate() {
        let terms: Vec<String> =
            (0..4).map(|i| format!("{}·{} + {}·{}", w.a[i], state.a[i], w.z[i], state.z[i])).collect();
        out.push(Fixture {
            name: format!("witness-{}", k + 1),
            description: format!("extremality witness {w} for the ray {state} of {c}"),
            payload: Payload::Witness { ghz: w },
            facts: vec![
                fact(Fact::Pairing { state: state.clone(), value: Q::zero() }, format!("2({}) = 0", terms.join(" + "))),
                fact(
                    Fact::Exposes { cone: c, ray: state },
                    "zero on the ray and positive on every other candidate ray",
                ),
            ],
        });
    }
    out.push(Fixture {
        name: "witness-psi".into(),
        description: "witness X(0,1,1,1 / 0) on two reference states".into(),
        payload: Payload::Witness { ghz: GhzDiagonal::from_i64([0, 1, 1, 1], [0; 4]) },
        facts: vec![
            fact(
                Fact::Pairing { state: GhzDiagonal::from_i64([1, 1, 1, 1], [1, 1, 1, 1]), value: Q::from_i64(6) },
                "2(0 + 1 + 1 + 1) with z' = 0",
            ),
            fact(Fact::Pairing { state: GhzDiagonal::from_i64([1, 0, 0, 0], [0; 4]), value: Q::zero() }, "2(0·1)"),
        ],
    });
    for row in table2::ROWS {
        out.push(Fixture {
            name: format!("rays-{}", row.cone),
            description: format!("extreme rays of {} restricted to GHZ-diagonal states", row.cone),
            payload: Payload::Cone { cone: cone(row.cone) },
            facts: vec![fact(
                Fact::RayCount { count: row.count },
                "sign patterns of the listed representatives, each z_i ≠ 0 taking both signs",
            )],
        });
    }
    out
}

pub fn get(name: &str) -> Option<Fixture> {
    all().into_iter().find(|f| f.name == name)
}

fn fact_name(f: &Fact) -> String {
    match f {
        Fact::Psd { holds } => format!("psd = {holds}"),
        Fact::Member { cone, holds } => format!("{} {cone}", if *holds { "in" } else { "not in" }),
        Fact::Slack { ineq, value } => format!("{ineq} slack {value}"),
        Fact::Certificate { cone, exists } => {
            format!("certificate for {cone} {}", if *exists { "exists" } else { "absent" })
        }
        Fact::Pairing { state, value } => format!("pairing with {state} = {value}"),
        Fact::Exposes { cone, ray } => format!("exposes {ray} in {cone}"),
        Fact::RayCount { count } => format!("{count} extreme rays"),
    }
}

fn check_fact(payload: &Payload, f: &Fact) -> Result<(bool, String)> {
    let state = || match payload {
        Payload::State { matrix } => Ok(XState::new(matrix.clone())),
        _ => Err(Error::Input("fact needs a state payload".into())),
    };
    let witness = || match payload {
        Payload::Witness { ghz } => Ok(ghz),
        _ => Err(Error::Input("fact needs a witness payload".into())),
    };
    Ok(match f {
        Fact::Psd { holds } => {
            let found = state()?.psd();
            (found == *holds, found.to_string())
        }
        Fact::Member { cone, holds } => {
            let found = member::<Surd>(&state()?, cone)?.holds;
            (found == *holds, found.to_string())
        }
        Fact::Slack { ineq, value } => {
            let ineq: StateIneq = ineq.parse()?;
            let slack = eval_state::<Surd>(&ineq, &state()?)?.slack;
            (slack.as_rational() == Some(value), slack.to_string())
        }
        Fact::Certificate { cone, exists } => {
            let x = state()?;
            let cert = certify(&x, cone)?;
            let ok = match &cert {
                Some(c) => *exists && c.verified && c.verify(&x),
                None => !*exists,
            };
            (ok, cert.map_or("none".into(), |c| format!("witness pairing {}", c.value)))
        }
        Fact::Pairing { state, value } => {
            let found = witness()?.pair(state);
            (found == *value, found.to_string())
        }
        Fact::Exposes { cone, ray } => {
            let candidates =
                table2::candidates(cone).ok_or_else(|| Error::Input(format!("no candidates for {cone}")))?;
            let ray = Ray::from_ghz(ray)?;
            let found = candidates.contains(&ray) && check_condi(witness()?, &ray, &candidates);
            (found, found.to_string())
        }
        Fact::RayCount { count } => {
            let Payload::Cone { cone } = payload else {
                return Err(Error::Input("ray counts need a cone payload".into()));
            };
            let n = rays_of(cone)?.len();
            (n == *count, n.to_string())
        }
    })
}

/// Re-check every fact of one fixture.
pub fn verify(fx: &Fixture) -> Vec<Check> {
    fx.facts
        .iter()
        .map(|e| {
            let name = format!("{}: {}", fx.name, fact_name(&e.fact));
            match check_fact(&fx.payload, &e.fact) {
                Ok((ok, found)) => Check::new(name, ok).found(found),
                Err(err) => Check::new(name, false).detail(err.to_string()),
            }
        })
        .collect()
}

pub fn fixtures_suite() -> SuiteReport {
    SuiteReport::new("fixtures", all().iter().flat_map(verify).collect())
}
