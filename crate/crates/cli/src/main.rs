use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use x3ent_core::cones::{lattice_profile_with, Characterization, ConeId, ProfileReport};
use x3ent_core::fixtures;
use x3ent_core::ghzpoly::suite::rays_of;
use x3ent_core::ghzpoly::table2;
use x3ent_core::io::{parse_state, Parsed};
use x3ent_core::report::SuiteReport;
use x3ent_core::suites;
use x3ent_core::witness::certify;
use x3ent_core::xcore::DEFAULT_TOLERANCE;
use x3ent_core::{Error, Surd};

/// `println!` that ignores a closed stdout (e.g. piped into `head`).
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "x3ent", version, about = "Partial-separability lattice tools for three-qubit X-states")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Membership verdicts and slacks for every cone of the lattice.
    Classify {
        /// State JSON file, or `-` for stdin.
        file: PathBuf,
        /// Exact arithmetic (default for rational input).
        #[arg(long, conflicts_with = "float")]
        exact: bool,
        /// Floating-point arithmetic (default when the input has float numbers).
        #[arg(long)]
        float: bool,
        /// Relative tolerance of float verdicts.
        #[arg(long, env = "X3ENT_PRECISION")]
        precision: Option<f64>,
    },
    /// A witness proving the state lies outside a cone, or "member".
    Certify {
        file: PathBuf,
        /// Cone expression, e.g. "(A^B)v(A^C)".
        #[arg(long)]
        cone: String,
    },
    /// Extreme rays of a cone restricted to GHZ-diagonal states.
    Enumerate {
        #[arg(long)]
        cone: String,
        /// Restrict to GHZ-diagonal states (the only supported space).
        #[arg(long)]
        ghz: bool,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteName::All)]
        suite: SuiteName,
        /// Sample count for the randomized suites.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Embedded reference objects.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    List,
    Show { name: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Table2,
    Identities,
    Redundancy,
    Duality,
    Completeness,
    Consistency,
    GhzPaths,
    Fixtures,
    All,
}

enum Failure {
    /// Exit 1.
    Verification(String),
    /// Exit 2.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::InternalConsistency(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &Path) -> Result<Parsed, Failure> {
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(parse_state(&text)?)
}

fn parse_cone(expr: &str) -> Result<ConeId, Failure> {
    Ok(expr.parse::<ConeId>()?)
}

fn print_json(v: &impl serde::Serialize) {
    out!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn classify(format: Format, file: &Path, exact: bool, float: bool, precision: Option<f64>) -> Outcome {
    let parsed = read_input(file)?;
    let tol = precision.unwrap_or(DEFAULT_TOLERANCE);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Failure::Input(format!("precision must be a nonnegative number, got {tol}")));
    }
    let characterization = if parsed.is_dense() { Characterization::NecessaryOnly } else { Characterization::Exact };
    let use_exact = exact || (!float && parsed.rational);
    let x = parsed.x_state();
    let report = if use_exact {
        ProfileReport::new(&lattice_profile_with::<Surd>(&x, characterization, tol)?, tol)
    } else {
        ProfileReport::new(&lattice_profile_with::<f64>(&x, characterization, tol)?, tol)
    };
    match format {
        Format::Json => print_json(&report),
        Format::Text => out!("{report}"),
    }
    Ok(())
}

fn certify_cmd(format: Format, file: &Path, expr: &str) -> Outcome {
    let cone = parse_cone(expr)?;
    let parsed = read_input(file)?;
    let x = parsed.x_state();
    let cert = certify(&x, &cone)?;
    let Some(cert) = cert else {
        match format {
            Format::Json => print_json(&json!({ "cone": cone, "member": true, "dense": parsed.is_dense() })),
            Format::Text => out!("member"),
        }
        return Ok(());
    };
    if !(cert.verified && cert.verify(&x)) {
        return Err(Failure::Verification(format!("certificate for {cone} failed re-verification")));
    }
    match format {
        Format::Json => print_json(&cert),
        Format::Text => {
            let w = cert.witness.matrix();
            let list = |v: &[x3ent_core::Q; 4]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ");
            let u: Vec<String> =
                w.z.iter()
                    .map(|c| match (c.im.is_zero(), c.im.is_negative()) {
                        (true, _) => c.re.to_string(),
                        (false, true) => format!("{} - {}i", c.re, c.im.abs()),
                        (false, false) => format!("{} + {}i", c.re, c.im),
                    })
                    .collect();
            out!("not in {cone}");
            out!("witness s = ({}), t = ({}), u = ({})", list(&w.a), list(&w.b), u.join(", "));
            out!("pairing {}", cert.value);
            for t in &cert.transcript {
                out!("  {:<14} {:<5} slack {:.6}", t.criterion, if t.holds { "ok" } else { "FAIL" }, t.slack);
            }
        }
    }
    Ok(())
}

fn enumerate(format: Format, expr: &str) -> Outcome {
    let cone = parse_cone(expr)?;
    if cone.is_dual() {
        return Err(Failure::Input(format!("{cone} is a dual cone; enumeration takes primal cones")));
    }
    let rays = rays_of(&cone)?;
    let tabulated = table2::expected_count(&cone);
    match format {
        Format::Json => {
            let list: Vec<_> = rays.iter().map(|r| r.to_ghz()).collect();
            print_json(&json!({ "cone": cone, "count": rays.len(), "tabulated": tabulated, "rays": list }));
        }
        Format::Text => {
            match tabulated {
                Some(n) => out!("{cone}: {} extreme rays (tabulated {n})", rays.len()),
                None => out!("{cone}: {} extreme rays", rays.len()),
            }
            for r in &rays {
                out!("  {r}");
            }
        }
    }
    Ok(())
}

fn run_suites(name: SuiteName, samples: Option<usize>, seed: u64) -> Result<Vec<SuiteReport>, Failure> {
    use SuiteName::*;
    let wanted = |s: SuiteName| name == s || name == All;
    let n = |default: usize| samples.unwrap_or(default);
    let mut out = Vec::new();
    if wanted(Table2) {
        out.push(suites::table2_suite(suites::Table2Options::default())?);
    }
    if wanted(Identities) {
        out.push(suites::identity_suite()?);
    }
    if wanted(Redundancy) {
        out.push(suites::redundancy_suite());
    }
    if wanted(Duality) {
        out.push(suites::duality_suite(n(1_000), seed)?);
    }
    if wanted(Completeness) {
        out.push(suites::completeness_suite(n(200), seed)?);
    }
    if wanted(Consistency) {
        out.push(suites::consistency_suite(n(10_000), seed)?);
    }
    if wanted(GhzPaths) {
        out.push(suites::ghz_paths_suite(n(10_000), seed)?);
    }
    if wanted(Fixtures) {
        out.push(fixtures::fixtures_suite());
    }
    Ok(out)
}

fn verify(format: Format, name: SuiteName, samples: Option<usize>, seed: u64) -> Outcome {
    let reports = run_suites(name, samples, seed)?;
    let passed = reports.iter().all(|r| r.passed);
    match format {
        Format::Json => {
            print_json(&json!({ "passed": passed, "suites": reports }));
            for r in &reports {
                eprintln!("{}: {}", r.suite, if r.passed { "pass" } else { "FAIL" });
            }
        }
        Format::Text => {
            for r in &reports {
                out!("{r}\n");
            }
        }
    }
    if passed {
        return Ok(());
    }
    let failing: Vec<String> =
        reports.iter().flat_map(|r| r.failures().map(|c| format!("{}: {}", r.suite, c.name))).collect();
    Err(Failure::Verification(format!("failed checks: {}", failing.join("; "))))
}

fn fixtures_cmd(format: Format, action: &FixturesAction) -> Outcome {
    match action {
        FixturesAction::List => {
            let all = fixtures::all();
            match format {
                Format::Json => {
                    let list: Vec<_> =
                        all.iter().map(|f| json!({ "name": f.name, "description": f.description })).collect();
                    print_json(&list);
                }
                Format::Text => {
                    for f in &all {
                        out!("{:<20} {}", f.name, f.description);
                    }
                }
            }
        }
        FixturesAction::Show { name } => {
            let f = fixtures::get(name).ok_or_else(|| Failure::Input(format!("no fixture named {name:?}")))?;
            match format {
                Format::Json => print_json(&f),
                Format::Text => {
                    out!("{}: {}", f.name, f.description);
                    out!("payload {}", serde_json::to_string(&f.payload).expect("serializable"));
                    for e in &f.facts {
                        out!("  {}", serde_json::to_string(&e.fact).expect("serializable"));
                        out!("    {}", e.note);
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let f = cli.format;
    let outcome = match &cli.command {
        Command::Classify { file, exact, float, precision } => classify(f, file, *exact, *float, *precision),
        Command::Certify { file, cone } => certify_cmd(f, file, cone),
        Command::Enumerate { cone, ghz: _ } => enumerate(f, cone),
        Command::Verify { suite, samples, seed } => verify(f, *suite, *samples, *seed),
        Command::Fixtures { action } => fixtures_cmd(f, action),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
