//! Acceptance run: one PASS/FAIL line per criterion, with the measured
//! runtime against its limit. Exits nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use permlab::verify::{run_suite, SuiteReport, VerifyConfig};
use permlab::{Exec, Prime};

struct Criterion {
    id: u8,
    title: &'static str,
    suite: &'static str,
    limit: Option<Duration>,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "action laws, exhaustive at horizon 3 over 500 random objects",
        suite: "ac1-action-laws",
        limit: Some(Duration::from_secs(10)),
    },
    Criterion {
        id: 2,
        title: "fix-one-iff-fix-all and support-iff-span-supports at horizon 3",
        suite: "ac2-stabilizers-and-spans",
        limit: None,
    },
    Criterion {
        id: 3,
        title: "support reduction on 100 instances per p in {2,3,5} plus matching fixtures",
        suite: "ac3-support-reduction",
        limit: Some(Duration::from_secs(60)),
    },
    Criterion {
        id: 4,
        title: "density subadditivity, span bound, log* chain, tower vs iterated log*",
        suite: "ac4-thin-ideal",
        limit: None,
    },
    Criterion {
        id: 5,
        title: "thin extraction: canonical indices and 100 random stabilizing streams",
        suite: "ac5-extraction",
        limit: None,
    },
    Criterion {
        id: 6,
        title: "pair-tower refutation for N <= 5 and swap propagation for N <= 8",
        suite: "ac6-counterexample",
        limit: Some(Duration::from_secs(10)),
    },
    Criterion {
        id: 7,
        title: "Kuratowski encoder and decoder commute with the action on 200 tuples",
        suite: "ac7-kuratowski",
        limit: None,
    },
];

fn config(exec: Exec) -> VerifyConfig {
    VerifyConfig {
        p: Prime::TWO,
        horizon: 3,
        seed: 42,
        exec,
        ..VerifyConfig::default()
    }
}

fn report(id: u8, title: &str, passed: bool, elapsed: Duration, limit: Option<Duration>, note: &str) -> bool {
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let ok = passed && in_time;
    let limit = limit.map_or("no limit".to_string(), |l| format!("limit {:.0}s", l.as_secs_f64()));
    println!(
        "{} criterion {id}: {title} [{:.2}s, {limit}]{}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        if note.is_empty() { String::new() } else { format!(" ({note})") }
    );
    ok
}

fn failures(s: &SuiteReport) -> String {
    s.checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect::<Vec<_>>()
        .join("; ")
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_permlab"))
        .args(args)
        .output()
        .map_err(|e| format!("spawn failed: {e}"))?;
    if !out.status.success() {
        return Err(format!("exit status {}", out.status));
    }
    Ok(out.stdout)
}

fn criterion_8() -> bool {
    let args = ["verify-all", "--p", "2", "--horizon", "3", "--seed", "42", "--json"];
    let start = Instant::now();
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let runs = [run_cli(&args), run_cli(&args), run_cli(&seq_args)];
    let elapsed = start.elapsed();
    let (ok, note) = match &runs {
        [Ok(a), Ok(b), Ok(c)] => {
            let same = a == b;
            let same_seq = a == c;
            (
                same && same_seq && !a.is_empty(),
                format!("{} bytes, repeat identical = {same}, sequential identical = {same_seq}", a.len()),
            )
        }
        _ => (
            false,
            runs.iter().filter_map(|r| r.as_ref().err()).cloned().collect::<Vec<_>>().join("; "),
        ),
    };
    report(8, "verify-all JSON is byte-identical across runs with the same seed", ok, elapsed, None, &note)
}

fn main() -> ExitCode {
    let mut all = true;
    for c in CRITERIA {
        let start = Instant::now();
        let s = run_suite(c.suite, &config(Exec::default())).expect("suite exists");
        let elapsed = start.elapsed();
        let checks = s.checks.len();
        let note = if s.passed { format!("{checks} checks") } else { failures(&s) };
        all &= report(c.id, c.title, s.passed, elapsed, c.limit, &note);
    }
    all &= criterion_8();
    if all {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("some acceptance criteria failed");
        ExitCode::FAILURE
    }
}
