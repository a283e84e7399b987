use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use permlab::action::{
    act_hf, orbit_with, pointwise_stabilizer, stabilizer_in_with, Atom, GroupElement, Hf,
    DEFAULT_ENUM_CAP,
};
use permlab::counterexample::{build_tower, refute_pcf_with, swap_effect, DEFAULT_TOWER_CAP};
use permlab::supports::{find_small_support, is_support, ReductionInput};
use permlab::thin::{
    certify_thin, check_span_density_bound, extract_thin_subsequence, log_star,
    prefix_sum_stream, DensityProfile, ThinCertificate, VectorStream,
};
use permlab::verify::{verify_all, VerifyConfig};
use permlab::{Error, Exec, Prime, Subspace, Vector};

#[derive(Parser, Debug)]
#[command(name = "permlab", version, about = "Permutation-model laboratory over F_p")]
struct Cli {
    /// Prime p (default 2; fixtures supply their own).
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Coordinate horizon k for truncated computation.
    #[arg(long, global = true, default_value_t = 3)]
    horizon: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest subgroup or orbit that may be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUM_CAP)]
    cap_enum: u128,
    /// Largest pair tower that may be built.
    #[arg(long, global = true, default_value_t = DEFAULT_TOWER_CAP)]
    cap_tower: usize,
    /// Run enumerations on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply a group element to an object.
    Act {
        /// Object: `(a|w)` or JSON such as `{"set":[{"atom":"(0|0:1)"}]}`.
        #[arg(long)]
        x: String,
        /// Group element coordinates, e.g. `1,0,1`.
        #[arg(long)]
        g: String,
    },
    /// Orbit of an object under a subgroup (default: the whole group).
    Orbit {
        #[arg(long)]
        x: String,
        /// Subgroup generators separated by `;`.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Stabilizer of an object inside a subgroup (default: the whole group).
    Stabilizer {
        #[arg(long)]
        x: String,
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Whether A supports x; exits 1 when it does not.
    SupportCheck {
        /// Vectors separated by `;`, e.g. `0:1;1:1,2:2`.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        x: String,
    },
    /// Reduce a support A ∪ B of x ∈ X to A ∪ {b}.
    ReduceSupport {
        /// JSON file with fields p, horizon, x, X, A, B.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(long, conflicts_with = "fixture")]
        x: Option<String>,
        #[arg(long = "X", conflicts_with = "fixture")]
        big_x: Option<String>,
        #[arg(long, default_value = "", conflicts_with = "fixture")]
        a: String,
        #[arg(long, conflicts_with = "fixture")]
        b: Option<String>,
    },
    /// Prefix-density profile of a finite set of vectors.
    Density {
        #[arg(long)]
        a: String,
        /// Largest k tabulated.
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        /// Also tabulate d_k(Span A) against p^{d_k(A)}.
        #[arg(long)]
        span: bool,
        /// Write the profile as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// log*_p(n).
    Logstar {
        #[arg(long)]
        n: u128,
    },
    /// Extract a thin subsequence from a stream and certify it.
    ExtractThin {
        /// JSON file with fields p and vectors; default is x_n = e_0 + … + e_n.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value_t = 128)]
        window: usize,
    },
    /// Validate a thin-set certificate; exits 1 when invalid.
    Certify {
        #[arg(long)]
        file: PathBuf,
    },
    /// Build the pair tower X_0, …, X_{N-1} over F_2.
    Tower {
        #[arg(long)]
        n: usize,
        /// Also tabulate which levels each swap exchanges.
        #[arg(long)]
        swaps: bool,
    },
    /// Defeat every selection on the tower whose support is S.
    RefutePcf {
        #[arg(long)]
        n: Option<usize>,
        /// Levels in S, e.g. `0,2`.
        #[arg(long, default_value = "")]
        s: String,
        /// JSON file with fields n and S.
        #[arg(long, conflicts_with_all = ["n", "s"])]
        fixture: Option<PathBuf>,
    },
    /// Run every verification suite; exits 1 on any failure.
    VerifyAll,
}

/// What a command produced: a report and whether its checks passed.
struct Outcome {
    json: Value,
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(json: Value, text: impl Into<String>) -> Self {
        Outcome {
            json,
            text: text.into(),
            passed: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("serializable")
            } else {
                out.text
            };
            let _ = writeln!(stdout, "{}", body.trim_end());
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("permlab: {e}");
            match e {
                Error::Usage(_) | Error::Parse(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn to_json(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn prime(cli: &Cli, fixture: Option<u32>) -> Result<Prime, Error> {
    match (cli.p, fixture) {
        (Some(a), Some(b)) if a != b => Err(Error::PrimeMismatch { left: a, right: b }),
        (a, b) => Prime::new(a.or(b).unwrap_or(2)),
    }
}

fn exec(cli: &Cli) -> Exec {
    if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn parse_object(s: &str, p: Prime) -> Result<Hf, Error> {
    let s = s.trim();
    if s.starts_with('(') {
        return Ok(Hf::Atom(Atom::parse(s, p)?));
    }
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("object JSON: {e}")))?;
    Hf::from_json(&v, p)
}

fn parse_vectors(s: &str, p: Prime) -> Result<Vec<Vector>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(';').map(|v| Vector::parse(v.trim(), p)).collect()
}

fn subgroup(spec: &Option<String>, p: Prime, horizon: usize) -> Result<Subspace, Error> {
    match spec {
        None => Ok(Subspace::full(p, horizon)),
        Some(s) => {
            let gens = parse_vectors(s, p)?;
            let h = Subspace::span(p, &gens)?;
            h.check_horizon(horizon)?;
            Ok(h)
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, Error> {
    v.get(name)
        .ok_or_else(|| Error::Parse(format!("missing field `{name}`")))
}

fn vectors_field(v: &Value, name: &str, p: Prime) -> Result<Vec<Vector>, Error> {
    field(v, name)?
        .as_array()
        .ok_or_else(|| Error::Parse(format!("`{name}` must be an array of vector strings")))?
        .iter()
        .map(|s| {
            s.as_str()
                .ok_or_else(|| Error::Parse(format!("`{name}` entries must be strings")))
                .and_then(|s| Vector::parse(s, p))
        })
        .collect()
}

fn fixture_prime(v: &Value) -> Option<u32> {
    v.get("p").and_then(Value::as_u64).map(|p| p as u32)
}

fn list(vs: &[Vector]) -> String {
    let parts: Vec<String> = vs.iter().map(Vector::to_report_string).collect();
    format!("[{}]", parts.join("; "))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    if cli.horizon == 0 {
        return Err(Error::Usage("--horizon must be at least 1".into()));
    }
    if cli.cap_enum == 0 || cli.cap_tower == 0 {
        return Err(Error::Usage("caps must be positive".into()));
    }
    let k = cli.horizon;
    match &cli.command {
        Command::Act { x, g } => {
            let p = prime(cli, None)?;
            let x = parse_object(x, p)?;
            let g = GroupElement::parse(g, p)?;
            let y = act_hf(&x, &g)?;
            Ok(Outcome::ok(json!({ "x": x, "g": g, "result": y }), y.to_string()))
        }
        Command::Orbit { x, subgroup: h } => {
            let p = prime(cli, None)?;
            let x = parse_object(x, p)?;
            let h = subgroup(h, p, k)?;
            let o = orbit_with(&x, &h, k, cli.cap_enum, exec(cli))?;
            let text: Vec<String> = o.iter().map(Hf::to_string).collect();
            Ok(Outcome::ok(
                json!({ "size": o.len(), "orbit": o }),
                format!("orbit size {}\n{}", o.len(), text.join("\n")),
            ))
        }
        Command::Stabilizer { x, subgroup: h } => {
            let p = prime(cli, None)?;
            let x = parse_object(x, p)?;
            let h = subgroup(h, p, k)?;
            let s = stabilizer_in_with(&x, &h, k, cli.cap_enum, exec(cli))?;
            Ok(Outcome::ok(
                json!({ "dim": s.dim(), "index": h.size() / s.size(), "basis": s }),
                format!("dim {} index {}\nbasis {}", s.dim(), h.size() / s.size(), list(s.basis())),
            ))
        }
        Command::SupportCheck { a, x } => {
            let p = prime(cli, None)?;
            let a = parse_vectors(a, p)?;
            let x = parse_object(x, p)?;
            let holds = is_support(p, &a, &x, k)?;
            let g_a = pointwise_stabilizer(p, &a, k)?;
            Ok(Outcome {
                json: json!({ "supports": holds, "stabilizer_basis": g_a }),
                text: format!("supports: {holds}"),
                passed: holds,
            })
        }
        Command::ReduceSupport { fixture, x, big_x, a, b } => {
            let (p, horizon, x, big_x, a, b) = if let Some(path) = fixture {
                let v = read_json(path)?;
                let p = prime(cli, fixture_prime(&v))?;
                let horizon = field(&v, "horizon")?
                    .as_u64()
                    .ok_or_else(|| Error::Parse("`horizon` must be a number".into()))?
                    as usize;
                (
                    p,
                    horizon,
                    Hf::from_json(field(&v, "x")?, p)?,
                    Hf::from_json(field(&v, "X")?, p)?,
                    vectors_field(&v, "A", p)?,
                    vectors_field(&v, "B", p)?,
                )
            } else {
                let need = |o: &Option<String>, n: &str| {
                    o.clone()
                        .ok_or_else(|| Error::Usage(format!("--{n} is required without --fixture")))
                };
                let p = prime(cli, None)?;
                (
                    p,
                    k,
                    parse_object(&need(x, "x")?, p)?,
                    parse_object(&need(big_x, "X")?, p)?,
                    parse_vectors(a, p)?,
                    parse_vectors(&need(b, "b")?, p)?,
                )
            };
            let input = ReductionInput {
                p,
                x: &x,
                big_x: &big_x,
                a: &a,
                horizon,
                cap: cli.cap_enum,
            };
            let out = find_small_support(&input, &b)?;
            let b_text = match out.b_final.as_slice() {
                [] => "b = none (A alone supports x)".to_string(),
                bs => format!("b = {}", bs.iter().map(Vector::to_report_string).collect::<Vec<_>>().join("; ")),
            };
            let steps: Vec<String> = out
                .trace
                .steps
                .iter()
                .map(|s| match (&s.h, &s.m, &s.n, &s.b) {
                    (Some(h), Some(m), Some(n), Some(b)) => format!(
                        "  {} -> {}  h = {h}, m = {m}, n = {n}, b = {}",
                        list(&s.b_before),
                        list(&s.b_after),
                        b.to_report_string()
                    ),
                    _ => format!("  {} -> {}  (proper subset suffices)", list(&s.b_before), list(&s.b_after)),
                })
                .collect();
            let support: Vec<Vector> = out.support.iter().cloned().collect();
            Ok(Outcome::ok(
                to_json(&out),
                format!("{b_text}\nsupport {}\ntrace:\n{}", list(&support), steps.join("\n")),
            ))
        }
        Command::Density { a, k_max, span, csv } => {
            let p = prime(cli, None)?;
            let a = parse_vectors(a, p)?;
            let ks: Vec<usize> = (0..=*k_max).collect();
            let profile = DensityProfile::of(p, &a, &ks)?;
            if let Some(path) = csv {
                let f = fs::File::create(path)
                    .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))?;
                profile.write_csv(f)?;
            }
            let mut buf = Vec::new();
            profile.write_csv(&mut buf)?;
            let mut text = String::from_utf8(buf).expect("ascii csv");
            let mut json = to_json(&profile);
            let mut passed = true;
            if *span {
                let checks = ks
                    .iter()
                    .map(|&k| check_span_density_bound(p, &a, k, cli.cap_enum).map(|c| (k, c)))
                    .collect::<Result<Vec<_>, _>>()?;
                text.push_str("k,d_k(Span A),p^d_k(A),ok\n");
                for (k, c) in &checks {
                    text.push_str(&format!("{k},{},{},{}\n", c.lhs, c.rhs, c.ok));
                    passed &= c.ok;
                }
                json["span_bound"] = checks
                    .iter()
                    .map(|(k, c)| json!({ "k": k, "lhs": c.lhs, "rhs": c.rhs, "ok": c.ok }))
                    .collect();
            }
            Ok(Outcome { json, text, passed })
        }
        Command::Logstar { n } => {
            let p = prime(cli, None)?;
            let v = log_star(*n, p)?;
            Ok(Outcome::ok(json!({ "p": p, "n": n.to_string(), "logstar": v }), v.to_string()))
        }
        Command::ExtractThin { file, count, window } => {
            let ex = match file {
                Some(path) => {
                    let v = read_json(path)?;
                    let p = prime(cli, fixture_prime(&v))?;
                    let xs = vectors_field(&v, "vectors", p)?;
                    let n = xs.len();
                    extract_thin_subsequence(&mut VectorStream::new(p, xs.into_iter(), n), *count, *window)?
                }
                None => {
                    let p = prime(cli, None)?;
                    let mut s = VectorStream::new(p, prefix_sum_stream(p), *window);
                    extract_thin_subsequence(&mut s, *count, *window)?
                }
            };
            let cert = certify_thin(&ex.certificate);
            let mut json = to_json(&ex);
            json["certification"] = to_json(&cert);
            Ok(Outcome {
                json,
                text: format!(
                    "indices {:?}\ncertificate valid: {}{}",
                    ex.indices,
                    cert.valid,
                    cert.failures.iter().map(|f| format!("\n  {f}")).collect::<String>()
                ),
                passed: cert.valid,
            })
        }
        Command::Certify { file } => {
            let c = ThinCertificate::from_json(&read_json(file)?)?;
            let cert = certify_thin(&c);
            Ok(Outcome {
                json: to_json(&cert),
                text: format!(
                    "valid: {}{}",
                    cert.valid,
                    cert.failures.iter().map(|f| format!("\n  {f}")).collect::<String>()
                ),
                passed: cert.valid,
            })
        }
        Command::Tower { n, swaps } => {
            prime(cli, Some(2))?;
            let t = build_tower(*n, cli.cap_tower)?;
            let mut levels = Vec::new();
            let mut text = String::new();
            for (i, [u, v]) in t.levels().enumerate() {
                levels.push(json!({ "i": i, "elements": [u, v] }));
                text.push_str(&format!("X_{i} = {{ {u} , {v} }}\n"));
            }
            let mut json = json!({ "n": n, "levels": levels });
            if *swaps {
                let mut table = Vec::new();
                for i in 0..t.height() {
                    let fx = swap_effect(&t, i)?;
                    let swapped: Vec<usize> = fx.iter().filter(|l| l.swapped).map(|l| l.n).collect();
                    text.push_str(&format!("swap at {i} exchanges levels {swapped:?}\n"));
                    table.push(json!({ "i": i, "swapped": swapped }));
                }
                json["swaps"] = Value::Array(table);
            }
            Ok(Outcome::ok(json, text))
        }
        Command::RefutePcf { n, s, fixture } => {
            prime(cli, Some(2))?;
            let (n, set): (usize, BTreeSet<usize>) = match fixture {
                Some(path) => {
                    let v = read_json(path)?;
                    let n = field(&v, "n")?
                        .as_u64()
                        .ok_or_else(|| Error::Parse("`n` must be a number".into()))?;
                    let set = serde_json::from_value(field(&v, "S")?.clone())
                        .map_err(|e| Error::Parse(format!("`S`: {e}")))?;
                    (n as usize, set)
                }
                None => {
                    let n = n.ok_or_else(|| Error::Usage("--n or --fixture is required".into()))?;
                    let set = s
                        .split(',')
                        .filter(|t| !t.trim().is_empty())
                        .map(|t| {
                            t.trim()
                                .parse()
                                .map_err(|_| Error::Parse(format!("bad level `{t}`")))
                        })
                        .collect::<Result<_, _>>()?;
                    (n, set)
                }
            };
            let t = build_tower(n, cli.cap_tower)?;
            let r = refute_pcf_with(&t, &set, exec(cli))?;
            let text = format!(
                "S = {:?}, i = {}, g = {}\n{} selections checked; every one is moved\n{}",
                r.s,
                r.i,
                r.g,
                r.selections_checked,
                r.levels
                    .iter()
                    .map(|l| format!("  level {}: {{{}, {}}} -> {{{}, {}}}", l.n, l.before[0], l.before[1], l.after[0], l.after[1]))
                    .collect::<Vec<_>>()
                    .join("\n")
            );
            Ok(Outcome::ok(to_json(&r), text))
        }
        Command::VerifyAll => {
            let cfg = VerifyConfig {
                p: prime(cli, None)?,
                horizon: k,
                seed: cli.seed,
                cap_enum: cli.cap_enum,
                cap_tower: cli.cap_tower,
                exec: exec(cli),
            };
            let report = verify_all(&cfg);
            let mut text = String::new();
            for s in &report.suites {
                for c in &s.checks {
                    let tag = if c.passed { "PASS" } else { "FAIL" };
                    text.push_str(&format!("{tag} [{}] {}: {}\n", s.name, c.name, c.detail));
                }
            }
            let failed = report.suites.iter().filter(|s| !s.passed).count();
            text.push_str(&format!(
                "{} of {} suites passed\n",
                report.suites.len() - failed,
                report.suites.len()
            ));
            Ok(Outcome {
                json: to_json(&report),
                text,
                passed: report.passed,
            })
        }
    }
}
