use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use knotwind::abelian::{smith_normal_form, GroupElement, IntMatrix};
use knotwind::diagram::{parse, Diagram};
use knotwind::moves::{apply, move_from_parts, random_walk, Correspondence, MoveKind, MoveTrace};
use knotwind::parity::{check_axioms, check_homological_identities, Counterexample, Parity, ParityAssignment, ParityError, ParityKind};
use knotwind::universal::{build_universal, factor, Factorization};

#[derive(Parser)]
#[command(name = "knotwind", version, about = "Knot diagrams in S_g x S^1: labels, moves and winding parities")]
struct Cli {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a diagram file and print its canonical form
    Validate { file: PathBuf },
    /// Degree, arc labels, crossing labels and the knot class
    Info { file: PathBuf },
    /// Print a parity assignment
    Parity {
        file: PathBuf,
        /// label, label-mod:<n>, gauss, homological, homological-s1, homological-sg-oriented
        #[arg(long, default_value = "homological")]
        kind: ParityKind,
    },
    /// Apply one move
    Apply {
        file: PathBuf,
        /// Move kind, e.g. R1_remove or M4prime
        #[arg(long = "move")]
        kind: String,
        /// Comma-separated site: positions, or the crossing id for M4prime and Jslide
        #[arg(long, value_delimiter = ',')]
        at: Vec<u64>,
        /// Extra move parameters as a JSON object
        #[arg(long, default_value = "{}")]
        params: String,
        /// Where to write the resulting diagram (stdout otherwise)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random walk with axiom checks along the way
    Walk {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Size cap on the code length
        #[arg(long, default_value_t = 40)]
        cap: usize,
        #[arg(long)]
        trace_out: Option<PathBuf>,
        /// Parity kinds to check; `identities` adds the raw homological identities
        #[arg(long, value_delimiter = ',', default_value = "label,homological")]
        check: Vec<String>,
        /// Shift every parity value by a fixed nonzero element (tests the exit path)
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Universal parity group of a trace file
    Universal {
        trace: PathBuf,
        /// Also solve for the map to this parity
        #[arg(long)]
        factor: Option<ParityKind>,
    },
    /// Smith normal form of a matrix file
    Snf { file: PathBuf },
}

/// Exit 2 carries the counterexamples already printed.
enum Outcome {
    Ok,
    Violation,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<Diagram> {
    Ok(parse(&read(path)?)?)
}

fn emit(json: bool, v: Value, text: String) {
    if json {
        println!("{v}");
    } else {
        print!("{text}");
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let json = cli.json;
    match &cli.cmd {
        Cmd::Validate { file } => {
            let d = load(file)?;
            emit(json, json!({ "valid": true, "canonical": d.to_string() }), format!("{d}\n"));
        }
        Cmd::Info { file } => info(&load(file)?, json)?,
        Cmd::Parity { file, kind } => {
            let p = kind.assign(&load(file)?)?;
            emit(json, assignment_json(kind, &p), assignment_text(kind, &p));
        }
        Cmd::Apply { file, kind, at, params, out } => {
            let d = load(file)?;
            let kind = MoveKind::from_name(kind).ok_or_else(|| anyhow!("unknown move kind {kind:?}"))?;
            let params: Map<String, Value> = serde_json::from_str(params).context("--params must be a JSON object")?;
            let mv = move_from_parts(kind, at, &params).map_err(|e| anyhow!(e))?;
            let (result, corr) = apply(&d, &mv)?;
            if let Some(path) = out {
                fs::write(path, format!("{result}\n")).with_context(|| format!("writing {}", path.display()))?;
            }
            let text = match out {
                Some(_) => corr_text(&corr),
                None => format!("{result}\n{}", corr_text(&corr)),
            };
            emit(json, json!({ "result": result.to_string(), "correspondence": corr_json(&corr) }), text);
        }
        Cmd::Walk { file, steps, seed, cap, trace_out, check, inject_fault } => {
            return walk(&load(file)?, *steps, *seed, *cap, trace_out.as_deref(), check, *inject_fault, json);
        }
        Cmd::Universal { trace, factor: kind } => return universal(trace, kind.as_ref(), json),
        Cmd::Snf { file } => {
            let a = IntMatrix::parse(&read(file)?)?;
            let s = smith_normal_form(&a);
            let rows = |m: &IntMatrix| -> Vec<Vec<String>> {
                (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect()
            };
            emit(
                json,
                json!({ "U": rows(&s.u), "D": rows(&s.d), "V": rows(&s.v), "invariant_factors": strings(&s.d.diagonal()) }),
                format!("U\n{}D\n{}V\n{}", s.u, s.d, s.v),
            );
        }
    }
    Ok(Outcome::Ok)
}

fn strings(xs: &[BigInt]) -> Vec<String> {
    xs.iter().filter(|x| x.sign() != num_bigint::Sign::NoSign).map(ToString::to_string).collect()
}

fn info(d: &Diagram, json: bool) -> Result<()> {
    let mut text = format!("degree {}\narc labels {:?}\nknot class {:?}\n", d.degree(), d.arc_labels(), d.knot_class());
    let mut crossings = Vec::new();
    for c in d.crossings() {
        let l = d.crossing_label(c)?;
        let s = d.crossing_sign(c)?.value();
        text.push_str(&format!("crossing {c} sign {s:+} label {} reduced {}\n", l.raw, l.reduced));
        crossings.push(json!({ "id": c, "sign": s, "raw": l.raw, "reduced": l.reduced.to_string() }));
    }
    let v = json!({
        "degree": d.degree(),
        "arc_labels": d.arc_labels(),
        "knot_class": d.knot_class(),
        "crossings": crossings,
    });
    emit(json, v, text);
    Ok(())
}

fn assignment_text(kind: &ParityKind, p: &ParityAssignment) -> String {
    let mut s = format!("parity {kind}\ngroup {}\nfixed {}\n", p.group.describe(), p.fixed);
    for (c, x) in &p.values {
        s.push_str(&format!("crossing {c} {x}\n"));
    }
    s
}

fn assignment_json(kind: &ParityKind, p: &ParityAssignment) -> Value {
    let values: Map<String, Value> = p.values.iter().map(|(c, x)| (c.to_string(), Value::from(x.to_string()))).collect();
    json!({
        "parity": kind.to_string(),
        "group": p.group.describe(),
        "invariant_factors": strings(&p.group.invariant_factors()),
        "free_rank": p.group.free_rank(),
        "fixed": p.fixed.to_string(),
        "values": values,
    })
}

fn corr_text(c: &Correspondence) -> String {
    let pairs: Vec<String> = c.surviving.iter().map(|(a, b)| format!("{a}->{b}")).collect();
    let mut s = format!("surviving {}\ncreated {:?}\ndestroyed {:?}\n", pairs.join(" "), c.created, c.destroyed);
    if let Some(r) = c.r3_roles {
        s.push_str(&format!("r3 roles {r:?}\n"));
    }
    if let Some(t) = c.m4_target {
        s.push_str(&format!("changed {t}\n"));
    }
    s
}

fn corr_json(c: &Correspondence) -> Value {
    let surviving: Map<String, Value> = c.surviving.iter().map(|(a, b)| (a.to_string(), Value::from(*b))).collect();
    json!({
        "surviving": surviving,
        "created": c.created,
        "destroyed": c.destroyed,
        "r3_roles": c.r3_roles,
        "m4_target": c.m4_target,
    })
}

/// A parity with every value moved by the same nonzero element.
struct Faulty(ParityKind);

impl Parity for Faulty {
    fn name(&self) -> String {
        format!("{}+fault", self.0)
    }

    fn assign(&self, d: &Diagram) -> Result<ParityAssignment, ParityError> {
        let mut p = self.0.assign(d)?;
        let shift: Option<GroupElement> = (0..p.group.rank()).map(|i| p.group.generator(i)).find(|g| !g.is_zero());
        if let Some(g) = shift {
            for x in p.values.values_mut() {
                *x = x.try_add(&g).expect("same group");
            }
        }
        Ok(p)
    }

    fn profile(&self) -> knotwind::parity::Profile {
        self.0.profile()
    }
}

fn cx_json(c: &Counterexample) -> Value {
    json!({ "axiom": c.axiom, "step": c.step, "crossings": c.crossings, "expected": c.expected, "actual": c.actual })
}

#[allow(clippy::too_many_arguments)]
fn walk(
    d: &Diagram,
    steps: usize,
    seed: u64,
    cap: usize,
    trace_out: Option<&Path>,
    check: &[String],
    inject_fault: bool,
    json: bool,
) -> Result<Outcome> {
    let t = random_walk(d, steps, seed, cap)?;
    if let Some(path) = trace_out {
        fs::write(path, t.to_jsonl()).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut lines = format!("walk steps {} seed {seed} cap {cap}\n", t.len());
    let mut checks = Vec::new();
    let mut bad = Vec::new();

    // degree and validity are preserved by every move
    let mut broken = None;
    for (i, x) in t.diagrams().enumerate() {
        if x.degree() != d.degree() || x.validate().is_err() {
            broken = Some(i);
            break;
        }
    }
    lines.push_str(&format!("check invariants {}\n", if broken.is_none() { "ok" } else { "FAIL" }));
    checks.push(json!({ "check": "invariants", "passed": broken.is_none() }));
    if let Some(i) = broken {
        bad.push(json!({ "check": "invariants", "axiom": "degree", "step": i }));
        lines.push_str(&format!("counterexample invariants: diagram {i} changes degree or fails validation\n"));
    }

    for name in check {
        let report = if name == "identities" {
            check_homological_identities(&t)
        } else {
            let kind: ParityKind = name.parse()?;
            if inject_fault {
                check_axioms(&t, &Faulty(kind))?
            } else {
                check_axioms(&t, &kind)?
            }
        };
        let tallies: Map<String, Value> =
            report.tallies.iter().map(|(a, (p, f))| (a.to_string(), json!({ "pass": p, "fail": f }))).collect();
        let label = if name == "identities" { name.clone() } else { report.parity.clone() };
        checks.push(json!({ "check": label, "passed": report.passed(), "tallies": tallies }));
        let summary: Vec<String> = report.tallies.iter().map(|(a, (p, f))| format!("{a} {p}/{}", p + f)).collect();
        let verdict = if report.passed() { "ok" } else { "FAIL" };
        lines.push_str(&format!("check {label} {verdict} {}\n", summary.join(" ")));
        // the first violation is enough to act on
        if let Some(c) = report.counterexamples.first() {
            lines.push_str(&format!("counterexample {label}: {c}\n"));
            let mut v = cx_json(c);
            v["check"] = Value::from(label);
            bad.push(v);
        }
    }
    let violated = !bad.is_empty();
    emit(json, json!({ "steps": t.len(), "seed": seed, "cap": cap, "checks": checks, "counterexamples": bad }), lines);
    Ok(if violated { Outcome::Violation } else { Outcome::Ok })
}

/// `3 g5 - g7` style; the ranks here run into the hundreds.
fn sparse(x: &GroupElement) -> String {
    let terms: Vec<String> = x
        .rep()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.sign() != num_bigint::Sign::NoSign)
        .map(|(k, c)| if *c == BigInt::from(1) { format!("g{k}") } else { format!("{c} g{k}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn universal(path: &Path, kind: Option<&ParityKind>, json: bool) -> Result<Outcome> {
    let t = MoveTrace::from_jsonl(&read(path)?)?;
    let u = build_universal(&t)?;
    let mut report = u.report_json();
    let mut text = format!("generators {}\n", u.generators.len());
    if let Some(counts) = report["relations"].as_object() {
        for (k, n) in counts {
            text.push_str(&format!("relations {k} {n}\n"));
        }
    }
    text.push_str(&format!("group {}\none {}\n", u.group.describe(), sparse(&u.one_class)));
    let mut outcome = Outcome::Ok;
    if let Some(kind) = kind {
        match factor(&u, &t, kind)? {
            Factorization::Hom(_) => {
                text.push_str(&format!("factor {kind} ok\n"));
                report["factor"] = json!({ "parity": kind.to_string(), "ok": true });
            }
            Factorization::Inconsistent { relation, name, image } => {
                text.push_str(&format!("factor {kind} FAIL\ncounterexample relation {relation} {name} maps to {image}\n"));
                report["factor"] = json!({
                    "parity": kind.to_string(),
                    "ok": false,
                    "counterexample": { "relation": relation, "name": name, "image": image.to_string() },
                });
                outcome = Outcome::Violation;
            }
        }
    }
    emit(json, report, text);
    Ok(outcome)
}
