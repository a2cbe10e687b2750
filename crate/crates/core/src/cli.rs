//! Command-line front end. [`run`] is pure apart from the oracle's timing
//! line on stderr, so tests drive it directly.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::canon::{canonicalize, decide_iso, IsoVerdict, Trace};
use crate::classify::{classify, ClassQuery};
use crate::error::Error;
use crate::oracle::{cross_check, UniverseSpec};
use crate::ordinal::{Cardinal, KappaBound};
use crate::parser::{parse, ParseError};
use crate::term::{Kind, Term};
use crate::SCHEMA;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_COUNTEREXAMPLES: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "reid-hier", version, about = "Classify and compare non-Archimedean Banach space expressions")]
struct Cli {
    /// Bound on index cardinalities: an infinite cardinal (w, w1, aleph(..)) or `ord`
    #[arg(long, global = true, default_value = "ord", value_parser = parse_kappa)]
    kappa: KappaBound,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Include rewrite derivations
    #[arg(long, global = true)]
    trace: bool,
    /// Do not assume the value group of k is dense
    #[arg(long, global = true)]
    no_dense: bool,
    /// Do not assume kappa satisfies the non-measurability condition
    #[arg(long, global = true)]
    no_nonmeasurable: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the descriptor of an expression
    Classify { expr: String },
    /// Print the canonical form of an expression
    Canon { expr: String },
    /// Decide whether two expressions are isomorphic
    Iso { left: String, right: String },
    /// Print the Reid rank of an expression
    Rank { expr: String },
    /// Test membership in a class such as pi(2), delta(w+1), mr(1), fk
    Member {
        expr: String,
        #[arg(long = "class", value_parser = parse_query)]
        class: ClassQuery,
    },
    /// Print an alternating tower
    Tower {
        /// Outermost kind: pi (or 0) / sigma (or 1)
        #[arg(long = "t", value_parser = parse_kind)]
        t: Kind,
        #[arg(long = "n")]
        n: u64,
        #[arg(long = "card", default_value = "w", value_parser = parse_card)]
        card: Cardinal,
    },
    /// Cross-check canonical forms against the brute-force rewrite closure
    Oracle {
        #[arg(long)]
        depth: usize,
        /// Comma-separated cardinalities, e.g. 1,2,w
        #[arg(long, value_delimiter = ',', value_parser = parse_card)]
        cards: Vec<Cardinal>,
        #[arg(long, default_value_t = 1)]
        max_groups: usize,
        /// Also enumerate ramp members
        #[arg(long)]
        ramps: bool,
    },
}

fn parse_kappa(s: &str) -> Result<KappaBound, String> {
    s.parse().map_err(|e: ParseError| e.to_string())
}

fn parse_query(s: &str) -> Result<ClassQuery, String> {
    s.parse().map_err(|e: ParseError| e.to_string())
}

fn parse_card(s: &str) -> Result<Cardinal, String> {
    s.trim().parse().map_err(|e: ParseError| e.to_string())
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    match s {
        "pi" | "0" => Ok(Kind::Pi),
        "sigma" | "1" => Ok(Kind::Sigma),
        _ => Err(format!("expected pi, sigma, 0 or 1, got `{s}`")),
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    kappa: KappaBound,
    json: bool,
    trace: bool,
    dense: bool,
    nonmeasurable: bool,
}

impl Ctx {
    fn hypotheses(&self) -> Value {
        json!({ "value_group_dense": self.dense, "non_measurable": self.nonmeasurable })
    }

    fn doc(&self, mut body: Value) -> Value {
        let obj = body.as_object_mut().expect("object body");
        obj.insert("schema".into(), json!(SCHEMA));
        obj.insert("kappa".into(), json!(self.kappa.to_string()));
        obj.insert("hypotheses".into(), self.hypotheses());
        body
    }
}

enum Failure {
    Parse(ParseError),
    Lib(Error),
    Internal(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Parse(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => Failure::Parse(p),
            e => Failure::Lib(e),
        }
    }
}

fn term(src: &str) -> Result<Term, Failure> {
    Ok(parse(src)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn trace_json(t: &Trace) -> Value {
    serde_json::to_value(t).expect("serializable")
}

/// Parses `argv` (including the program name) and executes the command.
pub fn run<I, S>(argv: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let wants_json = argv.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Output { code: EXIT_OK, stdout: e.to_string(), stderr: String::new() };
            }
            let msg = e.to_string();
            return if wants_json {
                let v = json!({ "schema": SCHEMA, "error": { "kind": "usage", "message": msg.trim() } });
                Output { code: EXIT_PARSE, stdout: pretty(&v), stderr: String::new() }
            } else {
                Output { code: EXIT_PARSE, stdout: String::new(), stderr: msg }
            };
        }
    };
    let ctx = Ctx {
        kappa: cli.kappa.clone(),
        json: cli.json,
        trace: cli.trace,
        dense: !cli.no_dense,
        nonmeasurable: !cli.no_nonmeasurable,
    };
    let result = catch_unwind(AssertUnwindSafe(|| dispatch(&ctx, cli.command)));
    match result {
        Ok(Ok(out)) => out,
        Ok(Err(f)) => failure(&ctx, f),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            failure(&ctx, Failure::Internal(msg))
        }
    }
}

impl Output {
    fn text(s: String) -> Self {
        Output { code: EXIT_OK, stdout: s, stderr: String::new() }
    }
}

fn failure(ctx: &Ctx, f: Failure) -> Output {
    let (code, kind, message, extra) = match &f {
        Failure::Parse(p) => (EXIT_PARSE, "parse", p.to_string(), json!({ "span": p.span, "expected": p.expected })),
        Failure::Lib(e) => match e {
            Error::Validation(v) => (EXIT_VALIDATION, "validation", e.to_string(), json!({ "violations": v })),
            Error::BadUniverse(_) => (EXIT_VALIDATION, "validation", e.to_string(), json!({})),
            Error::Parse(_) => unreachable!("converted to Failure::Parse"),
            Error::RewriteLimit(_) | Error::CapExceeded { .. } => (EXIT_INTERNAL, "internal", e.to_string(), json!({})),
        },
        Failure::Internal(m) => (EXIT_INTERNAL, "internal", m.clone(), json!({})),
    };
    if ctx.json {
        let mut err = json!({ "kind": kind, "message": message });
        if let (Some(o), Some(x)) = (err.as_object_mut(), extra.as_object()) {
            o.extend(x.clone());
        }
        Output { code, stdout: pretty(&json!({ "schema": SCHEMA, "error": err })), stderr: String::new() }
    } else {
        Output { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

fn dispatch(ctx: &Ctx, cmd: Command) -> Result<Output, Failure> {
    match cmd {
        Command::Classify { expr } => {
            let t = term(&expr)?;
            let d = classify(&t, &ctx.kappa)?;
            Ok(if ctx.json {
                Output::text(pretty(&ctx.doc(json!({ "term": t.to_string(), "descriptor": d }))))
            } else {
                Output::text(format!("{d}\n"))
            })
        }
        Command::Canon { expr } => {
            let t = term(&expr)?;
            let (c, trace) = canonicalize(&t, &ctx.kappa)?;
            Ok(if ctx.json {
                let mut v = json!({ "term": t.to_string(), "canonical": c });
                if ctx.trace {
                    v["trace"] = trace_json(&trace);
                }
                Output::text(pretty(&ctx.doc(v)))
            } else if ctx.trace {
                Output::text(format!("{c}\n{trace}"))
            } else {
                Output::text(format!("{c}\n"))
            })
        }
        Command::Iso { left, right } => {
            let (a, b) = (term(&left)?, term(&right)?);
            let decision = decide_iso(&a, &b, &ctx.kappa)?;
            let downgrade = matches!(decision.verdict, IsoVerdict::NonIsomorphic { .. }) && !(ctx.dense && ctx.nonmeasurable);
            let note = downgrade.then_some(
                "descriptors differ, but non-isomorphism is only established when the value group of k is \
                 dense and kappa satisfies the non-measurability condition",
            );
            let reported = if downgrade { "unknown" } else { decision.verdict.name() };
            Ok(if ctx.json {
                let mut v = json!({ "verdict": reported, "decision": decision.verdict });
                if let Some(n) = note {
                    v["note"] = json!(n);
                }
                if ctx.trace {
                    v["trace"] = json!({ "left": trace_json(&decision.left), "right": trace_json(&decision.right) });
                }
                Output::text(pretty(&ctx.doc(v)))
            } else {
                let mut s = match (&decision.verdict, note) {
                    (_, Some(n)) => format!("unknown: {n}\n"),
                    (IsoVerdict::Isomorphic { .. }, _) => "isomorphic\n".to_string(),
                    (IsoVerdict::NonIsomorphic { left, right }, _) => format!("not isomorphic: {left} vs {right}\n"),
                    (IsoVerdict::Unknown { shared, left_canonical, right_canonical }, _) => format!(
                        "unknown: both {shared}, canonical forms {left_canonical} and {right_canonical} differ\n"
                    ),
                };
                if ctx.trace {
                    s.push_str(&format!("left:\n{}right:\n{}", decision.left, decision.right));
                }
                Output::text(s)
            })
        }
        Command::Rank { expr } => {
            let t = term(&expr)?;
            let r = classify(&t, &ctx.kappa)?.reid_rank();
            Ok(if ctx.json {
                Output::text(pretty(&ctx.doc(json!({ "term": t.to_string(), "rank": r.to_string() }))))
            } else {
                Output::text(format!("{r}\n"))
            })
        }
        Command::Member { expr, class } => {
            let t = term(&expr)?;
            let m = classify(&t, &ctx.kappa)?.satisfies(&class);
            Ok(if ctx.json {
                Output::text(pretty(&ctx.doc(json!({ "term": t.to_string(), "class": format!("{class:?}"), "member": m }))))
            } else {
                Output::text(format!("{m}\n"))
            })
        }
        Command::Tower { t, n, card } => {
            if !card.is_infinite() {
                return Err(Failure::Parse(ParseError::new(0..0, "tower cardinality must be infinite", ["w", "w1", "aleph"])));
            }
            if n > crate::parser::MAX_TOWER {
                return Err(Failure::Parse(ParseError::new(0..0, "tower height too large", ["NAT"])));
            }
            let tower = Term::tower(t, n as usize, card);
            tower.validate(&ctx.kappa).map_err(Error::from)?;
            Ok(if ctx.json {
                Output::text(pretty(&ctx.doc(json!({ "term": tower.to_string() }))))
            } else {
                Output::text(format!("{tower}\n"))
            })
        }
        Command::Oracle { depth, cards, max_groups, ramps } => {
            let mut spec = UniverseSpec::new(depth, cards, max_groups);
            spec.allow_ramps = ramps;
            let start = Instant::now();
            let report = cross_check(&spec, &ctx.kappa)?;
            let stderr = format!("oracle finished in {:.2}s\n", start.elapsed().as_secs_f64());
            let code = if report.is_clean() { EXIT_OK } else { EXIT_COUNTEREXAMPLES };
            let stdout = if ctx.json {
                pretty(&serde_json::to_value(&report).expect("serializable"))
            } else {
                let mut s = format!(
                    "universe {} terms, {} classes, {} counterexamples\n",
                    report.universe_size,
                    report.class_count,
                    report.counterexamples.len()
                );
                for l in &report.levels {
                    s.push_str(&format!(
                        "  depth {}: {} seeds from {} members ({}), {} classes, {} padded, {} edges\n",
                        l.depth, l.seeds, l.member_count, l.members, l.classes, l.padded, l.rewrite_edges
                    ));
                }
                for c in &report.counterexamples {
                    s.push_str(&format!("  {:?}: {} / {} ({})\n", c.kind, c.left, c.right, c.detail));
                }
                s
            };
            Ok(Output { code, stdout, stderr })
        }
    }
}
