//! `hurwitz`: command-line front end to the intersection engine.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 a certification
//! or self-test failure.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hurwitz_core::chow::ring_by_name;
use hurwitz_core::divisor_classes::{
    ce_class, class_at, class_x, class_x_at, maroni_class, slope_bound, DivisorClass,
};
use hurwitz_core::family_calc::{
    invariants_from_chern, partial_pencil_record, ChernData, Hit, PencilKind, PencilParams,
};
use hurwitz_core::graphs::enumerate_two_vertex;
use hurwitz_core::selftest::run_all;
use hurwitz_core::symkernel::{int, Poly};
use hurwitz_core::yeff::{certify, verify_certificate, Certificate};
use hurwitz_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "hurwitz",
    version,
    about = "Exact intersection theory on low-degree Hurwitz spaces"
)]
struct Cli {
    /// Emit JSON instead of text tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Slope bound a/b of the class X at an admissible (d, g).
    Slope { d: i64, g: i64 },
    /// Maroni, Casnati–Ekedahl or X class in the basis (λ, δ, D).
    Class {
        #[arg(value_enum)]
        which: ClassKind,
        d: i64,
        /// Evaluate at this genus.
        #[arg(long)]
        at: Option<i64>,
    },
    /// Family invariants λ, κ, δ, T, D from Chern data (numbers or polynomials).
    Invariants {
        #[arg(long)]
        d: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        ch2e: String,
        #[arg(long)]
        ch2f: String,
        #[arg(long)]
        c1sq: String,
    },
    /// Intersection record of a pencil family.
    Pencil {
        /// Record name, e.g. trigonal_plain or tetragonal_ramified.
        kind: String,
        /// Genus of the varied side.
        #[arg(long)]
        gr: i64,
        /// Local degrees at the varied vertex, comma separated.
        #[arg(long, value_delimiter = ',')]
        profile: Option<Vec<i64>>,
    },
    /// Chow ring computations.
    Chow {
        #[command(subcommand)]
        action: ChowAction,
    },
    /// Boundary dual graphs.
    Graphs {
        #[command(subcommand)]
        action: GraphsAction,
    },
    /// Effectivity certificate for Y = aλ - bδ - X.
    Yeff {
        #[command(subcommand)]
        action: YeffAction,
    },
    /// Run the identity suite.
    Selftest,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ClassKind {
    Maroni,
    Ce,
    X,
}

#[derive(Subcommand, Debug)]
enum ChowAction {
    /// Normal form and top-degree integral of a class.
    Eval {
        /// Ring name: p1xp1, p<n>, p<n>xp1, hirzebruch:<h>, pe:<rank>:<c1>, g25:<deg>.
        ring: String,
        expr: String,
    },
}

#[derive(Subcommand, Debug)]
enum GraphsAction {
    /// All 2-vertex graphs of degree d and genus g.
    Enum {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        g: i64,
    },
}

#[derive(Subcommand, Debug)]
enum YeffAction {
    /// Certify every higher boundary coefficient at (d, g).
    Certify {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        g: i64,
        /// Write the certificate as JSON to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Print every derivation chain.
        #[arg(long)]
        transcript: bool,
    },
    /// Replay a certificate file.
    Verify { path: PathBuf },
}

/// What a command produced: text, JSON, and whether it counts as a failure.
struct Output {
    text: String,
    json: Value,
    failed: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Output {
        Output {
            text,
            json,
            failed: false,
        }
    }
}

#[derive(Debug)]
enum CliError {
    Domain(String),
}

impl<E: Into<Error>> From<E> for CliError {
    fn from(e: E) -> CliError {
        CliError::Domain(e.into().to_string())
    }
}

fn table(rows: &[(String, String)]) -> String {
    let w = rows
        .iter()
        .map(|(k, _)| k.chars().count())
        .max()
        .unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<w$}  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn row(k: impl Into<String>, v: impl ToString) -> (String, String) {
    (k.into(), v.to_string())
}

fn class_rows(c: &DivisorClass) -> Vec<(String, String)> {
    vec![
        row("lambda", &c.lambda),
        row("delta", &c.delta),
        row("D", &c.d),
    ]
}

fn hit_str(h: &Hit) -> String {
    match h {
        Hit::Exact(q) => q.to_string(),
        Hit::NonNegative => ">= 0".into(),
    }
}

fn slope(d: i64, g: i64) -> Result<Output, CliError> {
    let s = slope_bound(d, g)?;
    Ok(Output::ok(
        s.to_string(),
        json!({ "d": d, "g": g, "slope": s }),
    ))
}

fn class(which: ClassKind, d: i64, at: Option<i64>) -> Result<Output, CliError> {
    let (name, class) = match which {
        ClassKind::Maroni => ("M", maroni_class(d)?),
        ClassKind::Ce => ("CE", ce_class(d)?),
        ClassKind::X => ("X", class_x(d)?.x),
    };
    let class = match at {
        Some(g) => class_at(&class, d, g)?,
        None => class,
    };
    let mut rows = vec![row("class", name), row("d", d)];
    if let Some(g) = at {
        rows.push(row("g", g));
    }
    rows.extend(class_rows(&class));
    let mut j = json!({ "class": name, "d": d, "g": at, "coefficients": class });
    if let ClassKind::X = which {
        let cx = class_x(d)?;
        match at {
            Some(g) => {
                let x = class_x_at(d, g)?;
                rows.extend([
                    row("a", &x.a),
                    row("b", &x.b),
                    row("weight M", &x.weight_m),
                    row("weight CE", &x.weight_ce),
                ]);
                j["x"] = serde_json::to_value(&x).expect("serializable");
            }
            None => {
                rows.extend([
                    row("a", &cx.a),
                    row("b", &cx.b),
                    row("weight M", &cx.weight_m),
                    row("weight CE", &cx.weight_ce),
                ]);
                j["x"] = json!({
                    "a": cx.a.to_string(), "b": cx.b.to_string(),
                    "weight_m": cx.weight_m.to_string(), "weight_ce": cx.weight_ce.to_string(),
                });
            }
        }
    }
    Ok(Output::ok(table(&rows), j))
}

fn invariants(d: &str, g: &str, ch2e: &str, ch2f: &str, c1sq: &str) -> Result<Output, CliError> {
    let p = |s: &str| Poly::parse(s).map_err(CliError::from);
    let c = ChernData {
        d: p(d)?,
        g: p(g)?,
        ch2e: p(ch2e)?,
        ch2f: p(ch2f)?,
        c1sq_e: p(c1sq)?,
    };
    if c.b() == int(0) {
        return Err(CliError::Domain("b = 2g + 2d - 2 vanishes".into()));
    }
    let inv = invariants_from_chern(&c);
    let rows = vec![
        row("lambda", &inv.lambda),
        row("kappa", &inv.kappa),
        row("delta", &inv.delta),
        row("T", &inv.t),
        row("D", &inv.d),
        row("R^2", &inv.r_squared),
        row("B^2", &inv.b_squared),
        row("B.omega", &inv.b_dot_omega),
    ];
    Ok(Output::ok(
        table(&rows),
        serde_json::to_value(&inv).expect("serializable"),
    ))
}

fn pencil(kind: &str, g_r: i64, profile: Option<Vec<i64>>) -> Result<Output, CliError> {
    let kind: PencilKind = kind.parse()?;
    let rec = partial_pencil_record(
        kind,
        &PencilParams {
            g_r,
            g: None,
            profile,
        },
    )?;
    let mut rows = vec![row("kind", kind)];
    for (k, v) in &rec.params {
        rows.push(row(k.as_str(), v));
    }
    if let Some(p) = &rec.profile {
        rows.push(row("profile", format!("{p:?}")));
    }
    rows.push(row("lambda", &rec.lambda));
    rows.push(row("delta", &rec.delta));
    rows.push(row("lambda(gR)", &rec.lambda_expr));
    rows.push(row("delta(gR)", &rec.delta_expr));
    for h in &rec.hits {
        let printed = h
            .printed
            .as_ref()
            .map(|p| format!(" (printed {p})"))
            .unwrap_or_default();
        rows.push(row(
            format!("hit {:?}", h.role).to_lowercase(),
            format!("{}{printed}", h.value),
        ));
    }
    rows.push(row("M.p", hit_str(&rec.maroni_hit)));
    rows.push(row("CE.p", hit_str(&rec.ce_hit)));
    rows.push(row("sweeps", rec.sweeps));
    rows.push(row("reconstructed", rec.reconstructed));
    for n in &rec.notes {
        rows.push(row("note", n));
    }
    Ok(Output::ok(
        table(&rows),
        serde_json::to_value(&rec).expect("serializable"),
    ))
}

fn chow_eval(ring: &str, expr: &str) -> Result<Output, CliError> {
    let r = ring_by_name(ring)?;
    let c = r.parse_class(expr)?;
    let top = c.integrate_top_part();
    let rows = vec![
        row("ring", &r.name),
        row("class", &c),
        row("integral", &top),
    ];
    Ok(Output::ok(
        table(&rows),
        json!({ "ring": r.name, "class": c.to_string(), "integral": top.to_string() }),
    ))
}

fn graphs_enum(d: i64, g: i64) -> Result<Output, CliError> {
    if d < 2 || g < 0 {
        return Err(CliError::Domain(format!(
            "need d >= 2 and g >= 0, got d = {d}, g = {g}"
        )));
    }
    let mut graphs = enumerate_two_vertex(d, g);
    graphs.sort_by_key(|gr| (gr.excess(), gr.ramification_index(), gr.label()));
    let mut lines = vec![format!("{:<10} {:>6} {:>3}  label", "type", "excess", "r")];
    let mut out = Vec::new();
    for gr in &graphs {
        let ty = format!("{:?}", gr.classify()).to_lowercase();
        lines.push(format!(
            "{ty:<10} {:>6} {:>3}  {}",
            gr.excess(),
            gr.ramification_index(),
            gr.label()
        ));
        out.push(json!({
            "label": gr.label(),
            "graph": gr.to_compact(),
            "type": gr.classify(),
            "excess": gr.excess(),
            "ramification_index": gr.ramification_index(),
        }));
    }
    lines.push(format!("{} graphs", graphs.len()));
    Ok(Output::ok(lines.join("\n"), Value::Array(out)))
}

fn transcript(c: &Certificate) -> String {
    let mut lines = Vec::new();
    for label in &c.order {
        let e = &c.per_graph[label];
        let lb = e
            .lower_bound
            .as_ref()
            .map(|q| q.to_string())
            .unwrap_or_else(|| "none".into());
        lines.push(format!(
            "{label}  ex={} gR={} r={}  c >= {lb}",
            e.excess, e.g_r, e.ramification_index
        ));
        if let Some(b) = &e.base {
            lines.push(format!("    base: {b}"));
        }
        if let Some(u) = &e.unreachable {
            lines.push(format!("    unreachable: {u}"));
        }
        if let Some(step) = e.derivation_chain.last() {
            let terms: Vec<String> = step
                .terms
                .iter()
                .map(|t| format!("{}·c({}) [{}]", t.coefficient, t.label, t.lower_bound))
                .collect();
            let rhs = if terms.is_empty() {
                String::new()
            } else {
                format!("{} + ", terms.join(" + "))
            };
            lines.push(format!(
                "    {}: c >= {rhs}{}",
                c.rules[&step.rule].record, step.slack
            ));
        }
    }
    lines.join("\n")
}

fn yeff_certify(d: i64, g: i64, emit: Option<PathBuf>, show: bool) -> Result<Output, CliError> {
    let c = certify(d, g)?;
    if let Some(path) = &emit {
        let body = serde_json::to_string_pretty(&c).expect("serializable");
        std::fs::write(path, body)
            .map_err(|e| CliError::Domain(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut text = if c.is_certified() {
        format!("certified ({} graphs)", c.enumerated_count())
    } else {
        c.status.to_string()
    };
    if show {
        text = format!("{}\n{text}", transcript(&c));
    }
    let failed = !c.is_certified();
    Ok(Output {
        text,
        json: serde_json::to_value(&c).expect("serializable"),
        failed,
    })
}

fn yeff_verify(path: &PathBuf) -> Result<Output, CliError> {
    let body = std::fs::read_to_string(path)
        .map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))?;
    let c: Certificate = serde_json::from_str(&body)
        .map_err(|e| CliError::Domain(format!("bad certificate: {e}")))?;
    let replay = verify_certificate(&c);
    let failed = replay.is_err() || !c.is_certified();
    let text = match &replay {
        Ok(()) => format!("replayed {} graphs: {}", c.per_graph.len(), c.status),
        Err(e) => e.to_string(),
    };
    Ok(Output {
        text,
        json: json!({ "replayed": replay.is_ok(), "status": c.status }),
        failed,
    })
}

fn selftest() -> Output {
    let results = run_all();
    let mut lines = Vec::new();
    for r in &results {
        lines.push(format!(
            "{} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.title
        ));
        if !r.passed {
            lines.extend(r.details.iter().map(|d| format!("     {d}")));
        }
    }
    let failed = results.iter().any(|r| !r.passed);
    let j = json!(results
        .iter()
        .map(|r| json!({ "id": r.id, "title": r.title, "passed": r.passed, "details": r.details }))
        .collect::<Vec<_>>());
    Output {
        text: lines.join("\n"),
        json: j,
        failed,
    }
}

fn dispatch(cmd: Command) -> Result<Output, CliError> {
    match cmd {
        Command::Slope { d, g } => slope(d, g),
        Command::Class { which, d, at } => class(which, d, at),
        Command::Invariants {
            d,
            g,
            ch2e,
            ch2f,
            c1sq,
        } => invariants(&d, &g, &ch2e, &ch2f, &c1sq),
        Command::Pencil { kind, gr, profile } => pencil(&kind, gr, profile),
        Command::Chow {
            action: ChowAction::Eval { ring, expr },
        } => chow_eval(&ring, &expr),
        Command::Graphs {
            action: GraphsAction::Enum { d, g },
        } => graphs_enum(d, g),
        Command::Yeff {
            action:
                YeffAction::Certify {
                    d,
                    g,
                    emit,
                    transcript,
                },
        } => yeff_certify(d, g, emit, transcript),
        Command::Yeff {
            action: YeffAction::Verify { path },
        } => yeff_verify(&path),
        Command::Selftest => Ok(selftest()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match dispatch(cli.command) {
        Ok(out) => {
            let body = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("serializable")
            } else {
                out.text
            };
            // A closed pipe (`| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            if out.failed {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
