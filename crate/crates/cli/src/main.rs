//! `fdrkit`: front-door reducibility checks from the command line.
//!
//! Exit codes: 0 success (reducible, found, separated), 1 negative answer
//! (FAIL, not reducible, connected, tolerance exceeded), 2 usage or parse
//! error, 3 size cap exceeded or zero-probability conditioning.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fdrkit::{
    causal_effect, check_fdr_triple, enumerate_triples_with, eq10_bound, equivalence_check, fdr_adjustment,
    find_triple_with, joint_distribution, m_separated, parse_document, parse_model, random_scm, Admg, Error,
    Execution, FdrReport, FdrTriple, NodeId, NodeSet, SearchStats,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "fdrkit", version, about = "Front-door reducibility for acyclic directed mixed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the three reducibility conditions for a given triple.
    Check(CheckArgs),
    /// Find the canonically first admissible triple.
    Find(SearchArgs),
    /// List every admissible triple in canonical order.
    Enumerate(SearchArgs),
    /// Query m-separation, optionally after removing arcs.
    Msep(MsepArgs),
    /// Compare the adjustment formula with the true effect on random models.
    Verify(VerifyArgs),
    /// Evaluate the adjustment formula on a model file.
    Adjust(AdjustArgs),
}

#[derive(Args)]
struct CheckArgs {
    graph: PathBuf,
    #[arg(long)]
    cause: Option<String>,
    /// Defaults to `Y` when --ystar is not given either.
    #[arg(long)]
    effect: Option<String>,
    /// Comma-separated super-cause set.
    #[arg(long)]
    xstar: String,
    /// Comma-separated super-mediator set.
    #[arg(long)]
    mstar: String,
    /// Comma-separated super-effect set; defaults to the effect.
    #[arg(long)]
    ystar: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SearchArgs {
    graph: PathBuf,
    #[arg(long, default_value = "X")]
    cause: String,
    #[arg(long, default_value = "Y")]
    effect: String,
    /// Stop after this many triples.
    #[arg(long)]
    limit: Option<usize>,
    /// Print search counters and the enumeration bound.
    #[arg(long)]
    stats: bool,
    #[arg(long)]
    json: bool,
    /// Scan candidates on a single thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct MsepArgs {
    graph: PathBuf,
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long, default_value = "")]
    given: String,
    /// Remove arcs with an arrowhead into these nodes first.
    #[arg(long, default_value = "")]
    cut_in: String,
    /// Then remove directed arcs out of these nodes.
    #[arg(long, default_value = "")]
    cut_out: String,
}

#[derive(Args)]
struct VerifyArgs {
    graph: PathBuf,
    #[arg(long, default_value = "X")]
    cause: String,
    #[arg(long, default_value = "Y")]
    effect: String,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    card: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AdjustArgs {
    model: PathBuf,
    #[arg(long)]
    xstar: String,
    #[arg(long)]
    ystar: String,
    #[arg(long)]
    mstar: String,
    /// Exit 1 when the two columns differ by more than this.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    json: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.root() {
            Error::CapExceeded { .. } | Error::ZeroProbability(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check(a) => check(a),
        Command::Find(a) => find(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Msep(a) => msep(a),
        Command::Verify(a) => verify(a),
        Command::Adjust(a) => adjust(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Admg, Failure> {
    let text = read(path)?;
    parse_document(&text, &path.to_string_lossy())
        .map(|d| d.parsed)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn node(g: &Admg, name: &str) -> Result<NodeId, Failure> {
    let id = NodeId::new(name)?;
    if !g.contains(&id) {
        return Err(Error::UnknownNode(name.to_string()).into());
    }
    Ok(id)
}

fn node_set(g: &Admg, flag: &str, list: &str, nonempty: bool) -> Result<NodeSet, Failure> {
    let s = NodeSet::parse_list(list).map_err(|e| usage(format!("--{flag}: {e}")))?;
    if nonempty && s.is_empty() {
        return Err(usage(format!("--{flag} must name at least one node")));
    }
    for v in &s {
        node(g, v.as_str())?;
    }
    Ok(s)
}

fn names(s: &NodeSet) -> Value {
    json!(s.names())
}

fn clamp(v: u128) -> u64 {
    u64::try_from(v).unwrap_or(u64::MAX)
}

fn stats_json(st: &SearchStats, bound: u128) -> Value {
    json!({
        "s_candidates_visited": st.s_candidates_visited,
        "m_candidates_visited": st.m_candidates_visited,
        "fdr1_checks": st.fdr1_checks,
        "fdr2_checks": st.fdr2_checks,
        "fdr3_msep_queries": st.fdr3_msep_queries,
        "enumeration_bound": clamp(st.enumeration_bound),
        "eq10_bound": clamp(bound),
    })
}

fn verdicts_json(r: &FdrReport) -> Value {
    json!({
        "fdr1": r.fdr1,
        "fdr2": r.fdr2,
        "fdr3": r.fdr3,
        "failing_mediator": r.failing_mediator.as_ref().map(|m| m.to_string()),
    })
}

fn print_stats(st: &SearchStats, bound: u128) {
    println!("s_candidates_visited: {}", st.s_candidates_visited);
    println!("m_candidates_visited: {}", st.m_candidates_visited);
    println!("fdr1_checks: {}", st.fdr1_checks);
    println!("fdr2_checks: {}", st.fdr2_checks);
    println!("fdr3_msep_queries: {}", st.fdr3_msep_queries);
    println!("enumeration_bound: {}", st.enumeration_bound);
    println!("eq10_bound: {bound}");
}

fn check(a: CheckArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let xstar = node_set(&g, "xstar", &a.xstar, true)?;
    let mstar = node_set(&g, "mstar", &a.mstar, true)?;
    let ystar = match (&a.ystar, &a.effect) {
        (Some(list), _) => node_set(&g, "ystar", list, true)?,
        (None, Some(e)) => NodeSet::singleton(node(&g, e)?),
        (None, None) => NodeSet::singleton(node(&g, "Y")?),
    };
    if let Some(c) = &a.cause {
        if !xstar.contains(&node(&g, c)?) {
            return Err(usage(format!("cause {c} must belong to --xstar")));
        }
    }
    if let Some(e) = &a.effect {
        if !ystar.contains(&node(&g, e)?) {
            return Err(usage(format!("effect {e} must belong to --ystar")));
        }
    }
    let t = FdrTriple::new(xstar, ystar, mstar).map_err(|e| usage(e.to_string()))?;
    let r = check_fdr_triple(&g, &t)?;
    if a.json {
        let out = json!({
            "xstar": names(&t.x_star),
            "ystar": names(&t.y_star),
            "mstar": names(&t.m_star),
            "stats": Value::Null,
            "verdicts": verdicts_json(&r),
        });
        println!("{out}");
    } else {
        let word = |b: bool| if b { "pass" } else { "fail" };
        println!("{t}");
        println!("FDR1: {}", word(r.fdr1));
        println!("FDR2: {}", word(r.fdr2));
        match &r.failing_mediator {
            Some(m) => println!("FDR3: fail (mediator {m})"),
            None => println!("FDR3: pass"),
        }
        println!("{}", if r.all() { "reducible" } else { "not reducible" });
    }
    Ok(if r.all() { 0 } else { 1 })
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn search_inputs(g: &Admg, a: &SearchArgs) -> Result<(NodeId, NodeId), Failure> {
    Ok((node(g, &a.cause)?, node(g, &a.effect)?))
}

fn fail_line(no_path: bool, x: &NodeId, y: &NodeId) -> String {
    if no_path {
        format!("FAIL (no directed path from {x} to {y})")
    } else {
        "FAIL".to_string()
    }
}

fn find(a: SearchArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let (x, y) = search_inputs(&g, &a)?;
    if a.limit == Some(0) {
        return Err(usage("--limit must be at least 1 for find"));
    }
    let o = find_triple_with(&g, &x, &y, execution(a.sequential))?;
    let bound = eq10_bound(&g, &x, &y)?;
    if a.json {
        let (xs, ys, ms, verdicts) = match &o.result {
            Some(t) => {
                let r = check_fdr_triple(&g, t)?;
                (names(&t.x_star), names(&t.y_star), names(&t.m_star), verdicts_json(&r))
            }
            None => (Value::Null, Value::Null, Value::Null, Value::Null),
        };
        let out = json!({
            "xstar": xs,
            "ystar": ys,
            "mstar": ms,
            "stats": stats_json(&o.stats, bound),
            "verdicts": verdicts,
            "no_directed_path": o.no_directed_path,
            "shrunken_graph_size": o.shrunken_graph_size,
        });
        println!("{out}");
    } else {
        match &o.result {
            Some(t) => println!("{t}"),
            None => println!("{}", fail_line(o.no_directed_path, &x, &y)),
        }
        if a.stats {
            println!("shrunken_graph_size: {}", o.shrunken_graph_size);
            print_stats(&o.stats, bound);
        }
    }
    Ok(if o.result.is_some() { 0 } else { 1 })
}

fn enumerate(a: SearchArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let (x, y) = search_inputs(&g, &a)?;
    let e = enumerate_triples_with(&g, &x, &y, a.limit, execution(a.sequential))?;
    let bound = eq10_bound(&g, &x, &y)?;
    if a.json {
        let triples = e
            .triples
            .iter()
            .map(|t| {
                let r = check_fdr_triple(&g, t)?;
                Ok(json!({
                    "xstar": names(&t.x_star),
                    "ystar": names(&t.y_star),
                    "mstar": names(&t.m_star),
                    "verdicts": verdicts_json(&r),
                }))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let out = json!({
            "triples": triples,
            "stats": stats_json(&e.stats, bound),
            "no_directed_path": e.no_directed_path,
            "shrunken_graph_size": e.shrunken_graph_size,
        });
        println!("{out}");
    } else {
        if e.triples.is_empty() {
            println!("{}", fail_line(e.no_directed_path, &x, &y));
        }
        for t in &e.triples {
            println!("{t}");
        }
        if a.stats {
            println!("shrunken_graph_size: {}", e.shrunken_graph_size);
            print_stats(&e.stats, bound);
        }
    }
    Ok(if e.triples.is_empty() { 1 } else { 0 })
}

fn msep(a: MsepArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let xs = node_set(&g, "x", &a.x, true)?;
    let ys = node_set(&g, "y", &a.y, true)?;
    let given = node_set(&g, "given", &a.given, false)?;
    let cut_in = node_set(&g, "cut-in", &a.cut_in, false)?;
    let cut_out = node_set(&g, "cut-out", &a.cut_out, false)?;
    let h = g.cut_incoming(&cut_in)?.cut_outgoing(&cut_out)?;
    let sep = m_separated(&h, &xs, &ys, &given).map_err(|e| usage(e.to_string()))?;
    println!("{}", if sep { "separated" } else { "connected" });
    Ok(if sep { 0 } else { 1 })
}

fn verify(a: VerifyArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let x = node(&g, &a.cause)?;
    let y = node(&g, &a.effect)?;
    if a.card < 2 {
        return Err(usage("--card must be at least 2"));
    }
    let o = find_triple_with(&g, &x, &y, Execution::default())?;
    let Some(t) = o.result else {
        let line = fail_line(o.no_directed_path, &x, &y);
        if a.json {
            println!("{}", json!({ "result": "FAIL", "no_directed_path": o.no_directed_path }));
        } else {
            println!("{line}: not front-door reducible");
        }
        return Ok(1);
    };
    if a.trials == 0 {
        eprintln!("warning: --trials 0, nothing was checked");
    }
    let mut worst = 0.0f64;
    let mut worst_seed = None;
    for i in 0..a.trials {
        let seed = a.seed.wrapping_add(i);
        let m = random_scm(&g, a.card, seed)?;
        let d = equivalence_check(&m, &t)?;
        if worst_seed.is_none() || d > worst {
            worst = d;
            worst_seed = Some(seed);
        }
    }
    let ok = worst <= a.tol;
    if a.json {
        let out = json!({
            "xstar": names(&t.x_star),
            "ystar": names(&t.y_star),
            "mstar": names(&t.m_star),
            "trials": a.trials,
            "max_abs_diff": worst,
            "worst_seed": worst_seed,
            "tol": a.tol,
            "pass": ok,
        });
        println!("{out}");
    } else {
        println!("{t}");
        println!("trials: {}", a.trials);
        match worst_seed {
            Some(s) => println!("max abs diff: {worst:e} (seed {s})"),
            None => println!("max abs diff: 0"),
        }
        println!("{}", if ok { "pass" } else { "fail" });
    }
    Ok(if ok { 0 } else { 1 })
}

fn adjust(a: AdjustArgs) -> Outcome {
    let text = read(&a.model)?;
    let m = parse_model(&text).map_err(|e| match e.root() {
        Error::CapExceeded { .. } | Error::ZeroProbability(_) => Failure::from(e),
        _ => usage(format!("{}: {e}", a.model.display())),
    })?;
    let g = m.graph().clone();
    let xstar = node_set(&g, "xstar", &a.xstar, true)?;
    let ystar = node_set(&g, "ystar", &a.ystar, true)?;
    let mstar = node_set(&g, "mstar", &a.mstar, true)?;
    let t = FdrTriple::new(xstar, ystar, mstar).map_err(|e| usage(e.to_string()))?;
    joint_distribution(&m)?;

    let xs: Vec<NodeId> = t.x_star.iter().cloned().collect();
    let ys: Vec<NodeId> = t.y_star.iter().cloned().collect();
    let xc: Vec<usize> = xs.iter().map(|v| m.cardinality(v)).collect::<Result<_, _>>()?;
    let yc: Vec<usize> = ys.iter().map(|v| m.cardinality(v)).collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for xv in assignments(&xc) {
        let adj = fdr_adjustment(&m, &t, &xv)?;
        let truth = causal_effect(&m, &t.x_star, &xv, &t.y_star)?;
        for (p, q) in adj.table.iter().zip(&truth.table) {
            worst = worst.max((p - q).abs());
        }
        rows.push((xv, adj.table, truth.table));
    }
    let fmt_assign = |vars: &[NodeId], vals: &[usize]| {
        vars.iter().zip(vals).map(|(v, x)| format!("{v}={x}")).collect::<Vec<_>>().join(",")
    };
    if a.json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|(xv, adj, truth)| json!({ "x": xv, "adjustment": adj, "interventional": truth }))
            .collect();
        let out = json!({
            "xstar": names(&t.x_star),
            "ystar": names(&t.y_star),
            "mstar": names(&t.m_star),
            "rows": rows,
            "max_abs_diff": worst,
        });
        println!("{out}");
    } else {
        println!("{t}");
        println!("{:<16} {:<16} {:>20} {:>20}", "x*", "y*", "adjustment", "interventional");
        let y_assign: Vec<Vec<usize>> = assignments(&yc).collect();
        for (xv, adj, truth) in &rows {
            for (k, yv) in y_assign.iter().enumerate() {
                println!(
                    "{:<16} {:<16} {:>20.15} {:>20.15}",
                    fmt_assign(&xs, xv),
                    fmt_assign(&ys, yv),
                    adj[k],
                    truth[k]
                );
            }
        }
        println!("max abs diff: {worst:e}");
    }
    Ok(match a.tol {
        Some(tol) if worst > tol => 1,
        _ => 0,
    })
}

fn assignments(cards: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = cards.iter().product();
    (0..total).map(move |mut k| {
        let mut v = vec![0; cards.len()];
        for i in (0..cards.len()).rev() {
            v[i] = k % cards[i];
            k /= cards[i];
        }
        v
    })
}
