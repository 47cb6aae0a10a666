use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use abelmap::blowup::{
    choice_from_tails, decide_resolution, distinguished_points, is_quasistable_point, minimality_probe, node_pairs,
    plan_from_tails, BlowupChoice, BlowupPlan, ConventionProfile, Gate, PairClass,
};
use abelmap::harness::{self, GraphBounds, Source, Suite, SuiteConfig};
use abelmap::jacobian::{
    is_quasistable, multidegree_from_json, multidegree_to_json, qs_reduce, Multidegree, Twister,
};
use abelmap::lift2::{build_c2, is_synchronized};
use abelmap::tails::nested_tails;
use abelmap::{CurveGraph, Error, Subcurve};
use anyhow::{anyhow, bail, Context as _};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "abelmap", version, about = "Tails, twisters and blowups of nodal curve dual graphs")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a graph file is well formed.
    Validate { graph: PathBuf },
    /// List tails, optionally only those with k terminal nodes.
    Tails {
        graph: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    /// The nested chain of s-tails containing the anchor components.
    Nested {
        graph: PathBuf,
        #[arg(long)]
        s: usize,
        /// One or two component names, comma separated.
        #[arg(long)]
        anchors: String,
    },
    /// Twister coefficients for every ordered pair of components.
    Twister {
        graph: PathBuf,
        /// Cross-check every entry against the brute-force oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Quasistability of a degree-0 multidegree.
    QsCheck { graph: PathBuf, multidegree: String },
    /// The unique quasistable twist of a degree-0 multidegree.
    QsReduce {
        graph: PathBuf,
        multidegree: String,
        #[arg(long)]
        bound: Option<i64>,
    },
    /// Blowup matchings: the plan forced by tails, or every pair with its options.
    Plan {
        graph: PathBuf,
        #[arg(long)]
        from_tails: bool,
    },
    /// Whether a blowup plan resolves the degree-2 map; the default plan is empty.
    Resolve {
        graph: PathBuf,
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, conflicts_with = "plan")]
        from_tails: bool,
        #[arg(long, default_value = "reconstructed")]
        profile: ConventionProfile,
    },
    /// The two distinguished points of a matching, with their quasistability.
    Distinguished {
        graph: PathBuf,
        /// Two node ids, comma separated.
        #[arg(long)]
        pair: String,
        /// A blown-up product `X:Y`, optionally followed by the second one.
        #[arg(long = "match")]
        matching: String,
        #[arg(long, default_value = "reconstructed")]
        profile: ConventionProfile,
    },
    /// Synchronization of one distinguished point.
    Sync {
        graph: PathBuf,
        #[arg(long)]
        pair: String,
        #[arg(long = "match")]
        matching: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        point: u8,
    },
    /// Classify every pair as free, forced or blocked and report the minimal plan.
    Minimal {
        graph: PathBuf,
        #[arg(long, default_value = "reconstructed")]
        profile: ConventionProfile,
    },
    /// Run the property suites on random or given graphs.
    Verify(VerifyArgs),
    /// Graphviz rendering of a graph or of its lifted graph.
    ExportDot {
        graph: PathBuf,
        #[arg(long)]
        lifted: bool,
    },
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    instances: u64,
    #[arg(long, default_value = "reconstructed")]
    profile: ConventionProfile,
    /// Comma-separated suite names, or `all`.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Worker threads; 1 runs serially, 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long, default_value_t = 6)]
    max_components: usize,
    #[arg(long, default_value_t = 4)]
    max_extra_edges: usize,
    #[arg(long)]
    no_loops: bool,
    /// Check every admissibility inequality, not only those between meeting divisors.
    #[arg(long)]
    strict: bool,
    /// Run on these graph files instead of random ones.
    #[arg(long = "graph")]
    graphs: Vec<PathBuf>,
    /// Re-run a counterexample dump, or every dump in a saved report.
    #[arg(long)]
    replay: Option<PathBuf>,
    /// Run the profile-dependent suites under both profiles and contrast them.
    #[arg(long)]
    discrepancy: bool,
    #[arg(long, default_value_t = 5)]
    max_dumps: usize,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Exit status of a command that ran to completion.
enum Verdict {
    Positive,
    Negative,
}

impl Verdict {
    fn from(ok: bool) -> Self {
        if ok {
            Verdict::Positive
        } else {
            Verdict::Negative
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Verdict::Positive) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let computational = e.downcast_ref::<Error>().is_some_and(|e| {
                matches!(
                    e,
                    Error::Invariant(_) | Error::NoMinimum { .. } | Error::NotFound { .. } | Error::MultipleFound { .. }
                )
            });
            ExitCode::from(if computational { 1 } else { 2 })
        }
    }
}

fn emit(json_out: bool, value: &Value, text: &str) {
    if json_out {
        println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
    } else {
        print!("{text}");
        if !text.ends_with('\n') {
            println!();
        }
    }
}

fn load_graph(path: &Path) -> anyhow::Result<CurveGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    CurveGraph::from_json(&text).with_context(|| format!("invalid graph {}", path.display()))
}

fn load_json(path: &Path) -> anyhow::Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("invalid JSON in {}", path.display()))
}

/// A multidegree given as a file, inline JSON (object or array) or a comma list.
fn parse_multidegree(g: &CurveGraph, arg: &str) -> anyhow::Result<Multidegree> {
    let text = if Path::new(arg).is_file() { fs::read_to_string(arg)? } else { arg.to_string() };
    let text = text.trim();
    let d = match serde_json::from_str::<Value>(text) {
        Ok(v @ Value::Object(_)) => multidegree_from_json(g, &v)?,
        Ok(Value::Array(a)) => a
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| anyhow!("multidegree entries must be integers")))
            .collect::<anyhow::Result<_>>()?,
        _ => text
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| anyhow!("cannot read multidegree `{arg}`")))
            .collect::<anyhow::Result<_>>()?,
    };
    if d.len() != g.n_components() {
        bail!("multidegree has {} entries for {} components", d.len(), g.n_components());
    }
    Ok(d)
}

fn fmt_vec(d: &[i64]) -> String {
    format!("({})", d.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
}

fn fmt_set(g: &CurveGraph, z: Subcurve) -> String {
    format!("{{{}}}", g.component_names(z).join(","))
}

fn fmt_nodes(g: &CurveGraph, e: &[usize]) -> String {
    format!("[{}]", g.node_ids(e).join(","))
}

fn parse_pair(g: &CurveGraph, s: &str) -> anyhow::Result<(usize, usize)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        bail!("--pair takes two node ids separated by a comma");
    }
    Ok((g.node_index(parts[0])?, g.node_index(parts[1])?))
}

/// `X:Y` or `X:Y,X':Y'`, or the JSON `[["X","Y"],["X'","Y'"]]` of plan files.
fn parse_matching(g: &CurveGraph, r1: usize, r2: usize, s: &str) -> anyhow::Result<BlowupChoice> {
    let pairs: Vec<(String, String)> = match serde_json::from_str::<Vec<[String; 2]>>(s) {
        Ok(v) => v.into_iter().map(|[a, b]| (a, b)).collect(),
        Err(_) => s
            .split(',')
            .map(|p| {
                let (a, b) = p.split_once(':').ok_or_else(|| anyhow!("--match expects X:Y, got `{p}`"))?;
                Ok((a.trim().to_string(), b.trim().to_string()))
            })
            .collect::<anyhow::Result<_>>()?,
    };
    if pairs.is_empty() || pairs.len() > 2 {
        bail!("--match takes one or two products");
    }
    let mut choice = None;
    for (a, b) in &pairs {
        let c = BlowupChoice::from_components(g, r1, r2, g.component_index(a)?, g.component_index(b)?)?;
        if choice.is_some_and(|x| x != c) {
            bail!("the two products belong to different matchings");
        }
        choice = Some(c);
    }
    Ok(choice.unwrap())
}

fn run(cli: &Cli) -> anyhow::Result<Verdict> {
    let j = cli.json;
    match &cli.command {
        Command::Validate { graph } => {
            let g = load_graph(graph)?;
            let v = json!({"valid": true, "components": g.n_components(), "nodes": g.n_nodes(),
                "marked": g.name(g.marked())});
            let text = format!(
                "valid: {} components, {} nodes, marked {}",
                g.n_components(),
                g.n_nodes(),
                g.name(g.marked())
            );
            emit(j, &v, &text);
            Ok(Verdict::Positive)
        }
        Command::Tails { graph, k } => {
            let g = load_graph(graph)?;
            let tails = g.tails_with_terms(*k);
            let v = Value::Array(
                tails
                    .iter()
                    .map(|t| json!({"tail": g.component_names(t.set), "k": t.term.len(), "term": g.node_ids(&t.term)}))
                    .collect(),
            );
            let mut text = String::new();
            for t in tails.iter() {
                text.push_str(&format!("{}  k={}  term={}\n", fmt_set(&g, t.set), t.term.len(), fmt_nodes(&g, &t.term)));
            }
            text.push_str(&format!("{} tails\n", tails.len()));
            emit(j, &v, &text);
            Ok(Verdict::Positive)
        }
        Command::Nested { graph, s, anchors } => {
            let g = load_graph(graph)?;
            let names: Vec<&str> = anchors.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
            if names.is_empty() || names.len() > 2 {
                bail!("--anchors takes one or two component names");
            }
            let chain = nested_tails(&g, *s, g.subcurve(&names)?)?;
            let v = Value::Array(chain.iter().map(|t| json!(g.component_names(t.set))).collect());
            let text = if chain.is_empty() {
                "empty".to_string()
            } else {
                chain.iter().map(|t| fmt_set(&g, t.set)).collect::<Vec<_>>().join(" ≺ ")
            };
            emit(j, &v, &text);
            Ok(Verdict::Positive)
        }
        Command::Twister { graph, oracle, bound } => {
            let g = load_graph(graph)?;
            let tw = Twister::compute(&g)?;
            let p = g.n_components();
            let mut text = String::new();
            for a in 0..p {
                for b in 0..p {
                    text.push_str(&format!("α({},{}) = {}\n", g.name(a), g.name(b), fmt_vec(tw.alpha(a, b))));
                }
            }
            let mut v = json!({"twister": tw.to_json(&g)});
            let mut verdict = Verdict::Positive;
            if *oracle {
                let or = Twister::from_oracle(&g, *bound)?;
                let mut diffs = Vec::new();
                for a in 0..p {
                    for b in 0..p {
                        if or.alpha(a, b) != tw.alpha(a, b) {
                            diffs.push(json!({"pair": [g.name(a), g.name(b)],
                                "tails": multidegree_to_json(&g, tw.alpha(a, b)),
                                "oracle": multidegree_to_json(&g, or.alpha(a, b))}));
                            text.push_str(&format!(
                                "α({},{}) oracle {}\n",
                                g.name(a),
                                g.name(b),
                                fmt_vec(or.alpha(a, b))
                            ));
                        }
                    }
                }
                text.push_str(if diffs.is_empty() { "agree\n" } else { "disagree\n" });
                v["oracle"] = json!({"agree": diffs.is_empty(), "differences": diffs});
                verdict = Verdict::from(diffs.is_empty());
            }
            emit(j, &v, &text);
            Ok(verdict)
        }
        Command::QsCheck { graph, multidegree } => {
            let g = load_graph(graph)?;
            let d = parse_multidegree(&g, multidegree)?;
            let r = is_quasistable(&g, &d)?;
            let witness = r.witness.map(|(y, b)| (g.component_names(y), b.to_string(), g.k(y)));
            let v = json!({"multidegree": multidegree_to_json(&g, &d), "quasistable": r.quasistable,
                "witness": witness.as_ref().map(|(y, b, k)| json!({"tail": y, "beta": b, "k": k}))});
            let text = match &witness {
                None => "quasistable".to_string(),
                Some((y, b, k)) => format!("not quasistable: tail {{{}}} has beta {b} with k={k}", y.join(",")),
            };
            emit(j, &v, &text);
            Ok(Verdict::from(r.quasistable))
        }
        Command::QsReduce { graph, multidegree, bound } => {
            let g = load_graph(graph)?;
            let d = parse_multidegree(&g, multidegree)?;
            let r = qs_reduce(&g, &d, *bound)?;
            let v = json!({"input": multidegree_to_json(&g, &d), "result": multidegree_to_json(&g, &r.result),
                "twist": multidegree_to_json(&g, &r.twist), "bound": r.bound});
            let text = format!("{} -> {} with c={} (box bound {})", fmt_vec(&d), fmt_vec(&r.result), fmt_vec(&r.twist), r.bound);
            emit(j, &v, &text);
            Ok(Verdict::Positive)
        }
        Command::Plan { graph, from_tails } => {
            let g = load_graph(graph)?;
            if *from_tails {
                let plan = plan_from_tails(&g)?;
                let mut text = String::new();
                for c in plan.choices.values() {
                    text.push_str(&choice_text(&g, c));
                    text.push('\n');
                }
                text.push_str(&format!("{} chosen pairs\n", plan.len()));
                emit(j, &plan.to_json(&g), &text);
            } else {
                let mut rows = Vec::new();
                let mut text = String::new();
                for (r1, r2) in node_pairs(&g) {
                    let forced = choice_from_tails(&g, r1, r2)?;
                    let c0 = BlowupChoice::new(&g, r1, r2, 0)?;
                    let options = [c0, c0.flipped()];
                    rows.push(json!({
                        "pair": [g.node(r1).id, g.node(r2).id],
                        "matchings": options.iter().map(|c| c.to_json(&g)["match"].clone()).collect::<Vec<_>>(),
                        "from_tails": forced.map(|c| c.to_json(&g)["match"].clone()),
                    }));
                    text.push_str(&match forced {
                        Some(c) => format!("{}  (forced by tails)\n", choice_text(&g, &c)),
                        None => format!("({},{}): no tail forces a matching\n", g.node(r1).id, g.node(r2).id),
                    });
                }
                emit(j, &Value::Array(rows), &text);
            }
            Ok(Verdict::Positive)
        }
        Command::Resolve { graph, plan, from_tails, profile } => {
            let g = load_graph(graph)?;
            let plan = match (plan, from_tails) {
                (Some(p), _) => BlowupPlan::from_json(&g, &load_json(p)?)?,
                (None, true) => plan_from_tails(&g)?,
                (None, false) => BlowupPlan::default(),
            };
            let tw = Twister::compute(&g)?;
            let r = decide_resolution(&g, &tw, &plan, *profile)?;
            let text = if r.resolved {
                "resolved".to_string()
            } else {
                let pairs: Vec<String> = r
                    .failing_pairs()
                    .iter()
                    .map(|(a, b)| format!("pair ({},{})", g.node(*a).id, g.node(*b).id))
                    .collect();
                format!("not resolved: {}", pairs.join(", "))
            };
            emit(j, &r.to_json(&g), &text);
            Ok(Verdict::from(r.resolved))
        }
        Command::Distinguished { graph, pair, matching, profile } => {
            let g = load_graph(graph)?;
            let (r1, r2) = parse_pair(&g, pair)?;
            let c = parse_matching(&g, r1, r2, matching)?;
            let tw = Twister::compute(&g)?;
            let mut text = format!("{}\n", choice_text(&g, &c));
            let mut points = Vec::new();
            for (x, pt) in distinguished_points(&c).iter().enumerate() {
                let v = is_quasistable_point(&g, &tw, pt, *profile)?;
                let triple: Vec<String> =
                    pt.triple(&g).iter().map(|&(a, b)| format!("({},{})", g.name(a), g.name(b))).collect();
                text.push_str(&format!(
                    "A{}: {}  {}\n",
                    x + 1,
                    triple.join(" "),
                    if v.quasistable { "quasistable" } else { "not quasistable" }
                ));
                for cond in &v.conditions {
                    if !cond.holds() {
                        text.push_str(&format!(
                            "    pair ({},{}) has tails terminating in both nodes\n",
                            g.name(cond.pair.0),
                            g.name(cond.pair.1)
                        ));
                    }
                }
                points.push(v.to_json(&g));
            }
            emit(j, &json!({"match": c.to_json(&g), "points": points}), &text);
            Ok(Verdict::Positive)
        }
        Command::Sync { graph, pair, matching, point } => {
            let g = load_graph(graph)?;
            let (r1, r2) = parse_pair(&g, pair)?;
            let c = parse_matching(&g, r1, r2, matching)?;
            let pt = distinguished_points(&c)[*point as usize - 1];
            let tw = Twister::compute(&g)?;
            let lg = build_c2(&g)?;
            let r = is_synchronized(&g, &lg, &tw, &pt)?;
            let mut text = String::new();
            for s in 1..=3 {
                text.push_str(&format!(
                    "level {s}: {}\n",
                    if r.synchronized_at(s) { "synchronized" } else { "not synchronized" }
                ));
            }
            text.push_str(if r.synchronized() { "synchronized\n" } else { "not synchronized\n" });
            emit(j, &r.to_json(&g, &lg), &text);
            Ok(Verdict::from(r.synchronized()))
        }
        Command::Minimal { graph, profile } => {
            let g = load_graph(graph)?;
            let tw = Twister::compute(&g)?;
            let m = minimality_probe(&g, &tw, *profile)?;
            let mut text = String::new();
            for ((a, b), class) in &m.classes {
                let label = match class {
                    PairClass::Free => "free".to_string(),
                    PairClass::Forced(c) => {
                        let [(a, b), (x, y)] = c.centers(&g);
                        format!("forced, blow up ({},{}) and ({},{})", g.name(a), g.name(b), g.name(x), g.name(y))
                    }
                    PairClass::Blocked => "blocked".to_string(),
                };
                text.push_str(&format!("({},{}): {label}\n", g.node(*a).id, g.node(*b).id));
            }
            match &m.minimal_plan {
                Some(p) => text.push_str(&format!("minimal plan chooses {} pairs\n", p.len())),
                None => text.push_str("no resolving plan\n"),
            }
            text.push_str(&format!(
                "plan from tails is {}\n",
                if m.from_tails_is_minimal { "minimal" } else { "not minimal" }
            ));
            emit(j, &m.to_json(&g), &text);
            Ok(Verdict::from(m.minimal_plan.is_some()))
        }
        Command::Verify(args) => verify(j, args),
        Command::ExportDot { graph, lifted } => {
            let g = load_graph(graph)?;
            let dot = if *lifted { build_c2(&g)?.to_dot() } else { g.to_dot() };
            emit(j, &json!({"dot": dot}), &dot);
            Ok(Verdict::Positive)
        }
    }
}

fn choice_text(g: &CurveGraph, c: &BlowupChoice) -> String {
    let [(a, b), (x, y)] = c.centers(g);
    format!(
        "({},{}): blow up ({},{}) and ({},{})",
        g.node(c.r1).id,
        g.node(c.r2).id,
        g.name(a),
        g.name(b),
        g.name(x),
        g.name(y)
    )
}

fn verify(j: bool, args: &VerifyArgs) -> anyhow::Result<Verdict> {
    if let Some(path) = &args.replay {
        let v = load_json(path)?;
        let dumps: Vec<Value> = match v.get("counterexamples") {
            Some(Value::Array(a)) => a.clone(),
            _ => vec![v],
        };
        let mut out = Vec::new();
        let mut text = String::new();
        let mut still_failing = false;
        for d in &dumps {
            let r = harness::replay(d)?;
            still_failing |= !r.tally.passed();
            text.push_str(&format!(
                "{} / {}: {}\n",
                r.dump.suite,
                r.dump.check,
                if r.reproduced { "reproduced" } else { "not reproduced" }
            ));
            out.push(r.to_json());
        }
        emit(j, &Value::Array(out), &text);
        return Ok(Verdict::from(!still_failing));
    }

    let suites = Suite::parse_list(&args.suite)?;
    if suites.is_empty() {
        bail!("no suite selected");
    }
    let source = if args.graphs.is_empty() {
        Source::Random {
            seed: args.seed,
            instances: args.instances,
            bounds: GraphBounds {
                max_components: args.max_components,
                max_extra_edges: args.max_extra_edges,
                loops: !args.no_loops,
            },
        }
    } else {
        let mut gs = Vec::new();
        for p in &args.graphs {
            gs.push((p.display().to_string(), load_graph(p)?));
        }
        Source::Graphs(gs)
    };
    let config = SuiteConfig {
        source,
        profile: args.profile,
        gate: if args.strict { Gate::Strict } else { Gate::Intersecting },
        suites,
        jobs: args.jobs,
        max_dumps: args.max_dumps,
    };
    if args.discrepancy {
        let r = harness::run_discrepancy(&config)?;
        let v = r.to_json();
        write_report(args, &v)?;
        let text = format!(
            "profile reconstructed\n{}profile as-displayed\n{}{}\n",
            r.reconstructed.to_text(),
            r.displayed.to_text(),
            if r.demonstrated() {
                "discrepancy demonstrated: only the as-displayed profile fails"
            } else {
                "discrepancy not demonstrated"
            }
        );
        emit(j, &v, &text);
        return Ok(Verdict::from(r.demonstrated()));
    }
    let r = harness::run_suite(&config)?;
    let v = r.to_json();
    write_report(args, &v)?;
    emit(j, &v, &r.to_text());
    Ok(Verdict::from(r.passed()))
}

fn write_report(args: &VerifyArgs, v: &Value) -> anyhow::Result<()> {
    if let Some(path) = &args.report {
        let text = serde_json::to_string_pretty(v)?;
        fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(())
}
