//! Seeded fuzzing of the combinatorial statements, with reproducible reports.

pub mod generator;
pub mod suites;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::blowup::{ConventionProfile, Gate};
use crate::error::{invalid, Result};
use crate::graph::CurveGraph;

pub use generator::{random_graph, GraphBounds};
pub use suites::{Context, Suite, Tally, Violation};

/// Where the instances come from.
#[derive(Clone, Debug)]
pub enum Source {
    Random { seed: u64, instances: u64, bounds: GraphBounds },
    Graphs(Vec<(String, CurveGraph)>),
}

impl Source {
    fn len(&self) -> u64 {
        match self {
            Source::Random { instances, .. } => *instances,
            Source::Graphs(v) => v.len() as u64,
        }
    }

    fn graph(&self, index: u64) -> CurveGraph {
        match self {
            Source::Random { seed, bounds, .. } => random_graph(*seed, index, bounds),
            Source::Graphs(v) => v[index as usize].1.clone(),
        }
    }

    fn label(&self, index: u64) -> Option<&str> {
        match self {
            Source::Random { .. } => None,
            Source::Graphs(v) => Some(&v[index as usize].0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub source: Source,
    pub profile: ConventionProfile,
    pub gate: Gate,
    pub suites: Vec<Suite>,
    /// Worker threads; 0 lets the pool decide, 1 runs serially.
    pub jobs: usize,
    /// Counterexamples kept per suite in the report.
    pub max_dumps: usize,
}

impl SuiteConfig {
    pub fn random(seed: u64, instances: u64, bounds: GraphBounds) -> Self {
        SuiteConfig {
            source: Source::Random { seed, instances, bounds },
            profile: ConventionProfile::Reconstructed,
            gate: Gate::Intersecting,
            suites: Suite::ALL.to_vec(),
            jobs: 0,
            max_dumps: 5,
        }
    }

    pub fn graphs(graphs: Vec<(String, CurveGraph)>) -> Self {
        SuiteConfig { source: Source::Graphs(graphs), ..SuiteConfig::random(0, 0, GraphBounds::default()) }
    }

    fn validate(&self) -> Result<()> {
        if let Source::Random { bounds, .. } = &self.source {
            if bounds.max_components == 0 {
                return Err(invalid("max components must be at least 1"));
            }
            if bounds.max_components > 8 {
                return Err(invalid("max components above 8 is out of range for exhaustive suites"));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteSummary {
    pub instances: u64,
    pub checks: u64,
    pub failed: u64,
    pub failing_instances: u64,
}

/// A failing check together with everything needed to run it again.
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub suite: Suite,
    pub check: String,
    pub seed: Option<u64>,
    pub instance: u64,
    pub label: Option<String>,
    pub profile: ConventionProfile,
    pub gate: Gate,
    pub graph: CurveGraph,
    pub context: Value,
}

impl Counterexample {
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.as_str(),
            "check": self.check,
            "seed": self.seed,
            "instance": self.instance,
            "label": self.label,
            "profile": self.profile.as_str(),
            "gate": self.gate,
            "graph": self.graph.to_spec(),
            "context": self.context,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).ok_or_else(|| invalid(format!("dump lacks '{k}'")));
        let suite: Suite = field("suite")?.as_str().ok_or_else(|| invalid("suite must be a string"))?.parse()?;
        let check = field("check")?.as_str().unwrap_or_default().to_string();
        let profile: ConventionProfile = match v.get("profile").and_then(Value::as_str) {
            Some(s) => s.parse()?,
            None => ConventionProfile::Reconstructed,
        };
        let gate: Gate = match v.get("gate") {
            Some(g) => serde_json::from_value(g.clone())?,
            None => Gate::Intersecting,
        };
        let graph = CurveGraph::from_json(&field("graph")?.to_string())?;
        Ok(Counterexample {
            suite,
            check,
            seed: v.get("seed").and_then(Value::as_u64),
            instance: v.get("instance").and_then(Value::as_u64).unwrap_or(0),
            label: v.get("label").and_then(Value::as_str).map(str::to_string),
            profile,
            gate,
            graph,
            context: v.get("context").cloned().unwrap_or(Value::Null),
        })
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub profile: ConventionProfile,
    pub gate: Gate,
    pub seed: Option<u64>,
    pub instances: u64,
    pub bounds: Option<GraphBounds>,
    pub suites: Vec<(Suite, SuiteSummary)>,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|(_, s)| s.failed == 0)
    }

    pub fn summary(&self, suite: Suite) -> Option<&SuiteSummary> {
        self.suites.iter().find(|(s, _)| *s == suite).map(|(_, s)| s)
    }

    /// Everything except the elapsed time, which is the only field that may
    /// differ between identical runs.
    pub fn to_json_untimed(&self) -> Value {
        json!({
            "passed": self.passed(),
            "profile": self.profile.as_str(),
            "gate": self.gate,
            "seed": self.seed,
            "instances": self.instances,
            "bounds": self.bounds,
            "suites": self.suites.iter().map(|(s, x)| json!({
                "suite": s.as_str(),
                "passed": x.failed == 0,
                "instances": x.instances,
                "checks": x.checks,
                "failed": x.failed,
                "failing_instances": x.failing_instances,
            })).collect::<Vec<_>>(),
            "counterexamples": self.counterexamples.iter().map(Counterexample::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.to_json_untimed();
        v["elapsed_ms"] = json!(self.elapsed.as_millis() as u64);
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, x) in &self.suites {
            out.push_str(&format!(
                "{:<22} {}  checks={} failed={} instances={}/{}\n",
                s.as_str(),
                if x.failed == 0 { "pass" } else { "FAIL" },
                x.checks,
                x.failed,
                x.failing_instances,
                x.instances
            ));
        }
        for c in &self.counterexamples {
            let at = match (&c.label, c.seed) {
                (Some(l), _) => l.clone(),
                (None, Some(s)) => format!("seed {s} instance {}", c.instance),
                (None, None) => format!("instance {}", c.instance),
            };
            out.push_str(&format!("counterexample: {} / {} at {at}: {}\n", c.suite, c.check, c.context));
        }
        out.push_str(&format!(
            "{} ({} instances, profile {}, {:.2}s)\n",
            if self.passed() { "all suites pass" } else { "violations found" },
            self.instances,
            self.profile.as_str(),
            self.elapsed.as_secs_f64()
        ));
        out
    }
}

fn run_instance(config: &SuiteConfig, index: u64) -> (CurveGraph, Vec<Tally>) {
    let g = config.source.graph(index);
    let ctx = Context::new(&g, config.profile, config.gate);
    let tallies = config.suites.iter().map(|&s| ctx.run(s)).collect();
    drop(ctx);
    (g, tallies)
}

pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let start = Instant::now();
    let n = config.source.len();
    let results: Vec<(CurveGraph, Vec<Tally>)> = if config.jobs == 1 {
        (0..n).map(|i| run_instance(config, i)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
        pool.install(|| (0..n).into_par_iter().map(|i| run_instance(config, i)).collect())
    };

    let seed = match &config.source {
        Source::Random { seed, .. } => Some(*seed),
        Source::Graphs(_) => None,
    };
    let mut suites: Vec<(Suite, SuiteSummary)> = config.suites.iter().map(|&s| (s, SuiteSummary::default())).collect();
    let mut counterexamples = Vec::new();
    for (x, (suite, summary)) in suites.iter_mut().enumerate() {
        let mut kept = 0;
        for (index, (g, tallies)) in results.iter().enumerate() {
            let t = &tallies[x];
            summary.instances += 1;
            summary.checks += t.checks;
            summary.failed += t.failed;
            if t.failed > 0 {
                summary.failing_instances += 1;
            }
            for v in &t.violations {
                if kept < config.max_dumps {
                    kept += 1;
                    counterexamples.push(Counterexample {
                        suite: *suite,
                        check: v.check.clone(),
                        seed,
                        instance: index as u64,
                        label: config.source.label(index as u64).map(str::to_string),
                        profile: config.profile,
                        gate: config.gate,
                        graph: g.clone(),
                        context: v.context.clone(),
                    });
                }
            }
        }
    }
    Ok(VerificationReport {
        profile: config.profile,
        gate: config.gate,
        seed,
        instances: n,
        bounds: match &config.source {
            Source::Random { bounds, .. } => Some(*bounds),
            Source::Graphs(_) => None,
        },
        suites,
        counterexamples,
        elapsed: start.elapsed(),
    })
}

/// Outcome of running a dumped counterexample again.
#[derive(Clone, Debug)]
pub struct Replay {
    pub dump: Counterexample,
    pub tally: Tally,
    /// The suite still fails with the recorded check.
    pub reproduced: bool,
}

impl Replay {
    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.dump.suite.as_str(),
            "check": self.dump.check,
            "reproduced": self.reproduced,
            "failed": self.tally.failed,
            "violations": self.tally.violations.iter().map(|v| json!({"check": v.check, "context": v.context})).collect::<Vec<_>>(),
        })
    }
}

pub fn replay(dump: &Value) -> Result<Replay> {
    let dump = Counterexample::from_json(dump)?;
    let ctx = Context::new(&dump.graph, dump.profile, dump.gate);
    let tally = ctx.run(dump.suite);
    let reproduced = tally.failing_checks().contains(dump.check.as_str());
    Ok(Replay { dump, tally, reproduced })
}

/// The profile-sensitive suites under both profiles.
#[derive(Clone, Debug)]
pub struct DiscrepancyReport {
    pub reconstructed: VerificationReport,
    pub displayed: VerificationReport,
}

impl DiscrepancyReport {
    /// The reconstructed profile passes while the displayed one fails.
    pub fn demonstrated(&self) -> bool {
        self.reconstructed.passed() && !self.displayed.passed()
    }

    pub fn to_json_untimed(&self) -> Value {
        json!({
            "demonstrated": self.demonstrated(),
            "reconstructed": self.reconstructed.to_json_untimed(),
            "as-displayed": self.displayed.to_json_untimed(),
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "demonstrated": self.demonstrated(),
            "reconstructed": self.reconstructed.to_json(),
            "as-displayed": self.displayed.to_json(),
        })
    }
}

pub fn run_discrepancy(config: &SuiteConfig) -> Result<DiscrepancyReport> {
    let mut c = config.clone();
    c.suites.retain(|s| s.uses_profile());
    if c.suites.is_empty() {
        c.suites = Suite::ALL.into_iter().filter(|s| s.uses_profile()).collect();
    }
    c.profile = ConventionProfile::Reconstructed;
    let reconstructed = run_suite(&c)?;
    c.profile = ConventionProfile::AsDisplayed;
    let displayed = run_suite(&c)?;
    Ok(DiscrepancyReport { reconstructed, displayed })
}

impl Tally {
    pub fn failing_checks(&self) -> BTreeSet<&str> {
        self.violations.iter().map(|v| v.check.as_str()).collect()
    }
}
