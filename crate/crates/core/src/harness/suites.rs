//! Property suites over a single graph.

use std::cell::OnceCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::blowup::{
    admissibility_check, decide_resolution, distinguished_points, is_quasistable_point, node_pairs, plan_from_tails,
    BlowupChoice, ConventionProfile, DistinguishedPoint, Gate, PointVerdict,
};
use crate::error::{Error, Result};
use crate::graph::{CurveGraph, Subcurve};
use crate::jacobian::{
    abel_multidegree, apply_twist, delta_via_node, difference_set, is_quasistable, multidegree_to_json, Twister,
    TwistOracle,
};
use crate::lift2::{build_c2, canonical_liftings, is_synchronized, level2_node_counts, LiftedGraph, SyncReport};
use crate::tails::{d_count, nested, symm_diff, Classification};

/// Largest component count for which the uniqueness suite runs.
pub const UNIQUENESS_MAX_COMPONENTS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    WedgeClosure,
    TerminalSupport,
    SymmetricDifference,
    TwisterOracle,
    DifferenceSet,
    Admissibility,
    LevelOneLifting,
    QsImpliesSync,
    PairwiseEquivalence,
    Resolution,
    QsUniqueness,
    NodeCountIdentity,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::WedgeClosure,
        Suite::TerminalSupport,
        Suite::SymmetricDifference,
        Suite::TwisterOracle,
        Suite::DifferenceSet,
        Suite::Admissibility,
        Suite::LevelOneLifting,
        Suite::QsImpliesSync,
        Suite::PairwiseEquivalence,
        Suite::Resolution,
        Suite::QsUniqueness,
        Suite::NodeCountIdentity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::WedgeClosure => "wedge-closure",
            Suite::TerminalSupport => "terminal-support",
            Suite::SymmetricDifference => "symmetric-difference",
            Suite::TwisterOracle => "twister-oracle",
            Suite::DifferenceSet => "difference-set",
            Suite::Admissibility => "admissibility",
            Suite::LevelOneLifting => "level-one-lifting",
            Suite::QsImpliesSync => "qs-implies-sync",
            Suite::PairwiseEquivalence => "pairwise-equivalence",
            Suite::Resolution => "resolution",
            Suite::QsUniqueness => "qs-uniqueness",
            Suite::NodeCountIdentity => "node-count-identity",
        }
    }

    /// Older numbered names accepted on the command line.
    pub fn alias(self) -> Option<&'static str> {
        match self {
            Suite::WedgeClosure => Some("closure-22/23"),
            Suite::SymmetricDifference => Some("prop-31"),
            Suite::TwisterOracle => Some("thm-24-oracle"),
            Suite::DifferenceSet => Some("lemma-35"),
            Suite::Admissibility => Some("thm-36-admissibility"),
            Suite::LevelOneLifting => Some("lemma-61"),
            Suite::QsImpliesSync => Some("prop-62"),
            Suite::PairwiseEquivalence => Some("thm-63-pairwise"),
            Suite::Resolution => Some("thm-64-resolution"),
            _ => None,
        }
    }

    /// Whether the verdicts depend on the quasistable-point profile.
    pub fn uses_profile(self) -> bool {
        matches!(self, Suite::QsImpliesSync | Suite::PairwiseEquivalence | Suite::Resolution)
    }

    /// Parses a comma-separated list; `all` selects every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s || x.alias() == Some(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite '{s}'")))
    }
}

/// One failed check with enough context to understand it.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub check: String,
    pub context: Value,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tally {
    pub checks: u64,
    pub failed: u64,
    /// The first few violations; `failed` counts all of them.
    pub violations: Vec<Violation>,
}

const KEEP_PER_INSTANCE: usize = 3;

impl Tally {
    fn check(&mut self, ok: bool, name: &str, context: impl FnOnce() -> Value) {
        self.checks += 1;
        if !ok {
            self.fail(name, context());
        }
    }

    fn fail(&mut self, name: &str, context: Value) {
        self.failed += 1;
        if self.violations.len() < KEEP_PER_INSTANCE {
            self.violations.push(Violation { check: name.to_string(), context });
        }
    }

    fn error(&mut self, name: &str, e: &Error) {
        self.checks += 1;
        self.fail(name, json!({ "error": e.to_string() }));
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

/// Both points of one matching with their verdicts.
struct MatchingData {
    choice: BlowupChoice,
    points: [DistinguishedPoint; 2],
    qs: [PointVerdict; 2],
    sync: [SyncReport; 2],
}

/// Per-graph data shared by the suites.
pub struct Context<'g> {
    pub g: &'g CurveGraph,
    pub profile: ConventionProfile,
    pub gate: Gate,
    twister: OnceCell<std::result::Result<Twister, String>>,
    lifted: OnceCell<std::result::Result<LiftedGraph, String>>,
    matchings: OnceCell<std::result::Result<Vec<MatchingData>, String>>,
}

impl<'g> Context<'g> {
    pub fn new(g: &'g CurveGraph, profile: ConventionProfile, gate: Gate) -> Self {
        Context {
            g,
            profile,
            gate,
            twister: OnceCell::new(),
            lifted: OnceCell::new(),
            matchings: OnceCell::new(),
        }
    }

    fn twister(&self) -> std::result::Result<&Twister, String> {
        self.twister.get_or_init(|| Twister::compute(self.g).map_err(|e| e.to_string())).as_ref().map_err(Clone::clone)
    }

    fn lifted(&self) -> std::result::Result<&LiftedGraph, String> {
        self.lifted.get_or_init(|| build_c2(self.g).map_err(|e| e.to_string())).as_ref().map_err(Clone::clone)
    }

    fn matchings(&self) -> std::result::Result<&[MatchingData], String> {
        self.matchings
            .get_or_init(|| {
                let tw = self.twister()?;
                let lg = self.lifted()?;
                let run = || -> Result<Vec<MatchingData>> {
                    let mut out = Vec::new();
                    for (r1, r2) in node_pairs(self.g) {
                        for y in 0..2 {
                            let choice = BlowupChoice::new(self.g, r1, r2, y)?;
                            let points = distinguished_points(&choice);
                            let qs = [
                                is_quasistable_point(self.g, tw, &points[0], self.profile)?,
                                is_quasistable_point(self.g, tw, &points[1], self.profile)?,
                            ];
                            let sync = [
                                is_synchronized(self.g, lg, tw, &points[0])?,
                                is_synchronized(self.g, lg, tw, &points[1])?,
                            ];
                            out.push(MatchingData { choice, points, qs, sync });
                        }
                    }
                    Ok(out)
                };
                run().map_err(|e| e.to_string())
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    fn names(&self, z: Subcurve) -> Vec<String> {
        self.g.component_names(z)
    }

    pub fn run(&self, suite: Suite) -> Tally {
        let mut t = Tally::default();
        let outcome = match suite {
            Suite::WedgeClosure => self.wedge_closure(&mut t),
            Suite::TerminalSupport => self.terminal_support(&mut t),
            Suite::SymmetricDifference => self.symmetric_difference(&mut t),
            Suite::TwisterOracle => self.twister_oracle(&mut t),
            Suite::DifferenceSet => self.difference_set(&mut t),
            Suite::Admissibility => self.admissibility(&mut t),
            Suite::LevelOneLifting => self.level_one_lifting(&mut t),
            Suite::QsImpliesSync => self.qs_implies_sync(&mut t),
            Suite::PairwiseEquivalence => self.pairwise_equivalence(&mut t),
            Suite::Resolution => self.resolution(&mut t),
            Suite::QsUniqueness => self.qs_uniqueness(&mut t),
            Suite::NodeCountIdentity => self.node_count_identity(&mut t),
        };
        if let Err(msg) = outcome {
            t.checks += 1;
            t.fail("setup", json!({ "error": msg }));
        }
        t
    }

    /// Anchor pairs `(γ, γ')` with `γ ≤ γ'` avoiding the marked component.
    fn anchor_pairs(&self) -> Vec<(usize, usize, Subcurve)> {
        let p = self.g.n_components();
        let mut out = Vec::new();
        for a in 0..p {
            for b in a..p {
                let anchors = Subcurve::singleton(a).with(b);
                if !anchors.contains(self.g.marked()) {
                    out.push((a, b, anchors));
                }
            }
        }
        out
    }

    fn candidates(&self, k: usize, anchors: Subcurve) -> Vec<Subcurve> {
        let m = self.g.marked();
        self.g
            .tails_with_terms(Some(k))
            .iter()
            .map(|t| t.set)
            .filter(|z| anchors.is_subset(*z) && !z.contains(m))
            .collect()
    }

    fn wedge_closure(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        for (a, b, anchors) in self.anchor_pairs() {
            let c2 = self.candidates(2, anchors);
            for (x, &z) in c2.iter().enumerate() {
                for &z2 in &c2[x + 1..] {
                    let w = z.wedge(z2);
                    t.check(g.is_tail(w) && g.k(w) == 2, "wedge-of-2-tails", || {
                        json!({"anchors": [g.name(a), g.name(b)], "z": self.names(z), "z2": self.names(z2)})
                    });
                }
            }
            let t2 = match nested(g, 2, anchors) {
                Ok(v) => v,
                Err(e) => {
                    t.error("nested-2", &e);
                    continue;
                }
            };
            let free = |z: Subcurve| t2.iter().all(|w| g.relate(z, *w).is_free());
            let c3: Vec<Subcurve> = self.candidates(3, anchors).into_iter().filter(|z| free(*z)).collect();
            for (x, &z) in c3.iter().enumerate() {
                for &z2 in &c3[x + 1..] {
                    let w = z.wedge(z2);
                    t.check(g.is_tail(w) && g.k(w) == 3 && free(w), "wedge-of-free-3-tails", || {
                        json!({"anchors": [g.name(a), g.name(b)], "z": self.names(z), "z2": self.names(z2)})
                    });
                }
            }
        }
        Ok(())
    }

    fn terminal_support(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        for (a, b, anchors) in self.anchor_pairs() {
            let (t2, t3) = match (nested(g, 2, anchors), nested(g, 3, anchors)) {
                (Ok(x), Ok(y)) => (x, y),
                (Err(e), _) | (_, Err(e)) => {
                    t.error("nested", &e);
                    continue;
                }
            };
            let terminal = |w: Subcurve, z: Subcurve| g.relate(w, z).is_terminal();
            for z in self.candidates(2, anchors) {
                let ok = t2.iter().any(|&w| w.is_subset(z) && terminal(w, z));
                t.check(ok, "terminal-2-tail-inside", || {
                    json!({"anchors": [g.name(a), g.name(b)], "z": self.names(z)})
                });
            }
            for z in self.candidates(3, anchors) {
                let ok = t2.iter().any(|&w| terminal(w, z)) || t3.iter().any(|&w| w.is_subset(z) && terminal(w, z));
                t.check(ok, "terminal-tail-for-3-tail", || {
                    json!({"anchors": [g.name(a), g.name(b)], "z": self.names(z)})
                });
            }
        }
        let tails = g.tails_with_terms(None);
        for x in tails.iter() {
            let z = x.set;
            let kz = x.term.len();
            for y in tails.iter() {
                let z2 = y.set;
                if x.term.iter().all(|&e| g.lies_on(z2, e)) {
                    let ok = z.is_subset(z2) || g.complement(z).is_subset(z2);
                    t.check(ok, "terminal-nodes-on-tail", || json!({"z": self.names(z), "z2": self.names(z2)}));
                }
                let shared = x.term.iter().filter(|e| y.term.contains(e)).count();
                if shared + 1 == kz {
                    t.check(g.relate(z, z2).perfect, "all-but-one-shared-is-perfect", || {
                        json!({"z": self.names(z), "z2": self.names(z2)})
                    });
                }
                if kz >= 2 && y.term.len() == 1 {
                    t.check(g.relate(z, z2).is_free(), "free-from-1-tails", || {
                        json!({"z": self.names(z), "z2": self.names(z2)})
                    });
                }
            }
        }
        Ok(())
    }

    fn symmetric_difference(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        let tw = self.twister()?;
        let p = g.n_components();
        for i in 0..p {
            for j in 0..p {
                if !g.adjacent(i, j) {
                    continue;
                }
                let between = g.nodes_between(i, j);
                for k in 0..p {
                    let ctx = || json!({"i": g.name(i), "j": g.name(j), "k": g.name(k)});
                    let mut union: Vec<Subcurve> = tw.family(i, k).unwrap().sets();
                    union.extend(tw.family(j, k).unwrap().sets());
                    union.sort_by_key(|z| z.listing_key());
                    union.dedup();
                    t.check(d_count(g, &union, &between) <= 1, "shared-node-count", ctx);

                    let mut diffs = Vec::new();
                    for s in 1..=3 {
                        match symm_diff(g, s, i, j, k) {
                            Ok(d) => diffs.push(d),
                            Err(e) => {
                                t.error(&format!("level-{s}-trichotomy"), &e);
                            }
                        }
                    }
                    if diffs.len() != 3 {
                        continue;
                    }
                    let d1 = &diffs[0];
                    t.check(d1.family.len() <= 1, "level-1-at-most-one", ctx);
                    if let Some(&z) = d1.family.first() {
                        let mut term = g.term(z);
                        term.sort_unstable();
                        t.check(term == between, "level-1-terminates-between", ctx);
                    }
                    for d in &diffs[1..] {
                        let s = d.s;
                        let f = &d.family;
                        let chain = f.windows(2).all(|w| w[0].is_proper_subset(w[1]));
                        t.check(chain, &format!("level-{s}-total-order"), ctx);
                        let term = f.windows(2).all(|w| g.relate(w[0], w[1]).is_terminal());
                        t.check(term, &format!("level-{s}-consecutive-terminal"), ctx);
                        let exactly_one = d.condition_i != d.condition_ii;
                        t.check(f.is_empty() != exactly_one, &format!("level-{s}-nonempty-iff-one-condition"), || {
                            json!({"i": g.name(i), "j": g.name(j), "k": g.name(k),
                                "members": f.iter().map(|z| self.names(*z)).collect::<Vec<_>>(),
                                "condition_i": d.condition_i, "condition_ii": d.condition_ii})
                        });
                        if !f.is_empty() && d.classification != Classification::Unclassified {
                            t.check(d.condition_tail == Some(f[0]), &format!("level-{s}-condition-tail-minimal"), ctx);
                        }
                        if !f.is_empty() {
                            t.check(d1.family.is_empty(), "level-1-empty-when-higher-nonempty", ctx);
                        }
                    }
                    if let Some([a, b]) = diffs[1].difference_nodes {
                        let on_ij = |e: usize| between.contains(&e);
                        let in_w0 = |e: usize| diffs[2].family.first().is_none_or(|w| g.is_terminal_node(*w, e));
                        let ok = (on_ij(a) && in_w0(b)) || (on_ij(b) && in_w0(a));
                        t.check(ok, "difference-node-location", || {
                            json!({"i": g.name(i), "j": g.name(j), "k": g.name(k),
                                "nodes": [g.node(a).id, g.node(b).id]})
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn twister_oracle(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        let tw = self.twister()?;
        let mut oracle = TwistOracle::new(g);
        let p = g.n_components();
        for a in 0..p {
            for b in 0..p {
                let d = abel_multidegree(g, a, b);
                let alpha = tw.alpha(a, b);
                let ctx = || json!({"pair": [g.name(a), g.name(b)], "alpha": multidegree_to_json(g, alpha)});
                match oracle.reduce(&d, None) {
                    Ok(r) => t.check(r.twist == alpha, "alpha-equals-oracle", || {
                        json!({"pair": [g.name(a), g.name(b)], "alpha": multidegree_to_json(g, alpha),
                            "oracle": multidegree_to_json(g, &r.twist), "bound": r.bound})
                    }),
                    Err(e) => t.fail("alpha-equals-oracle", json!({"pair": [g.name(a), g.name(b)], "error": e.to_string()})),
                }
                let twisted = apply_twist(g, &d, alpha);
                let qs = is_quasistable(g, &twisted).map(|v| v.quasistable).unwrap_or(false);
                t.check(qs, "twisted-is-quasistable", ctx);
                let fam = tw.family(a, b).unwrap();
                for s in g.reducible_nodes() {
                    let [m, n] = g.node(s).ends;
                    match delta_via_node(g, fam, m, n, s) {
                        Ok(v) => t.check(v == tw.delta(a, b, m, n), "node-recount", || {
                            json!({"pair": [g.name(a), g.name(b)], "node": g.node(s).id, "recount": v,
                                "delta": tw.delta(a, b, m, n)})
                        }),
                        Err(e) => t.error("node-recount", &e),
                    }
                }
            }
        }
        Ok(())
    }

    fn difference_set(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        let tw = self.twister()?;
        let p = g.n_components();
        for i in 0..p {
            for j in 0..p {
                if !g.adjacent(i, j) {
                    continue;
                }
                for k in 0..p {
                    match difference_set(g, tw, i, j, k) {
                        Ok(_) => t.check(true, "", || Value::Null),
                        Err(e) => t.fail(
                            "two-valued-with-containment",
                            json!({"i": g.name(i), "j": g.name(j), "k": g.name(k), "error": e.to_string()}),
                        ),
                    }
                }
            }
        }
        Ok(())
    }

    fn admissibility(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        let tw = self.twister()?;
        let plan = plan_from_tails(g).map_err(|e| e.to_string())?;
        let red = g.reducible_nodes();
        for &r1 in &red {
            for &r2 in &red {
                let matchings: Vec<Option<BlowupChoice>> = if r1 == r2 {
                    vec![None]
                } else {
                    let (lo, hi) = (r1.min(r2), r1.max(r2));
                    match plan.get(lo, hi) {
                        Some(c) => vec![Some(*c)],
                        None => {
                            let c = BlowupChoice::new(g, lo, hi, 0).map_err(|e| e.to_string())?;
                            vec![Some(c), Some(c.flipped())]
                        }
                    }
                };
                for m in matchings {
                    match admissibility_check(g, tw, r1, r2, m.as_ref(), self.gate) {
                        Ok(rep) => {
                            for c in &rep.checks {
                                t.check(c.holds(), c.ineq.as_str(), || {
                                    json!({"nodes": [g.node(r1).id, g.node(r2).id],
                                        "match": m.map(|c| c.to_json(g)["match"].clone()),
                                        "check": c.to_json(g)})
                                });
                            }
                        }
                        Err(e) => t.error("admissibility", &e),
                    }
                }
            }
        }
        Ok(())
    }

    fn level_one_lifting(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        let lg = self.lifted()?;
        let h = &lg.graph;
        for x in g.tails_with_terms(None).iter() {
            let w = x.set;
            match canonical_liftings(g, lg, w) {
                Ok(ls) => {
                    let ok = ls.iter().all(|l| h.is_tail(*l) && h.k(*l) == x.term.len() && lg.mu_image(*l) == w)
                        && h.precedes(ls[0], ls[1])
                        && h.precedes(ls[1], ls[2]);
                    t.check(ok, "canonical-liftings", || {
                        json!({"tail": self.names(w), "liftings": ls.iter().map(|l| h.component_names(*l)).collect::<Vec<_>>()})
                    });
                }
                Err(e) => t.error("canonical-liftings", &e),
            }
        }
        for m in self.matchings()? {
            for x in 0..2 {
                t.check(m.sync[x].level1_diagnostic(), "level-one-images", || m.sync[x].to_json(g, lg));
            }
        }
        Ok(())
    }

    fn qs_implies_sync(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        let lg = self.lifted()?;
        for m in self.matchings()? {
            for x in 0..2 {
                if m.qs[x].quasistable {
                    t.check(m.sync[x].synchronized(), "quasistable-point-synchronized", || {
                        json!({"match": m.choice.to_json(g), "qs": m.qs[x].to_json(g), "sync": m.sync[x].to_json(g, lg)})
                    });
                }
            }
        }
        Ok(())
    }

    fn pairwise_equivalence(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        let lg = self.lifted()?;
        for m in self.matchings()? {
            let qs = m.qs.iter().all(|v| v.quasistable);
            let sync = m.sync.iter().all(|s| s.synchronized());
            t.check(qs == sync, "both-quasistable-iff-both-synchronized", || {
                json!({"match": m.choice.to_json(g),
                    "points": (0..2).map(|x| json!({"point": m.points[x].to_json(g), "qs": m.qs[x].to_json(g),
                        "sync": m.sync[x].to_json(g, lg)})).collect::<Vec<_>>()})
            });
        }
        Ok(())
    }

    fn resolution(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        let tw = self.twister()?;
        let plan = plan_from_tails(g).map_err(|e| e.to_string())?;
        let rep = decide_resolution(g, tw, &plan, self.profile).map_err(|e| e.to_string())?;
        for pv in &rep.pairs {
            t.check(pv.pass, "plan-from-tails-resolves", || {
                json!({"plan": plan.to_json(g), "pair": [g.node(pv.r1).id, g.node(pv.r2).id],
                    "failures": pv.failures.iter().map(|(c, v)| json!({"match": c.to_json(g), "point": v.to_json(g)})).collect::<Vec<_>>()})
            });
        }
        Ok(())
    }

    fn qs_uniqueness(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        let p = g.n_components();
        if p > UNIQUENESS_MAX_COMPONENTS {
            return Ok(());
        }
        let mut oracle = TwistOracle::new(g);
        let qs = oracle.quasistable_multidegrees().to_vec();
        let count = oracle.class_count();
        t.check(qs.len() as i128 == count, "one-per-class-count", || {
            json!({"quasistable": qs.len(), "classes": count.to_string()})
        });
        let mut by_class: HashMap<Vec<_>, usize> = HashMap::new();
        for (x, q) in qs.iter().enumerate() {
            if let Some(&y) = by_class.get(&oracle.class_key(q)) {
                t.fail(
                    "pairwise-inequivalent",
                    json!({"first": multidegree_to_json(g, &qs[y]), "second": multidegree_to_json(g, q)}),
                );
            } else {
                t.checks += 1;
                by_class.insert(oracle.class_key(q), x);
            }
        }
        let mut d = vec![-3i64; p];
        loop {
            if d.iter().sum::<i64>() == 0 {
                let key = oracle.class_key(&d);
                t.check(by_class.contains_key(&key), "every-class-represented", || {
                    json!({"multidegree": multidegree_to_json(g, &d)})
                });
            }
            let mut pos = 0;
            while pos < p && d[pos] == 3 {
                d[pos] = -3;
                pos += 1;
            }
            if pos == p {
                break;
            }
            d[pos] += 1;
        }
        Ok(())
    }

    fn node_count_identity(&self, t: &mut Tally) -> std::result::Result<(), String> {
        let g = self.g;
        let lg = self.lifted()?;
        for m in self.matchings()? {
            for x in 0..2 {
                if !m.sync[x].synchronized() {
                    continue;
                }
                let counts: BTreeMap<usize, (usize, usize)> = level2_node_counts(g, lg, &m.sync[x]);
                for (s, (base, lifted)) in counts {
                    t.check(base == lifted, "level-2-node-counts", || {
                        json!({"point": m.points[x].to_json(g), "node": g.node(s).id, "base": base, "lifted": lifted})
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn names_and_aliases_parse() {
        for s in Suite::ALL {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
            if let Some(a) = s.alias() {
                assert_eq!(a.parse::<Suite>().unwrap(), s);
            }
        }
        assert_eq!(Suite::parse_list("all").unwrap().len(), Suite::ALL.len());
        assert!("thm-99".parse::<Suite>().is_err());
    }

    #[test]
    fn fixtures_pass_every_suite() {
        for g in [g1(), g2(), g3(), g4()] {
            let ctx = Context::new(&g, ConventionProfile::Reconstructed, Gate::Intersecting);
            for s in Suite::ALL {
                let t = ctx.run(s);
                assert!(t.passed(), "{s} on {}: {:?}", g.to_json(), t.violations);
            }
        }
    }

    #[test]
    fn displayed_profile_fails_resolution_on_banana() {
        let g = g2();
        let ctx = Context::new(&g, ConventionProfile::AsDisplayed, Gate::Intersecting);
        let t = ctx.run(Suite::Resolution);
        assert!(!t.passed());
    }
}
