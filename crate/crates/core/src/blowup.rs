//! Blowups of the square of the curve along products of components meeting
//! at pairs of reducible nodes, their distinguished points, and the checks
//! deciding whether a plan of blowups resolves the second Abel map.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{invalid, invariant, Result};
use crate::graph::{CurveGraph, Subcurve};
use crate::jacobian::Twister;
use crate::tails::TailFamily;

/// Which pair of condition pairs decides quasistability of a point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionProfile {
    /// `(γ1, γ2)` and `(γ1', γ2')`: the two corners not blown up.
    #[default]
    Reconstructed,
    /// `(γ1, γ2)` and `(γ1, γ2')`, as the condition is printed.
    AsDisplayed,
}

impl ConventionProfile {
    pub fn as_str(self) -> &'static str {
        match self {
            ConventionProfile::Reconstructed => "reconstructed",
            ConventionProfile::AsDisplayed => "as-displayed",
        }
    }
}

impl FromStr for ConventionProfile {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reconstructed" => Ok(ConventionProfile::Reconstructed),
            "as-displayed" => Ok(ConventionProfile::AsDisplayed),
            _ => Err(invalid(format!("unknown profile `{s}`"))),
        }
    }
}

/// A matching for the pair of distinct reducible nodes `r1 < r2`: the
/// blown-up products are `(ends(r1)[0], ends(r2)[y])` and
/// `(ends(r1)[1], ends(r2)[1 − y])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlowupChoice {
    pub r1: usize,
    pub r2: usize,
    pub y: usize,
}

impl BlowupChoice {
    pub fn new(g: &CurveGraph, r1: usize, r2: usize, y: usize) -> Result<Self> {
        check_pair(g, r1, r2)?;
        if y > 1 {
            return Err(invalid("matching slot must be 0 or 1"));
        }
        let (r1, r2, y) = if r1 < r2 { (r1, r2, y) } else { (r2, r1, y) };
        Ok(BlowupChoice { r1, r2, y })
    }

    /// The matching pairing `x` (an end of `r1`) with `yc` (an end of `r2`).
    pub fn from_components(g: &CurveGraph, r1: usize, r2: usize, x: usize, yc: usize) -> Result<Self> {
        check_pair(g, r1, r2)?;
        let sx = g.node(r1).side_of(x).ok_or_else(|| invalid("first component is not an end of the first node"))?;
        let sy = g.node(r2).side_of(yc).ok_or_else(|| invalid("second component is not an end of the second node"))?;
        // normalise to slot 0 of the lower-indexed node
        let (a, b, sa, sb) = if r1 < r2 { (r1, r2, sx, sy) } else { (r2, r1, sy, sx) };
        let y = if sa == 0 { sb } else { 1 - sb };
        Ok(BlowupChoice { r1: a, r2: b, y })
    }

    /// The two blown-up products as component pairs.
    pub fn centers(&self, g: &CurveGraph) -> [(usize, usize); 2] {
        let e1 = g.node(self.r1).ends;
        let e2 = g.node(self.r2).ends;
        [(e1[0], e2[self.y]), (e1[1], e2[1 - self.y])]
    }

    /// The other matching of the same pair.
    pub fn flipped(&self) -> Self {
        BlowupChoice { y: 1 - self.y, ..*self }
    }

    pub fn to_json(&self, g: &CurveGraph) -> Value {
        let [(a, b), (c, d)] = self.centers(g);
        json!({
            "pair": [g.node(self.r1).id, g.node(self.r2).id],
            "match": [[g.name(a), g.name(b)], [g.name(c), g.name(d)]],
        })
    }
}

fn check_pair(g: &CurveGraph, r1: usize, r2: usize) -> Result<()> {
    if r1 >= g.n_nodes() || r2 >= g.n_nodes() {
        return Err(invalid("node index out of range"));
    }
    if r1 == r2 {
        return Err(invalid("a blowup pair needs two distinct nodes"));
    }
    if g.node(r1).is_loop() || g.node(r2).is_loop() {
        return Err(invalid("a blowup pair needs reducible nodes"));
    }
    Ok(())
}

/// Point of the exceptional curve over `(r1, r2)` lying on three divisors
/// `(γ1, γ2)`, `(γ1, γ2')`, `(γ1', γ2)`; `s1`, `s2` are the slots of `γ1`
/// on `r1` and of `γ2` on `r2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DistinguishedPoint {
    pub r1: usize,
    pub r2: usize,
    pub s1: usize,
    pub s2: usize,
}

impl DistinguishedPoint {
    pub fn gamma1(&self, g: &CurveGraph) -> usize {
        g.node(self.r1).ends[self.s1]
    }
    pub fn gamma1p(&self, g: &CurveGraph) -> usize {
        g.node(self.r1).ends[1 - self.s1]
    }
    pub fn gamma2(&self, g: &CurveGraph) -> usize {
        g.node(self.r2).ends[self.s2]
    }
    pub fn gamma2p(&self, g: &CurveGraph) -> usize {
        g.node(self.r2).ends[1 - self.s2]
    }

    /// `{(γ1,γ2), (γ1,γ2'), (γ1',γ2)}`.
    pub fn triple(&self, g: &CurveGraph) -> [(usize, usize); 3] {
        let (a, ap, b, bp) = (self.gamma1(g), self.gamma1p(g), self.gamma2(g), self.gamma2p(g));
        [(a, b), (a, bp), (ap, b)]
    }

    /// The pairs whose level-2 and level-3 tails decide quasistability.
    pub fn condition_pairs(&self, g: &CurveGraph, profile: ConventionProfile) -> [(usize, usize); 2] {
        let (a, ap, b, bp) = (self.gamma1(g), self.gamma1p(g), self.gamma2(g), self.gamma2p(g));
        match profile {
            ConventionProfile::Reconstructed => [(a, b), (ap, bp)],
            ConventionProfile::AsDisplayed => [(a, b), (a, bp)],
        }
    }

    pub fn to_json(&self, g: &CurveGraph) -> Value {
        let t = self.triple(g);
        json!({
            "pair": [g.node(self.r1).id, g.node(self.r2).id],
            "gamma1": g.name(self.gamma1(g)),
            "gamma2": g.name(self.gamma2(g)),
            "triple": t.iter().map(|&(a, b)| [g.name(a), g.name(b)]).collect::<Vec<_>>(),
        })
    }
}

/// The two distinguished points of the exceptional curve of a matching.
pub fn distinguished_points(choice: &BlowupChoice) -> [DistinguishedPoint; 2] {
    let (r1, r2, y) = (choice.r1, choice.r2, choice.y);
    [
        DistinguishedPoint { r1, r2, s1: 0, s2: 1 - y },
        DistinguishedPoint { r1, r2, s1: 1, s2: y },
    ]
}

pub(crate) fn family(tw: &Twister, a: usize, b: usize) -> Result<&TailFamily> {
    tw.family(a, b).ok_or_else(|| invalid("twister table carries no tail families"))
}

/// One condition pair checked at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionCheck {
    pub pair: (usize, usize),
    /// Nodes among `{r1, r2}` terminal for some level-2 or level-3 member.
    pub hit: Vec<usize>,
    /// Members having `r1` or `r2` terminal.
    pub tails: Vec<Subcurve>,
}

impl ConditionCheck {
    pub fn holds(&self) -> bool {
        self.hit.len() <= 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointVerdict {
    pub point: DistinguishedPoint,
    pub profile: ConventionProfile,
    pub quasistable: bool,
    pub conditions: Vec<ConditionCheck>,
}

impl PointVerdict {
    pub fn to_json(&self, g: &CurveGraph) -> Value {
        json!({
            "point": self.point.to_json(g),
            "profile": self.profile.as_str(),
            "quasistable": self.quasistable,
            "conditions": self.conditions.iter().map(|c| json!({
                "pair": [g.name(c.pair.0), g.name(c.pair.1)],
                "holds": c.holds(),
                "nodes": g.node_ids(&c.hit),
                "tails": c.tails.iter().map(|z| g.component_names(*z)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn is_quasistable_point(
    g: &CurveGraph,
    tw: &Twister,
    point: &DistinguishedPoint,
    profile: ConventionProfile,
) -> Result<PointVerdict> {
    let nodes = [point.r1, point.r2];
    let mut conditions = Vec::with_capacity(2);
    for (a, b) in point.condition_pairs(g, profile) {
        let fam = family(tw, a, b)?;
        let mut hit = Vec::new();
        let mut tails = Vec::new();
        for w in fam.t2.iter().chain(&fam.t3) {
            let mut touched = false;
            for r in nodes {
                if w.term.contains(&r) {
                    touched = true;
                    if !hit.contains(&r) {
                        hit.push(r);
                    }
                }
            }
            if touched {
                tails.push(w.set);
            }
        }
        hit.sort_unstable();
        conditions.push(ConditionCheck { pair: (a, b), hit, tails });
    }
    Ok(PointVerdict {
        point: *point,
        profile,
        quasistable: conditions.iter().all(|c| c.holds()),
        conditions,
    })
}

/// The matching forced by level-2 and level-3 tails having both nodes
/// terminal: each pairs the ends of `r1` and `r2` lying on the tail. Absent
/// when no such tail exists; an error if two such tails disagree.
pub fn choice_from_tails(g: &CurveGraph, r1: usize, r2: usize) -> Result<Option<BlowupChoice>> {
    check_pair(g, r1, r2)?;
    let mut found: Option<(BlowupChoice, Subcurve)> = None;
    for k in [2, 3] {
        for t in g.tails_with_terms(Some(k)).iter() {
            if !(t.term.contains(&r1) && t.term.contains(&r2)) {
                continue;
            }
            let x = *g.node(r1).ends.iter().find(|&&c| t.set.contains(c)).unwrap();
            let y = *g.node(r2).ends.iter().find(|&&c| t.set.contains(c)).unwrap();
            let c = BlowupChoice::from_components(g, r1, r2, x, y)?;
            match found {
                None => found = Some((c, t.set)),
                Some((prev, w)) if prev != c => {
                    return Err(invariant(format!(
                        "tails {:?} and {:?} induce different matchings for ({}, {})",
                        g.component_names(w),
                        g.component_names(t.set),
                        g.node(r1).id,
                        g.node(r2).id
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(found.map(|(c, _)| c))
}

/// Unordered pairs of distinct reducible nodes, `r1 < r2`.
pub fn node_pairs(g: &CurveGraph) -> Vec<(usize, usize)> {
    let red = g.reducible_nodes();
    let mut out = Vec::new();
    for (i, &a) in red.iter().enumerate() {
        for &b in &red[i + 1..] {
            out.push((a, b));
        }
    }
    out
}

/// A partial assignment of matchings to pairs of reducible nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlowupPlan {
    pub choices: BTreeMap<(usize, usize), BlowupChoice>,
}

impl BlowupPlan {
    pub fn insert(&mut self, c: BlowupChoice) {
        self.choices.insert((c.r1, c.r2), c);
    }

    pub fn get(&self, r1: usize, r2: usize) -> Option<&BlowupChoice> {
        self.choices.get(&(r1.min(r2), r1.max(r2)))
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn to_json(&self, g: &CurveGraph) -> Value {
        Value::Array(self.choices.values().map(|c| c.to_json(g)).collect())
    }

    /// Reads `[{"pair":[id,id],"match":[[x,y],[x',y']]}, …]`.
    pub fn from_json(g: &CurveGraph, v: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Entry {
            pair: [String; 2],
            #[serde(rename = "match")]
            matching: [[String; 2]; 2],
        }
        let entries: Vec<Entry> = serde_json::from_value(v.clone())?;
        let mut plan = BlowupPlan::default();
        for e in entries {
            let r1 = g.node_index(&e.pair[0])?;
            let r2 = g.node_index(&e.pair[1])?;
            let [[x, y], [xb, yb]] = &e.matching;
            let c = BlowupChoice::from_components(g, r1, r2, g.component_index(x)?, g.component_index(y)?)?;
            let other = BlowupChoice::from_components(g, r1, r2, g.component_index(xb)?, g.component_index(yb)?)?;
            if c != other {
                return Err(invalid(format!("inconsistent matching for ({}, {})", e.pair[0], e.pair[1])));
            }
            if plan.choices.contains_key(&(c.r1, c.r2)) {
                return Err(invalid(format!("pair ({}, {}) listed twice", e.pair[0], e.pair[1])));
            }
            plan.insert(c);
        }
        Ok(plan)
    }
}

/// Chooses the tail-induced matching wherever one exists.
pub fn plan_from_tails(g: &CurveGraph) -> Result<BlowupPlan> {
    let mut plan = BlowupPlan::default();
    for (r1, r2) in node_pairs(g) {
        if let Some(c) = choice_from_tails(g, r1, r2)? {
            plan.insert(c);
        }
    }
    Ok(plan)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairVerdict {
    pub r1: usize,
    pub r2: usize,
    pub chosen: Option<BlowupChoice>,
    pub pass: bool,
    /// Failing points together with the matching they belong to.
    pub failures: Vec<(BlowupChoice, PointVerdict)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionReport {
    pub profile: ConventionProfile,
    pub resolved: bool,
    pub pairs: Vec<PairVerdict>,
}

impl ResolutionReport {
    pub fn failing_pairs(&self) -> Vec<(usize, usize)> {
        self.pairs.iter().filter(|p| !p.pass).map(|p| (p.r1, p.r2)).collect()
    }

    pub fn to_json(&self, g: &CurveGraph) -> Value {
        json!({
            "profile": self.profile.as_str(),
            "resolved": self.resolved,
            "pairs": self.pairs.iter().map(|p| json!({
                "pair": [g.node(p.r1).id, g.node(p.r2).id],
                "chosen": p.chosen.map(|c| c.to_json(g)["match"].clone()),
                "verdict": if p.pass { "pass" } else { "fail" },
                "witnesses": p.failures.iter().map(|(c, v)| json!({
                    "match": c.to_json(g)["match"].clone(),
                    "point": v.to_json(g),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn matching_failures(
    g: &CurveGraph,
    tw: &Twister,
    c: &BlowupChoice,
    profile: ConventionProfile,
) -> Result<Vec<(BlowupChoice, PointVerdict)>> {
    let mut out = Vec::new();
    for pt in distinguished_points(c) {
        let v = is_quasistable_point(g, tw, &pt, profile)?;
        if !v.quasistable {
            out.push((*c, v));
        }
    }
    Ok(out)
}

/// A chosen pair passes when both points of its matching are quasistable;
/// an unchosen pair passes when all four points of both matchings are.
/// Pairs involving loops or a repeated node are not listed and always pass.
pub fn decide_resolution(
    g: &CurveGraph,
    tw: &Twister,
    plan: &BlowupPlan,
    profile: ConventionProfile,
) -> Result<ResolutionReport> {
    let mut pairs = Vec::new();
    for (r1, r2) in node_pairs(g) {
        let chosen = plan.get(r1, r2).copied();
        let failures = match chosen {
            Some(c) => matching_failures(g, tw, &c, profile)?,
            None => {
                let c = BlowupChoice::new(g, r1, r2, 0)?;
                let mut f = matching_failures(g, tw, &c, profile)?;
                f.extend(matching_failures(g, tw, &c.flipped(), profile)?);
                f
            }
        };
        pairs.push(PairVerdict { r1, r2, chosen, pass: failures.is_empty(), failures });
    }
    Ok(ResolutionReport { profile, resolved: pairs.iter().all(|p| p.pass), pairs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    /// Both matchings give quasistable points.
    Free,
    /// Exactly this matching does.
    Forced(BlowupChoice),
    /// Neither does.
    Blocked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport {
    pub profile: ConventionProfile,
    pub classes: Vec<((usize, usize), PairClass)>,
    /// The resolving plan choosing exactly the forced pairs; absent when a
    /// pair is blocked.
    pub minimal_plan: Option<BlowupPlan>,
    pub from_tails_is_minimal: bool,
}

impl MinimalityReport {
    pub fn forced(&self) -> Vec<BlowupChoice> {
        self.classes
            .iter()
            .filter_map(|(_, c)| match c {
                PairClass::Forced(c) => Some(*c),
                _ => None,
            })
            .collect()
    }

    pub fn to_json(&self, g: &CurveGraph) -> Value {
        json!({
            "profile": self.profile.as_str(),
            "pairs": self.classes.iter().map(|((a, b), c)| {
                let (class, m) = match c {
                    PairClass::Free => ("free", Value::Null),
                    PairClass::Forced(c) => ("forced", c.to_json(g)["match"].clone()),
                    PairClass::Blocked => ("blocked", Value::Null),
                };
                json!({"pair": [g.node(*a).id, g.node(*b).id], "class": class, "match": m})
            }).collect::<Vec<_>>(),
            "minimal_plan": self.minimal_plan.as_ref().map(|p| p.to_json(g)),
            "from_tails_is_minimal": self.from_tails_is_minimal,
        })
    }
}

pub fn minimality_probe(g: &CurveGraph, tw: &Twister, profile: ConventionProfile) -> Result<MinimalityReport> {
    let mut classes = Vec::new();
    let mut plan = BlowupPlan::default();
    let mut blocked = false;
    for (r1, r2) in node_pairs(g) {
        let c0 = BlowupChoice::new(g, r1, r2, 0)?;
        let c1 = c0.flipped();
        let ok0 = matching_failures(g, tw, &c0, profile)?.is_empty();
        let ok1 = matching_failures(g, tw, &c1, profile)?.is_empty();
        let class = match (ok0, ok1) {
            (true, true) => PairClass::Free,
            (true, false) => PairClass::Forced(c0),
            (false, true) => PairClass::Forced(c1),
            (false, false) => PairClass::Blocked,
        };
        match class {
            PairClass::Forced(c) => plan.insert(c),
            PairClass::Blocked => blocked = true,
            PairClass::Free => {}
        }
        classes.push(((r1, r2), class));
    }
    let minimal_plan = (!blocked).then_some(plan);
    let from_tails_is_minimal = minimal_plan.as_ref() == Some(&plan_from_tails(g)?);
    Ok(MinimalityReport { profile, classes, minimal_plan, from_tails_is_minimal })
}

/// Whether admissibility inequalities are restricted to pairs of divisors
/// that meet after the blowup.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Gate {
    #[default]
    Intersecting,
    Strict,
}

/// The families of admissibility inequalities. With `α, α'` the ends of
/// the first node and `β, β'` those of the second, each bounds by 1 the
/// absolute value of:
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Inequality {
    /// `δ(α,β,m,n) − δ(α',β',m,n)` at a node `S = (m, n)` off the pair.
    OtherNode,
    /// `δ(α,β,α,α') − δ(α,β',α,α')`.
    VarySecondAtFirst,
    /// `δ(α,β,β,β') − δ(α',β,β,β')`.
    VaryFirstAtSecond,
    /// `δ(α,β,α,α') − δ(α',β,α,α') − 1`.
    SwapFirstAtFirst,
    /// `δ(α,β,β,β') − δ(α,β',β,β') − 1`.
    SwapSecondAtSecond,
    /// `δ(α,β,α,α') − δ(α',β',α,α') − 1`, when the two divisors meet.
    SwapBothAtFirst,
    /// `δ(α,β,β,β') − δ(α',β',β,β') − 1`, when the two divisors meet.
    SwapBothAtSecond,
    /// `δ(α,α,α,α') − δ(α,α',α,α') − 1` at a repeated node.
    Diagonal,
}

impl Inequality {
    pub const ALL: [Inequality; 8] = [
        Inequality::OtherNode,
        Inequality::VarySecondAtFirst,
        Inequality::VaryFirstAtSecond,
        Inequality::SwapFirstAtFirst,
        Inequality::SwapSecondAtSecond,
        Inequality::SwapBothAtFirst,
        Inequality::SwapBothAtSecond,
        Inequality::Diagonal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Inequality::OtherNode => "other-node",
            Inequality::VarySecondAtFirst => "vary-second-at-first",
            Inequality::VaryFirstAtSecond => "vary-first-at-second",
            Inequality::SwapFirstAtFirst => "swap-first-at-first",
            Inequality::SwapSecondAtSecond => "swap-second-at-second",
            Inequality::SwapBothAtFirst => "swap-both-at-first",
            Inequality::SwapBothAtSecond => "swap-both-at-second",
            Inequality::Diagonal => "diagonal",
        }
    }
}

/// One evaluated inequality `|value| ≤ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IneqCheck {
    pub ineq: Inequality,
    pub alpha: (usize, usize),
    pub beta: (usize, usize),
    pub node: Option<usize>,
    pub value: i64,
}

impl IneqCheck {
    pub fn holds(&self) -> bool {
        self.value.abs() <= 1
    }

    pub fn to_json(&self, g: &CurveGraph) -> Value {
        json!({
            "inequality": self.ineq.as_str(),
            "alpha": [g.name(self.alpha.0), g.name(self.alpha.1)],
            "beta": [g.name(self.beta.0), g.name(self.beta.1)],
            "node": self.node.map(|e| g.node(e).id.clone()),
            "value": self.value,
            "holds": self.holds(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub r1: usize,
    pub r2: usize,
    pub gate: Gate,
    pub checks: Vec<IneqCheck>,
    /// Gated inequalities skipped because their divisors do not meet.
    pub skipped: usize,
}

impl AdmissibilityReport {
    pub fn violations(&self) -> Vec<&IneqCheck> {
        self.checks.iter().filter(|c| !c.holds()).collect()
    }
}

/// Evaluates the admissibility inequalities at the pair `(r1, r2)` of
/// reducible nodes, which may coincide. `matching` decides which pairs of
/// divisors meet; it is ignored when `r1 == r2` and required for the
/// intersecting gate otherwise.
pub fn admissibility_check(
    g: &CurveGraph,
    tw: &Twister,
    r1: usize,
    r2: usize,
    matching: Option<&BlowupChoice>,
    gate: Gate,
) -> Result<AdmissibilityReport> {
    if g.node(r1).is_loop() || g.node(r2).is_loop() {
        return Err(invalid("admissibility is checked at reducible nodes"));
    }
    let e1 = g.node(r1).ends;
    let e2 = g.node(r2).ends;
    // the two divisors left disjoint by the blowup
    let apart: Option<[(usize, usize); 2]> = if r1 == r2 {
        Some([(e1[0], e1[0]), (e1[1], e1[1])])
    } else {
        match (gate, matching) {
            (Gate::Strict, _) => None,
            (Gate::Intersecting, Some(c)) => {
                if (c.r1, c.r2) != (r1.min(r2), r1.max(r2)) {
                    return Err(invalid("matching belongs to another pair"));
                }
                let [(a, b), (ab, bb)] = c.centers(g);
                // centers are stated for (lower, higher); reorient if needed
                let (x, y, xb, yb) = if r1 < r2 { (a, b, ab, bb) } else { (b, a, bb, ab) };
                Some([(x, yb), (xb, y)])
            }
            (Gate::Intersecting, None) => return Err(invalid("the intersecting gate needs a matching")),
        }
    };
    let apart = if gate == Gate::Strict { None } else { apart };
    let meets = |u: (usize, usize), v: (usize, usize)| match apart {
        None => true,
        Some([p, q]) => !((u == p && v == q) || (u == q && v == p)),
    };
    let d = |a: usize, b: usize, m: usize, n: usize| tw.delta(a, b, m, n);

    let mut checks = Vec::new();
    let mut skipped = 0;
    let others: Vec<usize> = g.reducible_nodes().into_iter().filter(|&s| s != r1 && s != r2).collect();
    for &a in &e1 {
        for &ap in &e1 {
            for &b in &e2 {
                for &bp in &e2 {
                    if !meets((a, b), (ap, bp)) {
                        skipped += others.len();
                        continue;
                    }
                    for &s in &others {
                        let [m, n] = g.node(s).ends;
                        checks.push(IneqCheck {
                            ineq: Inequality::OtherNode,
                            alpha: (a, ap),
                            beta: (b, bp),
                            node: Some(s),
                            value: d(a, b, m, n) - d(ap, bp, m, n),
                        });
                    }
                }
            }
        }
    }
    if r1 == r2 {
        for side in 0..2 {
            let (a, ap) = (e1[side], e1[1 - side]);
            checks.push(IneqCheck {
                ineq: Inequality::Diagonal,
                alpha: (a, ap),
                beta: (a, ap),
                node: None,
                value: d(a, a, a, ap) - d(a, ap, a, ap) - 1,
            });
        }
    } else {
        for side1 in 0..2 {
            for side2 in 0..2 {
                let (a, ap) = (e1[side1], e1[1 - side1]);
                let (b, bp) = (e2[side2], e2[1 - side2]);
                let mut push = |ineq: Inequality, value: i64| {
                    checks.push(IneqCheck { ineq, alpha: (a, ap), beta: (b, bp), node: None, value })
                };
                push(Inequality::VarySecondAtFirst, d(a, b, a, ap) - d(a, bp, a, ap));
                push(Inequality::VaryFirstAtSecond, d(a, b, b, bp) - d(ap, b, b, bp));
                push(Inequality::SwapFirstAtFirst, d(a, b, a, ap) - d(ap, b, a, ap) - 1);
                push(Inequality::SwapSecondAtSecond, d(a, b, b, bp) - d(a, bp, b, bp) - 1);
                if meets((a, b), (ap, bp)) {
                    push(Inequality::SwapBothAtFirst, d(a, b, a, ap) - d(ap, bp, a, ap) - 1);
                    push(Inequality::SwapBothAtSecond, d(a, b, b, bp) - d(ap, bp, b, bp) - 1);
                } else {
                    skipped += 2;
                }
            }
        }
    }
    Ok(AdmissibilityReport { r1, r2, gate, checks, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn comps(g: &CurveGraph, t: [(usize, usize); 3]) -> Vec<(String, String)> {
        let mut v: Vec<_> = t.iter().map(|&(a, b)| (g.name(a).to_string(), g.name(b).to_string())).collect();
        v.sort();
        v
    }

    fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        let mut v: Vec<_> = list.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect();
        v.sort();
        v
    }

    fn choice(g: &CurveGraph, r1: &str, r2: &str, x: &str, y: &str) -> BlowupChoice {
        BlowupChoice::from_components(
            g,
            g.node_index(r1).unwrap(),
            g.node_index(r2).unwrap(),
            g.component_index(x).unwrap(),
            g.component_index(y).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn distinguished_points_on_g2_and_g3() {
        let g = g2();
        let [p, q] = distinguished_points(&choice(&g, "a", "b", "2", "2"));
        let got = [comps(&g, p.triple(&g)), comps(&g, q.triple(&g))];
        assert!(got.contains(&pairs(&[("2", "2"), ("1", "1"), ("2", "1")])));
        assert!(got.contains(&pairs(&[("2", "2"), ("1", "1"), ("1", "2")])));

        let [p, q] = distinguished_points(&choice(&g, "a", "b", "2", "1"));
        let got = [comps(&g, p.triple(&g)), comps(&g, q.triple(&g))];
        assert!(got.contains(&pairs(&[("2", "1"), ("1", "2"), ("2", "2")])));
        assert!(got.contains(&pairs(&[("2", "1"), ("1", "2"), ("1", "1")])));

        let g = g3();
        let [p, q] = distinguished_points(&choice(&g, "e12", "e13", "2", "3"));
        let got = [comps(&g, p.triple(&g)), comps(&g, q.triple(&g))];
        assert!(got.contains(&pairs(&[("2", "3"), ("1", "1"), ("2", "1")])));
        assert!(got.contains(&pairs(&[("2", "3"), ("1", "1"), ("1", "3")])));
    }

    #[test]
    fn canonical_labels_come_from_repeated_coordinates() {
        let g = g2();
        for c in [choice(&g, "a", "b", "2", "2"), choice(&g, "a", "b", "2", "1")] {
            for p in distinguished_points(&c) {
                let t = p.triple(&g);
                let firsts: Vec<usize> = t.iter().map(|x| x.0).collect();
                let seconds: Vec<usize> = t.iter().map(|x| x.1).collect();
                assert_eq!(firsts.iter().filter(|&&x| x == p.gamma1(&g)).count(), 2);
                assert_eq!(seconds.iter().filter(|&&x| x == p.gamma2(&g)).count(), 2);
            }
        }
    }

    fn point_with(g: &CurveGraph, c: &BlowupChoice, triple: &[(&str, &str)]) -> DistinguishedPoint {
        *distinguished_points(c).iter().find(|p| comps(g, p.triple(g)) == pairs(triple)).unwrap()
    }

    #[test]
    fn quasistable_points() {
        let g = g2();
        let tw = Twister::compute(&g).unwrap();
        let p = point_with(&g, &choice(&g, "a", "b", "2", "2"), &[("2", "2"), ("1", "1"), ("2", "1")]);
        assert!(is_quasistable_point(&g, &tw, &p, ConventionProfile::Reconstructed).unwrap().quasistable);
        let p = point_with(&g, &choice(&g, "a", "b", "2", "1"), &[("2", "1"), ("1", "2"), ("2", "2")]);
        let v = is_quasistable_point(&g, &tw, &p, ConventionProfile::Reconstructed).unwrap();
        assert!(!v.quasistable);
        let bad: Vec<_> = v.conditions.iter().filter(|c| !c.holds()).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!((g.name(bad[0].pair.0), g.name(bad[0].pair.1)), ("2", "2"));

        let g = g3();
        let tw = Twister::compute(&g).unwrap();
        let c = choice(&g, "e12", "e13", "2", "1");
        for p in distinguished_points(&c) {
            assert!(!is_quasistable_point(&g, &tw, &p, ConventionProfile::Reconstructed).unwrap().quasistable);
        }
    }

    #[test]
    fn choices_from_tails() {
        let g = g2();
        let (a, b) = (g.node_index("a").unwrap(), g.node_index("b").unwrap());
        assert_eq!(choice_from_tails(&g, a, b).unwrap(), Some(choice(&g, "a", "b", "2", "2")));
        let g = g3();
        let id = |n| g.node_index(n).unwrap();
        assert_eq!(choice_from_tails(&g, id("e12"), id("f")).unwrap(), Some(choice(&g, "e12", "f", "2", "2")));
        assert_eq!(choice_from_tails(&g, id("f"), id("g")).unwrap(), Some(choice(&g, "f", "g", "2", "2")));
        assert_eq!(choice(&g, "f", "g", "2", "2"), choice(&g, "f", "g", "3", "3"));
        assert!(choice_from_tails(&g, id("f"), id("f")).is_err());
    }

    #[test]
    fn admissibility_on_g2_and_g4() {
        let g = g2();
        let tw = Twister::compute(&g).unwrap();
        let c = choice(&g, "a", "b", "2", "2");
        let r = admissibility_check(&g, &tw, c.r1, c.r2, Some(&c), Gate::Intersecting).unwrap();
        assert!(r.violations().is_empty());
        let vary = r.checks.iter().find(|k| k.ineq == Inequality::VarySecondAtFirst && k.alpha.0 == 1 && k.beta.0 == 1).unwrap();
        assert_eq!(vary.value.abs(), 1);
        let swap = r.checks.iter().find(|k| k.ineq == Inequality::SwapFirstAtFirst && k.alpha.0 == 1 && k.beta.0 == 1).unwrap();
        assert_eq!(swap.value, 0);

        let g = g4();
        let tw = Twister::compute(&g).unwrap();
        let r = admissibility_check(&g, &tw, 0, 0, None, Gate::Intersecting).unwrap();
        let diag: Vec<_> = r.checks.iter().filter(|k| k.ineq == Inequality::Diagonal).collect();
        assert_eq!(diag.len(), 2);
        assert!(diag.iter().all(|k| k.value == 0));
    }

    #[test]
    fn resolution_on_g3() {
        let g = g3();
        let tw = Twister::compute(&g).unwrap();
        let prof = ConventionProfile::Reconstructed;
        let phi_t = plan_from_tails(&g).unwrap();
        assert_eq!(phi_t.len(), 6);
        assert!(decide_resolution(&g, &tw, &phi_t, prof).unwrap().resolved);
        let r = decide_resolution(&g, &tw, &BlowupPlan::default(), prof).unwrap();
        assert!(!r.resolved);
        let id = |n| g.node_index(n).unwrap();
        assert_eq!(r.failing_pairs(), vec![(id("e12"), id("e13"))]);
        let mut phi_s = BlowupPlan::default();
        phi_s.insert(choice(&g, "e12", "e13", "2", "3"));
        assert!(decide_resolution(&g, &tw, &phi_s, prof).unwrap().resolved);

        let m = minimality_probe(&g, &tw, prof).unwrap();
        assert_eq!(m.forced(), vec![choice(&g, "e12", "e13", "2", "3")]);
        assert_eq!(m.minimal_plan, Some(phi_s));
        assert!(!m.from_tails_is_minimal);
    }

    #[test]
    fn minimality_on_g2_and_g4() {
        let g = g2();
        let tw = Twister::compute(&g).unwrap();
        let m = minimality_probe(&g, &tw, ConventionProfile::Reconstructed).unwrap();
        assert_eq!(m.forced(), vec![choice(&g, "a", "b", "2", "2")]);
        assert!(m.from_tails_is_minimal);
        let g = g4();
        let tw = Twister::compute(&g).unwrap();
        assert!(minimality_probe(&g, &tw, ConventionProfile::Reconstructed).unwrap().classes.is_empty());
    }

    #[test]
    fn as_displayed_profile_breaks_g2() {
        let g = g2();
        let tw = Twister::compute(&g).unwrap();
        let plan = plan_from_tails(&g).unwrap();
        let r = decide_resolution(&g, &tw, &plan, ConventionProfile::AsDisplayed).unwrap();
        assert!(!r.resolved);
        let (_, v) = &r.pairs[0].failures[0];
        assert_eq!((g.name(v.point.gamma1(&g)), g.name(v.point.gamma2(&g))), ("2", "1"));
        let bad = v.conditions.iter().find(|c| !c.holds()).unwrap();
        assert_eq!((g.name(bad.pair.0), g.name(bad.pair.1)), ("2", "2"));
    }

    #[test]
    fn plan_json_round_trip() {
        let g = g3();
        let plan = plan_from_tails(&g).unwrap();
        let back = BlowupPlan::from_json(&g, &plan.to_json(&g)).unwrap();
        assert_eq!(back, plan);
        let v: Value = serde_json::from_str(r#"[{"pair":["e13","e12"],"match":[["3","2"],["1","1"]]}]"#).unwrap();
        let p = BlowupPlan::from_json(&g, &v).unwrap();
        assert_eq!(p.get(0, 1), Some(&choice(&g, "e12", "e13", "2", "3")));
        let bad: Value = serde_json::from_str(r#"[{"pair":["e12","e13"],"match":[["2","3"],["1","3"]]}]"#).unwrap();
        assert!(BlowupPlan::from_json(&g, &bad).is_err());
    }
}
