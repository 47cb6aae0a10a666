//! Dual graphs of nodal curves and the combinatorics of their subcurves.
//!
//! Components are vertices, nodes are edges (loops allowed) and one component
//! is marked. A subcurve is a set of components, stored as a bitmask.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, GraphError, Result};

/// Largest number of components a graph may have.
pub const MAX_VERTICES: usize = 128;

/// A set of components, bit `i` standing for component `i`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subcurve(pub u128);

impl Subcurve {
    pub const EMPTY: Subcurve = Subcurve(0);

    pub fn singleton(i: usize) -> Self {
        Subcurve(1u128 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        Subcurve(it.into_iter().fold(0u128, |m, i| m | (1u128 << i)))
    }

    /// The set of all `n` components.
    pub fn full(n: usize) -> Self {
        if n >= 128 {
            Subcurve(u128::MAX)
        } else {
            Subcurve((1u128 << n) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn with(self, i: usize) -> Self {
        Subcurve(self.0 | (1u128 << i))
    }

    pub fn union(self, o: Subcurve) -> Self {
        Subcurve(self.0 | o.0)
    }

    /// The wedge: largest subcurve contained in both.
    pub fn wedge(self, o: Subcurve) -> Self {
        Subcurve(self.0 & o.0)
    }

    pub fn minus(self, o: Subcurve) -> Self {
        Subcurve(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Subcurve) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_proper_subset(self, o: Subcurve) -> bool {
        self.is_subset(o) && self != o
    }

    pub fn complement(self, n: usize) -> Self {
        Subcurve(!self.0 & Subcurve::full(n).0)
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    /// Order used for listing: by cardinality, then lexicographically on
    /// the sorted component indices.
    pub fn listing_key(self) -> (usize, Vec<usize>) {
        (self.len(), self.indices().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub ends: [usize; 2],
}

impl Node {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    /// The endpoint opposite to slot `side`.
    pub fn other(&self, side: usize) -> usize {
        self.ends[1 - side]
    }

    /// Slot of component `c` on this node, if it is an endpoint.
    pub fn side_of(&self, c: usize) -> Option<usize> {
        self.ends.iter().position(|&e| e == c)
    }
}

/// A tail together with its terminal nodes (sorted node indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tail {
    pub set: Subcurve,
    pub term: Vec<usize>,
}

/// Outcome of comparing two subcurves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// Strictly contained with disjoint terminal sets.
    Precedes,
    /// Terminal sets meet.
    Terminal,
    /// Terminal sets are disjoint but the first does not precede the second.
    FreeNotPrecedes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRelation {
    pub relation: Relation,
    pub perfect: bool,
}

impl PairRelation {
    pub fn is_terminal(&self) -> bool {
        self.relation == Relation::Terminal
    }

    pub fn is_free(&self) -> bool {
        !self.is_terminal()
    }
}

/// A component entry in graph JSON: a bare name or an object with a name
/// and an ignored genus.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComponentSpec {
    Name(String),
    Labeled {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        genus: Option<u32>,
    },
}

impl ComponentSpec {
    pub fn name(&self) -> &str {
        match self {
            ComponentSpec::Name(n) => n,
            ComponentSpec::Labeled { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeSpec {
    pub id: String,
    pub ends: [String; 2],
}

/// Graph JSON as read from and written to disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphSpec {
    pub components: Vec<ComponentSpec>,
    pub marked: String,
    pub nodes: Vec<NodeSpec>,
}

#[derive(Debug)]
pub struct CurveGraph {
    names: Vec<String>,
    nodes: Vec<Node>,
    marked: usize,
    nbr: Vec<u128>,
    incident: Vec<Vec<(usize, usize)>>,
    small_tails: [OnceLock<Arc<Vec<Tail>>>; 3],
}

impl Clone for CurveGraph {
    fn clone(&self) -> Self {
        CurveGraph {
            names: self.names.clone(),
            nodes: self.nodes.clone(),
            marked: self.marked,
            nbr: self.nbr.clone(),
            incident: self.incident.clone(),
            small_tails: self.small_tails.clone(),
        }
    }
}

impl PartialEq for CurveGraph {
    fn eq(&self, o: &Self) -> bool {
        self.names == o.names && self.nodes == o.nodes && self.marked == o.marked
    }
}

impl Eq for CurveGraph {}

impl CurveGraph {
    /// Builds and validates a graph from component names, nodes given as
    /// `(id, end, end)` index triples, and the marked component index.
    pub fn new(
        names: Vec<String>,
        nodes: Vec<(String, usize, usize)>,
        marked: usize,
    ) -> Result<Self, GraphError> {
        let p = names.len();
        if p == 0 {
            return Err(GraphError::NoComponents);
        }
        if p > MAX_VERTICES {
            return Err(GraphError::TooLarge(p));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(GraphError::DuplicateComponent(n.clone()));
            }
        }
        if marked >= p {
            return Err(GraphError::UnknownMarked(marked.to_string()));
        }
        let mut ids = HashSet::new();
        let mut out = Vec::with_capacity(nodes.len());
        for (id, a, b) in nodes {
            if !ids.insert(id.clone()) {
                return Err(GraphError::DuplicateNode(id));
            }
            for c in [a, b] {
                if c >= p {
                    return Err(GraphError::UnknownComponent {
                        node: id.clone(),
                        component: c.to_string(),
                    });
                }
            }
            out.push(Node { id, ends: [a, b] });
        }
        let mut nbr = vec![0u128; p];
        let mut incident = vec![Vec::new(); p];
        for (e, n) in out.iter().enumerate() {
            let [a, b] = n.ends;
            if a != b {
                nbr[a] |= 1u128 << b;
                nbr[b] |= 1u128 << a;
                incident[a].push((e, b));
                incident[b].push((e, a));
            }
        }
        let g = CurveGraph {
            names,
            nodes: out,
            marked,
            nbr,
            incident,
            small_tails: Default::default(),
        };
        let full = g.full();
        let reach = g.reach(Subcurve::singleton(marked), full);
        if reach != full {
            let missing = full.minus(reach).indices().map(|i| g.names[i].clone()).collect();
            return Err(GraphError::Disconnected(missing));
        }
        Ok(g)
    }

    pub fn from_spec(spec: &GraphSpec) -> Result<Self, GraphError> {
        let names: Vec<String> = spec.components.iter().map(|c| c.name().to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(GraphError::DuplicateComponent(n.clone()));
            }
        }
        if names.is_empty() {
            return Err(GraphError::NoComponents);
        }
        let marked = *index
            .get(&spec.marked)
            .ok_or_else(|| GraphError::UnknownMarked(spec.marked.clone()))?;
        let mut nodes = Vec::with_capacity(spec.nodes.len());
        for n in &spec.nodes {
            let mut ends = [0usize; 2];
            for (slot, c) in n.ends.iter().enumerate() {
                ends[slot] = *index.get(c).ok_or_else(|| GraphError::UnknownComponent {
                    node: n.id.clone(),
                    component: c.clone(),
                })?;
            }
            nodes.push((n.id.clone(), ends[0], ends[1]));
        }
        CurveGraph::new(names, nodes, marked)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: GraphSpec = serde_json::from_str(text)?;
        Ok(CurveGraph::from_spec(&spec)?)
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            components: self.names.iter().cloned().map(ComponentSpec::Name).collect(),
            marked: self.names[self.marked].clone(),
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeSpec {
                    id: n.id.clone(),
                    ends: [self.names[n.ends[0]].clone(), self.names[n.ends[1]].clone()],
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("graph spec serializes")
    }

    pub fn n_components(&self) -> usize {
        self.names.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn marked(&self) -> usize {
        self.marked
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, e: usize) -> &Node {
        &self.nodes[e]
    }

    pub fn component_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| invalid(format!("unknown component `{name}`")))
    }

    pub fn node_index(&self, id: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n.id == id)
            .ok_or_else(|| invalid(format!("unknown node `{id}`")))
    }

    pub fn subcurve(&self, names: &[&str]) -> Result<Subcurve> {
        let mut s = Subcurve::EMPTY;
        for n in names {
            s = s.with(self.component_index(n)?);
        }
        Ok(s)
    }

    pub fn component_names(&self, z: Subcurve) -> Vec<String> {
        z.indices().map(|i| self.names[i].clone()).collect()
    }

    pub fn node_ids(&self, edges: &[usize]) -> Vec<String> {
        edges.iter().map(|&e| self.nodes[e].id.clone()).collect()
    }

    pub fn full(&self) -> Subcurve {
        Subcurve::full(self.n_components())
    }

    pub fn complement(&self, z: Subcurve) -> Subcurve {
        z.complement(self.n_components())
    }

    /// Components reachable from `start` without leaving `within`.
    fn reach(&self, start: Subcurve, within: Subcurve) -> Subcurve {
        let mut seen = start.wedge(within);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = 0u128;
            for v in frontier.indices() {
                next |= self.nbr[v];
            }
            let next = Subcurve(next).wedge(within).minus(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }

    pub fn is_connected(&self, z: Subcurve) -> bool {
        match z.first() {
            None => false,
            Some(v) => self.reach(Subcurve::singleton(v), z) == z,
        }
    }

    /// Nodes with exactly one endpoint on `z`; loops never qualify.
    pub fn term(&self, z: Subcurve) -> Vec<usize> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| z.contains(n.ends[0]) != z.contains(n.ends[1]))
            .map(|(e, _)| e)
            .collect()
    }

    pub fn k(&self, z: Subcurve) -> usize {
        self.nodes
            .iter()
            .filter(|n| z.contains(n.ends[0]) != z.contains(n.ends[1]))
            .count()
    }

    pub fn is_tail(&self, z: Subcurve) -> bool {
        !z.is_empty()
            && z.is_proper_subset(self.full())
            && self.is_connected(z)
            && self.is_connected(self.complement(z))
    }

    /// Both endpoints of `e` lie on `z`. Loops never cross.
    pub fn crosses(&self, z: Subcurve, e: usize) -> bool {
        let n = &self.nodes[e];
        !n.is_loop() && z.contains(n.ends[0]) && z.contains(n.ends[1])
    }

    /// Whether `e` has exactly one endpoint on `z`.
    pub fn is_terminal_node(&self, z: Subcurve, e: usize) -> bool {
        let [a, b] = self.nodes[e].ends;
        z.contains(a) != z.contains(b)
    }

    /// Whether node `e` lies on `z`, i.e. has an endpoint there.
    pub fn lies_on(&self, z: Subcurve, e: usize) -> bool {
        let n = &self.nodes[e];
        z.contains(n.ends[0]) || z.contains(n.ends[1])
    }

    /// Nodes joining two distinct components.
    pub fn reducible_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&e| !self.nodes[e].is_loop()).collect()
    }

    /// Nodes joining components `m` and `n` (`m != n`).
    pub fn nodes_between(&self, m: usize, n: usize) -> Vec<usize> {
        if m == n {
            return Vec::new();
        }
        self.incident[m]
            .iter()
            .filter(|&&(_, o)| o == n)
            .map(|&(e, _)| e)
            .collect()
    }

    pub fn adjacent(&self, m: usize, n: usize) -> bool {
        m != n && self.nbr[m] >> n & 1 == 1
    }

    pub fn relate(&self, z: Subcurve, z2: Subcurve) -> PairRelation {
        let t1 = self.term(z);
        let t2 = self.term(z2);
        let meet = t1.iter().any(|e| t2.contains(e));
        let relation = if meet {
            Relation::Terminal
        } else if z.is_proper_subset(z2) {
            Relation::Precedes
        } else {
            Relation::FreeNotPrecedes
        };
        let zc = self.complement(z);
        let perfect = z.is_subset(z2) || z2.is_subset(z) || zc.is_subset(z2) || z2.is_subset(zc);
        PairRelation { relation, perfect }
    }

    pub fn precedes(&self, z: Subcurve, z2: Subcurve) -> bool {
        self.relate(z, z2).relation == Relation::Precedes
    }

    /// Tails, optionally restricted to `k_Z = k`, ordered by cardinality and
    /// then lexicographically on component indices.
    pub fn enumerate_tails(&self, k: Option<usize>) -> Vec<Subcurve> {
        self.tails_with_terms(k).iter().map(|t| t.set).collect()
    }

    pub fn tails_with_terms(&self, k: Option<usize>) -> Arc<Vec<Tail>> {
        match k {
            Some(k @ 1..=3) => self.small_tails[k - 1]
                .get_or_init(|| Arc::new(self.compute_tails(Some(k))))
                .clone(),
            _ => Arc::new(self.compute_tails(k)),
        }
    }

    fn compute_tails(&self, k: Option<usize>) -> Vec<Tail> {
        let p = self.n_components();
        let cuts_cheaper = match k {
            None => false,
            Some(k) => {
                let e = self.reducible_nodes().len();
                p > 20 || binomial(e, k) <= 1u128 << p.min(100)
            }
        };
        let mut out = if cuts_cheaper {
            self.tails_by_cuts(k.unwrap())
        } else {
            self.tails_by_subsets(k)
        };
        out.sort_by_key(|t| t.set.listing_key());
        out
    }

    /// Exhaustive scan of all proper nonempty subcurves.
    pub fn tails_by_subsets(&self, k: Option<usize>) -> Vec<Tail> {
        let p = self.n_components();
        assert!(p <= 30, "subset scan needs at most 30 components, got {p}");
        let mut out = Vec::new();
        for m in 1u128..(1u128 << p) - 1 {
            let z = Subcurve(m);
            if !self.is_tail(z) {
                continue;
            }
            let term = self.term(z);
            if k.is_none_or(|k| term.len() == k) {
                out.push(Tail { set: z, term });
            }
        }
        out
    }

    /// Tails with `k_Z = k` found as bonds: `k`-sets of nodes whose removal
    /// splits the graph into exactly two connected pieces across them.
    pub fn tails_by_cuts(&self, k: usize) -> Vec<Tail> {
        let red = self.reducible_nodes();
        let full = self.full();
        let mut out = Vec::new();
        if k == 0 || k > red.len() {
            return out;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let cut: Vec<usize> = idx.iter().map(|&i| red[i]).collect();
            let side = self.reach_avoiding(0, &cut);
            if side != full {
                let other = full.minus(side);
                let o0 = other.first().unwrap();
                let crosses_all = cut.iter().all(|&e| {
                    let [a, b] = self.nodes[e].ends;
                    side.contains(a) != side.contains(b)
                });
                if crosses_all && self.reach_avoiding(o0, &cut) == other {
                    out.push(Tail { set: side, term: cut.clone() });
                    out.push(Tail { set: other, term: cut });
                }
            }
            // next combination
            let mut i = k;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] < red.len() - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn reach_avoiding(&self, start: usize, removed: &[usize]) -> Subcurve {
        let mut seen = Subcurve::singleton(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(e, w) in &self.incident[v] {
                if !seen.contains(w) && !removed.contains(&e) {
                    seen = seen.with(w);
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Graphviz rendering: marked component double-circled, edges labeled by
    /// node id.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for (i, n) in self.names.iter().enumerate() {
            let shape = if i == self.marked { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  \"{}\" [shape={shape}];", escape(n));
        }
        for n in &self.nodes {
            let _ = writeln!(
                s,
                "  \"{}\" -- \"{}\" [label=\"{}\"];",
                escape(&self.names[n.ends[0]]),
                escape(&self.names[n.ends[1]]),
                escape(&n.id)
            );
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// Small graphs used throughout the tests and documentation.
pub mod fixtures {
    use super::CurveGraph;

    fn build(names: &[&str], nodes: &[(&str, usize, usize)], marked: usize) -> CurveGraph {
        CurveGraph::new(
            names.iter().map(|s| s.to_string()).collect(),
            nodes.iter().map(|&(id, a, b)| (id.to_string(), a, b)).collect(),
            marked,
        )
        .expect("fixture is valid")
    }

    /// One component carrying one loop.
    pub fn g1() -> CurveGraph {
        build(&["1"], &[("l", 0, 0)], 0)
    }

    /// Two components meeting in two nodes `a` and `b`.
    pub fn g2() -> CurveGraph {
        build(&["1", "2"], &[("a", 0, 1), ("b", 0, 1)], 0)
    }

    /// Three components: `e12`, `e13` from the marked one, `f`, `g` between
    /// the other two.
    pub fn g3() -> CurveGraph {
        build(
            &["1", "2", "3"],
            &[("e12", 0, 1), ("e13", 0, 2), ("f", 1, 2), ("g", 1, 2)],
            0,
        )
    }

    /// Two components meeting in a single node `e`.
    pub fn g4() -> CurveGraph {
        build(&["1", "2"], &[("e", 0, 1)], 0)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn sc(g: &CurveGraph, names: &[&str]) -> Subcurve {
        g.subcurve(names).unwrap()
    }

    #[test]
    fn term_sets_on_g3() {
        let g = g3();
        assert_eq!(g.node_ids(&g.term(sc(&g, &["2", "3"]))), ["e12", "e13"]);
        assert_eq!(g.k(sc(&g, &["2", "3"])), 2);
        assert_eq!(g.node_ids(&g.term(sc(&g, &["2"]))), ["e12", "f", "g"]);
        assert!(g.term(Subcurve::EMPTY).is_empty());
        assert!(g.term(g.full()).is_empty());
    }

    #[test]
    fn tail_listing_order() {
        let g = g3();
        let names = |k| -> Vec<Vec<String>> {
            g.enumerate_tails(Some(k)).into_iter().map(|z| g.component_names(z)).collect()
        };
        assert_eq!(names(2), vec![vec!["1"], vec!["2", "3"]]);
        assert_eq!(names(3), vec![vec!["2"], vec!["3"], vec!["1", "2"], vec!["1", "3"]]);
        assert!(g2().enumerate_tails(Some(1)).is_empty());
    }

    #[test]
    fn relations_on_g3() {
        let g = g3();
        let r = g.relate(sc(&g, &["2"]), sc(&g, &["2", "3"]));
        assert_eq!(r.relation, Relation::Terminal);
        assert!(r.perfect);
        let r = g.relate(sc(&g, &["1"]), sc(&g, &["2", "3"]));
        assert_eq!(r.relation, Relation::Terminal);
        assert!(r.perfect);
    }

    #[test]
    fn wedge_crosses_reducible() {
        let g = g3();
        assert_eq!(sc(&g, &["1", "2"]).wedge(sc(&g, &["2", "3"])), sc(&g, &["2"]));
        let f = g.node_index("f").unwrap();
        assert!(g.crosses(sc(&g, &["2", "3"]), f));
        assert!(!g.crosses(sc(&g, &["2"]), f));
        let g = g2();
        assert_eq!(g.node_ids(&g.reducible_nodes()), ["a", "b"]);
        assert!(g1().reducible_nodes().is_empty());
    }

    #[test]
    fn rejects_bad_graphs() {
        let bad = |s: &str| CurveGraph::from_json(s).unwrap_err().to_string();
        assert!(bad(r#"{"components":[],"marked":"x","nodes":[]}"#).contains("no components"));
        assert!(bad(r#"{"components":["A","A"],"marked":"A","nodes":[]}"#).contains("duplicate"));
        assert!(bad(r#"{"components":["A","B"],"marked":"A","nodes":[]}"#).contains("disconnected"));
        assert!(bad(r#"{"components":["A"],"marked":"Z","nodes":[]}"#).contains("marked"));
        assert!(
            bad(r#"{"components":["A"],"marked":"A","nodes":[{"id":"x","ends":["A","Q"]}]}"#)
                .contains("unknown component")
        );
        assert!(bad(
            r#"{"components":["A","B"],"marked":"A","nodes":[{"id":"x","ends":["A","B"]},{"id":"x","ends":["A","B"]}]}"#
        )
        .contains("duplicate node"));
    }

    #[test]
    fn genus_labels_are_ignored() {
        let g = CurveGraph::from_json(
            r#"{"components":[{"name":"C1","genus":2},"C2"],"marked":"C1",
                "nodes":[{"id":"a","ends":["C1","C2"]}]}"#,
        )
        .unwrap();
        assert_eq!(g.names(), ["C1", "C2"]);
        let back = CurveGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn dot_marks_the_marked_component() {
        let d = g4().to_dot();
        assert!(d.contains("\"1\" [shape=doublecircle]"));
        assert!(d.contains("\"1\" -- \"2\" [label=\"e\"]"));
    }
}
