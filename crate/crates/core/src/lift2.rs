//! The dual graph of the curve with every node replaced by a chain of two
//! exceptional components, its canonical liftings of tails, and the tail
//! families anchored at a distinguished point.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::blowup::{family, DistinguishedPoint};
use crate::error::{invalid, invariant, Result};
use crate::graph::{escape, CurveGraph, Subcurve};
use crate::jacobian::Twister;
use crate::tails::nested;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexOrigin {
    /// Strict transform of a component.
    Strict(usize),
    /// Exceptional component on node `node`, next to its end in `slot`.
    Exceptional { node: usize, slot: usize },
}

/// Base node `S = (u, v)` becomes the chain `Ĉu-E_{S,u}-E_{S,v}-Ĉv`.
#[derive(Clone, Debug)]
pub struct LiftedGraph {
    pub graph: CurveGraph,
    pub origin: Vec<VertexOrigin>,
    base_components: usize,
    /// Lifted edges over each base node, from the slot-0 end to the slot-1 end.
    pub chain: Vec<[usize; 3]>,
    /// Base node under each lifted edge.
    pub over: Vec<usize>,
}

impl LiftedGraph {
    pub fn strict(&self, m: usize) -> usize {
        m
    }

    pub fn exceptional(&self, node: usize, slot: usize) -> usize {
        self.base_components + 2 * node + slot
    }

    /// `μ(Y)`: components whose strict transform lies on `Y`.
    pub fn mu_image(&self, y: Subcurve) -> Subcurve {
        y.wedge(Subcurve::full(self.base_components))
    }

    /// `Y` is nonempty and made of exceptional components only.
    pub fn is_pure(&self, y: Subcurve) -> bool {
        !y.is_empty() && self.mu_image(y).is_empty()
    }

    pub fn to_dot(&self) -> String {
        let g = &self.graph;
        let mut s = String::from("graph G {\n");
        for (i, o) in self.origin.iter().enumerate() {
            let shape = match o {
                VertexOrigin::Strict(_) if i == g.marked() => "doublecircle",
                VertexOrigin::Strict(_) => "circle",
                VertexOrigin::Exceptional { .. } => "square, width=0.2, height=0.2, fixedsize=true",
            };
            let _ = writeln!(s, "  \"{}\" [shape={shape}];", escape(g.name(i)));
        }
        for n in g.nodes() {
            let _ = writeln!(
                s,
                "  \"{}\" -- \"{}\" [label=\"{}\"];",
                escape(g.name(n.ends[0])),
                escape(g.name(n.ends[1])),
                escape(&n.id)
            );
        }
        s.push_str("}\n");
        s
    }
}

fn strict_name(base: &CurveGraph, m: usize) -> String {
    format!("^{}", base.name(m))
}

fn exceptional_name(base: &CurveGraph, node: usize, slot: usize) -> String {
    let n = base.node(node);
    if n.is_loop() {
        format!("E({},{})", n.id, slot + 1)
    } else {
        format!("E({},{})", n.id, base.name(n.ends[slot]))
    }
}

/// Builds the lifted graph: `p + 2e` vertices and `3e` edges, marked at the
/// strict transform of the marked component.
pub fn build_c2(g: &CurveGraph) -> Result<LiftedGraph> {
    let p = g.n_components();
    let mut names: Vec<String> = (0..p).map(|m| strict_name(g, m)).collect();
    let mut origin: Vec<VertexOrigin> = (0..p).map(VertexOrigin::Strict).collect();
    for e in 0..g.n_nodes() {
        for slot in 0..2 {
            names.push(exceptional_name(g, e, slot));
            origin.push(VertexOrigin::Exceptional { node: e, slot });
        }
    }
    let mut edges = Vec::with_capacity(3 * g.n_nodes());
    let mut chain = Vec::with_capacity(g.n_nodes());
    let mut over = Vec::with_capacity(3 * g.n_nodes());
    for (e, n) in g.nodes().iter().enumerate() {
        let [u, v] = n.ends;
        let (eu, ev) = (p + 2 * e, p + 2 * e + 1);
        let base = edges.len();
        edges.push((format!("{}.0", n.id), u, eu));
        edges.push((format!("{}.1", n.id), eu, ev));
        edges.push((format!("{}.2", n.id), ev, v));
        chain.push([base, base + 1, base + 2]);
        over.extend([e, e, e]);
    }
    let graph = CurveGraph::new(names, edges, g.marked())?;
    Ok(LiftedGraph { graph, origin, base_components: p, chain, over })
}

/// The three liftings `L_0 ≺ L_1 ≺ L_2` of a tail `w` of the base graph:
/// `L_0` holds the strict transforms of `w` and both exceptional components
/// of every node with both ends on `w`; `L_1` adds the exceptional component
/// next to `w` on each terminal node; `L_2` adds the other one too.
pub fn canonical_liftings(base: &CurveGraph, lg: &LiftedGraph, w: Subcurve) -> Result<[Subcurve; 3]> {
    if w.is_empty() || !w.is_proper_subset(base.full()) {
        return Err(invalid("liftings are taken of proper nonempty subcurves"));
    }
    let mut l0 = Subcurve::from_indices(w.indices().map(|m| lg.strict(m)));
    let mut near = Subcurve::EMPTY;
    let mut far = Subcurve::EMPTY;
    for (e, n) in base.nodes().iter().enumerate() {
        let [u, v] = n.ends;
        match (w.contains(u), w.contains(v)) {
            (true, true) => l0 = l0.with(lg.exceptional(e, 0)).with(lg.exceptional(e, 1)),
            (true, false) => {
                near = near.with(lg.exceptional(e, 0));
                far = far.with(lg.exceptional(e, 1));
            }
            (false, true) => {
                near = near.with(lg.exceptional(e, 1));
                far = far.with(lg.exceptional(e, 0));
            }
            (false, false) => {}
        }
    }
    let l1 = l0.union(near);
    let l2 = l1.union(far);
    let h = &lg.graph;
    for (a, b) in [(l0, l1), (l1, l2)] {
        if !h.precedes(a, b) {
            return Err(invariant("canonical liftings are not a chain"));
        }
    }
    for l in [l0, l1, l2] {
        if lg.mu_image(l) != w {
            return Err(invariant("a canonical lifting does not map onto its tail"));
        }
    }
    Ok([l0, l1, l2])
}

/// Nested families of the lifted graph anchored at the exceptional
/// components `E_{R1,γ1}` and `E_{R2,γ2}` of a distinguished point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatFamilies {
    pub t1: [Vec<Subcurve>; 2],
    pub t2: Vec<Subcurve>,
    pub t3: Vec<Subcurve>,
}

impl HatFamilies {
    pub fn level(&self, s: usize) -> Vec<Subcurve> {
        match s {
            1 => self.t1[0].iter().chain(&self.t1[1]).copied().collect(),
            2 => self.t2.clone(),
            3 => self.t3.clone(),
            _ => Vec::new(),
        }
    }
}

pub fn anchors(lg: &LiftedGraph, pt: &DistinguishedPoint) -> (usize, usize) {
    (lg.exceptional(pt.r1, pt.s1), lg.exceptional(pt.r2, pt.s2))
}

pub fn hat_families(lg: &LiftedGraph, pt: &DistinguishedPoint) -> Result<HatFamilies> {
    let h = &lg.graph;
    let (e1, e2) = anchors(lg, pt);
    let both = Subcurve::singleton(e1).with(e2);
    Ok(HatFamilies {
        t1: [nested(h, 1, Subcurve::singleton(e1))?, nested(h, 1, Subcurve::singleton(e2))?],
        t2: nested(h, 2, both)?,
        t3: nested(h, 3, both)?,
    })
}

/// `T^s_A`: the level-`s` families of `(γ1,γ2)`, `(γ1,γ2')`, `(γ1',γ2)`
/// put together.
pub fn point_family(g: &CurveGraph, tw: &Twister, pt: &DistinguishedPoint, s: usize) -> Result<Vec<Subcurve>> {
    let mut out = Vec::new();
    for (a, b) in pt.triple(g) {
        let fam = family(tw, a, b)?;
        out.extend(fam.level(s).iter().map(|t| t.set));
    }
    Ok(out)
}

/// The level-1 family read off the displayed union of single-anchor
/// families at `γ1, γ2, γ1', γ2', γ1', γ2'`. Kept for comparison only.
fn displayed_level1(g: &CurveGraph, pt: &DistinguishedPoint) -> Result<Vec<Subcurve>> {
    let mut out = Vec::new();
    for c in [pt.gamma1(g), pt.gamma2(g), pt.gamma1p(g), pt.gamma2p(g), pt.gamma1p(g), pt.gamma2p(g)] {
        out.extend(nested(g, 1, Subcurve::singleton(c))?);
    }
    Ok(out)
}

fn sorted(mut v: Vec<Subcurve>) -> Vec<Subcurve> {
    v.sort();
    v
}

/// Outcome of comparing the lifted families of a point with `T^s_A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncReport {
    pub point: DistinguishedPoint,
    pub hat: HatFamilies,
    /// Images `μ(Y)` per level 1..=3 (index 0 is level 1).
    pub images: [Vec<Subcurve>; 3],
    pub expected: [Vec<Subcurve>; 3],
    /// Multiset equality of images and expected members, levels 1..=3.
    pub matches: [bool; 3],
    /// Some lifted member at level 2 or 3 consists of exceptional components.
    pub pure: bool,
    /// Size of the displayed level-1 union, for comparison with `images[0]`.
    pub displayed_level1_len: usize,
}

impl SyncReport {
    /// Synchronization at level `s`. Level 1 always holds; its multiset
    /// comparison is kept in `matches[0]` as a diagnostic.
    pub fn synchronized_at(&self, s: usize) -> bool {
        match s {
            1 => true,
            2 | 3 => self.matches[s - 1] && !self.pure,
            _ => false,
        }
    }

    pub fn synchronized(&self) -> bool {
        self.synchronized_at(2) && self.synchronized_at(3)
    }

    pub fn level1_diagnostic(&self) -> bool {
        self.matches[0]
    }

    pub fn to_json(&self, g: &CurveGraph, lg: &LiftedGraph) -> Value {
        let base = |v: &[Subcurve]| v.iter().map(|z| g.component_names(*z)).collect::<Vec<_>>();
        let lifted = |v: &[Subcurve]| v.iter().map(|z| lg.graph.component_names(*z)).collect::<Vec<_>>();
        let mut levels = Vec::new();
        for s in 1..=3 {
            levels.push(json!({
                "s": s,
                "synchronized": self.synchronized_at(s),
                "multiset_match": self.matches[s - 1],
                "lifted": lifted(&self.hat.level(s)),
                "images": base(&self.images[s - 1]),
                "expected": base(&self.expected[s - 1]),
            }));
        }
        json!({
            "point": self.point.to_json(g),
            "synchronized": self.synchronized(),
            "pure_member": self.pure,
            "levels": levels,
            "level1_displayed_len": self.displayed_level1_len,
        })
    }
}

pub fn is_synchronized(g: &CurveGraph, lg: &LiftedGraph, tw: &Twister, pt: &DistinguishedPoint) -> Result<SyncReport> {
    let hat = hat_families(lg, pt)?;
    let mut images: [Vec<Subcurve>; 3] = Default::default();
    let mut expected: [Vec<Subcurve>; 3] = Default::default();
    let mut matches = [false; 3];
    let mut pure = false;
    for s in 1..=3 {
        let lifted = hat.level(s);
        if s > 1 && lifted.iter().any(|y| lg.is_pure(*y)) {
            pure = true;
        }
        images[s - 1] = lifted.iter().map(|y| lg.mu_image(*y)).collect();
        expected[s - 1] = point_family(g, tw, pt, s)?;
        matches[s - 1] = sorted(images[s - 1].clone()) == sorted(expected[s - 1].clone());
    }
    Ok(SyncReport {
        point: *pt,
        hat,
        images,
        expected,
        matches,
        pure,
        displayed_level1_len: displayed_level1(g, pt)?.len(),
    })
}

/// Per base node `S`: the number of level-2 members of `T_A` with `S`
/// terminal, and the sum over the three lifted edges over `S` of the number
/// of lifted level-2 members having that edge terminal.
pub fn level2_node_counts(
    g: &CurveGraph,
    lg: &LiftedGraph,
    report: &SyncReport,
) -> BTreeMap<usize, (usize, usize)> {
    let h = &lg.graph;
    let mut out = BTreeMap::new();
    for s in 0..g.n_nodes() {
        let base = report.expected[1].iter().filter(|w| g.is_terminal_node(**w, s)).count();
        let lifted: usize = lg.chain[s]
            .iter()
            .map(|&e| report.hat.t2.iter().filter(|y| h.is_terminal_node(**y, e)).count())
            .sum();
        out.insert(s, (base, lifted));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{distinguished_points, BlowupChoice};
    use crate::graph::fixtures::*;

    #[test]
    fn lifted_shapes() {
        let lg = build_c2(&g4()).unwrap();
        let h = &lg.graph;
        assert_eq!((h.n_components(), h.n_nodes()), (4, 3));
        assert!(h.enumerate_tails(Some(1)).len() == 6);

        let lg = build_c2(&g2()).unwrap();
        let h = &lg.graph;
        assert_eq!((h.n_components(), h.n_nodes()), (6, 6));
        for v in 0..6 {
            assert_eq!(h.k(Subcurve::singleton(v)), 2);
        }
        assert!(h.is_connected(h.full()));

        let lg = build_c2(&g1()).unwrap();
        let h = &lg.graph;
        assert_eq!((h.n_components(), h.n_nodes()), (3, 3));
        for v in 0..3 {
            assert_eq!(h.k(Subcurve::singleton(v)), 2);
        }
        assert_eq!(h.name(1), "E(l,1)");
    }

    #[test]
    fn liftings_of_g4() {
        let g = g4();
        let lg = build_c2(&g).unwrap();
        let [l0, l1, l2] = canonical_liftings(&g, &lg, Subcurve::singleton(1)).unwrap();
        let h = &lg.graph;
        assert_eq!(h.component_names(l0), ["^2"]);
        assert_eq!(h.component_names(l1), ["^2", "E(e,2)"]);
        assert_eq!(h.component_names(l2), ["^2", "E(e,1)", "E(e,2)"]);
    }

    fn point(g: &CurveGraph, triple: &[(&str, &str)]) -> DistinguishedPoint {
        let (a, b) = (g.node_index("a").unwrap(), g.node_index("b").unwrap());
        let mut want: Vec<(String, String)> = triple.iter().map(|&(x, y)| (x.into(), y.into())).collect();
        want.sort();
        for y in 0..2 {
            for p in distinguished_points(&BlowupChoice::new(g, a, b, y).unwrap()) {
                let mut t: Vec<(String, String)> =
                    p.triple(g).iter().map(|&(x, y)| (g.name(x).into(), g.name(y).into())).collect();
                t.sort();
                if t == want {
                    return p;
                }
            }
        }
        panic!("no such point");
    }

    #[test]
    fn hat_families_on_g2() {
        let g = g2();
        let lg = build_c2(&g).unwrap();
        let tw = Twister::compute(&g).unwrap();
        let h = &lg.graph;
        let a = point(&g, &[("2", "2"), ("1", "1"), ("2", "1")]);
        let hat = hat_families(&lg, &a).unwrap();
        let t2: Vec<Vec<String>> = hat.t2.iter().map(|z| h.component_names(*z)).collect();
        assert_eq!(t2, vec![vec!["^2", "E(a,2)", "E(b,1)", "E(b,2)"]]);
        assert!(is_synchronized(&g, &lg, &tw, &a).unwrap().synchronized());

        let a2 = point(&g, &[("2", "1"), ("1", "2"), ("2", "2")]);
        let hat = hat_families(&lg, &a2).unwrap();
        assert_eq!(hat.t2.len(), 2);
        let r = is_synchronized(&g, &lg, &tw, &a2).unwrap();
        assert!(!r.synchronized_at(2));
    }

    #[test]
    fn g3_aligned_points_are_synchronized() {
        let g = g3();
        let lg = build_c2(&g).unwrap();
        let tw = Twister::compute(&g).unwrap();
        let (e12, e13) = (g.node_index("e12").unwrap(), g.node_index("e13").unwrap());
        let c = BlowupChoice::from_components(&g, e12, e13, 1, 2).unwrap();
        for p in distinguished_points(&c) {
            let r = is_synchronized(&g, &lg, &tw, &p).unwrap();
            assert!(r.synchronized());
            assert!(r.level1_diagnostic());
            for (base, lifted) in level2_node_counts(&g, &lg, &r).values() {
                assert_eq!(base, lifted);
            }
        }
    }

    #[test]
    fn purity_flag() {
        let g = g2();
        let lg = build_c2(&g).unwrap();
        assert!(lg.is_pure(Subcurve::singleton(lg.exceptional(0, 1))));
        assert!(!lg.is_pure(Subcurve::singleton(1)));
        assert!(!lg.is_pure(Subcurve::EMPTY));
    }

    #[test]
    fn lifted_dot_uses_squares() {
        let d = build_c2(&g4()).unwrap().to_dot();
        assert!(d.contains("\"^1\" [shape=doublecircle]"));
        assert!(d.contains("\"E(e,1)\" [shape=square"));
    }
}
