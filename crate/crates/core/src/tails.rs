//! Nested tail families anchored at a set of components, and the families
//! that build the twister.

use serde::Serialize;

use crate::error::{invalid, invariant, Error, Result};
use crate::graph::{CurveGraph, Subcurve, Tail};

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    !a.iter().any(|e| b.contains(e))
}

/// The chain `W_0 ≺ W_1 ≺ …` of `s`-tails containing `anchors`, avoiding the
/// marked component, each one the minimum of the candidates preceded by its
/// predecessor. For `s = 3` candidates must also be free from every member of
/// the `s = 2` family with the same anchors.
pub fn nested(g: &CurveGraph, s: usize, anchors: Subcurve) -> Result<Vec<Subcurve>> {
    Ok(nested_tails(g, s, anchors)?.into_iter().map(|t| t.set).collect())
}

pub fn nested_tails(g: &CurveGraph, s: usize, anchors: Subcurve) -> Result<Vec<Tail>> {
    if !(1..=3).contains(&s) {
        return Err(invalid(format!("nested families are defined for s in 1..=3, got {s}")));
    }
    if !anchors.is_subset(g.full()) {
        return Err(invalid("anchors outside the graph"));
    }
    if anchors.contains(g.marked()) {
        return Ok(Vec::new());
    }
    let all = g.tails_with_terms(Some(s));
    let mut cands: Vec<&Tail> = all
        .iter()
        .filter(|t| anchors.is_subset(t.set) && !t.set.contains(g.marked()))
        .collect();
    if s == 3 {
        let lower = nested_tails(g, 2, anchors)?;
        cands.retain(|t| lower.iter().all(|w| disjoint(&w.term, &t.term)));
    }
    let mut chain: Vec<Tail> = Vec::new();
    loop {
        let live: Vec<&Tail> = match chain.last() {
            None => cands.clone(),
            Some(prev) => cands
                .iter()
                .copied()
                .filter(|t| prev.set.is_proper_subset(t.set) && disjoint(&prev.term, &t.term))
                .collect(),
        };
        if live.is_empty() {
            return Ok(chain);
        }
        let meet = live.iter().fold(g.full(), |m, t| m.wedge(t.set));
        match live.iter().find(|t| t.set == meet) {
            Some(t) => chain.push((*t).clone()),
            None => {
                let minimal: Vec<Subcurve> = live
                    .iter()
                    .map(|t| t.set)
                    .filter(|z| !live.iter().any(|o| o.set.is_proper_subset(*z)))
                    .collect();
                let (a, b) = (minimal[0], minimal.get(1).copied().unwrap_or(meet));
                return Err(Error::NoMinimum {
                    first: g.component_names(a),
                    second: g.component_names(b),
                });
            }
        }
    }
}

/// `T^s` for an unordered pair of components. For `s = 1` this is the
/// disjoint union of the two single-anchor families.
pub fn pair_family(g: &CurveGraph, s: usize, a: usize, b: usize) -> Result<Vec<Subcurve>> {
    if s == 1 {
        let mut out = nested(g, 1, Subcurve::singleton(a))?;
        out.extend(nested(g, 1, Subcurve::singleton(b))?);
        Ok(out)
    } else {
        nested(g, s, Subcurve::singleton(a).with(b))
    }
}

/// The multiset of tails defining the twister of a pair of components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailFamily {
    pub a: usize,
    pub b: usize,
    pub t1a: Vec<Tail>,
    pub t1b: Vec<Tail>,
    pub t2: Vec<Tail>,
    pub t3: Vec<Tail>,
}

impl TailFamily {
    pub fn members(&self) -> impl Iterator<Item = &Tail> {
        self.t1a.iter().chain(&self.t1b).chain(&self.t2).chain(&self.t3)
    }

    pub fn sets(&self) -> Vec<Subcurve> {
        self.members().map(|t| t.set).collect()
    }

    /// Members of level `s` (level 1 counts both single-anchor families).
    pub fn level(&self, s: usize) -> Vec<&Tail> {
        match s {
            1 => self.t1a.iter().chain(&self.t1b).collect(),
            2 => self.t2.iter().collect(),
            3 => self.t3.iter().collect(),
            _ => Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.t1a.len() + self.t1b.len() + self.t2.len() + self.t3.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn tail_family(g: &CurveGraph, a: usize, b: usize) -> Result<TailFamily> {
    let p = g.n_components();
    if a >= p || b >= p {
        return Err(invalid("component index out of range"));
    }
    let pair = Subcurve::singleton(a).with(b);
    Ok(TailFamily {
        a,
        b,
        t1a: nested_tails(g, 1, Subcurve::singleton(a))?,
        t1b: nested_tails(g, 1, Subcurve::singleton(b))?,
        t2: nested_tails(g, 2, pair)?,
        t3: nested_tails(g, 3, pair)?,
    })
}

/// Number of members of `family` having some node of `nodes` as terminal.
pub fn d_count(g: &CurveGraph, family: &[Subcurve], nodes: &[usize]) -> usize {
    family
        .iter()
        .filter(|z| nodes.iter().any(|&e| g.is_terminal_node(**z, e)))
        .count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Empty,
    ConditionI,
    ConditionIi,
    /// Only produced for `s = 1`, where the trichotomy is not claimed.
    Unclassified,
}

/// Symmetric difference of the level-`s` families of `(i, k)` and `(j, k)`,
/// both taken as sets.
#[derive(Clone, Debug)]
pub struct SymmDiff {
    pub s: usize,
    /// Members in increasing order (by inclusion for `s ≥ 2`).
    pub family: Vec<Subcurve>,
    pub condition_i: bool,
    pub condition_ii: bool,
    pub classification: Classification,
    /// The member singled out by whichever condition holds.
    pub condition_tail: Option<Subcurve>,
    /// For `s = 2` and a nonempty difference: the two difference nodes,
    /// the first one chosen on `C_i ∩ C_j` when possible.
    pub difference_nodes: Option<[usize; 2]>,
    /// Whether the first difference node joins `C_i` and `C_j`.
    pub difference_node_on_ij: Option<bool>,
}

/// Members of exactly one of two duplicate-free families, in listing order.
fn symmetric_difference(a: &[Subcurve], b: &[Subcurve]) -> Vec<Subcurve> {
    let mut out: Vec<Subcurve> = a
        .iter()
        .filter(|z| !b.contains(z))
        .chain(b.iter().filter(|z| !a.contains(z)))
        .copied()
        .collect();
    out.sort_by_key(|z| z.listing_key());
    out
}

fn union_sets(a: &[Subcurve], b: &[Subcurve]) -> Vec<Subcurve> {
    let mut out: Vec<Subcurve> = a.iter().chain(b).copied().collect();
    out.sort_by_key(|z| z.listing_key());
    out.dedup();
    out
}

pub fn symm_diff(g: &CurveGraph, s: usize, i: usize, j: usize, k: usize) -> Result<SymmDiff> {
    if !(1..=3).contains(&s) {
        return Err(invalid(format!("s must be in 1..=3, got {s}")));
    }
    if i == j || !g.adjacent(i, j) {
        return Err(invalid("components i and j must be distinct and meet in a node"));
    }
    if k >= g.n_components() {
        return Err(invalid("component index out of range"));
    }
    let fi = union_sets(&pair_family(g, s, i, k)?, &[]);
    let fj = union_sets(&pair_family(g, s, j, k)?, &[]);
    let family = symmetric_difference(&fi, &fj);
    let ij = Subcurve::singleton(i).with(j);

    let union = union_sets(&fi, &fj);
    let outside: Vec<Subcurve> = union.iter().copied().filter(|z| !ij.is_subset(*z)).collect();
    let condition_i = outside.len() == 1;

    let mut condition_ii = false;
    let mut ii_tail = None;
    if s == 3 {
        let lower = symm_diff(g, 2, i, j, k)?;
        if let Some(&z) = lower.family.last() {
            let u3 = union_sets(&nested(g, 3, Subcurve::singleton(i).with(k))?, &nested(g, 3, Subcurve::singleton(j).with(k))?);
            let term: Vec<Subcurve> = u3.into_iter().filter(|w| g.relate(*w, z).is_terminal()).collect();
            if term.len() == 1 {
                condition_ii = true;
                ii_tail = Some(term[0]);
            }
        }
    }

    let classification = if family.is_empty() {
        Classification::Empty
    } else if condition_i && !condition_ii {
        Classification::ConditionI
    } else if condition_ii && !condition_i {
        Classification::ConditionIi
    } else if s == 1 {
        Classification::Unclassified
    } else {
        return Err(invariant(format!(
            "nonempty level-{s} difference for (i,j,k)=({},{},{}) with condition (i)={condition_i}, (ii)={condition_ii}",
            g.name(i),
            g.name(j),
            g.name(k)
        )));
    };
    let condition_tail = match classification {
        Classification::ConditionI => Some(outside[0]),
        Classification::ConditionIi => ii_tail,
        _ => None,
    };

    let mut difference_nodes = None;
    let mut difference_node_on_ij = None;
    if s == 2 && !family.is_empty() {
        let first = &family[0];
        let last = family.last().unwrap();
        let t0 = g.term(*first);
        let tm = g.term(*last);
        let (a, b) = if family.len() == 1 {
            if t0.len() != 2 {
                return Err(invariant("level-2 member without two terminal nodes"));
            }
            (t0[0], t0[1])
        } else {
            let t1 = g.term(family[1]);
            let tprev = g.term(family[family.len() - 2]);
            let a: Vec<usize> = t0.iter().copied().filter(|e| !t1.contains(e)).collect();
            let b: Vec<usize> = tm.iter().copied().filter(|e| !tprev.contains(e)).collect();
            if a.len() != 1 || b.len() != 1 {
                return Err(invariant("consecutive level-2 members do not share exactly one node"));
            }
            (a[0], b[0])
        };
        let on_ij = |e: usize| {
            let n = g.node(e);
            ij.contains(n.ends[0]) && ij.contains(n.ends[1]) && !n.is_loop()
        };
        let pair = if !on_ij(a) && on_ij(b) { [b, a] } else { [a, b] };
        difference_node_on_ij = Some(on_ij(pair[0]));
        difference_nodes = Some(pair);
    }

    Ok(SymmDiff {
        s,
        family,
        condition_i,
        condition_ii,
        classification,
        condition_tail,
        difference_nodes,
        difference_node_on_ij,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn names(g: &CurveGraph, f: &[Subcurve]) -> Vec<Vec<String>> {
        f.iter().map(|z| g.component_names(*z)).collect()
    }

    fn idx(g: &CurveGraph, n: &str) -> usize {
        g.component_index(n).unwrap()
    }

    #[test]
    fn nested_examples() {
        let g = g3();
        let a = g.subcurve(&["2", "3"]).unwrap();
        assert_eq!(names(&g, &nested(&g, 2, a).unwrap()), vec![vec!["2", "3"]]);
        assert!(nested(&g, 3, g.subcurve(&["2"]).unwrap()).unwrap().is_empty());
        let g = g4();
        assert_eq!(names(&g, &nested(&g, 1, g.subcurve(&["2"]).unwrap()).unwrap()), vec![vec!["2"]]);
        assert!(nested(&g, 1, g.subcurve(&["1"]).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn nested_rejects_bad_level() {
        let g = g3();
        assert!(nested(&g, 4, Subcurve::singleton(1)).is_err());
        assert!(nested(&g, 0, Subcurve::singleton(1)).is_err());
    }

    #[test]
    fn tail_family_examples() {
        let g = g3();
        assert!(tail_family(&g, 0, 1).unwrap().is_empty());
        assert_eq!(names(&g, &tail_family(&g, 1, 2).unwrap().sets()), vec![vec!["2", "3"]]);
        assert_eq!(names(&g, &tail_family(&g, 1, 1).unwrap().sets()), vec![vec!["2", "3"]]);
        let g = g4();
        assert_eq!(names(&g, &tail_family(&g, 1, 1).unwrap().sets()), vec![vec!["2"], vec!["2"]]);
        let g = g2();
        assert_eq!(names(&g, &tail_family(&g, 1, 1).unwrap().sets()), vec![vec!["2"]]);
    }

    #[test]
    fn symm_diff_examples() {
        let g = g4();
        let d = symm_diff(&g, 1, idx(&g, "1"), idx(&g, "2"), idx(&g, "1")).unwrap();
        assert_eq!(names(&g, &d.family), vec![vec!["2"]]);
        assert_eq!(g.node_ids(&g.term(d.family[0])), ["e"]);

        let g = g3();
        let d = symm_diff(&g, 2, idx(&g, "2"), idx(&g, "3"), idx(&g, "2")).unwrap();
        assert!(d.family.is_empty());
        assert_eq!(d.classification, Classification::Empty);

        let g = g2();
        let d = symm_diff(&g, 2, idx(&g, "1"), idx(&g, "2"), idx(&g, "2")).unwrap();
        assert_eq!(names(&g, &d.family), vec![vec!["2"]]);
        assert_eq!(d.classification, Classification::ConditionI);
        assert_eq!(d.difference_node_on_ij, Some(true));
    }

    #[test]
    fn symm_diff_preconditions() {
        let g = g3();
        assert!(symm_diff(&g, 2, 1, 1, 0).is_err());
        let g = fixture_path();
        assert!(symm_diff(&g, 2, 0, 2, 1).is_err());
    }

    fn fixture_path() -> CurveGraph {
        CurveGraph::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![("x".into(), 0, 1), ("y".into(), 1, 2)],
            0,
        )
        .unwrap()
    }

    #[test]
    fn d_count_counts_terminal_members() {
        let g = g3();
        let f = vec![g.subcurve(&["2", "3"]).unwrap(), g.subcurve(&["2"]).unwrap()];
        let e12 = g.node_index("e12").unwrap();
        let fnode = g.node_index("f").unwrap();
        assert_eq!(d_count(&g, &f, &[e12]), 2);
        assert_eq!(d_count(&g, &f, &[fnode]), 1);
    }
}
