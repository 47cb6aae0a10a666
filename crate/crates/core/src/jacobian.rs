//! Multidegrees, quasistability with respect to the marked component, the
//! twister of a pair of components and the brute-force twisting oracle.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{invalid, invariant, Error, Result};
use crate::graph::{CurveGraph, Subcurve};
use crate::tails::{tail_family, TailFamily};

pub type Multidegree = Vec<i64>;

/// Degree-matrix minus adjacency over non-loop nodes.
pub fn laplacian(g: &CurveGraph) -> Vec<Vec<i64>> {
    let p = g.n_components();
    let mut l = vec![vec![0i64; p]; p];
    for n in g.nodes() {
        let [a, b] = n.ends;
        if a != b {
            l[a][a] += 1;
            l[b][b] += 1;
            l[a][b] -= 1;
            l[b][a] -= 1;
        }
    }
    l
}

/// `β_Y(d) = deg_Y d + k_Y / 2`, kept as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Beta {
    pub twice: i64,
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

pub fn beta(g: &CurveGraph, d: &[i64], y: Subcurve) -> Beta {
    let deg: i64 = y.indices().map(|i| d[i]).sum();
    Beta { twice: 2 * deg + g.k(y) as i64 }
}

fn check_degree(g: &CurveGraph, d: &[i64]) -> Result<()> {
    if d.len() != g.n_components() {
        return Err(invalid(format!(
            "multidegree has {} entries for {} components",
            d.len(),
            g.n_components()
        )));
    }
    if d.iter().sum::<i64>() != 0 {
        return Err(invalid("multidegree must have total degree 0"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QsVerdict {
    pub quasistable: bool,
    /// First tail (in listing order) violating the inequalities.
    pub witness: Option<(Subcurve, Beta)>,
}

fn violates(g: &CurveGraph, d: &[i64], y: Subcurve, k: i64) -> Option<Beta> {
    let deg: i64 = y.indices().map(|i| d[i]).sum();
    let b = Beta { twice: 2 * deg + k };
    let k2 = 2 * k;
    let ok = if y.contains(g.marked()) {
        0 < b.twice && b.twice <= k2
    } else {
        0 <= b.twice && b.twice < k2
    };
    (!ok).then_some(b)
}

/// Quasistability of a degree-0 multidegree: for every tail `Y`,
/// `0 < β_Y ≤ k_Y` when `Y` contains the marked component and
/// `0 ≤ β_Y < k_Y` otherwise.
pub fn is_quasistable(g: &CurveGraph, d: &[i64]) -> Result<QsVerdict> {
    check_degree(g, d)?;
    Ok(qs_over(g, d, &tails_with_k(g)))
}

fn tails_with_k(g: &CurveGraph) -> Vec<(Subcurve, i64)> {
    g.tails_with_terms(None).iter().map(|t| (t.set, t.term.len() as i64)).collect()
}

fn qs_over(g: &CurveGraph, d: &[i64], tails: &[(Subcurve, i64)]) -> QsVerdict {
    for &(y, k) in tails {
        if let Some(b) = violates(g, d, y, k) {
            return QsVerdict { quasistable: false, witness: Some((y, b)) };
        }
    }
    QsVerdict { quasistable: true, witness: None }
}

/// `d + L·c`: the multidegree of `d` twisted by `-Σ c_m C_m`.
pub fn apply_twist(g: &CurveGraph, d: &[i64], c: &[i64]) -> Multidegree {
    let l = laplacian(g);
    d.iter()
        .enumerate()
        .map(|(i, &di)| di + l[i].iter().zip(c).map(|(a, b)| a * b).sum::<i64>())
        .collect()
}

/// `2·[marked] − [a] − [b]`.
pub fn abel_multidegree(g: &CurveGraph, a: usize, b: usize) -> Multidegree {
    let mut d = vec![0i64; g.n_components()];
    d[g.marked()] += 2;
    d[a] -= 1;
    d[b] -= 1;
    d
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QsReduction {
    /// Twist coefficients, zero on the marked component.
    pub twist: Multidegree,
    pub result: Multidegree,
    /// Bound of the box in which uniqueness was established.
    pub bound: i64,
}

/// Largest adaptive bound tried before giving up.
pub const MAX_ADAPTIVE_BOUND: i64 = 1 << 16;

/// Brute-force search for the unique quasistable twist of a degree-0
/// multidegree. Every `c` with `c[marked] = 0` and entries in
/// `[-bound, bound]` is considered. Without an explicit bound the search
/// starts at 2 and doubles until something is found.
pub struct TwistOracle<'g> {
    g: &'g CurveGraph,
    tails: Vec<(Subcurve, i64)>,
    lap: Vec<Vec<i64>>,
    free: Vec<usize>,
    inverse: Vec<Vec<Ratio<i128>>>,
    quasistable: Option<Vec<Multidegree>>,
}

impl<'g> TwistOracle<'g> {
    pub fn new(g: &'g CurveGraph) -> Self {
        let lap = laplacian(g);
        let free: Vec<usize> = (0..g.n_components()).filter(|&i| i != g.marked()).collect();
        let reduced: Vec<Vec<i64>> =
            free.iter().map(|&i| free.iter().map(|&j| lap[i][j]).collect()).collect();
        TwistOracle {
            g,
            tails: tails_with_k(g),
            inverse: invert(&reduced),
            lap,
            free,
            quasistable: None,
        }
    }

    pub fn is_quasistable(&self, d: &[i64]) -> QsVerdict {
        qs_over(self.g, d, &self.tails)
    }

    fn twisted(&self, d: &[i64], c: &[i64]) -> Multidegree {
        d.iter()
            .enumerate()
            .map(|(i, &di)| di + self.lap[i].iter().zip(c).map(|(a, b)| a * b).sum::<i64>())
            .collect()
    }

    /// All hits of the box of radius `bound`, in odometer order.
    pub fn search_box(&mut self, d: &[i64], bound: i64) -> Result<Vec<Multidegree>> {
        check_degree(self.g, d)?;
        if bound < 0 {
            return Err(invalid("bound must be nonnegative"));
        }
        let n = self.free.len();
        let width = (2 * bound + 1) as f64;
        if width.powi(n as i32) <= 4096.0 {
            Ok(self.scan_box(d, bound))
        } else {
            self.scan_classes(d, bound)
        }
    }

    /// Literal scan of every coefficient vector in the box.
    pub fn scan_box(&self, d: &[i64], bound: i64) -> Vec<Multidegree> {
        let p = self.g.n_components();
        let mut c = vec![0i64; p];
        for &i in &self.free {
            c[i] = -bound;
        }
        let mut hits = Vec::new();
        loop {
            if self.is_quasistable(&self.twisted(d, &c)).quasistable {
                hits.push(c.clone());
            }
            let mut pos = 0;
            loop {
                if pos == self.free.len() {
                    return hits;
                }
                let i = self.free[pos];
                if c[i] < bound {
                    c[i] += 1;
                    break;
                }
                c[i] = -bound;
                pos += 1;
            }
        }
    }

    /// Same hits as `scan_box`, found from the other side: list every
    /// quasistable multidegree `q` and keep those for which `L·c = q − d`
    /// has an integral solution inside the box.
    pub fn scan_classes(&mut self, d: &[i64], bound: i64) -> Result<Vec<Multidegree>> {
        let qs = self.quasistable_multidegrees().to_vec();
        let mut hits = Vec::new();
        for q in &qs {
            let diff: Vec<i64> = q.iter().zip(d).map(|(a, b)| a - b).collect();
            if let Some(c) = self.solve(&diff) {
                if c.iter().all(|x| x.abs() <= bound) {
                    hits.push(c);
                }
            }
        }
        hits.sort_by_key(|c| odometer_key(c, &self.free));
        Ok(hits)
    }

    /// Integral `c` with `c[marked] = 0` and `L·c = rhs`, if any.
    fn solve(&self, rhs: &[i64]) -> Option<Multidegree> {
        let mut c = vec![0i64; self.g.n_components()];
        for (r, &i) in self.free.iter().enumerate() {
            let v: Ratio<i128> = self.inverse[r]
                .iter()
                .zip(&self.free)
                .map(|(a, &j)| a * Ratio::from_integer(rhs[j] as i128))
                .sum();
            if !v.is_integer() {
                return None;
            }
            c[i] = *v.numer() as i64;
        }
        Some(c)
    }

    /// Every quasistable multidegree of total degree 0.
    pub fn quasistable_multidegrees(&mut self) -> &[Multidegree] {
        if self.quasistable.is_none() {
            let g = self.g;
            let p = g.n_components();
            let ranges: Vec<(i64, i64)> = if p == 1 {
                vec![(0, 0)]
            } else {
                (0..p)
                    .map(|m| {
                        let k = g.k(Subcurve::singleton(m)) as i64;
                        (-(k / 2), k / 2 + k % 2)
                    })
                    .collect()
            };
            let mut out = Vec::new();
            let mut d = vec![0i64; p];
            enumerate_box(&ranges, 0, 0, &mut d, &mut |d| {
                if self.is_quasistable(d).quasistable {
                    out.push(d.to_vec());
                }
            });
            self.quasistable = Some(out);
        }
        self.quasistable.as_deref().unwrap()
    }

    /// Invariant of the linear-equivalence class of a degree-0 multidegree:
    /// the entries of the rational twist `c` with `L·c = d`, reduced mod 1.
    pub fn class_key(&self, d: &[i64]) -> Vec<Ratio<i128>> {
        self.inverse
            .iter()
            .map(|row| {
                let v: Ratio<i128> =
                    row.iter().zip(&self.free).map(|(a, &j)| a * Ratio::from_integer(d[j] as i128)).sum();
                v - v.floor()
            })
            .collect()
    }

    /// `det` of the reduced Laplacian, i.e. the number of spanning trees.
    pub fn class_count(&self) -> i128 {
        let mut m: Vec<Vec<i128>> = self
            .free
            .iter()
            .map(|&i| self.free.iter().map(|&j| self.lap[i][j] as i128).collect())
            .collect();
        bareiss_det(&mut m)
    }

    /// Whether `d1 − d2` lies in the image of the Laplacian.
    pub fn equivalent(&self, d1: &[i64], d2: &[i64]) -> bool {
        let diff: Vec<i64> = d1.iter().zip(d2).map(|(a, b)| a - b).collect();
        diff.iter().sum::<i64>() == 0 && self.solve(&diff).is_some()
    }

    /// The unique quasistable twist of `d`.
    pub fn reduce(&mut self, d: &[i64], bound: Option<i64>) -> Result<QsReduction> {
        check_degree(self.g, d)?;
        let (mut b, adaptive) = match bound {
            Some(b) => (b, false),
            None => (2, true),
        };
        loop {
            let hits = self.search_box(d, b)?;
            match hits.len() {
                1 => {
                    let twist = hits.into_iter().next().unwrap();
                    let result = self.twisted(d, &twist);
                    return Ok(QsReduction { twist, result, bound: b });
                }
                0 if adaptive && b < MAX_ADAPTIVE_BOUND => b *= 2,
                0 => return Err(Error::NotFound { bound: b }),
                n => return Err(Error::MultipleFound { bound: b, count: n }),
            }
        }
    }
}

fn odometer_key(c: &[i64], free: &[usize]) -> Vec<i64> {
    free.iter().rev().map(|&i| c[i]).collect()
}

fn enumerate_box(
    ranges: &[(i64, i64)],
    pos: usize,
    partial: i64,
    d: &mut Vec<i64>,
    f: &mut dyn FnMut(&[i64]),
) {
    if pos + 1 == ranges.len() {
        let last = -partial;
        if ranges[pos].0 <= last && last <= ranges[pos].1 {
            d[pos] = last;
            f(d);
        }
        return;
    }
    let rest_lo: i64 = ranges[pos + 1..].iter().map(|r| r.0).sum();
    let rest_hi: i64 = ranges[pos + 1..].iter().map(|r| r.1).sum();
    for v in ranges[pos].0..=ranges[pos].1 {
        let s = partial + v;
        if -s < rest_lo || -s > rest_hi {
            continue;
        }
        d[pos] = v;
        enumerate_box(ranges, pos + 1, s, d, f);
    }
}

/// Fraction-free Gaussian elimination; the empty matrix has determinant 1.
fn bareiss_det(m: &mut [Vec<i128>]) -> i128 {
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * m[n - 1][n - 1]
    }
}

/// Exact inverse of a nonsingular integer matrix.
fn invert(m: &[Vec<i64>]) -> Vec<Vec<Ratio<i128>>> {
    let n = m.len();
    let mut a: Vec<Vec<Ratio<i128>>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Ratio<i128>> = row.iter().map(|&x| Ratio::from_integer(x as i128)).collect();
            r.extend((0..n).map(|j| Ratio::from_integer((i == j) as i128)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != Ratio::from_integer(0)).expect("reduced Laplacian is nonsingular");
        a.swap(col, piv);
        let inv = Ratio::from_integer(1) / a[col][col];
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && a[r][col] != Ratio::from_integer(0) {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Convenience wrapper around [`TwistOracle::reduce`].
pub fn qs_reduce(g: &CurveGraph, d: &[i64], bound: Option<i64>) -> Result<QsReduction> {
    TwistOracle::new(g).reduce(d, bound)
}

/// `α_{a,b,m}` for every ordered pair `(a, b)`, with the families behind it.
#[derive(Clone, Debug)]
pub struct Twister {
    p: usize,
    alpha: Vec<Vec<i64>>,
    families: Vec<TailFamily>,
}

impl Twister {
    pub fn compute(g: &CurveGraph) -> Result<Self> {
        let p = g.n_components();
        let mut alpha = Vec::with_capacity(p * p);
        let mut families = Vec::with_capacity(p * p);
        for a in 0..p {
            for b in 0..p {
                let fam = tail_family(g, a, b)?;
                let mut row = vec![0i64; p];
                for w in fam.members() {
                    for m in w.set.indices() {
                        row[m] += 1;
                    }
                }
                alpha.push(row);
                families.push(fam);
            }
        }
        Ok(Twister { p, alpha, families })
    }

    /// The twist found by the oracle for every pair, in the same layout.
    pub fn from_oracle(g: &CurveGraph, bound: Option<i64>) -> Result<Self> {
        let p = g.n_components();
        let mut oracle = TwistOracle::new(g);
        let mut alpha = Vec::with_capacity(p * p);
        for a in 0..p {
            for b in 0..p {
                alpha.push(oracle.reduce(&abel_multidegree(g, a, b), bound)?.twist);
            }
        }
        Ok(Twister { p, alpha, families: Vec::new() })
    }

    pub fn n_components(&self) -> usize {
        self.p
    }

    pub fn alpha(&self, a: usize, b: usize) -> &[i64] {
        &self.alpha[a * self.p + b]
    }

    /// The tail family of `(a, b)`; absent on oracle-built tables.
    pub fn family(&self, a: usize, b: usize) -> Option<&TailFamily> {
        self.families.get(a * self.p + b)
    }

    /// `α_{a,b,m} − α_{a,b,n}`.
    pub fn delta(&self, a: usize, b: usize, m: usize, n: usize) -> i64 {
        let r = self.alpha(a, b);
        r[m] - r[n]
    }

    pub fn to_json(&self, g: &CurveGraph) -> Value {
        let mut outer = Map::new();
        for a in 0..self.p {
            let mut mid = Map::new();
            for b in 0..self.p {
                let mut inner = Map::new();
                for (m, v) in self.alpha(a, b).iter().enumerate() {
                    inner.insert(g.name(m).to_string(), Value::from(*v));
                }
                mid.insert(g.name(b).to_string(), Value::Object(inner));
            }
            outer.insert(g.name(a).to_string(), Value::Object(mid));
        }
        Value::Object(outer)
    }
}

/// `δ(a, b, m, n)` recomputed node by node: for a node `S` joining `m` and
/// `n`, sum over members `W` of the family of `(a, b)` having `S` terminal,
/// `+1` when `W` contains `C_m` and `−1` when it contains `C_n`.
pub fn delta_via_node(g: &CurveGraph, fam: &TailFamily, m: usize, n: usize, s: usize) -> Result<i64> {
    let node = g.node(s);
    let ends = node.ends;
    if m == n || !(ends == [m, n] || ends == [n, m]) {
        return Err(invalid("node must join the two given components"));
    }
    Ok(fam
        .members()
        .filter(|w| w.term.contains(&s))
        .map(|w| if w.set.contains(m) { 1 } else { -1 })
        .sum())
}

/// The subcurve `Y` with `Z_{i,k} = Z_{j,k} − Y` for components `i`, `j`
/// sharing a node: the upper level set of `α_{i,k} − α_{j,k}`, which must
/// take at most two consecutive values.
pub fn difference_set(g: &CurveGraph, tw: &Twister, i: usize, j: usize, k: usize) -> Result<Subcurve> {
    if i == j || !g.adjacent(i, j) {
        return Err(invalid("components i and j must be distinct and meet in a node"));
    }
    let f: Vec<i64> = tw.alpha(i, k).iter().zip(tw.alpha(j, k)).map(|(a, b)| a - b).collect();
    let lo = *f.iter().min().unwrap();
    let hi = *f.iter().max().unwrap();
    if hi - lo > 1 {
        return Err(invariant(format!(
            "α_({i},{k}) − α_({j},{k}) takes values {f:?}, not two consecutive ones",
            i = g.name(i),
            j = g.name(j),
            k = g.name(k)
        )));
    }
    if hi == lo {
        return Ok(Subcurve::EMPTY);
    }
    let y = Subcurve::from_indices((0..f.len()).filter(|&m| f[m] == hi));
    if !y.contains(i) || y.contains(j) {
        return Err(invariant(format!(
            "difference set {:?} must contain {} and avoid {}",
            g.component_names(y),
            g.name(i),
            g.name(j)
        )));
    }
    Ok(y)
}

/// Multidegree as a JSON map from component name to integer.
pub fn multidegree_to_json(g: &CurveGraph, d: &[i64]) -> Value {
    let mut m = Map::new();
    for (i, v) in d.iter().enumerate() {
        m.insert(g.name(i).to_string(), Value::from(*v));
    }
    Value::Object(m)
}

pub fn multidegree_from_json(g: &CurveGraph, v: &Value) -> Result<Multidegree> {
    let obj = v.as_object().ok_or_else(|| invalid("multidegree must be a JSON object"))?;
    let mut d = vec![0i64; g.n_components()];
    for (k, x) in obj {
        let i = g.component_index(k)?;
        d[i] = x.as_i64().ok_or_else(|| invalid(format!("degree of `{k}` is not an integer")))?;
    }
    Ok(d)
}
