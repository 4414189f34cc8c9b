//! Term graphs of join-free `(&, ;, 1)` terms and the homomorphism test
//! for inequalities between them.
//!
//! `a <= b` holds in every algebra of relations exactly when the graph of
//! `b` maps homomorphically into the graph of `a`, preserving both
//! distinguished nodes. When it does not, the graph of `a` read as a model
//! is a countermodel.

mod reduce;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

pub use reduce::{decide_with_join_reduction, integral_oracle, term_graph_oracle, JoinReduction, PairVerdict, Verdict};

use crate::error::{Error, Result};
use crate::model::{CounterexampleReport, RelModel, Relation, MAX_BASE};
use crate::term::{Equation, Term};

/// A two-pointed labelled digraph. Nodes are `0..nodes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermGraph {
    pub nodes: usize,
    /// Sorted, without duplicates.
    pub edges: Vec<(usize, usize, Arc<str>)>,
    pub source: usize,
    pub target: usize,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn fresh(&mut self) -> usize {
        self.0.push(self.0.len());
        self.0.len() - 1
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    /// The smaller id becomes the representative.
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.0[hi] = lo;
    }
}

fn check_fragment(t: &Term) -> Result<()> {
    if t.contains_join() {
        return Err(Error::OutOfFragment(format!("'{t}' contains '+'")));
    }
    if t.contains_zero() {
        return Err(Error::OutOfFragment(format!("'{t}' contains '0'")));
    }
    Ok(())
}

fn build(t: &Term, uf: &mut UnionFind, edges: &mut Vec<(usize, usize, Arc<str>)>) -> (usize, usize) {
    match t {
        Term::Var(x) => {
            let (s, e) = (uf.fresh(), uf.fresh());
            edges.push((s, e, x.clone()));
            (s, e)
        }
        Term::Ide => {
            let n = uf.fresh();
            (n, n)
        }
        Term::Comp(cs) => {
            let (s, mut end) = build(&cs[0], uf, edges);
            for c in &cs[1..] {
                let (cs_, ce) = build(c, uf, edges);
                uf.union(end, cs_);
                end = ce;
            }
            (s, end)
        }
        Term::Meet(cs) => {
            let (s, e) = build(&cs[0], uf, edges);
            for c in &cs[1..] {
                let (cs_, ce) = build(c, uf, edges);
                uf.union(s, cs_);
                uf.union(e, ce);
            }
            (s, e)
        }
        Term::Zero | Term::Join(_) => unreachable!("fragment checked by caller"),
    }
}

/// Builds the graph of a join-free, zero-free term. Variables give an
/// edge, `1` a single node, `;` glues in series and `&` in parallel.
/// Node ids follow construction order after merging.
pub fn build_term_graph(t: &Term) -> Result<TermGraph> {
    let t = t.normalize();
    check_fragment(&t)?;
    let mut uf = UnionFind(Vec::new());
    let mut raw = Vec::new();
    let (s, e) = build(&t, &mut uf, &mut raw);
    let mut renumber = vec![usize::MAX; uf.0.len()];
    let mut nodes = 0;
    for i in 0..uf.0.len() {
        let r = uf.find(i);
        if renumber[r] == usize::MAX {
            renumber[r] = nodes;
            nodes += 1;
        }
        renumber[i] = renumber[r];
    }
    let edges: BTreeSet<_> = raw.into_iter().map(|(u, v, x)| (renumber[u], renumber[v], x)).collect();
    Ok(TermGraph { nodes, edges: edges.into_iter().collect(), source: renumber[s], target: renumber[e] })
}

/// Node map of a homomorphism between term graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Homomorphism {
    pub map: Vec<usize>,
}

impl Homomorphism {
    /// Both distinguished nodes and every labelled edge are preserved.
    pub fn verify(&self, from: &TermGraph, to: &TermGraph) -> bool {
        self.map.len() == from.nodes
            && self.map.iter().all(|&v| v < to.nodes)
            && self.map[from.source] == to.source
            && self.map[from.target] == to.target
            && from
                .edges
                .iter()
                .all(|(u, v, x)| to.edges.binary_search(&(self.map[*u], self.map[*v], x.clone())).is_ok())
    }
}

type Bits = Vec<u64>;

fn bits_empty(n: usize) -> Bits {
    vec![0; n.div_ceil(64)]
}

fn bits_full(n: usize) -> Bits {
    let mut b = bits_empty(n);
    for i in 0..n {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

fn bits_and(a: &mut Bits, b: &Bits) {
    for (x, y) in a.iter_mut().zip(b) {
        *x &= y;
    }
}

fn bits_count(a: &Bits) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

fn bits_iter(a: &Bits) -> impl Iterator<Item = usize> + '_ {
    a.iter().enumerate().flat_map(|(wi, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b))
}

fn bits_has(a: &Bits, i: usize) -> bool {
    a[i / 64] >> (i % 64) & 1 == 1
}

/// Searches for a homomorphism by backtracking: the unassigned node with
/// the fewest remaining candidates is tried next, and each assignment
/// prunes the candidates of its neighbours.
pub fn find_homomorphism(from: &TermGraph, to: &TermGraph) -> Option<Homomorphism> {
    let labels: BTreeSet<&Arc<str>> = from.edges.iter().map(|e| &e.2).collect();
    // succ[label][u] and pred[label][v] in the target graph.
    let index = |x: &Arc<str>| labels.iter().position(|l| *l == x);
    let mut succ = vec![vec![bits_empty(to.nodes); to.nodes]; labels.len()];
    let mut pred = succ.clone();
    for (u, v, x) in &to.edges {
        if let Some(l) = index(x) {
            succ[l][*u][*v / 64] |= 1 << (v % 64);
            pred[l][*v][*u / 64] |= 1 << (u % 64);
        }
    }
    let mut domains = vec![bits_full(to.nodes); from.nodes];
    let pin = |n: usize, v: usize, domains: &mut Vec<Bits>| {
        let mut b = bits_empty(to.nodes);
        b[v / 64] |= 1 << (v % 64);
        bits_and(&mut domains[n], &b);
    };
    pin(from.source, to.source, &mut domains);
    pin(from.target, to.target, &mut domains);
    // Nodes with an outgoing (incoming) x-edge need one in the image too.
    let mut out_edges = vec![Vec::new(); from.nodes];
    let mut in_edges = vec![Vec::new(); from.nodes];
    for (u, v, x) in &from.edges {
        let l = index(x).expect("label of the source graph");
        out_edges[*u].push((*v, l));
        in_edges[*v].push((*u, l));
        let has_out: Bits = {
            let mut b = bits_empty(to.nodes);
            for d in 0..to.nodes {
                if succ[l][d].iter().any(|w| *w != 0) {
                    b[d / 64] |= 1 << (d % 64);
                }
            }
            b
        };
        let has_in: Bits = {
            let mut b = bits_empty(to.nodes);
            for d in 0..to.nodes {
                if pred[l][d].iter().any(|w| *w != 0) {
                    b[d / 64] |= 1 << (d % 64);
                }
            }
            b
        };
        bits_and(&mut domains[*u], &has_out);
        bits_and(&mut domains[*v], &has_in);
    }
    let mut assignment = vec![usize::MAX; from.nodes];
    let ok = backtrack(&mut assignment, domains, &out_edges, &in_edges, &succ, &pred);
    let h = ok.then(|| Homomorphism { map: assignment });
    if let Some(h) = &h {
        assert!(h.verify(from, to), "homomorphism search returned a non-homomorphism");
    }
    h
}

fn backtrack(
    assignment: &mut Vec<usize>,
    domains: Vec<Bits>,
    out_edges: &[Vec<(usize, usize)>],
    in_edges: &[Vec<(usize, usize)>],
    succ: &[Vec<Bits>],
    pred: &[Vec<Bits>],
) -> bool {
    let next = (0..assignment.len())
        .filter(|&n| assignment[n] == usize::MAX)
        .min_by_key(|&n| (bits_count(&domains[n]), n));
    let Some(n) = next else { return true };
    let candidates: Vec<usize> = bits_iter(&domains[n]).collect();
    'values: for d in candidates {
        let mut ds = domains.clone();
        ds[n] = bits_empty(ds[n].len() * 64);
        ds[n][d / 64] |= 1 << (d % 64);
        for &(m, l) in &out_edges[n] {
            bits_and(&mut ds[m], &succ[l][d]);
        }
        for &(m, l) in &in_edges[n] {
            bits_and(&mut ds[m], &pred[l][d]);
        }
        for (m, dm) in ds.iter().enumerate() {
            if assignment[m] == usize::MAX && m != n && bits_count(dm) == 0 {
                continue 'values;
            }
        }
        // Loops and edges to assigned nodes are checked through `ds[n]`.
        if !bits_has(&ds[n], d) {
            continue;
        }
        if out_edges[n].iter().chain(&in_edges[n]).any(|&(m, _)| assignment[m] != usize::MAX && !bits_has(&ds[m], assignment[m])) {
            continue;
        }
        assignment[n] = d;
        if backtrack(assignment, ds, out_edges, in_edges, succ, pred) {
            return true;
        }
        assignment[n] = usize::MAX;
    }
    false
}

/// The graph of `a` read as a model on its nodes; the other variables of
/// `extra` are bound to the empty relation.
pub fn canonical_countermodel(a: &Term, extra: &BTreeSet<Arc<str>>) -> Result<RelModel> {
    let g = build_term_graph(a)?;
    graph_model(&g, a.vars().iter().chain(extra))
}

fn graph_model<'a>(g: &TermGraph, vars: impl IntoIterator<Item = &'a Arc<str>>) -> Result<RelModel> {
    if g.nodes > MAX_BASE {
        return Err(Error::InvalidModel(format!("term graph has {} nodes, more than {MAX_BASE}", g.nodes)));
    }
    let mut m = RelModel::new(g.nodes)?;
    let labels: BTreeSet<&Arc<str>> = g.edges.iter().map(|e| &e.2).collect();
    for x in labels {
        let pairs = g.edges.iter().filter(|e| &e.2 == x).map(|e| (e.0, e.1));
        m.set(x, Relation::from_pairs(g.nodes, pairs))?;
    }
    let vars: Vec<Arc<str>> = vars.into_iter().cloned().collect();
    m.bind_missing_empty(&vars);
    Ok(m)
}

/// The result of deciding a join-free inequality.
#[derive(Clone, Debug, Serialize)]
pub struct Decision {
    pub valid: bool,
    /// Map from the graph of the right side into the graph of the left.
    pub homomorphism: Option<Homomorphism>,
    pub countermodel: Option<CounterexampleReport>,
}

fn normalized_pair(a: &Term, b: &Term) -> Result<(Term, Term)> {
    let (a, b) = (a.normalize(), b.normalize());
    for t in [&a, &b] {
        if t.contains_join() {
            return Err(Error::OutOfFragment(format!("'{t}' contains '+'; use the join reduction")));
        }
    }
    Ok((a, b))
}

/// Whether `a <= b` holds in every algebra of relations with `&`, `;`, `1`
/// (and `0`, which a normal form either is or does not contain).
pub fn decide_leq_meet_comp_one(a: &Term, b: &Term) -> Result<bool> {
    let (a, b) = normalized_pair(a, b)?;
    if a.is_zero() {
        return Ok(true);
    }
    if b.is_zero() {
        return Ok(false);
    }
    Ok(find_homomorphism(&build_term_graph(&b)?, &build_term_graph(&a)?).is_some())
}

/// Like [`decide_leq_meet_comp_one`] but with the evidence: the
/// homomorphism when valid, a verified countermodel when not.
pub fn decide_leq(a: &Term, b: &Term) -> Result<Decision> {
    let (a, b) = normalized_pair(a, b)?;
    if a.is_zero() {
        return Ok(Decision { valid: true, homomorphism: None, countermodel: None });
    }
    let ga = build_term_graph(&a)?;
    let hom = if b.is_zero() { None } else { find_homomorphism(&build_term_graph(&b)?, &ga) };
    if hom.is_some() {
        return Ok(Decision { valid: true, homomorphism: hom, countermodel: None });
    }
    let model = graph_model(&ga, a.vars().iter().chain(b.vars().iter()))?;
    let report = CounterexampleReport::for_rel(&Equation::leq(a, b), model, false, false)?;
    Ok(Decision { valid: false, homomorphism: None, countermodel: Some(report) })
}

/// Graphviz rendering: the source is a diamond, the target a double
/// circle, and a node that is both is a diamond with a double outline.
pub fn to_dot(g: &TermGraph) -> String {
    let mut s = String::from("digraph term {\n  rankdir=LR;\n");
    for n in 0..g.nodes {
        let attrs = match (n == g.source, n == g.target) {
            (true, true) => "shape=diamond, peripheries=2",
            (true, false) => "shape=diamond",
            (false, true) => "shape=doublecircle",
            (false, false) => "shape=circle",
        };
        let _ = writeln!(s, "  n{n} [label=\"{n}\", {attrs}];");
    }
    for (u, v, x) in &g.edges {
        let _ = writeln!(s, "  n{u} -> n{v} [label=\"{x}\"];");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse;

    fn g(s: &str) -> TermGraph {
        build_term_graph(&parse(s).unwrap()).unwrap()
    }

    fn leq(a: &str, b: &str) -> bool {
        decide_leq_meet_comp_one(&parse(a).unwrap(), &parse(b).unwrap()).unwrap()
    }

    #[test]
    fn construction_base_cases() {
        let x = g("x");
        assert_eq!((x.nodes, x.source, x.target), (2, 0, 1));
        assert_eq!(x.edges, vec![(0, 1, Arc::from("x"))]);
        let one = g("1");
        assert_eq!((one.nodes, one.source, one.target), (1, 0, 0));
        let loop_ = g("x & 1");
        assert_eq!(loop_.nodes, 1);
        assert_eq!(loop_.edges, vec![(0, 0, Arc::from("x"))]);
        let comp = g("x;y;x");
        assert_eq!(comp.nodes, 4);
        assert!(build_term_graph(&parse("x + y").unwrap()).is_err());
    }

    #[test]
    fn node_bound() {
        for s in ["x;(y & z;x);1", "(x & y);(1 & z)", "x & y & x;y"] {
            let t = parse(s).unwrap();
            let occurrences = s.chars().filter(|c| c.is_ascii_lowercase()).count();
            assert!(build_term_graph(&t).unwrap().nodes <= occurrences + 1);
        }
    }

    #[test]
    fn homomorphism_examples() {
        let a = g("x;(y & z)");
        let id = find_homomorphism(&a, &a).unwrap();
        assert!(id.verify(&a, &a));
        assert!(find_homomorphism(&g("x"), &g("x & y")).is_some());
        assert!(find_homomorphism(&g("x;y"), &g("x")).is_none());
    }

    #[test]
    fn decisions() {
        assert!(leq("x & y", "x"));
        assert!(!leq("x;y", "x"));
        assert!(!leq("1 & x;y", "1 & y;x"));
        assert!(leq("0", "x"));
        assert!(!leq("x", "0"));
        assert!(leq("(x & x1);(y & y1)", "x;y"));
        assert!(leq("(1 & x);(y & z)", "(1 & x);y & z"));
        assert!(leq("(1 & x);y & z", "(1 & x);(y & z)"));
    }

    #[test]
    fn countermodel_for_composition() {
        let d = decide_leq(&parse("x;y").unwrap(), &parse("x").unwrap()).unwrap();
        assert!(!d.valid);
        let r = d.countermodel.unwrap();
        let m = r.rel_model().unwrap();
        assert_eq!(m.base(), 3);
        assert_eq!(m.get("x").unwrap(), &Relation::from_pairs(3, [(0, 1)]));
        assert_eq!(m.get("y").unwrap(), &Relation::from_pairs(3, [(1, 2)]));
        let meet = canonical_countermodel(&parse("x & y").unwrap(), &BTreeSet::new()).unwrap();
        assert!(!meet.eval(&parse("x;y").unwrap()).unwrap().contains(0, 1));
        let one = canonical_countermodel(&Term::Ide, &[Arc::from("x")].into()).unwrap();
        assert!(one.eval(&Term::Ide).unwrap().contains(0, 0));
        assert!(one.get("x").unwrap().is_empty());
    }

    #[test]
    fn dot_shapes() {
        let d = to_dot(&g("x"));
        assert!(d.contains("n0 [label=\"0\", shape=diamond]"));
        assert!(d.contains("shape=doublecircle"));
        assert!(d.contains("n0 -> n1 [label=\"x\"]"));
        assert!(to_dot(&g("1 & x")).contains("peripheries=2"));
    }
}
