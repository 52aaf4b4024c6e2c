//! Finite simple graphs over at most 64 named vertices.
//!
//! Vertices are addressed by their position in declaration order. Subsets of
//! the vertex set are [`VertexSet`] bitmasks; every set-valued output is
//! ordered by that declaration order, which keeps all downstream output
//! deterministic.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard limit imposed by the bitmask representation.
pub const MAX_VERTICES: usize = 64;

/// A subset of the vertices of some ambient [`Graph`].
///
/// Ordering is lexicographic on the ascending sequence of member indices, so
/// `{0} < {0,1} < {1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        if n == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }

    /// Re-indexes `self` relative to `within`: the i-th member of `within`
    /// becomes vertex `i`. Members of `self` outside `within` are dropped.
    pub fn compress(self, within: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for (i, v) in within.iter().enumerate() {
            if self.contains(v) {
                out.insert(i);
            }
        }
        out
    }

    /// Inverse of [`VertexSet::compress`].
    pub fn expand(self, within: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for (i, v) in within.iter().enumerate() {
            if self.contains(i) {
                out.insert(v);
            }
        }
        out
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let t = diff.trailing_zeros();
        // Both sequences agree below `t` and exactly one of them contains `t`.
        // The other one either continues past `t` (and is larger) or stops
        // there (and is a proper prefix, hence smaller).
        let self_has = self.0 >> t & 1 == 1;
        let lacks = if self_has { other.0 } else { self.0 };
        let lacks_continues = t < 63 && lacks >> (t + 1) != 0;
        if self_has == lacks_continues {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;

    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexIter {}

/// A finite simple graph with named vertices.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Builds a graph from vertex names and edges given by name.
    pub fn new<S: AsRef<str>>(names: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_owned()).collect();
        if names.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                count: names.len(),
                cap: MAX_VERTICES,
            });
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(name.clone()));
            }
        }
        let mut adj = vec![VertexSet::EMPTY; names.len()];
        for (a, b) in edges {
            let (a, b) = (a.as_ref(), b.as_ref());
            let u = *index.get(a).ok_or_else(|| Error::UnknownVertex(a.to_owned()))?;
            let v = *index.get(b).ok_or_else(|| Error::UnknownVertex(b.to_owned()))?;
            if u == v {
                return Err(Error::SelfLoop(a.to_owned()));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph { names, adj })
    }

    /// Builds a graph on vertices `0..n` named by `name`, from index pairs.
    pub fn from_indices(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        let edges: Vec<(String, String)> = edges
            .iter()
            .map(|&(u, v)| {
                if u >= n || v >= n {
                    return Err(Error::UnknownVertex(u.max(v).to_string()));
                }
                Ok((names[u].clone(), names[v].clone()))
            })
            .collect::<Result<_>>()?;
        Graph::new(&names, &edges)
    }

    /// Vertices named `a`, `b`, ... (then `v26`, `v27`, ...).
    pub fn lettered(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let names = (0..n)
            .map(|i| {
                if i < 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("v{i}")
                }
            })
            .collect();
        Graph::from_indices(names, edges)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::lettered(n, &edges).expect("complete graph is well-formed")
    }

    pub fn discrete(n: usize) -> Self {
        Graph::lettered(n, &[]).expect("discrete graph is well-formed")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::lettered(n, &edges).expect("path is well-formed")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_owned()))
    }

    /// Looks up a set of vertices by name.
    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        names.iter().map(|n| self.vertex(n.as_ref())).collect()
    }

    pub fn set_names(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|v| self.names[v].clone()).collect()
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |u| self.adj[u].iter().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// Neighbours of `v`. Panics if `v` is out of range.
    pub fn link(&self, v: usize) -> VertexSet {
        self.adj[v]
    }

    /// `link(v) ∪ {v}`.
    pub fn star(&self, v: usize) -> VertexSet {
        self.adj[v].with(v)
    }

    /// Connected components of the subgraph induced on `s`, ordered by
    /// least member.
    pub fn components(&self, s: VertexSet) -> Vec<VertexSet> {
        self.g_components(s, &[])
    }

    /// Classes of `s` under paths that stay inside `s` and whose consecutive
    /// vertices are adjacent or lie in a common member of `colls`.
    pub fn g_components(&self, s: VertexSet, colls: &[VertexSet]) -> Vec<VertexSet> {
        let mut out = Vec::new();
        let mut rest = s;
        while let Some(seed) = rest.first() {
            let mut comp = VertexSet::singleton(seed);
            let mut frontier = comp;
            while let Some(u) = frontier.first() {
                frontier.remove(u);
                let mut reach = self.adj[u];
                for &c in colls {
                    if c.contains(u) {
                        reach = reach.union(c);
                    }
                }
                let fresh = reach.intersection(s).difference(comp);
                comp = comp.union(fresh);
                frontier = frontier.union(fresh);
            }
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self, s: VertexSet) -> bool {
        self.components(s).len() <= 1
    }

    pub fn is_clique(&self, s: VertexSet) -> bool {
        s.iter().all(|v| s.without(v).is_subset(self.adj[v]))
    }

    /// Vertices of `s` adjacent to every other vertex of `s`.
    pub fn center(&self, s: VertexSet) -> VertexSet {
        s.iter().filter(|&v| s.without(v).is_subset(self.adj[v])).collect()
    }

    /// Size of a largest clique inside `s`; `0` for the empty set.
    pub fn max_clique_size(&self, s: VertexSet) -> usize {
        self.least_max_clique(s).len()
    }

    /// The lexicographically least clique of maximum size inside `s`.
    pub fn least_max_clique(&self, s: VertexSet) -> VertexSet {
        let mut best = VertexSet::EMPTY;
        self.bron_kerbosch(VertexSet::EMPTY, s, VertexSet::EMPTY, &mut best);
        best
    }

    /// Every maximal clique inside `s`, ordered.
    pub fn maximal_cliques(&self, s: VertexSet) -> Vec<VertexSet> {
        let mut out = Vec::new();
        self.collect_maximal(VertexSet::EMPTY, s, VertexSet::EMPTY, &mut out);
        out.sort();
        out
    }

    fn bron_kerbosch(&self, r: VertexSet, p: VertexSet, x: VertexSet, best: &mut VertexSet) {
        if r.len() + p.len() < best.len() {
            return;
        }
        if p.is_empty() {
            if x.is_empty() && (r.len() > best.len() || (r.len() == best.len() && r < *best)) {
                *best = r;
            }
            return;
        }
        // No pivoting here: ties need every maximal clique of top size.
        let (mut p, mut x) = (p, x);
        for v in p.iter() {
            self.bron_kerbosch(
                r.with(v),
                p.intersection(self.adj[v]),
                x.intersection(self.adj[v]),
                best,
            );
            p.remove(v);
            x.insert(v);
        }
    }

    fn collect_maximal(&self, r: VertexSet, p: VertexSet, x: VertexSet, out: &mut Vec<VertexSet>) {
        if p.is_empty() {
            if x.is_empty() && !r.is_empty() {
                out.push(r);
            }
            return;
        }
        let pivot = p
            .union(x)
            .iter()
            .max_by_key(|&u| p.intersection(self.adj[u]).len())
            .expect("p is nonempty");
        let (mut p, mut x) = (p, x);
        for v in p.difference(self.adj[pivot]).iter() {
            self.collect_maximal(r.with(v), p.intersection(self.adj[v]), x.intersection(self.adj[v]), out);
            p.remove(v);
            x.insert(v);
        }
    }

    /// The subgraph induced on `s`, keeping declaration order.
    pub fn induced(&self, s: VertexSet) -> Graph {
        let members: Vec<usize> = s.iter().collect();
        let names = members.iter().map(|&v| self.names[v].clone()).collect();
        let adj = members.iter().map(|&v| self.adj[v].compress(s)).collect();
        Graph { names, adj }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self
            .edges()
            .map(|(u, v)| format!("{}-{}", self.names[u], self.names[v]))
            .collect();
        f.debug_struct("Graph")
            .field("vertices", &self.names)
            .field("edges", &edges)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(g: &Graph, names: &[&str]) -> VertexSet {
        g.vertex_set(names).unwrap()
    }

    #[test]
    fn link_and_star() {
        let p3 = Graph::path(3);
        assert_eq!(p3.link(0), set(&p3, &["b"]));
        assert_eq!(p3.star(1), p3.vertices());
        let k4 = Graph::complete(4);
        assert_eq!(k4.link(2), set(&k4, &["a", "b", "d"]));
        assert_eq!(k4.star(2), k4.vertices());
        let d = Graph::discrete(3);
        assert!(d.link(1).is_empty());
        assert_eq!(d.star(1), VertexSet::singleton(1));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Graph::new(&["a", "a"], &[]).unwrap_err(),
            Error::DuplicateVertex("a".into())
        );
        assert_eq!(
            Graph::new(&["a"], &[("a", "a")]).unwrap_err(),
            Error::SelfLoop("a".into())
        );
        assert_eq!(
            Graph::new(&["a"], &[("a", "z")]).unwrap_err(),
            Error::UnknownVertex("z".into())
        );
        assert!(Graph::path(3).vertex("q").is_err());
    }

    #[test]
    fn components_of_path() {
        let p5 = Graph::path(5);
        assert_eq!(
            p5.components(set(&p5, &["a", "e"])),
            vec![set(&p5, &["a"]), set(&p5, &["e"])]
        );
        assert_eq!(
            p5.components(set(&p5, &["c", "d", "e"])),
            vec![set(&p5, &["c", "d", "e"])]
        );
        assert!(p5.components(VertexSet::EMPTY).is_empty());
    }

    #[test]
    fn g_components_through_collections() {
        let g = Graph::discrete(3);
        let colls = [set(&g, &["a", "b"]), set(&g, &["b", "c"])];
        assert_eq!(
            g.g_components(set(&g, &["a", "c"]), &colls),
            vec![set(&g, &["a"]), set(&g, &["c"])]
        );
        assert_eq!(g.g_components(g.vertices(), &colls), vec![g.vertices()]);
    }

    #[test]
    fn cliques_and_centers() {
        assert_eq!(Graph::complete(4).max_clique_size(VertexSet::full(4)), 4);
        assert_eq!(Graph::path(3).max_clique_size(VertexSet::full(3)), 2);
        assert_eq!(Graph::discrete(5).max_clique_size(VertexSet::full(5)), 1);
        assert_eq!(Graph::discrete(5).max_clique_size(VertexSet::EMPTY), 0);

        let p3 = Graph::path(3);
        assert_eq!(p3.center(p3.vertices()), set(&p3, &["b"]));
        let k5 = Graph::complete(5);
        assert_eq!(k5.center(k5.vertices()), k5.vertices());
        let p4 = Graph::path(4);
        assert!(p4.center(p4.vertices()).is_empty());
        assert!(p4.center(VertexSet::EMPTY).is_empty());
    }

    #[test]
    fn least_max_clique_tie_break() {
        // Two triangles sharing nothing: {a,b,c} and {d,e,f}.
        let g = Graph::lettered(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(g.least_max_clique(g.vertices()), set(&g, &["a", "b", "c"]));
        assert_eq!(g.maximal_cliques(g.vertices()).len(), 2);
    }

    #[test]
    fn vertex_set_order_is_lexicographic() {
        let a = VertexSet::from_iter([0]);
        let ab = VertexSet::from_iter([0, 1]);
        let b = VertexSet::from_iter([1]);
        let ac = VertexSet::from_iter([0, 2]);
        assert!(VertexSet::EMPTY < a);
        assert!(a < ab);
        assert!(ab < ac);
        assert!(ac < b);
        let high = VertexSet::from_iter([63]);
        assert!(b < high);
        assert!(VertexSet::from_iter([0, 63]) < high);
    }

    #[test]
    fn induced_keeps_order() {
        let p5 = Graph::path(5);
        let sub = p5.induced(set(&p5, &["b", "c", "e"]));
        assert_eq!(sub.names(), &["b", "c", "e"]);
        assert!(sub.adjacent(0, 1));
        assert!(!sub.adjacent(1, 2));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            prop::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::lettered(n, &edges).unwrap()
            })
        })
    }

    /// Exhaustive clique oracle over all subsets.
    fn brute_clique(g: &Graph, s: VertexSet) -> usize {
        let members: Vec<usize> = s.iter().collect();
        let mut best = 0;
        for mask in 0u32..(1 << members.len()) {
            let sub: VertexSet = members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            if g.is_clique(sub) {
                best = best.max(sub.len());
            }
        }
        best
    }

    proptest! {
        #[test]
        fn clique_matches_enumeration(g in arb_graph(10), bits in any::<u64>()) {
            let s = VertexSet::from_bits(bits).intersection(g.vertices());
            prop_assert_eq!(g.max_clique_size(s), brute_clique(&g, s));
            prop_assert_eq!(g.max_clique_size(g.vertices()), brute_clique(&g, g.vertices()));
            let c = g.least_max_clique(s);
            prop_assert!(g.is_clique(c) && c.is_subset(s));
        }

        #[test]
        fn center_fits_in_a_max_clique(g in arb_graph(9), bits in any::<u64>()) {
            let s = VertexSet::from_bits(bits).intersection(g.vertices());
            if !s.is_empty() {
                let z = g.center(s);
                prop_assert!(z.len() <= g.max_clique_size(s));
                prop_assert!(z.is_subset(g.least_max_clique(s)));
            }
        }

        #[test]
        fn components_refine_g_components(
            g in arb_graph(8),
            bits in any::<u64>(),
            colls in prop::collection::vec(any::<u64>(), 0..4),
        ) {
            let s = VertexSet::from_bits(bits).intersection(g.vertices());
            let colls: Vec<VertexSet> = colls.into_iter()
                .map(|c| VertexSet::from_bits(c).intersection(g.vertices()))
                .collect();
            let coarse = g.g_components(s, &colls);
            for comp in g.components(s) {
                prop_assert!(coarse.iter().any(|c| comp.is_subset(*c)));
            }
            let union = coarse.iter().fold(VertexSet::EMPTY, |a, &c| a.union(c));
            prop_assert_eq!(union, s);
            prop_assert_eq!(g.g_components(s, &[]), g.components(s));
        }

        #[test]
        fn compress_expand_roundtrip(a in any::<u64>(), w in any::<u64>()) {
            let (a, w) = (VertexSet::from_bits(a), VertexSet::from_bits(w));
            prop_assert_eq!(a.compress(w).expand(w), a.intersection(w));
        }
    }
}
