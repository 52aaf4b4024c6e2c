//! Combinatorics of relative outer automorphism groups `Out⁰(A_Γ; G, Hᵗ)`.
//!
//! A [`Rorg`] is a graph together with a collection of preserved special
//! subgroups and a collection of fixed (trivially acted on) ones, each given
//! by its vertex set. Everything here is decided from which Laurence
//! generators are admissible for the pair of collections.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::raag::{GeneratorSymbol, Side};

/// Default vertex cap for the exhaustive subset scan in [`Rorg::saturate`].
pub const DEFAULT_VERTEX_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rorg {
    graph: Arc<Graph>,
    preserved: Vec<VertexSet>,
    fixed: Vec<VertexSet>,
    saturated: bool,
}

/// Output of [`Rorg::saturate_with_cap`].
#[derive(Clone, Debug)]
pub struct Saturation {
    pub rorg: Rorg,
    /// Number of scans performed, including the final one that added nothing.
    pub rounds: usize,
}

fn normalize_collection(graph: &Graph, sets: impl IntoIterator<Item = VertexSet>) -> Result<Vec<VertexSet>> {
    let mut out = Vec::new();
    for s in sets {
        if !s.is_subset(graph.vertices()) {
            return Err(Error::UnknownVertex(format!("{s:?}")));
        }
        if !s.is_empty() {
            out.push(s);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

impl Rorg {
    pub fn new(graph: Arc<Graph>, preserved: Vec<VertexSet>, fixed: Vec<VertexSet>) -> Result<Self> {
        let preserved = normalize_collection(&graph, preserved)?;
        let fixed = normalize_collection(&graph, fixed)?;
        Ok(Rorg {
            graph,
            preserved,
            fixed,
            saturated: false,
        })
    }

    /// `Out(A_Γ)` itself.
    pub fn absolute(graph: Graph) -> Self {
        Rorg {
            graph: Arc::new(graph),
            preserved: Vec::new(),
            fixed: Vec::new(),
            saturated: false,
        }
    }

    /// Convenience constructor taking collections by vertex names.
    pub fn with_names(graph: Graph, preserved: &[&[&str]], fixed: &[&[&str]]) -> Result<Self> {
        let lookup =
            |colls: &[&[&str]]| -> Result<Vec<VertexSet>> { colls.iter().map(|c| graph.vertex_set(c)).collect() };
        let (p, f) = (lookup(preserved)?, lookup(fixed)?);
        Rorg::new(Arc::new(graph), p, f)
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn preserved(&self) -> &[VertexSet] {
        &self.preserved
    }

    pub fn fixed(&self) -> &[VertexSet] {
        &self.fixed
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn vertices(&self) -> VertexSet {
        self.graph.vertices()
    }

    pub fn has_collections(&self) -> bool {
        !self.preserved.is_empty() || !self.fixed.is_empty()
    }

    /// Members of the preserved collection that do not contain `v`.
    pub fn g_superscript(&self, v: usize) -> Vec<VertexSet> {
        self.preserved.iter().copied().filter(|s| !s.contains(v)).collect()
    }

    /// `G^v ∪ H`, the collection governing transvections by `v` and partial
    /// conjugations by `v`.
    fn blocking(&self, v: usize) -> Vec<VertexSet> {
        self.preserved
            .iter()
            .copied()
            .filter(|s| !s.contains(v))
            .chain(self.fixed.iter().copied())
            .collect()
    }

    fn in_fixed(&self, v: usize) -> bool {
        self.fixed.iter().any(|s| s.contains(v))
    }

    /// Vertices lying in no fixed member.
    pub fn admissible_inversions(&self) -> VertexSet {
        self.vertices().iter().filter(|&v| !self.in_fixed(v)).collect()
    }

    /// Whether the transvection moving `moved` by `acting` is admissible.
    pub fn transvection_admissible(&self, acting: usize, moved: usize) -> bool {
        acting != moved
            && self.graph.link(moved).is_subset(self.graph.star(acting))
            && !self.blocking(acting).iter().any(|s| s.contains(moved))
    }

    /// Admissible `(acting, moved)` pairs, ordered.
    pub fn admissible_transvections(&self) -> Vec<(usize, usize)> {
        let n = self.graph.len();
        (0..n)
            .flat_map(|v| (0..n).map(move |w| (v, w)))
            .filter(|&(v, w)| self.transvection_admissible(v, w))
            .collect()
    }

    /// The `(G^v ∪ H)`-components of `Γ − st(v)`. Admissible partial
    /// conjugations by `v` conjugate unions of these.
    pub fn admissible_partial_conjugations(&self, v: usize) -> Vec<VertexSet> {
        let outside = self.vertices().difference(self.graph.star(v));
        self.graph.g_components(outside, &self.blocking(v))
    }

    /// `w ≤ v` in the preorder defined by admissible transvections.
    pub fn leq(&self, w: usize, v: usize) -> bool {
        w == v || self.transvection_admissible(v, w)
    }

    pub fn star_separates(&self, v: usize, delta: VertexSet) -> bool {
        self.admissible_partial_conjugations(v)
            .iter()
            .filter(|c| c.intersects(delta))
            .nth(1)
            .is_some()
    }

    pub fn analysis(&self) -> Analysis {
        Analysis::new(self)
    }

    /// `A_Δ` is invariant under the group.
    pub fn is_invariant(&self, delta: VertexSet) -> bool {
        self.analysis().is_invariant(delta)
    }

    /// The group acts trivially on `A_Δ`.
    pub fn acts_trivially(&self, delta: VertexSet) -> bool {
        let a = self.analysis();
        delta.iter().all(|v| self.in_fixed(v)) && self.vertices().iter().all(|v| !a.star_separates(v, delta))
    }

    pub fn saturate(&self) -> Result<Rorg> {
        self.saturate_with_cap(DEFAULT_VERTEX_CAP).map(|s| s.rorg)
    }

    /// Adds every nonempty invariant vertex set to the preserved collection,
    /// re-scanning against the enlarged collection until nothing changes.
    pub fn saturate_with_cap(&self, cap: usize) -> Result<Saturation> {
        let n = self.graph.len();
        if n > cap {
            return Err(Error::TooManyVertices { count: n, cap });
        }
        let mut current = self.clone();
        let mut rounds = 0;
        loop {
            rounds += 1;
            let analysis = current.analysis();
            let full = self.vertices().bits();
            let mut found: Vec<VertexSet> = (1..=full)
                .map(VertexSet::from_bits)
                .filter(|&d| analysis.is_invariant(d))
                .collect();
            found.extend_from_slice(&current.preserved);
            found.sort();
            found.dedup();
            if found == current.preserved {
                current.saturated = true;
                return Ok(Saturation { rorg: current, rounds });
            }
            current.preserved = found;
        }
    }

    /// `({Δ∩Θ : Θ ∈ G} ∖ {∅, Δ}, {Δ∩Θ : Θ ∈ H} ∖ {∅, Δ})`, in ambient indices.
    pub fn restrict_collections(&self, delta: VertexSet) -> (Vec<VertexSet>, Vec<VertexSet>) {
        let restrict = |colls: &[VertexSet]| {
            let mut out: Vec<VertexSet> = colls
                .iter()
                .map(|s| s.intersection(delta))
                .filter(|s| !s.is_empty() && *s != delta)
                .collect();
            out.sort();
            out.dedup();
            out
        };
        (restrict(&self.preserved), restrict(&self.fixed))
    }

    /// The RORG on the induced subgraph `Δ` with restricted collections,
    /// re-indexed to the subgraph.
    pub fn restrict(&self, delta: VertexSet) -> Rorg {
        let (p, f) = self.restrict_collections(delta);
        self.sub_rorg(delta, p, f)
    }

    /// Builds a RORG on the induced subgraph `delta` from collections given
    /// in ambient indices.
    pub(crate) fn sub_rorg(&self, delta: VertexSet, preserved: Vec<VertexSet>, fixed: Vec<VertexSet>) -> Rorg {
        let graph = Arc::new(self.graph.induced(delta));
        let squeeze = |colls: Vec<VertexSet>| colls.into_iter().map(|s| s.compress(delta));
        Rorg::new(graph, squeeze(preserved).collect(), squeeze(fixed).collect())
            .expect("restricted collections stay inside the subgraph")
    }

    /// The same graph with `delta` appended to the fixed collection.
    pub(crate) fn with_fixed(&self, delta: VertexSet) -> Rorg {
        let mut fixed = self.fixed.clone();
        fixed.push(delta);
        Rorg::new(Arc::clone(&self.graph), self.preserved.clone(), fixed).expect("delta lies inside the graph")
    }

    /// Whether some admissible generator restricts to a nontrivial outer
    /// automorphism of `A_Δ`.
    pub fn restriction_nontrivial(&self, delta: VertexSet) -> Result<bool> {
        if !self.saturated {
            return Err(Error::Unsaturated);
        }
        if delta.is_empty() || delta == self.vertices() || !delta.is_subset(self.vertices()) {
            return Err(Error::Precondition(
                "restriction target must be proper and nonempty".into(),
            ));
        }
        let analysis = self.analysis();
        if !analysis.is_invariant(delta) {
            return Err(Error::Precondition("restriction target is not invariant".into()));
        }
        Ok(analysis.restriction_nontrivial(delta))
    }

    /// Whether the admissible generator `g` preserves `A_Δ` up to conjugacy.
    pub fn generator_preserves(&self, g: &GeneratorSymbol, delta: VertexSet) -> bool {
        match *g {
            GeneratorSymbol::Inversion(_) => true,
            GeneratorSymbol::Transvection { acting, moved, .. } => !delta.contains(moved) || delta.contains(acting),
            GeneratorSymbol::PartialConjugation { acting, conjugated } => {
                delta.contains(acting)
                    || !delta.intersects(conjugated)
                    || delta.is_subset(conjugated.union(self.graph.star(acting)))
            }
        }
    }

    /// Every admissible Laurence generator: inversions, left and right
    /// transvections, and partial conjugations of every union of admissible
    /// components other than the empty union and the full (inner) one.
    ///
    /// The partial-conjugation count is exponential in the number of
    /// components; meant for small graphs.
    pub fn admissible_generators(&self) -> Vec<GeneratorSymbol> {
        let mut out: Vec<GeneratorSymbol> = self
            .admissible_inversions()
            .iter()
            .map(GeneratorSymbol::Inversion)
            .collect();
        for (acting, moved) in self.admissible_transvections() {
            for side in [Side::Left, Side::Right] {
                out.push(GeneratorSymbol::Transvection { side, acting, moved });
            }
        }
        for v in self.vertices().iter() {
            let comps = self.admissible_partial_conjugations(v);
            let k = comps.len();
            for mask in 1u64..(1u64 << k).saturating_sub(1) {
                let conjugated = comps
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(VertexSet::EMPTY, |a, (_, &c)| a.union(c));
                out.push(GeneratorSymbol::PartialConjugation { acting: v, conjugated });
            }
        }
        out
    }

    /// `#inversions + #transvection pairs + Σ_v (N_v − 1)`.
    pub fn generator_count(&self) -> usize {
        let pcs: usize = self
            .vertices()
            .iter()
            .map(|v| self.admissible_partial_conjugations(v).len().max(1) - 1)
            .sum();
        self.admissible_inversions().len() + self.admissible_transvections().len() + pcs
    }

    pub fn describe_collection(&self, colls: &[VertexSet]) -> Vec<Vec<String>> {
        colls.iter().map(|&s| self.graph.set_names(s)).collect()
    }
}

/// Precomputed preorder and partial-conjugation components of a [`Rorg`],
/// for repeated invariance queries.
#[derive(Clone, Debug)]
pub struct Analysis {
    vertices: VertexSet,
    /// `up[w] = {v : w ≤ v}`.
    up: Vec<VertexSet>,
    /// Admissible partial-conjugation components per acting vertex.
    components: Vec<Vec<VertexSet>>,
    inversions: VertexSet,
    /// Vertices moved by at least one admissible transvection.
    moved: VertexSet,
}

impl Analysis {
    fn new(r: &Rorg) -> Self {
        let n = r.graph.len();
        let mut up: Vec<VertexSet> = (0..n).map(VertexSet::singleton).collect();
        let mut moved = VertexSet::EMPTY;
        for (acting, w) in r.admissible_transvections() {
            up[w].insert(acting);
            moved.insert(w);
        }
        Analysis {
            vertices: r.vertices(),
            up,
            components: (0..n).map(|v| r.admissible_partial_conjugations(v)).collect(),
            inversions: r.admissible_inversions(),
            moved,
        }
    }

    pub fn upper_set(&self, w: usize) -> VertexSet {
        self.up[w]
    }

    pub fn components(&self, v: usize) -> &[VertexSet] {
        &self.components[v]
    }

    pub fn is_upward_closed(&self, delta: VertexSet) -> bool {
        delta.iter().all(|w| self.up[w].is_subset(delta))
    }

    pub fn star_separates(&self, v: usize, delta: VertexSet) -> bool {
        self.components[v]
            .iter()
            .filter(|c| c.intersects(delta))
            .nth(1)
            .is_some()
    }

    pub fn is_invariant(&self, delta: VertexSet) -> bool {
        self.is_upward_closed(delta)
            && self
                .vertices
                .difference(delta)
                .iter()
                .all(|v| !self.star_separates(v, delta))
    }

    /// Inversion of a vertex in `Δ`, a transvection moving a vertex of `Δ`,
    /// or a partial conjugation by a vertex that star-separates `Δ`. A single
    /// component `C` witnesses the last case: `Δ ∩ C ≠ ∅` and
    /// `Δ ⊄ C ∪ st(v)`.
    pub fn restriction_nontrivial(&self, delta: VertexSet) -> bool {
        delta.intersects(self.inversions)
            || delta.intersects(self.moved)
            || self.vertices.iter().any(|v| self.star_separates(v, delta))
    }
}
