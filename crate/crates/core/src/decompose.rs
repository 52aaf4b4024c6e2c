//! Decomposition trees.
//!
//! Each node carries a saturated RORG. A node either splits along a short
//! exact sequence into a kernel and an image child, or is recognised as a
//! free abelian group, `GL(n, ℤ)`, a Fouxe-Rabinovitch group, or a finite
//! group. Read left to right (kernel before image), the leaves are the
//! consecutive quotients of a subnormal series for the root.

use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rorg::{Rorg, DEFAULT_VERTEX_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Kernel,
    Image,
}

/// Lexicographic complexity: vertex count, then admissible generator count.
pub type Measure = (usize, usize);

#[derive(Clone, Debug)]
pub struct NodeGroup {
    pub rorg: Rorg,
    pub path: Vec<Branch>,
    pub saturation_rounds: usize,
    pub measure: Measure,
}

impl NodeGroup {
    /// Saturates `rorg` and records its complexity.
    pub fn new(rorg: &Rorg, path: Vec<Branch>, vertex_cap: usize) -> Result<Self> {
        let sat = rorg.saturate_with_cap(vertex_cap)?;
        let measure = (sat.rorg.graph().len(), sat.rorg.generator_count());
        Ok(NodeGroup {
            rorg: sat.rorg,
            path,
            saturation_rounds: sat.rounds,
            measure,
        })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        self.rorg.graph()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    TrivialBase,
    Case1(VertexSet),
    Case2a,
    Case2b,
    Case2c,
    Case2d,
    Case2e,
}

impl CaseTag {
    pub fn label(&self) -> &'static str {
        match self {
            CaseTag::TrivialBase => "trivial",
            CaseTag::Case1(_) => "1",
            CaseTag::Case2a => "2a",
            CaseTag::Case2b => "2b",
            CaseTag::Case2c => "2c",
            CaseTag::Case2d => "2d",
            CaseTag::Case2e => "2e",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeafKind {
    FreeAbelian {
        rank: usize,
    },
    GeneralLinear {
        n: usize,
    },
    /// `A_Γ = A_{Δ_1} ∗ … ∗ A_{Δ_k} ∗ F_m` acting trivially on each `A_{Δ_i}`.
    /// `free` holds the `m` vertices spanning `F_m`.
    FouxeRabinovitch {
        factors: Vec<VertexSet>,
        free: VertexSet,
    },
    Trivial,
}

impl LeafKind {
    pub fn name(&self) -> &'static str {
        match self {
            LeafKind::FreeAbelian { .. } => "free_abelian",
            LeafKind::GeneralLinear { .. } => "general_linear",
            LeafKind::FouxeRabinovitch { .. } => "fouxe_rabinovitch",
            LeafKind::Trivial => "trivial",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Leaf {
    pub kind: LeafKind,
    /// Graph the leaf's vertex sets refer to.
    pub graph: Arc<Graph>,
    /// The node this leaf was read off from.
    pub source: CaseTag,
    pub path: Vec<Branch>,
}

#[derive(Clone, Debug)]
pub enum DecompositionTree {
    Leaf(Leaf),
    Split {
        node: Box<NodeGroup>,
        tag: CaseTag,
        kernel: Box<DecompositionTree>,
        image: Box<DecompositionTree>,
    },
    /// A node that is itself a leaf group.
    Terminal {
        node: Box<NodeGroup>,
        tag: CaseTag,
        leaf: Leaf,
    },
}

impl DecompositionTree {
    /// Leaves in series order: kernel subtree before image subtree.
    pub fn leaves(&self) -> Vec<&Leaf> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Leaf>) {
        match self {
            DecompositionTree::Leaf(l) | DecompositionTree::Terminal { leaf: l, .. } => out.push(l),
            DecompositionTree::Split { kernel, image, .. } => {
                kernel.collect_leaves(out);
                image.collect_leaves(out);
            }
        }
    }

    /// Every RORG node, preorder.
    pub fn nodes(&self) -> Vec<&NodeGroup> {
        let mut out = Vec::new();
        self.collect_nodes(&mut out);
        out
    }

    fn collect_nodes<'a>(&'a self, out: &mut Vec<&'a NodeGroup>) {
        match self {
            DecompositionTree::Leaf(_) => {}
            DecompositionTree::Terminal { node, .. } => out.push(node),
            DecompositionTree::Split {
                node, kernel, image, ..
            } => {
                out.push(node);
                kernel.collect_nodes(out);
                image.collect_nodes(out);
            }
        }
    }

    pub fn node(&self) -> Option<&NodeGroup> {
        match self {
            DecompositionTree::Leaf(_) => None,
            DecompositionTree::Split { node, .. } | DecompositionTree::Terminal { node, .. } => Some(node),
        }
    }

    /// Every parent → child measure pair along edges between RORG nodes.
    pub fn measure_edges(&self) -> Vec<(Measure, Measure)> {
        let mut out = Vec::new();
        self.collect_edges(&mut out);
        out
    }

    fn collect_edges(&self, out: &mut Vec<(Measure, Measure)>) {
        if let DecompositionTree::Split {
            node, kernel, image, ..
        } = self
        {
            for child in [kernel, image] {
                if let Some(c) = child.node() {
                    out.push((node.measure, c.measure));
                }
                child.collect_edges(out);
            }
        }
    }

    pub fn internal_count(&self) -> usize {
        match self {
            DecompositionTree::Split { kernel, image, .. } => 1 + kernel.internal_count() + image.internal_count(),
            _ => 0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DecomposeOptions {
    /// `0` picks the canonical Case-1 subgroup; any other value picks
    /// pseudo-randomly among eligible ones, deterministically per node.
    pub choice_seed: u64,
    pub vertex_cap: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            choice_seed: 0,
            vertex_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// Proper nonempty invariant vertex sets whose restriction map has
/// nontrivial image, ordered by size then lexicographically.
pub fn case1_candidates(rorg: &Rorg) -> Result<Vec<VertexSet>> {
    if !rorg.is_saturated() {
        return Err(Error::Unsaturated);
    }
    let all = rorg.vertices();
    let analysis = rorg.analysis();
    let mut out: Vec<VertexSet> = rorg
        .preserved()
        .iter()
        .copied()
        .filter(|&d| d != all && analysis.is_invariant(d) && analysis.restriction_nontrivial(d))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(out)
}

fn fingerprint(rorg: &Rorg) -> u64 {
    let mut h = DefaultHasher::new();
    rorg.graph().names().hash(&mut h);
    for (u, v) in rorg.graph().edges() {
        (u, v).hash(&mut h);
    }
    for s in rorg.preserved() {
        s.bits().hash(&mut h);
    }
    0xffu8.hash(&mut h);
    for s in rorg.fixed() {
        s.bits().hash(&mut h);
    }
    h.finish()
}

/// Members of `G ∪ H` that can glue components together. The full vertex
/// set is always preserved and carries no splitting information, so it only
/// counts when it is fixed (in which case the group is trivial anyway).
fn splitting_collections(rorg: &Rorg) -> Vec<VertexSet> {
    let all = rorg.vertices();
    rorg.preserved()
        .iter()
        .copied()
        .filter(|&s| s != all)
        .chain(rorg.fixed().iter().copied())
        .collect()
}

pub fn classify(node: &NodeGroup, choice_seed: u64) -> Result<CaseTag> {
    let rorg = &node.rorg;
    if !rorg.is_saturated() {
        return Err(Error::Unsaturated);
    }
    let g = rorg.graph();
    if g.len() <= 1 {
        return Ok(CaseTag::TrivialBase);
    }
    let candidates = case1_candidates(rorg)?;
    if !candidates.is_empty() {
        let pick = if choice_seed == 0 {
            0
        } else {
            ChaCha8Rng::seed_from_u64(choice_seed ^ fingerprint(rorg)).gen_range(0..candidates.len())
        };
        return Ok(CaseTag::Case1(candidates[pick]));
    }
    let all = rorg.vertices();
    if !g.is_connected(all) {
        let classes = g.g_components(all, &splitting_collections(rorg));
        return Ok(if classes.len() >= 2 {
            CaseTag::Case2a
        } else {
            CaseTag::Case2b
        });
    }
    let center = g.center(all);
    Ok(if center.is_empty() {
        CaseTag::Case2c
    } else if center == all {
        CaseTag::Case2e
    } else {
        CaseTag::Case2d
    })
}

/// A child produced by one decomposition step.
#[derive(Clone, Debug)]
pub enum Child {
    Node(Rorg),
    Leaf(LeafKind),
}

#[derive(Clone, Debug)]
pub enum Step {
    Leaf(LeafKind),
    Split { kernel: Child, image: Child },
}

fn invariant_violation(node: &NodeGroup, what: impl Into<String>) -> Error {
    Error::Invariant(format!(
        "{} at node {:?} (vertices {:?})",
        what.into(),
        node.path,
        node.graph().names()
    ))
}

fn free_abelian(rank: usize) -> LeafKind {
    if rank == 0 {
        LeafKind::Trivial
    } else {
        LeafKind::FreeAbelian { rank }
    }
}

pub fn decompose_step(node: &NodeGroup, tag: CaseTag) -> Result<Step> {
    let rorg = &node.rorg;
    if !rorg.is_saturated() {
        return Err(Error::Unsaturated);
    }
    let g = rorg.graph();
    let all = rorg.vertices();
    if !matches!(tag, CaseTag::TrivialBase | CaseTag::Case1(_)) && !case1_candidates(rorg)?.is_empty() {
        return Err(invariant_violation(
            node,
            "case-2 node still has a nontrivial restriction",
        ));
    }
    match tag {
        CaseTag::TrivialBase => Ok(Step::Leaf(
            if g.len() == 1 && !rorg.admissible_inversions().is_empty() {
                LeafKind::GeneralLinear { n: 1 }
            } else {
                LeafKind::Trivial
            },
        )),
        CaseTag::Case1(delta) => {
            if delta.is_empty() || delta == all || !rorg.restriction_nontrivial(delta)? {
                return Err(Error::Precondition(
                    "case-1 subgroup must be proper with nontrivial restriction".into(),
                ));
            }
            Ok(Step::Split {
                kernel: Child::Node(rorg.with_fixed(delta)),
                image: Child::Node(rorg.restrict(delta)),
            })
        }
        CaseTag::Case2a => {
            let colls = splitting_collections(rorg);
            let mut factors = Vec::new();
            let mut free = VertexSet::EMPTY;
            for class in g.g_components(all, &colls) {
                let lone = class.len() == 1 && g.link(class.first().unwrap()).is_empty();
                if lone && !colls.iter().any(|c| c.intersects(class)) {
                    free = free.union(class);
                } else {
                    factors.push(class);
                }
            }
            if factors.len() + free.len() < 2 {
                return Err(invariant_violation(node, "free factor decomposition is trivial"));
            }
            Ok(Step::Leaf(LeafKind::FouxeRabinovitch { factors, free }))
        }
        CaseTag::Case2b => {
            let analysis = rorg.analysis();
            let theta: VertexSet = all.iter().filter(|&v| analysis.star_separates(v, all)).collect();
            if !g.is_clique(theta) {
                return Err(invariant_violation(
                    node,
                    "star-separating vertices do not form a clique",
                ));
            }
            Ok(Step::Leaf(free_abelian(theta.len())))
        }
        CaseTag::Case2c => {
            let analysis = rorg.analysis();
            let rank = all.iter().map(|v| analysis.components(v).len().max(1) - 1).sum();
            Ok(Step::Leaf(free_abelian(rank)))
        }
        CaseTag::Case2d => {
            let center = g.center(all);
            let rest = all.difference(center);
            let leaf_transvections = center
                .iter()
                .flat_map(|w| rest.iter().map(move |u| (w, u)))
                .filter(|&(w, u)| rorg.transvection_admissible(w, u))
                .count();
            let (p, f) = rorg.restrict_collections(rest);
            let image = rorg.sub_rorg(rest, Vec::new(), p.into_iter().chain(f).collect());
            Ok(Step::Split {
                kernel: Child::Leaf(free_abelian(leaf_transvections)),
                image: Child::Node(image),
            })
        }
        CaseTag::Case2e => {
            let free = rorg.admissible_inversions();
            let pinned = all.difference(free);
            for v in free.iter() {
                for w in free.iter().filter(|&w| w != v) {
                    if !rorg.transvection_admissible(v, w) {
                        return Err(invariant_violation(
                            node,
                            "abelian node lacks a transvection among free vertices",
                        ));
                    }
                }
            }
            let rank_a = pinned
                .iter()
                .flat_map(|v| free.iter().map(move |w| (v, w)))
                .filter(|&(v, w)| rorg.transvection_admissible(v, w))
                .count();
            let gl = if free.is_empty() {
                LeafKind::Trivial
            } else {
                LeafKind::GeneralLinear { n: free.len() }
            };
            if rank_a == 0 {
                Ok(Step::Leaf(gl))
            } else {
                Ok(Step::Split {
                    kernel: Child::Leaf(LeafKind::FreeAbelian { rank: rank_a }),
                    image: Child::Leaf(gl),
                })
            }
        }
    }
}

pub fn build_tree(root: &Rorg, opts: &DecomposeOptions) -> Result<DecompositionTree> {
    build(root, Vec::new(), opts, None)
}

fn build(
    rorg: &Rorg,
    path: Vec<Branch>,
    opts: &DecomposeOptions,
    parent: Option<Measure>,
) -> Result<DecompositionTree> {
    let node = NodeGroup::new(rorg, path, opts.vertex_cap)?;
    if let Some(pm) = parent {
        if node.measure >= pm {
            return Err(invariant_violation(
                &node,
                format!("complexity {:?} did not drop below parent {:?}", node.measure, pm),
            ));
        }
    }
    let tag = classify(&node, opts.choice_seed)?;
    let make_leaf = |kind: LeafKind, path: Vec<Branch>| Leaf {
        kind,
        graph: Arc::clone(node.graph()),
        source: tag,
        path,
    };
    match decompose_step(&node, tag)? {
        Step::Leaf(kind) => {
            let leaf = make_leaf(kind, node.path.clone());
            Ok(DecompositionTree::Terminal {
                node: Box::new(node),
                tag,
                leaf,
            })
        }
        Step::Split { kernel, image } => {
            let grow = |child: Child, branch: Branch| -> Result<DecompositionTree> {
                let mut p = node.path.clone();
                p.push(branch);
                match child {
                    Child::Node(r) => build(&r, p, opts, Some(node.measure)),
                    Child::Leaf(kind) => Ok(DecompositionTree::Leaf(make_leaf(kind, p))),
                }
            };
            let kernel = grow(kernel, Branch::Kernel)?;
            let image = grow(image, Branch::Image)?;
            Ok(DecompositionTree::Split {
                node: Box::new(node),
                tag,
                kernel: Box::new(kernel),
                image: Box::new(image),
            })
        }
    }
}
