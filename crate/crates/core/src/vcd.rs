//! Closed-form vcd of each leaf kind and aggregation over a tree.

use std::sync::Arc;

use crate::decompose::{build_tree, DecomposeOptions, DecompositionTree, Leaf, LeafKind};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rorg::Rorg;

/// One free factor `A_Δ` with its maximum clique size `d` and center rank `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorData {
    pub set: VertexSet,
    pub d: usize,
    pub z: usize,
}

/// Data of a Fouxe-Rabinovitch group `Out(A_{Δ_1} ∗ … ∗ A_{Δ_k} ∗ F_m; {A_{Δ_i}}ᵗ)`.
#[derive(Clone, Debug)]
pub struct FrLeafData {
    pub graph: Arc<Graph>,
    pub factors: Vec<FactorData>,
    /// Vertices spanning the free factor `F_m`.
    pub free: VertexSet,
}

impl FrLeafData {
    pub fn new(graph: Arc<Graph>, factors: &[VertexSet], free: VertexSet) -> Self {
        let factors = factors
            .iter()
            .map(|&set| FactorData {
                set,
                d: graph.max_clique_size(set),
                z: graph.center(set).len(),
            })
            .collect();
        FrLeafData { graph, factors, free }
    }

    pub fn from_leaf(leaf: &Leaf) -> Option<Self> {
        match &leaf.kind {
            LeafKind::FouxeRabinovitch { factors, free } => {
                Some(FrLeafData::new(Arc::clone(&leaf.graph), factors, *free))
            }
            _ => None,
        }
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn m(&self) -> usize {
        self.free.len()
    }
}

/// `(k + 2m − 2)·max_i d_i + Σ (d_i − z_i)` for `k ≥ 1`, `k + m ≥ 2`;
/// `2m − 3` for the free group `F_m`, `m ≥ 2`; `0` for the degenerate cases.
pub fn fr_vcd_from_parts(m: usize, factors: &[(usize, usize)]) -> usize {
    let k = factors.len();
    if k == 0 {
        return (2 * m).saturating_sub(3);
    }
    if k + m < 2 {
        return 0;
    }
    let max_d = factors.iter().map(|&(d, _)| d).max().unwrap_or(0);
    let excess: usize = factors.iter().map(|&(d, z)| d - z).sum();
    (k + 2 * m - 2) * max_d + excess
}

pub fn fr_vcd(data: &FrLeafData) -> usize {
    let parts: Vec<(usize, usize)> = data.factors.iter().map(|f| (f.d, f.z)).collect();
    fr_vcd_from_parts(data.m(), &parts)
}

/// `n(n − 1)/2`.
pub fn gl_vcd(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Precondition("GL(0, Z) is not a leaf".into()));
    }
    Ok(n * (n - 1) / 2)
}

pub fn leaf_vcd(leaf: &Leaf) -> usize {
    match &leaf.kind {
        LeafKind::FreeAbelian { rank } => *rank,
        LeafKind::GeneralLinear { n } => gl_vcd(*n).unwrap_or(0),
        LeafKind::FouxeRabinovitch { .. } => fr_vcd(&FrLeafData::from_leaf(leaf).expect("FR leaf")),
        LeafKind::Trivial => 0,
    }
}

/// Sum of the leaf values.
pub fn tree_vcd(tree: &DecompositionTree) -> usize {
    tree.leaves().into_iter().map(leaf_vcd).sum()
}

/// vcd of `Out(A_Γ; G, Hᵗ)`.
pub fn rorg_vcd(rorg: &Rorg, opts: &DecomposeOptions) -> Result<usize> {
    build_tree(rorg, opts).map(|t| tree_vcd(&t))
}

/// cd of `A_Γ / Z(A_Γ)`, i.e. `d(Γ) − z(Γ)`.
pub fn inner_dimension(g: &Graph) -> usize {
    let all = g.vertices();
    g.max_clique_size(all) - g.center(all).len()
}

/// vcd of `Aut(A_Γ)`. Only meaningful for the absolute group.
pub fn aut_vcd(rorg: &Rorg, opts: &DecomposeOptions) -> Result<usize> {
    if rorg.has_collections() {
        return Err(Error::Precondition(
            "Aut vcd is only defined here for empty collections".into(),
        ));
    }
    Ok(rorg_vcd(rorg, opts)? + inner_dimension(rorg.graph()))
}
