//! Explicit free abelian subgroups of Fouxe-Rabinovitch groups whose rank
//! equals the vcd.
//!
//! Put the factor of largest clique size first and fix a maximum clique
//! `A_i` in each factor. The subgroup of `Aut(A_Γ)` is generated by
//!
//! * left and right transvections of every free generator by every `a ∈ A_1`,
//! * partial conjugations of every other factor by every `a ∈ A_1`,
//! * for each factor `Δ_i` and each non-central `v ∈ A_i`, conjugation of
//!   `Δ_i` by `v`.
//!
//! Products of generators acting by `A_1` contribute a rank-`d_1` subgroup of
//! inner automorphisms, which is subtracted to get the rank in `Out`.

use std::sync::Arc;

use serde::Serialize;

use crate::decompose::{Leaf, LeafKind};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::raag::{Automorphism, GeneratorSymbol, Side};
use crate::rorg::Rorg;
use crate::vcd::{fr_vcd, FrLeafData};

#[derive(Clone, Debug)]
pub struct WitnessSet {
    pub graph: Arc<Graph>,
    pub generators: Vec<GeneratorSymbol>,
    pub aut_rank: usize,
    pub out_rank: usize,
    /// Factors in witness order (largest clique first); the group acts
    /// trivially on each.
    pub factors: Vec<VertexSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    /// Each generator is a well-defined automorphism admissible in the FR group.
    pub admissible: bool,
    /// No generator is the identity and no two coincide.
    pub nontrivial_distinct: bool,
    pub pairwise_commute: bool,
    /// Generator count equals the Aut rank.
    pub count_matches: bool,
    /// Out rank equals the closed-form vcd.
    pub rank_matches_vcd: bool,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.admissible
            && self.nontrivial_distinct
            && self.pairwise_commute
            && self.count_matches
            && self.rank_matches_vcd
    }
}

pub fn witness_fr(data: &FrLeafData) -> Result<WitnessSet> {
    let k = data.k();
    let m = data.m();
    if k == 0 || k + m < 2 {
        return Err(Error::Precondition(format!(
            "witness needs at least one factor and k + m >= 2 (k = {k}, m = {m})"
        )));
    }
    let g = &data.graph;
    let max_d = data.factors.iter().map(|f| f.d).max().unwrap_or(0);
    let first = data.factors.iter().position(|f| f.d == max_d).unwrap_or(0);
    let mut order: Vec<usize> = vec![first];
    order.extend((0..k).filter(|&i| i != first));
    let factors: Vec<VertexSet> = order.iter().map(|&i| data.factors[i].set).collect();

    let cliques: Vec<VertexSet> = factors.iter().map(|&f| g.least_max_clique(f)).collect();
    let top = cliques[0];
    let mut generators = Vec::new();
    for a in top.iter() {
        for x in data.free.iter() {
            for side in [Side::Right, Side::Left] {
                generators.push(GeneratorSymbol::Transvection {
                    side,
                    acting: a,
                    moved: x,
                });
            }
        }
    }
    for a in top.iter() {
        for &other in &factors[1..] {
            generators.push(GeneratorSymbol::PartialConjugation {
                acting: a,
                conjugated: other,
            });
        }
    }
    for (&factor, &clique) in factors.iter().zip(&cliques) {
        let center = g.center(factor);
        for v in clique.difference(center).iter() {
            generators.push(GeneratorSymbol::PartialConjugation {
                acting: v,
                conjugated: factor.difference(g.star(v)),
            });
        }
    }

    let d1 = data.factors[first].d;
    let excess: usize = data.factors.iter().map(|f| f.d - f.z).sum();
    let aut_rank = (2 * m + k - 1) * d1 + excess;
    Ok(WitnessSet {
        graph: Arc::clone(g),
        generators,
        aut_rank,
        out_rank: aut_rank - d1,
        factors,
    })
}

/// Witness for any Fouxe-Rabinovitch leaf. `Out(F_m)` is handled by viewing
/// one free generator as a cyclic factor, which gives rank `2m − 3`.
/// Returns `None` when the group is finite.
pub fn witness_for_leaf(leaf: &Leaf) -> Result<Option<WitnessSet>> {
    let LeafKind::FouxeRabinovitch { factors, free } = &leaf.kind else {
        return Err(Error::Precondition("not a Fouxe-Rabinovitch leaf".into()));
    };
    let graph = Arc::clone(&leaf.graph);
    if factors.is_empty() {
        if free.len() < 2 {
            return Ok(None);
        }
        let x = free.first().expect("nonempty");
        let data = FrLeafData::new(graph, &[VertexSet::singleton(x)], free.without(x));
        return witness_fr(&data).map(Some);
    }
    if factors.len() + free.len() < 2 {
        return Ok(None);
    }
    witness_fr(&FrLeafData::new(graph, factors, *free)).map(Some)
}

impl WitnessSet {
    pub fn automorphisms(&self) -> Result<Vec<Automorphism>> {
        self.generators
            .iter()
            .map(|&s| Automorphism::from_generator(Arc::clone(&self.graph), s))
            .collect()
    }

    pub fn verify(&self) -> Result<WitnessReport> {
        let g = &self.graph;
        let autos = match self.automorphisms() {
            Ok(a) => a,
            Err(Error::MalformedGenerator(_)) => {
                return Ok(WitnessReport {
                    admissible: false,
                    nontrivial_distinct: false,
                    pairwise_commute: false,
                    count_matches: false,
                    rank_matches_vcd: false,
                })
            }
            Err(e) => return Err(e),
        };

        let fr = Rorg::new(Arc::clone(g), Vec::new(), self.factors.clone())?;
        let admissible = self.generators.iter().all(|s| match *s {
            GeneratorSymbol::Inversion(v) => fr.admissible_inversions().contains(v),
            GeneratorSymbol::Transvection { acting, moved, .. } => fr.transvection_admissible(acting, moved),
            GeneratorSymbol::PartialConjugation { acting, conjugated } => fr
                .admissible_partial_conjugations(acting)
                .iter()
                .all(|c| c.is_subset(conjugated) || !c.intersects(conjugated)),
        });

        let nontrivial_distinct = autos.iter().all(|f| !f.is_identity())
            && autos.iter().enumerate().all(|(i, f)| autos[..i].iter().all(|h| h != f));

        let mut pairwise_commute = true;
        'outer: for (i, f) in autos.iter().enumerate() {
            for h in &autos[i + 1..] {
                if !f.commutes_with(h)? {
                    pairwise_commute = false;
                    break 'outer;
                }
            }
        }

        let free: VertexSet = g
            .vertices()
            .difference(self.factors.iter().fold(VertexSet::EMPTY, |a, &f| a.union(f)));
        let data = FrLeafData::new(Arc::clone(g), &self.factors, free);
        Ok(WitnessReport {
            admissible,
            nontrivial_distinct,
            pairwise_commute,
            count_matches: self.generators.len() == self.aut_rank,
            rank_matches_vcd: self.out_rank == fr_vcd(&data),
        })
    }

    pub fn describe(&self) -> Vec<String> {
        self.generators.iter().map(|s| s.describe(&self.graph)).collect()
    }
}
