//! The category of skeleton WD graphs over a fixed vertex set.
//!
//! Objects are skeleton WD graphs on the same vertices; there is a morphism
//! `G1 => G2` exactly when `R(G2) ⊆ R(G1)`, i.e. when the partial order
//! generated by `G2` imposes fewer constraints. Hom-sets have at most one
//! element, so a morphism is represented by its witness inclusion alone.
//! A morphism is *irreducible* when no partial order lies strictly between
//! the two orders; such morphisms are the covers of the inclusion lattice and
//! drive the graph-replacement edit operations.

use crate::graph::{
    is_skeleton, transitive_closure, transitive_reduction, CycleError, DirectedGraph, RelationSet,
};
use crate::id::VertexId;
use std::collections::BTreeSet;
use thiserror::Error;

/// A validated skeleton WD graph with its cached partial order `R(G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonWdGraph {
    graph: DirectedGraph,
    order: RelationSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error("graph is not skeleton: an arrow duplicates or short-cuts a path")]
    NotSkeleton,
    #[error("graphs live on different vertex sets")]
    VertexSetMismatch,
}

impl SkeletonWdGraph {
    pub fn new(graph: DirectedGraph) -> Result<Self, CatError> {
        if !is_skeleton(&graph)? {
            return Err(CatError::NotSkeleton);
        }
        let order = transitive_closure(&graph).expect("validated above");
        Ok(Self { graph, order })
    }

    /// The Hasse diagram of a partial order, as a skeleton graph.
    pub fn from_order(order: &RelationSet) -> Result<Self, CatError> {
        let graph = transitive_reduction(order).map_err(|_| CatError::NotSkeleton)?;
        Ok(Self {
            graph,
            order: order.clone(),
        })
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn order(&self) -> &RelationSet {
        &self.order
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        self.graph.vertex_set()
    }
}

/// A morphism `src => dst` in the category, witnessed by the inclusion
/// `R(dst) ⊆ R(src)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WdMorphism {
    pub src: SkeletonWdGraph,
    pub dst: SkeletonWdGraph,
    /// The included pair set, `R(dst)`; every pair also lies in `R(src)`.
    pub witness: BTreeSet<(VertexId, VertexId)>,
}

impl WdMorphism {
    pub fn is_identity(&self) -> bool {
        self.src.order() == self.dst.order()
    }

    /// Pairs of `R(src)` absent from `R(dst)`.
    pub fn dropped_pairs(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.src
            .order()
            .pairs()
            .difference(self.dst.order().pairs())
            .cloned()
            .collect()
    }
}

/// Returns the morphism `g1 => g2` if it exists, i.e. if `R(g2) ⊆ R(g1)`.
/// `g1 == g2` yields the identity morphism.
pub fn morphism_exists(
    g1: &SkeletonWdGraph,
    g2: &SkeletonWdGraph,
) -> Result<Option<WdMorphism>, CatError> {
    if g1.vertex_set() != g2.vertex_set() {
        return Err(CatError::VertexSetMismatch);
    }
    if !g2.order().is_subset(g1.order()) {
        return Ok(None);
    }
    Ok(Some(WdMorphism {
        src: g1.clone(),
        dst: g2.clone(),
        witness: g2.order().pairs().clone(),
    }))
}

/// Whether a morphism is irreducible: no skeleton graph `G3` satisfies
/// `R(dst) ⊊ R(G3) ⊊ R(src)`.
///
/// Implemented as `|R(src) \ R(dst)| == 1`. Dropping one pair leaves no room
/// for a strict intermediate; conversely, when two or more pairs differ, the
/// difference always contains a covering pair of `R(src)` whose removal is a
/// strict intermediate partial order. The definitional enumeration lives in
/// [`crate::oracle::irreducible_by_enumeration`] and the two are checked
/// against each other exhaustively in tests. Identity morphisms are not
/// irreducible.
pub fn is_irreducible(m: &WdMorphism) -> bool {
    m.dropped_pairs().len() == 1
}

/// Direction for [`enumerate_covers`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverDirection {
    /// Graphs `g'` with an irreducible morphism `g => g'` (one order pair
    /// dropped).
    Down,
    /// Graphs `g''` with an irreducible morphism `g'' => g` (one order pair
    /// added).
    Up,
}

/// All neighbors of `g` in the inclusion lattice of partial orders on its
/// vertex set, each returned as the Hasse diagram of its order.
pub fn enumerate_covers(g: &SkeletonWdGraph, direction: CoverDirection) -> Vec<SkeletonWdGraph> {
    let order = g.order();
    let mut out = Vec::new();
    match direction {
        CoverDirection::Down => {
            // Removing (x, y) keeps transitivity exactly when (x, y) is a
            // covering pair, and the covering pairs of a skeleton graph's
            // order are its arrows.
            for (x, y) in order.covering_pairs() {
                let mut smaller = order.clone();
                smaller.remove(&x, &y);
                out.push(SkeletonWdGraph::from_order(&smaller).expect("still a partial order"));
            }
        }
        CoverDirection::Up => {
            let base: Vec<&VertexId> = order.base().iter().collect();
            for x in &base {
                for y in &base {
                    if x == y || order.contains(x, y) || order.contains(y, x) {
                        continue;
                    }
                    let mut larger = order.clone();
                    larger
                        .insert((*x).clone(), (*y).clone())
                        .expect("pair stays on base");
                    if larger.is_partial_order() {
                        out.push(
                            SkeletonWdGraph::from_order(&larger).expect("checked partial order"),
                        );
                    }
                }
            }
        }
    }
    out
}
