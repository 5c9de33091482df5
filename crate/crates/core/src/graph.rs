//! Finite directed multigraphs and the order theory behind wiring diagrams.
//!
//! A wiring-diagram graph is a finite directed graph admitting a vertex
//! labeling that strictly increases along every arrow (equivalently, a DAG).
//! A WD graph is *skeleton* when no arrow duplicates or short-cuts a distinct
//! path between the same ordered vertex pair; the arrow set of a skeleton
//! graph is exactly the covering relation of the partial order it generates.

use crate::id::{ArrowId, VertexId};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

/// A finite directed multigraph: parallel arrows and isolated vertices are
/// allowed, loops are representable (and rejected later by the WD axioms).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    vertices: BTreeSet<VertexId>,
    arrows: BTreeMap<ArrowId, Arrow>,
}

/// Source and target of one arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub src: VertexId,
    pub dst: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(VertexId),
    #[error("duplicate arrow id `{0}`")]
    DuplicateArrow(ArrowId),
    #[error("arrow `{arrow}` references unknown vertex `{vertex}`")]
    UnknownEndpoint { arrow: ArrowId, vertex: VertexId },
    #[error("relation pair references vertex `{0}` outside the base set")]
    PairOutsideBase(VertexId),
}

/// Witness that a graph is not a WD graph: a loop (`v -> v`) or an oriented
/// cycle, reported as a closed vertex walk whose first and last entries agree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph contains an oriented cycle: {}", format_cycle(&.cycle))]
pub struct CycleError {
    pub cycle: Vec<VertexId>,
}

fn format_cycle(cycle: &[VertexId]) -> String {
    cycle
        .iter()
        .map(VertexId::as_str)
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// Why a [`RelationSet`] fails to be a partial order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotPartialOrderError {
    #[error("relation is not reflexive: missing ({0}, {0})")]
    NotReflexive(VertexId),
    #[error("relation is not antisymmetric: contains both ({0}, {1}) and ({1}, {0})")]
    NotAntisymmetric(VertexId, VertexId),
    #[error("relation is not transitive: ({0}, {1}) and ({1}, {2}) present but ({0}, {2}) missing")]
    NotTransitive(VertexId, VertexId, VertexId),
}

impl DirectedGraph {
    pub fn new() -> Self {
        Self {
            vertices: BTreeSet::new(),
            arrows: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, id: VertexId) -> Result<(), GraphError> {
        if !self.vertices.insert(id.clone()) {
            return Err(GraphError::DuplicateVertex(id));
        }
        Ok(())
    }

    pub fn add_arrow(&mut self, id: ArrowId, src: VertexId, dst: VertexId) -> Result<(), GraphError> {
        for endpoint in [&src, &dst] {
            if !self.vertices.contains(endpoint) {
                return Err(GraphError::UnknownEndpoint {
                    arrow: id,
                    vertex: endpoint.clone(),
                });
            }
        }
        if self.arrows.contains_key(&id) {
            return Err(GraphError::DuplicateArrow(id));
        }
        self.arrows.insert(id, Arrow { src, dst });
        Ok(())
    }

    /// Builds a graph from vertex names and `(src, dst)` pairs, generating
    /// arrow ids of the form `src->dst` (suffixed on parallels).
    pub fn from_pairs<'a>(
        vertices: impl IntoIterator<Item = &'a str>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(VertexId::from(v))?;
        }
        for (src, dst) in pairs {
            let id = g.fresh_arrow_id(&VertexId::from(src), &VertexId::from(dst));
            g.add_arrow(id, VertexId::from(src), VertexId::from(dst))?;
        }
        Ok(g)
    }

    /// An arrow id of the form `src->dst` that is not yet taken.
    pub fn fresh_arrow_id(&self, src: &VertexId, dst: &VertexId) -> ArrowId {
        let base = format!("{src}->{dst}");
        if !self.arrows.contains_key(&ArrowId::new(base.clone())) {
            return ArrowId::new(base);
        }
        let mut n = 2usize;
        loop {
            let candidate = ArrowId::new(format!("{base}#{n}"));
            if !self.arrows.contains_key(&candidate) {
                return candidate;
            }
            n += 1;
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    pub fn arrows(&self) -> impl Iterator<Item = (&ArrowId, &Arrow)> {
        self.arrows.iter()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, id: &ArrowId) -> Option<&Arrow> {
        self.arrows.get(id)
    }

    /// Ordered `(src, dst)` endpoint pairs, one entry per arrow. Parallel
    /// arrows collapse here, which is what the skeleton test checks against.
    pub fn arrow_pairs(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.arrows
            .values()
            .map(|a| (a.src.clone(), a.dst.clone()))
            .collect()
    }

    pub fn has_arrow_between(&self, src: &VertexId, dst: &VertexId) -> bool {
        self.arrows.values().any(|a| &a.src == src && &a.dst == dst)
    }

    pub fn arrows_between(&self, src: &VertexId, dst: &VertexId) -> Vec<ArrowId> {
        self.arrows
            .iter()
            .filter(|(_, a)| &a.src == src && &a.dst == dst)
            .map(|(id, _)| id.clone())
            .collect()
    }

    pub fn out_neighbors(&self, v: &VertexId) -> Vec<VertexId> {
        self.arrows
            .values()
            .filter(|a| &a.src == v)
            .map(|a| a.dst.clone())
            .collect()
    }

    pub fn in_neighbors(&self, v: &VertexId) -> Vec<VertexId> {
        self.arrows
            .values()
            .filter(|a| &a.dst == v)
            .map(|a| a.src.clone())
            .collect()
    }

    /// Removes a vertex together with every arrow incident to it.
    pub fn remove_vertex(&mut self, v: &VertexId) -> bool {
        if !self.vertices.remove(v) {
            return false;
        }
        self.arrows.retain(|_, a| &a.src != v && &a.dst != v);
        true
    }

    /// Removes all arrows (usually one) from `src` to `dst`.
    pub fn remove_arrows_between(&mut self, src: &VertexId, dst: &VertexId) -> usize {
        let before = self.arrows.len();
        self.arrows.retain(|_, a| !(&a.src == src && &a.dst == dst));
        before - self.arrows.len()
    }
}

impl Default for DirectedGraph {
    fn default() -> Self {
        Self::new()
    }
}

/// A bijective vertex labeling `V -> {1..n}` increasing along every arrow,
/// witnessing condition WD2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearExtension {
    positions: BTreeMap<VertexId, usize>,
}

impl LinearExtension {
    /// 1-based position of a vertex in the extension.
    pub fn position(&self, v: &VertexId) -> Option<usize> {
        self.positions.get(v).copied()
    }

    /// Vertices in extension order.
    pub fn order(&self) -> Vec<VertexId> {
        let mut vs: Vec<_> = self.positions.keys().cloned().collect();
        vs.sort_by_key(|v| self.positions[v]);
        vs
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// A reflexive binary relation on a vertex set. Produced from a WD graph it
/// is additionally transitive and antisymmetric, i.e. a partial order; the
/// diagonal is stored explicitly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationSet {
    base: BTreeSet<VertexId>,
    pairs: BTreeSet<(VertexId, VertexId)>,
}

impl RelationSet {
    /// The diagonal-only relation on `base`.
    pub fn reflexive_on(base: BTreeSet<VertexId>) -> Self {
        let pairs = base.iter().map(|v| (v.clone(), v.clone())).collect();
        Self { base, pairs }
    }

    /// Builds a relation from explicit pairs, forcing in the diagonal.
    pub fn from_pairs(
        base: BTreeSet<VertexId>,
        pairs: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut rel = Self::reflexive_on(base);
        for (x, y) in pairs {
            rel.insert(x, y)?;
        }
        Ok(rel)
    }

    pub fn insert(&mut self, x: VertexId, y: VertexId) -> Result<(), GraphError> {
        for v in [&x, &y] {
            if !self.base.contains(v) {
                return Err(GraphError::PairOutsideBase(v.clone()));
            }
        }
        self.pairs.insert((x, y));
        Ok(())
    }

    pub fn remove(&mut self, x: &VertexId, y: &VertexId) -> bool {
        self.pairs.remove(&(x.clone(), y.clone()))
    }

    pub fn contains(&self, x: &VertexId, y: &VertexId) -> bool {
        self.pairs.contains(&(x.clone(), y.clone()))
    }

    pub fn base(&self) -> &BTreeSet<VertexId> {
        &self.base
    }

    pub fn pairs(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.pairs
    }

    /// Number of pairs, reflexive ones included.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn nonreflexive_pairs(&self) -> impl Iterator<Item = &(VertexId, VertexId)> {
        self.pairs.iter().filter(|(x, y)| x != y)
    }

    pub fn is_subset(&self, other: &RelationSet) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// Checks reflexivity, antisymmetry and transitivity, reporting the first
    /// violated property with a witness.
    pub fn check_partial_order(&self) -> Result<(), NotPartialOrderError> {
        for v in &self.base {
            if !self.contains(v, v) {
                return Err(NotPartialOrderError::NotReflexive(v.clone()));
            }
        }
        for (x, y) in self.nonreflexive_pairs() {
            if self.contains(y, x) {
                return Err(NotPartialOrderError::NotAntisymmetric(x.clone(), y.clone()));
            }
        }
        for (x, y) in &self.pairs {
            for (y2, z) in &self.pairs {
                if y == y2 && !self.contains(x, z) {
                    return Err(NotPartialOrderError::NotTransitive(
                        x.clone(),
                        y.clone(),
                        z.clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn is_partial_order(&self) -> bool {
        self.check_partial_order().is_ok()
    }

    /// Covering pairs of a partial order: `(x, y)` with `x < y` and nothing
    /// strictly between. These are the arrows of the Hasse diagram.
    pub fn covering_pairs(&self) -> BTreeSet<(VertexId, VertexId)> {
        let mut covers = BTreeSet::new();
        for (x, y) in self.nonreflexive_pairs() {
            let has_intermediate = self.base.iter().any(|z| {
                z != x && z != y && self.contains(x, z) && self.contains(z, y)
            });
            if !has_intermediate {
                covers.insert((x.clone(), y.clone()));
            }
        }
        covers
    }
}

/// Checks condition WD2 by constructing a linear extension: a topological
/// order with ties broken by lexicographic vertex id. Its existence certifies
/// that `g` is a WD graph (equivalently, a DAG); otherwise the error carries
/// a witness loop or oriented cycle.
pub fn validate_wd_graph(g: &DirectedGraph) -> Result<LinearExtension, CycleError> {
    let mut indegree: BTreeMap<&VertexId, usize> =
        g.vertices().map(|v| (v, 0usize)).collect();
    for (_, a) in g.arrows() {
        if a.src == a.dst {
            return Err(CycleError {
                cycle: vec![a.src.clone(), a.dst.clone()],
            });
        }
        *indegree.get_mut(&a.dst).expect("arrow endpoints are vertices") += 1;
    }

    // Kahn's algorithm; the ready set is a BTreeSet so the smallest vertex id
    // is taken first, making the extension deterministic.
    let mut ready: BTreeSet<&VertexId> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(v, _)| *v)
        .collect();
    let mut positions = BTreeMap::new();
    let mut next = 1usize;
    while let Some(v) = ready.iter().next().cloned() {
        ready.remove(v);
        positions.insert(v.clone(), next);
        next += 1;
        for w in g.out_neighbors(v) {
            let d = indegree.get_mut(&w).expect("endpoint known");
            *d -= 1;
            if *d == 0 {
                let w_ref = g.vertices().find(|x| **x == w).expect("vertex known");
                ready.insert(w_ref);
            }
        }
    }

    if positions.len() == g.vertex_count() {
        Ok(LinearExtension { positions })
    } else {
        Err(CycleError {
            cycle: find_cycle(g, &positions),
        })
    }
}

/// Extracts an oriented cycle from the subgraph of vertices Kahn's algorithm
/// could not order. Every such vertex kept a positive in-degree there, so
/// walking predecessors inside that subgraph must revisit a vertex;
/// reversing the walk yields the cycle in arrow direction.
fn find_cycle(g: &DirectedGraph, ordered: &BTreeMap<VertexId, usize>) -> Vec<VertexId> {
    let remaining: BTreeSet<&VertexId> = g
        .vertices()
        .filter(|v| !ordered.contains_key(*v))
        .collect();
    let start = remaining.iter().next().expect("cycle exists");
    let mut walk: Vec<VertexId> = vec![(*start).clone()];
    let mut seen: BTreeMap<VertexId, usize> = BTreeMap::new();
    seen.insert((*start).clone(), 0);
    loop {
        let current = walk.last().expect("walk nonempty").clone();
        let next = g
            .in_neighbors(&current)
            .into_iter()
            .filter(|w| remaining.contains(w))
            .min()
            .expect("every remaining vertex keeps a remaining predecessor");
        if let Some(&at) = seen.get(&next) {
            // walk[at..] lists the cycle against arrow direction.
            let mut cycle = vec![next];
            cycle.extend(walk[at..].iter().rev().cloned());
            return cycle;
        }
        seen.insert(next.clone(), walk.len());
        walk.push(next);
    }
}

/// The reflexive-transitive closure `R(G)` of the arrow relation, computed by
/// a breadth-first reachability scan from each vertex. For a WD graph the
/// result is a partial order.
pub fn transitive_closure(g: &DirectedGraph) -> Result<RelationSet, CycleError> {
    validate_wd_graph(g)?;
    let mut rel = RelationSet::reflexive_on(g.vertex_set().clone());
    for v in g.vertices() {
        let mut queue: VecDeque<VertexId> = g.out_neighbors(v).into();
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        while let Some(u) = queue.pop_front() {
            if !seen.insert(u.clone()) {
                continue;
            }
            queue.extend(g.out_neighbors(&u));
        }
        for u in seen {
            rel.insert(v.clone(), u).expect("closure stays on the vertex set");
        }
    }
    Ok(rel)
}

/// Condition WD3: no arrow duplicates or short-cuts a distinct path between
/// the same ordered vertex pair. Equivalently the graph has no parallel
/// arrows and its arrow set equals the covering relation of `R(G)`; the
/// definitional path-enumeration check lives in [`crate::oracle`].
pub fn is_skeleton(g: &DirectedGraph) -> Result<bool, CycleError> {
    let closure = transitive_closure(g)?;
    let pairs = g.arrow_pairs();
    if pairs.len() != g.arrow_count() {
        return Ok(false); // parallel arrows
    }
    Ok(pairs == closure.covering_pairs())
}

/// Realizes a finite partial order as its Hasse diagram: the unique minimal
/// DAG whose transitive closure is `r`. The result passes [`is_skeleton`];
/// arrow ids are generated as `src->dst`.
pub fn transitive_reduction(r: &RelationSet) -> Result<DirectedGraph, NotPartialOrderError> {
    r.check_partial_order()?;
    let mut g = DirectedGraph::new();
    for v in r.base() {
        g.add_vertex(v.clone()).expect("base vertices unique");
    }
    for (x, y) in r.covering_pairs() {
        let id = g.fresh_arrow_id(&x, &y);
        g.add_arrow(id, x, y).expect("cover endpoints in base");
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn chain4() -> DirectedGraph {
        DirectedGraph::from_pairs(["A", "B", "C", "D"], [("A", "B"), ("B", "C"), ("C", "D")])
            .unwrap()
    }

    fn diamond() -> DirectedGraph {
        DirectedGraph::from_pairs(
            ["A", "B", "C", "D"],
            [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")],
        )
        .unwrap()
    }

    #[test]
    fn chain_linear_extension_is_the_chain_order() {
        let ext = validate_wd_graph(&chain4()).unwrap();
        for (v, pos) in [("A", 1), ("B", 2), ("C", 3), ("D", 4)] {
            assert_eq!(ext.position(&VertexId::from(v)), Some(pos));
        }
    }

    #[test]
    fn single_vertex_extension() {
        let g = DirectedGraph::from_pairs(["v"], []).unwrap();
        let ext = validate_wd_graph(&g).unwrap();
        assert_eq!(ext.position(&VertexId::from("v")), Some(1));
        assert_eq!(ext.len(), 1);
    }

    #[test]
    fn two_cycle_is_rejected_with_witness() {
        let g = DirectedGraph::from_pairs(["A", "B"], [("A", "B"), ("B", "A")]).unwrap();
        let err = validate_wd_graph(&g).unwrap_err();
        assert_eq!(
            err.cycle,
            vec![VertexId::from("A"), VertexId::from("B"), VertexId::from("A")]
        );
    }

    #[test]
    fn loop_is_rejected() {
        let g = DirectedGraph::from_pairs(["A"], [("A", "A")]).unwrap();
        let err = validate_wd_graph(&g).unwrap_err();
        assert_eq!(err.cycle, vec![VertexId::from("A"), VertexId::from("A")]);
    }

    // Expected closures below were computed by enumerating all paths by hand
    // on these 4-vertex graphs and are cross-checked against the
    // Floyd-Warshall oracle.
    #[test]
    fn diamond_closure() {
        let g = diamond();
        let rel = transitive_closure(&g).unwrap();
        let nonrefl: BTreeSet<_> = rel.nonreflexive_pairs().cloned().collect();
        let expect: BTreeSet<_> = [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D"), ("A", "D")]
            .into_iter()
            .map(|(x, y)| (VertexId::from(x), VertexId::from(y)))
            .collect();
        assert_eq!(nonrefl, expect);
        assert_eq!(rel.len(), expect.len() + 4);
        assert_eq!(rel, oracle::reachability_floyd_warshall(&g));
    }

    #[test]
    fn chain_closure_has_all_forward_pairs() {
        let g = chain4();
        let rel = transitive_closure(&g).unwrap();
        assert_eq!(rel.nonreflexive_pairs().count(), 6);
        assert_eq!(rel.len(), 10);
        assert_eq!(rel, oracle::reachability_floyd_warshall(&g));
    }

    #[test]
    fn arrowless_closure_is_diagonal() {
        let g = DirectedGraph::from_pairs(["X", "Y"], []).unwrap();
        let rel = transitive_closure(&g).unwrap();
        assert_eq!(rel.len(), 2);
        assert!(rel.contains(&VertexId::from("X"), &VertexId::from("X")));
        assert!(rel.contains(&VertexId::from("Y"), &VertexId::from("Y")));
    }

    #[test]
    fn skeleton_examples() {
        assert!(is_skeleton(&diamond()).unwrap());
        let shortcut = DirectedGraph::from_pairs(
            ["A", "B", "C"],
            [("A", "B"), ("B", "C"), ("A", "C")],
        )
        .unwrap();
        assert!(!is_skeleton(&shortcut).unwrap());
        let parallel =
            DirectedGraph::from_pairs(["A", "B"], [("A", "B"), ("A", "B")]).unwrap();
        assert!(!is_skeleton(&parallel).unwrap());
    }

    #[test]
    fn reduction_round_trips_chain() {
        let g = chain4();
        let rel = transitive_closure(&g).unwrap();
        let h = transitive_reduction(&rel).unwrap();
        assert_eq!(h.arrow_pairs(), g.arrow_pairs());
        assert!(is_skeleton(&h).unwrap());
    }

    #[test]
    fn reduction_of_diagonal_is_arrowless() {
        let base: BTreeSet<_> = ["X", "Y", "Z"].into_iter().map(VertexId::from).collect();
        let rel = RelationSet::reflexive_on(base);
        let g = transitive_reduction(&rel).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.arrow_count(), 0);
    }

    #[test]
    fn reduction_of_diamond_order_is_the_diamond_and_is_minimal() {
        let base: BTreeSet<_> = ["A", "B", "C", "D"].into_iter().map(VertexId::from).collect();
        let rel = RelationSet::from_pairs(
            base,
            [("A", "B"), ("A", "C"), ("B", "D"), ("C", "D"), ("A", "D")]
                .into_iter()
                .map(|(x, y)| (VertexId::from(x), VertexId::from(y))),
        )
        .unwrap();
        let g = transitive_reduction(&rel).unwrap();
        assert_eq!(g.arrow_pairs(), diamond().arrow_pairs());

        // Minimality, by brute force: no proper arrow subset has the same
        // closure.
        let pairs: Vec<_> = g.arrow_pairs().into_iter().collect();
        for mask in 0..(1u32 << pairs.len()) - 1 {
            let subset = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, (x, y))| (x.as_str(), y.as_str()))
                .collect::<Vec<_>>();
            let sub = DirectedGraph::from_pairs(["A", "B", "C", "D"], subset).unwrap();
            assert_ne!(transitive_closure(&sub).unwrap(), rel);
        }
    }

    #[test]
    fn reduction_rejects_non_orders() {
        let base: BTreeSet<_> = ["A", "B"].into_iter().map(VertexId::from).collect();
        let mut rel = RelationSet::reflexive_on(base.clone());
        rel.insert(VertexId::from("A"), VertexId::from("B")).unwrap();
        rel.insert(VertexId::from("B"), VertexId::from("A")).unwrap();
        assert!(matches!(
            transitive_reduction(&rel),
            Err(NotPartialOrderError::NotAntisymmetric(_, _))
        ));

        let base3: BTreeSet<_> = ["A", "B", "C"].into_iter().map(VertexId::from).collect();
        let mut rel3 = RelationSet::reflexive_on(base3);
        rel3.insert(VertexId::from("A"), VertexId::from("B")).unwrap();
        rel3.insert(VertexId::from("B"), VertexId::from("C")).unwrap();
        assert!(matches!(
            transitive_reduction(&rel3),
            Err(NotPartialOrderError::NotTransitive(_, _, _))
        ));
    }

    #[test]
    fn skeleton_agrees_with_path_enumeration_on_small_dags() {
        // Exhaustive over all digraphs on 4 labeled vertices.
        for g in oracle::all_digraphs(4) {
            if validate_wd_graph(&g).is_err() {
                continue;
            }
            assert_eq!(
                is_skeleton(&g).unwrap(),
                oracle::skeleton_by_path_enumeration(&g),
                "mismatch on {:?}",
                g.arrow_pairs()
            );
        }
    }

    #[test]
    fn closure_oracle_exhaustive_and_randomized() {
        use rand::{Rng, SeedableRng};

        // Exhaustive on 6 vertices over all arrow subsets of the natural
        // order; both implementations are equivariant under vertex
        // relabeling, so one representative per shape suffices.
        let names: Vec<String> = (0..6).map(|i| format!("v{i}")).collect();
        let mut pairs = Vec::new();
        for i in 0..6 {
            for j in (i + 1)..6 {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
        for mask in 0u32..(1 << pairs.len()) {
            let chosen: Vec<(&str, &str)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, (a, b))| (a.as_str(), b.as_str()))
                .collect();
            let g = DirectedGraph::from_pairs(names.iter().map(|s| s.as_str()), chosen).unwrap();
            assert_eq!(
                transitive_closure(&g).unwrap(),
                oracle::reachability_floyd_warshall(&g)
            );
        }

        // And on 1000 random DAGs with up to 10 vertices.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xc105);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=10);
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut chosen = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen_bool(0.3) {
                        chosen.push((names[i].clone(), names[j].clone()));
                    }
                }
            }
            let g = DirectedGraph::from_pairs(
                names.iter().map(|s| s.as_str()),
                chosen.iter().map(|(a, b)| (a.as_str(), b.as_str())),
            )
            .unwrap();
            assert_eq!(
                transitive_closure(&g).unwrap(),
                oracle::reachability_floyd_warshall(&g)
            );
        }
    }

    proptest! {
        // Random DAGs: arrows only from lower to higher index, so WD2 holds by
        // construction.
        #[test]
        fn closure_matches_reachability_oracle(edges in prop::collection::vec(any::<bool>(), 45), n in 2usize..10) {
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if edges[k % edges.len()] {
                        pairs.push((names[i].as_str(), names[j].as_str()));
                    }
                    k += 1;
                }
            }
            let g = DirectedGraph::from_pairs(names.iter().map(|s| s.as_str()), pairs).unwrap();
            let ext = validate_wd_graph(&g).unwrap();
            for (_, a) in g.arrows() {
                prop_assert!(ext.position(&a.src).unwrap() < ext.position(&a.dst).unwrap());
            }
            prop_assert_eq!(transitive_closure(&g).unwrap(), oracle::reachability_floyd_warshall(&g));
        }

        #[test]
        fn skeleton_round_trip(edges in prop::collection::vec(any::<bool>(), 21), n in 1usize..7) {
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    if edges[k % edges.len()] {
                        pairs.push((names[i].as_str(), names[j].as_str()));
                    }
                    k += 1;
                }
            }
            let g = DirectedGraph::from_pairs(names.iter().map(|s| s.as_str()), pairs).unwrap();
            // Reduce to a skeleton graph first; round-trip must then be exact.
            let skel = transitive_reduction(&transitive_closure(&g).unwrap()).unwrap();
            prop_assert!(is_skeleton(&skel).unwrap());
            let again = transitive_reduction(&transitive_closure(&skel).unwrap()).unwrap();
            prop_assert_eq!(again.arrow_pairs(), skel.arrow_pairs());
        }
    }
}
