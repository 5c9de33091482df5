//! Exact edit distance between skeleton wiring diagrams.
//!
//! The distance is the minimum summed cost over edit paths whose new labels
//! are drawn from an explicit finite [`LabelUniverse`]; without that bound
//! the add/change operations would branch over unboundedly many labels. The
//! search runs A* over isomorphism classes of diagrams: operation
//! applicability and cost are invariant under relabeling of vertex ids, so
//! quotienting by [`canonical_key`] is sound, and the heuristic below is
//! admissible and consistent, so the first time the goal class is popped its
//! cost is the exact distance.
//!
//! The heuristic: every operation edits the multiset of state vectors by at
//! most one element (insert, remove, or replace), so the multiset edit count
//! times the cheapest operation cost never overestimates a remaining path.

use crate::canon::{canonical_key, wd_isomorphic, CanonicalKey};
use crate::cat::{enumerate_covers, CoverDirection, SkeletonWdGraph};
use crate::edit::{
    apply_op, replay_path, ChangeRule, CostFunction, EditError, EditOp, EditPath, GraphSpec,
};
use crate::id::VertexId;
use crate::olog::{olog_distance, OlogDistance};
use crate::sensor::SensorSet;
use crate::wd::{Label, WiringDiagram};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

/// The finite label alphabet a distance search may draw on, together with
/// the declarations that type those labels.
#[derive(Debug, Clone)]
pub struct LabelUniverse {
    pub sensors: SensorSet,
    pub labels: BTreeSet<Label>,
}

impl LabelUniverse {
    /// Universe containing exactly the labels of the two endpoint diagrams,
    /// over the union of their sensor catalogs.
    pub fn from_endpoints(w: &WiringDiagram, w2: &WiringDiagram) -> Result<Self, EditError> {
        let mut sensors = SensorSet::new();
        sensors.merge_all(&w.sensors)?;
        sensors.merge_all(&w2.sensors)?;
        let mut labels = w.all_labels();
        labels.extend(w2.all_labels());
        Ok(Self { sensors, labels })
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.labels.insert(label);
        self
    }

    /// Under an olog-backed change rule, also admits every mapped label whose
    /// type lies within `radius` of some current label's type. Labels whose
    /// sensors are not declared in the universe are skipped.
    pub fn expand_by_olog(mut self, cost: &CostFunction, radius: f64) -> Self {
        let ChangeRule::OlogBacked(backed) = &cost.change else {
            return self;
        };
        let current_types: Vec<_> = self
            .labels
            .iter()
            .filter_map(|l| backed.label_types.get(l).cloned())
            .collect();
        for (label, ty) in &backed.label_types {
            if self.labels.contains(label) || !self.sensors.contains(&label.sensor) {
                continue;
            }
            let near = current_types.iter().any(|t| {
                matches!(
                    olog_distance(&backed.olog, &backed.edge_cost, t, ty),
                    Ok(OlogDistance::Finite(d)) if d <= radius + 1e-9
                )
            });
            if near {
                self.labels.insert(label.clone());
            }
        }
        self
    }
}

/// Rebuilds `w` over a different sensor catalog; the diagram's identity
/// (graph and state vectors) is unchanged.
pub fn with_catalog(w: &WiringDiagram, sensors: &SensorSet) -> WiringDiagram {
    let mut out = WiringDiagram::new(sensors.clone());
    for (v, labels) in w.state_vectors() {
        out.add_vertex(v.clone(), labels.iter().cloned())
            .expect("vertices unique");
    }
    for (_, a) in w.graph().arrows() {
        out.connect(a.src.clone(), a.dst.clone())
            .expect("endpoints exist");
    }
    out
}

/// The union of both diagrams' sensor catalogs.
pub fn merged_sensors(w: &WiringDiagram, w2: &WiringDiagram) -> Result<SensorSet, EditError> {
    let mut sensors = SensorSet::new();
    sensors.merge_all(&w.sensors)?;
    sensors.merge_all(&w2.sensors)?;
    Ok(sensors)
}

/// All valid single operations on `w` with labels drawn from `universe`.
/// This is the successor relation of the metric's search space; the
/// brute-force oracle re-enumerates it independently.
pub fn enumerate_ops(w: &WiringDiagram, universe: &LabelUniverse) -> Vec<EditOp> {
    let mut ops = Vec::new();
    let vertices: Vec<VertexId> = w.graph().vertices().cloned().collect();

    for v in &vertices {
        let vector = w.state_vector(v).expect("vertex has a vector");
        for label in universe.labels.iter() {
            if vector.contains(label) {
                continue;
            }
            ops.push(EditOp::AddLabel {
                vertex: v.clone(),
                label: label.clone(),
            });
            for from in vector {
                ops.push(EditOp::ChangeLabel {
                    vertex: v.clone(),
                    from: from.clone(),
                    to: label.clone(),
                });
            }
        }
        if vector.len() >= 2 {
            for label in vector {
                ops.push(EditOp::DeleteLabel {
                    vertex: v.clone(),
                    label: label.clone(),
                });
            }
        }
        if vertices.len() >= 2 {
            ops.push(EditOp::DeleteVertex { vertex: v.clone() });
        }
    }

    for (src, dst) in w.graph().arrow_pairs() {
        ops.push(EditOp::DeleteArrow { src, dst });
    }
    for src in &vertices {
        for dst in &vertices {
            if src != dst && !w.graph().has_arrow_between(src, dst) {
                ops.push(EditOp::AddArrow {
                    src: src.clone(),
                    dst: dst.clone(),
                });
            }
        }
    }

    if let Ok(current) = SkeletonWdGraph::new(w.graph().clone()) {
        for down in enumerate_covers(&current, CoverDirection::Down) {
            ops.push(EditOp::Generalize {
                replacement: GraphSpec::of(down.graph()),
            });
        }
        for up in enumerate_covers(&current, CoverDirection::Up) {
            ops.push(EditOp::Specialize {
                replacement: GraphSpec::of(up.graph()),
            });
        }
    }

    // Vertex additions: every nonempty label subset of the universe and
    // every way of wiring the new vertex to the existing ones (no arrow,
    // incoming, or outgoing per existing vertex). Whether an addition keeps
    // the graph a skeleton DAG does not depend on the labels, so wirings
    // are filtered once instead of once per label subset.
    let fresh = fresh_vertex_id(w);
    let valid_wirings: Vec<BTreeSet<(VertexId, VertexId)>> = wirings(&fresh, &vertices)
        .into_iter()
        .filter(|wiring| {
            let mut graph = w.graph().clone();
            graph.add_vertex(fresh.clone()).expect("fresh id");
            for (src, dst) in wiring {
                let id = graph.fresh_arrow_id(src, dst);
                graph
                    .add_arrow(id, src.clone(), dst.clone())
                    .expect("endpoints exist");
            }
            crate::graph::is_skeleton(&graph).unwrap_or(false)
        })
        .collect();
    let labels: Vec<&Label> = universe.labels.iter().collect();
    let subset_count = 1usize << labels.len();
    for mask in 1..subset_count {
        let label_set: BTreeSet<Label> = labels
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, l)| (*l).clone())
            .collect();
        for wiring in &valid_wirings {
            ops.push(EditOp::AddVertex {
                vertex: fresh.clone(),
                labels: label_set.clone(),
                arrows: wiring.clone(),
            });
        }
    }

    ops
}

fn fresh_vertex_id(w: &WiringDiagram) -> VertexId {
    let mut n = 0usize;
    loop {
        let candidate = VertexId::new(format!("+{n}"));
        if !w.graph().contains_vertex(&candidate) {
            return candidate;
        }
        n += 1;
    }
}

/// All 3^n ways of connecting a new vertex to `others`: per existing vertex
/// no arrow, an incoming arrow, or an outgoing arrow.
fn wirings(new: &VertexId, others: &[VertexId]) -> Vec<BTreeSet<(VertexId, VertexId)>> {
    let mut out = vec![BTreeSet::new()];
    for other in others {
        let mut next = Vec::with_capacity(out.len() * 3);
        for wiring in &out {
            next.push(wiring.clone());
            let mut incoming = wiring.clone();
            incoming.insert((other.clone(), new.clone()));
            next.push(incoming);
            let mut outgoing = wiring.clone();
            outgoing.insert((new.clone(), other.clone()));
            next.push(outgoing);
        }
        out = next;
    }
    out
}

/// Multiset edit count from a diagram's state vectors to the goal's:
/// `max(|V|, |V_goal|)` minus the size of the multiset intersection.
fn vector_multiset_gap(a: &WiringDiagram, goal_vectors: &BTreeMap<Vec<Label>, usize>) -> usize {
    let mut counts: BTreeMap<Vec<Label>, usize> = BTreeMap::new();
    let mut n_a = 0usize;
    for (_, vector) in a.state_vectors() {
        *counts.entry(vector.iter().cloned().collect()).or_default() += 1;
        n_a += 1;
    }
    let n_goal: usize = goal_vectors.values().sum();
    let mut common = 0usize;
    for (vector, count) in &counts {
        if let Some(goal_count) = goal_vectors.get(vector) {
            common += count.min(goal_count);
        }
    }
    n_a.max(n_goal) - common
}

/// Result of an exact search: the distance and, when the diagrams are not
/// already isomorphic, one witnessing minimal edit path. The path applies to
/// the start diagram over the merged sensor catalog (see [`with_catalog`]).
#[derive(Debug, Clone)]
pub struct ExactDistance {
    pub distance: f64,
    pub path: Option<EditPath>,
}

/// Exact edit distance between `w` and `w2` over `universe`, by A* on
/// isomorphism classes. Returns 0 exactly when the diagrams are isomorphic.
/// When every path would cost more than `budget` the search stops with
/// [`EditError::BudgetExceeded`] carrying the best constructive upper bound.
pub fn wd_distance_exact(
    w: &WiringDiagram,
    w2: &WiringDiagram,
    cost: &CostFunction,
    universe: &LabelUniverse,
    budget: f64,
) -> Result<f64, EditError> {
    Ok(wd_distance_exact_witness(w, w2, cost, universe, budget)?.distance)
}

/// [`wd_distance_exact`] plus a witnessing minimal path.
pub fn wd_distance_exact_witness(
    w: &WiringDiagram,
    w2: &WiringDiagram,
    cost: &CostFunction,
    universe: &LabelUniverse,
    budget: f64,
) -> Result<ExactDistance, EditError> {
    // Search over the merged sensor catalog so that any universe label is
    // well-typed wherever it is introduced.
    let mut sensors = universe.sensors.clone();
    sensors.merge_all(&w.sensors)?;
    sensors.merge_all(&w2.sensors)?;
    let start = with_catalog(w, &sensors);
    let goal = with_catalog(w2, &sensors);

    let goal_key = canonical_key(&goal);
    if canonical_key(&start) == goal_key {
        return Ok(ExactDistance {
            distance: 0.0,
            path: None,
        });
    }

    let goal_vectors: BTreeMap<Vec<Label>, usize> = {
        let mut counts: BTreeMap<Vec<Label>, usize> = BTreeMap::new();
        for (_, vector) in goal.state_vectors() {
            *counts.entry(vector.iter().cloned().collect()).or_default() += 1;
        }
        counts
    };
    let min_cost = cost.min_op_cost();
    let h = |d: &WiringDiagram| vector_multiset_gap(d, &goal_vectors) as f64 * min_cost;

    // The distance never exceeds the constructive strip-and-rebuild bound,
    // so successors beyond it are never useful.
    let rebuild_bound = match rebuild_path(&start, &goal) {
        Some(ref path) => replay_path(&start, path, cost)?.1,
        None => 0.0,
    };
    let push_bound = budget.min(rebuild_bound);

    // Nodes hold the incoming edge only; a node's diagram is reconstructed
    // on expansion by replaying its parent chain from the start, which keeps
    // the memory per generated state small.
    struct Node {
        parent: Option<(CanonicalKey, EditOp)>,
        settled: bool,
    }

    #[derive(PartialEq)]
    struct QueueEntry {
        f: f64,
        g: f64,
        seq: u64,
        key: CanonicalKey,
    }
    impl Eq for QueueEntry {}
    impl Ord for QueueEntry {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            // Min-heap on f; among equal f prefer the larger g (deeper
            // node), which crosses heuristic plateaus instead of sweeping
            // them. Tie-breaking never affects the distance, only which
            // minimal witness is found first.
            other
                .f
                .total_cmp(&self.f)
                .then_with(|| self.g.total_cmp(&other.g))
                .then_with(|| other.seq.cmp(&self.seq))
        }
    }
    impl PartialOrd for QueueEntry {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    let mut dist: HashMap<CanonicalKey, f64> = HashMap::new();
    let mut nodes: HashMap<CanonicalKey, Node> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;

    let chain_ops = |nodes: &HashMap<CanonicalKey, Node>, key: &CanonicalKey| {
        let mut ops = Vec::new();
        let mut at = key.clone();
        while let Some((parent, op)) = nodes[&at].parent.clone() {
            ops.push(op);
            at = parent;
        }
        ops.reverse();
        ops
    };

    let start_key = canonical_key(&start);
    dist.insert(start_key.clone(), 0.0);
    nodes.insert(
        start_key.clone(),
        Node {
            parent: None,
            settled: false,
        },
    );
    heap.push(QueueEntry {
        f: h(&start),
        g: 0.0,
        seq,
        key: start_key,
    });

    while let Some(QueueEntry { f, g, key, .. }) = heap.pop() {
        if g > dist.get(&key).copied().unwrap_or(f64::INFINITY) + 1e-12 {
            continue; // stale entry
        }
        if f > budget + 1e-9 {
            break;
        }
        if key == goal_key {
            return Ok(ExactDistance {
                distance: g,
                path: Some(EditPath::new(chain_ops(&nodes, &key))?),
            });
        }
        {
            let node = nodes.get_mut(&key).expect("popped node known");
            if node.settled {
                continue;
            }
            node.settled = true;
        }
        let current = chain_ops(&nodes, &key)
            .iter()
            .try_fold(start.clone(), |acc, op| apply_op(&acc, op))
            .expect("parent chains replay");

        for op in enumerate_ops(&current, universe) {
            let op_cost = cost.cost(&op)?;
            let ng = g + op_cost;
            if ng > push_bound + 1e-9 {
                continue;
            }
            let Ok(next) = apply_op(&current, &op) else {
                continue;
            };
            let next_key = canonical_key(&next);
            if ng + 1e-12 < dist.get(&next_key).copied().unwrap_or(f64::INFINITY) {
                dist.insert(next_key.clone(), ng);
                nodes.insert(
                    next_key.clone(),
                    Node {
                        parent: Some((key.clone(), op)),
                        settled: false,
                    },
                );
                seq += 1;
                heap.push(QueueEntry {
                    f: ng + h(&next),
                    g: ng,
                    seq,
                    key: next_key,
                });
            }
        }
    }

    // Budget exhausted; the strip-and-rebuild bound always exists for
    // non-isomorphic diagrams.
    Err(EditError::BudgetExceeded {
        budget,
        upper_bound: rebuild_bound,
    })
}

/// A constructive edit path from `w` to a diagram isomorphic to `w2`: strip
/// `w` down to a single vertex, retarget that vertex's labels, then build
/// `w2` vertex by vertex in topological order. Witnesses that any two
/// diagrams in `W_s^•` are connected by a finite path. Returns `None` when
/// the diagrams are already isomorphic; the path must be replayed over the
/// merged sensor catalog (see [`with_catalog`]).
pub fn rebuild_path(w: &WiringDiagram, w2: &WiringDiagram) -> Option<EditPath> {
    if wd_isomorphic(w, w2) {
        return None;
    }
    let mut ops = Vec::new();

    let keep = w
        .graph()
        .vertices()
        .next()
        .expect("diagrams in W_s^• have a vertex")
        .clone();
    for v in w.graph().vertices() {
        if *v != keep {
            ops.push(EditOp::DeleteVertex { vertex: v.clone() });
        }
    }

    // Retarget the kept vertex's labels to those of the topologically first
    // goal vertex, keeping the vector nonempty throughout.
    let goal_order = crate::graph::validate_wd_graph(w2.graph())
        .expect("goal diagram is a DAG")
        .order();
    let seed_role = goal_order.first().expect("goal has a vertex").clone();
    let target: &BTreeSet<Label> = w2.state_vector(&seed_role).expect("vector exists");
    let source: &BTreeSet<Label> = w.state_vector(&keep).expect("vector exists");
    if source.intersection(target).next().is_some() {
        let anchor = source.intersection(target).next().expect("nonempty").clone();
        for label in source.iter().filter(|l| **l != anchor && !target.contains(*l)) {
            ops.push(EditOp::DeleteLabel {
                vertex: keep.clone(),
                label: label.clone(),
            });
        }
        for label in target.difference(source) {
            ops.push(EditOp::AddLabel {
                vertex: keep.clone(),
                label: label.clone(),
            });
        }
    } else {
        let anchor_from = source.iter().next().expect("vectors nonempty").clone();
        let anchor_to = target.iter().next().expect("vectors nonempty").clone();
        for label in source.iter().skip(1) {
            ops.push(EditOp::DeleteLabel {
                vertex: keep.clone(),
                label: label.clone(),
            });
        }
        ops.push(EditOp::ChangeLabel {
            vertex: keep.clone(),
            from: anchor_from,
            to: anchor_to.clone(),
        });
        for label in target.iter().filter(|l| **l != anchor_to) {
            ops.push(EditOp::AddLabel {
                vertex: keep.clone(),
                label: label.clone(),
            });
        }
    }

    // Build the remaining goal vertices in topological order; each new
    // vertex carries its full state vector and the goal arrows into the
    // vertices already present, so every intermediate diagram is an induced
    // subdiagram of the goal (plus nothing else) and stays skeleton.
    let mut role_to_id: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    role_to_id.insert(seed_role, keep.clone());
    for (i, role) in goal_order.iter().enumerate().skip(1) {
        let mut id = VertexId::new(format!("b{i}"));
        if id == keep {
            id = VertexId::new(format!("b{i}x"));
        }
        let arrows: BTreeSet<(VertexId, VertexId)> = w2
            .graph()
            .arrow_pairs()
            .into_iter()
            .filter_map(|(src, dst)| {
                if &src == role && role_to_id.contains_key(&dst) {
                    Some((id.clone(), role_to_id[&dst].clone()))
                } else if &dst == role && role_to_id.contains_key(&src) {
                    Some((role_to_id[&src].clone(), id.clone()))
                } else {
                    None
                }
            })
            .collect();
        ops.push(EditOp::AddVertex {
            vertex: id.clone(),
            labels: w2.state_vector(role).expect("vector exists").clone(),
            arrows,
        });
        role_to_id.insert(role.clone(), id);
    }

    Some(EditPath::new(ops).expect("non-isomorphic diagrams need at least one op"))
}
