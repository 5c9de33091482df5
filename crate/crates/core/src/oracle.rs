//! Slow, definition-level reference implementations used to cross-check the
//! fast paths.
//!
//! Everything here is written directly from the defining property it checks
//! — matrix reachability, path enumeration, exhaustive enumeration of
//! intermediate orders, backtracking bijections, cost-bounded enumeration of
//! edit paths — and deliberately shares no code with the implementations it
//! oracles. Intended for tests and acceptance runs; complexity is
//! exponential in places, so keep inputs small.

use crate::edit::{apply_op, CostFunction, EditOp};
use crate::graph::{DirectedGraph, RelationSet};
use crate::id::{TypeId, VertexId};
use crate::olog::Olog;
use crate::sensor::SensorSet;
use crate::trace::{state_vector_holds, Assignment, Trace, TraceError};
use crate::wd::{Label, WiringDiagram};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Reflexive reachability by Floyd–Warshall over an adjacency matrix.
pub fn reachability_floyd_warshall(g: &DirectedGraph) -> RelationSet {
    let vertices: Vec<VertexId> = g.vertices().cloned().collect();
    let n = vertices.len();
    let index: BTreeMap<&VertexId, usize> = vertices.iter().zip(0..).collect();
    let mut reach = vec![false; n * n];
    for i in 0..n {
        reach[i * n + i] = true;
    }
    for (_, a) in g.arrows() {
        reach[index[&a.src] * n + index[&a.dst]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i * n + k] {
                for j in 0..n {
                    if reach[k * n + j] {
                        reach[i * n + j] = true;
                    }
                }
            }
        }
    }
    let mut rel = RelationSet::reflexive_on(g.vertex_set().clone());
    for i in 0..n {
        for j in 0..n {
            if reach[i * n + j] {
                rel.insert(vertices[i].clone(), vertices[j].clone())
                    .expect("on base");
            }
        }
    }
    rel
}

/// Cycle detection by three-color depth-first search, independent of the
/// Kahn-based validator.
pub fn has_cycle_dfs(g: &DirectedGraph) -> bool {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let mut color: BTreeMap<VertexId, Color> =
        g.vertices().map(|v| (v.clone(), Color::White)).collect();

    fn visit(g: &DirectedGraph, v: &VertexId, color: &mut BTreeMap<VertexId, Color>) -> bool {
        color.insert(v.clone(), Color::Gray);
        for w in g.out_neighbors(v) {
            match color[&w] {
                Color::Gray => return true,
                Color::White => {
                    if visit(g, &w, color) {
                        return true;
                    }
                }
                Color::Black => {}
            }
        }
        color.insert(v.clone(), Color::Black);
        false
    }

    let vertices: Vec<VertexId> = g.vertices().cloned().collect();
    for v in vertices {
        if color[&v] == Color::White && visit(g, &v, &mut color) {
            return true;
        }
    }
    false
}

/// Number of distinct paths (arrow sequences, loops forbidden) from `src`
/// to `dst`, capped at 2 since only 0, 1, many matter for WD3. Assumes a
/// DAG, so the walk terminates.
fn count_paths_capped(g: &DirectedGraph, src: &VertexId, dst: &VertexId) -> usize {
    fn walk(g: &DirectedGraph, at: &VertexId, dst: &VertexId, count: &mut usize) {
        if *count >= 2 {
            return;
        }
        for (_, a) in g.arrows() {
            if &a.src == at && a.src != a.dst {
                if &a.dst == dst {
                    *count += 1;
                    if *count >= 2 {
                        return;
                    }
                } else {
                    walk(g, &a.dst, dst, count);
                }
            }
        }
    }
    let mut count = 0;
    walk(g, src, dst, &mut count);
    count
}

/// The definitional skeleton check: for every arrow, no second path joins
/// its endpoints.
pub fn skeleton_by_path_enumeration(g: &DirectedGraph) -> bool {
    for (_, a) in g.arrows() {
        if count_paths_capped(g, &a.src, &a.dst) >= 2 {
            return false;
        }
    }
    true
}

/// All loop-free digraphs on `n` vertices named `x0..x{n-1}` (one per subset
/// of the ordered vertex pairs).
pub fn all_digraphs(n: usize) -> impl Iterator<Item = DirectedGraph> {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let total = 1u64 << pairs.len();
    (0..total).map(move |mask| {
        let chosen: Vec<(&str, &str)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, (a, b))| (a.as_str(), b.as_str()))
            .collect();
        DirectedGraph::from_pairs(names.iter().map(|s| s.as_str()), chosen)
            .expect("enumerated graphs are well-formed")
    })
}

/// All partial orders on `n` elements named `x0..x{n-1}`, diagonal included.
pub fn all_partial_orders(n: usize) -> Vec<RelationSet> {
    let base: BTreeSet<VertexId> = (0..n).map(|i| VertexId::new(format!("x{i}"))).collect();
    let names: Vec<VertexId> = base.iter().cloned().collect();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut rel = RelationSet::reflexive_on(base.clone());
        for (k, (x, y)) in pairs.iter().enumerate() {
            if mask & (1 << k) != 0 {
                rel.insert(x.clone(), y.clone()).expect("on base");
            }
        }
        if rel.is_partial_order() {
            out.push(rel);
        }
    }
    out
}

/// Irreducibility by definition: `dst ⊊ src` admits no partial order
/// strictly between. Enumerates every subset of the dropped pairs.
pub fn irreducible_by_enumeration(src: &RelationSet, dst: &RelationSet) -> bool {
    assert!(dst.is_subset(src) && src != dst, "expected dst ⊊ src");
    let diff: Vec<(VertexId, VertexId)> = src
        .pairs()
        .difference(dst.pairs())
        .cloned()
        .collect();
    for mask in 1u64..((1 << diff.len()) - 1) {
        let mut candidate = dst.clone();
        for (k, (x, y)) in diff.iter().enumerate() {
            if mask & (1 << k) != 0 {
                candidate.insert(x.clone(), y.clone()).expect("on base");
            }
        }
        if candidate.is_partial_order() {
            return false;
        }
    }
    true
}

/// Undirected hop counts from `from` over an olog's underlying graph.
pub fn undirected_bfs_hops(olog: &Olog, from: &TypeId) -> BTreeMap<TypeId, usize> {
    let mut adjacency: BTreeMap<&TypeId, Vec<&TypeId>> = BTreeMap::new();
    for (_, aspect) in olog.aspects() {
        adjacency.entry(&aspect.src).or_default().push(&aspect.dst);
        adjacency.entry(&aspect.dst).or_default().push(&aspect.src);
    }
    let mut hops = BTreeMap::new();
    hops.insert(from.clone(), 0usize);
    let mut queue = VecDeque::from([from]);
    while let Some(t) = queue.pop_front() {
        let d = hops[t];
        for next in adjacency.get(t).into_iter().flatten() {
            if !hops.contains_key(*next) {
                hops.insert((*next).clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    hops
}

/// Isomorphism by backtracking over vertex bijections that preserve state
/// vectors and arrows; independent of the canonical-form machinery.
pub fn isomorphic_by_backtracking(a: &WiringDiagram, b: &WiringDiagram) -> bool {
    let va: Vec<VertexId> = a.graph().vertices().cloned().collect();
    let vb: Vec<VertexId> = b.graph().vertices().cloned().collect();
    if va.len() != vb.len() || a.graph().arrow_pairs().len() != b.graph().arrow_pairs().len() {
        return false;
    }

    fn extend(
        a: &WiringDiagram,
        b: &WiringDiagram,
        va: &[VertexId],
        vb: &[VertexId],
        map: &mut BTreeMap<VertexId, VertexId>,
        used: &mut BTreeSet<VertexId>,
    ) -> bool {
        let Some(next) = va.get(map.len()) else {
            // All vertices mapped; arrows were checked incrementally.
            return true;
        };
        for candidate in vb {
            if used.contains(candidate) {
                continue;
            }
            if a.state_vector(next) != b.state_vector(candidate) {
                continue;
            }
            // Arrows between `next` and already-mapped vertices must agree.
            let consistent = map.iter().all(|(u, image)| {
                a.graph().has_arrow_between(u, next) == b.graph().has_arrow_between(image, candidate)
                    && a.graph().has_arrow_between(next, u)
                        == b.graph().has_arrow_between(candidate, image)
            });
            if !consistent {
                continue;
            }
            map.insert(next.clone(), candidate.clone());
            used.insert(candidate.clone());
            if extend(a, b, va, vb, map, used) {
                return true;
            }
            map.remove(next);
            used.remove(candidate);
        }
        false
    }

    extend(
        a,
        b,
        &va,
        &vb,
        &mut BTreeMap::new(),
        &mut BTreeSet::new(),
    )
}

/// Occurrence matching by full enumeration of vertex-to-timestamp maps.
pub fn match_bruteforce(trace: &Trace, w: &WiringDiagram) -> Result<Vec<Assignment>, TraceError> {
    let vertices: Vec<VertexId> = w.graph().vertices().cloned().collect();
    let timestamps = trace.timestamps();
    let mut out = Vec::new();
    let mut times: Vec<i64> = Vec::new();

    fn enumerate(
        trace: &Trace,
        w: &WiringDiagram,
        vertices: &[VertexId],
        timestamps: &[i64],
        times: &mut Vec<i64>,
        out: &mut Vec<Assignment>,
    ) -> Result<(), TraceError> {
        if times.len() == vertices.len() {
            let assignment: BTreeMap<VertexId, i64> = vertices
                .iter()
                .cloned()
                .zip(times.iter().copied())
                .collect();
            for (_, a) in w.graph().arrows() {
                if assignment[&a.src] >= assignment[&a.dst] {
                    return Ok(());
                }
            }
            for (i, v) in vertices.iter().enumerate() {
                let labels = w.state_vector(v).expect("vector exists");
                if !state_vector_holds(trace, &w.sensors, labels, times[i])? {
                    return Ok(());
                }
            }
            out.push(Assignment { times: assignment });
            return Ok(());
        }
        for &t in timestamps {
            times.push(t);
            enumerate(trace, w, vertices, timestamps, times, out)?;
            times.pop();
        }
        Ok(())
    }

    enumerate(trace, w, &vertices, &timestamps, &mut times, &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Minimum-cost edit path by breadth-first enumeration of all operation
/// sequences of cost at most `cap`, with its own operation generator and the
/// backtracking isomorphism check for endpoint equality. Returns `None` when
/// no sequence within the cap connects the diagrams (already-isomorphic
/// diagrams yield `Some(0.0)`).
pub fn edit_distance_bruteforce(
    w: &WiringDiagram,
    w2: &WiringDiagram,
    cost: &CostFunction,
    universe: &BTreeSet<Label>,
    cap: f64,
) -> Option<f64> {
    // Work over the merged catalog so either diagram's labels can appear.
    let mut sensors = SensorSet::new();
    sensors.merge_all(&w.sensors).ok()?;
    sensors.merge_all(&w2.sensors).ok()?;
    let start = rebuild_with(w, &sensors);
    let goal = rebuild_with(w2, &sensors);

    if isomorphic_by_backtracking(&start, &goal) {
        return Some(0.0);
    }

    let mut best: Option<f64> = None;
    let mut frontier: VecDeque<(WiringDiagram, f64)> = VecDeque::from([(start, 0.0)]);
    while let Some((current, spent)) = frontier.pop_front() {
        for op in candidate_ops(&current, universe) {
            let Ok(op_cost) = cost.cost(&op) else { continue };
            let total = spent + op_cost;
            if total > cap + 1e-9 || best.is_some_and(|b| total >= b - 1e-12) {
                continue;
            }
            let Ok(next) = apply_op(&current, &op) else {
                continue;
            };
            if isomorphic_by_backtracking(&next, &goal) {
                best = Some(best.map_or(total, |b| b.min(total)));
            } else {
                frontier.push_back((next, total));
            }
        }
    }
    best
}

fn rebuild_with(w: &WiringDiagram, sensors: &SensorSet) -> WiringDiagram {
    let mut out = WiringDiagram::new(sensors.clone());
    for (v, labels) in w.state_vectors() {
        out.add_vertex(v.clone(), labels.iter().cloned()).expect("unique");
    }
    for (_, a) in w.graph().arrows() {
        out.connect(a.src.clone(), a.dst.clone()).expect("known");
    }
    out
}

/// Straightforward re-enumeration of the single-step operations, written
/// separately from the search module's generator.
fn candidate_ops(w: &WiringDiagram, universe: &BTreeSet<Label>) -> Vec<EditOp> {
    use crate::edit::GraphSpec;

    let mut ops = Vec::new();
    let vertices: Vec<VertexId> = w.graph().vertices().cloned().collect();

    for v in &vertices {
        let vector = w.state_vector(v).expect("vector exists").clone();
        ops.push(EditOp::DeleteVertex { vertex: v.clone() });
        for label in &vector {
            ops.push(EditOp::DeleteLabel {
                vertex: v.clone(),
                label: label.clone(),
            });
            for to in universe {
                ops.push(EditOp::ChangeLabel {
                    vertex: v.clone(),
                    from: label.clone(),
                    to: to.clone(),
                });
            }
        }
        for label in universe {
            ops.push(EditOp::AddLabel {
                vertex: v.clone(),
                label: label.clone(),
            });
        }
    }

    for src in &vertices {
        for dst in &vertices {
            ops.push(EditOp::AddArrow {
                src: src.clone(),
                dst: dst.clone(),
            });
            ops.push(EditOp::DeleteArrow {
                src: src.clone(),
                dst: dst.clone(),
            });
        }
    }

    // Graph replacements: every subset of ordered pairs over the vertex set
    // (application filters non-skeleton and non-irreducible ones).
    let mut all_pairs = Vec::new();
    for src in &vertices {
        for dst in &vertices {
            if src != dst {
                all_pairs.push((src.clone(), dst.clone()));
            }
        }
    }
    if all_pairs.len() <= 12 {
        for mask in 0u64..(1 << all_pairs.len()) {
            let arrows: BTreeSet<(VertexId, VertexId)> = all_pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, p)| p.clone())
                .collect();
            let spec = GraphSpec {
                vertices: w.graph().vertex_set().clone(),
                arrows,
            };
            ops.push(EditOp::Generalize {
                replacement: spec.clone(),
            });
            ops.push(EditOp::Specialize { replacement: spec });
        }
    }

    // Vertex additions over every nonempty universe subset and wiring.
    let fresh = VertexId::new(format!("n{}", vertices.len()));
    let fresh = if w.graph().contains_vertex(&fresh) {
        VertexId::new(format!("n{}b", vertices.len()))
    } else {
        fresh
    };
    let labels: Vec<&Label> = universe.iter().collect();
    for mask in 1usize..(1 << labels.len()) {
        let label_set: BTreeSet<Label> = labels
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, l)| (*l).clone())
            .collect();
        let mut wirings: Vec<BTreeSet<(VertexId, VertexId)>> = vec![BTreeSet::new()];
        for other in &vertices {
            let mut next = Vec::new();
            for wiring in &wirings {
                next.push(wiring.clone());
                let mut with_in = wiring.clone();
                with_in.insert((other.clone(), fresh.clone()));
                next.push(with_in);
                let mut with_out = wiring.clone();
                with_out.insert((fresh.clone(), other.clone()));
                next.push(with_out);
            }
            wirings = next;
        }
        for wiring in wirings {
            ops.push(EditOp::AddVertex {
                vertex: fresh.clone(),
                labels: label_set.clone(),
                arrows: wiring,
            });
        }
    }

    ops
}
