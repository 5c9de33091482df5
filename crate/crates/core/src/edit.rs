//! The nine elementary edit operations on skeleton wiring diagrams, cost
//! functions, and edit-path replay.
//!
//! Operations act on `W_s^•`: skeleton diagrams with at least one vertex and
//! no empty state vector. Every operation must return a diagram in `W_s^•`,
//! so e.g. deleting the last label of a vertex or adding an arrow that breaks
//! acyclicity or the skeleton condition is invalid. Deleting a vertex removes
//! its incident arrows too; its inverse re-adds them, which is what makes the
//! vertex operations mutually inverse.
//!
//! Costs are keyed on unordered operation/inverse classes, so `c(E) =
//! c(E⁻¹)` holds by construction; the change-label cost may be a flat value
//! or the olog distance between the types the two labels map to.

use crate::canon::wd_isomorphic;
use crate::cat::{is_irreducible, morphism_exists, CatError, SkeletonWdGraph};
use crate::graph::DirectedGraph;
use crate::id::{TypeId, VertexId};
use crate::olog::{olog_distance, EdgeCost, Olog, OlogDistance, OlogError};
use crate::wd::{validate_wd, Label, WiringDiagram};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use thiserror::Error;

/// A replacement underlying graph for the graph-level operations, given by
/// its vertex set and arrow endpoint pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: BTreeSet<VertexId>,
    pub arrows: BTreeSet<(VertexId, VertexId)>,
}

impl GraphSpec {
    pub fn of(graph: &DirectedGraph) -> Self {
        Self {
            vertices: graph.vertex_set().clone(),
            arrows: graph.arrow_pairs(),
        }
    }

    pub fn to_graph(&self) -> Result<DirectedGraph, crate::graph::GraphError> {
        let mut g = DirectedGraph::new();
        for v in &self.vertices {
            g.add_vertex(v.clone())?;
        }
        for (src, dst) in &self.arrows {
            let id = g.fresh_arrow_id(src, dst);
            g.add_arrow(id, src.clone(), dst.clone())?;
        }
        Ok(g)
    }
}

/// One elementary edit operation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum EditOp {
    /// (i) Add a vertex with a nonempty state vector, together with any
    /// arrows connecting it to the existing diagram.
    AddVertex {
        vertex: VertexId,
        labels: BTreeSet<Label>,
        #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
        arrows: BTreeSet<(VertexId, VertexId)>,
    },
    /// (ii) Delete a vertex along with its state vector and incident arrows.
    DeleteVertex { vertex: VertexId },
    /// (iii) Add a label at a vertex.
    AddLabel { vertex: VertexId, label: Label },
    /// (iv) Delete a label at a vertex; the vector must stay nonempty.
    DeleteLabel { vertex: VertexId, label: Label },
    /// (v) Change a label at a vertex to a different label.
    ChangeLabel {
        vertex: VertexId,
        from: Label,
        to: Label,
    },
    /// (vi) Add an arrow.
    AddArrow { src: VertexId, dst: VertexId },
    /// (vii) Delete an arrow.
    DeleteArrow { src: VertexId, dst: VertexId },
    /// (viii) Replace the underlying graph by one reached along an
    /// irreducible morphism (one order pair dropped); state vectors are
    /// untouched.
    Generalize { replacement: GraphSpec },
    /// (ix) Replace the underlying graph by one with an irreducible morphism
    /// onto it (one order pair added); state vectors are untouched.
    Specialize { replacement: GraphSpec },
}

/// The operation kinds, numbered as in the elementary-edit-operation list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    AddVertex,
    DeleteVertex,
    AddLabel,
    DeleteLabel,
    ChangeLabel,
    AddArrow,
    DeleteArrow,
    Generalize,
    Specialize,
}

impl OpKind {
    pub fn numeral(&self) -> &'static str {
        match self {
            OpKind::AddVertex => "(i)",
            OpKind::DeleteVertex => "(ii)",
            OpKind::AddLabel => "(iii)",
            OpKind::DeleteLabel => "(iv)",
            OpKind::ChangeLabel => "(v)",
            OpKind::AddArrow => "(vi)",
            OpKind::DeleteArrow => "(vii)",
            OpKind::Generalize => "(viii)",
            OpKind::Specialize => "(ix)",
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OpKind::AddVertex => "add-vertex",
            OpKind::DeleteVertex => "delete-vertex",
            OpKind::AddLabel => "add-label",
            OpKind::DeleteLabel => "delete-label",
            OpKind::ChangeLabel => "change-label",
            OpKind::AddArrow => "add-arrow",
            OpKind::DeleteArrow => "delete-arrow",
            OpKind::Generalize => "generalize",
            OpKind::Specialize => "specialize",
        };
        write!(f, "{name} {}", self.numeral())
    }
}

impl EditOp {
    pub fn kind(&self) -> OpKind {
        match self {
            EditOp::AddVertex { .. } => OpKind::AddVertex,
            EditOp::DeleteVertex { .. } => OpKind::DeleteVertex,
            EditOp::AddLabel { .. } => OpKind::AddLabel,
            EditOp::DeleteLabel { .. } => OpKind::DeleteLabel,
            EditOp::ChangeLabel { .. } => OpKind::ChangeLabel,
            EditOp::AddArrow { .. } => OpKind::AddArrow,
            EditOp::DeleteArrow { .. } => OpKind::DeleteArrow,
            EditOp::Generalize { .. } => OpKind::Generalize,
            EditOp::Specialize { .. } => OpKind::Specialize,
        }
    }
}

/// Why an operation is invalid on a given diagram.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvalidOp {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("vertex `{0}` already exists")]
    DuplicateVertex(VertexId),
    #[error("vertex `{vertex}` carries no label {label}")]
    UnknownLabel { vertex: VertexId, label: Label },
    #[error("vertex `{vertex}` already carries label {label}")]
    DuplicateLabel { vertex: VertexId, label: Label },
    #[error("label {0} references undeclared sensor or ill-typed argument/value")]
    IllTypedLabel(Label),
    #[error("a new vertex requires a nonempty state vector")]
    EmptyLabelSet,
    #[error("would empty the state vector at vertex `{0}`")]
    WouldEmptyStateVector(VertexId),
    #[error("would delete the last vertex")]
    WouldDeleteLastVertex,
    #[error("no arrow from `{src}` to `{dst}`")]
    UnknownArrow { src: VertexId, dst: VertexId },
    #[error("arrow payload ({src}, {dst}) is not incident to the new vertex")]
    ArrowNotIncident { src: VertexId, dst: VertexId },
    #[error("would break WD2: {0}")]
    WouldBreakWd2(String),
    #[error("would break the skeleton condition: {0}")]
    WouldBreakSkeleton(String),
    #[error("replacement graph must keep the vertex set")]
    VertexSetMismatch,
    #[error("replacement graph is not skeleton")]
    ReplacementNotSkeleton,
    #[error("no morphism in the required direction between current and replacement graph")]
    MorphismMissing,
    #[error("morphism between current and replacement graph is not irreducible")]
    MorphismNotIrreducible,
    #[error("operation result leaves W_s^•: {0}")]
    PostconditionViolated(String),
}

/// Errors from paths, costs and distance search.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EditError {
    #[error(transparent)]
    InvalidOp(#[from] InvalidOp),
    #[error("operation {index} invalid: {source}")]
    InvalidOpAt { index: usize, source: InvalidOp },
    #[error("an edit path must contain at least one operation")]
    EmptyPath,
    #[error("cost {0} is not strictly positive")]
    NonpositiveCost(f64),
    #[error("label {0} has no olog-type mapping in the cost function")]
    UnmappedLabel(Label),
    #[error("label-to-type map is not injective: {0} and {1} share a type")]
    NonInjectiveMap(Box<Label>, Box<Label>),
    #[error(transparent)]
    Olog(#[from] OlogError),
    #[error("replayed path ends at a diagram not isomorphic to the stated endpoint")]
    PathEndpointMismatch,
    #[error("search budget {budget} exhausted; best known upper bound is {upper_bound}")]
    BudgetExceeded { budget: f64, upper_bound: f64 },
    #[error(transparent)]
    Sensor(#[from] crate::sensor::SensorError),
}

fn check_label_typed(w: &WiringDiagram, label: &Label) -> Result<(), InvalidOp> {
    match w.sensors.get(&label.sensor) {
        Some(decl) if decl.domain.admits(&label.arg) && decl.codomain.admits(&label.value) => {
            Ok(())
        }
        _ => Err(InvalidOp::IllTypedLabel(label.clone())),
    }
}

fn current_skeleton(w: &WiringDiagram) -> Result<SkeletonWdGraph, InvalidOp> {
    SkeletonWdGraph::new(w.graph().clone()).map_err(|e| match e {
        CatError::Cycle(c) => InvalidOp::WouldBreakWd2(c.to_string()),
        _ => InvalidOp::WouldBreakSkeleton("input diagram is not skeleton".into()),
    })
}

/// Applies one elementary operation to a diagram in `W_s^•`, returning the
/// edited diagram (also in `W_s^•`) or the reason the operation is invalid.
pub fn apply_op(w: &WiringDiagram, op: &EditOp) -> Result<WiringDiagram, InvalidOp> {
    let mut out = w.clone();
    match op {
        EditOp::AddVertex {
            vertex,
            labels,
            arrows,
        } => {
            if out.graph().contains_vertex(vertex) {
                return Err(InvalidOp::DuplicateVertex(vertex.clone()));
            }
            if labels.is_empty() {
                return Err(InvalidOp::EmptyLabelSet);
            }
            for label in labels {
                check_label_typed(&out, label)?;
            }
            for (src, dst) in arrows {
                if src != vertex && dst != vertex {
                    return Err(InvalidOp::ArrowNotIncident {
                        src: src.clone(),
                        dst: dst.clone(),
                    });
                }
                let other = if src == vertex { dst } else { src };
                if other != vertex && !out.graph().contains_vertex(other) {
                    return Err(InvalidOp::UnknownVertex(other.clone()));
                }
            }
            out.add_vertex(vertex.clone(), labels.iter().cloned())
                .expect("vertex checked fresh");
            for (src, dst) in arrows {
                out.connect(src.clone(), dst.clone())
                    .expect("endpoints checked");
            }
        }
        EditOp::DeleteVertex { vertex } => {
            if !out.graph().contains_vertex(vertex) {
                return Err(InvalidOp::UnknownVertex(vertex.clone()));
            }
            if out.vertex_count() == 1 {
                return Err(InvalidOp::WouldDeleteLastVertex);
            }
            out.remove_vertex(vertex);
        }
        EditOp::AddLabel { vertex, label } => {
            check_label_typed(&out, label)?;
            let vector = out
                .vector_mut(vertex)
                .ok_or_else(|| InvalidOp::UnknownVertex(vertex.clone()))?;
            if !vector.insert(label.clone()) {
                return Err(InvalidOp::DuplicateLabel {
                    vertex: vertex.clone(),
                    label: label.clone(),
                });
            }
        }
        EditOp::DeleteLabel { vertex, label } => {
            let vector = out
                .vector_mut(vertex)
                .ok_or_else(|| InvalidOp::UnknownVertex(vertex.clone()))?;
            if !vector.contains(label) {
                return Err(InvalidOp::UnknownLabel {
                    vertex: vertex.clone(),
                    label: label.clone(),
                });
            }
            if vector.len() == 1 {
                return Err(InvalidOp::WouldEmptyStateVector(vertex.clone()));
            }
            vector.remove(label);
        }
        EditOp::ChangeLabel { vertex, from, to } => {
            check_label_typed(&out, to)?;
            let vector = out
                .vector_mut(vertex)
                .ok_or_else(|| InvalidOp::UnknownVertex(vertex.clone()))?;
            if !vector.contains(from) {
                return Err(InvalidOp::UnknownLabel {
                    vertex: vertex.clone(),
                    label: from.clone(),
                });
            }
            if from == to || vector.contains(to) {
                return Err(InvalidOp::DuplicateLabel {
                    vertex: vertex.clone(),
                    label: to.clone(),
                });
            }
            vector.remove(from);
            vector.insert(to.clone());
        }
        EditOp::AddArrow { src, dst } => {
            for v in [src, dst] {
                if !out.graph().contains_vertex(v) {
                    return Err(InvalidOp::UnknownVertex(v.clone()));
                }
            }
            let order = current_skeleton(&out)?.order().clone();
            if order.contains(dst, src) {
                return Err(InvalidOp::WouldBreakWd2(format!(
                    "arrow {src} -> {dst} closes a cycle"
                )));
            }
            if order.contains(src, dst) {
                // Covers src == dst, an existing arrow, and a longer path.
                return Err(InvalidOp::WouldBreakSkeleton(format!(
                    "a path from {src} to {dst} already exists"
                )));
            }
            out.connect(src.clone(), dst.clone()).expect("endpoints known");
            // The new arrow may also turn an existing arrow into a shortcut.
            if !crate::graph::is_skeleton(out.graph()).unwrap_or(false) {
                return Err(InvalidOp::WouldBreakSkeleton(format!(
                    "arrow {src} -> {dst} makes an existing arrow duplicate a path"
                )));
            }
        }
        EditOp::DeleteArrow { src, dst } => {
            if out.remove_arrows_between(src, dst) == 0 {
                return Err(InvalidOp::UnknownArrow {
                    src: src.clone(),
                    dst: dst.clone(),
                });
            }
        }
        EditOp::Generalize { replacement } | EditOp::Specialize { replacement } => {
            let current = current_skeleton(&out)?;
            if &replacement.vertices != current.vertex_set() {
                return Err(InvalidOp::VertexSetMismatch);
            }
            let graph = replacement
                .to_graph()
                .map_err(|_| InvalidOp::VertexSetMismatch)?;
            let target =
                SkeletonWdGraph::new(graph).map_err(|_| InvalidOp::ReplacementNotSkeleton)?;
            let morphism = match op {
                EditOp::Generalize { .. } => morphism_exists(&current, &target),
                _ => morphism_exists(&target, &current),
            }
            .map_err(|_| InvalidOp::VertexSetMismatch)?
            .ok_or(InvalidOp::MorphismMissing)?;
            if !is_irreducible(&morphism) {
                return Err(InvalidOp::MorphismNotIrreducible);
            }
            out.replace_graph(target.graph().clone());
        }
    }

    // Safety net: every valid operation must land back in W_s^•.
    let report = validate_wd(&out, true, true);
    if !report.passed() {
        return Err(InvalidOp::PostconditionViolated(
            report
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.axiom.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        ));
    }
    Ok(out)
}

/// The inverse operation of `op` relative to the diagram it applies to:
/// kinds map (i)<->(ii), (iii)<->(iv), (v)<->(v), (vi)<->(vii),
/// (viii)<->(ix), and applying `op` then its inverse returns a diagram
/// label-preserving isomorphic to the original.
pub fn inverse_op(op: &EditOp, context: &WiringDiagram) -> Result<EditOp, InvalidOp> {
    apply_op(context, op)?; // propagate invalidity
    Ok(match op {
        EditOp::AddVertex { vertex, .. } => EditOp::DeleteVertex {
            vertex: vertex.clone(),
        },
        EditOp::DeleteVertex { vertex } => {
            let labels = context
                .state_vector(vertex)
                .cloned()
                .unwrap_or_default();
            let arrows = context
                .graph()
                .arrow_pairs()
                .into_iter()
                .filter(|(src, dst)| src == vertex || dst == vertex)
                .collect();
            EditOp::AddVertex {
                vertex: vertex.clone(),
                labels,
                arrows,
            }
        }
        EditOp::AddLabel { vertex, label } => EditOp::DeleteLabel {
            vertex: vertex.clone(),
            label: label.clone(),
        },
        EditOp::DeleteLabel { vertex, label } => EditOp::AddLabel {
            vertex: vertex.clone(),
            label: label.clone(),
        },
        EditOp::ChangeLabel { vertex, from, to } => EditOp::ChangeLabel {
            vertex: vertex.clone(),
            from: to.clone(),
            to: from.clone(),
        },
        EditOp::AddArrow { src, dst } => EditOp::DeleteArrow {
            src: src.clone(),
            dst: dst.clone(),
        },
        EditOp::DeleteArrow { src, dst } => EditOp::AddArrow {
            src: src.clone(),
            dst: dst.clone(),
        },
        EditOp::Generalize { .. } => EditOp::Specialize {
            replacement: GraphSpec::of(context.graph()),
        },
        EditOp::Specialize { .. } => EditOp::Generalize {
            replacement: GraphSpec::of(context.graph()),
        },
    })
}

/// A nonempty sequence of elementary edit operations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PathFile", into = "PathFile")]
pub struct EditPath {
    ops: Vec<EditOp>,
}

impl EditPath {
    pub fn new(ops: Vec<EditOp>) -> Result<Self, EditError> {
        if ops.is_empty() {
            return Err(EditError::EmptyPath);
        }
        Ok(Self { ops })
    }

    pub fn ops(&self) -> &[EditOp] {
        &self.ops
    }

    /// Number of operations; always at least one.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn kinds(&self) -> Vec<OpKind> {
        self.ops.iter().map(EditOp::kind).collect()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, String> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| format!("{}: {e}", path.as_ref().display()))?;
        serde_json::from_str(&text).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("path serializes")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PathFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    ops: Vec<EditOp>,
}

impl TryFrom<PathFile> for EditPath {
    type Error = String;

    fn try_from(file: PathFile) -> Result<Self, String> {
        EditPath::new(file.ops).map_err(|e| e.to_string())
    }
}

impl From<EditPath> for PathFile {
    fn from(path: EditPath) -> Self {
        PathFile {
            description: None,
            ops: path.ops,
        }
    }
}

/// How the cost of a change-label operation is computed.
#[derive(Debug, Clone, PartialEq)]
pub enum ChangeRule {
    /// The same positive cost for every label change.
    Flat(f64),
    /// The olog distance between the types the two labels map to.
    OlogBacked(OlogBackedCosts),
}

/// Olog-backed change costs: an injective label-to-type map `i` and positive
/// edge costs, with `c(change L to L') = d_O(i(L), i(L'))`.
#[derive(Debug, Clone, PartialEq)]
pub struct OlogBackedCosts {
    pub olog: Olog,
    pub edge_cost: EdgeCost,
    pub label_types: BTreeMap<Label, TypeId>,
}

/// Positive costs per operation class. Classes pair each operation with its
/// inverse — vertex (i)/(ii), label (iii)/(iv), arrow (vi)/(vii), graph
/// (viii)/(ix), change (v) — so the induced distance is symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct CostFunction {
    pub vertex: f64,
    pub label: f64,
    pub arrow: f64,
    pub graph: f64,
    pub change: ChangeRule,
}

impl CostFunction {
    /// Unit cost for every operation.
    pub fn unit() -> Self {
        Self::new(1.0, 1.0, 1.0, 1.0, ChangeRule::Flat(1.0)).expect("unit costs are positive")
    }

    pub fn new(
        vertex: f64,
        label: f64,
        arrow: f64,
        graph: f64,
        change: ChangeRule,
    ) -> Result<Self, EditError> {
        for c in [vertex, label, arrow, graph] {
            if !c.is_finite() || c <= 0.0 {
                return Err(EditError::NonpositiveCost(c));
            }
        }
        match &change {
            ChangeRule::Flat(c) => {
                if !c.is_finite() || *c <= 0.0 {
                    return Err(EditError::NonpositiveCost(*c));
                }
            }
            ChangeRule::OlogBacked(backed) => {
                backed.edge_cost.check_total_on(&backed.olog)?;
                let mut seen: BTreeMap<&TypeId, &Label> = BTreeMap::new();
                for (label, ty) in &backed.label_types {
                    if !backed.olog.contains_type(ty) {
                        return Err(EditError::Olog(OlogError::UnknownType(ty.clone())));
                    }
                    if let Some(previous) = seen.insert(ty, label) {
                        return Err(EditError::NonInjectiveMap(
                            Box::new(previous.clone()),
                            Box::new(label.clone()),
                        ));
                    }
                }
            }
        }
        Ok(Self {
            vertex,
            label,
            arrow,
            graph,
            change,
        })
    }

    /// Cost of one operation. Change-label cost under an olog-backed rule can
    /// be infinite when the mapped types are disconnected; such operations
    /// are effectively unusable and path costs saturate.
    pub fn cost(&self, op: &EditOp) -> Result<f64, EditError> {
        Ok(match op.kind() {
            OpKind::AddVertex | OpKind::DeleteVertex => self.vertex,
            OpKind::AddLabel | OpKind::DeleteLabel => self.label,
            OpKind::AddArrow | OpKind::DeleteArrow => self.arrow,
            OpKind::Generalize | OpKind::Specialize => self.graph,
            OpKind::ChangeLabel => {
                let (from, to) = match op {
                    EditOp::ChangeLabel { from, to, .. } => (from, to),
                    _ => unreachable!("kind matched"),
                };
                match &self.change {
                    ChangeRule::Flat(c) => *c,
                    ChangeRule::OlogBacked(backed) => {
                        let type_of = |label: &Label| {
                            backed
                                .label_types
                                .get(label)
                                .ok_or_else(|| EditError::UnmappedLabel(label.clone()))
                        };
                        let d = olog_distance(
                            &backed.olog,
                            &backed.edge_cost,
                            type_of(from)?,
                            type_of(to)?,
                        )?;
                        match d {
                            OlogDistance::Finite(v) => v,
                            OlogDistance::Infinite => f64::INFINITY,
                        }
                    }
                }
            }
        })
    }

    /// A positive lower bound on the cost of any realizable operation; used
    /// as the per-edit factor of the admissible search heuristic.
    pub fn min_op_cost(&self) -> f64 {
        let change_floor = match &self.change {
            ChangeRule::Flat(c) => *c,
            // Distinct labels map to distinct types (injectivity), so a
            // change costs at least one cheapest olog edge.
            ChangeRule::OlogBacked(backed) => backed
                .olog
                .aspects()
                .filter_map(|(id, _)| backed.edge_cost.get(id))
                .fold(f64::INFINITY, f64::min),
        };
        [self.vertex, self.label, self.arrow, self.graph, change_floor]
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

// --- cost-config file --------------------------------------------------------

/// On-disk JSON shape of a cost configuration. The change rule is either
/// `{"flat": c}` or an olog-backed record whose `olog` path is resolved
/// relative to the config file.
#[derive(Debug, Serialize, Deserialize)]
pub struct CostConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub vertex: f64,
    pub label: f64,
    pub arrow: f64,
    pub graph: f64,
    pub change: ChangeConfig,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChangeConfig {
    Flat {
        flat: f64,
    },
    Olog {
        olog: String,
        edge_costs: EdgeCostConfig,
        label_types: Vec<LabelTypeRecord>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeCostConfig {
    /// The string `"unit"`.
    Keyword(String),
    /// Explicit per-aspect costs.
    Map(BTreeMap<crate::id::AspectId, f64>),
}

/// One row of the label-to-type map `i`.
#[derive(Debug, Serialize, Deserialize)]
pub struct LabelTypeRecord {
    pub sensor: crate::id::SensorId,
    pub arg: String,
    pub value: crate::sensor::Value,
    #[serde(rename = "type")]
    pub olog_type: TypeId,
}

/// Loads a cost configuration, resolving a referenced olog relative to the
/// config file's directory.
pub fn load_cost_config(path: impl AsRef<Path>) -> Result<CostFunction, String> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: CostConfigFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let change = match file.change {
        ChangeConfig::Flat { flat } => ChangeRule::Flat(flat),
        ChangeConfig::Olog {
            olog,
            edge_costs,
            label_types,
        } => {
            let olog_path = path.parent().unwrap_or(Path::new(".")).join(olog);
            let olog = Olog::load(&olog_path)?;
            let edge_cost = match edge_costs {
                EdgeCostConfig::Keyword(word) if word == "unit" => EdgeCost::unit(&olog),
                EdgeCostConfig::Keyword(word) => {
                    return Err(format!("unknown edge-cost keyword {word:?}"))
                }
                EdgeCostConfig::Map(map) => {
                    EdgeCost::from_map(map).map_err(|e| e.to_string())?
                }
            };
            let label_types = label_types
                .into_iter()
                .map(|r| {
                    (
                        Label {
                            sensor: r.sensor,
                            arg: r.arg,
                            value: r.value,
                        },
                        r.olog_type,
                    )
                })
                .collect();
            ChangeRule::OlogBacked(OlogBackedCosts {
                olog,
                edge_cost,
                label_types,
            })
        }
    };
    CostFunction::new(file.vertex, file.label, file.arrow, file.graph, change)
        .map_err(|e| e.to_string())
}

/// Replays an edit path from `w`, returning the final diagram and the summed
/// cost. Fails with the index of the first invalid operation.
pub fn replay_path(
    w: &WiringDiagram,
    path: &EditPath,
    cost: &CostFunction,
) -> Result<(WiringDiagram, f64), EditError> {
    let mut current = w.clone();
    let mut total = 0.0f64;
    for (index, op) in path.ops().iter().enumerate() {
        total += cost.cost(op)?;
        current = apply_op(&current, op)
            .map_err(|source| EditError::InvalidOpAt { index, source })?;
    }
    Ok((current, total))
}

/// Replays `path` from `w` and checks it ends at a diagram isomorphic to
/// `w2`; the summed cost is then an upper bound on the edit distance.
pub fn wd_distance_upper(
    w: &WiringDiagram,
    w2: &WiringDiagram,
    path: &EditPath,
    cost: &CostFunction,
) -> Result<f64, EditError> {
    let (end, total) = replay_path(w, path, cost)?;
    if !wd_isomorphic(&end, w2) {
        return Err(EditError::PathEndpointMismatch);
    }
    Ok(total)
}
