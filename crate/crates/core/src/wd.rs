//! Wiring diagrams: finite DAGs whose vertices carry state vectors of sensor
//! labels.
//!
//! A wiring diagram is the quintuple `(V, A, s, t, L_V)`: an underlying
//! directed graph plus, for every vertex, a set of labels `(F, x, y)`. Each
//! state vector lists readings that must hold simultaneously; an arrow means
//! its source state is achieved strictly before its target state.
//!
//! [`validate_wd`] checks the axioms and reports failures rather than
//! erroring, so ill-formed diagrams (e.g. cyclic ones read from disk) can be
//! diagnosed. `W_s^•` — skeleton diagrams with every state vector nonempty
//! and at least one vertex — is the domain of the edit metric and is what the
//! two optional flags select.

use crate::graph::{validate_wd_graph, DirectedGraph, is_skeleton};
use crate::id::{ArrowId, SensorId, VertexId};
use crate::sensor::{SensingFunctionDecl, SensorSet, Value};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use thiserror::Error;

/// One label `(F, x, y)`: sensing function, argument, required value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label {
    pub sensor: SensorId,
    pub arg: String,
    pub value: Value,
}

impl Label {
    pub fn new(sensor: impl Into<SensorId>, arg: impl Into<String>, value: impl Into<Value>) -> Self {
        Self {
            sensor: sensor.into(),
            arg: arg.into(),
            value: value.into(),
        }
    }

    /// `(F, •, y)` — the common singleton-domain case.
    pub fn at_point(sensor: impl Into<SensorId>, value: impl Into<Value>) -> Self {
        Self::new(sensor, crate::sensor::POINT, value)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.sensor, self.arg, self.value)
    }
}

/// A wiring diagram: sensor catalog, underlying graph, and one state vector
/// per vertex (possibly empty).
#[derive(Debug, Clone, PartialEq)]
pub struct WiringDiagram {
    pub sensors: SensorSet,
    graph: DirectedGraph,
    state_vectors: BTreeMap<VertexId, BTreeSet<Label>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WdError {
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error("vertex `{0}` has no state-vector entry")]
    MissingStateVector(VertexId),
    #[error("state vector references unknown vertex `{0}`")]
    UnknownVertex(VertexId),
}

impl WiringDiagram {
    pub fn new(sensors: SensorSet) -> Self {
        Self {
            sensors,
            graph: DirectedGraph::new(),
            state_vectors: BTreeMap::new(),
        }
    }

    pub fn add_vertex(
        &mut self,
        id: impl Into<VertexId>,
        labels: impl IntoIterator<Item = Label>,
    ) -> Result<(), WdError> {
        let id = id.into();
        self.graph.add_vertex(id.clone())?;
        self.state_vectors.insert(id, labels.into_iter().collect());
        Ok(())
    }

    pub fn add_arrow(
        &mut self,
        id: impl Into<ArrowId>,
        src: impl Into<VertexId>,
        dst: impl Into<VertexId>,
    ) -> Result<(), WdError> {
        self.graph.add_arrow(id.into(), src.into(), dst.into())?;
        Ok(())
    }

    /// Adds an arrow with a generated `src->dst` id.
    pub fn connect(
        &mut self,
        src: impl Into<VertexId>,
        dst: impl Into<VertexId>,
    ) -> Result<(), WdError> {
        let (src, dst) = (src.into(), dst.into());
        let id = self.graph.fresh_arrow_id(&src, &dst);
        self.graph.add_arrow(id, src, dst)?;
        Ok(())
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn state_vector(&self, v: &VertexId) -> Option<&BTreeSet<Label>> {
        self.state_vectors.get(v)
    }

    pub fn state_vectors(&self) -> impl Iterator<Item = (&VertexId, &BTreeSet<Label>)> {
        self.state_vectors.iter()
    }

    pub fn all_labels(&self) -> BTreeSet<Label> {
        self.state_vectors.values().flatten().cloned().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    // Mutators used by the edit operations; they keep graph and state
    // vectors in step but do not enforce the WD axioms (apply_op does).

    pub(crate) fn remove_vertex(&mut self, v: &VertexId) -> bool {
        self.state_vectors.remove(v);
        self.graph.remove_vertex(v)
    }

    pub(crate) fn remove_arrows_between(&mut self, src: &VertexId, dst: &VertexId) -> usize {
        self.graph.remove_arrows_between(src, dst)
    }

    pub(crate) fn vector_mut(&mut self, v: &VertexId) -> Option<&mut BTreeSet<Label>> {
        self.state_vectors.get_mut(v)
    }

    pub(crate) fn replace_graph(&mut self, graph: DirectedGraph) {
        self.graph = graph;
    }

    /// Structural consistency: every vertex has a state vector and vice
    /// versa. Builder methods maintain this; deserialization checks it.
    fn check_structure(&self) -> Result<(), WdError> {
        for v in self.graph.vertices() {
            if !self.state_vectors.contains_key(v) {
                return Err(WdError::MissingStateVector(v.clone()));
            }
        }
        for v in self.state_vectors.keys() {
            if !self.graph.contains_vertex(v) {
                return Err(WdError::UnknownVertex(v.clone()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&WdFile::from(self)).expect("diagram serializes")
    }

    pub fn from_json(json: &str) -> Result<Self, String> {
        let file: WdFile = serde_json::from_str(json).map_err(|e| e.to_string())?;
        file.try_into()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, String> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| format!("{}: {e}", path.as_ref().display()))?;
        Self::from_json(&text)
    }

    /// Deterministic DOT rendering; vertices show their label triples.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph wd {\n");
        for (v, labels) in &self.state_vectors {
            let text = labels
                .iter()
                .map(Label::to_string)
                .collect::<Vec<_>>()
                .join("\\n");
            out.push_str(&format!(
                "  \"{}\" [label=\"{}\"];\n",
                dot_escape(v.as_str()),
                dot_escape(&text)
            ));
        }
        for (id, a) in self.graph.arrows() {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\"; // {}\n",
                dot_escape(a.src.as_str()),
                dot_escape(a.dst.as_str()),
                id
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// The axioms a report can speak about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axiom {
    /// Finite directed underlying graph.
    Wd0,
    /// State vectors are well-typed label sets.
    Wd1,
    /// A linear extension exists (the graph is a DAG).
    Wd2,
    /// Skeleton: no arrow duplicates or short-cuts a distinct path.
    Wd3,
    /// Membership in `W_s^•`: at least one vertex, no empty state vector.
    NonemptyVectors,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Axiom::Wd0 => "WD0 (finite directed graph)",
            Axiom::Wd1 => "WD1 (well-typed state vectors)",
            Axiom::Wd2 => "WD2 (linear extension exists)",
            Axiom::Wd3 => "WD3 (skeleton)",
            Axiom::NonemptyVectors => "W_s^• (nonempty state vectors)",
        };
        f.write_str(name)
    }
}

/// One axiom check with an optional failure witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Outcome of [`validate_wd`]: per-axiom entries, never an error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            match (&check.passed, &check.witness) {
                (true, _) => writeln!(f, "  ok   {}", check.axiom)?,
                (false, Some(w)) => writeln!(f, "  FAIL {} — {}", check.axiom, w)?,
                (false, None) => writeln!(f, "  FAIL {}", check.axiom)?,
            }
        }
        Ok(())
    }
}

/// Checks WD0–WD2, plus WD3 when `require_skeleton` and membership in
/// `W_s^•` when `require_nonempty`. Failures become report entries with
/// witnesses, not errors.
pub fn validate_wd(w: &WiringDiagram, require_skeleton: bool, require_nonempty: bool) -> ValidationReport {
    let mut checks = Vec::new();

    // WD0 is structural: the graph type is finite and totally defined.
    checks.push(AxiomCheck {
        axiom: Axiom::Wd0,
        passed: true,
        witness: None,
    });

    let mut wd1_witness = None;
    'wd1: for (v, labels) in w.state_vectors() {
        for label in labels {
            match w.sensors.get(&label.sensor) {
                None => {
                    wd1_witness = Some(format!(
                        "label {label} at vertex {v} references undeclared sensor"
                    ));
                    break 'wd1;
                }
                Some(decl) => {
                    if !decl.domain.admits(&label.arg) {
                        wd1_witness = Some(format!(
                            "label {label} at vertex {v}: argument outside the sensor domain"
                        ));
                        break 'wd1;
                    }
                    if !decl.codomain.admits(&label.value) {
                        wd1_witness = Some(format!(
                            "label {label} at vertex {v}: value outside the sensor codomain"
                        ));
                        break 'wd1;
                    }
                }
            }
        }
    }
    checks.push(AxiomCheck {
        axiom: Axiom::Wd1,
        passed: wd1_witness.is_none(),
        witness: wd1_witness,
    });

    let extension = validate_wd_graph(w.graph());
    checks.push(AxiomCheck {
        axiom: Axiom::Wd2,
        passed: extension.is_ok(),
        witness: extension.as_ref().err().map(|e| e.to_string()),
    });

    if require_skeleton {
        let (passed, witness) = match is_skeleton(w.graph()) {
            Ok(true) => (true, None),
            Ok(false) => (false, Some(skeleton_witness(w.graph()))),
            Err(e) => (false, Some(e.to_string())),
        };
        checks.push(AxiomCheck {
            axiom: Axiom::Wd3,
            passed,
            witness,
        });
    }

    if require_nonempty {
        let witness = if w.vertex_count() == 0 {
            Some("diagram has no vertices".to_owned())
        } else {
            w.state_vectors()
                .find(|(_, labels)| labels.is_empty())
                .map(|(v, _)| format!("state vector at vertex {v} is empty"))
        };
        checks.push(AxiomCheck {
            axiom: Axiom::NonemptyVectors,
            passed: witness.is_none(),
            witness,
        });
    }

    ValidationReport { checks }
}

/// Names an arrow violating WD3, for report witnesses.
fn skeleton_witness(g: &DirectedGraph) -> String {
    let pairs: Vec<_> = g.arrow_pairs().into_iter().collect();
    if pairs.len() != g.arrow_count() {
        for (src, dst) in &pairs {
            if g.arrows_between(src, dst).len() > 1 {
                return format!("parallel arrows from {src} to {dst}");
            }
        }
    }
    if let Ok(closure) = crate::graph::transitive_closure(g) {
        let covers = closure.covering_pairs();
        for (src, dst) in &pairs {
            if !covers.contains(&(src.clone(), dst.clone())) {
                return format!("arrow {src} -> {dst} duplicates an existing path");
            }
        }
    }
    "skeleton condition violated".to_owned()
}

// --- file format -------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct WdFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    sensors: Vec<SensingFunctionDecl>,
    vertices: Vec<VertexRecord>,
    arrows: Vec<ArrowRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexRecord {
    id: VertexId,
    labels: Vec<Label>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ArrowRecord {
    id: ArrowId,
    src: VertexId,
    dst: VertexId,
}

impl From<&WiringDiagram> for WdFile {
    fn from(w: &WiringDiagram) -> Self {
        WdFile {
            description: None,
            sensors: w.sensors.iter().cloned().collect(),
            vertices: w
                .state_vectors()
                .map(|(id, labels)| VertexRecord {
                    id: id.clone(),
                    labels: labels.iter().cloned().collect(),
                })
                .collect(),
            arrows: w
                .graph()
                .arrows()
                .map(|(id, a)| ArrowRecord {
                    id: id.clone(),
                    src: a.src.clone(),
                    dst: a.dst.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<WdFile> for WiringDiagram {
    type Error = String;

    fn try_from(file: WdFile) -> Result<Self, String> {
        let sensors = SensorSet::from_decls(file.sensors).map_err(|e| e.to_string())?;
        let mut w = WiringDiagram::new(sensors);
        for v in file.vertices {
            w.add_vertex(v.id, v.labels).map_err(|e| e.to_string())?;
        }
        for a in file.arrows {
            w.add_arrow(a.id, a.src, a.dst).map_err(|e| e.to_string())?;
        }
        w.check_structure().map_err(|e| e.to_string())?;
        Ok(w)
    }
}
