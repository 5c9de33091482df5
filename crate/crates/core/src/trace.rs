//! Detecting occurrences of a wiring diagram in a time-indexed sensor trace.
//!
//! A trace is a sequence of samples `(t, sensor, arg, value)`. Sensors are
//! read with step-function semantics: between samples a reading keeps its
//! last sampled value, and it is undefined before the first sample.
//! Derivative sensors evaluate to the difference between the current reading
//! and the reading one window earlier, undefined when either side precedes
//! the trace.
//!
//! An occurrence of a diagram is an assignment of a timestamp to every
//! vertex such that each state vector holds at its time and times strictly
//! increase along every arrow; vertices unrelated in the diagram's order may
//! share a timestamp. Candidate times are the trace's sample timestamps,
//! matched vertex by vertex in topological order with pruning by the
//! earliest feasible time.

use crate::graph::validate_wd_graph;
use crate::id::{SensorId, VertexId};
use crate::sensor::{SensorKind, SensorSet, Value};
use crate::wd::{Label, WiringDiagram};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use thiserror::Error;

/// One trace sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub t: i64,
    pub sensor: SensorId,
    pub arg: String,
    pub value: Value,
}

/// A time-sorted sensor trace with per-(sensor, arg) lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    samples: Vec<Sample>,
    series: BTreeMap<(SensorId, String), Vec<(i64, Value)>>,
    /// Declared granularity of the integer timestamps; informational.
    pub time_unit: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("samples are not in nondecreasing time order (t={0} after t={1})")]
    NonMonotone(i64, i64),
    #[error("duplicate sample for ({sensor}, {arg}) at t={t}")]
    DuplicateSample { sensor: SensorId, arg: String, t: i64 },
    #[error("unknown sensor `{0}`")]
    UnknownSensor(SensorId),
    #[error("sensor `{0}` is abstract and cannot be evaluated against a trace")]
    AbstractSensor(SensorId),
    #[error("sensor `{0}` produced a non-numeric reading where a difference was required")]
    NonNumericReading(SensorId),
    #[error("diagram is not a WD graph: {0}")]
    InvalidDiagram(String),
}

impl Trace {
    pub fn from_samples(samples: Vec<Sample>) -> Result<Self, TraceError> {
        for pair in samples.windows(2) {
            if pair[1].t < pair[0].t {
                return Err(TraceError::NonMonotone(pair[1].t, pair[0].t));
            }
        }
        let mut series: BTreeMap<(SensorId, String), Vec<(i64, Value)>> = BTreeMap::new();
        for s in &samples {
            let entry = series
                .entry((s.sensor.clone(), s.arg.clone()))
                .or_default();
            if entry.last().is_some_and(|(t, _)| *t == s.t) {
                return Err(TraceError::DuplicateSample {
                    sensor: s.sensor.clone(),
                    arg: s.arg.clone(),
                    t: s.t,
                });
            }
            entry.push((s.t, s.value.clone()));
        }
        Ok(Self {
            samples,
            series,
            time_unit: "ticks".to_owned(),
        })
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    /// Distinct sample timestamps, ascending.
    pub fn timestamps(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.samples.iter().map(|s| s.t).collect();
        set.into_iter().collect()
    }

    /// Last sampled value of `(sensor, arg)` at or before `t`.
    fn reading(&self, sensor: &SensorId, arg: &str, t: i64) -> Option<&Value> {
        let series = self.series.get(&(sensor.clone(), arg.to_owned()))?;
        let idx = series.partition_point(|(st, _)| *st <= t);
        idx.checked_sub(1).map(|i| &series[i].1)
    }

    /// Parses JSON-lines: one sample object per line, blank lines ignored.
    pub fn from_jsonl(text: &str) -> Result<Self, String> {
        let mut samples = Vec::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let sample: Sample = serde_json::from_str(line)
                .map_err(|e| format!("line {}: {e}", number + 1))?;
            samples.push(sample);
        }
        Self::from_samples(samples).map_err(|e| e.to_string())
    }

    pub fn to_jsonl(&self) -> String {
        self.samples
            .iter()
            .map(|s| serde_json::to_string(s).expect("sample serializes"))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, String> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| format!("{}: {e}", path.as_ref().display()))?;
        Self::from_jsonl(&text)
    }
}

/// Evaluates a declared sensor at time `t`. `Ok(None)` means undefined (no
/// sample yet, or a derivative window reaching before the trace start).
pub fn eval_sensor(
    trace: &Trace,
    sensors: &SensorSet,
    sensor: &SensorId,
    arg: &str,
    t: i64,
) -> Result<Option<Value>, TraceError> {
    let decl = sensors
        .get(sensor)
        .ok_or_else(|| TraceError::UnknownSensor(sensor.clone()))?;
    match &decl.kind {
        SensorKind::Base | SensorKind::Relation { .. } => {
            Ok(trace.reading(sensor, arg, t).cloned())
        }
        SensorKind::Abstract => Err(TraceError::AbstractSensor(sensor.clone())),
        SensorKind::Derivative { base, window } => {
            let now = eval_sensor(trace, sensors, base, arg, t)?;
            let before = eval_sensor(trace, sensors, base, arg, t - *window as i64)?;
            match (now, before) {
                (Some(a), Some(b)) => {
                    let (a, b) = (
                        a.as_int()
                            .ok_or_else(|| TraceError::NonNumericReading(base.clone()))?,
                        b.as_int()
                            .ok_or_else(|| TraceError::NonNumericReading(base.clone()))?,
                    );
                    Ok(Some(Value::Int(a - b)))
                }
                _ => Ok(None),
            }
        }
    }
}

/// Whether every label of a state vector reads its required value at `t`.
/// Empty vectors hold vacuously.
pub fn state_vector_holds(
    trace: &Trace,
    sensors: &SensorSet,
    labels: &BTreeSet<Label>,
    t: i64,
) -> Result<bool, TraceError> {
    for label in labels {
        match eval_sensor(trace, sensors, &label.sensor, &label.arg, t)? {
            Some(v) if v == label.value => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// A witnessing vertex-to-timestamp map.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    pub times: BTreeMap<VertexId, i64>,
}

/// All occurrences of `w` in `trace` (or the first `limit`), as assignments
/// over the trace's sample timestamps. Vertices are matched in topological
/// order; a vertex's candidate times are filtered against the latest time
/// already assigned to its predecessors.
pub fn match_wd(
    trace: &Trace,
    w: &WiringDiagram,
    limit: Option<usize>,
) -> Result<Vec<Assignment>, TraceError> {
    let extension = validate_wd_graph(w.graph())
        .map_err(|e| TraceError::InvalidDiagram(e.to_string()))?;
    let order = extension.order();
    let timestamps = trace.timestamps();

    // Candidate times per vertex.
    let mut candidates: BTreeMap<&VertexId, Vec<i64>> = BTreeMap::new();
    for v in &order {
        let labels = w.state_vector(v).expect("vertex has a vector");
        let mut times = Vec::new();
        for &t in &timestamps {
            if state_vector_holds(trace, &w.sensors, labels, t)? {
                times.push(t);
            }
        }
        candidates.insert(v, times);
    }

    let predecessors: BTreeMap<&VertexId, Vec<VertexId>> = order
        .iter()
        .map(|v| (v, w.graph().in_neighbors(v)))
        .collect();

    let mut out = Vec::new();
    let mut chosen: BTreeMap<VertexId, i64> = BTreeMap::new();
    search(
        &order,
        0,
        &candidates,
        &predecessors,
        &mut chosen,
        &mut out,
        limit,
    );
    out.sort();
    Ok(out)
}

fn search(
    order: &[VertexId],
    depth: usize,
    candidates: &BTreeMap<&VertexId, Vec<i64>>,
    predecessors: &BTreeMap<&VertexId, Vec<VertexId>>,
    chosen: &mut BTreeMap<VertexId, i64>,
    out: &mut Vec<Assignment>,
    limit: Option<usize>,
) {
    if limit.is_some_and(|k| out.len() >= k) {
        return;
    }
    let Some(v) = order.get(depth) else {
        out.push(Assignment {
            times: chosen.clone(),
        });
        return;
    };
    // Strictly after every predecessor; unrelated vertices are unconstrained.
    let earliest = predecessors[v]
        .iter()
        .map(|p| chosen[p])
        .max()
        .map(|t| t + 1)
        .unwrap_or(i64::MIN);
    for &t in &candidates[v] {
        if t < earliest {
            continue;
        }
        chosen.insert(v.clone(), t);
        search(order, depth + 1, candidates, predecessors, chosen, out, limit);
        chosen.remove(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::wd::testkit::{coffee_chain, coffee_sensors, coffee_wd};

    /// The constructed coffee episode: all quiet at t=0, enter at 10, pay at
    /// 30, receive at 40, exit at 60.
    pub fn coffee_trace() -> Trace {
        let mut samples = vec![];
        for sensor in ["F1", "F2", "F3"] {
            samples.push(Sample {
                t: 0,
                sensor: SensorId::from(sensor),
                arg: crate::sensor::POINT.to_owned(),
                value: Value::Int(0),
            });
        }
        for (t, sensor, value) in [(10, "F1", 1), (30, "F2", 1), (40, "F3", 1), (60, "F1", 0)] {
            samples.push(Sample {
                t,
                sensor: SensorId::from(sensor),
                arg: crate::sensor::POINT.to_owned(),
                value: Value::Int(value),
            });
        }
        Trace::from_samples(samples).unwrap()
    }

    #[test]
    fn step_semantics_and_windowed_difference() {
        let trace = coffee_trace();
        let sensors = coffee_sensors();
        let eval = |sensor: &str, t: i64| {
            eval_sensor(&trace, &sensors, &SensorId::from(sensor), crate::sensor::POINT, t)
                .unwrap()
        };
        assert_eq!(eval("F1", 9), Some(Value::Int(0)));
        assert_eq!(eval("F1", 10), Some(Value::Int(1)));
        assert_eq!(eval("F1", 59), Some(Value::Int(1)));
        assert_eq!(eval("F1", -1), None);
        // dF1 at t=12: F1(12) - F1(7) = 1 - 0.
        assert_eq!(eval("dF1", 12), Some(Value::Int(1)));
        assert_eq!(eval("dF1", 30), Some(Value::Int(0)));
        assert_eq!(eval("dF1", 60), Some(Value::Int(-1)));
        // Undefined when the window reaches before the first sample.
        assert_eq!(eval("dF1", 3), None);
    }

    #[test]
    fn constant_sensor_derivative_is_zero_after_start() {
        let trace = Trace::from_samples(vec![Sample {
            t: 0,
            sensor: SensorId::from("F1"),
            arg: crate::sensor::POINT.to_owned(),
            value: Value::Int(1),
        }])
        .unwrap();
        let sensors = coffee_sensors();
        for t in [5, 20, 100] {
            assert_eq!(
                eval_sensor(&trace, &sensors, &SensorId::from("dF1"), crate::sensor::POINT, t)
                    .unwrap(),
                Some(Value::Int(0))
            );
        }
        // Inside the first window one side is undefined.
        assert_eq!(
            eval_sensor(&trace, &sensors, &SensorId::from("dF1"), crate::sensor::POINT, 3)
                .unwrap(),
            None
        );
    }

    #[test]
    fn initial_all_zero_vector_holds_at_zero() {
        let trace = coffee_trace();
        let sensors = coffee_sensors();
        let vector: BTreeSet<Label> = [
            Label::at_point("F1", 0),
            Label::at_point("F2", 0),
            Label::at_point("F3", 0),
        ]
        .into();
        assert!(state_vector_holds(&trace, &sensors, &vector, 0).unwrap());
        assert!(!state_vector_holds(&trace, &sensors, &vector, 10).unwrap());
        assert!(state_vector_holds(&trace, &sensors, &BTreeSet::new(), 0).unwrap());
    }

    #[test]
    fn unknown_sensor_errors() {
        let trace = coffee_trace();
        let sensors = coffee_sensors();
        let vector: BTreeSet<Label> = [Label::at_point("ghost", 1)].into();
        assert!(matches!(
            state_vector_holds(&trace, &sensors, &vector, 0),
            Err(TraceError::UnknownSensor(_))
        ));
    }

    #[test]
    fn coffee_trace_matches_the_diamond_exactly_once() {
        let assignments = match_wd(&coffee_trace(), &coffee_wd(), None).unwrap();
        assert_eq!(assignments.len(), 1);
        let times = &assignments[0].times;
        assert_eq!(times[&VertexId::from("enter")], 10);
        assert_eq!(times[&VertexId::from("pay")], 30);
        assert_eq!(times[&VertexId::from("receive")], 40);
        assert_eq!(times[&VertexId::from("exit")], 60);
    }

    #[test]
    fn misordered_chain_does_not_match() {
        // The receive-before-pay chain cannot embed into a pay-then-receive
        // episode.
        let assignments = match_wd(&coffee_trace(), &coffee_chain(false), None).unwrap();
        assert!(assignments.is_empty());
        // The pay-before-receive chain does.
        let found = match_wd(&coffee_trace(), &coffee_chain(true), None).unwrap();
        assert_eq!(found.len(), 1);
    }

    #[test]
    fn single_vertex_matches_every_holding_time() {
        let trace = coffee_trace();
        let mut w = WiringDiagram::new(coffee_sensors());
        w.add_vertex("only", [Label::at_point("F2", 0)]).unwrap();
        let found = match_wd(&trace, &w, None).unwrap();
        // F2 = 0 holds at t = 0 and t = 10, flips at 30, and stays 1 after.
        let times: Vec<i64> = found
            .iter()
            .map(|a| a.times[&VertexId::from("only")])
            .collect();
        assert_eq!(times, vec![0, 10]);
        let limited = match_wd(&trace, &w, Some(1)).unwrap();
        assert_eq!(limited.len(), 1);
    }

    #[test]
    fn empty_trace_matches_nothing() {
        let trace = Trace::from_samples(vec![]).unwrap();
        let found = match_wd(&trace, &coffee_wd(), None).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn matcher_agrees_with_bruteforce_enumeration() {
        let trace = coffee_trace();
        for w in [coffee_wd(), coffee_chain(true), coffee_chain(false)] {
            let fast = match_wd(&trace, &w, None).unwrap();
            let slow = oracle::match_bruteforce(&trace, &w).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn deleting_an_arrow_never_shrinks_the_assignment_set() {
        let trace = coffee_trace();
        let w = coffee_wd();
        let baseline = match_wd(&trace, &w, None).unwrap();
        for (src, dst) in w.graph().arrow_pairs() {
            let mut relaxed = w.clone();
            relaxed.remove_arrows_between(&src, &dst);
            let more = match_wd(&trace, &relaxed, None).unwrap();
            assert!(more.len() >= baseline.len());
            for a in &baseline {
                assert!(more.contains(a));
            }
        }
    }

    #[test]
    fn jsonl_round_trip() {
        let trace = coffee_trace();
        let text = trace.to_jsonl();
        let back = Trace::from_jsonl(&text).unwrap();
        assert_eq!(trace, back);
    }

    #[test]
    fn nonmonotone_and_duplicate_samples_rejected() {
        let s = |t: i64, v: i64| Sample {
            t,
            sensor: SensorId::from("F1"),
            arg: crate::sensor::POINT.to_owned(),
            value: Value::Int(v),
        };
        assert!(matches!(
            Trace::from_samples(vec![s(5, 0), s(3, 1)]),
            Err(TraceError::NonMonotone(3, 5))
        ));
        assert!(matches!(
            Trace::from_samples(vec![s(5, 0), s(5, 1)]),
            Err(TraceError::DuplicateSample { .. })
        ));
    }
}
