//! Sensing-function declarations.
//!
//! A sensing function has a domain (what the sensor can be applied to) and a
//! codomain (its possible outputs). Domains are the singleton `•` or a finite
//! argument enumeration; codomains are finite value enumerations or numeric
//! intervals. Besides directly sampled `base` sensors there are `derivative`
//! sensors (windowed differences of a base sensor), `relation` sensors
//! (indicator of a fixed pair under a declared relation), and `abstract`
//! sensors (generic placeholders that exist so label-change edits can target
//! them and so labels can be linked to olog types).

use crate::id::{SensorId, TypeId};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use thiserror::Error;

/// The singleton domain marker.
pub const POINT: &str = "•";

/// A sensor reading or label value: an integer or a symbol.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Text(String),
}

impl Value {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            Value::Text(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

/// Admissible arguments of a sensing function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainSpec {
    /// The singleton `•`, serialized as the string `"•"`.
    Point,
    /// A finite enumeration of admissible arguments.
    Args(BTreeSet<String>),
}

impl serde::Serialize for DomainSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            DomainSpec::Point => serializer.serialize_str(POINT),
            DomainSpec::Args(args) => args.serialize(serializer),
        }
    }
}

impl<'de> serde::Deserialize<'de> for DomainSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Args(BTreeSet<String>),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) if s == POINT => Ok(DomainSpec::Point),
            Repr::Text(s) => Err(D::Error::custom(format!(
                "expected \"{POINT}\" or an argument list, got {s:?}"
            ))),
            Repr::Args(args) => Ok(DomainSpec::Args(args)),
        }
    }
}

impl DomainSpec {
    pub fn admits(&self, arg: &str) -> bool {
        match self {
            DomainSpec::Point => arg == POINT,
            DomainSpec::Args(args) => args.contains(arg),
        }
    }
}

/// Possible outputs of a sensing function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CodomainSpec {
    /// A finite value enumeration.
    Values(BTreeSet<Value>),
    /// A closed numeric interval; integer readings inside it are admitted.
    Interval { min: f64, max: f64 },
}

impl CodomainSpec {
    pub fn bits() -> Self {
        CodomainSpec::Values([Value::Int(0), Value::Int(1)].into())
    }

    pub fn admits(&self, value: &Value) -> bool {
        match self {
            CodomainSpec::Values(vs) => vs.contains(value),
            CodomainSpec::Interval { min, max } => match value {
                Value::Int(i) => *min <= *i as f64 && *i as f64 <= *max,
                Value::Text(_) => false,
            },
        }
    }

    fn all_int(&self) -> bool {
        match self {
            CodomainSpec::Values(vs) => vs.iter().all(|v| matches!(v, Value::Int(_))),
            CodomainSpec::Interval { .. } => true,
        }
    }
}

/// How a declared sensor produces values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SensorKind {
    /// Sampled directly.
    Base,
    /// Windowed difference of another sensor: current value minus the value
    /// `window` time units ago.
    Derivative { base: SensorId, window: u64 },
    /// Indicator of a fixed entity pair under a declared relation.
    Relation {
        relation: String,
        first: String,
        second: String,
    },
    /// Generic sensing function; cannot be evaluated against a trace.
    Abstract,
}

/// A sensing-function declaration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensingFunctionDecl {
    pub id: SensorId,
    #[serde(flatten)]
    pub kind: SensorKind,
    pub domain: DomainSpec,
    pub codomain: CodomainSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub olog_type: Option<TypeId>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SensorError {
    #[error("duplicate sensor id `{0}`")]
    DuplicateSensor(SensorId),
    #[error("unknown sensor `{0}`")]
    UnknownSensor(SensorId),
    #[error("derivative sensor `{id}` references unknown base `{base}`")]
    UnknownBase { id: SensorId, base: SensorId },
    #[error("derivative window must be strictly positive")]
    NonpositiveWindow,
    #[error("sensor `{0}` has a non-numeric codomain; cannot take differences")]
    NonNumericCodomain(SensorId),
    #[error("relation sensor `{0}` must have codomain {{0,1}}")]
    RelationCodomain(SensorId),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("entity `{entity}` is not in the declared {side} set of relation `{relation}`")]
    EntityNotInSet {
        relation: String,
        entity: String,
        side: &'static str,
    },
}

/// A catalog of sensing-function declarations. Declarations may exceed what a
/// given wiring diagram's labels use.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SensorSet {
    decls: BTreeMap<SensorId, SensingFunctionDecl>,
}

impl SensorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, decl: SensingFunctionDecl) -> Result<(), SensorError> {
        if self.decls.contains_key(&decl.id) {
            return Err(SensorError::DuplicateSensor(decl.id));
        }
        match &decl.kind {
            SensorKind::Derivative { base, window } => {
                if *window == 0 {
                    return Err(SensorError::NonpositiveWindow);
                }
                if !self.decls.contains_key(base) {
                    return Err(SensorError::UnknownBase {
                        id: decl.id.clone(),
                        base: base.clone(),
                    });
                }
            }
            SensorKind::Relation { .. } => {
                if decl.codomain != CodomainSpec::bits() {
                    return Err(SensorError::RelationCodomain(decl.id));
                }
            }
            SensorKind::Base | SensorKind::Abstract => {}
        }
        self.decls.insert(decl.id.clone(), decl);
        Ok(())
    }

    /// Inserts, ignoring an identical existing declaration.
    pub fn merge(&mut self, decl: SensingFunctionDecl) -> Result<(), SensorError> {
        if let Some(existing) = self.decls.get(&decl.id) {
            if *existing == decl {
                return Ok(());
            }
            return Err(SensorError::DuplicateSensor(decl.id));
        }
        self.insert(decl)
    }

    /// Merges every declaration of `other` into `self`.
    pub fn merge_all(&mut self, other: &SensorSet) -> Result<(), SensorError> {
        // Insertion in id order can see a derivative before its base; collect
        // bases first.
        let (bases, rest): (Vec<_>, Vec<_>) = other
            .decls
            .values()
            .partition(|d| !matches!(d.kind, SensorKind::Derivative { .. }));
        for decl in bases.into_iter().chain(rest) {
            self.merge(decl.clone())?;
        }
        Ok(())
    }

    pub fn get(&self, id: &SensorId) -> Option<&SensingFunctionDecl> {
        self.decls.get(id)
    }

    pub fn contains(&self, id: &SensorId) -> bool {
        self.decls.contains_key(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &SensingFunctionDecl> {
        self.decls.values()
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn from_decls(
        decls: impl IntoIterator<Item = SensingFunctionDecl>,
    ) -> Result<Self, SensorError> {
        let all: Vec<_> = decls.into_iter().collect();
        let mut set = Self::new();
        let (bases, rest): (Vec<_>, Vec<_>) = all
            .into_iter()
            .partition(|d| !matches!(d.kind, SensorKind::Derivative { .. }));
        for decl in bases.into_iter().chain(rest) {
            set.insert(decl)?;
        }
        Ok(set)
    }
}

/// Difference set `{a - b : a, b in codomain}` of a numeric codomain.
fn difference_codomain(id: &SensorId, codomain: &CodomainSpec) -> Result<CodomainSpec, SensorError> {
    if !codomain.all_int() {
        return Err(SensorError::NonNumericCodomain(id.clone()));
    }
    match codomain {
        CodomainSpec::Values(vs) => {
            let ints: Vec<i64> = vs.iter().filter_map(Value::as_int).collect();
            let mut out = BTreeSet::new();
            for a in &ints {
                for b in &ints {
                    out.insert(Value::Int(a - b));
                }
            }
            Ok(CodomainSpec::Values(out))
        }
        CodomainSpec::Interval { min, max } => Ok(CodomainSpec::Interval {
            min: min - max,
            max: max - min,
        }),
    }
}

/// Builds the windowed-difference sensor `d<base>`: current value of `base`
/// minus its value `window` time units ago. The codomain becomes the
/// difference set of the base codomain (e.g. `{0,1}` to `{-1,0,1}`).
pub fn derive_sensor(
    base: &SensingFunctionDecl,
    window: u64,
) -> Result<SensingFunctionDecl, SensorError> {
    if window == 0 {
        return Err(SensorError::NonpositiveWindow);
    }
    Ok(SensingFunctionDecl {
        id: SensorId::new(format!("d{}", base.id)),
        kind: SensorKind::Derivative {
            base: base.id.clone(),
            window,
        },
        domain: base.domain.clone(),
        codomain: difference_codomain(&base.id, &base.codomain)?,
        olog_type: None,
    })
}

/// Declared binary relations over finite entity sets, used to mint relation
/// sensors.
#[derive(Debug, Clone, Default)]
pub struct RelationRegistry {
    relations: BTreeMap<String, (BTreeSet<String>, BTreeSet<String>)>,
}

impl RelationRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare(
        &mut self,
        relation: impl Into<String>,
        lhs: impl IntoIterator<Item = String>,
        rhs: impl IntoIterator<Item = String>,
    ) {
        self.relations.insert(
            relation.into(),
            (lhs.into_iter().collect(), rhs.into_iter().collect()),
        );
    }
}

/// The indicator sensor of a fixed pair `(a, b)` under a declared relation:
/// domain `{•}`, codomain `{0,1}`, reading 1 exactly when the relation holds.
/// Deterministic by construction: equal inputs yield equal declarations.
pub fn relation_sensor(
    registry: &RelationRegistry,
    relation: &str,
    a: &str,
    b: &str,
) -> Result<SensingFunctionDecl, SensorError> {
    let (lhs, rhs) = registry
        .relations
        .get(relation)
        .ok_or_else(|| SensorError::UnknownRelation(relation.to_owned()))?;
    if !lhs.contains(a) {
        return Err(SensorError::EntityNotInSet {
            relation: relation.to_owned(),
            entity: a.to_owned(),
            side: "left",
        });
    }
    if !rhs.contains(b) {
        return Err(SensorError::EntityNotInSet {
            relation: relation.to_owned(),
            entity: b.to_owned(),
            side: "right",
        });
    }
    Ok(SensingFunctionDecl {
        id: SensorId::new(format!("{relation}({a},{b})")),
        kind: SensorKind::Relation {
            relation: relation.to_owned(),
            first: a.to_owned(),
            second: b.to_owned(),
        },
        domain: DomainSpec::Point,
        codomain: CodomainSpec::bits(),
        olog_type: None,
    })
}

/// Loads a bare sensor catalog from JSON (`[{decl}, ...]`).
pub fn load_sensors(path: impl AsRef<Path>) -> Result<SensorSet, String> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| format!("{}: {e}", path.as_ref().display()))?;
    let decls: Vec<SensingFunctionDecl> =
        serde_json::from_str(&text).map_err(|e| e.to_string())?;
    SensorSet::from_decls(decls).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn bit_sensor(id: &str) -> SensingFunctionDecl {
        SensingFunctionDecl {
            id: SensorId::from(id),
            kind: SensorKind::Base,
            domain: DomainSpec::Point,
            codomain: CodomainSpec::bits(),
            olog_type: None,
        }
    }

    #[test]
    fn derivative_of_bits_has_three_values() {
        let f1 = bit_sensor("F1");
        let df1 = derive_sensor(&f1, 5).unwrap();
        assert_eq!(df1.id, SensorId::from("dF1"));
        assert_eq!(
            df1.codomain,
            CodomainSpec::Values([Value::Int(-1), Value::Int(0), Value::Int(1)].into())
        );
        assert!(matches!(df1.kind, SensorKind::Derivative { window: 5, .. }));
    }

    #[test]
    fn derivative_of_constant_is_constant() {
        let mut c = bit_sensor("Z");
        c.codomain = CodomainSpec::Values([Value::Int(0)].into());
        let dc = derive_sensor(&c, 7).unwrap();
        assert_eq!(dc.codomain, CodomainSpec::Values([Value::Int(0)].into()));
    }

    #[test]
    fn derivative_of_relation_sensor() {
        let mut reg = RelationRegistry::new();
        reg.declare(
            "plugged_into",
            ["s".to_owned()],
            ["c".to_owned()],
        );
        let c_sc = relation_sensor(&reg, "plugged_into", "s", "c").unwrap();
        let d = derive_sensor(&c_sc, 5).unwrap();
        assert_eq!(d.id.as_str(), "dplugged_into(s,c)");
        assert_eq!(
            d.codomain,
            CodomainSpec::Values([Value::Int(-1), Value::Int(0), Value::Int(1)].into())
        );
    }

    #[test]
    fn non_numeric_codomain_rejected() {
        let mut s = bit_sensor("S");
        s.codomain = CodomainSpec::Values([Value::from("red"), Value::from("green")].into());
        assert!(matches!(
            derive_sensor(&s, 1),
            Err(SensorError::NonNumericCodomain(_))
        ));
    }

    #[test]
    fn relation_sensor_is_idempotent_and_validated() {
        let mut reg = RelationRegistry::new();
        reg.declare(
            "inside",
            ["b".to_owned()],
            ["p".to_owned()],
        );
        let t1 = relation_sensor(&reg, "inside", "b", "p").unwrap();
        let t2 = relation_sensor(&reg, "inside", "b", "p").unwrap();
        assert_eq!(t1, t2);
        assert_eq!(t1.domain, DomainSpec::Point);
        assert_eq!(t1.codomain, CodomainSpec::bits());
        assert!(matches!(
            relation_sensor(&reg, "owns", "b", "p"),
            Err(SensorError::UnknownRelation(_))
        ));
        assert!(matches!(
            relation_sensor(&reg, "inside", "x", "p"),
            Err(SensorError::EntityNotInSet { .. })
        ));
    }

    #[test]
    fn sensor_set_validates_references() {
        let mut set = SensorSet::new();
        set.insert(bit_sensor("F1")).unwrap();
        let df1 = derive_sensor(set.get(&SensorId::from("F1")).unwrap(), 5).unwrap();
        set.insert(df1).unwrap();
        let dangling = SensingFunctionDecl {
            id: SensorId::from("dX"),
            kind: SensorKind::Derivative {
                base: SensorId::from("X"),
                window: 5,
            },
            domain: DomainSpec::Point,
            codomain: CodomainSpec::bits(),
            olog_type: None,
        };
        assert!(matches!(
            set.insert(dangling),
            Err(SensorError::UnknownBase { .. })
        ));
    }

    #[test]
    fn decl_json_round_trip() {
        let f1 = bit_sensor("F1");
        let df1 = derive_sensor(&f1, 5).unwrap();
        for decl in [f1, df1] {
            let json = serde_json::to_string(&decl).unwrap();
            let back: SensingFunctionDecl = serde_json::from_str(&json).unwrap();
            assert_eq!(decl, back);
        }
    }
}
