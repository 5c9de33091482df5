//! Ologs as text-labeled directed graphs, fiber products, and the
//! shortest-distance metric between types.
//!
//! An olog is stored as a presentation: types and aspects with display text,
//! plus the pullback squares that were recorded when building new types as
//! fiber products. No composition or commutativity constraints are
//! represented; the metric and the edit-cost machinery only consume the
//! underlying graph. That every aspect denotes a function is a reading
//! convention, not a checked invariant.

use crate::id::{AspectId, TypeId};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::path::Path;
use thiserror::Error;

/// An olog presentation. Type identity is by id, not display text; display
/// text may repeat (e.g. many aspects read "is").
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Olog {
    types: BTreeMap<TypeId, String>,
    aspects: BTreeMap<AspectId, Aspect>,
    pullbacks: Vec<PullbackSquare>,
}

/// One aspect: a labeled arrow between types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Aspect {
    pub text: String,
    pub src: TypeId,
    pub dst: TypeId,
}

/// A recorded fiber-product square: `apex` with projections `p1 : apex -> B`
/// and `p2 : apex -> C` over the cospan `f : B -> D`, `g : C -> D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackSquare {
    pub apex: TypeId,
    pub p1: AspectId,
    pub p2: AspectId,
    pub f: AspectId,
    pub g: AspectId,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OlogError {
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("unknown type `{0}`")]
    UnknownType(TypeId),
    #[error("unknown aspect `{0}`")]
    UnknownAspect(AspectId),
    #[error("aspects `{f}` and `{g}` do not form a cospan: targets `{f_dst}` and `{g_dst}` differ")]
    CospanMismatch {
        f: AspectId,
        g: AspectId,
        f_dst: TypeId,
        g_dst: TypeId,
    },
    #[error("cost of aspect `{0}` must be strictly positive, got {1}")]
    NonpositiveCost(AspectId, f64),
    #[error("cost function is missing aspect `{0}`")]
    MissingCost(AspectId),
    #[error("pullback square on `{apex}` is not square-shaped: {detail}")]
    MalformedSquare { apex: TypeId, detail: String },
}

impl Olog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_type(&mut self, id: TypeId, text: impl Into<String>) -> Result<(), OlogError> {
        if self.types.contains_key(&id) {
            return Err(OlogError::DuplicateId(id.to_string()));
        }
        self.types.insert(id, text.into());
        Ok(())
    }

    pub fn add_aspect(
        &mut self,
        id: AspectId,
        text: impl Into<String>,
        src: TypeId,
        dst: TypeId,
    ) -> Result<(), OlogError> {
        if self.aspects.contains_key(&id) {
            return Err(OlogError::DuplicateId(id.to_string()));
        }
        for t in [&src, &dst] {
            if !self.types.contains_key(t) {
                return Err(OlogError::UnknownType(t.clone()));
            }
        }
        self.aspects.insert(
            id,
            Aspect {
                text: text.into(),
                src,
                dst,
            },
        );
        Ok(())
    }

    /// Records an externally constructed square after checking its shape.
    pub fn record_pullback(&mut self, square: PullbackSquare) -> Result<(), OlogError> {
        self.check_square(&square)?;
        self.pullbacks.push(square);
        Ok(())
    }

    fn check_square(&self, sq: &PullbackSquare) -> Result<(), OlogError> {
        if !self.types.contains_key(&sq.apex) {
            return Err(OlogError::UnknownType(sq.apex.clone()));
        }
        let aspect = |id: &AspectId| {
            self.aspects
                .get(id)
                .ok_or_else(|| OlogError::UnknownAspect(id.clone()))
        };
        let (p1, p2, f, g) = (aspect(&sq.p1)?, aspect(&sq.p2)?, aspect(&sq.f)?, aspect(&sq.g)?);
        let expect = |ok: bool, detail: &str| {
            if ok {
                Ok(())
            } else {
                Err(OlogError::MalformedSquare {
                    apex: sq.apex.clone(),
                    detail: detail.to_owned(),
                })
            }
        };
        expect(p1.src == sq.apex, "p1 does not start at the apex")?;
        expect(p2.src == sq.apex, "p2 does not start at the apex")?;
        expect(p1.dst == f.src, "p1 does not land on the source of f")?;
        expect(p2.dst == g.src, "p2 does not land on the source of g")?;
        expect(f.dst == g.dst, "f and g do not share a target")?;
        Ok(())
    }

    pub fn types(&self) -> impl Iterator<Item = (&TypeId, &str)> {
        self.types.iter().map(|(id, text)| (id, text.as_str()))
    }

    pub fn type_count(&self) -> usize {
        self.types.len()
    }

    pub fn type_text(&self, id: &TypeId) -> Option<&str> {
        self.types.get(id).map(String::as_str)
    }

    pub fn contains_type(&self, id: &TypeId) -> bool {
        self.types.contains_key(id)
    }

    pub fn aspects(&self) -> impl Iterator<Item = (&AspectId, &Aspect)> {
        self.aspects.iter()
    }

    pub fn aspect_count(&self) -> usize {
        self.aspects.len()
    }

    pub fn aspect(&self, id: &AspectId) -> Option<&Aspect> {
        self.aspects.get(id)
    }

    pub fn pullbacks(&self) -> &[PullbackSquare] {
        &self.pullbacks
    }

    /// Extends the olog with the fiber product of the cospan `f : B -> D`,
    /// `g : C -> D`: one new apex type and two new projection aspects
    /// `apex -> B`, `apex -> C`, with the square recorded. The receiver is
    /// not mutated; callers supply the new ids, so repeated application with
    /// distinct ids yields distinct types with identical squares.
    pub fn fiber_product(
        &self,
        f: &AspectId,
        g: &AspectId,
        new_type: (TypeId, &str),
        p1: (AspectId, &str),
        p2: (AspectId, &str),
    ) -> Result<Olog, OlogError> {
        let f_aspect = self
            .aspects
            .get(f)
            .ok_or_else(|| OlogError::UnknownAspect(f.clone()))?;
        let g_aspect = self
            .aspects
            .get(g)
            .ok_or_else(|| OlogError::UnknownAspect(g.clone()))?;
        if f_aspect.dst != g_aspect.dst {
            return Err(OlogError::CospanMismatch {
                f: f.clone(),
                g: g.clone(),
                f_dst: f_aspect.dst.clone(),
                g_dst: g_aspect.dst.clone(),
            });
        }
        let mut out = self.clone();
        let (apex, apex_text) = new_type;
        out.add_type(apex.clone(), apex_text)?;
        out.add_aspect(p1.0.clone(), p1.1, apex.clone(), f_aspect.src.clone())?;
        out.add_aspect(p2.0.clone(), p2.1, apex.clone(), g_aspect.src.clone())?;
        out.record_pullback(PullbackSquare {
            apex,
            p1: p1.0,
            p2: p2.0,
            f: f.clone(),
            g: g.clone(),
        })?;
        Ok(out)
    }

    /// Deterministic DOT rendering: nodes show display text, edges show
    /// aspect text.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph olog {\n");
        for (id, text) in &self.types {
            out.push_str(&format!(
                "  \"{}\" [label=\"{}\", shape=box];\n",
                escape(id.as_str()),
                escape(text)
            ));
        }
        for (id, a) in &self.aspects {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"]; // {}\n",
                escape(a.src.as_str()),
                escape(a.dst.as_str()),
                escape(&a.text),
                id
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&OlogFile::from(self)).expect("olog serializes")
    }

    pub fn from_json(json: &str) -> Result<Self, String> {
        let file: OlogFile = serde_json::from_str(json).map_err(|e| e.to_string())?;
        file.try_into()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, String> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| format!("{}: {e}", path.as_ref().display()))?;
        Self::from_json(&text)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Strictly positive per-aspect edge costs for the shortest-distance metric.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCost {
    costs: BTreeMap<AspectId, f64>,
}

impl EdgeCost {
    /// Unit cost on every aspect of `olog`.
    pub fn unit(olog: &Olog) -> Self {
        Self {
            costs: olog.aspects().map(|(id, _)| (id.clone(), 1.0)).collect(),
        }
    }

    pub fn from_map(costs: BTreeMap<AspectId, f64>) -> Result<Self, OlogError> {
        for (id, c) in &costs {
            if !c.is_finite() || *c <= 0.0 {
                return Err(OlogError::NonpositiveCost(id.clone(), *c));
            }
        }
        Ok(Self { costs })
    }

    pub fn get(&self, aspect: &AspectId) -> Option<f64> {
        self.costs.get(aspect).copied()
    }

    /// Checks that the cost function is total and positive on `olog`.
    pub fn check_total_on(&self, olog: &Olog) -> Result<(), OlogError> {
        for (id, _) in olog.aspects() {
            match self.costs.get(id) {
                None => return Err(OlogError::MissingCost(id.clone())),
                Some(c) if !c.is_finite() || *c <= 0.0 => {
                    return Err(OlogError::NonpositiveCost(id.clone(), *c))
                }
                Some(_) => {}
            }
        }
        Ok(())
    }
}

/// A nonnegative distance or the explicit infinity used for types in
/// distinct connected components. Serialized as a number or the string
/// `"inf"`; addition saturates at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OlogDistance {
    Finite(f64),
    Infinite,
}

impl OlogDistance {
    pub fn zero() -> Self {
        OlogDistance::Finite(0.0)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, OlogDistance::Finite(_))
    }

    pub fn value(&self) -> f64 {
        match self {
            OlogDistance::Finite(v) => *v,
            OlogDistance::Infinite => f64::INFINITY,
        }
    }

    pub fn saturating_add(self, other: OlogDistance) -> OlogDistance {
        match (self, other) {
            (OlogDistance::Finite(a), OlogDistance::Finite(b)) => OlogDistance::Finite(a + b),
            _ => OlogDistance::Infinite,
        }
    }
}

impl fmt::Display for OlogDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OlogDistance::Finite(v) => write!(f, "{v}"),
            OlogDistance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for OlogDistance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            OlogDistance::Finite(v) => serializer.serialize_f64(*v),
            OlogDistance::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for OlogDistance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(v) => Ok(OlogDistance::Finite(v)),
            Repr::Text(s) if s == "inf" => Ok(OlogDistance::Infinite),
            Repr::Text(s) => Err(D::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
        }
    }
}

/// Shortest-distance metric on an olog: forget arrow directions, then take
/// the cheapest path under `c`. Returns 0 for `x = y` and infinity when the
/// types lie in distinct connected components.
pub fn olog_distance(
    olog: &Olog,
    cost: &EdgeCost,
    x: &TypeId,
    y: &TypeId,
) -> Result<OlogDistance, OlogError> {
    Ok(olog_shortest_path(olog, cost, x, y)?.0)
}

/// Like [`olog_distance`] but also returns one witnessing aspect path when
/// the distance is finite.
pub fn olog_shortest_path(
    olog: &Olog,
    cost: &EdgeCost,
    x: &TypeId,
    y: &TypeId,
) -> Result<(OlogDistance, Option<Vec<AspectId>>), OlogError> {
    for t in [x, y] {
        if !olog.contains_type(t) {
            return Err(OlogError::UnknownType(t.clone()));
        }
    }
    cost.check_total_on(olog)?;

    // Undirected adjacency; parallel aspects each contribute an edge.
    let mut adj: BTreeMap<&TypeId, Vec<(&TypeId, &AspectId, f64)>> = BTreeMap::new();
    for (id, aspect) in olog.aspects() {
        let c = cost.get(id).expect("checked total");
        adj.entry(&aspect.src).or_default().push((&aspect.dst, id, c));
        adj.entry(&aspect.dst).or_default().push((&aspect.src, id, c));
    }

    #[derive(PartialEq)]
    struct Entry<'a> {
        cost: f64,
        node: &'a TypeId,
    }
    impl Eq for Entry<'_> {}
    impl Ord for Entry<'_> {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            // Reversed on cost for a min-heap; node id breaks ties so the
            // witness path is deterministic.
            other
                .cost
                .total_cmp(&self.cost)
                .then_with(|| other.node.cmp(self.node))
        }
    }
    impl PartialOrd for Entry<'_> {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    let mut dist: BTreeMap<&TypeId, f64> = BTreeMap::new();
    let mut back: BTreeMap<&TypeId, (&TypeId, &AspectId)> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(x, 0.0);
    heap.push(Entry { cost: 0.0, node: x });
    while let Some(Entry { cost: d, node }) = heap.pop() {
        if d > dist[node] {
            continue;
        }
        if node == y {
            break;
        }
        for (next, aspect, w) in adj.get(node).into_iter().flatten() {
            let nd = d + w;
            if dist.get(next).map_or(true, |&old| nd < old) {
                dist.insert(next, nd);
                back.insert(next, (node, aspect));
                heap.push(Entry { cost: nd, node: next });
            }
        }
    }

    match dist.get(y) {
        None => Ok((OlogDistance::Infinite, None)),
        Some(&d) => {
            let mut path = Vec::new();
            let mut at = y;
            while at != x {
                let (prev, aspect) = back[at];
                path.push(aspect.clone());
                at = prev;
            }
            path.reverse();
            Ok((OlogDistance::Finite(d), Some(path)))
        }
    }
}

// --- file format -----------------------------------------------------------

/// On-disk JSON shape of an olog.
#[derive(Debug, Serialize, Deserialize)]
struct OlogFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    types: Vec<TypeRecord>,
    aspects: Vec<AspectRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pullbacks: Vec<PullbackSquare>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TypeRecord {
    id: TypeId,
    text: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct AspectRecord {
    id: AspectId,
    text: String,
    src: TypeId,
    dst: TypeId,
}

impl From<&Olog> for OlogFile {
    fn from(olog: &Olog) -> Self {
        OlogFile {
            description: None,
            types: olog
                .types()
                .map(|(id, text)| TypeRecord {
                    id: id.clone(),
                    text: text.to_owned(),
                })
                .collect(),
            aspects: olog
                .aspects()
                .map(|(id, a)| AspectRecord {
                    id: id.clone(),
                    text: a.text.clone(),
                    src: a.src.clone(),
                    dst: a.dst.clone(),
                })
                .collect(),
            pullbacks: olog.pullbacks().to_vec(),
        }
    }
}

impl TryFrom<OlogFile> for Olog {
    type Error = String;

    fn try_from(file: OlogFile) -> Result<Self, String> {
        let mut olog = Olog::new();
        for t in file.types {
            olog.add_type(t.id, t.text).map_err(|e| e.to_string())?;
        }
        for a in file.aspects {
            olog.add_aspect(a.id, a.text, a.src, a.dst)
                .map_err(|e| e.to_string())?;
        }
        for sq in file.pullbacks {
            olog.record_pullback(sq).map_err(|e| e.to_string())?;
        }
        Ok(olog)
    }
}

// --- template builders ------------------------------------------------------

/// Reusable olog patterns for representing a relation between entities as a
/// type. These are conveniences over `add_type`/`add_aspect`.
pub mod templates {
    use super::*;

    /// Ids created by [`pair_relation_pattern`].
    pub struct PairRelationIds {
        pub related_pair: TypeId,
        pub pair: TypeId,
        pub kind1: TypeId,
        pub kind2: TypeId,
    }

    /// The pair-of-kinds pattern: a type of pairs `(x, y)` with `x` of kind
    /// `K1` and `y` of kind `K2`, its subtype of pairs satisfying the
    /// relation, and the two projections.
    pub fn pair_relation_pattern(
        olog: &mut Olog,
        prefix: &str,
        kind1: &str,
        kind2: &str,
        relation_text: &str,
    ) -> Result<PairRelationIds, OlogError> {
        let ids = PairRelationIds {
            related_pair: TypeId::new(format!("{prefix}_pair_rel")),
            pair: TypeId::new(format!("{prefix}_pair")),
            kind1: TypeId::new(format!("{prefix}_k1")),
            kind2: TypeId::new(format!("{prefix}_k2")),
        };
        olog.add_type(
            ids.related_pair.clone(),
            format!(
                "a pair (x,y) where x is an entity of kind {kind1}, y is an entity of kind {kind2}, and x {relation_text} y"
            ),
        )?;
        olog.add_type(
            ids.pair.clone(),
            format!(
                "a pair (x,y) where x is an entity of kind {kind1} and y is an entity of kind {kind2}"
            ),
        )?;
        olog.add_type(ids.kind1.clone(), format!("an entity of kind {kind1}"))?;
        olog.add_type(ids.kind2.clone(), format!("an entity of kind {kind2}"))?;
        olog.add_aspect(
            AspectId::new(format!("{prefix}_p1")),
            "p1",
            ids.pair.clone(),
            ids.kind1.clone(),
        )?;
        olog.add_aspect(
            AspectId::new(format!("{prefix}_p2")),
            "p2",
            ids.pair.clone(),
            ids.kind2.clone(),
        )?;
        olog.add_aspect(
            AspectId::new(format!("{prefix}_is")),
            "is",
            ids.related_pair.clone(),
            ids.pair.clone(),
        )?;
        Ok(ids)
    }

    /// Ids created by [`indicator_relation_pattern`].
    pub struct IndicatorRelationIds {
        pub holds: TypeId,
        pub fails: TypeId,
        pub pair: TypeId,
        pub zero: TypeId,
        pub one: TypeId,
        pub bits: TypeId,
        pub indicator: AspectId,
    }

    /// The indicator pattern: the relation's characteristic function
    /// `q_R : pairs -> {0,1}` together with the fiber products of `q_R`
    /// against the inclusions of `{0}` and `{1}`; the fiber over 1 is the
    /// type representing the relation.
    pub fn indicator_relation_pattern(
        olog: &mut Olog,
        prefix: &str,
        set1: &str,
        set2: &str,
        relation_text: &str,
    ) -> Result<IndicatorRelationIds, OlogError> {
        let pair = TypeId::new(format!("{prefix}_pair"));
        let zero = TypeId::new(format!("{prefix}_zero"));
        let one = TypeId::new(format!("{prefix}_one"));
        let bits = TypeId::new(format!("{prefix}_bits"));
        olog.add_type(
            pair.clone(),
            format!("a pair (a,b) where a is in {set1} and b is in {set2}"),
        )?;
        olog.add_type(zero.clone(), "{0}")?;
        olog.add_type(one.clone(), "{1}")?;
        olog.add_type(bits.clone(), "{0,1}")?;
        let indicator = AspectId::new(format!("{prefix}_q"));
        olog.add_aspect(indicator.clone(), "q_R", pair.clone(), bits.clone())?;
        let i0 = AspectId::new(format!("{prefix}_i0"));
        let i1 = AspectId::new(format!("{prefix}_i1"));
        olog.add_aspect(i0.clone(), "is", zero.clone(), bits.clone())?;
        olog.add_aspect(i1.clone(), "is", one.clone(), bits.clone())?;

        let with_fails = olog.fiber_product(
            &indicator,
            &i0,
            (
                TypeId::new(format!("{prefix}_fails")),
                &format!("a pair (a,b) in {set1} x {set2} where NOT (a {relation_text} b)"),
            ),
            (AspectId::new(format!("{prefix}_fails_is")), "is"),
            (AspectId::new(format!("{prefix}_fails_val")), "value"),
        )?;
        let with_holds = with_fails.fiber_product(
            &indicator,
            &i1,
            (
                TypeId::new(format!("{prefix}_holds")),
                &format!("a pair (a,b) in {set1} x {set2} where a {relation_text} b"),
            ),
            (AspectId::new(format!("{prefix}_holds_is")), "is"),
            (AspectId::new(format!("{prefix}_holds_val")), "value"),
        )?;
        *olog = with_holds;
        Ok(IndicatorRelationIds {
            holds: TypeId::new(format!("{prefix}_holds")),
            fails: TypeId::new(format!("{prefix}_fails")),
            pair,
            zero,
            one,
            bits,
            indicator,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The transport-classification olog: a bicycle / human-powered vehicle /
    /// gas-powered vehicle hierarchy over a shared power-source cospan.
    pub fn transport_olog() -> Olog {
        let mut o = Olog::new();
        for (id, text) in [
            ("bicycle", "a bicycle"),
            ("tv", "a transport vehicle"),
            ("ps", "a type of power source"),
            ("hp", "human power"),
            ("gas", "gas"),
            ("gpc", "a gas-powered passenger car"),
        ] {
            o.add_type(TypeId::from(id), text).unwrap();
        }
        o.add_aspect(AspectId::from("hp_is"), "is", TypeId::from("hp"), TypeId::from("ps"))
            .unwrap();
        o.add_aspect(AspectId::from("gas_is"), "is", TypeId::from("gas"), TypeId::from("ps"))
            .unwrap();
        o.add_aspect(
            AspectId::from("tv_power"),
            "has as power source",
            TypeId::from("tv"),
            TypeId::from("ps"),
        )
        .unwrap();
        let o = o
            .fiber_product(
                &AspectId::from("tv_power"),
                &AspectId::from("hp_is"),
                (TypeId::from("hpv"), "a human-powered vehicle"),
                (AspectId::from("hpv_is_tv"), "is"),
                (AspectId::from("hpv_hp"), "has as power source"),
            )
            .unwrap();
        let mut o = o
            .fiber_product(
                &AspectId::from("tv_power"),
                &AspectId::from("gas_is"),
                (TypeId::from("gpv"), "a gas-powered vehicle"),
                (AspectId::from("gpv_is_tv"), "is"),
                (AspectId::from("gpv_gas"), "has as power source"),
            )
            .unwrap();
        o.add_aspect(
            AspectId::from("bicycle_is"),
            "is",
            TypeId::from("bicycle"),
            TypeId::from("hpv"),
        )
        .unwrap();
        o.add_aspect(AspectId::from("gpc_is"), "is", TypeId::from("gpc"), TypeId::from("gpv"))
            .unwrap();
        o
    }

    #[test]
    fn fiber_product_extends_by_one_type_and_two_aspects() {
        let mut o = Olog::new();
        o.add_type(TypeId::from("tv"), "a transport vehicle").unwrap();
        o.add_type(TypeId::from("ps"), "a type of power source").unwrap();
        o.add_type(TypeId::from("hp"), "human power").unwrap();
        o.add_aspect(AspectId::from("f"), "has as power source", TypeId::from("tv"), TypeId::from("ps"))
            .unwrap();
        o.add_aspect(AspectId::from("g"), "is", TypeId::from("hp"), TypeId::from("ps"))
            .unwrap();

        let before_types = o.type_count();
        let before_aspects = o.aspect_count();
        let o2 = o
            .fiber_product(
                &AspectId::from("f"),
                &AspectId::from("g"),
                (TypeId::from("hpv"), "a human-powered vehicle"),
                (AspectId::from("p1"), "is"),
                (AspectId::from("p2"), "has as power source"),
            )
            .unwrap();
        assert_eq!(o2.type_count(), before_types + 1);
        assert_eq!(o2.aspect_count(), before_aspects + 2);
        assert_eq!(o2.pullbacks().len(), 1);
        // Input untouched.
        assert_eq!(o.type_count(), before_types);
        assert_eq!(o.aspect_count(), before_aspects);

        // Same cospan, distinct ids: a second, distinct apex with an
        // identical square shape.
        let o3 = o2
            .fiber_product(
                &AspectId::from("f"),
                &AspectId::from("g"),
                (TypeId::from("hpv2"), "a human-powered vehicle"),
                (AspectId::from("q1"), "is"),
                (AspectId::from("q2"), "has as power source"),
            )
            .unwrap();
        assert_eq!(o3.type_count(), before_types + 2);
        assert_eq!(o3.pullbacks().len(), 2);
        assert_eq!(o3.pullbacks()[0].f, o3.pullbacks()[1].f);
        assert_eq!(o3.pullbacks()[0].g, o3.pullbacks()[1].g);
        assert_ne!(o3.pullbacks()[0].apex, o3.pullbacks()[1].apex);
    }

    #[test]
    fn fiber_product_rejects_mismatched_cospan() {
        let mut o = Olog::new();
        o.add_type(TypeId::from("a"), "a").unwrap();
        o.add_type(TypeId::from("b"), "b").unwrap();
        o.add_type(TypeId::from("c"), "c").unwrap();
        o.add_aspect(AspectId::from("f"), "f", TypeId::from("a"), TypeId::from("b")).unwrap();
        o.add_aspect(AspectId::from("g"), "g", TypeId::from("a"), TypeId::from("c")).unwrap();
        let err = o
            .fiber_product(
                &AspectId::from("f"),
                &AspectId::from("g"),
                (TypeId::from("p"), "p"),
                (AspectId::from("p1"), ""),
                (AspectId::from("p2"), ""),
            )
            .unwrap_err();
        assert!(matches!(err, OlogError::CospanMismatch { .. }));
    }

    #[test]
    fn transport_distances_match_the_worked_example() {
        let o = transport_olog();
        assert_eq!(o.type_count(), 8);
        assert_eq!(o.aspect_count(), 9);
        let unit = EdgeCost::unit(&o);
        let d = |x: &str, y: &str| {
            olog_distance(&o, &unit, &TypeId::from(x), &TypeId::from(y)).unwrap()
        };
        assert_eq!(d("bicycle", "gpc"), OlogDistance::Finite(4.0));
        assert_eq!(d("hpv", "gpv"), OlogDistance::Finite(2.0));
        assert_eq!(d("bicycle", "bicycle"), OlogDistance::zero());
    }

    #[test]
    fn disconnected_types_are_infinitely_far() {
        let mut o = Olog::new();
        o.add_type(TypeId::from("x"), "x").unwrap();
        o.add_type(TypeId::from("y"), "y").unwrap();
        let unit = EdgeCost::unit(&o);
        let d = olog_distance(&o, &unit, &TypeId::from("x"), &TypeId::from("y")).unwrap();
        assert_eq!(d, OlogDistance::Infinite);
        assert_eq!(d.to_string(), "inf");
        assert_eq!(serde_json::to_string(&d).unwrap(), "\"inf\"");
    }

    #[test]
    fn unknown_type_and_bad_costs_error() {
        let o = transport_olog();
        let unit = EdgeCost::unit(&o);
        assert!(matches!(
            olog_distance(&o, &unit, &TypeId::from("bicycle"), &TypeId::from("nope")),
            Err(OlogError::UnknownType(_))
        ));
        let mut costs: BTreeMap<AspectId, f64> =
            o.aspects().map(|(id, _)| (id.clone(), 1.0)).collect();
        costs.insert(AspectId::from("hp_is"), 0.0);
        assert!(matches!(
            EdgeCost::from_map(costs),
            Err(OlogError::NonpositiveCost(_, _))
        ));
        let partial = EdgeCost::from_map(BTreeMap::new()).unwrap();
        assert!(matches!(
            olog_distance(&o, &partial, &TypeId::from("bicycle"), &TypeId::from("gpc")),
            Err(OlogError::MissingCost(_))
        ));
    }

    #[test]
    fn metric_axioms_hold_exhaustively_on_the_transport_olog() {
        let o = transport_olog();
        let unit = EdgeCost::unit(&o);
        let types: Vec<TypeId> = o.types().map(|(id, _)| id.clone()).collect();
        let d = |x: &TypeId, y: &TypeId| olog_distance(&o, &unit, x, y).unwrap().value();
        for x in &types {
            assert_eq!(d(x, x), 0.0);
            for y in &types {
                assert_eq!(d(x, y), d(y, x));
                for z in &types {
                    assert!(d(x, z) <= d(x, y) + d(y, z) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn unit_cost_distance_is_bfs_hop_count() {
        let o = transport_olog();
        let unit = EdgeCost::unit(&o);
        let types: Vec<TypeId> = o.types().map(|(id, _)| id.clone()).collect();
        for x in &types {
            let hops = crate::oracle::undirected_bfs_hops(&o, x);
            for y in &types {
                let d = olog_distance(&o, &unit, x, y).unwrap();
                match hops.get(y) {
                    Some(&h) => assert_eq!(d, OlogDistance::Finite(h as f64)),
                    None => assert_eq!(d, OlogDistance::Infinite),
                }
            }
        }
    }

    #[test]
    fn shortest_path_witness_is_consistent() {
        let o = transport_olog();
        let unit = EdgeCost::unit(&o);
        let (d, path) = olog_shortest_path(
            &o,
            &unit,
            &TypeId::from("bicycle"),
            &TypeId::from("gpc"),
        )
        .unwrap();
        let path = path.unwrap();
        assert_eq!(path.len() as f64, d.value());
    }

    #[test]
    fn indicator_template_records_two_squares() {
        let mut o = Olog::new();
        let ids =
            templates::indicator_relation_pattern(&mut o, "own", "people", "buildings", "owns")
                .unwrap();
        assert_eq!(o.pullbacks().len(), 2);
        let unit = EdgeCost::unit(&o);
        // holds -> pair is one projection hop.
        assert_eq!(
            olog_distance(&o, &unit, &ids.holds, &ids.pair).unwrap(),
            OlogDistance::Finite(1.0)
        );
        // holds and fails meet through pair or {0,1}.
        assert_eq!(
            olog_distance(&o, &unit, &ids.holds, &ids.fails).unwrap(),
            OlogDistance::Finite(2.0)
        );
    }

    #[test]
    fn pair_template_wires_projections() {
        let mut o = Olog::new();
        let ids =
            templates::pair_relation_pattern(&mut o, "own", "person", "building", "owns").unwrap();
        assert_eq!(o.type_count(), 4);
        assert_eq!(o.aspect_count(), 3);
        let unit = EdgeCost::unit(&o);
        assert_eq!(
            olog_distance(&o, &unit, &ids.related_pair, &ids.kind1).unwrap(),
            OlogDistance::Finite(2.0)
        );
    }

    #[test]
    fn json_round_trip() {
        let o = transport_olog();
        let json = o.to_json();
        let o2 = Olog::from_json(&json).unwrap();
        assert_eq!(o, o2);
    }

    #[test]
    fn dot_export_counts() {
        let o = transport_olog();
        let dot = o.to_dot();
        assert_eq!(dot.matches("shape=box").count(), 8);
        assert_eq!(dot.matches(" -> ").count(), 9);
    }
}
