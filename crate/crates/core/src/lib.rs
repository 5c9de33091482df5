//! Concepts as ologs and wiring diagrams, and analogy between concepts as a
//! distance.
//!
//! An *olog* (ontology log) is a category whose objects (*types*) and arrows
//! (*aspects*) carry text labels; here ologs are stored as presentations, i.e.
//! labeled directed graphs with recorded pullback squares. A *wiring diagram*
//! is a finite DAG whose vertices carry *state vectors*: sets of sensor labels
//! `(F, x, y)` meaning "sensing function `F` applied to `x` reads `y`". An
//! arrow means the source state is achieved strictly before the target state.
//!
//! Two metrics are provided:
//!
//! * [`olog::olog_distance`] — shortest-path distance between two types of an
//!   olog, with positive edge costs and arrow directions forgotten;
//! * [`search::wd_distance_exact`] — minimum-cost edit path between two
//!   skeleton wiring diagrams under nine elementary edit operations, where the
//!   cost of changing a label can itself be an olog distance.
//!
//! Module map:
//!
//! * [`graph`] — directed multigraphs, linear extensions, transitive
//!   closure/reduction, skeleton test
//! * [`olog`] — olog presentations, fiber products, shortest-distance metric
//! * [`sensor`], [`wd`] — sensing-function declarations, labels, wiring
//!   diagrams and their validation
//! * [`cat`] — the category of skeleton WD graphs over a fixed vertex set
//! * [`edit`], [`canon`], [`search`] — elementary edit operations, diagram
//!   isomorphism, and the edit metric
//! * [`trace`] — detecting occurrences of a wiring diagram in a sensor trace
//! * [`oracle`] — slow reference implementations used to cross-check the fast
//!   paths in tests

pub mod canon;
pub mod cat;
pub mod edit;
pub mod graph;
pub mod id;
pub mod olog;
pub mod oracle;
pub mod search;
pub mod sensor;
pub mod trace;
pub mod wd;
