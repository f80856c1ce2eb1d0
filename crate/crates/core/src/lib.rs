//! Three-valued epistemic model checking on impure simplicial complexes
//! and partial epistemic models.
//!
//! The crate interprets an epistemic language with global aliveness atoms
//! on chromatic simplicial complexes whose facets may have differing
//! dimension (some agents crashed), under a paraconsistent weak Kleene
//! semantics where formulas about dead agents are undefined. It provides:
//!
//! * formula parsing, printing and bounded enumeration ([`formula`]);
//! * simplicial models and their geometric queries ([`model`]);
//! * the three-valued evaluator and modal-equivalence testing
//!   ([`semantics`]);
//! * life trees, tree embedding, and the localized undefined-to-true
//!   transformation ([`lifetree`]);
//! * maximal bisimulations and distinguishing-formula synthesis
//!   ([`bisim`]);
//! * partial epistemic (Kripke) models, life/standard bisimulation, and
//!   the simplicial/Kripke converters ([`kripke`]);
//! * executable fixtures and random model generators ([`corpus`]);
//! * DOT export for models and life trees ([`dot`]).

pub mod bisim;
pub mod corpus;
pub mod dot;
pub mod formula;
pub mod guide;
pub mod kripke;
pub mod lifetree;
pub mod model;
pub mod semantics;

pub use formula::{AgentId, Formula, Fragment, LocalAtom, Vocabulary};
pub use model::{Facet, SimplicialModel, VertexId};
pub use semantics::TruthValue;
