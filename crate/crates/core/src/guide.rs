//! The user guide, kept honest: each chapter of the book under `book/`
//! is included here as module documentation, so every code block in the
//! guide compiles and runs as a doc-test of this crate.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}

#[doc = include_str!("../../../book/src/semantics.md")]
pub mod semantics {}

#[doc = include_str!("../../../book/src/lifetrees.md")]
pub mod lifetrees {}

#[doc = include_str!("../../../book/src/bisimulation.md")]
pub mod bisimulation {}

#[doc = include_str!("../../../book/src/kripke.md")]
pub mod kripke {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
