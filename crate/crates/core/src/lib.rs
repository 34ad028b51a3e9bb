//! Written-text processing chain built on finite-state machinery.
//!
//! The crate is organised as a pipeline:
//!
//! * [`segment`] splits raw plain or HTML text into paragraphs, sentences and
//!   typed tokens and reads/writes the segmented-text document.
//! * [`lexicon`] handles DELA and dictionary XML files, paradigm-based
//!   inflection and minimal acyclic automaton indexes with prioritised,
//!   folding-aware lookup.
//! * [`text`] tags segmented text into per-sentence acyclic automata
//!   (word lattices) and serializes them.
//! * [`grammar`] models weighted recursive transition networks, compiles,
//!   flattens and converts them.
//! * [`engine`] runs an Earley-style recognizer of a compiled network over a
//!   sentence lattice and returns a weighted shared parse forest.
//! * [`apps`] turns parse results into concordances, rewritten text and
//!   enriched lattices.
//! * [`pipeline`] chains the stages from a project configuration.

pub mod apps;
pub mod binio;
pub mod engine;
pub mod error;
pub mod grammar;
pub mod lexicon;
pub mod model;
pub mod pipeline;
pub mod registry;
pub mod segment;
pub mod text;
pub mod xml;

#[cfg(test)]
mod fixtures;

pub use error::{Error, Result};
