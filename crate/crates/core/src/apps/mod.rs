//! Products built from matches: concordances, rewritten text and enriched
//! text automata.

mod concord;
mod enrich;
mod rewrite;

pub use concord::{concord, write_html, write_matches, write_tsv, ConcordOptions, ConcordanceLine, SortOrder};
pub use enrich::{apply_automaton, Enrichment, MAX_MARKS_PER_SPAN};
pub use rewrite::{apply_text, select_matches, LengthPolicy, RewriteMode, RewritePlan};

#[cfg(test)]
mod tests;
