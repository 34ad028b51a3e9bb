//! Projects and processing chains: a declarative configuration naming the
//! resources, and named stages run in order over one input file.

mod config;
mod resources;
mod stages;

pub use config::{
    ApplyConfig, ConcordConfig, EnrichConfig, GrammarDecl, LexiconDecl, LocateConfig, LookupConfig, ProjectConfig,
    PROJECT_ENV,
};
pub use resources::{load_lexicon, load_network, load_tagset, read_file, write_file};
pub use stages::{run_pipeline, stage_registry, Artifact, Context, Stage, StageOutput};
