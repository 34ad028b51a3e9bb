use std::path::{Path, PathBuf};

use super::config::ProjectConfig;
use super::resources::{load_lexicon, load_network, load_tagset, read_file, write_file};
use crate::apps::{
    apply_automaton, apply_text, concord, select_matches, write_html, write_matches, write_tsv, ConcordOptions,
    LengthPolicy, RewriteMode, SortOrder,
};
use crate::engine::{Match, MatchPolicy, ParseMode, Parser};
use crate::error::{Error, Result};
use crate::grammar::Wrtn;
use crate::lexicon::{IndexedLexicon, LookupOptions};
use crate::model::Tagset;
use crate::registry::Registry;
use crate::segment::{read_seg, segment, write_seg, SegmentedText, SourceFormat};
use crate::text::{read_fsa, tag, write_fsa, TagOptions, TaggedText};

/// Intermediate results that later stages read back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Artifact {
    Segmented,
    Tagged,
}

impl Artifact {
    fn suffix(self) -> &'static str {
        match self {
            Artifact::Segmented => "seg.xml",
            Artifact::Tagged => "fsa.xml",
        }
    }

    fn describe(self) -> &'static str {
        match self {
            Artifact::Segmented => "the segmented text (run `segment` first)",
            Artifact::Tagged => "the tagged text (run `tag` first)",
        }
    }
}

/// State shared by the stages of one run. Artifacts produced earlier in
/// the run are kept in memory; otherwise they are read back from the
/// working directory.
pub struct Context<'c> {
    pub config: &'c ProjectConfig,
    pub input: PathBuf,
    stem: String,
    tagset: Option<Option<Tagset>>,
    segmented: Option<SegmentedText>,
    tagged: Option<TaggedText>,
    networks: Option<Vec<(String, Wrtn)>>,
    matches: Option<Vec<(usize, Match)>>,
}

impl<'c> Context<'c> {
    pub fn new(config: &'c ProjectConfig, input: &Path) -> Self {
        let name = input.file_name().map_or_else(|| "input".into(), |n| n.to_string_lossy().into_owned());
        let stem = match name.rfind('.') {
            Some(i) if i > 0 => name[..i].to_string(),
            _ => name,
        };
        Self {
            config,
            input: input.to_path_buf(),
            stem,
            tagset: None,
            segmented: None,
            tagged: None,
            networks: None,
            matches: None,
        }
    }

    /// Deterministic artifact path in the working directory.
    pub fn path(&self, suffix: &str) -> PathBuf {
        self.config.workdir.join(format!("{}.{suffix}", self.stem))
    }

    fn tagset(&mut self) -> Result<Option<Tagset>> {
        if self.tagset.is_none() {
            let t = match &self.config.tagset {
                Some(p) => Some(load_tagset(p)?),
                None => None,
            };
            self.tagset = Some(t);
        }
        Ok(self.tagset.clone().flatten())
    }

    fn segmented(&mut self, stage: &str) -> Result<&SegmentedText> {
        if self.segmented.is_none() {
            let text = self.read_back(Artifact::Segmented, stage)?;
            self.segmented = Some(read_seg(&text)?);
        }
        Ok(self.segmented.as_ref().expect("loaded"))
    }

    fn tagged(&mut self, stage: &str) -> Result<&TaggedText> {
        if self.tagged.is_none() {
            let text = self.read_back(Artifact::Tagged, stage)?;
            self.tagged = Some(read_fsa(&text)?);
        }
        Ok(self.tagged.as_ref().expect("loaded"))
    }

    fn read_back(&self, artifact: Artifact, stage: &str) -> Result<String> {
        let path = self.path(artifact.suffix());
        if !path.exists() {
            return Err(Error::MissingPrerequisite {
                stage: stage.to_string(),
                artifact: artifact.describe().to_string(),
            });
        }
        read_file(&path)
    }

    fn networks(&mut self) -> Result<Vec<(String, Wrtn)>> {
        if self.networks.is_none() {
            if self.config.grammars.is_empty() {
                return Err(Error::Config("no grammar declared".into()));
            }
            let mut out = Vec::new();
            for g in &self.config.grammars {
                let (w, _) = load_network(&g.path, g.flatten)?;
                let name = g.path.file_stem().map_or_else(|| w.axiom.clone(), |n| n.to_string_lossy().into_owned());
                out.push((name, w));
            }
            self.networks = Some(out);
        }
        Ok(self.networks.clone().expect("loaded"))
    }

    /// Matches of every grammar, tagged with the grammar's index.
    fn matches(&mut self, stage: &str) -> Result<Vec<(usize, Match)>> {
        if let Some(m) = &self.matches {
            return Ok(m.clone());
        }
        let tagset = self.tagset()?;
        let networks = self.networks()?;
        let mode = if self.config.locate.mode == "whole" {
            ParseMode::WholeSentence
        } else {
            ParseMode::Anchored
        };
        let policy = if self.config.locate.policy == "all" {
            MatchPolicy::All
        } else {
            MatchPolicy::BestPerSpan
        };
        let tagged = self.tagged(stage)?;
        let mut out = Vec::new();
        for (i, (_, w)) in networks.iter().enumerate() {
            let parser = Parser::new(w, tagset.as_ref())?;
            out.extend(parser.locate(tagged, mode, policy).into_iter().map(|m| (i, m)));
        }
        self.matches = Some(out.clone());
        Ok(out)
    }
}

pub trait Stage: Send + Sync {
    /// Runs the stage and returns the files it wrote.
    fn run(&self, ctx: &mut Context<'_>) -> Result<Vec<PathBuf>>;
}

struct Segment;
struct Tag;
struct Locate;
struct Concord;
struct Apply;
struct Enrich;

impl Stage for Segment {
    fn run(&self, ctx: &mut Context<'_>) -> Result<Vec<PathBuf>> {
        let source = read_file(&ctx.input)?;
        let format = if ctx.config.input_format == "html" {
            SourceFormat::Html
        } else {
            SourceFormat::Plain
        };
        let seg = segment(&source, format);
        let path = ctx.path(Artifact::Segmented.suffix());
        write_file(&path, write_seg(&seg))?;
        ctx.segmented = Some(seg);
        ctx.tagged = None;
        ctx.matches = None;
        Ok(vec![path])
    }
}

impl Stage for Tag {
    fn run(&self, ctx: &mut Context<'_>) -> Result<Vec<PathBuf>> {
        let tagset = ctx.tagset()?;
        let mut lexicons: Vec<IndexedLexicon> = Vec::new();
        for l in &ctx.config.lexicons {
            lexicons.push(load_lexicon(&l.path, l.priority, l.precompiled, tagset.as_ref())?);
        }
        let options = TagOptions {
            lookup: LookupOptions {
                fold_case: ctx.config.lookup.fold_case,
                fold_diacritics: ctx.config.lookup.fold_diacritics,
            },
        };
        let refs: Vec<&IndexedLexicon> = lexicons.iter().collect();
        let tagged = tag(ctx.segmented("tag")?, &refs, options)?;
        let path = ctx.path(Artifact::Tagged.suffix());
        write_file(&path, write_fsa(&tagged))?;
        ctx.tagged = Some(tagged);
        ctx.matches = None;
        Ok(vec![path])
    }
}

impl Stage for Locate {
    fn run(&self, ctx: &mut Context<'_>) -> Result<Vec<PathBuf>> {
        let matches = ctx.matches("locate")?;
        let names: Vec<String> = ctx.networks()?.into_iter().map(|(n, _)| n).collect();
        let tagged = ctx.tagged("locate")?;
        let mut listing = String::new();
        for (i, name) in names.iter().enumerate() {
            let own: Vec<Match> = matches.iter().filter(|(g, _)| *g == i).map(|(_, m)| m.clone()).collect();
            for line in write_matches(&own, tagged).lines() {
                listing.push_str(&format!("{name}\t{line}\n"));
            }
        }
        let path = ctx.path("locate.tsv");
        write_file(&path, listing)?;
        Ok(vec![path])
    }
}

impl Stage for Concord {
    fn run(&self, ctx: &mut Context<'_>) -> Result<Vec<PathBuf>> {
        let matches: Vec<Match> = ctx.matches("concord")?.into_iter().map(|(_, m)| m).collect();
        let c = &ctx.config.concord;
        let options = ConcordOptions {
            left: c.left,
            right: c.right,
            order: if c.sort == "lex" {
                SortOrder::Lexicographic
            } else {
                SortOrder::Text
            },
        };
        let html = c.format == "html";
        let lines = concord(&matches, ctx.segmented("concord")?, options);
        let (path, data) = if html {
            (ctx.path("concord.html"), write_html(&lines))
        } else {
            (ctx.path("concord.tsv"), write_tsv(&lines))
        };
        write_file(&path, data)?;
        Ok(vec![path])
    }
}

impl Stage for Apply {
    fn run(&self, ctx: &mut Context<'_>) -> Result<Vec<PathBuf>> {
        let matches: Vec<Match> = ctx.matches("apply")?.into_iter().map(|(_, m)| m).collect();
        let a = &ctx.config.apply;
        let mode = if a.mode == "replace" {
            RewriteMode::Replace
        } else {
            RewriteMode::Insert
        };
        let policy = if a.prefer_longest {
            LengthPolicy::PreferLongest
        } else {
            LengthPolicy::None
        };
        let plan = select_matches(&matches, policy, mode);
        let ext = if ctx.config.input_format == "html" { "html" } else { "txt" };
        let out = apply_text(ctx.segmented("apply")?, &plan);
        let path = ctx.path(&format!("applied.{ext}"));
        write_file(&path, out)?;
        Ok(vec![path])
    }
}

impl Stage for Enrich {
    fn run(&self, ctx: &mut Context<'_>) -> Result<Vec<PathBuf>> {
        let tagset = ctx.tagset()?;
        let networks = ctx.networks()?;
        let iterations = ctx.config.enrich.iterations;
        let mut text = ctx.tagged("enrich")?.clone();
        for (_, w) in &networks {
            let parser = Parser::new(w, tagset.as_ref())?;
            text = apply_automaton(&text, &parser, iterations).text;
        }
        let path = ctx.path("enriched.fsa.xml");
        write_file(&path, write_fsa(&text))?;
        Ok(vec![path])
    }
}

/// Pipeline stages by name, in chain order.
pub fn stage_registry() -> Registry<dyn Stage> {
    Registry::<dyn Stage>::new("stage")
        .with("segment", Box::new(Segment))
        .with("tag", Box::new(Tag))
        .with("locate", Box::new(Locate))
        .with("concord", Box::new(Concord))
        .with("apply", Box::new(Apply))
        .with("enrich", Box::new(Enrich))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageOutput {
    pub stage: String,
    pub files: Vec<PathBuf>,
}

/// Runs `stages` in order over `input`. Names are checked before anything
/// runs.
pub fn run_pipeline(config: &ProjectConfig, input: &Path, stages: &[&str]) -> Result<Vec<StageOutput>> {
    let registry = stage_registry();
    let resolved = stages.iter().map(|s| registry.get(s)).collect::<Result<Vec<_>>>()?;
    let mut ctx = Context::new(config, input);
    let mut out = Vec::new();
    for (name, stage) in stages.iter().zip(resolved) {
        out.push(StageOutput {
            stage: name.to_string(),
            files: stage.run(&mut ctx)?,
        });
    }
    Ok(out)
}
