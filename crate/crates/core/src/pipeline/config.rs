use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};

/// Environment variable holding the default project file.
pub const PROJECT_ENV: &str = "OUTILEX_PROJECT";

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LexiconDecl {
    pub path: PathBuf,
    #[serde(default)]
    pub priority: i32,
    /// The file is a compiled index rather than a dictionary source.
    #[serde(default)]
    pub precompiled: bool,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GrammarDecl {
    pub path: PathBuf,
    /// Inline calls up to this depth before parsing.
    #[serde(default)]
    pub flatten: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LookupConfig {
    #[serde(default)]
    pub fold_case: bool,
    #[serde(default)]
    pub fold_diacritics: bool,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields, default)]
pub struct LocateConfig {
    /// `anchored` or `whole`.
    pub mode: String,
    /// `best` or `all`.
    pub policy: String,
}

impl Default for LocateConfig {
    fn default() -> Self {
        Self {
            mode: "anchored".into(),
            policy: "best".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields, default)]
pub struct ConcordConfig {
    pub left: usize,
    pub right: usize,
    /// `text` or `lex`.
    pub sort: String,
    /// `tsv` or `html`.
    pub format: String,
}

impl Default for ConcordConfig {
    fn default() -> Self {
        Self {
            left: 5,
            right: 5,
            sort: "text".into(),
            format: "tsv".into(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields, default)]
pub struct ApplyConfig {
    /// `insert` or `replace`.
    pub mode: String,
    pub prefer_longest: bool,
}

impl Default for ApplyConfig {
    fn default() -> Self {
        Self {
            mode: "insert".into(),
            prefer_longest: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields, default)]
pub struct EnrichConfig {
    pub iterations: usize,
}

impl Default for EnrichConfig {
    fn default() -> Self {
        Self { iterations: 1 }
    }
}

/// A project: the resources of a processing chain. Relative paths are
/// resolved against the directory of the configuration file.
#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    #[serde(default)]
    pub tagset: Option<PathBuf>,
    #[serde(default, rename = "lexicon")]
    pub lexicons: Vec<LexiconDecl>,
    #[serde(default, rename = "grammar")]
    pub grammars: Vec<GrammarDecl>,
    #[serde(default)]
    pub lookup: LookupConfig,
    /// Where artifacts are written.
    #[serde(default = "default_workdir")]
    pub workdir: PathBuf,
    /// Input format: `plain` or `html`.
    #[serde(default = "default_input_format")]
    pub input_format: String,
    #[serde(default)]
    pub locate: LocateConfig,
    #[serde(default)]
    pub concord: ConcordConfig,
    #[serde(default)]
    pub apply: ApplyConfig,
    #[serde(default)]
    pub enrich: EnrichConfig,
}

fn default_workdir() -> PathBuf {
    PathBuf::from(".")
}

fn default_input_format() -> String {
    "plain".into()
}

impl Default for ProjectConfig {
    fn default() -> Self {
        Self {
            tagset: None,
            lexicons: Vec::new(),
            grammars: Vec::new(),
            lookup: LookupConfig::default(),
            workdir: default_workdir(),
            input_format: default_input_format(),
            locate: LocateConfig::default(),
            concord: ConcordConfig::default(),
            apply: ApplyConfig::default(),
            enrich: EnrichConfig::default(),
        }
    }
}

impl ProjectConfig {
    /// Parses a configuration and resolves its paths against `base`.
    /// Every referenced resource must exist.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut config: ProjectConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.resolve(base);
        config.check()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Loads the project named by [`PROJECT_ENV`], if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(PROJECT_ENV) {
            Some(p) if !p.is_empty() => Self::load(Path::new(&p)).map(Some),
            _ => Ok(None),
        }
    }

    fn resolve(&mut self, base: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(t) = &mut self.tagset {
            join(t);
        }
        for l in &mut self.lexicons {
            join(&mut l.path);
        }
        for g in &mut self.grammars {
            join(&mut g.path);
        }
        join(&mut self.workdir);
    }

    fn check(&self) -> Result<()> {
        let paths = self
            .tagset
            .iter()
            .chain(self.lexicons.iter().map(|l| &l.path))
            .chain(self.grammars.iter().map(|g| &g.path));
        for p in paths {
            if !p.exists() {
                return Err(Error::Config(format!("{} does not exist", p.display())));
            }
        }
        let one_of = |what: &str, value: &str, allowed: &[&str]| {
            if allowed.contains(&value) {
                Ok(())
            } else {
                Err(Error::Config(format!("{what} must be one of {}, not `{value}`", allowed.join(", "))))
            }
        };
        one_of("input_format", &self.input_format, &["plain", "html"])?;
        one_of("locate.mode", &self.locate.mode, &["anchored", "whole"])?;
        one_of("locate.policy", &self.locate.policy, &["best", "all"])?;
        one_of("concord.sort", &self.concord.sort, &["text", "lex"])?;
        one_of("concord.format", &self.concord.format, &["tsv", "html"])?;
        one_of("apply.mode", &self.apply.mode, &["insert", "replace"])?;
        Ok(())
    }
}
