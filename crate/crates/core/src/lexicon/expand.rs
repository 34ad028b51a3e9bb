//! Resolution of DELA part-of-speech names, traits and inflectional codes
//! against a tagset.
//!
//! Without a tagset the symbols stay opaque: a trait `t` becomes the
//! feature `t=true` and a code `c` becomes `code=c`.

use crate::model::{AttrKind, Feature, LexicalAnalysis, PosDef, Tagset};

use super::{LexiconEntry, LexiconError};

/// Feature name holding an unresolved inflectional code.
pub(crate) const OPAQUE_CODE: &str = "code";

#[derive(Debug, Clone, Copy)]
pub struct AliasResolver<'t> {
    tagset: Option<&'t Tagset>,
}

impl<'t> AliasResolver<'t> {
    pub fn new(tagset: Option<&'t Tagset>) -> Self {
        Self { tagset }
    }

    fn pos_def(&self, pos: &str) -> Result<Option<&'t PosDef>, LexiconError> {
        match self.tagset {
            None => Ok(None),
            Some(ts) => ts
                .pos_by_any(pos)
                .map(Some)
                .ok_or_else(|| LexiconError::UnknownPos(pos.to_string())),
        }
    }

    /// Full part-of-speech name of a DELA category.
    pub fn pos_name(&self, pos: &str) -> Result<String, LexiconError> {
        Ok(self.pos_def(pos)?.map_or_else(|| pos.to_string(), |p| p.name.clone()))
    }

    /// DELA spelling of a part of speech: its cute name when it has one.
    pub fn dela_pos(&self, pos: &str) -> Result<String, LexiconError> {
        Ok(match self.pos_def(pos)? {
            None => pos.to_string(),
            Some(p) => p.cutename.clone().unwrap_or_else(|| p.name.clone()),
        })
    }

    pub fn trait_feature(&self, pos: &str, symbol: &str) -> Result<Feature, LexiconError> {
        let Some(def) = self.pos_def(pos)? else {
            return Ok(Feature::new(symbol, "true"));
        };
        let ts = self.tagset.expect("pos_def implies a tagset");
        let typed = || {
            def.attributes
                .iter()
                .filter_map(|a| ts.attr_type(&a.type_ref).map(|t| (a, t)))
        };
        let found = typed()
            .find_map(|(a, t)| {
                t.values
                    .iter()
                    .find(|v| v.dela_trait.as_deref() == Some(symbol))
                    .map(|v| Feature::new(&a.name, &v.name))
            })
            .or_else(|| {
                let mut chars = symbol.chars();
                let single = chars.next().filter(|_| chars.next().is_none())?;
                typed().find_map(|(a, t)| t.by_alias(single).map(|v| Feature::new(&a.name, &v.name)))
            })
            .or_else(|| {
                typed().find_map(|(a, t)| t.value(symbol).map(|v| Feature::new(&a.name, &v.name)))
            })
            .or_else(|| {
                typed()
                    .find(|(a, t)| t.kind == AttrKind::Bool && a.name == symbol)
                    .map(|(a, _)| Feature::new(&a.name, "true"))
            });
        found.ok_or_else(|| LexiconError::UnresolvableAlias {
            pos: pos.to_string(),
            symbol: symbol.to_string(),
        })
    }

    pub fn code_features(&self, pos: &str, code: &str) -> Result<Vec<Feature>, LexiconError> {
        let Some(def) = self.pos_def(pos)? else {
            return Ok(vec![Feature::new(OPAQUE_CODE, code)]);
        };
        let ts = self.tagset.expect("pos_def implies a tagset");
        code.chars()
            .map(|c| {
                let lookup = |shortcut: bool| {
                    def.attributes
                        .iter()
                        .filter(|a| a.shortcut == shortcut)
                        .find_map(|a| {
                            let t = ts.attr_type(&a.type_ref)?;
                            t.by_alias(c).map(|v| Feature::new(&a.name, &v.name))
                        })
                };
                lookup(true)
                    .or_else(|| lookup(false))
                    .ok_or_else(|| LexiconError::UnresolvableAlias {
                        pos: pos.to_string(),
                        symbol: c.to_string(),
                    })
            })
            .collect()
    }

    /// DELA trait spelling of a semantic feature.
    pub fn feature_trait(&self, pos: &str, f: &Feature) -> Result<String, LexiconError> {
        let unresolvable = || LexiconError::UnresolvableAlias {
            pos: pos.to_string(),
            symbol: format!("{}={}", f.name, f.value),
        };
        let Some(def) = self.pos_def(pos)? else {
            return if f.value == "true" {
                Ok(f.name.clone())
            } else {
                Err(unresolvable())
            };
        };
        let ts = self.tagset.expect("pos_def implies a tagset");
        let t = ts.attr_type_for(&def.name, &f.name).ok_or_else(unresolvable)?;
        let v = t.value(&f.value).ok_or_else(unresolvable)?;
        if let Some(tr) = &v.dela_trait {
            return Ok(tr.clone());
        }
        match t.kind {
            AttrKind::Enum => Ok(v.name.clone()),
            AttrKind::Bool if v.name == "true" => Ok(f.name.clone()),
            AttrKind::Bool => Err(unresolvable()),
        }
    }

    /// DELA code characters of inflectional features.
    pub fn features_code(&self, pos: &str, feats: &[Feature]) -> Result<String, LexiconError> {
        let unresolvable = |f: &Feature| LexiconError::UnresolvableAlias {
            pos: pos.to_string(),
            symbol: format!("{}={}", f.name, f.value),
        };
        let def = self.pos_def(pos)?;
        let mut code = String::new();
        for f in feats {
            match def {
                None if f.name == OPAQUE_CODE => code.push_str(&f.value),
                None => return Err(unresolvable(f)),
                Some(def) => {
                    let ts = self.tagset.expect("pos_def implies a tagset");
                    let alias = ts
                        .attr_type_for(&def.name, &f.name)
                        .and_then(|t| t.value(&f.value))
                        .and_then(|v| v.alias)
                        .ok_or_else(|| unresolvable(f))?;
                    code.push(alias);
                }
            }
        }
        Ok(code)
    }
}

/// Expands a DELA entry into one analysis per inflectional code (or a
/// single one when the entry has no code).
pub fn expand_entry(
    entry: &LexiconEntry,
    tagset: Option<&Tagset>,
) -> Result<Vec<LexicalAnalysis>, LexiconError> {
    let r = AliasResolver::new(tagset);
    let mut base = LexicalAnalysis::new(&entry.form, &entry.lemma, r.pos_name(&entry.pos)?);
    for t in &entry.traits {
        base.features.push(r.trait_feature(&entry.pos, t)?);
    }
    if entry.codes.is_empty() {
        return Ok(vec![base]);
    }
    entry
        .codes
        .iter()
        .map(|code| {
            let mut a = base.clone();
            a.features.extend(r.code_features(&entry.pos, code)?);
            Ok(a)
        })
        .collect()
}
