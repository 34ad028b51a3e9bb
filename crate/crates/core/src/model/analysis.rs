use std::fmt;

use super::Tagset;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Feature {
    pub name: String,
    pub value: String,
}

impl Feature {
    pub fn new(name: impl Into<String>, value: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            value: value.into(),
        }
    }
}

/// One reading of a word: surface form, lemma, part of speech and features.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexicalAnalysis {
    pub form: String,
    pub lemma: String,
    pub pos: String,
    pub features: Vec<Feature>,
}

impl LexicalAnalysis {
    pub fn new(form: impl Into<String>, lemma: impl Into<String>, pos: impl Into<String>) -> Self {
        Self {
            form: form.into(),
            lemma: lemma.into(),
            pos: pos.into(),
            features: Vec::new(),
        }
    }

    pub fn with(mut self, name: &str, value: &str) -> Self {
        self.features.push(Feature::new(name, value));
        self
    }

    pub fn feature(&self, name: &str) -> Option<&str> {
        self.features
            .iter()
            .find(|f| f.name == name)
            .map(|f| f.value.as_str())
    }
}

impl fmt::Display for LexicalAnalysis {
    /// `form/lemma.pos+name=value...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}.{}", self.form, self.lemma, self.pos)?;
        for feat in &self.features {
            write!(f, "+{}={}", feat.name, feat.value)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Checks an analysis against a tagset. An empty result means the analysis
/// is valid.
pub fn validate_analysis(analysis: &LexicalAnalysis, tagset: &Tagset) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let Some(pos) = tagset.pos(&analysis.pos) else {
        out.push(Diagnostic {
            message: format!("undeclared part of speech `{}`", analysis.pos),
        });
        return out;
    };
    for (i, feat) in analysis.features.iter().enumerate() {
        let earlier = &analysis.features[..i];
        if earlier.iter().any(|f| f.name == feat.name) {
            // Report each repeated attribute once.
            if earlier.iter().filter(|f| f.name == feat.name).count() == 1 {
                out.push(Diagnostic {
                    message: format!("attribute `{}` has more than one value", feat.name),
                });
            }
            continue;
        }
        let Some(decl) = pos.attribute(&feat.name) else {
            out.push(Diagnostic {
                message: format!("attribute `{}` is not declared for `{}`", feat.name, pos.name),
            });
            continue;
        };
        let ty = tagset
            .attr_type(&decl.type_ref)
            .expect("tagset invariant: attribute types resolve");
        if ty.value(&feat.value).is_none() {
            out.push(Diagnostic {
                message: format!("`{}` is not a value of `{}`", feat.value, feat.name),
            });
        }
    }
    out
}
