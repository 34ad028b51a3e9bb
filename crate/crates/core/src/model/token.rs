use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    Numeric,
    Punctuation,
    Symbol,
}

impl TokenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TokenKind::Word => "word",
            TokenKind::Numeric => "numeric",
            TokenKind::Punctuation => "punctuation",
            TokenKind::Symbol => "symbol",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "word" => TokenKind::Word,
            "numeric" => TokenKind::Numeric,
            "punctuation" => TokenKind::Punctuation,
            "symbol" => TokenKind::Symbol,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseClass {
    Lower,
    Capitalized,
    Upper,
    Mixed,
    NotApplicable,
}

impl CaseClass {
    /// Attribute value in segmented documents; lower case is the implicit
    /// default for words and is never written.
    pub fn code(self) -> Option<&'static str> {
        match self {
            CaseClass::Lower | CaseClass::NotApplicable => None,
            CaseClass::Capitalized => Some("capit"),
            CaseClass::Upper => Some("upper"),
            CaseClass::Mixed => Some("mixed"),
        }
    }

    pub fn from_code(s: &str) -> Option<Self> {
        Some(match s {
            "lower" => CaseClass::Lower,
            "capit" => CaseClass::Capitalized,
            "upper" => CaseClass::Upper,
            "mixed" => CaseClass::Mixed,
            "none" => CaseClass::NotApplicable,
            _ => return None,
        })
    }

    /// Classifies a run of letters.
    pub fn of_word(word: &str) -> Self {
        let mut cased = word.chars().filter(|c| c.is_uppercase() || c.is_lowercase());
        let Some(first) = cased.next() else {
            return CaseClass::NotApplicable;
        };
        let rest: Vec<bool> = cased.map(char::is_uppercase).collect();
        match (first.is_uppercase(), rest.iter().all(|&u| u), rest.iter().all(|&u| !u)) {
            (false, _, true) => CaseClass::Lower,
            (true, true, _) if rest.is_empty() => CaseClass::Capitalized,
            (true, true, _) => CaseClass::Upper,
            (true, _, true) => CaseClass::Capitalized,
            _ => CaseClass::Mixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PunctRole {
    Opening,
    Closing,
    Neutral,
    NotApplicable,
}

impl PunctRole {
    pub fn code(self) -> Option<&'static str> {
        match self {
            PunctRole::Opening => Some("open"),
            PunctRole::Closing => Some("close"),
            PunctRole::Neutral | PunctRole::NotApplicable => None,
        }
    }
}

/// A typed token of the source text. Ids are unique document-wide and are
/// kept by every later stage.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub id: String,
    pub surface: String,
    pub kind: TokenKind,
    pub alphabet: Option<String>,
    pub case_class: CaseClass,
    pub punct_role: PunctRole,
    /// Byte offsets `[start, end)` in the source text.
    pub span: (usize, usize),
}

impl Token {
    pub fn starts_uppercase(&self) -> bool {
        self.surface.chars().next().is_some_and(char::is_uppercase)
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.surface)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_classes() {
        assert_eq!(CaseClass::of_word("police"), CaseClass::Lower);
        assert_eq!(CaseClass::of_word("La"), CaseClass::Capitalized);
        assert_eq!(CaseClass::of_word("A"), CaseClass::Capitalized);
        assert_eq!(CaseClass::of_word("AFP"), CaseClass::Upper);
        assert_eq!(CaseClass::of_word("iPod"), CaseClass::Mixed);
        assert_eq!(CaseClass::of_word("McDo"), CaseClass::Mixed);
        assert_eq!(CaseClass::of_word("漢字"), CaseClass::NotApplicable);
    }
}
