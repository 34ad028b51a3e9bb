use crate::registry::Registry;

use super::{export_text_dot, read_binary, read_fsa, write_binary, write_fsa, TagError, TaggedText};

/// A serialisation of tagged texts.
pub trait TaggedTextFormat: Send + Sync {
    fn extension(&self) -> &'static str;
    fn write(&self, tagged: &TaggedText) -> Vec<u8>;
    fn read(&self, data: &[u8]) -> Result<TaggedText, TagError>;
}

struct Fsa;

impl TaggedTextFormat for Fsa {
    fn extension(&self) -> &'static str {
        "fsa.xml"
    }

    fn write(&self, tagged: &TaggedText) -> Vec<u8> {
        write_fsa(tagged).into_bytes()
    }

    fn read(&self, data: &[u8]) -> Result<TaggedText, TagError> {
        let text = std::str::from_utf8(data)
            .map_err(|e| crate::error::FormatError::Xml(format!("invalid UTF-8: {e}")))?;
        read_fsa(text)
    }
}

struct Binary;

impl TaggedTextFormat for Binary {
    fn extension(&self) -> &'static str {
        "fsa.bin"
    }

    fn write(&self, tagged: &TaggedText) -> Vec<u8> {
        write_binary(tagged)
    }

    fn read(&self, data: &[u8]) -> Result<TaggedText, TagError> {
        read_binary(data)
    }
}

struct Dot;

impl TaggedTextFormat for Dot {
    fn extension(&self) -> &'static str {
        "dot"
    }

    fn write(&self, tagged: &TaggedText) -> Vec<u8> {
        export_text_dot(tagged).into_bytes()
    }

    fn read(&self, _: &[u8]) -> Result<TaggedText, TagError> {
        Err(TagError::WriteOnly("dot"))
    }
}

/// Tagged-text formats by name: `fsa`, `bin` and the write-only `dot`.
pub fn format_registry() -> Registry<dyn TaggedTextFormat> {
    Registry::<dyn TaggedTextFormat>::new("tagged-text format")
        .with("fsa", Box::new(Fsa))
        .with("bin", Box::new(Binary))
        .with("dot", Box::new(Dot))
}

impl TaggedText {
    /// Picks a format from a file name, by the longest matching extension.
    pub fn format_for_path(path: &std::path::Path) -> Option<&'static str> {
        let name = path.file_name()?.to_str()?;
        let reg = format_registry();
        reg.iter()
            .filter(|(_, f)| name.ends_with(&format!(".{}", f.extension())))
            .max_by_key(|(_, f)| f.extension().len())
            .map(|(n, _)| n)
    }
}
