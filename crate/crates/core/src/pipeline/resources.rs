use std::path::Path;

use crate::error::{Error, Result};
use crate::grammar::{compile, compile_wrtn, flatten, grf_to_graphs, read_grammar, read_wrtn, GrammarWarning, Wrtn};
use crate::lexicon::{build_index, parse_dela, xml_to_dela, IndexedLexicon};
use crate::model::Tagset;

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes `data`, creating missing parent directories.
pub fn write_file(path: &Path, data: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, data).map_err(|e| Error::io(path, e))
}

pub fn load_tagset(path: &Path) -> Result<Tagset> {
    Ok(Tagset::parse(&read_file(path)?)?)
}

fn file_name(path: &Path) -> String {
    path.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned())
}

/// Loads a lexicon: a compiled index when `precompiled` or the name ends
/// in `.idx`, an XML dictionary when it ends in `.xml`, else DELA lines.
pub fn load_lexicon(path: &Path, priority: i32, precompiled: bool, tagset: Option<&Tagset>) -> Result<IndexedLexicon> {
    let name = file_name(path);
    let mut lexicon = if precompiled || name.ends_with(".idx") {
        let data = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let l = IndexedLexicon::from_bytes(&data)?;
        l.check_tagset(tagset)?;
        l
    } else {
        let text = read_file(path)?;
        let entries = if name.ends_with(".xml") {
            xml_to_dela(&text, tagset)?
        } else {
            parse_dela(&text, true)?.entries
        };
        let stem = name.split('.').next().unwrap_or_default();
        build_index(&entries, tagset, priority, stem)?
    };
    lexicon.priority = priority;
    Ok(lexicon)
}

/// Loads and compiles a grammar: `.grf` graphs, a compiled network
/// document (root `wrtn`) or a graph document (root `grammar`). With
/// `flatten`, calls are then inlined to that depth.
pub fn load_network(path: &Path, flatten_depth: Option<usize>) -> Result<(Wrtn, Vec<GrammarWarning>)> {
    let text = read_file(path)?;
    let (wrtn, warnings) = if file_name(path).ends_with(".grf") {
        compile(&grf_to_graphs(&text)?)?
    } else if root_element(&text) == Some("wrtn") {
        compile_wrtn(&read_wrtn(&text)?)?
    } else {
        compile(&read_grammar(&text)?)?
    };
    match flatten_depth {
        Some(d) => Ok((flatten(&wrtn, d)?, warnings)),
        None => Ok((wrtn, warnings)),
    }
}

fn root_element(text: &str) -> Option<&str> {
    let mut rest = text;
    loop {
        rest = rest.trim_start();
        if rest.starts_with("<?") || rest.starts_with("<!") {
            rest = &rest[rest.find('>')? + 1..];
        } else {
            let r = rest.strip_prefix('<')?;
            let end = r.find(|c: char| c.is_whitespace() || c == '>' || c == '/')?;
            return Some(&r[..end]);
        }
    }
}
