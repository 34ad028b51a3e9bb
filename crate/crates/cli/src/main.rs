use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser as ClapParser, Subcommand, ValueEnum};
use outilex_core::apps::{
    apply_automaton, apply_text, concord, select_matches, write_html, write_matches, write_tsv, ConcordOptions,
    LengthPolicy, RewriteMode, SortOrder,
};
use outilex_core::engine::{MatchPolicy, ParseMode, Parser};
use outilex_core::grammar::{
    compile_with, compile_wrtn, export_dot, flatten, graphs_to_grf, grf_to_graphs, read_grammar, read_wrtn, write_grammar,
    write_wrtn, GrammarError, GrammarSet, Wrtn, DEFAULT_PASSES,
};
use outilex_core::lexicon::{
    build_index, dela_to_xml, inflect, lookup_multi, parse_dela, read_paradigms, write_dela, xml_to_dela,
    IndexedLexicon, LemmaEntry, LookupOptions,
};
use outilex_core::model::Tagset;
use outilex_core::pipeline::{load_lexicon, load_network, load_tagset, run_pipeline, ProjectConfig, PROJECT_ENV};
use outilex_core::segment::{read_seg, segment, write_seg, SegmentedText, SourceFormat};
use outilex_core::text::{format_registry, tag, TagOptions, TaggedText};
use outilex_core::Error;

#[derive(ClapParser)]
#[command(name = "outilex", version, about = "Written-text processing with dictionaries and weighted grammars")]
struct Cli {
    /// Tagset document used to resolve codes and validate analyses.
    #[arg(long, global = true, env = "OUTILEX_TAGSET")]
    tagset: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split plain or HTML text into paragraphs, sentences and tokens.
    Segment {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        html: bool,
    },
    /// Generate inflected DELA entries from lemma lines and paradigms.
    Inflect {
        #[command(flatten)]
        io: Io,
        /// Paradigm document.
        #[arg(long)]
        paradigms: PathBuf,
    },
    /// Compile a DELA or dictionary XML file into a binary index.
    Index {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 0)]
        priority: i32,
        /// Index name; defaults to the input file stem.
        #[arg(long)]
        name: Option<String>,
    },
    /// Convert a dictionary between DELA and XML.
    Convert {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum)]
        to: DictFormat,
    },
    /// Print the analyses of forms (arguments, or one per stdin line).
    Lookup {
        #[command(flatten)]
        lex: Lexicons,
        forms: Vec<String>,
    },
    /// Build the text automata of a segmented text.
    Tag {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        lex: Lexicons,
        /// Output format: fsa, bin or dot.
        #[arg(long, default_value = "fsa")]
        format: String,
        /// Print unknown-token statistics on stderr.
        #[arg(long)]
        stats: bool,
    },
    /// Compile a grammar into a network document.
    CompileGrammar {
        #[command(flatten)]
        io: Io,
        /// Comma-separated optimisation passes.
        #[arg(long, value_delimiter = ',')]
        passes: Option<Vec<String>>,
    },
    /// Inline calls up to a depth.
    Flatten {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        depth: usize,
    },
    /// Convert grammar graphs between the XML document and grf text.
    ConvertGrammar {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum)]
        to: GrammarFormat,
    },
    /// List grammar matches in a tagged text.
    Locate {
        #[command(flatten)]
        g: GrammarArgs,
        /// Match from the first to the last state of each sentence only.
        #[arg(long)]
        whole: bool,
        /// Keep every reading instead of the best per span.
        #[arg(long)]
        all: bool,
    },
    /// Build a concordance of grammar matches.
    Concord {
        #[command(flatten)]
        g: GrammarArgs,
        /// Segmented text the tagged text was built from.
        #[arg(long)]
        seg: PathBuf,
        #[arg(long, default_value_t = 5)]
        left: usize,
        #[arg(long, default_value_t = 5)]
        right: usize,
        #[arg(long, value_enum, default_value_t = Sort::Text)]
        sort: Sort,
        #[arg(long)]
        html: bool,
    },
    /// Rewrite the source text with grammar outputs.
    Apply {
        #[command(flatten)]
        g: GrammarArgs,
        #[arg(long)]
        seg: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Insert)]
        mode: Mode,
        #[arg(long)]
        prefer_longest: bool,
    },
    /// Add grammar outputs to the tagged text as marks.
    Enrich {
        #[command(flatten)]
        g: GrammarArgs,
        #[arg(long, default_value_t = 1)]
        iterations: usize,
        #[arg(long, default_value = "fsa")]
        format: String,
    },
    /// Export a grammar or a tagged text as Graphviz dot.
    ExportDot {
        #[command(flatten)]
        io: Io,
    },
    /// Print statistics of a tagged text or a compiled index.
    Stats { input: PathBuf },
    /// Run pipeline stages over an input file.
    Run {
        /// Project configuration.
        #[arg(long, env = PROJECT_ENV)]
        project: PathBuf,
        input: PathBuf,
        /// Comma-separated stages, in order.
        #[arg(long, value_delimiter = ',', default_value = "")]
        stages: Vec<String>,
    },
}

#[derive(Args)]
struct Io {
    /// Input file; stdin when absent or `-`.
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Lexicons {
    /// Lexicon as `path` or `path:priority`; repeatable.
    #[arg(long = "lexicon", required = true)]
    lexicons: Vec<String>,
    #[arg(long)]
    fold_case: bool,
    #[arg(long)]
    fold_diacritics: bool,
}

#[derive(Args)]
struct GrammarArgs {
    /// Grammar: graph document, grf file or compiled network.
    #[arg(long)]
    grammar: PathBuf,
    /// Tagged text (fsa or bin).
    #[arg(long)]
    text: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DictFormat {
    Dela,
    Xml,
}

#[derive(Clone, Copy, ValueEnum)]
enum GrammarFormat {
    Xml,
    Grf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sort {
    Text,
    Lex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Insert,
    Replace,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("outilex: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnknownName { .. } | Error::Grammar(GrammarError::UnknownPass { .. }) => 2,
        Error::Io { .. } => 3,
        Error::Format(_) | Error::Tagset(_) | Error::Lexicon(_) | Error::Tag(_) | Error::Grammar(_) => 4,
        Error::Config(_) => 5,
        Error::MissingPrerequisite { .. } => 6,
    }
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>, Error> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::read(p).map_err(|e| Error::io(p, e)),
        _ => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf).map_err(|e| Error::io("<stdin>", e))?;
            Ok(buf)
        }
    }
}

fn read_text(path: Option<&Path>) -> Result<String, Error> {
    let name = path.map_or_else(|| PathBuf::from("<stdin>"), Path::to_path_buf);
    String::from_utf8(read_input(path)?)
        .map_err(|e| Error::io(name, std::io::Error::new(std::io::ErrorKind::InvalidData, e)))
}

fn write_output(path: Option<&Path>, data: &[u8]) -> Result<(), Error> {
    match path {
        Some(p) => outilex_core::pipeline::write_file(p, data),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data).and_then(|_| out.flush()).map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn stem(path: Option<&Path>) -> String {
    path.and_then(|p| p.file_name())
        .and_then(|n| n.to_str())
        .and_then(|n| n.split('.').next())
        .unwrap_or("lexicon")
        .to_string()
}

fn looks_like_xml(text: &str) -> bool {
    text.trim_start().starts_with('<')
}

fn dictionary_entries(text: &str, tagset: Option<&Tagset>) -> Result<Vec<outilex_core::lexicon::LexiconEntry>, Error> {
    if looks_like_xml(text) {
        Ok(xml_to_dela(text, tagset)?)
    } else {
        let parsed = parse_dela(text, false)?;
        for d in &parsed.diagnostics {
            eprintln!("warning: line {}: {}", d.line, d.message);
        }
        Ok(parsed.entries)
    }
}

fn lexicon_spec(spec: &str) -> (PathBuf, i32) {
    if let Some((path, prio)) = spec.rsplit_once(':') {
        if let Ok(p) = prio.parse() {
            return (PathBuf::from(path), p);
        }
    }
    (PathBuf::from(spec), 0)
}

fn load_lexicons(lex: &Lexicons, tagset: Option<&Tagset>) -> Result<(Vec<IndexedLexicon>, LookupOptions), Error> {
    let loaded = lex
        .lexicons
        .iter()
        .map(|s| {
            let (path, priority) = lexicon_spec(s);
            load_lexicon(&path, priority, false, tagset)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let options = LookupOptions {
        fold_case: lex.fold_case,
        fold_diacritics: lex.fold_diacritics,
    };
    Ok((loaded, options))
}

fn read_tagged(path: &Path) -> Result<TaggedText, Error> {
    let name = TaggedText::format_for_path(path).unwrap_or("fsa");
    let data = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(format_registry().get(name)?.read(&data)?)
}

fn read_segmented(path: &Path) -> Result<SegmentedText, Error> {
    Ok(read_seg(&outilex_core::pipeline::read_file(path)?)?)
}

fn graph_set(text: &str, path: Option<&Path>) -> Result<GrammarSet, Error> {
    let grf = path.is_some_and(|p| p.extension().is_some_and(|e| e == "grf"));
    if grf || !looks_like_xml(text) {
        Ok(grf_to_graphs(text)?)
    } else {
        Ok(read_grammar(text)?)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let tagset = cli.tagset.as_deref().map(load_tagset).transpose()?;
    let tagset = tagset.as_ref();
    match cli.command {
        Command::Segment { io, html } => {
            let source = read_text(io.input.as_deref())?;
            let format = if html { SourceFormat::Html } else { SourceFormat::Plain };
            write_output(io.output.as_deref(), write_seg(&segment(&source, format)).as_bytes())
        }
        Command::Inflect { io, paradigms } => {
            let set = read_paradigms(&outilex_core::pipeline::read_file(&paradigms)?)?;
            let lemmas = LemmaEntry::parse_lines(&read_text(io.input.as_deref())?)?;
            write_output(io.output.as_deref(), write_dela(&inflect(&lemmas, &set)?).as_bytes())
        }
        Command::Index { io, priority, name } => {
            let entries = dictionary_entries(&read_text(io.input.as_deref())?, tagset)?;
            let name = name.unwrap_or_else(|| stem(io.input.as_deref()));
            let index = build_index(&entries, tagset, priority, &name)?;
            let s = index.stats();
            eprintln!(
                "{} entries, {} forms, {} states, {} transitions",
                s.entries, s.forms, s.states, s.transitions
            );
            write_output(io.output.as_deref(), &index.to_bytes())
        }
        Command::Convert { io, to } => {
            let entries = dictionary_entries(&read_text(io.input.as_deref())?, tagset)?;
            let out = match to {
                DictFormat::Dela => write_dela(&entries),
                DictFormat::Xml => dela_to_xml(&entries, tagset)?,
            };
            write_output(io.output.as_deref(), out.as_bytes())
        }
        Command::Lookup { lex, forms } => {
            let (loaded, options) = load_lexicons(&lex, tagset)?;
            let refs: Vec<&IndexedLexicon> = loaded.iter().collect();
            let forms = if forms.is_empty() {
                read_text(None)?.lines().map(str::to_string).filter(|l| !l.is_empty()).collect()
            } else {
                forms
            };
            let mut out = String::new();
            for form in &forms {
                let found = lookup_multi(&refs, form, options);
                if found.is_empty() {
                    out.push_str(&format!("{form}\t?\n"));
                }
                for a in found {
                    out.push_str(&format!("{form}\t{a}\n"));
                }
            }
            write_output(None, out.as_bytes())
        }
        Command::Tag { io, lex, format, stats } => {
            let writer = format_registry();
            let writer = writer.get(&format)?;
            let seg = read_seg(&read_text(io.input.as_deref())?)?;
            let (loaded, lookup) = load_lexicons(&lex, tagset)?;
            let refs: Vec<&IndexedLexicon> = loaded.iter().collect();
            let tagged = tag(&seg, &refs, TagOptions { lookup })?;
            if stats {
                eprint!("{}", unknown_report(&tagged));
            }
            write_output(io.output.as_deref(), &writer.write(&tagged))
        }
        Command::CompileGrammar { io, passes } => {
            let text = read_text(io.input.as_deref())?;
            let w = source_network(&text, io.input.as_deref())?;
            let passes: Vec<String> = passes.unwrap_or_else(|| DEFAULT_PASSES.iter().map(|s| s.to_string()).collect());
            let names: Vec<&str> = passes.iter().map(String::as_str).collect();
            let (w, warnings) = compile_with(&w, &names)?;
            for warning in warnings {
                eprintln!("warning: {warning}");
            }
            write_output(io.output.as_deref(), write_wrtn(&w).as_bytes())
        }
        Command::Flatten { io, depth } => {
            let text = read_text(io.input.as_deref())?;
            let w = compiled_network(&text, io.input.as_deref())?;
            let flat = flatten(&w, depth)?;
            if flat.approximate {
                eprintln!("warning: calls beyond depth {depth} were dropped");
            }
            write_output(io.output.as_deref(), write_wrtn(&flat).as_bytes())
        }
        Command::ConvertGrammar { io, to } => {
            let text = read_text(io.input.as_deref())?;
            let set = graph_set(&text, io.input.as_deref())?;
            let out = match to {
                GrammarFormat::Xml => write_grammar(&set),
                GrammarFormat::Grf => graphs_to_grf(&set),
            };
            write_output(io.output.as_deref(), out.as_bytes())
        }
        Command::Locate { g, whole, all } => {
            let (w, tagged) = grammar_and_text(&g)?;
            let parser = Parser::new(&w, tagset)?;
            let mode = if whole { ParseMode::WholeSentence } else { ParseMode::Anchored };
            let policy = if all { MatchPolicy::All } else { MatchPolicy::BestPerSpan };
            let matches = parser.locate(&tagged, mode, policy);
            write_output(g.output.as_deref(), write_matches(&matches, &tagged).as_bytes())
        }
        Command::Concord {
            g,
            seg,
            left,
            right,
            sort,
            html,
        } => {
            let (w, tagged) = grammar_and_text(&g)?;
            let seg = read_segmented(&seg)?;
            let matches = Parser::new(&w, tagset)?.locate(&tagged, ParseMode::Anchored, MatchPolicy::BestPerSpan);
            let order = match sort {
                Sort::Text => SortOrder::Text,
                Sort::Lex => SortOrder::Lexicographic,
            };
            let lines = concord(&matches, &seg, ConcordOptions { left, right, order });
            let out = if html { write_html(&lines) } else { write_tsv(&lines) };
            write_output(g.output.as_deref(), out.as_bytes())
        }
        Command::Apply {
            g,
            seg,
            mode,
            prefer_longest,
        } => {
            let (w, tagged) = grammar_and_text(&g)?;
            let seg = read_segmented(&seg)?;
            let matches = Parser::new(&w, tagset)?.locate(&tagged, ParseMode::Anchored, MatchPolicy::BestPerSpan);
            let mode = match mode {
                Mode::Insert => RewriteMode::Insert,
                Mode::Replace => RewriteMode::Replace,
            };
            let policy = if prefer_longest { LengthPolicy::PreferLongest } else { LengthPolicy::None };
            let out = apply_text(&seg, &select_matches(&matches, policy, mode));
            write_output(g.output.as_deref(), out.as_bytes())
        }
        Command::Enrich { g, iterations, format } => {
            let writer = format_registry();
            let writer = writer.get(&format)?;
            let (w, tagged) = grammar_and_text(&g)?;
            let result = apply_automaton(&tagged, &Parser::new(&w, tagset)?, iterations);
            eprintln!("marks added per pass: {:?}", result.added);
            write_output(g.output.as_deref(), &writer.write(&result.text))
        }
        Command::ExportDot { io } => {
            let tagged_format = io.input.as_deref().and_then(TaggedText::format_for_path);
            let out = match tagged_format {
                Some(f) if f != "dot" => {
                    let tagged = read_tagged(io.input.as_deref().expect("path"))?;
                    String::from_utf8(format_registry().get("dot")?.write(&tagged)).expect("dot is UTF-8")
                }
                _ => {
                    let text = read_text(io.input.as_deref())?;
                    let w = compiled_network(&text, io.input.as_deref())?;
                    w.automata.iter().map(export_dot).collect::<Vec<_>>().join("\n")
                }
            };
            write_output(io.output.as_deref(), out.as_bytes())
        }
        Command::Stats { input } => {
            if TaggedText::format_for_path(&input).is_some() {
                return write_output(None, unknown_report(&read_tagged(&input)?).as_bytes());
            }
            let data = std::fs::read(&input).map_err(|e| Error::io(&input, e))?;
            let index = IndexedLexicon::from_bytes(&data)?;
            let s = index.stats();
            println!("name\t{}\npriority\t{}", index.name, index.priority);
            println!(
                "entries\t{}\nforms\t{}\nstates\t{}\ntransitions\t{}\nanalyses\t{}\npayload sets\t{}\nbytes\t{}",
                s.entries,
                s.forms,
                s.states,
                s.transitions,
                s.analyses,
                s.payload_sets,
                data.len()
            );
            Ok(())
        }
        Command::Run { project, input, stages } => {
            let config = ProjectConfig::load(&project)?;
            let stages: Vec<&str> = stages.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
            for out in run_pipeline(&config, &input, &stages)? {
                for f in out.files {
                    println!("{}\t{}", out.stage, f.display());
                }
            }
            Ok(())
        }
    }
}

/// Reads a network without compiling it: grf text, a network document
/// (root `wrtn`) or a graph document.
fn source_network(text: &str, path: Option<&Path>) -> Result<Wrtn, Error> {
    let grf = path.is_some_and(|p| p.extension().is_some_and(|e| e == "grf"));
    if !grf && looks_like_xml(text) && text.contains("<wrtn") {
        return Ok(read_wrtn(text)?);
    }
    let set = graph_set(text, path)?;
    set.validate()?;
    Ok(set.to_wrtn())
}

fn compiled_network(text: &str, path: Option<&Path>) -> Result<Wrtn, Error> {
    let (w, warnings) = compile_wrtn(&source_network(text, path)?)?;
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
    Ok(w)
}

fn grammar_and_text(g: &GrammarArgs) -> Result<(Wrtn, TaggedText), Error> {
    let (w, _) = load_network(&g.grammar, None)?;
    Ok((w, read_tagged(&g.text)?))
}

fn unknown_report(tagged: &TaggedText) -> String {
    let s = &tagged.stats;
    format!(
        "word tokens\t{}\nunknown\t{}\nunknown capitalized\t{}\nunknown rate\t{:.4}\nunknown rate excluding capitalized\t{:.4}\n",
        s.total,
        s.unknown,
        s.unknown_capitalized,
        s.rate(),
        s.rate_excluding_capitalized()
    )
}
