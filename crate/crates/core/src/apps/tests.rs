use super::*;
use crate::engine::{Match, MatchPolicy, ParseMode, Parser};
use crate::fixtures::{fig1, FIG1};
use crate::grammar::{compile, read_grammar, Weight};
use crate::segment::{segment, SourceFormat};
use crate::text::Label;

fn fake(tokens: (usize, usize), weight: Weight, output: &str) -> Match {
    Match {
        sentence: 0,
        states: tokens,
        tokens,
        weight,
        output: output.into(),
        outputs: Vec::new(),
        root: 0,
    }
}

#[test]
fn concordance_contexts() {
    let (_, seg, _) = fig1();
    let opts = ConcordOptions {
        left: 2,
        right: 2,
        order: SortOrder::Text,
    };
    let lines = concord(&[fake((5, 8), 0, "")], &seg, opts);
    assert_eq!(lines.len(), 1);
    let l = &lines[0];
    assert_eq!((l.left.as_str(), l.matched.as_str(), l.right.as_str()), ("saisi 164", "procès-verbaux", "jeudi dernier"));
    assert_eq!(l.sentence, seg.sentences().next().unwrap().id);
    assert!(concord(&[], &seg, opts).is_empty());
    // Contexts stop at the document edges.
    let edge = concord(&[fake((0, 1), 0, "")], &seg, opts);
    assert_eq!((edge[0].left.as_str(), edge[0].right.as_str()), ("", "police a"));
    let tsv = write_tsv(&lines);
    assert_eq!(tsv, format!("saisi 164\tprocès-verbaux\tjeudi dernier\t{}\t5-8\t0\n", l.sentence));
    let html = write_html(&lines);
    assert!(html.contains("<td class=\"m\">procès-verbaux</td>"));
}

#[test]
fn concordance_orders() {
    let seg = segment("abc aab\nzz", SourceFormat::Plain);
    let ms = [fake((0, 1), 0, ""), fake((1, 2), 0, "")];
    let lex = ConcordOptions {
        left: 1,
        right: 1,
        order: SortOrder::Lexicographic,
    };
    let lines = concord(&ms, &seg, lex);
    assert_eq!(lines.iter().map(|l| l.matched.as_str()).collect::<Vec<_>>(), ["aab", "abc"]);
    let text = ConcordOptions {
        order: SortOrder::Text,
        ..lex
    };
    let lines = concord(&ms, &seg, text);
    assert_eq!(lines.iter().map(|l| l.matched.as_str()).collect::<Vec<_>>(), ["abc", "aab"]);
    // Whitespace inside a line is flattened in the TSV only.
    let lines = concord(&[fake((1, 3), 0, "")], &seg, text);
    assert_eq!(lines[0].matched, "aab\nzz");
    assert!(write_tsv(&lines).starts_with("abc\taab zz\t"));
}

#[test]
fn selection_rules() {
    let heavy = select_matches(&[fake((0, 2), 0, "a"), fake((0, 2), 1, "b")], LengthPolicy::None, RewriteMode::Insert);
    assert_eq!(heavy.matches().iter().map(|m| m.output.as_str()).collect::<Vec<_>>(), ["b"]);
    let nested = [fake((0, 1), 0, "inner"), fake((0, 3), 0, "outer")];
    let longest = select_matches(&nested, LengthPolicy::PreferLongest, RewriteMode::Insert);
    assert_eq!(longest.matches()[0].output, "outer");
    let first = select_matches(&nested, LengthPolicy::None, RewriteMode::Insert);
    assert_eq!(first.matches()[0].output, "inner");
    assert!(select_matches(&[], LengthPolicy::None, RewriteMode::Insert).matches().is_empty());
    // Overlaps are dropped; a later start becomes leftmost afterwards.
    let plan = select_matches(
        &[fake((0, 2), 0, "a"), fake((1, 3), 5, "b"), fake((2, 4), 0, "c"), fake((3, 3), 9, "e")],
        LengthPolicy::None,
        RewriteMode::Insert,
    );
    assert_eq!(plan.matches().iter().map(|m| m.output.as_str()).collect::<Vec<_>>(), ["a", "c"]);
}

const NP: &str = r#"<grammar axiom="np"><graph name="np" start="s" end="e">
  <node id="s"/><node id="e"/><node id="o" output="&lt;NP&gt;"/><node id="n" mask="form=164"/>
  <node id="m" mask="noun"/><node id="c" output="&lt;/NP&gt;"/>
  <edge from="s" to="o"/><edge from="o" to="n"/><edge from="n" to="m"/><edge from="m" to="c"/><edge from="c" to="e"/>
</graph></grammar>"#;

#[test]
fn insert_and_replace() {
    let (ts, seg, tagged) = fig1();
    let w = compile(&read_grammar(NP).unwrap()).unwrap().0;
    let p = Parser::new(&w, Some(&ts)).unwrap();
    let ms = p.locate(&tagged, ParseMode::Anchored, MatchPolicy::BestPerSpan);
    let plan = select_matches(&ms, LengthPolicy::PreferLongest, RewriteMode::Insert);
    assert_eq!(
        apply_text(&seg, &plan),
        "La police a saisi <NP>164 procès-verbaux</NP> jeudi dernier."
    );
    let replace = plan.clone().with_mode(RewriteMode::Replace);
    assert_eq!(apply_text(&seg, &replace), "La police a saisi <NP></NP> jeudi dernier.");
    assert_eq!(apply_text(&seg, &RewritePlan::empty(RewriteMode::Insert)), FIG1);
    let delete = select_matches(&[fake((1, 2), 0, "")], LengthPolicy::None, RewriteMode::Replace);
    assert_eq!(apply_text(&seg, &delete), "La  a saisi 164 procès-verbaux jeudi dernier.");
}

#[test]
fn untouched_bytes_survive() {
    let src = "  Un\tdeux\r\n\ntrois  ";
    let seg = segment(src, SourceFormat::Plain);
    assert_eq!(apply_text(&seg, &RewritePlan::empty(RewriteMode::Replace)), src);
    let plan = select_matches(&[fake((1, 2), 0, "2")], LengthPolicy::None, RewriteMode::Replace);
    assert_eq!(apply_text(&seg, &plan), "  Un\t2\r\n\ntrois  ");
}

// "jeudi dernier" is a time adverbial; a mark ADVT over it is read as a
// date by the second branch.
const ADV: &str = r#"<grammar axiom="g"><graph name="g" start="s" end="e">
  <node id="s"/><node id="e"/>
  <node id="j" mask="form=jeudi" output="ADVT"/><node id="d" mask="form=dernier"/>
  <node id="m" mask="form=ADVT" output="DATE"/>
  <edge from="s" to="j"/><edge from="j" to="d"/><edge from="d" to="e"/>
  <edge from="s" to="m"/><edge from="m" to="e"/>
</graph></grammar>"#;

fn marks(t: &crate::text::TaggedText) -> Vec<(usize, usize, String)> {
    t.sentences[0]
        .transitions
        .iter()
        .filter_map(|t| match &t.label {
            Label::Mark(m) => Some((t.from, t.to, m.clone())),
            _ => None,
        })
        .collect()
}

#[test]
fn enrichment_cascade() {
    let (ts, _, tagged) = fig1();
    let w = compile(&read_grammar(ADV).unwrap()).unwrap().0;
    let p = Parser::new(&w, Some(&ts)).unwrap();
    let one = apply_automaton(&tagged, &p, 1);
    assert_eq!(one.added, [1]);
    assert_eq!(marks(&one.text), [(8, 10, "ADVT".to_string())]);
    assert_eq!(one.text.sentences[0].transitions.len(), tagged.sentences[0].transitions.len() + 1);
    one.text.validate().unwrap();
    let more = apply_automaton(&tagged, &p, 5);
    assert_eq!(more.added, [1, 1, 0]);
    assert_eq!(marks(&more.text), [(8, 10, "ADVT".to_string()), (8, 10, "DATE".to_string())]);
    more.text.validate().unwrap();
    // Original transitions are kept, in order.
    let original: Vec<_> = more.text.sentences[0]
        .transitions
        .iter()
        .filter(|t| !matches!(t.label, Label::Mark(_)))
        .cloned()
        .collect();
    assert_eq!(original, tagged.sentences[0].transitions);
}

#[test]
fn enrichment_without_match_is_identity() {
    let (ts, _, tagged) = fig1();
    let doc = r#"<grammar axiom="g"><graph name="g" start="s" end="e"><node id="s"/><node id="e"/>
      <node id="x" mask="form=absent" output="X"/><edge from="s" to="x"/><edge from="x" to="e"/></graph></grammar>"#;
    let w = compile(&read_grammar(doc).unwrap()).unwrap().0;
    let p = Parser::new(&w, Some(&ts)).unwrap();
    let e = apply_automaton(&tagged, &p, 3);
    assert_eq!(e.added, [0]);
    assert_eq!(e.text.sentences, tagged.sentences);
}
