//! Text automata: one acyclic lattice per sentence whose transitions carry
//! lexical analyses, unknown tokens or marks added by grammars.

mod binary;
mod dot;
mod formats;
mod fsa;
mod tagger;

use thiserror::Error;

pub use binary::{read_binary, write_binary};
pub(crate) use dot::dot_string;
pub use dot::{export_dot, export_text_dot};
pub use formats::{format_registry, TaggedTextFormat};
pub use fsa::{read_fsa, write_fsa};
pub use tagger::{tag, TagOptions};

use crate::error::FormatError;
use crate::model::{LexicalAnalysis, Token, TokenKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TagError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("lexicons `{first}` and `{second}` were built with different tagsets")]
    TagsetMismatch { first: String, second: String },
    #[error("sentence `{sentence}`: {message}")]
    Invalid { sentence: String, message: String },
    #[error("format `{0}` can only be written")]
    WriteOnly(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Analysis(LexicalAnalysis),
    Unknown(String),
    /// Output added by a grammar application.
    Mark(String),
}

impl Label {
    /// Surface string the label spans, when it has one.
    pub fn surface(&self) -> &str {
        match self {
            Label::Analysis(a) => &a.form,
            Label::Unknown(s) | Label::Mark(s) => s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct State {
    /// Number of sentence tokens before the state.
    pub token_pos: usize,
    /// Byte offset of the boundary in the source text.
    pub byte_pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub label: Label,
}

/// The lattice of one sentence. State 0 is initial; `final_state` is the
/// single final state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceAutomaton {
    pub id: String,
    /// Index of the sentence's first token in the token table.
    pub first_token: usize,
    pub token_count: usize,
    pub states: Vec<State>,
    pub transitions: Vec<Transition>,
    pub final_state: usize,
}

impl SentenceAutomaton {
    /// Outgoing transition indices per state.
    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.states.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.from].push(i);
        }
        out
    }

    /// States in a topological order, or `None` when there is a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indegree = vec![0usize; self.states.len()];
        for t in &self.transitions {
            indegree[t.to] += 1;
        }
        let out = self.outgoing();
        let mut ready: Vec<usize> = (0..self.states.len()).filter(|&s| indegree[s] == 0).collect();
        ready.reverse();
        let mut order = Vec::with_capacity(self.states.len());
        while let Some(s) = ready.pop() {
            order.push(s);
            for &ti in out[s].iter().rev() {
                let to = self.transitions[ti].to;
                indegree[to] -= 1;
                if indegree[to] == 0 {
                    ready.push(to);
                }
            }
        }
        (order.len() == self.states.len()).then_some(order)
    }

    /// Checks acyclicity, trimness, token coverage and state references.
    pub fn validate(&self) -> Result<(), TagError> {
        let fail = |message: String| {
            Err(TagError::Invalid {
                sentence: self.id.clone(),
                message,
            })
        };
        let n = self.states.len();
        if n == 0 || self.final_state >= n {
            return fail("missing initial or final state".into());
        }
        for t in &self.transitions {
            if t.from >= n || t.to >= n {
                return fail(format!("transition {}->{} refers to a missing state", t.from, t.to));
            }
            let (a, b) = (self.states[t.from].token_pos, self.states[t.to].token_pos);
            let forward = match t.label {
                Label::Mark(_) => b >= a,
                _ => b > a,
            };
            if !forward {
                return fail(format!("transition {}->{} goes backwards", t.from, t.to));
            }
        }
        if self.topological_order().is_none() {
            return fail("the automaton has a cycle".into());
        }
        let out = self.outgoing();
        let mut forward = vec![false; n];
        let mut stack = vec![0];
        while let Some(s) = stack.pop() {
            if !std::mem::replace(&mut forward[s], true) {
                stack.extend(out[s].iter().map(|&t| self.transitions[t].to));
            }
        }
        let mut backward = vec![false; n];
        let mut stack = vec![self.final_state];
        while let Some(s) = stack.pop() {
            if !std::mem::replace(&mut backward[s], true) {
                stack.extend(self.transitions.iter().filter(|t| t.to == s).map(|t| t.from));
            }
        }
        if let Some(s) = (0..n).find(|&s| !(forward[s] && backward[s])) {
            return fail(format!("state {s} is not on an initial-to-final path"));
        }
        let mut covered = vec![false; self.token_count];
        for t in &self.transitions {
            let (a, b) = (self.states[t.from].token_pos, self.states[t.to].token_pos);
            for c in covered.iter_mut().take(b).skip(a) {
                *c = true;
            }
        }
        if let Some(i) = covered.iter().position(|c| !c) {
            return fail(format!("token {i} is not covered"));
        }
        Ok(())
    }
}

/// Unknown-word counts over word tokens.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UnknownStats {
    pub total: usize,
    pub unknown: usize,
    /// Unknown tokens starting with an upper-case letter, mostly proper
    /// names.
    pub unknown_capitalized: usize,
}

impl UnknownStats {
    pub fn rate(&self) -> f64 {
        ratio(self.unknown, self.total)
    }

    /// Unknown rate leaving capitalised tokens out of the unknown count.
    pub fn rate_excluding_capitalized(&self) -> f64 {
        ratio(self.unknown - self.unknown_capitalized, self.total)
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaggedText {
    /// Tagset fingerprint of the lexicons, 0 without a tagset.
    pub tagset_hash: u64,
    pub tokens: Vec<Token>,
    pub sentences: Vec<SentenceAutomaton>,
    pub stats: UnknownStats,
}

impl TaggedText {
    pub fn sentence_tokens(&self, s: &SentenceAutomaton) -> &[Token] {
        &self.tokens[s.first_token..s.first_token + s.token_count]
    }

    /// Source text from token `from` to token `to - 1` of a sentence,
    /// with a single space wherever the source had a gap.
    pub fn surface_between(&self, s: &SentenceAutomaton, from: usize, to: usize) -> String {
        let toks = self.sentence_tokens(s);
        let mut out = String::new();
        for i in from..to {
            if i > from && toks[i - 1].span.1 < toks[i].span.0 {
                out.push(' ');
            }
            out.push_str(&toks[i].surface);
        }
        out
    }

    /// Recomputes the statistics from the automata: a word token is
    /// unknown when no lexical transition covers it.
    pub fn recount(&mut self) {
        let mut stats = UnknownStats::default();
        for s in &self.sentences {
            let mut known = vec![false; s.token_count];
            for t in &s.transitions {
                if let Label::Analysis(_) = t.label {
                    for k in known.iter_mut().take(s.states[t.to].token_pos).skip(s.states[t.from].token_pos) {
                        *k = true;
                    }
                }
            }
            for (tok, known) in self.sentence_tokens(s).iter().zip(known) {
                if tok.kind != TokenKind::Word {
                    continue;
                }
                stats.total += 1;
                if !known {
                    stats.unknown += 1;
                    if tok.starts_uppercase() {
                        stats.unknown_capitalized += 1;
                    }
                }
            }
        }
        self.stats = stats;
    }

    pub fn validate(&self) -> Result<(), TagError> {
        for s in &self.sentences {
            if s.first_token + s.token_count > self.tokens.len() {
                return Err(TagError::Invalid {
                    sentence: s.id.clone(),
                    message: "token range outside the token table".into(),
                });
            }
            s.validate()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::lexicon::{build_index, parse_dela};
    use crate::model::{CaseClass, Feature, PunctRole};
    use crate::segment::{segment, SourceFormat};

    const FIG4_FRAGMENT: &str = r#"<fsa>
<sentence id="s3" final="35">
  <q id="31" pos="138">
   <tr to="33">
    <lex>
     <form>procès</form>
     <lem>procès</lem>
     <pos v="noun"/>
     <f n="proper" v="false"/>
     <f n="gender" v="m"/>
    </lex>
   </tr>
   <tr to="35">
    <lex>
     <form>procès-verbaux</form>
     <lem>procès-verbal</lem>
     <pos v="noun"/>
     <f n="proper" v="false"/>
     <f n="gender" v="m"/>
     <f n="number" v="p"/>
    </lex>
   </tr>
  </q>
</sentence>
</fsa>"#;

    /// Pads the fragment with the states it refers to.
    fn fig4_document() -> String {
        let mut padded = String::new();
        for (i, line) in FIG4_FRAGMENT.lines().enumerate() {
            if i == 2 {
                for q in 0..31 {
                    padded.push_str(&format!("  <q id=\"{q}\" pos=\"{q}\" tok=\"0\"/>\n"));
                }
            }
            padded.push_str(&line.replace("pos=\"138\"", "pos=\"138\" tok=\"0\""));
            padded.push('\n');
            if line.trim() == "</q>" {
                for q in 32..36 {
                    padded.push_str(&format!("  <q id=\"{q}\" pos=\"{}\" tok=\"0\"/>\n", 138 + q));
                }
            }
        }
        padded
    }

    #[test]
    fn reads_figure_fragment() {
        let t = read_fsa(&fig4_document()).unwrap();
        let s = &t.sentences[0];
        assert_eq!(s.states[31].byte_pos, 138);
        let out: Vec<_> = s
            .transitions
            .iter()
            .filter(|t| t.from == 31)
            .map(|t| match &t.label {
                Label::Analysis(a) => (t.to, a.form.clone(), a.feature("number").map(str::to_string)),
                other => panic!("{other:?}"),
            })
            .collect();
        assert_eq!(
            out,
            [
                (33, "procès".to_string(), None),
                (35, "procès-verbaux".to_string(), Some("p".to_string()))
            ]
        );
        let dot = export_dot(s);
        assert!(dot.contains("procès-verbaux/procès-verbal.noun"));
    }

    #[test]
    fn rejects_dangling_and_malformed() {
        let dangling = "<fsa><sentence id='s' final='0'><q id='0' pos='0' tok='0'><tr to='4'><unknown>x</unknown></tr></q></sentence></fsa>";
        assert!(read_fsa(dangling).is_err());
        let bad_lex = "<fsa><sentence id='s' final='1'><q id='0' pos='0' tok='0'><tr to='1'><lex><form>x</form></lex></tr></q><q id='1' pos='1' tok='1'/></sentence></fsa>";
        assert!(read_fsa(bad_lex).is_err());
        assert!(read_fsa("<fsa><sentence").is_err());
    }

    #[test]
    fn empty_sentence_round_trips() {
        let t = TaggedText {
            sentences: vec![SentenceAutomaton {
                id: "s0".into(),
                first_token: 0,
                token_count: 0,
                states: vec![State { token_pos: 0, byte_pos: 0 }],
                transitions: Vec::new(),
                final_state: 0,
            }],
            ..Default::default()
        };
        t.validate().unwrap();
        assert_eq!(read_fsa(&write_fsa(&t)).unwrap(), t);
        assert_eq!(read_binary(&write_binary(&t)).unwrap(), t);
    }

    #[test]
    fn empty_text_binary_is_header_only() {
        let t = TaggedText::default();
        let bytes = write_binary(&t);
        assert_eq!(bytes.len(), 8 + 2 + 8 + 3 + 1 + 1);
        assert_eq!(read_binary(&bytes).unwrap(), t);
        assert!(read_binary(&bytes[..5]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(read_binary(&bad), Err(TagError::Format(FormatError::BadMagic { .. }))));
        let mut version = bytes;
        version[8] = 9;
        assert!(matches!(
            read_binary(&version),
            Err(TagError::Format(FormatError::UnsupportedVersion(9)))
        ));
    }

    fn tagged_sample() -> TaggedText {
        let l = build_index(
            &parse_dela("le,.DET\nchat,.N\ndort,dormir.V\nil,.PRO\nrêve,rêver.V\n", true).unwrap().entries,
            None,
            0,
            "t",
        )
        .unwrap();
        let text = segment("Le chat dort. Il rêve & ronronne. Fin.", SourceFormat::Plain);
        tag(&text, &[&l], TagOptions::default()).unwrap()
    }

    #[test]
    fn binary_is_smaller_and_stable() {
        let t = tagged_sample();
        assert_eq!(t.sentences.len(), 3);
        let bin = write_binary(&t);
        assert!(bin.len() < write_fsa(&t).len());
        let via_fsa = write_binary(&read_fsa(&write_fsa(&read_binary(&bin).unwrap())).unwrap());
        assert_eq!(via_fsa, bin);
    }

    #[test]
    fn dot_counts() {
        let t = tagged_sample();
        for s in &t.sentences {
            let dot = export_dot(s);
            assert_eq!(dot.matches(" -> ").count(), s.transitions.len());
            assert_eq!(dot.matches("shape=").count(), s.states.len());
        }
        let single = SentenceAutomaton {
            id: "s".into(),
            first_token: 0,
            token_count: 1,
            states: vec![State { token_pos: 0, byte_pos: 0 }, State { token_pos: 1, byte_pos: 1 }],
            transitions: vec![Transition { from: 0, to: 1, label: Label::Unknown("x".into()) }],
            final_state: 1,
        };
        let dot = export_dot(&single);
        assert!(dot.starts_with("digraph \"s\" {"));
        assert_eq!(dot.matches(" -> ").count(), 1);
        assert_eq!(dot.matches("shape=").count(), 2);
    }

    #[test]
    fn registry() {
        let reg = format_registry();
        assert_eq!(reg.names(), ["fsa", "bin", "dot"]);
        let t = tagged_sample();
        for name in ["fsa", "bin"] {
            let f = reg.get(name).unwrap();
            assert_eq!(f.read(&f.write(&t)).unwrap(), t);
        }
        assert!(reg.get("dot").unwrap().read(b"").is_err());
        assert!(reg.get("maf").is_err());
        assert_eq!(TaggedText::format_for_path("x/a.fsa.bin".as_ref()), Some("bin"));
        assert_eq!(TaggedText::format_for_path("a.fsa.xml".as_ref()), Some("fsa"));
        assert_eq!(TaggedText::format_for_path("a.txt".as_ref()), None);
    }

    #[test]
    fn validation_catches_broken_automata() {
        let mut t = tagged_sample();
        t.validate().unwrap();
        let s = &mut t.sentences[0];
        s.transitions.retain(|t| !(t.from == 1 && t.to == 2));
        assert!(t.validate().is_err());
    }

    fn arb_label() -> impl Strategy<Value = Label> {
        prop_oneof![
            ("[a-zé<&\"]{1,5}", "[a-z]{1,5}", "[a-z]{1,3}", proptest::collection::vec(("[a-z]{1,3}", "[a-z]{1,3}"), 0..3))
                .prop_map(|(f, l, p, feats)| {
                    let mut a = LexicalAnalysis::new(f, l, p);
                    a.features = feats.into_iter().map(|(n, v)| Feature::new(n, v)).collect();
                    Label::Analysis(a)
                }),
            "[a-z>]{1,5}".prop_map(Label::Unknown),
            "[A-Z]{1,5}".prop_map(Label::Mark),
        ]
    }

    fn arb_sentence(first_token: usize, n: usize) -> impl Strategy<Value = SentenceAutomaton> {
        proptest::collection::vec((0..n.max(1), 1usize..3, arb_label()), 0..8).prop_map(move |extra| {
            let states: Vec<State> = (0..=n).map(|i| State { token_pos: i, byte_pos: i * 3 }).collect();
            let mut transitions: Vec<Transition> = (0..n)
                .map(|i| Transition { from: i, to: i + 1, label: Label::Unknown(format!("w{i}")) })
                .collect();
            for (from, len, label) in extra {
                if n > 0 {
                    transitions.push(Transition { from, to: (from + len).min(n), label });
                }
            }
            transitions.sort_by_key(|t| t.from);
            SentenceAutomaton {
                id: format!("s{first_token}"),
                first_token,
                token_count: n,
                states,
                transitions,
                final_state: n,
            }
        })
    }

    fn arb_tagged() -> impl Strategy<Value = TaggedText> {
        proptest::collection::vec(0usize..5, 0..4).prop_flat_map(|lens| {
            let mut first = 0;
            let sentences: Vec<_> = lens
                .iter()
                .map(|&n| {
                    let s = arb_sentence(first, n);
                    first += n;
                    s
                })
                .collect();
            let total = first;
            (sentences, any::<u64>()).prop_map(move |(sentences, hash)| {
                let tokens = (0..total)
                    .map(|i| Token {
                        id: format!("t{}", i + 1),
                        surface: format!("w{i}"),
                        kind: TokenKind::Word,
                        alphabet: Some("latin".into()),
                        case_class: CaseClass::Lower,
                        punct_role: PunctRole::NotApplicable,
                        span: (i * 3, i * 3 + 2),
                    })
                    .collect();
                let mut t = TaggedText { tagset_hash: hash, tokens, sentences, stats: UnknownStats::default() };
                t.recount();
                t
            })
        })
    }

    proptest! {
        #[test]
        fn fsa_round_trip(t in arb_tagged()) {
            t.validate().unwrap();
            prop_assert_eq!(read_fsa(&write_fsa(&t)).unwrap(), t);
        }

        #[test]
        fn binary_round_trip(t in arb_tagged()) {
            let bytes = write_binary(&t);
            prop_assert_eq!(write_binary(&t), bytes.clone());
            prop_assert_eq!(read_binary(&bytes).unwrap(), t);
        }

        #[test]
        fn dot_node_count(t in arb_tagged()) {
            for s in &t.sentences {
                prop_assert_eq!(export_dot(s).matches("shape=").count(), s.states.len());
            }
        }
    }
}
