//! Compiled lexicon index: a minimal automaton over inflected forms whose
//! final states point to shared sets of packed analyses.
//!
//! Lemmas are stored relative to the form as (characters to cut, suffix
//! to append), so that regular inflections share their payloads.
//!
//! Binary layout, little-endian:
//!
//! ```text
//! magic "OLXIDX01" | version u16 | reserved u16 | tagset hash u64
//! priority i32 | entry count u32 | name str
//! strings: count u32, then (len u32, utf-8)*
//! analyses: count u32, then (cut u32, suffix u32, pos u32, n u32, (name u32, value u32)*)*
//! payload sets: count u32, then (n u32, analysis u32*)*
//! states: count u32, then (first transition u32, payload u32)*
//! transitions: count u32, then (label u32, target u32)*
//! ```
//!
//! A state's transitions are contiguous from `first`; bit 31 of the label
//! marks the last one. `u32::MAX` means no transition or no payload.

use std::collections::{BTreeMap, HashMap};

use unicode_normalization::char::{decompose_canonical, is_combining_mark};

use crate::binio::{ByteReader, ByteWriter};
use crate::error::FormatError;
use crate::model::{Feature, LexicalAnalysis, Tagset};

use super::dawg::Dawg;
use super::expand::expand_entry;
use super::{LexiconEntry, LexiconError};

const MAGIC: &[u8; 8] = b"OLXIDX01";
const VERSION: u16 = 1;
const NONE: u32 = u32::MAX;
const LAST: u32 = 1 << 31;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LookupOptions {
    pub fold_case: bool,
    pub fold_diacritics: bool,
}

impl LookupOptions {
    pub fn exact() -> Self {
        Self::default()
    }

    fn folds(&self) -> bool {
        self.fold_case || self.fold_diacritics
    }

    /// Folded form of one character; `None` when it folds away entirely.
    fn fold(&self, c: char) -> Option<char> {
        let mut c = c;
        if self.fold_diacritics {
            if is_combining_mark(c) {
                return None;
            }
            let mut base = None;
            decompose_canonical(c, |d| {
                if base.is_none() && !is_combining_mark(d) {
                    base = Some(d);
                }
            });
            c = base.unwrap_or(c);
        }
        if self.fold_case {
            let mut lower = c.to_lowercase();
            if let (Some(l), None) = (lower.next(), lower.next()) {
                c = l;
            }
        }
        Some(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Packed {
    cut: u32,
    suffix: u32,
    pos: u32,
    features: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct IState {
    first: u32,
    len: u32,
    payload: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedLexicon {
    pub name: String,
    pub priority: i32,
    pub tagset_hash: u64,
    pub entry_count: u32,
    strings: Vec<String>,
    analyses: Vec<Packed>,
    payloads: Vec<Vec<u32>>,
    states: Vec<IState>,
    transitions: Vec<(char, u32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexStats {
    pub entries: u32,
    pub forms: usize,
    pub states: usize,
    pub transitions: usize,
    pub analyses: usize,
    pub payload_sets: usize,
}

/// A partial match: an automaton state and the dictionary spelling read
/// so far.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cursor {
    state: u32,
    path: String,
}

struct Interner {
    strings: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Interner {
    fn id(&mut self, s: &str) -> u32 {
        if let Some(&i) = self.ids.get(s) {
            return i;
        }
        let i = self.strings.len() as u32;
        self.strings.push(s.to_string());
        self.ids.insert(s.to_string(), i);
        i
    }
}

/// Compiles entries into an index. Every entry is expanded under the
/// tagset first, so unresolvable symbols are reported here.
pub fn build_index(
    entries: &[LexiconEntry],
    tagset: Option<&Tagset>,
    priority: i32,
    name: &str,
) -> Result<IndexedLexicon, LexiconError> {
    let mut strings = Interner {
        strings: Vec::new(),
        ids: HashMap::new(),
    };
    let mut analyses: Vec<Packed> = Vec::new();
    let mut analysis_ids: HashMap<Packed, u32> = HashMap::new();
    let mut by_form: BTreeMap<&str, Vec<u32>> = BTreeMap::new();
    for e in entries {
        for a in expand_entry(e, tagset)? {
            let form: Vec<char> = e.form.chars().collect();
            let lemma: Vec<char> = a.lemma.chars().collect();
            let common = form.iter().zip(&lemma).take_while(|(x, y)| x == y).count();
            let suffix: String = lemma[common..].iter().collect();
            let packed = Packed {
                cut: (form.len() - common) as u32,
                suffix: strings.id(&suffix),
                pos: strings.id(&a.pos),
                features: a
                    .features
                    .iter()
                    .map(|f| (strings.id(&f.name), strings.id(&f.value)))
                    .collect(),
            };
            let id = *analysis_ids.entry(packed.clone()).or_insert_with(|| {
                analyses.push(packed);
                analyses.len() as u32 - 1
            });
            let set = by_form.entry(e.form.as_str()).or_default();
            if !set.contains(&id) {
                set.push(id);
            }
        }
    }
    let mut payloads: Vec<Vec<u32>> = Vec::new();
    let mut payload_ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let words: Vec<(&str, u32)> = by_form
        .into_iter()
        .map(|(form, mut set)| {
            set.sort_unstable();
            let id = *payload_ids.entry(set.clone()).or_insert_with(|| {
                payloads.push(set);
                payloads.len() as u32 - 1
            });
            (form, id)
        })
        .collect();
    let dawg = Dawg::build(words);
    let mut states = Vec::with_capacity(dawg.state_count());
    let mut transitions = Vec::with_capacity(dawg.transition_count());
    for s in 0..dawg.state_count() as u32 {
        let tr = dawg.transitions(s);
        states.push(IState {
            first: if tr.is_empty() { NONE } else { transitions.len() as u32 },
            len: tr.len() as u32,
            payload: dawg.payload(s).unwrap_or(NONE),
        });
        transitions.extend_from_slice(tr);
    }
    Ok(IndexedLexicon {
        name: name.to_string(),
        priority,
        tagset_hash: tagset.map_or(0, Tagset::fingerprint),
        entry_count: entries.len() as u32,
        strings: strings.strings,
        analyses,
        payloads,
        states,
        transitions,
    })
}

impl IndexedLexicon {
    pub fn stats(&self) -> IndexStats {
        IndexStats {
            entries: self.entry_count,
            forms: self.form_count(),
            states: self.states.len(),
            transitions: self.transitions.len(),
            analyses: self.analyses.len(),
            payload_sets: self.payloads.len(),
        }
    }

    /// Number of accepted forms, counted by paths.
    pub fn form_count(&self) -> usize {
        fn count(l: &IndexedLexicon, s: usize, memo: &mut [Option<usize>]) -> usize {
            if let Some(n) = memo[s] {
                return n;
            }
            let st = l.states[s];
            let mut n = usize::from(st.payload != NONE);
            for &(_, t) in l.trans(st) {
                n += count(l, t as usize, memo);
            }
            memo[s] = Some(n);
            n
        }
        count(self, 0, &mut vec![None; self.states.len()])
    }

    /// The form automaton, with payload set ids on final states.
    pub fn automaton(&self) -> Dawg {
        Dawg::from_parts(
            self.states
                .iter()
                .map(|s| ((s.payload != NONE).then_some(s.payload), self.trans(*s).to_vec()))
                .collect(),
        )
    }

    fn trans(&self, s: IState) -> &[(char, u32)] {
        if s.first == NONE {
            &[]
        } else {
            &self.transitions[s.first as usize..(s.first + s.len) as usize]
        }
    }

    /// Every form with its analyses, sorted by form.
    pub fn entries(&self) -> Vec<(String, Vec<LexicalAnalysis>)> {
        let mut out = Vec::new();
        let mut stack = vec![Cursor {
            state: 0,
            path: String::new(),
        }];
        while let Some(c) = stack.pop() {
            if let Some(a) = self.accepted(&c) {
                out.push((c.path.clone(), a));
            }
            for &(ch, t) in self.trans(self.states[c.state as usize]).iter().rev() {
                let mut path = c.path.clone();
                path.push(ch);
                stack.push(Cursor { state: t, path });
            }
        }
        out
    }

    fn decode(&self, form: &str, id: u32) -> LexicalAnalysis {
        let p = &self.analyses[id as usize];
        let chars: Vec<char> = form.chars().collect();
        let keep = chars.len().saturating_sub(p.cut as usize);
        let mut lemma: String = chars[..keep].iter().collect();
        lemma.push_str(&self.strings[p.suffix as usize]);
        LexicalAnalysis {
            form: form.to_string(),
            lemma,
            pos: self.strings[p.pos as usize].clone(),
            features: p
                .features
                .iter()
                .map(|&(n, v)| Feature::new(&self.strings[n as usize], &self.strings[v as usize]))
                .collect(),
        }
    }

    pub fn start(&self) -> Vec<Cursor> {
        vec![Cursor {
            state: 0,
            path: String::new(),
        }]
    }

    /// States reachable by reading labels that fold away.
    fn closure(&self, cursors: Vec<Cursor>, opts: LookupOptions) -> Vec<Cursor> {
        if !opts.fold_diacritics {
            return cursors;
        }
        let mut out = Vec::new();
        let mut stack = cursors;
        while let Some(c) = stack.pop() {
            for &(ch, t) in self.trans(self.states[c.state as usize]) {
                if opts.fold(ch).is_none() {
                    let mut path = c.path.clone();
                    path.push(ch);
                    stack.push(Cursor { state: t, path });
                }
            }
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    /// Advances every cursor over `input`.
    pub fn advance(&self, cursors: &[Cursor], input: &str, opts: LookupOptions) -> Vec<Cursor> {
        let mut current = cursors.to_vec();
        if !opts.folds() {
            for ch in input.chars() {
                current = current
                    .into_iter()
                    .filter_map(|mut c| {
                        let tr = self.trans(self.states[c.state as usize]);
                        let i = tr.binary_search_by_key(&ch, |t| t.0).ok()?;
                        c.state = tr[i].1;
                        c.path.push(ch);
                        Some(c)
                    })
                    .collect();
                if current.is_empty() {
                    break;
                }
            }
            return current;
        }
        current = self.closure(current, opts);
        for ch in input.chars() {
            let Some(f) = opts.fold(ch) else { continue };
            let mut next = Vec::new();
            for c in &current {
                for &(label, t) in self.trans(self.states[c.state as usize]) {
                    if opts.fold(label) == Some(f) {
                        let mut path = c.path.clone();
                        path.push(label);
                        next.push(Cursor { state: t, path });
                    }
                }
            }
            current = self.closure(next, opts);
            if current.is_empty() {
                break;
            }
        }
        current
    }

    /// Analyses of the dictionary form the cursor has read, if complete.
    pub fn accepted(&self, cursor: &Cursor) -> Option<Vec<LexicalAnalysis>> {
        let p = self.states[cursor.state as usize].payload;
        (p != NONE).then(|| {
            self.payloads[p as usize]
                .iter()
                .map(|&id| self.decode(&cursor.path, id))
                .collect()
        })
    }

    /// Analyses of `surface`. The analyses keep `surface` as their form;
    /// lemmas are rebuilt from the matched dictionary spelling.
    pub fn lookup(&self, surface: &str, opts: LookupOptions) -> Vec<LexicalAnalysis> {
        let mut out: Vec<LexicalAnalysis> = Vec::new();
        for c in self.advance(&self.start(), surface, opts) {
            for mut a in self.accepted(&c).unwrap_or_default() {
                a.form = surface.to_string();
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        out
    }

    pub fn check_tagset(&self, tagset: Option<&Tagset>) -> Result<(), LexiconError> {
        if self.tagset_hash == tagset.map_or(0, Tagset::fingerprint) {
            Ok(())
        } else {
            Err(LexiconError::TagsetMismatch {
                name: self.name.clone(),
            })
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = ByteWriter::new();
        w.bytes(MAGIC);
        w.u16(VERSION);
        w.u16(0);
        w.u64(self.tagset_hash);
        w.i32(self.priority);
        w.u32(self.entry_count);
        put_str(&mut w, &self.name);
        w.u32(self.strings.len() as u32);
        for s in &self.strings {
            put_str(&mut w, s);
        }
        w.u32(self.analyses.len() as u32);
        for a in &self.analyses {
            w.u32(a.cut);
            w.u32(a.suffix);
            w.u32(a.pos);
            w.u32(a.features.len() as u32);
            for &(n, v) in &a.features {
                w.u32(n);
                w.u32(v);
            }
        }
        w.u32(self.payloads.len() as u32);
        for p in &self.payloads {
            w.u32(p.len() as u32);
            for &id in p {
                w.u32(id);
            }
        }
        w.u32(self.states.len() as u32);
        for s in &self.states {
            w.u32(s.first);
            w.u32(s.payload);
        }
        w.u32(self.transitions.len() as u32);
        for s in &self.states {
            let tr = self.trans(*s);
            for (i, &(c, t)) in tr.iter().enumerate() {
                let last = if i + 1 == tr.len() { LAST } else { 0 };
                w.u32(c as u32 | last);
                w.u32(t);
            }
        }
        w.into_inner()
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self, FormatError> {
        let mut r = ByteReader::new(data);
        if r.take(MAGIC.len())? != MAGIC {
            return Err(FormatError::BadMagic { expected: "OLXIDX01" });
        }
        let version = r.u16()?;
        if version != VERSION {
            return Err(FormatError::UnsupportedVersion(version));
        }
        r.u16()?;
        let tagset_hash = r.u64()?;
        let priority = r.i32()?;
        let entry_count = r.u32()?;
        let name = get_str(&mut r)?;
        let n = r.u32()?;
        let strings = (0..n).map(|_| get_str(&mut r)).collect::<Result<Vec<_>, _>>()?;
        let sref = |i: u32| {
            if (i as usize) < strings.len() {
                Ok(i)
            } else {
                Err(FormatError::Binary(format!("string {i} out of range")))
            }
        };
        let n = r.u32()?;
        let mut analyses = Vec::new();
        for _ in 0..n {
            let cut = r.u32()?;
            let suffix = sref(r.u32()?)?;
            let pos = sref(r.u32()?)?;
            let nf = r.u32()?;
            let features = (0..nf)
                .map(|_| Ok((sref(r.u32()?)?, sref(r.u32()?)?)))
                .collect::<Result<Vec<_>, FormatError>>()?;
            analyses.push(Packed {
                cut,
                suffix,
                pos,
                features,
            });
        }
        let n = r.u32()?;
        let mut payloads = Vec::new();
        for _ in 0..n {
            let k = r.u32()?;
            let set = (0..k)
                .map(|_| {
                    let id = r.u32()?;
                    if (id as usize) < analyses.len() {
                        Ok(id)
                    } else {
                        Err(FormatError::Binary(format!("analysis {id} out of range")))
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            payloads.push(set);
        }
        let n = r.u32()? as usize;
        let mut states = Vec::new();
        for _ in 0..n {
            let first = r.u32()?;
            let payload = r.u32()?;
            if payload != NONE && payload as usize >= payloads.len() {
                return Err(FormatError::Binary(format!("payload {payload} out of range")));
            }
            states.push(IState { first, len: 0, payload });
        }
        let n = r.u32()? as usize;
        let mut transitions = Vec::with_capacity(n);
        let mut lasts = Vec::with_capacity(n);
        for _ in 0..n {
            let label = r.u32()?;
            let target = r.u32()?;
            let c = char::from_u32(label & !LAST)
                .ok_or_else(|| FormatError::Binary(format!("invalid label {label:#x}")))?;
            if target as usize >= states.len() {
                return Err(FormatError::Binary(format!("state {target} out of range")));
            }
            transitions.push((c, target));
            lasts.push(label & LAST != 0);
        }
        for s in &mut states {
            if s.first == NONE {
                continue;
            }
            let start = s.first as usize;
            let end = (start..n)
                .find(|&i| lasts[i])
                .ok_or_else(|| FormatError::Binary("unterminated transition list".into()))?;
            s.len = (end + 1 - start) as u32;
        }
        if states.is_empty() || !r.is_empty() {
            return Err(FormatError::Binary("inconsistent index size".into()));
        }
        Ok(Self {
            name,
            priority,
            tagset_hash,
            entry_count,
            strings,
            analyses,
            payloads,
            states,
            transitions,
        })
    }
}

fn put_str(w: &mut ByteWriter, s: &str) {
    w.u32(s.len() as u32);
    w.bytes(s.as_bytes());
}

fn get_str(r: &mut ByteReader<'_>) -> Result<String, FormatError> {
    let n = r.u32()? as usize;
    String::from_utf8(r.take(n)?.to_vec()).map_err(|_| FormatError::Binary("invalid UTF-8".into()))
}

/// Looks `surface` up in several indexes. The highest priority level with
/// any analysis wins; indexes of equal priority are united.
pub fn lookup_multi(indexes: &[&IndexedLexicon], surface: &str, opts: LookupOptions) -> Vec<LexicalAnalysis> {
    let mut levels: Vec<i32> = indexes.iter().map(|l| l.priority).collect();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.dedup();
    for level in levels {
        let mut out: Vec<LexicalAnalysis> = Vec::new();
        for l in indexes.iter().filter(|l| l.priority == level) {
            for a in l.lookup(surface, opts) {
                if !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
    }
    Vec::new()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use proptest::prelude::*;

    use super::*;
    use crate::fixtures::FR_TAGSET;
    use crate::lexicon::parse_dela;

    const DIC: &str = "\
la,le.DET:fs
la,.PRO:fs3
police,.N+conc:fs
procès,.N:ms:mp
chanter,.V:W
chanté,chanter.V:Kms
chantez,chanter.V:P2p
élève,.N+hum:ms:fs
pomme de terre,.N+conc:fs
pommes de terre,pomme de terre.N+conc:fp
";

    fn lex(text: &str, priority: i32, name: &str) -> IndexedLexicon {
        let ts = Tagset::parse(FR_TAGSET).unwrap();
        build_index(&parse_dela(text, true).unwrap().entries, Some(&ts), priority, name).unwrap()
    }

    fn lemmas(a: &[LexicalAnalysis]) -> Vec<(String, String)> {
        let mut v: Vec<_> = a.iter().map(|a| (a.lemma.clone(), a.pos.clone())).collect();
        v.sort();
        v
    }

    #[test]
    fn exact_lookup() {
        let l = lex(DIC, 0, "fr");
        let la = l.lookup("la", LookupOptions::exact());
        assert_eq!(lemmas(&la), [("la".into(), "pro".into()), ("le".into(), "det".into())]);
        assert_eq!(l.lookup("procès", LookupOptions::exact()).len(), 2);
        let pdt = l.lookup("pommes de terre", LookupOptions::exact());
        assert_eq!(pdt[0].lemma, "pomme de terre");
        assert_eq!(pdt[0].feature("number"), Some("plural"));
        assert!(l.lookup("pomme", LookupOptions::exact()).is_empty());
        assert!(l.lookup("La", LookupOptions::exact()).is_empty());
    }

    #[test]
    fn folding() {
        let l = lex(DIC, 0, "fr");
        let case = LookupOptions { fold_case: true, ..Default::default() };
        let dia = LookupOptions { fold_diacritics: true, ..Default::default() };
        let both = LookupOptions { fold_case: true, fold_diacritics: true };
        let la = l.lookup("La", case);
        assert_eq!(la.len(), 2);
        assert_eq!(la[0].form, "La");
        assert!(l.lookup("eleve", case).is_empty());
        let e = l.lookup("eleve", dia);
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].lemma, "élève");
        assert_eq!(l.lookup("ELEVE", both).len(), 2);
        assert_eq!(l.lookup("ÉLÈVE", both)[0].lemma, "élève");
        // Decomposed input matches precomposed entries.
        assert_eq!(l.lookup("e\u{301}le\u{300}ve", dia).len(), 2);
        assert_eq!(lemmas(&l.lookup("CHANTE", both)), [("chanter".into(), "verb".into())]);
    }

    #[test]
    fn chanter_automaton_is_minimal() {
        let l = lex("chanter,.V:W\nchanté,chanter.V:Kms\nchantez,chanter.V:P2p\n", 0, "c");
        let d = l.automaton();
        assert_eq!(d.minimize().state_count(), d.state_count());
        assert_eq!(l.form_count(), 3);
        assert_eq!(l.stats().entries, 3);
    }

    #[test]
    fn binary_round_trip() {
        let l = lex(DIC, 3, "fr");
        let bytes = l.to_bytes();
        let back = IndexedLexicon::from_bytes(&bytes).unwrap();
        assert_eq!(back, l);
        assert_eq!(back.priority, 3);
        assert_eq!(back.entries(), l.entries());
        assert!(matches!(
            IndexedLexicon::from_bytes(b"NOTANIDX"),
            Err(FormatError::BadMagic { .. })
        ));
        for cut in [0, 9, bytes.len() / 2, bytes.len() - 1] {
            assert!(IndexedLexicon::from_bytes(&bytes[..cut]).is_err());
        }
    }

    #[test]
    fn tagset_check() {
        let l = lex(DIC, 0, "fr");
        assert!(l.check_tagset(None).is_err());
        let ts = Tagset::parse(FR_TAGSET).unwrap();
        assert!(l.check_tagset(Some(&ts)).is_ok());
    }

    #[test]
    fn priorities() {
        let general = lex("pomme,.N:fs\nterre,.N:fs\n", 0, "general");
        let special = lex("pomme,.V:P3s\n", 5, "special");
        let other = lex("terre,.V:P3s\n", 0, "other");
        let all = [&general, &special, &other];
        let pomme = lookup_multi(&all, "pomme", LookupOptions::exact());
        assert_eq!(lemmas(&pomme), [("pomme".into(), "verb".into())]);
        let terre = lookup_multi(&all, "terre", LookupOptions::exact());
        assert_eq!(lemmas(&terre), [("terre".into(), "noun".into()), ("terre".into(), "verb".into())]);
        assert!(lookup_multi(&all, "ciel", LookupOptions::exact()).is_empty());
    }

    #[test]
    fn empty_lexicon() {
        let l = build_index(&[], None, 0, "empty").unwrap();
        assert_eq!(l.form_count(), 0);
        assert!(l.lookup("a", LookupOptions::exact()).is_empty());
        assert_eq!(IndexedLexicon::from_bytes(&l.to_bytes()).unwrap(), l);
    }

    fn arb_entries() -> impl Strategy<Value = Vec<LexiconEntry>> {
        proptest::collection::vec(
            ("[a-dé]{1,5}", "[a-dé]{1,5}", proptest::sample::select(vec!["N", "V", "X"])),
            0..30,
        )
        .prop_map(|v| v.into_iter().map(|(f, l, p)| LexiconEntry::new(&f, &l, p)).collect())
    }

    proptest! {
        #[test]
        fn lookup_matches_entries(entries in arb_entries()) {
            let l = build_index(&entries, None, 0, "p").unwrap();
            let forms: BTreeSet<&str> = entries.iter().map(|e| e.form.as_str()).collect();
            prop_assert_eq!(l.form_count(), forms.len());
            for e in &entries {
                let got = l.lookup(&e.form, LookupOptions::exact());
                prop_assert!(got.iter().any(|a| a.lemma == e.lemma && a.pos == e.pos));
            }
            let d = l.automaton();
            prop_assert_eq!(d.minimize().state_count(), d.state_count());
            prop_assert_eq!(IndexedLexicon::from_bytes(&l.to_bytes()).unwrap(), l);
        }

        #[test]
        fn adding_an_entry_never_loses_forms(entries in arb_entries(), extra in "[a-d]{1,5}") {
            let before = build_index(&entries, None, 0, "p").unwrap().form_count();
            let mut more = entries.clone();
            more.push(LexiconEntry::new(&extra, &extra, "X"));
            let after = build_index(&more, None, 0, "p").unwrap().form_count();
            prop_assert!(after >= before);
        }
    }
}
