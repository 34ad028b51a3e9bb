//! Minimal acyclic deterministic automata over characters, built
//! incrementally from sorted input. Final states carry a payload id.

use std::collections::HashMap;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
struct DState {
    payload: Option<u32>,
    trans: Vec<(char, u32)>,
}

/// Payload and transitions of one state.
pub(crate) type StateParts = (Option<u32>, Vec<(char, u32)>);

/// State 0 is the initial state. Transitions of each state are sorted by
/// label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dawg {
    states: Vec<DState>,
}

impl Default for Dawg {
    fn default() -> Self {
        Self {
            states: vec![DState::default()],
        }
    }
}

struct Builder {
    states: Vec<DState>,
    register: HashMap<DState, u32>,
    /// Path of not yet registered states: (parent, label, child).
    unchecked: Vec<(u32, char, u32)>,
    previous: Vec<char>,
}

impl Builder {
    fn replace_or_register(&mut self, down_to: usize) {
        while self.unchecked.len() > down_to {
            let (parent, _, child) = self.unchecked.pop().expect("non-empty");
            let key = self.states[child as usize].clone();
            match self.register.get(&key) {
                Some(&rep) => {
                    self.states[parent as usize].trans.last_mut().expect("child edge").1 = rep;
                    self.states[child as usize] = DState::default();
                }
                None => {
                    self.register.insert(key, child);
                }
            }
        }
    }
}

impl Dawg {
    /// Builds the minimal automaton of `words`, which must be strictly
    /// increasing in code point order.
    ///
    /// # Panics
    /// If the input is not strictly sorted.
    pub fn build<'a>(words: impl IntoIterator<Item = (&'a str, u32)>) -> Self {
        let mut b = Builder {
            states: vec![DState::default()],
            register: HashMap::new(),
            unchecked: Vec::new(),
            previous: Vec::new(),
        };
        let mut first = true;
        for (word, payload) in words {
            let chars: Vec<char> = word.chars().collect();
            assert!(first || chars > b.previous, "words must be strictly sorted");
            first = false;
            let common = chars.iter().zip(&b.previous).take_while(|(a, b)| a == b).count();
            b.replace_or_register(common);
            let mut node = b.unchecked.last().map_or(0, |u| u.2);
            for &c in &chars[common..] {
                let next = b.states.len() as u32;
                b.states.push(DState::default());
                b.states[node as usize].trans.push((c, next));
                b.unchecked.push((node, c, next));
                node = next;
            }
            b.states[node as usize].payload = Some(payload);
            b.previous = chars;
        }
        b.replace_or_register(0);
        Self { states: b.states }.compact()
    }

    /// Renumbers reachable states in breadth-first order.
    fn compact(&self) -> Self {
        let mut map = vec![u32::MAX; self.states.len()];
        let mut order = vec![0u32];
        map[0] = 0;
        let mut i = 0;
        while i < order.len() {
            for &(_, t) in &self.states[order[i] as usize].trans {
                if map[t as usize] == u32::MAX {
                    map[t as usize] = order.len() as u32;
                    order.push(t);
                }
            }
            i += 1;
        }
        let states = order
            .iter()
            .map(|&s| {
                let st = &self.states[s as usize];
                DState {
                    payload: st.payload,
                    trans: st.trans.iter().map(|&(c, t)| (c, map[t as usize])).collect(),
                }
            })
            .collect();
        Self { states }
    }

    /// Merges states with equal right languages, bottom-up by signature.
    pub fn minimize(&self) -> Self {
        fn class_of(
            d: &Dawg,
            s: u32,
            memo: &mut [Option<u32>],
            classes: &mut HashMap<DState, u32>,
            out: &mut Vec<DState>,
        ) -> u32 {
            if let Some(c) = memo[s as usize] {
                return c;
            }
            let st = &d.states[s as usize];
            let trans = st
                .trans
                .iter()
                .map(|&(c, t)| (c, class_of(d, t, memo, classes, out)))
                .collect();
            let sig = DState {
                payload: st.payload,
                trans,
            };
            let c = *classes.entry(sig.clone()).or_insert_with(|| {
                out.push(sig);
                out.len() as u32 - 1
            });
            memo[s as usize] = Some(c);
            c
        }
        let mut memo = vec![None; self.states.len()];
        let mut classes = HashMap::new();
        let mut out = Vec::new();
        let root = class_of(self, 0, &mut memo, &mut classes, &mut out);
        // Move the root class to index 0.
        out.swap(0, root as usize);
        let fix = |t: u32| match t {
            0 => root,
            t if t == root => 0,
            t => t,
        };
        for s in &mut out {
            for tr in &mut s.trans {
                tr.1 = fix(tr.1);
            }
        }
        Self { states: out }.compact()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transition_count(&self) -> usize {
        self.states.iter().map(|s| s.trans.len()).sum()
    }

    pub fn payload(&self, state: u32) -> Option<u32> {
        self.states[state as usize].payload
    }

    pub fn transitions(&self, state: u32) -> &[(char, u32)] {
        &self.states[state as usize].trans
    }

    pub fn get(&self, word: &str) -> Option<u32> {
        let mut s = 0u32;
        for c in word.chars() {
            let tr = self.transitions(s);
            let i = tr.binary_search_by_key(&c, |t| t.0).ok()?;
            s = tr[i].1;
        }
        self.payload(s)
    }

    /// Every accepted word with its payload, in sorted order.
    pub fn words(&self) -> Vec<(String, u32)> {
        let mut out = Vec::new();
        let mut stack = vec![(0u32, String::new())];
        while let Some((s, w)) = stack.pop() {
            if let Some(p) = self.payload(s) {
                out.push((w.clone(), p));
            }
            for &(c, t) in self.transitions(s).iter().rev() {
                let mut next = w.clone();
                next.push(c);
                stack.push((t, next));
            }
        }
        out
    }

    pub(crate) fn from_parts(parts: Vec<StateParts>) -> Self {
        Self {
            states: parts
                .into_iter()
                .map(|(payload, trans)| DState { payload, trans })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeMap, BTreeSet};

    use proptest::prelude::*;

    use super::*;

    fn trie_size(words: &[&str]) -> usize {
        let prefixes: BTreeSet<String> = words
            .iter()
            .flat_map(|w| {
                let chars: Vec<char> = w.chars().collect();
                (0..=chars.len()).map(move |n| chars[..n].iter().collect::<String>())
            })
            .collect();
        prefixes.len()
    }

    #[test]
    fn chanter_family() {
        let words = ["chanter", "chanté", "chantez"];
        let mut sorted = words.to_vec();
        sorted.sort();
        assert_eq!(trie_size(&words), 10);
        let same = Dawg::build(sorted.iter().map(|w| (*w, 0)));
        assert_eq!(same.state_count(), 8);
        let distinct = Dawg::build(sorted.iter().enumerate().map(|(i, w)| (*w, i as u32)));
        assert_eq!(distinct.state_count(), 10);
        assert_eq!(sorted, ["chanter", "chantez", "chanté"]);
        assert_eq!(distinct.get("chanté"), Some(2));
        assert_eq!(distinct.get("chant"), None);
    }

    #[test]
    fn shares_suffixes() {
        let words = ["aimer", "chanter", "danser", "manger"];
        let d = Dawg::build(words.iter().map(|w| (*w, 7)));
        assert!(d.state_count() < trie_size(&words));
        assert_eq!(d.minimize().state_count(), d.state_count());
    }

    #[test]
    fn empty_and_epsilon() {
        let d = Dawg::build(std::iter::empty());
        assert_eq!(d.state_count(), 1);
        assert!(d.words().is_empty());
        let e = Dawg::build([("", 3), ("a", 3)]);
        assert_eq!(e.get(""), Some(3));
        assert_eq!(e.words(), [(String::new(), 3), ("a".into(), 3)]);
    }

    #[test]
    #[should_panic]
    fn rejects_unsorted() {
        Dawg::build([("b", 0), ("a", 0)]);
    }

    proptest! {
        #[test]
        fn language_and_minimality(
            words in proptest::collection::btree_map("[abcé]{0,6}", 0u32..3, 0..40),
        ) {
            let d = Dawg::build(words.iter().map(|(w, p)| (w.as_str(), *p)));
            let got: BTreeMap<String, u32> = d.words().into_iter().collect();
            prop_assert_eq!(&got, &words);
            prop_assert_eq!(d.minimize().state_count(), d.state_count());
            prop_assert_eq!(d.minimize().words(), d.words());
        }
    }
}
