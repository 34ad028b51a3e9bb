use super::passes::{pass_registry, DEFAULT_PASSES};
use super::{Automaton, GrammarError, GrammarSet, GrammarWarning, Input, Label, Transition, Wrtn};

/// Compiles source graphs: every automaton goes through the default
/// passes, then the network is checked.
pub fn compile(set: &GrammarSet) -> Result<(Wrtn, Vec<GrammarWarning>), GrammarError> {
    set.validate()?;
    compile_wrtn(&set.to_wrtn())
}

pub fn compile_wrtn(w: &Wrtn) -> Result<(Wrtn, Vec<GrammarWarning>), GrammarError> {
    compile_with(w, DEFAULT_PASSES)
}

/// Runs the named passes, in order, on every automaton; graphs are
/// processed in parallel.
pub fn compile_with(w: &Wrtn, passes: &[&str]) -> Result<(Wrtn, Vec<GrammarWarning>), GrammarError> {
    let registry = pass_registry();
    let selected = passes
        .iter()
        .map(|p| {
            registry.get(p).map_err(|_| GrammarError::UnknownPass {
                name: p.to_string(),
                available: registry.names().join(", "),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let run = |a: &Automaton| -> Result<Automaton, GrammarError> {
        let mut a = a.clone();
        for p in &selected {
            a = p.apply(&a)?;
        }
        Ok(a)
    };
    let automata = if w.automata.len() > 1 {
        std::thread::scope(|scope| {
            let handles: Vec<_> = w.automata.iter().map(|a| scope.spawn(|| run(a))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("compilation thread panicked"))
                .collect::<Result<Vec<_>, _>>()
        })?
    } else {
        w.automata.iter().map(run).collect::<Result<Vec<_>, _>>()?
    };
    let compiled = Wrtn {
        axiom: w.axiom.clone(),
        automata,
        approximate: w.approximate,
    };
    let warnings = compiled.validate()?;
    Ok((compiled, warnings))
}

struct Inliner<'w> {
    wrtn: &'w Wrtn,
    depth: usize,
    finals: Vec<Option<i64>>,
    transitions: Vec<Transition>,
    dropped: bool,
}

impl Inliner<'_> {
    /// Copies `a` at nesting `level`; returns its initial state and final
    /// states in the combined numbering.
    fn inline(&mut self, a: &Automaton, level: usize) -> (usize, Vec<(usize, i64)>) {
        let offset = self.finals.len();
        self.finals.extend(std::iter::repeat_n(None, a.state_count()));
        for t in &a.transitions {
            let (from, to) = (offset + t.from, offset + t.to);
            match &t.label.input {
                Input::Call(g) if level < self.depth => {
                    let callee = self.wrtn.get(g).expect("validated call");
                    let (init, finals) = self.inline(callee, level + 1);
                    self.transitions.push(Transition {
                        from,
                        to: init,
                        label: Label {
                            input: Input::Epsilon,
                            output: t.label.output.clone(),
                            weight: t.label.weight,
                        },
                    });
                    for (f, w) in finals {
                        self.transitions.push(Transition {
                            from: f,
                            to,
                            label: Label {
                                input: Input::Epsilon,
                                output: None,
                                weight: w,
                            },
                        });
                    }
                }
                Input::Call(_) => self.dropped = true,
                _ => self.transitions.push(Transition {
                    from,
                    to,
                    label: t.label.clone(),
                }),
            }
        }
        let finals = a
            .finals
            .iter()
            .enumerate()
            .filter_map(|(s, f)| f.map(|w| (offset + s, w)))
            .collect();
        (offset + a.initial, finals)
    }
}

/// Inlines calls into the axiom up to `depth` nested expansions. Calls
/// still present beyond that depth are deleted and the result is marked
/// approximate. The single resulting graph is compiled again.
pub fn flatten(w: &Wrtn, depth: usize) -> Result<Wrtn, GrammarError> {
    w.validate()?;
    let axiom = w.get(&w.axiom).ok_or_else(|| GrammarError::UnknownAxiom(w.axiom.clone()))?;
    let mut inliner = Inliner {
        wrtn: w,
        depth,
        finals: Vec::new(),
        transitions: Vec::new(),
        dropped: false,
    };
    let (initial, finals) = inliner.inline(axiom, 0);
    for (f, weight) in finals {
        inliner.finals[f] = Some(weight);
    }
    let flat = Wrtn {
        axiom: w.axiom.clone(),
        automata: vec![Automaton {
            name: w.axiom.clone(),
            initial,
            finals: inliner.finals,
            transitions: inliner.transitions,
        }],
        approximate: w.approximate || inliner.dropped,
    };
    Ok(compile_wrtn(&flat)?.0)
}
