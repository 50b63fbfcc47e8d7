//! Moore automata over the binary alphabet: parsing, construction from a
//! recursion table, trivial states, boundedness, nucleus and contraction
//! checks, and DOT export.
//!
//! A state `s` with root permutation `α` and targets `(s0, s1)` acts by
//! `s(i·z) = α(i)·s_i(z)`, matching [`crate::wreath`].

mod bounded;
mod contraction;
mod nucleus;

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::words::{Generator, Word};
use crate::wreath::{Entry, RecursionTable};

pub use bounded::{is_bounded, BoundednessReport, Cycle, UnboundedWitness};
pub use contraction::{contraction_profile, ContractionReport, Violation};
pub use nucleus::{nucleus, NucleusConfig, NucleusResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown state {name}")]
    UnknownState { line: usize, name: String },
    #[error("line {line}: duplicate state {name}")]
    DuplicateState { line: usize, name: String },
    #[error("line {line}: state {name} needs two transitions")]
    MissingTransition { line: usize, name: String },
    #[error("only the binary alphabet is supported (line {line})")]
    Alphabet { line: usize },
    #[error("automaton has no states")]
    Empty,
    #[error("section {section} of {gen} is not a single generator")]
    NotLetterToLetter { gen: Generator, section: Word },
    #[error("state {0} is active but not named after a generator")]
    UnnamedActiveState(String),
    #[error(transparent)]
    Table(#[from] crate::wreath::WreathError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub name: String,
    pub swap: bool,
    pub next: [usize; 2],
}

/// A finite automaton whose states are tree automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreAutomaton {
    states: Vec<State>,
}

impl MooreAutomaton {
    /// States in declaration order. Targets must be in range.
    pub fn new(states: Vec<State>) -> Result<Self, AutomatonError> {
        if states.is_empty() {
            return Err(AutomatonError::Empty);
        }
        let mut seen = BTreeMap::new();
        for (i, s) in states.iter().enumerate() {
            if seen.insert(s.name.clone(), i).is_some() {
                return Err(AutomatonError::DuplicateState { line: 0, name: s.name.clone() });
            }
            if let Some(&t) = s.next.iter().find(|&&t| t >= states.len()) {
                return Err(AutomatonError::UnknownState { line: 0, name: t.to_string() });
            }
        }
        Ok(MooreAutomaton { states })
    }

    /// Parses the line-oriented format
    ///
    /// ```text
    /// # comment
    /// alphabet 2
    /// state b perm id to a c
    /// x: swap -> 1 x
    /// ```
    ///
    /// Both statement forms may be mixed; states may be referenced before
    /// they are declared.
    pub fn parse(text: &str) -> Result<Self, AutomatonError> {
        // (line, name, swap, targets)
        let mut decls: Vec<(usize, String, bool, [String; 2])> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = body.split_whitespace().collect();
            let syntax = |message: &str| AutomatonError::Syntax { line, message: message.to_string() };
            if tokens[0] == "alphabet" {
                if tokens.len() != 2 || tokens[1] != "2" {
                    return Err(AutomatonError::Alphabet { line });
                }
                continue;
            }
            let (name, perm, targets) = if tokens[0] == "state" {
                if tokens.len() < 2 {
                    return Err(syntax("expected a state name"));
                }
                if tokens.get(2) != Some(&"perm") || tokens.len() < 4 {
                    return Err(syntax("expected `perm id` or `perm swap`"));
                }
                if tokens.get(4) != Some(&"to") {
                    return Err(AutomatonError::MissingTransition { line, name: tokens[1].to_string() });
                }
                (tokens[1], tokens[3], &tokens[5..])
            } else if let Some((name, rest)) = body.split_once(':') {
                let (perm, targets) = rest.split_once("->").ok_or_else(|| syntax("expected `->`"))?;
                let targets: Vec<&str> = targets.split_whitespace().collect();
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(syntax("bad state name"));
                }
                decls.push((line, name.to_string(), parse_perm(perm.trim(), line)?, pair(&targets, name, line)?));
                continue;
            } else {
                return Err(syntax("expected `state` or `name: perm -> s0 s1`"));
            };
            decls.push((line, name.to_string(), parse_perm(perm, line)?, pair(targets, name, line)?));
        }
        if decls.is_empty() {
            return Err(AutomatonError::Empty);
        }
        let mut index = BTreeMap::new();
        for (i, (line, name, _, _)) in decls.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(AutomatonError::DuplicateState { line: *line, name: name.clone() });
            }
        }
        let mut states = Vec::with_capacity(decls.len());
        for (line, name, swap, targets) in &decls {
            let mut next = [0; 2];
            for (k, t) in targets.iter().enumerate() {
                next[k] = *index.get(t).ok_or_else(|| AutomatonError::UnknownState { line: *line, name: t.clone() })?;
            }
            states.push(State { name: name.clone(), swap: *swap, next });
        }
        Ok(MooreAutomaton { states })
    }

    /// One state per generator plus an identity state `1`, first. Every
    /// section must be trivial or a single generator.
    pub fn from_recursion(table: &RecursionTable) -> Result<Self, AutomatonError> {
        let gens: Vec<Generator> = table.generators().collect();
        let index = |w: &Word, g: Generator| -> Result<usize, AutomatonError> {
            match w.syllables() {
                [] => Ok(0),
                [s] if s.exp == 1 => Ok(1 + gens.iter().position(|&h| h == s.gen).expect("table generator")),
                _ => Err(AutomatonError::NotLetterToLetter { gen: g, section: w.clone() }),
            }
        };
        let mut states = vec![State { name: "1".to_string(), swap: false, next: [0, 0] }];
        for &g in &gens {
            let e = table.entry(g).expect("listed generator");
            let next = [index(&e.sections[0], g)?, index(&e.sections[1], g)?];
            states.push(State { name: g.to_string(), swap: e.swap, next });
        }
        Ok(MooreAutomaton { states })
    }

    /// Recursion table with one generator per state named `a`..`d` or `x`.
    /// Every other state must act trivially and becomes the identity.
    pub fn to_recursion(&self) -> Result<RecursionTable, AutomatonError> {
        let trivial = self.trivial_states();
        let mut word_of = Vec::with_capacity(self.states.len());
        for (i, s) in self.states.iter().enumerate() {
            let mut chars = s.name.chars();
            let gen = match (chars.next().and_then(Generator::from_symbol), chars.next()) {
                (Some(g), None) => Some(g),
                _ => None,
            };
            match gen {
                Some(g) => word_of.push(Word::gen(g)),
                None if trivial.contains(&i) => word_of.push(Word::identity()),
                None => return Err(AutomatonError::UnnamedActiveState(s.name.clone())),
            }
        }
        let mut entries = BTreeMap::new();
        for (s, w) in self.states.iter().zip(&word_of) {
            if let [syl] = w.syllables() {
                let e = Entry::new(word_of[s.next[0]].clone(), word_of[s.next[1]].clone(), s.swap);
                if entries.insert(syl.gen, e).is_some() {
                    return Err(AutomatonError::DuplicateState { line: 0, name: s.name.clone() });
                }
            }
        }
        Ok(RecursionTable::new(entries)?)
    }

    /// The automaton of `L`.
    pub fn l_automaton() -> Self {
        MooreAutomaton::from_recursion(&RecursionTable::l_group()).expect("letter-to-letter")
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s.name == name)
    }

    /// Image of the input string under state `state`.
    pub fn act(&self, state: usize, input: &[u8]) -> Vec<u8> {
        let mut q = state;
        input
            .iter()
            .map(|&i| {
                let s = &self.states[q];
                q = s.next[i as usize];
                i ^ s.swap as u8
            })
            .collect()
    }

    /// States from which no active state is reachable: exactly the states
    /// acting as the identity.
    pub fn trivial_states(&self) -> Vec<usize> {
        let n = self.states.len();
        let mut preds = vec![Vec::new(); n];
        for (i, s) in self.states.iter().enumerate() {
            for &t in &s.next {
                preds[t].push(i);
            }
        }
        let mut active = vec![false; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| self.states[i].swap).collect();
        for &i in &queue {
            active[i] = true;
        }
        while let Some(t) = queue.pop_front() {
            for &p in &preds[t] {
                if !active[p] {
                    active[p] = true;
                    queue.push_back(p);
                }
            }
        }
        (0..n).filter(|&i| !active[i]).collect()
    }

    /// Deterministic DOT rendering: states in declaration order, active
    /// states double-circled, edges labeled by input letter.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph automaton {\n    rankdir=LR;\n");
        for s in &self.states {
            let shape = if s.swap { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "    \"{}\" [shape={shape}];", escape(&s.name));
        }
        for s in &self.states {
            for (i, &t) in s.next.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "    \"{}\" -> \"{}\" [label=\"{i}\"];",
                    escape(&s.name),
                    escape(&self.states[t].name)
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn export_dot(m: &MooreAutomaton) -> String {
    m.to_dot()
}

fn escape(name: &str) -> String {
    name.replace('\\', "\\\\").replace('"', "\\\"")
}

fn parse_perm(token: &str, line: usize) -> Result<bool, AutomatonError> {
    match token {
        "id" => Ok(false),
        "swap" => Ok(true),
        _ => Err(AutomatonError::Syntax { line, message: format!("unknown permutation {token}") }),
    }
}

fn pair(targets: &[&str], name: &str, line: usize) -> Result<[String; 2], AutomatonError> {
    match targets {
        [t0, t1] => Ok([t0.to_string(), t1.to_string()]),
        [] | [_] => Err(AutomatonError::MissingTransition { line, name: name.to_string() }),
        _ => Err(AutomatonError::Syntax { line, message: "too many transitions".to_string() }),
    }
}
