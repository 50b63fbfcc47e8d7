//! Identity testing in `L` by closure over sections.
//!
//! A word is trivial exactly when it fixes the first level and both of its
//! sections are trivial. Sections of reduced words are never longer than the
//! word, so the set of words reachable by repeated decomposition is finite
//! and the search below always terminates: the word is nontrivial iff some
//! reachable word swaps the two subtrees.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::words::{for_each_normal_form, reduce, Alphabet, Generator, ParseError, Word};
use crate::wreath::{RecursionTable, Vertex, WreathError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub max_closure_size: usize,
    pub max_level_witness: u32,
    pub order_cap: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { max_closure_size: 1_000_000, max_level_witness: 16, order_cap: 256 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Wreath(#[from] WreathError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("section closure exceeded {cap} words")]
    ClosureCap { cap: usize },
    #[error("witness {vertex} is not moved by {word}")]
    WitnessMismatch { word: Word, vertex: Vertex },
    #[error("relator {0} has nonzero exponent sum in x")]
    RelatorWithExpX(Word),
}

/// Outcome of an identity test. A nontrivial verdict carries a vertex the
/// element moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Identity,
    Nontrivial { witness: Vertex },
}

impl Verdict {
    pub fn is_identity(&self) -> bool {
        matches!(self, Verdict::Identity)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Identity => write!(f, "identity"),
            Verdict::Nontrivial { witness } => write!(f, "nontrivial (moves vertex {witness})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfiniteReason {
    /// The word itself has nonzero exponent sum in `x`.
    ExpX(i64),
    /// `w^power` fixes `vertex`, and its section there has exponent sum `exp_x`.
    Section { power: u64, vertex: Vertex, exp_x: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderResult {
    Finite(u64),
    Infinite(InfiniteReason),
    /// No power up to the cap is trivial.
    Unknown(u64),
}

impl fmt::Display for OrderResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderResult::Finite(k) => write!(f, "{k}"),
            OrderResult::Infinite(InfiniteReason::ExpX(e)) => write!(f, "infinite (exp_x = {e})"),
            OrderResult::Infinite(InfiniteReason::Section { power, vertex, exp_x }) => {
                write!(f, "infinite (section of w^{power} at {vertex} has exp_x = {exp_x})")
            }
            OrderResult::Unknown(cap) => write!(f, "unknown (no trivial power up to {cap})"),
        }
    }
}

/// One line of the step-by-step rendering of the identity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub lines: Vec<String>,
    pub verdict: Verdict,
}

const MEMO_LIMIT: usize = 1 << 20;
const INFINITE_SEARCH_DEPTH: u32 = 16;

/// Word-problem solver with a private memo table. Not meant to be shared
/// across threads; create one per thread instead.
pub struct Solver {
    table: RecursionTable,
    cfg: SolverConfig,
    memo: HashMap<Word, Verdict>,
}

impl Solver {
    pub fn new(table: RecursionTable, cfg: SolverConfig) -> Self {
        Solver { table, cfg, memo: HashMap::new() }
    }

    /// Solver for `L` with default limits.
    pub fn for_l() -> Self {
        Solver::new(RecursionTable::l_group(), SolverConfig::default())
    }

    pub fn table(&self) -> &RecursionTable {
        &self.table
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn is_identity(&mut self, w: &Word) -> Result<bool, SolverError> {
        Ok(self.decide(w)?.is_identity())
    }

    pub fn decide(&mut self, w: &Word) -> Result<Verdict, SolverError> {
        self.table.decompose(w)?;
        let w = reduce(w);
        if let Some(v) = self.memo.get(&w) {
            return Ok(v.clone());
        }
        let mut seen: HashSet<Word> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(w.clone());
        queue.push_back((w.clone(), Vertex::root()));
        let mut found = None;
        while let Some((u, path)) = queue.pop_front() {
            if u.is_empty() {
                continue;
            }
            match self.memo.get(&u) {
                Some(Verdict::Identity) => continue,
                Some(Verdict::Nontrivial { witness }) => {
                    let mut letters = path.letters().to_vec();
                    letters.extend_from_slice(witness.letters());
                    found = Some(Vertex::from_letters(letters).expect("binary letters"));
                    break;
                }
                None => {}
            }
            let d = self.table.decompose_unchecked(&u);
            if d.swap {
                found = Some(path.child(0));
                break;
            }
            for (i, s) in d.sections.into_iter().enumerate() {
                if !seen.contains(&s) {
                    if seen.len() >= self.cfg.max_closure_size {
                        return Err(SolverError::ClosureCap { cap: self.cfg.max_closure_size });
                    }
                    seen.insert(s.clone());
                    queue.push_back((s, path.child(i as u8)));
                }
            }
        }
        if self.memo.len() + seen.len() > MEMO_LIMIT {
            self.memo.clear();
        }
        match found {
            Some(witness) => {
                if witness.len() as u32 <= self.cfg.max_level_witness && self.table.act_vertex(&w, &witness)? == witness
                {
                    return Err(SolverError::WitnessMismatch { word: w, vertex: witness });
                }
                let verdict = Verdict::Nontrivial { witness };
                self.memo.insert(w, verdict.clone());
                Ok(verdict)
            }
            None => {
                // every word in the closure has all of its sections in the closure
                for u in seen {
                    self.memo.insert(u, Verdict::Identity);
                }
                Ok(Verdict::Identity)
            }
        }
    }

    pub fn are_equal(&mut self, u: &Word, v: &Word) -> Result<bool, SolverError> {
        self.is_identity(&u.mul(&v.inverse()))
    }

    pub fn check_relation(&mut self, lhs: &str, rhs: &str) -> Result<bool, SolverError> {
        let l: Word = lhs.parse()?;
        let r: Word = rhs.parse()?;
        self.are_equal(&l, &r)
    }

    pub fn element_order(&mut self, w: &Word) -> Result<OrderResult, SolverError> {
        self.table.decompose(w)?;
        let w = reduce(w);
        if w.exp_x() != 0 {
            return Ok(OrderResult::Infinite(InfiniteReason::ExpX(w.exp_x())));
        }
        if let Some(reason) = self.infinite_by_sections(&w) {
            return Ok(OrderResult::Infinite(reason));
        }
        let mut power = Word::identity();
        for k in 1..=self.cfg.order_cap {
            power = power.mul(&w);
            if self.is_identity(&power)? {
                return Ok(OrderResult::Finite(k));
            }
        }
        Ok(OrderResult::Unknown(self.cfg.order_cap))
    }

    /// `w` has infinite order iff `w^2` does; if `w` fixes the first level it
    /// has infinite order iff a section does, and if it swaps, the section of
    /// `w^2` at `0` is conjugate to the one at `1`. Follows that reduction
    /// looking for a section with nonzero exponent sum in `x`.
    fn infinite_by_sections(&self, w: &Word) -> Option<InfiniteReason> {
        // (word, power of the original, vertex)
        let mut frontier = vec![(w.clone(), 1u64, Vertex::root())];
        for _ in 0..INFINITE_SEARCH_DEPTH {
            let mut next = Vec::new();
            for (u, power, v) in frontier {
                if u.exp_x() != 0 {
                    return Some(InfiniteReason::Section { power, vertex: v, exp_x: u.exp_x() });
                }
                if u.is_empty() {
                    continue;
                }
                let d = self.table.decompose_unchecked(&u);
                if d.swap {
                    let [s0, s1] = &d.sections;
                    next.push((s0.mul(s1), power * 2, v.child(0)));
                } else {
                    let [s0, s1] = d.sections;
                    next.push((s0, power, v.child(0)));
                    next.push((s1, power, v.child(1)));
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort_by(|a, b| a.0.canonical_cmp(&b.0));
            next.dedup_by(|a, b| a.0 == b.0);
            frontier = next;
        }
        None
    }

    /// All nonempty normal forms of length at most `max_len` that are trivial
    /// in the group, in enumeration order.
    pub fn find_relators(&mut self, max_len: u64) -> Result<Vec<Word>, SolverError> {
        let alphabet = if self.table.contains(Generator::X) { Alphabet::Full } else { Alphabet::WithoutX };
        let mut words = Vec::new();
        for_each_normal_form(max_len, alphabet, |w| {
            if !w.is_empty() {
                words.push(w.clone());
            }
        });
        let mut out = Vec::new();
        for w in words {
            if self.is_identity(&w)? {
                if w.exp_x() != 0 {
                    return Err(SolverError::RelatorWithExpX(w));
                }
                out.push(w);
            }
        }
        Ok(out)
    }

    /// Number of distinct group elements of word length at most `radius` in
    /// the generators `a, b, c, d, x, x^-1`. Candidates are bucketed by their
    /// action on a fixed level and their exponent sum in `x`; equality inside
    /// a bucket is always decided by the solver.
    pub fn ball_size(&mut self, radius: u64) -> Result<u64, SolverError> {
        let alphabet = if self.table.contains(Generator::X) { Alphabet::Full } else { Alphabet::WithoutX };
        let action = self.table.level_action(BALL_KEY_LEVEL.min(self.table.level_cap()))?;
        let mut words = vec![Word::identity()];
        for_each_normal_form(radius, alphabet, |w| words.push(w.clone()));
        let mut buckets: HashMap<(Vec<u32>, i64), Vec<Word>> = HashMap::new();
        let mut count = 0u64;
        for w in words {
            let key = (action.act(&w).images().to_vec(), w.exp_x());
            let reps = buckets.entry(key).or_default();
            let mut fresh = true;
            for r in reps.iter() {
                if self.are_equal(r, &w)? {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                reps.push(w);
                count += 1;
            }
        }
        Ok(count)
    }

    /// The identity test written out level by level: first the root
    /// permutation of each word (parity of `exp_a + exp_x`), then its
    /// decomposition into sections.
    pub fn trace(&self, w: &Word) -> Result<Trace, SolverError> {
        self.table.decompose(w)?;
        let w = reduce(w);
        let mut lines = Vec::new();
        let mut seen: HashSet<Word> = HashSet::new();
        seen.insert(w.clone());
        let mut frontier = vec![(w, Vertex::root())];
        let mut level = 0;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (u, path) in &frontier {
                if u.is_empty() {
                    continue;
                }
                let parity = (u.exp_a() + u.exp_x()).rem_euclid(2);
                let shown = if path.is_empty() { "root".to_string() } else { path.to_string() };
                lines.push(format!(
                    "1) level {level} vertex {shown}: {u}  exp_a = {}, exp_x = {}, parity {parity}",
                    u.exp_a(),
                    u.exp_x()
                ));
                if parity == 1 {
                    let witness = path.child(0);
                    lines
                        .push(format!("odd parity: {u} swaps the subtrees below {shown}; nontrivial, moves {witness}"));
                    return Ok(Trace { lines, verdict: Verdict::Nontrivial { witness } });
                }
                let d = self.table.decompose_unchecked(u);
                lines.push(format!("2)   {u} = {d}"));
                for (i, s) in d.sections.iter().enumerate() {
                    if seen.insert(s.clone()) {
                        next.push((s.clone(), path.child(i as u8)));
                    }
                }
            }
            if next.len() + seen.len() > self.cfg.max_closure_size {
                return Err(SolverError::ClosureCap { cap: self.cfg.max_closure_size });
            }
            frontier = next;
            level += 1;
        }
        lines.push("no new sections: identity".to_string());
        Ok(Trace { lines, verdict: Verdict::Identity })
    }
}

const BALL_KEY_LEVEL: u32 = 8;

/// The fifteen words outside of which three rounds of decomposition
/// shorten every word fixing the third level, with a vertex moved by each
/// nontrivial one.
#[derive(Clone, Debug)]
pub struct CoreSet {
    entries: Vec<(Word, Option<Vertex>)>,
}

pub const CORE_WORDS: [&str; 15] = [
    "1", "b", "c", "d", "x", "x^-1", "b*x", "c*x", "d*x", "x^-1*b", "x^-1*c", "x^-1*d", "x^-1*b*x", "x^-1*c*x",
    "x^-1*d*x",
];

const CORE_WITNESS_DEPTH: u32 = 5;

impl CoreSet {
    /// Builds the set and checks every stored witness against the action.
    pub fn new() -> Result<Self, SolverError> {
        let mut solver = Solver::for_l();
        let mut entries = Vec::with_capacity(CORE_WORDS.len());
        for s in CORE_WORDS {
            let w: Word = s.parse()?;
            let witness = match solver.decide(&w)? {
                Verdict::Identity => None,
                Verdict::Nontrivial { witness } => Some(witness),
            };
            if let Some(v) = &witness {
                if v.len() as u32 > CORE_WITNESS_DEPTH || solver.table().act_vertex(&w, v)? == *v {
                    return Err(SolverError::WitnessMismatch { word: w, vertex: v.clone() });
                }
            }
            entries.push((w, witness));
        }
        Ok(CoreSet { entries })
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.entries.iter().map(|(w, _)| w)
    }

    pub fn entries(&self) -> &[(Word, Option<Vertex>)] {
        &self.entries
    }

    /// Membership as reduced words, not as group elements.
    pub fn contains(&self, w: &Word) -> bool {
        let w = reduce(w);
        self.entries.iter().any(|(c, _)| *c == w)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wreath::lift;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn identity_examples() {
        let mut s = Solver::for_l();
        assert!(s.is_identity(&w("")).unwrap());
        assert!(s.is_identity(&w("b*c*d")).unwrap());
        assert!(!s.is_identity(&w("d")).unwrap());
        assert!(s.is_identity(&w("x^-1*d*x*x^-1*d*x")).unwrap());
        assert_eq!(s.decide(&w("x")).unwrap(), Verdict::Nontrivial { witness: "0".parse().unwrap() });
    }

    #[test]
    fn equality_examples() {
        let mut s = Solver::for_l();
        assert!(s.are_equal(&w("b*c"), &w("d")).unwrap());
        assert!(s.are_equal(&w("x"), &w("x")).unwrap());
        assert!(!s.are_equal(&w("a"), &w("b")).unwrap());
        let pair = lift(&w("x^-1"), &"0".parse().unwrap()).mul(&lift(&w("x"), &"1".parse().unwrap()));
        assert!(s.check_relation("x^-1*a*x*a", &pair.to_string()).unwrap());
        let squares = lift(&w("x"), &"0".parse().unwrap()).mul(&lift(&w("x"), &"1".parse().unwrap()));
        assert!(s.check_relation("x^2", &squares.to_string()).unwrap());
        assert!(s.check_relation("a", "a").unwrap());
        assert!(s.check_relation("a", "q").is_err());
    }

    #[test]
    fn orders() {
        let mut s = Solver::for_l();
        assert_eq!(s.element_order(&w("b")).unwrap(), OrderResult::Finite(2));
        assert_eq!(s.element_order(&w("x")).unwrap(), OrderResult::Infinite(InfiniteReason::ExpX(1)));
        assert_eq!(s.element_order(&w("a*b")).unwrap(), OrderResult::Finite(16));
        assert_eq!(s.element_order(&w("1")).unwrap(), OrderResult::Finite(1));
        assert_eq!(s.element_order(&w("x*a*x^-1")).unwrap(), OrderResult::Finite(2));
        // (xa)^2 = (1, x^2) has exp_x = 2, but x*a*x^-1*a has exp_x = 0
        assert!(matches!(
            s.element_order(&w("x*a*x^-1*a")).unwrap(),
            OrderResult::Infinite(InfiniteReason::Section { .. })
        ));
        assert!(matches!(s.element_order(&w("x*a*x*a")).unwrap(), OrderResult::Infinite(_)));
    }

    #[test]
    fn relators_small() {
        let mut s = Solver::for_l();
        assert!(s.find_relators(1).unwrap().is_empty());
        let r3 = s.find_relators(3).unwrap();
        assert!(r3.iter().all(|r| r.exp_x() == 0));
    }

    #[test]
    fn small_balls() {
        let mut s = Solver::for_l();
        assert_eq!(s.ball_size(0).unwrap(), 1);
        assert_eq!(s.ball_size(1).unwrap(), 7);
        let sizes: Vec<u64> = (0..4).map(|r| s.ball_size(r).unwrap()).collect();
        assert!(sizes.windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn core_witnesses() {
        let core = CoreSet::new().unwrap();
        assert_eq!(core.len(), 15);
        let nontrivial = core.entries().iter().filter(|(_, v)| v.is_some()).count();
        assert_eq!(nontrivial, 14);
        assert!(core.contains(&w("x^-1*b*x")));
        assert!(!core.contains(&w("a")));
    }

    #[test]
    fn trace_agrees_with_solver() {
        let mut s = Solver::for_l();
        for text in ["b*c*d", "x", "x^-1*a*x*a", "a*b*a*b*a*b*a*b*a*b*a*b*a*b*a*b", "x*b*x^-1*c"] {
            let t = s.trace(&w(text)).unwrap();
            assert_eq!(t.verdict.is_identity(), s.is_identity(&w(text)).unwrap(), "{text}");
            assert!(!t.lines.is_empty());
        }
    }
}
