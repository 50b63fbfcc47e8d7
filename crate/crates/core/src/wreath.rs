//! The self-similar action on the binary tree.
//!
//! An element is written `g = (g0, g1)·α` with `α` the root permutation. A
//! word applies its leftmost letter first, and `g(i·z) = α(i)·g_i(z)`, so the
//! product of `(g0, g1)α` and `(h0, h1)β` is `(g0·h_α(0), g1·h_α(1))·αβ`.
//! Leaves of level `n` are indexed by reading the vertex as a binary number
//! with the first letter most significant.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permgroup::Permutation;
use crate::words::{concat_reduce, invert, reduce, Generator, Syllable, Word};

pub const DEFAULT_LEVEL_CAP: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WreathError {
    #[error("generator {0} is not defined by the recursion table")]
    UnknownGenerator(Generator),
    #[error("level {requested} exceeds the configured cap {cap}")]
    LevelCap { requested: u32, cap: u32 },
    #[error("invalid vertex {0:?}: letters must be 0 or 1")]
    BadVertex(String),
}

/// A vertex of the binary tree; the empty path is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vertex(Vec<u8>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    pub fn from_letters(letters: Vec<u8>) -> Result<Self, WreathError> {
        if letters.iter().any(|&l| l > 1) {
            return Err(WreathError::BadVertex(format!("{letters:?}")));
        }
        Ok(Vertex(letters))
    }

    /// Vertex of level `n` whose leaf index is `index`.
    pub fn from_leaf_index(index: u32, n: u32) -> Self {
        Vertex((0..n).map(|i| ((index >> (n - 1 - i)) & 1) as u8).collect())
    }

    pub fn leaf_index(&self) -> u32 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as u32)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: u8) -> Vertex {
        let mut v = self.0.clone();
        v.push(i);
        Vertex(v)
    }

    pub fn is_prefix_of(&self, other: &Vertex) -> bool {
        other.0.starts_with(&self.0)
    }

    /// All vertices of level `n`, in leaf-index order.
    pub fn level(n: u32) -> impl Iterator<Item = Vertex> {
        (0..1u32 << n).map(move |i| Vertex::from_leaf_index(i, n))
    }
}

impl FromStr for Vertex {
    type Err = WreathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "ε" || s == "root" {
            return Ok(Vertex::root());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(WreathError::BadVertex(s.to_string())),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(Vertex)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// One row of a recursion table: `g = (sections[0], sections[1])·swap`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub sections: [Word; 2],
    pub swap: bool,
}

impl Entry {
    pub fn new(s0: Word, s1: Word, swap: bool) -> Self {
        Entry { sections: [reduce(&s0), reduce(&s1)], swap }
    }
}

/// The result of one rewriting step: `w ≡ (w0, w1)·a^swap`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    pub sections: [Word; 2],
    pub swap: bool,
}

impl Decomposition {
    fn identity() -> Self {
        Decomposition { sections: [Word::identity(), Word::identity()], swap: false }
    }

    /// Right-multiplies by `(h0, h1)·β`.
    fn push(&mut self, h: &[Word; 2], swap: bool) {
        let (l, r) = if self.swap { (&h[1], &h[0]) } else { (&h[0], &h[1]) };
        self.sections[0] = concat_reduce(&self.sections[0], l);
        self.sections[1] = concat_reduce(&self.sections[1], r);
        self.swap ^= swap;
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.sections[0], self.sections[1])?;
        if self.swap {
            write!(f, "a")?;
        }
        Ok(())
    }
}

/// Per-generator wreath recursion defining a self-similar action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionTable {
    entries: BTreeMap<Generator, Entry>,
    level_cap: u32,
}

impl RecursionTable {
    /// Validates that every section only uses generators of the table.
    pub fn new(entries: BTreeMap<Generator, Entry>) -> Result<Self, WreathError> {
        for e in entries.values() {
            for s in &e.sections {
                for syl in s.syllables() {
                    if !entries.contains_key(&syl.gen) {
                        return Err(WreathError::UnknownGenerator(syl.gen));
                    }
                }
            }
        }
        Ok(RecursionTable { entries, level_cap: DEFAULT_LEVEL_CAP })
    }

    /// `a = (1,1)·swap, b = (a,c), c = (a,d), d = (1,b)`.
    pub fn g_group() -> Self {
        use Generator::*;
        let g = Word::gen;
        let mut entries = BTreeMap::new();
        entries.insert(A, Entry::new(Word::identity(), Word::identity(), true));
        entries.insert(B, Entry::new(g(A), g(C), false));
        entries.insert(C, Entry::new(g(A), g(D), false));
        entries.insert(D, Entry::new(Word::identity(), g(B), false));
        RecursionTable::new(entries).expect("static table is valid")
    }

    /// The table of `G` extended by the adding machine `x = (1, x)·swap`.
    pub fn l_group() -> Self {
        let mut t = RecursionTable::g_group();
        t.entries.insert(Generator::X, Entry::new(Word::identity(), Word::gen(Generator::X), true));
        t
    }

    pub fn with_level_cap(mut self, cap: u32) -> Self {
        self.level_cap = cap;
        self
    }

    pub fn level_cap(&self) -> u32 {
        self.level_cap
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.entries.keys().copied()
    }

    pub fn entry(&self, g: Generator) -> Option<&Entry> {
        self.entries.get(&g)
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.entries.contains_key(&g)
    }

    fn check_word(&self, w: &Word) -> Result<(), WreathError> {
        match w.syllables().iter().find(|s| !self.entries.contains_key(&s.gen)) {
            Some(s) => Err(WreathError::UnknownGenerator(s.gen)),
            None => Ok(()),
        }
    }

    fn check_level(&self, n: u32) -> Result<(), WreathError> {
        if n > self.level_cap {
            Err(WreathError::LevelCap { requested: n, cap: self.level_cap })
        } else {
            Ok(())
        }
    }

    /// One rewriting step. Accepts any word; sections come back reduced.
    pub fn decompose(&self, w: &Word) -> Result<Decomposition, WreathError> {
        self.check_word(w)?;
        Ok(self.decompose_unchecked(w))
    }

    pub(crate) fn decompose_unchecked(&self, w: &Word) -> Decomposition {
        let mut acc = Decomposition::identity();
        for s in w.syllables() {
            self.push_syllable(&mut acc, *s);
        }
        acc
    }

    fn push_syllable(&self, acc: &mut Decomposition, s: Syllable) {
        let entry = &self.entries[&s.gen];
        if s.gen.is_involution() {
            if s.exp.rem_euclid(2) == 1 {
                acc.push(&entry.sections, entry.swap);
            }
            return;
        }
        if s.exp > 0 {
            for _ in 0..s.exp {
                acc.push(&entry.sections, entry.swap);
            }
        } else {
            // (g0, g1)α inverts to (g_α(0)^-1, g_α(1)^-1)α
            let inv = inverse_sections(entry);
            for _ in 0..-s.exp {
                acc.push(&inv, entry.swap);
            }
        }
    }

    /// Section at `v`: follow `v` letter by letter through [`decompose`].
    ///
    /// [`decompose`]: RecursionTable::decompose
    pub fn section(&self, w: &Word, v: &Vertex) -> Result<Word, WreathError> {
        self.check_word(w)?;
        let mut cur = reduce(w);
        for &i in v.letters() {
            cur = self.decompose_unchecked(&cur).sections[i as usize].clone();
        }
        Ok(cur)
    }

    /// Image of `v` under `w`.
    pub fn act_vertex(&self, w: &Word, v: &Vertex) -> Result<Vertex, WreathError> {
        self.check_word(w)?;
        let mut out = v.letters().to_vec();
        self.apply_word(w, &mut out);
        Ok(Vertex(out))
    }

    fn apply_word(&self, w: &Word, v: &mut [u8]) {
        for s in w.syllables() {
            let reps = if s.gen.is_involution() { s.exp.rem_euclid(2) as u64 } else { s.exp.unsigned_abs() };
            for _ in 0..reps {
                if s.exp > 0 || s.gen.is_involution() {
                    self.apply_generator(s.gen, v);
                } else {
                    self.apply_generator_inverse(s.gen, v);
                }
            }
        }
    }

    fn apply_generator(&self, g: Generator, v: &mut [u8]) {
        let Some((head, tail)) = v.split_first_mut() else { return };
        let e = &self.entries[&g];
        let i = *head as usize;
        *head ^= e.swap as u8;
        self.apply_word(&e.sections[i], tail);
    }

    fn apply_generator_inverse(&self, g: Generator, v: &mut [u8]) {
        let Some((head, tail)) = v.split_first_mut() else { return };
        let e = &self.entries[&g];
        let i = (*head ^ e.swap as u8) as usize;
        *head = i as u8;
        self.apply_word(&invert(&e.sections[i]), tail);
    }

    /// Precomputes generator permutations on level `n`.
    pub fn level_action(&self, n: u32) -> Result<LevelAction, WreathError> {
        self.check_level(n)?;
        let mut current: BTreeMap<Generator, Permutation> =
            self.entries.keys().map(|&g| (g, Permutation::identity(1))).collect();
        for k in 1..=n {
            let lower = LevelAction { level: k - 1, gens: current };
            let half = 1u32 << (k - 1);
            let mut next = BTreeMap::new();
            for (&g, e) in &self.entries {
                let p0 = lower.act(&e.sections[0]);
                let p1 = lower.act(&e.sections[1]);
                let mut images = vec![0u32; 1 << k];
                for (t, p) in [(0u32, &p0), (1u32, &p1)] {
                    let top = t ^ e.swap as u32;
                    for r in 0..half {
                        images[(t * half + r) as usize] = top * half + p.apply(r);
                    }
                }
                next.insert(g, Permutation::from_images_unchecked(images));
            }
            current = next;
        }
        Ok(LevelAction { level: n, gens: current })
    }

    /// Permutation of the `2^n` leaves of level `n`.
    pub fn act_level(&self, w: &Word, n: u32) -> Result<Permutation, WreathError> {
        self.check_word(w)?;
        Ok(self.level_action(n)?.act(w))
    }

    pub fn stabilizes_level(&self, w: &Word, n: u32) -> Result<bool, WreathError> {
        self.check_word(w)?;
        let mut frontier = vec![reduce(w)];
        for _ in 0..n {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for u in &frontier {
                if u.is_empty() {
                    continue;
                }
                let d = self.decompose_unchecked(u);
                if d.swap {
                    return Ok(false);
                }
                let [s0, s1] = d.sections;
                next.push(s0);
                next.push(s1);
            }
            frontier = next;
        }
        Ok(true)
    }

    pub fn portrait(&self, w: &Word, depth: u32) -> Result<Portrait, WreathError> {
        self.check_word(w)?;
        self.check_level(depth)?;
        Ok(self.portrait_unchecked(&reduce(w), depth))
    }

    fn portrait_unchecked(&self, w: &Word, depth: u32) -> Portrait {
        if depth == 0 {
            return Portrait::Leaf(w.clone());
        }
        let d = self.decompose_unchecked(w);
        let [s0, s1] = &d.sections;
        Portrait::Node {
            swap: d.swap,
            children: Box::new([self.portrait_unchecked(s0, depth - 1), self.portrait_unchecked(s1, depth - 1)]),
        }
    }

    /// Sections of an element that fixes every vertex of level `n`, in
    /// leaf order; `None` if it moves some vertex of that level.
    pub fn level_sections(&self, w: &Word, n: u32) -> Result<Option<Vec<Word>>, WreathError> {
        self.check_word(w)?;
        let mut frontier = vec![reduce(w)];
        for _ in 0..n {
            let mut next = Vec::with_capacity(frontier.len() * 2);
            for u in &frontier {
                let d = self.decompose_unchecked(u);
                if d.swap {
                    return Ok(None);
                }
                let [s0, s1] = d.sections;
                next.push(s0);
                next.push(s1);
            }
            frontier = next;
        }
        Ok(Some(frontier))
    }
}

fn inverse_sections(e: &Entry) -> [Word; 2] {
    if e.swap {
        [invert(&e.sections[1]), invert(&e.sections[0])]
    } else {
        [invert(&e.sections[0]), invert(&e.sections[1])]
    }
}

/// Generator permutations on one level of the tree.
#[derive(Clone, Debug)]
pub struct LevelAction {
    level: u32,
    gens: BTreeMap<Generator, Permutation>,
}

impl LevelAction {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> usize {
        1 << self.level
    }

    pub fn generator(&self, g: Generator) -> Option<&Permutation> {
        self.gens.get(&g)
    }

    /// Action of `w`; panics on a letter outside the table.
    pub fn act(&self, w: &Word) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        for s in w.syllables() {
            let p = &self.gens[&s.gen];
            let e = if s.gen.is_involution() { s.exp.rem_euclid(2) } else { s.exp };
            acc = match e {
                0 => acc,
                1 => acc.then(p),
                _ => acc.then(&p.pow(e)),
            };
        }
        acc
    }
}

/// Iterated wreath decomposition to a fixed depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Portrait {
    Leaf(Word),
    Node { swap: bool, children: Box<[Portrait; 2]> },
}

impl Portrait {
    pub fn depth(&self) -> u32 {
        match self {
            Portrait::Leaf(_) => 0,
            Portrait::Node { children, .. } => 1 + children[0].depth(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Portrait::Leaf(w) => w.is_empty(),
            Portrait::Node { swap, children } => !swap && children.iter().all(Portrait::is_trivial),
        }
    }

    /// Leaf sections in leaf order.
    pub fn leaves(&self) -> Vec<&Word> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Word>) {
        match self {
            Portrait::Leaf(w) => out.push(w),
            Portrait::Node { children, .. } => {
                children[0].collect_leaves(out);
                children[1].collect_leaves(out);
            }
        }
    }

    /// Action on the level equal to the portrait depth, using only swap flags.
    pub fn to_permutation(&self) -> Permutation {
        let n = self.depth();
        let images = (0..1u32 << n)
            .map(|i| {
                let v = Vertex::from_leaf_index(i, n);
                let mut node = self;
                let mut out = 0u32;
                for &b in v.letters() {
                    let Portrait::Node { swap, children } = node else { unreachable!() };
                    out = (out << 1) | (b ^ *swap as u8) as u32;
                    node = &children[b as usize];
                }
                out
            })
            .collect();
        Permutation::from_images_unchecked(images)
    }

    /// Reassembles the element acting on any vertex: swap flags above the
    /// portrait depth, leaf sections below it.
    pub fn act_vertex(&self, table: &RecursionTable, v: &Vertex) -> Result<Vertex, WreathError> {
        let mut node = self;
        let mut out = Vec::with_capacity(v.len());
        for (k, &b) in v.letters().iter().enumerate() {
            match node {
                Portrait::Node { swap, children } => {
                    out.push(b ^ *swap as u8);
                    node = &children[b as usize];
                }
                Portrait::Leaf(w) => {
                    let rest = Vertex(v.letters()[k..].to_vec());
                    out.extend_from_slice(table.act_vertex(w, &rest)?.letters());
                    return Ok(Vertex(out));
                }
            }
        }
        Ok(Vertex(out))
    }
}

impl fmt::Display for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Portrait::Leaf(w) => write!(f, "{w}"),
            Portrait::Node { swap, children } => {
                write!(f, "[{} | {}]", children[0], children[1])?;
                if *swap {
                    write!(f, "a")?;
                }
                Ok(())
            }
        }
    }
}

/// Letter substitution `σ` with `σ(g) = (*, g)` and trivial root action:
/// `a ↦ aba, b ↦ d, c ↦ b, d ↦ c, x ↦ xa`.
fn lift_right(g: &Word) -> Word {
    use Generator::*;
    let mut out = Word::identity();
    for s in g.syllables() {
        let image = match s.gen {
            A => Word::from_letters(&[A, B, A]),
            B => Word::gen(D),
            C => Word::gen(B),
            D => Word::gen(C),
            X => Word::from_letters(&[X, A]),
        };
        let e = if s.gen.is_involution() { s.exp.rem_euclid(2) } else { s.exp };
        out = concat_reduce(&out, &image.pow(e));
    }
    out
}

/// An element fixing `v` whose section at `v` is `g`, for the `L` table.
/// Sections off the path are unspecified.
pub fn lift(g: &Word, v: &Vertex) -> Word {
    let mut cur = reduce(g);
    let a = Word::gen(Generator::A);
    for &i in v.letters().iter().rev() {
        let right = lift_right(&cur);
        cur = if i == 1 { right } else { a.mul(&right).mul(&a) };
    }
    cur
}
