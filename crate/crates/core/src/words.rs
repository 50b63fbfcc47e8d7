//! Words over `{a, b, c, d, x}` and their normal forms in the covering group
//! `Z/2 * (Z/2 x Z/2) * Z`.
//!
//! The letter `a` generates the first factor, `b, c, d` are the three
//! involutions of the Klein four-group (with `bc = d`, `bd = c`, `cd = b`) and
//! `x` generates the infinite cyclic factor. A reduced word never has two
//! adjacent syllables from the same factor.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    A,
    B,
    C,
    D,
    X,
}

/// The free factor a generator belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Rooted,
    Klein,
    Cyclic,
}

impl Generator {
    pub const ALL: [Generator; 5] = [Generator::A, Generator::B, Generator::C, Generator::D, Generator::X];

    pub fn symbol(self) -> char {
        match self {
            Generator::A => 'a',
            Generator::B => 'b',
            Generator::C => 'c',
            Generator::D => 'd',
            Generator::X => 'x',
        }
    }

    pub fn from_symbol(ch: char) -> Option<Generator> {
        Some(match ch {
            'a' => Generator::A,
            'b' => Generator::B,
            'c' => Generator::C,
            'd' => Generator::D,
            'x' => Generator::X,
            _ => return None,
        })
    }

    pub fn factor(self) -> Factor {
        match self {
            Generator::A => Factor::Rooted,
            Generator::B | Generator::C | Generator::D => Factor::Klein,
            Generator::X => Factor::Cyclic,
        }
    }

    pub fn is_involution(self) -> bool {
        self != Generator::X
    }

    // b, c, d as the nonzero elements of (Z/2)^2; xor is the group law.
    fn klein_bits(self) -> u8 {
        match self {
            Generator::B => 1,
            Generator::C => 2,
            Generator::D => 3,
            _ => unreachable!("not a Klein generator"),
        }
    }

    fn from_klein_bits(bits: u8) -> Option<Generator> {
        match bits {
            0 => None,
            1 => Some(Generator::B),
            2 => Some(Generator::C),
            3 => Some(Generator::D),
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syllable {
    pub gen: Generator,
    pub exp: i64,
}

impl Syllable {
    pub fn new(gen: Generator, exp: i64) -> Self {
        Syllable { gen, exp }
    }

    pub fn letter_length(&self) -> u64 {
        self.exp.unsigned_abs()
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "{}", self.gen)
        } else {
            write!(f, "{}^{}", self.gen, self.exp)
        }
    }
}

/// A sequence of syllables. Values produced by [`reduce`] and the arithmetic
/// helpers on this type are in normal form; [`parse_word`] keeps the input
/// sequence as written.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_syllables(syllables: Vec<Syllable>) -> Self {
        Word { syllables }
    }

    pub fn gen(g: Generator) -> Self {
        Word { syllables: vec![Syllable::new(g, 1)] }
    }

    /// `x^k`, reduced.
    pub fn x_pow(k: i64) -> Self {
        if k == 0 {
            Word::identity()
        } else {
            Word { syllables: vec![Syllable::new(Generator::X, k)] }
        }
    }

    /// Product of single letters, reduced.
    pub fn from_letters(letters: &[Generator]) -> Self {
        reduce(&Word { syllables: letters.iter().map(|&g| Syllable::new(g, 1)).collect() })
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letter count with `x^k` counting `|k|`.
    pub fn letter_length(&self) -> u64 {
        self.syllables.iter().map(Syllable::letter_length).sum()
    }

    pub fn exp_a(&self) -> i64 {
        exp_of(self, Generator::A)
    }

    pub fn exp_x(&self) -> i64 {
        exp_of(self, Generator::X)
    }

    pub fn is_reduced(&self) -> bool {
        self.syllables.iter().all(|s| if s.gen.is_involution() { s.exp == 1 } else { s.exp != 0 })
            && self.syllables.windows(2).all(|w| w[0].gen.factor() != w[1].gen.factor())
    }

    pub fn mul(&self, other: &Word) -> Word {
        concat_reduce(self, other)
    }

    pub fn inverse(&self) -> Word {
        invert(self)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { invert(self) } else { reduce(self) };
        let mut acc = Word::identity();
        for _ in 0..k.unsigned_abs() {
            acc = concat_reduce(&acc, &base);
        }
        acc
    }

    /// `u^-1 v^-1 u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        invert(u).mul(&invert(v)).mul(u).mul(v)
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        invert(g).mul(self).mul(g)
    }

    /// Shortest-then-lexicographic comparison, used to pick canonical
    /// representatives.
    pub fn canonical_cmp(&self, other: &Word) -> Ordering {
        self.letter_length().cmp(&other.letter_length()).then_with(|| self.syllables.cmp(&other.syllables))
    }

    /// Whether `g` occurs in the word.
    pub fn uses(&self, g: Generator) -> bool {
        self.syllables.iter().any(|s| s.gen == g)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Parses and reduces.
impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s).map(|w| reduce(&w))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at byte {offset}")]
    UnexpectedChar { offset: usize, found: char },
    #[error("expected an integer exponent at byte {offset}")]
    MissingExponent { offset: usize },
    #[error("zero exponent at byte {offset}")]
    ZeroExponent { offset: usize },
    #[error("exponent out of range at byte {offset}")]
    ExponentOverflow { offset: usize },
    #[error("expected a generator after '*' at byte {offset}")]
    DanglingOperator { offset: usize },
}

/// Tokenizes `text` into a syllable sequence without reducing it.
///
/// Terms are a generator (or `1`) with an optional `^int`, separated by `*`
/// or whitespace. Involution exponents keep their magnitude (so `a^-1` reads
/// as `a`); `1` terms vanish.
pub fn parse_word(text: &str) -> Result<Word, ParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut syllables = Vec::new();
    let mut expect_term = false;

    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };

    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            if expect_term {
                return Err(ParseError::DanglingOperator { offset: pos });
            }
            break;
        }
        let ch = text[pos..].chars().next().expect("in bounds");
        let gen = match ch {
            '1' => None,
            _ => match Generator::from_symbol(ch) {
                Some(g) => Some(g),
                None => return Err(ParseError::UnexpectedChar { offset: pos, found: ch }),
            },
        };
        pos += ch.len_utf8();
        let mut exp: i64 = 1;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let start = pos;
            if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                pos += 1;
            }
            let digits_start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos == digits_start {
                return Err(ParseError::MissingExponent { offset: start });
            }
            exp = text[start..pos].parse().map_err(|_| ParseError::ExponentOverflow { offset: start })?;
            if exp == 0 {
                return Err(ParseError::ZeroExponent { offset: start });
            }
        }
        if let Some(g) = gen {
            let exp = if g.is_involution() { exp.abs() } else { exp };
            syllables.push(Syllable::new(g, exp));
        }
        expect_term = false;

        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] == b'*' {
            pos += 1;
            expect_term = true;
        }
    }
    Ok(Word { syllables })
}

fn push_reduced(out: &mut Vec<Syllable>, s: Syllable) {
    let s = if s.gen.is_involution() {
        if s.exp.rem_euclid(2) == 0 {
            return;
        }
        Syllable::new(s.gen, 1)
    } else if s.exp == 0 {
        return;
    } else {
        s
    };
    let Some(top) = out.last().copied() else {
        out.push(s);
        return;
    };
    if top.gen.factor() != s.gen.factor() {
        out.push(s);
        return;
    }
    out.pop();
    let merged = match s.gen.factor() {
        Factor::Rooted => None,
        Factor::Klein => {
            Generator::from_klein_bits(top.gen.klein_bits() ^ s.gen.klein_bits()).map(|g| Syllable::new(g, 1))
        }
        Factor::Cyclic => {
            let e = top.exp + s.exp;
            (e != 0).then(|| Syllable::new(Generator::X, e))
        }
    };
    if let Some(m) = merged {
        // the syllable below `top` is from another factor, so no cascade
        out.push(m);
    }
}

/// Normal form in the free product.
pub fn reduce(w: &Word) -> Word {
    let mut out = Vec::with_capacity(w.syllables.len());
    for &s in &w.syllables {
        push_reduced(&mut out, s);
    }
    Word { syllables: out }
}

/// Normal form of `uv` for normal-form `u`, `v`.
pub fn concat_reduce(u: &Word, v: &Word) -> Word {
    let mut out = Vec::with_capacity(u.syllables.len() + v.syllables.len());
    out.extend_from_slice(&u.syllables);
    for &s in &v.syllables {
        push_reduced(&mut out, s);
    }
    Word { syllables: out }
}

pub fn invert(w: &Word) -> Word {
    let syllables = w
        .syllables
        .iter()
        .rev()
        .map(|s| if s.gen.is_involution() { *s } else { Syllable::new(s.gen, -s.exp) })
        .collect::<Vec<_>>();
    reduce(&Word { syllables })
}

fn exp_of(w: &Word, g: Generator) -> i64 {
    w.syllables.iter().filter(|s| s.gen == g).map(|s| s.exp).sum()
}

pub fn exp_a(w: &Word) -> i64 {
    w.exp_a()
}

pub fn exp_x(w: &Word) -> i64 {
    w.exp_x()
}

/// Which letters a normal-form enumeration may use.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    /// `a, b, c, d`
    WithoutX,
    /// `a, b, c, d, x`
    Full,
}

impl Alphabet {
    pub fn generators(self) -> &'static [Generator] {
        match self {
            Alphabet::WithoutX => &Generator::ALL[..4],
            Alphabet::Full => &Generator::ALL,
        }
    }
}

/// Calls `visit` on every nonempty normal-form word of letter length at most
/// `max_len`, in depth-first order (a prefix before its extensions).
pub fn for_each_normal_form<F: FnMut(&Word)>(max_len: u64, alphabet: Alphabet, mut visit: F) {
    let mut buf = Word::identity();
    extend_normal_forms(&mut buf, max_len, alphabet, &mut visit);
}

fn extend_normal_forms<F: FnMut(&Word)>(buf: &mut Word, budget: u64, alphabet: Alphabet, visit: &mut F) {
    if budget == 0 {
        return;
    }
    let last = buf.syllables.last().map(|s| s.gen.factor());
    for &g in alphabet.generators() {
        if Some(g.factor()) == last {
            continue;
        }
        if g == Generator::X {
            for k in 1..=budget as i64 {
                for e in [k, -k] {
                    buf.syllables.push(Syllable::new(g, e));
                    visit(buf);
                    extend_normal_forms(buf, budget - k as u64, alphabet, visit);
                    buf.syllables.pop();
                }
            }
        } else {
            buf.syllables.push(Syllable::new(g, 1));
            visit(buf);
            extend_normal_forms(buf, budget - 1, alphabet, visit);
            buf.syllables.pop();
        }
    }
}

/// All normal forms of letter length `1..=max_len`, shortest-then-lexicographic.
pub fn normal_forms(max_len: u64, alphabet: Alphabet) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_normal_form(max_len, alphabet, |w| out.push(w.clone()));
    out.sort_by(Word::canonical_cmp);
    out
}

/// A normal-form word of letter length at most `max_len`, uniformly random
/// over syllable choices (not over words).
pub fn random_word<R: rand::Rng + ?Sized>(rng: &mut R, max_len: u64, alphabet: Alphabet) -> Word {
    let target = rng.gen_range(0..=max_len);
    let mut syllables: Vec<Syllable> = Vec::new();
    let mut len = 0;
    let gens = alphabet.generators();
    while len < target {
        let last = syllables.last().map(|s| s.gen.factor());
        let choices: Vec<Generator> = gens.iter().copied().filter(|g| Some(g.factor()) != last).collect();
        let g = choices[rng.gen_range(0..choices.len())];
        let s = if g == Generator::X {
            let k = rng.gen_range(1..=(target - len).min(3)) as i64;
            Syllable::new(g, if rng.gen_bool(0.5) { k } else { -k })
        } else {
            Syllable::new(g, 1)
        };
        len += s.letter_length();
        syllables.push(s);
    }
    Word { syllables }
}
