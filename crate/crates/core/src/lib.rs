//! The self-similar group `L = <a, b, c, d, x>` acting on the binary rooted
//! tree, where `a` swaps the two subtrees, `b = (a, c)`, `c = (a, d)`,
//! `d = (1, b)` generate the torsion group `G`, and `x = (1, x)a` is the
//! binary adding machine.
//!
//! The crate provides word normal forms ([`words`]), the wreath recursion and
//! tree action ([`wreath`]), a word-problem solver ([`wordproblem`]), Moore
//! automata analysis ([`automaton`]), permutation-group computations in level
//! quotients ([`permgroup`]) and the verification suites behind the CLI
//! ([`suites`]).

pub mod automaton;
pub mod permgroup;
pub mod suites;
pub mod wordproblem;
pub mod words;
pub mod wreath;

use std::fmt;

use serde::{Deserialize, Serialize};

use words::{Alphabet, Generator};
use wreath::RecursionTable;

/// The two groups the crate knows by name.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ambient {
    /// The torsion group `G = <a, b, c, d>`.
    G,
    /// `<a, b, c, d, x>`.
    L,
}

impl Ambient {
    pub fn generators(self) -> &'static [Generator] {
        match self {
            Ambient::G => &[Generator::A, Generator::B, Generator::C, Generator::D],
            Ambient::L => &Generator::ALL,
        }
    }

    pub fn alphabet(self) -> Alphabet {
        match self {
            Ambient::G => Alphabet::WithoutX,
            Ambient::L => Alphabet::Full,
        }
    }

    /// The recursion table. `G`'s table omits `x`.
    pub fn table(self) -> RecursionTable {
        match self {
            Ambient::G => RecursionTable::g_group(),
            Ambient::L => RecursionTable::l_group(),
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ambient::G => "G",
            Ambient::L => "L",
        })
    }
}
