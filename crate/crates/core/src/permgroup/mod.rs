//! Permutation groups on tree levels: a Schreier-Sims kernel plus the
//! named subgroups of `L` realized in finite quotients.
//!
//! Everything computed here is finite-level evidence: images of subgroups in
//! the action on `2^n` leaves, never the infinite groups themselves.

mod bsgs;
mod perm;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bsgs::{
    derived_subgroup, index, normal_closure, orbit, schreier_sims, GroupError, GroupHandle, DEFAULT_DEGREE_CAP,
};
pub use perm::{PermError, Permutation};

use crate::words::{Generator, Word};
use crate::wreath::{LevelAction, RecursionTable, Vertex, WreathError};
use crate::Ambient;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error(transparent)]
    Wreath(#[from] WreathError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("subgroup {name} uses generator {gen}, which is outside its ambient group")]
    OutsideAmbient { name: String, gen: Generator },
    #[error("vertex {vertex} is not above level {level}")]
    VertexTooDeep { vertex: Vertex, level: u32 },
}

/// A subgroup described by generators: explicit words, other subgroups and
/// optionally the derived subgroup of the ambient group, closed under
/// conjugation by the ambient group when `normal_closure` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub name: String,
    pub ambient: Ambient,
    pub generator_words: Vec<Word>,
    pub include_derived: bool,
    pub parts: Vec<SubgroupSpec>,
    pub normal_closure: bool,
}

fn word(s: &str) -> Word {
    s.parse().expect("static word")
}

impl SubgroupSpec {
    pub fn generated(name: &str, ambient: Ambient, words: &[&str]) -> Self {
        SubgroupSpec {
            name: name.to_string(),
            ambient,
            generator_words: words.iter().map(|w| word(w)).collect(),
            include_derived: false,
            parts: Vec::new(),
            normal_closure: false,
        }
    }

    pub fn normal(mut self) -> Self {
        self.normal_closure = true;
        self
    }

    /// `K = <[a,b]>^G`.
    pub fn k() -> Self {
        SubgroupSpec::generated("K", Ambient::G, &["a*b*a*b"]).normal()
    }

    /// `S = [<x>, G]^L`, generated as a normal subgroup by `[a,x], [b,x], [c,x], [d,x]`.
    pub fn s() -> Self {
        let x = Word::gen(Generator::X);
        let mut spec = SubgroupSpec::generated("S", Ambient::L, &[]).normal();
        spec.generator_words = [Generator::A, Generator::B, Generator::C, Generator::D]
            .iter()
            .map(|&g| Word::commutator(&Word::gen(g), &x))
            .collect();
        spec
    }

    pub fn gamma2(ambient: Ambient) -> Self {
        let name = match ambient {
            Ambient::G => "gamma2(G)",
            Ambient::L => "gamma2(L)",
        };
        let mut spec = SubgroupSpec::generated(name, ambient, &[]);
        spec.include_derived = true;
        spec
    }

    /// `R = <K, S, gamma2(L)>^L`.
    pub fn r() -> Self {
        let mut spec = SubgroupSpec::generated("R", Ambient::L, &[]).normal();
        spec.parts = vec![SubgroupSpec::k(), SubgroupSpec::s(), SubgroupSpec::gamma2(Ambient::L)];
        spec
    }

    /// `P = <R, <x^4>>^L`.
    pub fn p() -> Self {
        let mut spec = SubgroupSpec::generated("P", Ambient::L, &["x^4"]).normal();
        spec.parts = vec![SubgroupSpec::r()];
        spec
    }

    /// `A = <b, c, d, x^-1 b x, x^-1 c x, x^-1 d x>`.
    pub fn a() -> Self {
        SubgroupSpec::generated("A", Ambient::L, &["b", "c", "d", "x^-1*b*x", "x^-1*c*x", "x^-1*d*x"])
    }

    /// `Q = <d, c, aca, xa>`.
    pub fn q() -> Self {
        SubgroupSpec::generated("Q", Ambient::L, &["d", "c", "a*c*a", "x*a"])
    }

    pub fn cyclic_x() -> Self {
        SubgroupSpec::generated("<x>", Ambient::L, &["x"])
    }

    /// Looks up `K`, `S`, `R`, `P`, `A`, `Q`, `X`, `G2` (derived subgroup of
    /// `L`) or `G2G` (of `G`) by name, case-insensitively.
    pub fn named(name: &str) -> Option<Self> {
        Some(match name.to_ascii_uppercase().as_str() {
            "K" => SubgroupSpec::k(),
            "S" => SubgroupSpec::s(),
            "R" => SubgroupSpec::r(),
            "P" => SubgroupSpec::p(),
            "A" => SubgroupSpec::a(),
            "Q" => SubgroupSpec::q(),
            "X" => SubgroupSpec::cyclic_x(),
            "G2" | "GAMMA2" => SubgroupSpec::gamma2(Ambient::L),
            "G2G" => SubgroupSpec::gamma2(Ambient::G),
            _ => return None,
        })
    }
}

/// Builds level quotients of `G` and `L` and their subgroups, caching the
/// generator actions and ambient groups per level.
pub struct QuotientBuilder {
    table: RecursionTable,
    degree_cap: usize,
    actions: BTreeMap<u32, LevelAction>,
    ambients: BTreeMap<(Ambient, u32), GroupHandle>,
}

impl QuotientBuilder {
    pub fn new(table: RecursionTable) -> Self {
        QuotientBuilder::with_degree_cap(table, DEFAULT_DEGREE_CAP)
    }

    pub fn with_degree_cap(table: RecursionTable, degree_cap: usize) -> Self {
        QuotientBuilder { table, degree_cap, actions: BTreeMap::new(), ambients: BTreeMap::new() }
    }

    pub fn table(&self) -> &RecursionTable {
        &self.table
    }

    fn check_degree(&self, n: u32) -> Result<(), QuotientError> {
        let degree = 1usize.checked_shl(n).unwrap_or(usize::MAX);
        if n >= usize::BITS || degree > self.degree_cap {
            return Err(GroupError::DegreeCap { degree, cap: self.degree_cap }.into());
        }
        Ok(())
    }

    pub fn action(&mut self, n: u32) -> Result<&LevelAction, QuotientError> {
        self.check_degree(n)?;
        if !self.actions.contains_key(&n) {
            let a = self.table.level_action(n)?;
            self.actions.insert(n, a);
        }
        Ok(&self.actions[&n])
    }

    pub fn act(&mut self, w: &Word, n: u32) -> Result<Permutation, QuotientError> {
        if let Some(s) = w.syllables().iter().find(|s| !self.table.contains(s.gen)) {
            return Err(WreathError::UnknownGenerator(s.gen).into());
        }
        Ok(self.action(n)?.act(w))
    }

    /// Group generated by the images of `words` on level `n`.
    pub fn generated_by(&mut self, words: &[Word], n: u32) -> Result<GroupHandle, QuotientError> {
        let gens = words.iter().map(|w| self.act(w, n)).collect::<Result<Vec<_>, _>>()?;
        Ok(GroupHandle::with_cap(1 << n, gens, self.degree_cap)?)
    }

    pub fn ambient(&mut self, ambient: Ambient, n: u32) -> Result<GroupHandle, QuotientError> {
        if let Some(g) = self.ambients.get(&(ambient, n)) {
            return Ok(g.clone());
        }
        let words: Vec<Word> = ambient.generators().iter().map(|&g| Word::gen(g)).collect();
        let g = self.generated_by(&words, n)?;
        self.ambients.insert((ambient, n), g.clone());
        Ok(g)
    }

    /// Image of `spec` on level `n`.
    pub fn subgroup(&mut self, spec: &SubgroupSpec, n: u32) -> Result<GroupHandle, QuotientError> {
        if let Some(g) = spec
            .generator_words
            .iter()
            .flat_map(|w| w.syllables())
            .map(|s| s.gen)
            .find(|g| !spec.ambient.generators().contains(g))
        {
            return Err(QuotientError::OutsideAmbient { name: spec.name.clone(), gen: g });
        }
        let mut gens = Vec::new();
        for w in &spec.generator_words {
            gens.push(self.act(w, n)?);
        }
        for part in &spec.parts {
            gens.extend(self.subgroup(part, n)?.generators().iter().cloned());
        }
        // the ambient image is only built when the spec needs it
        if spec.include_derived {
            let ambient = self.ambient(spec.ambient, n)?;
            gens.extend(derived_subgroup(&ambient)?.generators().iter().cloned());
        }
        gens.retain(|g| !g.is_identity());
        if spec.normal_closure {
            let ambient = self.ambient(spec.ambient, n)?;
            Ok(normal_closure(&ambient, &gens)?)
        } else {
            Ok(GroupHandle::with_cap(1 << n, gens, self.degree_cap)?)
        }
    }

    /// `[ambient image : spec image]` on level `n`.
    pub fn index_in_ambient(&mut self, spec: &SubgroupSpec, n: u32) -> Result<BigUint, QuotientError> {
        let ambient = self.ambient(spec.ambient, n)?;
        let sub = self.subgroup(spec, n)?;
        Ok(index(&ambient, &sub)?)
    }
}

/// Leaves of level `n` not below `v`.
fn leaves_outside(v: &Vertex, n: u32) -> Vec<u32> {
    Vertex::level(n).filter(|leaf| !v.is_prefix_of(leaf)).map(|leaf| leaf.leaf_index()).collect()
}

/// Subgroup of a level-`n` quotient fixing every leaf outside the subtree at
/// `v`. Uses a base that lists the outside leaves first, so the stabilizer
/// chain exposes the pointwise stabilizer directly.
pub fn rist_image(quotient: &GroupHandle, n: u32, v: &Vertex) -> Result<GroupHandle, QuotientError> {
    if v.len() as u32 > n {
        return Err(QuotientError::VertexTooDeep { vertex: v.clone(), level: n });
    }
    let degree = quotient.degree();
    let outside = leaves_outside(v, n);
    let chain = GroupHandle::with_base(degree, quotient.generators().to_vec(), &outside, degree)?;
    Ok(GroupHandle::with_cap(degree, chain.stabilizer_generators(outside.len()), degree)?)
}

/// Restriction of a level-`n` permutation to the subtree below first-level
/// vertex `i`, as a level-`(n-1)` permutation. `None` if that subtree is
/// not mapped to itself.
pub fn restrict_to_subtree(p: &Permutation, n: u32, i: u8) -> Option<Permutation> {
    assert!(n >= 1);
    let half = 1u32 << (n - 1);
    let offset = i as u32 * half;
    let mut images = Vec::with_capacity(half as usize);
    for r in 0..half {
        let img = p.apply(offset + r);
        if img / half != i as u32 {
            return None;
        }
        images.push(img - offset);
    }
    Some(Permutation::from_images_unchecked(images))
}

/// Level-`(n-1)` permutation induced by a level-`n` one.
pub fn forget_last_level(p: &Permutation, n: u32) -> Permutation {
    assert!(n >= 1);
    let images = (0..1u32 << (n - 1)).map(|u| p.apply(u << 1) >> 1).collect();
    Permutation::from_images_unchecked(images)
}
