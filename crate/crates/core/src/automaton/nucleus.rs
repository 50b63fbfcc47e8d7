//! Nucleus of a contracting self-similar group.
//!
//! An element that is its own section at some nonempty vertex lies in the
//! nucleus, and so do all of its sections. Starting from the section closure
//! of the generators, their inverses and `1`, the loop below adds the
//! cycle elements (with their sections) of the section closure of all
//! pairwise products until nothing new appears.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::wordproblem::{Solver, SolverConfig, SolverError};
use crate::words::{reduce, Word};
use crate::wreath::{LevelAction, RecursionTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NucleusConfig {
    /// Largest number of distinct elements examined before giving up.
    pub max_candidates: usize,
    /// Level whose action buckets candidates before equality checks.
    pub key_level: u32,
}

impl Default for NucleusConfig {
    fn default() -> Self {
        NucleusConfig { max_candidates: 2000, key_level: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NucleusResult {
    /// Shortest-then-lexicographic representatives, sorted the same way.
    Nucleus(Vec<Word>),
    Diverged {
        candidates: usize,
    },
}

/// Group elements seen so far, one canonical word each.
struct Store {
    solver: Solver,
    action: LevelAction,
    buckets: HashMap<(Vec<u32>, i64), Vec<usize>>,
    reps: Vec<Word>,
    sections: Vec<Option<[usize; 2]>>,
}

impl Store {
    fn intern(&mut self, w: &Word) -> Result<usize, SolverError> {
        let w = reduce(w);
        let key = (self.action.act(&w).images().to_vec(), w.exp_x());
        let ids = self.buckets.entry(key).or_default();
        for &id in ids.iter() {
            if self.solver.are_equal(&self.reps[id], &w)? {
                if w.canonical_cmp(&self.reps[id]) == Ordering::Less {
                    self.reps[id] = w;
                }
                return Ok(id);
            }
        }
        let id = self.reps.len();
        ids.push(id);
        self.reps.push(w);
        self.sections.push(None);
        Ok(id)
    }

    fn sections(&mut self, id: usize) -> Result<[usize; 2], SolverError> {
        if let Some(s) = self.sections[id] {
            return Ok(s);
        }
        let d = self.solver.table().decompose(&self.reps[id])?;
        let s = [self.intern(&d.sections[0])?, self.intern(&d.sections[1])?];
        self.sections[id] = Some(s);
        Ok(s)
    }

    /// Section closure of `seeds`, or `None` once the store outgrows `cap`.
    fn closure(
        &mut self,
        seeds: impl IntoIterator<Item = usize>,
        cap: usize,
    ) -> Result<Option<BTreeSet<usize>>, SolverError> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        for s in seeds {
            if seen.insert(s) {
                queue.push_back(s);
            }
        }
        while let Some(id) = queue.pop_front() {
            for s in self.sections(id)? {
                if seen.insert(s) {
                    queue.push_back(s);
                }
            }
            if self.reps.len() > cap {
                return Ok(None);
            }
        }
        Ok(Some(seen))
    }

    /// Elements of the section-closed set `set` that are sections of
    /// themselves at some nonempty vertex.
    fn on_cycles(&self, set: &BTreeSet<usize>) -> Vec<usize> {
        set.iter()
            .copied()
            .filter(|&g| {
                let mut seen = BTreeSet::new();
                let mut queue: VecDeque<usize> = self.sections[g].expect("closed set").into_iter().collect();
                while let Some(h) = queue.pop_front() {
                    if h == g {
                        return true;
                    }
                    if seen.insert(h) {
                        queue.extend(self.sections[h].expect("closed set"));
                    }
                }
                false
            })
            .collect()
    }
}

pub fn nucleus(table: &RecursionTable, cfg: &NucleusConfig) -> Result<NucleusResult, SolverError> {
    let level = cfg.key_level.min(table.level_cap());
    let mut store = Store {
        solver: Solver::new(table.clone(), SolverConfig::default()),
        action: table.level_action(level)?,
        buckets: HashMap::new(),
        reps: Vec::new(),
        sections: Vec::new(),
    };
    let mut seeds = vec![store.intern(&Word::identity())?];
    for g in table.generators() {
        let w = Word::gen(g);
        seeds.push(store.intern(&w)?);
        seeds.push(store.intern(&w.inverse())?);
    }
    let diverged = |store: &Store| NucleusResult::Diverged { candidates: store.reps.len() };
    let Some(mut core) = store.closure(seeds, cfg.max_candidates)? else {
        return Ok(diverged(&store));
    };
    loop {
        let members: Vec<usize> = core.iter().copied().collect();
        let mut products = BTreeSet::new();
        for &g in &members {
            for &h in &members {
                let p = store.reps[g].mul(&store.reps[h]);
                products.insert(store.intern(&p)?);
                if store.reps.len() > cfg.max_candidates {
                    return Ok(diverged(&store));
                }
            }
        }
        let Some(reach) = store.closure(products.into_iter().chain(members.iter().copied()), cfg.max_candidates)?
        else {
            return Ok(diverged(&store));
        };
        let cyclic = store.on_cycles(&reach);
        let Some(grown) = store.closure(cyclic, cfg.max_candidates)? else {
            return Ok(diverged(&store));
        };
        let before = core.len();
        core.extend(grown);
        if core.len() == before {
            break;
        }
    }
    let mut words: Vec<Word> = core.iter().map(|&id| store.reps[id].clone()).collect();
    words.sort_by(Word::canonical_cmp);
    Ok(NucleusResult::Nucleus(words))
}
