use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigUint;
use thiserror::Error;

use super::perm::Permutation;

pub const DEFAULT_DEGREE_CAP: usize = 1 << 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("generator has degree {found}, group has degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("subgroup generator {0} is not in the ambient group")]
    NotASubgroup(usize),
    #[error("base point {0} is out of range")]
    BadBasePoint(u32),
}

/// One level of the stabilizer chain.
#[derive(Clone, Debug)]
struct Level {
    point: u32,
    /// Generators inserted at this level; together they generate the
    /// pointwise stabilizer of the earlier base points.
    gens: Vec<Permutation>,
    /// `transversal[p]` maps the base point to `p`; stored with its inverse.
    transversal: Vec<Option<(Permutation, Permutation)>>,
    orbit: Vec<u32>,
}

impl Level {
    fn new(point: u32, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        let id = Permutation::identity(degree);
        transversal[point as usize] = Some((id.clone(), id));
        Level { point, gens: Vec::new(), transversal, orbit: vec![point] }
    }
}

/// A permutation group given by generators, with a base and strong
/// generating set built deterministically at construction.
#[derive(Clone, Debug)]
pub struct GroupHandle {
    degree: usize,
    generators: Vec<Permutation>,
    levels: Vec<Level>,
}

impl GroupHandle {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, GroupError> {
        Self::with_base(degree, generators, &[], DEFAULT_DEGREE_CAP)
    }

    pub fn with_cap(degree: usize, generators: Vec<Permutation>, degree_cap: usize) -> Result<Self, GroupError> {
        Self::with_base(degree, generators, &[], degree_cap)
    }

    /// Builds the BSGS with `base_prefix` as the first base points; further
    /// points are the smallest moved points of the residues that need them.
    pub fn with_base(
        degree: usize,
        generators: Vec<Permutation>,
        base_prefix: &[u32],
        degree_cap: usize,
    ) -> Result<Self, GroupError> {
        if degree > degree_cap {
            return Err(GroupError::DegreeCap { degree, cap: degree_cap });
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch { expected: degree, found: g.degree() });
        }
        let mut seen = BTreeSet::new();
        let mut levels = Vec::new();
        for &p in base_prefix {
            if p as usize >= degree {
                return Err(GroupError::BadBasePoint(p));
            }
            if seen.insert(p) {
                levels.push(Level::new(p, degree));
            }
        }
        let mut group = GroupHandle { degree, generators: Vec::new(), levels };
        for g in generators {
            group.insert_generator(g);
        }
        Ok(group)
    }

    pub fn trivial(degree: usize) -> Self {
        GroupHandle { degree, generators: Vec::new(), levels: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn strong_generators(&self) -> Vec<&Permutation> {
        self.levels.iter().flat_map(|l| l.gens.iter()).collect()
    }

    /// Lengths of the fundamental orbits along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    /// Adds a generator, extending the BSGS. Returns whether the group grew.
    pub fn insert_generator(&mut self, g: Permutation) -> bool {
        assert_eq!(g.degree(), self.degree);
        if self.contains_from(0, &g) {
            return false;
        }
        self.generators.push(g.clone());
        self.add_at(0, g);
        true
    }

    pub fn is_member(&self, p: &Permutation) -> Result<bool, GroupError> {
        if p.degree() != self.degree {
            return Err(GroupError::DegreeMismatch { expected: self.degree, found: p.degree() });
        }
        Ok(self.contains_from(0, p))
    }

    /// Sifting from level `k`.
    fn contains_from(&self, k: usize, p: &Permutation) -> bool {
        let mut g = p.clone();
        for level in &self.levels[k.min(self.levels.len())..] {
            let image = g.apply(level.point);
            match &level.transversal[image as usize] {
                Some((_, u_inv)) => g = g.then(u_inv),
                None => return false,
            }
        }
        g.is_identity()
    }

    // Knuth's insertion: `g` lies in the stabilizer of base points 0..k.
    fn add_at(&mut self, k: usize, g: Permutation) {
        if self.contains_from(k, &g) {
            return;
        }
        if k == self.levels.len() {
            let point = g.smallest_moved_point().expect("nonmember is not the identity");
            self.levels.push(Level::new(point, self.degree));
        }
        self.levels[k].gens.push(g.clone());
        let reps: Vec<Permutation> = self.levels[k]
            .orbit
            .iter()
            .map(|&p| self.levels[k].transversal[p as usize].as_ref().expect("orbit point has a rep").0.clone())
            .collect();
        let mut queue: VecDeque<Permutation> = reps.into_iter().map(|u| u.then(&g)).collect();
        self.extend_orbit(k, &mut queue);
    }

    fn extend_orbit(&mut self, k: usize, queue: &mut VecDeque<Permutation>) {
        while let Some(h) = queue.pop_front() {
            let level = &self.levels[k];
            let p = h.apply(level.point);
            match &level.transversal[p as usize] {
                Some((_, v_inv)) => {
                    let schreier = h.then(v_inv);
                    if !schreier.is_identity() {
                        self.add_at(k + 1, schreier);
                    }
                }
                None => {
                    let level = &mut self.levels[k];
                    for s in &level.gens {
                        queue.push_back(h.then(s));
                    }
                    let h_inv = h.inverse();
                    level.transversal[p as usize] = Some((h, h_inv));
                    level.orbit.push(p);
                }
            }
        }
    }

    /// Generators of the pointwise stabilizer of the first `k` base points.
    pub(crate) fn stabilizer_generators(&self, k: usize) -> Vec<Permutation> {
        self.levels.iter().skip(k).flat_map(|l| l.gens.iter().cloned()).collect()
    }

    /// Whether every generator of `other` lies in `self`.
    pub fn contains_group(&self, other: &GroupHandle) -> Result<bool, GroupError> {
        for g in other.generators() {
            if !self.is_member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Orbit of `point` under `gens`.
pub fn orbit(gens: &[Permutation], point: u32) -> BTreeSet<u32> {
    let mut seen = BTreeSet::from([point]);
    let mut queue = VecDeque::from([point]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.apply(p);
            if seen.insert(q) {
                queue.push_back(q);
            }
        }
    }
    seen
}

/// Recomputes the BSGS from the generators; `order` reads it off.
pub fn schreier_sims(g: &GroupHandle) -> GroupHandle {
    GroupHandle::with_cap(g.degree(), g.generators().to_vec(), g.degree()).expect("degree already validated")
}

/// Smallest subgroup of `ambient` containing `sub` and normalized by the
/// ambient generators.
pub fn normal_closure(ambient: &GroupHandle, sub: &[Permutation]) -> Result<GroupHandle, GroupError> {
    let degree = ambient.degree();
    let mut closure = GroupHandle::trivial(degree);
    let mut pending: VecDeque<Permutation> = VecDeque::new();
    for s in sub {
        if s.degree() != degree {
            return Err(GroupError::DegreeMismatch { expected: degree, found: s.degree() });
        }
        if closure.insert_generator(s.clone()) {
            pending.push_back(s.clone());
        }
    }
    while let Some(h) = pending.pop_front() {
        for g in ambient.generators() {
            let c = h.conjugate_by(g);
            if closure.insert_generator(c.clone()) {
                pending.push_back(c);
            }
        }
    }
    Ok(closure)
}

/// Normal closure of the commutators of generator pairs.
pub fn derived_subgroup(g: &GroupHandle) -> Result<GroupHandle, GroupError> {
    let gens = g.generators();
    let mut comms = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let c = gens[i].commutator(&gens[j]);
            if !c.is_identity() {
                comms.push(c);
            }
        }
    }
    normal_closure(g, &comms)
}

/// `[ambient : sub]`, after checking that `sub` is contained in `ambient`.
pub fn index(ambient: &GroupHandle, sub: &GroupHandle) -> Result<BigUint, GroupError> {
    for (i, g) in sub.generators().iter().enumerate() {
        if !ambient.is_member(g)? {
            return Err(GroupError::NotASubgroup(i));
        }
    }
    Ok(ambient.order() / sub.order())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(deg: usize, c: &str) -> Permutation {
        Permutation::from_cycles(deg, c).unwrap()
    }

    fn group(deg: usize, cycles: &[&str]) -> GroupHandle {
        GroupHandle::new(deg, cycles.iter().map(|c| p(deg, c)).collect()).unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(group(2, &["(0 1)"]).order(), 2u32.into());
        assert_eq!(group(4, &["(0 1 2 3)"]).order(), 4u32.into());
        assert_eq!(group(4, &["(0 1)", "(0 1 2 3)"]).order(), 24u32.into());
        assert_eq!(group(5, &[]).order(), 1u32.into());
        assert_eq!(group(4, &["(0 1 2)", "(1 2 3)"]).order(), 12u32.into());
    }

    #[test]
    fn membership() {
        let a4 = group(4, &["(0 1 2)", "(1 2 3)"]);
        assert!(a4.is_member(&Permutation::identity(4)).unwrap());
        assert!(a4.is_member(&p(4, "(0 1)(2 3)")).unwrap());
        assert!(!a4.is_member(&p(4, "(0 1)")).unwrap());
        assert!(a4.is_member(&Permutation::identity(5)).is_err());
    }

    #[test]
    fn orbits() {
        assert_eq!(orbit(&[], 3), BTreeSet::from([3]));
        assert_eq!(orbit(&[p(6, "(0 1)(2 3)"), p(6, "(1 2)")], 0), BTreeSet::from([0, 1, 2, 3]));
    }

    #[test]
    fn closures_and_indices() {
        let s3 = group(3, &["(0 1)", "(0 1 2)"]);
        assert_eq!(normal_closure(&s3, &[p(3, "(0 1)")]).unwrap().order(), 6u32.into());
        assert!(normal_closure(&s3, &[Permutation::identity(3)]).unwrap().is_trivial());
        assert_eq!(derived_subgroup(&s3).unwrap().order(), 3u32.into());
        assert!(derived_subgroup(&group(4, &["(0 1 2 3)"])).unwrap().is_trivial());
        let s4 = group(4, &["(0 1)", "(0 1 2 3)"]);
        let a4 = group(4, &["(0 1 2)", "(1 2 3)"]);
        assert_eq!(index(&s4, &a4).unwrap(), 2u32.into());
        assert_eq!(index(&s4, &s4).unwrap(), 1u32.into());
        assert_eq!(index(&a4, &s4), Err(GroupError::NotASubgroup(0)));
    }

    #[test]
    fn prescribed_base() {
        let s4 = GroupHandle::with_base(4, vec![p(4, "(0 1)"), p(4, "(0 1 2 3)")], &[3, 2], 16).unwrap();
        assert_eq!(&s4.base()[..2], &[3, 2]);
        assert_eq!(s4.order(), 24u32.into());
        // stabilizer of 3 and 2 is <(0 1)>
        let stab = GroupHandle::new(4, s4.stabilizer_generators(2)).unwrap();
        assert_eq!(stab.order(), 2u32.into());
        assert!(GroupHandle::with_base(4, vec![], &[7], 16).is_err());
        assert!(GroupHandle::with_base(32, vec![], &[], 16).is_err());
    }
}
