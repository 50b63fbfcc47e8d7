use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image list is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("malformed cycle notation at byte {0}")]
    BadCycles(usize),
}

/// A permutation of `0..degree`, stored as its image list.
///
/// Composition follows the left-to-right convention used throughout the
/// crate: `p.then(&q)` applies `p` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(PermError::NotBijection(n));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Parses cycle notation such as `(0 2 1 3)(4 5)` on `degree` points.
    /// `()` is the identity.
    pub fn from_cycles(degree: usize, text: &str) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut rest = text.trim();
        let mut offset = text.len() - text.trim_start().len();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(PermError::BadCycles(offset));
            }
            let close = rest.find(')').ok_or(PermError::BadCycles(offset))?;
            let points = rest[1..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().map_err(|_| PermError::BadCycles(offset)))
                .collect::<Result<Vec<_>, _>>()?;
            for (i, &p) in points.iter().enumerate() {
                if p as usize >= degree {
                    return Err(PermError::BadCycles(offset));
                }
                images[p as usize] = points[(i + 1) % points.len()];
            }
            let consumed = close + 1;
            let after = &rest[consumed..];
            offset += consumed + (after.len() - after.trim_start().len());
            rest = after.trim_start();
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &p)| i as u32 == p)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&i| other.images[i as usize]).collect() }
    }

    pub fn try_then(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.then(other))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &p) in self.images.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, k: i64) -> Permutation {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    /// `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    /// Nontrivial cycles, each starting at its smallest point, sorted.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn smallest_moved_point(&self) -> Option<u32> {
        self.images.iter().enumerate().find(|(i, &p)| *i as u32 != p).map(|(i, _)| i as u32)
    }

    /// Order as the lcm of cycle lengths; saturates at `u64::MAX`.
    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles().iter().fold(1u64, |acc, c| {
            let l = c.len() as u64;
            (acc / gcd(acc, l)).saturating_mul(l)
        })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_round_trip_and_composition() {
        let p = Permutation::from_cycles(4, "(0 2 1 3)").unwrap();
        assert_eq!(p.images(), &[2, 3, 1, 0]);
        assert_eq!(p.to_string(), "(0 2 1 3)");
        assert_eq!(p.order(), 4);
        let q = Permutation::from_cycles(4, "(0 1)").unwrap();
        // p first: 0 -> 2 -> 2
        assert_eq!(p.then(&q).apply(0), 2);
        assert_eq!(q.then(&p).apply(0), 3);
        assert!(p.then(&p.inverse()).is_identity());
        assert_eq!(p.pow(4), Permutation::identity(4));
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Permutation::from_images(vec![0, 0]), Err(PermError::NotBijection(2)));
        assert!(Permutation::from_cycles(3, "(0 3)").is_err());
        assert!(Permutation::from_cycles(3, "0 1").is_err());
        let a = Permutation::identity(2);
        let b = Permutation::identity(3);
        assert!(a.try_then(&b).is_err());
    }
}
