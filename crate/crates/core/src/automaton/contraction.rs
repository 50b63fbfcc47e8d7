//! Exhaustive contraction checks on short words.
//!
//! For `L`, every reduced word fixing level `steps` must have all of its
//! sections on that level strictly shorter than itself, unless it is one of
//! the fifteen core words. For `G`, a word fixing level 1 has sections of
//! length at most `|v|/2 + 1`; over `steps` levels the bound iterates to
//! `2^steps·|v_i| ≤ |v| + 2(2^steps - 1)`.

use std::fmt;

use crate::wordproblem::CoreSet;
use crate::words::{for_each_normal_form, Word};
use crate::Ambient;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub word: Word,
    pub sections: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionReport {
    pub ambient: Ambient,
    pub steps: u32,
    pub max_len: u64,
    /// Nonempty reduced words enumerated.
    pub words: u64,
    /// Of those, the ones fixing level `steps`.
    pub stabilizing: u64,
    /// Stabilizing words exempted because they are core words.
    pub core_hits: Vec<Word>,
    pub violations: Vec<Violation>,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ContractionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} words of length <= {}, {} fix level {}, {} core hits, {} violations",
            self.ambient,
            self.words,
            self.max_len,
            self.stabilizing,
            self.steps,
            self.core_hits.len(),
            self.violations.len()
        )?;
        for v in self.violations.iter().take(20) {
            let secs: Vec<String> = v.sections.iter().map(|s| s.to_string()).collect();
            writeln!(f, "  {} -> ({})", v.word, secs.join(", "))?;
        }
        Ok(())
    }
}

/// Enumerates nonempty reduced words of length at most `max_len` over the
/// ambient's generators.
pub fn contraction_profile(ambient: Ambient, steps: u32, max_len: u64) -> ContractionReport {
    let table = ambient.table();
    let core = match ambient {
        Ambient::L => Some(CoreSet::new().expect("core witnesses verify")),
        Ambient::G => None,
    };
    let scale = 1u64 << steps;
    let mut report = ContractionReport {
        ambient,
        steps,
        max_len,
        words: 0,
        stabilizing: 0,
        core_hits: Vec::new(),
        violations: Vec::new(),
    };
    for_each_normal_form(max_len, ambient.alphabet(), |w| {
        report.words += 1;
        let Some(sections) = table.level_sections(w, steps).expect("ambient generators") else {
            return;
        };
        report.stabilizing += 1;
        let len = w.letter_length();
        let ok = match ambient {
            Ambient::L => sections.iter().all(|s| s.letter_length() < len),
            Ambient::G => sections.iter().all(|s| scale * s.letter_length() <= len + 2 * (scale - 1)),
        };
        if ok {
            return;
        }
        if core.as_ref().is_some_and(|c| c.contains(w)) {
            report.core_hits.push(w.clone());
        } else {
            report.violations.push(Violation { word: w.clone(), sections });
        }
    });
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_profiles_pass() {
        let l = contraction_profile(Ambient::L, 3, 6);
        assert!(l.passed(), "{l}");
        assert!(l.stabilizing > 0);
        let g = contraction_profile(Ambient::G, 1, 8);
        assert!(g.passed(), "{g}");
    }
}
