//! Verification suites: each checks a family of identities or finite-level
//! facts about `L` and produces a [`Report`].
//!
//! Finite quotients only ever give evidence about images of subgroups on a
//! fixed level; items phrased in terms of subgroups say so.

use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::contraction_profile;
use crate::permgroup::{
    orbit, restrict_to_subtree, rist_image, GroupHandle, QuotientBuilder, QuotientError, SubgroupSpec,
};
use crate::wordproblem::{OrderResult, Solver, SolverError};
use crate::words::{for_each_normal_form, random_word, Alphabet, Generator, Word};
use crate::wreath::{lift, RecursionTable, Vertex};
use crate::Ambient;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Item {
    pub id: String,
    pub description: String,
    pub status: Status,
    pub witness: Option<String>,
}

impl Item {
    fn check(id: impl Into<String>, description: impl Into<String>, ok: bool, witness: impl Into<String>) -> Self {
        let witness = witness.into();
        Item {
            id: id.into(),
            description: description.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            witness: if witness.is_empty() { None } else { Some(witness) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub version: String,
    pub config: SuiteConfig,
    /// Wall-clock time; not stable across runs.
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub suite: String,
    pub items: Vec<Item>,
    pub meta: Meta,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.items.iter().filter(|i| i.status == status).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            let tag = match item.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            write!(f, "{tag} {}: {}", item.id, item.description)?;
            if let Some(w) = &item.witness {
                write!(f, " [{w}]")?;
            }
            writeln!(f)?;
        }
        writeln!(
            f,
            "{}: {} passed, {} failed, {} skipped ({} ms)",
            self.suite,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip),
            self.meta.elapsed_ms
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Highest level for the transitivity and odometer checks.
    pub levels: u32,
    pub seed: u64,
    pub random_samples: u64,
    pub contraction_max_len: u64,
    pub g_contraction_max_len: u64,
    pub exp_x_exhaustive_len: u64,
    pub exp_x_random_len: u64,
    pub relator_max_len: u64,
    pub x_power_max: i64,
    pub x_power_level: u32,
    pub index_levels: Vec<u32>,
    pub rist_level: u32,
    pub subdirect_max_level: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            levels: 12,
            seed: 0x5e1f_5111,
            random_samples: 10_000,
            contraction_max_len: 10,
            g_contraction_max_len: 12,
            exp_x_exhaustive_len: 8,
            exp_x_random_len: 40,
            relator_max_len: 6,
            x_power_max: 64,
            x_power_level: 7,
            index_levels: vec![4, 5, 6],
            rist_level: 6,
            subdirect_max_level: 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

/// Canonical suite names, in the order `all` runs them.
pub const SUITES: [&str; 12] = [
    "relations",
    "commutators",
    "rewriting-table",
    "contraction",
    "self-replication",
    "branch-elements",
    "subdirect",
    "exp-x",
    "abelianization",
    "index-p",
    "transitivity",
    "rist",
];

/// Alternative names accepted on the command line.
pub const SUITE_ALIASES: [(&str, &str); 9] = [
    ("lemma2.3", "commutators"),
    ("table1", "rewriting-table"),
    ("prop2.12", "contraction"),
    ("selfrepl", "self-replication"),
    ("lemma2.11", "branch-elements"),
    ("lemma2.13", "subdirect"),
    ("lemma2.14", "exp-x"),
    ("lemma2.15", "abelianization"),
    ("indexP", "index-p"),
];

pub fn canonical_suite(name: &str) -> Option<&'static str> {
    if name == "all" {
        return Some("all");
    }
    SUITES
        .iter()
        .copied()
        .find(|s| *s == name)
        .or_else(|| SUITE_ALIASES.iter().find(|(a, _)| *a == name).map(|(_, s)| *s))
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Report, SuiteError> {
    let suite = canonical_suite(name).ok_or_else(|| SuiteError::UnknownSuite(name.to_string()))?;
    let start = Instant::now();
    let items = if suite == "all" {
        let mut items = Vec::new();
        for s in SUITES {
            for mut item in suite_items(s, cfg)? {
                item.id = format!("{s}/{}", item.id);
                items.push(item);
            }
        }
        items
    } else {
        suite_items(suite, cfg)?
    };
    Ok(Report {
        suite: suite.to_string(),
        items,
        meta: Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: cfg.clone(),
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    })
}

fn suite_items(suite: &str, cfg: &SuiteConfig) -> Result<Vec<Item>, SuiteError> {
    match suite {
        "relations" => relations(),
        "commutators" => commutators(),
        "rewriting-table" => rewriting_table(),
        "contraction" => Ok(contraction(cfg)),
        "self-replication" => self_replication(),
        "branch-elements" => branch_elements(),
        "subdirect" => subdirect(cfg),
        "exp-x" => Ok(exp_x(cfg)),
        "abelianization" => abelianization(cfg),
        "index-p" => index_p(cfg),
        "transitivity" => transitivity(cfg),
        "rist" => rist(cfg),
        other => Err(SuiteError::UnknownSuite(other.to_string())),
    }
}

fn w(s: &str) -> Word {
    s.parse().expect("static word")
}

fn render(ws: &[Word]) -> String {
    let parts: Vec<String> = ws.iter().map(|w| w.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Whether `word` fixes level `level` with the given sections there, each
/// coordinate compared in the group.
fn sections_match(
    solver: &mut Solver,
    word: &Word,
    level: u32,
    expected: &[Word],
) -> Result<(bool, String), SuiteError> {
    let Some(actual) = solver.table().level_sections(word, level).map_err(SolverError::from)? else {
        return Ok((false, format!("{word} moves a vertex of level {level}")));
    };
    let mut ok = actual.len() == expected.len();
    for (a, e) in actual.iter().zip(expected) {
        ok &= solver.are_equal(a, e)?;
    }
    Ok((ok, render(&actual)))
}

fn padded(level: u32, tail: &[&str]) -> Vec<Word> {
    let n = 1usize << level;
    let mut out = vec![Word::identity(); n - tail.len()];
    out.extend(tail.iter().map(|s| w(s)));
    out
}

fn relations() -> Result<Vec<Item>, SuiteError> {
    let mut solver = Solver::for_l();
    let mut items = Vec::new();
    for (id, rel) in [("a2", "a*a"), ("b2", "b*b"), ("c2", "c*c"), ("d2", "d*d"), ("bcd", "b*c*d")] {
        let raw = crate::words::parse_word(rel).map_err(SolverError::from)?;
        // decompose the unreduced word so the check does not rely on the normal form
        let d = solver.table().decompose(&raw).map_err(SolverError::from)?;
        let ok = !d.swap && solver.is_identity(&d.sections[0])? && solver.is_identity(&d.sections[1])?;
        items.push(Item::check(id, format!("{rel} = 1"), ok, d.to_string()));
    }
    Ok(items)
}

fn decomposition_matches(
    solver: &mut Solver,
    lhs: &Word,
    s0: &Word,
    s1: &Word,
    swap: bool,
) -> Result<(bool, String), SuiteError> {
    let d = solver.table().decompose(lhs).map_err(SolverError::from)?;
    let ok = d.swap == swap && solver.are_equal(&d.sections[0], s0)? && solver.are_equal(&d.sections[1], s1)?;
    Ok((ok, d.to_string()))
}

fn commutators() -> Result<Vec<Item>, SuiteError> {
    let mut solver = Solver::for_l();
    let comm = Word::commutator;
    let (a, b, c, d, x) = (w("a"), w("b"), w("c"), w("d"), w("x"));
    let xa = comm(&x, &a);
    let xad = comm(&xa, &d);
    let cases = [
        ("xa", "[x,a] = (x^-1, x)", xa.clone(), w("x^-1"), w("x")),
        ("xd", "[x,d] = (x^-1*b*x, b)", comm(&x, &d), w("x^-1*b*x"), w("b")),
        ("xad", "[[x,a],d] = (1, [x,b])", xad.clone(), Word::identity(), comm(&x, &b)),
        ("xadb", "[[[x,a],d],b] = (1, [[x,b],c])", comm(&xad, &b), Word::identity(), comm(&comm(&x, &b), &c)),
    ];
    let mut items = Vec::new();
    for (id, desc, lhs, s0, s1) in cases {
        let (ok, witness) = decomposition_matches(&mut solver, &lhs, &s0, &s1, false)?;
        items.push(Item::check(id, desc, ok, witness));
    }
    Ok(items)
}

/// The 26 one-step rewritings `lhs = (s0, s1)·a^swap` used to analyse
/// words without `a`.
pub const REWRITING_TABLE: [(&str, &str, &str, bool); 26] = [
    ("b*x", "a", "c*x", true),
    ("c*x", "a", "d*x", true),
    ("d*x", "1", "b*x", true),
    ("x^-1*b", "x^-1*c", "a", true),
    ("x^-1*c", "x^-1*d", "a", true),
    ("x^-1*d", "x^-1*b", "1", true),
    ("x*b", "c", "x*a", true),
    ("x*c", "d", "x*a", true),
    ("x*d", "b", "x", true),
    ("b*x^-1", "a*x^-1", "c", true),
    ("c*x^-1", "a*x^-1", "d", true),
    ("d*x^-1", "x^-1", "b", true),
    ("x*b*x", "c*x", "x*a", false),
    ("x^-1*b*x^-1", "x^-1*c", "a*x^-1", false),
    ("x*b*x^-1", "c", "x*a*x^-1", false),
    ("x^-1*b*x", "x^-1*c*x", "a", false),
    ("x*c*x", "d*x", "x*a", false),
    ("x^-1*c*x^-1", "x^-1*d", "a*x^-1", false),
    ("x*c*x^-1", "d", "x*a*x^-1", false),
    ("x^-1*c*x", "x^-1*d*x", "a", false),
    ("x*d*x", "b*x", "x", false),
    ("x^-1*d*x^-1", "x^-1*b", "x^-1", false),
    ("x*d*x^-1", "b", "1", false),
    ("x^-1*d*x", "x^-1*b*x", "1", false),
    ("x^2", "x", "x", false),
    ("x^-2", "x^-1", "x^-1", false),
];

fn rewriting_table() -> Result<Vec<Item>, SuiteError> {
    let mut solver = Solver::for_l();
    let mut items = Vec::new();
    for (lhs, s0, s1, swap) in REWRITING_TABLE {
        let (ok, witness) = decomposition_matches(&mut solver, &w(lhs), &w(s0), &w(s1), swap)?;
        let rhs = format!("({}, {}){}", w(s0), w(s1), if swap { "a" } else { "" });
        items.push(Item::check(lhs, format!("{lhs} = {rhs}"), ok, witness));
    }
    Ok(items)
}

fn contraction(cfg: &SuiteConfig) -> Vec<Item> {
    let l = contraction_profile(Ambient::L, 3, cfg.contraction_max_len);
    let g = contraction_profile(Ambient::G, 1, cfg.g_contraction_max_len);
    let summary = |r: &crate::automaton::ContractionReport| {
        let mut s = format!("{} words, {} fix the level, {} core hits", r.words, r.stabilizing, r.core_hits.len());
        if let Some(v) = r.violations.first() {
            s.push_str(&format!(", first violation {} -> {}", v.word, render(&v.sections)));
        }
        s
    };
    vec![
        Item::check(
            "l-three-step",
            format!(
                "every word of length <= {} fixing level 3 has 8 strictly shorter sections there, except core words",
                cfg.contraction_max_len
            ),
            l.passed(),
            summary(&l),
        ),
        Item::check(
            "g-one-step",
            format!(
                "every word in a,b,c,d of length <= {} fixing level 1 has sections of length <= |v|/2 + 1",
                cfg.g_contraction_max_len
            ),
            g.passed(),
            summary(&g),
        ),
    ]
}

fn self_replication() -> Result<Vec<Item>, SuiteError> {
    let mut solver = Solver::for_l();
    let mut items = Vec::new();
    for g in Generator::ALL {
        let gw = Word::gen(g);
        for v in ["1", "0"] {
            let vertex: Vertex = v.parse().expect("static vertex");
            let lifted = lift(&gw, &vertex);
            let fixes = solver.table().stabilizes_level(&lifted, 1).map_err(SolverError::from)?;
            let section = solver.table().section(&lifted, &vertex).map_err(SolverError::from)?;
            let ok = fixes && solver.are_equal(&section, &gw)?;
            items.push(Item::check(
                format!("{g}@{v}"),
                format!("lift of {g} at {v} fixes level 1 with section {g} at {v}"),
                ok,
                format!("{lifted}, section {section}"),
            ));
        }
    }
    Ok(items)
}

fn branch_elements() -> Result<Vec<Item>, SuiteError> {
    let mut solver = Solver::for_l();
    let xa = w("x*a");
    let aba = w("a*b*a");
    let xa2 = xa.pow(2);
    let xa4 = xa.pow(4);
    let shifted = Word::commutator(&xa, &aba);
    let theta = xa2.mul(&shifted);
    let theta2 = theta.pow(2);
    let eta2 = aba.mul(&theta2).mul(&aba);
    let mu2 = w("x^4");
    let c2 = Word::commutator(&mu2, &w("b"));
    let rho3 = lift(&w("b"), &"1".parse().expect("vertex"));
    let c3 = Word::commutator(&xa4, &rho3);
    let eta3 = lift(&eta2, &"1".parse().expect("vertex"));

    let cases: Vec<(&str, String, Word, u32, Vec<Word>)> = vec![
        ("xa4", "(xa)^4 = (1, x^4)".into(), xa4.clone(), 1, padded(1, &["x^4"])),
        ("xa2", "(xa)^2 = (1, x^2) = (1,1,x,x) on level 2".into(), xa2.clone(), 2, padded(2, &["x", "x"])),
        (
            "shifted-commutator",
            "[xa, aba] = (1, [x,a]) = (1,1,x^-1,x) on level 2".into(),
            shifted,
            2,
            padded(2, &["x^-1", "x"]),
        ),
        ("theta", "(xa)^2 [xa, aba] = (1,1,1,x^2) on level 2".into(), theta, 2, padded(2, &["x^2"])),
        ("theta-squared", "its square is (1,1,1,x^4) on level 2".into(), theta2, 2, padded(2, &["x^4"])),
        (
            "n2-commutator",
            format!("[x^4, b] = {} on level 3", "(1,1,1,1,x^-1,x,x^-1*b*x,b)"),
            c2.clone(),
            3,
            padded(3, &["x^-1", "x", "x^-1*b*x", "b"]),
        ),
        (
            "n2-square",
            "[x^4, b]^2 = (1,1,1,1,x^-2,x^2,1,1) on level 3".into(),
            c2.pow(2),
            3,
            padded(3, &["x^-2", "x^2", "1", "1"]),
        ),
        ("n2-eta", "aba (theta)^2 aba = (1,1,x^4,1) on level 2".into(), eta2.clone(), 2, padded(2, &["x^4", "1"])),
        (
            "n2-product",
            "[x^4, b]^2 times it is (1,1,1,1,1,x^4,1,1) on level 3".into(),
            c2.pow(2).mul(&eta2),
            3,
            padded(3, &["x^4", "1", "1"]),
        ),
        (
            "n3-rho",
            format!("the lift of b at 1 is {rho3}, with section b at 1"),
            rho3.clone(),
            1,
            vec![Word::identity(), w("b")],
        ),
        (
            "n3-commutator",
            "[(xa)^4, rho] ends in (x^-1, x, x^-1*b*x, b) on level 4".into(),
            c3.clone(),
            4,
            padded(4, &["x^-1", "x", "x^-1*b*x", "b"]),
        ),
        (
            "n3-square",
            "[(xa)^4, rho]^2 ends in (x^-2, x^2, 1, 1) on level 4".into(),
            c3.pow(2),
            4,
            padded(4, &["x^-2", "x^2", "1", "1"]),
        ),
        (
            "n3-eta",
            "the lift at 1 of the level-2 element is (1,1,1,1,1,1,x^4,1) on level 3".into(),
            eta3.clone(),
            3,
            padded(3, &["x^4", "1"]),
        ),
        (
            "n3-product",
            "[(xa)^4, rho]^2 times it ends in (x^4, 1, 1) on level 4".into(),
            c3.pow(2).mul(&eta3),
            4,
            padded(4, &["x^4", "1", "1"]),
        ),
    ];
    let mut items = Vec::new();
    for (id, desc, word, level, expected) in cases {
        let (ok, witness) = sections_match(&mut solver, &word, level, &expected)?;
        items.push(Item::check(id, desc, ok, witness));
    }
    Ok(items)
}

/// Group generated by the restrictions of level-`(n+1)` permutations to
/// subtree `i`.
fn projection(gens: &[crate::permgroup::Permutation], n: u32, i: u8) -> Result<Option<GroupHandle>, QuotientError> {
    let Some(restricted) = gens.iter().map(|p| restrict_to_subtree(p, n + 1, i)).collect::<Option<Vec<_>>>() else {
        return Ok(None);
    };
    Ok(Some(GroupHandle::with_cap(1 << n, restricted, 1 << n)?))
}

fn subdirect(cfg: &SuiteConfig) -> Result<Vec<Item>, SuiteError> {
    let mut q = QuotientBuilder::new(RecursionTable::l_group());
    let tilde = [w("a"), w("x^-1*b*x"), w("x^-1*c*x"), w("x^-1*d*x")];
    let mut items = Vec::new();
    for n in 1..=cfg.subdirect_max_level {
        let a = q.subgroup(&SubgroupSpec::a(), n + 1)?;
        let targets = [("left", q.generated_by(&tilde, n)?), ("right", q.ambient(Ambient::G, n)?)];
        for (i, (side, target)) in targets.into_iter().enumerate() {
            let (ok, witness) = match projection(a.generators(), n, i as u8)? {
                None => (false, "A moves a first-level vertex".to_string()),
                Some(p) => (
                    target.contains_group(&p).map_err(QuotientError::from)? && p.order() == target.order(),
                    format!("projection order {}, target order {}", p.order(), target.order()),
                ),
            };
            let what = if i == 0 { "<a, x^-1*b*x, x^-1*c*x, x^-1*d*x>" } else { "G" };
            items.push(Item::check(
                format!("{side}-level{n}"),
                format!("{side} projection of A from level {} is onto the level-{n} image of {what}", n + 1),
                ok,
                witness,
            ));
        }
    }
    Ok(items)
}

fn exp_x_violation(table: &RecursionTable, word: &Word) -> bool {
    let d = table.decompose(word).expect("full alphabet");
    word.exp_x() != d.sections[0].exp_x() + d.sections[1].exp_x()
}

fn exp_x(cfg: &SuiteConfig) -> Vec<Item> {
    let table = RecursionTable::l_group();
    let mut checked = 0u64;
    let mut first = None;
    for_each_normal_form(cfg.exp_x_exhaustive_len, Alphabet::Full, |word| {
        checked += 1;
        if first.is_none() && exp_x_violation(&table, word) {
            first = Some(word.clone());
        }
    });
    let exhaustive = Item::check(
        "exhaustive",
        format!("exp_x(w) = exp_x(w0) + exp_x(w1) for all reduced words of length <= {}", cfg.exp_x_exhaustive_len),
        first.is_none(),
        match &first {
            Some(v) => format!("violated by {v}"),
            None => format!("{checked} words"),
        },
    );
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut bad = None;
    for _ in 0..cfg.random_samples {
        let word = random_word(&mut rng, cfg.exp_x_random_len, Alphabet::Full);
        if exp_x_violation(&table, &word) {
            bad = Some(word);
            break;
        }
    }
    let random = Item::check(
        "random",
        format!("the same for {} random words of length <= {}", cfg.random_samples, cfg.exp_x_random_len),
        bad.is_none(),
        match &bad {
            Some(v) => format!("violated by {v}"),
            None => format!("seed {:#x}", cfg.seed),
        },
    );
    vec![exhaustive, random]
}

fn abelianization(cfg: &SuiteConfig) -> Result<Vec<Item>, SuiteError> {
    let mut solver = Solver::for_l();
    let relators = match solver.find_relators(cfg.relator_max_len) {
        Ok(r) => Ok(r),
        Err(SolverError::RelatorWithExpX(r)) => Err(r),
        Err(e) => return Err(e.into()),
    };
    let relator_item = Item::check(
        "relators",
        format!("every trivial reduced word of length <= {} has exp_x = 0", cfg.relator_max_len),
        relators.is_ok(),
        match &relators {
            Ok(r) => format!("{} relators", r.len()),
            Err(bad) => format!("{bad} is trivial with exp_x = {}", bad.exp_x()),
        },
    );
    let mut by_exp = true;
    let mut by_action = true;
    let mut first_bad = String::new();
    let action = solver.table().level_action(cfg.x_power_level).map_err(SolverError::from)?;
    for k in 1..=cfg.x_power_max {
        let p = Word::x_pow(k);
        let infinite = matches!(solver.element_order(&p)?, OrderResult::Infinite(_));
        if !(p.exp_x() != 0 && infinite && !solver.is_identity(&p)?) && by_exp {
            by_exp = false;
            first_bad = format!("x^{k}");
        }
        if action.act(&p).is_identity() && by_action {
            by_action = false;
            first_bad = format!("x^{k} acts trivially on level {}", cfg.x_power_level);
        }
    }
    Ok(vec![
        relator_item,
        Item::check(
            "x-powers-exp",
            format!("x^k is nontrivial for 1 <= k <= {} by its exponent sum", cfg.x_power_max),
            by_exp,
            first_bad.clone(),
        ),
        Item::check(
            "x-powers-action",
            format!("x^k moves a vertex of level {} for 1 <= k <= {}", cfg.x_power_level, cfg.x_power_max),
            by_action,
            first_bad,
        ),
    ])
}

fn index_p(cfg: &SuiteConfig) -> Result<Vec<Item>, SuiteError> {
    let mut q = QuotientBuilder::new(RecursionTable::l_group());
    let mut items = Vec::new();
    let mut values: Vec<BigUint> = Vec::new();
    for &n in &cfg.index_levels {
        let idx = q.index_in_ambient(&SubgroupSpec::p(), n)?;
        items.push(Item::check(
            format!("level{n}"),
            format!("index of the image of P in the image of L on level {n} is <= 128 (finite-level evidence)"),
            idx <= BigUint::from(128u32),
            idx.to_string(),
        ));
        values.push(idx);
    }
    let monotone = values.windows(2).all(|p| p[0] <= p[1]);
    let shown: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    items.push(Item::check("monotone", "the indices do not decrease with the level", monotone, shown.join(", ")));
    Ok(items)
}

fn transitivity(cfg: &SuiteConfig) -> Result<Vec<Item>, SuiteError> {
    let table = RecursionTable::l_group();
    let mut items = Vec::new();
    let gens: Vec<Word> = Generator::ALL.iter().map(|&g| Word::gen(g)).collect();
    for n in 1..=cfg.levels {
        let action = table.level_action(n).map_err(SolverError::from)?;
        let perms: Vec<_> = gens.iter().map(|g| action.act(g)).collect();
        let orbit_size = orbit(&perms, 0).len();
        let x = action.act(&w("x"));
        let cycles = x.cycles();
        let single = cycles.len() == 1 && cycles[0].len() == 1 << n;
        let ok = orbit_size == 1 << n && single && x.order() == 1 << n;
        items.push(Item::check(
            format!("level{n}"),
            format!("L is transitive on level {n} and x acts as one {}-cycle of order {}", 1u64 << n, 1u64 << n),
            ok,
            format!("orbit {orbit_size}, x order {}", x.order()),
        ));
    }
    Ok(items)
}

fn rist(cfg: &SuiteConfig) -> Result<Vec<Item>, SuiteError> {
    let n = cfg.rist_level;
    let mut q = QuotientBuilder::new(RecursionTable::l_group());
    let l = q.ambient(Ambient::L, n)?;
    let mut items = Vec::new();
    for depth in 1..=2u32 {
        for v in Vertex::level(depth) {
            let r = rist_image(&l, n, &v)?;
            items.push(Item::check(
                format!("vertex{v}"),
                format!("elements of the level-{n} image of L fixing everything outside {v} form a nontrivial group"),
                !r.is_trivial(),
                format!("order {}", r.order()),
            ));
        }
    }
    Ok(items)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(canonical_suite("table1"), Some("rewriting-table"));
        assert_eq!(canonical_suite("rist"), Some("rist"));
        assert_eq!(canonical_suite("all"), Some("all"));
        assert_eq!(canonical_suite("nope"), None);
        assert!(matches!(run_suite("nope", &SuiteConfig::default()), Err(SuiteError::UnknownSuite(_))));
    }

    #[test]
    fn cheap_suites_pass() {
        let cfg = SuiteConfig::default();
        for s in ["relations", "commutators", "rewriting-table", "self-replication", "branch-elements"] {
            let r = run_suite(s, &cfg).unwrap();
            assert!(r.passed(), "{r}");
        }
        assert_eq!(run_suite("table1", &cfg).unwrap().count(Status::Pass), 26);
    }

    #[test]
    fn report_round_trips() {
        let r = run_suite("relations", &SuiteConfig::default()).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
