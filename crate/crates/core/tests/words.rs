use std::collections::HashMap;

use proptest::prelude::*;
use selfsim::permgroup::Permutation;
use selfsim::wordproblem::Solver;
use selfsim::words::{concat_reduce, for_each_normal_form, normal_forms, reduce, Alphabet, Generator, Syllable, Word};
use selfsim::wreath::{LevelAction, RecursionTable};

use Generator::*;

fn level(n: u32) -> LevelAction {
    RecursionTable::l_group().level_action(n).unwrap()
}

/// Raw syllables, including zero and large exponents on involutions.
fn raw_word(max_syllables: usize) -> impl Strategy<Value = Word> {
    let syl = (0usize..5, -3i64..=3).prop_map(|(g, e)| Syllable::new(Generator::ALL[g], e));
    prop::collection::vec(syl, 0..=max_syllables).prop_map(Word::from_syllables)
}

#[test]
fn reduce_idempotent_on_all_raw_words_up_to_length_8() {
    let letters = [(A, 1), (B, 1), (C, 1), (D, 1), (X, 1), (X, -1)];
    let mut count = 0u64;
    let mut stack: Vec<Vec<Syllable>> = vec![Vec::new()];
    while let Some(seq) = stack.pop() {
        let word = Word::from_syllables(seq.clone());
        let r = reduce(&word);
        assert!(r.is_reduced(), "{word}");
        assert_eq!(reduce(&r), r, "{word}");
        assert_eq!(r.exp_x(), word.exp_x());
        assert_eq!(r.exp_a().rem_euclid(2), word.exp_a().rem_euclid(2));
        count += 1;
        if seq.len() < 8 {
            for (g, e) in letters {
                let mut next = seq.clone();
                next.push(Syllable::new(g, e));
                stack.push(next);
            }
        }
    }
    assert_eq!(count, (0..=8).map(|k| 6u64.pow(k)).sum::<u64>());
}

#[test]
fn normal_forms_up_to_length_12_are_fixed_by_reduce() {
    let mut count = 0u64;
    for_each_normal_form(12, Alphabet::Full, |w| {
        count += 1;
        assert!(w.is_reduced());
        assert_eq!(&reduce(w), w);
    });
    assert!(count > 10_000_000, "{count}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reduce_idempotent_on_random_raw_words(w in raw_word(100)) {
        let r = reduce(&w);
        prop_assert!(r.is_reduced());
        prop_assert_eq!(reduce(&r), r.clone());
        prop_assert_eq!(r.exp_x(), w.exp_x());
        prop_assert_eq!(r.exp_a().rem_euclid(2), w.exp_a().rem_euclid(2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn reduce_preserves_the_level_8_action(w in raw_word(40)) {
        let act = level(8);
        prop_assert_eq!(act.act(&w), act.act(&reduce(&w)));
    }

    #[test]
    fn exponent_sums_add_under_concatenation(u in raw_word(30), v in raw_word(30)) {
        let (u, v) = (reduce(&u), reduce(&v));
        let uv = concat_reduce(&u, &v);
        prop_assert_eq!(uv.exp_x(), u.exp_x() + v.exp_x());
        prop_assert_eq!(uv.exp_a().rem_euclid(2), (u.exp_a() + v.exp_a()).rem_euclid(2));
    }

    #[test]
    fn equal_normal_forms_act_identically(w in raw_word(30), padding in prop::collection::vec(0usize..5, 0..6)) {
        // insert g g^-1 pairs at the front; the normal form must not change
        let mut syllables = Vec::new();
        for g in &padding {
            let g = Generator::ALL[*g];
            syllables.push(Syllable::new(g, 1));
            syllables.push(Syllable::new(g, -1));
        }
        syllables.extend_from_slice(w.syllables());
        let padded = Word::from_syllables(syllables);
        prop_assert_eq!(reduce(&padded), reduce(&w));
        let act = level(8);
        prop_assert_eq!(act.act(&padded), act.act(&w));
    }
}

/// Distinct normal forms of length <= 4 either act differently on level 10,
/// or are flagged. Flagged pairs must be equal in the group: the word problem
/// and the level-12 action both confirm them.
#[test]
fn short_normal_forms_are_separated_by_the_action_or_flagged() {
    let act = level(10);
    let deep = level(12);
    let words = normal_forms(4, Alphabet::Full);
    let mut buckets: HashMap<Permutation, Vec<Word>> = HashMap::new();
    buckets.entry(Permutation::identity(1 << 10)).or_default().push(Word::identity());
    for w in words {
        buckets.entry(act.act(&w)).or_default().push(w);
    }
    let mut solver = Solver::for_l();
    let mut flagged = Vec::new();
    for ws in buckets.values() {
        for u in &ws[1..] {
            assert!(solver.are_equal(&ws[0], u).unwrap(), "{} and {u} act alike on level 10 but differ", ws[0]);
            assert_eq!(deep.act(&ws[0]), deep.act(u));
            flagged.push((ws[0].to_string(), u.to_string()));
        }
    }
    // x^2 = (x, x) commutes with a, so the covering group is not faithful
    // even at this length
    let x2: Word = "x^2".parse().unwrap();
    assert!(solver.are_equal(&x2, &"a*x^2*a".parse().unwrap()).unwrap());
    assert!(flagged.iter().any(|(p, q)| (p == "x^2" && q == "a*x^2*a") || (q == "x^2" && p == "a*x^2*a")));
    assert_eq!(flagged.len(), 76);
}
