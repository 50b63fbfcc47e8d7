use proptest::prelude::*;
use selfsim::automaton::{is_bounded, nucleus, MooreAutomaton, NucleusConfig, NucleusResult, State};
use selfsim::wordproblem::Solver;
use selfsim::words::{Generator, Word};
use selfsim::wreath::{RecursionTable, Vertex};

fn automaton(spec: &[(bool, usize, usize)], names: &[String]) -> MooreAutomaton {
    let states = spec
        .iter()
        .zip(names)
        .map(|(&(swap, t0, t1), name)| State { name: name.clone(), swap, next: [t0, t1] })
        .collect();
    MooreAutomaton::new(states).unwrap()
}

fn random_automaton() -> impl Strategy<Value = Vec<(bool, usize, usize)>> {
    (1usize..=4).prop_flat_map(|n| prop::collection::vec((any::<bool>(), 0..n, 0..n), n))
}

/// Number of walks of length `n` through nontrivial states, summed over
/// start states, saturating.
fn active_walks(m: &MooreAutomaton, n: usize) -> u128 {
    let trivial = m.trivial_states();
    let alive: Vec<bool> = (0..m.len()).map(|i| !trivial.contains(&i)).collect();
    let mut count: Vec<u128> = alive.iter().map(|&a| a as u128).collect();
    for _ in 0..n {
        count = (0..m.len())
            .map(|s| {
                if !alive[s] {
                    return 0;
                }
                m.states()[s].next.iter().fold(0u128, |acc, &t| acc.saturating_add(count[t]))
            })
            .collect();
    }
    count.iter().fold(0u128, |acc, &c| acc.saturating_add(c))
}

/// Bounded activity means the walk counts are eventually periodic, with
/// period dividing lcm(1..=4) = 12 for automata of at most four states.
fn bounded_by_walk_counts(m: &MooreAutomaton) -> bool {
    let window = |start: usize| (start..start + 12).map(|n| active_walks(m, n)).max().unwrap();
    window(48) == window(240)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn boundedness_matches_walk_growth(spec in random_automaton()) {
        let names: Vec<String> = (0..spec.len()).map(|i| format!("s{i}")).collect();
        let m = automaton(&spec, &names);
        prop_assert_eq!(is_bounded(&m).bounded, bounded_by_walk_counts(&m));
    }

    #[test]
    fn boundedness_ignores_renaming_and_unreachable_trivial_states(
        spec in random_automaton(),
        order in Just(()).prop_perturb(|_, mut rng| { let mut v: Vec<usize> = (0..4).collect(); v.sort_by_key(|_| rng.next_u32()); v }),
        extra in 0usize..3,
    ) {
        let n = spec.len();
        let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let original = is_bounded(&automaton(&spec, &names));
        // relabel: state i moves to position perm[i]
        let perm: Vec<usize> = {
            let mut p: Vec<usize> = order.into_iter().filter(|&i| i < n).collect();
            p.truncate(n);
            p
        };
        let mut permuted = vec![(false, 0, 0); n];
        let mut new_names = vec![String::new(); n];
        for (i, &(swap, t0, t1)) in spec.iter().enumerate() {
            permuted[perm[i]] = (swap, perm[t0], perm[t1]);
            new_names[perm[i]] = format!("q{}", 7 * i + 3);
        }
        // unreachable trivial states pointing at each other
        for k in 0..extra {
            permuted.push((false, n, n + extra - 1 - k));
            new_names.push(format!("dead{k}"));
        }
        let renamed = is_bounded(&automaton(&permuted, &new_names));
        prop_assert_eq!(original.bounded, renamed.bounded);
        prop_assert_eq!(original.cycles.len(), renamed.cycles.len());
        prop_assert_eq!(original.witness.is_some(), renamed.witness.is_some());
    }

    #[test]
    fn trivial_states_are_a_fixpoint(spec in random_automaton()) {
        let names: Vec<String> = (0..spec.len()).map(|i| format!("s{i}")).collect();
        let m = automaton(&spec, &names);
        let trivial = m.trivial_states();
        for (i, s) in m.states().iter().enumerate() {
            if trivial.contains(&i) {
                prop_assert!(!s.swap);
                prop_assert!(s.next.iter().all(|t| trivial.contains(t)));
                // and the state really acts trivially
                for len in 1..=6usize {
                    for input in 0..1u32 << len {
                        let bits: Vec<u8> = (0..len).map(|k| (input >> k) as u8 & 1).collect();
                        prop_assert_eq!(m.act(i, &bits), bits.clone());
                    }
                }
            } else {
                // some active state is reachable
                let mut seen = vec![false; m.len()];
                let mut stack = vec![i];
                let mut found = false;
                while let Some(q) = stack.pop() {
                    if seen[q] { continue; }
                    seen[q] = true;
                    found |= m.states()[q].swap;
                    stack.extend(m.states()[q].next);
                }
                prop_assert!(found);
            }
        }
    }
}

#[test]
fn automaton_simulation_matches_recursion() {
    let t = RecursionTable::l_group();
    let m = MooreAutomaton::from_recursion(&t).unwrap();
    for g in Generator::ALL {
        let state = m.state_index(&g.symbol().to_string()).unwrap();
        for depth in 1..=8 {
            for v in Vertex::level(depth) {
                let image = t.act_vertex(&Word::gen(g), &v).unwrap();
                assert_eq!(m.act(state, v.letters()), image.letters(), "{g:?} at {v}");
            }
        }
    }
    assert_eq!(m.to_recursion().unwrap(), t);
}

#[test]
fn classifier_examples() {
    assert!(is_bounded(&MooreAutomaton::l_automaton()).bounded);
    assert!(is_bounded(&MooreAutomaton::from_recursion(&RecursionTable::g_group()).unwrap()).bounded);
    let swap = is_bounded(&MooreAutomaton::parse("e: swap -> e e").unwrap());
    assert!(!swap.bounded);
    assert!(swap.witness.unwrap().to_string().contains("intersect"));
    assert!(is_bounded(&MooreAutomaton::parse("1: id -> 1 1\nx: swap -> 1 x").unwrap()).bounded);
}

fn nucleus_words(t: &RecursionTable) -> Vec<Word> {
    match nucleus(t, &NucleusConfig::default()).unwrap() {
        NucleusResult::Nucleus(ws) => ws,
        NucleusResult::Diverged { candidates } => panic!("diverged after {candidates}"),
    }
}

#[test]
fn nuclei_are_section_and_inverse_closed() {
    for (t, size) in [(RecursionTable::g_group(), 5), (RecursionTable::l_group(), 16)] {
        let ws = nucleus_words(&t);
        assert_eq!(ws.len(), size);
        let mut solver = Solver::new(t.clone(), Default::default());
        let mut member = |u: &Word| ws.iter().any(|n| solver.are_equal(n, u).unwrap());
        for u in &ws {
            let d = t.decompose(u).unwrap();
            assert!(member(&d.sections[0]) && member(&d.sections[1]), "sections of {u}");
            assert!(member(&u.inverse()), "inverse of {u}");
        }
        for g in t.generators() {
            let d = t.decompose(&Word::gen(g)).unwrap();
            assert!(member(&d.sections[0]) && member(&d.sections[1]), "sections of {g:?}");
        }
    }
}

#[test]
fn l_nucleus_is_the_core_with_a() {
    let names: Vec<String> = nucleus_words(&RecursionTable::l_group()).iter().map(|w| w.to_string()).collect();
    let mut expected: Vec<String> = selfsim::wordproblem::CORE_WORDS.iter().map(|s| s.to_string()).collect();
    expected.push("a".into());
    let mut sorted = names.clone();
    sorted.sort();
    expected.sort();
    assert_eq!(sorted, expected);
}

#[test]
fn nucleus_elements_are_distinct_on_level_8() {
    let t = RecursionTable::l_group();
    let ws = nucleus_words(&t);
    let mut images: Vec<_> = ws.iter().map(|u| t.act_level(u, 8).unwrap()).collect();
    images.sort();
    images.dedup();
    assert_eq!(images.len(), ws.len());
}

#[test]
fn dot_round_trip_is_stable() {
    let m = MooreAutomaton::l_automaton();
    let again = MooreAutomaton::parse(
        "alphabet 2\nstate 1 perm id to 1 1\nstate a perm swap to 1 1\nstate b perm id to a c\n\
         state c perm id to a d\nstate d perm id to 1 b\nstate x perm swap to 1 x\n",
    )
    .unwrap();
    assert_eq!(m.to_dot(), again.to_dot());
    let dot = m.to_dot();
    assert!(dot.contains("\"x\" [shape=doublecircle];"));
    assert!(dot.contains("\"b\" -> \"c\" [label=\"1\"];"));
}
