use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selfsim::permgroup::{
    derived_subgroup, forget_last_level, index, normal_closure, orbit, restrict_to_subtree, rist_image, GroupHandle,
    Permutation, QuotientBuilder, SubgroupSpec,
};
use selfsim::wordproblem::Solver;
use selfsim::words::{random_word, Alphabet, Word};
use selfsim::wreath::{RecursionTable, Vertex};
use selfsim::Ambient;

fn p(degree: usize, cycles: &str) -> Permutation {
    Permutation::from_cycles(degree, cycles).unwrap()
}

/// Every element, by closing the generators under right multiplication.
fn enumerate(degree: usize, gens: &[Permutation], limit: usize) -> HashSet<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.then(s);
            if seen.insert(h.clone()) {
                assert!(seen.len() <= limit, "group larger than {limit}");
                queue.push_back(h);
            }
        }
    }
    seen
}

fn cyclic(n: usize) -> (usize, Vec<Permutation>) {
    let cycle: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    (n, vec![p(n, &format!("({})", cycle.join(" ")))])
}

fn dihedral(n: usize) -> (usize, Vec<Permutation>) {
    let (_, rot) = cyclic(n);
    let refl = Permutation::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect()).unwrap();
    (n, vec![rot[0].clone(), refl])
}

fn corpus() -> Vec<(String, usize, Vec<Permutation>)> {
    let mut out = Vec::new();
    for n in [1, 2, 3, 5, 8, 12] {
        let (d, g) = cyclic(n);
        out.push((format!("C{n}"), d, g));
    }
    for n in [3, 4, 5, 8, 10] {
        let (d, g) = dihedral(n);
        out.push((format!("D{n}"), d, g));
    }
    out.push(("S4".into(), 4, vec![p(4, "(0 1)"), p(4, "(0 1 2 3)")]));
    out.push(("A4".into(), 4, vec![p(4, "(0 1 2)"), p(4, "(1 2 3)")]));
    out.push(("S5".into(), 5, vec![p(5, "(0 1)"), p(5, "(0 1 2 3 4)")]));
    out.push(("C2xC2 on 4".into(), 4, vec![p(4, "(0 1)(2 3)"), p(4, "(0 2)(1 3)")]));
    let mut q = QuotientBuilder::new(RecursionTable::l_group());
    for n in 1..=4 {
        for ambient in [Ambient::G, Ambient::L] {
            let h = q.ambient(ambient, n).unwrap();
            if h.order() <= BigUint::from(5000u32) {
                out.push((format!("{ambient} level {n}"), 1 << n, h.generators().to_vec()));
            }
        }
    }
    out
}

#[test]
fn bsgs_order_and_membership_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut names = Vec::new();
    for (name, degree, gens) in corpus() {
        let elements = enumerate(degree, &gens, 5000);
        let h = GroupHandle::new(degree, gens.clone()).unwrap();
        assert_eq!(h.order(), BigUint::from(elements.len()), "{name}");
        for e in &elements {
            assert!(h.is_member(e).unwrap(), "{name}: {e}");
        }
        // random permutations of the same degree, members or not
        for _ in 0..500 {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            for i in (1..degree).rev() {
                images.swap(i, rng.gen_range(0..=i));
            }
            let r = Permutation::from_images(images).unwrap();
            assert_eq!(h.is_member(&r).unwrap(), elements.contains(&r), "{name}: {r}");
        }
        names.push(name);
    }
    // the level-4 image of G has order 2^12 and is in the corpus
    assert!(names.iter().any(|n| n == "G level 4"), "{names:?}");
    assert!(names.iter().any(|n| n == "L level 3"), "{names:?}");
}

#[test]
fn kernel_examples() {
    assert_eq!(GroupHandle::new(2, vec![p(2, "(0 1)")]).unwrap().order(), 2u32.into());
    assert_eq!(GroupHandle::new(4, vec![p(4, "(0 1 2 3)")]).unwrap().order(), 4u32.into());
    let s3 = GroupHandle::new(3, vec![p(3, "(0 1)"), p(3, "(0 1 2)")]).unwrap();
    let closure = normal_closure(&s3, &[p(3, "(0 1)")]).unwrap();
    assert_eq!(closure.order(), 6u32.into());
    assert!(normal_closure(&s3, &[Permutation::identity(3)]).unwrap().is_trivial());
    assert_eq!(derived_subgroup(&s3).unwrap().order(), 3u32.into());
    let c4 = GroupHandle::new(4, vec![p(4, "(0 1 2 3)")]).unwrap();
    assert!(derived_subgroup(&c4).unwrap().is_trivial());
    let s4 = GroupHandle::new(4, vec![p(4, "(0 1)"), p(4, "(0 1 2 3)")]).unwrap();
    let a4 = GroupHandle::new(4, vec![p(4, "(0 1 2)"), p(4, "(1 2 3)")]).unwrap();
    assert_eq!(index(&s4, &a4).unwrap(), 2u32.into());
    assert_eq!(index(&s4, &s4).unwrap(), 1u32.into());
    assert!(!a4.is_member(&p(4, "(0 1)")).unwrap());
    assert!(index(&a4, &s4).is_err());
}

/// Brute-force normal closure and derived subgroup on small groups.
#[test]
fn closures_match_enumeration() {
    for (name, degree, gens) in corpus() {
        let elements = enumerate(degree, &gens, 5000);
        if elements.len() > 200 {
            continue;
        }
        let g = GroupHandle::new(degree, gens.clone()).unwrap();
        let commutators: Vec<Permutation> = elements
            .iter()
            .flat_map(|x| elements.iter().map(move |y| x.commutator(y)))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        let derived = enumerate(degree, &commutators, 5000);
        assert_eq!(derived_subgroup(&g).unwrap().order(), BigUint::from(derived.len()), "{name}");
        if let Some(first) = gens.first() {
            let conjugates: Vec<Permutation> = elements.iter().map(|x| first.conjugate_by(x)).collect();
            let closure = enumerate(degree, &conjugates, 5000);
            let nc = normal_closure(&g, std::slice::from_ref(first)).unwrap();
            assert_eq!(nc.order(), BigUint::from(closure.len()), "{name}");
            for s in g.generators() {
                for h in nc.generators() {
                    assert!(nc.is_member(&h.conjugate_by(s)).unwrap());
                }
            }
        }
    }
}

#[test]
fn orbit_examples() {
    let t = RecursionTable::l_group();
    let x3 = t.act_level(&"x".parse().unwrap(), 3).unwrap();
    assert_eq!(orbit(&[x3], 0), (0..8).collect::<BTreeSet<u32>>());
    let d1 = t.act_level(&"d".parse().unwrap(), 1).unwrap();
    assert_eq!(orbit(&[d1], 0), BTreeSet::from([0]));
    assert_eq!(orbit(&[], 5), BTreeSet::from([5]));
}

#[test]
fn level_quotients_are_functorial() {
    let mut q = QuotientBuilder::new(RecursionTable::l_group());
    for n in 1..=8 {
        // each generator's image on level n + 1 projects to its image on level n
        for &g in Ambient::L.generators() {
            let w = Word::gen(g);
            assert_eq!(forget_last_level(&q.act(&w, n + 1).unwrap(), n + 1), q.act(&w, n).unwrap(), "{g:?} level {n}");
        }
        for ambient in [Ambient::G, Ambient::L] {
            let upper = q.ambient(ambient, n + 1).unwrap();
            let lower = q.ambient(ambient, n).unwrap();
            for g in upper.generators() {
                assert!(lower.is_member(&forget_last_level(g, n + 1)).unwrap(), "{ambient} level {n}");
            }
        }
        // and for arbitrary words
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..50 {
            let w = random_word(&mut rng, 16, Alphabet::Full);
            assert_eq!(forget_last_level(&q.act(&w, n + 1).unwrap(), n + 1), q.act(&w, n).unwrap());
        }
    }
}

#[test]
fn level_quotient_examples() {
    let mut q = QuotientBuilder::new(RecursionTable::l_group());
    assert_eq!(q.ambient(Ambient::L, 1).unwrap().order(), 2u32.into());
    assert_eq!(q.ambient(Ambient::G, 1).unwrap().order(), 2u32.into());
    for n in 1..=10 {
        let x = q.subgroup(&SubgroupSpec::cyclic_x(), n).unwrap();
        assert_eq!(x.order(), BigUint::from(1u64 << n));
        assert_eq!(orbit(x.generators(), 0).len(), 1 << n);
    }
}

#[test]
fn q_stabilizes_level_one_with_the_stated_sections() {
    let t = RecursionTable::l_group();
    let mut solver = Solver::for_l();
    let pairs = [("d", "1", "b"), ("c", "a", "d"), ("a*c*a", "d", "a"), ("x*a", "1", "x")];
    for (g, s0, s1) in pairs {
        let d = t.decompose(&g.parse().unwrap()).unwrap();
        assert!(!d.swap, "{g}");
        assert!(solver.are_equal(&d.sections[0], &s0.parse().unwrap()).unwrap(), "{g}");
        assert!(solver.are_equal(&d.sections[1], &s1.parse().unwrap()).unwrap(), "{g}");
    }
    let gens: Vec<Word> = pairs.iter().map(|(g, _, _)| g.parse().unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..500 {
        let mut u = Word::identity();
        for _ in 0..rng.gen_range(1..12) {
            let g = &gens[rng.gen_range(0..gens.len())];
            let step = if rng.gen_bool(0.5) { g.clone() } else { g.inverse() };
            u = u.mul(&step);
        }
        assert!(t.stabilizes_level(&u, 1).unwrap(), "{u}");
    }
    let mut quot = QuotientBuilder::new(t.clone());
    let image = quot.subgroup(&SubgroupSpec::q(), 6).unwrap();
    for g in image.generators() {
        assert!(restrict_to_subtree(g, 6, 0).is_some());
    }
}

#[test]
fn rigid_stabilizer_examples() {
    let t = RecursionTable::l_group();
    let mut q = QuotientBuilder::new(t.clone());
    let l2 = q.ambient(Ambient::L, 2).unwrap();
    let r0 = rist_image(&l2, 2, &"0".parse::<Vertex>().unwrap()).unwrap();
    let b = t.act_level(&"b".parse().unwrap(), 2).unwrap();
    // b = (a, c) swaps 00 and 01 and fixes 10 and 11
    assert_eq!(b, p(4, "(0 1)"));
    assert!(r0.is_member(&b).unwrap());
    let whole = rist_image(&l2, 2, &Vertex::root()).unwrap();
    assert_eq!(whole.order(), l2.order());
    // brute force at level 3: elements fixing the outside of each level-1 vertex
    let l3 = q.ambient(Ambient::L, 3).unwrap();
    let all = enumerate(8, l3.generators(), 5000);
    for i in 0..2u32 {
        let v: Vertex = i.to_string().parse().unwrap();
        let expected =
            all.iter().filter(|g| (0..8).filter(|&leaf| leaf / 4 != i).all(|leaf| g.apply(leaf) == leaf)).count();
        assert_eq!(rist_image(&l3, 3, &v).unwrap().order(), BigUint::from(expected), "vertex {v}");
    }
}

#[test]
fn index_of_p_is_bounded_and_monotone() {
    let mut q = QuotientBuilder::new(RecursionTable::l_group());
    let p = SubgroupSpec::p();
    let indices: Vec<BigUint> = (4..=6).map(|n| q.index_in_ambient(&p, n).unwrap()).collect();
    assert!(indices.iter().all(|i| *i <= BigUint::from(128u32)), "{indices:?}");
    assert!(indices.windows(2).all(|w| w[0] <= w[1]), "{indices:?}");
    for n in 4..=6 {
        let sub = q.subgroup(&p, n).unwrap();
        let amb = q.ambient(Ambient::L, n).unwrap();
        assert!(amb.contains_group(&sub).unwrap());
    }
}
