//! Acceptance gate: every published example reproduced end to end, one
//! test per criterion. Each test ends with a PASS line naming what it
//! verified; the harness line itself is the pass/fail signal.

use stallings::automata::{stallings, Morphism};
use stallings::words::{Endomorphism, Word};
use stallings::{
    algebraic_extensions, check_fully_onto, check_into, check_onto, closures, expanded_pair,
    is_algebraic, is_free_factor, onto_in_basis, random_subgroup, synchronized_fold, Budgets,
    ExtensionLattice, Outcome, Subgroup,
};

fn sub(list: &[&str], rank: usize) -> Subgroup {
    Subgroup::new(words(list), rank).unwrap()
}

fn words(list: &[&str]) -> Vec<Word> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

fn endo(list: &[&str]) -> Endomorphism {
    Endomorphism::new(words(list), list.len()).unwrap()
}

fn sorted(mut subgroups: Vec<Subgroup>) -> Vec<Subgroup> {
    subgroups.sort();
    subgroups
}

#[test]
fn criterion_1_fringe_of_the_rank_three_example() {
    let h = sub(&["ab", "acba"], 3);
    let fringe = h.fringe(1_000_000).unwrap();
    // the published list of the six quotients, H2 written on its
    // canonical basis
    let expected = sorted(vec![
        sub(&["ab", "acba"], 3),
        sub(&["ab", "ac", "ba"], 3),
        sub(&["aa", "ab", "acbA"], 3),
        sub(&["ab", "ac", "aB", "aa"], 3),
        sub(&["ab", "aca", "acba"], 3),
        sub(&["a", "b", "c"], 3),
    ]);
    assert_eq!(*fringe, expected);

    let rewritten = sub(&["b", "c"], 3);
    let simple = rewritten.fringe(1_000_000).unwrap();
    assert_eq!(*simple, vec![rewritten]);
    eprintln!("criterion 1: PASS - fringe sizes 6 and 1 with exact member lists");
}

#[test]
fn criterion_2_fringe_and_closures_of_the_squares_pair() {
    let h = sub(&["aabb"], 2);
    let k = sub(&["aabb", "ab"], 2);
    let full = sub(&["a", "b"], 2);
    let fringe = h.fringe(1_000_000).unwrap();
    let expected = sorted(vec![
        h.clone(),
        sub(&["a", "bb"], 2),
        sub(&["aa", "b"], 2),
        sub(&["aa", "bb"], 2),
        k.clone(),
        sub(&["aa", "bb", "ab"], 2),
        full.clone(),
    ]);
    assert_eq!(*fringe, expected);

    let extensions = algebraic_extensions(&h, 1_000_000).unwrap();
    assert_eq!(sorted(extensions), sorted(vec![h.clone(), full]));

    let budgets = Budgets { depth: 6, max_bases: 60_000, ..Budgets::default() };
    let c = closures(&h, &k, budgets).unwrap();
    assert_eq!(c.algebraic, h);
    assert_eq!(c.fully_onto, h);
    assert_eq!(c.fully_onto_outcome, Outcome::YesCertified);
    assert_eq!(c.onto, k);
    assert_eq!(c.onto_outcome, Outcome::Unknown);
    eprintln!("criterion 2: PASS - seven quotients, two algebraic, Cl=H, fOCl=H, OCl=K");
}

#[test]
fn criterion_3_free_factor_that_resists_refutation() {
    let h = sub(&["bbabA"], 2);
    let k = sub(&["b", "abA"], 2);
    assert!(is_free_factor(&h, &k).unwrap());
    assert!(!is_algebraic(&h, &k, 1_000_000).unwrap());

    let budgets = Budgets { max_bases: 60_000, ..Budgets::default() };
    let onto = check_onto(&h, &k, budgets).unwrap();
    let fully = check_fully_onto(&h, &k, budgets).unwrap();
    assert_eq!(onto.outcome, Outcome::Unknown);
    assert_eq!(fully.outcome, Outcome::Unknown);
    assert_eq!(onto.depth, 4);
    assert_eq!(fully.extra_letters, Some(1));

    let c = closures(&h, &k, budgets).unwrap();
    assert_eq!(c.onto, k);
    assert_eq!(c.fully_onto, k);
    eprintln!("criterion 3: PASS - free factor, not algebraic, both checks unknown, OCl=fOCl=K");
}

#[test]
fn criterion_4_intersection_counterexample_suite() {
    let m1 = sub(&["aa", "bb"], 2);
    let m2 = sub(&["aaa", "bbb"], 2);
    let meet = m1.intersect(&m2);
    assert_eq!(meet, sub(&["aaaaaa", "bbbbbb"], 2));

    let h = sub(&["aaaaaabbbbbb"], 2);
    let onto = check_onto(&h, &meet, Budgets::default()).unwrap();
    assert_eq!(onto.outcome, Outcome::No);
    let witness = onto.witness_images.expect("refutations carry a witness");
    let searched = Endomorphism::new(witness.clone(), witness.len()).unwrap();
    assert!(!onto_in_basis(&h, &meet, &searched).unwrap());

    // the published two-letter and three-letter refuting bases work when
    // injected directly
    assert!(!onto_in_basis(&h, &meet, &endo(&["aBA", "abb"])).unwrap());
    assert!(!onto_in_basis(&h, &meet, &endo(&["aC", "cb", "c"])).unwrap());

    let fully = check_fully_onto(&h, &meet, Budgets::default()).unwrap();
    assert_eq!(fully.outcome, Outcome::No);
    eprintln!("criterion 4: PASS - meet is the sixth powers, onto and fully onto refuted with verified witnesses");
}

#[test]
fn criterion_5_non_semimodular_lattice() {
    let base = sub(&["aa", "bb", "abba"], 2);
    let fringe = base.fringe(1_000_000).unwrap();
    let h1 = sub(&["aa", "b", "Abba"], 2);
    let h2 = sub(&["aa", "bb", "Aba"], 2);
    let h3 = sub(&["aa", "bb", "ab"], 2);
    let h4 = sub(&["a", "bb"], 2);
    let h5 = sub(&["aa", "b", "Aba"], 2);
    let full = sub(&["a", "b"], 2);
    let expected = sorted(vec![
        base.clone(),
        h1,
        h2.clone(),
        h3.clone(),
        h4,
        h5,
        full,
    ]);
    assert_eq!(*fringe, expected);
    for member in fringe.iter() {
        assert!(is_algebraic(&base, member, 1_000_000).unwrap());
    }

    let lattice = ExtensionLattice::new(base, fringe.to_vec()).unwrap();
    assert!(!lattice.is_semimodular().unwrap());
    let violations = lattice.violations().unwrap();
    let i2 = lattice.index_of(&h2).unwrap();
    let i3 = lattice.index_of(&h3).unwrap();
    // H0 = H2 ^ H3 is covered by H3, while H6 = H2 v H3 does not cover
    // H2; with the roles swapped there is no violation
    assert!(violations.contains(&(i3, i2)));
    assert!(!violations.contains(&(i2, i3)));
    assert_eq!(violations.len(), 4);
    assert_eq!(
        lattice.join(&h2, &h3).unwrap(),
        sub(&["a", "b"], 2)
    );
    eprintln!("criterion 5: PASS - all seven quotients algebraic, semimodularity fails exactly at (H3, H2) and mates");
}

#[test]
fn criterion_6_property_suites() {
    // fold confluence over 200 seeded generator sets
    for seed in 0..200u64 {
        let gens = random_subgroup(2, 4, 8, seed).generators().to_vec();
        let reference = stallings(&gens, 2).unwrap();
        let mut variant = gens.clone();
        let rotation = seed as usize % variant.len();
        variant.rotate_left(rotation);
        for (i, w) in variant.iter_mut().enumerate() {
            if (seed >> i) & 1 == 1 {
                *w = w.inverse();
            }
        }
        if gens.len() >= 2 {
            variant.push(&gens[0] * &gens[1]);
        }
        assert_eq!(stallings(&variant, 2).unwrap(), reference);
    }
    eprintln!("criterion 6a: PASS - folding confluent on 200 generator sets");

    // membership against the brute-force product oracle
    for seed in 0..100u64 {
        let h = random_subgroup(2, 3, 6, 10_000 + seed);
        let gens = h.generators();
        let mut products = vec![Word::identity()];
        let mut frontier = vec![Word::identity()];
        for _ in 0..3 {
            let mut next = Vec::new();
            for p in &frontier {
                for g in gens {
                    next.push(p * g);
                    next.push(p * &g.inverse());
                }
            }
            products.extend(next.iter().cloned());
            frontier = next;
        }
        for p in &products {
            assert!(h.contains(p));
        }
        let probe = random_subgroup(2, 1, 6, 20_000 + seed).generators()[0].clone();
        if h.contains(&probe) {
            let coords = h.graph().rewrite_member(&probe).unwrap();
            let substitute = Endomorphism::new(h.basis(), 2).unwrap();
            assert_eq!(substitute.apply(&coords).unwrap(), probe);
        } else {
            assert!(!products.contains(&probe));
        }
    }
    eprintln!("criterion 6b: PASS - membership matches the product oracle on 100 subgroups");

    // chain inclusions on the worked-example subgroups with small graphs
    let corpus: Vec<Subgroup> = vec![
        sub(&["ab", "acba"], 3),
        sub(&["b", "c"], 3),
        sub(&["aabb"], 2),
        sub(&["aabb", "ab"], 2),
        sub(&["aa", "bb"], 2),
        sub(&["aaa", "bbb"], 2),
        sub(&["bbabA"], 2),
        sub(&["b", "abA"], 2),
        sub(&["aa", "bb", "abba"], 2),
        sub(&["aabb", "bbaa"], 2),
        sub(&["ab", "aa", "bb"], 2),
    ];
    let chain_budgets = Budgets { depth: 2, max_bases: 2_000, ..Budgets::default() };
    for h in &corpus {
        assert!(h.graph().vertex_count() <= 7);
        for x in h.fringe(1_000_000).unwrap().iter() {
            let algebraic = is_algebraic(h, x, 1_000_000).unwrap();
            let fully = check_fully_onto(h, x, chain_budgets).unwrap();
            let onto = check_onto(h, x, chain_budgets).unwrap();
            if algebraic {
                assert_ne!(fully.outcome, Outcome::No);
                assert_ne!(onto.outcome, Outcome::No);
            }
            if onto.outcome == Outcome::No {
                assert_eq!(fully.outcome, Outcome::No);
            }
        }
    }
    eprintln!("criterion 6c: PASS - algebraic, fully-onto-unrefuted, onto-unrefuted, fringe chain holds");

    // proper random extensions are almost always refuted as into
    let into_budgets = Budgets { depth: 5, max_bases: 10_000, ..Budgets::default() };
    let mut refuted = 0;
    let mut unknown = Vec::new();
    let mut seed = 0u64;
    for _ in 0..50 {
        let h = loop {
            let h = random_subgroup(2, 3, 8, seed);
            if h.rank() < 2 || h.graph().vertex_count() > 1 {
                break h;
            }
            seed += 1;
        };
        let mut extra = 1_000 + seed;
        let k = loop {
            let probe = random_subgroup(2, 1, 6, extra);
            let joined = h.join(&probe);
            if joined != h {
                break joined;
            }
            extra += 1;
        };
        let verdict = check_into(&h, &k, into_budgets).unwrap();
        match verdict.outcome {
            Outcome::No => refuted += 1,
            _ => unknown.push(seed),
        }
        seed += 1;
    }
    assert!(refuted >= 45, "only {refuted} of 50 proper extensions refuted");
    eprintln!(
        "criterion 6d: PASS - {refuted}/50 proper extensions refuted as into, unknown seeds {unknown:?}"
    );
}

#[test]
fn criterion_7_synchronized_fold_traces() {
    // wedge of two onto instances: nothing trimmed, still onto
    let h1 = sub(&["bbabA"], 3);
    let k1 = sub(&["b", "abA"], 3);
    let h2 = sub(&["ccacA"], 3);
    let k2 = sub(&["c", "acA"], 3);
    let t1 = Morphism::find(h1.graph(), k1.graph()).unwrap();
    let t2 = Morphism::find(h2.graph(), k2.graph()).unwrap();
    let (folded, trace) = synchronized_fold(&t1.wedge(&t2));
    assert_eq!(trace.onto_after, [true; 5]);
    assert_eq!(trace.step3_target_removed, 0);
    assert_eq!(trace.step3_source_removed, 0);
    assert_eq!(trace.step4_removed, 0);
    assert_eq!(*folded.source(), *sub(&["bbabA", "ccacA"], 3).graph());
    assert_eq!(*folded.target(), *sub(&["b", "abA", "c", "acA"], 3).graph());

    // the sixth-powers pair in the three-letter basis: surjectivity is
    // lost exactly at the source trim
    let h = sub(&["aaaaaabbbbbb"], 2);
    let k = sub(&["aaaaaa", "bbbbbb"], 2);
    let theta = expanded_pair(&h, &k, &endo(&["aC", "cb", "c"])).unwrap();
    let (folded, trace) = synchronized_fold(&theta);
    assert_eq!(trace.onto_after, [true, true, true, true, false]);
    assert_eq!(trace.step3_target_removed, 0);
    assert_eq!(trace.step3_source_removed, 0);
    assert_eq!(trace.step4_removed, 1);
    let expected_cycle = stallings(&words(&["acacacacacabCbCbCbCbCb"]), 3).unwrap();
    assert_eq!(*folded.source(), expected_cycle);
    assert_eq!(folded.target().vertex_count(), 22);
    assert_eq!(folded.target().edges().len(), 23);
    eprintln!("criterion 7: PASS - wedge folds with empty trims and stays onto; the expanded pair loses surjectivity at step 4");
}
