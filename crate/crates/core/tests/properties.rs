//! Cross-module invariants: witness replay, checker implications, the
//! filter/monotonicity correspondences, and star-order recovery across the
//! rule catalog.

use proptest::prelude::*;

use suffkit::alloc::{Bounds, ProfileSpace};
use suffkit::axioms::{
    Axiom, check_dual_sj, check_geq_complements, check_monotonicity, check_nondegeneracy,
    check_separability, check_sufficientarian_judgment, check_symmetry, check_weak_order,
    check_weak_sj, replay,
};
use suffkit::characterize::derive_star_order;
use suffkit::enumerate::{EnumBounds, SymmetricWeakOrders, WeakOrders, run_axiom};
use suffkit::rational::Rat;
use suffkit::relations::{RankFunction, Rule, materialize};
use suffkit::space::{ElementSet, ValidatedSpace, load_builtin};

fn setup(name: &str, n: usize) -> (ValidatedSpace, ProfileSpace) {
    let space = load_builtin(name).unwrap();
    let ps = ProfileSpace::new(space.len(), n, &Bounds::default()).unwrap();
    (space, ps)
}

proptest! {
    /// Any failing verdict, on any relation (weak order or not), must
    /// replay as a violation using only table lookups.
    #[test]
    fn failing_witnesses_replay(levels in proptest::collection::vec(0u32..4, 16)) {
        let (space, ps) = setup("G2", 2);
        // An arbitrary rank relation plus a bit of asymmetric noise so
        // non-weak-order tables get exercised too.
        let mut rel = RankFunction(levels.clone()).to_relation();
        let flip = (levels.iter().sum::<u32>() as usize) % 16;
        rel.set(flip, (flip + 7) % 16, !rel.geq(flip, (flip + 7) % 16));

        let verdicts = vec![
            check_weak_order(&rel),
            check_symmetry(&rel, &ps),
            check_separability(&rel, &ps),
            check_sufficientarian_judgment(&rel, &ps),
            check_dual_sj(&rel, &ps),
            check_weak_sj(&rel, &ps),
            check_monotonicity(&rel, &space, &ps).unwrap(),
            check_geq_complements(&rel, &space, &ps).unwrap(),
        ];
        for v in verdicts {
            if let Some(w) = &v.witness {
                prop_assert!(!v.holds);
                prop_assert!(replay(w, &rel, &space, &ps), "{:?}", v.axiom);
            }
        }
    }

    /// On weak orders, sufficientarian judgment implies its weak form.
    #[test]
    fn sj_implies_weak_sj(levels in proptest::collection::vec(0u32..5, 9)) {
        let (_space, ps) = setup("C3", 2);
        let rel = RankFunction(levels).to_relation();
        if check_sufficientarian_judgment(&rel, &ps).holds {
            prop_assert!(check_weak_sj(&rel, &ps).holds);
        }
    }
}

/// Checker counts equal the full quantifier domain when the axiom holds.
#[test]
fn counts_cover_the_domain_on_pass() {
    let (space, ps) = setup("C3", 2);
    let s = space
        .set_from_ids(&["1".to_string(), "2".to_string()])
        .unwrap();
    let rel = materialize(&Rule::Sufficientarian { s }, &space, &ps).unwrap();
    let p = ps.len() as u64;
    let m = space.len() as u64;
    assert_eq!(check_weak_order(&rel).checked, p * p + p * p * p);
    assert_eq!(check_symmetry(&rel, &ps).checked, p * 2);
    assert_eq!(check_separability(&rel, &ps).checked, 4 * p * p);
    assert_eq!(
        check_sufficientarian_judgment(&rel, &ps).checked,
        m * m * m * 2
    );
    assert_eq!(check_nondegeneracy(&rel).checked, p * p);
    assert_eq!(
        check_monotonicity(&rel, &space, &ps).unwrap().checked,
        p * p
    );
    assert_eq!(
        check_geq_complements(&rel, &space, &ps).unwrap().checked,
        m * m * m * 2
    );
}

/// For sufficientarian relations: monotonicity passes iff S is upward
/// closed, and monotonicity + complements pass iff S is a filter.
/// Exhaustive over every subset of G2, G3, D12.
#[test]
fn monotonicity_and_complements_characterize_filters() {
    for name in ["G2", "G3", "D12"] {
        let (space, ps) = setup(name, 2);
        let m = space.len();
        for mask in 0u64..1 << m {
            let s = ElementSet::from_mask(m, mask);
            let rel = materialize(&Rule::Sufficientarian { s: s.clone() }, &space, &ps).unwrap();
            let mono = check_monotonicity(&rel, &space, &ps).unwrap().holds;
            let comp = check_geq_complements(&rel, &space, &ps).unwrap().holds;
            assert_eq!(
                mono,
                space.is_upward_closed(&s),
                "{name} {mask:b}: monotone"
            );
            assert_eq!(
                mono && comp,
                space.is_filter(&s).unwrap(),
                "{name} {mask:b}: filter"
            );
        }
    }
}

/// Filters are their own upward closures.
#[test]
fn filters_equal_their_up_closures() {
    for name in ["G2", "D12"] {
        let (space, _) = setup(name, 2);
        let m = space.len();
        for mask in 0u64..1 << m {
            let s = ElementSet::from_mask(m, mask);
            if !space.is_filter(&s).unwrap() {
                continue;
            }
            let mut closure = ElementSet::empty(m);
            for lo in s.iter() {
                for hi in 0..m {
                    if space.leq(lo, hi) {
                        closure.insert(hi);
                    }
                }
            }
            assert_eq!(closure, s, "{name} {mask:b}");
            assert!(space.is_filter(&closure).unwrap());
        }
    }
}

/// Every relation in the catalog that passes symmetry and separability has
/// a well-defined star order; the two documented failures do not.
#[test]
fn star_order_well_defined_exactly_under_symmetry_and_separability() {
    let (u5, ps5) = setup("U5", 2);
    let (c3, ps3) = setup("C3", 2);
    let (b2, ps2) = setup("B2", 2);

    let passes: Vec<(&ValidatedSpace, &ProfileSpace, Rule)> = vec![
        (
            &c3,
            &ps3,
            Rule::Utilitarian {
                u: c3.values().unwrap().to_vec(),
            },
        ),
        (
            &c3,
            &ps3,
            Rule::Sufficientarian {
                s: c3.set_from_ids(&["2".to_string()]).unwrap(),
            },
        ),
        (&b2, &ps2, Rule::EndogenousLeximin { ranks: vec![1, 0] }),
    ];
    for (space, ps, rule) in passes {
        let rel = materialize(&rule, space, ps).unwrap();
        assert!(check_symmetry(&rel, ps).holds && check_separability(&rel, ps).holds);
        assert!(
            derive_star_order(&rel, ps).well_defined(),
            "{}",
            rule.name()
        );
    }

    // The min rule's single-coordinate comparisons flip across contexts,
    // so its star order is ill defined.
    let min = materialize(&Rule::MinRule, &u5, &ps5).unwrap();
    assert!(!check_separability(&min, &ps5).holds);
    assert!(!derive_star_order(&min, &ps5).well_defined());

    // The implication is one-directional: the weighted rule breaks symmetry
    // yet is additive, so substitution comparisons stay consistent and the
    // star order is well defined. Extraction still rejects it at the
    // rebuild step.
    let weighted = materialize(
        &Rule::WeightedSufficientarian {
            s: b2.set_from_ids(&["1".to_string()]).unwrap(),
            lambda: vec![Rat::ONE, Rat::from_int(2)],
        },
        &b2,
        &ps2,
    )
    .unwrap();
    assert!(!check_symmetry(&weighted, &ps2).holds);
    assert!(derive_star_order(&weighted, &ps2).well_defined());
    assert!(
        suffkit::characterize::extract_sufficient_set(&weighted, &b2, &ps2).is_err(),
        "asymmetric relations cannot round-trip through a sufficient set"
    );
}

/// Every relation the enumeration streams emit is a weak order, and the
/// quotient stream only emits symmetric ones.
#[test]
fn stream_invariants_hold() {
    let (_, ps) = setup("B2", 2);
    let bounds = EnumBounds::default();
    WeakOrders::new(ps.len(), &bounds)
        .unwrap()
        .for_each(|_, ranks| {
            let rel = RankFunction(ranks.to_vec()).to_relation();
            assert!(check_weak_order(&rel).holds);
        });
    let orbits = ps.orbits();
    SymmetricWeakOrders::new(&ps, &orbits, &bounds)
        .unwrap()
        .for_each(|_, ranks| {
            let rel = RankFunction(ranks.to_vec()).to_relation();
            assert!(check_weak_order(&rel).holds);
            assert!(check_symmetry(&rel, &ps).holds);
        });
}

/// Forward direction of the two-agent characterization: every endogenous
/// leximin relation (one per weak order on the ground set) passes weak
/// order, symmetry, separability, and weak sufficientarian judgment — for
/// three agents too.
#[test]
fn endogenous_leximin_relations_pass_the_four_axioms() {
    let bounds = EnumBounds::default();
    for n in [2usize, 3] {
        let (_, ps) = setup("C3", n);
        let mut count = 0;
        WeakOrders::new(3, &bounds).unwrap().for_each(|_, star| {
            let rel = suffkit::relations::endogenous_leximin_materialize(star, &ps);
            assert!(check_weak_order(&rel).holds, "star {star:?} n={n}");
            assert!(check_symmetry(&rel, &ps).holds, "star {star:?} n={n}");
            assert!(check_separability(&rel, &ps).holds, "star {star:?} n={n}");
            assert!(check_weak_sj(&rel, &ps).holds, "star {star:?} n={n}");
            count += 1;
        });
        assert_eq!(count, 13);
    }
}

/// Extraction round-trips every sufficient set: the extracted set rebuilds
/// to an extensionally identical relation (the set itself, except that the
/// empty and full sets collapse to total indifference).
#[test]
fn extraction_round_trips_every_sufficient_set() {
    for name in ["C3", "G2"] {
        let (space, ps) = setup(name, 2);
        let m = space.len();
        for mask in 0u64..1 << m {
            let s = ElementSet::from_mask(m, mask);
            let rel = materialize(&Rule::Sufficientarian { s: s.clone() }, &space, &ps).unwrap();
            let extracted = suffkit::characterize::extract_sufficient_set(&rel, &space, &ps)
                .unwrap_or_else(|e| panic!("{name} {mask:b}: {e:?}"));
            let rebuilt = materialize(
                &Rule::Sufficientarian {
                    s: extracted.clone(),
                },
                &space,
                &ps,
            )
            .unwrap();
            assert_eq!(rebuilt, rel, "{name} {mask:b}");
            let full = mask == (1 << m) - 1;
            if !full && mask != 0 {
                assert_eq!(extracted, s, "{name} {mask:b}");
            } else {
                assert!(extracted.is_empty(), "{name} {mask:b} collapses to empty");
            }
        }
    }
}

/// The threshold axiom's run_axiom dispatch agrees with the detailed
/// checker on both unit chains.
#[test]
fn pt_dispatch_matches_detail() {
    for name in ["U5", "U9"] {
        let (space, ps) = setup(name, 2);
        let beta = space.index_of("1/2").unwrap();
        let rel = materialize(&Rule::ThresholdSufficientarian { beta }, &space, &ps).unwrap();
        let via_dispatch = run_axiom(Axiom::PrioritarianThreshold, &rel, &space, &ps)
            .unwrap()
            .holds;
        let detailed = suffkit::axioms::check_prioritarian_threshold(&rel, &space, &ps).unwrap();
        assert_eq!(via_dispatch, detailed.verdict.holds);
        assert!(detailed.verdict.holds);
    }
}
