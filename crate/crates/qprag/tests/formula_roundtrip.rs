//! Parser/printer round-trips and enumeration properties of the formula
//! language.

use std::collections::HashSet;

use proptest::prelude::*;
use qprag::formula::{enumerate_formulas, random_formula};
use qprag::{AssertiveFormula, Error, Fragment};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_formula() -> impl Strategy<Value = AssertiveFormula> {
    let leaf = prop::sample::select(vec!["E", "F", "G_2", "H-x", "P+109"])
        .prop_map(|n| AssertiveFormula::elementary(n).unwrap());
    leaf.prop_recursive(4, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(AssertiveFormula::negation),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.conjunction(b)),
            (inner.clone(), inner).prop_map(|(a, b)| a.disjunction(b)),
        ]
    })
}

proptest! {
    #[test]
    fn printing_then_parsing_is_the_identity(f in arb_formula()) {
        let text = f.to_string();
        let back = AssertiveFormula::parse(&text).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn extra_whitespace_does_not_change_the_parse(f in arb_formula()) {
        let text = f.to_string().replace(' ', "   ").replace('(', " ( ");
        let back = AssertiveFormula::parse(&text).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn fragment_membership_is_absence_of_classical_disjunction(f in arb_formula()) {
        let has_or = f.to_string().contains(" A ");
        prop_assert_eq!(f.in_phi_ad(), !has_or);
    }

    #[test]
    fn sugared_connectives_stay_in_the_decidable_fragment(
        f in arb_formula(),
        g in arb_formula(),
    ) {
        let both_ad = f.in_phi_ad() && g.in_phi_ad();
        let aq = f.clone().disjunction_q(g.clone());
        let iq = f.implication_q(g);
        prop_assert_eq!(aq.in_phi_ad(), both_ad);
        prop_assert_eq!(iq.in_phi_ad(), both_ad);
        // Both desugarings round-trip through the printer.
        prop_assert_eq!(AssertiveFormula::parse(&aq.to_string()).unwrap(), aq);
        prop_assert_eq!(AssertiveFormula::parse(&iq.to_string()).unwrap(), iq);
    }

    #[test]
    fn depth_of_binary_is_one_plus_max(f in arb_formula(), g in arb_formula()) {
        let df = f.depth();
        let dg = g.depth();
        prop_assert_eq!(f.clone().negation().depth(), df + 1);
        prop_assert_eq!(f.conjunction(g).depth(), df.max(dg) + 1);
    }
}

/// Brute-force recount of distinct formulas by level, written independently
/// of the production enumeration.
fn recount(names: &[&str], max_depth: usize, full: bool) -> usize {
    let mut by_level: Vec<HashSet<AssertiveFormula>> = Vec::new();
    let mut level0 = HashSet::new();
    for n in names {
        level0.insert(AssertiveFormula::elementary(*n).unwrap());
    }
    by_level.push(level0);
    for d in 1..=max_depth {
        let mut level = HashSet::new();
        let all_prev: Vec<AssertiveFormula> = by_level
            .iter()
            .flat_map(|s| s.iter().cloned())
            .collect();
        for f in &by_level[d - 1] {
            level.insert(f.clone().negation());
        }
        for a in &all_prev {
            for b in &all_prev {
                if a.depth().max(b.depth()) == d - 1 {
                    level.insert(a.clone().conjunction(b.clone()));
                    if full {
                        level.insert(a.clone().disjunction(b.clone()));
                    }
                }
            }
        }
        // A formula first appearing at a shallower level must not be
        // recounted; depth is structural so levels are disjoint by
        // construction.
        by_level.push(level);
    }
    by_level.iter().map(HashSet::len).sum()
}

#[test]
fn enumeration_agrees_with_the_independent_recount() {
    for (names, depth, fragment) in [
        (vec!["E", "F"], 2usize, Fragment::PhiAd),
        (vec!["E", "F"], 2, Fragment::Full),
        (vec!["E", "F", "G"], 2, Fragment::PhiAd),
        (vec!["E"], 3, Fragment::Full),
    ] {
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let listed = enumerate_formulas(&owned, depth, fragment).unwrap();
        let expected = recount(&names, depth, fragment == Fragment::Full);
        assert_eq!(listed.len(), expected, "{names:?} depth {depth} {fragment:?}");
        // No duplicates and every formula respects the depth bound and
        // fragment.
        let distinct: HashSet<_> = listed.iter().cloned().collect();
        assert_eq!(distinct.len(), listed.len());
        for f in &listed {
            assert!(f.depth() <= depth);
            if fragment == Fragment::PhiAd {
                assert!(f.in_phi_ad());
            }
        }
    }
}

#[test]
fn enumeration_order_is_deterministic() {
    let names: Vec<String> = vec!["Ez+".into(), "Ex+".into()];
    let a = enumerate_formulas(&names, 2, Fragment::Full).unwrap();
    let b = enumerate_formulas(&names, 2, Fragment::Full).unwrap();
    assert_eq!(a, b);
    // Elementary assertions come first, in the given order.
    assert_eq!(a[0].to_string(), "|-Ez+(x)");
    assert_eq!(a[1].to_string(), "|-Ex+(x)");
}

#[test]
fn enumeration_guards_depth_and_universe_size() {
    let names: Vec<String> = vec!["E".into(), "F".into(), "G".into()];
    assert!(matches!(
        enumerate_formulas(&names, 7, Fragment::PhiAd),
        Err(Error::DepthTooLarge(7))
    ));
    assert!(matches!(
        enumerate_formulas(&names, 4, Fragment::Full),
        Err(Error::UniverseTooLarge { .. })
    ));
}

#[test]
fn random_formulas_respect_fragment_and_depth() {
    let names: Vec<String> = vec!["E".into(), "F".into()];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut saw_or = false;
    for _ in 0..200 {
        let f = random_formula(&names, 3, Fragment::PhiAd, &mut rng).unwrap();
        assert!(f.depth() <= 3);
        assert!(f.in_phi_ad());
        assert_eq!(AssertiveFormula::parse(&f.to_string()).unwrap(), f);
        let g = random_formula(&names, 3, Fragment::Full, &mut rng).unwrap();
        assert!(g.depth() <= 3);
        saw_or = saw_or || !g.in_phi_ad();
    }
    // The full fragment actually produces classical disjunctions.
    assert!(saw_or);
}

#[test]
fn parse_errors_carry_positions() {
    match AssertiveFormula::parse("(|-E(x) K |-F(x)") {
        Err(Error::Parse { position, .. }) => assert_eq!(position, 16),
        other => panic!("expected a parse error, got {other:?}"),
    }
    match AssertiveFormula::parse("|-N(x)") {
        Err(Error::Parse { .. }) => {}
        other => panic!("keywords must not be property names, got {other:?}"),
    }
}
