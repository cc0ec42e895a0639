//! Algebraic laws of the subspace lattice, property-tested on random
//! subspaces and cross-checked against the Gaussian-elimination oracle.

mod common;

use common::{member_of_span, rank, seeded_span, span_intersection, ORACLE_EPS};
use proptest::prelude::*;
use qprag::subspace::{random_subspace, random_subspace_with, CMatrix, Subspace, Tolerance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

/// Max-norm distance between two subspaces' projectors.
fn projector_distance(a: &Subspace, b: &Subspace) -> f64 {
    (a.projector() - b.projector())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

fn subspace(d: usize, k: usize, seed: u64) -> Subspace {
    random_subspace(d, k % (d + 1), tol(), seed).unwrap()
}

proptest! {
    #[test]
    fn double_complement_is_identity(d in 2usize..=6, k in 0usize..=6, seed in any::<u64>()) {
        let v = subspace(d, k, seed);
        let back = v.complement(tol()).complement(tol());
        prop_assert!(projector_distance(&v, &back) <= 1e-8);
    }

    #[test]
    fn complement_splits_the_space(d in 2usize..=6, k in 0usize..=6, seed in any::<u64>()) {
        let v = subspace(d, k, seed);
        let c = v.complement(tol());
        prop_assert_eq!(v.dim() + c.dim(), d);
        prop_assert_eq!(v.meet(&c, tol()).unwrap().dim(), 0);
        prop_assert_eq!(v.join(&c, tol()).unwrap().dim(), d);
    }

    #[test]
    fn de_morgan_laws(d in 2usize..=6, k1 in 0usize..=6, k2 in 0usize..=6, seed in any::<u64>()) {
        let v = subspace(d, k1, seed);
        let w = subspace(d, k2, seed.wrapping_add(1));
        let join_comp = v.join(&w, tol()).unwrap().complement(tol());
        let comp_meet = v.complement(tol()).meet(&w.complement(tol()), tol()).unwrap();
        prop_assert!(projector_distance(&join_comp, &comp_meet) <= 1e-8);
        let meet_comp = v.meet(&w, tol()).unwrap().complement(tol());
        let comp_join = v.complement(tol()).join(&w.complement(tol()), tol()).unwrap();
        prop_assert!(projector_distance(&meet_comp, &comp_join) <= 1e-8);
    }

    #[test]
    fn orthomodular_law(d in 2usize..=6, k1 in 0usize..=6, k2 in 0usize..=6, seed in any::<u64>()) {
        // V ⊆ W by construction; then W = V ∨ (W ∧ V^⊥).
        let w = subspace(d, k1, seed);
        let r = subspace(d, k2, seed.wrapping_add(1));
        let v = w.meet(&r, tol()).unwrap();
        prop_assert!(w.includes(&v, tol()).unwrap());
        let rebuilt = v.join(&w.meet(&v.complement(tol()), tol()).unwrap(), tol()).unwrap();
        prop_assert!(projector_distance(&w, &rebuilt) <= 1e-8);
    }

    #[test]
    fn lattice_absorption_and_commutativity(
        d in 2usize..=6,
        k1 in 0usize..=6,
        k2 in 0usize..=6,
        seed in any::<u64>(),
    ) {
        let v = subspace(d, k1, seed);
        let w = subspace(d, k2, seed.wrapping_add(1));
        let vw = v.join(&w, tol()).unwrap();
        let wv = w.join(&v, tol()).unwrap();
        prop_assert!(projector_distance(&vw, &wv) <= 1e-8);
        let m1 = v.meet(&w, tol()).unwrap();
        let m2 = w.meet(&v, tol()).unwrap();
        prop_assert!(projector_distance(&m1, &m2) <= 1e-8);
        // Absorption.
        let absorbed = v.meet(&vw, tol()).unwrap();
        prop_assert!(projector_distance(&absorbed, &v) <= 1e-8);
        let absorbed_up = v.join(&m1, tol()).unwrap();
        prop_assert!(projector_distance(&absorbed_up, &v) <= 1e-8);
    }

    #[test]
    fn dimension_formula(d in 2usize..=6, k1 in 0usize..=6, k2 in 0usize..=6, seed in any::<u64>()) {
        // dim(V ∨ W) + dim(V ∧ W) = dim V + dim W holds in the subspace
        // lattice of a finite-dimensional space.
        let v = subspace(d, k1, seed);
        let w = subspace(d, k2, seed.wrapping_add(1));
        let join_dim = v.join(&w, tol()).unwrap().dim();
        let meet_dim = v.meet(&w, tol()).unwrap().dim();
        prop_assert_eq!(join_dim + meet_dim, v.dim() + w.dim());
    }

    #[test]
    fn inclusion_is_a_partial_order(
        d in 2usize..=6,
        k1 in 0usize..=6,
        k2 in 0usize..=6,
        seed in any::<u64>(),
    ) {
        let v = subspace(d, k1, seed);
        let w = subspace(d, k2, seed.wrapping_add(1));
        let m = v.meet(&w, tol()).unwrap();
        // Meet is a lower bound of both.
        prop_assert!(v.includes(&m, tol()).unwrap());
        prop_assert!(w.includes(&m, tol()).unwrap());
        // Mutual inclusion coincides with equality.
        let both = v.includes(&w, tol()).unwrap() && w.includes(&v, tol()).unwrap();
        prop_assert_eq!(both, v.equals(&w, tol()).unwrap());
        // Transitivity through the join.
        let j = v.join(&w, tol()).unwrap();
        prop_assert!(j.includes(&m, tol()).unwrap());
    }
}

#[test]
fn production_ranks_match_the_elimination_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for d in 2..=6 {
        for _ in 0..40 {
            let k: usize = rng.random_range(0..=d);
            let gens = seeded_span(d, k + 1, &mut rng);
            let columns: Vec<_> = (0..gens.ncols()).map(|j| gens.column(j).into_owned()).collect();
            let s = Subspace::span(d, &columns, tol()).unwrap();
            // Oracle rank of the raw generators equals the produced dimension.
            assert_eq!(s.dim(), rank(&gens, ORACLE_EPS));
            // Every accepted basis vector lies in the raw generator span and
            // vice versa.
            for j in 0..s.dim() {
                let b = s.basis().column(j).into_owned();
                assert!(member_of_span(&gens, &b, ORACLE_EPS));
            }
            for c in &columns {
                assert!(member_of_span(s.basis(), c, ORACLE_EPS));
            }
        }
    }
}

#[test]
fn meet_and_join_dimensions_match_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in 2..=6 {
        for _ in 0..40 {
            let v = random_subspace_with(d, d / 2, tol(), &mut rng).unwrap();
            let w = random_subspace_with(d, (d + 1) / 2, tol(), &mut rng).unwrap();
            // Join: rank of the stacked bases.
            let mut stacked = CMatrix::zeros(d, v.dim() + w.dim());
            stacked.columns_mut(0, v.dim()).copy_from(v.basis());
            stacked.columns_mut(v.dim(), w.dim()).copy_from(w.basis());
            assert_eq!(v.join(&w, tol()).unwrap().dim(), rank(&stacked, ORACLE_EPS));
            // Meet: rank of the oracle intersection span.
            let inter = span_intersection(v.basis(), w.basis(), ORACLE_EPS);
            assert_eq!(v.meet(&w, tol()).unwrap().dim(), rank(&inter, ORACLE_EPS));
            // Membership agreement on the meet's basis.
            let m = v.meet(&w, tol()).unwrap();
            for j in 0..m.dim() {
                let b = m.basis().column(j).into_owned();
                assert!(member_of_span(v.basis(), &b, ORACLE_EPS));
                assert!(member_of_span(w.basis(), &b, ORACLE_EPS));
            }
        }
    }
}

#[test]
fn complement_matches_the_oracle_nullspace() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for d in 2..=6 {
        for k in 0..=d {
            let v = random_subspace_with(d, k, tol(), &mut rng).unwrap();
            let c = v.complement(tol());
            let oracle = common::orthogonal_complement(v.basis(), ORACLE_EPS);
            assert_eq!(c.dim(), rank(&oracle, ORACLE_EPS));
            for j in 0..c.dim() {
                let b = c.basis().column(j).into_owned();
                assert!(member_of_span(&oracle, &b, ORACLE_EPS));
            }
        }
    }
}
