//! Independent oracle toolkit for the integration suites.
//!
//! Everything here decides ranks, spans and memberships by complex Gaussian
//! elimination (reduced row echelon form with partial pivoting), a different
//! algorithm from the production code's Gram–Schmidt/projector path, so the
//! two sides can check each other. Formula semantics are recomputed here
//! from raw generator lists by structural recursion with pointwise set
//! semantics.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use qprag::AssertiveFormula;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Decision tolerance used by the oracle side.
pub const ORACLE_EPS: f64 = 1e-8;

/// Reduced row echelon form with partial pivoting. Returns the reduced
/// matrix and the pivot column indices.
pub fn rref(m: &CMatrix, eps: f64) -> (CMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        // Partial pivoting: largest magnitude in the column at or below r.
        let mut best = r;
        let mut best_mag = a[(r, c)].norm();
        for i in (r + 1)..rows {
            let mag = a[(i, c)].norm();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        if best_mag <= eps {
            continue;
        }
        a.swap_rows(r, best);
        let pivot = a[(r, c)];
        for j in 0..cols {
            a[(r, j)] /= pivot;
        }
        for i in 0..rows {
            if i != r {
                let factor = a[(i, c)];
                if factor.norm() > 0.0 {
                    for j in 0..cols {
                        let sub = factor * a[(r, j)];
                        a[(i, j)] -= sub;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Rank by counting pivot columns.
pub fn rank(m: &CMatrix, eps: f64) -> usize {
    rref(m, eps).1.len()
}

/// A (not necessarily orthonormal) basis of the nullspace, one vector per
/// free column.
pub fn nullspace(m: &CMatrix, eps: f64) -> Vec<CVector> {
    let cols = m.ncols();
    let (r, pivots) = rref(m, eps);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = CVector::zeros(cols);
        v[free] = C64::new(1.0, 0.0);
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row, free)];
        }
        basis.push(v);
    }
    basis
}

/// Whether `v` lies in the column span of `b`: adjoining it must not raise
/// the rank.
pub fn member_of_span(b: &CMatrix, v: &CVector, eps: f64) -> bool {
    let d = v.nrows();
    let k = b.ncols();
    let mut stacked = CMatrix::zeros(d, k + 1);
    stacked.columns_mut(0, k).copy_from(b);
    stacked.column_mut(k).copy_from(v);
    rank(&stacked, eps) == rank(b, eps)
}

/// Spanning vectors of the intersection of two column spans, from the
/// nullspace of `[A | -B]`.
pub fn span_intersection(a: &CMatrix, b: &CMatrix, eps: f64) -> CMatrix {
    let d = a.nrows();
    let (ka, kb) = (a.ncols(), b.ncols());
    if ka == 0 || kb == 0 {
        return CMatrix::zeros(d, 0);
    }
    let mut stacked = CMatrix::zeros(d, ka + kb);
    stacked.columns_mut(0, ka).copy_from(a);
    stacked.columns_mut(ka, kb).copy_from(&(-b));
    let mut vectors = Vec::new();
    for z in nullspace(&stacked, eps) {
        let x = z.rows(0, ka).into_owned();
        let w = a * x;
        if w.norm() > eps {
            vectors.push(w);
        }
    }
    from_vectors(d, &vectors)
}

/// Spanning vectors of the orthogonal complement of a column span: the
/// nullspace of the conjugate transpose.
pub fn orthogonal_complement(b: &CMatrix, eps: f64) -> CMatrix {
    let d = b.nrows();
    if b.ncols() == 0 {
        return CMatrix::identity(d, d);
    }
    from_vectors(d, &nullspace(&b.adjoint(), eps))
}

/// Pack vectors into a d×k matrix (k = 0 allowed).
pub fn from_vectors(d: usize, vectors: &[CVector]) -> CMatrix {
    let mut m = CMatrix::zeros(d, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.column_mut(j).copy_from(v);
    }
    m
}

/// Raw generator registry: property name → spanning vectors (not
/// orthonormalized; the oracle never orthonormalizes).
pub type GeneratorRegistry = BTreeMap<String, CMatrix>;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn col(entries: &[(f64, f64)]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&(re, im)| c(re, im)))
}

/// The qubit registry rebuilt from first principles with raw, unnormalized
/// generators.
pub fn qubit_generators() -> GeneratorRegistry {
    let mut g = GeneratorRegistry::new();
    let e1 = col(&[(1.0, 0.0), (0.0, 0.0)]);
    let e2 = col(&[(0.0, 0.0), (1.0, 0.0)]);
    g.insert("Ez+".into(), from_vectors(2, &[e1.clone()]));
    g.insert("Ez-".into(), from_vectors(2, &[e2.clone()]));
    g.insert(
        "Ex+".into(),
        from_vectors(2, &[col(&[(1.0, 0.0), (1.0, 0.0)])]),
    );
    g.insert(
        "Ex-".into(),
        from_vectors(2, &[col(&[(1.0, 0.0), (-1.0, 0.0)])]),
    );
    g.insert(
        "Ey+".into(),
        from_vectors(2, &[col(&[(1.0, 0.0), (0.0, 1.0)])]),
    );
    g.insert(
        "Ey-".into(),
        from_vectors(2, &[col(&[(1.0, 0.0), (0.0, -1.0)])]),
    );
    g.insert("I".into(), from_vectors(2, &[e1, e2]));
    g.insert("O".into(), CMatrix::zeros(2, 0));
    g
}

/// The qutrit registry rebuilt from first principles.
pub fn qutrit_generators() -> GeneratorRegistry {
    let mut g = GeneratorRegistry::new();
    let e = |i: usize| {
        let mut v = CVector::zeros(3);
        v[i] = c(1.0, 0.0);
        v
    };
    g.insert("E1".into(), from_vectors(3, &[e(0)]));
    g.insert("E2".into(), from_vectors(3, &[e(1)]));
    g.insert("E3".into(), from_vectors(3, &[e(2)]));
    g.insert("P12".into(), from_vectors(3, &[e(0), e(1)]));
    g.insert("P13".into(), from_vectors(3, &[e(0), e(2)]));
    g.insert("P23".into(), from_vectors(3, &[e(1), e(2)]));
    g.insert("I".into(), from_vectors(3, &[e(0), e(1), e(2)]));
    g.insert("O".into(), CMatrix::zeros(3, 0));
    g
}

/// Oracle component spans of a formula's extension: one spanning matrix per
/// component of the finite union, without normal-form reduction.
pub fn oracle_components(g: &GeneratorRegistry, f: &AssertiveFormula, eps: f64) -> Vec<CMatrix> {
    match f {
        AssertiveFormula::Assert(rf) => vec![g
            .get(rf.name())
            .unwrap_or_else(|| panic!("unregistered property {}", rf.name()))
            .clone()],
        AssertiveFormula::Or(a, b) => {
            let mut parts = oracle_components(g, a, eps);
            parts.extend(oracle_components(g, b, eps));
            parts
        }
        AssertiveFormula::And(a, b) => {
            let pa = oracle_components(g, a, eps);
            let pb = oracle_components(g, b, eps);
            let mut parts = Vec::new();
            for x in &pa {
                for y in &pb {
                    parts.push(span_intersection(x, y, eps));
                }
            }
            parts
        }
        AssertiveFormula::Not(a) => {
            // Complement of the closure: orthogonal to every spanning vector
            // of every component.
            let parts = oracle_components(g, a, eps);
            let d = parts
                .first()
                .map(|m| m.nrows())
                .unwrap_or_else(|| g.values().next().expect("nonempty registry").nrows());
            let total: usize = parts.iter().map(|m| m.ncols()).sum();
            let mut union_span = CMatrix::zeros(d, total);
            let mut at = 0;
            for p in &parts {
                union_span.columns_mut(at, p.ncols()).copy_from(p);
                at += p.ncols();
            }
            vec![orthogonal_complement(&union_span, eps)]
        }
    }
}

/// Oracle evaluation at a unit state: pointwise set semantics.
pub fn oracle_eval(g: &GeneratorRegistry, f: &AssertiveFormula, state: &CVector, eps: f64) -> bool {
    match f {
        AssertiveFormula::Assert(rf) => member_of_span(&g[rf.name()], state, eps),
        AssertiveFormula::And(a, b) => {
            oracle_eval(g, a, state, eps) && oracle_eval(g, b, state, eps)
        }
        AssertiveFormula::Or(a, b) => {
            oracle_eval(g, a, state, eps) || oracle_eval(g, b, state, eps)
        }
        AssertiveFormula::Not(a) => {
            // Membership in the complement of the closure: orthogonality to
            // every spanning vector of every component.
            orthogonal_to_components(&oracle_components(g, a, eps), state, eps)
        }
    }
}

/// Whether the state is orthogonal to every spanning vector of every
/// component — the oracle's reading of pragmatic negation.
pub fn orthogonal_to_components(components: &[CMatrix], state: &CVector, eps: f64) -> bool {
    for part in components {
        for j in 0..part.ncols() {
            let col = part.column(j);
            let scale = col.norm().max(1.0);
            if col.dotc(state).norm() / scale > eps {
                return false;
            }
        }
    }
    true
}

/// Seeded unit states in `ℂ^d` for cross-checks.
pub fn seeded_states(d: usize, count: usize, seed: u64) -> Vec<CVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = CVector::from_fn(d, |_, _| {
            c(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let n = v.norm();
        if n > 1e-6 {
            out.push(v / c(n, 0.0));
        }
    }
    out
}

/// A seeded random d×k generator matrix with independent Gaussian entries
/// (columns almost surely independent).
pub fn seeded_span(d: usize, k: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(d, k, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}
