//! Closed subspaces of `ℂ^d` as an orthocomplemented lattice.
//!
//! A subspace is held canonically as an orthonormal basis (a `d × k` matrix
//! with orthonormal columns) together with its cached projector `P = B·B†`.
//! All comparisons go through projectors:
//!
//! * inclusion `W ⊆ V` holds iff `‖(I − P_V)·P_W‖_max ≤ eps`,
//! * equality holds iff `‖P_V − P_W‖_max ≤ eps`,
//!
//! where `‖·‖_max` is the largest entry modulus and `eps` is a single
//! [`Tolerance`] used for every rank decision. The lattice operations are
//! orthocomplement (basis completion), join (re-orthonormalization of the
//! stacked bases) and meet (De Morgan from join and complement, so that all
//! rank decisions flow through one code path).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Largest ambient dimension the workbench accepts.
///
/// Everything here is meant for desk-scale experiments; projectors are dense
/// `d × d` matrices and formula universes grow combinatorially, so a small
/// cap keeps every operation interactive.
pub const MAX_AMBIENT_DIM: usize = 16;

/// Numerical tolerance driving every rank, inclusion and equality decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    /// A tolerance must lie strictly between 0 and 1.
    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps > 0.0 && eps < 1.0 {
            Ok(Self { eps })
        } else {
            Err(Error::InvalidTolerance(eps))
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps: Self::DEFAULT_EPS,
        }
    }
}

/// A closed subspace of `ℂ^d`.
#[derive(Debug, Clone)]
pub struct Subspace {
    /// `d × k` matrix with orthonormal columns spanning the subspace.
    basis: CMatrix,
    /// Cached projector `B·B†`, the canonical identity of the subspace.
    projector: CMatrix,
}

fn check_ambient(d: usize) -> Result<()> {
    if d == 0 || d > MAX_AMBIENT_DIM {
        return Err(Error::AmbientDim { got: d });
    }
    Ok(())
}

fn check_vector(d: usize, v: &CVector) -> Result<()> {
    if v.len() != d {
        return Err(Error::VectorLength {
            expected: d,
            got: v.len(),
        });
    }
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Largest entry modulus of a matrix.
pub(crate) fn max_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
///
/// Vectors whose residual after projection onto the already accepted columns
/// has norm `≤ eps` are treated as dependent and dropped. Returns the
/// accepted columns as a `d × k` matrix with orthonormal columns.
pub fn orthonormalize(d: usize, vectors: &[CVector], tol: Tolerance) -> Result<CMatrix> {
    check_ambient(d)?;
    let one = C64::new(1.0, 0.0);
    let mut accepted: Vec<CVector> = Vec::new();
    for v in vectors {
        check_vector(d, v)?;
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &accepted {
                let c = q.dotc(&w);
                w.axpy(-c, q, one);
            }
        }
        let n = w.norm();
        if n > tol.eps() {
            w.unscale_mut(n);
            accepted.push(w);
        }
    }
    if accepted.is_empty() {
        Ok(CMatrix::zeros(d, 0))
    } else {
        Ok(CMatrix::from_columns(&accepted))
    }
}

impl Subspace {
    fn from_orthonormal_basis(basis: CMatrix) -> Self {
        let projector = &basis * basis.adjoint();
        Self { basis, projector }
    }

    /// The zero subspace `O` of `ℂ^d`.
    pub fn zero(d: usize) -> Result<Self> {
        check_ambient(d)?;
        Ok(Self {
            basis: CMatrix::zeros(d, 0),
            projector: CMatrix::zeros(d, d),
        })
    }

    /// The full space `I = ℂ^d`.
    pub fn full(d: usize) -> Result<Self> {
        check_ambient(d)?;
        Ok(Self {
            basis: CMatrix::identity(d, d),
            projector: CMatrix::identity(d, d),
        })
    }

    /// The closed span of the given vectors (they need not be independent or
    /// normalized; dependent vectors are dropped by the rank decision).
    pub fn span(d: usize, vectors: &[CVector], tol: Tolerance) -> Result<Self> {
        let basis = orthonormalize(d, vectors, tol)?;
        Ok(Self::from_orthonormal_basis(basis))
    }

    /// The ray spanned by a single nonzero vector.
    pub fn line(v: &CVector, tol: Tolerance) -> Result<Self> {
        let d = v.len();
        check_ambient(d)?;
        check_vector(d, v)?;
        let s = Self::span(d, std::slice::from_ref(v), tol)?;
        if s.dim() == 0 {
            return Err(Error::ZeroVector);
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Dimension `k` of the subspace.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn projector(&self) -> &CMatrix {
        &self.projector
    }

    fn check_same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch {
                left: self.ambient_dim(),
                right: other.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Orthocomplement `V^⊥`, computed by completing the basis of `V` with
    /// coordinate vectors and keeping the columns accepted after the first
    /// `dim(V)`.
    pub fn complement(&self, tol: Tolerance) -> Self {
        let d = self.ambient_dim();
        let mut gens: Vec<CVector> = (0..self.dim()).map(|j| self.basis.column(j).into_owned()).collect();
        for i in 0..d {
            gens.push(CVector::from_fn(d, |r, _| {
                if r == i {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
        }
        let q = orthonormalize(d, &gens, tol).expect("completion of a valid basis cannot fail");
        let k = self.dim();
        let extra = q.ncols() - k;
        let basis = q.columns(k, extra).into_owned();
        Self::from_orthonormal_basis(basis)
    }

    /// Join `V ⋓ W`: the closed span of the union of the bases.
    pub fn join(&self, other: &Self, tol: Tolerance) -> Result<Self> {
        self.check_same_ambient(other)?;
        let mut gens: Vec<CVector> = (0..self.dim()).map(|j| self.basis.column(j).into_owned()).collect();
        gens.extend((0..other.dim()).map(|j| other.basis.column(j).into_owned()));
        Self::span(self.ambient_dim(), &gens, tol)
    }

    /// Meet `V ⋒ W = (V^⊥ ⋓ W^⊥)^⊥`, via De Morgan so that every rank
    /// decision goes through the same join code path.
    pub fn meet(&self, other: &Self, tol: Tolerance) -> Result<Self> {
        self.check_same_ambient(other)?;
        Ok(self
            .complement(tol)
            .join(&other.complement(tol), tol)?
            .complement(tol))
    }

    /// Whether `other ⊆ self`, decided as `‖(I − P_self)·P_other‖_max ≤ eps`.
    pub fn includes(&self, other: &Self, tol: Tolerance) -> Result<bool> {
        self.check_same_ambient(other)?;
        let d = self.ambient_dim();
        let residual = (CMatrix::identity(d, d) - &self.projector) * &other.projector;
        Ok(max_norm(&residual) <= tol.eps())
    }

    /// Whether the two subspaces are equal, decided as
    /// `‖P_self − P_other‖_max ≤ eps`.
    pub fn equals(&self, other: &Self, tol: Tolerance) -> Result<bool> {
        self.check_same_ambient(other)?;
        let diff = &self.projector - &other.projector;
        Ok(max_norm(&diff) <= tol.eps())
    }

    /// Whether the vector lies in the subspace: `‖v − P·v‖ ≤ eps`.
    pub fn contains_vector(&self, v: &CVector, tol: Tolerance) -> Result<bool> {
        check_vector(self.ambient_dim(), v)?;
        let residual = v - &self.projector * v;
        Ok(residual.norm() <= tol.eps())
    }

    /// Deterministic total order on subspaces: by dimension, then by the
    /// projector entries lexicographically. Used to canonicalize component
    /// lists; it is not geometrically meaningful.
    pub(crate) fn canon_cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.dim().cmp(&other.dim()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.projector.iter().zip(other.projector.iter()) {
            match a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }
}

/// A Gaussian-random unit vector in `ℂ^d`.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(d, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let n = v.norm();
        if n > 1e-6 {
            return v.unscale(n);
        }
    }
}

/// A random `k`-dimensional subspace of `ℂ^d`, spanned by `k` Gaussian
/// vectors drawn from the given generator.
pub fn random_subspace_with<R: Rng + ?Sized>(
    d: usize,
    k: usize,
    tol: Tolerance,
    rng: &mut R,
) -> Result<Subspace> {
    check_ambient(d)?;
    if k > d {
        return Err(Error::VectorLength { expected: d, got: k });
    }
    loop {
        let gens: Vec<CVector> = (0..k).map(|_| random_unit_vector(d, rng)).collect();
        let s = Subspace::span(d, &gens, tol)?;
        if s.dim() == k {
            return Ok(s);
        }
    }
}

/// A random `k`-dimensional subspace of `ℂ^d` from a fixed seed.
pub fn random_subspace(d: usize, k: usize, tol: Tolerance, seed: u64) -> Result<Subspace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_subspace_with(d, k, tol, &mut rng)
}
