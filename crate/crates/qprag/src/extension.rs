//! Pragmatic extensions: finite unions of closed subspaces.
//!
//! An [`Extension`] denotes the set of (pure) states whose ray lies in at
//! least one of its components. Components are kept in antichain normal
//! form: no component is included in another, zero-dimensional components
//! are dropped (the zero subspace contains no state, so `{O}` and the empty
//! union denote the same set), and the list is sorted by a deterministic
//! canonical order. The empty extension is the extension of a p-invalid
//! assertion; an extension whose single component is the full space belongs
//! to a p-valid one.
//!
//! Set inclusion between extensions is decided componentwise: `T2 ⊆ T1` iff
//! every component of `T2` is included in some component of `T1`. This is
//! sound and complete because a complex vector space is never the union of
//! finitely many proper subspaces, so a subspace covered by a finite union
//! must already lie inside one member.

use serde::ser::SerializeStruct;

use crate::model::StateRef;
use crate::subspace::{Subspace, Tolerance};
use crate::{Error, Result};

/// A finite union of closed subspaces of `ℂ^d`, in antichain normal form.
#[derive(Debug, Clone)]
pub struct Extension {
    ambient: usize,
    components: Vec<Subspace>,
}

impl Extension {
    /// The empty extension (no state belongs to it).
    pub fn empty(ambient: usize) -> Result<Self> {
        // Reuse the subspace-side ambient check.
        Subspace::zero(ambient)?;
        Ok(Self {
            ambient,
            components: Vec::new(),
        })
    }

    /// Normal form of the union of the given components.
    pub fn new(ambient: usize, components: Vec<Subspace>, tol: Tolerance) -> Result<Self> {
        Subspace::zero(ambient)?;
        for c in &components {
            if c.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch {
                    left: ambient,
                    right: c.ambient_dim(),
                });
            }
        }
        let mut comps: Vec<Subspace> = components.into_iter().filter(|c| c.dim() > 0).collect();
        let n = comps.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            if !keep[i] {
                continue;
            }
            for j in 0..n {
                if i == j || !keep[j] {
                    continue;
                }
                if comps[j].includes(&comps[i], tol)? {
                    // Strict inclusion always drops i; for equal components
                    // the earlier index survives.
                    let equal = comps[i].includes(&comps[j], tol)?;
                    if !equal || j < i {
                        keep[i] = false;
                        break;
                    }
                }
            }
        }
        let mut kept: Vec<Subspace> = comps
            .drain(..)
            .zip(keep)
            .filter_map(|(c, k)| k.then_some(c))
            .collect();
        kept.sort_by(|a, b| a.canon_cmp(b));
        Ok(Self {
            ambient,
            components: kept,
        })
    }

    /// The extension of a single closed subspace.
    pub fn closed(s: Subspace, tol: Tolerance) -> Self {
        let ambient = s.ambient_dim();
        Self::new(ambient, vec![s], tol).expect("a single component is always consistent")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    /// True when the extension denotes the empty set of states.
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// True when the extension is a closed set of states: empty or a single
    /// subspace component.
    pub fn is_closed(&self) -> bool {
        self.components.len() <= 1
    }

    /// True when the extension is all of the ambient space.
    pub fn is_full(&self) -> bool {
        self.components.len() == 1 && self.components[0].dim() == self.ambient
    }

    fn check_same_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    /// Set union, renormalized.
    pub fn union(&self, other: &Self, tol: Tolerance) -> Result<Self> {
        self.check_same_ambient(other)?;
        let mut comps = self.components.clone();
        comps.extend(other.components.iter().cloned());
        Self::new(self.ambient, comps, tol)
    }

    /// Set intersection: pairwise meets of components, renormalized.
    pub fn intersect(&self, other: &Self, tol: Tolerance) -> Result<Self> {
        self.check_same_ambient(other)?;
        let mut comps = Vec::with_capacity(self.components.len() * other.components.len());
        for a in &self.components {
            for b in &other.components {
                comps.push(a.meet(b, tol)?);
            }
        }
        Self::new(self.ambient, comps, tol)
    }

    /// The smallest closed subspace containing the extension: the join of
    /// all components (`O` for the empty extension).
    pub fn closure(&self, tol: Tolerance) -> Result<Subspace> {
        let mut acc = Subspace::zero(self.ambient)?;
        for c in &self.components {
            acc = acc.join(c, tol)?;
        }
        Ok(acc)
    }

    /// Extended complement: the orthocomplement of the closure,
    /// `T^⊥ = (min{closed S ⊇ T})^⊥`.
    pub fn complement(&self, tol: Tolerance) -> Result<Self> {
        let c = self.closure(tol)?.complement(tol);
        Ok(Self::closed(c, tol))
    }

    /// Whether the state's ray lies in some component.
    pub fn contains_state(&self, state: &StateRef, tol: Tolerance) -> Result<bool> {
        if state.dim() != self.ambient {
            return Err(Error::DimensionMismatch {
                left: self.ambient,
                right: state.dim(),
            });
        }
        for c in &self.components {
            if c.contains_vector(state.vector(), tol)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Whether `other ⊆ self` as sets of states, decided componentwise.
    pub fn includes(&self, other: &Self, tol: Tolerance) -> Result<bool> {
        self.check_same_ambient(other)?;
        'outer: for w in &other.components {
            for v in &self.components {
                if v.includes(w, tol)? {
                    continue 'outer;
                }
            }
            return Ok(false);
        }
        Ok(true)
    }

    /// Whether the two extensions denote the same set of states.
    pub fn equals(&self, other: &Self, tol: Tolerance) -> Result<bool> {
        Ok(self.includes(other, tol)? && other.includes(self, tol)?)
    }

    /// Dimensions of the components, in canonical order.
    pub fn component_dims(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.dim()).collect()
    }
}

/// Extensions serialize as their ambient dimension plus one basis (a list of
/// `[re, im]` coordinate pairs per basis vector) for each component — the
/// same vector layout the model file format uses.
impl serde::Serialize for Extension {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let components: Vec<Vec<Vec<[f64; 2]>>> = self
            .components
            .iter()
            .map(|c| {
                (0..c.dim())
                    .map(|j| c.basis().column(j).iter().map(|z| [z.re, z.im]).collect())
                    .collect()
            })
            .collect();
        let mut s = serializer.serialize_struct("Extension", 3)?;
        s.serialize_field("ambient", &self.ambient)?;
        s.serialize_field("component_dims", &self.component_dims())?;
        s.serialize_field("components", &components)?;
        s.end()
    }
}
