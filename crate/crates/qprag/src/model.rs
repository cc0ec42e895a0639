//! Property models: named closed subspaces over a fixed ambient space.
//!
//! A [`PropertyModel`] binds property names to subspaces of `ℂ^d` under one
//! shared [`Tolerance`]. Registration is injective: two names may not denote
//! the same subspace, so distinct elementary assertions stay extensionally
//! distinct. A [`StateRef`] is a unit vector standing for a pure state
//! (phases are irrelevant to every operation here).
//!
//! Models load from a JSON document of the shape
//!
//! ```json
//! {
//!   "dim": 2,
//!   "tolerance": 1e-9,
//!   "properties": {
//!     "Ez+": [[[1.0, 0.0], [0.0, 0.0]]],
//!     "plane": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
//!   }
//! }
//! ```
//!
//! where each property carries a list of basis vectors and each vector is a
//! list of `d` `[re, im]` pairs. Vectors need not be orthonormal or even
//! independent; the loader orthonormalizes and drops dependents.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::extension::Extension;
use crate::formula::is_valid_property_name;
use crate::subspace::{random_unit_vector, CVector, Subspace, Tolerance, C64};
use crate::{Error, Result};

/// A pure state: a unit vector in `ℂ^d` (normalized on construction).
#[derive(Debug, Clone)]
pub struct StateRef {
    vector: CVector,
}

impl StateRef {
    /// Normalize the given vector; rejects zero, non-finite and
    /// out-of-range-dimension input.
    pub fn new(vector: CVector) -> Result<Self> {
        // The subspace constructor performs the ambient-dimension check.
        Subspace::zero(vector.len())?;
        if vector.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = vector.norm();
        if n <= 1e-12 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            vector: vector.unscale(n),
        })
    }

    /// Build a state from `(re, im)` coordinate pairs.
    pub fn from_components(components: &[(f64, f64)]) -> Result<Self> {
        let v = CVector::from_iterator(
            components.len(),
            components.iter().map(|&(re, im)| C64::new(re, im)),
        );
        Self::new(v)
    }

    /// A Haar-ish random state: Gaussian components, normalized.
    pub fn random<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Self> {
        Subspace::zero(d)?;
        Ok(Self {
            vector: random_unit_vector(d, rng),
        })
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    /// The coordinates as `[re, im]` pairs (for reports).
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.vector.iter().map(|z| [z.re, z.im]).collect()
    }
}

/// Partition of the registered properties relative to one state: a property
/// is *actual* when the state's ray lies inside it, *nonactual* when the ray
/// lies inside its orthocomplement, and *potential* otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct StateClassification {
    pub actual: Vec<String>,
    pub nonactual: Vec<String>,
    pub potential: Vec<String>,
}

/// A finite registry of named properties over `ℂ^d`.
#[derive(Debug, Clone)]
pub struct PropertyModel {
    dim: usize,
    tol: Tolerance,
    properties: BTreeMap<String, Subspace>,
}

impl PropertyModel {
    pub fn new(dim: usize, tol: Tolerance) -> Result<Self> {
        Subspace::zero(dim)?;
        Ok(Self {
            dim,
            tol,
            properties: BTreeMap::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    /// Replace the comparison tolerance used by every derived operation.
    pub fn set_tolerance(&mut self, tol: Tolerance) {
        self.tol = tol;
    }

    /// Register a property. Names must be valid identifiers; the map from
    /// names to subspaces is kept injective.
    pub fn register(&mut self, name: impl Into<String>, subspace: Subspace) -> Result<()> {
        let name = name.into();
        if !is_valid_property_name(&name) {
            return Err(Error::InvalidPropertyName(name));
        }
        if subspace.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: subspace.ambient_dim(),
            });
        }
        if self.properties.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        for (existing, s) in &self.properties {
            if s.equals(&subspace, self.tol)? {
                return Err(Error::DuplicateSubspace {
                    name,
                    existing: existing.clone(),
                });
            }
        }
        self.properties.insert(name, subspace);
        Ok(())
    }

    /// Registered names in sorted order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.properties.keys().map(String::as_str)
    }

    pub fn property_count(&self) -> usize {
        self.properties.len()
    }

    pub fn property(&self, name: &str) -> Result<&Subspace> {
        self.properties
            .get(name)
            .ok_or_else(|| Error::UnknownProperty(name.to_string()))
    }

    /// The pragmatic extension of the elementary assertion of `name`: the
    /// one-component extension of its subspace (empty for the zero
    /// subspace, which contains no state).
    pub fn property_extension(&self, name: &str) -> Result<Extension> {
        Ok(Extension::closed(self.property(name)?.clone(), self.tol))
    }

    /// The support of a state: the ray it spans.
    pub fn support(&self, state: &StateRef) -> Result<Subspace> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: state.dim(),
            });
        }
        Subspace::line(state.vector(), self.tol)
    }

    /// Classify every registered property at the state as actual, nonactual
    /// or potential.
    pub fn classify(&self, state: &StateRef) -> Result<StateClassification> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: state.dim(),
            });
        }
        let mut out = StateClassification {
            actual: Vec::new(),
            nonactual: Vec::new(),
            potential: Vec::new(),
        };
        for (name, s) in &self.properties {
            if s.contains_vector(state.vector(), self.tol)? {
                out.actual.push(name.clone());
            } else {
                // The ray lies in the orthocomplement iff the projection
                // onto the property vanishes.
                let p = s.projector() * state.vector();
                if p.norm() <= self.tol.eps() {
                    out.nonactual.push(name.clone());
                } else {
                    out.potential.push(name.clone());
                }
            }
        }
        Ok(out)
    }

    /// Parse a model from its JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        file.into_model()
    }

    /// Load a model from a JSON file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// The built-in fixtures: `qubit` (ℂ², the six spin-½ direction rays
    /// plus O and I) and `qutrit` (ℂ³, the coordinate axes and planes plus
    /// O and I).
    pub fn standard(name: &str) -> Result<Self> {
        let tol = Tolerance::default();
        let c = |re: f64, im: f64| C64::new(re, im);
        match name {
            "qubit" => {
                let mut m = Self::new(2, tol)?;
                let ray = |a: C64, b: C64| -> Result<Subspace> {
                    Subspace::line(&CVector::from_vec(vec![a, b]), tol)
                };
                m.register("O", Subspace::zero(2)?)?;
                m.register("I", Subspace::full(2)?)?;
                m.register("Ez+", ray(c(1.0, 0.0), c(0.0, 0.0))?)?;
                m.register("Ez-", ray(c(0.0, 0.0), c(1.0, 0.0))?)?;
                m.register("Ex+", ray(c(1.0, 0.0), c(1.0, 0.0))?)?;
                m.register("Ex-", ray(c(1.0, 0.0), c(-1.0, 0.0))?)?;
                m.register("Ey+", ray(c(1.0, 0.0), c(0.0, 1.0))?)?;
                m.register("Ey-", ray(c(1.0, 0.0), c(0.0, -1.0))?)?;
                Ok(m)
            }
            "qutrit" => {
                let mut m = Self::new(3, tol)?;
                let basis = |i: usize| -> CVector {
                    CVector::from_fn(3, |r, _| if r == i { c(1.0, 0.0) } else { c(0.0, 0.0) })
                };
                m.register("O", Subspace::zero(3)?)?;
                m.register("I", Subspace::full(3)?)?;
                m.register("E1", Subspace::span(3, &[basis(0)], tol)?)?;
                m.register("E2", Subspace::span(3, &[basis(1)], tol)?)?;
                m.register("E3", Subspace::span(3, &[basis(2)], tol)?)?;
                m.register("P12", Subspace::span(3, &[basis(0), basis(1)], tol)?)?;
                m.register("P13", Subspace::span(3, &[basis(0), basis(2)], tol)?)?;
                m.register("P23", Subspace::span(3, &[basis(1), basis(2)], tol)?)?;
                Ok(m)
            }
            other => Err(Error::ModelFormat(format!(
                "unknown standard model `{other}` (available: qubit, qutrit)"
            ))),
        }
    }

    /// Parse a state descriptor: either `vector:[re,im;re,im;...]` with
    /// one `re,im` pair per coordinate, or `ray-of:<property>` naming a
    /// registered one-dimensional property.
    pub fn parse_state_spec(&self, spec: &str) -> Result<StateRef> {
        if let Some(rest) = spec.strip_prefix("ray-of:") {
            let s = self.property(rest.trim())?;
            if s.dim() != 1 {
                return Err(Error::ModelFormat(format!(
                    "`ray-of:{rest}` needs a one-dimensional property, but `{rest}` has dimension {}",
                    s.dim()
                )));
            }
            return StateRef::new(s.basis().column(0).into_owned());
        }
        if let Some(rest) = spec.strip_prefix("vector:") {
            let rest = rest.trim();
            let inner = rest
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::Parse {
                    position: 0,
                    message: format!("state vector must be bracketed, got `{rest}`"),
                })?;
            let mut comps = Vec::new();
            for (i, pair) in inner.split(';').enumerate() {
                let mut it = pair.split(',').map(str::trim);
                let (re, im) = match (it.next(), it.next(), it.next()) {
                    (Some(re), Some(im), None) => (re, im),
                    _ => {
                        return Err(Error::Parse {
                            position: i,
                            message: format!("state component {i} must be `re,im`, got `{pair}`"),
                        })
                    }
                };
                let parse = |s: &str| -> Result<f64> {
                    s.parse::<f64>().map_err(|_| Error::Parse {
                        position: i,
                        message: format!("invalid number `{s}` in state component {i}"),
                    })
                };
                comps.push((parse(re)?, parse(im)?));
            }
            if comps.len() != self.dim {
                return Err(Error::VectorLength {
                    expected: self.dim,
                    got: comps.len(),
                });
            }
            return StateRef::from_components(&comps);
        }
        Err(Error::Parse {
            position: 0,
            message: format!("state must be `vector:[re,im;...]` or `ray-of:<property>`, got `{spec}`"),
        })
    }
}

impl fmt::Display for PropertyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "model dim={} eps={:.1e}:", self.dim, self.tol.eps())?;
        for (name, s) in &self.properties {
            write!(f, " {name}[{}]", s.dim())?;
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct ModelFile {
    dim: usize,
    #[serde(default)]
    tolerance: Option<f64>,
    properties: BTreeMap<String, Vec<Vec<[f64; 2]>>>,
}

impl ModelFile {
    fn into_model(self) -> Result<PropertyModel> {
        let tol = match self.tolerance {
            Some(eps) => Tolerance::new(eps)?,
            None => Tolerance::default(),
        };
        let mut m = PropertyModel::new(self.dim, tol)?;
        for (name, vectors) in self.properties {
            let vs: Vec<CVector> = vectors
                .iter()
                .map(|v| CVector::from_iterator(v.len(), v.iter().map(|p| C64::new(p[0], p[1]))))
                .collect();
            let s = Subspace::span(self.dim, &vs, tol)
                .map_err(|e| Error::ModelFormat(format!("property `{name}`: {e}")))?;
            m.register(name, s)?;
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_qubit_registers_eight_properties() {
        let m = PropertyModel::standard("qubit").unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!(m.property_count(), 8);
        assert_eq!(m.property("Ez+").unwrap().dim(), 1);
        assert_eq!(m.property("O").unwrap().dim(), 0);
        assert_eq!(m.property("I").unwrap().dim(), 2);
        assert!(matches!(
            m.property("Ew+"),
            Err(Error::UnknownProperty(_))
        ));
    }

    #[test]
    fn standard_qutrit_registers_axes_and_planes() {
        let m = PropertyModel::standard("qutrit").unwrap();
        assert_eq!(m.dim(), 3);
        assert_eq!(m.property_count(), 8);
        assert_eq!(m.property("P12").unwrap().dim(), 2);
        assert!(PropertyModel::standard("ququart").is_err());
    }

    #[test]
    fn registration_enforces_injectivity() {
        let tol = Tolerance::default();
        let mut m = PropertyModel::new(2, tol).unwrap();
        let e1 = Subspace::span(
            2,
            &[CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)])],
            tol,
        )
        .unwrap();
        // The same ray written with a different phase.
        let e1_phase = Subspace::span(
            2,
            &[CVector::from_vec(vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)])],
            tol,
        )
        .unwrap();
        m.register("E", e1).unwrap();
        assert!(matches!(
            m.register("F", e1_phase),
            Err(Error::DuplicateSubspace { .. })
        ));
    }

    #[test]
    fn registration_rejects_bad_names_and_duplicates() {
        let tol = Tolerance::default();
        let mut m = PropertyModel::new(2, tol).unwrap();
        assert!(matches!(
            m.register("Iq", Subspace::zero(2).unwrap()),
            Err(Error::InvalidPropertyName(_))
        ));
        m.register("O", Subspace::zero(2).unwrap()).unwrap();
        assert!(matches!(
            m.register("O", Subspace::full(2).unwrap()),
            Err(Error::DuplicateName(_))
        ));
        assert!(matches!(
            m.register("bad", Subspace::zero(3).unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn classification_partitions_the_registry() {
        let m = PropertyModel::standard("qubit").unwrap();
        let s = m.parse_state_spec("ray-of:Ez+").unwrap();
        let c = m.classify(&s).unwrap();
        assert_eq!(c.actual, vec!["Ez+", "I"]);
        assert_eq!(c.nonactual, vec!["Ez-", "O"]);
        assert_eq!(c.potential, vec!["Ex+", "Ex-", "Ey+", "Ey-"]);
        assert_eq!(
            c.actual.len() + c.nonactual.len() + c.potential.len(),
            m.property_count()
        );
    }

    #[test]
    fn support_is_the_spanned_ray() {
        let m = PropertyModel::standard("qubit").unwrap();
        let s = m.parse_state_spec("ray-of:Ey+").unwrap();
        let sup = m.support(&s).unwrap();
        assert!(sup.equals(m.property("Ey+").unwrap(), m.tolerance()).unwrap());
    }

    #[test]
    fn json_roundtrip_loads_and_orthonormalizes() {
        let text = r#"{
            "dim": 2,
            "tolerance": 1e-9,
            "properties": {
                "diag": [[[1.0, 0.0], [1.0, 0.0]], [[2.0, 0.0], [2.0, 0.0]]],
                "O": []
            }
        }"#;
        let m = PropertyModel::from_json(text).unwrap();
        assert_eq!(m.property("diag").unwrap().dim(), 1);
        assert_eq!(m.property("O").unwrap().dim(), 0);
    }

    #[test]
    fn json_errors_are_model_errors() {
        assert!(PropertyModel::from_json("{").is_err());
        let bad_tol = r#"{"dim": 2, "tolerance": 2.0, "properties": {}}"#;
        assert!(matches!(
            PropertyModel::from_json(bad_tol),
            Err(Error::InvalidTolerance(_))
        ));
        let bad_vec = r#"{"dim": 2, "properties": {"E": [[[1.0, 0.0]]]}}"#;
        assert!(matches!(
            PropertyModel::from_json(bad_vec),
            Err(Error::ModelFormat(_))
        ));
    }

    #[test]
    fn state_specs_parse_and_validate() {
        let m = PropertyModel::standard("qubit").unwrap();
        let v = m.parse_state_spec("vector:[0.6,0;0,0.8]").unwrap();
        assert_eq!(v.dim(), 2);
        // Normalization happened (input already unit here, but check norm).
        assert!((v.vector().norm() - 1.0).abs() < 1e-12);
        assert!(m.parse_state_spec("vector:[1,0]").is_err());
        assert!(m.parse_state_spec("vector:[1,0;zz,0]").is_err());
        assert!(m.parse_state_spec("ray-of:I").is_err());
        assert!(m.parse_state_spec("ray-of:missing").is_err());
        assert!(m.parse_state_spec("nonsense").is_err());
        assert!(m.parse_state_spec("vector:[0,0;0,0]").is_err());
    }
}
