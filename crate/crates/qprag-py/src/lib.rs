//! Python bindings for the pragmatic quantum logic workbench.
//!
//! Exposes two classes. [`Formula`] parses, composes and prints assertive
//! formulas. [`Model`] wraps a property registry and offers evaluation,
//! validity, the preorder, decidability reports, quotient construction, the
//! axiom battery and assignment sampling. Structured reports cross the
//! boundary as JSON strings; every library error surfaces as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qprag::formula::AssertiveFormula;
use qprag::pragmatics::{self, JustificationValue};
use qprag::quotient;
use qprag::{PropertyModel, StateRef};

fn err(e: qprag::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string_pretty(value).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A state argument: either a spec string (`ray-of:<property>` /
/// `vector:[re,im;...]`) or a list of `(re, im)` pairs.
#[derive(FromPyObject)]
enum StateArg {
    Spec(String),
    Pairs(Vec<(f64, f64)>),
}

impl StateArg {
    fn resolve(&self, m: &PropertyModel) -> PyResult<StateRef> {
        match self {
            StateArg::Spec(text) => m.parse_state_spec(text).map_err(err),
            StateArg::Pairs(pairs) => StateRef::from_components(pairs).map_err(err),
        }
    }
}

/// An assertive formula: elementary assertions `|-E(x)` combined with the
/// pragmatic connectives.
#[pyclass(module = "qprag_py", skip_from_py_object)]
#[derive(Clone)]
struct Formula {
    inner: AssertiveFormula,
}

#[pymethods]
impl Formula {
    /// Parse a formula from its printed form.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: AssertiveFormula::parse(text).map_err(err)?,
        })
    }

    /// The elementary assertion of one property.
    #[staticmethod]
    fn elementary(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: AssertiveFormula::elementary(name).map_err(err)?,
        })
    }

    fn negation(&self) -> Self {
        Self {
            inner: self.inner.clone().negation(),
        }
    }

    fn conjunction(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.clone().conjunction(other.inner.clone()),
        }
    }

    /// The classical (pointwise) disjunction.
    fn disjunction(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.clone().disjunction(other.inner.clone()),
        }
    }

    /// The quantum disjunction, desugared to `N((N a) K (N b))`.
    fn disjunction_q(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.clone().disjunction_q(other.inner.clone()),
        }
    }

    /// The quantum implication (Sasaki hook on closed extensions).
    fn implication_q(&self, other: &Self) -> Self {
        Self {
            inner: self.inner.clone().implication_q(other.inner.clone()),
        }
    }

    /// Connective nesting depth; elementary assertions have depth 0.
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    /// Whether the formula avoids the classical disjunction.
    fn in_decidable_fragment(&self) -> bool {
        self.inner.in_phi_ad()
    }

    fn property_names(&self) -> Vec<String> {
        self.inner.property_names().iter().map(|s| s.to_string()).collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Formula({:?})", self.inner.to_string())
    }
}

impl Formula {
    fn parse_arg(text: &str) -> PyResult<AssertiveFormula> {
        AssertiveFormula::parse(text).map_err(err)
    }
}

/// A registry of named properties (closed subspaces) over `ℂ^d`.
#[pyclass(module = "qprag_py")]
struct Model {
    inner: PropertyModel,
}

#[pymethods]
impl Model {
    /// One of the built-in registries: `qubit` or `qutrit`.
    #[staticmethod]
    fn standard(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: PropertyModel::standard(name).map_err(err)?,
        })
    }

    /// Load a model from a JSON file.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: PropertyModel::load(path).map_err(err)?,
        })
    }

    /// Build a model from a JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: PropertyModel::from_json(text).map_err(err)?,
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn tolerance(&self) -> f64 {
        self.inner.tolerance().eps()
    }

    fn names(&self) -> Vec<String> {
        self.inner.names().map(str::to_owned).collect()
    }

    fn property_dim(&self, name: &str) -> PyResult<usize> {
        Ok(self.inner.property(name).map_err(err)?.dim())
    }

    /// Partition the registered properties into actual / nonactual /
    /// potential at the state.
    fn classify(&self, state: StateArg) -> PyResult<(Vec<String>, Vec<String>, Vec<String>)> {
        let s = state.resolve(&self.inner)?;
        let c = self.inner.classify(&s).map_err(err)?;
        Ok((c.actual, c.nonactual, c.potential))
    }

    /// Justification value of the formula at the state: `"J"` or `"U"`.
    fn evaluate(&self, formula: &str, state: StateArg) -> PyResult<String> {
        let f = Formula::parse_arg(formula)?;
        let s = state.resolve(&self.inner)?;
        let v = pragmatics::evaluate(&self.inner, &f, &s).map_err(err)?;
        Ok(match v {
            JustificationValue::Justified => "J".to_owned(),
            JustificationValue::Unjustified => "U".to_owned(),
        })
    }

    /// Dimensions of the extension's components (one entry when closed).
    fn extension_dims(&self, formula: &str) -> PyResult<Vec<usize>> {
        let f = Formula::parse_arg(formula)?;
        let ext = pragmatics::pragmatic_extension(&self.inner, &f).map_err(err)?;
        Ok(ext.component_dims())
    }

    /// Justified at every state.
    fn is_p_valid(&self, formula: &str) -> PyResult<bool> {
        pragmatics::p_valid(&self.inner, &Formula::parse_arg(formula)?).map_err(err)
    }

    /// Justified at no state.
    fn is_p_invalid(&self, formula: &str) -> PyResult<bool> {
        pragmatics::p_invalid(&self.inner, &Formula::parse_arg(formula)?).map_err(err)
    }

    /// The pragmatic preorder: the first formula's extension is included in
    /// the second's.
    fn preorder(&self, first: &str, second: &str) -> PyResult<bool> {
        pragmatics::preorder(
            &self.inner,
            &Formula::parse_arg(first)?,
            &Formula::parse_arg(second)?,
        )
        .map_err(err)
    }

    /// Decidability analysis with the per-node criterion trace, as JSON.
    fn decide_json(&self, formula: &str) -> PyResult<String> {
        let report = pragmatics::decide(&self.inner, &Formula::parse_arg(formula)?).map_err(err)?;
        to_json(&report)
    }

    /// Quotient of the depth-bounded `A`-free universe over the given
    /// generating properties (all registered names when omitted), as JSON.
    #[pyo3(signature = (depth=2, props=None))]
    fn quotient_json(&self, depth: usize, props: Option<Vec<String>>) -> PyResult<String> {
        let q = self.build_quotient(depth, props)?;
        to_json(&q.summary())
    }

    /// The same quotient as a Graphviz DOT document.
    #[pyo3(signature = (depth=2, props=None))]
    fn quotient_dot(&self, depth: usize, props: Option<Vec<String>>) -> PyResult<String> {
        Ok(self.build_quotient(depth, props)?.to_dot())
    }

    /// Run the axiom battery (`trials` seeded instantiations per schema) and
    /// return the full report as JSON.
    #[pyo3(signature = (trials=200, seed=0))]
    fn axioms_json(&self, trials: usize, seed: u64) -> PyResult<String> {
        let pool = qprag::axioms::default_pool(&self.inner).map_err(err)?;
        let report = qprag::axioms::verify_axioms(&self.inner, &pool, trials, seed).map_err(err)?;
        to_json(&report)
    }

    /// Sweep the distributivity control schema over the default pool, as
    /// JSON: a witnessed refutation, or a note that the pool commutes.
    fn distributivity_control_json(&self) -> PyResult<String> {
        let pool = qprag::axioms::default_pool(&self.inner).map_err(err)?;
        let report = qprag::axioms::distributivity_control(&self.inner, &pool).map_err(err)?;
        to_json(&report)
    }

    /// Sample quantum-compatible truth assignments at the state and verify
    /// that justified assertions always receive the value 1.
    #[pyo3(signature = (state, count=100, seed=0))]
    fn cc_check(&self, state: StateArg, count: usize, seed: u64) -> PyResult<bool> {
        let s = state.resolve(&self.inner)?;
        let assignments =
            pragmatics::sample_assignments(&self.inner, &s, count, seed).map_err(err)?;
        pragmatics::cc_check(&self.inner, &s, &assignments).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(dim={}, properties={})",
            self.inner.dim(),
            self.inner.property_count()
        )
    }
}

impl Model {
    fn build_quotient(
        &self,
        depth: usize,
        props: Option<Vec<String>>,
    ) -> PyResult<quotient::QuotientLattice> {
        let names: Vec<String> = match props {
            Some(list) => {
                for n in &list {
                    self.inner.property(n).map_err(err)?;
                }
                list
            }
            None => self.inner.names().map(str::to_owned).collect(),
        };
        let universe =
            qprag::formula::enumerate_formulas(&names, depth, qprag::Fragment::PhiAd).map_err(err)?;
        let q = quotient::build_quotient(&self.inner, &universe).map_err(err)?;
        if !quotient::check_isomorphism(&self.inner, &q).map_err(err)? {
            return Err(PyValueError::new_err(
                "the quotient is not isomorphic to the subspace lattice",
            ));
        }
        Ok(q)
    }
}

#[pymodule]
fn qprag_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_class::<Formula>()?;
    Ok(())
}
