//! Justification semantics for assertive formulas.
//!
//! The pragmatic extension of a formula is computed compositionally:
//! elementary assertions denote the one-component extension of their
//! property, `N` takes the extended complement, `K` the intersection and
//! `A` the union. A formula is *justified* at a state exactly when the
//! state belongs to its extension; it is *p-valid* (*p-invalid*) when its
//! extension is the full space (empty).
//!
//! On the `A`-free fragment every extension is a single closed subspace, so
//! assertions there behave like the subspace lattice itself; `decide`
//! reports whether a formula's extension is closed together with a trace of
//! the closure criteria that apply at each node.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::extension::Extension;
use crate::formula::AssertiveFormula;
use crate::model::{PropertyModel, StateRef};
use crate::{Error, Result};

/// The two justification values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum JustificationValue {
    #[serde(rename = "J")]
    Justified,
    #[serde(rename = "U")]
    Unjustified,
}

impl fmt::Display for JustificationValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JustificationValue::Justified => write!(f, "J"),
            JustificationValue::Unjustified => write!(f, "U"),
        }
    }
}

/// The pragmatic extension of a formula in a model.
pub fn pragmatic_extension(m: &PropertyModel, f: &AssertiveFormula) -> Result<Extension> {
    let tol = m.tolerance();
    match f {
        AssertiveFormula::Assert(rf) => m.property_extension(rf.name()),
        AssertiveFormula::Not(a) => pragmatic_extension(m, a)?.complement(tol),
        AssertiveFormula::And(a, b) => {
            pragmatic_extension(m, a)?.intersect(&pragmatic_extension(m, b)?, tol)
        }
        AssertiveFormula::Or(a, b) => {
            pragmatic_extension(m, a)?.union(&pragmatic_extension(m, b)?, tol)
        }
    }
}

/// Evaluate a formula at a state: justified iff the state's ray lies in the
/// formula's extension.
pub fn evaluate(m: &PropertyModel, f: &AssertiveFormula, s: &StateRef) -> Result<JustificationValue> {
    let ext = pragmatic_extension(m, f)?;
    Ok(if ext.contains_state(s, m.tolerance())? {
        JustificationValue::Justified
    } else {
        JustificationValue::Unjustified
    })
}

/// p-valid: justified at every state, i.e. the extension is the full space.
pub fn p_valid(m: &PropertyModel, f: &AssertiveFormula) -> Result<bool> {
    Ok(pragmatic_extension(m, f)?.is_full())
}

/// p-invalid: justified at no state, i.e. the extension is empty.
pub fn p_invalid(m: &PropertyModel, f: &AssertiveFormula) -> Result<bool> {
    Ok(pragmatic_extension(m, f)?.is_empty())
}

/// The pragmatic preorder: `f1 ≺ f2` iff the extension of `f1` is included
/// in the extension of `f2`.
pub fn preorder(m: &PropertyModel, f1: &AssertiveFormula, f2: &AssertiveFormula) -> Result<bool> {
    let e1 = pragmatic_extension(m, f1)?;
    let e2 = pragmatic_extension(m, f2)?;
    e2.includes(&e1, m.tolerance())
}

/// Extensional equivalence: inclusion both ways.
pub fn equivalent(m: &PropertyModel, f1: &AssertiveFormula, f2: &AssertiveFormula) -> Result<bool> {
    Ok(preorder(m, f1, f2)? && preorder(m, f2, f1)?)
}

/// Which closure criterion applies at a node of the formula tree.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "criterion")]
pub enum AppliedCriterion {
    /// Elementary assertions always have closed extensions.
    C1Elementary,
    /// The extended complement of anything is closed.
    C2Negation,
    /// Intersections of closed extensions are closed.
    C3Conjunction { operands_closed: bool },
    /// A disjunction keeps a closed extension exactly when one operand's
    /// extension includes the other's.
    C4Disjunction {
        left_in_right: bool,
        right_in_left: bool,
    },
}

/// One node of the decidability trace, in post-order.
#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry {
    pub subformula: String,
    #[serde(flatten)]
    pub applied: AppliedCriterion,
    /// Whether the subformula's extension is closed.
    pub closed: bool,
}

/// The decidability analysis of a formula.
#[derive(Debug, Clone, Serialize)]
pub struct DecidabilityReport {
    pub formula: String,
    /// True when the extension is a closed set of states, so the assertion
    /// has a truth-valued reading at every state.
    pub decidable: bool,
    pub witness_extension: Extension,
    pub criterion_trace: Vec<TraceEntry>,
}

/// Analyze whether the formula's extension is closed, tracing the closure
/// criteria that fire at each node.
pub fn decide(m: &PropertyModel, f: &AssertiveFormula) -> Result<DecidabilityReport> {
    let mut trace = Vec::new();
    let ext = decide_walk(m, f, &mut trace)?;
    Ok(DecidabilityReport {
        formula: f.to_string(),
        decidable: ext.is_closed(),
        witness_extension: ext,
        criterion_trace: trace,
    })
}

fn decide_walk(
    m: &PropertyModel,
    f: &AssertiveFormula,
    trace: &mut Vec<TraceEntry>,
) -> Result<Extension> {
    let tol = m.tolerance();
    let (ext, applied) = match f {
        AssertiveFormula::Assert(rf) => {
            (m.property_extension(rf.name())?, AppliedCriterion::C1Elementary)
        }
        AssertiveFormula::Not(a) => {
            let ea = decide_walk(m, a, trace)?;
            (ea.complement(tol)?, AppliedCriterion::C2Negation)
        }
        AssertiveFormula::And(a, b) => {
            let ea = decide_walk(m, a, trace)?;
            let eb = decide_walk(m, b, trace)?;
            let operands_closed = ea.is_closed() && eb.is_closed();
            (
                ea.intersect(&eb, tol)?,
                AppliedCriterion::C3Conjunction { operands_closed },
            )
        }
        AssertiveFormula::Or(a, b) => {
            let ea = decide_walk(m, a, trace)?;
            let eb = decide_walk(m, b, trace)?;
            let left_in_right = eb.includes(&ea, tol)?;
            let right_in_left = ea.includes(&eb, tol)?;
            (
                ea.union(&eb, tol)?,
                AppliedCriterion::C4Disjunction {
                    left_in_right,
                    right_in_left,
                },
            )
        }
    };
    trace.push(TraceEntry {
        subformula: f.to_string(),
        applied,
        closed: ext.is_closed(),
    });
    Ok(ext)
}

/// `f1 ≺ f2` for `A`-free formulas, cross-checked against p-validity of the
/// quantum implication `(f1 Iq f2)`. The two computations are provably the
/// same relation; a disagreement indicates a numerical or logical defect and
/// is reported as an internal inconsistency.
pub fn pdl_check(m: &PropertyModel, f1: &AssertiveFormula, f2: &AssertiveFormula) -> Result<bool> {
    if !f1.in_phi_ad() {
        return Err(Error::OutsideDecidableFragment(f1.to_string()));
    }
    if !f2.in_phi_ad() {
        return Err(Error::OutsideDecidableFragment(f2.to_string()));
    }
    let by_order = preorder(m, f1, f2)?;
    let by_validity = p_valid(m, &f1.clone().implication_q(f2.clone()))?;
    if by_order != by_validity {
        return Err(Error::Inconsistency(format!(
            "preorder says {by_order} but p-validity of the implication says {by_validity} for `{f1}` vs `{f2}`"
        )));
    }
    Ok(by_order)
}

/// A truth-value assignment to the registered properties, compatible with
/// quantum mechanics at a fixed state: 1 on actual properties, 0 on
/// nonactual ones, free on potential ones.
#[derive(Debug, Clone, Serialize)]
pub struct Assignment {
    pub state: Vec<[f64; 2]>,
    /// Property name → assigned truth value, covering every registered name.
    pub values: std::collections::BTreeMap<String, bool>,
}

impl Assignment {
    /// Validate an assignment against the state's classification; every
    /// registered property must be covered and the actual/nonactual values
    /// are forced.
    pub fn new(
        m: &PropertyModel,
        state: &StateRef,
        values: std::collections::BTreeMap<String, bool>,
    ) -> Result<Self> {
        let c = m.classify(state)?;
        for name in m.names() {
            let v = values
                .get(name)
                .copied()
                .ok_or_else(|| Error::Inconsistency(format!("assignment misses property `{name}`")))?;
            if c.actual.iter().any(|n| n == name) && !v {
                return Err(Error::Inconsistency(format!(
                    "assignment gives 0 to the actual property `{name}`"
                )));
            }
            if c.nonactual.iter().any(|n| n == name) && v {
                return Err(Error::Inconsistency(format!(
                    "assignment gives 1 to the nonactual property `{name}`"
                )));
            }
        }
        for name in values.keys() {
            m.property(name)?;
        }
        Ok(Self {
            state: state.to_pairs(),
            values,
        })
    }
}

/// Sample `count` quantum-compatible assignments at the state: forced values
/// on actual/nonactual properties, a seeded fair coin on potential ones.
pub fn sample_assignments(
    m: &PropertyModel,
    state: &StateRef,
    count: usize,
    seed: u64,
) -> Result<Vec<Assignment>> {
    let c = m.classify(state)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut values = std::collections::BTreeMap::new();
        for name in &c.actual {
            values.insert(name.clone(), true);
        }
        for name in &c.nonactual {
            values.insert(name.clone(), false);
        }
        for name in &c.potential {
            values.insert(name.clone(), rng.random());
        }
        out.push(Assignment::new(m, state, values)?);
    }
    Ok(out)
}

/// The compatibility condition between justification and truth: whenever an
/// elementary assertion is justified at the state, every assignment in the
/// list gives its property the value 1. Returns true when no violation
/// exists.
pub fn cc_check(m: &PropertyModel, state: &StateRef, assignments: &[Assignment]) -> Result<bool> {
    for name in m.names() {
        let f = AssertiveFormula::elementary(name)?;
        if evaluate(m, &f, state)? == JustificationValue::Justified {
            for a in assignments {
                if !a.values.get(name).copied().unwrap_or(false) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
