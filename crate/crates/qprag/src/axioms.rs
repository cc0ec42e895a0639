//! Axiom schemas of the assertive calculus and counterexample searches.
//!
//! Nine schemas are checked by seeded random instantiation over a pool of
//! argument formulas. Instantiations are p-valid or not, and each failure is
//! reported with the instantiated formula, a witness state where the
//! antecedent is justified but the consequent is not, and the justification
//! values at that state.
//!
//! Schemas whose outer implication internalizes a meta-level rule —
//! transitivity of the implication (`A7`), contraposition (`A8`) and the
//! orthomodular exchange (`A9`) — admit counterexamples over skew rays, and
//! this module finds them; the remaining schemas hold at every
//! instantiation. A distributivity schema is included as a control: it
//! fails exactly on pools whose subspaces do not pairwise commute.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::extension::Extension;
use crate::formula::AssertiveFormula;
use crate::model::{PropertyModel, StateRef};
use crate::pragmatics::{evaluate, p_valid, pragmatic_extension};
use crate::subspace::{CVector, C64};
use crate::{Error, Result};

/// Identifier of a checked schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchemaId {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    /// The distributivity control schema, not part of the axiom list.
    Distributivity,
}

impl std::fmt::Display for SchemaId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SchemaId::Distributivity => write!(f, "DIST"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// A schema body over numbered argument slots.
#[derive(Debug, Clone)]
pub enum Template {
    Var(usize),
    Not(Box<Template>),
    And(Box<Template>, Box<Template>),
    OrQ(Box<Template>, Box<Template>),
    ImpQ(Box<Template>, Box<Template>),
}

impl Template {
    fn var(i: usize) -> Self {
        Template::Var(i)
    }

    fn not(self) -> Self {
        Template::Not(Box::new(self))
    }

    fn and(self, other: Self) -> Self {
        Template::And(Box::new(self), Box::new(other))
    }

    fn or_q(self, other: Self) -> Self {
        Template::OrQ(Box::new(self), Box::new(other))
    }

    fn imp_q(self, other: Self) -> Self {
        Template::ImpQ(Box::new(self), Box::new(other))
    }

    /// Substitute the arguments for the variable slots, desugaring the
    /// quantum connectives.
    pub fn instantiate(&self, args: &[AssertiveFormula]) -> Result<AssertiveFormula> {
        Ok(match self {
            Template::Var(i) => args
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::ArityMismatch {
                    schema: "template".into(),
                    expected: i + 1,
                    got: args.len(),
                })?,
            Template::Not(t) => t.instantiate(args)?.negation(),
            Template::And(a, b) => a.instantiate(args)?.conjunction(b.instantiate(args)?),
            Template::OrQ(a, b) => a.instantiate(args)?.disjunction_q(b.instantiate(args)?),
            Template::ImpQ(a, b) => a.instantiate(args)?.implication_q(b.instantiate(args)?),
        })
    }

    /// Render with placeholder names `d1`, `d2`, ... and sugared quantum
    /// connectives.
    pub fn render(&self) -> String {
        match self {
            Template::Var(i) => format!("d{}", i + 1),
            Template::Not(t) => format!("N {}", t.render()),
            Template::And(a, b) => format!("({} K {})", a.render(), b.render()),
            Template::OrQ(a, b) => format!("({} Aq {})", a.render(), b.render()),
            Template::ImpQ(a, b) => format!("({} Iq {})", a.render(), b.render()),
        }
    }

    /// The antecedent and consequent when the outer connective is the
    /// quantum implication.
    fn implication_parts(&self) -> Option<(&Template, &Template)> {
        match self {
            Template::ImpQ(a, b) => Some((a, b)),
            _ => None,
        }
    }
}

/// A named schema with its argument count.
#[derive(Debug, Clone)]
pub struct Schema {
    pub id: SchemaId,
    pub template: Template,
    pub arity: usize,
}

impl Schema {
    /// Instantiate with exactly `arity` arguments.
    pub fn instantiate(&self, args: &[AssertiveFormula]) -> Result<AssertiveFormula> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                schema: self.id.to_string(),
                expected: self.arity,
                got: args.len(),
            });
        }
        self.template.instantiate(args)
    }
}

/// The nine axiom schemas of the calculus.
pub fn schemas() -> Vec<Schema> {
    use Template as T;
    let v = T::var;
    vec![
        Schema {
            id: SchemaId::A1,
            template: v(0).imp_q(v(0)),
            arity: 1,
        },
        Schema {
            id: SchemaId::A2,
            template: v(0).and(v(1)).imp_q(v(0)),
            arity: 2,
        },
        Schema {
            id: SchemaId::A3,
            template: v(0).and(v(1)).imp_q(v(1)),
            arity: 2,
        },
        Schema {
            id: SchemaId::A4,
            template: v(0).imp_q(v(0).not().not()),
            arity: 1,
        },
        Schema {
            id: SchemaId::A5,
            template: v(0).not().not().imp_q(v(0)),
            arity: 1,
        },
        Schema {
            id: SchemaId::A6,
            template: (v(0).imp_q(v(1)).and(v(0).imp_q(v(2))))
                .imp_q(v(0).imp_q(v(1).and(v(2)))),
            arity: 3,
        },
        Schema {
            id: SchemaId::A7,
            template: (v(0).imp_q(v(1)).and(v(1).imp_q(v(2)))).imp_q(v(0).imp_q(v(2))),
            arity: 3,
        },
        Schema {
            id: SchemaId::A8,
            template: v(0)
                .imp_q(v(1))
                .imp_q(v(1).not().imp_q(v(0).not())),
            arity: 2,
        },
        Schema {
            id: SchemaId::A9,
            template: v(0)
                .imp_q(v(1))
                .imp_q(v(1).imp_q(v(0).or_q(v(0).not().and(v(1))))),
            arity: 2,
        },
    ]
}

/// The distributivity control schema
/// `(d1 K (d2 Aq d3)) Iq ((d1 K d2) Aq (d1 K d3))`.
pub fn distributivity_schema() -> Schema {
    use Template as T;
    let v = T::var;
    Schema {
        id: SchemaId::Distributivity,
        template: (v(0).and(v(1).or_q(v(2))))
            .imp_q(v(0).and(v(1)).or_q(v(0).and(v(2)))),
        arity: 3,
    }
}

/// The default instantiation pool: for each registered property, its
/// elementary assertion and that assertion's negation.
pub fn default_pool(m: &PropertyModel) -> Result<Vec<AssertiveFormula>> {
    let mut pool = Vec::with_capacity(2 * m.property_count());
    for name in m.names() {
        let e = AssertiveFormula::elementary(name)?;
        pool.push(e.clone());
        pool.push(e.negation());
    }
    Ok(pool)
}

/// One failed instantiation, or a found counterexample of another kind.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    /// What the counterexample refutes.
    pub kind: String,
    /// The formulas involved, fully instantiated.
    pub formulas: Vec<String>,
    /// A state at which the failure is visible.
    pub witness_state: Option<Vec<[f64; 2]>>,
    /// Justification values of the involved formulas at the witness state.
    pub evaluations: BTreeMap<String, String>,
    pub notes: String,
}

/// Outcome of checking one schema.
#[derive(Debug, Clone, Serialize)]
pub struct SchemaResult {
    pub schema: SchemaId,
    pub template: String,
    pub trials: usize,
    pub failures: usize,
    /// At most five failing instantiations, kept in discovery order.
    pub counterexamples: Vec<CounterexampleReport>,
}

/// Outcome of the full axiom battery on a model.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub dim: usize,
    pub properties: Vec<String>,
    pub seed: u64,
    pub trials_per_schema: usize,
    pub results: Vec<SchemaResult>,
    pub all_valid: bool,
}

const MAX_STORED_COUNTEREXAMPLES: usize = 5;

/// Check every schema by `trials` seeded random instantiations from the
/// pool, with replacement.
pub fn verify_axioms(
    m: &PropertyModel,
    pool: &[AssertiveFormula],
    trials: usize,
    seed: u64,
) -> Result<AxiomReport> {
    if pool.is_empty() {
        return Err(Error::Inconsistency(
            "the instantiation pool is empty".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut results = Vec::new();
    for schema in schemas() {
        let mut failures = 0usize;
        let mut counterexamples = Vec::new();
        for _ in 0..trials {
            let args: Vec<AssertiveFormula> = (0..schema.arity)
                .map(|_| pool[rng.random_range(0..pool.len())].clone())
                .collect();
            let instance = schema.instantiate(&args)?;
            if !p_valid(m, &instance)? {
                failures += 1;
                if counterexamples.len() < MAX_STORED_COUNTEREXAMPLES {
                    counterexamples.push(failure_report(m, &schema, &args, &instance, &mut rng)?);
                }
            }
        }
        results.push(SchemaResult {
            schema: schema.id,
            template: schema.template.render(),
            trials,
            failures,
            counterexamples,
        });
    }
    let all_valid = results.iter().all(|r| r.failures == 0);
    Ok(AxiomReport {
        dim: m.dim(),
        properties: m.names().map(str::to_owned).collect(),
        seed,
        trials_per_schema: trials,
        results,
        all_valid,
    })
}

/// Build the report for one failing instantiation, searching for a witness
/// state where the outer antecedent is justified and the outer consequent is
/// not.
fn failure_report<R: Rng + ?Sized>(
    m: &PropertyModel,
    schema: &Schema,
    args: &[AssertiveFormula],
    instance: &AssertiveFormula,
    rng: &mut R,
) -> Result<CounterexampleReport> {
    let mut formulas: Vec<String> = vec![instance.to_string()];
    formulas.extend(args.iter().map(|a| a.to_string()));

    let mut tracked: Vec<AssertiveFormula> = vec![instance.clone()];
    let witness = if let Some((ante_t, cons_t)) = schema.template.implication_parts() {
        let ante = ante_t.instantiate(args)?;
        let cons = cons_t.instantiate(args)?;
        let w = witness_separating(m, &ante, &cons, rng)?;
        tracked.push(ante);
        tracked.push(cons);
        w
    } else {
        witness_outside(m, &pragmatic_extension(m, instance)?, rng)?
    };

    let mut evaluations = BTreeMap::new();
    if let Some(s) = &witness {
        for f in &tracked {
            evaluations.insert(f.to_string(), evaluate(m, f, s)?.to_string());
        }
    }
    Ok(CounterexampleReport {
        kind: format!("axiom-instance:{}", schema.id),
        formulas,
        witness_state: witness.as_ref().map(StateRef::to_pairs),
        evaluations,
        notes: format!(
            "instantiation of {} = {} is not p-valid",
            schema.id,
            schema.template.render()
        ),
    })
}

/// A state in the antecedent's extension but outside the consequent's, when
/// one exists; falls back to a state outside the full implication's
/// extension.
fn witness_separating<R: Rng + ?Sized>(
    m: &PropertyModel,
    antecedent: &AssertiveFormula,
    consequent: &AssertiveFormula,
    rng: &mut R,
) -> Result<Option<StateRef>> {
    let tol = m.tolerance();
    let ea = pragmatic_extension(m, antecedent)?;
    let ec = pragmatic_extension(m, consequent)?;
    // Basis columns of the antecedent's components are cheap candidates.
    for comp in ea.components() {
        for j in 0..comp.dim() {
            let v: CVector = comp.basis().column(j).into_owned();
            let s = StateRef::new(v)?;
            if !ec.contains_state(&s, tol)? {
                return Ok(Some(s));
            }
        }
    }
    // Random unit vectors inside a component of the antecedent.
    for comp in ea.components() {
        for _ in 0..50 {
            let s = random_state_in(comp.basis(), rng)?;
            if !ec.contains_state(&s, tol)? {
                return Ok(Some(s));
            }
        }
    }
    let whole = pragmatic_extension(m, &antecedent.clone().implication_q(consequent.clone()))?;
    witness_outside(m, &whole, rng)
}

/// A state outside the extension, when one exists: a basis vector of the
/// closure's complement if the closure is proper, otherwise seeded random
/// sampling (the extension of a non-full formula misses almost every state).
fn witness_outside<R: Rng + ?Sized>(
    m: &PropertyModel,
    ext: &Extension,
    rng: &mut R,
) -> Result<Option<StateRef>> {
    if ext.is_full() {
        return Ok(None);
    }
    let tol = m.tolerance();
    let closure = ext.closure(tol)?;
    let gap = closure.complement(tol);
    if gap.dim() > 0 {
        let v: CVector = gap.basis().column(0).into_owned();
        return Ok(Some(StateRef::new(v)?));
    }
    for _ in 0..50 * m.dim() {
        let s = StateRef::random(m.dim(), rng)?;
        if !ext.contains_state(&s, tol)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// A random unit vector in the column span of the basis.
fn random_state_in<R: Rng + ?Sized>(basis: &crate::subspace::CMatrix, rng: &mut R) -> Result<StateRef> {
    use rand_distr::StandardNormal;
    let k = basis.ncols();
    let coeffs = CVector::from_fn(k, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    StateRef::new(basis * coeffs)
}

/// Sweep the pool deterministically for a failing instance of the
/// distributivity control schema. The report says so when every instance is
/// valid, which happens exactly when the pool's subspaces pairwise commute.
pub fn distributivity_control(m: &PropertyModel, pool: &[AssertiveFormula]) -> Result<CounterexampleReport> {
    let schema = distributivity_schema();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for a in pool {
        for b in pool {
            for c in pool {
                let args = [a.clone(), b.clone(), c.clone()];
                let instance = schema.instantiate(&args)?;
                if !p_valid(m, &instance)? {
                    let mut report = failure_report(m, &schema, &args, &instance, &mut rng)?;
                    report.kind = "distributivity-control".into();
                    report.notes = format!(
                        "distributive law fails at ({a}, {b}, {c}); the control schema is refutable on this model"
                    );
                    return Ok(report);
                }
            }
        }
    }
    Ok(CounterexampleReport {
        kind: "distributivity-control".into(),
        formulas: vec![schema.template.render()],
        witness_state: None,
        evaluations: BTreeMap::new(),
        notes: "every pool instantiation of the distributivity schema is p-valid; the pool's subspaces pairwise commute".into(),
    })
}

/// Find a property and a state at which neither the property's assertion
/// nor its negation is justified. Exists whenever some property is a proper
/// nonzero subspace: superpose a vector inside with one outside.
pub fn find_tertium_counterexample(m: &PropertyModel) -> Result<Option<CounterexampleReport>> {
    let tol = m.tolerance();
    for name in m.names() {
        let s = m.property(name)?;
        if s.dim() == 0 || s.dim() == m.dim() {
            continue;
        }
        let inside: CVector = s.basis().column(0).into_owned();
        let outside: CVector = s.complement(tol).basis().column(0).into_owned();
        let state = StateRef::new(inside + outside)?;
        let assertion = AssertiveFormula::elementary(name)?;
        let negation = assertion.clone().negation();
        let va = evaluate(m, &assertion, &state)?;
        let vn = evaluate(m, &negation, &state)?;
        if va == crate::pragmatics::JustificationValue::Unjustified
            && vn == crate::pragmatics::JustificationValue::Unjustified
        {
            let mut evaluations = BTreeMap::new();
            evaluations.insert(assertion.to_string(), va.to_string());
            evaluations.insert(negation.to_string(), vn.to_string());
            return Ok(Some(CounterexampleReport {
                kind: "tertium-non-datur".into(),
                formulas: vec![assertion.to_string(), negation.to_string()],
                witness_state: Some(state.to_pairs()),
                evaluations,
                notes: format!(
                    "`{name}` is potential at the witness state: neither its assertion nor the negation is justified"
                ),
            }));
        }
    }
    Ok(None)
}

/// Find two registered properties whose classical disjunction has a
/// non-closed extension, with a state in the closure but in neither
/// component.
pub fn find_nonclosed_disjunction(m: &PropertyModel) -> Result<Option<CounterexampleReport>> {
    let tol = m.tolerance();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let names: Vec<&str> = m.names().collect();
    for a in &names {
        for b in &names {
            let fa = AssertiveFormula::elementary(*a)?;
            let fb = AssertiveFormula::elementary(*b)?;
            let or = fa.clone().disjunction(fb.clone());
            let ext = pragmatic_extension(m, &or)?;
            if ext.is_closed() {
                continue;
            }
            // A state in the closure but outside the union.
            let closure = ext.closure(tol)?;
            let mut witness = None;
            let candidate = {
                let u: CVector = ext.components()[0].basis().column(0).into_owned();
                let v: CVector = ext.components()[1].basis().column(0).into_owned();
                StateRef::new(u + v)?
            };
            if !ext.contains_state(&candidate, tol)? {
                witness = Some(candidate);
            } else {
                for _ in 0..10 * m.dim() {
                    let s = random_state_in(closure.basis(), &mut rng)?;
                    if !ext.contains_state(&s, tol)? {
                        witness = Some(s);
                        break;
                    }
                }
            }
            let Some(state) = witness else { continue };
            let aq = fa.clone().disjunction_q(fb.clone());
            let mut evaluations = BTreeMap::new();
            for f in [&or, &aq, &fa, &fb] {
                evaluations.insert(f.to_string(), evaluate(m, f, &state)?.to_string());
            }
            return Ok(Some(CounterexampleReport {
                kind: "nonclosed-disjunction".into(),
                formulas: vec![or.to_string(), aq.to_string()],
                witness_state: Some(state.to_pairs()),
                evaluations,
                notes: format!(
                    "the classical disjunction of `{a}` and `{b}` is not closed: the witness state lies in the span of the two properties but in neither"
                ),
            }));
        }
    }
    Ok(None)
}
