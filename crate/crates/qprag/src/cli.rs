//! Command-line front end.
//!
//! Subcommands: `eval`, `validity`, `decide`, `quotient`, `axioms`,
//! `model-check`. Models come from a JSON file or the built-in `qubit` /
//! `qutrit` registries. Output is plain text or JSON (`quotient` also
//! renders Graphviz DOT), and identical invocations produce byte-identical
//! output; commands that sample print the seed they used.
//!
//! Exit codes: 0 success, 2 formula or state parse error, 3 model or
//! configuration error, 4 failed axiom battery or internal consistency
//! violation.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde::Serialize;

use crate::axioms::{
    default_pool, distributivity_control, find_nonclosed_disjunction, find_tertium_counterexample,
    verify_axioms, AxiomReport, CounterexampleReport,
};
use crate::formula::{enumerate_formulas, AssertiveFormula, Fragment};
use crate::model::PropertyModel;
use crate::pragmatics::{
    cc_check, decide, evaluate, p_invalid, p_valid, pdl_check, pragmatic_extension,
    sample_assignments, DecidabilityReport,
};
use crate::quotient::{build_quotient, check_isomorphism, QuotientSummary};
use crate::subspace::Tolerance;
use crate::{Error, Result};

/// Workbench for pragmatic quantum logic over finite-dimensional Hilbert
/// spaces.
#[derive(Debug, Parser)]
#[command(name = "qprag", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Model selection and numeric tolerance, shared by every subcommand.
#[derive(Debug, Args)]
struct ModelArgs {
    /// Model: `qubit`, `qutrit`, or a path to a model JSON file.
    #[arg(long)]
    model: String,
    /// Override the comparison tolerance (must be in (0, 1e-3]).
    #[arg(long)]
    tol: Option<f64>,
}

impl ModelArgs {
    fn load(&self) -> Result<PropertyModel> {
        let mut m = match self.model.as_str() {
            "qubit" | "qutrit" => PropertyModel::standard(&self.model)?,
            path => PropertyModel::load(path)?,
        };
        if let Some(eps) = self.tol {
            if !(eps > 0.0 && eps <= 1e-3) {
                return Err(Error::InvalidTolerance(eps));
            }
            m.set_tolerance(Tolerance::new(eps)?);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextJsonDot {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a formula's justification value at a state.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        /// State: `ray-of:<property>` or `vector:[re,im;re,im;...]`.
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
        /// The assertive formula, e.g. `(|-Ez+(x) K N |-Ex+(x))`.
        formula: String,
    },
    /// Report whether a formula is p-valid, p-invalid, or contingent.
    Validity {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
        formula: String,
    },
    /// Analyze pragmatic decidability of a formula with a criterion trace.
    Decide {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
        formula: String,
    },
    /// Build the quotient of the `A`-free fragment by extensional
    /// equivalence and verify its lattice structure.
    Quotient {
        #[command(flatten)]
        model: ModelArgs,
        /// Formula nesting depth of the enumerated universe.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Comma-separated generating properties (default: all registered).
        #[arg(long)]
        props: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: TextJsonDot,
    },
    /// Run the axiom battery and the distributivity control.
    Axioms {
        #[command(flatten)]
        model: ModelArgs,
        /// Instantiations sampled per schema.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
    },
    /// Validate a model and probe its quantum signature: excluded-middle
    /// failures, non-closed disjunctions, order/implication agreement, and
    /// sampled-assignment compatibility.
    ModelCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
    },
}

/// Entry point for the binary.
pub fn run() -> i32 {
    let mut stdout = std::io::stdout();
    run_from(std::env::args_os(), &mut stdout)
}

/// Run with explicit arguments and output sink; returns the exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => 2,
        Error::Inconsistency(_) => 4,
        _ => 3,
    }
}

#[derive(Debug, Serialize)]
struct EvalOutput {
    formula: String,
    state: Vec<[f64; 2]>,
    value: String,
    component_dims: Vec<usize>,
    /// Referenced property → actual | nonactual | potential at the state.
    classification: BTreeMap<String, String>,
}

#[derive(Debug, Serialize)]
struct ValidityOutput {
    formula: String,
    verdict: String,
    component_dims: Vec<usize>,
}

#[derive(Debug, Serialize)]
struct QuotientOutput {
    generators: Vec<String>,
    depth: usize,
    universe_size: usize,
    #[serde(flatten)]
    summary: QuotientSummary,
    isomorphic_to_subspace_lattice: bool,
}

#[derive(Debug, Serialize)]
struct AxiomsOutput {
    #[serde(flatten)]
    report: AxiomReport,
    distributivity_control: CounterexampleReport,
}

#[derive(Debug, Serialize)]
struct ModelCheckOutput {
    dim: usize,
    tolerance: f64,
    /// Property name → subspace dimension.
    properties: BTreeMap<String, usize>,
    seed: u64,
    excluded_middle_failure: Option<CounterexampleReport>,
    nonclosed_disjunction: Option<CounterexampleReport>,
    /// Ordered elementary pairs where the preorder was cross-checked against
    /// p-validity of the implication.
    implication_pairs_checked: usize,
    assignment_states: usize,
    assignments_per_state: usize,
    assignments_compatible: bool,
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Eval {
            model,
            state,
            format,
            formula,
        } => {
            let m = model.load()?;
            let f = AssertiveFormula::parse(&formula)?;
            let s = m.parse_state_spec(&state)?;
            let value = evaluate(&m, &f, &s)?;
            let ext = pragmatic_extension(&m, &f)?;
            let classes = m.classify(&s)?;
            let mut classification = BTreeMap::new();
            for name in f.property_names() {
                let status = if classes.actual.iter().any(|n| n == name) {
                    "actual"
                } else if classes.nonactual.iter().any(|n| n == name) {
                    "nonactual"
                } else {
                    "potential"
                };
                classification.insert(name.to_owned(), status.to_owned());
            }
            let output = EvalOutput {
                formula: f.to_string(),
                state: s.to_pairs(),
                value: value.to_string(),
                component_dims: ext.component_dims(),
                classification,
            };
            match format {
                TextOrJson::Json => writeln!(out, "{}", serde_json::to_string_pretty(&output)?)?,
                TextOrJson::Text => {
                    writeln!(out, "formula: {}", output.formula)?;
                    writeln!(out, "value: {}", output.value)?;
                    writeln!(out, "extension components (dims): {:?}", output.component_dims)?;
                    for (name, status) in &output.classification {
                        writeln!(out, "  {name}: {status}")?;
                    }
                }
            }
            Ok(0)
        }
        Command::Validity {
            model,
            format,
            formula,
        } => {
            let m = model.load()?;
            let f = AssertiveFormula::parse(&formula)?;
            let verdict = if p_valid(&m, &f)? {
                "p-valid"
            } else if p_invalid(&m, &f)? {
                "p-invalid"
            } else {
                "contingent"
            };
            let ext = pragmatic_extension(&m, &f)?;
            let output = ValidityOutput {
                formula: f.to_string(),
                verdict: verdict.to_owned(),
                component_dims: ext.component_dims(),
            };
            match format {
                TextOrJson::Json => writeln!(out, "{}", serde_json::to_string_pretty(&output)?)?,
                TextOrJson::Text => {
                    writeln!(out, "formula: {}", output.formula)?;
                    writeln!(out, "verdict: {}", output.verdict)?;
                    writeln!(out, "extension components (dims): {:?}", output.component_dims)?;
                }
            }
            Ok(0)
        }
        Command::Decide {
            model,
            format,
            formula,
        } => {
            let m = model.load()?;
            let f = AssertiveFormula::parse(&formula)?;
            let report = decide(&m, &f)?;
            match format {
                TextOrJson::Json => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
                TextOrJson::Text => render_decide_text(out, &report)?,
            }
            Ok(0)
        }
        Command::Quotient {
            model,
            depth,
            props,
            format,
        } => {
            let m = model.load()?;
            let generators: Vec<String> = match props {
                Some(list) => {
                    let names: Vec<String> =
                        list.split(',').map(|s| s.trim().to_owned()).collect();
                    for n in &names {
                        m.property(n)?;
                    }
                    names
                }
                None => m.names().map(str::to_owned).collect(),
            };
            let universe = enumerate_formulas(&generators, depth, Fragment::PhiAd)?;
            let q = build_quotient(&m, &universe)?;
            let isomorphic = check_isomorphism(&m, &q)?;
            if !isomorphic {
                return Err(Error::Inconsistency(
                    "the quotient is not isomorphic to the subspace lattice".into(),
                ));
            }
            match format {
                TextJsonDot::Dot => write!(out, "{}", q.to_dot())?,
                TextJsonDot::Json => {
                    let output = QuotientOutput {
                        generators,
                        depth,
                        universe_size: universe.len(),
                        summary: q.summary(),
                        isomorphic_to_subspace_lattice: isomorphic,
                    };
                    writeln!(out, "{}", serde_json::to_string_pretty(&output)?)?;
                }
                TextJsonDot::Text => {
                    writeln!(out, "generators: {}", generators.join(", "))?;
                    writeln!(out, "universe: {} formulas at depth <= {depth}", universe.len())?;
                    writeln!(out, "classes: {}", q.len())?;
                    for (i, c) in q.classes.iter().enumerate() {
                        writeln!(
                            out,
                            "  [{i}] {} (dim {:?}, {} members)",
                            c.representative,
                            c.extension.component_dims(),
                            c.members.len()
                        )?;
                    }
                    writeln!(out, "isomorphic to the subspace lattice: yes")?;
                }
            }
            Ok(0)
        }
        Command::Axioms {
            model,
            trials,
            seed,
            format,
        } => {
            let m = model.load()?;
            let pool = default_pool(&m)?;
            let report = verify_axioms(&m, &pool, trials, seed)?;
            let control = distributivity_control(&m, &pool)?;
            let all_valid = report.all_valid;
            let output = AxiomsOutput {
                report,
                distributivity_control: control,
            };
            match format {
                TextOrJson::Json => writeln!(out, "{}", serde_json::to_string_pretty(&output)?)?,
                TextOrJson::Text => render_axioms_text(out, &output)?,
            }
            Ok(if all_valid { 0 } else { 4 })
        }
        Command::ModelCheck {
            model,
            seed,
            format,
        } => {
            let m = model.load()?;
            let tertium = find_tertium_counterexample(&m)?;
            let nonclosed = find_nonclosed_disjunction(&m)?;

            // Cross-check the preorder against implication validity on every
            // ordered pair of elementary assertions; a mismatch is an
            // internal inconsistency.
            let names: Vec<String> = m.names().map(str::to_owned).collect();
            let mut pairs = 0usize;
            for a in &names {
                for b in &names {
                    let fa = AssertiveFormula::elementary(a)?;
                    let fb = AssertiveFormula::elementary(b)?;
                    pdl_check(&m, &fa, &fb)?;
                    pairs += 1;
                }
            }

            // Sampled assignments must stay compatible with justification.
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let states = 5usize;
            let per_state = 20usize;
            let mut compatible = true;
            for i in 0..states {
                let s = crate::model::StateRef::random(m.dim(), &mut rng)?;
                let assignments = sample_assignments(&m, &s, per_state, seed.wrapping_add(i as u64))?;
                if !cc_check(&m, &s, &assignments)? {
                    compatible = false;
                }
            }
            if !compatible {
                return Err(Error::Inconsistency(
                    "a sampled assignment contradicts a justified assertion".into(),
                ));
            }

            let output = ModelCheckOutput {
                dim: m.dim(),
                tolerance: m.tolerance().eps(),
                properties: m
                    .names()
                    .map(|n| (n.to_owned(), m.property(n).map(|s| s.dim()).unwrap_or(0)))
                    .collect(),
                seed,
                excluded_middle_failure: tertium,
                nonclosed_disjunction: nonclosed,
                implication_pairs_checked: pairs,
                assignment_states: states,
                assignments_per_state: per_state,
                assignments_compatible: compatible,
            };
            match format {
                TextOrJson::Json => writeln!(out, "{}", serde_json::to_string_pretty(&output)?)?,
                TextOrJson::Text => render_model_check_text(out, &output)?,
            }
            Ok(0)
        }
    }
}

fn render_decide_text(out: &mut dyn Write, report: &DecidabilityReport) -> Result<()> {
    writeln!(out, "formula: {}", report.formula)?;
    writeln!(
        out,
        "decidable: {}",
        if report.decidable { "yes" } else { "no" }
    )?;
    writeln!(
        out,
        "extension components (dims): {:?}",
        report.witness_extension.component_dims()
    )?;
    writeln!(out, "criterion trace:")?;
    for entry in &report.criterion_trace {
        let label = match &entry.applied {
            crate::pragmatics::AppliedCriterion::C1Elementary => "C1".to_owned(),
            crate::pragmatics::AppliedCriterion::C2Negation => "C2".to_owned(),
            crate::pragmatics::AppliedCriterion::C3Conjunction { .. } => "C3".to_owned(),
            crate::pragmatics::AppliedCriterion::C4Disjunction {
                left_in_right,
                right_in_left,
            } => format!("C4(left⊆right: {left_in_right}, right⊆left: {right_in_left})"),
        };
        writeln!(
            out,
            "  {} {} -> {}",
            label,
            entry.subformula,
            if entry.closed { "closed" } else { "not closed" }
        )?;
    }
    Ok(())
}

fn render_axioms_text(out: &mut dyn Write, output: &AxiomsOutput) -> Result<()> {
    let r = &output.report;
    writeln!(out, "model: dim {} with {} properties", r.dim, r.properties.len())?;
    writeln!(out, "seed: {}", r.seed)?;
    writeln!(out, "trials per schema: {}", r.trials_per_schema)?;
    for sr in &r.results {
        writeln!(
            out,
            "{}: {} = {}/{} failures",
            sr.schema,
            sr.template,
            sr.failures,
            sr.trials
        )?;
        for ce in &sr.counterexamples {
            writeln!(out, "  counterexample: {}", ce.formulas[0])?;
            if let Some(w) = &ce.witness_state {
                writeln!(out, "    witness state: {}", render_state(w))?;
            }
            for (f, v) in &ce.evaluations {
                writeln!(out, "    {f} = {v}")?;
            }
        }
    }
    writeln!(
        out,
        "all schemas valid: {}",
        if r.all_valid { "yes" } else { "no" }
    )?;
    let c = &output.distributivity_control;
    writeln!(out, "distributivity control: {}", c.notes)?;
    if let Some(w) = &c.witness_state {
        writeln!(out, "  instance: {}", c.formulas[0])?;
        writeln!(out, "  witness state: {}", render_state(w))?;
        for (f, v) in &c.evaluations {
            writeln!(out, "    {f} = {v}")?;
        }
    }
    Ok(())
}

fn render_model_check_text(out: &mut dyn Write, output: &ModelCheckOutput) -> Result<()> {
    writeln!(out, "dim: {}", output.dim)?;
    writeln!(out, "tolerance: {:e}", output.tolerance)?;
    writeln!(out, "seed: {}", output.seed)?;
    writeln!(out, "properties:")?;
    for (name, dim) in &output.properties {
        writeln!(out, "  {name}: dim {dim}")?;
    }
    match &output.excluded_middle_failure {
        Some(ce) => {
            writeln!(out, "excluded middle fails: {}", ce.notes)?;
            if let Some(w) = &ce.witness_state {
                writeln!(out, "  witness state: {}", render_state(w))?;
            }
        }
        None => writeln!(
            out,
            "excluded middle holds everywhere (no property is both nonzero and proper)"
        )?,
    }
    match &output.nonclosed_disjunction {
        Some(ce) => {
            writeln!(out, "non-closed disjunction: {}", ce.notes)?;
            if let Some(w) = &ce.witness_state {
                writeln!(out, "  witness state: {}", render_state(w))?;
            }
        }
        None => writeln!(out, "every pairwise disjunction of properties is closed")?,
    }
    writeln!(
        out,
        "order vs implication agreement: {} elementary pairs checked",
        output.implication_pairs_checked
    )?;
    writeln!(
        out,
        "sampled assignments compatible: {} ({} states x {} assignments)",
        if output.assignments_compatible {
            "yes"
        } else {
            "no"
        },
        output.assignment_states,
        output.assignments_per_state
    )?;
    Ok(())
}

fn render_state(pairs: &[[f64; 2]]) -> String {
    let body = pairs
        .iter()
        .map(|p| format!("{:.6}{}{:.6}i", p[0], if p[1] < 0.0 { "" } else { "+" }, p[1]))
        .collect::<Vec<_>>()
        .join(", ");
    format!("({body})")
}
