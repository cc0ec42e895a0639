//! Quotient of the `A`-free fragment by extensional equivalence.
//!
//! Formulas in the `A`-free fragment all have closed extensions, so grouping
//! them by equality of extensions yields finitely many classes per model.
//! The classes ordered by extension inclusion form a lattice isomorphic to
//! the lattice of closed subspaces generated by the registered properties:
//! `N` matches orthocomplement, `K` matches meet, and `Aq` matches join.
//! `check_isomorphism` verifies exactly that, and lattice terms over the
//! property names can be translated to formulas and evaluated on both sides.

use std::fmt;

use serde::Serialize;

use crate::extension::Extension;
use crate::formula::AssertiveFormula;
use crate::model::PropertyModel;
use crate::pragmatics::pragmatic_extension;
use crate::subspace::Subspace;
use crate::{Error, Result};

/// One equivalence class of formulas with a common extension.
#[derive(Debug, Clone)]
pub struct EquivalenceClass {
    /// Canonical member: an elementary assertion when the class has one,
    /// otherwise the first member encountered.
    pub representative: AssertiveFormula,
    pub members: Vec<AssertiveFormula>,
    pub extension: Extension,
}

/// The partition of a formula family by extensional equivalence, with the
/// inclusion order between classes.
#[derive(Debug, Clone)]
pub struct QuotientLattice {
    pub classes: Vec<EquivalenceClass>,
    /// `order[i][j]` iff class `i`'s extension is included in class `j`'s.
    pub order: Vec<Vec<bool>>,
}

impl QuotientLattice {
    /// Index of the class containing the formula, if any.
    pub fn class_of(&self, m: &PropertyModel, f: &AssertiveFormula) -> Result<Option<usize>> {
        let ext = pragmatic_extension(m, f)?;
        for (i, c) in self.classes.iter().enumerate() {
            if c.extension.equals(&ext, m.tolerance())? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    /// True when there are no classes.
    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Hasse covers of the inclusion order: pairs `(i, j)` where `i < j`
    /// strictly with nothing in between.
    fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.classes.len();
        let strict = |i: usize, j: usize| self.order[i][j] && !self.order[j][i];
        let mut covers = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if strict(i, j) && !(0..n).any(|k| strict(i, k) && strict(k, j)) {
                    covers.push((i, j));
                }
            }
        }
        covers
    }

    /// Graphviz rendering of the Hasse diagram, bottom to top.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quotient {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, c) in self.classes.iter().enumerate() {
            let dims = c
                .extension
                .component_dims()
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "  c{} [label=\"{} (dim {}; {} members)\"];\n",
                i,
                escape_dot(&c.representative.to_string()),
                dims,
                c.members.len()
            ));
        }
        for (i, j) in self.covers() {
            out.push_str(&format!("  c{i} -> c{j};\n"));
        }
        out.push_str("}\n");
        out
    }

    /// Serializable summary: representatives, class sizes and the strict
    /// inclusion pairs.
    pub fn summary(&self) -> QuotientSummary {
        let classes = self
            .classes
            .iter()
            .map(|c| ClassSummary {
                representative: c.representative.to_string(),
                extension_dim: c.extension.component_dims().first().copied().unwrap_or(0),
                members_count: c.members.len(),
            })
            .collect();
        let n = self.classes.len();
        let mut order_pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.order[i][j] {
                    order_pairs.push([i, j]);
                }
            }
        }
        QuotientSummary {
            classes,
            order_pairs,
        }
    }
}

/// Serializable view of one class.
#[derive(Debug, Clone, Serialize)]
pub struct ClassSummary {
    pub representative: String,
    pub extension_dim: usize,
    pub members_count: usize,
}

/// Serializable view of the whole quotient.
#[derive(Debug, Clone, Serialize)]
pub struct QuotientSummary {
    pub classes: Vec<ClassSummary>,
    /// Pairs `[i, j]` with class `i` included in class `j`, `i ≠ j`.
    pub order_pairs: Vec<[usize; 2]>,
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Group the formulas by extensional equivalence and compute the inclusion
/// order. Every formula must lie in the `A`-free fragment; the elementary
/// assertion of each registered property is adjoined so each property is
/// represented even when absent from the input family.
pub fn build_quotient(m: &PropertyModel, formulas: &[AssertiveFormula]) -> Result<QuotientLattice> {
    let tol = m.tolerance();
    let mut family: Vec<AssertiveFormula> = Vec::new();
    for name in m.names() {
        family.push(AssertiveFormula::elementary(name)?);
    }
    for f in formulas {
        if !f.in_phi_ad() {
            return Err(Error::OutsideDecidableFragment(f.to_string()));
        }
        family.push(f.clone());
    }

    let mut classes: Vec<EquivalenceClass> = Vec::new();
    for f in family {
        let ext = pragmatic_extension(m, &f)?;
        let mut placed = false;
        for c in classes.iter_mut() {
            if c.extension.equals(&ext, tol)? {
                if c.members.iter().any(|g| g == &f) {
                    placed = true;
                    break;
                }
                // Prefer an elementary representative.
                if matches!(f, AssertiveFormula::Assert(_))
                    && !matches!(c.representative, AssertiveFormula::Assert(_))
                {
                    c.representative = f.clone();
                }
                c.members.push(f.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(EquivalenceClass {
                representative: f.clone(),
                members: vec![f],
                extension: ext,
            });
        }
    }

    let n = classes.len();
    let mut order = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            order[i][j] = classes[j].extension.includes(&classes[i].extension, tol)?;
        }
    }
    Ok(QuotientLattice { classes, order })
}

/// Verify that the quotient is isomorphic, as an ortholattice, to the
/// subspace lattice of the class extensions: the map class ↦ subspace must
/// be injective and order-reflecting both ways, and the connectives `N`,
/// `K`, `Aq` on representatives must land in the classes of the complement,
/// meet and join of the corresponding subspaces.
pub fn check_isomorphism(m: &PropertyModel, q: &QuotientLattice) -> Result<bool> {
    let tol = m.tolerance();
    let n = q.classes.len();
    let mut subspaces: Vec<Subspace> = Vec::with_capacity(n);
    for c in &q.classes {
        if !c.extension.is_closed() {
            return Ok(false);
        }
        subspaces.push(c.extension.closure(tol)?);
    }
    // Injectivity of the map into subspaces.
    for i in 0..n {
        for j in (i + 1)..n {
            if subspaces[i].equals(&subspaces[j], tol)? {
                return Ok(false);
            }
        }
    }
    // Order agreement in both directions.
    for i in 0..n {
        for j in 0..n {
            if q.order[i][j] != subspaces[j].includes(&subspaces[i], tol)? {
                return Ok(false);
            }
        }
    }
    // The connectives commute with the map.
    let locate = |ext: &Extension| -> Result<Option<usize>> {
        for (k, c) in q.classes.iter().enumerate() {
            if c.extension.equals(ext, tol)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    };
    for i in 0..n {
        let fi = q.classes[i].representative.clone();
        let neg = pragmatic_extension(m, &fi.clone().negation())?;
        match locate(&neg)? {
            Some(k) => {
                if !subspaces[k].equals(&subspaces[i].complement(tol), tol)? {
                    return Ok(false);
                }
            }
            None => return Ok(false),
        }
        for j in 0..n {
            let fj = q.classes[j].representative.clone();
            let conj = pragmatic_extension(m, &fi.clone().conjunction(fj.clone()))?;
            match locate(&conj)? {
                Some(k) => {
                    if !subspaces[k].equals(&subspaces[i].meet(&subspaces[j], tol)?, tol)? {
                        return Ok(false);
                    }
                }
                None => return Ok(false),
            }
            let disj = pragmatic_extension(m, &fi.clone().disjunction_q(fj.clone()))?;
            match locate(&disj)? {
                Some(k) => {
                    if !subspaces[k].equals(&subspaces[i].join(&subspaces[j], tol)?, tol)? {
                        return Ok(false);
                    }
                }
                None => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// A term of the subspace-lattice signature over registered property names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeTerm {
    Prop(String),
    Comp(Box<LatticeTerm>),
    Meet(Box<LatticeTerm>, Box<LatticeTerm>),
    Join(Box<LatticeTerm>, Box<LatticeTerm>),
}

impl LatticeTerm {
    /// Parse a lattice term. Complement is the postfix `⊥` or `'`; meet is
    /// the infix `⋒` or `&`; join is `⋓` or `|`. Chains of one operator
    /// associate left; mixing operators requires parentheses.
    pub fn parse(text: &str) -> Result<Self> {
        LatticeParser::new(text).parse_complete()
    }

    /// Translate to a formula: properties become elementary assertions,
    /// complement becomes `N`, meet `K`, join `Aq`.
    pub fn to_formula(&self) -> Result<AssertiveFormula> {
        Ok(match self {
            LatticeTerm::Prop(name) => AssertiveFormula::elementary(name)?,
            LatticeTerm::Comp(t) => t.to_formula()?.negation(),
            LatticeTerm::Meet(a, b) => a.to_formula()?.conjunction(b.to_formula()?),
            LatticeTerm::Join(a, b) => a.to_formula()?.disjunction_q(b.to_formula()?),
        })
    }

    /// Evaluate directly in the subspace lattice of the model.
    pub fn eval(&self, m: &PropertyModel) -> Result<Subspace> {
        let tol = m.tolerance();
        Ok(match self {
            LatticeTerm::Prop(name) => m.property(name)?.clone(),
            LatticeTerm::Comp(t) => t.eval(m)?.complement(tol),
            LatticeTerm::Meet(a, b) => a.eval(m)?.meet(&b.eval(m)?, tol)?,
            LatticeTerm::Join(a, b) => a.eval(m)?.join(&b.eval(m)?, tol)?,
        })
    }
}

impl fmt::Display for LatticeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeTerm::Prop(name) => write!(f, "{name}"),
            LatticeTerm::Comp(t) => match **t {
                LatticeTerm::Prop(_) => write!(f, "{t}'"),
                _ => write!(f, "({t})'"),
            },
            LatticeTerm::Meet(a, b) => write!(f, "({a} & {b})"),
            LatticeTerm::Join(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

struct LatticeParser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    len: usize,
}

impl<'a> LatticeParser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            chars: text.char_indices().peekable(),
            len: text.len(),
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn pos(&mut self) -> usize {
        self.chars.peek().map(|(i, _)| *i).unwrap_or(self.len)
    }

    fn parse_complete(&mut self) -> Result<LatticeTerm> {
        let t = self.parse_term()?;
        self.skip_ws();
        if let Some((i, c)) = self.chars.peek().copied() {
            return Err(Error::Parse {
                position: i,
                message: format!("unexpected `{c}` after a complete term"),
            });
        }
        Ok(t)
    }

    fn parse_term(&mut self) -> Result<LatticeTerm> {
        let first = self.parse_atom()?;
        self.skip_ws();
        let op = match self.chars.peek().copied() {
            Some((_, c)) if c == '&' || c == '⋒' => '&',
            Some((_, c)) if c == '|' || c == '⋓' => '|',
            _ => return Ok(first),
        };
        let mut acc = first;
        loop {
            self.skip_ws();
            match self.chars.peek().copied() {
                Some((i, c)) if c == '&' || c == '⋒' || c == '|' || c == '⋓' => {
                    let this = if c == '&' || c == '⋒' { '&' } else { '|' };
                    if this != op {
                        return Err(Error::Parse {
                            position: i,
                            message: "mixed lattice operators need parentheses".into(),
                        });
                    }
                    self.chars.next();
                    let rhs = self.parse_atom()?;
                    acc = if op == '&' {
                        LatticeTerm::Meet(Box::new(acc), Box::new(rhs))
                    } else {
                        LatticeTerm::Join(Box::new(acc), Box::new(rhs))
                    };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_atom(&mut self) -> Result<LatticeTerm> {
        self.skip_ws();
        let mut base = match self.chars.peek().copied() {
            Some((_, '(')) => {
                self.chars.next();
                let inner = self.parse_term()?;
                self.skip_ws();
                match self.chars.next() {
                    Some((_, ')')) => inner,
                    other => {
                        let position = other.map(|(i, _)| i).unwrap_or(self.len);
                        return Err(Error::Parse {
                            position,
                            message: "expected `)`".into(),
                        });
                    }
                }
            }
            Some((i, c)) if crate::formula::is_ident_char(c) => {
                let mut name = String::new();
                while matches!(self.chars.peek(), Some((_, c)) if crate::formula::is_ident_char(*c))
                {
                    name.push(self.chars.next().unwrap().1);
                }
                let _ = i;
                LatticeTerm::Prop(name)
            }
            other => {
                let position = other.map(|(i, _)| i).unwrap_or(self.len);
                return Err(Error::Parse {
                    position,
                    message: "expected a property name or `(`".into(),
                });
            }
        };
        loop {
            self.skip_ws();
            match self.chars.peek().copied() {
                Some((_, c)) if c == '\'' || c == '⊥' => {
                    self.chars.next();
                    base = LatticeTerm::Comp(Box::new(base));
                }
                _ => break,
            }
        }
        let _ = self.pos();
        Ok(base)
    }
}
