//! The assertive formula language.
//!
//! Concrete grammar (UTF-8, whitespace between tokens is optional wherever
//! the tokenization stays unambiguous):
//!
//! ```text
//! af ::= "|-" IDENT "(x)"            elementary assertion of a property
//!      | "N" af                      pragmatic negation
//!      | "(" af "K"  af ")"          pragmatic conjunction
//!      | "(" af "A"  af ")"          pragmatic disjunction
//!      | "(" af "Aq" af ")"          quantum disjunction (defined)
//!      | "(" af "Iq" af ")"          quantum implication (defined)
//! ```
//!
//! `IDENT` is a nonempty run of `A-Z a-z 0-9 _ + -` that is not one of the
//! connective keywords `N K A Aq Iq`. The individual variable is fixed, so
//! every radical formula is written applied to `(x)`.
//!
//! The defined connectives are rewritten into primitives when a formula is
//! built or parsed:
//!
//! * `d1 Aq d2` becomes `N((N d1) K (N d2))`,
//! * `d1 Iq d2` becomes `N((N N d1) K (N (d1 K d2)))`.
//!
//! Printing always emits the canonical fully parenthesized form over the
//! primitive connectives, and the parser accepts everything it prints.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::{Error, Result};

/// A radical formula: a property symbol applied to the fixed individual
/// variable, e.g. `E(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RadicalFormula {
    name: String,
}

impl RadicalFormula {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if !is_valid_property_name(&name) {
            return Err(Error::InvalidPropertyName(name));
        }
        Ok(Self { name })
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

const KEYWORDS: [&str; 5] = ["N", "K", "A", "Aq", "Iq"];

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '+' || c == '-'
}

/// Property names share the `IDENT` token shape and must avoid the
/// connective keywords.
pub fn is_valid_property_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(is_ident_char) && !KEYWORDS.contains(&name)
}

/// An assertive formula over the primitive connectives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AssertiveFormula {
    Assert(RadicalFormula),
    Not(Box<AssertiveFormula>),
    And(Box<AssertiveFormula>, Box<AssertiveFormula>),
    Or(Box<AssertiveFormula>, Box<AssertiveFormula>),
}

use AssertiveFormula::{And, Assert, Not, Or};

impl AssertiveFormula {
    /// The elementary assertion `|-name(x)`.
    pub fn elementary(name: impl Into<String>) -> Result<Self> {
        Ok(Assert(RadicalFormula::new(name)?))
    }

    pub fn negation(self) -> Self {
        Not(Box::new(self))
    }

    pub fn conjunction(self, other: Self) -> Self {
        And(Box::new(self), Box::new(other))
    }

    pub fn disjunction(self, other: Self) -> Self {
        Or(Box::new(self), Box::new(other))
    }

    /// Quantum disjunction `d1 Aq d2 = N((N d1) K (N d2))`, built desugared.
    pub fn disjunction_q(self, other: Self) -> Self {
        self.negation().conjunction(other.negation()).negation()
    }

    /// Quantum implication `d1 Iq d2 = N((N N d1) K (N (d1 K d2)))`, built
    /// desugared.
    pub fn implication_q(self, other: Self) -> Self {
        let nn_left = self.clone().negation().negation();
        let n_and = self.conjunction(other).negation();
        nn_left.conjunction(n_and).negation()
    }

    /// Parse the concrete syntax above.
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text)?.parse_complete()
    }

    /// Whether the formula avoids the connective `A` (the fragment on which
    /// decidability is guaranteed).
    pub fn in_phi_ad(&self) -> bool {
        match self {
            Assert(_) => true,
            Not(a) => a.in_phi_ad(),
            And(a, b) => a.in_phi_ad() && b.in_phi_ad(),
            Or(_, _) => false,
        }
    }

    /// Connective nesting depth: 0 for elementary assertions.
    pub fn depth(&self) -> usize {
        match self {
            Assert(_) => 0,
            Not(a) => 1 + a.depth(),
            And(a, b) | Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// The property names occurring in the formula.
    pub fn property_names(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Assert(rf) => {
                out.insert(rf.name());
            }
            Not(a) => a.collect_names(out),
            And(a, b) | Or(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }
}

impl fmt::Display for AssertiveFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assert(rf) => write!(f, "|-{}(x)", rf.name()),
            Not(a) => write!(f, "N {a}"),
            And(a, b) => write!(f, "({a} K {b})"),
            Or(a, b) => write!(f, "({a} A {b})"),
        }
    }
}

impl FromStr for AssertiveFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Turnstile,
    LParen,
    RParen,
    Keyword(&'static str),
    Ident(String),
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Turnstile => write!(f, "`|-`"),
            Token::LParen => write!(f, "`(`"),
            Token::RParen => write!(f, "`)`"),
            Token::Keyword(k) => write!(f, "`{k}`"),
            Token::Ident(s) => write!(f, "identifier `{s}`"),
        }
    }
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    end: usize,
    pos: usize,
}

fn parse_err(position: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        position,
        message: message.into(),
    }
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i] as char;
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c == '(' {
                tokens.push((Token::LParen, i));
                i += 1;
            } else if c == ')' {
                tokens.push((Token::RParen, i));
                i += 1;
            } else if c == '|' {
                if bytes.get(i + 1) == Some(&b'-') {
                    tokens.push((Token::Turnstile, i));
                    i += 2;
                } else {
                    return Err(parse_err(i, "expected `|-`"));
                }
            } else if is_ident_char(c) {
                let start = i;
                while i < bytes.len() && is_ident_char(bytes[i] as char) {
                    i += 1;
                }
                let word = &text[start..i];
                match KEYWORDS.iter().find(|k| **k == word) {
                    Some(k) => tokens.push((Token::Keyword(k), start)),
                    None => tokens.push((Token::Ident(word.to_string()), start)),
                }
            } else {
                return Err(parse_err(i, format!("unexpected character `{c}`")));
            }
        }
        Ok(Self {
            tokens,
            end: text.len(),
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&(Token, usize)> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<(Token, usize)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn expect(&mut self, want: &Token, what: &str) -> Result<usize> {
        match self.next() {
            Some((t, p)) if t == *want => Ok(p),
            Some((t, p)) => Err(parse_err(p, format!("expected {what}, found {t}"))),
            None => Err(parse_err(self.end, format!("expected {what}, found end of input"))),
        }
    }

    fn parse_complete(&mut self) -> Result<AssertiveFormula> {
        let f = self.parse_af()?;
        if let Some((t, p)) = self.peek() {
            return Err(parse_err(*p, format!("unexpected trailing {t}")));
        }
        Ok(f)
    }

    fn parse_af(&mut self) -> Result<AssertiveFormula> {
        match self.next() {
            Some((Token::Turnstile, _)) => {
                let name = match self.next() {
                    Some((Token::Ident(name), _)) => name,
                    Some((t, p)) => return Err(parse_err(p, format!("expected a property name, found {t}"))),
                    None => return Err(parse_err(self.end, "expected a property name, found end of input")),
                };
                self.expect(&Token::LParen, "`(x)` after the property name")?;
                match self.next() {
                    Some((Token::Ident(v), p)) => {
                        if v != "x" {
                            return Err(parse_err(p, format!("the individual variable is fixed: expected `x`, found `{v}`")));
                        }
                    }
                    Some((t, p)) => return Err(parse_err(p, format!("expected `x`, found {t}"))),
                    None => return Err(parse_err(self.end, "expected `x`, found end of input")),
                }
                self.expect(&Token::RParen, "`)` closing `(x)`")?;
                AssertiveFormula::elementary(name)
            }
            Some((Token::Keyword("N"), _)) => Ok(self.parse_af()?.negation()),
            Some((Token::LParen, _)) => {
                let left = self.parse_af()?;
                let conn = match self.next() {
                    Some((Token::Keyword(k), _)) if k != "N" => k,
                    Some((t, p)) => {
                        return Err(parse_err(p, format!("expected a connective `K`, `A`, `Aq` or `Iq`, found {t}")))
                    }
                    None => {
                        return Err(parse_err(self.end, "expected a connective `K`, `A`, `Aq` or `Iq`, found end of input"))
                    }
                };
                let right = self.parse_af()?;
                self.expect(&Token::RParen, "`)` closing the compound formula")?;
                Ok(match conn {
                    "K" => left.conjunction(right),
                    "A" => left.disjunction(right),
                    "Aq" => left.disjunction_q(right),
                    "Iq" => left.implication_q(right),
                    _ => unreachable!("`N` was excluded above"),
                })
            }
            Some((t, p)) => Err(parse_err(p, format!("expected a formula, found {t}"))),
            None => Err(parse_err(self.here(), "expected a formula, found end of input")),
        }
    }
}

/// Which sublanguage an enumeration or random draw ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    /// All connectives `N`, `K`, `A`.
    Full,
    /// The `A`-free fragment (guaranteed decidable).
    PhiAd,
}

const MAX_ENUM_DEPTH: usize = 6;
const MAX_UNIVERSE: usize = 2_000_000;

/// Enumerate all structurally distinct formulas over the given properties
/// with connective depth at most `max_depth`, in a deterministic order
/// (elementary assertions first, then depth level by depth level).
pub fn enumerate_formulas(
    properties: &[String],
    max_depth: usize,
    fragment: Fragment,
) -> Result<Vec<AssertiveFormula>> {
    if max_depth > MAX_ENUM_DEPTH {
        return Err(Error::DepthTooLarge(max_depth));
    }
    let distinct = properties.iter().collect::<HashSet<_>>().len();
    if projected_universe(distinct, max_depth, fragment) > MAX_UNIVERSE as u128 {
        return Err(Error::UniverseTooLarge { limit: MAX_UNIVERSE });
    }
    let mut all: Vec<AssertiveFormula> = Vec::new();
    let mut level: Vec<usize> = Vec::new(); // connective depth per formula in `all`
    let mut seen: HashSet<AssertiveFormula> = HashSet::new();
    for name in properties {
        let f = AssertiveFormula::elementary(name.clone())?;
        if seen.insert(f.clone()) {
            all.push(f);
            level.push(0);
        }
    }
    let push = |all: &mut Vec<AssertiveFormula>,
                    level: &mut Vec<usize>,
                    seen: &mut HashSet<AssertiveFormula>,
                    f: AssertiveFormula,
                    d: usize|
     -> Result<()> {
        if all.len() >= MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge { limit: MAX_UNIVERSE });
        }
        if seen.insert(f.clone()) {
            all.push(f);
            level.push(d);
        }
        Ok(())
    };
    for d in 1..=max_depth {
        let prev_total = all.len();
        // Negations of the previous level.
        for i in 0..prev_total {
            if level[i] == d - 1 {
                let f = all[i].clone().negation();
                push(&mut all, &mut level, &mut seen, f, d)?;
            }
        }
        // Binary combinations whose deeper operand sits at the previous level.
        for i in 0..prev_total {
            for j in 0..prev_total {
                if level[i].max(level[j]) != d - 1 {
                    continue;
                }
                let f = all[i].clone().conjunction(all[j].clone());
                push(&mut all, &mut level, &mut seen, f, d)?;
                if fragment == Fragment::Full {
                    let f = all[i].clone().disjunction(all[j].clone());
                    push(&mut all, &mut level, &mut seen, f, d)?;
                }
            }
        }
    }
    Ok(all)
}

/// Exact size of the enumeration universe, computed without materializing
/// it. Every construction step yields a structurally new formula, so the
/// level sizes follow `new_d = prev_level + ops × (S²_{d-1} − S²_{d-2})`
/// where `S_k` counts formulas up to level `k` and `ops` is the number of
/// binary connectives in the fragment.
fn projected_universe(distinct_properties: usize, max_depth: usize, fragment: Fragment) -> u128 {
    let ops: u128 = match fragment {
        Fragment::Full => 2,
        Fragment::PhiAd => 1,
    };
    let mut total: u128 = distinct_properties as u128;
    let mut prev_total: u128 = 0; // S_{d-2}
    let mut prev_level: u128 = total; // formulas exactly at level d-1
    for _ in 1..=max_depth {
        let new = prev_level + ops * (total * total - prev_total * prev_total);
        prev_total = total;
        total += new;
        prev_level = new;
        if total > MAX_UNIVERSE as u128 {
            return total;
        }
    }
    total
}

/// A random formula of connective depth at most `max_depth`, drawn from the
/// given generator. Elementary assertions terminate branches early, so the
/// depth bound is an upper bound, not an exact depth.
pub fn random_formula<R: Rng + ?Sized>(
    properties: &[String],
    max_depth: usize,
    fragment: Fragment,
    rng: &mut R,
) -> Result<AssertiveFormula> {
    if properties.is_empty() {
        return Err(Error::UnknownProperty("<empty property pool>".into()));
    }
    let pick = |rng: &mut R| properties[rng.random_range(0..properties.len())].clone();
    if max_depth == 0 {
        return AssertiveFormula::elementary(pick(rng));
    }
    let kinds = if fragment == Fragment::Full { 4 } else { 3 };
    match rng.random_range(0..kinds) {
        0 => AssertiveFormula::elementary(pick(rng)),
        1 => Ok(random_formula(properties, max_depth - 1, fragment, rng)?.negation()),
        2 => Ok(random_formula(properties, max_depth - 1, fragment, rng)?
            .conjunction(random_formula(properties, max_depth - 1, fragment, rng)?)),
        _ => Ok(random_formula(properties, max_depth - 1, fragment, rng)?
            .disjunction(random_formula(properties, max_depth - 1, fragment, rng)?)),
    }
}
