//! First-order logic over `(d+1)`-uniform hypergraphs.
//!
//! The signature has one `(d+1)`-ary relation `E`, true exactly on the
//! vertex sets forming an edge, plus equality. Concrete syntax:
//!
//! ```text
//! formula := "forall" var+ "." formula | "exists" var+ "." formula | imp
//! imp     := or ("->" formula)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "(" formula ")" | "true" | "false"
//!          | "E" "(" var ("," var)* ")" | var "=" var | var "!=" var
//! ```
//!
//! A quantifier's scope extends as far right as possible. Evaluation is
//! brute force: a formula of quantifier depth `q` costs `O(n^q)` atom checks.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::hypercore::{Hypergraph, Vertex};

pub type Var = String;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Edge(Vec<Var>),
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { offset: usize, line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: E takes {expected} arguments, found {found}")]
    Arity { offset: usize, line: usize, column: usize, expected: usize, found: usize },
    #[error("formula is for d = {formula}, hypergraph has d = {graph}")]
    DimensionMismatch { formula: usize, graph: usize },
    #[error("unbound variable {0}")]
    Unbound(Var),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
}

impl Formula {
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<Var>, f: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(f))
    }

    pub fn exists(v: impl Into<Var>, f: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(f))
    }

    pub fn eq(a: impl Into<Var>, b: impl Into<Var>) -> Self {
        Formula::Eq(a.into(), b.into())
    }

    pub fn edge<S: Into<Var>>(vars: impl IntoIterator<Item = S>) -> Self {
        Formula::Edge(vars.into_iter().map(Into::into).collect())
    }

    /// Conjunction of all items; `true` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Disjunction of all items; `false` when empty.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    /// Maximal nesting of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Edge(_) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_depth().max(b.quantifier_depth())
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.quantifier_depth(),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Edge(_) | Formula::Eq(..) => 1,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        fn walk(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Edge(vs) => out.extend(vs.iter().filter(|v| !bound.contains(v)).cloned()),
                Formula::Eq(a, b) => out.extend([a, b].into_iter().filter(|v| !bound.contains(v)).cloned()),
                Formula::Not(g) => walk(g, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Forall(v, g) | Formula::Exists(v, g) => {
                    bound.push(v.clone());
                    walk(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Arity of the first `E` atom, if any.
    pub fn edge_arity(&self) -> Option<usize> {
        match self {
            Formula::Edge(vs) => Some(vs.len()),
            Formula::True | Formula::False | Formula::Eq(..) => None,
            Formula::Not(f) | Formula::Forall(_, f) | Formula::Exists(_, f) => f.edge_arity(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.edge_arity().or_else(|| b.edge_arity()),
        }
    }

    /// Equivalent formula without `->`, with negations only on atoms.
    pub fn negation_normal_form(&self) -> Formula {
        fn pos(f: &Formula) -> Formula {
            match f {
                Formula::True | Formula::False | Formula::Edge(_) | Formula::Eq(..) => f.clone(),
                Formula::Not(g) => neg(g),
                Formula::And(a, b) => Formula::and(pos(a), pos(b)),
                Formula::Or(a, b) => Formula::or(pos(a), pos(b)),
                Formula::Implies(a, b) => Formula::or(neg(a), pos(b)),
                Formula::Forall(v, g) => Formula::forall(v.clone(), pos(g)),
                Formula::Exists(v, g) => Formula::exists(v.clone(), pos(g)),
            }
        }
        fn neg(f: &Formula) -> Formula {
            match f {
                Formula::True => Formula::False,
                Formula::False => Formula::True,
                Formula::Edge(_) | Formula::Eq(..) => Formula::not(f.clone()),
                Formula::Not(g) => pos(g),
                Formula::And(a, b) => Formula::or(neg(a), neg(b)),
                Formula::Or(a, b) => Formula::and(neg(a), neg(b)),
                Formula::Implies(a, b) => Formula::and(pos(a), neg(b)),
                Formula::Forall(v, g) => Formula::exists(v.clone(), neg(g)),
                Formula::Exists(v, g) => Formula::forall(v.clone(), neg(g)),
            }
        }
        pos(self)
    }
}

impl fmt::Display for Formula {
    /// Fully parenthesised; the output parses back to the same formula.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Edge(vs) => write!(f, "E({})", vs.join(",")),
            Formula::Eq(a, b) => write!(f, "{a}={b}"),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Forall(v, g) => write!(f, "(forall {v}. {g})"),
            Formula::Exists(v, g) => write!(f, "(exists {v}. {g})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Amp,
    Bar,
    Bang,
    Arrow,
    Equals,
    NotEquals,
    End,
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    at: usize,
    d: usize,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}

fn syntax(text: &str, offset: usize, message: impl Into<String>) -> FoError {
    let (line, column) = line_col(text, offset);
    FoError::Syntax { offset, line, column, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, FoError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'=' => Tok::Equals,
            b'!' if bytes.get(i + 1) == Some(&b'=') => {
                i += 1;
                Tok::NotEquals
            }
            b'!' => Tok::Bang,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(text, start, format!("unexpected character {ch:?}")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

const KEYWORDS: [&str; 4] = ["forall", "exists", "true", "false"];

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn offset(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), FoError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.text, self.offset(), format!("expected {what}")))
        }
    }

    fn var(&mut self) -> Result<Var, FoError> {
        match self.peek().clone() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                Ok(name)
            }
            _ => Err(syntax(self.text, self.offset(), "expected a variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula, FoError> {
        if let Tok::Ident(kw) = self.peek().clone() {
            if kw == "forall" || kw == "exists" {
                self.bump();
                let mut vars = vec![self.var()?];
                while let Tok::Ident(name) = self.peek() {
                    if KEYWORDS.contains(&name.as_str()) {
                        break;
                    }
                    vars.push(self.var()?);
                }
                self.expect(Tok::Dot, "'.' after quantified variables")?;
                let body = self.formula()?;
                return Ok(vars.into_iter().rev().fold(body, |acc, v| {
                    if kw == "forall" {
                        Formula::forall(v, acc)
                    } else {
                        Formula::exists(v, acc)
                    }
                }));
            }
        }
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, FoError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, FoError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, FoError> {
        let start = self.offset();
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Tok::Ident(name) => match name.as_str() {
                "true" => {
                    self.bump();
                    Ok(Formula::True)
                }
                "false" => {
                    self.bump();
                    Ok(Formula::False)
                }
                // a quantifier inside a conjunction, e.g. `A & exists x. B`
                "forall" | "exists" => self.formula(),
                "E" if self.toks[self.at + 1].0 == Tok::LParen => {
                    self.bump();
                    self.bump();
                    let mut vars = vec![self.var()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        vars.push(self.var()?);
                    }
                    self.expect(Tok::RParen, "')' closing E(...)")?;
                    if vars.len() != self.d + 1 {
                        let (line, column) = line_col(self.text, start);
                        return Err(FoError::Arity {
                            offset: start,
                            line,
                            column,
                            expected: self.d + 1,
                            found: vars.len(),
                        });
                    }
                    Ok(Formula::Edge(vars))
                }
                _ => {
                    let a = self.var()?;
                    match self.bump() {
                        Tok::Equals => Ok(Formula::Eq(a, self.var()?)),
                        Tok::NotEquals => Ok(Formula::not(Formula::Eq(a, self.var()?))),
                        _ => Err(syntax(self.text, start, "expected '=' or '!=' after variable")),
                    }
                }
            },
            Tok::End => Err(syntax(self.text, start, "unexpected end of input")),
            _ => Err(syntax(self.text, start, "expected a formula")),
        }
    }
}

/// Parses a formula over `(d+1)`-uniform hypergraphs.
pub fn parse(text: &str, d: usize) -> Result<Formula, FoError> {
    let toks = tokenize(text)?;
    let mut p = Parser { text, toks, at: 0, d };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(syntax(text, p.offset(), "trailing input"));
    }
    Ok(f)
}

pub fn quantifier_depth(f: &Formula) -> usize {
    f.quantifier_depth()
}

/// Formula with variables resolved to environment slots.
enum Compiled {
    Const(bool),
    Edge(Vec<usize>),
    Eq(usize, usize),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Forall(usize, Box<Compiled>),
    Exists(usize, Box<Compiled>),
}

fn compile(f: &Formula, scope: &mut Vec<Var>, slots: &mut usize) -> Result<Compiled, FoError> {
    let lookup = |v: &Var, scope: &Vec<Var>| {
        scope.iter().rposition(|s| s == v).ok_or_else(|| FoError::Unbound(v.clone()))
    };
    Ok(match f {
        Formula::True => Compiled::Const(true),
        Formula::False => Compiled::Const(false),
        Formula::Edge(vs) => Compiled::Edge(vs.iter().map(|v| lookup(v, scope)).collect::<Result<_, _>>()?),
        Formula::Eq(a, b) => Compiled::Eq(lookup(a, scope)?, lookup(b, scope)?),
        Formula::Not(g) => Compiled::Not(Box::new(compile(g, scope, slots)?)),
        Formula::And(a, b) => Compiled::And(Box::new(compile(a, scope, slots)?), Box::new(compile(b, scope, slots)?)),
        Formula::Or(a, b) => Compiled::Or(Box::new(compile(a, scope, slots)?), Box::new(compile(b, scope, slots)?)),
        Formula::Implies(a, b) => {
            Compiled::Implies(Box::new(compile(a, scope, slots)?), Box::new(compile(b, scope, slots)?))
        }
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            scope.push(v.clone());
            let slot = scope.len() - 1;
            *slots = (*slots).max(scope.len());
            let body = Box::new(compile(g, scope, slots)?);
            scope.pop();
            if matches!(f, Formula::Forall(..)) {
                Compiled::Forall(slot, body)
            } else {
                Compiled::Exists(slot, body)
            }
        }
    })
}

fn eval(c: &Compiled, h: &Hypergraph, env: &mut Vec<Vertex>, buf: &mut Vec<Vertex>) -> bool {
    match c {
        Compiled::Const(b) => *b,
        Compiled::Edge(slots) => {
            buf.clear();
            buf.extend(slots.iter().map(|&s| env[s]));
            h.has_edge(buf)
        }
        Compiled::Eq(a, b) => env[*a] == env[*b],
        Compiled::Not(g) => !eval(g, h, env, buf),
        Compiled::And(a, b) => eval(a, h, env, buf) && eval(b, h, env, buf),
        Compiled::Or(a, b) => eval(a, h, env, buf) || eval(b, h, env, buf),
        Compiled::Implies(a, b) => !eval(a, h, env, buf) || eval(b, h, env, buf),
        Compiled::Forall(slot, g) => (0..h.n() as Vertex).all(|v| {
            env[*slot] = v;
            eval(g, h, env, buf)
        }),
        Compiled::Exists(slot, g) => (0..h.n() as Vertex).any(|v| {
            env[*slot] = v;
            eval(g, h, env, buf)
        }),
    }
}

/// Truth of `f` in `h` under `assignment` (free variable → vertex).
///
/// `E` atoms with a repeated vertex are false, as no edge has one.
pub fn evaluate(h: &Hypergraph, f: &Formula, assignment: &HashMap<Var, Vertex>) -> Result<bool, FoError> {
    if let Some(arity) = f.edge_arity() {
        if arity != h.arity() {
            return Err(FoError::DimensionMismatch { formula: arity.saturating_sub(1), graph: h.d() });
        }
    }
    // free variables occupy the outermost slots
    let mut scope: Vec<Var> = assignment.keys().cloned().collect();
    scope.sort();
    let mut env: Vec<Vertex> = Vec::with_capacity(scope.len());
    for v in &scope {
        let x = assignment[v];
        if x as usize >= h.n() {
            return Err(FoError::VertexOutOfRange { vertex: x, n: h.n() });
        }
        env.push(x);
    }
    let mut slots = scope.len();
    let compiled = compile(f, &mut scope, &mut slots)?;
    env.resize(slots, 0);
    Ok(eval(&compiled, h, &mut env, &mut Vec::with_capacity(h.arity())))
}

/// Truth of a sentence in `h`.
pub fn evaluate_sentence(h: &Hypergraph, f: &Formula) -> Result<bool, FoError> {
    evaluate(h, f, &HashMap::new())
}
