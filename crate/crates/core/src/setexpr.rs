//! A small expression language for subsets of ℕ = {1, 2, ...}.
//!
//! ```text
//! expr   := atom | comb
//! atom   := "all" | "pow2blocks"
//!         | "interval" "(" int "," int ")"
//!         | "mod" "(" int "," int ")"
//!         | ("fs" | "fp") "(" int { "," int } ")"
//! comb   := ("union" | "inter" | "diff") "(" expr "," expr ")"
//!         | ("translate" | "tpre" | "dilate" | "dpre") "(" int "," expr ")"
//! int    := decimal digits
//! ```
//!
//! Whitespace is ignored between tokens. `translate(t, e)` and `tpre(t, e)`
//! both denote the preimage `-t + e = {y : t + y ∈ e}`; the forward shift is
//! not part of the language.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::window::WindowSet;

/// Largest generator list accepted by `fs`/`fp`.
pub const MAX_GENERATORS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetExpr {
    All,
    Interval(u64, u64),
    Mod { modulus: u64, residue: u64 },
    Pow2Blocks,
    Fs(Vec<u64>),
    Fp(Vec<u64>),
    Union(Box<SetExpr>, Box<SetExpr>),
    Inter(Box<SetExpr>, Box<SetExpr>),
    Diff(Box<SetExpr>, Box<SetExpr>),
    Translate(u64, Box<SetExpr>),
    Tpre(u64, Box<SetExpr>),
    Dilate(u64, Box<SetExpr>),
    Dpre(u64, Box<SetExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String>, found: String },
    Arity { name: String, expected: String, got: usize },
    Domain(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax { expected, found } => {
                let quoted: Vec<String> = expected.iter().map(|e| format!("`{e}`")).collect();
                write!(f, "syntax error: expected one of {}, found {found}", quoted.join(" "))
            }
            ParseErrorKind::Arity { name, expected, got } => {
                write!(f, "arity error: `{name}` takes {expected}, got {got} argument(s)")
            }
            ParseErrorKind::Domain(msg) => write!(f, "domain error: {msg}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    LParen,
    RParen,
    Comma,
    Other(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(s) => format!("integer `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Other(c) => format!("character `{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the token and its starting byte offset.
    fn peek(&mut self) -> (Tok, usize) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return (Tok::Eof, start);
        };
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            c if c.is_ascii_digit() => {
                let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
                Tok::Int(rest[..len].to_string())
            }
            c if c.is_ascii_alphabetic() => {
                let len = rest.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(rest.len());
                Tok::Ident(rest[..len].to_string())
            }
            c => Tok::Other(c),
        };
        (tok, start)
    }

    fn bump(&mut self) -> (Tok, usize) {
        let (tok, start) = self.peek();
        self.pos = start
            + match &tok {
                Tok::Ident(s) | Tok::Int(s) => s.len(),
                Tok::Other(c) => c.len_utf8(),
                Tok::Eof => 0,
                _ => 1,
            };
        (tok, start)
    }
}

enum Arg {
    Int(u64, usize),
    Expr(SetExpr, usize),
}

const HEADS: [&str; 13] = [
    "all",
    "pow2blocks",
    "interval",
    "mod",
    "fs",
    "fp",
    "union",
    "inter",
    "diff",
    "translate",
    "tpre",
    "dilate",
    "dpre",
];

fn syntax(offset: usize, expected: &[&str], found: &Tok) -> ParseError {
    ParseError {
        offset,
        kind: ParseErrorKind::Syntax {
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: found.describe(),
        },
    }
}

fn domain(offset: usize, msg: impl Into<String>) -> ParseError {
    ParseError { offset, kind: ParseErrorKind::Domain(msg.into()) }
}

struct Parser<'a> {
    lex: Lexer<'a>,
}

impl Parser<'_> {
    fn expr(&mut self) -> Result<SetExpr, ParseError> {
        let (tok, at) = self.lex.bump();
        let name = match tok {
            Tok::Ident(name) => name,
            other => return Err(syntax(at, &["expression"], &other)),
        };
        if !HEADS.contains(&name.as_str()) {
            return Err(syntax(at, &HEADS, &Tok::Ident(name)));
        }
        let args = if matches!(self.lex.peek().0, Tok::LParen) {
            self.lex.bump();
            self.args()?
        } else {
            Vec::new()
        };
        build(&name, at, args)
    }

    fn args(&mut self) -> Result<Vec<Arg>, ParseError> {
        let mut args = Vec::new();
        if matches!(self.lex.peek().0, Tok::RParen) {
            self.lex.bump();
            return Ok(args);
        }
        loop {
            let (tok, at) = self.lex.peek();
            match tok {
                Tok::Int(digits) => {
                    self.lex.bump();
                    let v = digits.parse::<u64>().map_err(|_| domain(at, "integer does not fit in 64 bits"))?;
                    args.push(Arg::Int(v, at));
                }
                Tok::Ident(_) => args.push(Arg::Expr(self.expr()?, at)),
                other => return Err(syntax(at, &["integer", "expression"], &other)),
            }
            let (tok, at) = self.lex.bump();
            match tok {
                Tok::Comma => continue,
                Tok::RParen => return Ok(args),
                other => return Err(syntax(at, &[",", ")"], &other)),
            }
        }
    }
}

fn arity(name: &str, at: usize, expected: &str, got: usize) -> ParseError {
    ParseError { offset: at, kind: ParseErrorKind::Arity { name: name.into(), expected: expected.into(), got } }
}

fn int_arg(arg: &Arg) -> Result<u64, ParseError> {
    match arg {
        Arg::Int(v, _) => Ok(*v),
        Arg::Expr(_, at) => Err(ParseError {
            offset: *at,
            kind: ParseErrorKind::Syntax { expected: vec!["integer".into()], found: "expression".into() },
        }),
    }
}

fn expr_arg(arg: Arg) -> Result<Box<SetExpr>, ParseError> {
    match arg {
        Arg::Expr(e, _) => Ok(Box::new(e)),
        Arg::Int(v, at) => Err(ParseError {
            offset: at,
            kind: ParseErrorKind::Syntax { expected: vec!["expression".into()], found: format!("integer `{v}`") },
        }),
    }
}

fn build(name: &str, at: usize, args: Vec<Arg>) -> Result<SetExpr, ParseError> {
    let n = args.len();
    let expr = match name {
        "all" | "pow2blocks" => {
            if n != 0 {
                return Err(arity(name, at, "no arguments", n));
            }
            if name == "all" {
                SetExpr::All
            } else {
                SetExpr::Pow2Blocks
            }
        }
        "interval" | "mod" => {
            if n != 2 {
                return Err(arity(name, at, "2 integers", n));
            }
            let (a, b) = (int_arg(&args[0])?, int_arg(&args[1])?);
            if name == "interval" {
                SetExpr::Interval(a, b)
            } else {
                SetExpr::Mod { modulus: a, residue: b }
            }
        }
        "fs" | "fp" => {
            if n == 0 {
                return Err(arity(name, at, "at least 1 integer", n));
            }
            let xs = args.iter().map(int_arg).collect::<Result<Vec<_>, _>>()?;
            if name == "fs" {
                SetExpr::Fs(xs)
            } else {
                SetExpr::Fp(xs)
            }
        }
        "union" | "inter" | "diff" => {
            if n != 2 {
                return Err(arity(name, at, "2 expressions", n));
            }
            let mut it = args.into_iter();
            let (a, b) = (expr_arg(it.next().unwrap())?, expr_arg(it.next().unwrap())?);
            match name {
                "union" => SetExpr::Union(a, b),
                "inter" => SetExpr::Inter(a, b),
                _ => SetExpr::Diff(a, b),
            }
        }
        _ => {
            if n != 2 {
                return Err(arity(name, at, "an integer and an expression", n));
            }
            let mut it = args.into_iter();
            let k = int_arg(&it.next().unwrap())?;
            let e = expr_arg(it.next().unwrap())?;
            match name {
                "translate" => SetExpr::Translate(k, e),
                "tpre" => SetExpr::Tpre(k, e),
                "dilate" => SetExpr::Dilate(k, e),
                _ => SetExpr::Dpre(k, e),
            }
        }
    };
    expr.validate_node().map_err(|msg| domain(at, msg))?;
    Ok(expr)
}

impl SetExpr {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut p = Parser { lex: Lexer { src: text, pos: 0 } };
        let e = p.expr()?;
        let (tok, at) = p.lex.peek();
        if tok != Tok::Eof {
            return Err(syntax(at, &["end of input"], &tok));
        }
        Ok(e)
    }

    // Checks this node's own parameters only.
    fn validate_node(&self) -> Result<(), String> {
        match self {
            SetExpr::Interval(a, b) if *a < 1 || a > b => Err(format!("interval({a},{b}) requires 1 ≤ a ≤ b")),
            SetExpr::Mod { modulus: 0, .. } => Err("modulus must be ≥ 1".into()),
            SetExpr::Mod { modulus, residue } if residue >= modulus => {
                Err(format!("residue {residue} must be < modulus {modulus}"))
            }
            SetExpr::Fs(xs) | SetExpr::Fp(xs) => {
                if xs.contains(&0) {
                    return Err("generators must be positive".into());
                }
                let distinct: HashSet<_> = xs.iter().collect();
                if distinct.len() != xs.len() {
                    return Err("generators must be distinct".into());
                }
                Ok(())
            }
            SetExpr::Translate(0, _) | SetExpr::Tpre(0, _) => Err("translation must be ≥ 1".into()),
            SetExpr::Dilate(0, _) | SetExpr::Dpre(0, _) => Err("dilation factor must be ≥ 1".into()),
            _ => Ok(()),
        }
    }

    /// Validate every node of a programmatically built tree.
    pub fn validate(&self) -> Result<()> {
        self.validate_node().map_err(Error::Domain)?;
        match self {
            SetExpr::Union(a, b) | SetExpr::Inter(a, b) | SetExpr::Diff(a, b) => {
                a.validate()?;
                b.validate()
            }
            SetExpr::Translate(_, e) | SetExpr::Tpre(_, e) | SetExpr::Dilate(_, e) | SetExpr::Dpre(_, e) => {
                e.validate()
            }
            _ => Ok(()),
        }
    }

    /// Nesting depth; atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            SetExpr::Union(a, b) | SetExpr::Inter(a, b) | SetExpr::Diff(a, b) => 1 + a.depth().max(b.depth()),
            SetExpr::Translate(_, e) | SetExpr::Tpre(_, e) | SetExpr::Dilate(_, e) | SetExpr::Dpre(_, e) => {
                1 + e.depth()
            }
            _ => 1,
        }
    }

    /// True when the tree contains `translate`, `tpre` or `dpre`.
    pub fn has_preimage(&self) -> bool {
        match self {
            SetExpr::Translate(..) | SetExpr::Tpre(..) | SetExpr::Dpre(..) => true,
            SetExpr::Union(a, b) | SetExpr::Inter(a, b) | SetExpr::Diff(a, b) => a.has_preimage() || b.has_preimage(),
            SetExpr::Dilate(_, e) => e.has_preimage(),
            _ => false,
        }
    }

    /// Evaluate exactly on `[1..n]`. Preimage combinators shrink the window;
    /// binary combinators work on the smaller of their operands' windows.
    pub fn eval(&self, n: u64) -> Result<WindowSet> {
        self.validate_node().map_err(Error::Domain)?;
        match self {
            SetExpr::All => WindowSet::full(n),
            SetExpr::Interval(a, b) => WindowSet::from_members(n, (*a..=(*b).min(n)).filter(|&m| m >= 1)),
            SetExpr::Mod { modulus, residue } => WindowSet::from_predicate(n, |m| m % modulus == *residue),
            SetExpr::Pow2Blocks => WindowSet::from_predicate(n, in_pow2blocks),
            SetExpr::Fs(xs) => WindowSet::from_members(n, finite_sums(xs, Some(n))?),
            SetExpr::Fp(xs) => WindowSet::from_members(n, finite_products(xs, Some(n))?),
            SetExpr::Union(a, b) | SetExpr::Inter(a, b) | SetExpr::Diff(a, b) => {
                let (mut l, mut r) = (a.eval(n)?, b.eval(n)?);
                let w = l.window_max().min(r.window_max());
                if l.window_max() != w {
                    l = l.restrict(w)?;
                }
                if r.window_max() != w {
                    r = r.restrict(w)?;
                }
                match self {
                    SetExpr::Union(..) => l.union(&r),
                    SetExpr::Inter(..) => l.intersection(&r),
                    _ => l.difference(&r),
                }
            }
            SetExpr::Translate(t, e) | SetExpr::Tpre(t, e) => e.eval(n)?.translate_preimage(*t),
            SetExpr::Dilate(k, e) => e.eval(n)?.dilate(*k),
            SetExpr::Dpre(k, e) => e.eval(n)?.dilate_preimage(*k),
        }
    }

    /// A random well-formed expression of depth at most `max_depth`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_depth: usize) -> SetExpr {
        let distinct = |rng: &mut R, lo: u64, hi: u64| {
            let mut v: Vec<u64> = (lo..=hi).collect();
            v.shuffle(rng);
            v.truncate(rng.gen_range(1..=4));
            v
        };
        if max_depth <= 1 || rng.gen_bool(0.3) {
            return match rng.gen_range(0..6) {
                0 => SetExpr::All,
                1 => SetExpr::Pow2Blocks,
                2 => {
                    let a = rng.gen_range(1..=60);
                    SetExpr::Interval(a, a + rng.gen_range(0..=60))
                }
                3 => {
                    let modulus = rng.gen_range(1..=7);
                    SetExpr::Mod { modulus, residue: rng.gen_range(0..modulus) }
                }
                4 => SetExpr::Fs(distinct(rng, 1, 40)),
                _ => SetExpr::Fp(distinct(rng, 1, 7)),
            };
        }
        let sub = |rng: &mut R| Box::new(SetExpr::random(rng, max_depth - 1));
        match rng.gen_range(0..7) {
            0 => SetExpr::Union(sub(rng), sub(rng)),
            1 => SetExpr::Inter(sub(rng), sub(rng)),
            2 => SetExpr::Diff(sub(rng), sub(rng)),
            3 => SetExpr::Translate(rng.gen_range(1..=8), sub(rng)),
            4 => SetExpr::Tpre(rng.gen_range(1..=8), sub(rng)),
            5 => SetExpr::Dilate(rng.gen_range(1..=4), sub(rng)),
            _ => SetExpr::Dpre(rng.gen_range(1..=3), sub(rng)),
        }
    }

    /// Pointwise membership oracle, exact for every positive integer.
    pub fn compile(&self) -> Result<Membership> {
        self.validate()?;
        Ok(Membership { root: compile_node(self)? })
    }
}

pub(crate) fn in_pow2blocks(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let k = 63 - m.leading_zeros() as u64;
    m - (1u64 << k) <= k
}

/// All finite sums over nonempty index sets, optionally capped at `cap`.
pub(crate) fn finite_sums(xs: &[u64], cap: Option<u64>) -> Result<Vec<u64>> {
    if xs.len() > MAX_GENERATORS {
        return Err(Error::TooLarge { what: "generator list", limit: MAX_GENERATORS as u64, got: xs.len() as u64 });
    }
    let mut acc: HashSet<u64> = HashSet::new();
    for &x in xs {
        let prev: Vec<u64> = acc.iter().copied().collect();
        acc.insert(x);
        for s in prev {
            if let Some(v) = s.checked_add(x) {
                acc.insert(v);
            }
        }
        if let Some(c) = cap {
            acc.retain(|&v| v <= c);
        }
    }
    let mut out: Vec<u64> = acc.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

pub(crate) fn finite_products(xs: &[u64], cap: Option<u64>) -> Result<Vec<u64>> {
    if xs.len() > MAX_GENERATORS {
        return Err(Error::TooLarge { what: "generator list", limit: MAX_GENERATORS as u64, got: xs.len() as u64 });
    }
    let mut acc: HashSet<u64> = HashSet::new();
    for &x in xs {
        let prev: Vec<u64> = acc.iter().copied().collect();
        acc.insert(x);
        for s in prev {
            if let Some(v) = s.checked_mul(x) {
                acc.insert(v);
            }
        }
        if let Some(c) = cap {
            acc.retain(|&v| v <= c);
        }
    }
    let mut out: Vec<u64> = acc.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

#[derive(Clone, Debug)]
enum Node {
    All,
    Interval(u64, u64),
    Mod(u64, u64),
    Pow2Blocks,
    Finite(HashSet<u64>),
    Union(Box<Node>, Box<Node>),
    Inter(Box<Node>, Box<Node>),
    Diff(Box<Node>, Box<Node>),
    Shift(u64, Box<Node>),
    Dilate(u64, Box<Node>),
    Dpre(u64, Box<Node>),
}

fn compile_node(e: &SetExpr) -> Result<Node> {
    Ok(match e {
        SetExpr::All => Node::All,
        SetExpr::Interval(a, b) => Node::Interval(*a, *b),
        SetExpr::Mod { modulus, residue } => Node::Mod(*modulus, *residue),
        SetExpr::Pow2Blocks => Node::Pow2Blocks,
        SetExpr::Fs(xs) => Node::Finite(finite_sums(xs, None)?.into_iter().collect()),
        SetExpr::Fp(xs) => Node::Finite(finite_products(xs, None)?.into_iter().collect()),
        SetExpr::Union(a, b) => Node::Union(Box::new(compile_node(a)?), Box::new(compile_node(b)?)),
        SetExpr::Inter(a, b) => Node::Inter(Box::new(compile_node(a)?), Box::new(compile_node(b)?)),
        SetExpr::Diff(a, b) => Node::Diff(Box::new(compile_node(a)?), Box::new(compile_node(b)?)),
        SetExpr::Translate(t, e) | SetExpr::Tpre(t, e) => Node::Shift(*t, Box::new(compile_node(e)?)),
        SetExpr::Dilate(k, e) => Node::Dilate(*k, Box::new(compile_node(e)?)),
        SetExpr::Dpre(k, e) => Node::Dpre(*k, Box::new(compile_node(e)?)),
    })
}

impl Node {
    fn contains(&self, m: u64) -> bool {
        match self {
            Node::All => true,
            Node::Interval(a, b) => *a <= m && m <= *b,
            Node::Mod(k, r) => m % k == *r,
            Node::Pow2Blocks => in_pow2blocks(m),
            Node::Finite(set) => set.contains(&m),
            Node::Union(a, b) => a.contains(m) || b.contains(m),
            Node::Inter(a, b) => a.contains(m) && b.contains(m),
            Node::Diff(a, b) => a.contains(m) && !b.contains(m),
            // values past u64::MAX are not representable members
            Node::Shift(t, e) => m.checked_add(*t).is_some_and(|v| e.contains(v)),
            Node::Dilate(k, e) => m.is_multiple_of(*k) && e.contains(m / k),
            Node::Dpre(k, e) => m.checked_mul(*k).is_some_and(|v| e.contains(v)),
        }
    }
}

/// Compiled membership predicate for a [`SetExpr`], independent of windows.
#[derive(Clone, Debug)]
pub struct Membership {
    root: Node,
}

impl Membership {
    pub fn contains(&self, m: u64) -> bool {
        m >= 1 && self.root.contains(m)
    }
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetExpr::All => f.write_str("all"),
            SetExpr::Pow2Blocks => f.write_str("pow2blocks"),
            SetExpr::Interval(a, b) => write!(f, "interval({a},{b})"),
            SetExpr::Mod { modulus, residue } => write!(f, "mod({modulus},{residue})"),
            SetExpr::Fs(xs) => write!(f, "fs({})", join(xs)),
            SetExpr::Fp(xs) => write!(f, "fp({})", join(xs)),
            SetExpr::Union(a, b) => write!(f, "union({a}, {b})"),
            SetExpr::Inter(a, b) => write!(f, "inter({a}, {b})"),
            SetExpr::Diff(a, b) => write!(f, "diff({a}, {b})"),
            SetExpr::Translate(t, e) => write!(f, "translate({t}, {e})"),
            SetExpr::Tpre(t, e) => write!(f, "tpre({t}, {e})"),
            SetExpr::Dilate(k, e) => write!(f, "dilate({k}, {e})"),
            SetExpr::Dpre(k, e) => write!(f, "dpre({k}, {e})"),
        }
    }
}

impl std::str::FromStr for SetExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        SetExpr::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(e: SetExpr) -> Box<SetExpr> {
        Box::new(e)
    }

    #[test]
    fn parse_examples() {
        let e = SetExpr::parse("inter(mod(2,0), pow2blocks)").unwrap();
        assert_eq!(e, SetExpr::Inter(b(SetExpr::Mod { modulus: 2, residue: 0 }), b(SetExpr::Pow2Blocks)));
        let e = SetExpr::parse("translate(3, mod(4,1))").unwrap();
        assert_eq!(e, SetExpr::Translate(3, b(SetExpr::Mod { modulus: 4, residue: 1 })));
        let e = SetExpr::parse("  fs( 2 ,4,\n 8 ) ").unwrap();
        assert_eq!(e, SetExpr::Fs(vec![2, 4, 8]));
    }

    #[test]
    fn domain_errors() {
        let err = SetExpr::parse("mod(0,1)").unwrap_err();
        assert_eq!(err.offset, 0);
        assert_eq!(err.kind, ParseErrorKind::Domain("modulus must be ≥ 1".into()));
        assert!(matches!(SetExpr::parse("mod(3,3)").unwrap_err().kind, ParseErrorKind::Domain(_)));
        assert!(matches!(SetExpr::parse("interval(5,2)").unwrap_err().kind, ParseErrorKind::Domain(_)));
        assert!(matches!(SetExpr::parse("interval(0,2)").unwrap_err().kind, ParseErrorKind::Domain(_)));
        assert!(matches!(SetExpr::parse("fs(2,2)").unwrap_err().kind, ParseErrorKind::Domain(_)));
        assert!(matches!(SetExpr::parse("fp(0)").unwrap_err().kind, ParseErrorKind::Domain(_)));
        let err = SetExpr::parse("union(all, dilate(0, all))").unwrap_err();
        assert_eq!(err.offset, 11);
    }

    #[test]
    fn arity_errors() {
        let err = SetExpr::parse("mod(2)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Arity { name: "mod".into(), expected: "2 integers".into(), got: 1 });
        assert!(matches!(SetExpr::parse("all(1)").unwrap_err().kind, ParseErrorKind::Arity { .. }));
        assert!(matches!(SetExpr::parse("union(all)").unwrap_err().kind, ParseErrorKind::Arity { .. }));
        assert!(matches!(SetExpr::parse("fs()").unwrap_err().kind, ParseErrorKind::Arity { .. }));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let err = SetExpr::parse("inter(mod(2,0) pow2blocks)").unwrap_err();
        assert_eq!(err.offset, 15);
        match err.kind {
            ParseErrorKind::Syntax { expected, .. } => assert_eq!(expected, vec![",", ")"]),
            k => panic!("unexpected {k:?}"),
        }
        let err = SetExpr::parse("evens").unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(matches!(SetExpr::parse("all all").unwrap_err().offset, 4));
        assert!(matches!(SetExpr::parse("").unwrap_err().kind, ParseErrorKind::Syntax { .. }));
        assert!(SetExpr::parse("mod(0x2,0)").is_err());
        assert!(SetExpr::parse("mod(-2,0)").is_err());
        assert!(SetExpr::parse("mod(99999999999999999999,0)").is_err());
        assert!(SetExpr::parse("translate(all, 3)").is_err());
    }

    #[test]
    fn print_examples() {
        assert_eq!(SetExpr::Mod { modulus: 2, residue: 0 }.to_string(), "mod(2,0)");
        let e = SetExpr::Inter(b(SetExpr::Mod { modulus: 2, residue: 0 }), b(SetExpr::Pow2Blocks));
        assert_eq!(e.to_string(), "inter(mod(2,0), pow2blocks)");
        assert_eq!(SetExpr::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn eval_examples() {
        let p = SetExpr::Pow2Blocks.eval(40).unwrap();
        assert_eq!(
            p.iter().collect::<Vec<_>>(),
            vec![2, 3, 4, 5, 6, 8, 9, 10, 11, 16, 17, 18, 19, 20, 32, 33, 34, 35, 36, 37]
        );
        let e = SetExpr::parse("mod(2,0)").unwrap().eval(10).unwrap();
        assert_eq!(e.iter().collect::<Vec<_>>(), vec![2, 4, 6, 8, 10]);
        let t = SetExpr::parse("translate(3, mod(4,1))").unwrap().eval(20).unwrap();
        assert_eq!(t.window_max(), 17);
        assert_eq!(t.iter().collect::<Vec<_>>(), vec![2, 6, 10, 14]);
    }

    #[test]
    fn eval_mixed_windows_restricts() {
        let e = SetExpr::parse("union(translate(5, all), mod(7,0))").unwrap();
        let s = e.eval(20).unwrap();
        assert_eq!(s.window_max(), 15);
        assert_eq!(s, WindowSet::full(15).unwrap());
    }

    #[test]
    fn finite_atoms() {
        let s = SetExpr::parse("fs(2,4,8)").unwrap().eval(100).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![2, 4, 6, 8, 10, 12, 14]);
        let s = SetExpr::parse("fp(2,4,16)").unwrap().eval(100).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![2, 4, 8, 16, 32, 64]);
        let m = SetExpr::parse("fp(2,4,16)").unwrap().compile().unwrap();
        assert!(m.contains(128));
        assert!(!m.contains(0));
    }

    #[test]
    fn pow2blocks_membership() {
        let brute: Vec<u64> =
            (1..=300).filter(|&m| (1..=8u32).any(|n| m >= 1 << n && m <= (1u64 << n) + n as u64)).collect();
        let fast: Vec<u64> = (1..=300).filter(|&m| in_pow2blocks(m)).collect();
        assert_eq!(brute, fast);
    }
}
