//! Concrete syntax: a layout-sensitive recursive-descent parser and a
//! single-line pretty printer whose output parses back to the same tree.
//!
//! Layout follows the usual offside rule. Stacked `let` bindings and `case`
//! alternatives line up at the column of the first one; an expression ends
//! at any token that starts a line at or left of the enclosing column.
//! Inside brackets layout is off. See `docs/grammar.md` for the grammar.

mod lexer;
mod pretty;

use std::fmt;

use thiserror::Error;

use crate::circuit::{BoxedCircuit, Circuit, Gate, GateApp};
use crate::syntax::{Declaration, HoleId, Label, LabelContext, Mode, Name, Program, SimpleTerm, Span, Term, TermKind, Type, WireType};

use lexer::{describe, lex, TokKind, Token};
pub use pretty::{pretty, pretty_term, pretty_type, Pretty};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct SyntaxError {
    pub span: Span,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: expected ", self.span)?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    Parser::new(text)?.program()
}

pub fn parse_type(text: &str) -> Result<Type, SyntaxError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(text)?;
    let t = p.expr()?;
    p.expect_eof()?;
    Ok(t)
}

/// Constructor names reserved in term position.
const CONSTRUCTORS: &[&str] = &["True", "False", "Nothing", "Just", "Z", "S"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Offside column: a line-initial token at or left of it ends the
    /// current expression. 0 disables the rule.
    limit: u32,
    next_hole: HoleId,
    next_tmp: u32,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn new(text: &str) -> PResult<Parser> {
        Ok(Parser { toks: lex(text)?, pos: 0, limit: 0, next_hole: 0, next_tmp: 0 })
    }

    fn tok(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn kind(&self) -> &TokKind {
        &self.tok().kind
    }

    fn span(&self) -> Span {
        self.tok().span
    }

    fn prev_span(&self) -> Span {
        if self.pos == 0 {
            self.span()
        } else {
            self.toks[self.pos - 1].span
        }
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.kind != TokKind::Eof {
            self.pos += 1;
        }
        t
    }

    /// The current token is offside and so ends the expression in progress.
    fn blocked(&self) -> bool {
        let t = self.tok();
        t.kind == TokKind::Eof || (self.limit > 0 && t.first && t.span.start.col <= self.limit)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.kind(), TokKind::Sym(k) if *k == s)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.kind(), TokKind::Ident(k) if k == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(SyntaxError {
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: describe(self.kind()),
        })
    }

    fn expect_sym(&mut self, s: &str) -> PResult<Span> {
        if self.is_sym(s) {
            Ok(self.advance().span)
        } else {
            self.error(&[&format!("`{s}`")])
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if *self.kind() == TokKind::Eof {
            Ok(())
        } else {
            self.error(&["end of input"])
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.kind() {
            TokKind::Ident(s) if !CONSTRUCTORS.contains(&s.as_str()) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => self.error(&["identifier"]),
        }
    }

    fn with_limit<T>(&mut self, limit: u32, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let saved = self.limit;
        self.limit = limit;
        let r = f(self);
        self.limit = saved;
        r
    }

    fn hole(&mut self) -> Mode {
        let h = self.next_hole;
        self.next_hole += 1;
        Mode::Hole(h)
    }

    fn tmp(&mut self) -> Name {
        let n = self.next_tmp;
        self.next_tmp += 1;
        format!("_p{n}")
    }

    // ---- programs -------------------------------------------------------

    fn program(&mut self) -> PResult<Program> {
        let mut declarations = Vec::new();
        self.limit = 1;
        while *self.kind() != TokKind::Eof {
            declarations.push(self.declaration()?);
        }
        Ok(Program { declarations })
    }

    fn declaration(&mut self) -> PResult<Declaration> {
        let start = self.span();
        if !self.tok().first || start.start.col != 1 {
            return self.error(&["declaration at column 1"]);
        }
        let name = self.ident()?;
        self.expect_sym(":")?;
        let ty = self.ty()?;
        if !(self.tok().first && self.span().start.col == 1 && self.is_ident(&name)) {
            return self.error(&[&format!("definition of `{name}` at column 1")]);
        }
        self.advance();
        let mut params = Vec::new();
        while !self.is_sym("=") {
            if self.blocked() {
                return self.error(&["parameter", "`=`"]);
            }
            params.push(self.ident()?);
        }
        self.advance();
        if self.blocked() {
            return self.error(&["expression"]);
        }
        let body = self.expr()?;
        if !self.blocked() {
            return self.error(&["new declaration at column 1", "end of input"]);
        }
        Ok(Declaration { name, ty, params, body, span: start.to(self.prev_span()) })
    }

    // ---- types ----------------------------------------------------------

    fn ty(&mut self) -> PResult<Type> {
        let a = self.tensor_ty()?;
        if self.blocked() {
            return Ok(a);
        }
        let mode = match self.kind() {
            TokKind::Arrow | TokKind::Lolli(None) => self.hole(),
            TokKind::Lolli(Some(m)) => Mode::Known(*m),
            _ => return Ok(a),
        };
        self.advance();
        let b = self.ty()?;
        Ok(Type::arrow(a, mode, b))
    }

    fn tensor_ty(&mut self) -> PResult<Type> {
        let a = self.prefix_ty()?;
        if !self.blocked() && self.eat_sym("*") {
            let b = self.tensor_ty()?;
            return Ok(Type::tensor(a, b));
        }
        Ok(a)
    }

    fn prefix_ty(&mut self) -> PResult<Type> {
        if self.blocked() {
            return self.error(&["type"]);
        }
        match self.kind().clone() {
            TokKind::Bang(m) => {
                self.advance();
                let mode = match m {
                    Some(m) => Mode::Known(m),
                    None => self.hole(),
                };
                Ok(Type::bang(mode, self.prefix_ty()?))
            }
            TokKind::Ident(s) if s == "Maybe" => {
                self.advance();
                Ok(Type::maybe(self.prefix_ty()?))
            }
            _ => self.atom_ty(),
        }
    }

    fn atom_ty(&mut self) -> PResult<Type> {
        let t = match self.kind().clone() {
            TokKind::Ident(s) => match s.as_str() {
                "Unit" => Type::Unit,
                "Qubit" => Type::Qubit,
                "Bit" => Type::Bit,
                "Bool" => Type::Bool,
                "Nat" => Type::Nat,
                "Circ" => {
                    self.advance();
                    return self.with_limit(0, |p| {
                        p.expect_sym("(")?;
                        let s = p.ty()?;
                        p.expect_sym(",")?;
                        let u = p.ty()?;
                        p.expect_sym(")")?;
                        Ok(Type::circ(s, u))
                    });
                }
                _ => return self.error(&["type"]),
            },
            TokKind::Sym("(") => {
                self.advance();
                return self.with_limit(0, |p| {
                    if p.eat_sym(")") {
                        return Ok(Type::Unit);
                    }
                    let t = p.ty()?;
                    p.expect_sym(")")?;
                    Ok(t)
                });
            }
            _ => return self.error(&["type"]),
        };
        self.advance();
        Ok(t)
    }

    // ---- terms ----------------------------------------------------------

    fn expr(&mut self) -> PResult<Term> {
        if self.blocked() {
            return self.error(&["expression"]);
        }
        let start = self.span();
        match self.kind() {
            TokKind::Sym("\\") => {
                self.advance();
                let mut xs = vec![self.ident()?];
                while !matches!(self.kind(), TokKind::Arrow) {
                    if self.blocked() {
                        return self.error(&["`->`"]);
                    }
                    xs.push(self.ident()?);
                }
                self.advance();
                let body = self.expr()?;
                let span = start.to(body.span);
                Ok(xs.into_iter().rev().fold(body, |acc, x| Term::at(TermKind::Lambda(x, Box::new(acc)), span)))
            }
            TokKind::Sym("let") => self.let_expr(),
            TokKind::Sym("if") => {
                self.advance();
                let c = self.expr()?;
                self.expect_sym("then")?;
                let t = self.expr()?;
                self.expect_sym("else")?;
                let e = self.expr()?;
                let span = start.to(e.span);
                Ok(Term::at(TermKind::If(Box::new(c), Box::new(t), Box::new(e)), span))
            }
            TokKind::Sym("case") => self.case_expr(),
            _ => self.or_expr(),
        }
    }

    fn or_expr(&mut self) -> PResult<Term> {
        let a = self.app_expr()?;
        if !self.blocked() && self.is_sym("||") {
            let op = self.advance().span;
            let b = if self.is_sym("\\") || self.is_sym("let") || self.is_sym("if") || self.is_sym("case") {
                self.expr()?
            } else {
                self.or_expr()?
            };
            let span = a.span.to(b.span);
            let or = Term::at(TermKind::Var("or".into()), op);
            return Ok(Term::at(TermKind::App(Box::new(Term::at(TermKind::App(Box::new(or), Box::new(a)), span)), Box::new(b)), span));
        }
        Ok(a)
    }

    fn starts_atom(&self) -> bool {
        if self.blocked() {
            return false;
        }
        match self.kind() {
            TokKind::Ident(s) => s != "Just" && s != "S",
            TokKind::Num(_) | TokKind::Label(_) => true,
            TokKind::Sym(s) => matches!(*s, "(" | "apply" | "circ"),
            _ => false,
        }
    }

    fn app_expr(&mut self) -> PResult<Term> {
        let mut f = self.head()?;
        while self.starts_atom() {
            let a = self.atom()?;
            let span = f.span.to(a.span);
            f = Term::at(TermKind::App(Box::new(f), Box::new(a)), span);
        }
        Ok(f)
    }

    /// An atom, or a prefix former applied to one atom.
    fn head(&mut self) -> PResult<Term> {
        let start = self.span();
        let unary = |k: fn(Box<Term>) -> TermKind, p: &mut Parser| -> PResult<Term> {
            p.advance();
            let a = p.atom()?;
            let span = start.to(a.span);
            Ok(Term::at(k(Box::new(a)), span))
        };
        match self.kind() {
            TokKind::Sym("force") => unary(TermKind::Force, self),
            TokKind::Sym("lift") => unary(TermKind::Lift, self),
            TokKind::Sym("dynlift") => unary(TermKind::Dynlift, self),
            TokKind::Ident(s) if s == "Just" => unary(TermKind::Just, self),
            TokKind::Ident(s) if s == "S" => unary(TermKind::Succ, self),
            TokKind::Sym("box") => {
                self.advance();
                if self.blocked() {
                    return self.error(&["simple type"]);
                }
                let s = self.atom_ty()?;
                let a = self.atom()?;
                let span = start.to(a.span);
                Ok(Term::at(TermKind::Box(s, Box::new(a)), span))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Term> {
        if !self.starts_atom() {
            return self.error(&["identifier", "literal", "`(`"]);
        }
        let start = self.span();
        let kind = match self.kind().clone() {
            TokKind::Ident(s) => match s.as_str() {
                "True" => TermKind::Bool(true),
                "False" => TermKind::Bool(false),
                "Nothing" => TermKind::Nothing,
                "Z" => TermKind::Nat(0),
                _ => TermKind::Var(s),
            },
            TokKind::Num(n) => TermKind::Nat(n),
            TokKind::Label(n) => TermKind::Label(Label(n)),
            TokKind::Sym("apply") => {
                self.advance();
                return self.with_limit(0, |p| {
                    p.expect_sym("(")?;
                    let c = p.expr()?;
                    p.expect_sym(",")?;
                    let a = p.expr()?;
                    let end = p.expect_sym(")")?;
                    Ok(Term::at(TermKind::Apply(Box::new(c), Box::new(a)), start.to(end)))
                });
            }
            TokKind::Sym("circ") => {
                self.advance();
                return self.with_limit(0, |p| p.circ_literal(start));
            }
            TokKind::Sym("(") => {
                self.advance();
                return self.with_limit(0, |p| {
                    if let Ok(end) = p.expect_sym(")") {
                        return Ok(Term::at(TermKind::Unit, start.to(end)));
                    }
                    let mut items = vec![p.expr()?];
                    while p.eat_sym(",") {
                        items.push(p.expr()?);
                    }
                    let end = p.expect_sym(")").or_else(|_| p.error(&["`,`", "`)`"]))?;
                    let span = start.to(end);
                    let last = items.pop().expect("nonempty");
                    let mut t = last;
                    while let Some(x) = items.pop() {
                        t = Term::at(TermKind::Pair(Box::new(x), Box::new(t)), span);
                    }
                    t.span = span;
                    Ok(t)
                });
            }
            _ => unreachable!("starts_atom"),
        };
        self.advance();
        Ok(Term::at(kind, start))
    }

    fn let_expr(&mut self) -> PResult<Term> {
        let start = self.expect_sym("let")?;
        if self.blocked() {
            return self.error(&["binding"]);
        }
        let col = self.span().start.col;
        let outer = self.limit;
        let mut bindings = Vec::new();
        self.with_limit(col, |p| {
            loop {
                let pat = p.pattern()?;
                p.expect_sym("=")?;
                let rhs = p.expr()?;
                bindings.push((pat, rhs));
                if p.is_sym("in") {
                    return Ok(());
                }
                let t = p.tok();
                if !(t.first && t.span.start.col == col) {
                    return p.error(&["`in`", "binding aligned with the first"]);
                }
            }
        })?;
        self.expect_sym("in")?;
        let body = self.with_limit(outer, |p| p.expr())?;
        let span = start.to(body.span);
        let mut acc = body;
        for (pat, rhs) in bindings.into_iter().rev() {
            acc = match pat {
                Pattern::Var(x) => Term::at(TermKind::Let(x, Box::new(rhs), Box::new(acc)), span),
                Pattern::Wild => Term::at(TermKind::LetUnit(Box::new(rhs), Box::new(acc)), span),
                Pattern::Tuple(xs) => self.tuple_let(xs, rhs, acc, span),
            };
        }
        Ok(acc)
    }

    /// `let (x1, …, xn) = N in M` as right-nested pair eliminations.
    fn tuple_let(&mut self, mut xs: Vec<Name>, rhs: Term, body: Term, span: Span) -> Term {
        if xs.len() == 2 {
            let y = xs.pop().expect("two");
            let x = xs.pop().expect("two");
            return Term::at(TermKind::LetPair(x, y, Box::new(rhs), Box::new(body)), span);
        }
        let x = xs.remove(0);
        let tmp = self.tmp();
        let rest = self.tuple_let(xs, Term::at(TermKind::Var(tmp.clone()), span), body, span);
        Term::at(TermKind::LetPair(x, tmp, Box::new(rhs), Box::new(rest)), span)
    }

    fn pattern(&mut self) -> PResult<Pattern> {
        if self.eat_sym("_") {
            return Ok(Pattern::Wild);
        }
        if self.is_sym("(") {
            self.advance();
            return self.with_limit(0, |p| {
                let mut xs = vec![p.ident()?];
                while p.eat_sym(",") {
                    xs.push(p.ident()?);
                }
                p.expect_sym(")").or_else(|_| p.error(&["`,`", "`)`"]))?;
                Ok(match xs.len() {
                    1 => Pattern::Var(xs.pop().expect("one")),
                    _ => Pattern::Tuple(xs),
                })
            });
        }
        match self.kind() {
            TokKind::Ident(_) => Ok(Pattern::Var(self.ident()?)),
            _ => self.error(&["identifier", "`_`", "`(`"]),
        }
    }

    fn case_expr(&mut self) -> PResult<Term> {
        let start = self.expect_sym("case")?;
        let scrut = self.expr()?;
        self.expect_sym("of")?;
        let mut alts = Vec::new();
        if self.eat_sym("{") {
            self.with_limit(0, |p| {
                loop {
                    alts.push(p.alternative()?);
                    if !p.eat_sym(";") {
                        break;
                    }
                }
                p.expect_sym("}").or_else(|_| p.error(&["`;`", "`}`"]))?;
                Ok(())
            })?;
        } else {
            if self.blocked() {
                return self.error(&["case alternative"]);
            }
            let col = self.span().start.col;
            self.with_limit(col, |p| {
                loop {
                    alts.push(p.alternative()?);
                    let t = p.tok();
                    if !(t.first && t.span.start.col == col && t.kind != TokKind::Eof) {
                        return Ok(());
                    }
                }
            })?;
        }
        let span = start.to(self.prev_span());
        self.build_case(scrut, alts, span)
    }

    fn alternative(&mut self) -> PResult<(Alt, Span, Term)> {
        let span = self.span();
        let name = match self.kind() {
            TokKind::Ident(s) if CONSTRUCTORS.contains(&s.as_str()) => s.clone(),
            _ => return self.error(&["`Z`", "`S`", "`Nothing`", "`Just`", "`True`", "`False`"]),
        };
        self.advance();
        let alt = match name.as_str() {
            "Z" => Alt::Zero,
            "Nothing" => Alt::Nothing,
            "True" => Alt::True,
            "False" => Alt::False,
            "S" => Alt::Succ(self.ident()?),
            _ => Alt::Just(self.ident()?),
        };
        if !matches!(self.kind(), TokKind::Arrow) {
            return self.error(&["`->`"]);
        }
        self.advance();
        let body = self.expr()?;
        Ok((alt, span, body))
    }

    fn build_case(&mut self, scrut: Term, alts: Vec<(Alt, Span, Term)>, span: Span) -> PResult<Term> {
        let err = |span: Span, msg: &str| SyntaxError { span, expected: vec![msg.to_string()], found: "an incomplete or mixed set of alternatives".into() };
        if alts.len() != 2 {
            return Err(err(span, "exactly two case alternatives"));
        }
        let mut it = alts.into_iter();
        let (a, sa, ta) = it.next().expect("two");
        let (b, _, tb) = it.next().expect("two");
        let s = Box::new(scrut);
        let kind = match (a, b) {
            (Alt::Zero, Alt::Succ(x)) => TermKind::NatCase(s, Box::new(ta), x, Box::new(tb)),
            (Alt::Succ(x), Alt::Zero) => TermKind::NatCase(s, Box::new(tb), x, Box::new(ta)),
            (Alt::Nothing, Alt::Just(x)) => TermKind::MaybeCase(s, Box::new(ta), x, Box::new(tb)),
            (Alt::Just(x), Alt::Nothing) => TermKind::MaybeCase(s, Box::new(tb), x, Box::new(ta)),
            (Alt::True, Alt::False) => TermKind::If(s, Box::new(ta), Box::new(tb)),
            (Alt::False, Alt::True) => TermKind::If(s, Box::new(tb), Box::new(ta)),
            _ => return Err(err(sa, "matching pair of alternatives")),
        };
        Ok(Term::at(kind, span))
    }

    // ---- circuit literals ------------------------------------------------

    fn circ_literal(&mut self, start: Span) -> PResult<Term> {
        let mut inputs = LabelContext::new();
        let a = self.typed_simple(&mut inputs)?;
        self.expect_sym("[")?;
        let mut gates = Vec::new();
        if !self.is_sym("]") {
            loop {
                gates.push(self.gate_app()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("]").or_else(|_| self.error(&["`,`", "`]`"]))?;
        let b = self.simple()?;
        let span = start.to(self.prev_span());
        let bad = |e: crate::circuit::CircuitError| SyntaxError { span, expected: vec!["well-formed circuit".into()], found: e.to_string() };
        let circuit = Circuit::from_gates(inputs, gates).map_err(bad)?;
        let boxed = BoxedCircuit::new(a, circuit, b).map_err(bad)?;
        Ok(Term::at(TermKind::Circ(std::sync::Arc::new(boxed)), span))
    }

    fn label(&mut self) -> PResult<Label> {
        match self.kind() {
            TokKind::Label(n) => {
                let l = Label(*n);
                self.advance();
                Ok(l)
            }
            _ => self.error(&["label"]),
        }
    }

    fn typed_simple(&mut self, ctx: &mut LabelContext) -> PResult<SimpleTerm> {
        if self.eat_sym("(") {
            if self.eat_sym(")") {
                return Ok(SimpleTerm::Unit);
            }
            let mut items = vec![self.typed_simple(ctx)?];
            while self.eat_sym(",") {
                items.push(self.typed_simple(ctx)?);
            }
            self.expect_sym(")").or_else(|_| self.error(&["`,`", "`)`"]))?;
            return Ok(nest(items));
        }
        let span = self.span();
        let l = self.label()?;
        self.expect_sym(":")?;
        let w = match self.kind() {
            TokKind::Ident(s) if s == "Qubit" => WireType::Qubit,
            TokKind::Ident(s) if s == "Bit" => WireType::Bit,
            _ => return self.error(&["`Qubit`", "`Bit`"]),
        };
        self.advance();
        if ctx.contains(l) {
            return Err(SyntaxError { span, expected: vec!["distinct labels".into()], found: format!("repeated {l}") });
        }
        ctx.push(l, w);
        Ok(SimpleTerm::Label(l))
    }

    fn simple(&mut self) -> PResult<SimpleTerm> {
        if self.eat_sym("(") {
            if self.eat_sym(")") {
                return Ok(SimpleTerm::Unit);
            }
            let mut items = vec![self.simple()?];
            while self.eat_sym(",") {
                items.push(self.simple()?);
            }
            self.expect_sym(")").or_else(|_| self.error(&["`,`", "`)`"]))?;
            return Ok(nest(items));
        }
        Ok(SimpleTerm::Label(self.label()?))
    }

    fn gate_app(&mut self) -> PResult<GateApp> {
        let gate = match self.kind() {
            TokKind::Ident(s) => match Gate::from_name(s) {
                Some(g) => g,
                None => return self.error(&["gate name"]),
            },
            _ => return self.error(&["gate name"]),
        };
        self.advance();
        self.expect_sym("(")?;
        let mut ls = Vec::new();
        if !self.is_sym(")") {
            ls.push(self.label()?);
            while self.eat_sym(",") {
                ls.push(self.label()?);
            }
        }
        self.expect_sym(")").or_else(|_| self.error(&["`,`", "`)`"]))?;
        let n = gate.signature().inputs.len();
        if ls.len() != n + gate.signature().produces() {
            return Err(SyntaxError {
                span: self.prev_span(),
                expected: vec![format!("{} wires for {}", n + gate.signature().produces(), gate)],
                found: format!("{} wires", ls.len()),
            });
        }
        let produced = ls.split_off(n);
        Ok(GateApp { gate, wires: ls, produced })
    }
}

fn nest(mut items: Vec<SimpleTerm>) -> SimpleTerm {
    let mut t = items.pop().expect("nonempty");
    while let Some(x) = items.pop() {
        t = SimpleTerm::pair(x, t);
    }
    t
}

enum Pattern {
    Var(Name),
    Wild,
    Tuple(Vec<Name>),
}

enum Alt {
    Zero,
    Succ(Name),
    Nothing,
    Just(Name),
    True,
    False,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, Modality};

    #[test]
    fn box_declaration() {
        let p = parse_program("boxTele : Circ(Qubit, Qubit)\nboxTele = box Qubit tele1").unwrap();
        assert_eq!(p.declarations.len(), 1);
        let d = &p.declarations[0];
        assert_eq!(d.ty, Type::circ(Type::Qubit, Type::Qubit));
        match &d.body.kind {
            TermKind::Box(Type::Qubit, m) => assert!(matches!(&m.kind, TermKind::Var(x) if x == "tele1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_program() {
        assert!(parse_program("").unwrap().declarations.is_empty());
        assert!(parse_program("-- only a comment\n").unwrap().declarations.is_empty());
    }

    #[test]
    fn unbalanced_delimiter() {
        let e = parse_program("f : Qubit\nf = let (x = 3").unwrap_err();
        assert_eq!(e.span.start.line, 2);
        assert!(e.expected.iter().any(|s| s.contains(')')));
    }

    #[test]
    fn elided_and_annotated_types() {
        let t = parse_type("!(Qubit -> Qubit)").unwrap();
        assert!(matches!(&t, Type::Bang(Mode::Hole(_), a) if matches!(**a, Type::Arrow(_, Mode::Hole(_), _))));
        let t = parse_type("!_1(Qubit -o_0 Qubit)").unwrap();
        assert_eq!(t, Type::bang(Modality::One, Type::arrow(Type::Qubit, Modality::Zero, Type::Qubit)));
        let t = parse_type("Qubit * Qubit").unwrap();
        assert_eq!(t, Type::tensor(Type::Qubit, Type::Qubit));
        assert!(!t.has_holes());
    }

    #[test]
    fn type_precedence() {
        let t = parse_type("Qubit -> Qubit -> Bit * Bit").unwrap();
        let expect = parse_type("Qubit -> (Qubit -> (Bit * Bit))").unwrap();
        assert!(t.alpha_eq(&expect));
        let t = parse_type("! (Qubit * Qubit * Qubit -> Maybe Qubit)").unwrap();
        let expect = parse_type("!((Qubit * (Qubit * Qubit)) -> (Maybe Qubit))").unwrap();
        assert!(t.alpha_eq(&expect));
    }

    #[test]
    fn stacked_let_layout() {
        let src = "f : !(Qubit -> Qubit -> Bit * Bit)\nf a q =\n  let (a, q) = CNot a q\n      q = H q\n  in (Meas a, Meas q)\n";
        let p = parse_program(src).unwrap();
        let body = &p.declarations[0].body;
        let expect = parse_term("let (a, q) = CNot a q in let q = H q in (Meas a, Meas q)").unwrap();
        assert!(alpha_eq(body, &expect), "{}", pretty_term(body));
    }

    #[test]
    fn nested_layout_with_case() {
        let src = "\
d : !(Nat -> Qubit)
d n =
  case n of
    Z -> p ()
    S n' ->
     let q1 = d n'
         q2 = d n'
     in
     case g (q1, q2) of
       Nothing -> d n
       Just q -> q
";
        let p = parse_program(src).unwrap();
        let expect = parse_term(
            "case n of { Z -> p (); S n' -> let q1 = d n' in let q2 = d n' in case g (q1, q2) of { Nothing -> d n; Just q -> q } }",
        )
        .unwrap();
        assert!(alpha_eq(&p.declarations[0].body, &expect));
    }

    #[test]
    fn tuple_patterns_and_or() {
        let t = parse_term("let (a, b, c) = t in if a || b || c then x else y").unwrap();
        let s = pretty_term(&t);
        assert!(s.starts_with("let (a, _p0) = t in let (b, c) = _p0 in if or a (or b c)"), "{s}");
    }

    #[test]
    fn circuit_literal() {
        let t = parse_term("circ (ℓ0 : Qubit, ℓ1 : Qubit) [CNot(ℓ1, ℓ0), Init0(ℓ2)] (ℓ0, (ℓ1, ℓ2))").unwrap();
        let TermKind::Circ(b) = &t.kind else { panic!() };
        assert_eq!(b.circuit.gates.len(), 2);
        assert_eq!(b.types().1, Type::tensor(Type::Qubit, Type::tensor(Type::Qubit, Type::Qubit)));
        assert!(parse_term("circ (ℓ0 : Qubit) [Meas(ℓ0)] ()").is_err());
    }

    #[test]
    fn errors_point_inside_input() {
        for src in ["f : Qubit\nf = (", "f : \n", "f : Qubit\ng = x", "x y )", "f : Qubit\nf = case x of Z -> y"] {
            let e = parse_program(src).unwrap_err();
            assert!(e.span.start.line >= 1 && e.span.start.line as usize <= src.lines().count().max(1), "{src:?}: {e}");
        }
    }

    #[test]
    fn offside_binding_rejected() {
        assert!(parse_program("f : Unit\nf =\n  let x = a\n    y = b\n  in x").is_err());
    }
}
