use std::fmt;
use std::sync::Arc;

use super::types::Type;
use crate::circuit::BoxedCircuit;

pub type Name = String;

/// Position in source text, 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    pub fn new(start: Pos, end: Pos) -> Span {
        Span { start, end }
    }

    pub fn to(self, other: Span) -> Span {
        Span { start: self.start, end: other.end }
    }

    pub fn is_dummy(&self) -> bool {
        self.start.line == 0
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start.line, self.start.col)
    }
}

/// Address of a single wire. Opaque; only ever renamed, never substituted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub u64);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℓ{}", self.0)
    }
}

/// `a, b ::= ℓ | () | (a, b)`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SimpleTerm {
    Unit,
    Label(Label),
    Pair(Box<SimpleTerm>, Box<SimpleTerm>),
}

impl SimpleTerm {
    pub fn pair(a: SimpleTerm, b: SimpleTerm) -> SimpleTerm {
        SimpleTerm::Pair(Box::new(a), Box::new(b))
    }

    /// Labels in left-to-right order.
    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<Label>) {
        match self {
            SimpleTerm::Unit => {}
            SimpleTerm::Label(l) => out.push(*l),
            SimpleTerm::Pair(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    pub fn same_shape(&self, other: &SimpleTerm) -> bool {
        match (self, other) {
            (SimpleTerm::Unit, SimpleTerm::Unit) | (SimpleTerm::Label(_), SimpleTerm::Label(_)) => true,
            (SimpleTerm::Pair(a, b), SimpleTerm::Pair(c, d)) => a.same_shape(c) && b.same_shape(d),
            _ => false,
        }
    }

    pub fn rename(&self, f: &impl Fn(Label) -> Label) -> SimpleTerm {
        match self {
            SimpleTerm::Unit => SimpleTerm::Unit,
            SimpleTerm::Label(l) => SimpleTerm::Label(f(*l)),
            SimpleTerm::Pair(a, b) => SimpleTerm::pair(a.rename(f), b.rename(f)),
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            SimpleTerm::Unit => Term::new(TermKind::Unit),
            SimpleTerm::Label(l) => Term::new(TermKind::Label(*l)),
            SimpleTerm::Pair(a, b) => Term::new(TermKind::Pair(Box::new(a.to_term()), Box::new(b.to_term()))),
        }
    }

    /// Reads a term back as a simple term, if it is one.
    pub fn from_term(t: &Term) -> Option<SimpleTerm> {
        match &t.kind {
            TermKind::Unit => Some(SimpleTerm::Unit),
            TermKind::Label(l) => Some(SimpleTerm::Label(*l)),
            TermKind::Pair(a, b) => Some(SimpleTerm::pair(SimpleTerm::from_term(a)?, SimpleTerm::from_term(b)?)),
            _ => None,
        }
    }
}

impl fmt::Display for SimpleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleTerm::Unit => f.write_str("()"),
            SimpleTerm::Label(l) => write!(f, "{l}"),
            SimpleTerm::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum TermKind {
    Var(Name),
    /// Reference to a top-level declaration. The counter records how many
    /// unfoldings of that same declaration enclose this occurrence.
    Global(Name, u32),
    Label(Label),
    Bool(bool),
    Unit,
    Lambda(Name, Box<Term>),
    App(Box<Term>, Box<Term>),
    Circ(Arc<BoxedCircuit>),
    Apply(Box<Term>, Box<Term>),
    Force(Box<Term>),
    Lift(Box<Term>),
    Box(Type, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    /// `let (x, y) = N in M`, stored as (x, y, N, M).
    LetPair(Name, Name, Box<Term>, Box<Term>),
    /// `let x = N in M`
    Let(Name, Box<Term>, Box<Term>),
    /// `let _ = N in M` with `N : Unit`
    LetUnit(Box<Term>, Box<Term>),
    Dynlift(Box<Term>),
    If(Box<Term>, Box<Term>, Box<Term>),
    Nat(u64),
    Succ(Box<Term>),
    /// `case N of Z -> M0; S x -> M1`
    NatCase(Box<Term>, Box<Term>, Name, Box<Term>),
    Nothing,
    Just(Box<Term>),
    /// `case N of Nothing -> M0; Just x -> M1`
    MaybeCase(Box<Term>, Box<Term>, Name, Box<Term>),
}

impl Term {
    pub fn new(kind: TermKind) -> Term {
        Term { kind, span: Span::default() }
    }

    pub fn at(kind: TermKind, span: Span) -> Term {
        Term { kind, span }
    }

    pub fn var(name: impl Into<Name>) -> Term {
        Term::new(TermKind::Var(name.into()))
    }

    pub fn label(l: Label) -> Term {
        Term::new(TermKind::Label(l))
    }

    pub fn lambda(x: impl Into<Name>, body: Term) -> Term {
        Term::new(TermKind::Lambda(x.into(), Box::new(body)))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::new(TermKind::App(Box::new(f), Box::new(a)))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::new(TermKind::Pair(Box::new(a), Box::new(b)))
    }

    pub fn if_(c: Term, t: Term, e: Term) -> Term {
        Term::new(TermKind::If(Box::new(c), Box::new(t), Box::new(e)))
    }

    pub fn apply(c: Term, a: Term) -> Term {
        Term::new(TermKind::Apply(Box::new(c), Box::new(a)))
    }

    pub fn force(m: Term) -> Term {
        Term::new(TermKind::Force(Box::new(m)))
    }

    pub fn lift(m: Term) -> Term {
        Term::new(TermKind::Lift(Box::new(m)))
    }

    pub fn boxed(s: Type, m: Term) -> Term {
        Term::new(TermKind::Box(s, Box::new(m)))
    }

    pub fn dynlift(m: Term) -> Term {
        Term::new(TermKind::Dynlift(Box::new(m)))
    }

    pub fn circ(c: BoxedCircuit) -> Term {
        Term::new(TermKind::Circ(Arc::new(c)))
    }

    pub fn is_value(&self) -> bool {
        match &self.kind {
            TermKind::Var(_)
            | TermKind::Label(_)
            | TermKind::Lambda(..)
            | TermKind::Lift(_)
            | TermKind::Circ(_)
            | TermKind::Unit
            | TermKind::Bool(_)
            | TermKind::Nat(_)
            | TermKind::Nothing => true,
            TermKind::Just(v) => v.is_value(),
            TermKind::Pair(a, b) => a.is_value() && b.is_value(),
            _ => false,
        }
    }

    pub fn children(&self) -> Vec<&Term> {
        use TermKind::*;
        match &self.kind {
            Var(_) | Global(..) | Label(_) | Bool(_) | Unit | Circ(_) | Nat(_) | Nothing => vec![],
            Lambda(_, m) | Force(m) | Lift(m) | Box(_, m) | Dynlift(m) | Succ(m) | Just(m) => vec![m],
            App(a, b) | Apply(a, b) | Pair(a, b) | LetUnit(a, b) => vec![a, b],
            LetPair(_, _, n, m) | Let(_, n, m) => vec![n, m],
            If(a, b, c) | NatCase(a, b, _, c) | MaybeCase(a, b, _, c) => vec![a, b, c],
        }
    }

    /// Free labels in order of first occurrence. Labels inside a boxed
    /// circuit literal are bound by it and not reported.
    pub fn free_labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels(&self, out: &mut Vec<Label>) {
        if let TermKind::Label(l) = &self.kind {
            if !out.contains(l) {
                out.push(*l);
            }
        }
        for c in self.children() {
            c.collect_labels(out);
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}
