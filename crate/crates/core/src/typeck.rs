//! Bidirectional type checking with modality inference.
//!
//! Modalities that the source leaves implicit become holes. Checking
//! collects constraints `hole ≤ m1 & … & mk` and solves them for the
//! greatest assignment: every hole starts at 1 and is lowered only when
//! some derivation forces it. A forced `1 ≤ 0` is reported through the
//! rule that introduced the constraint.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::circuit::BoxedCircuit;
use crate::syntax::{
    free_vars, Binder, Declaration, HoleId, Modality, Mode, Name, Program, Span, Term, TermKind, Type,
    TypingContext,
};

/// One-line summaries of the typing rules, attached to diagnostics.
pub mod rules {
    pub const VAR: &str = "var requires every other binding to be a parameter";
    pub const LAMBDA: &str = "lambda: Γ, x:A ⊢α M : B gives Γ ⊢1 λx.M : A -o_α B";
    pub const APP: &str = "app requires M : A -o_α B and N : A";
    pub const LIFT: &str = "lift requires a parameter context";
    pub const FORCE: &str = "force requires M : !_β A";
    pub const BOX: &str = "box requires !_1(S -o_1 U)";
    pub const APPLY: &str = "apply requires Circ(S, U) and an argument of type S";
    pub const DYNLIFT: &str = "dynlift requires M : Bit";
    pub const PAIR: &str = "pair: Γ1 ⊢ M : A, Γ2 ⊢ N : B gives Γ1 + Γ2 ⊢ (M, N) : A * B";
    pub const LET: &str = "let binds every linear variable exactly once";
    pub const BRANCH: &str = "branches must agree on type and consumed linear resources";
    pub const ANNOTATION: &str = "explicit modality annotation";
    pub const CHECK: &str = "judgment is required at modality 1";
    pub const DECL: &str = "top-level declarations must have parameter types";
    pub const UNIFY: &str = "types must be equal";
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TypeErrorKind {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Name),
    #[error("linear variable `{0}` must be used exactly once")]
    LinearityViolation(String),
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: Type, found: Type },
    #[error("expected a function, found {0}")]
    NotAFunction(Type),
    #[error("modality error: expected 1, found 0")]
    ModalityError,
    #[error("explicit modality annotation 1 conflicts with the derived modality 0")]
    ModalityAnnotationConflict,
    #[error("`{0}` has non-parameter type {1}")]
    NotAParameter(Name, Type),
    #[error("{0} is not a simple type")]
    NotSimple(Type),
    #[error("`{0}` depends on `{1}`, which failed to check")]
    DependencyFailed(Name, Name),
    #[error("mutually recursive declarations are not supported: {}", .0.join(", "))]
    MutualRecursion(Vec<Name>),
    #[error("`{0}` is declared more than once")]
    DuplicateDeclaration(Name),
    #[error("{0}")]
    Context(#[from] crate::syntax::ContextError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub span: Span,
    pub rule: &'static str,
    /// Declaration being checked, when known.
    pub decl: Option<Name>,
}

impl TypeError {
    fn new(kind: TypeErrorKind, span: Span, rule: &'static str) -> TypeError {
        TypeError { kind, span, rule, decl: None }
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: error: {} ({})", self.span, self.kind, self.rule)?;
        if let Some(d) = &self.decl {
            write!(f, " in `{d}`")?;
        }
        Ok(())
    }
}

impl std::error::Error for TypeError {}

type Res<T> = Result<T, TypeError>;

/// Linear names and labels consumed by a judgment, in context order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UsageReport {
    pub consumed: Vec<Binder>,
}

#[derive(Clone, Debug)]
pub struct CheckedDecl {
    pub name: Name,
    /// Fully annotated declared type.
    pub ty: Type,
    /// Modality of the body's judgment.
    pub modality: Modality,
    /// Body with forces, lifts, globals and circuit constants made explicit.
    pub body: Term,
    pub span: Span,
}

/// Successfully checked declarations, in checking order.
#[derive(Clone, Debug, Default)]
pub struct Env {
    decls: HashMap<Name, CheckedDecl>,
    order: Vec<Name>,
    failed: HashSet<Name>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn get(&self, name: &str) -> Option<&CheckedDecl> {
        self.decls.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.decls.contains_key(name)
    }

    pub fn insert(&mut self, d: CheckedDecl) {
        if !self.decls.contains_key(&d.name) {
            self.order.push(d.name.clone());
        }
        self.failed.remove(&d.name);
        self.decls.insert(d.name.clone(), d);
    }

    pub fn decls(&self) -> impl Iterator<Item = &CheckedDecl> {
        self.order.iter().map(|n| &self.decls[n])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The program with every declared type fully annotated.
    pub fn annotated_program(&self) -> Program {
        Program {
            declarations: self
                .decls()
                .map(|d| Declaration {
                    name: d.name.clone(),
                    ty: d.ty.clone(),
                    params: vec![],
                    body: d.body.clone(),
                    span: d.span,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ProgramCheck {
    pub env: Env,
    pub errors: Vec<TypeError>,
}

impl ProgramCheck {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Conjunction of modality atoms; `zero` means a literal 0 is among them.
#[derive(Clone, Debug, Default, PartialEq)]
struct MExpr {
    zero: bool,
    holes: BTreeSet<HoleId>,
}

impl MExpr {
    fn one() -> MExpr {
        MExpr::default()
    }

    fn zero() -> MExpr {
        MExpr { zero: true, holes: BTreeSet::new() }
    }

    fn mode(m: Mode) -> MExpr {
        match m {
            Mode::Known(Modality::One) => MExpr::one(),
            Mode::Known(Modality::Zero) => MExpr::zero(),
            Mode::Hole(h) => MExpr { zero: false, holes: BTreeSet::from([h]) },
        }
    }

    fn and(mut self, other: &MExpr) -> MExpr {
        self.zero |= other.zero;
        self.holes.extend(other.holes.iter().copied());
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum OriginKind {
    Plain,
    Box,
    Annotation,
    Current,
    Unify,
}

#[derive(Clone, Debug)]
struct Origin {
    span: Span,
    kind: OriginKind,
}

impl Origin {
    fn error(&self) -> TypeError {
        let (kind, rule) = match self.kind {
            OriginKind::Box => (TypeErrorKind::ModalityError, rules::BOX),
            OriginKind::Annotation => (TypeErrorKind::ModalityAnnotationConflict, rules::ANNOTATION),
            OriginKind::Current => (TypeErrorKind::ModalityError, rules::CHECK),
            OriginKind::Unify | OriginKind::Plain => (TypeErrorKind::ModalityError, rules::UNIFY),
        };
        TypeError::new(kind, self.span, rule)
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum Status {
    Param,
    Linear,
    Unknown,
}

fn status(t: &Type) -> Status {
    match t {
        Type::Unit | Type::Nat | Type::Bool | Type::Bang(..) | Type::Circ(..) => Status::Param,
        Type::Qubit | Type::Bit | Type::Arrow(..) => Status::Linear,
        Type::Meta(_) => Status::Unknown,
        Type::Maybe(a) => status(a),
        Type::Tensor(a, b) => match (status(a), status(b)) {
            (Status::Param, Status::Param) => Status::Param,
            (Status::Linear, _) | (_, Status::Linear) => Status::Linear,
            _ => Status::Unknown,
        },
    }
}

struct Entry {
    binder: Binder,
    ty: Type,
    uses: u32,
    span: Span,
}

/// A binding whose type was unknown when its usage mattered.
struct Obligation {
    binder: Binder,
    ty: Type,
    uses: u32,
    span: Span,
    rule: &'static str,
}

const MUST_BE_PARAMETER: u32 = u32::MAX;

struct Current {
    name: Name,
    ty: Type,
    delta: HoleId,
}

enum Mismatch {
    Shape,
    Mode,
}

struct Checker<'e> {
    env: &'e Env,
    current: Option<Current>,
    ctx: Vec<Entry>,
    metas: Vec<Option<Type>>,
    next_hole: HoleId,
    constraints: Vec<(Mode, Mode, Rc<Origin>)>,
    obligations: Vec<Obligation>,
    solution: HashMap<HoleId, bool>,
}

impl<'e> Checker<'e> {
    fn new(env: &'e Env) -> Checker<'e> {
        Checker {
            env,
            current: None,
            ctx: Vec::new(),
            metas: Vec::new(),
            next_hole: 0,
            constraints: Vec::new(),
            obligations: Vec::new(),
            solution: HashMap::new(),
        }
    }

    fn fresh_hole(&mut self) -> HoleId {
        self.next_hole += 1;
        self.next_hole - 1
    }

    fn fresh_meta(&mut self) -> Type {
        self.metas.push(None);
        Type::Meta(self.metas.len() as u32 - 1)
    }

    /// Gives the holes of externally supplied types fresh identities.
    fn renumber(&mut self, t: &Type, map: &mut HashMap<HoleId, HoleId>) -> Type {
        t.map_modes(&mut |m| match m {
            Mode::Hole(h) => Mode::Hole(*map.entry(h).or_insert_with(|| {
                self.next_hole += 1;
                self.next_hole - 1
            })),
            k => k,
        })
    }

    // ---- types and unification ----

    /// Follows solved metas at the head.
    fn resolve(&self, t: &Type) -> Type {
        let mut t = t.clone();
        while let Type::Meta(i) = t {
            match &self.metas[i as usize] {
                Some(u) => t = u.clone(),
                None => break,
            }
        }
        t
    }

    fn zonk(&self, t: &Type) -> Type {
        match self.resolve(t) {
            Type::Bang(m, a) => Type::Bang(m, Box::new(self.zonk(&a))),
            Type::Arrow(a, m, b) => Type::Arrow(Box::new(self.zonk(&a)), m, Box::new(self.zonk(&b))),
            Type::Circ(a, b) => Type::circ(self.zonk(&a), self.zonk(&b)),
            Type::Tensor(a, b) => Type::tensor(self.zonk(&a), self.zonk(&b)),
            Type::Maybe(a) => Type::maybe(self.zonk(&a)),
            t => t,
        }
    }

    /// Zonks, fills holes from the solution and defaults leftover metas to Unit.
    fn finalize(&self, t: &Type) -> Type {
        fn metas_to_unit(t: &Type) -> Type {
            match t {
                Type::Meta(_) => Type::Unit,
                Type::Bang(m, a) => Type::Bang(*m, Box::new(metas_to_unit(a))),
                Type::Arrow(a, m, b) => Type::Arrow(Box::new(metas_to_unit(a)), *m, Box::new(metas_to_unit(b))),
                Type::Circ(a, b) => Type::circ(metas_to_unit(a), metas_to_unit(b)),
                Type::Tensor(a, b) => Type::tensor(metas_to_unit(a), metas_to_unit(b)),
                Type::Maybe(a) => Type::maybe(metas_to_unit(a)),
                t => t.clone(),
            }
        }
        metas_to_unit(&self.zonk(t)).map_modes(&mut |m| Mode::Known(self.mode_value(m)))
    }

    fn mode_value(&self, m: Mode) -> Modality {
        match m {
            Mode::Known(k) => k,
            Mode::Hole(h) => {
                if self.solution.get(&h).copied().unwrap_or(true) {
                    Modality::One
                } else {
                    Modality::Zero
                }
            }
        }
    }

    fn mexpr_value(&self, e: &MExpr) -> Modality {
        if e.zero || e.holes.iter().any(|h| self.mode_value(Mode::Hole(*h)) == Modality::Zero) {
            Modality::Zero
        } else {
            Modality::One
        }
    }

    fn occurs(&self, i: u32, t: &Type) -> bool {
        match self.resolve(t) {
            Type::Meta(j) => i == j,
            Type::Bang(_, a) | Type::Maybe(a) => self.occurs(i, &a),
            Type::Arrow(a, _, b) | Type::Circ(a, b) | Type::Tensor(a, b) => self.occurs(i, &a) || self.occurs(i, &b),
            _ => false,
        }
    }

    fn unify_modes(&mut self, a: Mode, b: Mode, origin: &Rc<Origin>) -> Result<(), Mismatch> {
        match (a, b) {
            (Mode::Known(x), Mode::Known(y)) => {
                if x == y {
                    Ok(())
                } else {
                    Err(Mismatch::Mode)
                }
            }
            _ => {
                self.constraints.push((a, b, origin.clone()));
                self.constraints.push((b, a, origin.clone()));
                Ok(())
            }
        }
    }

    fn unify_rec(&mut self, a: &Type, b: &Type, origin: &Rc<Origin>) -> Result<(), Mismatch> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (Type::Meta(i), Type::Meta(j)) if i == j => Ok(()),
            (Type::Meta(i), t) | (t, Type::Meta(i)) => {
                if self.occurs(*i, t) {
                    return Err(Mismatch::Shape);
                }
                self.metas[*i as usize] = Some(t.clone());
                Ok(())
            }
            (Type::Unit, Type::Unit)
            | (Type::Qubit, Type::Qubit)
            | (Type::Bit, Type::Bit)
            | (Type::Bool, Type::Bool)
            | (Type::Nat, Type::Nat) => Ok(()),
            (Type::Bang(m, x), Type::Bang(n, y)) => {
                self.unify_rec(x, y, origin)?;
                self.unify_modes(*m, *n, origin)
            }
            (Type::Arrow(x1, m, y1), Type::Arrow(x2, n, y2)) => {
                self.unify_rec(x1, x2, origin)?;
                self.unify_rec(y1, y2, origin)?;
                self.unify_modes(*m, *n, origin)
            }
            (Type::Circ(x1, y1), Type::Circ(x2, y2)) | (Type::Tensor(x1, y1), Type::Tensor(x2, y2)) => {
                self.unify_rec(x1, x2, origin)?;
                self.unify_rec(y1, y2, origin)
            }
            (Type::Maybe(x), Type::Maybe(y)) => self.unify_rec(x, y, origin),
            _ => Err(Mismatch::Shape),
        }
    }

    fn unify(&mut self, expected: &Type, found: &Type, span: Span, kind: OriginKind, rule: &'static str) -> Res<()> {
        let origin = Rc::new(Origin { span, kind });
        match self.unify_rec(expected, found, &origin) {
            Ok(()) => Ok(()),
            Err(Mismatch::Mode) if kind == OriginKind::Box => Err(origin.error()),
            Err(_) => Err(TypeError::new(
                TypeErrorKind::TypeMismatch { expected: self.zonk(expected), found: self.zonk(found) },
                span,
                rule,
            )),
        }
    }

    /// Records `lhs ≤ rhs`.
    fn leq(&mut self, lhs: Mode, rhs: &MExpr, span: Span, kind: OriginKind) -> Res<()> {
        if lhs == Mode::ZERO {
            return Ok(());
        }
        let origin = Rc::new(Origin { span, kind });
        if rhs.zero {
            if lhs == Mode::ONE {
                return Err(origin.error());
            }
            self.constraints.push((lhs, Mode::ZERO, origin.clone()));
        }
        for h in &rhs.holes {
            self.constraints.push((lhs, Mode::Hole(*h), origin.clone()));
        }
        Ok(())
    }

    /// Greatest solution of the recorded constraints.
    fn solve(&mut self) -> Res<()> {
        self.solution.clear();
        let mut changed = true;
        while changed {
            changed = false;
            for (lhs, rhs, origin) in &self.constraints {
                if self.mode_value(*rhs) == Modality::Zero && self.mode_value(*lhs) == Modality::One {
                    match lhs {
                        Mode::Hole(h) => {
                            self.solution.insert(*h, false);
                            changed = true;
                        }
                        Mode::Known(_) => return Err(origin.error()),
                    }
                }
            }
        }
        Ok(())
    }

    // ---- context ----

    fn push(&mut self, binder: Binder, ty: Type, span: Span) {
        self.ctx.push(Entry { binder, ty, uses: 0, span });
    }

    fn pop(&mut self) -> Res<()> {
        let e = self.ctx.pop().expect("balanced scopes");
        self.settle(e.binder, e.ty, e.uses, e.span, rules::LET)
    }

    fn settle(&mut self, binder: Binder, ty: Type, uses: u32, span: Span, rule: &'static str) -> Res<()> {
        let ty = self.zonk(&ty);
        match status(&ty) {
            Status::Param => Ok(()),
            Status::Linear if uses == 1 => Ok(()),
            Status::Linear => Err(TypeError::new(TypeErrorKind::LinearityViolation(binder.to_string()), span, rule)),
            Status::Unknown => {
                if uses != 1 {
                    self.obligations.push(Obligation { binder, ty, uses, span, rule });
                }
                Ok(())
            }
        }
    }

    fn snapshot(&self) -> Vec<u32> {
        self.ctx.iter().map(|e| e.uses).collect()
    }

    /// Outer bindings consumed since `before` must be parameters.
    fn forbid_consumption(&mut self, before: &[u32], span: Span, rule: &'static str) -> Res<()> {
        for i in 0..before.len() {
            if self.ctx[i].uses != before[i] {
                let (b, t) = (self.ctx[i].binder.clone(), self.ctx[i].ty.clone());
                self.settle(b, t, MUST_BE_PARAMETER, span, rule)?;
            }
        }
        Ok(())
    }

    /// Runs two branches from the same context; both must consume the same
    /// linear bindings.
    fn branches<A, B>(
        &mut self,
        span: Span,
        ty: &mut Option<Type>,
        first: impl FnOnce(&mut Self, &mut Option<Type>) -> Res<A>,
        second: impl FnOnce(&mut Self, &mut Option<Type>) -> Res<B>,
    ) -> Res<(A, B)> {
        let before = self.snapshot();
        let a = first(self, ty)?;
        let after_first = self.snapshot();
        for (e, u) in self.ctx.iter_mut().zip(&before) {
            e.uses = *u;
        }
        let b = second(self, ty)?;
        for i in 0..before.len() {
            let (u1, u2) = (after_first[i] > before[i], self.ctx[i].uses > before[i]);
            if u1 != u2 {
                let (bd, t) = (self.ctx[i].binder.clone(), self.ctx[i].ty.clone());
                self.settle(bd, t, MUST_BE_PARAMETER, span, rules::BRANCH)?;
            }
            self.ctx[i].uses = self.ctx[i].uses.max(after_first[i]);
        }
        Ok((a, b))
    }

    fn use_binder(&mut self, b: &Binder, span: Span) -> Res<Option<Type>> {
        let Some(i) = self.ctx.iter().rposition(|e| &e.binder == b) else {
            return Ok(None);
        };
        self.ctx[i].uses = self.ctx[i].uses.saturating_add(1);
        let ty = self.zonk(&self.ctx[i].ty);
        if self.ctx[i].uses > 1 && status(&ty) == Status::Linear {
            return Err(TypeError::new(TypeErrorKind::LinearityViolation(b.to_string()), span, rules::VAR));
        }
        Ok(Some(ty))
    }

    fn global(&mut self, x: &str, span: Span) -> Res<(Term, Type, MExpr)> {
        let g = Term::at(TermKind::Global(x.to_string(), 0), span);
        if let Some(cur) = &self.current {
            if cur.name == x {
                return Ok((g, cur.ty.clone(), MExpr::mode(Mode::Hole(cur.delta))));
            }
        }
        if let Some(d) = self.env.get(x) {
            return Ok((g, d.ty.clone(), MExpr::mode(Mode::Known(d.modality))));
        }
        if let Some(c) = BoxedCircuit::builtin(x) {
            let (s, u) = c.types();
            return Ok((Term::at(TermKind::Circ(std::sync::Arc::new(c)), span), Type::circ(s, u), MExpr::one()));
        }
        let kind = match (&self.current, self.env.failed.contains(x)) {
            (Some(cur), true) => TypeErrorKind::DependencyFailed(cur.name.clone(), x.to_string()),
            _ => TypeErrorKind::UnboundVariable(x.to_string()),
        };
        Err(TypeError::new(kind, span, rules::VAR))
    }

    // ---- inference ----

    fn infer(&mut self, t: &Term) -> Res<(Term, Type, MExpr)> {
        use TermKind as K;
        let span = t.span;
        let at = |k: TermKind| Term::at(k, span);
        Ok(match &t.kind {
            K::Var(x) => match self.use_binder(&Binder::Var(x.clone()), span)? {
                Some(ty) => (t.clone(), ty, MExpr::one()),
                None => self.global(x, span)?,
            },
            K::Global(x, _) => self.global(x, span)?,
            K::Label(l) => match self.use_binder(&Binder::Label(*l), span)? {
                Some(ty) => (t.clone(), ty, MExpr::one()),
                None => return Err(TypeError::new(TypeErrorKind::UnboundVariable(l.to_string()), span, rules::VAR)),
            },
            K::Bool(_) => (t.clone(), Type::Bool, MExpr::one()),
            K::Unit => (t.clone(), Type::Unit, MExpr::one()),
            K::Nat(_) => (t.clone(), Type::Nat, MExpr::one()),
            K::Nothing => (t.clone(), Type::maybe(self.fresh_meta()), MExpr::one()),
            K::Lambda(x, body) => {
                let a = self.fresh_meta();
                self.push(Binder::Var(x.clone()), a.clone(), span);
                let (body, b, mu) = self.infer(body)?;
                self.pop()?;
                let h = Mode::Hole(self.fresh_hole());
                self.leq(h, &mu, span, OriginKind::Plain)?;
                (at(K::Lambda(x.clone(), Box::new(body))), Type::Arrow(Box::new(a), h, Box::new(b)), MExpr::one())
            }
            K::App(f, a) => {
                let (f, ft, mf) = self.infer(f)?;
                let (f, ft, mf) = self.auto_force(f, ft, mf);
                let (arg_ty, beta, res) = match self.resolve(&ft) {
                    Type::Arrow(x, m, y) => (*x, m, *y),
                    Type::Meta(_) => {
                        let (x, y, m) = (self.fresh_meta(), self.fresh_meta(), Mode::Hole(self.fresh_hole()));
                        self.unify(&Type::Arrow(Box::new(x.clone()), m, Box::new(y.clone())), &ft, span, OriginKind::Unify, rules::APP)?;
                        (x, m, y)
                    }
                    other => return Err(TypeError::new(TypeErrorKind::NotAFunction(self.zonk(&other)), f.span, rules::APP)),
                };
                let (a, ma) = self.check(a, &arg_ty)?;
                (at(K::App(Box::new(f), Box::new(a))), res, mf.and(&ma).and(&MExpr::mode(beta)))
            }
            K::Circ(c) => {
                let (s, u) = c.types();
                (t.clone(), Type::circ(s, u), MExpr::one())
            }
            K::Apply(c, a) => {
                let (c, ct, mc) = self.infer(c)?;
                let (s, u) = match self.resolve(&ct) {
                    Type::Circ(s, u) => (*s, *u),
                    Type::Meta(_) => {
                        let (s, u) = (self.fresh_meta(), self.fresh_meta());
                        self.unify(&Type::circ(s.clone(), u.clone()), &ct, span, OriginKind::Unify, rules::APPLY)?;
                        (s, u)
                    }
                    other => {
                        let expected = Type::circ(self.fresh_meta(), self.fresh_meta());
                        let found = self.zonk(&other);
                        return Err(TypeError::new(TypeErrorKind::TypeMismatch { expected, found }, c.span, rules::APPLY));
                    }
                };
                let (a, ma) = self.check(a, &s)?;
                (at(K::Apply(Box::new(c), Box::new(a))), u, mc.and(&ma))
            }
            K::Force(m) => {
                let (m, mt, mu) = self.infer(m)?;
                let (inner, beta) = match self.resolve(&mt) {
                    Type::Bang(b, a) => (*a, b),
                    _ => {
                        let (a, b) = (self.fresh_meta(), Mode::Hole(self.fresh_hole()));
                        self.unify(&Type::bang(b, a.clone()), &mt, span, OriginKind::Unify, rules::FORCE)?;
                        (a, b)
                    }
                };
                (at(K::Force(Box::new(m))), inner, mu.and(&MExpr::mode(beta)))
            }
            K::Lift(m) => {
                let before = self.snapshot();
                let (m, a, mu) = self.infer(m)?;
                self.forbid_consumption(&before, span, rules::LIFT)?;
                let h = Mode::Hole(self.fresh_hole());
                self.leq(h, &mu, span, OriginKind::Plain)?;
                (at(K::Lift(Box::new(m))), Type::bang(h, a), MExpr::one())
            }
            K::Box(s, m) => self.infer_box(s, m, span)?,
            K::Pair(a, b) => {
                let (a, ta, ma) = self.infer(a)?;
                let (b, tb, mb) = self.infer(b)?;
                (at(K::Pair(Box::new(a), Box::new(b))), Type::tensor(ta, tb), ma.and(&mb))
            }
            K::Dynlift(m) => {
                let (m, _) = self.check_rule(m, &Type::Bit, rules::DYNLIFT)?;
                (at(K::Dynlift(Box::new(m))), Type::Bool, MExpr::zero())
            }
            K::Succ(m) => {
                let (m, mu) = self.check(m, &Type::Nat)?;
                (at(K::Succ(Box::new(m))), Type::Nat, mu)
            }
            K::Just(m) => {
                let (m, a, mu) = self.infer(m)?;
                (at(K::Just(Box::new(m))), Type::maybe(a), mu)
            }
            K::Let(..) | K::LetPair(..) | K::LetUnit(..) | K::If(..) | K::NatCase(..) | K::MaybeCase(..) => {
                let mut ty = None;
                let (t, mu) = self.structural(t, &mut ty)?;
                (t, ty.expect("inference mode fills the type"), mu)
            }
        })
    }

    /// Inserts a force when a function position or a non-bang expectation
    /// meets a bang type.
    fn auto_force(&mut self, m: Term, ty: Type, mu: MExpr) -> (Term, Type, MExpr) {
        match self.resolve(&ty) {
            Type::Bang(b, a) => {
                let span = m.span;
                (Term::at(TermKind::Force(Box::new(m)), span), *a, mu.and(&MExpr::mode(b)))
            }
            _ => (m, ty, mu),
        }
    }

    fn infer_box(&mut self, s: &Type, m: &Term, span: Span) -> Res<(Term, Type, MExpr)> {
        if !s.is_simple() {
            return Err(TypeError::new(TypeErrorKind::NotSimple(s.clone()), span, rules::BOX));
        }
        let u = self.fresh_meta();
        let (m, mt, mu) = if let TermKind::Lambda(..) = m.kind {
            let before = self.snapshot();
            let want = Type::Arrow(Box::new(s.clone()), Mode::Hole(self.fresh_hole()), Box::new(self.fresh_meta()));
            let (m, mu) = self.check(m, &want)?;
            self.forbid_consumption(&before, span, rules::LIFT)?;
            let h = Mode::Hole(self.fresh_hole());
            self.leq(h, &mu, span, OriginKind::Plain)?;
            let lifted = Term::at(TermKind::Lift(Box::new(m)), span);
            (lifted, Type::bang(h, want), MExpr::one())
        } else {
            self.infer(m)?
        };
        let required = Type::bang(Modality::One, Type::arrow(s.clone(), Modality::One, u.clone()));
        self.unify(&required, &mt, span, OriginKind::Box, rules::BOX)?;
        let u = self.zonk(&u);
        if !u.is_simple() {
            return Err(TypeError::new(TypeErrorKind::NotSimple(u), span, rules::BOX));
        }
        Ok((Term::at(TermKind::Box(s.clone(), Box::new(m)), span), Type::circ(s.clone(), u), mu))
    }

    // ---- checking ----

    fn check(&mut self, t: &Term, want: &Type) -> Res<(Term, MExpr)> {
        self.check_rule(t, want, rules::UNIFY)
    }

    fn check_rule(&mut self, t: &Term, want: &Type, rule: &'static str) -> Res<(Term, MExpr)> {
        use TermKind as K;
        let span = t.span;
        let want = self.resolve(want);
        match (&t.kind, &want) {
            (K::Lambda(x, body), Type::Arrow(a, alpha, b)) => {
                self.push(Binder::Var(x.clone()), (**a).clone(), span);
                let (body, mu) = self.check(body, b)?;
                self.pop()?;
                self.leq(*alpha, &mu, span, OriginKind::Annotation)?;
                Ok((Term::at(K::Lambda(x.clone(), Box::new(body)), span), MExpr::one()))
            }
            (K::Lambda(..), Type::Bang(m, a)) => {
                let lifted = Term::at(K::Lift(Box::new(t.clone())), span);
                self.check_lift(&lifted, *m, a, span)
            }
            (K::Lift(_), Type::Bang(m, a)) => self.check_lift(t, *m, a, span),
            (_, Type::Bang(m, a)) if !self.is_structural(t) => {
                let before = self.snapshot();
                let (e, found, mu) = self.infer(t)?;
                if let Type::Bang(..) | Type::Meta(_) = self.resolve(&found) {
                    self.unify(&want, &found, span, OriginKind::Unify, rule)?;
                    return Ok((e, mu));
                }
                // A term of the underlying type is lifted implicitly.
                self.forbid_consumption(&before, span, rules::LIFT)?;
                self.unify(a, &found, span, OriginKind::Unify, rule)?;
                self.leq(*m, &mu, span, OriginKind::Annotation)?;
                Ok((Term::at(K::Lift(Box::new(e)), span), MExpr::one()))
            }
            (K::Pair(x, y), Type::Tensor(a, b)) => {
                let (x, mx) = self.check(x, a)?;
                let (y, my) = self.check(y, b)?;
                Ok((Term::at(K::Pair(Box::new(x), Box::new(y)), span), mx.and(&my)))
            }
            (K::Just(x), Type::Maybe(a)) => {
                let (x, mx) = self.check(x, a)?;
                Ok((Term::at(K::Just(Box::new(x)), span), mx))
            }
            (K::Nothing, Type::Maybe(_)) => Ok((t.clone(), MExpr::one())),
            _ if self.is_structural(t) => {
                let mut ty = Some(want.clone());
                self.structural(t, &mut ty)
            }
            _ => {
                let (e, found, mu) = self.infer(t)?;
                let (e, found, mu) = match want {
                    Type::Meta(_) | Type::Bang(..) => (e, found, mu),
                    _ => self.auto_force(e, found, mu),
                };
                self.unify(&want, &found, span, OriginKind::Unify, rule)?;
                Ok((e, mu))
            }
        }
    }

    fn check_lift(&mut self, t: &Term, m: Mode, a: &Type, span: Span) -> Res<(Term, MExpr)> {
        let TermKind::Lift(inner) = &t.kind else { unreachable!("caller passes a lift") };
        let before = self.snapshot();
        let (inner, mu) = self.check(inner, a)?;
        self.forbid_consumption(&before, span, rules::LIFT)?;
        self.leq(m, &mu, span, OriginKind::Annotation)?;
        Ok((Term::at(TermKind::Lift(Box::new(inner)), span), MExpr::one()))
    }

    fn is_structural(&self, t: &Term) -> bool {
        use TermKind as K;
        matches!(t.kind, K::Let(..) | K::LetPair(..) | K::LetUnit(..) | K::If(..) | K::NatCase(..) | K::MaybeCase(..))
    }

    /// Binding and branching forms. `ty` is the expected type in checking
    /// mode, or `None` to infer; on return it holds the result type.
    fn structural(&mut self, t: &Term, ty: &mut Option<Type>) -> Res<(Term, MExpr)> {
        use TermKind as K;
        let span = t.span;
        let at = |k: TermKind| Term::at(k, span);
        match &t.kind {
            K::Let(x, n, m) => {
                let (n, a, mn) = self.infer(n)?;
                self.push(Binder::Var(x.clone()), a, n.span);
                let (m, mm) = self.body(m, ty)?;
                self.pop()?;
                Ok((at(K::Let(x.clone(), Box::new(n), Box::new(m))), mn.and(&mm)))
            }
            K::LetPair(x, y, n, m) => {
                let (n, nt, mn) = self.infer(n)?;
                let (n, nt, mn) = self.auto_force(n, nt, mn);
                let (a, b) = match self.resolve(&nt) {
                    Type::Tensor(a, b) => (*a, *b),
                    _ => {
                        let (a, b) = (self.fresh_meta(), self.fresh_meta());
                        self.unify(&Type::tensor(a.clone(), b.clone()), &nt, n.span, OriginKind::Unify, rules::LET)?;
                        (a, b)
                    }
                };
                self.push(Binder::Var(x.clone()), a, n.span);
                self.push(Binder::Var(y.clone()), b, n.span);
                let (m, mm) = self.body(m, ty)?;
                self.pop()?;
                self.pop()?;
                Ok((at(K::LetPair(x.clone(), y.clone(), Box::new(n), Box::new(m))), mn.and(&mm)))
            }
            K::LetUnit(n, m) => {
                let (n, mn) = self.check_rule(n, &Type::Unit, rules::LET)?;
                let (m, mm) = self.body(m, ty)?;
                Ok((at(K::LetUnit(Box::new(n), Box::new(m))), mn.and(&mm)))
            }
            K::If(c, a, b) => {
                let (c, mc) = self.check(c, &Type::Bool)?;
                let ((a, ma), (b, mb)) = self.branches(span, ty, |me, ty| me.body(a, ty), |me, ty| me.body(b, ty))?;
                Ok((at(K::If(Box::new(c), Box::new(a), Box::new(b))), mc.and(&ma).and(&mb)))
            }
            K::NatCase(s, z, x, m) => {
                let (s, ms) = self.check(s, &Type::Nat)?;
                let ((z, mz), (m, mm)) = self.branches(
                    span,
                    ty,
                    |me, ty| me.body(z, ty),
                    |me, ty| {
                        me.push(Binder::Var(x.clone()), Type::Nat, span);
                        let r = me.body(m, ty)?;
                        me.pop()?;
                        Ok(r)
                    },
                )?;
                Ok((at(K::NatCase(Box::new(s), Box::new(z), x.clone(), Box::new(m))), ms.and(&mz).and(&mm)))
            }
            K::MaybeCase(s, z, x, m) => {
                let (s, st, ms) = self.infer(s)?;
                let (s, st, ms) = self.auto_force(s, st, ms);
                let a = match self.resolve(&st) {
                    Type::Maybe(a) => *a,
                    _ => {
                        let a = self.fresh_meta();
                        self.unify(&Type::maybe(a.clone()), &st, s.span, OriginKind::Unify, rules::BRANCH)?;
                        a
                    }
                };
                let ((z, mz), (m, mm)) = self.branches(
                    span,
                    ty,
                    |me, ty| me.body(z, ty),
                    |me, ty| {
                        me.push(Binder::Var(x.clone()), a, span);
                        let r = me.body(m, ty)?;
                        me.pop()?;
                        Ok(r)
                    },
                )?;
                Ok((at(K::MaybeCase(Box::new(s), Box::new(z), x.clone(), Box::new(m))), ms.and(&mz).and(&mm)))
            }
            _ => unreachable!("structural forms only"),
        }
    }

    /// Checks against `ty` if known, else infers and records the type.
    fn body(&mut self, m: &Term, ty: &mut Option<Type>) -> Res<(Term, MExpr)> {
        match ty {
            Some(want) => {
                let want = want.clone();
                self.check_rule(m, &want, rules::BRANCH)
            }
            None => {
                let (m, t, mu) = self.infer(m)?;
                *ty = Some(t);
                Ok((m, mu))
            }
        }
    }

    /// Solves constraints and discharges deferred linearity obligations.
    fn finish(&mut self) -> Res<()> {
        self.solve()?;
        for o in std::mem::take(&mut self.obligations) {
            let t = self.finalize(&o.ty);
            if !t.is_parameter() && o.uses != 1 {
                return Err(TypeError::new(TypeErrorKind::LinearityViolation(o.binder.to_string()), o.span, o.rule));
            }
        }
        Ok(())
    }

    fn load_context(&mut self, ctx: &TypingContext, holes: &mut HashMap<HoleId, HoleId>) {
        for (b, t) in ctx.bindings() {
            let t = self.renumber(t, holes);
            self.push(b.clone(), t, Span::default());
        }
    }

    /// Pops the external context, requiring every linear binding consumed.
    fn unload_context(&mut self) -> Res<UsageReport> {
        let mut consumed = Vec::new();
        while let Some(e) = self.ctx.pop() {
            if e.uses > 0 && status(&self.zonk(&e.ty)) != Status::Param {
                consumed.push(e.binder.clone());
            }
            self.settle(e.binder, e.ty, e.uses, e.span, rules::VAR)?;
        }
        consumed.reverse();
        Ok(UsageReport { consumed })
    }
}

/// Infers the type and judgment modality of `m` under `ctx`. Every linear
/// binding of `ctx` must be consumed.
pub fn infer(env: &Env, ctx: &TypingContext, m: &Term) -> Result<(Type, Modality, UsageReport), TypeError> {
    infer_elab(env, ctx, m).map(|(_, t, a, u)| (t, a, u))
}

/// As [`infer`], also returning the elaborated term.
pub fn infer_elab(env: &Env, ctx: &TypingContext, m: &Term) -> Result<(Term, Type, Modality, UsageReport), TypeError> {
    let mut c = Checker::new(env);
    let mut holes = HashMap::new();
    c.load_context(ctx, &mut holes);
    let (e, t, mu) = c.infer(m)?;
    let usage = c.unload_context()?;
    c.finish()?;
    Ok((e, c.finalize(&t), c.mexpr_value(&mu), usage))
}

/// Checks `ctx ⊢current m : a`. Holes in `a` and `ctx` are solved; a
/// current modality of 1 demands a judgment at modality 1.
pub fn check(env: &Env, ctx: &TypingContext, current: Modality, m: &Term, a: &Type) -> Result<UsageReport, TypeError> {
    check_elab(env, ctx, current, m, a).map(|(_, u)| u)
}

pub fn check_elab(
    env: &Env,
    ctx: &TypingContext,
    current: Modality,
    m: &Term,
    a: &Type,
) -> Result<(Term, UsageReport), TypeError> {
    let mut c = Checker::new(env);
    let mut holes = HashMap::new();
    c.load_context(ctx, &mut holes);
    let a = c.renumber(a, &mut holes);
    let (e, mu) = c.check(m, &a)?;
    c.leq(Mode::Known(current), &mu, m.span, OriginKind::Current)?;
    let usage = c.unload_context()?;
    c.finish()?;
    Ok((e, usage))
}

/// Checks one declaration against `env`, which must already hold its
/// dependencies.
pub fn check_declaration(env: &Env, d: &Declaration) -> Result<CheckedDecl, TypeError> {
    let with_decl = |mut e: TypeError| {
        e.decl = Some(d.name.clone());
        e
    };
    let mut c = Checker::new(env);
    let ty = c.renumber(&d.ty, &mut HashMap::new());
    if !ty.is_parameter() {
        return Err(with_decl(TypeError::new(TypeErrorKind::NotAParameter(d.name.clone(), d.ty.clone()), d.span, rules::DECL)));
    }
    let delta = c.fresh_hole();
    c.current = Some(Current { name: d.name.clone(), ty: ty.clone(), delta });
    let body = d.abstracted_body();
    let (elab, mu) = c.check(&body, &ty).map_err(with_decl)?;
    c.leq(Mode::Hole(delta), &mu, d.span, OriginKind::Plain).map_err(with_decl)?;
    c.finish().map_err(with_decl)?;
    Ok(CheckedDecl {
        name: d.name.clone(),
        ty: c.finalize(&ty),
        modality: c.mode_value(Mode::Hole(delta)),
        body: elab,
        span: d.span,
    })
}

/// Checks every declaration, dependencies first, collecting all errors.
/// Declarations that fail, or depend on one that fails, are left out of
/// the resulting environment.
pub fn check_program(p: &Program) -> ProgramCheck {
    check_program_in(&Env::new(), p)
}

/// As [`check_program`], on top of an already checked environment.
pub fn check_program_in(base: &Env, p: &Program) -> ProgramCheck {
    let mut out = ProgramCheck { env: base.clone(), errors: Vec::new() };
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, d) in p.declarations.iter().enumerate() {
        if index.insert(&d.name, i).is_some() {
            out.errors.push(TypeError::new(TypeErrorKind::DuplicateDeclaration(d.name.clone()), d.span, rules::DECL));
        }
    }
    let deps: Vec<Vec<usize>> = p
        .declarations
        .iter()
        .map(|d| {
            free_vars(&d.abstracted_body())
                .iter()
                .filter_map(|x| index.get(x.as_str()).copied())
                .filter(|j| p.declarations[*j].name != d.name)
                .collect()
        })
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum State {
        New,
        Active,
        Done,
    }
    let mut state = vec![State::New; p.declarations.len()];
    let mut order = Vec::new();
    let mut cyclic: HashSet<usize> = HashSet::new();
    fn visit(
        i: usize,
        deps: &[Vec<usize>],
        state: &mut [State],
        order: &mut Vec<usize>,
        stack: &mut Vec<usize>,
        cyclic: &mut HashSet<usize>,
    ) {
        match state[i] {
            State::Done => return,
            State::Active => {
                let from = stack.iter().position(|j| *j == i).expect("active node is on the stack");
                cyclic.extend(stack[from..].iter().copied());
                return;
            }
            State::New => {}
        }
        state[i] = State::Active;
        stack.push(i);
        for &j in &deps[i] {
            visit(j, deps, state, order, stack, cyclic);
        }
        stack.pop();
        state[i] = State::Done;
        order.push(i);
    }
    for i in 0..p.declarations.len() {
        visit(i, &deps, &mut state, &mut order, &mut Vec::new(), &mut cyclic);
    }

    let mut failed: HashSet<usize> = HashSet::new();
    for i in order {
        let d = &p.declarations[i];
        if index[d.name.as_str()] != i {
            continue;
        }
        let err = if cyclic.contains(&i) {
            let mut names: Vec<Name> = cyclic.iter().map(|j| p.declarations[*j].name.clone()).collect();
            names.sort();
            Some(TypeError::new(TypeErrorKind::MutualRecursion(names), d.span, rules::DECL))
        } else if let Some(j) = deps[i].iter().find(|j| failed.contains(j)) {
            Some(TypeError::new(
                TypeErrorKind::DependencyFailed(d.name.clone(), p.declarations[*j].name.clone()),
                d.span,
                rules::DECL,
            ))
        } else {
            match check_declaration(&out.env, d) {
                Ok(cd) => {
                    out.env.insert(cd);
                    None
                }
                Err(e) => Some(e),
            }
        };
        if let Some(mut e) = err {
            e.decl.get_or_insert_with(|| d.name.clone());
            failed.insert(i);
            out.env.failed.insert(d.name.clone());
            out.env.decls.remove(&d.name);
            out.env.order.retain(|n| n != &d.name);
            out.errors.push(e);
        }
    }
    out.errors.sort_by_key(|e| (e.span.start, e.decl.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, parse_term, parse_type};
    use crate::syntax::{Label, WireType};

    const GATES: &str = "
H : !(Qubit -> Qubit)
H q = apply(H_circ, q)

Meas : !(Qubit -> Bit)
Meas q = apply(Meas_circ, q)

Init0 : !(Unit -> Qubit)
Init0 u = apply(Init0_circ, u)

Discard : !(Bit -> Unit)
Discard b = apply(Discard_circ, b)

CNot : !(Qubit -> Qubit -> Qubit * Qubit)
CNot t c = apply(CNot_circ, (t, c))
";

    fn gates() -> Env {
        let r = check_program(&parse_program(GATES).unwrap());
        assert!(r.is_ok(), "{:?}", r.errors);
        r.env
    }

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn lambda_with_dynlift_has_zero_arrow() {
        let env = gates();
        let (t, m, u) = infer(&env, &TypingContext::new(), &parse_term("\\q -> dynlift (Meas q)").unwrap()).unwrap();
        assert_eq!(t, Type::arrow(Type::Qubit, Modality::Zero, Type::Bool));
        assert_eq!(m, Modality::One);
        assert!(u.consumed.is_empty());
    }

    #[test]
    fn dynlift_judgment_is_zero() {
        let env = gates();
        let ctx = TypingContext::new().with_label(Label(0), WireType::Bit).unwrap();
        let (t, m, u) = infer(&env, &ctx, &parse_term("dynlift ℓ0").unwrap()).unwrap();
        assert_eq!((t, m), (Type::Bool, Modality::Zero));
        assert_eq!(u.consumed, vec![Binder::Label(Label(0))]);
    }

    #[test]
    fn measuring_a_label_at_modality_one() {
        let env = gates();
        let ctx = TypingContext::new().with_label(Label(0), WireType::Qubit).unwrap();
        let u = check(&env, &ctx, Modality::One, &parse_term("Meas ℓ0").unwrap(), &Type::Bit).unwrap();
        assert_eq!(u.consumed, vec![Binder::Label(Label(0))]);
    }

    #[test]
    fn unused_linear_variable() {
        let ctx = TypingContext::new().with_var("q", Type::Qubit).unwrap();
        let e = check(&Env::new(), &ctx, Modality::One, &parse_term("()").unwrap(), &Type::Unit).unwrap_err();
        assert!(matches!(e.kind, TypeErrorKind::LinearityViolation(ref x) if x == "q"));
    }

    #[test]
    fn duplicated_linear_variable() {
        let env = gates();
        let e = infer(&env, &TypingContext::new(), &parse_term("\\q -> CNot q q").unwrap()).unwrap_err();
        assert!(matches!(e.kind, TypeErrorKind::LinearityViolation(_)));
    }

    #[test]
    fn parameters_may_be_duplicated_and_dropped() {
        let ctx = TypingContext::new().with_var("n", Type::Nat).unwrap();
        let (t, _, _) = infer(&Env::new(), &ctx, &parse_term("(n, n)").unwrap()).unwrap();
        assert_eq!(t, Type::tensor(Type::Nat, Type::Nat));
        assert!(check(&Env::new(), &ctx, Modality::One, &parse_term("()").unwrap(), &Type::Unit).is_ok());
    }

    #[test]
    fn lift_rejects_linear_capture() {
        let env = gates();
        let ctx = TypingContext::new().with_var("q", Type::Qubit).unwrap();
        let e = infer(&env, &ctx, &parse_term("lift (H q)").unwrap()).unwrap_err();
        assert!(matches!(e.kind, TypeErrorKind::LinearityViolation(_)), "{e}");
    }

    #[test]
    fn branches_must_agree_on_consumption() {
        let env = gates();
        let ctx = TypingContext::new().with_var("q", Type::Qubit).unwrap().with_var("b", Type::Bool).unwrap();
        let t = parse_term("if b then Discard (Meas q) else ()").unwrap();
        assert!(check(&env, &ctx, Modality::One, &t, &Type::Unit).is_err());
        let t = parse_term("if b then Discard (Meas q) else Discard (Meas (H q))").unwrap();
        assert!(check(&env, &ctx, Modality::One, &t, &Type::Unit).is_ok());
    }

    #[test]
    fn annotated_arrow_conflicts_with_dynlift() {
        let env = gates();
        let t = parse_term("\\q -> dynlift (Meas q)").unwrap();
        let e = check(&env, &TypingContext::new(), Modality::One, &t, &ty("Qubit -o_1 Bool")).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::ModalityAnnotationConflict);
        assert!(check(&env, &TypingContext::new(), Modality::One, &t, &ty("Qubit -o_0 Bool")).is_ok());
    }

    #[test]
    fn current_modality_one_rejects_dynlift() {
        let ctx = TypingContext::new().with_label(Label(0), WireType::Bit).unwrap();
        let t = parse_term("dynlift ℓ0").unwrap();
        assert!(check(&Env::new(), &ctx, Modality::One, &t, &Type::Bool).is_err());
        assert!(check(&Env::new(), &ctx, Modality::Zero, &t, &Type::Bool).is_ok());
    }

    #[test]
    fn box_of_a_circuit_function() {
        let env = gates();
        let (t, m, _) = infer(&env, &TypingContext::new(), &parse_term("box Qubit H").unwrap()).unwrap();
        assert_eq!(t, Type::circ(Type::Qubit, Type::Qubit));
        assert_eq!(m, Modality::One);
        let (t, _, _) = infer(&env, &TypingContext::new(), &parse_term("box Qubit (\\q -> Meas (H q))").unwrap()).unwrap();
        assert_eq!(t, Type::circ(Type::Qubit, Type::Bit));
    }

    #[test]
    fn box_of_a_lifting_function_is_a_modality_error() {
        let env = gates();
        let t = parse_term("box Qubit (\\q -> let b = dynlift (Meas q) in Init0 ())").unwrap();
        let e = infer(&env, &TypingContext::new(), &t).unwrap_err();
        assert_eq!(e.kind, TypeErrorKind::ModalityError);
        assert_eq!(e.rule, rules::BOX);
    }

    #[test]
    fn box_needs_a_simple_interface() {
        let env = gates();
        let e = infer(&env, &TypingContext::new(), &parse_term("box Bool (\\b -> Init0 ())").unwrap()).unwrap_err();
        assert!(matches!(e.kind, TypeErrorKind::NotSimple(_)));
    }

    #[test]
    fn declarations_get_annotated() {
        let src = format!(
            "{GATES}
bell : !(Unit -> Qubit * Qubit)
bell u =
  let a = Init0 ()
      b = Init0 ()
  in CNot b (H a)

flip : !(Qubit -> Bool)
flip q = dynlift (Meas (H q))

coin : Bool
coin = flip (Init0 ())

later : !(Qubit -> Qubit)
later q = if flip (Init0 ()) then H q else q
"
        );
        let r = check_program(&parse_program(&src).unwrap());
        assert!(r.is_ok(), "{:?}", r.errors);
        let get = |n: &str| r.env.get(n).unwrap();
        assert_eq!(get("bell").ty.to_string(), "!_1(Unit -o_1 Qubit * Qubit)");
        assert_eq!(get("flip").ty.to_string(), "!_1(Qubit -o_0 Bool)");
        assert_eq!(get("coin").modality, Modality::Zero);
        assert_eq!(get("later").ty.to_string(), "!_1(Qubit -o_0 Qubit)");
        assert_eq!(get("H").modality, Modality::One);
    }

    #[test]
    fn recursion_uses_the_declared_type() {
        let src = format!(
            "{GATES}
loop : !(Qubit -> Qubit)
loop q = if dynlift (Meas (H (Init0 ()))) then loop q else q
"
        );
        let r = check_program(&parse_program(&src).unwrap());
        assert!(r.is_ok(), "{:?}", r.errors);
        assert_eq!(r.env.get("loop").unwrap().ty.to_string(), "!_1(Qubit -o_0 Qubit)");
    }

    #[test]
    fn forward_references_and_failures_are_reported() {
        let src = "
a : Nat
a = b

b : Nat
b = S 2

bad : Nat
bad = True

uses_bad : Nat
uses_bad = S bad

loose : !(Qubit -> Unit)
loose q = ()
";
        let r = check_program(&parse_program(src).unwrap());
        assert!(r.env.contains("a") && r.env.contains("b"));
        let kinds: Vec<_> = r.errors.iter().map(|e| e.kind.clone()).collect();
        assert_eq!(kinds.len(), 3, "{kinds:?}");
        assert!(kinds.iter().any(|k| matches!(k, TypeErrorKind::TypeMismatch { .. })));
        assert!(kinds.iter().any(|k| matches!(k, TypeErrorKind::DependencyFailed(..))));
        assert!(kinds.iter().any(|k| matches!(k, TypeErrorKind::LinearityViolation(_))));
    }

    #[test]
    fn mutual_recursion_is_rejected() {
        let r = check_program(&parse_program("a : Nat\na = b\n\nb : Nat\nb = a\n").unwrap());
        assert_eq!(r.errors.len(), 2);
        assert!(matches!(r.errors[0].kind, TypeErrorKind::MutualRecursion(_)));
    }

    #[test]
    fn non_parameter_declaration() {
        let r = check_program(&parse_program(&format!("{GATES}\nq : Qubit\nq = Init0 ()\n")).unwrap());
        assert!(matches!(r.errors[0].kind, TypeErrorKind::NotAParameter(..)));
    }

    #[test]
    fn diagnostics_name_the_rule() {
        let env = gates();
        let e = infer(&env, &TypingContext::new(), &parse_term("box Qubit (\\q -> let b = dynlift (Meas q) in Init0 ())").unwrap())
            .unwrap_err();
        assert!(e.to_string().contains("box requires !_1(S -o_1 U)"), "{e}");
    }

    #[test]
    fn maybe_case_and_nat_case() {
        let env = gates();
        let t = parse_term("\\n -> \\m -> case m of { Nothing -> Init0 (); Just q -> case n of { Z -> q; S k -> H q } }").unwrap();
        let want = ty("Nat -> Maybe Qubit -> Qubit");
        assert!(check(&env, &TypingContext::new(), Modality::One, &t, &want).is_ok());
    }
}
