//! Big-step evaluation at circuit generation time and at circuit execution
//! time.
//!
//! One evaluator serves both: it is generic over a [`Runtime`] that decides
//! what `apply` and `dynlift` do to the world. Generation appends to a
//! circuit and rejects `dynlift`; execution runs circuits on a quantum state
//! and splits on `read`; sampling follows one outcome of each `read`.
//! Results are distributions over (world, value) pairs, with the mass lost
//! to truncated recursion kept as a deficit.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{gen, BoxedCircuit, Circuit, CircuitError, LabelSupply};
use crate::parser::pretty_term;
use crate::qsim::{Distribution, QuantumState, SimError};
use crate::syntax::{
    alpha_eq, set_global_depth, substitute, substitute2, Label, LabelContext, Modality, Name, SimpleTerm, Span,
    Term, TermKind, Type,
};
use crate::typeck::{self, Env, TypeError};

/// Unfoldings of one declaration nested inside each other at generation
/// time before evaluation gives up.
pub const GEN_MAX_DEPTH: u32 = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalLimits {
    /// Nested unfoldings of one declaration before the path is truncated.
    pub max_depth: u32,
    /// Largest acceptable deficit of a completed execution.
    pub mass_cutoff: f64,
    /// Paths whose absolute probability falls to or below this are dropped
    /// into the deficit.
    pub prune_threshold: f64,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits { max_depth: 64, mass_cutoff: 1e-6, prune_threshold: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EvalErrorKind {
    #[error("dynamic lifting reached at circuit generation time")]
    DynliftAtGenerationTime,
    #[error("evaluation is stuck at `{0}`")]
    StuckTerm(String),
    #[error("truncated mass {deficit} exceeds the cutoff {cutoff}")]
    LimitExceeded { deficit: f64, cutoff: f64 },
    #[error("unknown declaration `{0}`")]
    UnknownGlobal(Name),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub span: Span,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            EvalErrorKind::Type(e) => write!(f, "{e}"),
            kind => write!(f, "{}: error: {kind}", self.span),
        }
    }
}

impl std::error::Error for EvalError {}

impl From<EvalErrorKind> for EvalError {
    fn from(kind: EvalErrorKind) -> Self {
        EvalError { kind, span: Span::default() }
    }
}

type Res<T> = Result<T, EvalError>;

/// What a world does when a circuit is applied or a bit is read.
pub trait Runtime {
    type World: Clone;

    /// Runs `c` on the wires named by `arg`; returns the new world and the
    /// output term.
    fn operate(&mut self, w: &Self::World, c: &BoxedCircuit, arg: &SimpleTerm) -> Result<(Self::World, SimpleTerm), EvalErrorKind>;

    /// `read`: the outcomes of bit `l` with their probabilities.
    fn read(&mut self, w: &Self::World, l: Label) -> Result<Vec<(f64, Self::World, bool)>, EvalErrorKind>;

    /// Worlds equal enough to merge paths ending in them.
    fn same(&self, a: &Self::World, b: &Self::World) -> bool;

    /// Whether running past `max_depth` truncates (true) or fails.
    fn truncates(&self) -> bool {
        true
    }
}

/// Generation time: the world is the circuit built so far.
#[derive(Clone, Copy, Debug, Default)]
pub struct GenRuntime;

impl Runtime for GenRuntime {
    type World = Circuit;

    fn operate(&mut self, w: &Circuit, c: &BoxedCircuit, arg: &SimpleTerm) -> Result<(Circuit, SimpleTerm), EvalErrorKind> {
        let mut supply = LabelSupply::after(w.labels());
        let (out, map) = w.append(&c.circuit, &c.input, arg, &mut supply)?;
        Ok((out, c.output.rename(&|l| map.get(&l).copied().unwrap_or(l))))
    }

    fn read(&mut self, _: &Circuit, _: Label) -> Result<Vec<(f64, Circuit, bool)>, EvalErrorKind> {
        Err(EvalErrorKind::DynliftAtGenerationTime)
    }

    fn same(&self, a: &Circuit, b: &Circuit) -> bool {
        a == b
    }

    fn truncates(&self) -> bool {
        false
    }
}

fn exec_operate(w: &QuantumState, c: &BoxedCircuit, arg: &SimpleTerm) -> Result<(QuantumState, SimpleTerm), EvalErrorKind> {
    let mut supply = LabelSupply::after(w.addr().labels());
    let (q, map) = w.operate(&c.circuit, &c.input, arg, &mut supply)?;
    Ok((q, c.output.rename(&|l| map.get(&l).copied().unwrap_or(l))))
}

/// Execution time, exploring every measurement outcome.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExecRuntime;

impl Runtime for ExecRuntime {
    type World = QuantumState;

    fn operate(&mut self, w: &QuantumState, c: &BoxedCircuit, arg: &SimpleTerm) -> Result<(QuantumState, SimpleTerm), EvalErrorKind> {
        exec_operate(w, c, arg)
    }

    fn read(&mut self, w: &QuantumState, l: Label) -> Result<Vec<(f64, QuantumState, bool)>, EvalErrorKind> {
        Ok(w.read(l)?)
    }

    fn same(&self, a: &QuantumState, b: &QuantumState) -> bool {
        a.equivalent(b)
    }
}

/// Execution time, following one sampled outcome of each measurement.
pub struct SampleRuntime<R: Rng> {
    pub rng: R,
}

impl<R: Rng> Runtime for SampleRuntime<R> {
    type World = QuantumState;

    fn operate(&mut self, w: &QuantumState, c: &BoxedCircuit, arg: &SimpleTerm) -> Result<(QuantumState, SimpleTerm), EvalErrorKind> {
        exec_operate(w, c, arg)
    }

    fn read(&mut self, w: &QuantumState, l: Label) -> Result<Vec<(f64, QuantumState, bool)>, EvalErrorKind> {
        let mut outcomes = w.read(l)?;
        let total: f64 = outcomes.iter().map(|o| o.0).sum();
        let mut u = self.rng.gen::<f64>() * total;
        let last = outcomes.len() - 1;
        let pick = outcomes
            .iter()
            .position(|o| {
                u -= o.0;
                u < 0.0
            })
            .unwrap_or(last);
        let (_, q, b) = outcomes.swap_remove(pick);
        Ok(vec![(1.0, q, b)])
    }

    fn same(&self, a: &QuantumState, b: &QuantumState) -> bool {
        a.equivalent(b)
    }
}

pub type Outcomes<W> = Distribution<(W, Term)>;

/// The evaluator proper.
pub struct Machine<'a, R: Runtime> {
    pub runtime: R,
    env: &'a Env,
    limits: EvalLimits,
}

fn stuck(t: &Term) -> EvalError {
    EvalError { kind: EvalErrorKind::StuckTerm(pretty_term(t)), span: t.span }
}

impl<'a, R: Runtime> Machine<'a, R> {
    pub fn new(runtime: R, env: &'a Env, limits: EvalLimits) -> Self {
        Machine { runtime, env, limits }
    }

    /// Sequences `d` with `f`, weighting each continuation by its path's
    /// probability; `mass` is the absolute probability of reaching `d`.
    fn then(
        &mut self,
        d: Outcomes<R::World>,
        mass: f64,
        mut f: impl FnMut(&mut Self, R::World, Term, f64) -> Res<Outcomes<R::World>>,
    ) -> Res<Outcomes<R::World>> {
        let mut out = Distribution::truncated(d.deficit);
        for (p, (w, v)) in d.entries {
            out.absorb(f(self, w, v, mass * p)?.scale(p));
        }
        Ok(self.tidy(out, mass))
    }

    fn tidy(&self, d: Outcomes<R::World>, mass: f64) -> Outcomes<R::World> {
        let d = if d.len() > 1 {
            let rt = &self.runtime;
            d.merge_by(|(w1, v1), (w2, v2)| alpha_eq(v1, v2) && rt.same(w1, w2))
        } else {
            d
        };
        if self.limits.prune_threshold > 0.0 && mass > 0.0 {
            d.prune(self.limits.prune_threshold / mass)
        } else {
            d
        }
    }

    fn value(w: R::World, v: Term) -> Res<Outcomes<R::World>> {
        Ok(Distribution::point((w, v)))
    }

    pub fn eval(&mut self, w: R::World, m: &Term, mass: f64) -> Res<Outcomes<R::World>> {
        use TermKind as K;
        let span = m.span;
        let at = move |k: TermKind| Term::at(k, span);
        match &m.kind {
            K::Label(_) | K::Bool(_) | K::Unit | K::Nat(_) | K::Nothing | K::Lambda(..) | K::Lift(_) | K::Circ(_) => {
                Self::value(w, m.clone())
            }
            K::Var(_) => Err(stuck(m)),
            K::Global(x, depth) => {
                let d = self.env.get(x).ok_or_else(|| EvalError { kind: EvalErrorKind::UnknownGlobal(x.clone()), span })?;
                let limit = if self.runtime.truncates() { self.limits.max_depth } else { GEN_MAX_DEPTH };
                if *depth >= limit {
                    if self.runtime.truncates() {
                        return Ok(Distribution::truncated(1.0));
                    }
                    return Err(EvalError { kind: EvalErrorKind::LimitExceeded { deficit: 1.0, cutoff: 0.0 }, span });
                }
                let body = set_global_depth(&d.body, x, depth + 1);
                self.eval(w, &body, mass)
            }
            K::App(f, a) => {
                let df = self.eval(w, f, mass)?;
                self.then(df, mass, |me, w, vf, mass| {
                    let da = me.eval(w, a, mass)?;
                    me.then(da, mass, |me, w, va, mass| match &vf.kind {
                        K::Lambda(x, body) => me.eval(w, &substitute(body, x, &va), mass),
                        _ => Err(stuck(&vf)),
                    })
                })
            }
            K::Apply(c, a) => {
                let dc = self.eval(w, c, mass)?;
                self.then(dc, mass, |me, w, vc, mass| {
                    let da = me.eval(w, a, mass)?;
                    me.then(da, mass, |me, w, va, _| {
                        let (K::Circ(bc), Some(arg)) = (&vc.kind, SimpleTerm::from_term(&va)) else {
                            return Err(stuck(&at(K::Apply(Box::new(vc.clone()), Box::new(va)))));
                        };
                        let (w, out) = me.runtime.operate(&w, bc, &arg).map_err(|kind| EvalError { kind, span })?;
                        Self::value(w, out.to_term())
                    })
                })
            }
            K::Force(n) => {
                let d = self.eval(w, n, mass)?;
                self.then(d, mass, |me, w, v, mass| match &v.kind {
                    K::Lift(body) => me.eval(w, body, mass),
                    _ => Err(stuck(&v)),
                })
            }
            K::Box(s, n) => {
                let d = self.eval(w, n, mass)?;
                self.then(d, mass, |me, w, v, _| {
                    let K::Lift(f) = &v.kind else { return Err(stuck(&v)) };
                    let boxed = box_circuit(me.env, s, f, span)?;
                    Self::value(w, at(K::Circ(Arc::new(boxed))))
                })
            }
            K::Pair(a, b) => {
                let da = self.eval(w, a, mass)?;
                self.then(da, mass, |me, w, va, mass| {
                    let db = me.eval(w, b, mass)?;
                    me.then(db, mass, |_, w, vb, _| Self::value(w, at(K::Pair(Box::new(va.clone()), Box::new(vb)))))
                })
            }
            K::LetPair(x, y, n, body) => {
                let d = self.eval(w, n, mass)?;
                self.then(d, mass, |me, w, v, mass| match &v.kind {
                    K::Pair(v1, v2) => me.eval(w, &substitute2(body, x, v1, y, v2), mass),
                    _ => Err(stuck(&v)),
                })
            }
            K::Let(x, n, body) => {
                let d = self.eval(w, n, mass)?;
                self.then(d, mass, |me, w, v, mass| me.eval(w, &substitute(body, x, &v), mass))
            }
            K::LetUnit(n, body) => {
                let d = self.eval(w, n, mass)?;
                self.then(d, mass, |me, w, v, mass| match &v.kind {
                    K::Unit => me.eval(w, body, mass),
                    _ => Err(stuck(&v)),
                })
            }
            K::Dynlift(n) => {
                let d = self.eval(w, n, mass)?;
                self.then(d, mass, |me, w, v, _| {
                    let K::Label(l) = v.kind else { return Err(stuck(&v)) };
                    let outcomes = me.runtime.read(&w, l).map_err(|kind| EvalError { kind, span })?;
                    Ok(Distribution::from_entries(
                        outcomes.into_iter().map(|(p, w, b)| (p, (w, at(K::Bool(b))))).collect(),
                    ))
                })
            }
            K::If(c, a, b) => {
                let d = self.eval(w, c, mass)?;
                self.then(d, mass, |me, w, v, mass| match v.kind {
                    K::Bool(true) => me.eval(w, a, mass),
                    K::Bool(false) => me.eval(w, b, mass),
                    _ => Err(stuck(&v)),
                })
            }
            K::Succ(n) => {
                let d = self.eval(w, n, mass)?;
                self.then(d, mass, |_, w, v, _| match v.kind {
                    K::Nat(k) => Self::value(w, at(K::Nat(k + 1))),
                    _ => Err(stuck(&v)),
                })
            }
            K::NatCase(s, z, x, body) => {
                let d = self.eval(w, s, mass)?;
                self.then(d, mass, |me, w, v, mass| match v.kind {
                    K::Nat(0) => me.eval(w, z, mass),
                    K::Nat(k) => me.eval(w, &substitute(body, x, &Term::at(K::Nat(k - 1), v.span)), mass),
                    _ => Err(stuck(&v)),
                })
            }
            K::Just(n) => {
                let d = self.eval(w, n, mass)?;
                self.then(d, mass, |_, w, v, _| Self::value(w, at(K::Just(Box::new(v)))))
            }
            K::MaybeCase(s, z, x, body) => {
                let d = self.eval(w, s, mass)?;
                self.then(d, mass, |me, w, v, mass| match &v.kind {
                    K::Nothing => me.eval(w, z, mass),
                    K::Just(inner) => me.eval(w, &substitute(body, x, inner), mass),
                    _ => Err(stuck(&v)),
                })
            }
        }
    }
}

/// `box S (lift f)`: runs `f` on a fresh input of type `S` at generation
/// time, with labels local to the box.
fn box_circuit(env: &Env, s: &Type, f: &Term, span: Span) -> Res<BoxedCircuit> {
    let mut supply = LabelSupply::new();
    let (a, sigma) = gen(s, &mut supply);
    let app = Term::at(TermKind::App(Box::new(f.clone()), Box::new(a.to_term())), span);
    let (d, b) = eval_gen(&Circuit::identity(&sigma), &app, env)?;
    let out = SimpleTerm::from_term(&b).ok_or_else(|| stuck(&b))?;
    BoxedCircuit::new(a, d, out).map_err(|e| EvalError { kind: e.into(), span })
}

/// The circuit named by declaration `name`: either a `Circ(S, U)` value,
/// or a function `!_1(S -o_1 U)` boxed at its input type. The boxing is
/// type checked, so a lifting function is rejected by the box rule.
pub fn box_declaration(env: &Env, name: &str) -> Result<BoxedCircuit, EvalError> {
    let d = env.get(name).ok_or_else(|| EvalError::from(EvalErrorKind::UnknownGlobal(name.to_string())))?;
    let global = Term::at(TermKind::Global(name.to_string(), 0), d.span);
    let term = match &d.ty {
        Type::Circ(..) => global,
        Type::Bang(_, f) => match &**f {
            Type::Arrow(s, _, _) => Term::at(TermKind::Box((**s).clone(), Box::new(global)), d.span),
            _ => global,
        },
        _ => global,
    };
    let (term, _, _, _) = typeck::infer_elab(env, &crate::syntax::TypingContext::new(), &term)
        .map_err(|e| EvalError { span: e.span, kind: e.into() })?;
    let (_, v) = eval_gen(&Circuit::identity(&LabelContext::new()), &term, env)?;
    match v.kind {
        TermKind::Circ(bc) => Ok((*bc).clone()),
        _ => Err(EvalError {
            kind: EvalErrorKind::Invariant(format!("`{name}` : {} is not a circuit", d.ty)),
            span: d.span,
        }),
    }
}

/// Generation-time evaluation of `m` from circuit `c`. Deterministic.
pub fn eval_gen(c: &Circuit, m: &Term, env: &Env) -> Result<(Circuit, Term), EvalError> {
    let mut machine = Machine::new(GenRuntime, env, EvalLimits::default());
    let mut d = machine.eval(c.clone(), m, 1.0)?;
    if d.entries.len() != 1 || d.deficit != 0.0 {
        return Err(EvalErrorKind::Invariant("generation produced more than one outcome".into()).into());
    }
    let (_, (c, v)) = d.entries.pop().expect("one entry");
    Ok((c, v))
}

/// Execution-time evaluation: the distribution of final states and values.
/// Fails if the truncated mass exceeds `limits.mass_cutoff`.
pub fn eval_exec(q: &QuantumState, m: &Term, env: &Env, limits: EvalLimits) -> Result<Outcomes<QuantumState>, EvalError> {
    let mut machine = Machine::new(ExecRuntime, env, limits);
    let d = machine.eval(q.clone(), m, 1.0)?;
    if d.deficit > limits.mass_cutoff {
        return Err(EvalError {
            kind: EvalErrorKind::LimitExceeded { deficit: d.deficit, cutoff: limits.mass_cutoff },
            span: m.span,
        });
    }
    Ok(d.map(|(q, v)| (q.canonical(), v)))
}

/// One execution trajectory; `None` when it ran past `limits.max_depth`.
pub fn eval_sample<R: Rng>(
    q: &QuantumState,
    m: &Term,
    env: &Env,
    limits: EvalLimits,
    rng: R,
) -> Result<Option<(QuantumState, Term)>, EvalError> {
    let mut machine = Machine::new(SampleRuntime { rng }, env, limits);
    let mut d = machine.eval(q.clone(), m, 1.0)?;
    Ok(d.entries.pop().map(|(_, (q, v))| (q, v)))
}

// ---- re-checking results ----

/// Checks `labels ⊢1 v : ty`, consuming every label.
pub fn recheck_value(env: &Env, labels: &LabelContext, v: &Term, ty: &Type) -> Result<(), TypeError> {
    typeck::check(env, &labels.to_typing_context(), Modality::One, v, ty).map(|_| ())
}

/// A generation result `(c, v)` is well typed at `ty` if `v` checks against
/// some of `c`'s outputs at modality 1; the remaining outputs are the part
/// of the circuit `v` does not mention.
pub fn recheck_gen(env: &Env, c: &Circuit, v: &Term, ty: &Type) -> Result<(), EvalErrorKind> {
    c.validate()?;
    let mut used = LabelContext::new();
    for l in v.free_labels() {
        let w = c.outputs.get(l).ok_or_else(|| EvalErrorKind::Invariant(format!("{l} is not a circuit output")))?;
        used.push(l, w);
    }
    Ok(recheck_value(env, &used, v, ty)?)
}

/// An execution outcome `(q, v)` is well typed at `ty` if `v` checks at
/// modality 1 using exactly the wires of `q`.
pub fn recheck_exec(env: &Env, q: &QuantumState, v: &Term, ty: &Type) -> Result<(), EvalErrorKind> {
    Ok(recheck_value(env, q.addr(), v, ty)?)
}

/// A closed argument of type `s`: fresh wires for its simple parts and a
/// fixed value for each parameter part.
fn sample_argument(s: &Type, supply: &mut LabelSupply, sigma: &mut LabelContext) -> Option<Term> {
    Some(match s {
        Type::Qubit | Type::Bit => {
            let (a, ctx) = gen(s, supply);
            for (l, w) in ctx.wires() {
                sigma.push(*l, *w);
            }
            a.to_term()
        }
        Type::Unit => Term::new(TermKind::Unit),
        Type::Bool => Term::new(TermKind::Bool(true)),
        Type::Nat => Term::new(TermKind::Nat(1)),
        Type::Maybe(_) => Term::new(TermKind::Nothing),
        Type::Tensor(a, b) => Term::pair(sample_argument(a, supply, sigma)?, sample_argument(b, supply, sigma)?),
        _ => return None,
    })
}

/// What [`audit`] established about one declaration.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Audit {
    pub gen_results: usize,
    pub exec_outcomes: usize,
    pub deterministic: bool,
}

/// Runs declaration `name` and checks its results against the type system:
/// generation results and execution outcomes re-check, a modality-1 run
/// has exactly one outcome, and outcome mass plus deficit is 1. Functions
/// `!(S -o U)` are run on a fresh input `gen(S)` from `input` (or
/// `|0…0⟩`).
pub fn audit(env: &Env, name: &str, limits: EvalLimits, input: Option<&QuantumState>) -> Result<Audit, String> {
    let d = env.get(name).ok_or_else(|| format!("no declaration `{name}`"))?;
    let mut out = Audit::default();
    let global = Term::at(TermKind::Global(name.to_string(), 0), d.span);
    let (term, ty, modality, sigma) = match &d.ty {
        Type::Bang(_, f) if matches!(**f, Type::Arrow(..)) => {
            let Type::Arrow(s, _, _) = &**f else { unreachable!() };
            let mut sigma = LabelContext::new();
            let a = sample_argument(s, &mut LabelSupply::new(), &mut sigma).ok_or_else(|| format!("no sample argument of type {s}"))?;
            let app = Term::at(TermKind::App(Box::new(global), Box::new(a)), d.span);
            let (t, ty, m, _) = typeck::infer_elab(env, &sigma.to_typing_context(), &app).map_err(|e| e.to_string())?;
            (t, ty, m, sigma)
        }
        _ => (global, d.ty.clone(), d.modality, LabelContext::new()),
    };
    out.deterministic = modality == Modality::One;
    if out.deterministic {
        let (c, v) = eval_gen(&Circuit::identity(&sigma), &term, env).map_err(|e| format!("gen: {e}"))?;
        recheck_gen(env, &c, &v, &ty).map_err(|e| format!("gen result `{}` : {ty}: {e}", pretty_term(&v)))?;
        out.gen_results = 1;
    }
    let q0 = match input {
        Some(q) => q.clone(),
        None => QuantumState::init(&sigma),
    };
    let dist = eval_exec(&q0, &term, env, limits).map_err(|e| format!("exec: {e}"))?;
    let total = dist.total();
    if (total - 1.0).abs() > 1e-9 {
        return Err(format!("outcome mass plus deficit is {total}"));
    }
    if out.deterministic && (dist.len() != 1 || dist.deficit != 0.0) {
        return Err(format!("modality-1 run has {} outcomes", dist.len()));
    }
    for (_, (q, v)) in &dist.entries {
        recheck_exec(env, q, v, &ty).map_err(|e| format!("exec outcome `{}` : {ty}: {e}", pretty_term(v)))?;
    }
    out.exec_outcomes = dist.len();
    Ok(out)
}

// ---- top-level runs ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Dist,
    Sample,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub mode: Mode,
    pub seed: u64,
    pub shots: u64,
    pub limits: EvalLimits,
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { mode: Mode::Dist, seed: 0, shots: 1000, limits: EvalLimits::default(), jobs: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportOutcome {
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    /// Final quantum state, when wires remain.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub mode: Mode,
    pub entry: String,
    #[serde(rename = "type")]
    pub ty: String,
    /// Entry checked at modality 1, so it has a single outcome.
    pub deterministic: bool,
    pub outcomes: Vec<ReportOutcome>,
    pub deficit: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Probability (dist) or count (sample) of the outcome printed as `value`.
    pub fn weight_of(&self, value: &str) -> f64 {
        self.outcomes
            .iter()
            .filter(|o| o.value == value)
            .map(|o| o.prob.unwrap_or(0.0) + o.count.unwrap_or(0) as f64)
            .sum()
    }
}

/// The generator for shot `i` of a run seeded with `seed`.
pub fn shot_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// Evaluates declaration `entry` from the empty state.
pub fn run_main(env: &Env, entry: &str, opts: &RunOptions) -> Result<Report, EvalError> {
    let d = env.get(entry).ok_or_else(|| EvalError::from(EvalErrorKind::UnknownGlobal(entry.to_string())))?;
    let term = Term::at(TermKind::Global(entry.to_string(), 0), d.span);
    let q0 = QuantumState::init(&LabelContext::new());
    let deterministic = d.modality == Modality::One;
    let mut report = Report {
        mode: opts.mode,
        entry: entry.to_string(),
        ty: d.ty.to_string(),
        deterministic,
        outcomes: Vec::new(),
        deficit: 0.0,
        seed: None,
        shots: None,
    };
    match opts.mode {
        Mode::Dist => {
            let dist = eval_exec(&q0, &term, env, opts.limits)?;
            if deterministic && (dist.len() != 1 || dist.deficit != 0.0) {
                return Err(EvalErrorKind::Invariant(format!("modality-1 entry `{entry}` has {} outcomes", dist.len())).into());
            }
            report.deficit = dist.deficit;
            for (p, (q, v)) in dist.entries {
                let state = if q.addr().is_empty() { None } else { Some(q.dump()) };
                report.outcomes.push(ReportOutcome { value: pretty_term(&v), prob: Some(p), count: None, state });
            }
        }
        Mode::Sample => {
            let shots = opts.shots.max(1);
            let results = run_shots(env, &term, &q0, opts, shots)?;
            let mut counts: BTreeMap<String, u64> = BTreeMap::new();
            let mut truncated = 0u64;
            for r in results {
                match r {
                    Some(v) => *counts.entry(v).or_default() += 1,
                    None => truncated += 1,
                }
            }
            report.outcomes = counts
                .into_iter()
                .map(|(value, n)| ReportOutcome { value, prob: None, count: Some(n), state: None })
                .collect();
            report.deficit = truncated as f64 / shots as f64;
            report.seed = Some(opts.seed);
            report.shots = Some(shots);
        }
    }
    Ok(report)
}

/// Stack size for evaluation threads; evaluation recurses deeply.
pub const EVAL_STACK: usize = 256 << 20;

fn run_shots(env: &Env, term: &Term, q0: &QuantumState, opts: &RunOptions, shots: u64) -> Result<Vec<Option<String>>, EvalError> {
    let one = |i: u64| -> Result<Option<String>, EvalError> {
        Ok(eval_sample(q0, term, env, opts.limits, shot_rng(opts.seed, i))?.map(|(_, v)| pretty_term(&v)))
    };
    let jobs = opts.jobs.max(1).min(shots as usize);
    if jobs <= 1 {
        return (0..shots).map(one).collect();
    }
    let chunk = shots.div_ceil(jobs as u64);
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs as u64)
            .map(|j| {
                let range = (j * chunk)..((j + 1) * chunk).min(shots);
                std::thread::Builder::new()
                    .stack_size(EVAL_STACK)
                    .spawn_scoped(s, move || range.map(one).collect::<Result<Vec<_>, _>>())
                    .expect("spawn evaluation thread")
            })
            .collect();
        let mut out = Vec::with_capacity(shots as usize);
        for h in handles {
            out.extend(h.join().expect("evaluation thread")?);
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, parse_term};
    use crate::prelude::{check_with_prelude, example, load_prelude};
    use crate::syntax::WireType;

    fn env_with(src: &str) -> Env {
        let r = check_with_prelude(&load_prelude(), &parse_program(src).unwrap());
        assert!(r.is_ok(), "{:?}", r.errors);
        r.env
    }

    fn elab(env: &Env, ctx: &LabelContext, src: &str) -> (Term, Type) {
        let (t, ty, _, _) = typeck::infer_elab(env, &ctx.to_typing_context(), &parse_term(src).unwrap()).unwrap();
        (t, ty)
    }

    #[test]
    fn gen_single_gate() {
        let env = load_prelude();
        let sigma = LabelContext::from_wires(vec![(Label(0), WireType::Qubit)]);
        let (t, _) = elab(&env, &sigma, "H ℓ0");
        let (c, v) = eval_gen(&Circuit::identity(&sigma), &t, &env).unwrap();
        assert_eq!(c.to_string(), "[H(ℓ0)]");
        assert!(matches!(v.kind, TermKind::Label(Label(0))));
    }

    #[test]
    fn gen_let_pair_swaps() {
        let env = load_prelude();
        let sigma = LabelContext::from_wires(vec![(Label(0), WireType::Qubit), (Label(1), WireType::Qubit)]);
        let (t, _) = elab(&env, &sigma, "let (x, y) = (ℓ0, ℓ1) in (y, x)");
        let (c, v) = eval_gen(&Circuit::identity(&sigma), &t, &env).unwrap();
        assert!(c.gates.is_empty());
        assert_eq!(pretty_term(&v), "(ℓ1, ℓ0)");
    }

    #[test]
    fn gen_rejects_dynlift() {
        let env = load_prelude();
        let t = Term::dynlift(Term::label(Label(0)));
        let sigma = LabelContext::from_wires(vec![(Label(0), WireType::Bit)]);
        let e = eval_gen(&Circuit::identity(&sigma), &t, &env).unwrap_err();
        assert_eq!(e.kind, EvalErrorKind::DynliftAtGenerationTime);
    }

    #[test]
    fn boxed_teleportation_has_twelve_gates() {
        let p = example("teleport_circ.pqd").unwrap();
        let r = check_with_prelude(&load_prelude(), &p);
        let env = r.env;
        let (t, _) = elab(&env, &LabelContext::new(), "boxTele");
        let (_, v) = eval_gen(&Circuit::identity(&LabelContext::new()), &t, &env).unwrap();
        let TermKind::Circ(bc) = &v.kind else { panic!("{}", pretty_term(&v)) };
        let names: Vec<&str> = bc.circuit.gates.iter().map(|g| g.gate.name()).collect();
        assert_eq!(
            names,
            ["Init0", "Init0", "H", "CNot", "CNot", "H", "Meas", "Meas", "C_X", "C_Z", "Discard", "Discard"]
        );
    }

    #[test]
    fn fair_coin_distribution() {
        let env = load_prelude();
        let (t, _) = elab(&env, &LabelContext::new(), "dynlift (Meas (H (Init0 ())))");
        let d = eval_exec(&QuantumState::init(&LabelContext::new()), &t, &env, EvalLimits::default()).unwrap();
        assert_eq!(d.len(), 2);
        for (p, (q, _)) in &d.entries {
            assert!((p - 0.5).abs() < 1e-12);
            assert!(q.addr().is_empty());
        }
        assert_eq!(pretty_term(&d.entries[0].1 .1), "False");
    }

    #[test]
    fn teleport_test_is_false() {
        let mut src = String::from(include_str!("../examples/teleport_dyn.pqd"));
        src = src.replace("boxAttempt : Circ(Qubit, Qubit)\nboxAttempt = box Qubit tele2\n", "");
        let env = env_with(&src);
        let r = run_main(&env, "test", &RunOptions::default()).unwrap();
        assert_eq!(r.outcomes.len(), 1);
        assert_eq!(r.outcomes[0].value, "False");
        assert!((r.outcomes[0].prob.unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(r.deficit, 0.0);
    }

    #[test]
    fn rus_one_round() {
        let env = env_with(include_str!("../examples/rus.pqd"));
        let limits = EvalLimits { max_depth: 1, mass_cutoff: 0.5, prune_threshold: 0.0 };
        let r = run_main(&env, "rusTest", &RunOptions { limits, ..RunOptions::default() }).unwrap();
        assert!((r.weight_of("False") - 0.625).abs() < 1e-9, "{r:?}");
        assert!((r.deficit - 0.375).abs() < 1e-9);
    }

    #[test]
    fn deficit_over_cutoff_fails() {
        let env = env_with(include_str!("../examples/rus.pqd"));
        let limits = EvalLimits { max_depth: 2, mass_cutoff: 1e-6, prune_threshold: 0.0 };
        let e = run_main(&env, "rusTest", &RunOptions { limits, ..RunOptions::default() }).unwrap_err();
        assert!(matches!(e.kind, EvalErrorKind::LimitExceeded { .. }));
    }

    #[test]
    fn sampling_is_reproducible() {
        let env = env_with(include_str!("../examples/coin.pqd"));
        let opts = RunOptions { mode: Mode::Sample, seed: 42, shots: 200, ..RunOptions::default() };
        let a = run_main(&env, "coin", &opts).unwrap();
        let b = run_main(&env, "coin", &RunOptions { jobs: 4, ..opts.clone() }).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.weight_of("False") + a.weight_of("True"), 200.0);
    }

    #[test]
    fn modality_one_entry_is_deterministic() {
        let env = env_with("n : Nat\nn = S (S 0)\n");
        let r = run_main(&env, "n", &RunOptions::default()).unwrap();
        assert!(r.deterministic);
        assert_eq!(r.outcomes[0].value, "3".replace('3', "2"));
    }

    #[test]
    fn report_json_shape() {
        let env = env_with("t : Bool\nt = True\n");
        let r = run_main(&env, "t", &RunOptions::default()).unwrap();
        assert_eq!(
            r.to_json(),
            r#"{"mode":"dist","entry":"t","type":"Bool","deterministic":true,"outcomes":[{"value":"True","prob":1.0}],"deficit":0.0}"#
        );
    }

    #[test]
    fn boxing_declarations() {
        let src = include_str!("../examples/teleport_dyn.pqd");
        let r = check_with_prelude(&load_prelude(), &parse_program(src).unwrap().without("boxAttempt"));
        let env = r.env;
        let e = box_declaration(&env, "tele2").unwrap_err();
        assert!(matches!(e.kind, EvalErrorKind::Type(ref t) if t.kind == typeck::TypeErrorKind::ModalityError));
        let id = env_with("idq : !(Qubit -> Qubit)\nidq q = q\n");
        assert!(box_declaration(&id, "idq").unwrap().circuit.gates.is_empty());
    }
}
