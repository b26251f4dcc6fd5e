use std::fmt;

use thiserror::Error;

use super::term::{Label, Name};
use super::types::{Type, WireType};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Binder {
    Var(Name),
    Label(Label),
}

impl fmt::Display for Binder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Binder::Var(x) => f.write_str(x),
            Binder::Label(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("{0} is bound twice in the context")]
    DuplicateBinding(Binder),
    #[error("linear binding {0} occurs on both sides of a context merge")]
    LinearOverlap(Binder),
    #[error("parameter {0} has different types on the two sides of a context merge")]
    ParameterConflict(Binder),
}

/// Ordered typing context. Whether a binding is linear is a function of its
/// type, so it is not stored separately.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TypingContext {
    bindings: Vec<(Binder, Type)>,
}

impl TypingContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bindings(bindings: Vec<(Binder, Type)>) -> Result<Self, ContextError> {
        let mut ctx = TypingContext::new();
        for (b, t) in bindings {
            ctx.push(b, t)?;
        }
        Ok(ctx)
    }

    pub fn push(&mut self, binder: Binder, ty: Type) -> Result<(), ContextError> {
        if self.lookup(&binder).is_some() {
            return Err(ContextError::DuplicateBinding(binder));
        }
        self.bindings.push((binder, ty));
        Ok(())
    }

    pub fn with_var(mut self, x: &str, ty: Type) -> Result<Self, ContextError> {
        self.push(Binder::Var(x.to_string()), ty)?;
        Ok(self)
    }

    pub fn with_label(mut self, l: Label, w: WireType) -> Result<Self, ContextError> {
        self.push(Binder::Label(l), w.as_type())?;
        Ok(self)
    }

    pub fn lookup(&self, binder: &Binder) -> Option<&Type> {
        self.bindings.iter().find(|(b, _)| b == binder).map(|(_, t)| t)
    }

    pub fn bindings(&self) -> &[(Binder, Type)] {
        &self.bindings
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn parameters(&self) -> impl Iterator<Item = &(Binder, Type)> {
        self.bindings.iter().filter(|(_, t)| t.is_parameter())
    }

    pub fn linear(&self) -> impl Iterator<Item = &(Binder, Type)> {
        self.bindings.iter().filter(|(_, t)| !t.is_parameter())
    }

    /// `Γ1 + Γ2`: shared parameter portion, concatenated linear portions.
    pub fn merge(&self, other: &TypingContext) -> Result<TypingContext, ContextError> {
        let mut out = TypingContext::new();
        for (b, t) in self.parameters() {
            out.bindings.push((b.clone(), t.clone()));
        }
        for (b, t) in other.parameters() {
            match out.lookup(b) {
                Some(existing) if existing == t => {}
                Some(_) => return Err(ContextError::ParameterConflict(b.clone())),
                None => out.bindings.push((b.clone(), t.clone())),
            }
        }
        for (b, t) in self.linear() {
            out.bindings.push((b.clone(), t.clone()));
        }
        for (b, t) in other.linear() {
            if let Some(existing) = out.lookup(b) {
                return Err(if existing.is_parameter() {
                    ContextError::ParameterConflict(b.clone())
                } else {
                    ContextError::LinearOverlap(b.clone())
                });
            }
            out.bindings.push((b.clone(), t.clone()));
        }
        Ok(out)
    }
}

pub fn ctx_merge(g1: &TypingContext, g2: &TypingContext) -> Result<TypingContext, ContextError> {
    g1.merge(g2)
}

impl fmt::Display for TypingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (b, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b} : {t}")?;
        }
        Ok(())
    }
}

/// `Σ ::= · | ℓ : Qubit, Σ | ℓ : Bit, Σ`
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LabelContext {
    wires: Vec<(Label, WireType)>,
}

impl LabelContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics on a repeated label; use [`LabelContext::try_from_wires`] for
    /// untrusted input.
    pub fn from_wires(wires: Vec<(Label, WireType)>) -> Self {
        Self::try_from_wires(wires).expect("label context with a repeated label")
    }

    pub fn try_from_wires(wires: Vec<(Label, WireType)>) -> Result<Self, Label> {
        let mut ctx = LabelContext::new();
        for (l, w) in wires {
            if ctx.get(l).is_some() {
                return Err(l);
            }
            ctx.wires.push((l, w));
        }
        Ok(ctx)
    }

    pub fn get(&self, l: Label) -> Option<WireType> {
        self.wires.iter().find(|(m, _)| *m == l).map(|(_, w)| *w)
    }

    pub fn contains(&self, l: Label) -> bool {
        self.get(l).is_some()
    }

    pub fn push(&mut self, l: Label, w: WireType) {
        debug_assert!(!self.contains(l));
        self.wires.push((l, w));
    }

    pub fn remove(&mut self, l: Label) -> Option<WireType> {
        let i = self.wires.iter().position(|(m, _)| *m == l)?;
        Some(self.wires.remove(i).1)
    }

    pub fn set_type(&mut self, l: Label, w: WireType) {
        if let Some(e) = self.wires.iter_mut().find(|(m, _)| *m == l) {
            e.1 = w;
        }
    }

    pub fn wires(&self) -> &[(Label, WireType)] {
        &self.wires
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.wires.iter().map(|(l, _)| *l)
    }

    pub fn len(&self) -> usize {
        self.wires.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wires.is_empty()
    }

    /// Same wires irrespective of order.
    pub fn same_set(&self, other: &LabelContext) -> bool {
        self.len() == other.len() && self.wires.iter().all(|(l, w)| other.get(*l) == Some(*w))
    }

    pub fn to_typing_context(&self) -> TypingContext {
        TypingContext {
            bindings: self.wires.iter().map(|(l, w)| (Binder::Label(*l), w.as_type())).collect(),
        }
    }
}

impl fmt::Display for LabelContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, w)) in self.wires.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}:{w}")?;
        }
        f.write_str("}")
    }
}
