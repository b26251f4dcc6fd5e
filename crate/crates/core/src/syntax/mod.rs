//! Abstract syntax shared by every other module: modalities, types, terms,
//! typing and label contexts, and capture-avoiding substitution.

mod context;
mod subst;
mod term;
mod types;

pub use context::{ctx_merge, Binder, ContextError, LabelContext, TypingContext};
pub use subst::{alpha_eq, free_vars, map_term, rename_labels, set_global_depth, substitute, substitute2};
pub use term::{Label, Name, Pos, SimpleTerm, Span, Term, TermKind};
pub use types::{modality_and, HoleId, Modality, Mode, Type, TypeClass, WireType};

/// A parsed declaration: `name : ty` followed by `name params = body`.
#[derive(Clone, Debug)]
pub struct Declaration {
    pub name: Name,
    pub ty: Type,
    pub params: Vec<Name>,
    pub body: Term,
    pub span: Span,
}

impl Declaration {
    /// The body with the parameters abstracted: `λp1. … λpk. body`.
    pub fn abstracted_body(&self) -> Term {
        self.params.iter().rev().fold(self.body.clone(), |acc, p| {
            let span = acc.span;
            Term::at(TermKind::Lambda(p.clone(), Box::new(acc)), span)
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Program {
    pub declarations: Vec<Declaration>,
}

impl Program {
    pub fn get(&self, name: &str) -> Option<&Declaration> {
        self.declarations.iter().find(|d| d.name == name)
    }

    /// Replaces declarations of `other` that share a name with one in `self`
    /// in place, and appends the rest.
    pub fn override_with(&self, other: &Program) -> Program {
        let mut declarations = self.declarations.clone();
        for d in &other.declarations {
            match declarations.iter_mut().find(|e| e.name == d.name) {
                Some(slot) => *slot = d.clone(),
                None => declarations.push(d.clone()),
            }
        }
        Program { declarations }
    }

    /// Drops the named declaration.
    pub fn without(&self, name: &str) -> Program {
        Program {
            declarations: self.declarations.iter().filter(|d| d.name != name).cloned().collect(),
        }
    }
}
