use std::fmt::Write as _;

use crate::circuit::BoxedCircuit;
use crate::syntax::{Declaration, Program, SimpleTerm, Term, TermKind, Type};

/// Anything with a concrete-syntax rendering that parses back.
pub trait Pretty {
    fn pretty(&self) -> String;
}

pub fn pretty<T: Pretty + ?Sized>(x: &T) -> String {
    x.pretty()
}

pub fn pretty_type(t: &Type) -> String {
    t.to_string()
}

pub fn pretty_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(&mut out, t, Prec::Expr);
    out
}

impl Pretty for Type {
    fn pretty(&self) -> String {
        pretty_type(self)
    }
}

impl Pretty for Term {
    fn pretty(&self) -> String {
        pretty_term(self)
    }
}

impl Pretty for Declaration {
    fn pretty(&self) -> String {
        let mut s = format!("{} : {}\n{}", self.name, self.ty, self.name);
        for p in &self.params {
            s.push(' ');
            s.push_str(p);
        }
        s.push_str(" = ");
        s.push_str(&pretty_term(&self.body));
        s.push('\n');
        s
    }
}

impl Pretty for Program {
    fn pretty(&self) -> String {
        self.declarations.iter().map(|d| d.pretty()).collect::<Vec<_>>().join("\n")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    /// Binders and other forms that extend as far right as possible.
    Expr,
    /// Application and prefix formers.
    App,
    Atom,
}

fn prec(t: &Term) -> Prec {
    use TermKind::*;
    match &t.kind {
        Lambda(..) | Let(..) | LetPair(..) | LetUnit(..) | If(..) | NatCase(..) | MaybeCase(..) => Prec::Expr,
        App(..) | Force(_) | Lift(_) | Dynlift(_) | Box(..) | Succ(_) | Just(_) => Prec::App,
        _ => Prec::Atom,
    }
}

fn write_term(out: &mut String, t: &Term, min: Prec) {
    if prec(t) < min {
        out.push('(');
        write_term(out, t, Prec::Expr);
        out.push(')');
        return;
    }
    use TermKind::*;
    match &t.kind {
        Var(x) | Global(x, _) => out.push_str(x),
        Label(l) => {
            let _ = write!(out, "{l}");
        }
        Bool(true) => out.push_str("True"),
        Bool(false) => out.push_str("False"),
        Unit => out.push_str("()"),
        Nat(n) => {
            let _ = write!(out, "{n}");
        }
        Nothing => out.push_str("Nothing"),
        Lambda(x, m) => {
            let _ = write!(out, "\\{x} -> ");
            write_term(out, m, Prec::Expr);
        }
        App(f, a) => {
            write_term(out, f, Prec::App);
            out.push(' ');
            write_term(out, a, Prec::Atom);
        }
        Circ(b) => write_circ(out, b),
        Apply(c, a) => {
            out.push_str("apply(");
            write_term(out, c, Prec::Expr);
            out.push_str(", ");
            write_term(out, a, Prec::Expr);
            out.push(')');
        }
        Force(m) => prefix(out, "force", m),
        Lift(m) => prefix(out, "lift", m),
        Dynlift(m) => prefix(out, "dynlift", m),
        Succ(m) => prefix(out, "S", m),
        Just(m) => prefix(out, "Just", m),
        Box(s, m) => {
            let ty = s.to_string();
            if matches!(s, Type::Unit | Type::Qubit | Type::Bit | Type::Bool | Type::Nat) {
                let _ = write!(out, "box {ty} ");
            } else {
                let _ = write!(out, "box ({ty}) ");
            }
            write_term(out, m, Prec::Atom);
        }
        Pair(a, b) => {
            out.push('(');
            write_term(out, a, Prec::Expr);
            out.push_str(", ");
            write_term(out, b, Prec::Expr);
            out.push(')');
        }
        LetPair(x, y, n, m) => {
            let _ = write!(out, "let ({x}, {y}) = ");
            write_term(out, n, Prec::Expr);
            out.push_str(" in ");
            write_term(out, m, Prec::Expr);
        }
        Let(x, n, m) => {
            let _ = write!(out, "let {x} = ");
            write_term(out, n, Prec::Expr);
            out.push_str(" in ");
            write_term(out, m, Prec::Expr);
        }
        LetUnit(n, m) => {
            out.push_str("let _ = ");
            write_term(out, n, Prec::Expr);
            out.push_str(" in ");
            write_term(out, m, Prec::Expr);
        }
        If(c, a, b) => {
            out.push_str("if ");
            write_term(out, c, Prec::Expr);
            out.push_str(" then ");
            write_term(out, a, Prec::Expr);
            out.push_str(" else ");
            write_term(out, b, Prec::Expr);
        }
        NatCase(s, z, x, m) => case(out, s, ("Z", z), &format!("S {x}"), m),
        MaybeCase(s, z, x, m) => case(out, s, ("Nothing", z), &format!("Just {x}"), m),
    }
}

fn prefix(out: &mut String, kw: &str, m: &Term) {
    out.push_str(kw);
    out.push(' ');
    write_term(out, m, Prec::Atom);
}

fn case(out: &mut String, s: &Term, first: (&str, &Term), second: &str, m: &Term) {
    out.push_str("case ");
    write_term(out, s, Prec::Expr);
    let _ = write!(out, " of {{ {} -> ", first.0);
    write_term(out, first.1, Prec::Expr);
    let _ = write!(out, "; {second} -> ");
    write_term(out, m, Prec::Expr);
    out.push_str(" }");
}

fn write_typed_simple(out: &mut String, a: &SimpleTerm, b: &BoxedCircuit) {
    match a {
        SimpleTerm::Unit => out.push_str("()"),
        SimpleTerm::Label(l) => {
            let w = b.circuit.inputs.get(*l).expect("input term enumerates inputs");
            let _ = write!(out, "{l} : {w}");
        }
        SimpleTerm::Pair(x, y) => {
            out.push('(');
            write_typed_simple(out, x, b);
            out.push_str(", ");
            write_typed_simple(out, y, b);
            out.push(')');
        }
    }
}

fn write_circ(out: &mut String, b: &BoxedCircuit) {
    out.push_str("circ ");
    if matches!(b.input, SimpleTerm::Label(_)) {
        out.push('(');
        write_typed_simple(out, &b.input, b);
        out.push(')');
    } else {
        write_typed_simple(out, &b.input, b);
    }
    let _ = write!(out, " {} {}", b.circuit, b.output);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_program, parse_term, parse_type};
    use crate::syntax::{alpha_eq, Modality};

    #[test]
    fn box_emission() {
        let t = Term::boxed(Type::Qubit, Term::var("tele1"));
        assert_eq!(pretty_term(&t), "box Qubit tele1");
    }

    #[test]
    fn annotated_type_emission() {
        let t = Type::bang(Modality::Zero, Type::arrow(Type::Qubit, Modality::Zero, Type::Qubit));
        assert_eq!(pretty_type(&t), "!_0(Qubit -o_0 Qubit)");
        assert_eq!(pretty_type(&Type::tensor(Type::Bool, Type::Bool)), "Bool * Bool");
    }

    #[test]
    fn term_round_trips() {
        for src in [
            "\\x -> \\y -> f (x, y)",
            "force f x (lift (g y))",
            "apply(box (Qubit * Qubit) f, (ℓ0, ℓ1))",
            "let (a, q) = CNot a q in let _ = Discard x in if dynlift (Meas a) then Just q else Nothing",
            "case n of { Z -> 0; S m -> S (S m) }",
            "case m of { Nothing -> f (); Just q -> q }",
            "circ (ℓ0 : Qubit) [H(ℓ0), Meas(ℓ0)] ℓ0",
            "circ () [Init0(ℓ3)] ℓ3",
            "f (\\x -> x) (let y = () in y)",
        ] {
            let t = parse_term(src).unwrap();
            let printed = pretty_term(&t);
            let back = parse_term(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
            assert!(alpha_eq(&t, &back), "{src} -> {printed}");
        }
    }

    #[test]
    fn type_round_trips() {
        for src in ["!(Qubit -> Qubit)", "!_1(Qubit -o_1 Qubit -o_0 Bool * Bool)", "Maybe (!Nat) * Circ(Qubit * Bit, Unit)", "!Maybe Qubit"] {
            let t = parse_type(src).unwrap();
            let back = parse_type(&pretty_type(&t)).unwrap();
            assert!(t.alpha_eq(&back), "{src}");
        }
    }

    #[test]
    fn program_round_trip() {
        let p = parse_program("a : Unit\na = ()\n\nf : !(Qubit -> Qubit)\nf q = H q\n").unwrap();
        let back = parse_program(&p.pretty()).unwrap();
        assert_eq!(back.declarations.len(), 2);
        for (x, y) in p.declarations.iter().zip(&back.declarations) {
            assert!(alpha_eq(&x.body, &y.body) && x.ty.alpha_eq(&y.ty));
        }
    }
}
