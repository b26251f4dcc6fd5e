use std::collections::{BTreeSet, HashMap};

use super::term::{Label, Name, Term, TermKind};

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    collect_free(t, &mut Vec::new(), &mut out);
    out
}

fn collect_free<'a>(t: &'a Term, bound: &mut Vec<&'a str>, out: &mut BTreeSet<Name>) {
    use TermKind::*;
    match &t.kind {
        Var(x) => {
            if !bound.contains(&x.as_str()) {
                out.insert(x.clone());
            }
        }
        Lambda(x, m) => {
            bound.push(x);
            collect_free(m, bound, out);
            bound.pop();
        }
        Let(x, n, m) => {
            collect_free(n, bound, out);
            bound.push(x);
            collect_free(m, bound, out);
            bound.pop();
        }
        LetPair(x, y, n, m) => {
            collect_free(n, bound, out);
            bound.push(x);
            bound.push(y);
            collect_free(m, bound, out);
            bound.pop();
            bound.pop();
        }
        NatCase(s, z, x, m) | MaybeCase(s, z, x, m) => {
            collect_free(s, bound, out);
            collect_free(z, bound, out);
            bound.push(x);
            collect_free(m, bound, out);
            bound.pop();
        }
        _ => {
            for c in t.children() {
                collect_free(c, bound, out);
            }
        }
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..)
        .map(|i| format!("{stem}_{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply")
}

/// Capture-avoiding `[v/x]m`.
pub fn substitute(m: &Term, x: &str, v: &Term) -> Term {
    let fv = free_vars(v);
    subst(m, x, v, &fv)
}

/// Simultaneous `[v1/x, v2/y]m` for distinct `x`, `y`, applied as two
/// sequential substitutions; sound because values handed in by the evaluator
/// are closed.
pub fn substitute2(m: &Term, x: &str, v1: &Term, y: &str, v2: &Term) -> Term {
    let fv1 = free_vars(v1);
    if fv1.contains(y) {
        // [v1/x] would introduce a free y that the second pass would capture
        let fv2 = free_vars(v2);
        let mut avoid = fv1.clone();
        avoid.extend(fv2.iter().cloned());
        avoid.extend(free_vars(m));
        let tmp = fresh_name(y, &avoid);
        let renamed = subst(m, y, &Term::var(tmp.clone()), &BTreeSet::from([tmp.clone()]));
        let step = subst(&renamed, x, v1, &fv1);
        return subst(&step, &tmp, v2, &fv2);
    }
    let step = subst(m, x, v1, &fv1);
    subst(&step, y, v2, &free_vars(v2))
}

fn binder_clash(binder: &str, x: &str, body: &Term, fv: &BTreeSet<Name>) -> bool {
    binder != x && fv.contains(binder) && free_vars(body).contains(x)
}

/// Renames `binder` inside `body` if substituting would capture it.
fn freshen(binder: &Name, body: &Term, x: &str, v_fv: &BTreeSet<Name>) -> (Name, Term) {
    if !binder_clash(binder, x, body, v_fv) {
        return (binder.clone(), body.clone());
    }
    let mut avoid = v_fv.clone();
    avoid.extend(free_vars(body));
    avoid.insert(x.to_string());
    let fresh = fresh_name(binder, &avoid);
    let renamed = subst(body, binder, &Term::var(fresh.clone()), &BTreeSet::from([fresh.clone()]));
    (fresh, renamed)
}

fn subst(m: &Term, x: &str, v: &Term, fv: &BTreeSet<Name>) -> Term {
    use TermKind::*;
    let bx = |t: &Term| std::boxed::Box::new(subst(t, x, v, fv));
    let kind = match &m.kind {
        Var(y) if y == x => return Term { kind: v.kind.clone(), span: m.span },
        Var(_) | Global(..) | Label(_) | Bool(_) | Unit | Circ(_) | Nat(_) | Nothing => m.kind.clone(),
        Lambda(y, body) => {
            if y == x {
                m.kind.clone()
            } else {
                let (y, body) = freshen(y, body, x, fv);
                Lambda(y, bx(&body))
            }
        }
        Let(y, n, body) => {
            let n = bx(n);
            if y == x {
                Let(y.clone(), n, body.clone())
            } else {
                let (y, body) = freshen(y, body, x, fv);
                Let(y, n, bx(&body))
            }
        }
        LetPair(y, z, n, body) => {
            let n = bx(n);
            if y == x || z == x {
                LetPair(y.clone(), z.clone(), n, body.clone())
            } else {
                let (y, body) = freshen(y, body, x, fv);
                let (z, body) = freshen(z, &body, x, fv);
                LetPair(y, z, n, bx(&body))
            }
        }
        NatCase(s, zero, y, succ) => {
            let (s, zero) = (bx(s), bx(zero));
            if y == x {
                NatCase(s, zero, y.clone(), succ.clone())
            } else {
                let (y, succ) = freshen(y, succ, x, fv);
                NatCase(s, zero, y, bx(&succ))
            }
        }
        MaybeCase(s, none, y, just) => {
            let (s, none) = (bx(s), bx(none));
            if y == x {
                MaybeCase(s, none, y.clone(), just.clone())
            } else {
                let (y, just) = freshen(y, just, x, fv);
                MaybeCase(s, none, y, bx(&just))
            }
        }
        App(a, b) => App(bx(a), bx(b)),
        Apply(a, b) => Apply(bx(a), bx(b)),
        Pair(a, b) => Pair(bx(a), bx(b)),
        LetUnit(a, b) => LetUnit(bx(a), bx(b)),
        Force(a) => Force(bx(a)),
        Lift(a) => Lift(bx(a)),
        Box(s, a) => Box(s.clone(), bx(a)),
        Dynlift(a) => Dynlift(bx(a)),
        Succ(a) => Succ(bx(a)),
        Just(a) => Just(bx(a)),
        If(a, b, c) => If(bx(a), bx(b), bx(c)),
    };
    Term { kind, span: m.span }
}

/// Structural map over every node, bottom-up.
pub fn map_term(t: &Term, f: &mut impl FnMut(TermKind) -> TermKind) -> Term {
    use TermKind::*;
    let mut go = |c: &Term| std::boxed::Box::new(map_term(c, f));
    let kind = match &t.kind {
        Lambda(x, m) => Lambda(x.clone(), go(m)),
        Let(x, n, m) => {
            let n = go(n);
            Let(x.clone(), n, go(m))
        }
        LetPair(x, y, n, m) => {
            let n = go(n);
            LetPair(x.clone(), y.clone(), n, go(m))
        }
        NatCase(s, z, x, m) => {
            let (s, z) = (go(s), go(z));
            NatCase(s, z, x.clone(), go(m))
        }
        MaybeCase(s, z, x, m) => {
            let (s, z) = (go(s), go(z));
            MaybeCase(s, z, x.clone(), go(m))
        }
        App(a, b) => {
            let a = go(a);
            App(a, go(b))
        }
        Apply(a, b) => {
            let a = go(a);
            Apply(a, go(b))
        }
        Pair(a, b) => {
            let a = go(a);
            Pair(a, go(b))
        }
        LetUnit(a, b) => {
            let a = go(a);
            LetUnit(a, go(b))
        }
        Force(a) => Force(go(a)),
        Lift(a) => Lift(go(a)),
        Box(s, a) => Box(s.clone(), go(a)),
        Dynlift(a) => Dynlift(go(a)),
        Succ(a) => Succ(go(a)),
        Just(a) => Just(go(a)),
        If(a, b, c) => {
            let (a, b) = (go(a), go(b));
            If(a, b, go(c))
        }
        k => k.clone(),
    };
    Term { kind: f(kind), span: t.span }
}

/// Renames free labels. Labels bound inside boxed-circuit literals are untouched.
pub fn rename_labels(t: &Term, map: &HashMap<Label, Label>) -> Term {
    map_term(t, &mut |k| match k {
        TermKind::Label(l) => TermKind::Label(*map.get(&l).unwrap_or(&l)),
        k => k,
    })
}

/// Sets the unfolding depth of every occurrence of `name`.
pub fn set_global_depth(t: &Term, name: &str, depth: u32) -> Term {
    map_term(t, &mut |k| match k {
        TermKind::Global(n, _) if n == name => TermKind::Global(n, depth),
        k => k,
    })
}

/// Alpha-equivalence. Spans are ignored; labels and globals compare by
/// identity; boxed circuits compare up to relabeling.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    alpha(a, b, &mut Vec::new())
}

fn alpha<'a>(a: &'a Term, b: &'a Term, env: &mut Vec<(&'a str, &'a str)>) -> bool {
    use TermKind::*;
    match (&a.kind, &b.kind) {
        (Var(x), Var(y)) => {
            for (l, r) in env.iter().rev() {
                if *l == x || *r == y {
                    return *l == x && *r == y;
                }
            }
            x == y
        }
        (Global(x, _), Global(y, _)) => x == y,
        (Label(x), Label(y)) => x == y,
        (Bool(x), Bool(y)) => x == y,
        (Unit, Unit) | (Nothing, Nothing) => true,
        (Nat(x), Nat(y)) => x == y,
        (Circ(x), Circ(y)) => x.equivalent(y),
        (Lambda(x, m), Lambda(y, n)) => under(env, &[(x, y)], |env| alpha(m, n, env)),
        (Let(x, n1, m1), Let(y, n2, m2)) => alpha(n1, n2, env) && under(env, &[(x, y)], |env| alpha(m1, m2, env)),
        (LetPair(x1, y1, n1, m1), LetPair(x2, y2, n2, m2)) => {
            alpha(n1, n2, env) && under(env, &[(x1, x2), (y1, y2)], |env| alpha(m1, m2, env))
        }
        (NatCase(s1, z1, x, m1), NatCase(s2, z2, y, m2)) | (MaybeCase(s1, z1, x, m1), MaybeCase(s2, z2, y, m2)) => {
            alpha(s1, s2, env) && alpha(z1, z2, env) && under(env, &[(x, y)], |env| alpha(m1, m2, env))
        }
        (Box(s, m), Box(u, n)) => s == u && alpha(m, n, env),
        (App(a1, b1), App(a2, b2))
        | (Apply(a1, b1), Apply(a2, b2))
        | (Pair(a1, b1), Pair(a2, b2))
        | (LetUnit(a1, b1), LetUnit(a2, b2)) => alpha(a1, a2, env) && alpha(b1, b2, env),
        (Force(m), Force(n))
        | (Lift(m), Lift(n))
        | (Dynlift(m), Dynlift(n))
        | (Succ(m), Succ(n))
        | (Just(m), Just(n)) => alpha(m, n, env),
        (If(a1, b1, c1), If(a2, b2, c2)) => alpha(a1, a2, env) && alpha(b1, b2, env) && alpha(c1, c2, env),
        _ => false,
    }
}

fn under<'a>(
    env: &mut Vec<(&'a str, &'a str)>,
    binders: &[(&'a String, &'a String)],
    f: impl FnOnce(&mut Vec<(&'a str, &'a str)>) -> bool,
) -> bool {
    for (x, y) in binders {
        env.push((x.as_str(), y.as_str()));
    }
    let r = f(env);
    for _ in binders {
        env.pop();
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn replaces_free_occurrence() {
        let m = Term::if_(v("x"), v("m"), v("n"));
        let r = substitute(&m, "x", &Term::new(TermKind::Bool(true)));
        let expect = Term::if_(Term::new(TermKind::Bool(true)), v("m"), v("n"));
        assert!(alpha_eq(&r, &expect));
    }

    #[test]
    fn shadowed_binder_is_untouched() {
        let m = Term::lambda("x", v("x"));
        let r = substitute(&m, "x", &Term::new(TermKind::Unit));
        assert!(alpha_eq(&r, &m));
    }

    #[test]
    fn substitutes_under_binder() {
        let l = Label(7);
        let m = Term::lambda("y", Term::pair(v("x"), v("y")));
        let r = substitute(&m, "x", &Term::label(l));
        let expect = Term::lambda("y", Term::pair(Term::label(l), v("y")));
        assert!(alpha_eq(&r, &expect));
    }

    #[test]
    fn avoids_capture() {
        // [y/x](λy. x y) must not become λy. y y
        let m = Term::lambda("y", Term::app(v("x"), v("y")));
        let r = substitute(&m, "x", &v("y"));
        match &r.kind {
            TermKind::Lambda(b, body) => {
                assert_ne!(b, "y");
                let expect = Term::app(v("y"), v(b));
                assert!(alpha_eq(body, &expect));
            }
            _ => panic!("expected lambda"),
        }
    }

    #[test]
    fn alpha_equivalence_respects_binding() {
        let a = Term::lambda("x", Term::lambda("y", v("x")));
        let b = Term::lambda("p", Term::lambda("q", v("p")));
        let c = Term::lambda("p", Term::lambda("q", v("q")));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &c));
        // free variable vs bound
        assert!(!alpha_eq(&Term::lambda("x", v("y")), &Term::lambda("y", v("y"))));
    }

    #[test]
    fn simultaneous_substitution_with_swapped_names() {
        // [y/x, x/y] (x, y) with v1 = var y — must give (y, x)
        let m = Term::pair(v("x"), v("y"));
        let r = substitute2(&m, "x", &v("y"), "y", &v("x"));
        assert!(alpha_eq(&r, &Term::pair(v("y"), v("x"))));
    }
}
