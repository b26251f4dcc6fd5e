//! Random well-typed programs over the prelude, for property tests.
//!
//! Generation is syntax-directed: each generator produces source text of a
//! given type that consumes a given set of qubit variables exactly once, so
//! nearly every candidate checks. Callers still run the checker and keep
//! only what passes.

use rand::seq::SliceRandom;
use rand::Rng;

/// Generates declarations of parameter type plus `!(Qubit -> Qubit)`
/// functions that never lift (so they are boxable and run at generation
/// time).
pub struct TermGen<R: Rng> {
    rng: R,
    fresh: u32,
    /// When false, no `dynlift` is produced.
    lifting: bool,
}

impl<R: Rng> TermGen<R> {
    pub fn new(rng: R) -> Self {
        TermGen { rng, fresh: 0, lifting: true }
    }

    fn name(&mut self, base: &str) -> String {
        self.fresh += 1;
        format!("{base}{}", self.fresh)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// A term of type Qubit consuming `var` (if any).
    pub fn qubit(&mut self, var: Option<&str>, depth: u32) -> String {
        if depth == 0 {
            return match var {
                Some(v) => v.to_string(),
                None => ["Init0 ()", "Init1 ()"].choose(&mut self.rng).unwrap().to_string(),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..9) {
            0 | 1 => {
                let g = ["H", "QNot", "ZGate", "TGate", "tgate_inv"].choose(&mut self.rng).unwrap();
                format!("{g} ({})", self.qubit(var, d))
            }
            2 => {
                let (x, y) = (self.name("x"), self.name("y"));
                let (keep, drop) = if self.chance(0.5) { (&x, &y) } else { (&y, &x) };
                let pair = self.pair(var, None, d);
                let dropped = self.discard(drop, d);
                format!("let ({x}, {y}) = {pair} in let _ = {dropped} in {keep}")
            }
            3 if self.lifting => {
                let c = self.boolean(None, d);
                let (a, b) = (self.qubit(var, d), self.qubit(var, d));
                format!("if {c} then {a} else {b}")
            }
            4 => {
                let x = self.name("x");
                let body = self.qubit(Some(&x), d);
                let arg = self.qubit(var, d);
                format!("(\\{x} -> {body}) ({arg})")
            }
            5 => {
                let f = self.boxable(d);
                format!("apply(box Qubit (lift ({f})), {})", self.qubit(var, d))
            }
            6 => {
                let x = self.name("x");
                let body = self.qubit(Some(&x), d);
                format!("force (lift (\\{x} -> {body})) ({})", self.qubit(var, d))
            }
            7 if self.lifting => {
                let m = self.name("m");
                let opt = self.maybe(var, d);
                let fallback = self.qubit(None, d);
                let inner = self.qubit(Some(&m), d);
                format!("case {opt} of {{ Nothing -> {fallback}; Just {m} -> {inner} }}")
            }
            _ => self.qubit(var, 0),
        }
    }

    /// `\x -> …` of type Qubit -o_1 Qubit.
    fn boxable(&mut self, depth: u32) -> String {
        let saved = std::mem::replace(&mut self.lifting, false);
        let x = self.name("b");
        let body = self.qubit(Some(&x), depth);
        self.lifting = saved;
        format!("\\{x} -> {body}")
    }

    /// Type Unit, consuming qubit variable `v`.
    fn discard(&mut self, v: &str, depth: u32) -> String {
        format!("Discard (Meas ({}))", self.qubit(Some(v), depth.min(1)))
    }

    /// Type Qubit * Qubit consuming `a` and `b`.
    fn pair(&mut self, a: Option<&str>, b: Option<&str>, depth: u32) -> String {
        let d = depth.saturating_sub(1);
        match self.rng.gen_range(0..3) {
            0 => format!("CNot ({}) ({})", self.qubit(a, d), self.qubit(b, d)),
            1 => format!("({}, {})", self.qubit(a, d), self.qubit(b, d)),
            _ => {
                let (x, y) = (self.name("p"), self.name("p"));
                let inner = self.pair(a, b, d);
                let (l, r) = (self.qubit(Some(&y), d), self.qubit(Some(&x), d));
                format!("let ({x}, {y}) = {inner} in ({l}, {r})")
            }
        }
    }

    /// Type Maybe Qubit consuming `var`.
    fn maybe(&mut self, var: Option<&str>, depth: u32) -> String {
        let c = self.boolean(None, depth);
        let x = self.name("z");
        let (j, n) = (self.qubit(Some(&x), depth), self.discard(&x, depth));
        let arg = self.qubit(var, depth);
        format!("(\\{x} -> if {c} then Just ({j}) else let _ = {n} in Nothing) ({arg})")
    }

    /// Type Bool consuming `var`.
    pub fn boolean(&mut self, var: Option<&str>, depth: u32) -> String {
        if var.is_some() || (self.lifting && self.chance(0.4)) {
            return if self.lifting {
                format!("dynlift (Meas ({}))", self.qubit(var, depth.saturating_sub(1)))
            } else {
                let m = self.discard(var.unwrap_or("q"), depth);
                format!("let _ = {m} in True")
            };
        }
        if depth == 0 {
            return ["True", "False"].choose(&mut self.rng).unwrap().to_string();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..3) {
            0 => format!("not ({})", self.boolean(None, d)),
            1 => format!("or ({}) ({})", self.boolean(None, d), self.boolean(None, d)),
            _ => {
                let c = self.boolean(None, d);
                format!("if {c} then {} else {}", self.boolean(None, d), self.boolean(None, d))
            }
        }
    }

    /// A program of about `n` declarations. Parameter-typed entries are
    /// named `e*`; boxable functions are named `f*`.
    pub fn program(&mut self, n: usize, depth: u32) -> String {
        let mut out = String::new();
        for i in 0..n {
            match self.rng.gen_range(0..5) {
                0 => {
                    let body = self.boolean(None, depth);
                    out.push_str(&format!("e{i} : Bool\ne{i} = {body}\n\n"));
                }
                1 => {
                    let (a, b) = (self.boolean(None, depth), self.boolean(None, depth));
                    out.push_str(&format!("e{i} : Bool * Bool\ne{i} = ({a}, {b})\n\n"));
                }
                2 => {
                    let b = self.boolean(None, depth);
                    out.push_str(&format!("e{i} : Nat\ne{i} = if {b} then S (S 0) else 1\n\n"));
                }
                3 => {
                    let f = self.boxable(depth);
                    out.push_str(&format!("f{i} : !(Qubit -> Qubit)\nf{i} = {f}\n\n"));
                }
                _ => {
                    let f = self.boxable(depth);
                    out.push_str(&format!("e{i} : Circ(Qubit, Qubit)\ne{i} = box Qubit (lift ({f}))\n\n"));
                }
            }
        }
        out
    }
}
