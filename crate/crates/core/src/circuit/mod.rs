//! Circuits as gate lists over labeled wires, with composition along a
//! simple-term interface and a stable JSON/text export.

mod export;
mod gate;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::syntax::{Label, LabelContext, SimpleTerm, Type, WireType};

pub use export::{export_circuit, import_json, ExportFormat};
pub use gate::{Gate, GateSignature};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("interface shapes differ: {0} vs {1}")]
    ShapeMismatch(SimpleTerm, SimpleTerm),
    #[error("wire {label} has type {found}, expected {expected}")]
    WireTypeMismatch { label: Label, expected: WireType, found: WireType },
    #[error("wire {0} is not live")]
    DanglingLabel(Label),
    #[error("wire {0} is introduced twice")]
    DuplicateLabel(Label),
    #[error("gate {gate} expects {expected} wires, got {found}")]
    Arity { gate: Gate, expected: usize, found: usize },
    #[error("declared outputs {declared} differ from computed outputs {computed}")]
    OutputMismatch { declared: LabelContext, computed: LabelContext },
    #[error("interface term {0} does not enumerate the circuit's wires")]
    InterfaceMismatch(SimpleTerm),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("malformed circuit: {0}")]
    Malformed(String),
}

/// A gate instance. `wires` are the consumed/acted-on labels in signature
/// order; `produced` are the fresh labels of an initialization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GateApp {
    pub gate: Gate,
    pub wires: Vec<Label>,
    pub produced: Vec<Label>,
}

impl GateApp {
    pub fn new(gate: Gate, wires: Vec<Label>) -> GateApp {
        GateApp { gate, wires, produced: Vec::new() }
    }

    pub fn init(gate: Gate, produced: Label) -> GateApp {
        GateApp { gate, wires: Vec::new(), produced: vec![produced] }
    }

    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> GateApp {
        GateApp {
            gate: self.gate,
            wires: self.wires.iter().map(|l| f(*l)).collect(),
            produced: self.produced.iter().map(|l| f(*l)).collect(),
        }
    }

    /// Applies this gate's wire effect to a live context.
    pub fn step(&self, live: &mut LabelContext) -> Result<(), CircuitError> {
        let sig = self.gate.signature();
        if self.wires.len() != sig.inputs.len() {
            return Err(CircuitError::Arity { gate: self.gate, expected: sig.inputs.len(), found: self.wires.len() });
        }
        if self.produced.len() != sig.produces() {
            return Err(CircuitError::Arity { gate: self.gate, expected: sig.produces(), found: self.produced.len() });
        }
        for (i, (l, want)) in self.wires.iter().zip(&sig.inputs).enumerate() {
            if self.wires[..i].contains(l) {
                return Err(CircuitError::DuplicateLabel(*l));
            }
            match live.get(*l) {
                None => return Err(CircuitError::DanglingLabel(*l)),
                Some(found) if found != *want => {
                    return Err(CircuitError::WireTypeMismatch { label: *l, expected: *want, found })
                }
                Some(_) => {}
            }
        }
        if sig.in_place() {
            for (l, w) in self.wires.iter().zip(&sig.outputs) {
                live.set_type(*l, *w);
            }
        } else {
            for l in &self.wires {
                live.remove(*l);
            }
            for (l, w) in self.produced.iter().zip(&sig.outputs) {
                if live.contains(*l) {
                    return Err(CircuitError::DuplicateLabel(*l));
                }
                live.push(*l, *w);
            }
        }
        Ok(())
    }
}

impl fmt::Display for GateApp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.gate)?;
        for (i, l) in self.wires.iter().chain(&self.produced).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

/// `C : Σ → Σ′`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    pub inputs: LabelContext,
    pub gates: Vec<GateApp>,
    pub outputs: LabelContext,
}

impl Circuit {
    pub fn identity(sigma: &LabelContext) -> Circuit {
        Circuit { inputs: sigma.clone(), gates: Vec::new(), outputs: sigma.clone() }
    }

    /// Builds a circuit from inputs and gates; outputs are computed in
    /// live order (surviving inputs, then produced wires).
    pub fn from_gates(inputs: LabelContext, gates: Vec<GateApp>) -> Result<Circuit, CircuitError> {
        let outputs = simulate(&inputs, &gates)?;
        Ok(Circuit { inputs, gates, outputs })
    }

    /// Checks the wire discipline and that `outputs` is the computed output
    /// set.
    pub fn validate(&self) -> Result<(), CircuitError> {
        let computed = simulate(&self.inputs, &self.gates)?;
        if !computed.same_set(&self.outputs) {
            return Err(CircuitError::OutputMismatch { declared: self.outputs.clone(), computed });
        }
        Ok(())
    }

    /// Every label mentioned anywhere in the circuit.
    pub fn labels(&self) -> Vec<Label> {
        let mut out: Vec<Label> = self.inputs.labels().collect();
        for g in &self.gates {
            out.extend(g.produced.iter().copied());
        }
        out
    }

    pub fn max_label(&self) -> Option<Label> {
        self.labels().into_iter().max()
    }

    /// Appends `d` after `c` (`self`), connecting `vprime` (over d's inputs)
    /// to `v` (over c's outputs) positionally. Labels of `c` are kept and d's
    /// produced wires get fresh ids from `supply`.
    ///
    /// Returns the composite and the renaming applied to d's labels, so the
    /// caller can carry d's output term over.
    pub fn append(
        &self,
        d: &Circuit,
        vprime: &SimpleTerm,
        v: &SimpleTerm,
        supply: &mut LabelSupply,
    ) -> Result<(Circuit, HashMap<Label, Label>), CircuitError> {
        let (gates, map) = connect(d, vprime, v, &self.outputs, supply)?;
        let v_labels = v.labels();
        let mut outputs = LabelContext::new();
        for (l, w) in d.outputs.wires() {
            let m = map.get(l).copied().ok_or(CircuitError::DanglingLabel(*l))?;
            outputs.push(m, *w);
        }
        for (l, w) in self.outputs.wires() {
            if !v_labels.contains(l) {
                if outputs.contains(*l) {
                    return Err(CircuitError::DuplicateLabel(*l));
                }
                outputs.push(*l, *w);
            }
        }
        let mut all = self.gates.clone();
        all.extend(gates);
        let out = Circuit { inputs: self.inputs.clone(), gates: all, outputs };
        out.validate()?;
        Ok((out, map))
    }

    /// Renames inputs by position and produced wires by gate order to
    /// 0, 1, 2, …; returns the renamed circuit and the renaming.
    pub fn canonical_with_map(&self) -> (Circuit, HashMap<Label, Label>) {
        let mut map = HashMap::new();
        for (i, l) in self.labels().into_iter().enumerate() {
            map.insert(l, Label(i as u64));
        }
        (self.rename(&map), map)
    }

    pub fn canonical(&self) -> Circuit {
        self.canonical_with_map().0
    }

    /// Equality up to label renaming.
    pub fn equivalent(&self, other: &Circuit) -> bool {
        self.canonical() == other.canonical()
    }

    /// Renames labels present in `map`; others are kept.
    pub fn rename(&self, map: &HashMap<Label, Label>) -> Circuit {
        let f = |l: Label| map.get(&l).copied().unwrap_or(l);
        let ctx = |c: &LabelContext| LabelContext::from_wires(c.wires().iter().map(|(l, w)| (f(*l), *w)).collect());
        Circuit {
            inputs: ctx(&self.inputs),
            gates: self.gates.iter().map(|g| g.relabel(f)).collect(),
            outputs: ctx(&self.outputs),
        }
    }
}

fn simulate(inputs: &LabelContext, gates: &[GateApp]) -> Result<LabelContext, CircuitError> {
    let mut live = inputs.clone();
    let mut seen: Vec<Label> = inputs.labels().collect();
    for g in gates {
        for p in &g.produced {
            if seen.contains(p) {
                return Err(CircuitError::DuplicateLabel(*p));
            }
            seen.push(*p);
        }
        g.step(&mut live)?;
    }
    Ok(live)
}

/// Relabels `d` so that its interface `vprime` lines up with `v` over the
/// host wires `host`. Shared by circuit append and state operation.
pub(crate) fn connect(
    d: &Circuit,
    vprime: &SimpleTerm,
    v: &SimpleTerm,
    host: &LabelContext,
    supply: &mut LabelSupply,
) -> Result<(Vec<GateApp>, HashMap<Label, Label>), CircuitError> {
    if !vprime.same_shape(v) {
        return Err(CircuitError::ShapeMismatch(vprime.clone(), v.clone()));
    }
    let from = vprime.labels();
    let to = v.labels();
    if from.len() != d.inputs.len() || !from.iter().all(|l| d.inputs.contains(*l)) || has_repeat(&from) {
        return Err(CircuitError::InterfaceMismatch(vprime.clone()));
    }
    if has_repeat(&to) {
        return Err(CircuitError::InterfaceMismatch(v.clone()));
    }
    let mut map = HashMap::new();
    for (a, b) in from.iter().zip(&to) {
        let expected = d.inputs.get(*a).expect("checked above");
        match host.get(*b) {
            None => return Err(CircuitError::DanglingLabel(*b)),
            Some(found) if found != expected => {
                return Err(CircuitError::WireTypeMismatch { label: *b, expected, found })
            }
            Some(_) => {}
        }
        map.insert(*a, *b);
    }
    let mut gates = Vec::with_capacity(d.gates.len());
    for g in &d.gates {
        for p in &g.produced {
            map.insert(*p, supply.fresh());
        }
        for w in &g.wires {
            if !map.contains_key(w) {
                return Err(CircuitError::DanglingLabel(*w));
            }
        }
        gates.push(g.relabel(|l| map[&l]));
    }
    Ok((gates, map))
}

fn has_repeat(ls: &[Label]) -> bool {
    ls.iter().enumerate().any(|(i, l)| ls[..i].contains(l))
}

/// Monotone source of fresh labels.
#[derive(Clone, Debug, Default)]
pub struct LabelSupply {
    next: u64,
}

impl LabelSupply {
    pub fn new() -> LabelSupply {
        LabelSupply::default()
    }

    /// A supply that never issues any label in `used`.
    pub fn after(used: impl IntoIterator<Item = Label>) -> LabelSupply {
        let next = used.into_iter().map(|l| l.0 + 1).max().unwrap_or(0);
        LabelSupply { next }
    }

    pub fn fresh(&mut self) -> Label {
        let l = Label(self.next);
        self.next += 1;
        l
    }

    /// Makes sure `l` will never be issued.
    pub fn reserve(&mut self, l: Label) {
        self.next = self.next.max(l.0 + 1);
    }

    pub fn peek(&self) -> u64 {
        self.next
    }
}

/// A fresh simple term of simple type `s`, with its label context.
///
/// Panics if `s` is not simple.
pub fn gen(s: &Type, supply: &mut LabelSupply) -> (SimpleTerm, LabelContext) {
    let mut ctx = LabelContext::new();
    let a = gen_into(s, supply, &mut ctx);
    (a, ctx)
}

fn gen_into(s: &Type, supply: &mut LabelSupply, ctx: &mut LabelContext) -> SimpleTerm {
    match s {
        Type::Unit => SimpleTerm::Unit,
        Type::Qubit | Type::Bit => {
            let l = supply.fresh();
            ctx.push(l, if *s == Type::Qubit { WireType::Qubit } else { WireType::Bit });
            SimpleTerm::Label(l)
        }
        Type::Tensor(a, b) => {
            let x = gen_into(a, supply, ctx);
            let y = gen_into(b, supply, ctx);
            SimpleTerm::pair(x, y)
        }
        other => panic!("gen on non-simple type {other}"),
    }
}

/// Types a simple term under a label context, i.e. the `S` with `Σ ⊢ a : S`.
pub fn simple_type_of(a: &SimpleTerm, ctx: &LabelContext) -> Option<Type> {
    match a {
        SimpleTerm::Unit => Some(Type::Unit),
        SimpleTerm::Label(l) => ctx.get(*l).map(WireType::as_type),
        SimpleTerm::Pair(x, y) => Some(Type::tensor(simple_type_of(x, ctx)?, simple_type_of(y, ctx)?)),
    }
}

/// `(a, C, b)`: a circuit with structured input and output interfaces.
///
/// The circuit's `inputs` are kept in the order of `a`'s labels and its
/// `outputs` in the order of `b`'s, so the literal is fully determined by
/// the two terms and the gate list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxedCircuit {
    pub input: SimpleTerm,
    pub circuit: Circuit,
    pub output: SimpleTerm,
}

impl BoxedCircuit {
    pub fn new(input: SimpleTerm, circuit: Circuit, output: SimpleTerm) -> Result<BoxedCircuit, CircuitError> {
        circuit.validate()?;
        let inputs = enumerate(&input, &circuit.inputs)?;
        let outputs = enumerate(&output, &circuit.outputs)?;
        Ok(BoxedCircuit { input, circuit: Circuit { inputs, gates: circuit.gates, outputs }, output })
    }

    /// `Circ(S, U)` components.
    pub fn types(&self) -> (Type, Type) {
        (
            simple_type_of(&self.input, &self.circuit.inputs).expect("input enumerates inputs"),
            simple_type_of(&self.output, &self.circuit.outputs).expect("output enumerates outputs"),
        )
    }

    pub fn canonical(&self) -> BoxedCircuit {
        let (circuit, map) = self.circuit.canonical_with_map();
        let f = |l: Label| map[&l];
        BoxedCircuit { input: self.input.rename(&f), circuit, output: self.output.rename(&f) }
    }

    pub fn equivalent(&self, other: &BoxedCircuit) -> bool {
        self.canonical() == other.canonical()
    }

    /// A boxed single gate with canonical labels, e.g. `H_circ`. Wire order
    /// of the interface follows the gate's signature.
    pub fn single_gate(gate: Gate) -> BoxedCircuit {
        let sig = gate.signature();
        let mut supply = LabelSupply::new();
        let wires: Vec<Label> = sig.inputs.iter().map(|_| supply.fresh()).collect();
        let inputs = LabelContext::from_wires(wires.iter().copied().zip(sig.inputs.iter().copied()).collect());
        let produced: Vec<Label> = (0..sig.produces()).map(|_| supply.fresh()).collect();
        let app = GateApp { gate, wires: wires.clone(), produced: produced.clone() };
        let circuit = Circuit::from_gates(inputs, vec![app]).expect("gate signature is consistent");
        let outs = if sig.in_place() { wires.clone() } else { produced };
        BoxedCircuit::new(tuple(&wires), circuit, tuple(&outs)).expect("interface enumerates wires")
    }
}

/// Names of the built-in single-gate circuit constants.
pub const BUILTIN_CIRCUITS: [(&str, Gate); 12] = [
    ("H_circ", Gate::H),
    ("QNot_circ", Gate::QNot),
    ("ZGate_circ", Gate::ZGate),
    ("TGate_circ", Gate::TGate),
    ("TGateInv_circ", Gate::TGateInv),
    ("CNot_circ", Gate::CNot),
    ("C_X_circ", Gate::CX),
    ("C_Z_circ", Gate::CZ),
    ("Meas_circ", Gate::Meas),
    ("Init0_circ", Gate::Init0),
    ("Init1_circ", Gate::Init1),
    ("Discard_circ", Gate::Discard),
];

impl BoxedCircuit {
    /// The built-in constant of the given name. `CNot_circ` takes its
    /// interface as (target, control), matching the `CNot` wrapper.
    pub fn builtin(name: &str) -> Option<BoxedCircuit> {
        let (_, gate) = BUILTIN_CIRCUITS.iter().find(|(n, _)| *n == name)?;
        if *gate != Gate::CNot {
            return Some(BoxedCircuit::single_gate(*gate));
        }
        let (t, c) = (Label(0), Label(1));
        let inputs = LabelContext::from_wires(vec![(t, WireType::Qubit), (c, WireType::Qubit)]);
        let circuit = Circuit::from_gates(inputs, vec![GateApp::new(Gate::CNot, vec![c, t])]).expect("valid");
        Some(BoxedCircuit::new(tuple(&[t, c]), circuit, tuple(&[t, c])).expect("valid"))
    }
}

/// Right-nested tuple of labels; `()` for none.
pub fn tuple(ls: &[Label]) -> SimpleTerm {
    match ls {
        [] => SimpleTerm::Unit,
        [l] => SimpleTerm::Label(*l),
        [l, rest @ ..] => SimpleTerm::pair(SimpleTerm::Label(*l), tuple(rest)),
    }
}

fn enumerate(a: &SimpleTerm, ctx: &LabelContext) -> Result<LabelContext, CircuitError> {
    let ls = a.labels();
    if ls.len() != ctx.len() || has_repeat(&ls) {
        return Err(CircuitError::InterfaceMismatch(a.clone()));
    }
    let mut out = LabelContext::new();
    for l in ls {
        let w = ctx.get(l).ok_or_else(|| CircuitError::InterfaceMismatch(a.clone()))?;
        out.push(l, w);
    }
    Ok(out)
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, g) in self.gates.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(n: u64) -> Label {
        Label(n)
    }

    fn q(ls: &[u64]) -> LabelContext {
        LabelContext::from_wires(ls.iter().map(|n| (l(*n), WireType::Qubit)).collect())
    }

    #[test]
    fn gen_shapes() {
        let mut s = LabelSupply::new();
        let (a, ctx) = gen(&Type::Qubit, &mut s);
        assert_eq!(a, SimpleTerm::Label(l(0)));
        assert_eq!(ctx, q(&[0]));
        let mut s = LabelSupply::new();
        let (a, ctx) = gen(&Type::tensor(Type::Qubit, Type::Bit), &mut s);
        assert_eq!(a, SimpleTerm::pair(SimpleTerm::Label(l(0)), SimpleTerm::Label(l(1))));
        assert_eq!(ctx, LabelContext::from_wires(vec![(l(0), WireType::Qubit), (l(1), WireType::Bit)]));
        let (a, ctx) = gen(&Type::Unit, &mut LabelSupply::new());
        assert_eq!(a, SimpleTerm::Unit);
        assert!(ctx.is_empty());
    }

    #[test]
    fn identity_circuits() {
        for ctx in [q(&[0]), LabelContext::new(), LabelContext::from_wires(vec![(l(0), WireType::Qubit), (l(1), WireType::Bit)])] {
            let c = Circuit::identity(&ctx);
            assert!(c.gates.is_empty());
            assert_eq!(c.inputs, c.outputs);
            c.validate().unwrap();
        }
    }

    #[test]
    fn append_identity_keeps_gates() {
        let c = Circuit::from_gates(q(&[0]), vec![GateApp::new(Gate::H, vec![l(0)]), GateApp::new(Gate::Meas, vec![l(0)])]).unwrap();
        let a = SimpleTerm::Label(l(0));
        let mut s = LabelSupply::after(c.labels());
        let id = Circuit::identity(&c.outputs);
        let (out, _) = c.append(&id, &a, &a, &mut s).unwrap();
        assert_eq!(out, c);
    }

    #[test]
    fn append_relabels_single_gate() {
        let d = Circuit::from_gates(q(&[9]), vec![GateApp::new(Gate::H, vec![l(9)])]).unwrap();
        let c = Circuit::identity(&q(&[0]));
        let mut s = LabelSupply::new();
        let (out, _) = c.append(&d, &SimpleTerm::Label(l(9)), &SimpleTerm::Label(l(0)), &mut s).unwrap();
        assert_eq!(out.gates, vec![GateApp::new(Gate::H, vec![l(0)])]);
        assert_eq!(out.inputs, q(&[0]));
        assert_eq!(out.outputs, q(&[0]));
    }

    #[test]
    fn append_errors() {
        let d = Circuit::from_gates(q(&[9]), vec![GateApp::new(Gate::H, vec![l(9)])]).unwrap();
        let c = Circuit::identity(&q(&[0]));
        let mut s = LabelSupply::new();
        let pair = SimpleTerm::pair(SimpleTerm::Label(l(0)), SimpleTerm::Unit);
        assert!(matches!(c.append(&d, &SimpleTerm::Label(l(9)), &pair, &mut s), Err(CircuitError::ShapeMismatch(..))));
        assert!(matches!(
            c.append(&d, &SimpleTerm::Label(l(9)), &SimpleTerm::Label(l(5)), &mut s),
            Err(CircuitError::DanglingLabel(_))
        ));
        let bits = Circuit::identity(&LabelContext::from_wires(vec![(l(0), WireType::Bit)]));
        assert!(matches!(
            bits.append(&d, &SimpleTerm::Label(l(9)), &SimpleTerm::Label(l(0)), &mut s),
            Err(CircuitError::WireTypeMismatch { .. })
        ));
    }

    #[test]
    fn produced_wires_are_fresh_after_append() {
        let init = BoxedCircuit::single_gate(Gate::Init0);
        let c = Circuit::identity(&q(&[0]));
        let mut s = LabelSupply::after(c.labels());
        let (c1, m1) = c.append(&init.circuit, &init.input, &SimpleTerm::Unit, &mut s).unwrap();
        let (c2, m2) = c1.append(&init.circuit, &init.input, &SimpleTerm::Unit, &mut s).unwrap();
        let o = init.output.labels()[0];
        assert_ne!(m1[&o], m2[&o]);
        assert_eq!(c2.outputs.len(), 3);
        c2.validate().unwrap();
    }

    #[test]
    fn validate_catches_discipline_violations() {
        let bad = Circuit { inputs: q(&[0]), gates: vec![GateApp::new(Gate::H, vec![l(1)])], outputs: q(&[0]) };
        assert!(matches!(bad.validate(), Err(CircuitError::DanglingLabel(_))));
        let bad = Circuit { inputs: q(&[0]), gates: vec![GateApp::new(Gate::Discard, vec![l(0)])], outputs: LabelContext::new() };
        assert!(matches!(bad.validate(), Err(CircuitError::WireTypeMismatch { .. })));
        let bad = Circuit { inputs: q(&[0]), gates: vec![GateApp::init(Gate::Init0, l(0))], outputs: q(&[0]) };
        assert!(matches!(bad.validate(), Err(CircuitError::DuplicateLabel(_))));
        let bad = Circuit { inputs: q(&[0]), gates: vec![], outputs: LabelContext::new() };
        assert!(matches!(bad.validate(), Err(CircuitError::OutputMismatch { .. })));
        let bad = Circuit { inputs: q(&[0, 1]), gates: vec![GateApp::new(Gate::CNot, vec![l(0), l(0)])], outputs: q(&[0, 1]) };
        assert!(matches!(bad.validate(), Err(CircuitError::DuplicateLabel(_))));
    }

    #[test]
    fn canonical_equivalence() {
        let a = Circuit::from_gates(q(&[7]), vec![GateApp::new(Gate::H, vec![l(7)]), GateApp::init(Gate::Init0, l(3))]).unwrap();
        let b = Circuit::from_gates(q(&[1]), vec![GateApp::new(Gate::H, vec![l(1)]), GateApp::init(Gate::Init0, l(40))]).unwrap();
        assert!(a.equivalent(&b));
        let c = Circuit::from_gates(q(&[1]), vec![GateApp::new(Gate::QNot, vec![l(1)]), GateApp::init(Gate::Init0, l(40))]).unwrap();
        assert!(!a.equivalent(&c));
    }

    #[test]
    fn single_gate_constants() {
        for g in Gate::ALL {
            let b = BoxedCircuit::single_gate(g);
            assert_eq!(b.circuit.gates.len(), 1);
            let sig = g.signature();
            let (s, u) = b.types();
            let count = |t: &Type| t.to_string().matches("Qubit").count() + t.to_string().matches("Bit").count();
            assert_eq!(count(&s), sig.inputs.len());
            assert_eq!(count(&u), sig.outputs.len());
        }
        let (s, u) = BoxedCircuit::single_gate(Gate::Meas).types();
        assert_eq!((s, u), (Type::Qubit, Type::Bit));
    }

    #[test]
    fn boxed_circuit_interface_must_enumerate_wires() {
        let c = Circuit::identity(&q(&[0, 1]));
        let a = SimpleTerm::Label(l(0));
        assert!(BoxedCircuit::new(a, c.clone(), tuple(&[l(0), l(1)])).is_err());
        let b = BoxedCircuit::new(tuple(&[l(1), l(0)]), c, tuple(&[l(0), l(1)])).unwrap();
        assert_eq!(b.circuit.inputs.labels().collect::<Vec<_>>(), vec![l(1), l(0)]);
    }
}
