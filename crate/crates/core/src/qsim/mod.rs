//! Quantum states as convex combinations of branches. Each branch pairs a
//! classical assignment of the bit wires with a state vector over the qubit
//! wires; measurement is the only operation that splits branches.

mod dist;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{connect, Circuit, CircuitError, Gate, GateApp, LabelSupply};
use crate::syntax::{Label, LabelContext, SimpleTerm, WireType};

pub use dist::Distribution;

/// Outcomes whose relative mass falls below this are dropped by
/// measurement.
pub const MEAS_EPS: f64 = 1e-12;

/// Amplitude tolerance for branch equivalence.
pub const AMP_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SimError {
    #[error("wire {0} is not in the state's address")]
    WireNotFound(Label),
    #[error("wire {label} has type {found}, expected {expected}")]
    WireTypeMismatch { label: Label, expected: WireType, found: WireType },
    #[error("wire {0} is not a bit")]
    NotABit(Label),
    #[error("states have incompatible addresses")]
    AddressMismatch,
    #[error(transparent)]
    Circuit(CircuitError),
}

impl From<CircuitError> for SimError {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::DanglingLabel(l) => SimError::WireNotFound(l),
            CircuitError::WireTypeMismatch { label, expected, found } => {
                SimError::WireTypeMismatch { label, expected, found }
            }
            other => SimError::Circuit(other),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub prob: f64,
    pub bits: BTreeMap<Label, bool>,
    /// Amplitude of basis state `i`; qubit `k` of the state's qubit list is
    /// bit `k` of `i`.
    pub amps: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    addr: LabelContext,
    qubits: Vec<Label>,
    branches: Vec<Branch>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl QuantumState {
    /// All qubits |0⟩ and all bits 0; for the empty context this is the
    /// scalar state.
    pub fn init(sigma: &LabelContext) -> QuantumState {
        let mut qubits = Vec::new();
        let mut bits = BTreeMap::new();
        for (l, w) in sigma.wires() {
            match w {
                WireType::Qubit => qubits.push(*l),
                WireType::Bit => {
                    bits.insert(*l, false);
                }
            }
        }
        let mut amps = vec![c(0.0, 0.0); 1 << qubits.len()];
        amps[0] = c(1.0, 0.0);
        QuantumState { addr: sigma.clone(), qubits, branches: vec![Branch { prob: 1.0, bits, amps }] }
    }

    /// A single-branch state over the given qubits with the given amplitudes
    /// (normalized here).
    pub fn pure(qubits: &[Label], amps: Vec<Complex64>) -> QuantumState {
        assert_eq!(amps.len(), 1 << qubits.len(), "amplitude vector length");
        let addr = LabelContext::from_wires(qubits.iter().map(|l| (*l, WireType::Qubit)).collect());
        let mut b = Branch { prob: 1.0, bits: BTreeMap::new(), amps };
        normalize(&mut b.amps);
        QuantumState { addr, qubits: qubits.to_vec(), branches: vec![b] }
    }

    pub fn from_parts(addr: LabelContext, qubits: Vec<Label>, branches: Vec<Branch>) -> QuantumState {
        QuantumState { addr, qubits, branches }
    }

    pub fn addr(&self) -> &LabelContext {
        &self.addr
    }

    pub fn qubits(&self) -> &[Label] {
        &self.qubits
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn total_prob(&self) -> f64 {
        self.branches.iter().map(|b| b.prob).sum()
    }

    fn qubit_index(&self, l: Label) -> Result<usize, SimError> {
        self.qubits.iter().position(|m| *m == l).ok_or(SimError::WireNotFound(l))
    }

    /// Applies one gate; wire bookkeeping follows the gate signature.
    pub fn apply(&self, g: &GateApp) -> Result<QuantumState, SimError> {
        let mut addr = self.addr.clone();
        g.step(&mut addr)?;
        let mut out = QuantumState { addr, qubits: self.qubits.clone(), branches: self.branches.clone() };
        let w = &g.wires;
        match g.gate {
            Gate::H => {
                let s = FRAC_1_SQRT_2;
                out.single(w[0], [[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]], |_| true)?
            }
            Gate::QNot => out.single(w[0], X, |_| true)?,
            Gate::ZGate => out.single(w[0], Z, |_| true)?,
            Gate::TGate => out.single(w[0], phase(std::f64::consts::FRAC_PI_4), |_| true)?,
            Gate::TGateInv => out.single(w[0], phase(-std::f64::consts::FRAC_PI_4), |_| true)?,
            Gate::CNot => {
                let ctl = 1usize << out.qubit_index(w[0])?;
                let tgt = 1usize << out.qubit_index(w[1])?;
                for b in &mut out.branches {
                    for i in 0..b.amps.len() {
                        if i & ctl != 0 && i & tgt == 0 {
                            b.amps.swap(i, i | tgt);
                        }
                    }
                }
            }
            Gate::CX => out.single(w[0], X, |b| b.bits[&w[1]])?,
            Gate::CZ => out.single(w[0], Z, |b| b.bits[&w[1]])?,
            Gate::Meas => out.measure(w[0])?,
            Gate::Init0 | Gate::Init1 => {
                let one = g.gate == Gate::Init1;
                let n = out.qubits.len();
                out.qubits.push(g.produced[0]);
                for b in &mut out.branches {
                    let zeros = vec![c(0.0, 0.0); 1 << n];
                    if one {
                        let old = std::mem::replace(&mut b.amps, zeros);
                        b.amps.extend(old);
                    } else {
                        b.amps.extend(zeros);
                    }
                }
            }
            Gate::Discard => {
                for b in &mut out.branches {
                    b.bits.remove(&w[0]);
                }
                out = out.merged();
            }
        }
        Ok(out)
    }

    fn single(&mut self, l: Label, u: [[Complex64; 2]; 2], when: impl Fn(&Branch) -> bool) -> Result<(), SimError> {
        let k = 1usize << self.qubit_index(l)?;
        for b in &mut self.branches {
            if !when(b) {
                continue;
            }
            for i in 0..b.amps.len() {
                if i & k == 0 {
                    let (x, y) = (b.amps[i], b.amps[i | k]);
                    b.amps[i] = u[0][0] * x + u[0][1] * y;
                    b.amps[i | k] = u[1][0] * x + u[1][1] * y;
                }
            }
        }
        Ok(())
    }

    fn measure(&mut self, l: Label) -> Result<(), SimError> {
        let k = self.qubit_index(l)?;
        self.qubits.remove(k);
        let mut branches = Vec::with_capacity(self.branches.len() * 2);
        for b in &self.branches {
            let mut parts = Vec::with_capacity(2);
            for outcome in [false, true] {
                let amps = project(&b.amps, k, outcome);
                let mass: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
                parts.push((outcome, mass, amps));
            }
            let total: f64 = parts.iter().map(|p| p.1).sum();
            let kept: Vec<_> = parts.into_iter().filter(|p| p.1 / total >= MEAS_EPS).collect();
            let kept_mass: f64 = kept.iter().map(|p| p.1).sum();
            for (outcome, mass, mut amps) in kept {
                normalize(&mut amps);
                let mut bits = b.bits.clone();
                bits.insert(l, outcome);
                branches.push(Branch { prob: b.prob * mass / kept_mass, bits, amps });
            }
        }
        self.branches = branches;
        Ok(())
    }

    /// Splits on the value of bit `l`: `p₁(Q₁, False) + p₂(Q₂, True)`, with
    /// `l` removed from each `Qᵢ`. Zero-mass outcomes are omitted.
    pub fn read(&self, l: Label) -> Result<Vec<(f64, QuantumState, bool)>, SimError> {
        match self.addr.get(l) {
            None => return Err(SimError::WireNotFound(l)),
            Some(WireType::Qubit) => return Err(SimError::NotABit(l)),
            Some(WireType::Bit) => {}
        }
        let mut addr = self.addr.clone();
        addr.remove(l);
        let mut out = Vec::with_capacity(2);
        for value in [false, true] {
            let mut branches: Vec<Branch> = self.branches.iter().filter(|b| b.bits[&l] == value).cloned().collect();
            let p: f64 = branches.iter().map(|b| b.prob).sum();
            if p <= 0.0 {
                continue;
            }
            for b in &mut branches {
                b.prob /= p;
                b.bits.remove(&l);
            }
            let q = QuantumState { addr: addr.clone(), qubits: self.qubits.clone(), branches };
            out.push((p, q.merged(), value));
        }
        Ok(out)
    }

    /// Runs circuit `c` on this state, wiring `vprime` (over c's inputs) to
    /// `v` (over the state's address). Returns the new state and the label
    /// renaming applied to `c`.
    pub fn operate(
        &self,
        c: &Circuit,
        vprime: &SimpleTerm,
        v: &SimpleTerm,
        supply: &mut LabelSupply,
    ) -> Result<(QuantumState, HashMap<Label, Label>), SimError> {
        let (gates, map) = connect(c, vprime, v, &self.addr, supply)?;
        let mut q = self.clone();
        for g in &gates {
            q = q.apply(g)?;
        }
        Ok((q, map))
    }

    /// Coalesces branches with equal bits whose amplitudes agree up to
    /// global phase.
    pub fn merged(&self) -> QuantumState {
        let mut out: Vec<Branch> = Vec::with_capacity(self.branches.len());
        for b in &self.branches {
            match out.iter_mut().find(|o| o.bits == b.bits && phase_distance(&o.amps, &b.amps) <= AMP_TOL) {
                Some(o) => o.prob += b.prob,
                None => out.push(b.clone()),
            }
        }
        QuantumState { addr: self.addr.clone(), qubits: self.qubits.clone(), branches: out }
    }

    /// Relabels wires; labels outside `map` are kept.
    pub fn rename(&self, map: &HashMap<Label, Label>) -> QuantumState {
        let f = |l: &Label| map.get(l).copied().unwrap_or(*l);
        QuantumState {
            addr: LabelContext::from_wires(self.addr.wires().iter().map(|(l, w)| (f(l), *w)).collect()),
            qubits: self.qubits.iter().map(f).collect(),
            branches: self
                .branches
                .iter()
                .map(|b| Branch { prob: b.prob, bits: b.bits.iter().map(|(l, v)| (f(l), *v)).collect(), amps: b.amps.clone() })
                .collect(),
        }
    }

    /// Permutes the amplitude vectors so that qubits appear in `order`.
    pub fn reorder_qubits(&self, order: &[Label]) -> Result<QuantumState, SimError> {
        if order.len() != self.qubits.len() {
            return Err(SimError::AddressMismatch);
        }
        let pos: Vec<usize> = order
            .iter()
            .map(|l| self.qubits.iter().position(|m| m == l).ok_or(SimError::AddressMismatch))
            .collect::<Result<_, _>>()?;
        let branches = self
            .branches
            .iter()
            .map(|b| {
                let mut amps = vec![c(0.0, 0.0); b.amps.len()];
                for (j, a) in amps.iter_mut().enumerate() {
                    let mut i = 0;
                    for (new_k, old_k) in pos.iter().enumerate() {
                        if j >> new_k & 1 == 1 {
                            i |= 1 << old_k;
                        }
                    }
                    *a = b.amps[i];
                }
                Branch { prob: b.prob, bits: b.bits.clone(), amps }
            })
            .collect();
        Ok(QuantumState { addr: self.addr.clone(), qubits: order.to_vec(), branches })
    }

    /// Sorted qubit order, merged branches with a fixed global phase, in a
    /// deterministic branch order.
    pub fn canonical(&self) -> QuantumState {
        let mut order = self.qubits.clone();
        order.sort();
        let mut q = self.reorder_qubits(&order).expect("permutation of own qubits").merged();
        for b in &mut q.branches {
            fix_phase(&mut b.amps);
        }
        q.branches.sort_by(branch_order);
        let mut wires = q.addr.wires().to_vec();
        wires.sort();
        q.addr = LabelContext::from_wires(wires);
        q
    }

    /// Same labels, same branches up to global phase per branch.
    pub fn equivalent(&self, other: &QuantumState) -> bool {
        self.addr.same_set(&other.addr)
            && state_distance_aligned(&self.canonical(), &other.canonical()).is_some_and(|d| d <= AMP_TOL)
    }

    /// One line per branch: `p=<prob> bits={ℓ:v,…} amps=[re+imi,…]`.
    pub fn dump(&self) -> String {
        let q = self.canonical();
        let mut out = String::new();
        for b in &q.branches {
            let bits: Vec<String> = b.bits.iter().map(|(l, v)| format!("{l}:{}", u8::from(*v))).collect();
            let amps: Vec<String> = b.amps.iter().map(|a| fmt_complex(*a)).collect();
            let _ = writeln!(out, "p={} bits={{{}}} amps=[{}]", fmt6(b.prob), bits.join(","), amps.join(","));
        }
        out
    }
}

pub fn init_state(sigma: &LabelContext) -> QuantumState {
    QuantumState::init(sigma)
}

pub fn apply_gate(q: &QuantumState, gate: Gate, wires: &[Label], produced: &[Label]) -> Result<QuantumState, SimError> {
    q.apply(&GateApp { gate, wires: wires.to_vec(), produced: produced.to_vec() })
}

pub fn read(q: &QuantumState, l: Label) -> Result<Vec<(f64, QuantumState, bool)>, SimError> {
    q.read(l)
}

pub fn operate(
    c: &Circuit,
    q: &QuantumState,
    vprime: &SimpleTerm,
    v: &SimpleTerm,
    supply: &mut LabelSupply,
) -> Result<QuantumState, SimError> {
    q.operate(c, vprime, v, supply).map(|r| r.0)
}

/// Distance between states whose addresses agree up to the positional
/// bijection: the largest over matched branches of
/// `|p₁ − p₂| + min_θ ‖a₁ − e^{iθ}a₂‖`. Infinite when the branch structures
/// differ.
pub fn state_distance(q1: &QuantumState, q2: &QuantumState) -> Result<f64, SimError> {
    if q1.addr.len() != q2.addr.len() {
        return Err(SimError::AddressMismatch);
    }
    let mut map = HashMap::new();
    for ((l1, w1), (l2, w2)) in q1.addr.wires().iter().zip(q2.addr.wires()) {
        if w1 != w2 {
            return Err(SimError::AddressMismatch);
        }
        map.insert(*l2, *l1);
    }
    let a = q1.canonical();
    let b = q2.rename(&map).canonical();
    Ok(state_distance_aligned(&a, &b).unwrap_or(f64::INFINITY))
}

fn state_distance_aligned(a: &QuantumState, b: &QuantumState) -> Option<f64> {
    if a.qubits != b.qubits || a.branches.len() != b.branches.len() {
        return None;
    }
    let mut worst: f64 = 0.0;
    for (x, y) in a.branches.iter().zip(&b.branches) {
        if x.bits != y.bits {
            return None;
        }
        worst = worst.max((x.prob - y.prob).abs() + phase_distance(&x.amps, &y.amps));
    }
    Some(worst)
}

/// `min_θ ‖a − e^{iθ} b‖₂`
pub fn phase_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    // The optimal phase aligns b with a; the norm is then summed directly,
    // since `|a|² + |b|² − 2|⟨b,a⟩|` cancels catastrophically near zero.
    let inner: Complex64 = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    let rot = if inner.norm() > 0.0 { inner / inner.norm() } else { Complex64::new(1.0, 0.0) };
    a.iter().zip(b).map(|(x, y)| (x - rot * y).norm_sqr()).sum::<f64>().sqrt()
}

const X: [[Complex64; 2]; 2] = [[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]];
const Z: [[Complex64; 2]; 2] = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)]];

fn phase(theta: f64) -> [[Complex64; 2]; 2] {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, theta)]]
}

/// Amplitudes of the basis states with qubit `k` equal to `outcome`, with
/// that qubit removed from the index.
fn project(amps: &[Complex64], k: usize, outcome: bool) -> Vec<Complex64> {
    let low = (1usize << k) - 1;
    (0..amps.len() / 2)
        .map(|j| {
            let i = (j & low) | ((j & !low) << 1) | (usize::from(outcome) << k);
            amps[i]
        })
        .collect()
}

fn normalize(amps: &mut [Complex64]) {
    let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for a in amps {
            *a /= n;
        }
    }
}

/// Rotates the global phase so the first significant amplitude is real and
/// positive.
fn fix_phase(amps: &mut [Complex64]) {
    if let Some(a) = amps.iter().find(|a| a.norm() > 1e-6).copied() {
        let r = a.conj() / a.norm();
        for x in amps {
            *x *= r;
        }
    }
}

fn branch_order(x: &Branch, y: &Branch) -> Ordering {
    x.bits.iter().map(|(l, v)| (*l, *v)).cmp(y.bits.iter().map(|(l, v)| (*l, *v))).then_with(|| {
        for (a, b) in x.amps.iter().zip(&y.amps) {
            for (s, t) in [(a.re, b.re), (a.im, b.im)] {
                if (s - t).abs() > 1e-6 {
                    return s.total_cmp(&t);
                }
            }
        }
        Ordering::Equal
    })
}

fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn fmt_complex(a: Complex64) -> String {
    let re = fmt6(a.re);
    let im = fmt6(a.im);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(n: u64) -> Label {
        Label(n)
    }

    fn ket(a: f64, b: f64) -> Vec<Complex64> {
        vec![c(a, 0.0), c(b, 0.0)]
    }

    #[test]
    fn init_states() {
        let q = init_state(&LabelContext::new());
        assert_eq!(q.branches().len(), 1);
        assert_eq!(q.branches()[0].amps, vec![c(1.0, 0.0)]);
        let q = init_state(&LabelContext::from_wires(vec![(l(0), WireType::Qubit)]));
        assert_eq!(q.branches()[0].amps, ket(1.0, 0.0));
        let q = init_state(&LabelContext::from_wires(vec![(l(0), WireType::Bit)]));
        assert_eq!(q.branches()[0].bits.get(&l(0)), Some(&false));
    }

    #[test]
    fn h_then_meas_splits_evenly() {
        let q = QuantumState::pure(&[l(0)], ket(1.0, 0.0));
        let q = apply_gate(&q, Gate::H, &[l(0)], &[]).unwrap();
        let q = apply_gate(&q, Gate::Meas, &[l(0)], &[]).unwrap();
        assert_eq!(q.branches().len(), 2);
        for b in q.branches() {
            assert!((b.prob - 0.5).abs() < 1e-12);
        }
        let r = q.read(l(0)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(!r[0].2 && r[1].2);
        assert!((r[0].0 - 0.5).abs() < 1e-12);
        assert!(r[0].1.addr().is_empty());
    }

    #[test]
    fn meas_of_eigenstate_has_one_branch() {
        let q = QuantumState::pure(&[l(0)], ket(1.0, 0.0));
        let q = apply_gate(&q, Gate::Meas, &[l(0)], &[]).unwrap();
        assert_eq!(q.branches().len(), 1);
        assert_eq!(q.branches()[0].bits[&l(0)], false);
        assert_eq!(q.addr().get(l(0)), Some(WireType::Bit));
        let r = q.read(l(0)).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].0, 1.0);
    }

    #[test]
    fn cnot_control_first() {
        // |10⟩ with the control (ℓ0) set.
        let mut amps = vec![c(0.0, 0.0); 4];
        amps[0b01] = c(1.0, 0.0);
        let q = QuantumState::pure(&[l(0), l(1)], amps);
        let q = apply_gate(&q, Gate::CNot, &[l(0), l(1)], &[]).unwrap();
        assert_eq!(q.branches()[0].amps[0b11], c(1.0, 0.0));
    }

    #[test]
    fn read_partitions_mixed_bits() {
        let addr = LabelContext::from_wires(vec![(l(0), WireType::Bit)]);
        let mk = |p, v| Branch { prob: p, bits: [(l(0), v)].into_iter().collect(), amps: vec![c(1.0, 0.0)] };
        let q = QuantumState::from_parts(addr, vec![], vec![mk(0.25, false), mk(0.75, true)]);
        let r = q.read(l(0)).unwrap();
        assert_eq!((r[0].0, r[0].2), (0.25, false));
        assert_eq!((r[1].0, r[1].2), (0.75, true));
    }

    #[test]
    fn read_errors() {
        let q = QuantumState::pure(&[l(0)], ket(1.0, 0.0));
        assert_eq!(q.read(l(0)).unwrap_err(), SimError::NotABit(l(0)));
        assert_eq!(q.read(l(3)).unwrap_err(), SimError::WireNotFound(l(3)));
    }

    #[test]
    fn distances() {
        let zero = QuantumState::pure(&[l(0)], ket(1.0, 0.0));
        let one = QuantumState::pure(&[l(5)], ket(0.0, 1.0));
        assert_eq!(state_distance(&zero, &zero).unwrap(), 0.0);
        let rotated = QuantumState::pure(&[l(0)], vec![Complex64::from_polar(1.0, 0.7), c(0.0, 0.0)]);
        assert!(state_distance(&zero, &rotated).unwrap() < 1e-12);
        assert!((state_distance(&zero, &one).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(state_distance(&zero, &init_state(&LabelContext::new())), Err(SimError::AddressMismatch));
    }

    #[test]
    fn init_and_discard_update_address() {
        let q = init_state(&LabelContext::new());
        let q = apply_gate(&q, Gate::Init1, &[], &[l(2)]).unwrap();
        assert_eq!(q.branches()[0].amps, ket(0.0, 1.0));
        let q = apply_gate(&q, Gate::Meas, &[l(2)], &[]).unwrap();
        assert_eq!(q.branches()[0].bits[&l(2)], true);
        let q = apply_gate(&q, Gate::Discard, &[l(2)], &[]).unwrap();
        assert!(q.addr().is_empty());
        assert_eq!(q.branches().len(), 1);
    }

    #[test]
    fn bit_controlled_gates() {
        let q = init_state(&LabelContext::new());
        let q = apply_gate(&q, Gate::Init1, &[], &[l(0)]).unwrap();
        let q = apply_gate(&q, Gate::Meas, &[l(0)], &[]).unwrap();
        let q = apply_gate(&q, Gate::Init0, &[], &[l(1)]).unwrap();
        let q = apply_gate(&q, Gate::CX, &[l(1), l(0)], &[]).unwrap();
        let target = QuantumState::pure(&[l(1)], ket(0.0, 1.0));
        let r = q.read(l(0)).unwrap();
        assert!(state_distance(&r[0].1, &target).unwrap() < 1e-12);
        assert!(apply_gate(&q, Gate::CZ, &[l(0), l(1)], &[]).is_err());
    }

    #[test]
    fn measure_middle_qubit() {
        // (|000⟩ + |010⟩)/√2 on (ℓ0, ℓ1, ℓ2); measuring ℓ1 leaves |00⟩ on (ℓ0, ℓ2).
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0] = c(1.0, 0.0);
        amps[0b010] = c(1.0, 0.0);
        let q = QuantumState::pure(&[l(0), l(1), l(2)], amps);
        let q = apply_gate(&q, Gate::Meas, &[l(1)], &[]).unwrap();
        assert_eq!(q.qubits(), &[l(0), l(2)]);
        for b in q.branches() {
            assert!((b.amps[0].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn dump_format() {
        let q = QuantumState::pure(&[l(0)], vec![c(0.0, -0.0), c(-1.0, 0.0)]);
        assert_eq!(q.dump(), "p=1.000000 bits={} amps=[0.000000+0.000000i,1.000000+0.000000i]\n");
    }
}
