use std::fmt;

use crate::syntax::WireType;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gate {
    H,
    QNot,
    ZGate,
    TGate,
    TGateInv,
    /// Wires are (control, target).
    CNot,
    /// Bit-controlled X; wires are (qubit, control bit).
    CX,
    /// Bit-controlled Z; wires are (qubit, control bit).
    CZ,
    Meas,
    Init0,
    Init1,
    Discard,
}

/// Input and output wire types of a gate.
///
/// When `inputs` and `outputs` have equal length the gate acts in place: the
/// i-th wire keeps its label and takes type `outputs[i]`. A gate without
/// inputs produces fresh wires; a gate without outputs consumes its wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateSignature {
    pub name: &'static str,
    pub inputs: Vec<WireType>,
    pub outputs: Vec<WireType>,
}

impl GateSignature {
    pub fn in_place(&self) -> bool {
        self.inputs.len() == self.outputs.len()
    }

    /// Number of freshly produced wires.
    pub fn produces(&self) -> usize {
        if self.in_place() {
            0
        } else {
            self.outputs.len()
        }
    }
}

impl Gate {
    pub const ALL: [Gate; 12] = [
        Gate::H,
        Gate::QNot,
        Gate::ZGate,
        Gate::TGate,
        Gate::TGateInv,
        Gate::CNot,
        Gate::CX,
        Gate::CZ,
        Gate::Meas,
        Gate::Init0,
        Gate::Init1,
        Gate::Discard,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Gate::H => "H",
            Gate::QNot => "QNot",
            Gate::ZGate => "ZGate",
            Gate::TGate => "TGate",
            Gate::TGateInv => "TGateInv",
            Gate::CNot => "CNot",
            Gate::CX => "C_X",
            Gate::CZ => "C_Z",
            Gate::Meas => "Meas",
            Gate::Init0 => "Init0",
            Gate::Init1 => "Init1",
            Gate::Discard => "Discard",
        }
    }

    pub fn from_name(name: &str) -> Option<Gate> {
        Gate::ALL.into_iter().find(|g| g.name() == name)
    }

    pub fn signature(self) -> GateSignature {
        use WireType::*;
        let (inputs, outputs) = match self {
            Gate::H | Gate::QNot | Gate::ZGate | Gate::TGate | Gate::TGateInv => (vec![Qubit], vec![Qubit]),
            Gate::CNot => (vec![Qubit, Qubit], vec![Qubit, Qubit]),
            Gate::CX | Gate::CZ => (vec![Qubit, Bit], vec![Qubit, Bit]),
            Gate::Meas => (vec![Qubit], vec![Bit]),
            Gate::Init0 | Gate::Init1 => (vec![], vec![Qubit]),
            Gate::Discard => (vec![Bit], vec![]),
        };
        GateSignature { name: self.name(), inputs, outputs }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_table() {
        use WireType::*;
        assert_eq!(Gate::Meas.signature().inputs, vec![Qubit]);
        assert_eq!(Gate::Meas.signature().outputs, vec![Bit]);
        assert_eq!(Gate::Init0.signature().produces(), 1);
        assert!(Gate::Discard.signature().outputs.is_empty());
        assert_eq!(Gate::CX.signature().inputs, vec![Qubit, Bit]);
        for g in [Gate::H, Gate::QNot, Gate::ZGate, Gate::TGate, Gate::TGateInv, Gate::CNot] {
            let s = g.signature();
            assert_eq!(s.inputs, s.outputs);
            assert!(s.inputs.iter().all(|w| *w == Qubit));
        }
    }

    #[test]
    fn names_round_trip() {
        for g in Gate::ALL {
            assert_eq!(Gate::from_name(g.name()), Some(g));
        }
        assert_eq!(Gate::from_name("undefined_gate"), None);
    }
}
