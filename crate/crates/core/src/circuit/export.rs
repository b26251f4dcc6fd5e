use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, Gate, GateApp};
use crate::syntax::{Label, LabelContext, WireType};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Text,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitJson {
    inputs: Vec<WireJson>,
    gates: Vec<GateJson>,
    outputs: Vec<WireJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireJson {
    label: u64,
    #[serde(rename = "type")]
    ty: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateJson {
    name: String,
    wires: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    produced: Vec<u64>,
}

fn wires_json(ctx: &LabelContext) -> Vec<WireJson> {
    ctx.wires().iter().map(|(l, w)| WireJson { label: l.0, ty: w.name().to_string() }).collect()
}

/// JSON (`inputs`, `gates`, `outputs` in that order) or text, one gate per
/// line as `NAME(w,…)` with produced wires listed after consumed ones.
pub fn export_circuit(c: &Circuit, format: ExportFormat) -> String {
    match format {
        ExportFormat::Json => {
            let j = CircuitJson {
                inputs: wires_json(&c.inputs),
                gates: c
                    .gates
                    .iter()
                    .map(|g| GateJson {
                        name: g.gate.name().to_string(),
                        wires: g.wires.iter().map(|l| l.0).collect(),
                        produced: g.produced.iter().map(|l| l.0).collect(),
                    })
                    .collect(),
                outputs: wires_json(&c.outputs),
            };
            serde_json::to_string(&j).expect("serializing plain data")
        }
        ExportFormat::Text => {
            let mut out = String::new();
            for g in &c.gates {
                let ws: Vec<String> = g.wires.iter().chain(&g.produced).map(|l| l.0.to_string()).collect();
                out.push_str(&format!("{}({})\n", g.gate.name(), ws.join(",")));
            }
            out
        }
    }
}

fn wire_ctx(ws: Vec<WireJson>) -> Result<LabelContext, CircuitError> {
    let mut pairs = Vec::with_capacity(ws.len());
    for w in ws {
        let ty = match w.ty.as_str() {
            "Qubit" => WireType::Qubit,
            "Bit" => WireType::Bit,
            other => return Err(CircuitError::Malformed(format!("unknown wire type `{other}`"))),
        };
        pairs.push((Label(w.label), ty));
    }
    LabelContext::try_from_wires(pairs).map_err(CircuitError::DuplicateLabel)
}

/// Parses and validates a circuit in the JSON export format.
pub fn import_json(text: &str) -> Result<Circuit, CircuitError> {
    let j: CircuitJson = serde_json::from_str(text).map_err(|e| CircuitError::Malformed(e.to_string()))?;
    let inputs = wire_ctx(j.inputs)?;
    let outputs = wire_ctx(j.outputs)?;
    let mut gates = Vec::with_capacity(j.gates.len());
    for g in j.gates {
        let gate = Gate::from_name(&g.name).ok_or(CircuitError::UnknownGate(g.name))?;
        gates.push(GateApp {
            gate,
            wires: g.wires.into_iter().map(Label).collect(),
            produced: g.produced.into_iter().map(Label).collect(),
        });
    }
    let c = Circuit { inputs, gates, outputs };
    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_circuit_json() {
        let c = Circuit::identity(&LabelContext::new());
        assert_eq!(export_circuit(&c, ExportFormat::Json), r#"{"inputs":[],"gates":[],"outputs":[]}"#);
    }

    #[test]
    fn single_h_json() {
        let ctx = LabelContext::from_wires(vec![(Label(0), WireType::Qubit)]);
        let c = Circuit::from_gates(ctx, vec![GateApp::new(Gate::H, vec![Label(0)])]).unwrap();
        assert_eq!(
            export_circuit(&c, ExportFormat::Json),
            r#"{"inputs":[{"label":0,"type":"Qubit"}],"gates":[{"name":"H","wires":[0]}],"outputs":[{"label":0,"type":"Qubit"}]}"#
        );
        assert_eq!(export_circuit(&c, ExportFormat::Text), "H(0)\n");
    }

    #[test]
    fn round_trip_with_init_and_discard() {
        let ctx = LabelContext::from_wires(vec![(Label(0), WireType::Qubit)]);
        let c = Circuit::from_gates(
            ctx,
            vec![
                GateApp::init(Gate::Init1, Label(4)),
                GateApp::new(Gate::CNot, vec![Label(4), Label(0)]),
                GateApp::new(Gate::Meas, vec![Label(4)]),
                GateApp::new(Gate::Discard, vec![Label(4)]),
            ],
        )
        .unwrap();
        let json = export_circuit(&c, ExportFormat::Json);
        assert!(json.contains(r#"{"name":"Init1","wires":[],"produced":[4]}"#));
        let back = import_json(&json).unwrap();
        assert_eq!(back, c);
        assert_eq!(export_circuit(&c, ExportFormat::Text), "Init1(4)\nCNot(4,0)\nMeas(4)\nDiscard(4)\n");
    }

    #[test]
    fn import_rejects_bad_input() {
        assert!(matches!(import_json("{"), Err(CircuitError::Malformed(_))));
        assert!(matches!(
            import_json(r#"{"inputs":[],"gates":[{"name":"Foo","wires":[]}],"outputs":[]}"#),
            Err(CircuitError::UnknownGate(_))
        ));
        assert!(import_json(r#"{"inputs":[],"gates":[{"name":"H","wires":[0]}],"outputs":[]}"#).is_err());
        assert!(import_json(r#"{"inputs":[{"label":0,"type":"Qutrit"}],"gates":[],"outputs":[]}"#).is_err());
        assert!(import_json(r#"{"inputs":[{"label":0,"type":"Bit"},{"label":0,"type":"Bit"}],"gates":[],"outputs":[]}"#).is_err());
    }
}
