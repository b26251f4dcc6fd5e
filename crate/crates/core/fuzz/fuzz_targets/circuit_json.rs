#![no_main]

use libfuzzer_sys::fuzz_target;
use pqdyn::circuit::{export_circuit, import_json, ExportFormat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = import_json(text) {
        let back = import_json(&export_circuit(&c, ExportFormat::Json)).expect("exported circuit imports");
        assert_eq!(c, back);
    }
});
