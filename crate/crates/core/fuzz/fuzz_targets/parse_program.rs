#![no_main]

use libfuzzer_sys::fuzz_target;
use pqdyn::parser::{parse_program, pretty};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_program(text) {
        // Printed programs must parse again.
        let printed = pretty(&p);
        parse_program(&printed).expect("printed program parses");
    }
});
