#![no_main]

use libfuzzer_sys::fuzz_target;
use pqdyn::parser::parse_program;
use pqdyn::prelude::{check_with_prelude, load_prelude};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_program(text) {
        let _ = check_with_prelude(&load_prelude(), &p);
    }
});
