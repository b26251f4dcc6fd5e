#![no_main]

use libfuzzer_sys::fuzz_target;
use pqdyn::parser::{parse_term, pretty_term};
use pqdyn::syntax::alpha_eq;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_term(text) {
        let again = parse_term(&pretty_term(&t)).expect("printed term parses");
        assert!(alpha_eq(&t, &again));
    }
});
