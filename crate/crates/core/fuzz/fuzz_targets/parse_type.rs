#![no_main]

use libfuzzer_sys::fuzz_target;
use pqdyn::parser::{parse_type, pretty};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_type(text) {
        let again = parse_type(&pretty(&t)).expect("printed type parses");
        assert_eq!(pretty(&t), pretty(&again));
    }
});
