#![no_main]

use libfuzzer_sys::fuzz_target;
use mms_core::report::rational_to_string;
use mms_core::weights::parse_rational;

fuzz_target!(|data: &str| {
    if let Ok(q) = parse_rational(data) {
        // canonical form must parse back to the same value
        let text = rational_to_string(&q);
        assert_eq!(parse_rational(&text).unwrap(), q);
    }
});
