#![no_main]

use libfuzzer_sys::fuzz_target;
use mms_core::counting::Restriction;

fuzz_target!(|data: &str| {
    let specs: Vec<&str> = data.split('\n').collect();
    if let Ok(r) = Restriction::parse_all(&specs) {
        // compiling against a small ground set may reject indices, never panic
        if let Ok(compiled) = r.compile(16) {
            let _ = compiled.accepts(0b1011);
        }
    }
});
