#![no_main]

use libfuzzer_sys::fuzz_target;
use mms_core::weights::{load_weights, weight_document};
use mms_core::Rational;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = load_weights(text) {
        let v = x.values();
        assert!(v.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(v.iter().sum::<Rational>(), Rational::from_integer(0.into()));
        let again = load_weights(&weight_document(&x).to_string()).expect("a written weight file loads");
        assert_eq!(again.values(), x.values());
    }
});
