#![no_main]

use libfuzzer_sys::fuzz_target;

// Parse only: running arbitrary commands could enumerate for hours.
fuzz_target!(|data: &str| {
    let argv = std::iter::once("mms").chain(data.split_whitespace());
    let _ = mms_cli::check_args(argv);
});
