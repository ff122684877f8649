#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // errors are fine, panics are not
        let _ = igprm::config::parse_config(text);
    }
});
