#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = igprm::persist::parse_result(text) {
        let again = igprm::persist::parse_result(&r.to_json()).expect("written result parses");
        assert_eq!(again, r);
    }
});
