#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(roadmap) = igprm::persist::parse_roadmap(text, None) {
        // anything that loads must survive a search and a write
        let _ = igprm::planner::search(&roadmap);
        let mut out = Vec::new();
        igprm::persist::write_roadmap(&roadmap, &mut out).expect("loaded roadmap writes back");
    }
});
