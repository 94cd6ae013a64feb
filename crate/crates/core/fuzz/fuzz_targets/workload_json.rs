#![no_main]
use libfuzzer_sys::fuzz_target;
use wtsim::workload::parse_workload_json;

// Anything that parses must serialize and parse back to the same workload.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = parse_workload_json(text) {
            let again = parse_workload_json(&spec.to_json().to_string()).expect("own output parses");
            assert_eq!(spec, again);
            let _ = spec.deadlines();
        }
    }
});
