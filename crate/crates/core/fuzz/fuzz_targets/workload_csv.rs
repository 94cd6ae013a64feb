#![no_main]
use libfuzzer_sys::fuzz_target;
use wtsim::workload::parse_workload_csv;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = parse_workload_csv(text) {
            let csv = spec.to_csv().expect("csv output");
            assert_eq!(spec, parse_workload_csv(&csv).expect("own output parses"));
        }
    }
});
