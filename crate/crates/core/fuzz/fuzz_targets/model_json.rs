#![no_main]
use libfuzzer_sys::fuzz_target;
use wtsim::machine::{parse_model, validate_model};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(model) = parse_model(text) {
            let again = parse_model(&model.to_json().to_string()).expect("own output parses");
            assert_eq!(model.to_json(), again.to_json());
            let _ = validate_model(&model, &["f".to_string()]);
        }
    }
});
