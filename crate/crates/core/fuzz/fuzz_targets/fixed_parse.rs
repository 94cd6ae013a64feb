#![no_main]
use libfuzzer_sys::fuzz_target;
use wtsim::Fixed;

// Displayed values are canonical: parsing them gives the same number.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(v) = Fixed::parse(text) {
            assert_eq!(Fixed::parse(&v.to_string()), Ok(v));
        }
    }
});
