#![no_main]

use libfuzzer_sys::fuzz_target;
use sumset_core::rigbounds::{interval_to_csv, parse_interval_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(v) = parse_interval_csv(text) {
        v.validate().expect("parsed intervals are valid");
        assert_eq!(
            parse_interval_csv(&interval_to_csv(&v)).expect("round trip"),
            v
        );
    }
});
