#![no_main]

use libfuzzer_sys::fuzz_target;
use sumset_core::simulate::parse_estimates_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = parse_estimates_csv(text) {
        assert_eq!(t.estimates().len(), t.rows.len());
        assert_eq!(t.half_widths().len(), t.rows.len());
    }
});
