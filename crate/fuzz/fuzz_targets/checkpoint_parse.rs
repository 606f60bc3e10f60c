#![no_main]

use libfuzzer_sys::fuzz_target;
use sumset_core::rigbounds::{checkpoint_to_string, parse_checkpoint, parse_ranges};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(acc) = parse_checkpoint(text) {
        acc.validate().expect("parsed checkpoints are valid");
        let again = parse_checkpoint(&checkpoint_to_string(&acc)).expect("round trip");
        assert_eq!(again, acc);
    }
    if let Some(line) = text.lines().next() {
        if let Ok(ids) = parse_ranges(line, 1 << 20) {
            assert!(ids.iter().all(|&s| s < 1 << 20));
        }
    }
});
