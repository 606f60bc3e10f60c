#![no_main]

use libfuzzer_sys::fuzz_target;
use sumset_core::condgraph::{parse_config_list, MAX_CONFIG_OFFSET};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = parse_config_list(text) {
        assert!(!config.is_empty());
        assert!(config.windows(2).all(|w| w[0] < w[1]));
        assert!(config.iter().all(|&a| a <= MAX_CONFIG_OFFSET));
    }
});
