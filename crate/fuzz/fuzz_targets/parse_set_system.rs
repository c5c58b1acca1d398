#![no_main]

use libfuzzer_sys::fuzz_target;
use tap_cli::sources::{parse_set_system, write_set_system};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(source) = parse_set_system(text) {
        assert_eq!(parse_set_system(&write_set_system(&source)).unwrap(), source);
    }
});
