#![no_main]

use libfuzzer_sys::fuzz_target;
use tap_cli::sources::{parse_cnf, write_cnf};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(source) = parse_cnf(text) {
        assert_eq!(parse_cnf(&write_cnf(&source)).unwrap(), source);
    }
});
