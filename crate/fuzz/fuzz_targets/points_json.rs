#![no_main]

use gitstab_cli::analyze::parse_points_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_points_json(text);
});
