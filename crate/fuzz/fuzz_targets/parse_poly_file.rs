#![no_main]

use gitstab_core::parse_poly_file;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_poly_file(text, None) {
        let again = parse_poly_file(&f.to_string(), Some(f.n())).expect("printed polynomial reparses");
        assert_eq!(f, again);
    }
});
