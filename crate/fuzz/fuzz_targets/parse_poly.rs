#![no_main]

use gitstab_core::parse_poly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for n in [1, 2, 3] {
        if let Ok(f) = parse_poly(text, n) {
            // the printed form must parse back to the same polynomial
            let again = parse_poly(&f.to_string(), n).expect("printed polynomial reparses");
            assert_eq!(f, again);
        }
    }
});
