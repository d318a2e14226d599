#![no_main]

use gitstab_cli::commands::parse_certificate_json;
use gitstab_core::hilbert_mumford::verify_certificate;
use gitstab_core::parse_poly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cert) = parse_certificate_json(text) else { return };
    let f = parse_poly("x0^2*x2 + x1^3", 2).unwrap();
    // malformed certificates must be rejected with an error, never a panic
    let _ = verify_certificate(&f, &cert);
});
