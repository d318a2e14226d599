#![no_main]

use gitstab_core::hilbert_mumford::{torus_destabilize, TorusDecision};
use gitstab_core::parse_poly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(decision) = serde_json::from_str::<TorusDecision>(text) else { return };
    let f = parse_poly("x0^2*x2 + x1^3", 2).unwrap();
    if decision.verify(&f).is_ok() {
        // an accepted decision must match the solver
        let solved = torus_destabilize(&f, decision.strict).unwrap();
        assert_eq!(decision.feasible, solved.feasible);
    }
});
