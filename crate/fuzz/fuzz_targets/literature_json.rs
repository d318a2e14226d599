#![no_main]

use gitstab_core::literature::LiteratureTable;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = LiteratureTable::from_json(text) {
        for e in table.entries() {
            assert!(e.status.is_positive());
            assert!(table.lookup(e.n, e.d, &e.class).is_some());
        }
    }
});
