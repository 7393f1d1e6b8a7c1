#![no_main]

use libfuzzer_sys::fuzz_target;
use suffkit::space::{SpaceSpec, ValidatedSpace};

// Space files are untrusted input: parsing and validation must never panic,
// whatever the bytes. Closure, antisymmetry, meet and value checks all run
// on accepted specs.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = SpaceSpec::from_json(text) else {
        return;
    };
    // Validation may reject, but must not panic; keep the ground set small
    // so closure stays cheap.
    if spec.elements.len() <= 24 {
        let _ = ValidatedSpace::load(&spec);
    }
});
