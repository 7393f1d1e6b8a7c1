#![no_main]

use libfuzzer_sys::fuzz_target;
use suffkit::alloc::{Bounds, ProfileSpace};
use suffkit::relations::load_explicit_relation;
use suffkit::space::load_builtin;

// Explicit-relation files carry either a level chain over profiles or a
// full boolean table; loading must reject malformed input without panics
// (unknown profiles, wrong arity, duplicate levels, missing cells).
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let space = load_builtin("B2").unwrap();
    let ps = ProfileSpace::new(space.len(), 2, &Bounds::default()).unwrap();
    let _ = load_explicit_relation(text, &space, &ps);

    let c3 = load_builtin("C3").unwrap();
    let ps3 = ProfileSpace::new(c3.len(), 3, &Bounds::default()).unwrap();
    let _ = load_explicit_relation(text, &c3, &ps3);
});
