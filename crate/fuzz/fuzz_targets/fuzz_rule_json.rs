#![no_main]

use libfuzzer_sys::fuzz_target;
use suffkit::alloc::{Bounds, ProfileSpace};
use suffkit::relations::{RuleSpec, materialize};
use suffkit::space::load_builtin;

// Rule JSON resolves symbolic element references against a space and then
// materializes into a comparison table; none of it may panic on hostile
// input. Two fixed fixtures cover the numeric-chain rules (B2) and the
// three-element, three-agent rule (C3).
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = RuleSpec::from_json(text) else {
        return;
    };
    let b2 = load_builtin("B2").unwrap();
    let c3 = load_builtin("C3").unwrap();
    for (space, agents) in [(&b2, 2usize), (&c3, 3)] {
        if let Ok(rule) = spec.resolve(space, agents) {
            let ps = ProfileSpace::new(space.len(), agents, &Bounds::default()).unwrap();
            let _ = materialize(&rule, space, &ps);
        }
    }
});
