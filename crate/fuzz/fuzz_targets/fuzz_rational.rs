#![no_main]

use libfuzzer_sys::fuzz_target;
use suffkit::Rat;

// "p/q" literals appear in space values, rule parameters and utility maps.
// Parsing must never panic, and everything accepted must round-trip through
// its canonical rendering.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = text.parse::<Rat>() {
        let canonical = r.to_string();
        assert_eq!(canonical.parse::<Rat>(), Ok(r));
    }
});
