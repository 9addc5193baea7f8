#![no_main]

use libfuzzer_sys::fuzz_target;
use wps_core::families::{parse_params, FamilyKind};

// Input: "<kind>;<params>".
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (kind, params) = text.split_once(';').unwrap_or((text, ""));
    if let Ok(k) = kind.parse::<FamilyKind>() {
        assert_eq!(k.name().parse::<FamilyKind>().ok(), Some(k));
    }
    if let Ok(v) = parse_params(params) {
        assert!(!v.is_empty() && v.iter().all(|&x| x > 0));
    }
});
