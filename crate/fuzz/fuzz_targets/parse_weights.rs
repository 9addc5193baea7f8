#![no_main]

use libfuzzer_sys::fuzz_target;
use wps_core::{parse_weights, WeightVector};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = parse_weights(text) {
        let again: WeightVector = q.to_string().parse().expect("display reparses");
        assert_eq!(again, q);
        assert_eq!(q.normalized_volume(), 1 + q.iter().sum::<u128>());
    }
});
