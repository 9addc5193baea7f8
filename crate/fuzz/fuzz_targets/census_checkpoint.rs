#![no_main]

use libfuzzer_sys::fuzz_target;
use wps_core::census::IdpCensusRecord;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(rec) = IdpCensusRecord::from_json(text) {
        let again = IdpCensusRecord::from_json(&rec.to_json()).expect("round trip");
        assert_eq!(again, rec);
    }
});
