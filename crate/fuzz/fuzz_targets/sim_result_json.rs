#![no_main]

use libfuzzer_sys::fuzz_target;
use unruh_gas::sim::SimResult;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(result) = SimResult::from_json(text) {
        assert_eq!(SimResult::from_json(&result.to_json()).unwrap(), result);
    }
});
