#![no_main]

use libfuzzer_sys::fuzz_target;
use unruh_gas::species_file::{format_record, parse_species_file};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(records) = parse_species_file(text) {
        let rendered: String = records.iter().map(|r| format_record(r) + "\n").collect();
        assert_eq!(parse_species_file(&rendered).unwrap(), records);
    }
});
