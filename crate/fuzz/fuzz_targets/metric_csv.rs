#![no_main]

use libfuzzer_sys::fuzz_target;

// The CSV re-parser behind the round-trip contract must never panic, and
// every accepted table must answer cell queries without panicking.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(table) = georel_cli::table_csv::parse_csv(text) {
        for row in 0..table.rows.len().min(8) {
            for col in 0..table.header.len().min(8) {
                let _ = table.number(row, col);
            }
        }
    }
});
