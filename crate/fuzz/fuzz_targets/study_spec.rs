#![no_main]

use libfuzzer_sys::fuzz_target;

// Study-spec parsing and validation must never panic; validation runs no
// simulation work.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = georel_cli::study_spec::StudySpecFile::from_json(text) {
        let _ = spec.validate();
    }
});
