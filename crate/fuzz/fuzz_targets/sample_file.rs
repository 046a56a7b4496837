#![no_main]

use libfuzzer_sys::fuzz_target;

// The sample-file parser must never panic on any input; accepted inputs
// must construct valid sample types.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(parsed) = georel_cli::sample_file::parse(text) {
        match &parsed {
            georel_cli::sample_file::SampleFile::Complete(_) => {
                let _ = parsed.complete();
            }
            georel_cli::sample_file::SampleFile::Censored { c, .. } => {
                let _ = parsed.censored(Some(*c));
            }
        }
    }
});
