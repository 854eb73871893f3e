#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = finmet_cli::parse_document(text) else { return };
    let once = finmet_cli::serialize(&doc);
    let again = finmet_cli::parse_document(&once).expect("serialized output must parse");
    assert_eq!(once, finmet_cli::serialize(&again));
});
