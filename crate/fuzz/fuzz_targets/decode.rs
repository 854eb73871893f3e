#![no_main]
use finmet_cli::convert;
use finmet_cli::document::Document;
use libfuzzer_sys::fuzz_target;

// Parsed documents must convert to library values or fail with an error,
// never a panic.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = finmet_cli::parse_document(text) else { return };
    let _ = match &doc {
        Document::Space(s) => s.build().map(|_| ()),
        Document::Morphism(m) => convert::morphism(m).map(|_| ()),
        Document::Covering(c) => convert::covering(c).map(|_| ()),
        Document::Descent(d) => convert::descent(d).and_then(|d| finmet::lsm::check_cocycle(&d)),
        Document::Correspondence(c) => convert::correspondence(c).map(|_| ()),
        Document::Family(f) => convert::projection(f).map(|_| ()),
        Document::PointedFamily(p) => convert::pointed(p).map(|_| ()),
        _ => Ok(()),
    };
});
