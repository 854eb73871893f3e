#![no_main]
use finmet::ExtValue;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = text.parse::<ExtValue>() {
        let shown = v.to_string();
        assert_eq!(shown.parse::<ExtValue>().unwrap(), v);
        assert_eq!(shown.parse::<ExtValue>().unwrap().to_string(), shown);
    }
});
