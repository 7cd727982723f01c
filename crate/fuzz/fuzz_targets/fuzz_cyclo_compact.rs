#![no_main]
use bianchi_core::cyclo::CycloNum;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = CycloNum::from_compact_string(text) {
        let back = x.to_compact_string();
        let y = CycloNum::from_compact_string(&back).unwrap();
        assert_eq!(x, y);
        assert_eq!(back, y.to_compact_string());
    }
});
