#![no_main]
use bianchi_core::cyclo::CycloNum;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = serde_json::from_str::<CycloNum>(text) {
        let back = serde_json::to_string(&x).unwrap();
        let y: CycloNum = serde_json::from_str(&back).unwrap();
        assert_eq!(x, y);
    }
});
