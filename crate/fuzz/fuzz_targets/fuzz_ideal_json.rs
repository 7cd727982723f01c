#![no_main]
use bianchi_core::ideals::QuadIdeal;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = serde_json::from_str::<QuadIdeal>(text) {
        let back = serde_json::to_string(&x).unwrap();
        let y: QuadIdeal = serde_json::from_str(&back).unwrap();
        assert_eq!(x, y);
    }
});
