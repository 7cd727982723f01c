#![no_main]
use bianchi_core::quadfield::QuadField;
use bianchi_core::recovery::SampleSet;
use libfuzzer_sys::fuzz_target;

// First byte picks the field, the rest is the CSV text.  A successful parse
// must re-serialize to a fixed point.
fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let d = [-1i64, -2, -3, -7, -11][sel as usize % 5];
    let k = QuadField::new(d).unwrap();
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(set) = SampleSet::from_csv_str(&k, text) {
        let once = set.to_csv_string().unwrap();
        let again = SampleSet::from_csv_str(&k, &once).unwrap();
        assert_eq!(once, again.to_csv_string().unwrap());
    }
});
