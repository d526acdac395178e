#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(pool) = crowdsel::io::parse_pool_csv(text) {
        assert!(!pool.is_empty());
        assert!(pool.probs().iter().all(|p| (0.0..=1.0).contains(p)));
    }
});
