#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(probs) = crowdsel::io::parse_probs(text) else { return };
    if probs.len() <= 64 {
        let p = crowdsel::pbd::OpinionVector::new(probs).expect("parsed probabilities are valid");
        let total: f64 = crowdsel::pbd::pmf_dftcf(&p).mass().iter().sum();
        assert!((total - 1.0).abs() < 1e-6);
    }
});
