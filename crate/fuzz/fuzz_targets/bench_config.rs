#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = crowdsel::bench::ExperimentConfig::from_json(text) {
        for rule in &cfg.demands {
            for &k in &cfg.k {
                let _ = rule.resolve(k);
            }
        }
    }
});
