#![no_main]
use crowdsel::profile::SimpleTokenizer;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(records) = crowdsel::io::parse_corpus_jsonl(text) {
        let _ = crowdsel::io::experiences_by_worker(&records, &SimpleTokenizer);
    }
});
