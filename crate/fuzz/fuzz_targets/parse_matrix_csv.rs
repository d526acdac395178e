#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = crowdsel::io::parse_matrix_csv(text) {
        // Anything accepted must survive a write/read cycle.
        let again = crowdsel::io::parse_matrix_csv(&crowdsel::io::matrix_to_csv(&m)).expect("round trip");
        assert_eq!(again.ids(), m.ids());
        for i in 0..m.n() {
            for j in 0..m.n() {
                if i != j {
                    assert_eq!(again.get(i, j), m.get(i, j));
                }
            }
        }
    }
});
