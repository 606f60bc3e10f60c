use sumset_core::simulate::{sample_m, sample_y, TallyTable};

const SAMPLES: u64 = 400_000;

/// `Σ_i a(i) b(k-i)` with its delta-method variance.
fn convolve(a: &TallyTable, b: &TallyTable, k: usize) -> (f64, f64) {
    let c: f64 = (0..=k).map(|i| a.estimate(i) * b.estimate(k - i)).sum();
    let part = |x: &TallyTable, y: &TallyTable| {
        let second: f64 = (0..=k)
            .map(|i| x.estimate(i) * y.estimate(k - i).powi(2))
            .sum();
        (second - c * c) / x.samples as f64
    };
    (c, part(a, b) + part(b, a))
}

#[test]
fn window_tally_matches_convolved_fringes() {
    let m = sample_m(256, SAMPLES, 11).unwrap();
    let left = sample_y(SAMPLES, 128, 12).unwrap();
    let right = sample_y(SAMPLES, 128, 13).unwrap();
    for k in 0..=10 {
        let (c, var_c) = convolve(&left, &right, k);
        let mk = m.estimate(k);
        let se = (mk * (1.0 - mk) / SAMPLES as f64 + var_c).sqrt();
        let z = (mk - c) / se;
        assert!(z.abs() < 4.0, "k={k}: m̂={mk:.5} conv={c:.5} z={z:.2}");
    }
}

#[test]
fn merged_chunks_reproduce_single_run() {
    // the same seed with more samples extends the stream rather than reshuffling it
    let small = sample_m(64, 65_536, 5).unwrap();
    let again = sample_m(64, 65_536, 5).unwrap();
    assert_eq!(small, again);
    let big = sample_m(64, 131_072, 5).unwrap();
    assert!(big.counts.iter().zip(&small.counts).all(|(b, s)| b >= s));
}
