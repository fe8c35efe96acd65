use berlab::channel::{ChannelKind, SnrPoint};
use berlab::constellation::Constellation;
use berlab::montecarlo::{run_point, sweep, StoppingRule};
use berlab::theory;

#[test]
fn bpsk_rayleigh_sweep_tracks_closed_form() {
    let c = Constellation::bpsk();
    let grid: Vec<SnrPoint> = (0..=5).map(|i| SnrPoint::new(5.0 * i as f64, 1).unwrap()).collect();
    let results = sweep(&c, ChannelKind::Rayleigh, &grid, &StoppingRule::default(), 21, None).unwrap();
    for r in &results {
        let p = theory::bpsk_rayleigh_ber(&r.snr);
        assert!(!r.low_confidence);
        assert!(
            (r.ber_hat - p).abs() <= 3.0 * r.ci95_ber,
            "{} dB: {} vs {p}",
            r.snr.ebn0_db(),
            r.ber_hat
        );
    }
}

#[test]
fn pam4_awgn_matches_closed_forms() {
    let c = Constellation::pam(4).unwrap();
    let grid: Vec<SnrPoint> = [0.0, 4.0, 8.0].iter().map(|&d| SnrPoint::new(d, 2).unwrap()).collect();
    let rule = StoppingRule::new(500, 10_000_000, 50_000).unwrap();
    for r in sweep(&c, ChannelKind::Awgn, &grid, &rule, 4, None).unwrap() {
        let ser = theory::mpam_awgn_ser(4, &r.snr).unwrap();
        assert!((r.ser_hat - ser).abs() <= 3.0 * r.ci95_ser);
    }
}

#[test]
fn qam64_rayleigh_matches_closed_form() {
    let c = Constellation::qam(64).unwrap();
    let snr = SnrPoint::from_esn0_db(20.0, 6).unwrap();
    let r = run_point(&c, ChannelKind::Rayleigh, snr, &StoppingRule::default(), 8, 0, None).unwrap();
    let p = theory::mqam_rayleigh_ser(64, snr.esn0_linear()).unwrap();
    assert!((r.ser_hat - p).abs() <= 3.0 * r.ci95_ser);
}

#[test]
fn single_and_many_workers_agree_with_each_other() {
    let c = Constellation::qam(16).unwrap();
    let snr = SnrPoint::new(6.0, 4).unwrap();
    let rule = StoppingRule::new(2_000, 20_000_000, 25_000).unwrap();
    let a = run_point(&c, ChannelKind::Awgn, snr, &rule, 30, 0, Some(1)).unwrap();
    let b = run_point(&c, ChannelKind::Awgn, snr, &rule, 30, 0, Some(4)).unwrap();
    let other_seed = run_point(&c, ChannelKind::Awgn, snr, &rule, 31, 0, Some(4)).unwrap();
    assert_eq!(a.counts, b.counts);
    assert!((a.ser_hat - other_seed.ser_hat).abs() <= a.ci95_ser + other_seed.ci95_ser);
}

#[test]
fn serialized_results_are_reproducible() {
    let c = Constellation::qam(4).unwrap();
    let grid = [SnrPoint::new(2.0, 2).unwrap(), SnrPoint::new(4.0, 2).unwrap()];
    let rule = StoppingRule::new(100, 1_000_000, 10_000).unwrap();
    let a = serde_json::to_string(&sweep(&c, ChannelKind::Rayleigh, &grid, &rule, 1, Some(1)).unwrap()).unwrap();
    let b = serde_json::to_string(&sweep(&c, ChannelKind::Rayleigh, &grid, &rule, 1, Some(1)).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(!a.contains("elapsed"));
}
