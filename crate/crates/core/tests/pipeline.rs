use symsens::divergence::{self, SensitivityConfig};
use symsens::entropy::{self, BlockEntropyConfig, IntervalPartition};
use symsens::systems::{self, StatePoint};
use symsens::SystemSpec;

const SEED: u64 = 7_301;

#[test]
fn certified_level_traps_few_pairs() {
    for sys in [SystemSpec::radic(3).unwrap(), SystemSpec::logistic()] {
        let partition = IntervalPartition::uniform(3, &sys).unwrap();
        let h = sys.known_entropy_bits().unwrap();
        let cert = entropy::certificate_delta(&partition, h, sys.density()).unwrap();
        let delta = cert.delta_star.expect("positive entropy gives a level");
        assert!(cert.criterion_value.unwrap() < 1.0);
        let trap = divergence::trap_probability(&sys, delta, 100, 5_000, SEED).unwrap();
        assert!(trap.probability <= 0.01, "{sys}: trap {} at {delta}", trap.probability);
    }
}

#[test]
fn rotation_has_no_certificate() {
    let rot = SystemSpec::golden_rotation();
    let partition = IntervalPartition::for_system(&rot, vec![0.5]).unwrap();
    let cfg = BlockEntropyConfig::new(16, 400, SEED);
    let (curve, _) = entropy::block_entropy(&rot, &partition, &cfg).unwrap();
    let cert = entropy::certificate_delta(&partition, 0.0, rot.density()).unwrap();
    assert!(cert.delta_star.is_none());
    assert!(curve.rate_estimate < 0.2);
}

#[test]
fn sampled_entropy_tracks_exact_cylinders() {
    let tent = SystemSpec::tent();
    let partition = IntervalPartition::for_system(&tent, vec![0.5]).unwrap();
    let cfg = BlockEntropyConfig::new(10, 2_000, SEED);
    let (curve, words) = entropy::block_entropy(&tent, &partition, &cfg).unwrap();
    for (&n, &h) in curve.lengths.iter().zip(&curve.block_entropy_bits) {
        assert!((h - n as f64).abs() <= 0.05 * n as f64, "H_{n} = {h}");
    }
    assert_eq!(words.len(), 1 << 10);
    let total: f64 = words.iter().map(|w| w.probability).sum();
    assert!((total - 1.0).abs() < 1e-9);
    assert!((curve.rate_estimate - 1.0).abs() < 0.05);
}

#[test]
fn exact_cylinders_are_all_typical() {
    let doubling = SystemSpec::radic(2).unwrap();
    let measures = entropy::exact_word_measures(&doubling, 8).unwrap();
    let report = entropy::equipartition_classify(&measures, 8, 1.0, 0.05).unwrap();
    assert!(report.bad_words.is_empty());
    assert!((report.good_mass - 1.0).abs() < 1e-12);
}

#[test]
fn ambiguous_words_stay_under_bound() {
    let doubling = SystemSpec::radic(2).unwrap();
    let partition = IntervalPartition::for_system(&doubling, vec![0.5]).unwrap();
    let delta = entropy::certificate_delta(&partition, 1.0, doubling.density())
        .unwrap()
        .delta_star
        .unwrap();
    for x in systems::sample_measure(&doubling, SEED, 20).unwrap() {
        let bound = entropy::word_count_bound(&doubling, &partition, &x, delta, 5_000).unwrap();
        assert!(bound.holds(), "{bound:?}");
    }
}

#[test]
fn sensitivity_report_is_consistent() {
    let sys = SystemSpec::logistic();
    let cfg = SensitivityConfig::new(vec![0.1, 0.3, 0.6, 0.9], 150, 2_000, SEED);
    let (report, records) = divergence::sensitivity(&sys, &cfg).unwrap();
    assert_eq!(records.len(), 2_000);
    for pair in report.trap_probability.windows(2) {
        assert!(pair[0].probability <= pair[1].probability);
    }
    assert!(report.delta_hat <= report.diam_supp_hat);
    assert!(report.a_mu_hat <= report.known_diam_supp + 1e-12);
    assert!(report.sensitive[0]);
    let again = divergence::sensitivity(&sys, &cfg).unwrap().1;
    assert!(records.iter().zip(&again).all(|(a, b)| a.sup_distance == b.sup_distance));
}

#[test]
fn coding_of_periodic_ternary_point() {
    let sys = SystemSpec::radic(3).unwrap();
    let partition = IntervalPartition::uniform(3, &sys).unwrap();
    let x = StatePoint::rational(5, 26).unwrap();
    let word = entropy::encode_orbit(&sys, &partition, &x, 5).unwrap();
    // 5/26 = 0.(012) in base 3
    assert_eq!(word, vec![1, 2, 3, 1, 2, 3]);
}
