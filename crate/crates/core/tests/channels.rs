use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmpolar::{posteriors, transmit, ChannelModel, ChannelParam};

/// Bins posteriors `Pr{bit 0}` and checks that, within every populated bin,
/// the empirical frequency of 0 agrees with the mean posterior to 3 sigma.
fn check_calibration(channel: &ChannelModel, seed: u64) {
    const SAMPLES: usize = 100_000;
    const BINS: usize = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bits: Vec<u8> = (0..SAMPLES).map(|_| rng.random_range(0..2u8)).collect();
    let symbols: Vec<f64> = bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect();
    let y = transmit(channel, &symbols, &mut rng);
    let q = posteriors(channel, &y).posteriors();

    let mut count = [0usize; BINS];
    let mut zeros = [0usize; BINS];
    let mut mass = [0.0f64; BINS];
    for (&p, &b) in q.iter().zip(&bits) {
        let bin = ((p * BINS as f64) as usize).min(BINS - 1);
        count[bin] += 1;
        mass[bin] += p;
        zeros[bin] += usize::from(b == 0);
    }
    for bin in 0..BINS {
        if count[bin] < 100 {
            continue;
        }
        let n = count[bin] as f64;
        let expected = mass[bin] / n;
        let observed = zeros[bin] as f64 / n;
        let sigma = (expected * (1.0 - expected) / n).sqrt().max(1.0 / n);
        assert!(
            (observed - expected).abs() <= 3.0 * sigma,
            "{channel:?} bin {bin}: observed {observed}, predicted {expected}, n={n}"
        );
    }
}

#[test]
fn bsc_posteriors_are_calibrated() {
    check_calibration(&ChannelModel::bsc(0.1).unwrap(), 1);
    check_calibration(&ChannelModel::bsc(0.35).unwrap(), 2);
}

#[test]
fn bec_posteriors_are_calibrated() {
    check_calibration(&ChannelModel::bec(0.3).unwrap(), 3);
    check_calibration(&ChannelModel::bec(0.9).unwrap(), 4);
}

#[test]
fn awgn_posteriors_are_calibrated() {
    check_calibration(&ChannelModel::awgn(0.8).unwrap(), 5);
    check_calibration(&ChannelModel::awgn(1.5).unwrap(), 6);
}

#[test]
fn awgn_ebn0_uses_code_rate() {
    let at_half = ChannelParam::AwgnEbN0Db(0.0).resolve(0.5).unwrap();
    assert_eq!(at_half, ChannelModel::awgn(1.0).unwrap());
    let ChannelModel::Awgn { sigma } = ChannelParam::AwgnEbN0Db(3.0).resolve(0.25).unwrap() else {
        panic!("expected an AWGN channel");
    };
    assert!((sigma - (2.0 * 0.25 * 10f64.powf(0.3)).powf(-0.5)).abs() < 1e-12);
}

#[test]
fn invalid_channels_are_rejected() {
    assert!(ChannelModel::bsc(-0.1).is_err());
    assert!(ChannelModel::bsc(0.6).is_err());
    assert!(ChannelModel::bec(1.1).is_err());
    assert!(ChannelModel::awgn(0.0).is_err());
    assert!("bsc".parse::<ChannelParam>().is_err());
    assert!("bsc:0.7".parse::<ChannelParam>().is_err());
    assert!("foo:0.1".parse::<ChannelParam>().is_err());
}
