use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmpolar::{
    codeword_loglik, complexity_probe, encode, freeze_bec, freeze_rm, list_decode, ml_decode, modulate, posteriors,
    sc_decode, sc_decode_genie, transmit, ChannelModel, CodeSpec, FrozenMetric, InfoWord, ListConfig, ListDecoder,
    ProbeCode, SoftVector, StateSharing,
};

fn random_spec(m: u32, rng: &mut impl Rng) -> CodeSpec {
    let n = 1usize << m;
    let info: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    CodeSpec::new(m, info).unwrap()
}

/// Posteriors bounded away from 0 and 1 so the probability-domain reference
/// never has to represent certainty.
fn random_posteriors(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(1e-6..1.0 - 1e-6)).collect()
}

/// Probability-domain SC in exact rational arithmetic. Returns the decoded
/// codeword bits of the subtree and records `(path index, Pr{0})` for every
/// information leaf. Where the exact posterior is within `TIE_MARGIN` of 1/2
/// no floating-point decoder can be held to the exact decision, so the
/// reference adopts the decoder's bit there (`ours` yields them in order).
fn reference_sc(
    q: &[BigRational],
    prefix: usize,
    spec: &CodeSpec,
    ours: &mut impl Iterator<Item = u8>,
    leaves: &mut Vec<(usize, BigRational)>,
) -> Vec<u8> {
    let one = BigRational::one();
    if q.len() == 1 {
        if !spec.is_info(prefix) {
            return vec![0];
        }
        let half = BigRational::new(1.into(), 2.into());
        let distance = (&q[0] - &half).abs().to_f64().unwrap();
        let decoder_bit = ours.next().unwrap();
        let bit = if distance < TIE_MARGIN { decoder_bit } else { u8::from(q[0] < half) };
        leaves.push((prefix, q[0].clone()));
        return vec![bit];
    }
    let h = q.len() / 2;
    let (q0, q1) = q.split_at(h);
    // Pr{a + b = 0} for independent bits a, b.
    let qv: Vec<BigRational> = (0..h).map(|j| &q0[j] * &q1[j] + (&one - &q0[j]) * (&one - &q1[j])).collect();
    let v = reference_sc(&qv, prefix * 2 + 1, spec, ours, leaves);
    // Once v is known both halves are observations of the same bit.
    let qu: Vec<BigRational> = (0..h)
        .map(|j| {
            let other = if v[j] == 0 { q1[j].clone() } else { &one - &q1[j] };
            let zero = &q0[j] * &other;
            let total = &zero + (&one - &q0[j]) * (&one - &other);
            zero / total
        })
        .collect();
    let u = reference_sc(&qu, prefix * 2, spec, ours, leaves);
    let mut out = u.clone();
    out.extend(u.iter().zip(&v).map(|(a, b)| a ^ b));
    out
}

const TIE_MARGIN: f64 = 1e-9;

#[test]
fn sc_matches_exact_probability_domain_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in 0..=7u32 {
        let instances = if m >= 6 { 6 } else { 30 };
        for _ in 0..instances {
            let spec = random_spec(m, &mut rng);
            let q = random_posteriors(1 << m, &mut rng);
            let beliefs = SoftVector::from_posteriors(&q).unwrap();
            let out = sc_decode(&spec, &beliefs).unwrap();

            let exact: Vec<BigRational> = q.iter().map(|&p| BigRational::from_float(p).unwrap()).collect();
            let mut ours = out.info.bits().to_vec().into_iter();
            let mut leaves = Vec::new();
            let codeword = reference_sc(&exact, 0, &spec, &mut ours, &mut leaves);
            assert_eq!(out.codeword.bits(), &codeword[..], "m={m}");
            assert_eq!(out.leaf_posteriors.len(), leaves.len());
            for (a, (index, b)) in out.leaf_posteriors.iter().zip(&leaves) {
                let b = b.to_f64().unwrap();
                assert!((a - b).abs() < 1e-9, "m={m} leaf {index}: {a} vs {b}");
            }
        }
    }
}

fn leaf_log_prob(llr: f64, bit: u8) -> f64 {
    // ln Pr{0} = -ln(1 + e^{-llr}), ln Pr{1} = -ln(1 + e^{llr})
    let x = if bit == 0 { -llr } else { llr };
    -(x.max(0.0) + (-x.abs()).exp().ln_1p())
}

#[test]
fn list_metrics_match_genie_replay() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for m in 1..=6u32 {
        for _ in 0..30 {
            let spec = random_spec(m, &mut rng);
            let q = random_posteriors(1 << m, &mut rng);
            let beliefs = SoftVector::from_posteriors(&q).unwrap();
            let result = list_decode(&spec, &beliefs, 8).unwrap();
            for cand in &result.candidates {
                let replay = sc_decode_genie(&spec, &beliefs, &cand.info).unwrap();
                let scattered = cand.info.scatter(&spec).unwrap();
                let metric: f64 = (0..spec.length()).map(|i| leaf_log_prob(replay.leaf_llr[i], scattered[i])).sum();
                assert!((metric - cand.metric).abs() < 1e-9, "m={m}: {metric} vs {}", cand.metric);
                assert_eq!(encode(&spec, &cand.info).unwrap(), cand.codeword);
            }
        }
    }
}

#[test]
fn copy_on_write_matches_deep_copy() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..300 {
        let m = rng.random_range(1..=7u32);
        let spec = random_spec(m, &mut rng);
        let list_size = 1 << rng.random_range(0..=3);
        let channel = ChannelModel::awgn(rng.random_range(0.5..1.5)).unwrap();
        let truth = InfoWord::random(spec.dimension(), &mut rng);
        let y = transmit(&channel, &modulate(&encode(&spec, &truth).unwrap()), &mut rng);
        let beliefs = posteriors(&channel, &y);

        let mut cfg = ListConfig::new(list_size);
        let shared = ListDecoder::new(cfg).unwrap().decode(&spec, &beliefs).unwrap();
        cfg.sharing = StateSharing::DeepCopy;
        let copied = ListDecoder::new(cfg).unwrap().decode(&spec, &beliefs).unwrap();
        assert_eq!(shared.candidates, copied.candidates, "trial {trial}");
        assert_eq!(shared.ops.kernel, copied.ops.kernel);
    }
}

#[test]
fn larger_list_does_not_hurt() {
    let spec = freeze_bec(7, 64, 0.5).unwrap();
    let channel = ChannelModel::awgn_ebn0_db(1.5, spec.rate()).unwrap();
    let trials = 10_000u64;
    let (mut err1, mut err4) = (0u64, 0u64);
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(9000 + t);
        let truth = InfoWord::random(spec.dimension(), &mut rng);
        let y = transmit(&channel, &modulate(&encode(&spec, &truth).unwrap()), &mut rng);
        let beliefs = posteriors(&channel, &y);
        err1 += u64::from(list_decode(&spec, &beliefs, 1).unwrap().best().info != truth);
        err4 += u64::from(list_decode(&spec, &beliefs, 4).unwrap().best().info != truth);
    }
    let f1 = err1 as f64 / trials as f64;
    let f4 = err4 as f64 / trials as f64;
    let slack = 1.96 * ((f1 * (1.0 - f1) + f4 * (1.0 - f4)) / trials as f64).sqrt();
    assert!(f4 <= f1 + slack, "FER L=4 {f4} vs L=1 {f1}");
}

#[test]
fn kernel_count_is_linear_in_list_size() {
    let report = complexity_probe(ProbeCode::Full, &[6, 7, 8], &[1, 2, 4, 8], 5, 3).unwrap();
    for m in [6u32, 7, 8] {
        let base = report.decoder.iter().find(|p| p.m == m && p.list_size == 1).unwrap();
        for p in report.decoder.iter().filter(|p| p.m == m) {
            let ratio = p.mean_kernel_ops / base.mean_kernel_ops / p.list_size as f64;
            assert!((0.7..=1.3).contains(&ratio), "m={m} L={}: ratio {ratio}", p.list_size);
        }
    }
}

#[test]
fn ml_dominates_every_list_candidate() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let channel = ChannelModel::awgn(0.9).unwrap();
    for _ in 0..300 {
        let m = rng.random_range(1..=5u32);
        let spec = random_spec(m, &mut rng);
        if spec.dimension() > 12 {
            continue;
        }
        let truth = InfoWord::random(spec.dimension(), &mut rng);
        let y = transmit(&channel, &modulate(&encode(&spec, &truth).unwrap()), &mut rng);
        let beliefs = posteriors(&channel, &y);
        let ml = ml_decode(&spec, &beliefs).unwrap();
        for cand in list_decode(&spec, &beliefs, 4).unwrap().candidates {
            assert!(ml.loglik >= codeword_loglik(&cand.codeword, &beliefs).unwrap() - 1e-9);
        }
    }
}

#[test]
fn loglik_ordering_is_domain_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..100 {
        let spec = freeze_rm(2, 4).unwrap();
        let q = random_posteriors(16, &mut rng);
        let beliefs = SoftVector::from_posteriors(&q).unwrap();
        let words: Vec<InfoWord> = (0..8).map(|_| InfoWord::random(spec.dimension(), &mut rng)).collect();
        let mut by_llr = Vec::new();
        let mut by_prob = Vec::new();
        for w in &words {
            let c = encode(&spec, w).unwrap();
            by_llr.push(codeword_loglik(&c, &beliefs).unwrap());
            let direct: f64 =
                c.bits().iter().zip(&q).map(|(&b, &p)| if b == 0 { p.ln() } else { (1.0 - p).ln() }).sum();
            by_prob.push(direct);
        }
        for i in 0..words.len() {
            assert!((by_llr[i] - by_prob[i]).abs() < 1e-9);
            for j in 0..words.len() {
                if (by_prob[i] - by_prob[j]).abs() > 1e-9 {
                    assert_eq!(by_llr[i] < by_llr[j], by_prob[i] < by_prob[j]);
                }
            }
        }
    }
}

#[test]
fn ignoring_frozen_leaves_only_changes_the_metric_source() {
    let spec = freeze_rm(2, 5).unwrap();
    let channel = ChannelModel::bsc(0.08).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..200 {
        let truth = InfoWord::random(spec.dimension(), &mut rng);
        let y = transmit(&channel, &modulate(&encode(&spec, &truth).unwrap()), &mut rng);
        let beliefs = posteriors(&channel, &y);
        let sc = sc_decode(&spec, &beliefs).unwrap();
        assert!(sc.metric(FrozenMetric::Include) <= sc.metric(FrozenMetric::Ignore) + 1e-12);

        let mut cfg = ListConfig::new(1);
        cfg.frozen_metric = FrozenMetric::Ignore;
        let list = ListDecoder::new(cfg).unwrap().decode(&spec, &beliefs).unwrap();
        assert_eq!(list.best().info, sc.info);
        assert_eq!(list.best().metric.to_bits(), sc.metric_info_leaves.to_bits());
    }
}
