mod common;

use ffma_core::chancode::{
    orthogonal_encode_check, example_16x12_code, rs::bits_to_bytes, ChannelCode, CodeSpec, LinearBlockCode,
    ReedSolomon, RS_K, RS_N, RS_T,
};
use ffma_core::gf::build_field;
use ffma_core::harness::{run_gmac_sweep, Mode, SimulationConfig, StopRule};
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn codes() -> &'static [ChannelCode] {
    static CODES: OnceLock<Vec<ChannelCode>> = OnceLock::new();
    CODES.get_or_init(|| {
        [
            CodeSpec::Demo16x12,
            CodeSpec::Ldpc { n: 1200, k: 600, seed: 1 },
            CodeSpec::Ldpc { n: 96, k: 48, seed: 3 },
            CodeSpec::Rs255,
        ]
        .iter()
        .map(|s| ChannelCode::from_spec(s, 0).unwrap())
        .chain(std::iter::once(ChannelCode::Uncoded(20)))
        .collect()
    })
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

#[test]
fn ldpc_encoder_matches_dense_generator() {
    let ChannelCode::Ldpc(ldpc) = &codes()[2] else { unreachable!() };
    let g = ldpc.generator_matrix().to_rows();
    let h = ldpc.parity_check_matrix().to_rows();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let u = random_bits(&mut rng, ldpc.k());
        let v = ldpc.encode(&u).unwrap();
        assert_eq!(v, common::dense_encode(&g, &u));
        for row in &h {
            assert_eq!(row.iter().zip(&v).filter(|(a, b)| **a == 1 && **b == 1).count() % 2, 0);
        }
    }
}

#[test]
fn rs_bounded_distance_ten_thousand_trials() {
    let rs = ReedSolomon::new();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut failures = 0;
    for trial in 0..10_000 {
        let msg: Vec<u8> = (0..RS_K).map(|_| rng.random()).collect();
        let mut word = rs.encode(&msg).unwrap();
        let errors = 1 + trial % RS_T;
        for pos in sample(&mut rng, RS_N, errors) {
            word[pos] ^= rng.random_range(1..=255u8);
        }
        let out = rs.decode(&word).unwrap();
        if out.failed || out.message != msg {
            failures += 1;
        }
    }
    assert_eq!(failures, 0);
}

#[test]
fn rs_binary_view_corrects_byte_errors() {
    let code = ChannelCode::from_spec(&CodeSpec::Rs255, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let msg = random_bits(&mut rng, code.k());
    let mut v = code.encode(&msg).unwrap();
    // 25 bytes with every bit flipped is still 25 symbol errors
    for byte in sample(&mut rng, RS_N, RS_T) {
        for b in &mut v[8 * byte..8 * byte + 8] {
            *b ^= 1;
        }
    }
    let d = code.decode_hard(&v);
    assert!(d.converged);
    assert_eq!(d.message, msg);
    assert_eq!(bits_to_bytes(&d.message).len(), RS_K);
}

#[test]
fn ldpc_single_user_sanity_threshold() {
    // BER at or below 1e-4 somewhere at or below 3 dB
    let mut cfg = SimulationConfig::new(Mode::Gmac);
    cfg.m = 1;
    cfg.k_bits = 600;
    cfg.code = CodeSpec::Ldpc { n: 1200, k: 600, seed: 1 };
    cfg.points = vec![2.5, 3.0];
    cfg.stop = StopRule { min_errors: 200, max_bits: 1_200_000 };
    let rows = run_gmac_sweep(&cfg).unwrap();
    let best = rows.iter().map(|r| r.puer()).fold(f64::INFINITY, f64::min);
    assert!(best <= 1e-4, "{best}");
}

#[test]
fn orthogonal_identity_demo_code_and_gf5() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let code = example_16x12_code();
    let ext = build_field(2, 4, None).unwrap();
    for _ in 0..200 {
        let w: Vec<_> = (0..code.k()).map(|_| ext.from_packed(rng.random_range(0..16)).unwrap()).collect();
        assert!(orthogonal_encode_check(&w, &code).unwrap());
    }
    let gf5 = build_field(5, 1, None).unwrap();
    let small = LinearBlockCode::random_systematic(gf5, 4, 9, &mut rng).unwrap();
    let ext5 = build_field(5, 4, None).unwrap();
    for _ in 0..200 {
        let w: Vec<_> = (0..4).map(|_| ext5.from_packed(rng.random_range(0..625)).unwrap()).collect();
        assert!(orthogonal_encode_check(&w, &small).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoding_is_linear_and_systematic(idx in 0usize..5, seed in any::<u64>()) {
        let code = &codes()[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_bits(&mut rng, code.k());
        let b = random_bits(&mut rng, code.k());
        let x: Vec<u8> = a.iter().zip(&b).map(|(p, q)| p ^ q).collect();
        let (va, vb, vx) = (code.encode(&a).unwrap(), code.encode(&b).unwrap(), code.encode(&x).unwrap());
        let sum: Vec<u8> = va.iter().zip(&vb).map(|(p, q)| p ^ q).collect();
        prop_assert_eq!(&vx, &sum);
        prop_assert_eq!(&va[..code.k()], &a[..]);
        prop_assert_eq!(code.decode_hard(&va).message, a);
    }
}
