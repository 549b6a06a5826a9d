use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use ffma_core::chancode::{ChannelCode, CodeSpec, MinSumConfig, ReedSolomon, RS_K, RS_N, RS_T};
use ffma_core::gf::build_field;
use ffma_core::gmac::{Detector, GmacConfig, GmacSystem, Layout};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::hint::black_box;

fn field_mul(c: &mut Criterion) {
    let f = build_field(2, 8, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xs: Vec<_> = (0..1024).map(|_| f.from_packed(rng.random_range(0..256)).unwrap()).collect();
    c.bench_function("gf256 mul x1024", |b| {
        b.iter(|| {
            for w in xs.windows(2) {
                black_box(f.mul(&w[0], &w[1]).unwrap());
            }
        })
    });
}

fn rs_decode(c: &mut Criterion) {
    let rs = ReedSolomon::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let msg: Vec<u8> = (0..RS_K).map(|_| rng.random()).collect();
    let clean = rs.encode(&msg).unwrap();
    c.bench_function("rs255 decode, 25 errors", |b| {
        b.iter_batched(
            || {
                let mut w = clean.clone();
                for pos in sample(&mut rng, RS_N, RS_T) {
                    w[pos] ^= rng.random_range(1..=255u8);
                }
                w
            },
            |w| rs.decode(&w).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn ldpc_decode(c: &mut Criterion) {
    let code = ChannelCode::from_spec(&CodeSpec::Ldpc { n: 1200, k: 600, seed: 1 }, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let msg: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2)).collect();
    let cw = code.encode(&msg).unwrap();
    let sigma = 0.8f64;
    let llr: Vec<f64> = cw
        .iter()
        .map(|&bit| {
            let y = 2.0 * f64::from(bit) - 1.0 + sigma * rng.sample::<f64, _>(StandardNormal);
            2.0 * y / (sigma * sigma)
        })
        .collect();
    c.bench_function("ldpc 1200x600 min-sum", |b| b.iter(|| code.decode_soft(black_box(&llr), MinSumConfig::default())));
}

fn gmac_frame(c: &mut Criterion) {
    let sys = GmacSystem::new(GmacConfig {
        users: 4,
        m: 4,
        k_bits: 150,
        code: CodeSpec::Ldpc { n: 1200, k: 600, seed: 1 },
        layout: Layout::Sparse,
        detector: Detector::Systematic,
        min_sum: MinSumConfig::default(),
        mix_seed: 0,
    })
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let bits: Vec<Vec<u8>> = (0..4).map(|_| (0..150).map(|_| rng.random_range(0..2)).collect()).collect();
    c.bench_function("gmac frame J=4 at N0=0.6", |b| b.iter(|| sys.run_frame(&bits, 0.6, &mut rng).unwrap()));
}

criterion_group!(benches, field_mul, rs_decode, ldpc_decode, gmac_frame);
criterion_main!(benches);
