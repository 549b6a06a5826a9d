//! Channel codes and a single binary view over them.
//!
//! Every [`ChannelCode`] encodes K message bits into an N-bit codeword whose
//! first K bits are the message, which is what the sparse and diagonal
//! codeword layouts rely on.

pub mod gf2;
pub mod ldpc;
pub mod linear;
pub mod rs;

pub use gf2::BitMatrix;
pub use ldpc::{build_regular_ldpc, LdpcCode, LdpcDecoded};
pub use linear::{
    decompose_sequence, orthogonal_encode_check, example_16x12_code, recompose, LinearBlockCode,
};
pub use rs::{ReedSolomon, RsDecoded, RS_K, RS_N, RS_T};

use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// Text form accepted by `--code`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeSpec {
    Demo16x12,
    Ldpc { n: usize, k: usize, seed: u64 },
    Rs255,
    /// No channel coding.
    None,
}

impl FromStr for CodeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "paper16x12" => return Ok(CodeSpec::Demo16x12),
            "rs255" => return Ok(CodeSpec::Rs255),
            "none" | "uncoded" => return Ok(CodeSpec::None),
            _ => {}
        }
        let Some(args) = s.strip_prefix("ldpc:") else {
            return Err(Error::Parse(format!("unknown code `{s}`; expected paper16x12 | ldpc:<N>,<K>,<seed> | rs255 | none")));
        };
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let bad = || Error::Parse(format!("bad LDPC spec `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(CodeSpec::Ldpc {
            n: parts[0].parse().map_err(|_| bad())?,
            k: parts[1].parse().map_err(|_| bad())?,
            seed: parts[2].parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSpec::Demo16x12 => write!(f, "paper16x12"),
            CodeSpec::Ldpc { n, k, seed } => write!(f, "ldpc:{n},{k},{seed}"),
            CodeSpec::Rs255 => write!(f, "rs255"),
            CodeSpec::None => write!(f, "none"),
        }
    }
}

/// Column weight of every LDPC built from a [`CodeSpec`].
pub const LDPC_COLUMN_WEIGHT: usize = 3;

/// Min-sum settings shared by the soft decoders.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinSumConfig {
    pub max_iters: usize,
    pub normalization: f64,
}

impl Default for MinSumConfig {
    fn default() -> Self {
        MinSumConfig { max_iters: ldpc::DEFAULT_MAX_ITERS, normalization: ldpc::DEFAULT_NORMALIZATION }
    }
}

/// Decoder output: the message estimate and whether the decoder reached a
/// valid codeword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub message: Vec<u8>,
    pub converged: bool,
}

/// A small binary code decoded exhaustively (soft) or by coset leaders (hard).
#[derive(Clone, Debug)]
pub struct SmallBinaryCode {
    code: LinearBlockCode,
    codewords: Vec<Vec<u8>>,
    /// Coset leader per syndrome value.
    leaders: Option<HashMap<u32, Vec<u8>>>,
}

/// Largest K decoded by full codeword enumeration.
pub const EXHAUSTIVE_K: usize = 16;
/// Largest N − K for which a coset-leader table is built.
pub const SYNDROME_TABLE_REDUNDANCY: usize = 16;

impl SmallBinaryCode {
    pub fn new(code: LinearBlockCode) -> Result<Self> {
        if !code.is_binary() || !code.is_systematic() {
            return Err(Error::InvalidArgument("small-code decoding needs a systematic binary code".into()));
        }
        if code.k() > EXHAUSTIVE_K {
            return Err(Error::InvalidArgument(format!("K = {} too large for exhaustive decoding", code.k())));
        }
        let codewords = (0..1u32 << code.k())
            .map(|idx| {
                let msg: Vec<u32> = (0..code.k()).map(|i| idx >> i & 1).collect();
                code.encode(&msg).expect("length matches").into_iter().map(|b| b as u8).collect()
            })
            .collect();
        let leaders = (code.n() - code.k() <= SYNDROME_TABLE_REDUNDANCY).then(|| coset_leaders(&code));
        Ok(SmallBinaryCode { code, codewords, leaders })
    }

    pub fn code(&self) -> &LinearBlockCode {
        &self.code
    }

    /// Maximum-likelihood codeword for the LLRs (largest correlation).
    pub fn decode_soft(&self, llr: &[f64]) -> Vec<u8> {
        let score = |cw: &Vec<u8>| -> f64 {
            cw.iter().zip(llr).map(|(&b, &l)| if b == 0 { l } else { -l }).sum()
        };
        let best = self
            .codewords
            .iter()
            .max_by(|a, b| score(a).partial_cmp(&score(b)).expect("finite LLRs"))
            .expect("at least one codeword");
        best[..self.code.k()].to_vec()
    }

    /// Syndrome decoding with the coset-leader table; falls back to the
    /// nearest codeword in Hamming distance when no table was built.
    pub fn decode_hard(&self, bits: &[u8]) -> Vec<u8> {
        match &self.leaders {
            Some(table) => {
                let s = syndrome_value(&self.code, bits);
                let e = &table[&s];
                bits.iter().zip(e).take(self.code.k()).map(|(&b, &x)| b ^ x).collect()
            }
            None => {
                let llr: Vec<f64> = bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect();
                self.decode_soft(&llr)
            }
        }
    }
}

fn syndrome_value(code: &LinearBlockCode, bits: &[u8]) -> u32 {
    let v: Vec<u32> = bits.iter().map(|&b| b as u32).collect();
    code.syndrome(&v)
        .expect("systematic code has H")
        .iter()
        .enumerate()
        .fold(0u32, |acc, (i, &s)| acc | (s << i))
}

/// Minimum-weight error pattern for every syndrome, found by increasing
/// weight; ties keep the first pattern in lexicographic position order.
fn coset_leaders(code: &LinearBlockCode) -> HashMap<u32, Vec<u8>> {
    let n = code.n();
    let target = 1usize << (n - code.k());
    let mut table = HashMap::with_capacity(target);
    table.insert(0, vec![0u8; n]);
    let mut weight = 1;
    while table.len() < target && weight <= n {
        let mut positions: Vec<usize> = (0..weight).collect();
        loop {
            let mut e = vec![0u8; n];
            for &p in &positions {
                e[p] = 1;
            }
            table.entry(syndrome_value(code, &e)).or_insert(e);
            // next combination
            let mut i = weight;
            while i > 0 && positions[i - 1] == n - weight + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            positions[i - 1] += 1;
            for j in i..weight {
                positions[j] = positions[j - 1] + 1;
            }
        }
        weight += 1;
    }
    table
}

/// A binary systematic channel code as used by the transceivers.
#[derive(Clone, Debug)]
pub enum ChannelCode {
    Small(SmallBinaryCode),
    Ldpc(LdpcCode),
    /// RS (255, 205) in binary expansion: N = 2040, K = 1640.
    Rs(ReedSolomon),
    /// Identity code of the given length.
    Uncoded(usize),
}

impl ChannelCode {
    /// Builds the code named by `spec`; `uncoded_len` sizes the identity code.
    pub fn from_spec(spec: &CodeSpec, uncoded_len: usize) -> Result<Self> {
        Ok(match spec {
            CodeSpec::Demo16x12 => ChannelCode::Small(SmallBinaryCode::new(example_16x12_code())?),
            CodeSpec::Ldpc { n, k, seed } => {
                ChannelCode::Ldpc(build_regular_ldpc(*n, *k, LDPC_COLUMN_WEIGHT, *seed)?)
            }
            CodeSpec::Rs255 => ChannelCode::Rs(ReedSolomon::new()),
            CodeSpec::None => {
                if uncoded_len == 0 {
                    return Err(Error::InvalidArgument("uncoded length must be positive".into()));
                }
                ChannelCode::Uncoded(uncoded_len)
            }
        })
    }

    pub fn n(&self) -> usize {
        match self {
            ChannelCode::Small(c) => c.code.n(),
            ChannelCode::Ldpc(c) => c.n(),
            ChannelCode::Rs(c) => 8 * c.n(),
            ChannelCode::Uncoded(n) => *n,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            ChannelCode::Small(c) => c.code.k(),
            ChannelCode::Ldpc(c) => c.k(),
            ChannelCode::Rs(c) => 8 * c.k(),
            ChannelCode::Uncoded(n) => *n,
        }
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn is_coded(&self) -> bool {
        !matches!(self, ChannelCode::Uncoded(_))
    }

    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        if msg.len() != self.k() {
            return Err(Error::Dimension { expected: self.k(), got: msg.len() });
        }
        match self {
            ChannelCode::Small(c) => {
                let m: Vec<u32> = msg.iter().map(|&b| b as u32).collect();
                Ok(c.code.encode(&m)?.into_iter().map(|b| b as u8).collect())
            }
            ChannelCode::Ldpc(c) => c.encode(msg),
            ChannelCode::Rs(c) => Ok(rs::bytes_to_bits(&c.encode(&rs::bits_to_bytes(msg))?)),
            ChannelCode::Uncoded(_) => Ok(msg.to_vec()),
        }
    }

    /// Soft decoding from LLRs (positive favours 0). RS and the identity
    /// code use hard decisions of the LLRs.
    pub fn decode_soft(&self, llr: &[f64], ms: MinSumConfig) -> Decoded {
        assert_eq!(llr.len(), self.n(), "LLR length must equal N");
        match self {
            ChannelCode::Small(c) => Decoded { message: c.decode_soft(llr), converged: true },
            ChannelCode::Ldpc(c) => {
                let out = c.decode(llr, ms.max_iters, ms.normalization);
                Decoded { message: out.codeword[..c.k()].to_vec(), converged: out.converged }
            }
            ChannelCode::Rs(_) | ChannelCode::Uncoded(_) => self.decode_hard(&ldpc::hard_decision(llr)),
        }
    }

    /// Hard-decision decoding of a received bit word.
    pub fn decode_hard(&self, bits: &[u8]) -> Decoded {
        assert_eq!(bits.len(), self.n(), "word length must equal N");
        match self {
            ChannelCode::Small(c) => {
                let message = c.decode_hard(bits);
                let converged = {
                    let recoded = self.encode(&message).expect("length matches");
                    recoded == bits || c.leaders.is_some()
                };
                Decoded { message, converged }
            }
            ChannelCode::Ldpc(c) => {
                let llr: Vec<f64> = bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect();
                let out = c.decode(&llr, ldpc::DEFAULT_MAX_ITERS, ldpc::DEFAULT_NORMALIZATION);
                Decoded { message: out.codeword[..c.k()].to_vec(), converged: out.converged }
            }
            ChannelCode::Rs(c) => {
                let out = c.decode(&rs::bits_to_bytes(bits)).expect("length matches");
                Decoded { message: rs::bytes_to_bits(&out.message), converged: !out.failed }
            }
            ChannelCode::Uncoded(_) => Decoded { message: bits.to_vec(), converged: true },
        }
    }
}

/// Codes in non-systematic generator form G_ns = M · G_sys with a random
/// invertible K×K matrix M. The message is recovered as ĉ_info · M⁻¹.
#[derive(Clone, Debug)]
pub struct NonSystematic {
    inner: ChannelCode,
    mix: BitMatrix,
    unmix: BitMatrix,
}

impl NonSystematic {
    pub fn new(inner: ChannelCode, seed: u64) -> Self {
        use rand::Rng;
        let k = inner.k();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let rows: Vec<Vec<u8>> = (0..k).map(|_| (0..k).map(|_| rng.random_range(0..2)).collect()).collect();
            let mix = BitMatrix::from_rows(&rows);
            if let Some(unmix) = mix.inverse() {
                return NonSystematic { inner, mix, unmix };
            }
        }
    }

    pub fn inner(&self) -> &ChannelCode {
        &self.inner
    }

    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        self.inner.encode(&self.mix.left_mul(msg))
    }

    pub fn decode_soft(&self, llr: &[f64], ms: MinSumConfig) -> Decoded {
        let out = self.inner.decode_soft(llr, ms);
        Decoded { message: self.unmix.left_mul(&out.message), converged: out.converged }
    }
}
