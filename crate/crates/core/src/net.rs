//! Network FFMA over GF(p^m) on a discrete symmetric channel.
//!
//! User j holds a VRB α^i·C_l: tuple position i of the Ψ_B layout and the
//! prime-field pair C_l. Users sharing C_l are XOR-ed into one group word,
//! each group word is mapped onto its pair, and the L group sequences are
//! multiplexed into one GF(p) symbol stream (T symbols per position when a
//! C-UDC multiplexer is needed).

use crate::chancode::{ChannelCode, CodeSpec};
use crate::ep_code::{enumerate_ud_codes, CodeKind, ElementPair, EpCode};
use crate::error::{Error, Result};
use crate::gf::{build_field, is_prime};
use crate::multiplex::{build_cudc_matrix, MultiplexMatrix};
use rand::Rng;

/// One VRB: tuple position `layer` in [0, m) and pair index `pair` in [1, L].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Vrb {
    pub layer: usize,
    pub pair: usize,
}

/// User j (index j − 1) → VRB.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VrbAssignment {
    vrbs: Vec<Vrb>,
    m: usize,
    pairs: usize,
}

impl VrbAssignment {
    /// Checks ranges and injectivity.
    pub fn explicit(vrbs: Vec<Vrb>, m: usize, pairs: usize) -> Result<Self> {
        if vrbs.len() > m * pairs {
            return Err(Error::TooManyUsers { users: vrbs.len(), bound: m * pairs });
        }
        let mut seen = vec![false; m * pairs];
        for v in &vrbs {
            if v.layer >= m || v.pair == 0 || v.pair > pairs {
                return Err(Error::InvalidArgument(format!("VRB (i={}, l={}) out of range", v.layer, v.pair)));
            }
            let slot = (v.pair - 1) * m + v.layer;
            if std::mem::replace(&mut seen[slot], true) {
                return Err(Error::InvalidArgument(format!("VRB (i={}, l={}) assigned twice", v.layer, v.pair)));
            }
        }
        Ok(VrbAssignment { vrbs, m, pairs })
    }

    pub fn users(&self) -> usize {
        self.vrbs.len()
    }

    pub fn vrb(&self, user: usize) -> Vrb {
        self.vrbs[user - 1]
    }

    pub fn vrbs(&self) -> &[Vrb] {
        &self.vrbs
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn pairs(&self) -> usize {
        self.pairs
    }

    /// 0-based user indices of group l.
    pub fn group(&self, pair: usize) -> Vec<usize> {
        (0..self.vrbs.len()).filter(|&j| self.vrbs[j].pair == pair).collect()
    }
}

/// Layer-first fill: l = 1 with i = 0, 1, …, m − 1, then l = 2, and so on.
pub fn assign_vrbs(users: usize, m: usize, pairs: usize) -> Result<VrbAssignment> {
    if users > m * pairs {
        return Err(Error::TooManyUsers { users, bound: m * pairs });
    }
    let vrbs = (0..users).map(|j| Vrb { layer: j % m, pair: j / m + 1 }).collect();
    VrbAssignment::explicit(vrbs, m, pairs)
}

/// Bitwise XOR of the group's codewords; an empty group gives zeros of
/// length `n`.
pub fn group_ffsp(codewords: &[&[u8]], n: usize) -> Result<Vec<u8>> {
    let mut out = vec![0u8; n];
    for cw in codewords {
        if cw.len() != n {
            return Err(Error::Dimension { expected: n, got: cw.len() });
        }
        for (o, &b) in out.iter_mut().zip(cw.iter()) {
            *o ^= b;
        }
    }
    Ok(out)
}

/// Bit 0 → l, bit 1 → p − l.
pub fn map_to_gfp(bits: &[u8], l: u32, p: u32) -> Result<Vec<u32>> {
    if l == 0 || 2 * l >= p {
        return Err(Error::InvalidArgument(format!("pair index {l} outside 1..=(p-1)/2 for p = {p}")));
    }
    Ok(bits.iter().map(|&b| if b == 0 { l } else { p - l }).collect())
}

/// x_n = Σ_l s_{c_l,n} mod p. A zero sum means the pairs were not UD.
pub fn net_multiplex(s: &[Vec<u32>], p: u32) -> Result<Vec<u32>> {
    let n = s.first().map_or(0, Vec::len);
    if s.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("group sequences differ in length".into()));
    }
    (0..n)
        .map(|i| {
            let x = s.iter().map(|row| row[i]).sum::<u32>() % p;
            if x == 0 {
                Err(Error::ZeroFfsp)
            } else {
                Ok(x)
            }
        })
        .collect()
}

/// P(y = x) = 1 − (p − 2)β; each other nonzero symbol has probability β.
/// For p = 2 the symbols are {0, 1} and there is no wrong symbol to draw.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DscChannel {
    p: u32,
    beta: f64,
}

impl DscChannel {
    pub fn new(p: u32, beta: f64) -> Result<Self> {
        let wrong = p.saturating_sub(2) as f64 * beta;
        if beta.is_nan() || beta < 0.0 || wrong.is_nan() || wrong >= 1.0 {
            return Err(Error::InvalidArgument(format!("beta = {beta} is invalid for p = {p}")));
        }
        Ok(DscChannel { p, beta })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn correct_probability(&self) -> f64 {
        1.0 - self.p.saturating_sub(2) as f64 * self.beta
    }

    pub fn transmit_symbol<R: Rng>(&self, x: u32, rng: &mut R) -> u32 {
        if self.p <= 2 || self.beta == 0.0 {
            return x;
        }
        let wrong = (self.p - 2) as f64 * self.beta;
        if rng.random::<f64>() >= wrong {
            return x;
        }
        // uniform over the p − 2 nonzero symbols other than x
        let mut y = rng.random_range(1..self.p - 1);
        if y >= x {
            y += 1;
        }
        y
    }

    pub fn transmit<R: Rng>(&self, x: &[u32], rng: &mut R) -> Vec<u32> {
        x.iter().map(|&s| self.transmit_symbol(s, rng)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetConfig {
    pub p: u32,
    pub m: usize,
    pub pairs: usize,
    pub users: usize,
    /// Bits per user; at most K_code / m.
    pub k_bits: usize,
    pub code: CodeSpec,
    /// Overrides the layer-first assignment.
    pub assignment: Option<Vec<Vrb>>,
}

/// Per-position multiplexer: group bit pattern ↔ T channel symbols.
#[derive(Clone, Debug)]
struct SymbolTable {
    /// Channel symbols for pattern index (group 1 most significant).
    encode: Vec<Vec<u32>>,
    /// Pattern for every received T-tuple, indexed by Σ y_t p^t.
    decode: Vec<u64>,
    /// The T-tuple is not an FFSP of any pattern.
    miss: Vec<bool>,
}

impl SymbolTable {
    fn build(mux: &MultiplexMatrix, p: u32) -> Result<Self> {
        let rows = mux.table_rows()?;
        let encode: Vec<Vec<u32>> = rows
            .iter()
            .map(|(w, _)| w.iter().map(|e| e.tuple()[0]).collect())
            .collect();
        let t = mux.columns();
        let size = (p as usize).pow(t as u32);
        let mut decode = vec![0u64; size];
        let mut miss = vec![true; size];
        for (idx, sym) in encode.iter().enumerate() {
            let key = sym.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize);
            decode[key] = idx as u64;
            miss[key] = false;
        }
        // nearest reachable entry in L1 distance; ties go to the entry with
        // the smaller symbol values, which is the first in ascending order
        let mut by_value: Vec<(Vec<u32>, u64)> =
            encode.iter().enumerate().map(|(i, s)| (s.clone(), i as u64)).collect();
        by_value.sort();
        for key in 0..size {
            if !miss[key] {
                continue;
            }
            let digits: Vec<u32> = (0..t).map(|i| ((key / (p as usize).pow(i as u32)) % p as usize) as u32).collect();
            let dist = |s: &[u32]| s.iter().zip(&digits).map(|(&a, &b)| a.abs_diff(b)).sum::<u32>();
            let best = by_value
                .iter()
                .min_by_key(|(s, _)| dist(s))
                .expect("table is nonempty");
            decode[key] = best.1;
        }
        Ok(SymbolTable { encode, decode, miss })
    }
}

#[derive(Clone, Debug)]
pub struct NetSystem {
    cfg: NetConfig,
    assignment: VrbAssignment,
    code: ChannelCode,
    mux: MultiplexMatrix,
    table: SymbolTable,
}

/// Bit estimates of one frame with receiver diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetOutcome {
    pub bits: Vec<Vec<u8>>,
    /// Received T-tuples that matched no table entry.
    pub table_misses: usize,
    /// Every group word decoded without a failure flag.
    pub converged: bool,
}

impl NetSystem {
    pub fn new(cfg: NetConfig) -> Result<Self> {
        let NetConfig { p, m, pairs, users, k_bits, .. } = cfg;
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let max_pairs = if p == 2 { 1 } else { (p as usize - 1) / 2 };
        if pairs == 0 || pairs > max_pairs {
            return Err(Error::InvalidArgument(format!("L = {pairs} outside 1..={max_pairs} for p = {p}")));
        }
        let assignment = match &cfg.assignment {
            Some(v) => VrbAssignment::explicit(v.clone(), m, pairs)?,
            None => assign_vrbs(users, m, pairs)?,
        };
        if assignment.users() != users {
            return Err(Error::InvalidArgument("assignment size differs from the user count".into()));
        }
        let code = ChannelCode::from_spec(&cfg.code, m * k_bits)?;
        if k_bits == 0 || code.k() < m * k_bits {
            return Err(Error::InvalidArgument(format!(
                "K = {k_bits} does not fit: code dimension {} < m·K = {}",
                code.k(),
                m * k_bits
            )));
        }
        let field = build_field(p, 1, None)?;
        let mux = if p == 2 {
            let code = EpCode::unchecked(field.clone(), vec![ElementPair::base(&field)], CodeKind::BinaryOrthogonal);
            MultiplexMatrix::all_ones(code)
        } else {
            build_cudc_matrix(&field, &enumerate_ud_codes(&field)?, pairs)?
        };
        let table = SymbolTable::build(&mux, p)?;
        Ok(NetSystem { cfg, assignment, code, mux, table })
    }

    pub fn config(&self) -> &NetConfig {
        &self.cfg
    }

    pub fn assignment(&self) -> &VrbAssignment {
        &self.assignment
    }

    pub fn code(&self) -> &ChannelCode {
        &self.code
    }

    /// The group multiplexer; pair l of the scheme is its (l−1)-th pair.
    pub fn mux(&self) -> &MultiplexMatrix {
        &self.mux
    }

    /// Channel symbols per codeword position.
    pub fn symbols_per_position(&self) -> usize {
        self.mux.columns()
    }

    /// Group bits carried per channel symbol, L / T.
    pub fn multiplex_efficiency(&self) -> f64 {
        self.cfg.pairs as f64 / self.mux.columns() as f64
    }

    pub fn codewords(&self, bits: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
        if bits.len() != self.cfg.users || bits.iter().any(|b| b.len() != self.cfg.k_bits) {
            return Err(Error::Dimension {
                expected: self.cfg.users * self.cfg.k_bits,
                got: bits.iter().map(Vec::len).sum(),
            });
        }
        bits.iter()
            .zip(self.assignment.vrbs())
            .map(|(b, vrb)| {
                let mut u = vec![0u8; self.code.k()];
                for (k, &bit) in b.iter().enumerate() {
                    u[k * self.cfg.m + vrb.layer] = bit;
                }
                self.code.encode(&u)
            })
            .collect()
    }

    /// v_{c_1}, …, v_{c_L}.
    pub fn group_words(&self, codewords: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
        (1..=self.cfg.pairs)
            .map(|l| {
                let members: Vec<&[u8]> =
                    self.assignment.group(l).into_iter().map(|j| codewords[j].as_slice()).collect();
                group_ffsp(&members, self.code.n())
            })
            .collect()
    }

    /// Channel symbols, T per codeword position.
    pub fn multiplex(&self, groups: &[Vec<u8>]) -> Vec<u32> {
        let n = self.code.n();
        let mut x = Vec::with_capacity(n * self.mux.columns());
        for pos in 0..n {
            let idx = groups.iter().fold(0usize, |acc, g| (acc << 1) | g[pos] as usize);
            x.extend_from_slice(&self.table.encode[idx]);
        }
        x
    }

    /// Table lookup, F_q2B, hard channel decoding per group and per-user
    /// extraction at the user's tuple position.
    pub fn receive(&self, y: &[u32]) -> Result<NetOutcome> {
        let t = self.mux.columns();
        let n = self.code.n();
        if y.len() != n * t {
            return Err(Error::Dimension { expected: n * t, got: y.len() });
        }
        let p = self.cfg.p as usize;
        let pairs = self.cfg.pairs;
        let mut groups = vec![vec![0u8; n]; pairs];
        let mut misses = 0;
        for (pos, chunk) in y.chunks(t).enumerate() {
            let key = chunk.iter().rev().fold(0usize, |acc, &d| acc * p + d as usize);
            if key >= self.table.decode.len() {
                return Err(Error::InvalidArgument(format!("received symbol outside GF({p})")));
            }
            misses += usize::from(self.table.miss[key]);
            let idx = self.table.decode[key];
            for (l, g) in groups.iter_mut().enumerate() {
                g[pos] = ((idx >> (pairs - 1 - l)) & 1) as u8;
            }
        }
        let mut converged = true;
        let decoded: Vec<Vec<u8>> = groups
            .iter()
            .map(|g| {
                let d = self.code.decode_hard(g);
                converged &= d.converged;
                d.message
            })
            .collect();
        let bits = self
            .assignment
            .vrbs()
            .iter()
            .map(|vrb| {
                (0..self.cfg.k_bits)
                    .map(|k| decoded[vrb.pair - 1][k * self.cfg.m + vrb.layer])
                    .collect()
            })
            .collect();
        Ok(NetOutcome { bits, table_misses: misses, converged })
    }

    pub fn run_frame<R: Rng>(&self, bits: &[Vec<u8>], channel: &DscChannel, rng: &mut R) -> Result<NetOutcome> {
        if channel.p() != self.cfg.p {
            return Err(Error::FieldMismatch);
        }
        let groups = self.group_words(&self.codewords(bits)?)?;
        let x = self.multiplex(&groups);
        self.receive(&channel.transmit(&x, rng))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn system(p: u32, m: usize, pairs: usize, users: usize, k_bits: usize, code: CodeSpec) -> NetSystem {
        NetSystem::new(NetConfig { p, m, pairs, users, k_bits, code, assignment: None }).unwrap()
    }

    #[test]
    fn layer_first_assignment() {
        let a = assign_vrbs(4, 4, 2).unwrap();
        assert_eq!(a.vrb(1), Vrb { layer: 0, pair: 1 });
        assert_eq!(a.vrb(4), Vrb { layer: 3, pair: 1 });
        assert_eq!(assign_vrbs(1, 4, 2).unwrap().vrb(1), Vrb { layer: 0, pair: 1 });
        let full = assign_vrbs(8, 4, 2).unwrap();
        assert_eq!(full.vrb(5), Vrb { layer: 0, pair: 2 });
        assert!(assign_vrbs(9, 4, 2).is_err());
        let dup = vec![Vrb { layer: 0, pair: 1 }, Vrb { layer: 0, pair: 1 }];
        assert!(VrbAssignment::explicit(dup, 4, 2).is_err());
    }

    #[test]
    fn grouping_and_mapping() {
        assert_eq!(group_ffsp(&[], 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(group_ffsp(&[&[1, 0, 1]], 3).unwrap(), vec![1, 0, 1]);
        assert!(group_ffsp(&[&[1, 0]], 3).is_err());
        assert_eq!(map_to_gfp(&[0, 0], 2, 5).unwrap(), vec![2, 2]);
        assert_eq!(map_to_gfp(&[1, 0], 1, 5).unwrap(), vec![4, 1]);
        assert!(map_to_gfp(&[0], 3, 5).is_err());
        assert_eq!(net_multiplex(&[vec![4, 1]], 5).unwrap(), vec![4, 1]);
        assert_eq!(net_multiplex(&[vec![1], vec![4]], 5).unwrap_err(), Error::ZeroFfsp);
    }

    #[test]
    fn gf5_symbols_never_zero() {
        let sys = system(5, 4, 2, 8, 3, CodeSpec::Demo16x12);
        let mut all: Vec<u32> = sys.table.encode.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, vec![1, 2, 3, 4]);
        assert_eq!(sys.multiplex_efficiency(), 2.0);
    }

    #[test]
    fn dsc_rates() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ch = DscChannel::new(5, 0.1).unwrap();
        let trials = 200_000;
        let ok = (0..trials).filter(|_| ch.transmit_symbol(3, &mut rng) == 3).count();
        let rate = ok as f64 / trials as f64;
        let sigma = (0.7f64 * 0.3 / trials as f64).sqrt();
        assert!((rate - 0.7).abs() < 3.0 * sigma, "{rate}");
        let two = DscChannel::new(2, 0.4).unwrap();
        assert!((0..1000).all(|i| two.transmit_symbol(i % 2, &mut rng) == i % 2));
        assert!(DscChannel::new(5, 0.34).is_err());
        assert!(DscChannel::new(5, -0.1).is_err());
    }

    #[test]
    fn noiseless_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (p, pairs) in [(2, 1), (5, 2), (17, 4), (17, 8)] {
            let sys = system(p, 4, pairs, 4 * pairs, 3, CodeSpec::Demo16x12);
            let ch = DscChannel::new(p, 0.0).unwrap();
            let bits: Vec<Vec<u8>> =
                (0..4 * pairs).map(|_| (0..3).map(|_| rng.random_range(0..2)).collect()).collect();
            let out = sys.run_frame(&bits, &ch, &mut rng).unwrap();
            assert_eq!(out.bits, bits, "p = {p}");
            assert_eq!(out.table_misses, 0);
        }
    }

    #[test]
    fn unreachable_symbols_map_to_nearest() {
        // GF(17) with a single pair (1, 16): 2..15 never occur
        let sys = system(17, 4, 1, 1, 3, CodeSpec::None);
        let n = sys.code().n();
        let mut y = vec![1u32; n];
        y[0] = 2;
        y[1] = 15;
        let out = sys.receive(&y).unwrap();
        assert_eq!(out.table_misses, 2);
        // 2 is nearer to 1 (bit 0); 15 is nearer to 16 (bit 1)
        assert_eq!(out.bits[0][0], 0);
    }
}
