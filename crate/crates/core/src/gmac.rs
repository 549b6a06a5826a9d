//! FFMA over a Gaussian multiple-access channel.
//!
//! J users place their bits on Ψ_B tuple positions (sparse layout), encode
//! with a shared binary systematic code, and send BPSK. The channel adds the
//! J signals (the CFSP r_n = 2 Σ_j v_{j,n} − J) plus Gaussian noise of
//! variance N0/2. The receiver turns each sample into an LLR for the parity
//! of Σ_j v_{j,n}, which is the FFSP codeword bit, decodes the FFSP codeword
//! and reads user j's bits at tuple position j − 1.

use crate::chancode::{ChannelCode, CodeSpec, MinSumConfig, NonSystematic};
use crate::error::{Error, Result};
use crate::gf::{build_field, FieldElement};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use std::fmt;
use std::str::FromStr;

/// Binomial weights below this are dropped when J exceeds
/// [`TRUNCATION_USERS`].
pub const TRUNCATION_FLOOR: f64 = 1e-12;
pub const TRUNCATION_USERS: usize = 64;

/// LLR assigned to coordinates known to carry 0 (unassigned blocks of the
/// shortened diagonal form).
pub const KNOWN_ZERO_LLR: f64 = 1e3;

/// Ω_r, Ω_v and 𝒫_r for one detector position.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectorTables {
    pub omega_r: Vec<f64>,
    pub omega_v: Vec<u8>,
    pub p_r: Vec<f64>,
    log_p: Vec<f64>,
}

impl DetectorTables {
    fn from_parts(omega_r: Vec<f64>, omega_v: Vec<u8>, log_p: Vec<f64>) -> Self {
        let p_r = log_p.iter().map(|l| l.exp()).collect();
        DetectorTables { omega_r, omega_v, p_r, log_p }
    }

    pub fn len(&self) -> usize {
        self.omega_r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega_r.is_empty()
    }
}

/// Full tables for J users: values −J, −J+2, …, J with binomial weights.
pub fn build_tables(users: usize) -> DetectorTables {
    assert!(users >= 1, "at least one user");
    let j = users as f64;
    let mut log_c = 0.0f64;
    let mut omega_r = Vec::with_capacity(users + 1);
    let mut omega_v = Vec::with_capacity(users + 1);
    let mut log_p = Vec::with_capacity(users + 1);
    let log_norm = j * std::f64::consts::LN_2;
    for iota in 0..=users {
        omega_r.push(-j + 2.0 * iota as f64);
        omega_v.push((iota % 2) as u8);
        log_p.push(log_c - log_norm);
        if iota < users {
            log_c += ((users - iota) as f64).ln() - ((iota + 1) as f64).ln();
        }
    }
    DetectorTables::from_parts(omega_r, omega_v, log_p)
}

/// The two-point table {−J, −J+2} with equal weights: at most one user
/// carries a 1 at a systematic information position.
pub fn two_point_tables(users: usize) -> DetectorTables {
    let j = users as f64;
    let half = 0.5f64.ln();
    DetectorTables::from_parts(vec![-j, -j + 2.0], vec![0, 1], vec![half, half])
}

/// Hard F_C2F: parity of the nearest Ω_r value. Midpoints go to the value
/// of smaller magnitude.
pub fn f_c2f_hard(r: f64, tables: &DetectorTables) -> u8 {
    let mut best = 0;
    for i in 1..tables.len() {
        let d_best = (r - tables.omega_r[best]).abs();
        let d = (r - tables.omega_r[i]).abs();
        if d < d_best || (d == d_best && tables.omega_r[i].abs() < tables.omega_r[best].abs()) {
            best = i;
        }
    }
    tables.omega_v[best]
}

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// log P(v_n = 0 | y) and log P(v_n = 1 | y), unnormalized by P(y).
fn log_parity_masses(y: f64, tables: &DetectorTables, n0: f64) -> (f64, f64) {
    let truncate = tables.len() > TRUNCATION_USERS + 1;
    let floor = TRUNCATION_FLOOR.ln();
    let terms = |parity: u8| {
        (0..tables.len())
            .filter(move |&i| tables.omega_v[i] == parity && !(truncate && tables.log_p[i] < floor))
            .map(move |i| tables.log_p[i] - (y - tables.omega_r[i]).powi(2) / n0)
    };
    (log_sum_exp(terms(0)), log_sum_exp(terms(1)))
}

/// (P0, P1) for the FFSP bit at one sample. The Gaussian normalization is
/// common to every term and cancels.
pub fn posterior(y: f64, tables: &DetectorTables, n0: f64) -> (f64, f64) {
    assert!(n0 > 0.0, "N0 must be positive");
    let (l0, l1) = log_parity_masses(y, tables, n0);
    let p1 = 1.0 / (1.0 + (l0 - l1).exp());
    let p0 = 1.0 / (1.0 + (l1 - l0).exp());
    (p0, p1)
}

/// log P0/P1 at one sample; noiseless input (`n0 == 0`) gives ±∞-like
/// certainty from the hard mapping.
pub fn llr(y: f64, tables: &DetectorTables, n0: f64) -> f64 {
    if n0 == 0.0 {
        return if f_c2f_hard(y, tables) == 0 { KNOWN_ZERO_LLR } else { -KNOWN_ZERO_LLR };
    }
    let (l0, l1) = log_parity_masses(y, tables, n0);
    (l0 - l1).clamp(-KNOWN_ZERO_LLR, KNOWN_ZERO_LLR)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Detector {
    /// Two-point tables on information positions, full tables on parity.
    Systematic,
    /// Full tables everywhere, with the code in non-systematic form.
    NonSystematic,
}

impl FromStr for Detector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "systematic" => Ok(Detector::Systematic),
            "nonsystematic" | "non-systematic" => Ok(Detector::NonSystematic),
            _ => Err(Error::Parse(format!("unknown detector `{s}`"))),
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Detector::Systematic => "systematic",
            Detector::NonSystematic => "nonsystematic",
        })
    }
}

/// Which table each codeword coordinate uses.
#[derive(Clone, Debug)]
pub struct TableSchedule {
    info: DetectorTables,
    parity: DetectorTables,
    k_info: usize,
    n: usize,
}

impl TableSchedule {
    pub fn table_at(&self, pos: usize) -> &DetectorTables {
        assert!(pos < self.n);
        if pos < self.k_info {
            &self.info
        } else {
            &self.parity
        }
    }

    pub fn info(&self) -> &DetectorTables {
        &self.info
    }

    pub fn parity(&self) -> &DetectorTables {
        &self.parity
    }
}

/// Per-position tables. The systematic split needs a systematic code.
pub fn split_tables(
    users: usize,
    detector: Detector,
    code_is_systematic: bool,
    k_info: usize,
    n: usize,
) -> Result<TableSchedule> {
    let full = build_tables(users);
    let info = match detector {
        Detector::Systematic if !code_is_systematic => return Err(Error::NotSystematic),
        Detector::Systematic => two_point_tables(users),
        Detector::NonSystematic => full.clone(),
    };
    Ok(TableSchedule { info, parity: full, k_info, n })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Sparse,
    /// Full-length diagonal form: information columns permuted.
    Diagonal,
    /// Each user sends only its own information block plus the parity.
    DiagonalShort,
}

impl FromStr for Layout {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparse" => Ok(Layout::Sparse),
            "diagonal" => Ok(Layout::Diagonal),
            "diagonal-short" => Ok(Layout::DiagonalShort),
            _ => Err(Error::Parse(format!("unknown layout `{s}`"))),
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layout::Sparse => "sparse",
            Layout::Diagonal => "diagonal",
            Layout::DiagonalShort => "diagonal-short",
        })
    }
}

/// u_j over GF(2^m): bit b_{j,k} at tuple position j − 1 of symbol k.
pub fn sparse_map(bits: &[u8], user: usize, m: usize) -> Result<Vec<FieldElement>> {
    if user == 0 || user > m {
        return Err(Error::InvalidArgument(format!("user {user} outside 1..={m}")));
    }
    let f = build_field(2, m, None)?;
    Ok(bits
        .iter()
        .map(|&b| if b == 1 { f.basis(user - 1) } else { f.zero() })
        .collect())
}

/// x = 2v − 1.
pub fn bpsk_mod(v: &[u8]) -> Vec<f64> {
    v.iter().map(|&b| if b == 1 { 1.0 } else { -1.0 }).collect()
}

/// y = Σ_j x_j + z with z ~ N(0, N0/2); `n0 == 0` is the noiseless channel.
pub fn cfsp_transmit<R: Rng>(xs: &[Vec<f64>], n0: f64, rng: &mut R) -> Result<Vec<f64>> {
    let len = xs.first().map_or(0, Vec::len);
    if xs.iter().any(|x| x.len() != len) {
        return Err(Error::InvalidArgument("signal lengths differ".into()));
    }
    if n0 < 0.0 {
        return Err(Error::InvalidArgument("noise level must be non-negative".into()));
    }
    let mut y: Vec<f64> = (0..len).map(|n| xs.iter().map(|x| x[n]).sum()).collect();
    if n0 > 0.0 {
        let normal = Normal::new(0.0, (n0 / 2.0).sqrt()).expect("positive variance");
        for v in &mut y {
            *v += normal.sample(rng);
        }
    }
    Ok(y)
}

/// J codeword rows with their layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodewordMatrix {
    pub rows: Vec<Vec<u8>>,
    pub layout: Layout,
    pub m: usize,
    /// Information bits per user.
    pub k_bits: usize,
    /// Information length of the code.
    pub k_info: usize,
}

/// Coordinate of sparse information bit (symbol k, tuple position i).
#[inline]
pub fn sparse_pos(k: usize, i: usize, m: usize) -> usize {
    k * m + i
}

/// Coordinate of the same bit in the diagonal form.
#[inline]
pub fn diagonal_pos(k: usize, i: usize, k_bits: usize) -> usize {
    i * k_bits + k
}

/// Permutes the information columns so that user j's bits occupy
/// columns (j−1)K … jK−1.
pub fn diagonal_rearrange(v: &CodewordMatrix) -> Result<CodewordMatrix> {
    if v.layout != Layout::Sparse {
        return Err(Error::InvalidArgument("diagonal rearrangement needs the sparse layout".into()));
    }
    let rows = v
        .rows
        .iter()
        .map(|row| {
            let mut out = row.clone();
            for k in 0..v.k_bits {
                for i in 0..v.m {
                    out[diagonal_pos(k, i, v.k_bits)] = row[sparse_pos(k, i, v.m)];
                }
            }
            out
        })
        .collect();
    Ok(CodewordMatrix { rows, layout: Layout::Diagonal, ..v.clone() })
}

/// [b_j, v_{j,red}]: user j's own block and the parity, of length
/// N − (K_info − K).
pub fn shorten(v: &CodewordMatrix, user: usize) -> Result<Vec<u8>> {
    if v.layout != Layout::Diagonal {
        return Err(Error::InvalidArgument("shortening needs the diagonal layout".into()));
    }
    let row = &v.rows[user - 1];
    let start = (user - 1) * v.k_bits;
    let mut out = row[start..start + v.k_bits].to_vec();
    out.extend_from_slice(&row[v.k_info..]);
    Ok(out)
}

/// The shared code in the form the detector expects.
#[derive(Clone, Debug)]
pub enum Encoder {
    Systematic(ChannelCode),
    NonSystematic(NonSystematic),
}

impl Encoder {
    pub fn n(&self) -> usize {
        self.code().n()
    }

    pub fn k(&self) -> usize {
        self.code().k()
    }

    pub fn code(&self) -> &ChannelCode {
        match self {
            Encoder::Systematic(c) => c,
            Encoder::NonSystematic(c) => c.inner(),
        }
    }

    pub fn encode(&self, msg: &[u8]) -> Result<Vec<u8>> {
        match self {
            Encoder::Systematic(c) => c.encode(msg),
            Encoder::NonSystematic(c) => c.encode(msg),
        }
    }

    fn decode(&self, llr: &[f64], ms: MinSumConfig) -> crate::chancode::Decoded {
        match self {
            Encoder::Systematic(c) => c.decode_soft(llr, ms),
            Encoder::NonSystematic(c) => c.decode_soft(llr, ms),
        }
    }
}

/// How the noise level of a sweep point is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnrAxis {
    /// E_b/N0 with E_b = E_s / R, R the code rate, E_s = 1.
    EbN0,
    /// Per-user E_s/N0: N0 = 1 / snr.
    UserSnr,
    /// Superimposed signal power over noise: N0 = J / snr.
    SumSnr,
}

impl FromStr for SnrAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ebn0" => Ok(SnrAxis::EbN0),
            "user-snr" => Ok(SnrAxis::UserSnr),
            "sum-snr" => Ok(SnrAxis::SumSnr),
            _ => Err(Error::Parse(format!("unknown SNR axis `{s}`"))),
        }
    }
}

impl fmt::Display for SnrAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnrAxis::EbN0 => "ebn0",
            SnrAxis::UserSnr => "user-snr",
            SnrAxis::SumSnr => "sum-snr",
        })
    }
}

impl SnrAxis {
    pub fn n0(self, snr_db: f64, rate: f64, users: usize) -> f64 {
        let lin = 10f64.powf(snr_db / 10.0);
        match self {
            SnrAxis::EbN0 => 1.0 / (rate * lin),
            SnrAxis::UserSnr => 1.0 / lin,
            SnrAxis::SumSnr => users as f64 / lin,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GmacConfig {
    pub users: usize,
    pub m: usize,
    pub k_bits: usize,
    pub code: CodeSpec,
    pub layout: Layout,
    pub detector: Detector,
    pub min_sum: MinSumConfig,
    /// Seed of the random mixing matrix of the non-systematic form.
    pub mix_seed: u64,
}

/// A built transceiver: codes and tables are shared by all frames.
#[derive(Clone, Debug)]
pub struct GmacSystem {
    cfg: GmacConfig,
    encoder: Encoder,
    schedule: TableSchedule,
    bpsk: DetectorTables,
    /// Codeword coordinate of each channel use, in transmission order.
    slots: Vec<usize>,
    /// Transmitting user (0-based) of each slot, `None` when all transmit.
    slot_owner: Vec<Option<usize>>,
}

/// Decoded bits of one frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameOutcome {
    pub bits: Vec<Vec<u8>>,
    pub converged: bool,
}

impl GmacSystem {
    pub fn new(cfg: GmacConfig) -> Result<Self> {
        let GmacConfig { users, m, k_bits, .. } = cfg;
        if users == 0 || users > m {
            return Err(Error::TooManyUsers { users, bound: m });
        }
        if k_bits == 0 {
            return Err(Error::InvalidArgument("K must be positive".into()));
        }
        let code = ChannelCode::from_spec(&cfg.code, m * k_bits)?;
        if code.k() < m * k_bits {
            return Err(Error::InvalidArgument(format!(
                "code dimension {} is below m·K = {}",
                code.k(),
                m * k_bits
            )));
        }
        let encoder = match cfg.detector {
            Detector::Systematic => Encoder::Systematic(code),
            Detector::NonSystematic => {
                if cfg.layout != Layout::Sparse {
                    return Err(Error::NotSystematic);
                }
                Encoder::NonSystematic(NonSystematic::new(code, cfg.mix_seed))
            }
        };
        let (n, k) = (encoder.n(), encoder.k());
        let schedule = split_tables(users, cfg.detector, matches!(encoder, Encoder::Systematic(_)), k, n)?;

        let (slots, slot_owner) = match cfg.layout {
            Layout::Sparse => ((0..n).collect(), vec![None; n]),
            Layout::Diagonal => {
                let mut slots: Vec<usize> = (0..n).collect();
                for kk in 0..k_bits {
                    for i in 0..m {
                        slots[diagonal_pos(kk, i, k_bits)] = sparse_pos(kk, i, m);
                    }
                }
                (slots, vec![None; n])
            }
            Layout::DiagonalShort => {
                let mut slots = Vec::with_capacity(users * k_bits + n - k);
                let mut owner = Vec::with_capacity(users * k_bits + n - k);
                for j in 0..users {
                    for kk in 0..k_bits {
                        slots.push(sparse_pos(kk, j, m));
                        owner.push(Some(j));
                    }
                }
                slots.extend(k..n);
                owner.extend(std::iter::repeat_n(None, n - k));
                (slots, owner)
            }
        };
        Ok(GmacSystem { cfg, encoder, schedule, bpsk: two_point_tables(1), slots, slot_owner })
    }

    pub fn config(&self) -> &GmacConfig {
        &self.cfg
    }

    pub fn encoder(&self) -> &Encoder {
        &self.encoder
    }

    pub fn schedule(&self) -> &TableSchedule {
        &self.schedule
    }

    /// Code rate K_code / N used by the E_b/N0 axis.
    pub fn rate(&self) -> f64 {
        self.encoder.code().rate()
    }

    /// Channel uses per frame.
    pub fn channel_uses(&self) -> usize {
        self.slots.len()
    }

    /// Information word of user j (1-based): its bits on tuple position j − 1.
    pub fn info_word(&self, user: usize, bits: &[u8]) -> Vec<u8> {
        let mut u = vec![0u8; self.encoder.k()];
        for (kk, &b) in bits.iter().enumerate() {
            u[sparse_pos(kk, user - 1, self.cfg.m)] = b;
        }
        u
    }

    /// The users' codewords v_j in codeword coordinates.
    pub fn codewords(&self, bits: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
        if bits.len() != self.cfg.users || bits.iter().any(|b| b.len() != self.cfg.k_bits) {
            return Err(Error::Dimension { expected: self.cfg.users * self.cfg.k_bits, got: bits.iter().map(Vec::len).sum() });
        }
        bits.iter()
            .enumerate()
            .map(|(j, b)| self.encoder.encode(&self.info_word(j + 1, b)))
            .collect()
    }

    /// The noiseless CFSP per channel use.
    pub fn cfsp(&self, codewords: &[Vec<u8>]) -> Vec<f64> {
        let users = self.cfg.users as f64;
        self.slots
            .iter()
            .zip(&self.slot_owner)
            .map(|(&pos, owner)| match owner {
                Some(j) => 2.0 * codewords[*j][pos] as f64 - 1.0,
                None => 2.0 * codewords.iter().map(|v| v[pos] as f64).sum::<f64>() - users,
            })
            .collect()
    }

    /// Noise for one frame, one sample per codeword coordinate so that
    /// every layout sees the same realization at the same coordinate.
    pub fn draw_noise<R: Rng>(&self, n0: f64, rng: &mut R) -> Vec<f64> {
        let n = self.encoder.n();
        if n0 == 0.0 {
            return vec![0.0; n];
        }
        let normal = Normal::new(0.0, (n0 / 2.0).sqrt()).expect("positive variance");
        (0..n).map(|_| normal.sample(rng)).collect()
    }

    /// Received samples in transmission order.
    pub fn transmit(&self, codewords: &[Vec<u8>], noise: &[f64]) -> Vec<f64> {
        self.cfsp(codewords)
            .into_iter()
            .zip(&self.slots)
            .map(|(r, &pos)| r + noise[pos])
            .collect()
    }

    /// Per-coordinate LLRs of the FFSP codeword bits.
    pub fn llrs(&self, y: &[f64], n0: f64) -> Vec<f64> {
        let mut out = vec![KNOWN_ZERO_LLR; self.encoder.n()];
        for ((&pos, owner), &yn) in self.slots.iter().zip(&self.slot_owner).zip(y) {
            let table = if owner.is_some() { &self.bpsk } else { self.schedule.table_at(pos) };
            out[pos] = llr(yn, table, n0);
        }
        out
    }

    /// Receive pipeline: LLRs, channel decoding of the FFSP codeword, and
    /// per-user extraction at tuple position j − 1.
    pub fn receive(&self, y: &[f64], n0: f64) -> Result<FrameOutcome> {
        if y.len() != self.slots.len() {
            return Err(Error::Dimension { expected: self.slots.len(), got: y.len() });
        }
        let decoded = self.encoder.decode(&self.llrs(y, n0), self.cfg.min_sum);
        let bits = (0..self.cfg.users)
            .map(|j| (0..self.cfg.k_bits).map(|kk| decoded.message[sparse_pos(kk, j, self.cfg.m)]).collect())
            .collect();
        Ok(FrameOutcome { bits, converged: decoded.converged })
    }

    /// One complete frame.
    pub fn run_frame<R: Rng>(&self, bits: &[Vec<u8>], n0: f64, rng: &mut R) -> Result<FrameOutcome> {
        let cws = self.codewords(bits)?;
        let noise = self.draw_noise(n0, rng);
        let y = self.transmit(&cws, &noise);
        self.receive(&y, n0)
    }

    /// Codeword matrix of the frame in the sparse layout.
    pub fn codeword_matrix(&self, bits: &[Vec<u8>]) -> Result<CodewordMatrix> {
        Ok(CodewordMatrix {
            rows: self.codewords(bits)?,
            layout: Layout::Sparse,
            m: self.cfg.m,
            k_bits: self.cfg.k_bits,
            k_info: self.encoder.k(),
        })
    }
}
