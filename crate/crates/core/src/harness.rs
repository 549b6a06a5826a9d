//! Monte Carlo sweeps with a stop rule, PUER accounting and CSV output.
//!
//! Frames run in fixed-size batches. Within a batch they are spread over a
//! rayon pool; the stop rule is checked only between batches and every
//! frame draws from its own ChaCha8 stream seeded by (master, point, frame),
//! so the rows do not depend on the number of workers.

use crate::chancode::{CodeSpec, MinSumConfig};
use crate::error::{Error, Result};
use crate::gmac::{Detector, GmacConfig, GmacSystem, Layout, SnrAxis};
use crate::net::{DscChannel, NetConfig, NetSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::function::erf::erfc;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

pub const DEFAULT_MIN_ERRORS: u64 = 100;
pub const DEFAULT_MAX_BITS: u64 = 100_000_000;
pub const DEFAULT_BATCH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StopRule {
    /// E_min: stop once this many bit errors are seen.
    pub min_errors: u64,
    /// B_max: stop once this many bits are simulated.
    pub max_bits: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule { min_errors: DEFAULT_MIN_ERRORS, max_bits: DEFAULT_MAX_BITS }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Gmac,
    Dsc,
    Verify,
    Tables,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gmac" => Ok(Mode::Gmac),
            "dsc" => Ok(Mode::Dsc),
            "verify" => Ok(Mode::Verify),
            "tables" => Ok(Mode::Tables),
            _ => Err(Error::Config(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationConfig {
    pub mode: Mode,
    pub p: u32,
    pub m: usize,
    /// L, used by the DSC mode.
    pub pairs: usize,
    pub users: usize,
    pub k_bits: usize,
    pub code: CodeSpec,
    /// SNR points in dB (GMAC) or β values (DSC).
    pub points: Vec<f64>,
    pub axis: SnrAxis,
    pub layout: Layout,
    pub detector: Detector,
    pub min_sum: MinSumConfig,
    pub stop: StopRule,
    pub seed: u64,
    /// Rayon threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Frames per batch between stop-rule checks.
    pub batch: usize,
}

impl SimulationConfig {
    /// Defaults for the given mode; the caller sets the rest.
    pub fn new(mode: Mode) -> Self {
        SimulationConfig {
            mode,
            p: 2,
            m: 4,
            pairs: 1,
            users: 1,
            k_bits: 3,
            code: CodeSpec::Demo16x12,
            points: Vec::new(),
            axis: SnrAxis::EbN0,
            layout: Layout::Sparse,
            detector: Detector::Systematic,
            min_sum: MinSumConfig::default(),
            stop: StopRule::default(),
            seed: 1,
            workers: None,
            batch: DEFAULT_BATCH,
        }
    }

    pub fn bits_per_frame(&self) -> u64 {
        (self.users * self.k_bits) as u64
    }

    pub fn validate(&self) -> Result<()> {
        if self.users == 0 {
            return Err(Error::Config("users must be at least 1".into()));
        }
        if self.k_bits == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if self.stop.min_errors < 1 {
            return Err(Error::Config("min_errors must be at least 1".into()));
        }
        if self.stop.max_bits < self.bits_per_frame() {
            return Err(Error::Config(format!(
                "max_bits = {} is below one frame (J·K = {})",
                self.stop.max_bits,
                self.bits_per_frame()
            )));
        }
        if self.batch == 0 {
            return Err(Error::Config("batch must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if matches!(self.mode, Mode::Gmac | Mode::Dsc) && self.points.is_empty() {
            return Err(Error::Config("the sweep list is empty".into()));
        }
        if self.points.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("sweep points must be finite".into()));
        }
        Ok(())
    }
}

/// Counters of one sweep point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrialResult {
    pub frames: u64,
    pub bits_simulated: u64,
    pub bit_errors: u64,
    pub user_errors: Vec<u64>,
    pub converged_frames: u64,
    pub table_misses: u64,
    pub symbols: u64,
    /// Stopped by B_max before E_min errors were seen.
    pub capped: bool,
    pub elapsed: Duration,
}

impl TrialResult {
    fn empty(users: usize) -> Self {
        TrialResult { user_errors: vec![0; users], ..Default::default() }
    }

    fn merge(mut self, other: TrialResult) -> TrialResult {
        self.frames += other.frames;
        self.bits_simulated += other.bits_simulated;
        self.bit_errors += other.bit_errors;
        for (a, b) in self.user_errors.iter_mut().zip(&other.user_errors) {
            *a += b;
        }
        self.converged_frames += other.converged_frames;
        self.table_misses += other.table_misses;
        self.symbols += other.symbols;
        self
    }

    pub fn convergence_rate(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            self.converged_frames as f64 / self.frames as f64
        }
    }

    pub fn table_miss_rate(&self) -> f64 {
        if self.symbols == 0 {
            0.0
        } else {
            self.table_misses as f64 / self.symbols as f64
        }
    }

    /// Binomial standard deviation of the PUER estimate.
    pub fn sigma(&self) -> f64 {
        if self.bits_simulated == 0 {
            return 0.0;
        }
        let p = self.bit_errors as f64 / self.bits_simulated as f64;
        (p * (1.0 - p) / self.bits_simulated as f64).sqrt()
    }
}

/// Total bit errors over J·K·frames.
pub fn puer(r: &TrialResult) -> Result<f64> {
    if r.bits_simulated == 0 {
        return Err(Error::InvalidArgument("no bits simulated".into()));
    }
    Ok(r.bit_errors as f64 / r.bits_simulated as f64)
}

/// Q(sqrt(2 Eb/N0)) = erfc(sqrt(Eb/N0)) / 2.
pub fn theoretical_bpsk(ebn0_db: f64) -> f64 {
    if ebn0_db == f64::INFINITY {
        return 0.0;
    }
    0.5 * erfc(10f64.powf(ebn0_db / 10.0).sqrt())
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of frame `trial` at sweep point `point`.
pub fn trial_seed(master: u64, point: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ point) ^ trial)
}

fn random_bits<R: Rng>(users: usize, k_bits: usize, rng: &mut R) -> Vec<Vec<u8>> {
    (0..users).map(|_| (0..k_bits).map(|_| rng.random_range(0..2u8)).collect()).collect()
}

struct FrameStats {
    user_errors: Vec<u64>,
    converged: bool,
    misses: u64,
    symbols: u64,
}

fn count_errors(sent: &[Vec<u8>], got: &[Vec<u8>]) -> Vec<u64> {
    sent.iter()
        .zip(got)
        .map(|(a, b)| a.iter().zip(b).filter(|(x, y)| x != y).count() as u64)
        .collect()
}

/// Runs one sweep point under the stop rule.
fn run_point<F>(cfg: &SimulationConfig, point: u64, frame: F) -> Result<TrialResult>
where
    F: Fn(&mut ChaCha8Rng) -> Result<FrameStats> + Sync,
{
    let start = Instant::now();
    let per_frame = cfg.bits_per_frame();
    let mut total = TrialResult::empty(cfg.users);
    let mut next = 0u64;
    while total.bit_errors < cfg.stop.min_errors && total.bits_simulated < cfg.stop.max_bits {
        let room = (cfg.stop.max_bits - total.bits_simulated).div_ceil(per_frame);
        let count = (cfg.batch as u64).min(room);
        let batch = (next..next + count)
            .into_par_iter()
            .map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, point, trial));
                let s = frame(&mut rng)?;
                let errors: u64 = s.user_errors.iter().sum();
                Ok(TrialResult {
                    frames: 1,
                    bits_simulated: per_frame,
                    bit_errors: errors,
                    user_errors: s.user_errors,
                    converged_frames: u64::from(s.converged),
                    table_misses: s.misses,
                    symbols: s.symbols,
                    ..Default::default()
                })
            })
            .try_reduce(|| TrialResult::empty(cfg.users), |a, b| Ok(a.merge(b)))?;
        total = total.merge(batch);
        next += count;
    }
    total.capped = total.bit_errors < cfg.stop.min_errors;
    total.elapsed = start.elapsed();
    Ok(total)
}

fn in_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[derive(Clone, Debug)]
pub struct GmacRow {
    pub snr_db: f64,
    pub n0: f64,
    pub users: usize,
    pub layout: Layout,
    pub detector: Detector,
    pub result: TrialResult,
}

impl GmacRow {
    pub fn puer(&self) -> f64 {
        puer(&self.result).unwrap_or(0.0)
    }
}

pub fn gmac_system(cfg: &SimulationConfig) -> Result<GmacSystem> {
    GmacSystem::new(GmacConfig {
        users: cfg.users,
        m: cfg.m,
        k_bits: cfg.k_bits,
        code: cfg.code.clone(),
        layout: cfg.layout,
        detector: cfg.detector,
        min_sum: cfg.min_sum,
        mix_seed: cfg.seed,
    })
}

pub fn run_gmac_sweep(cfg: &SimulationConfig) -> Result<Vec<GmacRow>> {
    cfg.validate()?;
    let sys = gmac_system(cfg)?;
    run_gmac_sweep_with(cfg, &sys)
}

/// Sweep with an already built system (codes are expensive to build).
pub fn run_gmac_sweep_with(cfg: &SimulationConfig, sys: &GmacSystem) -> Result<Vec<GmacRow>> {
    cfg.validate()?;
    in_pool(cfg.workers, || {
        cfg.points
            .iter()
            .enumerate()
            .map(|(idx, &snr_db)| {
                let n0 = cfg.axis.n0(snr_db, sys.rate(), cfg.users);
                let result = run_point(cfg, idx as u64, |rng| {
                    let bits = random_bits(cfg.users, cfg.k_bits, rng);
                    let out = sys.run_frame(&bits, n0, rng)?;
                    Ok(FrameStats {
                        user_errors: count_errors(&bits, &out.bits),
                        converged: out.converged,
                        misses: 0,
                        symbols: sys.channel_uses() as u64,
                    })
                })?;
                Ok(GmacRow { snr_db, n0, users: cfg.users, layout: cfg.layout, detector: cfg.detector, result })
            })
            .collect()
    })?
}

#[derive(Clone, Debug)]
pub struct DscRow {
    pub p: u32,
    pub m: usize,
    pub users: usize,
    pub beta: f64,
    pub result: TrialResult,
}

impl DscRow {
    pub fn puer(&self) -> f64 {
        puer(&self.result).unwrap_or(0.0)
    }
}

pub fn net_system(cfg: &SimulationConfig) -> Result<NetSystem> {
    NetSystem::new(NetConfig {
        p: cfg.p,
        m: cfg.m,
        pairs: cfg.pairs,
        users: cfg.users,
        k_bits: cfg.k_bits,
        code: cfg.code.clone(),
        assignment: None,
    })
}

pub fn run_dsc_sweep(cfg: &SimulationConfig) -> Result<Vec<DscRow>> {
    cfg.validate()?;
    let sys = net_system(cfg)?;
    run_dsc_sweep_with(cfg, &sys)
}

pub fn run_dsc_sweep_with(cfg: &SimulationConfig, sys: &NetSystem) -> Result<Vec<DscRow>> {
    cfg.validate()?;
    let symbols = (sys.code().n() * sys.symbols_per_position()) as u64;
    in_pool(cfg.workers, || {
        cfg.points
            .iter()
            .enumerate()
            .map(|(idx, &beta)| {
                let ch = DscChannel::new(cfg.p, beta)?;
                let result = run_point(cfg, idx as u64, |rng| {
                    let bits = random_bits(cfg.users, cfg.k_bits, rng);
                    let out = sys.run_frame(&bits, &ch, rng)?;
                    Ok(FrameStats {
                        user_errors: count_errors(&bits, &out.bits),
                        converged: out.converged,
                        misses: out.table_misses as u64,
                        symbols,
                    })
                })?;
                Ok(DscRow { p: cfg.p, m: cfg.m, users: cfg.users, beta, result })
            })
            .collect()
    })?
}

fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// GMAC CSV. `#` lines give each point on all three SNR axes.
pub fn gmac_csv(cfg: &SimulationConfig, rate: f64, rows: &[GmacRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# axis={} code={} rate={:.6} users={} m={} k={} seed={} min_errors={} max_bits={}",
        cfg.axis, cfg.code, rate, cfg.users, cfg.m, cfg.k_bits, cfg.seed, cfg.stop.min_errors, cfg.stop.max_bits
    );
    for r in rows {
        let _ = writeln!(
            out,
            "# snr_db={} n0={:.6e} ebn0_db={:.4} user_snr_db={:.4} sum_snr_db={:.4}",
            r.snr_db,
            r.n0,
            db(1.0 / (rate * r.n0)),
            db(1.0 / r.n0),
            db(r.users as f64 / r.n0)
        );
    }
    out.push_str("snr_db,users,mode,detector,bits_simulated,bit_errors,puer,decoder_convergence_rate,capped\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.6e},{:.6},{}",
            r.snr_db,
            r.users,
            r.layout,
            r.detector,
            r.result.bits_simulated,
            r.result.bit_errors,
            r.puer(),
            r.result.convergence_rate(),
            r.result.capped
        );
    }
    out
}

pub fn dsc_csv(cfg: &SimulationConfig, rows: &[DscRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# code={} pairs={} k={} seed={} min_errors={} max_bits={}",
        cfg.code, cfg.pairs, cfg.k_bits, cfg.seed, cfg.stop.min_errors, cfg.stop.max_bits
    );
    out.push_str("p,m,users,beta,bits_simulated,bit_errors,puer,table_miss_rate,capped\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.6e},{:.6e},{}",
            r.p,
            r.m,
            r.users,
            r.beta,
            r.result.bits_simulated,
            r.result.bit_errors,
            r.puer(),
            r.result.table_miss_rate(),
            r.result.capped
        );
    }
    out
}

/// Indices i where PUER rises from point i − 1 to i by more than two
/// combined standard deviations (points ordered by improving channel).
pub fn monotonicity_violations(results: &[&TrialResult]) -> Vec<usize> {
    (1..results.len())
        .filter(|&i| {
            let (a, b) = (results[i - 1], results[i]);
            let (pa, pb) = (puer(a).unwrap_or(0.0), puer(b).unwrap_or(0.0));
            pb - pa > 2.0 * (a.sigma().powi(2) + b.sigma().powi(2)).sqrt()
        })
        .collect()
}
