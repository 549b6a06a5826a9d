use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ffma_core::chancode::{build_regular_ldpc, ChannelCode, LDPC_COLUMN_WEIGHT};
use ffma_core::ep_code::{build_orthogonal, build_psi_b, build_ud_aiep, enumerate_ud_codes, eta, verify_uspm};
use ffma_core::harness::{
    dsc_csv, gmac_csv, gmac_system, monotonicity_violations, net_system, run_dsc_sweep_with,
    run_gmac_sweep_with, DEFAULT_BATCH, DEFAULT_MAX_BITS, DEFAULT_MIN_ERRORS,
};
use ffma_core::multiplex::{build_cudc_matrix, loading_factor};
use ffma_core::{
    build_field, CodeSpec, Detector, EpCode, FieldSpec, Layout, MinSumConfig, Mode, MultiplexMatrix,
    SimulationConfig, SnrAxis, StopRule,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "ffma", version, about = "Finite-field multiple access toolkit", args_override_self = true)]
struct Cli {
    /// Flat `key = value` file; keys are the long flag names of the
    /// subcommand. Flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code, multiplexer or field and print it.
    Construct(ConstructArgs),
    /// Exhaustively check the USPM property of an EP code file.
    Verify(CodeFileArgs),
    /// Print the FFSP decoding table of an EP code file as CSV.
    Tables(CodeFileArgs),
    /// Monte Carlo PUER sweep over a Gaussian MAC.
    SimulateGmac(GmacArgs),
    /// Monte Carlo PUER sweep of the network scheme over a DSC.
    SimulateDsc(DscArgs),
    /// Replay a worked example (1, 2, 4, 5 or 6).
    ReplayExample { example: u32 },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    /// Default field descriptor for --p/--m.
    Field,
    /// UD-AIEP code of --users users over GF(p).
    Ud,
    /// All disjoint UD-AIEP codes of GF(p).
    Xi,
    /// Orthogonal AIEP code over --field with --pairs pairs per layer.
    Orthogonal,
    /// Ψ_B over GF(2^m).
    PsiB,
    /// C-UDC multiplexer for --users users over GF(p).
    Cudc,
    /// Regular LDPC parity-check matrix in alist form.
    Ldpc,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 5)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Field descriptor `p=.. m=.. poly=g0,..,gm`.
    #[arg(long)]
    field: Option<String>,
    #[arg(long, default_value_t = 2)]
    users: usize,
    #[arg(long, default_value_t = 1)]
    pairs: usize,
    #[arg(long, default_value_t = 1200)]
    n: usize,
    #[arg(long, default_value_t = 600)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CodeFileArgs {
    /// EP code file (`# field <descriptor>` header, one pair per line).
    #[arg(long)]
    code: PathBuf,
    /// A_M as T rows of J bits; defaults to the all-ones column.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StopArgs {
    /// E_min: stop a point after this many bit errors.
    #[arg(long, default_value_t = DEFAULT_MIN_ERRORS)]
    trials_min_errors: u64,
    /// B_max: stop a point after this many simulated bits.
    #[arg(long, default_value_t = DEFAULT_MAX_BITS)]
    max_bits: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Frames per batch between stop-rule checks.
    #[arg(long, default_value_t = DEFAULT_BATCH)]
    batch: usize,
    /// CSV output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GmacArgs {
    #[arg(long)]
    users: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    kbits: usize,
    #[arg(long, default_value = "paper16x12")]
    code: CodeSpec,
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    snr_list: Vec<f64>,
    /// How --snr-list is read.
    #[arg(long, default_value = "ebn0")]
    axis: SnrAxis,
    #[arg(long, default_value = "sparse")]
    mode: Layout,
    #[arg(long, default_value = "systematic")]
    detector: Detector,
    #[arg(long, default_value_t = MinSumConfig::default().max_iters)]
    max_iters: usize,
    #[arg(long, default_value_t = MinSumConfig::default().normalization)]
    normalization: f64,
    #[command(flatten)]
    stop: StopArgs,
}

#[derive(Args, Debug)]
struct DscArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    pairs: usize,
    #[arg(long)]
    users: usize,
    /// Bits per user (default: code dimension / m).
    #[arg(long)]
    kbits: Option<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    beta_list: Vec<f64>,
    #[arg(long, default_value = "rs255")]
    code: CodeSpec,
    #[command(flatten)]
    stop: StopArgs,
}

const SUBCOMMANDS: [&str; 6] = ["construct", "verify", "tables", "simulate-gmac", "simulate-dsc", "replay-example"];

/// Turns `key = value` lines into flags placed right after the subcommand,
/// ahead of the user's own flags, so that the command line overrides them.
fn config_flags(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected `key = value`", path.display(), no + 1);
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            bail!("{}:{}: nested config files are not supported", path.display(), no + 1);
        }
        match value {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            _ => out.push(format!("--{key}={value}")),
        }
    }
    Ok(out)
}

fn expand_args(args: Vec<String>) -> Result<Vec<String>> {
    let mut config = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().context("--config needs a file")?);
        } else if let Some(v) = a.strip_prefix("--config=") {
            config = Some(v.to_owned());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let flags = config_flags(Path::new(&path))?;
    let pos = rest
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.as_str()))
        .context("--config needs a subcommand")?;
    rest.splice(pos + 1..pos + 1, flags);
    Ok(rest)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_mux(args: &CodeFileArgs) -> Result<MultiplexMatrix> {
    let text = std::fs::read_to_string(&args.code).with_context(|| format!("reading {}", args.code.display()))?;
    let code = EpCode::from_text(&text)?;
    Ok(match &args.matrix {
        None => MultiplexMatrix::all_ones(code),
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let rows: Vec<Vec<u8>> = text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(|l| {
                    l.chars()
                        .map(|c| match c {
                            '0' => Ok(0),
                            '1' => Ok(1),
                            _ => bail!("A_M rows must be 0/1 strings"),
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            // file rows are columns of A_M
            let users = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != users) {
                bail!("A_M rows differ in length");
            }
            let a = (0..users).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
            MultiplexMatrix::new(code, a)?
        }
    })
}

fn field_from(args: &ConstructArgs) -> Result<FieldSpec> {
    Ok(match &args.field {
        Some(desc) => desc.parse()?,
        None => build_field(args.p, args.m, None)?,
    })
}

fn construct(args: &ConstructArgs) -> Result<()> {
    let text = match args.kind {
        Kind::Field => format!("{}\n", field_from(args)?),
        Kind::Ud => build_ud_aiep(&build_field(args.p, 1, None)?, args.users)?.to_text(),
        Kind::Xi => {
            let f = build_field(args.p, 1, None)?;
            let codes = enumerate_ud_codes(&f)?;
            let mut s = format!("# {} codes found, eta_p = {}\n", codes.len(), eta(args.p));
            for c in codes {
                s.push_str(&c.to_text());
            }
            s
        }
        Kind::Orthogonal => build_orthogonal(&field_from(args)?, args.pairs)?.to_text(),
        Kind::PsiB => build_psi_b(args.m)?.to_text(),
        Kind::Cudc => {
            let f = build_field(args.p, 1, None)?;
            let mux = build_cudc_matrix(&f, &enumerate_ud_codes(&f)?, args.users)?;
            let lf = loading_factor(&mux);
            format!(
                "{}# A_M, one line per column\n{}# loading factor {}\n",
                mux.code().to_text(),
                mux.to_text(),
                lf.raw()
            )
        }
        Kind::Ldpc => build_regular_ldpc(args.n, args.k, LDPC_COLUMN_WEIGHT, args.seed)?.to_alist(),
    };
    emit(&text, args.out.as_deref())
}

fn stop_into(cfg: &mut SimulationConfig, s: &StopArgs) {
    cfg.stop = StopRule { min_errors: s.trials_min_errors, max_bits: s.max_bits };
    cfg.seed = s.seed;
    cfg.workers = s.workers;
    cfg.batch = s.batch;
}

fn warn_monotonicity<'a>(results: impl Iterator<Item = &'a ffma_core::TrialResult>, reversed: bool) {
    let mut r: Vec<_> = results.collect();
    if reversed {
        r.reverse();
    }
    for i in monotonicity_violations(&r) {
        eprintln!("warning: PUER rises beyond 2 sigma between sweep points {} and {}", i - 1, i);
    }
}

fn simulate_gmac(a: &GmacArgs) -> Result<()> {
    let mut cfg = SimulationConfig::new(Mode::Gmac);
    cfg.users = a.users;
    cfg.m = a.m;
    cfg.k_bits = a.kbits;
    cfg.code = a.code.clone();
    cfg.points = a.snr_list.clone();
    cfg.axis = a.axis;
    cfg.layout = a.mode;
    cfg.detector = a.detector;
    cfg.min_sum = MinSumConfig { max_iters: a.max_iters, normalization: a.normalization };
    stop_into(&mut cfg, &a.stop);
    cfg.validate()?;
    let sys = gmac_system(&cfg)?;
    let rows = run_gmac_sweep_with(&cfg, &sys)?;
    let sorted = cfg.points.windows(2).all(|w| w[0] <= w[1]);
    if sorted {
        warn_monotonicity(rows.iter().map(|r| &r.result), false);
    }
    emit(&gmac_csv(&cfg, sys.rate(), &rows), a.stop.out.as_deref())
}

fn simulate_dsc(a: &DscArgs) -> Result<()> {
    let mut cfg = SimulationConfig::new(Mode::Dsc);
    cfg.p = a.p;
    cfg.m = a.m;
    cfg.pairs = a.pairs;
    cfg.users = a.users;
    cfg.code = a.code.clone();
    cfg.k_bits = match a.kbits {
        Some(k) => k,
        None => ChannelCode::from_spec(&a.code, a.m)?.k() / a.m,
    };
    cfg.points = a.beta_list.clone();
    stop_into(&mut cfg, &a.stop);
    cfg.validate()?;
    let sys = net_system(&cfg)?;
    let rows = run_dsc_sweep_with(&cfg, &sys)?;
    // PUER should fall as beta falls
    let descending = cfg.points.windows(2).all(|w| w[0] >= w[1]);
    if descending {
        warn_monotonicity(rows.iter().map(|r| &r.result), false);
    }
    let noiseless_errors: u64 = rows.iter().filter(|r| r.beta == 0.0).map(|r| r.result.bit_errors).sum();
    emit(&dsc_csv(&cfg, &rows), a.stop.out.as_deref())?;
    if noiseless_errors > 0 {
        bail!("bit errors on a noiseless channel");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Construct(a) => construct(a)?,
        Command::Verify(a) => {
            let mux = load_mux(a)?;
            let report = verify_uspm(mux.code(), mux.matrix())?;
            let ok = report.is_certified(mux.code().kind(), mux.field().p());
            println!(
                "users {}  distinct FFSPs {}  zero FFSP {}  {}",
                report.users,
                report.distinct,
                report.zero_ffsp,
                if ok { "USPM" } else { "NOT USPM" }
            );
            if let Some(w) = &report.witness {
                println!("collision: {w:?}");
            }
            if !ok {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Tables(a) => print!("{}", load_mux(a)?.table_csv()?),
        Command::SimulateGmac(a) => simulate_gmac(a)?,
        Command::SimulateDsc(a) => simulate_dsc(a)?,
        Command::ReplayExample { example } => print!("{}", ffma_core::replay::replay(*example)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let args = match expand_args(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match run(Cli::parse_from(args)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
