//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 validation failure, 3 decoding or
//! attack failure.

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::attack::{self, AttackReport};
use crate::codes::{
    bruteforce_min_distance, bruteforce_rank_decode, gab_decode, sample_mrd_code, sample_resistant_code,
    GabidulinCode, HiddenCode, DEFAULT_GUARD,
};
use crate::error::Error;
use crate::field::{ExtField, FieldOps};
use crate::gpt;
use crate::params::{self, SearchQuery, System, SystemParams};
use crate::qsum;
use crate::textio;

#[derive(Parser, Debug)]
#[command(name = "twgpt", version, about = "Rank-metric codes, GPT encryption and structural attacks")]
struct Cli {
    /// Seed for the ChaCha20 generator; drawn from the OS when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Enumeration guard for brute-force decoding, as a power of two.
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..=120))]
    guard: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a GPT key pair.
    Keygen(KeygenArgs),
    /// Encrypt a message file under a public key.
    Encrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long)]
        msg: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decrypt a ciphertext file with a secret key.
    Decrypt {
        #[arg(long)]
        sec: PathBuf,
        #[arg(long)]
        ct: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the q-sum dimension profile of a code or public key.
    QsumProfile { input: PathBuf },
    /// Classify a code or public key by its q-sum profile.
    Distinguish { input: PathBuf },
    /// Run a structural attack on a public key.
    Attack {
        #[arg(value_enum)]
        kind: AttackKind,
        input: PathBuf,
        /// Candidate budget for the exhaustive attack.
        #[arg(long)]
        budget: Option<u128>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// Key-size tables and parameter search.
    Params {
        #[command(subcommand)]
        action: ParamsAction,
    },
    /// Cross-check the decoders and MRD property against brute force.
    Selftest,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Gab,
    Twisted,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AttackKind {
    Overbeck,
    Exhaustive,
}

#[derive(Args, Debug)]
struct KeygenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Extension degree; defaults to `n` (gab) or `s0 * 2^ell` (twisted).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    ell: usize,
    /// Bottom of the doubling subfield chain; defaults to `n`.
    #[arg(long)]
    s0: Option<usize>,
    #[arg(long, default_value_t = 0)]
    lambda: usize,
    /// Distortion rank; defaults to 1 when `lambda > 0`.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long = "pub")]
    public: PathBuf,
    #[arg(long)]
    sec: PathBuf,
}

#[derive(Subcommand, Debug)]
enum ParamsAction {
    /// Key size and rate table.
    Table {
        /// Use the twelve reference rows.
        #[arg(long)]
        paper: bool,
        #[command(flatten)]
        row: RowArgs,
    },
    /// Resistant twisted GPT parameters meeting size and work-factor targets.
    Search {
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Inclusive range `lo..=hi` or a single value.
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        #[arg(long, value_parser = parse_range)]
        k: RangeInclusive<usize>,
        #[arg(long, value_parser = parse_range, default_value = "1..=3")]
        ell: RangeInclusive<usize>,
        #[arg(long, default_value_t = 0)]
        lambda: usize,
        #[arg(long, default_value_t = 0)]
        s: usize,
        #[arg(long)]
        max_key_bytes: Option<u128>,
        #[arg(long, default_value_t = 0.0)]
        min_bits: f64,
    },
}

#[derive(Args, Debug)]
struct RowArgs {
    #[arg(long)]
    system: Option<System>,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    lambda: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long)]
    t_loi: Option<usize>,
    #[arg(long)]
    lambda_prime: Option<usize>,
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `lo..=hi` or an integer, got `{s}`");
    match s.split_once("..=") {
        Some((lo, hi)) => {
            let lo = lo.trim().parse().map_err(|_| bad())?;
            let hi = hi.trim().parse().map_err(|_| bad())?;
            Ok(lo..=hi)
        }
        None => s.trim().parse().map(|v| v..=v).map_err(|_| bad()),
    }
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DecodingFailure(_) | Error::AmbiguousDecoding(_) | Error::TooLargeToEnumerate { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type CliResult = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult {
    fs::write(path, text).map_err(|e| fail(2, format!("cannot write {}: {e}", path.display())))
}

/// Runs the CLI with std streams.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let mut rng = match cli.seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    };
    let guard = 1u128 << cli.guard;
    let result = match cli.command {
        Command::Keygen(args) => keygen(args, &mut rng, out),
        Command::Encrypt { public, msg, out: path } => encrypt(&public, &msg, &path, &mut rng),
        Command::Decrypt { sec, ct, out: path } => decrypt(&sec, &ct, &path, guard),
        Command::QsumProfile { input } => qsum_profile(&input, out),
        Command::Distinguish { input } => distinguish(&input, out),
        Command::Attack { kind, input, budget, trials } => run_attack(kind, &input, budget, trials, &mut rng, out),
        Command::Params { action } => run_params(action, out),
        Command::Selftest => selftest(guard, &mut rng, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult {
    out.write_all(text.as_bytes()).map_err(|e| fail(2, format!("cannot write output: {e}")))
}

fn keygen(a: KeygenArgs, rng: &mut ChaCha20Rng, out: &mut dyn Write) -> CliResult {
    let s = a.s.unwrap_or(if a.lambda > 0 { 1 } else { 0 });
    let code = match a.family {
        Family::Gab => {
            let field = ExtField::new(a.q, a.m.unwrap_or(a.n))?;
            HiddenCode::Gabidulin(GabidulinCode::random(&field, a.n, a.k, rng)?)
        }
        Family::Twisted => {
            let s0 = a.s0.unwrap_or(a.n);
            let chain: Vec<usize> = (0..=a.ell).map(|j| s0 << j).collect();
            let m = *chain.last().unwrap();
            if a.m.is_some_and(|given| given != m) {
                return Err(fail(2, format!("twisted keys use m = s0 * 2^ell = {m}")));
            }
            let field = ExtField::new(a.q, m)?.with_chain(chain)?;
            HiddenCode::Twisted(sample_resistant_code(&field, a.n, a.k, a.ell, rng)?)
        }
    };
    let (pk, sk) = gpt::keygen(code, a.lambda, s, rng)?;
    write(&a.public, &textio::write_public_key(&pk))?;
    write(&a.sec, &textio::write_secret_key(&sk))?;
    emit(out, &format!("keygen n={} lambda={} k={} t={} s={s}\n", pk.n, pk.lambda, pk.k, pk.t))
}

fn encrypt(public: &Path, msg: &Path, path: &Path, rng: &mut ChaCha20Rng) -> CliResult {
    let pk = textio::read_public_key(&read(public)?)?;
    let m = textio::read_vector(pk.field(), &read(msg)?)?;
    let c = gpt::encrypt(&pk, &m, rng)?;
    write(path, &textio::write_vector(pk.field(), &c))
}

fn decrypt(sec: &Path, ct: &Path, path: &Path, guard: u128) -> CliResult {
    let sk = textio::read_secret_key(&read(sec)?)?;
    let c = textio::read_vector(sk.field(), &read(ct)?)?;
    let m = gpt::decrypt_with_guard(&sk, &c, guard)?;
    write(path, &textio::write_vector(sk.field(), &m))
}

fn qsum_profile(input: &Path, out: &mut dyn Write) -> CliResult {
    let g = textio::read_generator(&read(input)?)?;
    let p = qsum::profile(&g)?;
    emit(out, &p.report(&qsum::classify_profile(&p)))
}

fn distinguish(input: &Path, out: &mut dyn Write) -> CliResult {
    let g = textio::read_generator(&read(input)?)?;
    let c = qsum::classify(&g)?;
    let a = attack::overbeck_applicability(&g)?;
    let mut text = format!("class={}\n", c.class);
    if let Some(d) = &c.diagnostic {
        text.push_str(&format!("diagnostic={d}\n"));
    }
    let ci = a.critical_i.map(|i| i.to_string()).unwrap_or_else(|| "none".into());
    text.push_str(&format!("critical_i={ci} dual_dim={} moore_structured={}\n", a.dual_dim, a.moore_structured));
    emit(out, &text)
}

fn run_attack(
    kind: AttackKind,
    input: &Path,
    budget: Option<u128>,
    trials: usize,
    rng: &mut ChaCha20Rng,
    out: &mut dyn Write,
) -> CliResult {
    let pk = textio::read_public_key(&read(input)?)?;
    let budget = budget.unwrap_or(u128::MAX);
    let mut reports: Vec<AttackReport> = Vec::new();
    for trial in 0..trials.max(1) {
        let mut trial_rng = ChaCha20Rng::seed_from_u64(rng.next_u64());
        let r = match kind {
            AttackKind::Overbeck => attack::overbeck_attack(&pk, &mut trial_rng)?,
            AttackKind::Exhaustive => attack::exponential_attack(&pk, budget, &mut trial_rng)?,
        };
        emit(out, &(r.campaign_line(trial) + "\n"))?;
        reports.push(r);
    }
    let name = reports[0].attack;
    emit(out, &(attack::campaign_summary(name, &reports) + "\n"))?;
    match reports.iter().find(|r| !r.success) {
        None => Ok(()),
        Some(r) => Err(fail(3, format!("{name} attack failed: {} (dualdim={})", r.diagnostic, r.dual_dimension))),
    }
}

fn custom_row(r: RowArgs) -> std::result::Result<SystemParams, Failure> {
    let system = r.system.ok_or_else(|| fail(1, "give --paper or --system with its parameters"))?;
    let k = r.k.ok_or(Error::MissingField("k"))?;
    let n = r.n.ok_or(Error::MissingField("n"))?;
    let p = match system {
        System::McEliece => SystemParams::mceliece(k, n, r.m.unwrap_or(0), r.tau.unwrap_or(0)),
        System::Loidreau => SystemParams::loidreau(k, n, 0, 0, 0),
        System::TwistedGpt => SystemParams::twisted_gpt(k, n, 0, 0, 0, 0, 0),
        System::QcMdpc => SystemParams::qc_mdpc(k, n),
    };
    Ok(SystemParams {
        q: r.q,
        m: r.m,
        ell: r.ell,
        lambda: r.lambda,
        s: r.s,
        t: r.t,
        tau: r.tau,
        t_loi: r.t_loi,
        lambda_prime: r.lambda_prime,
        ..p
    })
}

fn run_params(action: ParamsAction, out: &mut dyn Write) -> CliResult {
    match action {
        ParamsAction::Table { paper, row } => {
            let rows = if paper { params::reference_rows() } else { vec![custom_row(row)?] };
            emit(out, &params::render_table(&rows)?)
        }
        ParamsAction::Search { q, n, k, ell, lambda, s, max_key_bytes, min_bits } => {
            let query = SearchQuery { q, n_range: n, k_range: k, ell_range: ell, lambda, s, max_key_bytes, min_exp_bits: min_bits };
            let found = params::feasible_params(&query);
            emit(out, &params::render_table(&found)?)?;
            emit(out, &format!("found={}\n", found.len()))
        }
    }
}

fn selftest(guard: u128, rng: &mut ChaCha20Rng, out: &mut dyn Write) -> CliResult {
    let mut failures = Vec::new();
    let mut check = |name: &str, ok: bool, out: &mut dyn Write| -> CliResult {
        emit(out, &format!("selftest {name} {}\n", if ok { "PASS" } else { "FAIL" }))?;
        if !ok {
            failures.push(name.to_string());
        }
        Ok(())
    };

    // interpolation decoder against the nearest-codeword oracle
    let f4 = ExtField::new(2, 4)?;
    let gab = GabidulinCode::random(&f4, 4, 2, rng)?;
    let g = gab.generator();
    let mut agree = true;
    for _ in 0..200 {
        let r: Vec<_> = (0..4).map(|_| f4.random(rng)).collect();
        let fast = gab_decode(&f4, gab.alpha(), 2, &r).ok().map(|d| d.codeword);
        let slow = bruteforce_rank_decode(&g, &r, 1, guard).ok().map(|d| d.codeword);
        agree &= fast == slow;
    }
    check("gab_decode_matches_oracle", agree, out)?;

    let f8 = ExtField::new(2, 8)?.with_chain(vec![4, 8])?;
    let mut mrd = true;
    for _ in 0..2 {
        let tw = sample_mrd_code(&f8, 4, 2, 1, rng)?;
        mrd &= bruteforce_min_distance(&tw.generator(), guard.max(1 << 17))? == 3;
    }
    check("twisted_code_is_mrd", mrd, out)?;

    let f16 = ExtField::new(2, 16)?.with_chain(vec![8, 16])?;
    let tw = sample_resistant_code(&f16, 8, 3, 1, rng)?;
    let (pk, sk) = gpt::keygen(HiddenCode::Twisted(tw), 0, 0, rng)?;
    let m: Vec<_> = (0..3).map(|_| f16.random(rng)).collect();
    let c = gpt::encrypt(&pk, &m, rng)?;
    let round_trip = gpt::decrypt_with_guard(&sk, &c, guard.max(DEFAULT_GUARD)).is_ok_and(|x| x == m);
    check("twisted_gpt_round_trip", round_trip, out)?;

    if failures.is_empty() {
        Ok(())
    } else {
        Err(fail(2, format!("selftest failed: {}", failures.join(", "))))
    }
}
