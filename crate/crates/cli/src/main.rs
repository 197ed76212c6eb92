//! `qwhash`: hash files, run the statistical suites, sweep coin angles,
//! benchmark, and emit test vectors.
//!
//! Exit status: 0 on success, 1 on runtime or I/O failure (including a
//! failed `--assert`), 2 on usage errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use qwalk_hash::bench::{bench_lengths, fit_line, peak_rss_kib, BenchPoint};
use qwalk_hash::hash;
use qwalk_hash::params::{parse_angle, HashParams, Instance, ParamDescriptor};
use qwalk_hash::stats::checks::{self, Check};
use qwalk_hash::stats::output::{
    collision_table, diffusion_table, uniform_table, write_evaluation_files, write_grid_files,
};
use qwalk_hash::stats::{
    evaluate, stability_sweep_with, Dataset, Evaluation, GridSpec, MessageSource, TrialConfig,
};
use qwalk_hash::vectors::vectors_json;

/// Bad flag values that clap cannot see (invalid parameter combinations,
/// grid indices, trial counts). Exits with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    Usage(e.to_string()).into()
}

/// `println!` that reports write failures instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(io::stdout(), $($arg)*)?
    };
}

#[derive(Parser, Debug)]
#[command(
    name = "qwhash",
    version,
    about = "Quantum-walk hash digests and their statistics"
)]
struct Cli {
    /// Worker threads for trial execution (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hash a file (or stdin) and print the digest.
    Hash(HashArgs),
    /// Avalanche test: mean and spread of changed digest bits.
    TestDiffusion(TestArgs),
    /// Per-position flip counts.
    TestUniform(TestArgs),
    /// Byte-hit histogram against the binomial model.
    TestCollision(TestArgs),
    /// Jensen-Shannon sensitivity to flipped, inserted and deleted bits.
    TestSensitivity(TestArgs),
    /// Coin-angle stability sweep.
    Sweep(SweepArgs),
    /// Hash timing against message length and node count.
    Bench(BenchArgs),
    /// Print the canonical test vectors.
    Vectors(VectorArgs),
}

fn parse_instance(s: &str) -> Result<Instance, String> {
    s.parse().map_err(|e: qwalk_hash::Error| e.to_string())
}

fn parse_angle_arg(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Preset instance: QHFM-P-296 (or 296), QHFM-P-264 (or 264).
    #[arg(long, env = "QWHASH_INSTANCE", default_value = "QHFM-P-296", value_parser = parse_instance)]
    instance: Instance,
    /// JSON parameter descriptor; overrides the preset.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Node count (odd).
    #[arg(long)]
    n: Option<usize>,
    /// Bits per node.
    #[arg(long)]
    m: Option<u32>,
    /// Probability digits used.
    #[arg(long)]
    l: Option<u32>,
    /// Coin angle for 0 bits, e.g. `pi/4` or `0.785`.
    #[arg(long, value_parser = parse_angle_arg)]
    theta0: Option<f64>,
    /// Coin angle for 1 bits.
    #[arg(long, value_parser = parse_angle_arg)]
    theta1: Option<f64>,
    /// Initial-state angle.
    #[arg(long, value_parser = parse_angle_arg)]
    alpha: Option<f64>,
}

impl ParamArgs {
    fn resolve(&self) -> anyhow::Result<HashParams> {
        let mut p = self.instance.params();
        if let Some(path) = &self.params {
            let text =
                fs::read_to_string(path).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
            p = ParamDescriptor::from_json(&text)
                .and_then(|d| d.to_params())
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
        }
        if let Some(n) = self.n {
            p.n = n;
        }
        if let Some(m) = self.m {
            p.m = m;
        }
        if let Some(l) = self.l {
            p.l = l;
        }
        if let Some(t) = self.theta0 {
            p.theta0 = t;
        }
        if let Some(t) = self.theta1 {
            p.theta1 = t;
        }
        if let Some(a) = self.alpha {
            p.alpha = a;
        }
        p.validate().map_err(usage)?;
        Ok(p)
    }

    fn label(&self, p: &HashParams) -> String {
        if *p == self.instance.params() {
            self.instance.name().to_string()
        } else {
            format!("custom-{}", p.output_bits())
        }
    }
}

#[derive(Args, Debug)]
struct HashArgs {
    /// Input file; stdin when omitted or `-`.
    input: Option<PathBuf>,
    #[command(flatten)]
    params: ParamArgs,
    /// Space-separated byte pairs.
    #[arg(long)]
    pretty: bool,
}

#[derive(Args, Debug, Clone)]
struct TrialArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Number of trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed; a fresh one is drawn and recorded when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Length of synthetic messages in bits.
    #[arg(long, default_value_t = qwalk_hash::stats::DEFAULT_SYNTHETIC_BITS)]
    msg_bits: usize,
    /// JSON-lines dataset; messages are drawn from it instead of synthesized.
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Text field of each dataset record.
    #[arg(long, default_value = "abstract")]
    field: String,
    /// Directory for report files.
    #[arg(long, default_value = "qwhash-reports")]
    out_dir: PathBuf,
    /// Fail (exit 1) when an indicator leaves its documented band.
    #[arg(long = "assert")]
    assert_bands: bool,
}

impl TrialArgs {
    fn config(&self, default_trials: usize) -> anyhow::Result<TrialConfig> {
        let params = self.params.resolve()?;
        let source = match &self.dataset {
            Some(path) => MessageSource::Dataset(Arc::new(Dataset::load_jsonl(path, &self.field)?)),
            None => MessageSource::Synthetic {
                bits: self.msg_bits,
            },
        };
        let seed = self.seed.unwrap_or_else(rand::random);
        let cfg = TrialConfig::new(params, self.trials.unwrap_or(default_trials), seed)
            .with_source(source);
        cfg.validate().map_err(usage)?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
struct TestArgs {
    #[command(flatten)]
    trials: TrialArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    trials: TrialArgs,
    /// Subintervals of (0, pi/2).
    #[arg(long, default_value_t = qwalk_hash::stats::sweep::DEFAULT_DIVISIONS)]
    divisions: u32,
    /// Use every k-th interior endpoint.
    #[arg(long, default_value_t = 1)]
    grid_step: u32,
    /// Explicit endpoint indices, e.g. `15,20`; overrides --grid-step.
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<u32>>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Message lengths in bits.
    #[arg(long, value_delimiter = ',', default_value = "10000,20000,40000")]
    lengths: Vec<usize>,
    /// Extra node counts to time at the longest length.
    #[arg(long, value_delimiter = ',')]
    compare_n: Vec<usize>,
    /// Repetitions per point (best time is kept).
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VectorArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("qwhash: error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) if e.is::<Usage>() => {
            eprintln!("error: {e}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(e) => match e.downcast_ref::<io::Error>() {
            Some(io) if io.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
            _ => {
                eprintln!("qwhash: error: {e:#}");
                ExitCode::from(1)
            }
        },
    }
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Hash(a) => cmd_hash(a),
        Command::TestDiffusion(a) => cmd_test(a, Suite::Diffusion),
        Command::TestUniform(a) => cmd_test(a, Suite::Uniform),
        Command::TestCollision(a) => cmd_test(a, Suite::Collision),
        Command::TestSensitivity(a) => cmd_test(a, Suite::Sensitivity),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Vectors(a) => cmd_vectors(a),
    }
}

fn cmd_hash(a: HashArgs) -> anyhow::Result<ExitCode> {
    let params = a.params.resolve()?;
    let data = match a.input.as_deref() {
        None => read_stdin()?,
        Some(p) if p.as_os_str() == "-" => read_stdin()?,
        Some(p) => fs::read(p).map_err(|e| anyhow::anyhow!("{}: {e}", p.display()))?,
    };
    let digest = hash(&data, &params)?;
    if a.pretty {
        out!("{}", digest.to_hex_pretty());
    } else {
        out!("{}", digest.to_hex());
    }
    Ok(ExitCode::SUCCESS)
}

fn read_stdin() -> anyhow::Result<Vec<u8>> {
    let mut buf = Vec::new();
    io::stdin()
        .read_to_end(&mut buf)
        .map_err(|e| anyhow::anyhow!("stdin: {e}"))?;
    Ok(buf)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Suite {
    Diffusion,
    Uniform,
    Collision,
    Sensitivity,
}

impl Suite {
    fn stem(self) -> &'static str {
        match self {
            Suite::Diffusion => "diffusion",
            Suite::Uniform => "uniform",
            Suite::Collision => "collision",
            Suite::Sensitivity => "sensitivity",
        }
    }
}

fn header(cfg: &TrialConfig, label: &str) -> anyhow::Result<()> {
    out!(
        "{label}: n={} m={} l={} theta0={} theta1={} alpha={}",
        cfg.params.n,
        cfg.params.m,
        cfg.params.l,
        cfg.params.theta0,
        cfg.params.theta1,
        cfg.params.alpha
    );
    out!(
        "trials={} seed={} source={}",
        cfg.trials,
        cfg.seed,
        serde_json::to_string(&cfg.source.descriptor())?
    );
    out!();
    Ok(())
}

fn print_checks(list: &[Check]) -> anyhow::Result<bool> {
    let mut ok = true;
    for c in list {
        out!(
            "[{}] {:<20} {:>12.6} in [{:.6}, {:.6}]",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.lo,
            c.hi
        );
        ok &= c.pass;
    }
    Ok(ok)
}

fn cmd_test(a: TestArgs, suite: Suite) -> anyhow::Result<ExitCode> {
    let cfg = a.trials.config(10_000)?;
    let label = a.trials.params.label(&cfg.params);
    header(&cfg, &label)?;
    let e: Evaluation = evaluate(&cfg, suite == Suite::Sensitivity)?;

    let checks = match suite {
        Suite::Diffusion => {
            write!(io::stdout(), "{}", diffusion_table(&label, &e.diffusion))?;
            checks::diffusion_checks(&e.diffusion)
        }
        Suite::Uniform => {
            write!(io::stdout(), "{}", uniform_table(&label, &e.uniform))?;
            checks::uniform_checks(&e.uniform)
        }
        Suite::Collision => {
            write!(io::stdout(), "{}", collision_table(&label, &e.collision))?;
            checks::collision_checks(&e.collision)
        }
        Suite::Sensitivity => {
            let s = e.sensitivity.as_ref().expect("sensitivity requested");
            out!(
                "mean D_JS(P0,P1)={:.6e}  mean D_JS(P0,P2)={:.6e}  mean D_JS(P0,P3)={:.6e}",
                s.js_means[0],
                s.js_means[1],
                s.js_means[2]
            );
            for (j, d) in s.exhibit.digests.iter().enumerate() {
                out!("H(msg{j}) = {d}");
            }
            for (j, pos) in s.exhibit.changed_positions.iter().enumerate() {
                out!("C{}: {} changed bits", j + 1, pos.len());
            }
            vec![Check::within(
                "mean JS (flip)",
                s.js_means[0],
                f64::MIN_POSITIVE,
                1.0,
            )]
        }
    };

    let files = write_evaluation_files(&a.trials.out_dir, suite.stem(), &e)?;
    out!();
    for f in files {
        out!("wrote {f}");
    }
    if a.trials.assert_bands {
        out!();
        if !print_checks(&checks)? {
            eprintln!("qwhash: error: indicator outside its band");
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(a: SweepArgs) -> anyhow::Result<ExitCode> {
    let grid = match &a.k {
        Some(ks) => GridSpec::new(a.divisions, ks.clone()),
        None => GridSpec::with_step(a.divisions, a.grid_step),
    }
    .map_err(usage)?;
    let cfg = a
        .trials
        .config(qwalk_hash::stats::sweep::DEFAULT_CELL_TRIALS)?;
    header(&cfg, &format!("sweep over {} cells", grid.cells()))?;
    out!(
        "{:>4} {:>4} {:>10} {:>10} {:>10} {:>9} {:>8} {:>10} {:>8} {:>10} {:>8}",
        "k0",
        "k1",
        "JS(P0,P1)",
        "JS(P0,P2)",
        "JS(P0,P3)",
        "P(%)",
        "dP(%)",
        "T",
        "dT",
        "D_KL",
        "|d-dt|"
    );
    let total = grid.cells();
    let mut done = 0;
    let mut failed = false;
    let mut write_err: Option<io::Error> = None;
    let sweep = stability_sweep_with(&grid, &cfg, |c| {
        done += 1;
        let mut text = format!(
            "{:>4} {:>4} {:>10.3e} {:>10.3e} {:>10.3e} {:>9.4} {:>8.4} {:>10.2} {:>8.3} {:>10.3e} {:>8.3}\n",
            c.k0,
            c.k1,
            c.js_means[0],
            c.js_means[1],
            c.js_means[2],
            c.mean_changed_prob,
            c.std_changed_prob.unwrap_or(f64::NAN),
            c.uniform_mean,
            c.uniform_std.unwrap_or(f64::NAN),
            c.kl,
            c.byte_diff_gap
        );
        if a.trials.assert_bands {
            let bad: Vec<_> = checks::cell_checks(c)
                .into_iter()
                .filter(|c| !c.pass)
                .collect();
            for b in &bad {
                text += &format!(
                    "  [FAIL] {} = {:.6} not in [{:.6}, {:.6}]\n",
                    b.name, b.value, b.lo, b.hi
                );
            }
            failed |= !bad.is_empty();
        }
        if write_err.is_none() {
            write_err = io::stdout().write_all(text.as_bytes()).err();
        }
        eprintln!("cell {done}/{total}");
    })?;
    if let Some(e) = write_err {
        return Err(e.into());
    }
    let files = write_grid_files(&a.trials.out_dir, "sweep", &sweep)?;
    out!();
    for f in files {
        out!("wrote {f}");
    }
    if failed {
        eprintln!("qwhash: error: some cells left their bands");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(a: BenchArgs) -> anyhow::Result<ExitCode> {
    let params = a.params.resolve()?;
    let mut points = bench_lengths(&params, &a.lengths, a.reps)?;
    let longest = *a.lengths.iter().max().unwrap_or(&10_000);
    let mut by_n: Vec<BenchPoint> = Vec::new();
    for &n in &a.compare_n {
        let p = HashParams { n, ..params };
        p.validate().map_err(usage)?;
        by_n.extend(bench_lengths(&p, &[longest], a.reps)?);
    }
    let fit = fit_line(
        &points
            .iter()
            .map(|p| (p.bits as f64, p.seconds))
            .collect::<Vec<_>>(),
    );
    let rss = peak_rss_kib();

    if a.json {
        points.extend(by_n);
        let out = serde_json::json!({
            "points": points,
            "slope_seconds_per_bit": fit.map(|f| f.0),
            "intercept_seconds": fit.map(|f| f.1),
            "peak_rss_kib": rss,
        });
        out!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(ExitCode::SUCCESS);
    }

    let base = points.first().map(|p| (p.bits as f64, p.seconds));
    out!(
        "{:>6} {:>10} {:>12} {:>12} {:>10} {:>10}",
        "n",
        "bits",
        "seconds",
        "ns/step",
        "len ratio",
        "time ratio"
    );
    for p in points.iter().chain(&by_n) {
        let (b0, t0) = base.unwrap();
        out!(
            "{:>6} {:>10} {:>12.6} {:>12.2} {:>10.2} {:>10.2}",
            p.n,
            p.bits,
            p.seconds,
            p.seconds * 1e9 / p.bits as f64,
            p.bits as f64 / b0,
            p.seconds / t0
        );
    }
    if let Some((slope, intercept)) = fit {
        out!();
        out!(
            "fit: {:.3} ns/bit, intercept {:.3e} s",
            slope * 1e9,
            intercept
        );
    }
    if let Some(kib) = rss {
        out!("peak RSS: {kib} KiB");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_vectors(a: VectorArgs) -> anyhow::Result<ExitCode> {
    let json = vectors_json()?;
    match a.out {
        Some(path) => {
            fs::write(&path, json).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?
        }
        None => io::stdout().write_all(json.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}
