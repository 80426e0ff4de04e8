use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cousr::miner::{mine, MinerConfig, Variant};
use cousr::oracle::{oracle_chusrs, OracleLimits};
use cousr::report::{rules_to_csv, RunReport};
use cousr::seqdb::{parse_aliases, SequenceDatabase};
use cousr::synthetic::{random_config, random_small_db, synthetic_db, SmallDbParams, SyntheticSpec};
use cousr::units::{parse_fraction, Utility};
use cousr::MinedRule;

#[derive(Parser)]
#[command(name = "cousr", version, about = "Mine correlated high-utility sequential rules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine rules and write them as CSV.
    Mine(MineArgs),
    /// Compare the miner with exhaustive enumeration.
    Verify(VerifyArgs),
    /// Sweep variants and minimum utilities, one CSV row per point.
    Bench(BenchArgs),
}

#[derive(Args)]
struct Input {
    /// Sequence database.
    #[arg(long, requires = "utils", conflicts_with = "synthetic")]
    db: Option<PathBuf>,
    /// Unit utility table, one `item price` pair per line.
    #[arg(long)]
    utils: Option<PathBuf>,
    /// Generated database: `n_seq,n_items,avg_len,seed`.
    #[arg(long)]
    synthetic: Option<SyntheticSpec>,
}

#[derive(Args)]
struct Thresholds {
    #[arg(long, default_value = "0")]
    min_conf: String,
    #[arg(long, default_value = "0")]
    min_bond: String,
    #[arg(long, default_value = "0")]
    min_lift: String,
    /// Stop growing a consequent whose rule is below min-conf when the
    /// antecedent cannot grow either.
    #[arg(long)]
    conf_prune: bool,
    /// Maximum number of items on either side of a rule.
    #[arg(long)]
    max_side: Option<usize>,
}

#[derive(Args)]
struct MineArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    min_util: String,
    #[command(flatten)]
    thresholds: Thresholds,
    #[arg(long, default_value = "s6s7")]
    variant: Variant,
    /// Rules CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON run report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// `item label` lines used to name items in the CSV.
    #[arg(long)]
    aliases: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value = "0")]
    min_util: String,
    #[command(flatten)]
    thresholds: Thresholds,
    /// Check this many random small databases with random thresholds
    /// instead of a given database.
    #[arg(long, conflicts_with_all = ["db", "synthetic"])]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: Input,
    /// Comma-separated minimum utilities.
    #[arg(long, value_delimiter = ',', required = true)]
    min_util: Vec<String>,
    #[command(flatten)]
    thresholds: Thresholds,
    /// Comma-separated variants, or `all`.
    #[arg(long, default_value = "all")]
    variant: String,
    /// Bench CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON array of per-point run reports.
    #[arg(long)]
    report: Option<PathBuf>,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn fail(code: u8) -> impl FnOnce(anyhow::Error) -> Failure {
    move |error| Failure { code, error }
}

const PARSE: u8 = 2;
const CONFIG: u8 = 3;
const ORACLE_LIMIT: u8 = 4;

fn load(input: &Input) -> Result<SequenceDatabase, Failure> {
    if let Some(spec) = &input.synthetic {
        return Ok(synthetic_db(spec));
    }
    let (Some(db), Some(utils)) = (&input.db, &input.utils) else {
        return Err(fail(PARSE)(anyhow!("either --db with --utils or --synthetic is required")));
    };
    let read = |p: &Path| fs::read_to_string(p).with_context(|| format!("reading {}", p.display()));
    let db_text = read(db).map_err(fail(PARSE))?;
    let ut_text = read(utils).map_err(fail(PARSE))?;
    SequenceDatabase::from_text(&db_text, &ut_text)
        .with_context(|| format!("loading {}", db.display()))
        .map_err(fail(PARSE))
}

fn config(min_util: &str, t: &Thresholds) -> Result<MinerConfig, Failure> {
    let mut cfg = MinerConfig::new(
        Utility::parse_threshold(min_util).context("--min-util").map_err(fail(CONFIG))?,
        parse_fraction(&t.min_conf).context("--min-conf").map_err(fail(CONFIG))?,
        parse_fraction(&t.min_bond).context("--min-bond").map_err(fail(CONFIG))?,
        parse_fraction(&t.min_lift).context("--min-lift").map_err(fail(CONFIG))?,
    );
    cfg.enable_conf_prune = t.conf_prune;
    cfg.max_side = t.max_side;
    cfg.validate().map_err(|e| fail(CONFIG)(e.into()))?;
    Ok(cfg)
}

/// Writes through a sibling temporary file so readers never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, contents)
        .and_then(|_| fs::rename(&tmp, path))
        .with_context(|| format!("writing {}", path.display()))
        .map_err(fail(PARSE))
}

fn emit(path: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn cmd_mine(args: &MineArgs) -> Result<u8, Failure> {
    let db = load(&args.input)?;
    let cfg = config(&args.min_util, &args.thresholds)?.with_variant(args.variant);
    let aliases = match &args.aliases {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).map_err(fail(PARSE))?;
            Some(parse_aliases(&text).map_err(|e| fail(PARSE)(e.into()))?)
        }
        None => None,
    };
    let result = mine(&db, &cfg).map_err(|e| fail(PARSE)(e.into()))?;
    emit(args.out.as_deref(), &rules_to_csv(&result.rules, aliases.as_ref()))?;
    if let Some(path) = &args.report {
        write_atomic(path, &RunReport::new(&cfg, db.size(), &result).to_json())?;
    }
    eprintln!("{} rules in {:.1} ms", result.rules.len(), result.elapsed.as_secs_f64() * 1e3);
    Ok(0)
}

/// Rules on exactly one side, with the side they came from.
fn symmetric_difference<'a>(mined: &'a [MinedRule], expected: &'a [MinedRule]) -> Vec<(&'static str, &'a MinedRule)> {
    let a: BTreeSet<_> = mined.iter().collect();
    let b: BTreeSet<_> = expected.iter().collect();
    a.difference(&b)
        .map(|r| ("miner only", *r))
        .chain(b.difference(&a).map(|r| ("oracle only", *r)))
        .collect()
}

fn report_mismatch(label: &str, variant: Variant, diff: &[(&str, &MinedRule)]) {
    println!("MISMATCH {label} variant={variant}");
    for (side, r) in diff {
        println!("  {side}: {} u={} sup={} conf={} lift={}", r.rule, r.utility, r.support, r.confidence, r.lift);
    }
}

fn check(db: &SequenceDatabase, cfg: &MinerConfig, label: &str) -> Result<bool, Failure> {
    let expected = oracle_chusrs(db, cfg, &OracleLimits::default()).map_err(|e| fail(ORACLE_LIMIT)(e.into()))?;
    let mut ok = true;
    for variant in Variant::ALL {
        let cfg = cfg.clone().with_variant(variant);
        let mined = mine(db, &cfg).map_err(|e| fail(PARSE)(e.into()))?;
        let diff = symmetric_difference(&mined.rules, &expected);
        if !diff.is_empty() {
            report_mismatch(label, variant, &diff);
            ok = false;
        }
    }
    Ok(ok)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let Some(n) = args.random else {
        let db = load(&args.input)?;
        let cfg = config(&args.min_util, &args.thresholds)?;
        let ok = check(&db, &cfg, "database")?;
        println!("{}", if ok { "OK" } else { "FAILED" });
        return Ok(if ok { 0 } else { 1 });
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let params = SmallDbParams::default();
    let mut failures = 0;
    for k in 0..n {
        let db = random_small_db(&mut rng, &params);
        let mut cfg = random_config(&mut rng, &db);
        cfg.enable_conf_prune = args.thresholds.conf_prune;
        cfg.max_side = args.thresholds.max_side;
        if !check(&db, &cfg, &format!("case {k}"))? {
            println!("{}", db.to_text());
            failures += 1;
        }
    }
    println!("{} of {n} random databases agree", n - failures);
    Ok(if failures == 0 { 0 } else { 1 })
}

fn cmd_bench(args: &BenchArgs) -> Result<u8, Failure> {
    let db = load(&args.input)?;
    let variants: Vec<Variant> = if args.variant == "all" {
        Variant::ALL.to_vec()
    } else {
        args.variant
            .split(',')
            .map(|v| v.trim().parse().map_err(|e: String| fail(CONFIG)(anyhow!(e))))
            .collect::<Result<_, _>>()?
    };
    let mut csv = String::from("variant,minutil,rules,pruned_s6,pruned_s7,uls_built,ms\n");
    let mut reports = Vec::new();
    for min_util in &args.min_util {
        let base = config(min_util, &args.thresholds)?;
        for &variant in &variants {
            let cfg = base.clone().with_variant(variant);
            let r = mine(&db, &cfg).map_err(|e| fail(PARSE)(e.into()))?;
            csv.push_str(&format!(
                "{variant},{},{},{},{},{},{:.3}\n",
                cfg.min_util,
                r.rules.len(),
                r.stats.pruned_s6,
                r.stats.pruned_s7,
                r.stats.utility_lists_built,
                r.elapsed.as_secs_f64() * 1e3
            ));
            reports.push(RunReport::new(&cfg, db.size(), &r));
        }
    }
    emit(args.out.as_deref(), &csv)?;
    if let Some(path) = &args.report {
        write_atomic(path, &serde_json::to_string_pretty(&reports).expect("reports serialize"))?;
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("COUSR_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let outcome = match &cli.command {
        Command::Mine(a) => cmd_mine(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
