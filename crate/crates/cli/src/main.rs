mod cache;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use partpack_core::count::{occurrences, Occurrence};
use partpack_core::enumerate::{layered_partitions, partitions, two_block_candidates, words};
use partpack_core::ratio::{render, render_decimal};
use partpack_core::search::{KPolicy, Trend};
use partpack_core::verify::{exit_ok, report_render, run_claims, ReportFormat, VerifyConfig};
use partpack_core::{
    CanonicalWord, Error, Mode, PatternSet, SearchConfig, SearchResult, SearchSpace, Searcher, ENGINE_VERSION,
};

use cache::{Cache, CacheRecord};

#[derive(Parser, Debug)]
#[command(name = "partpack", version, about = "Pattern packing in set partitions")]
struct Cli {
    /// Worker threads for exhaustive searches.
    #[arg(long, global = true, env = "PARTPACK_THREADS")]
    threads: Option<usize>,

    /// Result cache (line-delimited JSON).
    #[arg(long, global = true, env = "PARTPACK_CACHE")]
    cache: Option<PathBuf>,

    /// Lift the candidate caps on exhaustive searches.
    #[arg(long, global = true)]
    unsafe_large: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count occurrences of a pattern set in one partition.
    Count(CountArgs),
    /// Maximize the number of occurrences over a search space.
    Maximize(MaximizeArgs),
    /// Tabulate the maximum density for n up to a bound.
    DensityTable(TableArgs),
    /// Run every claim and write a report.
    Verify(VerifyArgs),
    /// Dump a search space, one word per line.
    Enumerate(EnumerateArgs),
}

#[derive(Args, Debug)]
struct PatternArgs {
    /// Pattern(s), as digit strings or comma-separated letters. Repeat the
    /// flag or separate patterns with spaces to give a set.
    #[arg(long = "patterns", visible_alias = "pattern", required = true, num_args = 1)]
    patterns: Vec<String>,

    #[arg(long, value_enum, default_value_t = ModeArg::Unrestricted)]
    mode: ModeArg,
}

impl PatternArgs {
    fn set(&self) -> partpack_core::Result<PatternSet> {
        let items: Vec<&str> = self.patterns.iter().flat_map(|p| p.split_whitespace()).collect();
        PatternSet::parse(&items, self.mode.into())
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Restricted,
    Unrestricted,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Restricted => Mode::Restricted,
            ModeArg::Unrestricted => Mode::Unrestricted,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    All,
    Layered,
    TwoBlock,
    Words,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    pattern: PatternArgs,

    #[arg(long)]
    target: String,

    /// Also list the occurrences as 1-based index tuples.
    #[arg(long)]
    witnesses: bool,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct MaximizeArgs {
    #[command(flatten)]
    pattern: PatternArgs,

    #[arg(long)]
    n: usize,

    /// Maximum number of blocks (alphabet size for `--space words`).
    #[arg(long)]
    k: Option<usize>,

    #[arg(long, value_enum, default_value_t = SpaceArg::All)]
    space: SpaceArg,

    /// Print every reported witness instead of the first one.
    #[arg(long)]
    witnesses: bool,

    #[arg(long, default_value_t = 100)]
    witness_limit: usize,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[command(flatten)]
    pattern: PatternArgs,

    #[arg(long)]
    n_max: usize,

    /// Block bound: `n` for k = n, or a fixed number.
    #[arg(long, default_value = "n")]
    k: String,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 10)]
    n_cap: usize,

    #[arg(long, default_value_t = 10)]
    k_cap: usize,

    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long, value_enum, default_value_t = SpaceArg::All)]
    space: SpaceArg,

    #[arg(long)]
    n: usize,

    #[arg(long)]
    k: Option<usize>,

    /// Stop after this many words.
    #[arg(long)]
    limit: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_usage_error(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn is_usage_error(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        matches!(
            e.downcast_ref::<Error>(),
            Some(
                Error::Parse { .. }
                    | Error::NotCanonical(_)
                    | Error::PatternTooLong { .. }
                    | Error::InvalidPatternSet(_)
                    | Error::InvalidArgument(_)
                    | Error::Unsupported(_)
                    | Error::Precondition(_)
                    | Error::CapExceeded { .. }
            )
        )
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let config = SearchConfig {
        unsafe_large: cli.unsafe_large,
        threads: cli.threads,
        ..SearchConfig::default()
    };
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Count(args) => cmd_count(args, &mut out),
        Command::Maximize(args) => cmd_maximize(args, config, cli.cache, &mut out),
        Command::DensityTable(args) => cmd_density_table(args, config, &mut out),
        Command::Verify(args) => cmd_verify(args, config, &mut out),
        Command::Enumerate(args) => cmd_enumerate(args, &mut out),
    }
}

#[derive(Serialize)]
struct CountOutput<'a> {
    patterns: Vec<String>,
    mode: Mode,
    target: &'a CanonicalWord,
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    occurrences: Option<Vec<Occurrence>>,
}

fn cmd_count(args: CountArgs, out: &mut impl Write) -> anyhow::Result<ExitCode> {
    let set = args.pattern.set()?;
    let target: CanonicalWord = args.target.parse().context("parsing --target")?;
    if set.m() > target.len() {
        return Err(Error::PatternTooLong {
            m: set.m(),
            n: target.len(),
        }
        .into());
    }
    let count = partpack_core::count::count(&set, target.letters())?;
    let occ = if args.witnesses {
        Some(occurrences(&set, target.letters())?)
    } else {
        None
    };
    match args.format {
        Format::Json => {
            let doc = CountOutput {
                patterns: set.patterns().iter().map(|p| p.to_string()).collect(),
                mode: set.mode(),
                target: &target,
                count,
                occurrences: occ,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Text | Format::Csv => {
            writeln!(out, "{count}")?;
            for o in occ.iter().flatten() {
                writeln!(out, "{o}")?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn space_of(arg: SpaceArg) -> SearchSpace {
    match arg {
        SpaceArg::All => SearchSpace::Partitions,
        SpaceArg::Layered => SearchSpace::Layered,
        SpaceArg::TwoBlock => SearchSpace::TwoBlock,
        SpaceArg::Words => SearchSpace::Words,
    }
}

fn record_from<W: ToString>(set: &PatternSet, r: &SearchResult<W>, witness_limit: usize) -> CacheRecord {
    CacheRecord {
        mode: set.mode().to_string(),
        patterns: set.key(),
        n: r.n,
        k: r.k,
        space: r.space.to_string(),
        witness_limit,
        mu: r.mu,
        density: render(&r.density),
        primary_witness: r.witnesses.first().map(|w| w.to_string()),
        witnesses: r.witnesses.iter().map(|w| w.to_string()).collect(),
        witness_total: r.witness_total,
        examined: r.examined,
        engine_version: ENGINE_VERSION.to_string(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    }
}

#[derive(Serialize)]
struct MaximizeOutput<'a> {
    patterns: &'a str,
    mode: &'a str,
    n: usize,
    k: usize,
    space: &'a str,
    mu: u64,
    density: &'a str,
    decimal: String,
    witnesses: &'a [String],
    witness_total: u64,
    examined: u64,
}

fn cmd_maximize(
    args: MaximizeArgs,
    mut config: SearchConfig,
    cache_path: Option<PathBuf>,
    out: &mut impl Write,
) -> anyhow::Result<ExitCode> {
    let set = args.pattern.set()?;
    let space = space_of(args.space);
    let n = args.n;
    let k = match (space, args.k) {
        (SearchSpace::TwoBlock, None) => 2,
        (SearchSpace::TwoBlock, Some(k)) if k < 2 => bail!("--space two-block needs --k of at least 2"),
        (SearchSpace::TwoBlock, Some(_)) => 2,
        (_, Some(k)) => k,
        (_, None) => n,
    };
    config.witness_limit = args.witness_limit;
    config.layered_cross_check = false;

    let mut cache = cache_path.as_deref().map(Cache::open).transpose()?;
    let probe = CacheRecord {
        mode: set.mode().to_string(),
        patterns: set.key(),
        n,
        k,
        space: space.to_string(),
        witness_limit: args.witness_limit,
        mu: 0,
        density: String::new(),
        primary_witness: None,
        witnesses: Vec::new(),
        witness_total: 0,
        examined: 0,
        engine_version: ENGINE_VERSION.to_string(),
        timestamp: 0,
    };
    let cached = cache.as_ref().and_then(|c| c.get(&probe.key())).cloned();
    let record = match cached {
        Some(rec) => rec,
        None => {
            let searcher = Searcher::new(config)?;
            let rec = match space {
                SearchSpace::Partitions => record_from(&set, &searcher.max_over_partitions(&set, n, k)?, args.witness_limit),
                SearchSpace::Words => record_from(&set, &searcher.max_over_words(&set, n, k)?, args.witness_limit),
                SearchSpace::Layered => {
                    let p = single_unrestricted(&set, "layered")?;
                    record_from(&set, &searcher.max_layered(p, n, k)?.result, args.witness_limit)
                }
                SearchSpace::TwoBlock => {
                    let p = single_unrestricted(&set, "two-block")?;
                    if p.letters() != [1, 2, 1] {
                        bail!(Error::Unsupported("--space two-block is defined for the pattern 121 only".into()));
                    }
                    record_from(&set, &searcher.max_two_block(n)?, args.witness_limit)
                }
            };
            if let Some(c) = cache.as_mut() {
                c.insert(rec.clone())?;
            }
            rec
        }
    };
    print_maximize(&record, args.witnesses, args.format, out)?;
    Ok(ExitCode::SUCCESS)
}

fn single_unrestricted<'a>(set: &'a PatternSet, space: &str) -> anyhow::Result<&'a CanonicalWord> {
    match (set.mode(), set.as_single()) {
        (Mode::Unrestricted, Some(p)) => Ok(p),
        _ => Err(Error::Unsupported(format!(
            "--space {space} takes a single pattern in unrestricted mode"
        ))
        .into()),
    }
}

fn print_maximize(rec: &CacheRecord, all_witnesses: bool, format: Format, out: &mut impl Write) -> anyhow::Result<()> {
    let density: partpack_core::Rational = parse_rational(&rec.density)?;
    match format {
        Format::Json => {
            let doc = MaximizeOutput {
                patterns: &rec.patterns,
                mode: &rec.mode,
                n: rec.n,
                k: rec.k,
                space: &rec.space,
                mu: rec.mu,
                density: &rec.density,
                decimal: render_decimal(&density),
                witnesses: &rec.witnesses,
                witness_total: rec.witness_total,
                examined: rec.examined,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            writeln!(out, "patterns,mode,n,k,space,mu,density,decimal,witness,witness_total,examined")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                rec.patterns,
                rec.mode,
                rec.n,
                rec.k,
                rec.space,
                rec.mu,
                rec.density,
                render_decimal(&density),
                csv_field(rec.primary_witness.as_deref().unwrap_or("")),
                rec.witness_total,
                rec.examined
            )?;
        }
        Format::Text => {
            writeln!(out, "patterns: {} ({})", rec.patterns, rec.mode)?;
            writeln!(out, "n: {}  k: {}  space: {}", rec.n, rec.k, rec.space)?;
            writeln!(out, "mu: {}", rec.mu)?;
            writeln!(out, "density: {} ({})", rec.density, render_decimal(&density))?;
            writeln!(out, "examined: {}", rec.examined)?;
            writeln!(out, "witnesses: {} total", rec.witness_total)?;
            let shown = if all_witnesses { rec.witnesses.len() } else { rec.witnesses.len().min(1) };
            for w in &rec.witnesses[..shown] {
                writeln!(out, "  {w}")?;
            }
            if shown < rec.witness_total as usize {
                writeln!(out, "  ... {} more", rec.witness_total as usize - shown)?;
            }
        }
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s.to_string()
    }
}

fn parse_rational(s: &str) -> anyhow::Result<partpack_core::Rational> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num: i128 = num.parse().with_context(|| format!("bad rational {s:?}"))?;
    let den: i128 = den.parse().with_context(|| format!("bad rational {s:?}"))?;
    if den == 0 {
        bail!("bad rational {s:?}");
    }
    Ok(partpack_core::Rational::new(num, den))
}

#[derive(Serialize)]
struct TableRow {
    n: usize,
    k: usize,
    mu: u64,
    delta: String,
    decimal: String,
    trend: Trend,
    engine: SearchSpace,
    witness: CanonicalWord,
}

#[derive(Serialize)]
struct TableDoc {
    patterns: String,
    mode: Mode,
    k: String,
    rows: Vec<TableRow>,
    truncated: Option<String>,
}

fn cmd_density_table(args: TableArgs, config: SearchConfig, out: &mut impl Write) -> anyhow::Result<ExitCode> {
    let set = args.pattern.set()?;
    let policy = match args.k.as_str() {
        "n" => KPolicy::Diagonal,
        k => KPolicy::Fixed(
            k.parse()
                .map_err(|_| Error::InvalidArgument(format!("--k must be `n` or a number, got {k:?}")))?,
        ),
    };
    let searcher = Searcher::new(config)?;
    let seq = searcher.density_sequence(&set, args.n_max, policy)?;
    if let Some(note) = &seq.truncated {
        eprintln!("note: {note}");
    }
    let rows: Vec<TableRow> = seq
        .rows
        .iter()
        .map(|r| TableRow {
            n: r.n,
            k: r.k,
            mu: r.mu,
            delta: render(&r.delta),
            decimal: render_decimal(&r.delta),
            trend: r.trend,
            engine: r.engine,
            witness: r.witness.clone(),
        })
        .collect();
    match args.format {
        Format::Json => {
            let doc = TableDoc {
                patterns: set.key(),
                mode: set.mode(),
                k: policy.to_string(),
                rows,
                truncated: seq.truncated.clone(),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Csv => {
            writeln!(out, "n,k,mu,delta,decimal,trend,engine,witness")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.n,
                    r.k,
                    r.mu,
                    r.delta,
                    r.decimal,
                    trend_name(r.trend),
                    r.engine,
                    csv_field(&r.witness.to_string())
                )?;
            }
        }
        Format::Text => {
            writeln!(out, "{:>4} {:>4} {:>10} {:>12} {:>14}  {:<9} {:<9} witness", "n", "k", "mu", "delta", "decimal", "trend", "engine")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>4} {:>4} {:>10} {:>12} {:>14}  {:<9} {:<9} {}",
                    r.n,
                    r.k,
                    r.mu,
                    r.delta,
                    r.decimal,
                    trend_name(r.trend),
                    r.engine.to_string(),
                    r.witness
                )?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn trend_name(t: Trend) -> &'static str {
    match t {
        Trend::First => "first",
        Trend::Decrease => "decrease",
        Trend::Equal => "equal",
        Trend::Increase => "increase",
    }
}

fn cmd_verify(args: VerifyArgs, config: SearchConfig, out: &mut impl Write) -> anyhow::Result<ExitCode> {
    let format = match args.format {
        Format::Json => ReportFormat::Json,
        Format::Text => ReportFormat::Text,
        Format::Csv => bail!(Error::InvalidArgument("verify reports are json or text".into())),
    };
    let cfg = VerifyConfig {
        n_cap: args.n_cap,
        k_cap: args.k_cap,
        search: config,
        inject_fault: args.inject_fault,
    };
    let reports = run_claims(&cfg)?;
    let doc = report_render(&reports, format);
    match &args.report {
        Some(path) => {
            std::fs::write(path, &doc).with_context(|| format!("writing report {}", path.display()))?;
            for r in &reports {
                writeln!(out, "{:<4} {}", r.id, r.status)?;
            }
        }
        None => out.write_all(doc.as_bytes())?,
    }
    if exit_ok(&reports) {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verification found deviations");
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_enumerate(args: EnumerateArgs, out: &mut impl Write) -> anyhow::Result<ExitCode> {
    let n = args.n;
    let k = args.k.unwrap_or(n);
    let limit = args.limit.unwrap_or(usize::MAX);
    let items: Box<dyn Iterator<Item = String>> = match args.space {
        SpaceArg::All => Box::new(partitions(n, k)?.map(|p| p.to_string())),
        SpaceArg::Words => Box::new(words(n, k)?.map(|w| w.to_string())),
        SpaceArg::Layered => Box::new(layered_partitions(n, k)?.into_iter().map(|p| p.to_string())),
        SpaceArg::TwoBlock => Box::new(two_block_candidates(n)?.into_iter().map(|p| p.to_string())),
    };
    for item in items.take(limit) {
        writeln!(out, "{item}")?;
    }
    Ok(ExitCode::SUCCESS)
}
