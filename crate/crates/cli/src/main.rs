use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use davlab::cache::Cache;
use davlab::commands::{self, Ctx, LoewyMethod, Report, Variant};
use davlab::scan::{self, ParamRanges, ScanOptions, DEFAULT_SEARCH_MAX_ORDER};
use davlab_core::group::{Family, GroupDescriptor};
use davlab_core::zerosum::SearchConfig;

#[derive(Parser)]
#[command(name = "davlab", version, about = "Davenport constants and Loewy lengths of small finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Cache file (default: $DAVLAB_CACHE, else ./davlab-cache.jsonl).
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Allow constructions outside the proven parameter range; results are reported, not asserted.
    #[arg(long, global = true)]
    unverified_explore: bool,
    /// Search state budget.
    #[arg(long, global = true, value_name = "N")]
    budget_states: Option<u64>,
    /// Search wall-clock budget in seconds.
    #[arg(long, global = true, value_name = "SECS")]
    budget_seconds: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Order, exponent, center, derived subgroup, class and generator orders.
    Info { descriptor: GroupDescriptor },
    /// Loewy length from the M-series and/or the closed form.
    Loewy {
        descriptor: GroupDescriptor,
        #[arg(long, value_enum, default_value = "direct")]
        method: LoewyMethod,
    },
    /// Exact Davenport-type constant by exhaustive search.
    Davenport {
        descriptor: GroupDescriptor,
        #[arg(long, value_enum, default_value = "ordered")]
        variant: Variant,
        /// Weight set for --variant=weighted, e.g. 1,4.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u64>>,
    },
    /// Published extremal sequence for the descriptor.
    Witness {
        descriptor: GroupDescriptor,
        #[arg(long, value_parser = ["1", "6", "7"])]
        theorem: String,
        /// Check freeness and, for g1/g3, the congruence system.
        #[arg(long)]
        verify: bool,
    },
    /// Exhaustive congruence check for the g1/g3 witness systems.
    Oracle { descriptor: GroupDescriptor },
    /// Bounds on D over a grid of descriptors.
    Scan {
        /// Extra descriptors to include.
        descriptors: Vec<GroupDescriptor>,
        /// Family tags, e.g. d,q,sd,m2,g1.
        #[arg(long, value_delimiter = ',')]
        families: Vec<String>,
        /// e.g. "p=3,5;alpha=1..2;order=..729".
        #[arg(long, default_value = "")]
        param_ranges: String,
        /// Named grid; `proven` covers the families with published values.
        #[arg(long, value_parser = ["proven"])]
        preset: Option<String>,
        /// Largest order for exact searches.
        #[arg(long, default_value_t = DEFAULT_SEARCH_MAX_ORDER)]
        search_max_order: usize,
        /// Print CSV rows instead of an aligned table.
        #[arg(long)]
        csv: bool,
    },
}

fn search_config(c: &Common) -> SearchConfig {
    let mut cfg = SearchConfig::from_env();
    if let Some(n) = c.budget_states {
        cfg.max_states = n;
    }
    if let Some(s) = c.budget_seconds {
        cfg.max_time = Duration::from_secs(s);
    }
    cfg
}

fn open_cache(c: &Common) -> Result<Option<Cache>> {
    if c.no_cache {
        return Ok(None);
    }
    let cache = Cache::open(&Cache::resolve_path(c.cache.as_deref()))?;
    if cache.skipped() > 0 {
        log::warn!("{} corrupt cache lines skipped", cache.skipped());
    }
    Ok(Some(cache))
}

fn emit(report: Report, json: bool) -> Result<ExitCode> {
    if json {
        println!("{}", serde_json::to_string_pretty(&report.json)?);
    } else {
        print!("{}", report.text);
    }
    Ok(if report.ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let common = cli.common;
    let mut ctx =
        Ctx { cache: open_cache(&common)?, config: search_config(&common), explore: common.unverified_explore };
    let report = match cli.command {
        Command::Info { descriptor } => commands::info(&descriptor)?,
        Command::Loewy { descriptor, method } => commands::loewy(&mut ctx, &descriptor, method)?,
        Command::Davenport { descriptor, variant, weights } => {
            commands::davenport(&mut ctx, &descriptor, variant, weights)?
        }
        Command::Witness { descriptor, theorem, verify } => {
            commands::witness(&mut ctx, &descriptor, theorem.parse()?, verify)?
        }
        Command::Oracle { descriptor } => commands::oracle(&mut ctx, &descriptor)?,
        Command::Scan { descriptors, families, param_ranges, preset, search_max_order, csv } => {
            let mut grid = descriptors;
            if preset.is_some() {
                grid.extend(scan::proven_preset());
            }
            let ranges: ParamRanges = param_ranges.parse()?;
            let fams = families
                .iter()
                .map(|t| Family::from_tag(t).ok_or_else(|| anyhow::anyhow!("unknown family tag `{t}`")))
                .collect::<Result<Vec<_>>>()?;
            grid.extend(scan::grid(&fams, &ranges));
            if grid.is_empty() {
                bail!("empty grid: give descriptors, --families or --preset");
            }
            let opts =
                ScanOptions { descriptors: grid, search_max_order, explore: ctx.explore, config: ctx.config.clone() };
            let out = scan::scan(ctx.cache.as_mut(), &opts)?;
            if common.json {
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else if csv {
                print!("{}", scan::render_csv(&out)?);
            } else {
                print!("{}", scan::render_table(&out));
            }
            return Ok(if out.refuted == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    };
    emit(report, common.json)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
