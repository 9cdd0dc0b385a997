//! `fschar`: compute characters, run verification suites, list configurations.
//!
//! Exit status: 0 on success, 1 on a failed verification or a method that
//! does not apply, 2 on invalid input.

mod config;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use rayon::prelude::*;

use config::{bad, Common, Format, Inconsistent, List, Method, RunConfig, Suite};
use fschar::admissible::{self, Budget, Enumeration, Initial};
use fschar::recurrence::{compare_with_golden, verify_system};
use fschar::specialize::{chi_fjmmt, spec2_fjmmt2, verify_spec1, verify_spec2};
use fschar::{character_fermionic, character_oracle, CharSeries, HighestWeight, Report, Window};

const DEFAULT_SAMPLES: usize = 20;
const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(name = "fschar", version, about = "Exact q-series characters of principal subspaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print one character as JSON or a text table
    Character {
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[command(flatten)]
        common: Common,
    },
    /// Run verification suites; exits 1 on any violation
    Verify {
        #[arg(long, value_enum)]
        suite: Option<Suite>,
        /// Expected recurrence system to diff against
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Random N-sequences per level for the identity suite
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Stream admissible configurations as JSON lines
    ListAdmissible {
        /// Pin a_0,a_1 exactly (rank 2 only)
        #[arg(long)]
        init: Option<List>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<config::ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn setup(common: &Common) -> anyhow::Result<(config::FileConfig, RunConfig)> {
    let file = common.file()?;
    let cfg = common.resolve(&file)?;
    if let Some(jobs) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("starting worker pool")?;
    }
    Ok((file, cfg))
}

fn emit(cfg: &RunConfig, text: &str) -> anyhow::Result<()> {
    match &cfg.output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn require_rank_two(cfg: &RunConfig, what: &str) -> anyhow::Result<()> {
    if cfg.l != 2 {
        return Err(Inconsistent(format!("{what} is only defined for l=2, got l={}", cfg.l)).into());
    }
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Character { method, common } => {
            let (file, cfg) = setup(&common)?;
            let method = file.pick(method, "method")?.unwrap_or(Method::Oracle);
            cmd_character(&cfg, method)
        }
        Command::Verify {
            suite,
            golden,
            samples,
            seed,
            common,
        } => {
            let (file, cfg) = setup(&common)?;
            let opts = VerifyOptions {
                suite: file.pick(suite, "suite")?.unwrap_or(Suite::All),
                golden: file.pick(golden, "golden")?,
                samples: file.pick(samples, "samples")?.unwrap_or(DEFAULT_SAMPLES),
                seed: file.pick(seed, "seed")?.unwrap_or(DEFAULT_SEED),
            };
            cmd_verify(&cfg, &opts)
        }
        Command::ListAdmissible { init, common } => {
            let (file, cfg) = setup(&common)?;
            let init = file.pick(init, "init")?;
            cmd_list_admissible(&cfg, init)
        }
    }
}

fn window(cfg: &RunConfig) -> Window {
    Window::uniform(cfg.l, cfg.zmax, cfg.qmax)
}

fn cmd_character(cfg: &RunConfig, method: Method) -> anyhow::Result<ExitCode> {
    let w = cfg.weight_or_vacuum()?;
    let text = match method {
        Method::Oracle | Method::Fermionic => {
            let c = if method == Method::Oracle {
                character_oracle(&w, &window(cfg))?
            } else {
                require_rank_two(cfg, "the fermionic formula")?;
                character_fermionic(&w, &window(cfg))?
            };
            match cfg.format {
                Format::Json => json(&c)?,
                Format::Text => format!("# character {w}, z<={}, q<={}\n{}", cfg.zmax, cfg.qmax, c.to_table()),
            }
        }
        Method::Fjmmt => {
            require_rank_two(cfg, "the fjmmt formula")?;
            if w.parts()[2] != 0 {
                return Err(bad(format!("the fjmmt formula needs k_2 = 0, got {w}")));
            }
            let s = chi_fjmmt(&w, cfg.zmax, cfg.qmax)?;
            match cfg.format {
                Format::Json => json(&s)?,
                Format::Text => format!("# fjmmt {w}, z<={}, q<={}\n{}", cfg.zmax, cfg.qmax, s.to_table()),
            }
        }
        Method::Fjmmt2 => {
            require_rank_two(cfg, "the fjmmt2 alternating sum")?;
            let s = fschar::SpecializedSeries::Bare(spec2_fjmmt2(&w, cfg.qmax)?);
            match cfg.format {
                Format::Json => json(&s)?,
                Format::Text => format!("# fjmmt2 {w}, q<={}\n{}", cfg.qmax, s.to_table()),
            }
        }
    };
    emit(cfg, &text)?;
    Ok(ExitCode::SUCCESS)
}

struct VerifyOptions {
    suite: Suite,
    golden: Option<PathBuf>,
    samples: usize,
    seed: u64,
}

fn table(
    weights: &[HighestWeight],
    window: &Window,
    f: fn(&HighestWeight, &Window) -> fschar::Result<CharSeries>,
) -> anyhow::Result<BTreeMap<HighestWeight, CharSeries>> {
    let rows: Vec<_> = weights
        .par_iter()
        .map(|w| f(w, window).map(|c| (w.clone(), c)))
        .collect::<fschar::Result<_>>()?;
    Ok(rows.into_iter().collect())
}

fn suite_system(cfg: &RunConfig, opts: &VerifyOptions) -> anyhow::Result<Report> {
    let weights = HighestWeight::all_of_level(cfg.l, cfg.level);
    let window = window(cfg);
    let mut report = Report::new("recurrence system");
    let oracle = table(&weights, &window, character_oracle)?;
    let mut r = verify_system(&oracle, cfg.level, cfg.l)?;
    for c in &mut r.checks {
        c.name = format!("oracle: {}", c.name);
    }
    report.extend(r);
    if cfg.l == 2 {
        let fermionic = table(&weights, &window, character_fermionic)?;
        let mut r = verify_system(&fermionic, cfg.level, cfg.l)?;
        for c in &mut r.checks {
            c.name = format!("fermionic: {}", c.name);
        }
        report.extend(r);
        let mut agree = fschar::report::Check::new(
            "fermionic equals oracle",
            format!("k={}, z<={}, q<={}", cfg.level, cfg.zmax, cfg.qmax),
        );
        for w in &weights {
            let diff = oracle[w].first_difference(&fermionic[w]);
            agree.record(
                || w.to_string(),
                diff.map(|(n, e)| format!("first difference at z^{n:?} q^{e}")),
            );
        }
        report.push(agree);
    }
    if let Some(path) = &opts.golden {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read golden {}: {e}", path.display())))?;
        report.extend(compare_with_golden(&text, cfg.level, cfg.l)?);
    }
    Ok(report)
}

fn target_weights(cfg: &RunConfig) -> Vec<HighestWeight> {
    match &cfg.weight {
        Some(w) => vec![w.clone()],
        None => HighestWeight::all_of_level(cfg.l, cfg.level),
    }
}

fn merge(title: &str, parts: Vec<fschar::Result<Report>>) -> anyhow::Result<Report> {
    let mut report = Report::new(title);
    for r in parts {
        report.extend(r?);
    }
    Ok(report)
}

fn suite_fjmmt(cfg: &RunConfig) -> anyhow::Result<Report> {
    require_rank_two(cfg, "the fjmmt comparison")?;
    let weights: Vec<_> = target_weights(cfg).into_iter().filter(|w| w.parts()[2] == 0).collect();
    if weights.is_empty() {
        return Err(bad("the fjmmt comparison needs a weight with k_2 = 0"));
    }
    let parts = weights.par_iter().map(|w| verify_spec1(w, cfg.zmax, cfg.qmax)).collect();
    merge("fjmmt comparison", parts)
}

fn suite_fjmmt2(cfg: &RunConfig) -> anyhow::Result<Report> {
    require_rank_two(cfg, "the fjmmt2 comparison")?;
    let parts = target_weights(cfg).par_iter().map(|w| verify_spec2(w, cfg.qmax)).collect();
    merge("fjmmt2 comparison", parts)
}

fn cmd_verify(cfg: &RunConfig, opts: &VerifyOptions) -> anyhow::Result<ExitCode> {
    let suites: Vec<Suite> = match opts.suite {
        Suite::All if cfg.l == 2 => vec![Suite::System, Suite::Lemmas, Suite::Fjmmt, Suite::Fjmmt2],
        Suite::All => vec![Suite::System, Suite::Lemmas],
        s => vec![s],
    };
    let mut report = Report::new(format!(
        "verify l={} k={} z<={} q<={}",
        cfg.l, cfg.level, cfg.zmax, cfg.qmax
    ));
    for s in suites {
        let r = match s {
            Suite::System => suite_system(cfg, opts)?,
            Suite::Lemmas => {
                fschar::fermionic::identities::run_lemma_suite(cfg.level as usize, opts.samples, opts.seed)?
            }
            Suite::Fjmmt => suite_fjmmt(cfg)?,
            Suite::Fjmmt2 => suite_fjmmt2(cfg)?,
            Suite::All => unreachable!(),
        };
        report.extend(r);
    }
    let text = match cfg.format {
        Format::Json => json(&report)?,
        Format::Text => report.to_string(),
    };
    emit(cfg, &text)?;
    if let Some((check, v)) = report.first_violation() {
        eprintln!("first violation: {} at {}: {}", check.name, v.case, v.detail);
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_list_admissible(cfg: &RunConfig, init: Option<List>) -> anyhow::Result<ExitCode> {
    let initial = match init {
        None => Initial::Weight(cfg.weight_or_vacuum()?),
        Some(List(p)) => {
            if cfg.l != 2 {
                return Err(bad(format!("--init needs l=2, got l={}", cfg.l)));
            }
            if cfg.weight.is_some() {
                return Err(bad("--init and --weight are mutually exclusive"));
            }
            let [a, b] = p[..] else {
                return Err(bad(format!("--init takes two values a,b, got {}", p.len())));
            };
            if a + b > cfg.level {
                return Err(bad(format!("--init {a},{b} exceeds level {}", cfg.level)));
            }
            Initial::Prefix { level: cfg.level, a, b }
        }
    };
    let params = Enumeration {
        rank: cfg.l,
        initial,
        budget: Budget::Degree(window(cfg)),
    };
    let mut out = String::new();
    let mut failure = None;
    admissible::enumerate(&params, |a, d, n| {
        let line = match cfg.format {
            Format::Json => serde_json::to_string(&serde_json::json!({ "a": a, "degree": d, "weight": n }))
                .map_err(anyhow::Error::from),
            Format::Text => Ok(format!("{a:?}\tdegree {d}\tweight {n:?}")),
        };
        match line {
            Ok(l) => {
                let _ = writeln!(out, "{l}");
            }
            Err(e) => failure = failure.take().or(Some(e)),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    emit(cfg, &out)?;
    Ok(ExitCode::SUCCESS)
}
