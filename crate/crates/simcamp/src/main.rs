//! `simcamp`: run, rewrite, and verify simulation campaigns from the
//! command line.
//!
//! Every verb reads line-oriented text files and writes deterministic
//! line-oriented output, so runs can be diffed byte for byte. Exit codes:
//! 0 success (or PASS), 1 verification failure or non-equivalence, 2
//! usage or file format error, 3 numeric or model error.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use simcamp::algebra::{
    campaign_transitions, equivalent, extract_scenarios, normalize, optimize_campaign_with_stats,
    synthesize_campaign,
};
use simcamp::error::Error;
use simcamp::format::{
    parse_campaign, parse_property, parse_scenarios, parse_spec, write_campaign,
    write_scenario_block, write_scenarios, write_transitions,
};
use simcamp::verify::{verify, Mode, Verdict, VerifyOptions};

#[derive(Parser)]
#[command(name = "simcamp", version, about = "Simulation campaign toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Execute a campaign and dump the explored transition set.
    Run { campaign: PathBuf },
    /// Rewrite a campaign into its LOAD/RUN normal form.
    Normalize { campaign: PathBuf },
    /// Compare the transition sets explored by two campaigns.
    Equiv { first: PathBuf, second: PathBuf },
    /// List the scenarios a campaign explores.
    Extract { campaign: PathBuf },
    /// Build a campaign covering a scenario set.
    Synthesize { scenarios: PathBuf },
    /// Build a prefix-sharing campaign covering a scenario set.
    Optimize {
        scenarios: PathBuf,
        /// Append run/store/memory statistics as comment lines.
        #[arg(long)]
        stats: bool,
    },
    /// List every admissible scenario of an enumeration spec.
    Enumerate { spec: PathBuf },
    /// Check a safety property on every admissible scenario.
    Verify {
        spec: PathBuf,
        /// Property file to check.
        #[arg(long)]
        prop: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Optimized)]
        mode: ModeArg,
        /// Report every violating scenario instead of the first.
        #[arg(long)]
        exhaustive: bool,
        /// Worker threads; the output never depends on this.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Naive,
    Optimized,
}

/// Write to stdout without panicking when the reader hangs up.
///
/// Piping into `head` closes our end mid-stream; exiting with the
/// conventional SIGPIPE status keeps that usable in shell pipelines.
fn emit(args: std::fmt::Arguments<'_>, newline: bool) {
    let mut out = io::stdout().lock();
    let result = out
        .write_fmt(args)
        .and_then(|()| if newline { out.write_all(b"\n") } else { Ok(()) });
    if let Err(e) = result {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(141);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(2);
    }
}

macro_rules! out {
    ($($arg:tt)*) => { emit(format_args!($($arg)*), false) };
}

macro_rules! outln {
    ($($arg:tt)*) => { emit(format_args!($($arg)*), true) };
}

/// A diagnosed failure: what to print and which exit code to use.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse { .. } => 2,
            _ => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

/// Deterministic campaign name for a file the user handed us.
fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "campaign".to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(verb: Verb) -> Result<u8, Failure> {
    match verb {
        Verb::Run { campaign } => {
            let (model, campaign) = parse_campaign(&read_file(&campaign)?)?;
            let set = campaign_transitions(model.as_ref(), &campaign)?;
            out!("{}", write_transitions(model.as_ref(), &set));
            Ok(0)
        }
        Verb::Normalize { campaign } => {
            let (model, campaign) = parse_campaign(&read_file(&campaign)?)?;
            let normal = normalize(&campaign)?;
            out!("{}", write_campaign(model.as_ref(), &normal));
            Ok(0)
        }
        Verb::Equiv { first, second } => {
            let (model, a) = parse_campaign(&read_file(&first)?)?;
            let (other, b) = parse_campaign(&read_file(&second)?)?;
            if model.id() != other.id() {
                return Err(Failure {
                    code: 2,
                    message: format!(
                        "campaigns use different models: {} vs {}",
                        model.id(),
                        other.id()
                    ),
                });
            }
            if equivalent(model.as_ref(), &a, &b)? {
                outln!("equivalent");
                Ok(0)
            } else {
                outln!("not equivalent");
                Ok(1)
            }
        }
        Verb::Extract { campaign } => {
            let (model, campaign) = parse_campaign(&read_file(&campaign)?)?;
            let set = extract_scenarios(&campaign)?;
            out!("{}", write_scenarios(model.as_ref(), &set));
            Ok(0)
        }
        Verb::Synthesize { scenarios } => {
            let name = stem_of(&scenarios);
            let (model, set) = parse_scenarios(&read_file(&scenarios)?)?;
            let campaign = synthesize_campaign(&name, &set)?;
            out!("{}", write_campaign(model.as_ref(), &campaign));
            Ok(0)
        }
        Verb::Optimize { scenarios, stats } => {
            let name = stem_of(&scenarios);
            let (model, set) = parse_scenarios(&read_file(&scenarios)?)?;
            let campaign = synthesize_campaign(&name, &set)?;
            let (optimized, s) = optimize_campaign_with_stats(model.as_ref(), &campaign)?;
            out!("{}", write_campaign(model.as_ref(), &optimized));
            if stats {
                outln!("# stat runs {}", s.run_count);
                outln!("# stat runs-unshared {}", s.unshared_run_count);
                outln!("# stat runs-saved {}", s.unshared_run_count - s.run_count);
                outln!("# stat scenarios {}", s.scenario_count);
                outln!("# stat stores {}", s.store_count);
                outln!("# stat loads {}", s.load_count);
                outln!("# stat frees {}", s.free_count);
                outln!("# stat peak-memory {}", s.peak_memory);
            }
            Ok(0)
        }
        Verb::Enumerate { spec } => {
            let (model, spec) = parse_spec(&read_file(&spec)?)?;
            let count = spec.count_admissible()?;
            outln!("model {}", model.id());
            outln!("# admissible {count}");
            if count == 0 {
                outln!("# warning: the constraints admit no scenarios");
            }
            for (i, scenario) in spec.scenarios()?.enumerate() {
                out!("{}", write_scenario_block(model.as_ref(), &format!("s{i}"), &scenario));
            }
            Ok(0)
        }
        Verb::Verify { spec, prop, mode, exhaustive, jobs } => {
            let (model, spec) = parse_spec(&read_file(&spec)?)?;
            let prop = parse_property(&read_file(&prop)?)?;
            let options = VerifyOptions {
                mode: match mode {
                    ModeArg::Naive => Mode::Naive,
                    ModeArg::Optimized => Mode::Optimized,
                },
                exhaustive,
                jobs,
            };
            let verdict = verify(model.as_ref(), &spec, &prop, &options)?;
            match &verdict {
                Verdict::Pass { scenarios, transitions_checked } => {
                    outln!("PASS {}", prop.name);
                    outln!("scenarios {scenarios}");
                    outln!("transitions-checked {transitions_checked}");
                    Ok(0)
                }
                Verdict::Fail { violations, campaign_position } => {
                    let cx = verdict.counterexample().expect("failing verdicts carry a witness");
                    outln!("FAIL {}", prop.name);
                    outln!("scenario-index {}", cx.scenario_index);
                    outln!("transition-index {}", cx.transition_index);
                    outln!("clause-index {}", cx.clause_index);
                    outln!("campaign-position {campaign_position}");
                    outln!(
                        "TRANS {} {} {} {}",
                        model.format_state(&cx.transition.source),
                        cx.transition.event,
                        cx.transition.duration,
                        model.format_state(&cx.transition.target)
                    );
                    out!(
                        "{}",
                        write_scenario_block(model.as_ref(), "counterexample", &cx.scenario)
                    );
                    outln!("violations {}", violations.len());
                    for v in violations {
                        outln!(
                            "violation {} {} {}",
                            v.scenario_index, v.transition_index, v.clause_index
                        );
                    }
                    Ok(1)
                }
            }
        }
    }
}
