//! The `leapfrog` command line. [`run`] holds everything except process exit
//! so tests can drive it in-process.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use leapfrog_core::election::deviation_table;
use leapfrog_core::election::OutcomeGrid;
use leapfrog_core::equilibrium::{classify, enumerate_with_grid, profitable_deviation};
use leapfrog_core::io::{
    builtin, load_instance, serialize_instance, serialize_report, AxiomReport,
    ClassificationReport, EquilibriaReport, Format, BUILTINS,
};
use leapfrog_core::search::{
    falsify_with, gen_instance, AttractionMode, CampaignOptions, Conjecture, GenConfig, PartyMode,
};
use leapfrog_core::{Instance, Party, Profile};
use serde_json::json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "leapfrog",
    version,
    about = "Equilibrium analysis of two-party competition with abstention"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Human)]
    format: FormatArg,

    /// Use a built-in instance instead of a file.
    #[arg(long, global = true, value_name = "NAME")]
    builtin: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Human,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate an instance document.
    Validate(Source),
    /// Deviation table at a profile.
    Table {
        #[command(flatten)]
        source: Source,
        /// Profile as `s,t` (1-based).
        #[arg(long, value_parser = parse_profile)]
        profile: (usize, usize),
    },
    /// All pure-strategy Nash equilibria.
    Equilibria(Source),
    /// Outcome, flags and Nash verdict for one profile.
    Classify {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_parser = parse_profile)]
        profile: (usize, usize),
    },
    /// Single-peakedness, cross-side agreement and fixed participation.
    Axioms(Source),
    /// Seeded random search for counterexamples to a claim.
    Falsify {
        /// One of prop1, prop2, thm1, prop4.
        conjecture: Conjecture,
        #[command(flatten)]
        generator: Generator,
        /// Number of random instances.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Worker threads (results do not depend on it).
        #[arg(long)]
        threads: Option<usize>,
        /// Make trial 0 the built-in counterexample.
        #[arg(long)]
        inject_paper_example: bool,
        /// Test the conclusion on every instance, ignoring the hypothesis.
        #[arg(long)]
        no_precondition: bool,
    },
    /// Write one random instance document.
    Gen {
        #[command(flatten)]
        generator: Generator,
        /// Which draw of the seeded stream to write.
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Instance document (JSON).
    file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Generator {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Policy count range `a..b` (inclusive).
    #[arg(long, value_parser = parse_range, default_value = "5..9")]
    m: RangeInclusive<usize>,
    /// Voter count range `a..b` (inclusive).
    #[arg(long, value_parser = parse_range, default_value = "2..6")]
    n: RangeInclusive<usize>,
    /// free, symmetric or common-shape.
    #[arg(long, default_value = "free")]
    party_mode: PartyMode,
    /// random or full [default: full for prop2, random otherwise].
    #[arg(long)]
    attraction_mode: Option<AttractionMode>,
}

impl Generator {
    fn config(&self, base: GenConfig) -> GenConfig {
        GenConfig {
            m_range: self.m.clone(),
            n_range: self.n.clone(),
            party_mode: self.party_mode,
            attraction_mode: self.attraction_mode.unwrap_or(base.attraction_mode),
            seed: self.seed,
            ..base
        }
    }
}

fn parse_profile(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `s,t`")?;
    let idx = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    Ok((idx(a)?, idx(b)?))
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

/// A failure that maps to the usage exit code.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn load(source: &Source, builtin_name: Option<&str>) -> Result<Instance, Usage> {
    match (&source.file, builtin_name) {
        (Some(_), Some(_)) => Err(Usage("give either a file or --builtin, not both".into())),
        (None, None) => Err(Usage(
            "missing instance: give a file or --builtin NAME".into(),
        )),
        (None, Some(name)) => builtin(name).ok_or_else(|| {
            Usage(format!(
                "unknown built-in `{name}` (available: {})",
                BUILTINS.join(", ")
            ))
        }),
        (Some(path), None) => load_file(path),
    }
}

fn load_file(path: &Path) -> Result<Instance, Usage> {
    let bytes = std::fs::read(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes)
        .map_err(|_| Usage(format!("{}: not valid UTF-8", path.display())))?;
    load_instance(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn profile_in(inst: &Instance, (s, t): (usize, usize)) -> Result<Profile, Usage> {
    let m = inst.size();
    if (1..=m).contains(&s) && (1..=m).contains(&t) {
        Ok(Profile::at(s, t))
    } else {
        Err(Usage(format!("profile ({s},{t}) is outside 1..{m}")))
    }
}

fn ensure_newline(mut text: String) -> String {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Usage> {
    let format = match cli.format {
        FormatArg::Human => Format::Human,
        FormatArg::Machine => Format::Machine,
    };
    let builtin_name = cli.builtin.as_deref();
    let text = match cli.command {
        Command::Validate(source) => {
            let inst = load(&source, builtin_name)?;
            match format {
                Format::Human => format!(
                    "valid: {} policies, {} voters, ideals {} and {}\n",
                    inst.size(),
                    inst.voters().len(),
                    inst.ideal(Party::A),
                    inst.ideal(Party::B)
                ),
                Format::Machine => leapfrog_core::io::canonical_json(&json!({
                    "policies": inst.size(),
                    "valid": true,
                    "voters": inst.voters().len(),
                })),
            }
        }
        Command::Table { source, profile } => {
            let inst = load(&source, builtin_name)?;
            let p = profile_in(&inst, profile)?;
            serialize_report(&deviation_table(&inst, p), format)
        }
        Command::Equilibria(source) => {
            let inst = load(&source, builtin_name)?;
            let grid = OutcomeGrid::new(&inst);
            let equilibria = enumerate_with_grid(&inst, &grid)
                .into_iter()
                .map(|rec| (rec, grid.deviation_table(rec.profile)))
                .collect();
            let report = EquilibriaReport {
                size: inst.size(),
                ideals: (inst.ideal(Party::A), inst.ideal(Party::B)),
                equilibria,
            };
            serialize_report(&report, format)
        }
        Command::Classify { source, profile } => {
            let inst = load(&source, builtin_name)?;
            let p = profile_in(&inst, profile)?;
            let report = ClassificationReport {
                record: classify(&inst, p),
                deviation: profitable_deviation(&inst, p),
                table: deviation_table(&inst, p),
            };
            serialize_report(&report, format)
        }
        Command::Axioms(source) => {
            let inst = load(&source, builtin_name)?;
            serialize_report(&AxiomReport::new(&inst), format)
        }
        Command::Falsify {
            conjecture,
            generator,
            trials,
            threads,
            inject_paper_example,
            no_precondition,
        } => {
            if builtin_name.is_some() {
                return Err(Usage(
                    "falsify draws its own instances; --builtin does not apply".into(),
                ));
            }
            if threads == Some(0) {
                return Err(Usage("--threads must be at least 1".into()));
            }
            let options = CampaignOptions {
                threads,
                enforce_precondition: !no_precondition,
            };
            let report = falsify_with(
                conjecture,
                &generator.config(GenConfig {
                    inject_paper_example,
                    ..GenConfig::for_conjecture(conjecture)
                }),
                trials,
                &options,
            )?;
            // the human report carries its own warning
            if format == Format::Machine && report.precondition_enforced && report.qualifying == 0 {
                let _ = writeln!(
                    err,
                    "warning: no instance satisfied the hypothesis of {conjecture}"
                );
            }
            let _ = out.write_all(ensure_newline(serialize_report(&report, format)).as_bytes());
            return Ok(if report.violations.is_empty() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            });
        }
        Command::Gen {
            generator,
            trial,
            out: path,
        } => {
            if builtin_name.is_some() {
                return Err(Usage(
                    "gen draws its own instance; --builtin does not apply".into(),
                ));
            }
            let cfg = generator.config(GenConfig::default());
            cfg.validate()?;
            let doc = serialize_instance(&gen_instance(&cfg, trial));
            std::fs::write(&path, doc).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
            match format {
                Format::Human => format!("wrote {}\n", path.display()),
                Format::Machine => {
                    leapfrog_core::io::canonical_json(&json!({ "out": path.display().to_string() }))
                }
            }
        }
    };
    let _ = out.write_all(ensure_newline(text).as_bytes());
    Ok(EXIT_OK)
}
