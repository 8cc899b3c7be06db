use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dirac_core::sieve::{default_bound, enumerate_candidates, sieve_all};
use dirac_core::strings::{
    classify_levi_subsets, count_strings, relation_violations, CoefficientTable, StringConstants,
};
use dirac_core::tables::{verify_groups, DATASET_GROUPS};
use dirac_core::weight::parse_int_list;
use dirac_core::weylgroup::{enumerate_involutions, write_census};
use dirac_core::{fmt_rational, with_workers, Error, InvolutionRecord, Rational, RootDatum, RootType, SieveReport};

#[derive(Parser)]
#[command(
    name = "dirac-sieve",
    version,
    about = "Exact Weyl-group and spin-norm computations for Dirac series"
)]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Root system type (A1..A6, D4..D6, E6, E7); `verify` defaults to all tabulated groups.
    #[arg(long, global = true)]
    group: Option<RootType>,
    /// Cap on ‖λ−sλ‖², as `p` or `p/q`.
    #[arg(long, global = true)]
    bound: Option<Rational>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
    /// Directory holding `<group>.tsv` datasets; falls back to `$DIRAC_SIEVE_DATA`.
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the involutions of the Weyl group.
    Involutions,
    /// List sieve candidates for one involution or for all of them.
    Sieve {
        /// Involution given by its image of ρ.
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["word", "all"])]
        srho: Option<String>,
        /// Involution given by a word in the simple reflections.
        #[arg(long, conflicts_with = "all")]
        word: Option<String>,
        /// Every involution with I(s) empty.
        #[arg(long)]
        all: bool,
    },
    /// Re-check the tabulated scattered representations.
    Verify,
    /// Count strings and list the Levi coefficients.
    Strings {
        #[arg(long)]
        coefficients: bool,
        /// JSON file with the scattered-part sizes of the Levi factors.
        #[arg(long)]
        constants: Option<PathBuf>,
    },
}

enum Failure {
    Verification,
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(e) => Failure::Runtime(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// The main output stream; summaries go to stdout only when it is a file,
/// otherwise to stderr.
struct Sink {
    out: Box<dyn Write>,
    to_file: bool,
}

impl Sink {
    fn new(config: &RunConfig) -> io::Result<Self> {
        Ok(match &config.output {
            Some(p) => Sink {
                out: Box::new(BufWriter::new(File::create(p)?)),
                to_file: true,
            },
            None => Sink {
                out: Box::new(BufWriter::new(io::stdout().lock())),
                to_file: false,
            },
        })
    }

    fn summary(&self, line: &str) {
        if self.to_file {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

impl RunConfig {
    fn datum(&self) -> RootDatum {
        RootDatum::new(self.group.unwrap_or(RootType::E7))
    }

    fn workers(&self) -> usize {
        self.workers
            .map(usize::from)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

fn cmd_involutions(config: &RunConfig) -> CmdResult {
    let datum = config.datum();
    let records = enumerate_involutions(&datum, config.workers());
    let scattered = records.iter().filter(|r| r.fixed_set.is_empty()).count();
    let line = format!("{} total, {scattered} with empty I(s)", records.len());
    if let Some(p) = &config.output {
        let mut f = BufWriter::new(File::create(p)?);
        write_census(&records, &mut f)?;
        f.flush()?;
    }
    match config.format {
        Format::Tsv => println!("{line}"),
        Format::Json => println!(
            "{}",
            json!({ "group": datum.root_type().to_string(), "total": records.len(), "scattered": scattered })
        ),
    }
    Ok(())
}

fn parse_selector(datum: &RootDatum, srho: Option<&str>, word: Option<&str>) -> Result<InvolutionRecord, Failure> {
    match (srho, word) {
        (Some(v), None) => {
            let w = datum.integral_weight(&parse_int_list(v)?)?;
            Ok(InvolutionRecord::from_srho(datum, &w)?)
        }
        (None, Some(w)) => {
            let word: Vec<usize> = parse_int_list(w)?
                .into_iter()
                .map(|i| usize::try_from(i).map_err(|_| Failure::Usage(format!("bad letter {i} in word"))))
                .collect::<Result<_, _>>()?;
            Ok(InvolutionRecord::from_word(datum, &word)?)
        }
        _ => Err(Failure::Usage("give one of --srho, --word or --all".into())),
    }
}

fn write_report(out: &mut dyn Write, rep: &SieveReport, format: Format) -> io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", rep.to_json_line()),
        Format::Tsv => {
            for p in &rep.candidates {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    rep.s.s_rho.to_csv(),
                    p.lambda.to_doubled_csv(),
                    p.lambda_plus.to_csv(),
                    p.lambda_minus.to_csv(),
                    p.lkt.to_csv()
                )?;
            }
            Ok(())
        }
    }
}

fn cmd_sieve(config: &RunConfig, srho: Option<&str>, word: Option<&str>, all: bool) -> CmdResult {
    let datum = config.datum();
    let bound = config.bound.unwrap_or_else(|| default_bound(&datum));
    if bound <= Rational::from_integer(0) {
        return Err(Failure::Usage("--bound must be positive".into()));
    }
    let reports = if all {
        sieve_all(&datum, bound, config.workers())?
    } else {
        let s = parse_selector(&datum, srho, word)?;
        vec![with_workers(config.workers(), || {
            enumerate_candidates(&datum, &s, bound)
        })?]
    };
    let mut sink = Sink::new(config)?;
    if config.format == Format::Tsv {
        writeln!(sink.out, "srho\tlambda2\tlambda_plus\tlambda_minus\tlkt")?;
    }
    for rep in &reports {
        write_report(&mut sink.out, rep, config.format)?;
    }
    sink.out.flush()?;
    let total: usize = reports.iter().map(|r| r.candidates.len()).sum();
    let truncated = reports.iter().filter(|r| r.truncated).count();
    let mut line = if all {
        format!(
            "{} involutions, {total} candidates (bound {})",
            reports.len(),
            fmt_rational(&bound)
        )
    } else {
        format!("{total} candidates (bound {})", fmt_rational(&bound))
    };
    if truncated > 0 {
        line.push_str(&format!(", {truncated} truncated"));
    }
    sink.summary(&line);
    Ok(())
}

fn cmd_verify(config: &RunConfig) -> CmdResult {
    let groups: Vec<RootType> = match config.group {
        Some(g) if DATASET_GROUPS.contains(&g) => vec![g],
        Some(g) => return Err(Failure::Usage(format!("no dataset for {g}"))),
        None => DATASET_GROUPS.to_vec(),
    };
    let summary = verify_groups(&groups, config.data.as_deref(), config.workers())?;
    let mut sink = Sink::new(config)?;
    match config.format {
        Format::Json => writeln!(
            sink.out,
            "{}",
            serde_json::to_string_pretty(&summary.to_json()).expect("json")
        )?,
        Format::Tsv => {
            for g in &summary.groups {
                writeln!(sink.out, "{}: {} rows, unfold={}", g.group, g.rows, g.unfolded)?;
            }
            for r in summary.reports.iter().chain(&summary.dual_reports) {
                for f in r.failures() {
                    writeln!(sink.out, "FAIL {}: {f}", r.row_id)?;
                }
            }
            for (id, ok) in &summary.sieve_inclusion {
                if !ok {
                    writeln!(sink.out, "FAIL {id}: λ missing from the sieve candidates")?;
                }
            }
            for g in &summary.groups {
                for id in &g.dual_gaps {
                    writeln!(sink.out, "FAIL {id}: dual row missing")?;
                }
            }
            writeln!(sink.out, "{}", summary.headline())?;
        }
    }
    sink.out.flush()?;
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_strings(config: &RunConfig, coefficients: bool, constants: Option<&PathBuf>) -> CmdResult {
    let datum = config.datum();
    let constants = match constants {
        Some(p) => StringConstants::load(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => StringConstants::shipped(),
    };
    let counts = count_strings(&datum, &constants)?;
    if datum.root_type() == RootType::E7 {
        for v in relation_violations(&counts) {
            eprintln!("warning: {v}");
        }
    }
    let table = CoefficientTable::new(&classify_levi_subsets(&datum), datum.rank());
    let mut sink = Sink::new(config)?;
    match config.format {
        Format::Tsv => {
            writeln!(sink.out, "{counts}")?;
            if coefficients {
                for k in 0..datum.rank() {
                    writeln!(sink.out, "size {k}: {}", table.line(k))?;
                }
            }
        }
        Format::Json => {
            let mut v = json!({ "per_size": counts.per_size, "total": counts.total });
            if coefficients {
                v["coefficients"] = (0..datum.rank())
                    .map(|k| {
                        table.by_size[k]
                            .iter()
                            .map(|(t, c)| (dirac_core::strings::type_label(t), json!(c)))
                            .collect::<serde_json::Map<_, _>>()
                    })
                    .collect();
            }
            writeln!(sink.out, "{v}")?;
        }
    }
    sink.out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.config;
    let result = match &cli.command {
        Command::Involutions => cmd_involutions(c),
        Command::Sieve { srho, word, all } => cmd_sieve(c, srho.as_deref(), word.as_deref(), *all),
        Command::Verify => cmd_verify(c),
        Command::Strings {
            coefficients,
            constants,
        } => cmd_strings(c, *coefficients, constants.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
