use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use coordcount::conjoin::conjoinable;
use coordcount::lexicon::Lexicon;
use coordcount::occurrence::{saturate, Side};
use coordcount::oracle::coord_derive;
use coordcount::report::{run_sentence, RunReport, TSV_HEADER};
use coordcount::types::{BasicType, CatType, TypeSequence};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "coordcount",
    version,
    about = "Count-based pruning of type assignments for coordinated sentences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a type sequence against count invariance for a basic goal.
    Check {
        /// Types in slash notation, one per token.
        #[arg(required = true)]
        types: Vec<String>,
        /// Basic goal type.
        #[arg(long, default_value = "s")]
        goal: String,
    },
    /// Show the saturation register of a type sequence for one side.
    Registers {
        /// Types in slash notation, one per token.
        #[arg(required = true)]
        types: Vec<String>,
        /// Which side of the coordinator the sequence sits on.
        #[arg(long, value_enum)]
        side: SideArg,
    },
    /// Run the pruning pipeline on one coordinated sentence.
    Filter {
        /// Lexicon file: `word<TAB>type(,type)*` per line.
        #[arg(long)]
        lexicon: PathBuf,
        /// Sentence tokens (whitespace-separated, case-sensitive).
        #[arg(required = true)]
        sentence: Vec<String>,
        #[command(flatten)]
        options: RunOptions,
    },
    /// Run the pipeline on a file of sentences, one per line.
    Bench {
        /// Lexicon file: `word<TAB>type(,type)*` per line.
        #[arg(long)]
        lexicon: PathBuf,
        /// Sentences file, one sentence per line.
        #[arg(long)]
        sentences: PathBuf,
        #[command(flatten)]
        options: RunOptions,
    },
    /// Ask the derivability oracle about an explicit pair of type
    /// sequences, e.g. `oracle x/y y '&' y 'z\x' --goal z`.
    Oracle {
        /// Left types, the coordinator token, then right types.
        #[arg(required = true)]
        types: Vec<String>,
        /// Basic goal type.
        #[arg(long, default_value = "s")]
        goal: String,
        /// Coordinator token separating the two sequences.
        #[arg(long, default_value = "&")]
        coord: String,
    },
}

#[derive(clap::Args)]
struct RunOptions {
    /// Basic goal type.
    #[arg(long, default_value = "s")]
    goal: String,
    /// Coordinator token.
    #[arg(long, default_value = "&")]
    coord: String,
    /// Stop enumerating a side after this many surviving assignments.
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long, value_enum, default_value = "tsv")]
    format: Format,
    /// Confirm surviving pairs with the derivability oracle.
    #[arg(long, value_enum, default_value = "off")]
    oracle: OracleMode,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for Side {
    fn from(side: SideArg) -> Side {
        match side {
            SideArg::Left => Side::Left,
            SideArg::Right => Side::Right,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum OracleMode {
    On,
    Off,
}

/// A reported failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = std::panic::catch_unwind(|| match cli.command {
        Command::Check { types, goal } => cmd_check(&types, &goal),
        Command::Registers { types, side } => cmd_registers(&types, side.into()),
        Command::Filter {
            lexicon,
            sentence,
            options,
        } => cmd_filter(&lexicon, &sentence, &options),
        Command::Bench {
            lexicon,
            sentences,
            options,
        } => cmd_bench(&lexicon, &sentences, &options),
        Command::Oracle { types, goal, coord } => cmd_oracle(&types, &goal, &coord),
    });
    match result {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(failure)) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
        // The panic itself has already been printed by the default hook.
        Err(_) => ExitCode::from(EXIT_INTERNAL),
    }
}

fn parse_goal(goal: &str) -> Result<BasicType, Failure> {
    goal.parse().map_err(|e| {
        usage(format!(
            "goal {goal:?}: {e} (the goal must be a basic type)"
        ))
    })
}

fn parse_types(args: &[String]) -> Result<TypeSequence, Failure> {
    args.iter()
        .map(|arg| {
            arg.parse::<CatType>()
                .map_err(|e| usage(format!("type {arg:?}: {e}")))
        })
        .collect()
}

fn cmd_check(types: &[String], goal: &str) -> Result<u8, Failure> {
    let sequence = parse_types(types)?;
    let goal = parse_goal(goal)?;

    let mut basics = sequence.basics();
    basics.insert(goal.clone());
    for x in &basics {
        println!("{x}: {}", sequence.count(x));
    }
    if sequence.count_invariance_holds(&goal) {
        println!("PASS");
        Ok(0)
    } else {
        println!("FAIL");
        Ok(EXIT_FAIL)
    }
}

fn cmd_registers(types: &[String], side: Side) -> Result<u8, Failure> {
    let sequence = parse_types(types)?;
    let (register, verdict) = saturate(&sequence, side);
    if !register.is_empty() {
        println!("{register}");
    }
    println!("verdict: {verdict}");
    Ok(0)
}

fn read_to_string(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_lexicon(path: &Path) -> Result<Lexicon, Failure> {
    Lexicon::parse(&read_to_string(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn print_report(report: &RunReport, format: Format, header: bool) {
    match format {
        Format::Tsv => {
            if header {
                println!("{TSV_HEADER}");
            }
            println!("{}", report.tsv_row());
        }
        Format::Json => println!("{}", report.to_json()),
    }
}

fn cmd_filter(lexicon: &Path, sentence: &[String], options: &RunOptions) -> Result<u8, Failure> {
    let goal = parse_goal(&options.goal)?;
    let started = std::time::Instant::now();
    let lex = load_lexicon(lexicon)?;
    let load_ms = started.elapsed().as_secs_f64() * 1e3;

    let words: Vec<String> = sentence
        .iter()
        .flat_map(|chunk| chunk.split_whitespace())
        .map(str::to_string)
        .collect();

    let mut report = run_sentence(
        &lex,
        &words,
        &goal,
        &options.coord,
        options.cap,
        options.oracle == OracleMode::On,
    )
    .map_err(usage)?;
    report.timings.load_ms = load_ms;

    print_report(&report, options.format, true);
    eprintln!(
        "# timings-ms load={:.1} split={:.1} enumerate={:.1}/{:.1} filter={:.1} total={:.1}",
        report.timings.load_ms,
        report.timings.split_ms,
        report.timings.enumerate_left_ms,
        report.timings.enumerate_right_ms,
        report.timings.filter_ms,
        report.timings.total_ms(),
    );
    Ok(0)
}

fn cmd_bench(lexicon: &Path, sentences: &Path, options: &RunOptions) -> Result<u8, Failure> {
    let goal = parse_goal(&options.goal)?;
    let lex = load_lexicon(lexicon)?;
    let text = read_to_string(sentences)?;

    if options.format == Format::Tsv {
        println!("{TSV_HEADER}");
    }
    let mut total_ms = 0.0;
    let mut rows = 0u64;
    let mut errored = false;
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let words: Vec<String> = line.split_whitespace().map(str::to_string).collect();
        match run_sentence(
            &lex,
            &words,
            &goal,
            &options.coord,
            options.cap,
            options.oracle == OracleMode::On,
        ) {
            Ok(report) => {
                total_ms += report.timings.total_ms();
                rows += 1;
                print_report(&report, options.format, false);
            }
            Err(e) => {
                errored = true;
                println!("# line {}: error: {e}", idx + 1);
            }
        }
    }
    eprintln!("# {rows} sentences, {total_ms:.1} ms total");
    Ok(if errored { EXIT_USAGE } else { 0 })
}

fn cmd_oracle(types: &[String], goal: &str, coord: &str) -> Result<u8, Failure> {
    let goal = parse_goal(goal)?;
    let split: Vec<&[String]> = types.split(|t| t == coord).collect();
    let [left_args, right_args] = split.as_slice() else {
        return Err(usage(format!(
            "expected exactly one {coord:?} between the two type sequences"
        )));
    };
    if left_args.is_empty() || right_args.is_empty() {
        return Err(usage(
            "both sides of the coordinator need at least one type",
        ));
    }
    let left = parse_types(left_args)?;
    let right = parse_types(right_args)?;

    let (reg_l, verdict_l) = saturate(&left, Side::Left);
    let (reg_r, verdict_r) = saturate(&right, Side::Right);
    println!("left verdict: {verdict_l}");
    println!("right verdict: {verdict_r}");
    if verdict_l.is_ok() && verdict_r.is_ok() {
        let verdict = conjoinable(&reg_l, &reg_r, &goal);
        println!("conjoinable: {}", verdict.conjoinable);
        if !verdict.conjoinable {
            println!("{}", verdict.render_failures());
        }
    } else {
        println!("conjoinable: n/a (side verdict failed)");
    }

    let goal_type = CatType::Basic(goal);
    match coord_derive(&left, &right, &goal_type) {
        Some(witness) => {
            println!("derivable: true");
            println!(
                "witness: prefix=[{}] left=[{}] right=[{}] suffix=[{}] type={}",
                witness.left_context,
                witness.left_coordinated,
                witness.right_coordinated,
                witness.right_context,
                witness.coordinated_type,
            );
        }
        None => println!("derivable: false"),
    }
    Ok(0)
}
