use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "mqnli", version, about = "Generate, label and validate multiply-quantified NLI corpora")]
struct Cli {
    /// Progress messages on stderr; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Derive the join, negation and quantifier tables with a manifest.
    Tables {
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate train/dev/test splits, stats.json and manifest.json.
    Generate(GenerateArgs),
    /// Label one premise/hypothesis pair.
    Label {
        premise: String,
        hypothesis: String,
        /// Print the node relation sets, first-order forms and countermodels.
        #[arg(long)]
        explain: bool,
        #[arg(long)]
        bound: Option<usize>,
        #[command(flatten)]
        lexicon: LexiconArgs,
    },
    /// Re-check a corpus file: parity, metadata and labels on a sample.
    Validate {
        file: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
        /// Fraction of records re-labeled by both labelers.
        #[arg(long, default_value_t = 1.0)]
        sample_rate: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to the file extension.
        #[arg(long)]
        format: Option<String>,
        #[command(flatten)]
        lexicon: LexiconArgs,
    },
    /// Print corpus statistics as JSON.
    Stats {
        file: PathBuf,
        #[arg(long)]
        format: Option<String>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        lexicon: LexiconArgs,
    },
}

#[derive(Args, Debug, Default)]
struct LexiconArgs {
    /// Sectioned wordlist file, or `synthetic`; the bundled list otherwise.
    #[arg(long)]
    wordlist: Option<String>,
}

#[derive(Args, Debug, Default)]
pub struct GenerateArgs {
    /// JSON file with flat keys mirroring the corpus configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Oracle bound for fallback and audit.
    #[arg(long)]
    bound: Option<usize>,
    /// Existing output directory.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    witnesses: bool,
    #[arg(long)]
    no_balance_labels: bool,
    #[arg(long)]
    no_relation_balance: bool,
    #[arg(long)]
    train: Option<usize>,
    #[arg(long)]
    dev: Option<usize>,
    #[arg(long)]
    test: Option<usize>,
    /// Directory holding derived tables; derived there when missing.
    #[arg(long)]
    tables: Option<PathBuf>,
    #[arg(long)]
    wordlist: Option<String>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let verbosity = cli.verbose;
    match cli.command {
        Command::Tables { out } => commands::tables(&out, verbosity),
        Command::Generate(args) => commands::generate(commands::RunConfig::from_args(args, verbosity)?),
        Command::Label {
            premise,
            hypothesis,
            explain,
            bound,
            lexicon,
        } => commands::label(&premise, &hypothesis, explain, bound, lexicon.wordlist.as_deref()),
        Command::Validate {
            file,
            bound,
            sample_rate,
            seed,
            format,
            lexicon,
        } => commands::validate(&file, bound, sample_rate, seed, format.as_deref(), lexicon.wordlist.as_deref()),
        Command::Stats {
            file,
            format,
            out,
            lexicon,
        } => commands::stats(&file, format.as_deref(), out.as_deref(), lexicon.wordlist.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
