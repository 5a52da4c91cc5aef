use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use itcat::cli::{run_file, run_verify, Format, Outcome, Overrides, Verb, EXIT_INVALID};
use itcat::finite::Variant;
use itcat::kernel::CategoryTag;

#[derive(Parser)]
#[command(
    name = "itcat",
    version,
    about = "Information transformers: Bayes strategies, conditionals and informativeness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed recorded in the report and used by `verify`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Enumeration budget for exhaustive searches.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Fuzzy conditional variant.
    #[arg(long, global = true, value_enum)]
    variant: Option<VariantArg>,

    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal decision strategy for a prior, an experiment and a goodness table.
    Bayes { file: PathBuf },
    /// Both conditionals of a joint distribution and their reconstruction residuals.
    Conditional { file: PathBuf },
    /// Informativeness of one morphism against another, with witnesses.
    Compare { file: PathBuf },
    /// Informativeness classes (SET, MULTI, LINEAR).
    Classes { file: PathBuf },
    /// Randomised check of the category laws.
    Verify {
        #[arg(value_enum)]
        category: CategoryArg,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Raw,
    Normed,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "UPPER")]
enum CategoryArg {
    Set,
    Fmt,
    Fpt,
    Multi,
    Stoch,
    Linear,
}

impl From<CategoryArg> for CategoryTag {
    fn from(c: CategoryArg) -> Self {
        match c {
            CategoryArg::Set => CategoryTag::Set,
            CategoryArg::Fmt => CategoryTag::Fmt,
            CategoryArg::Fpt => CategoryTag::Fpt,
            CategoryArg::Multi => CategoryTag::Multi,
            CategoryArg::Stoch => CategoryTag::Stoch,
            CategoryArg::Linear => CategoryTag::Linear,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Machine => Format::Machine,
    };
    let overrides = Overrides {
        seed: cli.seed,
        budget: cli.budget,
        variant: cli.variant.map(|v| match v {
            VariantArg::Raw => Variant::Raw,
            VariantArg::Normed => Variant::Normed,
        }),
    };
    let (verb, file) = match cli.command {
        Command::Bayes { file } => (Verb::Bayes, file),
        Command::Conditional { file } => (Verb::Conditional, file),
        Command::Compare { file } => (Verb::Compare, file),
        Command::Classes { file } => (Verb::Classes, file),
        Command::Verify { category, samples } => {
            return finish(run_verify(
                category.into(),
                cli.seed.unwrap_or(1),
                samples,
                format,
            ));
        }
    };
    let outcome = match std::fs::read_to_string(&file) {
        Ok(text) => run_file(verb, &text, overrides, format),
        Err(e) => Outcome {
            code: EXIT_INVALID,
            stdout: String::new(),
            stderr: format!("error: {}: {e}\n", file.display()),
        },
    };
    finish(outcome)
}

fn finish(outcome: Outcome) -> ExitCode {
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code as u8)
}
