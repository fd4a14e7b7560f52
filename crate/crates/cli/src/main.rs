mod analyze;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use evoalg::classify::corpus::{default_corpus_dir, Corpus, CorpusError};
use evoalg::classify::{case_spec, classify_label, ClassifyError};
use evoalg::field::{Field, FieldError, FieldSpec, PrimeField, Rationals};
use evoalg::format::{Document, FormatError, MatrixFile};
use evoalg::isotest::{find_isomorphism, IsoError};
use evoalg::EvolutionAlgebra;

#[derive(Parser)]
#[command(name = "evoalg", version, about = "Structure-matrix toolkit for evolution algebras")]
struct Cli {
    /// Base field: `Q` or `F<p>` for an odd prime `p`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Seed for random instances of pattern files.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report perfectness, simplicity, basic ideals and the associated graph.
    Analyze { path: PathBuf },
    /// Decide isomorphism of two perfect algebras over the base field.
    Iso { first: PathBuf, second: PathBuf },
    /// Enumerate the families of a registered case.
    Classify {
        label: String,
        /// Compare against the stated count, or the bundled tables when no count is stated.
        #[arg(long)]
        expected: bool,
    },
    /// Check the bundled tables against the enumerations.
    VerifyTables {
        /// Corpus directory; defaults to `EVOALG_CORPUS` or the bundled corpus.
        dir: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Capability(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Capability(_) => 3,
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        if e.is_capability() {
            CliError::Capability(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Field(f) => f.into(),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<IsoError> for CliError {
    fn from(e: IsoError) -> Self {
        match e {
            IsoError::Field(f) => f.into(),
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Exit status of a command that ran: affirmative or negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
}

fn read_document(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| match e {
        FormatError::Field(f) => CliError::from(f),
        e => CliError::Input(format!("{}: {e}", path.display())),
    })
}

/// The `--field` flag wins over file headers; both default to `Q`.
fn choose_field(flag: Option<&str>, headers: &[Option<FieldSpec>]) -> Result<FieldSpec, CliError> {
    if let Some(text) = flag {
        return Ok(text.parse::<FieldSpec>()?);
    }
    let mut named = headers.iter().flatten();
    match named.next() {
        None => Ok(FieldSpec::Rationals),
        Some(first) => match named.find(|s| *s != first) {
            Some(other) => Err(CliError::Input(format!("files disagree on the field: {first} vs {other}"))),
            None => Ok(*first),
        },
    }
}

fn with_field<T>(
    spec: FieldSpec,
    on_q: impl FnOnce(Rationals) -> Result<T, CliError>,
    on_p: impl FnOnce(PrimeField) -> Result<T, CliError>,
) -> Result<T, CliError> {
    match spec {
        FieldSpec::Rationals => on_q(Rationals),
        FieldSpec::Prime(p) => on_p(PrimeField::new(p)?),
    }
}

fn matrix_file(doc: Document, path: &Path) -> Result<MatrixFile, CliError> {
    match doc {
        Document::Matrix(m) => Ok(m),
        Document::Pattern(_) => Err(CliError::Input(format!("{}: expected a matrix, found a pattern", path.display()))),
    }
}

fn cmd_analyze(cli: &Cli, path: &Path) -> Result<Verdict, CliError> {
    let doc = read_document(path)?;
    let header = match &doc {
        Document::Matrix(m) => m.field,
        Document::Pattern(_) => None,
    };
    let spec = choose_field(cli.field.as_deref(), &[header])?;
    let report = match (&doc, cli.seed) {
        (Document::Pattern(t), None) => analyze::pattern_report(&t.support(), spec),
        (Document::Pattern(t), Some(seed)) => with_field(
            spec,
            |f| Ok(analyze::algebra_report(&evoalg::isotest::random_template_instance(t, &f, seed)?)),
            |f| Ok(analyze::algebra_report(&evoalg::isotest::random_template_instance(t, &f, seed)?)),
        )?,
        (Document::Matrix(m), _) => with_field(
            spec,
            |f| Ok(analyze::algebra_report(&m.to_algebra(f)?)),
            |f| Ok(analyze::algebra_report(&m.to_algebra(f)?)),
        )?,
    };
    if cli.json {
        output::print_json(&report);
    } else {
        print!("{report}");
    }
    Ok(Verdict::Yes)
}

fn iso_over<F: Field>(cli: &Cli, field: F, files: [&MatrixFile; 2]) -> Result<Verdict, CliError> {
    let m: EvolutionAlgebra<F> = files[0].to_algebra(field.clone())?;
    let n: EvolutionAlgebra<F> = files[1].to_algebra(field)?;
    let outcome = find_isomorphism(&m, &n)?;
    output::print_iso(&outcome, m.field(), cli.json);
    Ok(if outcome.is_isomorphic() { Verdict::Yes } else { Verdict::No })
}

fn cmd_iso(cli: &Cli, first: &Path, second: &Path) -> Result<Verdict, CliError> {
    let a = matrix_file(read_document(first)?, first)?;
    let b = matrix_file(read_document(second)?, second)?;
    let spec = choose_field(cli.field.as_deref(), &[a.field, b.field])?;
    with_field(spec, |f| iso_over(cli, f, [&a, &b]), |f| iso_over(cli, f, [&a, &b]))
}

fn cmd_classify(cli: &Cli, label: &str, expected: bool) -> Result<Verdict, CliError> {
    let result = classify_label(label)?;
    let check = if !expected {
        None
    } else if let Some(stated) = result.stated_count() {
        Some(output::ExpectedCheck::stated(result.count(), stated))
    } else {
        let spec = case_spec(label).ok().filter(|s| !s.corpus_cases.is_empty());
        match spec {
            None => Some(output::ExpectedCheck::none()),
            Some(spec) => {
                let corpus = Corpus::load(&default_corpus_dir())?;
                let printed = corpus.case_orbits(&spec.corpus_cases, &spec.group);
                match (&result, printed.is_empty()) {
                    (_, true) => Some(output::ExpectedCheck::none()),
                    (evoalg::classify::Classification::Families(set), false) => {
                        Some(output::ExpectedCheck::tables(set.representatives().copied().collect(), printed))
                    }
                    _ => Some(output::ExpectedCheck::none()),
                }
            }
        }
    };
    output::print_classification(&result, check.as_ref(), cli.json);
    Ok(match check {
        Some(c) if c.matches == Some(false) => Verdict::No,
        _ => Verdict::Yes,
    })
}

fn cmd_verify(cli: &Cli, dir: Option<&Path>) -> Result<Verdict, CliError> {
    let dir = dir.map_or_else(default_corpus_dir, Path::to_path_buf);
    let corpus = Corpus::load(&dir)?;
    let report = evoalg::classify::verify::verify_tables(&corpus);
    output::print_report(&report, cli.json);
    Ok(if report.is_clean() { Verdict::Yes } else { Verdict::No })
}

fn run(cli: &Cli) -> Result<Verdict, CliError> {
    match &cli.command {
        Command::Analyze { path } => cmd_analyze(cli, path),
        Command::Iso { first, second } => cmd_iso(cli, first, second),
        Command::Classify { label, expected } => cmd_classify(cli, label, *expected),
        Command::VerifyTables { dir } => cmd_verify(cli, dir.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Verdict::Yes) => ExitCode::SUCCESS,
        Ok(Verdict::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
