use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ext_core::input::parse_field;
use ext_core::report::{run, Command, Format, Products, RunConfig, Source};
use ext_core::Field;

/// Cohomology rings of finite groups and algebras, with checks of graded
/// commutativity and the suspended monoidal axioms.
#[derive(Parser)]
#[command(name = "ext", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Group cohomology H*(G; k) of a finite group.
    Group {
        /// Named group: trivial, cyclic:<n>, klein4, s3, q8.
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        named: Option<String>,
        /// JSON input file.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Hochschild cohomology HH*(A) of a finite-dimensional algebra.
    Hochschild {
        /// JSON input file, or a name: field, dual-numbers, upper-triangular, group:<g>.
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        common: Common,
    },
    /// Checks the suspended monoidal axioms on random complexes.
    Axioms {
        /// Random complex pairs per field.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// A prime p or Q; overrides the field in an input file.
    #[arg(long, value_parser = parse_field_arg)]
    field: Option<Field>,
    #[arg(long, default_value_t = 6)]
    max_degree: usize,
    #[arg(long, value_enum, default_value_t = ProductsArg::Yoneda)]
    products: ProductsArg,
    /// Verify graded commutativity and the other product identities.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProductsArg {
    Yoneda,
    Cup,
    Star,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

fn parse_field_arg(s: &str) -> Result<Field, String> {
    parse_field(s).map_err(|e| e.to_string())
}

fn read_source(path: &Path) -> Result<Source, String> {
    std::fs::read(path)
        .map(Source::Json)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn config(sub: Sub) -> Result<(RunConfig, Format, Option<PathBuf>), String> {
    let (command, source, samples, common) = match sub {
        Sub::Group { named, input, common } => {
            let source = match (named, input) {
                (Some(name), _) => Source::Named(name),
                (None, Some(path)) => read_source(&path)?,
                (None, None) => return Err("pass --named or --input".into()),
            };
            (Command::Group, Some(source), 0, common)
        }
        Sub::Hochschild { algebra, common } => {
            let path = Path::new(&algebra);
            let source = if path.is_file() {
                read_source(path)?
            } else {
                Source::Named(algebra)
            };
            (Command::Hochschild, Some(source), 0, common)
        }
        Sub::Axioms { samples, common } => (Command::Axioms, None, samples, common),
    };
    let products = match common.products {
        ProductsArg::Yoneda => Products::Yoneda,
        ProductsArg::Cup => Products::Cup,
        ProductsArg::Star => Products::Star,
        ProductsArg::All => Products::All,
    };
    let format = match common.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Text => Format::Text,
    };
    let config = RunConfig {
        command,
        source,
        field: common.field,
        max_degree: common.max_degree,
        products,
        verify: common.verify,
        samples,
        seed: common.seed,
        timing: common.timing,
    };
    Ok((config, format, common.out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, format, out) = match config(cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let rendered = match report.render(format) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    for failure in report.failures() {
        eprintln!(
            "verification failed: {}{}",
            failure.name,
            failure.witness.as_ref().map(|w| format!(" at {w}")).unwrap_or_default()
        );
    }
    ExitCode::from(report.exit_code() as u8)
}
