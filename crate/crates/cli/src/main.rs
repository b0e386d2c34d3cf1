use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use selfdual::exact::Field;
use selfdual::{Hbar, ModelTag};

use selfdual_cli::commands::{self, DeformOptions, Loaded};
use selfdual_cli::input::parse_hbar;
use selfdual_cli::{parse_input, CliError, CliResult};

#[derive(Parser, Debug)]
#[command(name = "selfdual", version, about = "Hochschild cohomology, dualizing forms and deformations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cohomology dimensions with the given coefficients.
    Cohomology {
        #[command(flatten)]
        common: Common,
        /// `self`, `dual-op` or a module file; comma separated or repeated.
        #[arg(long, value_delimiter = ',', default_value = "self")]
        coefficients: Vec<String>,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Model::Full)]
        model: Model,
    },
    /// Poset algebra cohomology next to the cohomology of the nerve.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
    },
    /// Dualizing forms and the symmetric Frobenius test.
    Frobenius {
        #[command(flatten)]
        common: Common,
        /// Also compare self and dual-op cohomology up to this degree.
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, value_enum, default_value_t = Model::Full)]
        model: Model,
    },
    /// Killing form, invariant forms and Chevalley-Eilenberg cohomology.
    Lie {
        #[command(flatten)]
        common: Common,
        /// `self` (adjoint), `dual-op`, `trivial` or a module file.
        #[arg(long, value_delimiter = ',', default_value = "self")]
        coefficients: Vec<String>,
        /// Defaults to the dimension of the algebra.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// The deformation t^{n+1} = hbar p(t) and its form.
    Deform {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "symbolic")]
        hbar: Option<String>,
        #[arg(long)]
        symbolic: bool,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        samples: Vec<String>,
        #[arg(long, default_value_t = 1)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t = Model::Full)]
        model: Model,
    },
    /// Parse and validate a description file.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    input: String,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Record wall-clock timings (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Record,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Model {
    Full,
    Normalized,
    Relative,
}

impl From<Model> for ModelTag {
    fn from(m: Model) -> ModelTag {
        match m {
            Model::Full => ModelTag::Full,
            Model::Normalized => ModelTag::Normalized,
            Model::Relative => ModelTag::Relative,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit()
        }
    }
}

fn common(c: &Command) -> &Common {
    match c {
        Command::Cohomology { common, .. }
        | Command::Compare { common, .. }
        | Command::Frobenius { common, .. }
        | Command::Lie { common, .. }
        | Command::Deform { common, .. }
        | Command::Validate { common } => common,
    }
}

fn run(command: Command) -> CliResult<String> {
    let start = Instant::now();
    let opts = common(&command);
    let text = std::fs::read_to_string(&opts.input).map_err(|e| CliError::Read {
        path: opts.input.clone(),
        message: e.to_string(),
    })?;
    let (value, desc) = parse_input(&text)?;
    let loaded = Loaded {
        path: opts.input.clone(),
        value,
        desc,
    };
    let parsed = start.elapsed();
    let mut report = match &command {
        Command::Cohomology {
            coefficients,
            max_degree,
            model,
            ..
        } => commands::cohomology(&loaded, coefficients, *max_degree, (*model).into())?,
        Command::Compare { max_degree, .. } => commands::compare_job(&loaded, *max_degree)?,
        Command::Frobenius { max_degree, model, .. } => {
            commands::frobenius(&loaded, *max_degree, (*model).into())?
        }
        Command::Lie {
            coefficients,
            max_degree,
            ..
        } => commands::lie(&loaded, coefficients, *max_degree)?,
        Command::Deform {
            hbar,
            symbolic,
            samples,
            max_degree,
            model,
            ..
        } => {
            let hbar = match (hbar, symbolic) {
                (Some(h), _) => Some(parse_hbar(h)?),
                (None, true) => Some(Hbar::Symbolic),
                (None, false) => None,
            };
            let samples = samples
                .iter()
                .map(|s| Field::Rational.parse(s).map_err(CliError::core("deform")))
                .collect::<CliResult<Vec<_>>>()?;
            let opts = DeformOptions {
                hbar,
                samples,
                max_degree: *max_degree,
                model: (*model).into(),
            };
            commands::deform(&loaded, &opts)?
        }
        Command::Validate { .. } => commands::validate(&loaded)?,
    };
    if opts.timings {
        let total = start.elapsed();
        report.timings.insert("parse_us".into(), Value::from(parsed.as_micros() as u64));
        report
            .timings
            .insert("compute_us".into(), Value::from((total - parsed).as_micros() as u64));
        report.timings.insert("total_us".into(), Value::from(total.as_micros() as u64));
    }
    Ok(match opts.format {
        Format::Table => report.render_table(),
        Format::Record => report.render_record(),
    })
}
