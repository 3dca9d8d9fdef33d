use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use formclass_cli::{execute, Command, Flags, Format};

/// Exact class analysis of 1-form/2-form pairs and precontact forms.
#[derive(Debug, Parser)]
#[command(name = "formclass", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,

    /// Workspace document (JSON).
    #[arg(long)]
    input: PathBuf,

    /// Single point, e.g. `x=1,y=-1/2`; replaces the document's sample grid.
    #[arg(long)]
    point: Option<String>,

    /// 1-form (τ or η).
    #[arg(long)]
    form: Option<String>,

    /// 2-form; defaults to the exterior derivative of --form.
    #[arg(long)]
    omega: Option<String>,

    /// Function: conformal exponent, Hamiltonian or candidate factor.
    #[arg(long)]
    function: Option<String>,

    /// Power for the wedge-power identity; all of 1, 2, 3 when omitted.
    #[arg(long)]
    n: Option<usize>,

    /// Nowhere-zero scaling function for the conformal equivalence check.
    #[arg(long)]
    scale: Option<String>,

    /// Comma-separated vector field names spanning a distribution.
    #[arg(long, value_delimiter = ',')]
    fields: Vec<String>,

    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let flags = Flags {
        point: cli.point,
        form: cli.form,
        omega: cli.omega,
        function: cli.function,
        n: cli.n,
        scale: cli.scale,
        fields: cli.fields,
    };
    match execute(cli.command, &cli.input, &flags, cli.format) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
