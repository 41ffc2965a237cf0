use std::process::ExitCode;

use cdgaw::{run, Command, Flags, Input, WorkbenchError};
use clap::Parser;

#[derive(Parser, Debug)]
#[command(name = "cdgaw", version, about = "Exact CDGA workbench: cohomology, Lefschetz maps, Massey products, surgery models")]
struct Cli {
    /// validate | betti | cohomology | pairing-table | lefschetz | massey | amassey | blowup | resolve | verdict
    command: String,
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    preset: Option<String>,
    #[arg(long)]
    spec: Option<String>,
    /// Work on the invariant subcomplex of the declared action.
    #[arg(long)]
    invariant: bool,
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long)]
    power: Option<u32>,
    #[arg(long)]
    json: bool,
    /// Blow-up parameter (a nonzero rational); defaults to a fixed sample set.
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    a: Option<String>,
    /// Comma-separated classes b_1,...,b_r.
    #[arg(long)]
    b: Option<String>,
    /// Comma-separated classes for `massey`.
    #[arg(long)]
    classes: Option<String>,
}

fn execute(cli: Cli) -> Result<String, WorkbenchError> {
    let cmd: Command = cli.command.parse()?;
    let input = match (&cli.preset, &cli.spec) {
        (Some(p), _) => Input::Preset(p.clone()),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| WorkbenchError::Other(format!("{path}: {e}")))?;
            Input::File { path: path.clone(), text }
        }
        (None, None) => return Err(WorkbenchError::Other("give --preset or --spec".into())),
    };
    let flags = Flags { invariant: cli.invariant, degree: cli.degree, power: cli.power, t: cli.t, a: cli.a, b: cli.b, classes: cli.classes };
    let report = run(cmd, &input, &flags)?;
    Ok(if cli.json { report.to_json() } else { report.to_text() })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
