use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lcsc_core::germ::GermIndex;
use lcsc_tools::commands::{self, AnalyzeOptions, Input, Numerics};
use lcsc_tools::fixture::Fixture;
use lcsc_tools::report::{InputInfo, Report};

#[derive(Parser)]
#[command(name = "lcsc", version, about = "Checks and reports for left cancellative small categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Category or amalgam JSON document.
    file: Option<String>,
    /// Built-in fixture, e.g. `KG(2)` or `SEP(3,1)`.
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the category axioms; exit 0 if valid, 1 if not, 2 on parse errors.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// Spectrum, boundary, germ groupoids and alignment of a total category.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        spectrum: bool,
        /// Build G₁ or G₂.
        #[arg(long, value_parser = ["1", "2"])]
        groupoid: Option<String>,
        #[arg(long)]
        boundary: bool,
        #[arg(long)]
        hausdorff: bool,
        #[arg(long)]
        align: bool,
    },
    /// Operator computations: shift bound, separation test, Wiener-Hopf membership.
    Numerics {
        /// Model for --wh: NSQ(L) for (ℤ², ℕ²) or FG(n,L) for the free group.
        fixture: Option<String>,
        #[arg(long, value_name = "P", conflicts_with_all = ["separation", "wh"])]
        shift_bound: Option<usize>,
        #[arg(long, num_args = 4, value_names = ["P", "M", "TRIALS", "SEED"], conflicts_with = "wh")]
        separation: Option<Vec<u64>>,
        #[arg(long, num_args = 2, value_names = ["T", "BOUND"], allow_hyphen_values = true)]
        wh: Option<Vec<String>>,
    },
}

fn usage(command: &str, message: impl Into<String>) -> Report {
    Report::error(command, InputInfo::new("", b""), "cli-io", message)
}

fn input(command: &str, source: Source) -> Result<Input, Report> {
    if let Some(name) = source.fixture {
        return name
            .parse()
            .map(Input::Fixture)
            .map_err(|e: lcsc_tools::fixture::FixtureError| usage(command, e.to_string()));
    }
    let path = source.file.expect("clap requires a source");
    std::fs::read(&path)
        .map(|bytes| Input::File { path: path.clone(), bytes })
        .map_err(|e| usage(command, format!("{path}: {e}")))
}

fn run(cli: Cli) -> Report {
    match cli.command {
        Command::Validate { source } => match input("validate", source) {
            Ok(i) => commands::validate(&i),
            Err(r) => r,
        },
        Command::Analyze {
            source,
            spectrum,
            groupoid,
            boundary,
            hausdorff,
            align,
        } => {
            let opts = AnalyzeOptions {
                spectrum,
                groupoid: groupoid.map(|g| if g == "1" { GermIndex::One } else { GermIndex::Two }),
                boundary,
                hausdorff,
                align,
            };
            match input("analyze", source) {
                Ok(i) => commands::analyze(&i, opts),
                Err(r) => r,
            }
        }
        Command::Numerics {
            fixture,
            shift_bound,
            separation,
            wh,
        } => {
            let job = if let Some(p) = shift_bound {
                Numerics::ShiftBound(p)
            } else if let Some(s) = separation {
                Numerics::Separation {
                    p: s[0] as usize,
                    m: s[1] as usize,
                    trials: s[2] as usize,
                    seed: s[3],
                }
            } else if let Some(w) = wh {
                let Ok(bound) = w[1].parse::<usize>() else {
                    return usage("numerics", format!("bad bound `{}`", w[1]));
                };
                let model = match fixture.as_deref().unwrap_or("NSQ(1)").parse::<Fixture>() {
                    Ok(m) => m,
                    Err(e) => return usage("numerics", e.to_string()),
                };
                Numerics::WienerHopf {
                    model,
                    t: w[0].clone(),
                    bound,
                }
            } else {
                return usage("numerics", "one of --shift-bound, --separation, --wh is required");
            };
            commands::numerics(&job)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { 2 } else { 0 };
            return ExitCode::from(code);
        }
    };
    let report = run(cli);
    println!("{}", report.to_json());
    ExitCode::from(report.code() as u8)
}
