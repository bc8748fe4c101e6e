use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qrv::{cmd_classical, cmd_selftest, cmd_special, cmd_sweep, cmd_verify, render, render_cyclotomic, Format, Report};
use qrv_core::theorems::SpecialCase;
use qrv_core::{Error, Rational};

#[derive(Parser)]
#[command(name = "qrv", version, about = "Exact checks of truncated q-hypergeometric supercongruences")]
struct Cli {
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check one (n, d, r) modulo Phi_n(q)^2
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        /// Also run every proof-step check
        #[arg(long)]
        steps: bool,
    },
    /// Same as `verify --steps`
    Steps {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
    },
    /// Check every coprime (n, d) and 1 <= r <= r-max
    Sweep {
        #[arg(long)]
        n_max: i64,
        #[arg(long)]
        d_max: i64,
        #[arg(long)]
        r_max: i64,
        #[arg(long)]
        include_degenerate: bool,
    },
    /// Classical truncated 2F1 modulo p^2
    Classical {
        #[arg(long, value_delimiter = ',', default_value = "1/2,1/3,2/3,1/4,3/4,1/6,5/6,1/5,2/5")]
        alpha: Vec<Rational>,
        #[arg(long, default_value_t = 97)]
        p_max: u64,
    },
    /// The r = 1, d in {2, 3, 4, 6} specializations at primes
    Special {
        /// qmor2, qmor3, qmor4 or qmor6; all four when omitted
        #[arg(long)]
        case: Option<SpecialCase>,
        #[arg(long, default_value_t = 37)]
        p_max: u64,
    },
    /// Print the n-th cyclotomic polynomial
    Cyclotomic {
        #[arg(long)]
        n: u64,
    },
    /// Exact identity suites on small instances
    Selftest,
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let format = Format::from(cli.format);
    let report: Report = match cli.command {
        Command::Verify { n, d, r, steps } => cmd_verify(n, d, r, steps)?,
        Command::Steps { n, d, r } => cmd_verify(n, d, r, true)?,
        Command::Sweep { n_max, d_max, r_max, include_degenerate } => {
            cmd_sweep(n_max, d_max, r_max, include_degenerate)?
        }
        Command::Classical { alpha, p_max } => cmd_classical(&alpha, p_max)?,
        Command::Special { case, p_max } => {
            let cases = case.map_or_else(|| SpecialCase::ALL.to_vec(), |c| vec![c]);
            cmd_special(&cases, p_max)?
        }
        Command::Cyclotomic { n } => {
            print!("{}", render_cyclotomic(n, format)?);
            return Ok(ExitCode::SUCCESS);
        }
        Command::Selftest => cmd_selftest()?,
    };
    print!("{}", render(&report, format));
    Ok(ExitCode::from(report.exit_code()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
