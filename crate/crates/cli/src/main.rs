use std::fs;
use std::process::ExitCode;
use std::str::FromStr;

use chaoslab::harness::{
    self, cmd_converge, cmd_count, cmd_crossval, cmd_freeness, cmd_linearize, cmd_paths,
    cmd_residual, cmd_tableaux, cmd_toeplitz, Basis, Format, FreenessSetup, Model, Report,
};
use chaoslab::{Composition, Error};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

#[derive(Parser)]
#[command(
    name = "chaoslab",
    version,
    about = "Exact finite-n chaos models and their pairing limits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct Output {
    /// json or csv
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<String>,
    /// Largest tuple count a single trace may enumerate
    #[arg(long, global = true, default_value_t = harness::DEFAULT_GUARD)]
    guard: u128,
}

#[derive(Subcommand)]
enum Command {
    /// Finite-n trace of a product against its pairing limit
    Converge {
        #[arg(long)]
        r: String,
        /// One time for all parts, or one per part
        #[arg(long)]
        t: Option<String>,
        #[arg(long, default_value = "4,8,16")]
        n: String,
        #[arg(long, default_value = "free")]
        model: String,
    },
    /// Residual of the recursion M_1 M_r = t M_{r-1} + M_{r+1} (or its classical form)
    Residual {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value = "1")]
        t: String,
        #[arg(long, default_value = "4,6,8,10,12")]
        n: String,
        #[arg(long, default_value = "free")]
        model: String,
    },
    /// Mixed moments of elements living on disjoint time intervals
    Freeness {
        /// Right endpoints t_1 < .. < t_p of the intervals (t_{i-1}, t_i]
        #[arg(long)]
        t: String,
        /// Chaos order on each interval
        #[arg(long)]
        r: String,
        /// Letters A, B, .. naming intervals, e.g. ABAB
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "4,8,16")]
        n: String,
        #[arg(long, default_value = "free")]
        model: String,
    },
    /// Every identity over all compositions up to a size
    Crossval {
        /// Even bound on |r|
        #[arg(long, default_value_t = 8)]
        max_total: usize,
    },
    /// Sizes of NC2, NC2*, Pi2, Pi2*
    Count {
        #[arg(long)]
        r: String,
        /// nc2, nc2*, pi2 or pi2*; all four when omitted
        #[arg(long)]
        family: Option<String>,
    },
    /// Linearisation coefficients of products of orthogonal polynomials
    Linearize {
        #[arg(long)]
        r: String,
        /// Target degrees; 0..=|r| when omitted
        #[arg(long)]
        k: Option<String>,
        /// chebyshev, hermite or charlier; all three when omitted
        #[arg(long)]
        family: Option<String>,
    },
    /// Dyck r-paths with their pairings
    Paths {
        #[arg(long)]
        r: String,
        #[arg(long)]
        irreducible: bool,
    },
    /// Two-row semistandard tableaux of weight r
    Tableaux {
        #[arg(long)]
        r: String,
    },
    /// Vacuum entry of a product of truncated Toeplitz matrices
    Toeplitz {
        #[arg(long)]
        r: String,
        #[arg(long)]
        d: Option<usize>,
    },
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| {
            v.parse()
                .map_err(|_| Error::Usage(format!("bad {what} value {v:?}")))
        })
        .collect()
}

/// `3`, `1/2` or `0.25`, exactly.
fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::Usage(format!("bad time {s:?}"));
    match s.split_once('.') {
        Some((int, frac)) if frac.chars().all(|c| c.is_ascii_digit()) => {
            let den = format!("1{}", "0".repeat(frac.len()));
            BigRational::from_str(&format!("{int}{frac}/{den}")).map_err(|_| bad())
        }
        Some(_) => Err(bad()),
        None => BigRational::from_str(s).map_err(|_| bad()),
    }
}

fn parse_times(s: &str) -> Result<Vec<BigRational>, Error> {
    s.split(',').map(parse_rational).collect()
}

fn with_times(r: &str, t: Option<&str>) -> Result<Composition, Error> {
    let r: Composition = r.parse()?;
    let Some(t) = t else { return Ok(r) };
    let mut times = parse_times(t)?;
    if times.len() == 1 {
        times = vec![times[0].clone(); r.len()];
    }
    Composition::with_times(r.parts().to_vec(), times)
}

fn run(cli: &Cli) -> Result<Report, Error> {
    let guard = cli.out.guard;
    match &cli.command {
        Command::Converge { r, t, n, model } => cmd_converge(
            model.parse()?,
            &with_times(r, t.as_deref())?,
            &parse_list(n, "n")?,
            guard,
        ),
        Command::Residual { r, t, n, model } => cmd_residual(
            model.parse()?,
            *r,
            &parse_rational(t)?,
            &parse_list(n, "n")?,
            guard,
        ),
        Command::Freeness {
            t,
            r,
            word,
            n,
            model,
        } => {
            let setup = FreenessSetup::new(parse_times(t)?, parse_list(r, "r")?, word)?;
            cmd_freeness(model.parse::<Model>()?, &setup, &parse_list(n, "n")?, guard)
        }
        Command::Crossval { max_total } => cmd_crossval(*max_total),
        Command::Count { r, family } => {
            let family = family.as_deref().map(harness::parse_family).transpose()?;
            cmd_count(&r.parse()?, family)
        }
        Command::Linearize { r, k, family } => {
            let r: Composition = r.parse()?;
            let ks = match k {
                Some(k) => parse_list(k, "k")?,
                None => (0..=r.total()).collect(),
            };
            let bases = match family {
                Some(f) => vec![f.parse()?],
                None => vec![Basis::Chebyshev, Basis::Hermite, Basis::Charlier],
            };
            cmd_linearize(&r, &ks, &bases)
        }
        Command::Paths { r, irreducible } => cmd_paths(&r.parse()?, *irreducible),
        Command::Tableaux { r } => cmd_tableaux(&r.parse()?),
        Command::Toeplitz { r, d } => cmd_toeplitz(&r.parse()?, *d),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = cli
        .out
        .format
        .parse::<Format>()
        .and_then(|format| run(&cli).and_then(|rep| Ok((harness::render(&rep, format)?, rep))));
    let (text, report) = match result {
        Ok(v) => v,
        Err(e) => {
            eprintln!("chaoslab: {e}");
            return ExitCode::from(3);
        }
    };
    match &cli.out.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("chaoslab: cannot write {path}: {e}");
                return ExitCode::from(3);
            }
            eprintln!("{}: {}", report.command, report.verdict);
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.verdict.exit_code() as u8)
}
