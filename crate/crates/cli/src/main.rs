mod commands;
mod parse;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Parser)]
#[command(
    name = "zpdehn",
    version,
    about = "Cusp lemmas, heights, lattice relations and Dehn filling holonomies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Lemma {
    /// Exhaustive shape-rank classification of 2x4 blocks.
    BlockClassify,
    /// Seeded sweep over blocks satisfying the filling-pair constraints.
    PairConstraint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    OneTau,
    TwoTau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

/// Where a potential comes from: a manifold file or a seeded synthetic one.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct PotentialSource {
    #[arg(long)]
    pub manifold: Option<PathBuf>,
    /// Number of cusps of a seeded synthetic potential.
    #[arg(long)]
    pub synthetic: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a cusp-block lemma sweep.
    LemmaSweep {
        #[arg(long, value_enum, default_value_t = Lemma::BlockClassify)]
        lemma: Lemma,
        /// Entry bound (block-classify, default 2) or pair size bound
        /// (pair-constraint, default 8).
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, value_enum, default_value_t = Mode::OneTau)]
        mode: Mode,
        /// Required for pair-constraint.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Classify a subgroup spec, or a single 2x4 block with --mode.
    Classify {
        /// Integer rows `a,b,...;...`.
        #[arg(long)]
        rows: String,
        #[arg(long)]
        cusps: Option<usize>,
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Treat the rows as one cusp block in this shape mode.
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Filling pairs: `p/q,p'/q'` for a block, `p1/q1,p2/q2,p1'/q1',p2'/q2'`
        /// for a two-cusp product spec.
        #[arg(long)]
        coeff: Option<String>,
    },
    /// Run the containment cascade and check it numerically.
    Cascade {
        #[arg(long)]
        rows: String,
        #[arg(long)]
        cusps: usize,
        #[arg(long)]
        manifold: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Weil height of a root of an integer polynomial.
    Height {
        /// Irreducible polynomial, e.g. `x^3 - x + 1`.
        #[arg(long)]
        poly: String,
        /// 1-based root index in (real part, imaginary part) order.
        #[arg(long, default_value_t = 1)]
        root: usize,
        #[arg(long)]
        power: Option<i32>,
        #[arg(long, default_value_t = report::DEFAULT_PRECISION)]
        precision: u32,
    },
    /// All algebraic numbers of bounded height and degree.
    Northcott {
        #[arg(long)]
        max_height: f64,
        #[arg(long)]
        degree: usize,
    },
    /// Short integer kernel of linear forms, or the ratio calibration run.
    Siegel {
        /// Integer rows `a,b,...;...`.
        #[arg(long, required_unless_present = "calibrate")]
        forms: Option<String>,
        #[arg(long)]
        calibrate: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random forms for --calibrate.
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, default_value_t = 1_000_000)]
        entry_bound: i64,
    },
    /// Search for a multiplicative relation among complex numbers.
    Multrel {
        /// Numbers `re[,im];...`.
        #[arg(long)]
        numbers: String,
        /// Exponent bound.
        #[arg(long, default_value_t = 20)]
        bound: u64,
        #[arg(long, default_value_t = report::DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Solve the filling equations and print the core holonomies.
    Fill {
        #[command(flatten)]
        source: PotentialSource,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Slopes `p/q[,p/q...]`, one per cusp.
        #[arg(long)]
        coeff: String,
        #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
        branch: BranchArg,
        #[arg(long, default_value_t = report::DEFAULT_PRECISION)]
        precision: u32,
    },
    /// Look for distinct fillings with equal holonomy sets.
    Scan {
        #[command(flatten)]
        source: PotentialSource,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        bound: u64,
        #[arg(long, default_value_t = report::DEFAULT_TOL)]
        tol: f64,
    },
    /// Cusp-separation checks on a two-cusp potential.
    Sgi {
        #[command(flatten)]
        source: PotentialSource,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("ZPDEHN_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("ZPDEHN_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            anyhow::bail!("ZPDEHN_THREADS must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    threads()?;
    let (report, held) = match cli.command {
        Command::LemmaSweep {
            lemma,
            bound,
            mode,
            seed,
            samples,
        } => commands::lemma_sweep(lemma, bound, mode, seed, samples)?,
        Command::Classify {
            rows,
            cusps,
            copies,
            mode,
            coeff,
        } => commands::classify(&rows, cusps, copies, mode, coeff.as_deref())?,
        Command::Cascade {
            rows,
            cusps,
            manifold,
            seed,
            samples,
        } => commands::cascade(&rows, cusps, manifold.as_deref(), seed, samples)?,
        Command::Height {
            poly,
            root,
            power,
            precision,
        } => commands::height(&poly, root, power, precision)?,
        Command::Northcott { max_height, degree } => commands::northcott(max_height, degree)?,
        Command::Siegel {
            forms,
            calibrate,
            seed,
            count,
            entry_bound,
        } => commands::siegel(forms.as_deref(), calibrate, seed, count, entry_bound)?,
        Command::Multrel {
            numbers,
            bound,
            precision,
        } => commands::multrel(&numbers, bound, precision)?,
        Command::Fill {
            source,
            seed,
            coeff,
            branch,
            precision,
        } => commands::fill(&source, seed, &coeff, branch, precision)?,
        Command::Scan {
            source,
            seed,
            bound,
            tol,
        } => commands::scan(&source, seed, bound, tol)?,
        Command::Sgi { source, seed } => commands::sgi(&source, seed)?,
    };
    report.emit(cli.format, cli.out.as_deref())?;
    Ok(held)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
