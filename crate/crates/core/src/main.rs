use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use critpair::ensembles::{EnsembleKind, EntryLaw};
use critpair::harness::{self, ConfigOverrides, DensityChoice, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "critpair", version, about = "Zeros and critical points of random polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Paired critical point of a fixed zero u0 (uniqueness, CLT, confidence disk)
    Pair(Flags),
    /// Normalized log-derivative sum at z_n = n^-clt_exponent
    Clt(Flags),
    /// nu_n and chi_n measures for the i.i.d., Weyl and Ginibre models
    Conjecture(Flags),
    /// Cauchy-Stieltjes closed forms against tables and Monte Carlo
    CstCheck(Flags),
    /// Fast end-to-end acceptance checks
    Selftest(Flags),
}

#[derive(Clone, Copy, ValueEnum)]
enum EnsembleArg {
    Iid,
    Weyl,
    Ginibre,
}

#[derive(Clone, Copy, ValueEnum)]
enum DensityArg {
    UniformDisk,
    Gaussian,
    Radial,
}

#[derive(Clone, Copy, ValueEnum)]
enum EntryLawArg {
    Gaussian,
    Rademacher,
}

#[derive(Args, Default)]
struct Flags {
    /// JSON config file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    ensemble: Option<EnsembleArg>,
    #[arg(long, value_enum)]
    density: Option<DensityArg>,
    /// Two-column r,cdf table for --density radial
    #[arg(long)]
    cdf_table: Option<PathBuf>,
    #[arg(long, value_enum)]
    entry_law: Option<EntryLawArg>,
    #[arg(long, allow_hyphen_values = true)]
    u0_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    u0_im: Option<f64>,
    /// Certification radius exponent: r_n = n^-alpha
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma-separated confidence-disk radii
    #[arg(long, value_delimiter = ',')]
    r_grid: Option<Vec<f64>>,
    #[arg(long)]
    exclusion_radius: Option<f64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0: all cores)
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    clt_exponent: Option<f64>,
    /// Use n^e instead of sqrt(n / log n) in the chi statistic
    #[arg(long)]
    chi_norm_exponent: Option<f64>,
    #[arg(long)]
    weyl_max_degree: Option<usize>,
}

impl Flags {
    fn overrides(&self) -> ConfigOverrides {
        ConfigOverrides {
            n: self.n,
            trials: self.trials,
            seed: self.seed,
            ensemble: self.ensemble.map(|e| match e {
                EnsembleArg::Iid => EnsembleKind::IidZeros,
                EnsembleArg::Weyl => EnsembleKind::Weyl,
                EnsembleArg::Ginibre => EnsembleKind::GinibreCharPoly,
            }),
            density: self.density.map(|d| match d {
                DensityArg::UniformDisk => DensityChoice::UniformDisk,
                DensityArg::Gaussian => DensityChoice::StdComplexGaussian,
                DensityArg::Radial => DensityChoice::Radial,
            }),
            cdf_table: self.cdf_table.clone(),
            entry_law: self.entry_law.map(|l| match l {
                EntryLawArg::Gaussian => EntryLaw::ComplexGaussian,
                EntryLawArg::Rademacher => EntryLaw::ComplexRademacher,
            }),
            u0_re: self.u0_re,
            u0_im: self.u0_im,
            alpha: self.alpha,
            r_grid: self.r_grid.clone(),
            exclusion_radius: self.exclusion_radius,
            out: self.out.clone(),
            threads: self.threads,
            clt_exponent: self.clt_exponent,
            chi_norm_exponent: self.chi_norm_exponent,
            weyl_max_degree: self.weyl_max_degree,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, flags) = match &cli.command {
        Command::Pair(f) => (Experiment::Pair, f),
        Command::Clt(f) => (Experiment::Clt, f),
        Command::Conjecture(f) => (Experiment::Conjecture, f),
        Command::CstCheck(f) => (Experiment::CstCheck, f),
        Command::Selftest(f) => (Experiment::Selftest, f),
    };
    let cfg = match ExperimentConfig::load(experiment, flags.config.as_deref(), &flags.overrides()) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("critpair: {e}");
            return ExitCode::from(1);
        }
    };
    match harness::run(&cfg) {
        Ok(outcome) => {
            for (metric, value) in &outcome.summary.rows {
                println!("{metric},{value}");
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("critpair: acceptance checks failed");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("critpair: {e}");
            ExitCode::from(1)
        }
    }
}
