//! Batch driver for discrete landscape feature maps: landscapes,
//! featurization, clustering statistics, permutation tests, projections,
//! and synthetic corpus generation. Every subcommand is deterministic given
//! its inputs and `--seed`; outputs carry no timestamps, so reruns are
//! byte-identical.

mod commands;
mod error;
mod plots;
mod synthgen;
mod table;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dlfm::analysis::ScoreKind;

use error::CliError;

#[derive(Parser)]
#[command(name = "dlfm", version, about = "Discrete landscape feature maps for persistence barcodes")]
struct Cli {
    /// Landscape levels carried by the embedding.
    #[arg(long, global = true, default_value_t = 15)]
    levels: usize,

    /// Maximum total degree of the signature words.
    #[arg(long, global = true, default_value_t = 3)]
    weight: usize,

    /// Number of k-means clusters.
    #[arg(long, global = true, default_value_t = 3)]
    clusters: usize,

    /// Seed every randomized stage derives its substreams from.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Label shuffles per permutation test.
    #[arg(long, global = true, default_value_t = 1000)]
    permutations: usize,

    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[command(subcommand)]
    command: Command,
}

/// Settings shared by all subcommands.
pub struct Config {
    pub levels: usize,
    pub weight: usize,
    pub clusters: usize,
    pub seed: u64,
    pub permutations: usize,
    pub out: PathBuf,
}

#[derive(Copy, Clone, ValueEnum)]
enum Score {
    Ari,
    Nmi,
    Separation,
}

impl From<Score> for ScoreKind {
    fn from(score: Score) -> ScoreKind {
        match score {
            Score::Ari => ScoreKind::Ari,
            Score::Nmi => ScoreKind::Nmi,
            Score::Separation => ScoreKind::Separation,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the persistence landscape of one barcode file.
    Landscape {
        /// Barcode JSON file: {"bars": [[birth, death], ...]}.
        barcode: PathBuf,
        /// Also render the levels as an SVG plot.
        #[arg(long)]
        svg: bool,
    },
    /// Featurize every barcode of a manifest into features.csv.
    Featurize {
        /// Manifest CSV with id,path[,label][,depth] columns.
        #[arg(long)]
        manifest: PathBuf,
        /// Freeze the evaluation grid from this other manifest's corpus and
        /// featurize the barcodes as guests on it.
        #[arg(long, value_name = "MANIFEST", conflicts_with = "per_entry_grid")]
        grid_from: Option<PathBuf>,
        /// Evaluate each barcode on its own critical points instead of the
        /// corpus union grid.
        #[arg(long)]
        per_entry_grid: bool,
    },
    /// Cluster feature rows with k-means and score against given labels.
    Cluster {
        /// Features CSV written by `featurize`.
        #[arg(long)]
        features: PathBuf,
        /// Manifest supplying class labels (and depths), matched by id.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Use raw coefficients instead of the BW-scaled geometry.
        #[arg(long)]
        raw: bool,
        /// Rank-correlate each row's distance to the mean row against this
        /// manifest column.
        #[arg(long, value_name = "COLUMN")]
        spearman: Option<String>,
    },
    /// Permutation-test the agreement between features and labels.
    Permtest {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
        /// Statistic to permute.
        #[arg(long, value_enum, default_value_t = Score::Ari)]
        score: Score,
        #[arg(long)]
        raw: bool,
    },
    /// Project feature rows onto principal components with a scatter plot.
    Pca {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Number of components to keep.
        #[arg(long, default_value_t = 2)]
        components: usize,
        #[arg(long)]
        raw: bool,
    },
    /// Run the loop diagnostics on the landscape path of a barcode.
    ChenCheck {
        barcode: PathBuf,
        /// Residual tolerance for the loop conditions.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Generate a labeled synthetic barcode corpus under --out.
    Synth {
        /// Barcodes per class.
        #[arg(long, default_value_t = 30)]
        per_class: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    for (flag, value) in [
        ("--levels", cli.levels),
        ("--weight", cli.weight),
        ("--clusters", cli.clusters),
        ("--permutations", cli.permutations),
    ] {
        if value == 0 {
            return Err(CliError::Usage(format!("{flag} must be at least 1")));
        }
    }
    let config = Config {
        levels: cli.levels,
        weight: cli.weight,
        clusters: cli.clusters,
        seed: cli.seed,
        permutations: cli.permutations,
        out: cli.out,
    };
    fs::create_dir_all(&config.out).map_err(|e| {
        CliError::Data(format!(
            "cannot create output directory {}: {e}",
            config.out.display()
        ))
    })?;

    match cli.command {
        Command::Landscape { barcode, svg } => commands::landscape::run(&config, &barcode, svg),
        Command::Featurize {
            manifest,
            grid_from,
            per_entry_grid,
        } => commands::featurize::run(&config, &manifest, grid_from.as_deref(), per_entry_grid),
        Command::Cluster {
            features,
            manifest,
            raw,
            spearman,
        } => commands::cluster::run(
            &config,
            &features,
            manifest.as_deref(),
            raw,
            spearman.as_deref(),
        ),
        Command::Permtest {
            features,
            manifest,
            score,
            raw,
        } => commands::permtest::run(&config, &features, &manifest, score.into(), raw),
        Command::Pca {
            features,
            manifest,
            components,
            raw,
        } => commands::pca::run(&config, &features, manifest.as_deref(), components, raw),
        Command::ChenCheck { barcode, tol } => commands::chen::run(&barcode, tol),
        Command::Synth { per_class } => commands::synth::run(&config, per_class),
    }
}
