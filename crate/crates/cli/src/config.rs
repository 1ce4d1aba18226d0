use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "structenc", version, about = "Structure-preserving quantum encoding experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub knobs: Knobs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Encode points from a CSV file into pure states.
    Encode,
    /// Solve for all equivariant Lie generators of a symmetry.
    EquivariantBasis,
    /// Evaluate the symmetric two-qubit classifier on a grid.
    GqmlGrid,
    /// Train the re-uploading metric-learning model.
    MetricLearn,
    /// Compare persistence diagrams before and after an encoding.
    TdaStability,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Encode => "encode",
            Command::EquivariantBasis => "equivariant-basis",
            Command::GqmlGrid => "gqml-grid",
            Command::MetricLearn => "metric-learn",
            Command::TdaStability => "tda-stability",
        }
    }
}

/// Every knob any subcommand reads. Values come from `--config` first and
/// are overridden by flags given on the command line.
#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Knobs {
    /// JSON file with any of these options.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Seed for every random draw.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Grid resolution per axis.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Fiducial-state weight, in (0, 1).
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Nelder–Mead restarts.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Highest homology degree.
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Iteration cap per restart.
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    /// Residual tolerance for pass/fail checks.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Use the synthetic two-cluster dataset generated from the seed.
    #[arg(long, global = true)]
    pub fixture: bool,
    /// Use the built-in 30-point reference dataset.
    #[arg(long, global = true)]
    pub reference_data: bool,
    /// Points CSV with header x1,...,xd[,label].
    #[arg(long, global = true)]
    pub points: Option<PathBuf>,
    /// Labelled dataset CSV with header x,label.
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
    /// Encoding spec JSON, or the word `identity` for tda-stability.
    #[arg(long, global = true)]
    pub spec: Option<PathBuf>,
    /// Group, action and representation JSON.
    #[arg(long, global = true)]
    pub symmetry: Option<PathBuf>,
    /// Built-in symmetry: klein-four, trivial or z2-reflection.
    #[arg(long, global = true)]
    pub builtin: Option<String>,
    /// State metric: trace, hs or bures.
    #[arg(long, global = true)]
    pub metric: Option<String>,
    /// Lower end of the sampled domain.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lo: Option<f64>,
    /// Upper end of the sampled domain.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hi: Option<f64>,
    /// Samples along the Bloch-sphere curve.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl Knobs {
    /// Loads `--config` if given and lays the command-line values over it.
    pub fn resolve(self) -> Result<Knobs, CliError> {
        let mut base = match &self.config {
            Some(path) => {
                let text = read_text(path)?;
                serde_json::from_str::<Knobs>(&text)
                    .map_err(|e| CliError::generic(format!("config {}: {e}", path.display())))?
            }
            None => Knobs::default(),
        };
        let top = self;
        overlay!(base, top; seed, out, grid, p, restarts, max_dim, max_iters, tolerance, points, data, spec, symmetry, builtin, metric, lo, hi, samples);
        base.fixture |= top.fixture;
        base.reference_data |= top.reference_data;
        base.config = top.config;
        Ok(base)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::generic(format!("cannot read {}: {e}", path.display())))
}
