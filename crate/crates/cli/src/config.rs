use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use gesforge::numcert::OptimizerOptions;

#[derive(Debug, Parser)]
#[command(name = "gesforge", version, about = "Unextendible product sets from prime-order DFT matrices and their entangled orthocomplements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the product vectors and write them as JSON.
    Construct {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact and numerical certification of an instance.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        opts: OptArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the minors of the p×p DFT matrix for exact zeros.
    Chebotarev {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orthonormal basis of the orthocomplement.
    Basis {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize a saved report; with --rerun, re-execute its configuration
    /// and compare verdicts.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        rerun: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Number of parties (with --d).
    #[arg(long)]
    pub n: Option<usize>,
    /// Common local dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Comma-separated local dimensions.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Number of product vectors.
    #[arg(long)]
    pub k: Option<usize>,
    /// Prime order; defaults to the smallest prime at least the total dimension.
    #[arg(long)]
    pub p: Option<u64>,
    /// JSON table of scale factors h[m][s].
    #[arg(long)]
    pub h_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Vectors file written by `construct`.
    #[arg(long = "in", conflicts_with_all = ["n", "d", "dims", "k", "p", "h_file"])]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OptArgs {
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub max_sweeps: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub threshold: f64,
    #[arg(long, env = "GESFORGE_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl OptArgs {
    pub fn options(&self) -> OptimizerOptions {
        OptimizerOptions {
            restarts: self.restarts,
            max_sweeps: self.max_sweeps,
            tol: self.tol,
            threshold: self.threshold,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsConfig {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub dims: Option<Vec<usize>>,
    pub k: Option<usize>,
    pub p: Option<u64>,
}

impl From<&ParamArgs> for ParamsConfig {
    fn from(a: &ParamArgs) -> Self {
        ParamsConfig {
            n: a.n,
            d: a.d,
            dims: a.dims.clone(),
            k: a.k,
            p: a.p,
        }
    }
}

impl ParamsConfig {
    pub fn to_args(&self, h_file: Option<PathBuf>) -> ParamArgs {
        ParamArgs {
            n: self.n,
            d: self.d,
            dims: self.dims.clone(),
            k: self.k,
            p: self.p,
            h_file,
        }
    }
}

/// Everything needed to repeat a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(default)]
    pub params: Option<ParamsConfig>,
    #[serde(default)]
    pub h_file: Option<PathBuf>,
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub options: Option<OptimizerOptions>,
    #[serde(default)]
    pub chebotarev_p: Option<u64>,
    #[serde(default)]
    pub max_size: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            params: None,
            h_file: None,
            input: None,
            options: None,
            chebotarev_p: None,
            max_size: None,
            out: None,
        }
    }

    pub fn with_source(mut self, source: &SourceArgs) -> Self {
        match &source.input {
            Some(path) => self.input = Some(path.clone()),
            None => {
                self.params = Some((&source.params).into());
                self.h_file = source.params.h_file.clone();
            }
        }
        self
    }

    pub fn source_args(&self) -> SourceArgs {
        SourceArgs {
            input: self.input.clone(),
            params: self
                .params
                .clone()
                .unwrap_or(ParamsConfig {
                    n: None,
                    d: None,
                    dims: None,
                    k: None,
                    p: None,
                })
                .to_args(self.h_file.clone()),
        }
    }
}
