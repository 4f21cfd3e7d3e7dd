use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug, Clone)]
#[command(name = "fairkit", version, about = "Curve and surface fairness reports from fairkit/1 documents")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub outputs: Outputs,
    #[command(flatten)]
    pub overrides: Overrides,
}

/// Where machine-readable results go, besides the human report on stdout.
#[derive(Args, Debug, Clone, Default)]
pub struct Outputs {
    /// Write the JSON report here; `-` replaces the human report on stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write plot data as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Write a static SVG plot.
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

/// Tolerance overrides; each beats the document settings, which beat the defaults.
#[derive(Args, Debug, Clone, Default)]
pub struct Overrides {
    /// Root-finding tolerance for curvature extrema.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_root: Option<f64>,
    /// Relative tolerance of the bending-energy quadrature.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_energy: Option<f64>,
    /// Position gap at joints and common-data endpoints, relative to scale.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_position: Option<f64>,
    /// Tangent or normal angle gap, radians.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_angle: Option<f64>,
    /// Relative curvature gap.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_curvature: Option<f64>,
    /// Gap allowed between consecutive segments of a piecewise curve.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_join: Option<f64>,
    /// Relative energy change that stops the elastica fit.
    #[arg(long, global = true, value_name = "TOL")]
    pub tol_elastica: Option<f64>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Fairness report for each curve (all curves when no ids are given).
    Analyze {
        document: PathBuf,
        ids: Vec<String>,
        /// Curvature comb samples per curve.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Rank candidate curves that share the given Hermite data.
    Compare {
        document: PathBuf,
        /// Id of the hermite entity.
        #[arg(long)]
        hermite: String,
        ids: Vec<String>,
        /// Also rank generated candidates: cubic, quintic, quadratic_bezier.
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
        /// Rank even when the common-data check fails.
        #[arg(long)]
        override_common_data: bool,
    },
    /// Append a spiral, e.g. `clothoid:scale=1,s0=0,s1=2`.
    Generate {
        /// Document to extend; created when missing.
        document: PathBuf,
        id: String,
        spec: String,
        /// Write the document here instead of in place.
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Logarithmic curvature graph and its line fit.
    Lcg {
        document: PathBuf,
        id: String,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Continuity and zebra audit of the joint between two patches.
    Zebra {
        document: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Edge of `a` on the joint: u0, u1, v0 or v1.
        #[arg(long, default_value = "u1")]
        edge_a: String,
        /// Edge of `b` on the joint.
        #[arg(long, default_value = "u0")]
        edge_b: String,
        /// Run along `b`'s edge in the opposite direction.
        #[arg(long)]
        reversed: bool,
        /// View direction `x,y,z`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        view: Option<Vec<f64>>,
        #[arg(long)]
        stations: Option<usize>,
        #[arg(long)]
        bands: Option<usize>,
    },
    /// Rounded average value of fairness per sheet and per subject.
    Ravf { document: PathBuf, ids: Vec<String> },
    /// Discrete minimum-energy curve through the given Hermite data.
    Elastica {
        document: PathBuf,
        #[arg(long)]
        hermite: String,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        #[arg(long, default_value_t = 20_000)]
        max_iters: usize,
    },
    /// Randomized consistency checks; FAIRKIT_SEED fixes the fixtures.
    Selftest {
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}
