use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Format, PotentialKind};

#[derive(Debug, Parser)]
#[command(name = "pdm", version, about = "Exact bound states under position-dependent mass, with a finite-difference oracle")]
pub struct Cli {
    #[command(flatten)]
    pub overrides: Overrides,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum SignArg {
    #[default]
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Coordinate {
    /// mapped (reference) coordinate
    Y,
    /// physical coordinate, ψ = m^{1/4} φ(f(x))
    #[default]
    X,
}

/// Settings shared by every subcommand; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML config file
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub potential: Option<PotentialKind>,

    /// Kratzer dissociation energy
    #[arg(long = "De", global = true)]
    pub de: Option<f64>,

    /// Kratzer equilibrium separation
    #[arg(long, global = true)]
    pub ye: Option<f64>,

    /// Morse well depth
    #[arg(long = "D", global = true)]
    pub d: Option<f64>,

    /// Morse range parameter
    #[arg(long = "morse-a", global = true)]
    pub morse_a: Option<f64>,

    /// Morse equilibrium distance
    #[arg(long, global = true)]
    pub r0: Option<f64>,

    #[arg(long, global = true)]
    pub mu: Option<f64>,

    #[arg(long, global = true)]
    pub hbar: Option<f64>,

    /// Angular momenta, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub ell: Option<Vec<u32>>,

    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,

    /// Mass profile, e.g. "lorentzian a=1 q=1"
    #[arg(long, global = true)]
    pub profile: Option<String>,

    /// Profile parameter a
    #[arg(long, global = true)]
    pub a: Option<f64>,

    /// Profile parameter q
    #[arg(long, global = true)]
    pub q: Option<f64>,

    /// Profile parameter b
    #[arg(long, global = true)]
    pub b: Option<f64>,

    #[arg(long = "grid-points", global = true)]
    pub grid_points: Option<usize>,

    /// Box edges sit where every requested state has fallen below this
    /// fraction of its peak
    #[arg(long = "box-tol", global = true)]
    pub box_tol: Option<f64>,

    /// Relative energy tolerance for `verify`
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[arg(long = "correction-sign", global = true, value_enum, hide = true)]
    pub correction_sign: Option<SignArg>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic energies for n ≤ n_max and each ℓ
    Spectrum,
    /// Sampled wavefunction of one state
    Wavefunction {
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Coordinate::X)]
        coordinate: Coordinate,
        #[arg(long, default_value_t = 2001)]
        samples: usize,
        #[arg(long = "from")]
        from: Option<f64>,
        #[arg(long = "to")]
        to: Option<f64>,
    },
    /// Compare analytic energies with the finite-difference oracle
    Verify {
        /// Grid resolutions, comma separated (at least three)
        #[arg(long, value_delimiter = ',')]
        resolutions: Option<Vec<usize>>,
    },
    /// Compare printed closed-form potentials with the generic construction
    Audit {
        /// Value substituted for the stray `q` in the squared-Lorentzian Morse formula
        #[arg(long = "stray-q", default_value_t = 1.0)]
        stray_q: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Vary one parameter and tabulate energies
    Sweep {
        #[arg(long)]
        param: String,
        /// Comma-separated values; may be empty
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<String>,
        /// Also run the oracle for every value
        #[arg(long)]
        verify: bool,
    },
}
