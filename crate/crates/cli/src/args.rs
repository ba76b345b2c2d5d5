use clap::{Args, Parser, Subcommand, ValueEnum};
use qdeform_core::{Potential, SpectrumMode};

#[derive(Debug, Parser)]
#[command(
    name = "qdeform",
    version,
    about = "Deformed angular momentum, harmonics and spectra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the relation suite and report every residual.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        lmax: u32,
    },
    /// Closed-form and numerical levels of a central potential.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = PotentialArg::Coulomb)]
        potential: PotentialArg,
        #[arg(long, default_value_t = 2)]
        nmax: u32,
        #[arg(long, default_value_t = 4)]
        lmax: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
    },
    /// Series coefficients and normalization of one harmonic.
    Harmonics {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        l: u32,
        #[arg(long, allow_negative_numbers = true)]
        m: i32,
    },
    /// The Jackson integral of x0^n on (0, 1), or the Gram matrix report
    /// of the harmonics up to --lmax when --n is absent.
    Integrate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, default_value_t = 4)]
        lmax: u32,
    },
    /// Effective angular momentum for l = 0..=lmax.
    EffectiveL {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        lmax: u32,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Deformation parameter, q > 0.
    #[arg(long, default_value_t = 1.1, allow_negative_numbers = true, value_parser = positive)]
    pub q: f64,
    #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true, value_parser = positive)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be a finite positive number, got {v}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PotentialArg {
    Coulomb,
    Oscillator,
}

impl From<PotentialArg> for Potential {
    fn from(p: PotentialArg) -> Self {
        match p {
            PotentialArg::Coulomb => Potential::Coulomb,
            PotentialArg::Oscillator => Potential::Oscillator,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Closed,
    Numeric,
    Both,
}

impl From<ModeArg> for SpectrumMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Closed => SpectrumMode::Closed,
            ModeArg::Numeric => SpectrumMode::Numeric,
            ModeArg::Both => SpectrumMode::Both,
        }
    }
}
