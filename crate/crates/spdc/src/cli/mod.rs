//! The `spdc` command-line surface.
//!
//! Every command prints a single JSON result object on stdout (bulk data
//! goes to files) and exits 0 on success, 2 on usage errors, 3 on
//! data-format errors, and 4 on numeric/domain errors. Failures print a
//! machine-readable `{code, message, offending_parameter}` object instead.
//! All result objects carry the tool version and SHA-256 hashes of the
//! input files so runs can be reproduced.

mod commands;
mod units;

pub use units::{parse_axis, parse_length_nm, parse_length_um, parse_time_ps};

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::dispersion::{Axis, DispersionError};
use crate::io::FormatError;
use crate::metrics::MetricsError;
use crate::modecoupling::ModeError;
use crate::phasematch::PhaseMatchError;
use crate::simulator::SimulatorError;
use crate::tcspc::{AccidentalMethod, TcspcError};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA_FORMAT: i32 = 3;
pub const EXIT_DOMAIN: i32 = 4;

/// A command failure carrying the machine-readable error fields.
#[derive(Debug)]
pub struct Failure {
    pub code: &'static str,
    pub message: String,
    pub offending_parameter: Option<String>,
    pub exit_code: i32,
}

impl Failure {
    pub fn usage(code: &'static str, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            offending_parameter: None,
            exit_code: EXIT_USAGE,
        }
    }

    pub fn param(mut self, flag: &str) -> Self {
        self.offending_parameter = Some(flag.to_string());
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "code": self.code,
            "message": self.message,
            "offending_parameter": self.offending_parameter,
        })
    }
}

pub(crate) trait IntoFailure {
    fn fail(self) -> Failure;
}

fn failure(code: &'static str, exit_code: i32, message: String) -> Failure {
    Failure {
        code,
        message,
        offending_parameter: None,
        exit_code,
    }
}

impl IntoFailure for DispersionError {
    fn fail(self) -> Failure {
        use DispersionError::*;
        let (code, exit) = match &self {
            NonMonotonicGrid { .. } => ("non_monotonic_grid", EXIT_DATA_FORMAT),
            NegativeKappa { .. } => ("negative_kappa", EXIT_DATA_FORMAT),
            NonPositiveIndex { .. } => ("non_positive_index", EXIT_DATA_FORMAT),
            MalformedRow { .. } => ("malformed_row", EXIT_DATA_FORMAT),
            BadHeader => ("bad_header", EXIT_DATA_FORMAT),
            TooFewRows(_) => ("too_few_rows", EXIT_DATA_FORMAT),
            Io(_) => ("io", EXIT_DATA_FORMAT),
            OutOfRange { .. } => ("out_of_range", EXIT_DOMAIN),
            NonPositiveWavelength(_) => ("non_positive_wavelength", EXIT_DOMAIN),
            UnknownAxis(_) => ("unknown_axis", EXIT_USAGE),
        };
        failure(code, exit, self.to_string())
    }
}

impl IntoFailure for PhaseMatchError {
    fn fail(self) -> Failure {
        use PhaseMatchError::*;
        match self {
            Dispersion(inner) => inner.fail(),
            InvalidSweepRange { .. } => {
                failure("invalid_sweep_range", EXIT_USAGE, self.to_string())
            }
            TooFewSteps(_) => failure("too_few_steps", EXIT_USAGE, self.to_string()),
            DegenerateOrInverted { .. } => {
                failure("degenerate_or_inverted", EXIT_DOMAIN, self.to_string())
            }
            NonPositiveWavelength(_) => {
                failure("non_positive_wavelength", EXIT_DOMAIN, self.to_string())
            }
            EnergyConservation { .. } => {
                failure("energy_conservation", EXIT_DOMAIN, self.to_string())
            }
            NegativeThickness(_) => failure("negative_thickness", EXIT_DOMAIN, self.to_string()),
            ZeroMismatch => failure("zero_mismatch", EXIT_DOMAIN, self.to_string()),
            NegativeAmplitude(_) => failure("negative_amplitude", EXIT_DOMAIN, self.to_string()),
            NegativeOffset(_) => failure("negative_offset", EXIT_DOMAIN, self.to_string()),
        }
    }
}

impl IntoFailure for TcspcError {
    fn fail(self) -> Failure {
        use TcspcError::*;
        let (code, exit) = match &self {
            UnsortedStream { .. } => ("unsorted_stream", EXIT_DATA_FORMAT),
            TimeOutOfBounds { .. } => ("time_out_of_bounds", EXIT_DATA_FORMAT),
            NonPositiveDuration(_) => ("non_positive_duration", EXIT_DATA_FORMAT),
            NonPositiveWindow(_) => ("non_positive_window", EXIT_USAGE),
            NonPositiveBinWidth(_) => ("non_positive_bin_width", EXIT_USAGE),
            TauNotMultiple { .. } => ("tau_not_multiple", EXIT_USAGE),
            OffsetTooSmall { .. } => ("offset_too_small", EXIT_USAGE),
            ChunkTooSmall { .. } => ("chunk_too_small", EXIT_USAGE),
            OffsetOutsideSpan { .. } => ("offset_outside_span", EXIT_DOMAIN),
            DurationMismatch { .. } => ("duration_mismatch", EXIT_DOMAIN),
        };
        failure(code, exit, self.to_string())
    }
}

impl IntoFailure for FormatError {
    fn fail(self) -> Failure {
        match self {
            FormatError::Stream(inner) => inner.fail(),
            other => {
                let code = match &other {
                    FormatError::BadMagic => "bad_magic",
                    FormatError::UnsupportedVersion(_) => "unsupported_version",
                    FormatError::Truncated(_) => "truncated_file",
                    FormatError::ChannelCountMismatch { .. } => "channel_count_mismatch",
                    FormatError::MixedDurations => "mixed_durations",
                    FormatError::NegativeTime(_) => "negative_time",
                    FormatError::UnsortedFile { .. } => "unsorted_stream",
                    FormatError::MalformedRow { .. } => "malformed_row",
                    FormatError::Empty => "empty_input",
                    FormatError::Io(_) => "io",
                    FormatError::Stream(_) => unreachable!(),
                };
                failure(code, EXIT_DATA_FORMAT, other.to_string())
            }
        }
    }
}

impl IntoFailure for MetricsError {
    fn fail(self) -> Failure {
        use MetricsError::*;
        let code = match &self {
            NonPositiveSingles(_) => "non_positive_singles",
            NegativeCount(_) => "negative_count",
            DegenerateAbscissa => "degenerate_abscissa",
            InsufficientAngularSpan { .. } => "insufficient_angular_span",
            TooFewPoints { .. } => "too_few_points",
            NonPositiveError(_) => "non_positive_error",
            LengthMismatch => "length_mismatch",
        };
        failure(code, EXIT_DOMAIN, self.to_string())
    }
}

impl IntoFailure for SimulatorError {
    fn fail(self) -> Failure {
        failure("invalid_model", EXIT_USAGE, self.to_string())
    }
}

impl IntoFailure for ModeError {
    fn fail(self) -> Failure {
        use ModeError::*;
        let (code, exit) = match &self {
            NonPositiveWaist(_) => ("non_positive_waist", EXIT_USAGE),
            NonPositiveWavelength(_) => ("non_positive_wavelength", EXIT_USAGE),
            InvalidNA(_) => ("invalid_na", EXIT_DOMAIN),
            Catalog(_) => ("malformed_catalog", EXIT_DATA_FORMAT),
            Io(_) => ("io", EXIT_DATA_FORMAT),
        };
        failure(code, exit, self.to_string())
    }
}

impl IntoFailure for std::io::Error {
    fn fail(self) -> Failure {
        failure("io", EXIT_DATA_FORMAT, self.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "spdc",
    version,
    about = "Design and characterize fiber-coupled SPDC photon-pair sources",
    after_help = "Every command prints one JSON result object on stdout. \
                  Times and lengths take explicit unit suffixes: 1.5ns, 60ps, 2000nm, 2.3um."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pair rate vs crystal thickness, with refined peak (CSV + JSON sidecar)
    Sweep(SweepArgs),
    /// Monte Carlo two-channel timestamp streams with ground truth
    Simulate(SimulateArgs),
    /// Windowed coincidence and accidental counts of a .pts pair
    Correlate(CorrelateArgs),
    /// Arrival-time-difference histogram g2(tau)
    G2(G2Args),
    /// Rates, CAR and pair collection efficiency
    Metrics(MetricsArgs),
    /// Weighted straight-line fit of a power scan CSV
    FitPower(FitPowerArgs),
    /// cos^2 fit of a polarization scan CSV
    FitPolarization(FitPolarizationArgs),
    /// Optimal pump waist for a collection waist
    OptimalWaist(OptimalWaistArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Dispersion table CSV
    #[arg(long, value_name = "PATH")]
    dispersion: PathBuf,
    /// Pump wavelength (e.g. 405nm)
    #[arg(long, value_parser = parse_length_nm, default_value = "405nm")]
    pump: f64,
    /// Signal wavelength (e.g. 810nm)
    #[arg(long, value_parser = parse_length_nm, default_value = "810nm")]
    signal: f64,
    /// Idler wavelength; derived from energy conservation when omitted
    #[arg(long, value_parser = parse_length_nm)]
    idler: Option<f64>,
    /// Pump polarization axis
    #[arg(long, value_parser = parse_axis, default_value = "y")]
    pol_pump: Axis,
    /// Signal polarization axis
    #[arg(long, value_parser = parse_axis, default_value = "y")]
    pol_signal: Axis,
    /// Idler polarization axis
    #[arg(long, value_parser = parse_axis, default_value = "y")]
    pol_idler: Axis,
    /// Smallest thickness (e.g. 0nm)
    #[arg(long, value_parser = parse_length_nm, default_value = "0nm")]
    thickness_min: f64,
    /// Largest thickness (e.g. 2000nm)
    #[arg(long, value_parser = parse_length_nm, default_value = "2000nm")]
    thickness_max: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 2001)]
    steps: usize,
    /// Use the absorbing-crystal rate (complex phase mismatch)
    #[arg(long)]
    absorbing: bool,
    /// Output CSV path; a JSON sidecar is written next to it
    #[arg(long, value_name = "CSV")]
    output: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// True pair generation rate, Hz
    #[arg(long, default_value_t = 1000.0)]
    pair_rate: f64,
    /// Arm-1 detection efficiency
    #[arg(long, default_value_t = 0.1)]
    eta1: f64,
    /// Arm-2 detection efficiency
    #[arg(long, default_value_t = 0.1)]
    eta2: f64,
    /// Detector-1 dark rate, Hz
    #[arg(long, default_value_t = 100.0)]
    dark1: f64,
    /// Detector-2 dark rate, Hz
    #[arg(long, default_value_t = 100.0)]
    dark2: f64,
    /// Per-detector Gaussian timing jitter, 1 sigma (e.g. 350ps)
    #[arg(long, value_parser = parse_time_ps, default_value = "350ps")]
    jitter: i64,
    /// Non-paralyzable dead time (e.g. 22ns)
    #[arg(long, value_parser = parse_time_ps, default_value = "22ns")]
    dead_time: i64,
    /// Acquisition duration (e.g. 120s)
    #[arg(long, value_parser = parse_time_ps, default_value = "120s")]
    duration: i64,
    /// RNG seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output .pts path; a ground_truth.json sidecar is written next to it
    #[arg(long, value_name = "PTS")]
    output: PathBuf,
}

#[derive(Args)]
struct CorrelateArgs {
    /// Input .pts file
    #[arg(long, value_name = "PTS")]
    input: PathBuf,
    /// First channel id
    #[arg(long, default_value_t = 0)]
    ch1: u8,
    /// Second channel id
    #[arg(long, default_value_t = 1)]
    ch2: u8,
    /// Coincidence window (e.g. 1.5ns)
    #[arg(long, value_parser = parse_time_ps, default_value = "1.5ns")]
    window: i64,
    /// Delay applied to channel 2 before matching
    #[arg(long, value_parser = parse_time_ps, default_value = "0ps")]
    offset: i64,
    /// Shift for the accidental window (e.g. 100ns)
    #[arg(long, value_parser = parse_time_ps, default_value = "100ns")]
    accidental_offset: i64,
    /// Accidental estimate fed into the CAR: shifted or analytic
    #[arg(long, value_parser = parse_accidental_method, default_value = "shifted")]
    accidental_method: AccidentalMethod,
    /// Process in time chunks of this span (parallel, bit-identical result)
    #[arg(long, value_parser = parse_time_ps)]
    chunk: Option<i64>,
}

#[derive(Args)]
struct G2Args {
    /// Input .pts file
    #[arg(long, value_name = "PTS")]
    input: PathBuf,
    /// First channel id
    #[arg(long, default_value_t = 0)]
    ch1: u8,
    /// Second channel id
    #[arg(long, default_value_t = 1)]
    ch2: u8,
    /// Histogram bin width (e.g. 60ps)
    #[arg(long, value_parser = parse_time_ps, default_value = "60ps")]
    bin: i64,
    /// Histogram half-range; must be a multiple of the bin width
    #[arg(long, value_parser = parse_time_ps, default_value = "6ns")]
    tau_max: i64,
    /// Output CSV path (tau_ps, counts, g2_norm)
    #[arg(long, value_name = "CSV")]
    output: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    /// Input .pts file (stream mode)
    #[arg(long, value_name = "PTS")]
    input: Option<PathBuf>,
    /// First channel id
    #[arg(long, default_value_t = 0)]
    ch1: u8,
    /// Second channel id
    #[arg(long, default_value_t = 1)]
    ch2: u8,
    /// Coincidence window (e.g. 1.5ns)
    #[arg(long, value_parser = parse_time_ps, default_value = "1.5ns")]
    window: i64,
    /// Shift for the accidental window
    #[arg(long, value_parser = parse_time_ps, default_value = "100ns")]
    accidental_offset: i64,
    /// Accidental estimate fed into the CAR: shifted or analytic
    #[arg(long, value_parser = parse_accidental_method, default_value = "shifted")]
    accidental_method: AccidentalMethod,
    /// Detector-1 dark rate to subtract, Hz
    #[arg(long)]
    dark1: Option<f64>,
    /// Detector-2 dark rate to subtract, Hz
    #[arg(long)]
    dark2: Option<f64>,
    /// Coincidence rate, Hz (rate mode, with --r1/--r2)
    #[arg(long)]
    rcc: Option<f64>,
    /// Detector-1 singles rate, Hz (rate mode)
    #[arg(long)]
    r1: Option<f64>,
    /// Detector-2 singles rate, Hz (rate mode)
    #[arg(long)]
    r2: Option<f64>,
    /// Accidental rate, Hz (rate mode, optional)
    #[arg(long)]
    racc: Option<f64>,
}

#[derive(Args)]
struct FitPowerArgs {
    /// CSV with header power_mw,rate_hz[,rate_err_hz]
    #[arg(long, value_name = "CSV")]
    input: PathBuf,
}

#[derive(Args)]
struct FitPolarizationArgs {
    /// CSV with header theta_deg,rate_hz[,rate_err_hz]
    #[arg(long, value_name = "CSV")]
    input: PathBuf,
}

#[derive(Args)]
struct OptimalWaistArgs {
    /// Collection mode waist (e.g. 2.3um)
    #[arg(long, value_parser = parse_length_um)]
    collection_waist: f64,
}

fn parse_accidental_method(s: &str) -> Result<AccidentalMethod, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "shifted" => Ok(AccidentalMethod::Shifted),
        "analytic" => Ok(AccidentalMethod::Analytic),
        other => Err(format!("`{other}` is not one of: shifted, analytic")),
    }
}

/// Parses argv, runs the command, prints the result JSON, and returns the
/// process exit code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                print!("{err}");
                return 0;
            }
            let failure = Failure::usage("usage", err.to_string());
            println!("{}", failure.to_json());
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(value) => {
            println!("{value}");
            0
        }
        Err(failure) => {
            println!("{}", failure.to_json());
            failure.exit_code
        }
    }
}

fn dispatch(command: Command) -> Result<serde_json::Value, Failure> {
    match command {
        Command::Sweep(args) => commands::sweep(args),
        Command::Simulate(args) => commands::simulate(args),
        Command::Correlate(args) => commands::correlate(args),
        Command::G2(args) => commands::g2(args),
        Command::Metrics(args) => commands::metrics(args),
        Command::FitPower(args) => commands::fit_power(args),
        Command::FitPolarization(args) => commands::fit_polarization(args),
        Command::OptimalWaist(args) => commands::optimal_waist(args),
    }
}
