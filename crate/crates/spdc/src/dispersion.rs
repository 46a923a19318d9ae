//! Anisotropic complex refractive indices ñ(λ) = n(λ) + iκ(λ).
//!
//! A [`DispersionTable`] stores per-axis (n, κ) columns on a strictly
//! ascending wavelength grid and interpolates them piecewise-linearly.
//! Queries outside the grid are a hard error: tabulated optical constants
//! are only valid inside their measured band, and κ typically varies
//! steeply near the band edge, so extrapolation would be silently wrong.
//!
//! Sign convention used throughout the crate: fields propagate as
//! exp(+ik̃z) with k̃ = 2πñ/λ, so absorption corresponds to Im(k̃) ≥ 0.

use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

/// Exact header required in dispersion CSV files.
pub const CSV_HEADER: &str = "wavelength_nm,n_x,k_x,n_y,k_y,n_z,k_z";

/// A principal crystal axis in the laboratory frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    fn column(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => write!(f, "x"),
            Axis::Y => write!(f, "y"),
            Axis::Z => write!(f, "z"),
        }
    }
}

impl FromStr for Axis {
    type Err = DispersionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(DispersionError::UnknownAxis(other.to_string())),
        }
    }
}

/// Complex refractive index ñ = n + iκ at a single wavelength.
///
/// κ ≥ 0 is the extinction coefficient (absorption); tables are validated
/// on load so indices drawn from a [`DispersionTable`] always satisfy it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexIndex {
    pub n: f64,
    pub kappa: f64,
}

impl ComplexIndex {
    pub fn new(n: f64, kappa: f64) -> Self {
        Self { n, kappa }
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.n, self.kappa)
    }
}

#[derive(Debug, Error)]
pub enum DispersionError {
    #[error("wavelength grid is not strictly ascending at row {row} ({prev} then {next} nm)")]
    NonMonotonicGrid { row: usize, prev: f64, next: f64 },
    #[error("negative extinction coefficient {kappa} for axis {axis} at {wavelength_nm} nm")]
    NegativeKappa {
        axis: Axis,
        wavelength_nm: f64,
        kappa: f64,
    },
    #[error("non-positive refractive index {n} for axis {axis} at {wavelength_nm} nm")]
    NonPositiveIndex {
        axis: Axis,
        wavelength_nm: f64,
        n: f64,
    },
    #[error("malformed row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },
    #[error("missing or wrong header: expected `{CSV_HEADER}`")]
    BadHeader,
    #[error("table needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("{lambda_nm} nm is outside the table range [{min_nm}, {max_nm}] nm")]
    OutOfRange {
        lambda_nm: f64,
        min_nm: f64,
        max_nm: f64,
    },
    #[error("wavelength must be positive, got {0} nm")]
    NonPositiveWavelength(f64),
    #[error("unknown axis `{0}` (expected x, y or z)")]
    UnknownAxis(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Per-axis sampled complex refractive index on a shared wavelength grid.
///
/// Immutable after construction; all queries are pure functions, so a table
/// can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionTable {
    wavelengths_nm: Vec<f64>,
    // [x, y, z], each (n, kappa) per grid node
    columns: [Vec<(f64, f64)>; 3],
}

impl DispersionTable {
    /// Builds a table from parallel columns, validating all invariants.
    pub fn new(
        wavelengths_nm: Vec<f64>,
        columns: [Vec<(f64, f64)>; 3],
    ) -> Result<Self, DispersionError> {
        if wavelengths_nm.len() < 2 {
            return Err(DispersionError::TooFewRows(wavelengths_nm.len()));
        }
        for (axis, col) in Axis::ALL.iter().zip(columns.iter()) {
            if col.len() != wavelengths_nm.len() {
                return Err(DispersionError::MalformedRow {
                    row: col.len(),
                    reason: format!("axis {axis} column length mismatch"),
                });
            }
        }
        for (i, w) in wavelengths_nm.iter().enumerate() {
            if !w.is_finite() || *w <= 0.0 {
                return Err(DispersionError::NonPositiveWavelength(*w));
            }
            if i > 0 && wavelengths_nm[i - 1] >= *w {
                return Err(DispersionError::NonMonotonicGrid {
                    row: i,
                    prev: wavelengths_nm[i - 1],
                    next: *w,
                });
            }
            for axis in Axis::ALL {
                let (n, kappa) = columns[axis.column()][i];
                if n <= 0.0 || n.is_nan() {
                    return Err(DispersionError::NonPositiveIndex {
                        axis,
                        wavelength_nm: *w,
                        n,
                    });
                }
                if kappa < 0.0 || kappa.is_nan() {
                    return Err(DispersionError::NegativeKappa {
                        axis,
                        wavelength_nm: *w,
                        kappa,
                    });
                }
            }
        }
        Ok(Self {
            wavelengths_nm,
            columns,
        })
    }

    /// Parses the CSV dispersion format: optional `#` comment lines, the
    /// exact header `wavelength_nm,n_x,k_x,n_y,k_y,n_z,k_z`, then ascending
    /// numeric rows.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self, DispersionError> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .has_headers(true)
            .from_reader(reader);

        {
            let headers = rdr
                .headers()
                .map_err(|e| DispersionError::MalformedRow {
                    row: 0,
                    reason: e.to_string(),
                })?
                .iter()
                .collect::<Vec<_>>()
                .join(",");
            if headers != CSV_HEADER {
                return Err(DispersionError::BadHeader);
            }
        }

        let mut wavelengths = Vec::new();
        let mut cols: [Vec<(f64, f64)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for (idx, record) in rdr.records().enumerate() {
            let row = idx + 1;
            let record = record.map_err(|e| DispersionError::MalformedRow {
                row,
                reason: e.to_string(),
            })?;
            if record.len() != 7 {
                return Err(DispersionError::MalformedRow {
                    row,
                    reason: format!("expected 7 fields, got {}", record.len()),
                });
            }
            let mut fields = [0.0f64; 7];
            for (i, raw) in record.iter().enumerate() {
                fields[i] = raw.parse().map_err(|_| DispersionError::MalformedRow {
                    row,
                    reason: format!("field {} (`{raw}`) is not a number", i + 1),
                })?;
            }
            wavelengths.push(fields[0]);
            cols[0].push((fields[1], fields[2]));
            cols[1].push((fields[3], fields[4]));
            cols[2].push((fields[5], fields[6]));
        }
        Self::new(wavelengths, cols)
    }

    pub fn from_csv_str(text: &str) -> Result<Self, DispersionError> {
        Self::from_csv_reader(text.as_bytes())
    }

    pub fn from_csv_path<P: AsRef<Path>>(path: P) -> Result<Self, DispersionError> {
        Self::from_csv_reader(std::fs::File::open(path)?)
    }

    /// Writes the table back in the CSV format. Floats are printed in
    /// shortest round-trip form, so save → load reproduces the table
    /// bit for bit.
    pub fn to_csv_writer<W: Write>(&self, mut w: W) -> Result<(), DispersionError> {
        writeln!(w, "{CSV_HEADER}")?;
        for i in 0..self.wavelengths_nm.len() {
            let (nx, kx) = self.columns[0][i];
            let (ny, ky) = self.columns[1][i];
            let (nz, kz) = self.columns[2][i];
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                self.wavelengths_nm[i], nx, kx, ny, ky, nz, kz
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = Vec::new();
        self.to_csv_writer(&mut out).expect("write to Vec");
        String::from_utf8(out).expect("CSV output is UTF-8")
    }

    pub fn save_csv_path<P: AsRef<Path>>(&self, path: P) -> Result<(), DispersionError> {
        self.to_csv_writer(std::fs::File::create(path)?)
    }

    pub fn len(&self) -> usize {
        self.wavelengths_nm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavelengths_nm.is_empty()
    }

    pub fn wavelengths_nm(&self) -> &[f64] {
        &self.wavelengths_nm
    }

    pub fn min_wavelength_nm(&self) -> f64 {
        self.wavelengths_nm[0]
    }

    pub fn max_wavelength_nm(&self) -> f64 {
        *self.wavelengths_nm.last().expect("non-empty grid")
    }

    /// Tabulated value at grid node `i` for `axis`.
    pub fn node(&self, axis: Axis, i: usize) -> ComplexIndex {
        let (n, kappa) = self.columns[axis.column()][i];
        ComplexIndex { n, kappa }
    }

    /// Piecewise-linear interpolation of n and κ along one axis.
    ///
    /// Exact (bitwise) at grid nodes. No extrapolation: wavelengths outside
    /// the grid return [`DispersionError::OutOfRange`].
    pub fn index_at(&self, axis: Axis, lambda_nm: f64) -> Result<ComplexIndex, DispersionError> {
        let grid = &self.wavelengths_nm;
        if !lambda_nm.is_finite() || lambda_nm < grid[0] || lambda_nm > *grid.last().unwrap() {
            return Err(DispersionError::OutOfRange {
                lambda_nm,
                min_nm: grid[0],
                max_nm: *grid.last().unwrap(),
            });
        }
        match grid.binary_search_by(|w| w.partial_cmp(&lambda_nm).expect("finite grid")) {
            Ok(i) => Ok(self.node(axis, i)),
            Err(i) => {
                // grid[i-1] < lambda < grid[i]
                let (w0, w1) = (grid[i - 1], grid[i]);
                let t = (lambda_nm - w0) / (w1 - w0);
                let a = self.node(axis, i - 1);
                let b = self.node(axis, i);
                Ok(ComplexIndex {
                    n: a.n + t * (b.n - a.n),
                    kappa: a.kappa + t * (b.kappa - a.kappa),
                })
            }
        }
    }
}

/// Complex wavenumber k̃ = 2πñ/λ in rad/nm.
///
/// With the exp(+ik̃z) propagation convention, Im(k̃) = 2πκ/λ ≥ 0 expresses
/// forward decay (absorption).
pub fn complex_wavenumber(index: ComplexIndex, lambda_nm: f64) -> Result<Complex64, DispersionError> {
    if lambda_nm <= 0.0 || lambda_nm.is_nan() {
        return Err(DispersionError::NonPositiveWavelength(lambda_nm));
    }
    Ok(index.as_complex() * (2.0 * std::f64::consts::PI / lambda_nm))
}
