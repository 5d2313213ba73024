use core::fmt;

/// Errors raised by grid construction and operator preconditions.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidDimension(usize),
    InvalidSize(usize),
    InvalidBox(f64),
    GridMismatch,
    LengthMismatch { expected: usize, found: usize },
    NonFinite,
    /// A generator whose support does not fit inside the box.
    Support { radius: f64, limit: f64 },
    InvalidParameter(&'static str),
    ScaleOutOfRange { t: f64, min: f64, max: f64 },
    InvalidScales(&'static str),
    InvalidExponent(f64),
    NotMeanZero(f64),
    NotOdd(f64),
    NotHermitian(f64),
    OutOfBox,
    DimensionRequired(usize),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension(n) => write!(f, "dimension must be 1, 2 or 3 (got {n})"),
            Error::InvalidSize(n) => write!(f, "samples per axis must be a power of two >= 16 (got {n})"),
            Error::InvalidBox(l) => write!(f, "box side must be positive and finite (got {l})"),
            Error::GridMismatch => write!(f, "fields live on different grids"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} samples, found {found}")
            }
            Error::NonFinite => write!(f, "non-finite sample"),
            Error::Support { radius, limit } => write!(
                f,
                "generator support extends to {radius}, beyond the half box {limit}"
            ),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::ScaleOutOfRange { t, min, max } => {
                write!(f, "scale {t} outside [{min}, {max}]")
            }
            Error::InvalidScales(what) => write!(f, "invalid scale grid: {what}"),
            Error::InvalidExponent(p) => write!(f, "invalid exponent p = {p}"),
            Error::NotMeanZero(m) => write!(f, "Ω has spherical mean {m}, not zero"),
            Error::NotOdd(r) => write!(f, "kernel is not odd (residual {r})"),
            Error::NotHermitian(r) => write!(f, "multiplier is not Hermitian (residual {r})"),
            Error::OutOfBox => write!(f, "evaluation point or radius leaves the box"),
            Error::DimensionRequired(n) => write!(f, "operator requires dimension {n}"),
        }
    }
}

impl core::error::Error for Error {}
