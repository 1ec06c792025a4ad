use std::fmt;

/// Errors produced by construction and search routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A field constructor was given an unusable discriminant parameter.
    BadField(String),
    /// An ideal operation received incompatible or degenerate input.
    BadIdeal(String),
    /// An element operation received a non-integral or zero input where
    /// one was required.
    BadElement(String),
    /// An enumeration or search exceeded its configured bound.
    BoundExceeded(String),
    /// A structure failed an internal consistency check.
    Inconsistent(String),
    /// Input parsing failed (CLI arguments, config files, cached data).
    Parse(String),
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadField(s) => write!(f, "bad field: {s}"),
            Error::BadIdeal(s) => write!(f, "bad ideal: {s}"),
            Error::BadElement(s) => write!(f, "bad element: {s}"),
            Error::BoundExceeded(s) => write!(f, "bound exceeded: {s}"),
            Error::Inconsistent(s) => write!(f, "inconsistency: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::Io(s) => write!(f, "io error: {s}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
