use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    EmptySequence,
    NonFinite,
    NegativeDelta(f64),
    InvalidTolerance(f64),
    IdenticalCircles,
    Collinear,
    ZeroRadius,
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    IncompatibleBlocks,
    /// The optimizer could not certify any candidate value as feasible.
    NoFeasibleValue,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySequence => write!(f, "point sequence is empty"),
            Error::NonFinite => write!(f, "coordinate is not finite"),
            Error::NegativeDelta(d) => write!(f, "distance threshold {d} is negative"),
            Error::InvalidTolerance(e) => write!(f, "tolerance {e} is outside (0, 1)"),
            Error::IdenticalCircles => write!(f, "circles coincide"),
            Error::Collinear => write!(f, "points are collinear"),
            Error::ZeroRadius => write!(f, "circle has zero radius"),
            Error::IndexOutOfRange {
                row,
                col,
                rows,
                cols,
            } => write!(f, "entry ({row}, {col}) outside a {rows}x{cols} matrix"),
            Error::IncompatibleBlocks => write!(f, "blocks do not share a full boundary"),
            Error::NoFeasibleValue => write!(f, "no candidate value was feasible"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
