//! Error type shared by all modules of the crate.

/// Errors reported by construction and analysis routines.
///
/// Routines that detect an *internal* inconsistency (a value that a verified
/// precondition makes impossible) panic instead: such a state is a bug in the
/// implementation, not a recoverable condition.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension n={0} out of supported range {1}..={2}")]
    DimensionRange(u32, u32, u32),
    #[error("modulus {0:#x} is not an irreducible polynomial of degree {1}")]
    InvalidModulus(u32, u32),
    #[error("element {0:#x} is not primitive in F_2^{1}")]
    NotPrimitive(u16, u32),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("truth table has {got} entries, expected {expected}")]
    TableLength { got: usize, expected: usize },
    #[error("table entry {value:#x} at index {index} exceeds {max:#x}")]
    TableEntryRange { index: usize, value: u32, max: u32 },
    #[error("function is not APN: derivative in direction a={a:#x} takes value b={b:#x} at {count} points")]
    NotApn { a: u16, b: u16, count: u32 },
    #[error(
        "function is not plateaued: component v={v:#x} has {distinct} distinct nonzero magnitudes"
    )]
    NotPlateaued { v: u16, distinct: usize },
    #[error("function is not quadratic: algebraic degree is {0}")]
    NotQuadratic(u32),
    #[error("function is not 3-to-1")]
    NotThreeToOne,
    #[error("function is not a monomial over the supplied field")]
    NotMonomial,
    #[error("function carries no field spec")]
    MissingField,
    #[error("dimension n={0} must be odd here")]
    RequiresOddDimension(u32),
    #[error("dimension n={0} must be even and at least 4 here")]
    RequiresEvenDimension(u32),
    #[error("requires F(0) = 0, got F(0) = {0:#x}")]
    RequiresZeroFixed(u16),
    #[error("point {0:#x} lies in the set")]
    PointInSet(u64),
    #[error("point {0:#x} outside ambient space of dimension {1}")]
    PointRange(u64, u32),
    #[error("derivative image span for a={a:#x} has dimension {dim}, expected {expected}")]
    SpanDimension { a: u16, dim: u32, expected: u32 },
    #[error("{family} family requires {condition}")]
    FamilyConstraint {
        family: &'static str,
        condition: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero direction not allowed")]
    ZeroDirection,
}

pub type Result<T> = std::result::Result<T, Error>;
