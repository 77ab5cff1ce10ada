use thiserror::Error;

/// Why a fast path refused an input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonGenericReason {
    /// The minimal basis of the `K[x]`-relation module has an unexpected degree.
    NBasisDegree { expected: usize, got: usize },
    /// The `K[y]`-relation basis failed one of its certificates.
    MBasisCertificate(&'static str),
    /// `a` and the modulus share a factor.
    NotCoprime,
    /// The sequence handed to the matrix generator was identically zero.
    DegenerateSequence,
}

impl std::fmt::Display for NonGenericReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NonGenericReason::NBasisDegree { expected, got } => {
                write!(f, "N-basis degree {got}, expected {expected}")
            }
            NonGenericReason::MBasisCertificate(what) => write!(f, "M-basis certificate failed: {what}"),
            NonGenericReason::NotCoprime => write!(f, "gcd(a, f) != 1"),
            NonGenericReason::DegenerateSequence => write!(f, "degenerate sequence"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is not an odd prime")]
    EvenModulus(u64),
    #[error("transform size {0} not supported by the field")]
    UnsupportedTransformSize(usize),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("constant term is not a unit")]
    NotAUnit,
    #[error("degree {degree} exceeds bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },
    #[error("not invertible modulo f (gcd has degree {})", gcd.len().saturating_sub(1))]
    NotInvertibleModF { gcd: Vec<u64> },
    #[error("duplicate abscissa {0}")]
    DuplicateAbscissa(u64),
    #[error("y-bound {ybound} exceeds block capacity {capacity}")]
    BlockTooSmall { ybound: usize, capacity: usize },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("column {0} is zero")]
    ZeroColumn(usize),
    #[error("basis matrix is singular")]
    SingularBasis,
    #[error("field too small: need {needed} distinct points")]
    SmallField { needed: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("modulus must have a nonzero constant term")]
    NeedsUnitConstantTerm,
    #[error("non-generic input: {0}")]
    NonGeneric(NonGenericReason),
    #[error("precomputed tables do not match the inputs")]
    StaleTables,
    #[error("degree bound too small to span the relation module")]
    BoundTooSmall,
    #[error("minimal polynomial of a is not separable of full degree")]
    MinimalPolynomialDefect,
}

pub type Result<T> = std::result::Result<T, Error>;
