//! Crate-wide error type. Every fallible operation returns `Result<T>` with a
//! variant that names the violated contract; none of the library code panics
//! on malformed input.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two scalars (or a scalar and a container) disagree on the field.
    FieldMismatch,
    /// Multiplicative inverse of zero, or division by a zero scalar.
    DivisionByZero,
    /// Modulus passed for a prime field is not prime (or < 2).
    InvalidModulus(u64),
    /// Two polynomials disagree on their declared variable list.
    VariableMismatch,
    /// A variable name was referenced that the object does not declare.
    UnknownVariable(String),
    /// Evaluation point is missing an assignment for a variable.
    MissingVariable(String),
    /// Text-format parse error with 1-based line number.
    Syntax { line: usize, msg: String },
    /// A gate or output line references an undefined node name.
    DanglingReference(String),
    /// The node list contains a directed cycle.
    CycleDetected,
    /// Structural invariant of a circuit is violated (message says which).
    InvalidCircuit(String),
    /// A term-count or dimension budget was exhausted.
    BudgetExceeded { what: String, limit: u64 },
    /// Gate with more than two children where fanin <= 2 is required.
    FaninTooLarge(usize),
    /// Operation requires a single-output circuit.
    MultipleOutputs(usize),
    /// Operation requires a binarized circuit.
    NotBinarized,
    /// An output expands to a polynomial that is not homogeneous of the
    /// requested degree; carries the offending output index and the degree
    /// found (max total degree for mixed outputs).
    NotHomogeneousOutputs { output: usize, found: u64 },
    /// An output expands to a nonzero constant; degree >= 1 is required.
    DegreeZeroOutput(usize),
    /// Numeric parameter outside the supported range (message says which).
    ParamViolation(String),
    /// Embedding ran out of slots at the given odd level and child type.
    CapacityExceeded { level: u32, ty: u32 },
    /// Circuit fails the normal-form predicate; message lists violations.
    NotNormalForm(String),
    /// Label assignment references an edge id outside the graph.
    UnknownEdgeId(usize),
    /// Vector/matrix sizes do not line up (message says which).
    DimensionMismatch(String),
    /// Polynomial is not homogeneous in the designated Z variables.
    NotHomogeneousInZ,
    /// A designated X variable does not have degree exactly one.
    DegreeNotOneInX(String),
    /// A partial derivative in X still mentions an X variable, so the
    /// coefficient decomposition over Y alone does not exist.
    DerivativeContainsX { x: String, offending: String },
    /// Operation is only sound over the rationals.
    UnsupportedField(String),
    /// Inequality parameters violate a side condition (e.g. denominator <= 0).
    DomainViolation(String),
    /// Certificate verdict is not CERTIFIED where one is required.
    NotCertified,
    /// Certificate degree parameter does not fit the bound formula.
    WrongDegreeParameter(String),
    /// Syntactic degree exceeded the machine range.
    DegreeOverflow,
    /// An internal invariant that construction should guarantee was violated.
    Internal(String),
    /// CLI usage error (bad flags, unknown subcommand).
    Usage(String),
    /// I/O failure, stringified (keeps the error type Clone + Eq).
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::FieldMismatch => write!(f, "field mismatch between operands"),
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::InvalidModulus(p) => write!(f, "{p} is not a prime modulus"),
            Error::VariableMismatch => write!(f, "operands declare different variable lists"),
            Error::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            Error::MissingVariable(v) => write!(f, "no value supplied for variable `{v}`"),
            Error::Syntax { line, msg } => write!(f, "syntax error at line {line}: {msg}"),
            Error::DanglingReference(n) => write!(f, "reference to undefined node `{n}`"),
            Error::CycleDetected => write!(f, "circuit contains a cycle"),
            Error::InvalidCircuit(m) => write!(f, "invalid circuit: {m}"),
            Error::BudgetExceeded { what, limit } => {
                write!(f, "budget exceeded: {what} over limit {limit}")
            }
            Error::FaninTooLarge(d) => write!(f, "gate has fanin {d}, at most 2 supported"),
            Error::MultipleOutputs(m) => write!(f, "expected a single output, found {m}"),
            Error::NotBinarized => write!(f, "circuit has a gate of fanin > 2; binarize first"),
            Error::NotHomogeneousOutputs { output, found } => write!(
                f,
                "output {output} is not homogeneous of the requested degree (found degree {found})"
            ),
            Error::DegreeZeroOutput(i) => {
                write!(f, "output {i} is a constant; degree >= 1 required")
            }
            Error::ParamViolation(m) => write!(f, "parameter violation: {m}"),
            Error::CapacityExceeded { level, ty } => {
                write!(f, "slot capacity exceeded at level {level}, child type {ty}")
            }
            Error::NotNormalForm(m) => write!(f, "circuit is not in normal form: {m}"),
            Error::UnknownEdgeId(id) => write!(f, "label assigned to unknown edge id {id}"),
            Error::DimensionMismatch(m) => write!(f, "dimension mismatch: {m}"),
            Error::NotHomogeneousInZ => {
                write!(f, "polynomial is not homogeneous in the Z variables")
            }
            Error::DegreeNotOneInX(x) => {
                write!(f, "variable `{x}` does not have degree exactly 1")
            }
            Error::DerivativeContainsX { x, offending } => write!(
                f,
                "derivative with respect to `{x}` still mentions `{offending}`"
            ),
            Error::UnsupportedField(m) => write!(f, "unsupported field: {m}"),
            Error::DomainViolation(m) => write!(f, "domain violation: {m}"),
            Error::NotCertified => write!(f, "certificate verdict is not CERTIFIED"),
            Error::WrongDegreeParameter(m) => write!(f, "wrong degree parameter: {m}"),
            Error::DegreeOverflow => write!(f, "syntactic degree exceeds machine range"),
            Error::Internal(m) => write!(f, "internal invariant violated: {m}"),
            Error::Usage(m) => write!(f, "usage: {m}"),
            Error::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
