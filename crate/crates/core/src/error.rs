use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("UnboundParameter {0}")]
    UnboundParameter(String),
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("duplicate generator d{0}")]
    DuplicateGenerator(usize),
    #[error("index {index} out of range 1..{n}")]
    IndexOutOfRange { index: i64, n: usize },
    #[error("bidegree ({p},{q}) out of range for complex dimension {n}")]
    BidegreeOutOfRange { p: usize, q: usize, n: usize },
    #[error("non-integrable: d{generator} has (0,2) component {obstruction}")]
    NonIntegrable { generator: usize, obstruction: String },
    #[error("d^2 != 0: d(d{generator}) = {residue}")]
    NotClosed { generator: usize, residue: String },
    #[error("coframe change is singular at the given parameters")]
    SingularChange,
    #[error("invalid double complex: {0}")]
    InvalidComplex(String),
    #[error("expected a form of bidegree ({p},{q})")]
    WrongBidegree { p: usize, q: usize },
    #[error("form is not real")]
    NotReal,
    #[error("double complex carries no conjugation")]
    NoConjugation,
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax { line, column, message: message.into() }
    }
}
