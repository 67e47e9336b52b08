use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { offset: usize, line: usize, column: usize, message: String },

    #[error("variable '{name}' is not declared in the header (line {line}, column {column})")]
    UndeclaredVariable { name: String, line: usize, column: usize },

    #[error("header mismatch: {0}")]
    HeaderMismatch(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("system is not square: {equations} equations in {variables} variables")]
    NotSquare { equations: usize, variables: usize },

    #[error("polynomial {index} has degree zero")]
    ZeroDegreePolynomial { index: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("monomial supports differ in equation {equation}")]
    SupportMismatch { equation: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("equation {equation} has {terms} terms, a binomial needs exactly 2")]
    NotBinomial { equation: usize, terms: usize },

    #[error("singular matrix")]
    SingularMatrix,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ill-posed problem: {0}")]
    IllPosed(String),

    #[error("monodromy loop failed: {0}")]
    LoopFailure(String),
}

impl Error {
    /// Stable machine-readable code, used in JSON error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "SyntaxError",
            Error::UndeclaredVariable { .. } => "UndeclaredVariable",
            Error::HeaderMismatch(_) => "HeaderMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotSquare { .. } => "NotSquare",
            Error::ZeroDegreePolynomial { .. } => "ZeroDegreePolynomial",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::SupportMismatch { .. } => "SupportMismatch",
            Error::Domain(_) => "DomainError",
            Error::NotBinomial { .. } => "NotBinomial",
            Error::SingularMatrix => "SingularMatrix",
            Error::InvalidInput(_) => "InvalidInput",
            Error::IllPosed(_) => "IllPosed",
            Error::LoopFailure(_) => "LoopFailure",
        }
    }

    /// True for errors caused by the caller's input text rather than by the
    /// mathematical contract of an operation.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UndeclaredVariable { .. }
                | Error::HeaderMismatch(_)
                | Error::InvalidInput(_)
        )
    }
}
