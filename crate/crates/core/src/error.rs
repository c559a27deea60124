use thiserror::Error;

/// Errors raised by the operator engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or intermediate function left the domain of an operator.
    #[error("domain: {0}")]
    Domain(String),
    /// Malformed power-sum expression.
    #[error("syntax at {position}: {message}")]
    Syntax { position: usize, message: String },
    /// Derivative parameters violate the admissible range.
    #[error("spec: {0}")]
    Spec(String),
    /// The Abel equation has no L1(0,1) solution for this right-hand side.
    #[error("not solvable: exponent {exponent} <= alpha - 1 = {bound}")]
    NotSolvable { exponent: f64, bound: f64 },
    /// The requested operation is not provided for this input.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable tag for the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Syntax { .. } => "syntax",
            Error::Spec(_) => "spec",
            Error::NotSolvable { .. } => "not_solvable",
            Error::Unsupported(_) => "unsupported",
        }
    }

    /// The message without the class prefix of `Display`.
    pub fn detail(&self) -> String {
        match self {
            Error::Domain(m) | Error::Spec(m) | Error::Unsupported(m) => m.clone(),
            Error::Syntax { position, message } => format!("at {position}: {message}"),
            Error::NotSolvable { exponent, bound } => {
                format!("exponent {exponent} <= alpha - 1 = {bound}")
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
