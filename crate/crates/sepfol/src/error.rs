use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("symbol `{symbol}` used with conflicting arities or roles: {detail}")]
    ArityConflict { symbol: String, detail: String },

    #[error("substitution would capture variable `{variable}` bound in the formula")]
    Capture { variable: String },

    #[error("variable sets overlap on `{variable}`")]
    Overlap { variable: String },

    #[error("formula has free variables: {0:?}")]
    NonSentence(Vec<String>),

    #[error("formula is not in prenex normal form")]
    NotPrenex,

    #[error("variables are not separated: atom `{atom}` mixes both sets")]
    Separation { atom: String },

    #[error("sentence is not in the separated fragment: {0}")]
    NotSf(String),

    #[error("input is not relational monadic: {0}")]
    NotRelationalMonadic(String),

    #[error("unary function `{function}` occurs outside a monadic atom")]
    IneligibleOccurrence { function: String },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("structure does not match its declared shape: {0}")]
    Schema(String),

    #[error("no interpretation for `{symbol}`")]
    MissingInterpretation { symbol: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
