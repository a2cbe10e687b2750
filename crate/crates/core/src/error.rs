use thiserror::Error;

use crate::parser::ParseError;
use crate::term::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("term is not admissible: {}", join(.0))]
    Validation(Vec<Violation>),
    #[error("rewriting did not terminate within {0} steps")]
    RewriteLimit(usize),
    #[error("closure padding exceeded the cap of {cap} terms")]
    CapExceeded { cap: usize },
    #[error("invalid universe: {0}")]
    BadUniverse(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl From<Vec<Violation>> for Error {
    fn from(v: Vec<Violation>) -> Self {
        Error::Validation(v)
    }
}
