//! Crate-wide error type.

/// Everything that can go wrong across the library.
///
/// Variants are grouped by how callers should react: `Parse` points at a
/// line of a malformed input file, `Budget` means a size or iteration cap
/// would be exceeded (retry with a bigger budget), `Overflow` means an exact
/// integer formula left 128-bit range, and `Inconsistency` signals a bug —
/// an internal cross-check that can only fail if some upstream computation
/// is wrong.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("did not converge: {0}")]
    NoConvergence(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
