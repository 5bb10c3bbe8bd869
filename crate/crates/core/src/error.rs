use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group is infinite; only finite groups have a dual here")]
    InfiniteGroup,
    #[error("map on fundamental groups is not surjective")]
    NotSurjective,
    #[error("Tamagawa number not certified for {0}")]
    TamagawaNotCertified(String),
    #[error("only preset root data are supported: {0}")]
    PresetOnly(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("parameter violates the compatibility condition at p")]
    Kp0Violated,
    #[error("enumeration cap of {0} exceeded")]
    CapExceeded(usize),
    #[error("orbit does not saturate; non-elliptic element suspected")]
    InfiniteOrbit,
    #[error("element is not elliptic at this place")]
    NonElliptic,
    #[error("level {0} is not neat (need N >= 3)")]
    LevelNotNeat(u64),
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("{side} side failed: {source}")]
    Side { side: &'static str, source: Box<Error> },
}

impl Error {
    /// Errors raised by computational guards (precision, caps, non-saturation).
    pub fn is_guard(&self) -> bool {
        if let Error::Side { source, .. } = self {
            return source.is_guard();
        }
        matches!(
            self,
            Error::InsufficientPrecision(_)
                | Error::CapExceeded(_)
                | Error::InfiniteOrbit
                | Error::TamagawaNotCertified(_)
                | Error::Unsupported(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
