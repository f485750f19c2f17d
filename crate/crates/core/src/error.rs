use thiserror::Error;

/// Errors raised by the library.
///
/// Validation errors are reported before any computation starts;
/// [`Error::TruncationFailure`] is the only error that can appear after
/// work has been done, and it carries the partial term count.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("d = {0} is not squarefree")]
    NotSquarefree(i64),
    #[error("d = {0} must be greater than 1")]
    DiscriminantTooSmall(i64),
    #[error("d = {0} is outside the supported norm-Euclidean set {{2, 3, 5, 6, 7, 13}}")]
    UnsupportedField(i64),
    #[error("zero generator does not define an integral ideal")]
    ZeroGenerator,
    #[error("basis does not span an ideal: {0}")]
    NotAnIdeal(String),
    #[error("element is not integral")]
    NotIntegral,
    #[error("pair ({gamma}, {delta}) is not unimodular")]
    NotUnimodular { gamma: String, delta: String },
    #[error("both entries of the pair are zero")]
    ZeroPair,
    #[error("Euclidean division failed in Q(sqrt {0}); the field is not norm-Euclidean")]
    NotEuclidean(i64),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("dual index is not totally positive: {0}")]
    NotTotallyPositive(String),
    #[error("point is too close to the real axis (Im = {0:e}, minimum 1e-3)")]
    DegeneratePoint(f64),
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
    #[error("invalid sampling domain: {0}")]
    InvalidDomain(String),
    #[error("truncation failure: max_terms = {max_terms} exceeded after {partial} terms")]
    TruncationFailure { max_terms: usize, partial: usize },
    #[error("aliasing: frequency {other:?} folds onto target {target:?} on a {grid_n}-point grid")]
    Aliasing {
        target: (i64, i64),
        other: (i64, i64),
        grid_n: usize,
    },
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("matrix is not in the level subgroup: {0}")]
    NotInLevel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
