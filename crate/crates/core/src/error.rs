use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix input contains a non-finite entry at ({row},{col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("empty matrix not allowed here")]
    EmptyMatrix,

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("matrix is not Hermitian: max asymmetry {max_asymmetry:.3e} exceeds {tol:.3e}")]
    NotHermitian { max_asymmetry: f64, tol: f64 },

    #[error("word parse error: {0}")]
    WordParse(String),

    #[error("generator index {index} out of range (presentation has {count})")]
    GeneratorOutOfRange { index: usize, count: usize },

    #[error("generator image {index} is singular or non-square")]
    SingularImage { index: usize },

    #[error("representation fails relator check: {context} (max deviation {deviation:.3e})")]
    RelatorCheckFailed { context: String, deviation: f64 },

    #[error("peripheral word has non-parabolic image: trace {trace}, |trace|-2 deviation {deviation:.3e}")]
    NotParabolic { trace: String, deviation: f64 },

    #[error("trace {trace} is neither +2 nor -2 within 1e-6; cannot classify lift sign")]
    AmbiguousTrace { trace: String },

    #[error("null-homology flag mismatch for peripheral word '{word}': stored {stored}, recomputed {computed}")]
    NullHomologyMismatch {
        word: String,
        stored: bool,
        computed: bool,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("corpus parse error in {origin}: {message}")]
    CorpusParse { origin: String, message: String },

    #[error("corpus entry '{0}' not found (not a bundled name and not a readable file)")]
    CorpusNotFound(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
