use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse rational number from {0:?} (expected \"p\" or \"p/q\")")]
    BadRational(String),

    #[error("{context}: indices must be strictly increasing and within 1..={dim}, got {indices:?}")]
    BadMultiIndex {
        context: String,
        dim: usize,
        indices: Vec<u8>,
    },

    #[error("model file {path}: {detail}")]
    ModelFile { path: String, detail: String },

    #[error("model {name} failed validation: {failures}")]
    InvalidModel { name: String, failures: String },

    #[error("filtration level p={p} out of range 0..={n} for this model")]
    FiltrationOutOfRange { p: usize, n: usize },

    #[error("form of degree {got} is not {p}-filtered: {detail}")]
    NotFiltered { p: usize, got: usize, detail: String },

    #[error("elements belong to different complexes ({left} vs {right})")]
    ComplexMismatch { left: String, right: String },

    #[error("morphism rejected: {0}")]
    BadMorphism(String),

    #[error("gauge form rejected: {0}")]
    BadGauge(String),

    #[error("{0}")]
    Input(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
