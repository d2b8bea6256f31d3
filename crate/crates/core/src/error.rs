use thiserror::Error;

/// Every failure the library can report.
///
/// Variant names double as the stable machine-readable error kind printed by
/// the command line tool (see [`Error::kind`]).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("undecodable image: {0}")]
    MalformedImage(String),
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("failed to encode mask: {0}")]
    EncodeFailure(String),
    #[error("mask has no lesion pixels")]
    EmptyMask,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// Another error, tagged with the mask or file it came from.
    #[error("{id}: {source}")]
    InItem { id: String, source: Box<Error> },

    #[error("length mismatch: {left} predictions vs {right} ground-truth labels")]
    LengthMismatch { left: usize, right: usize },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("malformed confusion matrix: {0}")]
    MalformedMatrix(String),

    #[error("header mismatch: {0}")]
    HeaderMismatch(String),
    #[error("ragged row {line}: expected {expected} cells, found {found}")]
    RaggedRow { line: usize, expected: usize, found: usize },
    #[error("non-finite or unparsable value `{value}` on line {line}")]
    NonFiniteValue { line: usize, value: String },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("empty set")]
    EmptySet,
    #[error("training data must contain both `{0}` and `{1}`")]
    SingleClassData(String, String),
    #[error("need at least two classes, found {0}")]
    TooFewClasses(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("record `{0}` has no label")]
    UnlabeledData(String),

    #[error("no mask for id `{0}`")]
    MissingMask(String),
    #[error("no label for id `{0}`")]
    MissingLabel(String),
    #[error("empty input")]
    EmptyInput,
    #[error("bad split fractions: {0}")]
    BadFractions(String),
    #[error("id mismatch: {0}")]
    IdMismatch(String),

    #[error("could not construct a {0} mask within the retry budget")]
    ConstructionFailed(&'static str),

    #[error("{0}")]
    Io(String),
    #[error("malformed json: {0}")]
    Json(String),
    #[error("malformed csv: {0}")]
    Csv(String),
}

impl Error {
    pub fn in_item(self, id: impl Into<String>) -> Self {
        Error::InItem { id: id.into(), source: Box::new(self) }
    }

    /// Stable identifier of the variant, e.g. `MalformedImage`.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedImage(_) => "MalformedImage",
            Error::UnsupportedFormat(_) => "UnsupportedFormat",
            Error::EncodeFailure(_) => "EncodeFailure",
            Error::EmptyMask => "EmptyMask",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::InItem { source, .. } => source.kind(),
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::EmptyMatrix => "EmptyMatrix",
            Error::MalformedMatrix(_) => "MalformedMatrix",
            Error::HeaderMismatch(_) => "HeaderMismatch",
            Error::RaggedRow { .. } => "RaggedRow",
            Error::NonFiniteValue { .. } => "NonFiniteValue",
            Error::DuplicateId(_) => "DuplicateId",
            Error::EmptySet => "EmptySet",
            Error::SingleClassData(..) => "SingleClassData",
            Error::TooFewClasses(_) => "TooFewClasses",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::UnlabeledData(_) => "UnlabeledData",
            Error::MissingMask(_) => "MissingMask",
            Error::MissingLabel(_) => "MissingLabel",
            Error::EmptyInput => "EmptyInput",
            Error::BadFractions(_) => "BadFractions",
            Error::IdMismatch(_) => "IdMismatch",
            Error::ConstructionFailed(_) => "ConstructionFailed",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
            Error::Csv(_) => "Csv",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
