use thiserror::Error;

use crate::scalar::FieldKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("invalid shape {0:?}: every dimension must be at least 1")]
    InvalidShape(Vec<usize>),

    #[error("coefficient count {found} does not match shape {shape:?} (expected {expected})")]
    CoefficientCount {
        shape: Vec<usize>,
        expected: usize,
        found: usize,
    },

    #[error("index {index:?} out of range for shape {shape:?}")]
    IndexOutOfRange {
        index: Vec<usize>,
        shape: Vec<usize>,
    },

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldKind, right: FieldKind },

    #[error("unsupported field {0} for this operation")]
    UnsupportedField(FieldKind),

    #[error("tensor product of an empty factor list")]
    EmptyProduct,

    #[error("truncated algebras differ: (d={left_d}, N={left_n}) vs (d={right_d}, N={right_n})")]
    AlgebraMismatch {
        left_d: usize,
        left_n: usize,
        right_d: usize,
        right_n: usize,
    },

    #[error("not invertible: level-0 scalar is zero")]
    NotInvertible,

    #[error("cannot project to level {target} from truncation level {depth}")]
    ProjectionLevel { target: usize, depth: usize },

    #[error("letter {letter} out of range 1..={d}")]
    LetterOutOfRange { letter: usize, d: usize },

    #[error("invalid interval [{s}, {t}]: need 0 <= s <= t <= 1")]
    InvalidInterval { s: f64, t: f64 },

    #[error("path has no sample points")]
    EmptyPath,

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("mixed term order: term {term} has {found} slots, expected {expected}")]
    MixedOrder {
        term: usize,
        expected: usize,
        found: usize,
    },

    #[error("symbol `{symbol}` used in slot {first} and slot {second}")]
    SymbolReuse {
        symbol: String,
        first: usize,
        second: usize,
    },

    #[error("expected an order-{expected} expression, got order {found}")]
    WrongOrder { expected: usize, found: usize },

    #[error("expression has no terms, so its order is unknown")]
    EmptyExpression,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of an iterative numerical kernel rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}
