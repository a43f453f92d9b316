use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // data model
    #[error("{component}: {source}")]
    Component {
        component: String,
        #[source]
        source: Box<Error>,
    },
    #[error("non-finite entry {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },
    #[error("entry {value} at index {index} exceeds 1")]
    EntryAboveOne { index: usize, value: f64 },
    #[error("sum {sum} ≠ 1")]
    SumNotOne { sum: String },
    #[error("row {row}: row sum {sum} ≠ 1")]
    RowSumNotOne { row: usize, sum: String },
    #[error("alphabet needs at least 2 outcomes, got {0}")]
    AlphabetTooSmall(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid input {0}")]
    InvalidInput(String),
    #[error("unknown outcome label {0:?}")]
    UnknownOutcome(String),

    // frequency
    #[error("empty sequence")]
    EmptySequence,
    #[error("sequence of length {len} too short for window fraction {window_fraction} (need at least {needed})")]
    SequenceTooShort {
        len: usize,
        window_fraction: f64,
        needed: usize,
    },
    #[error("window fraction {0} outside (0, 1)")]
    BadWindowFraction(f64),

    // hilbert
    #[error("vector is not unit norm (norm² = {0})")]
    NotUnitNorm(f64),
    #[error("basis is not orthonormal: ⟨e_{i}, e_{j}⟩ = {value}")]
    NotOrthonormal { i: usize, j: usize, value: String },

    // qlra
    #[error("R2 violated: zero probability in {0}")]
    ZeroProbability(String),
    #[error("R1 violated: transition matrices are not symmetrically conditioned")]
    NotSymmetricallyConditioned,
    #[error("hyperbolic context: no trigonometric representation")]
    Hyperbolic,
    #[error("phase constraint unsatisfiable")]
    PhaseConstraint,
    #[error("only dichotomous observables are supported here, got {0} outcomes")]
    NotDichotomous(usize),
    #[error("representation invariant violated: {0}")]
    Representation(String),

    // game
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("no transition data for chooser {chooser:?} and tester {tester:?}")]
    MissingPair { chooser: String, tester: String },
    #[error("pair {pair}: {source}")]
    Pair {
        pair: String,
        #[source]
        source: Box<Error>,
    },

    // classicality
    #[error("inconsistent marginals: {0}")]
    InconsistentMarginals(String),
    #[error("linear program: {0}")]
    LinearProgram(String),

    // simulation
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("partitions must be at least 1")]
    NoPartitions,
}

impl Error {
    pub(crate) fn in_component(self, component: impl Into<String>) -> Self {
        Error::Component {
            component: component.into(),
            source: Box::new(self),
        }
    }

    pub(crate) fn in_pair(self, pair: impl Into<String>) -> Self {
        Error::Pair {
            pair: pair.into(),
            source: Box::new(self),
        }
    }
}
