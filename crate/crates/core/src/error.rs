use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("zero weight has no primitive part")]
    ZeroWeight,
    #[error("weight rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("lattice coordinate does not fit in a machine exponent")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("unit evaluation undefined: variable {0} set to zero in a Laurent polynomial")]
    UnitEvaluation(usize),
    #[error("assignment has {got} entries, ring has rank {rank}")]
    Assignment { got: usize, rank: usize },
    #[error("malformed polynomial: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("cannot parse Cartan matrix {0:?}")]
    Parse(String),
    #[error("parabolic node {0} out of range")]
    ParabolicIndex(usize),
    #[error("P = G, trivial space")]
    FullParabolic,
    #[error("Weyl group is infinite; a maximum length is required")]
    Unbounded,
    #[error("inversion of {0} leads outside the enumerated cosets")]
    MissingTarget(String),
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("graph schema violation: {0}")]
    Schema(String),
    #[error("vertex {vertex} has length {length} but {edges} downward edges")]
    EdgeCount { vertex: String, length: usize, edges: usize },
    #[error("unknown export format {0:?}")]
    UnknownFormat(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("class does not match graph: {0}")]
    Mismatch(String),
    #[error("no lift of generator {generator} exists at vertex {vertex} (GKM hypotheses violated)")]
    NoSolution { generator: String, vertex: String },
    #[error("lift of generator {generator} at vertex {vertex} is not unique (degenerate graph)")]
    NonUnique { generator: String, vertex: String },
    #[error("generators are not triangular: {0}")]
    NotTriangular(String),
    #[error("class outside generator span at vertex {vertex}")]
    OutsideSpan { vertex: String },
    #[error("value of {generator} at {vertex} does not split into linear forms")]
    DoesNotSplit { generator: String, vertex: String },
    #[error("lifted class {generator} fails GKM condition on edge {source_vertex}->{target_vertex}")]
    LiftFailsMembership { generator: String, source_vertex: String, target_vertex: String },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("factorization unsupported: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("vertex m={0} is outside the truncation")]
    OutOfTruncation(i64),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Crate-wide error for callers that mix modules (CLI, example suites).
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Q(#[from] QError),
    #[error("{0}")]
    Other(String),
}
