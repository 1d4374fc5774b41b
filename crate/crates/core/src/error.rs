use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error("unsupported root system {label}{rank}: {reason}")]
    UnsupportedRootSystem {
        label: String,
        rank: usize,
        reason: String,
    },
    #[error("{0} is diagram-only: no matrix realization available")]
    DiagramOnly(String),
    #[error("simple root index {0} is out of range")]
    NotSimpleRoot(usize),
    #[error("nested square roots are not supported (sqrt({0}) and sqrt({1}))")]
    NestedRadicals(u64, u64),
    #[error("window too narrow: need N >= {required}, got {given}")]
    WindowTooNarrow { required: usize, given: usize },
    #[error("element does not lie in the order model")]
    OutsideOrderModel,
    #[error("map is not an isometry between the chosen sub-diagrams")]
    NotIsometry,
    #[error("brute-force enumeration limited to rank <= {max}, got rank {rank}")]
    RankGuard { max: usize, rank: usize },
    #[error("no Lagrangian Cartan piece found satisfying the transversality condition: {0}")]
    NoCartanLagrangian(String),
    #[error("Lagrangian subalgebra failed verification: {0}")]
    VerificationFailed(String),
    #[error("solution is not unitary")]
    NotUnitary,
    #[error("subspace is not transversal to the polynomial loop algebra: no solution")]
    NoSolution,
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("gauge factor exponent is not nilpotent (basis index {0})")]
    NotNilpotent(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
