use thiserror::Error;

/// Errors raised while building, reading or validating a polygonal mesh.
#[derive(Debug, Error)]
pub enum MeshError {
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: malformed header or counts: {msg}")]
    MalformedCounts { line: usize, msg: String },
    #[error("line {line}: cannot parse record: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dangling index: {what} references vertex {index} but the mesh has {count} vertices")]
    DanglingIndex {
        what: String,
        index: usize,
        count: usize,
    },
    #[error("cell {0} has zero or near-zero area")]
    DegenerateCell(usize),
    #[error("cell {0} is not a simple polygon")]
    SelfIntersecting(usize),
    #[error("edge ({0}, {1}) is shared by more than two cells")]
    NonManifoldEdge(usize, usize),
    #[error("edge list does not match the cell loops: {0}")]
    EdgeMismatch(String),
    #[error("boundary flag of {what} disagrees with the mesh topology")]
    BoundaryFlagMismatch { what: String },
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
    #[error("duplicate seeds after relaxation: {0} and {1}")]
    DuplicateSeeds(usize, usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("singular local system on cell {cell}: {what}")]
    SingularLocal { cell: usize, what: &'static str },
    #[error("{what}: expected local kernel of dimension {expected}, found {found}")]
    KernelDimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("sparse factorization failed ({kind}) for a {dim}x{dim} system with {nnz} entries: {msg}")]
    Factorization {
        kind: &'static str,
        dim: usize,
        nnz: usize,
        msg: String,
    },
    #[error("singular Jacobian at Newton iteration {iteration}: {msg}")]
    SingularJacobian { iteration: usize, msg: String },
    #[error("Newton did not converge in {iterations} iterations (last residual {residual:e})")]
    NewtonDiverged {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },
    #[error("exact solution does not provide {0}")]
    MissingExact(&'static str),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
