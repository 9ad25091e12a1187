use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),

    #[error("metric is singular")]
    SingularMetric,

    #[error("size limit exceeded: needed {needed}, cap {cap}")]
    SizeLimit { needed: u128, cap: u128 },

    #[error("map is not surjective")]
    NotSurjective,

    #[error("representative {rep} does not belong to its orbit")]
    BadRepresentative { rep: usize },

    #[error("group is not abelian")]
    NotAbelian,

    #[error("generated subgroup is not transitive on the index set")]
    NotTransitive,

    #[error("group is not an elementary abelian 2-group")]
    NotElementaryAbelian2,

    #[error("presentation does not match the algebra's group")]
    PresentationMismatch,

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("axiom `{axiom}` failed: {witness}")]
    AxiomViolation { axiom: String, witness: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn size(needed: u128, cap: u128) -> Self {
        Error::SizeLimit { needed, cap }
    }
}

/// Checks an enumeration size against a cap before the enumeration happens.
pub fn guard_cap(needed: u128, cap: u64) -> Result<(), Error> {
    if needed > cap as u128 {
        Err(Error::size(needed, cap as u128))
    } else {
        Ok(())
    }
}

/// Default element/dimension cap for enumerations.
pub const DEFAULT_CAP: u64 = 1_000_000;
