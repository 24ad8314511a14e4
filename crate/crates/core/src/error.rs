use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("generator names must be single lowercase ascii letters, got `{0}`")]
    BadGeneratorName(String),

    #[error("defining graph supports at most {max} generators, got {got}")]
    TooManyGenerators { max: usize, got: usize },

    #[error("malformed defining graph: {0}")]
    BadGraph(String),

    #[error("malformed word `{0}`")]
    BadWord(String),

    #[error("malformed fixture rule `{0}`")]
    BadRule(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("element is elliptic, no axis exists")]
    Elliptic,

    #[error("element inverts a hyperplane; pass to its square")]
    InversionDetected,

    #[error("automorphism does not preserve the retained vertex set: {0}")]
    AutomorphismDoesNotPreserve(String),

    #[error("convex hull enumeration exceeded cap of {cap} vertices")]
    HullCapExceeded { cap: usize },

    #[error("half-space is not part of the current scope")]
    NotInScope,

    #[error("embedding verification failed: {0}")]
    EmbeddingVerification(String),

    #[error("sampled property violation: {0}")]
    PropertyViolation(String),

    #[error("computed data contradicts a proven statement: {0}")]
    TheoremContradiction(String),

    #[error("no non-transverse power of g up to {cap}")]
    NoNonTransversePower { cap: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}
