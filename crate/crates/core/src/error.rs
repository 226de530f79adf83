use thiserror::Error;

use crate::terms::TermQuotient;

/// Everything that can go wrong while building or checking a structure.
///
/// Element references inside variants are by name so messages make sense
/// without the structure at hand.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("antisymmetry violated: {0} <= {1} and {1} <= {0}")]
    AntisymmetryViolation(String, String),
    #[error("not a lattice: {0} and {1} have no {2}")]
    NotALattice(String, String, &'static str),
    #[error("not distributive: {x} & ({y} | {z}) differs from ({x} & {y}) | ({x} & {z})")]
    NotDistributive { x: String, y: String, z: String },
    #[error("{value} is not the supremum of {{{args}}} (witness {witness})")]
    NotSup { value: String, args: String, witness: String },
    #[error("{value} is not the infimum of {{{args}}} (witness {witness})")]
    NotInf { value: String, args: String, witness: String },
    #[error("join or meet with an empty argument set")]
    EmptyKey,
    #[error("empty argument where a nonempty set is required")]
    EmptyArgument,
    #[error("the {0} domain is empty; add singleton joins and meets first")]
    EmptyDomain(&'static str),
    #[error("size limit exceeded: {what} reached {limit}")]
    SizeLimit { what: &'static str, limit: usize },
    #[error("axiom violated ({clause}): {detail}")]
    AxiomViolation { clause: &'static str, detail: String },
    #[error("table not total: no value for ({0}, {1})")]
    TableNotTotal(String, String),
    #[error("value lattices differ")]
    ValueLatticeMismatch,
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("not an embedding: {0}")]
    NotAnEmbedding(String),
    #[error("not an isometry: {0}")]
    IsometryViolation(String),
    #[error("generator values violate a required relation: {0}")]
    RelationViolation(String),
    #[error("affine term list of length {terms} exceeds the closure cap {cap}")]
    TermBlowup { terms: usize, cap: usize },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("term quotient not closed within caps ({} classes so far)", .0.len())]
    CapExceeded(Box<TermQuotient>),
    #[error("term parse error at byte {pos}: {msg}")]
    TermParse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
