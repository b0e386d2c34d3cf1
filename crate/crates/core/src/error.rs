use thiserror::Error;

use crate::exact::Field;

/// Everything that can go wrong while building or analysing an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("division by zero in {0}")]
    DivisionByZero(Field),
    #[error("invalid scalar literal {0:?}")]
    ParseScalar(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("associativity fails at (i,j,k) = ({0},{1},{2})")]
    Associativity(usize, usize, usize),
    #[error("unit fails at basis index {0}")]
    Unit(usize),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("poset relation has a cycle: {0},{1}")]
    Cycle(String, String),
    #[error("unknown poset element {0:?}")]
    UnknownElement(String),
    #[error("monomial quotient is not finite-dimensional below total degree {0}")]
    InfiniteQuotient(usize),

    #[error("bimodule axiom fails: {0}")]
    BimoduleAxiom(String),
    #[error("coefficient bimodule is over a different algebra")]
    BaseAlgebraMismatch,
    #[error("invalid idempotents: {0}")]
    Idempotents(String),
    #[error("cochain index set of size {size} in degree {degree} exceeds the cap {cap}; use the relative model")]
    CochainCap {
        degree: usize,
        size: usize,
        cap: usize,
    },
    #[error("cochain does not belong to this model: {0}")]
    CochainShape(String),
    #[error("operation is not defined for the relative model")]
    RelativeUnsupported,
    #[error("operation requires the regular bimodule as coefficients")]
    NotRegular,
    #[error("input is not a cocycle")]
    NotCocycle,
    #[error("value lies outside the admissible component: {0}")]
    Component(String),

    #[error("Lie algebra axiom fails: {0}")]
    LieAxiom(String),
    #[error("Lie module axiom fails: {0}")]
    ModuleAxiom(String),
    #[error("form is not invariant: {0}")]
    NotInvariant(String),
    #[error("not an involutive antiautomorphism: {0}")]
    Involution(String),
    #[error("algebra was not built from a group table")]
    NotGroupAlgebra,
    #[error("algebra was not built from a poset")]
    NotPosetAlgebra,

    #[error("invalid deformation input: {0}")]
    Deform(String),
}

pub type Result<T> = std::result::Result<T, Error>;
