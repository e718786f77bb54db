use thiserror::Error;

/// Everything that can go wrong while building contexts, running the
/// solvers or checking the classical identities.
///
/// Variants marked as bug signals can only fire when two independent
/// computations disagree; they are never expected on valid input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("order {d} is coprime to p-1 for p = {p}; every nonzero residue is a power")]
    DegenerateOrder { p: u64, d: u64 },

    #[error("order must be at least 2, got {0}")]
    InvalidOrder(u64),

    #[error("p = {p} exceeds the configured limit {limit}")]
    PrimeTooLarge { p: u64, limit: u64 },

    #[error("zero has no index")]
    ZeroArgument,

    #[error("residue {a} is outside 1..{p}")]
    ResidueOutOfRange { a: u64, p: u64 },

    #[error("class {class} is outside 0..{d}")]
    ClassOutOfRange { class: usize, d: usize },

    #[error("sanity failure: p does not divide f^{k} + n({k},{nu})")]
    SanityFailure { k: usize, nu: usize },

    #[error("no k <= {bound} gives a nonzero count for class {alpha}")]
    BoundExceeded { alpha: usize, bound: usize },

    #[error("class {to} is unreachable from class {from} in the cyclotomic digraph")]
    Unreachable { from: usize, to: usize },

    #[error("solvers disagree on class {alpha}: recurrence {recurrence}, reachability {reachability}")]
    InternalDisagreement {
        alpha: usize,
        recurrence: usize,
        reachability: usize,
    },

    #[error("integrality failure in Newton's identities at e_{0}")]
    IntegralityFailure(usize),

    #[error("{what}: p = {p} exceeds the scale guard {limit}")]
    ScaleGuard {
        what: &'static str,
        p: u64,
        limit: u64,
    },

    #[error("sequence holds n(k, .) only up to k = {have}, need {need}")]
    SequenceTooShort { have: usize, need: usize },

    #[error("every coefficient of the log-derivative series for class {j} vanishes up to order {order}")]
    AllZeroToOrder { j: usize, order: usize },

    #[error("no representation of p = {p} by {form}")]
    NoRepresentation { p: u64, form: &'static str },

    #[error("p = {p} has {count} normalized representations by {form}")]
    AmbiguousRepresentation {
        p: u64,
        form: &'static str,
        count: usize,
    },

    #[error("formula mismatch at ({i},{j}): counted {counted}, formula gives {formula}")]
    FormulaMismatch {
        i: usize,
        j: usize,
        counted: i64,
        formula: String,
    },

    #[error("p = {p} is not 1 mod {modulus}")]
    WrongResidueClass { p: u64, modulus: u64 },

    #[error("residue {a} is never a sum of powers")]
    Unrepresentable { a: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
