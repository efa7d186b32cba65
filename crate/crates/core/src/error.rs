use alloc::string::String;
use alloc::vec::Vec;

use crate::set::ElementSet;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed matroid descriptor: {0}")]
    MalformedDescriptor(String),

    #[error("element {element} is outside the ground set of size {n}")]
    OutOfRange { element: usize, n: usize },

    #[error("seed set {0} is not independent")]
    SeedDependent(ElementSet),

    #[error("ground set sizes differ ({0} vs {1})")]
    GroundMismatch(usize, usize),

    /// Carries a maximum common independent set.
    #[error("no common basis; largest common independent set is {witness}")]
    NoCommonBasis { witness: ElementSet },

    /// Either `k * r(T) < |T|` for the witness `T`, or the set is too small to hold `k` bases.
    #[error("cannot partition into {k} bases: {reason}, witness {witness}")]
    Infeasible {
        k: usize,
        witness: ElementSet,
        reason: &'static str,
    },

    #[error("no efficient strongly-base-orderable bijection: {0}")]
    NotSupported(String),

    #[error("{0} is not a basis")]
    NotBases(ElementSet),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("{0} is not a common basis")]
    NotCommonBases(ElementSet),

    #[error("{0} is not a basis of the two-fold union")]
    NotUnionBasis(ElementSet),

    #[error("digraph has a directed cycle {cycle:?}")]
    CyclicInput { cycle: Vec<usize> },

    #[error("no disjoint pair of bases covers the ground set")]
    NoDisjointSpanningPair,

    /// The general case is open; the cyclic exchange digraph is reported for study.
    #[error("unresolved: exchange digraph for bases {b1} / {b2} has cycle {cycle:?}")]
    Unresolved {
        b1: ElementSet,
        b2: ElementSet,
        cycle: Vec<usize>,
    },

    #[error("internal invariant broken: {0}")]
    InternalInvariantBroken(String),

    #[error("bipartite graph has no perfect matching")]
    NoPerfectMatching,

    #[error("valuation is not M-natural concave: {0}")]
    NotMnatConcave(String),

    #[error("no price found for the set families after {trials} trials")]
    SearchExhausted { trials: usize },

    #[error("instance too large for exhaustive enumeration: {guard}")]
    TooLarge { guard: String },

    #[error("hypothesis fails: no feasible pair of complementary bases")]
    NoFeasiblePair,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
