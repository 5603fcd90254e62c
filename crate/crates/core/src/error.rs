use thiserror::Error;

/// Errors surfaced by the subgroup calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A word literal failed to parse. Positions are zero-based byte offsets.
    #[error("invalid word syntax at position {position}: {message}")]
    ParseWord { position: usize, message: String },

    /// An endomorphism was applied to or composed with something of the
    /// wrong rank.
    #[error("arity mismatch: expected rank {expected}, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    /// An endomorphism was asked to be inverted but is not an automorphism.
    #[error("endomorphism is not an automorphism")]
    NotAutomorphism,

    /// An extension check was asked about a pair (H, K) with H not a
    /// subgroup of K.
    #[error("not a subgroup of the stated overgroup")]
    NotASubgroup,

    /// A word was required to lie in a subgroup but does not.
    #[error("word is not a member of the subgroup")]
    NotMember,

    /// A vertex or edge map does not define a morphism of automata.
    #[error("maps do not define a morphism of automata")]
    InvalidMorphism,

    /// A fringe computation would enumerate more partitions than the
    /// configured budget allows.
    #[error("partition budget exceeded: {vertices} vertices give Bell number {bell} > cap {cap}")]
    PartitionBudgetExceeded { vertices: usize, bell: u64, cap: u64 },

    /// A lattice was constructed from elements that do not all contain the
    /// designated base subgroup.
    #[error("lattice element does not contain the base subgroup")]
    ElementMissingBase,

    /// A join or meet inside a lattice produced a subgroup that is not one
    /// of the lattice elements.
    #[error("operation result is not an element of the lattice")]
    ResultOutsideLattice,

    /// A lattice query referred to a subgroup that is not an element.
    #[error("subgroup is not an element of the lattice")]
    NotAnElement,
}
