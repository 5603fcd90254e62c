//! Subgroup calculus for finitely generated free groups.
//!
//! Subgroups are handled through their Stallings automata ([`automata`]),
//! words and substitutions through [`words`], and the extension taxonomy
//! (fringe, algebraic extensions, closures, basis searches) through
//! [`extensions`].

pub mod automata;
pub mod error;
pub mod extensions;
pub mod lattice;
pub mod words;

pub use automata::{stallings, Automaton, Edge, Morphism, Partition};
pub use error::Error;
pub use extensions::{
    algebraic_closure, algebraic_extensions, check_fully_onto, check_into, check_onto, closures,
    expanded_pair, fully_onto_closure, injective_in_basis, is_algebraic, is_free_factor,
    onto_closure, onto_in_basis, random_subgroup, synchronized_fold, Budgets, Closures, Outcome,
    Subgroup, SyncFoldTrace, Verdict,
};
pub use lattice::ExtensionLattice;
pub use words::{Endomorphism, Letter, Word};
