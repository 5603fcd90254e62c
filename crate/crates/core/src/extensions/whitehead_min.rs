//! Free factor detection by Whitehead minimization.
//!
//! A subgroup embedded as a subautomaton extends to a spanning tree of the
//! overgroup, so its basis extends to a basis of the overgroup and the
//! containment is a free factor. In every other case the question is
//! rewritten inside the overgroup and settled by a greedy descent on the
//! cyclic size of the Stallings automaton over Whitehead multiplier moves;
//! peak reduction guarantees that some multiplier move improves any
//! non-minimal automaton, and a minimal free factor is a conjugated subset
//! of the basis, recognizable as a one-vertex cyclic core.

use rayon::prelude::*;

use crate::automata::{stallings, Morphism};
use crate::error::Error;
use crate::words::whitehead::{
    classical_multiplier_endomorphisms, whitehead_generators, WhiteheadKind,
};
use crate::words::{Endomorphism, Word};

use super::Subgroup;

/// Whether `h` is a free factor of `k`. Fails with [`Error::NotASubgroup`]
/// when `h` is not contained in `k`.
pub fn is_free_factor(h: &Subgroup, k: &Subgroup) -> Result<bool, Error> {
    let theta = Morphism::find(h.graph(), k.graph()).ok_or(Error::NotASubgroup)?;
    if h == k || theta.is_injective() {
        return Ok(true);
    }
    if h.rank() >= k.rank() {
        // a proper free factor has strictly smaller rank
        return Ok(false);
    }
    let rewritten: Vec<Word> = h
        .basis()
        .iter()
        .map(|w| k.graph().rewrite_member(w))
        .collect::<Result<_, _>>()
        .expect("a morphism of automata certifies membership");
    Ok(minimizes_to_rose(rewritten, k.rank()))
}

/// Greedy first-improvement descent on the edge count of the cyclic core,
/// scanning multiplier moves of both conventions; at the minimum the
/// subgroup is a free factor exactly when the core is a rose.
fn minimizes_to_rose(generators: Vec<Word>, rank: usize) -> bool {
    let moves: Vec<Endomorphism> = whitehead_generators(rank)
        .iter()
        .filter(|g| matches!(g.kind(), WhiteheadKind::Multiplier { .. }))
        .map(|g| g.as_endomorphism())
        .chain(classical_multiplier_endomorphisms(rank))
        .collect();
    let graph = |words: &[Word]| stallings(words, rank).expect("moves preserve the alphabet");
    let mut current = generators;
    let mut core = graph(&current);
    let mut size = core.cyclic_core_size().1;
    loop {
        let improvement = moves.par_iter().find_map_first(|phi| {
            let images: Vec<Word> =
                current.iter().map(|w| phi.apply(w).expect("ranks match")).collect();
            let candidate = graph(&images);
            let edges = candidate.cyclic_core_size().1;
            (edges < size).then_some((images, candidate, edges))
        });
        match improvement {
            Some((images, candidate, edges)) => {
                current = images;
                core = candidate;
                size = edges;
            }
            None => return core.cyclic_core_size().0 <= 1,
        }
    }
}
