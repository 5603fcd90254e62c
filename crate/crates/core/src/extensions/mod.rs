//! The extension taxonomy of free-group subgroups.
//!
//! Every overgroup of H that matters here already appears in the fringe of
//! H: the finite family of subgroups obtained by quotienting the Stallings
//! automaton of H by vertex partitions. Cleaning the fringe of members that
//! properly contain another member as a free factor leaves the algebraic
//! extensions; restricting the cleaning to members inside a fixed overgroup
//! K isolates the algebraic closure of H in K. The onto and fully onto
//! closures join the fringe members inside K that the basis searches of
//! [`search`] cannot refute.

use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::automata::{bell, fold, partitions, stallings, Automaton, Morphism, Partition};
use crate::error::Error;
use crate::words::{Endomorphism, Letter, Word};

pub mod search;
pub mod sync_fold;
mod whitehead_min;

pub use search::{
    check_fully_onto, check_into, check_onto, injective_in_basis, onto_in_basis, Budgets, Outcome,
    Verdict,
};
pub use sync_fold::{expanded_pair, synchronized_fold, SyncFoldTrace};
pub use whitehead_min::is_free_factor;

/// How many partitions to materialize per parallel fringe batch.
const PARTITION_BATCH: usize = 8192;

/// A finitely generated subgroup of a free group of known ambient rank.
///
/// The subgroup is held as its canonical Stallings automaton, so equality,
/// ordering, and hashing agree with equality of subgroups regardless of the
/// generators used. The original generators are kept for reporting;
/// [`basis`](Subgroup::basis) derives a free basis from the automaton. The
/// fringe is computed at most once and shared across clones.
#[derive(Debug, Clone)]
pub struct Subgroup {
    generators: Vec<Word>,
    graph: Automaton,
    fringe: Arc<OnceLock<Arc<Vec<Subgroup>>>>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.graph.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.graph.cmp(&other.graph)
    }
}

impl Subgroup {
    /// The subgroup generated by the given words inside the free group of
    /// the stated rank.
    pub fn new(generators: Vec<Word>, ambient_rank: usize) -> Result<Subgroup, Error> {
        let graph = stallings(&generators, ambient_rank)?;
        Ok(Subgroup { generators, graph, fringe: Arc::new(OnceLock::new()) })
    }

    /// Wrap a deterministic automaton, trimming and canonicalizing it; the
    /// generators are re-derived from the basis.
    pub fn from_graph(graph: &Automaton) -> Subgroup {
        Subgroup::from_canonical(graph.trim_core().canonicalize())
    }

    fn from_canonical(graph: Automaton) -> Subgroup {
        let generators = graph.basis();
        Subgroup { generators, graph, fringe: Arc::new(OnceLock::new()) }
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn graph(&self) -> &Automaton {
        &self.graph
    }

    /// Rank of the ambient free group.
    pub fn ambient_rank(&self) -> usize {
        self.graph.alphabet_size()
    }

    /// Rank of the subgroup itself.
    pub fn rank(&self) -> usize {
        self.graph.rank()
    }

    /// A free basis derived from the spanning tree of the automaton.
    pub fn basis(&self) -> Vec<Word> {
        self.graph.basis()
    }

    pub fn contains(&self, word: &Word) -> bool {
        self.graph.accepts(word)
    }

    /// Whether this subgroup is contained in the other.
    pub fn leq(&self, other: &Subgroup) -> bool {
        assert_eq!(
            self.ambient_rank(),
            other.ambient_rank(),
            "subgroups live in different ambient groups"
        );
        Morphism::find_maps(&self.graph, &other.graph).is_some()
    }

    /// The subgroup generated by this subgroup and the other.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(
            self.ambient_rank(),
            other.ambient_rank(),
            "subgroups live in different ambient groups"
        );
        let (folded, _) = fold(&self.graph.wedge(&other.graph));
        let graph = folded.trim_core().canonicalize();
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        Subgroup { generators, graph, fringe: Arc::new(OnceLock::new()) }
    }

    /// The intersection of the two subgroups.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        assert_eq!(
            self.ambient_rank(),
            other.ambient_rank(),
            "subgroups live in different ambient groups"
        );
        Subgroup::from_canonical(self.graph.intersect(&other.graph))
    }

    /// The Stallings automaton of this subgroup written in the basis given
    /// by `basis` (images of the ambient generators under an automorphism,
    /// possibly of a larger free group).
    pub fn in_basis(&self, basis: &Endomorphism) -> Result<Automaton, Error> {
        let alphabet = basis.source_rank();
        if basis.target_rank() != alphabet || alphabet < self.ambient_rank() {
            return Err(Error::ArityMismatch { expected: self.ambient_rank(), actual: alphabet });
        }
        let psi = basis.inverse()?;
        let images: Vec<Word> =
            self.generators.iter().map(|w| psi.apply(w)).collect::<Result<_, _>>()?;
        stallings(&images, alphabet)
    }

    /// Every subgroup obtained by quotienting the automaton by a vertex
    /// partition, deduplicated and sorted; always contains the subgroup
    /// itself. The result is cached on first success. Fails when the Bell
    /// number of the vertex count exceeds `bell_cap`.
    pub fn fringe(&self, bell_cap: u64) -> Result<Arc<Vec<Subgroup>>, Error> {
        if let Some(cached) = self.fringe.get() {
            return Ok(cached.clone());
        }
        let vertices = self.graph.vertex_count();
        let count = bell(vertices);
        if count > bell_cap {
            return Err(Error::PartitionBudgetExceeded { vertices, bell: count, cap: bell_cap });
        }
        let mut quotients: BTreeSet<Automaton> = BTreeSet::new();
        let mut iter = partitions(vertices);
        loop {
            let batch: Vec<Partition> = iter.by_ref().take(PARTITION_BATCH).collect();
            if batch.is_empty() {
                break;
            }
            quotients.extend(
                batch
                    .par_iter()
                    .map(|p| self.graph.quotient(p).expect("partition sizes match"))
                    .collect::<Vec<_>>(),
            );
        }
        let members: Vec<Subgroup> =
            quotients.into_iter().map(Subgroup::from_canonical).collect();
        Ok(self.fringe.get_or_init(|| Arc::new(members)).clone())
    }
}

#[derive(Serialize, Deserialize)]
struct SubgroupRepr {
    automaton: Automaton,
    basis: Vec<Word>,
}

impl Serialize for Subgroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SubgroupRepr { automaton: self.graph.clone(), basis: self.graph.basis() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subgroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SubgroupRepr::deserialize(deserializer)?;
        let sub = Subgroup::from_graph(&repr.automaton);
        if stallings(&repr.basis, sub.ambient_rank()).ok().as_ref() != Some(&sub.graph) {
            return Err(D::Error::custom("stated basis does not generate the automaton"));
        }
        Ok(Subgroup { generators: repr.basis, ..sub })
    }
}

/// The algebraic extensions of `h`: its fringe with every member deleted
/// that properly contains another member as a free factor. `h` itself is
/// always an algebraic extension of itself and survives.
pub fn algebraic_extensions(h: &Subgroup, bell_cap: u64) -> Result<Vec<Subgroup>, Error> {
    let fringe = h.fringe(bell_cap)?;
    Ok(clean(&fringe.iter().collect::<Vec<_>>()).into_iter().cloned().collect())
}

/// Delete every subgroup properly containing another listed subgroup as a
/// free factor. Deleted members remain valid witnesses: free factors
/// compose, so anything they delete is also deleted by a survivor.
fn clean<'a>(candidates: &[&'a Subgroup]) -> Vec<&'a Subgroup> {
    let mut kept = Vec::new();
    'outer: for (j, &candidate) in candidates.iter().enumerate() {
        for (i, &witness) in candidates.iter().enumerate() {
            if i != j
                && witness.leq(candidate)
                && is_free_factor(witness, candidate).expect("containment was checked")
            {
                continue 'outer;
            }
        }
        kept.push(candidate);
    }
    kept
}

/// The algebraic closure of `h` in `k`: the largest algebraic extension of
/// `h` contained in `k`. Fails with [`Error::NotASubgroup`] when `h` is not
/// contained in `k`.
pub fn algebraic_closure(h: &Subgroup, k: &Subgroup, bell_cap: u64) -> Result<Subgroup, Error> {
    if !h.leq(k) {
        return Err(Error::NotASubgroup);
    }
    let fringe = h.fringe(bell_cap)?;
    let candidates: Vec<&Subgroup> = fringe.iter().filter(|l| l.leq(k)).collect();
    let kept = clean(&candidates);
    // the survivors are exactly the algebraic extensions of h inside k,
    // and the closure is their maximum
    let top = kept
        .iter()
        .find(|m| kept.iter().all(|l| l.leq(m)))
        .expect("the algebraic closure is the unique maximal survivor");
    Ok((*top).clone())
}

/// Whether `k` is an algebraic extension of `h`.
pub fn is_algebraic(h: &Subgroup, k: &Subgroup, bell_cap: u64) -> Result<bool, Error> {
    Ok(&algebraic_closure(h, k, bell_cap)? == k)
}

/// The three closures of `h` inside `k`. The algebraic closure is exact;
/// the other two are joins over unrefuted fringe candidates and carry the
/// weakest outcome among the candidates they kept.
#[derive(Debug, Clone)]
pub struct Closures {
    pub algebraic: Subgroup,
    pub fully_onto: Subgroup,
    pub fully_onto_outcome: Outcome,
    pub onto: Subgroup,
    pub onto_outcome: Outcome,
}

/// Compute all three closures of `h` inside `k` and check the containment
/// chain between them.
pub fn closures(h: &Subgroup, k: &Subgroup, budgets: Budgets) -> Result<Closures, Error> {
    let algebraic = algebraic_closure(h, k, budgets.bell_cap)?;
    let (fully_onto, fully_onto_outcome) = fully_onto_closure(h, k, budgets)?;
    let (onto, onto_outcome) = onto_closure(h, k, budgets)?;
    assert!(
        h.leq(&algebraic)
            && algebraic.leq(&fully_onto)
            && fully_onto.leq(&onto)
            && onto.leq(k),
        "closures must form a chain"
    );
    Ok(Closures { algebraic, fully_onto, fully_onto_outcome, onto, onto_outcome })
}

/// Join of the fringe members inside `k` that [`check_onto`] cannot
/// refute; certified only when every kept candidate was certified.
pub fn onto_closure(h: &Subgroup, k: &Subgroup, budgets: Budgets) -> Result<(Subgroup, Outcome), Error> {
    closure_by(h, k, budgets, check_onto)
}

/// Join of the fringe members inside `k` that [`check_fully_onto`] cannot
/// refute; certified only when every kept candidate was certified.
pub fn fully_onto_closure(
    h: &Subgroup,
    k: &Subgroup,
    budgets: Budgets,
) -> Result<(Subgroup, Outcome), Error> {
    closure_by(h, k, budgets, check_fully_onto)
}

fn closure_by(
    h: &Subgroup,
    k: &Subgroup,
    budgets: Budgets,
    check: fn(&Subgroup, &Subgroup, Budgets) -> Result<Verdict, Error>,
) -> Result<(Subgroup, Outcome), Error> {
    if !h.leq(k) {
        return Err(Error::NotASubgroup);
    }
    let fringe = h.fringe(budgets.bell_cap)?;
    let mut join = h.clone();
    let mut outcome = Outcome::YesCertified;
    for candidate in fringe.iter().filter(|l| l.leq(k)) {
        match check(h, candidate, budgets)?.outcome {
            Outcome::No => {}
            Outcome::YesCertified => join = join.join(candidate),
            Outcome::Unknown => {
                join = join.join(candidate);
                outcome = Outcome::Unknown;
            }
        }
    }
    Ok((join, outcome))
}

/// A reproducible pseudorandom subgroup: between one and `max_generators`
/// freely reduced words of length between one and `max_length` each.
pub fn random_subgroup(
    ambient_rank: usize,
    max_generators: usize,
    max_length: usize,
    seed: u64,
) -> Subgroup {
    assert!(
        ambient_rank > 0 && max_generators > 0 && max_length > 0,
        "degenerate shape for a random subgroup"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=max_generators);
    let generators = (0..count).map(|_| random_word(&mut rng, ambient_rank, max_length)).collect();
    Subgroup::new(generators, ambient_rank).expect("generated letters fit the rank")
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_length: usize) -> Word {
    let length = rng.gen_range(1..=max_length);
    let mut letters: Vec<Letter> = Vec::with_capacity(length);
    while letters.len() < length {
        let letter = Letter(rng.gen_range(0..2 * rank as u32));
        // draw again instead of letting the reduction shorten the word
        if letters.last().is_none_or(|l| l.inverse() != letter) {
            letters.push(letter);
        }
    }
    Word::from_letters(letters)
}
