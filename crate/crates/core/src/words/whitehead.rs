//! Whitehead automorphisms and breadth-first enumeration of bases.
//!
//! Two families generate the automorphism group of a free group. Signed
//! permutations send each generator to a generator or an inverse. The
//! multiplier moves are given by a letter `m` and a cut `S` with `m` in `S`
//! and `m^-1` not in `S`: writing `e = [x^-1 in S]` and `d = [x in S]`, the
//! move fixes `m` and sends every other generator `x` to `m^e x m^d`. Its
//! inverse is the move with multiplier `m^-1` and cut `{m^-1} + S - {m}`.

use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::words::{Endomorphism, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WhiteheadKind {
    /// `images[i]` is the image letter of generator `i`.
    Permutation { images: Vec<Letter> },
    /// Multiplier move with the stated cut (sorted, contains the multiplier).
    Multiplier { multiplier: Letter, cut: Vec<Letter> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WhiteheadAutomorphism {
    rank: usize,
    kind: WhiteheadKind,
}

impl WhiteheadAutomorphism {
    /// A signed permutation. Fails unless the images hit each generator
    /// index exactly once.
    pub fn permutation(rank: usize, images: Vec<Letter>) -> Result<Self, Error> {
        if images.len() != rank {
            return Err(Error::ArityMismatch { expected: rank, actual: images.len() });
        }
        let mut hit = vec![false; rank];
        for &l in &images {
            let i = l.index() as usize;
            if i >= rank || hit[i] {
                return Err(Error::NotAutomorphism);
            }
            hit[i] = true;
        }
        Ok(WhiteheadAutomorphism { rank, kind: WhiteheadKind::Permutation { images } })
    }

    /// A multiplier move. The cut is sorted and deduplicated; it must
    /// contain the multiplier and not the multiplier's inverse, and all
    /// letters must fit the rank.
    pub fn multiplier(rank: usize, multiplier: Letter, mut cut: Vec<Letter>) -> Result<Self, Error> {
        cut.sort();
        cut.dedup();
        if cut.iter().any(|l| l.index() as usize >= rank) || multiplier.index() as usize >= rank {
            return Err(Error::ArityMismatch { expected: rank, actual: rank + 1 });
        }
        if !cut.contains(&multiplier) || cut.contains(&multiplier.inverse()) {
            return Err(Error::NotAutomorphism);
        }
        Ok(WhiteheadAutomorphism { rank, kind: WhiteheadKind::Multiplier { multiplier, cut } })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kind(&self) -> &WhiteheadKind {
        &self.kind
    }

    /// Image of a positive generator letter.
    fn image_of_generator(&self, index: u32) -> Word {
        match &self.kind {
            WhiteheadKind::Permutation { images } => Word::from_letter(images[index as usize]),
            WhiteheadKind::Multiplier { multiplier, cut } => {
                let x = Letter::positive(index);
                if x.index() == multiplier.index() {
                    return Word::from_letter(x);
                }
                let mut letters = Vec::with_capacity(3);
                if cut.contains(&x.inverse()) {
                    letters.push(*multiplier);
                }
                letters.push(x);
                if cut.contains(&x) {
                    letters.push(*multiplier);
                }
                Word::from_letters(letters)
            }
        }
    }

    pub fn as_endomorphism(&self) -> Endomorphism {
        let images = (0..self.rank as u32).map(|i| self.image_of_generator(i)).collect();
        Endomorphism::new(images, self.rank).expect("whitehead images fit the rank")
    }

    /// Apply to a word.
    pub fn apply(&self, word: &Word) -> Word {
        self.as_endomorphism().apply(word).expect("rank checked on construction")
    }

    /// The inverse move, in closed form.
    pub fn inverse(&self) -> WhiteheadAutomorphism {
        match &self.kind {
            WhiteheadKind::Permutation { images } => {
                let mut inv = vec![Letter::positive(0); self.rank];
                for (i, l) in images.iter().enumerate() {
                    let target = Letter::positive(i as u32);
                    inv[l.index() as usize] =
                        if l.is_inverse() { target.inverse() } else { target };
                }
                WhiteheadAutomorphism::permutation(self.rank, inv).unwrap()
            }
            WhiteheadKind::Multiplier { multiplier, cut } => {
                let mut inv_cut: Vec<Letter> =
                    cut.iter().copied().filter(|l| l != multiplier).collect();
                inv_cut.push(multiplier.inverse());
                WhiteheadAutomorphism::multiplier(self.rank, multiplier.inverse(), inv_cut)
                    .unwrap()
            }
        }
    }
}

/// Every Whitehead automorphism of the free group of the given rank: all
/// signed permutations (identity included), then all nontrivial multiplier
/// moves, in a fixed enumeration order.
pub fn whitehead_generators(rank: usize) -> Vec<WhiteheadAutomorphism> {
    let mut gens = Vec::new();
    for perm in (0..rank as u32).permutations(rank) {
        for mask in 0..(1u64 << rank) {
            let images = perm
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    if mask >> i & 1 == 1 {
                        Letter::negative(p)
                    } else {
                        Letter::positive(p)
                    }
                })
                .collect();
            gens.push(WhiteheadAutomorphism::permutation(rank, images).unwrap());
        }
    }
    for code in 0..2 * rank as u32 {
        let m = Letter(code);
        let others: Vec<Letter> = (0..2 * rank as u32)
            .map(Letter)
            .filter(|l| l.index() != m.index())
            .collect();
        // skip the empty selection: the cut {m} is the identity move
        for mask in 1..(1u64 << others.len()) {
            let mut cut = vec![m];
            for (j, &l) in others.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    cut.push(l);
                }
            }
            gens.push(WhiteheadAutomorphism::multiplier(rank, m, cut).unwrap());
        }
    }
    gens
}

/// The classical multiplier convention `x -> m^-e x m^d`, as endomorphisms.
/// Together with the family above these realize peak reduction, which is
/// what the minimization in the extension machinery relies on.
pub(crate) fn classical_multiplier_endomorphisms(rank: usize) -> Vec<Endomorphism> {
    let mut endos = Vec::new();
    for code in 0..2 * rank as u32 {
        let m = Letter(code);
        let others: Vec<Letter> = (0..2 * rank as u32)
            .map(Letter)
            .filter(|l| l.index() != m.index())
            .collect();
        for mask in 1..(1u64 << others.len()) {
            let cut: Vec<Letter> = others
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, &l)| l)
                .collect();
            let images = (0..rank as u32)
                .map(|i| {
                    let x = Letter::positive(i);
                    if x.index() == m.index() {
                        return Word::from_letter(x);
                    }
                    let mut letters = Vec::with_capacity(3);
                    if cut.contains(&x.inverse()) {
                        letters.push(m.inverse());
                    }
                    letters.push(x);
                    if cut.contains(&x) {
                        letters.push(m);
                    }
                    Word::from_letters(letters)
                })
                .collect();
            endos.push(Endomorphism::new(images, rank).unwrap());
        }
    }
    endos
}

/// Breadth-first enumeration of bases of the free group of a given rank as
/// products of Whitehead generators, deduplicated globally.
///
/// Each layer holds the *inverse substitutions*: the endomorphisms
/// `phi^-1` for every new automorphism `phi` whose shortest factorization
/// has the current depth. Since the generator family is closed under
/// inversion, each layer is also exactly the set of new automorphisms of
/// that depth. The enumeration stops extending once `max_bases` distinct
/// automorphisms have been recorded.
pub struct BasisEnumerator {
    generators: Vec<Endomorphism>,
    seen: HashSet<Vec<u32>>,
    layer: Vec<Endomorphism>,
    depth: usize,
    remaining: u64,
    capped: bool,
}

fn fingerprint(endo: &Endomorphism) -> Vec<u32> {
    let mut key = Vec::new();
    for image in endo.images() {
        key.push(u32::MAX);
        key.extend(image.letters().iter().map(|l| l.0));
    }
    key
}

/// Start an enumeration; depth zero holds only the identity.
pub fn enumerate_bases(rank: usize, max_bases: u64) -> BasisEnumerator {
    let generators = whitehead_generators(rank)
        .iter()
        .map(|g| g.inverse().as_endomorphism())
        .collect();
    let identity = Endomorphism::identity(rank);
    let mut seen = HashSet::new();
    seen.insert(fingerprint(&identity));
    let capped = max_bases == 0;
    let layer = if capped { Vec::new() } else { vec![identity] };
    BasisEnumerator {
        generators,
        seen,
        layer,
        depth: 0,
        remaining: max_bases.saturating_sub(1),
        capped,
    }
}

impl BasisEnumerator {
    /// Generator applications composed so far.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Inverse substitutions of the current layer, in deterministic order.
    pub fn layer(&self) -> &[Endomorphism] {
        &self.layer
    }

    /// Whether enumeration stopped because `max_bases` was reached.
    pub fn capped(&self) -> bool {
        self.capped
    }

    /// Whether every automorphism has been enumerated (finite automorphism
    /// groups only, i.e. rank at most one).
    pub fn is_exhausted(&self) -> bool {
        !self.capped && self.layer.is_empty()
    }

    /// Compute the next layer. Returns false once the enumeration is
    /// exhausted or capped; a partial final layer is still surfaced.
    pub fn advance(&mut self) -> bool {
        if self.capped || self.layer.is_empty() {
            return false;
        }
        let mut next = Vec::new();
        'outer: for inv in &self.layer {
            for ginv in &self.generators {
                // phi' = phi . g, so phi'^-1 = g^-1 . phi^-1
                let new_inv = ginv.then(inv).expect("equal ranks");
                let key = fingerprint(&new_inv);
                if self.seen.contains(&key) {
                    continue;
                }
                if self.remaining == 0 {
                    self.capped = true;
                    break 'outer;
                }
                self.remaining -= 1;
                self.seen.insert(key);
                next.push(new_inv);
            }
        }
        self.depth += 1;
        self.layer = next;
        !self.layer.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn generator_counts_by_rank() {
        // r! * 2^r signed permutations plus 2r * (2^(2r-2) - 1) multiplier moves
        assert_eq!(whitehead_generators(0).len(), 1);
        assert_eq!(whitehead_generators(1).len(), 2);
        assert_eq!(whitehead_generators(2).len(), 8 + 12);
        assert_eq!(whitehead_generators(3).len(), 48 + 90);
    }

    #[test]
    fn rank_one_generators_are_identity_and_inversion() {
        let gens = whitehead_generators(1);
        assert!(gens[0].as_endomorphism().is_identity());
        assert_eq!(gens[1].as_endomorphism().images(), &[w("A")]);
    }

    #[test]
    fn multiplier_action_matches_the_convention() {
        let a = Letter::positive(0);
        let b = Letter::positive(1);
        let right = WhiteheadAutomorphism::multiplier(2, a, vec![a, b]).unwrap();
        assert_eq!(right.as_endomorphism().images(), &[w("a"), w("ba")]);
        let left = WhiteheadAutomorphism::multiplier(2, a, vec![a, b.inverse()]).unwrap();
        assert_eq!(left.as_endomorphism().images(), &[w("a"), w("ab")]);
        let both = WhiteheadAutomorphism::multiplier(2, a, vec![a, b, b.inverse()]).unwrap();
        assert_eq!(both.as_endomorphism().images(), &[w("a"), w("aba")]);
    }

    #[test]
    fn constructors_reject_bad_input() {
        let a = Letter::positive(0);
        assert!(WhiteheadAutomorphism::multiplier(2, a, vec![a, a.inverse()]).is_err());
        assert!(WhiteheadAutomorphism::multiplier(2, a, vec![Letter::positive(1)]).is_err());
        assert!(WhiteheadAutomorphism::permutation(2, vec![a, a]).is_err());
        assert!(WhiteheadAutomorphism::permutation(2, vec![a]).is_err());
    }

    #[test]
    fn every_generator_inverts() {
        for rank in 1..=3 {
            for g in whitehead_generators(rank) {
                let forward = g.as_endomorphism();
                let back = g.inverse().as_endomorphism();
                assert!(forward.then(&back).unwrap().is_identity(), "{forward} in rank {rank}");
                assert!(back.then(&forward).unwrap().is_identity(), "{forward} in rank {rank}");
            }
        }
    }

    #[test]
    fn classical_moves_are_automorphisms() {
        let moves = classical_multiplier_endomorphisms(2);
        assert_eq!(moves.len(), 12);
        // the conjugation move: cut {b, b^-1} with multiplier a
        assert!(moves
            .iter()
            .any(|e| e.images() == [w("a"), w("Aba")]));
    }

    #[test]
    fn rank_one_enumeration_exhausts() {
        let mut bases = enumerate_bases(1, 1000);
        assert_eq!(bases.layer().len(), 1);
        assert!(bases.advance());
        assert_eq!(bases.depth(), 1);
        assert_eq!(bases.layer()[0].images(), &[w("A")]);
        assert!(!bases.advance());
        assert!(bases.is_exhausted());
        assert!(!bases.capped());
    }

    #[test]
    fn layers_hold_mutually_inverse_pairs() {
        let mut bases = enumerate_bases(2, 100_000);
        bases.advance();
        // depth one: every non-identity generator appears once
        assert_eq!(bases.layer().len(), 19);
        bases.advance();
        for inv in bases.layer().iter().take(50) {
            assert_eq!(inv.source_rank(), 2);
        }
    }

    #[test]
    fn cap_stops_the_enumeration() {
        let mut bases = enumerate_bases(2, 5);
        assert!(bases.advance());
        assert!(bases.capped());
        assert_eq!(bases.layer().len(), 4);
        assert!(!bases.advance());
        assert!(!bases.is_exhausted());
    }
}
