//! Basis searches for onto and injective extension properties.
//!
//! An extension H of K determines a morphism between their Stallings
//! automata in every free basis of the ambient group, and the properties
//! checked here quantify over all such bases: a single basis in which the
//! morphism fails to be onto (or injective) refutes the property for good,
//! while certifying it positively needs either an algebraicity argument or
//! an exhausted basis enumeration. Everything else ends as unknown within
//! the stated budgets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automata::morphism::{injective, onto};
use crate::automata::{stallings, Automaton, Morphism};
use crate::error::Error;
use crate::words::whitehead::BasisEnumerator;
use crate::words::{enumerate_bases, Endomorphism, Letter, Word};

use super::{is_algebraic, Subgroup};

/// Resource limits for the undecidable-in-practice searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// How many layers of Whitehead products to enumerate per alphabet.
    pub depth: usize,
    /// How many letters beyond the ambient rank the fully onto check adds.
    pub extra_letters: usize,
    /// Largest admissible Bell number when a fringe must be enumerated.
    pub bell_cap: u64,
    /// Cumulative cap on distinct bases per enumerated alphabet.
    pub max_bases: u64,
}

impl Default for Budgets {
    fn default() -> Budgets {
        Budgets { depth: 4, extra_letters: 1, bell_cap: 1_000_000, max_bases: 600_000 }
    }
}

/// The three-valued answer of a budgeted search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// A refuting basis was found; the property definitely fails.
    No,
    /// The property holds for every basis, with proof.
    YesCertified,
    /// Neither refuted nor certified within the budgets.
    Unknown,
}

/// Outcome of a check together with the search effort and, for a refuted
/// property, the basis witnessing the failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    /// Images of the ambient generators under the witnessing basis change.
    pub witness_images: Option<Vec<Word>>,
    /// Deepest Whitehead layer the search looked at.
    pub depth: usize,
    /// Extra letters in play, for the fully onto check only.
    pub extra_letters: Option<usize>,
}

impl Verdict {
    fn no(witness: Vec<Word>, depth: usize, extra_letters: Option<usize>) -> Verdict {
        Verdict { outcome: Outcome::No, witness_images: Some(witness), depth, extra_letters }
    }

    fn certified(depth: usize, extra_letters: Option<usize>) -> Verdict {
        Verdict { outcome: Outcome::YesCertified, witness_images: None, depth, extra_letters }
    }

    fn unknown(depth: usize, extra_letters: Option<usize>) -> Verdict {
        Verdict { outcome: Outcome::Unknown, witness_images: None, depth, extra_letters }
    }
}

/// Whether the morphism from the automaton of `h` to that of `k` is onto in
/// every free basis of the ambient group. Refutations carry the witnessing
/// basis; algebraic extensions are certified without searching.
pub fn check_onto(h: &Subgroup, k: &Subgroup, budgets: Budgets) -> Result<Verdict, Error> {
    let theta = Morphism::find(h.graph(), k.graph()).ok_or(Error::NotASubgroup)?;
    if h == k {
        return Ok(Verdict::certified(0, None));
    }
    if !theta.is_onto() {
        return Ok(Verdict::no(standard_basis(k.ambient_rank()), 0, None));
    }
    match is_algebraic(h, k, budgets.bell_cap) {
        Ok(true) => return Ok(Verdict::certified(0, None)),
        Ok(false) => {}
        // an oversized fringe only blocks the certificate, not the search
        Err(Error::PartitionBudgetExceeded { .. }) => {}
        Err(other) => return Err(other),
    }
    layered_search(h, k, k.ambient_rank(), budgets, refutes_onto, None)
}

/// Whether the morphism is injective in every free basis of the ambient
/// group.
pub fn check_into(h: &Subgroup, k: &Subgroup, budgets: Budgets) -> Result<Verdict, Error> {
    let theta = Morphism::find(h.graph(), k.graph()).ok_or(Error::NotASubgroup)?;
    if h == k {
        return Ok(Verdict::certified(0, None));
    }
    if !theta.is_injective() {
        return Ok(Verdict::no(standard_basis(k.ambient_rank()), 0, None));
    }
    layered_search(h, k, k.ambient_rank(), budgets, refutes_into, None)
}

/// Whether the morphism stays onto in every free basis of every free group
/// obtained by adjoining fresh letters to the ambient group. Only
/// refutations and algebraicity are conclusive: the fresh letter count is
/// unbounded, so exhausting the budgeted alphabets certifies nothing.
pub fn check_fully_onto(h: &Subgroup, k: &Subgroup, budgets: Budgets) -> Result<Verdict, Error> {
    let theta = Morphism::find(h.graph(), k.graph()).ok_or(Error::NotASubgroup)?;
    let rank = k.ambient_rank();
    if h == k {
        return Ok(Verdict::certified(0, Some(0)));
    }
    if !theta.is_onto() {
        return Ok(Verdict::no(standard_basis(rank), 0, Some(0)));
    }
    match is_algebraic(h, k, budgets.bell_cap) {
        Ok(true) => return Ok(Verdict::certified(0, Some(0))),
        Ok(false) => {}
        Err(Error::PartitionBudgetExceeded { .. }) => {}
        Err(other) => return Err(other),
    }
    let hgens = h.basis();
    let kgens = k.basis();
    let mut alphabets: Vec<Option<BasisEnumerator>> = (0..=budgets.extra_letters)
        .map(|extra| Some(enumerate_bases(rank + extra, budgets.max_bases)))
        .collect();
    // interleave the alphabets so small witnesses win over deep ones
    for _ in 0..budgets.depth {
        for (extra, slot) in alphabets.iter_mut().enumerate() {
            let Some(bases) = slot else { continue };
            if !bases.advance() {
                *slot = None;
                continue;
            }
            if let Some(psi) = scan(bases.layer(), &hgens, &kgens, rank + extra, refutes_onto) {
                return Ok(Verdict::no(witness_of(psi), bases.depth(), Some(extra)));
            }
        }
    }
    Ok(Verdict::unknown(budgets.depth, Some(budgets.extra_letters)))
}

/// Layered scan over bases of the fixed ambient alphabet; shared by the
/// onto and into checks, which differ only in the refuted property.
fn layered_search(
    h: &Subgroup,
    k: &Subgroup,
    alphabet: usize,
    budgets: Budgets,
    refutes: fn(&Automaton, &Automaton) -> bool,
    extra_letters: Option<usize>,
) -> Result<Verdict, Error> {
    let hgens = h.basis();
    let kgens = k.basis();
    let mut bases = enumerate_bases(alphabet, budgets.max_bases);
    for _ in 0..budgets.depth {
        if !bases.advance() {
            break;
        }
        if let Some(psi) = scan(bases.layer(), &hgens, &kgens, alphabet, refutes) {
            return Ok(Verdict::no(witness_of(psi), bases.depth(), extra_letters));
        }
    }
    if bases.is_exhausted() {
        Ok(Verdict::certified(bases.depth(), extra_letters))
    } else {
        Ok(Verdict::unknown(bases.depth(), extra_letters))
    }
}

/// First basis in the layer, in layer order, whose rewritten automata
/// refute the property.
fn scan<'a>(
    layer: &'a [Endomorphism],
    hgens: &[Word],
    kgens: &[Word],
    alphabet: usize,
    refutes: fn(&Automaton, &Automaton) -> bool,
) -> Option<&'a Endomorphism> {
    layer.par_iter().find_first(|psi| {
        let gh = graph_in(psi, hgens, alphabet);
        let gk = graph_in(psi, kgens, alphabet);
        refutes(&gh, &gk)
    })
}

/// Stallings automaton of the subgroup generated by the images of the
/// given words under the inverse substitution of the basis.
fn graph_in(psi: &Endomorphism, gens: &[Word], alphabet: usize) -> Automaton {
    let images: Vec<Word> =
        gens.iter().map(|w| psi.apply(w).expect("generators fit the alphabet")).collect();
    stallings(&images, alphabet).expect("images fit the alphabet")
}

fn refutes_onto(gh: &Automaton, gk: &Automaton) -> bool {
    let (vmap, emap) =
        Morphism::find_maps(gh, gk).expect("containment is independent of the basis");
    !(onto(&vmap, gk.vertex_count()) && onto(&emap, gk.edges().len()))
}

fn refutes_into(gh: &Automaton, gk: &Automaton) -> bool {
    let (vmap, emap) =
        Morphism::find_maps(gh, gk).expect("containment is independent of the basis");
    !(injective(&vmap, gk.vertex_count()) && injective(&emap, gk.edges().len()))
}

/// The layers hold inverse substitutions; the reported witness is the
/// basis itself, the images of the generators under the automorphism.
fn witness_of(psi: &Endomorphism) -> Vec<Word> {
    psi.inverse().expect("enumerated bases are automorphisms").images().to_vec()
}

fn standard_basis(rank: usize) -> Vec<Word> {
    (0..rank as u32).map(|i| Word::from_letter(Letter::positive(i))).collect()
}

/// Whether the morphism between the automata of `h` and `k` rewritten in
/// the given basis is onto. The basis may belong to a free group of rank
/// larger than the ambient one.
pub fn onto_in_basis(h: &Subgroup, k: &Subgroup, basis: &Endomorphism) -> Result<bool, Error> {
    let (gh, gk) = pair_in_basis(h, k, basis)?;
    Ok(!refutes_onto(&gh, &gk))
}

/// Whether the morphism between the automata of `h` and `k` rewritten in
/// the given basis is injective.
pub fn injective_in_basis(h: &Subgroup, k: &Subgroup, basis: &Endomorphism) -> Result<bool, Error> {
    let (gh, gk) = pair_in_basis(h, k, basis)?;
    Ok(!refutes_into(&gh, &gk))
}

fn pair_in_basis(
    h: &Subgroup,
    k: &Subgroup,
    basis: &Endomorphism,
) -> Result<(Automaton, Automaton), Error> {
    let gh = h.in_basis(basis)?;
    let gk = k.in_basis(basis)?;
    if Morphism::find_maps(&gh, &gk).is_none() {
        return Err(Error::NotASubgroup);
    }
    Ok((gh, gk))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn sub(list: &[&str], rank: usize) -> Subgroup {
        Subgroup::new(list.iter().map(|s| w(s)).collect(), rank).unwrap()
    }

    fn basis(list: &[&str], rank: usize) -> Endomorphism {
        Endomorphism::new(list.iter().map(|s| w(s)).collect(), rank).unwrap()
    }

    #[test]
    fn equal_subgroups_certify_every_check() {
        let h = sub(&["ab", "ba"], 2);
        let b = Budgets::default();
        assert_eq!(check_onto(&h, &h, b).unwrap().outcome, Outcome::YesCertified);
        assert_eq!(check_into(&h, &h, b).unwrap().outcome, Outcome::YesCertified);
        assert_eq!(check_fully_onto(&h, &h, b).unwrap().outcome, Outcome::YesCertified);
    }

    #[test]
    fn free_factors_fail_onto_in_the_standard_basis() {
        let verdict = check_onto(&sub(&["a"], 2), &sub(&["a", "b"], 2), Budgets::default()).unwrap();
        assert_eq!(verdict.outcome, Outcome::No);
        assert_eq!(verdict.depth, 0);
        assert_eq!(verdict.witness_images, Some(vec![w("a"), w("b")]));
    }

    #[test]
    fn algebraic_extensions_certify_onto() {
        let verdict = check_onto(&sub(&["aa"], 1), &sub(&["a"], 1), Budgets::default()).unwrap();
        assert_eq!(verdict.outcome, Outcome::YesCertified);
        let verdict =
            check_fully_onto(&sub(&["aa"], 2), &sub(&["a"], 2), Budgets::default()).unwrap();
        assert_eq!(verdict.outcome, Outcome::YesCertified);
    }

    #[test]
    fn primitives_are_refuted_one_layer_deep() {
        let h = sub(&["ab"], 2);
        let whole = sub(&["a", "b"], 2);
        let verdict = check_onto(&h, &whole, Budgets::default()).unwrap();
        assert_eq!(verdict.outcome, Outcome::No);
        assert_eq!(verdict.depth, 1);
        let witness = verdict.witness_images.unwrap();
        let change = Endomorphism::new(witness, 2).unwrap();
        assert!(!onto_in_basis(&h, &whole, &change).unwrap());
        // the identity basis does not refute, the witness basis does
        assert!(onto_in_basis(&h, &whole, &Endomorphism::identity(2)).unwrap());
    }

    #[test]
    fn depth_zero_budgets_leave_primitives_unknown() {
        let budgets = Budgets { depth: 0, ..Budgets::default() };
        let verdict = check_onto(&sub(&["ab"], 2), &sub(&["a", "b"], 2), budgets).unwrap();
        assert_eq!(verdict.outcome, Outcome::Unknown);
        assert_eq!(verdict.depth, 0);
    }

    #[test]
    fn into_refutes_index_two_at_the_identity() {
        let verdict = check_into(&sub(&["aa"], 1), &sub(&["a"], 1), Budgets::default()).unwrap();
        assert_eq!(verdict.outcome, Outcome::No);
        assert_eq!(verdict.depth, 0);
        assert_eq!(verdict.witness_images, Some(vec![w("a")]));
    }

    #[test]
    fn into_certifies_by_exhaustion_in_rank_one() {
        let verdict = check_into(&sub(&[], 1), &sub(&["a"], 1), Budgets::default()).unwrap();
        assert_eq!(verdict.outcome, Outcome::YesCertified);
    }

    #[test]
    fn fully_onto_stays_unknown_without_a_certificate() {
        // a square over its root is never refuted (the rewritten automaton
        // always wraps twice around the root's cycle), and a tiny Bell cap
        // blocks the algebraicity certificate
        let h = sub(&["aa"], 2);
        let k = sub(&["a"], 2);
        let budgets = Budgets { depth: 2, bell_cap: 1, ..Budgets::default() };
        let verdict = check_fully_onto(&h, &k, budgets).unwrap();
        assert_eq!(verdict.outcome, Outcome::Unknown);
        assert_eq!(verdict.depth, 2);
        assert_eq!(verdict.extra_letters, Some(1));
    }

    #[test]
    fn non_subgroups_are_an_error() {
        let h = sub(&["a"], 2);
        let k = sub(&["b"], 2);
        let b = Budgets::default();
        assert_eq!(check_onto(&h, &k, b), Err(Error::NotASubgroup));
        assert_eq!(check_into(&h, &k, b), Err(Error::NotASubgroup));
        assert_eq!(check_fully_onto(&h, &k, b), Err(Error::NotASubgroup));
        assert_eq!(onto_in_basis(&h, &k, &Endomorphism::identity(2)), Err(Error::NotASubgroup));
    }

    #[test]
    fn in_basis_probes_match_the_morphism() {
        let h = sub(&["ab"], 2);
        let whole = sub(&["a", "b"], 2);
        assert!(onto_in_basis(&h, &whole, &Endomorphism::identity(2)).unwrap());
        assert!(!onto_in_basis(&h, &whole, &basis(&["ab", "b"], 2)).unwrap());
        assert!(injective_in_basis(&sub(&["a"], 2), &whole, &Endomorphism::identity(2)).unwrap());
        assert!(!injective_in_basis(&sub(&["aa"], 2), &sub(&["a"], 2), &Endomorphism::identity(2))
            .unwrap());
        // probing inside a bigger free group is allowed
        assert!(onto_in_basis(&h, &whole, &Endomorphism::identity(3)).unwrap());
        assert_eq!(
            onto_in_basis(&h, &whole, &Endomorphism::identity(1)),
            Err(Error::ArityMismatch { expected: 2, actual: 1 })
        );
    }
}
