//! Endomorphisms of free groups given by generator images.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::words::{Letter, Word};

/// A walk through fold history: edge indices with traversal direction.
type DirectedPath = Vec<(usize, bool)>;

/// A homomorphism from the free group of rank `source_rank` to the free
/// group of rank `target_rank`, determined by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Endomorphism {
    source_rank: usize,
    target_rank: usize,
    images: Vec<Word>,
}

impl Endomorphism {
    /// Build from generator images. Fails if an image uses a generator
    /// outside the target alphabet.
    pub fn new(images: Vec<Word>, target_rank: usize) -> Result<Self, Error> {
        for image in &images {
            if let Some(max) = image.max_index() {
                if max as usize >= target_rank {
                    return Err(Error::ArityMismatch {
                        expected: target_rank,
                        actual: max as usize + 1,
                    });
                }
            }
        }
        Ok(Endomorphism {
            source_rank: images.len(),
            target_rank,
            images,
        })
    }

    /// The identity endomorphism of the free group of the given rank.
    pub fn identity(rank: usize) -> Self {
        let images = (0..rank)
            .map(|i| Word::from_letter(Letter::positive(i as u32)))
            .collect();
        Endomorphism {
            source_rank: rank,
            target_rank: rank,
            images,
        }
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    /// Images of the source generators, in order.
    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.source_rank == self.target_rank
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, w)| w.letters() == [Letter::positive(i as u32)])
    }

    /// Apply to a word by substituting generator images and reducing.
    pub fn apply(&self, word: &Word) -> Result<Word, Error> {
        let mut result = Word::identity();
        for &letter in word.letters() {
            let index = letter.index() as usize;
            if index >= self.source_rank {
                return Err(Error::ArityMismatch {
                    expected: self.source_rank,
                    actual: index + 1,
                });
            }
            let image = &self.images[index];
            if letter.is_inverse() {
                for &l in image.letters().iter().rev() {
                    result.push(l.inverse());
                }
            } else {
                for &l in image.letters() {
                    result.push(l);
                }
            }
        }
        Ok(result)
    }

    /// Invert an automorphism. Fails with [`Error::NotAutomorphism`] unless
    /// the images form a basis of the target, which for equal ranks is
    /// equivalent to the images generating (free groups are Hopfian).
    ///
    /// The images fold to the bouquet; unwinding that fold step by step
    /// lifts each generator loop back to a closed walk in the flower of the
    /// images, and reading off which petals the walk crosses expresses the
    /// generator as a word in the images.
    pub fn inverse(&self) -> Result<Endomorphism, Error> {
        use crate::automata::fold::{fold_history, RollbackDsu};
        use crate::automata::{flower_raw, stallings};

        let rank = self.source_rank;
        if self.target_rank != rank {
            return Err(Error::NotAutomorphism);
        }
        let graph = stallings(&self.images, rank)?;
        if graph.vertex_count() != 1 || graph.positive_edge_count() != rank {
            return Err(Error::NotAutomorphism);
        }
        if rank == 0 {
            return Ok(Endomorphism::identity(0));
        }
        let seqs: Vec<Vec<Letter>> = self.images.iter().map(|w| w.letters().to_vec()).collect();
        let (flower, origins) = flower_raw(&seqs, rank)?;
        let edges = flower.edges();
        let history = fold_history(&flower);

        // one spanning tree of the flower: drop the middle edge of each petal
        let mut petal_len = vec![0usize; rank];
        for origin in &origins {
            petal_len[origin.petal] = petal_len[origin.petal].max(origin.position + 1);
        }
        let mut petal_of_edge = vec![usize::MAX; edges.len()];
        for (idx, origin) in origins.iter().enumerate() {
            if origin.position == petal_len[origin.petal] / 2 {
                petal_of_edge[idx] = origin.petal;
            }
        }

        // replay the fold so it can be rolled back step by step; the replay
        // is consumed once per generator
        let full_replay = || {
            let mut dsu = RollbackDsu::new(flower.vertex_count());
            for step in &history.steps {
                if let Some((a, b)) = step.merged {
                    dsu.union(a, b);
                }
            }
            dsu
        };
        // surviving loop edge per letter: both endpoints in the basepoint class
        let mut loop_edge = vec![usize::MAX; rank];
        let folded_dsu = full_replay();
        let base = folded_dsu.find(0);
        for (idx, e) in edges.iter().enumerate() {
            if history.alive[idx] && folded_dsu.find(e.src) == base && folded_dsu.find(e.dst) == base
            {
                loop_edge[e.letter as usize] = idx;
            }
        }

        let mut images = Vec::with_capacity(rank);
        for (j, &letter_edge) in loop_edge.iter().enumerate() {
            let mut dsu = full_replay();
            // a path is a list of (edge, traversed forward)
            let mut path = vec![(letter_edge, true)];
            let endpoint = |(e, fwd): (usize, bool), start: bool| {
                if start == fwd {
                    edges[e].src
                } else {
                    edges[e].dst
                }
            };
            for step in history.steps.iter().rev() {
                if step.merged.is_none() {
                    continue;
                }
                dsu.rollback();
                // repair every class discontinuity with a cancelling detour
                // through the two edges this step identified
                let (k, r) = (edges[step.kept], edges[step.removed]);
                let (from_kept, from_removed): (DirectedPath, DirectedPath) =
                    if step.shared_src {
                        // kept.dst and removed.dst were merged
                        (
                            vec![(step.kept, false), (step.removed, true)],
                            vec![(step.removed, false), (step.kept, true)],
                        )
                    } else {
                        (
                            vec![(step.kept, true), (step.removed, false)],
                            vec![(step.removed, true), (step.kept, false)],
                        )
                    };
                let (kept_side, removed_side) = if step.shared_src {
                    (dsu.find(k.dst), dsu.find(r.dst))
                } else {
                    (dsu.find(k.src), dsu.find(r.src))
                };
                let connector = |from: usize, to: usize| -> Vec<(usize, bool)> {
                    if (from, to) == (kept_side, removed_side) {
                        from_kept.clone()
                    } else {
                        assert_eq!((from, to), (removed_side, kept_side), "unexpected gap");
                        from_removed.clone()
                    }
                };
                let mut repaired: Vec<(usize, bool)> = Vec::with_capacity(path.len());
                let mut at = dsu.find(0);
                for &element in &path {
                    let start = dsu.find(endpoint(element, true));
                    if start != at {
                        repaired.extend(connector(at, start));
                    }
                    at = dsu.find(endpoint(element, false));
                    repaired.push(element);
                }
                if at != dsu.find(0) {
                    repaired.extend(connector(at, dsu.find(0)));
                }
                // drop immediate backtracks to keep the walk short
                let mut cleaned: Vec<(usize, bool)> = Vec::with_capacity(repaired.len());
                for element in repaired {
                    if cleaned.last() == Some(&(element.0, !element.1)) {
                        cleaned.pop();
                    } else {
                        cleaned.push(element);
                    }
                }
                path = cleaned;
            }
            // decode crossings of the designated petal edges
            let mut decoded = Word::identity();
            for (e, fwd) in path {
                let petal = petal_of_edge[e];
                if petal != usize::MAX {
                    let along_petal = fwd == origins[e].forward;
                    let x = Letter::positive(petal as u32);
                    decoded.push(if along_petal { x } else { x.inverse() });
                }
            }
            let check = self.apply(&decoded).expect("decoded word fits the source rank");
            assert_eq!(
                check.letters(),
                [Letter::positive(j as u32)],
                "lifted word must map back to the generator"
            );
            images.push(decoded);
        }
        Endomorphism::new(images, rank)
    }

    /// Composition in application order: `self.then(&g)` maps `w` to
    /// `g(self(w))`.
    pub fn then(&self, g: &Endomorphism) -> Result<Endomorphism, Error> {
        if self.target_rank != g.source_rank {
            return Err(Error::ArityMismatch {
                expected: self.target_rank,
                actual: g.source_rank,
            });
        }
        let images = self
            .images
            .iter()
            .map(|w| g.apply(w))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Endomorphism {
            source_rank: self.source_rank,
            target_rank: g.target_rank,
            images,
        })
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, image) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", Letter::positive(i as u32), image)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn endo(images: &[&str], target_rank: usize) -> Endomorphism {
        Endomorphism::new(images.iter().map(|s| w(s)).collect(), target_rank).unwrap()
    }

    #[test]
    fn identity_applies_trivially() {
        let id = Endomorphism::identity(2);
        assert!(id.is_identity());
        assert_eq!(id.apply(&w("aBab")).unwrap(), w("aBab"));
        assert_eq!(id.to_string(), "a->a, b->b");
    }

    #[test]
    fn apply_substitutes_and_reduces() {
        // a -> ab, b -> b; then aB -> ab B = a.
        let phi = endo(&["ab", "b"], 2);
        assert_eq!(phi.apply(&w("aB")).unwrap(), w("a"));
        assert_eq!(phi.apply(&w("A")).unwrap(), w("BA"));
        assert_eq!(phi.apply(&w("1")).unwrap(), Word::identity());
    }

    #[test]
    fn apply_checks_source_rank() {
        let phi = endo(&["ab", "b"], 2);
        assert_eq!(
            phi.apply(&w("c")),
            Err(Error::ArityMismatch { expected: 2, actual: 3 })
        );
    }

    #[test]
    fn new_checks_target_rank() {
        assert_eq!(
            Endomorphism::new(vec![w("ac")], 2),
            Err(Error::ArityMismatch { expected: 2, actual: 3 })
        );
    }

    #[test]
    fn then_applies_left_to_right() {
        let phi = endo(&["ab", "b"], 2);
        let psi = endo(&["a", "Ba"], 2);
        // (a)(phi then psi) = psi(ab) = a Ba = aBa.
        let composite = phi.then(&psi).unwrap();
        assert_eq!(composite.images()[0], w("aBa"));
        assert_eq!(composite.images()[1], w("Ba"));
        let mismatch = endo(&["a"], 1).then(&endo(&["ab", "b"], 2));
        assert_eq!(mismatch, Err(Error::ArityMismatch { expected: 1, actual: 2 }));
    }

    #[test]
    fn inverse_of_transvection() {
        let phi = endo(&["ab", "b"], 2);
        let psi = phi.inverse().unwrap();
        assert_eq!(psi.images(), &[w("aB"), w("b")]);
        assert!(phi.then(&psi).unwrap().is_identity());
        assert!(psi.then(&phi).unwrap().is_identity());
    }

    #[test]
    fn inverse_of_conjugating_basis() {
        // a -> bab^-1, b -> b is an automorphism despite the folded flower
        // carrying a basepoint tail
        let phi = endo(&["baB", "b"], 2);
        let psi = phi.inverse().unwrap();
        assert_eq!(psi.images(), &[w("Bab"), w("b")]);
        assert!(phi.then(&psi).unwrap().is_identity());
        assert!(psi.then(&phi).unwrap().is_identity());
    }

    #[test]
    fn inverse_rejects_non_automorphisms() {
        assert_eq!(endo(&["ab", "ba"], 2).inverse(), Err(Error::NotAutomorphism));
        assert_eq!(endo(&["aa"], 1).inverse(), Err(Error::NotAutomorphism));
        assert_eq!(endo(&["a"], 2).inverse(), Err(Error::NotAutomorphism));
        assert!(endo(&["a"], 1).inverse().unwrap().is_identity());
    }

    #[test]
    fn inverse_round_trips_longer_products() {
        for images in [
            vec!["ab", "aba"],
            vec!["aBa", "Ba"],
            vec!["abc", "bc", "c"],
            vec!["ab", "c", "cb"],
        ] {
            let rank = images.len();
            let phi = endo(&images, rank);
            let psi = phi.inverse().unwrap();
            assert!(phi.then(&psi).unwrap().is_identity(), "{phi}");
            assert!(psi.then(&phi).unwrap().is_identity(), "{phi}");
        }
    }

    #[test]
    fn serde_round_trip() {
        let phi = endo(&["ab", "B"], 2);
        let json = serde_json::to_string(&phi).unwrap();
        assert_eq!(serde_json::from_str::<Endomorphism>(&json).unwrap(), phi);
    }
}
