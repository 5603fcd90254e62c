//! Morphisms of pointed automata.
//!
//! A morphism maps vertices to vertices and positive edges to positive
//! edges, preserving labels, incidences, and the basepoint. Between
//! Stallings automata a morphism exists iff the source subgroup is
//! contained in the target subgroup, and it is then unique.

use serde::Serialize;

use super::{Automaton, NO_VERTEX};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Morphism {
    source: Automaton,
    target: Automaton,
    vertex_map: Vec<usize>,
    edge_map: Vec<usize>,
}

impl Morphism {
    /// Wrap and validate explicit maps.
    pub fn new(
        source: Automaton,
        target: Automaton,
        vertex_map: Vec<usize>,
        edge_map: Vec<usize>,
    ) -> Result<Self, Error> {
        let ok = source.alphabet_size() == target.alphabet_size()
            && vertex_map.len() == source.vertex_count()
            && edge_map.len() == source.edges().len()
            && vertex_map.iter().all(|&v| v < target.vertex_count())
            && edge_map.iter().all(|&e| e < target.edges().len())
            && vertex_map[source.basepoint()] == target.basepoint()
            && source.edges().iter().zip(&edge_map).all(|(e, &te)| {
                let t = target.edges()[te];
                t.src == vertex_map[e.src] && t.letter == e.letter && t.dst == vertex_map[e.dst]
            });
        if !ok {
            return Err(Error::InvalidMorphism);
        }
        Ok(Morphism { source, target, vertex_map, edge_map })
    }

    /// The unique basepoint-preserving morphism between two deterministic
    /// automata, if one exists.
    pub fn find(source: &Automaton, target: &Automaton) -> Option<Morphism> {
        let (vertex_map, edge_map) = Self::find_maps(source, target)?;
        Some(Morphism {
            source: source.clone(),
            target: target.clone(),
            vertex_map,
            edge_map,
        })
    }

    /// The maps of [`find`](Self::find) without cloning the automata;
    /// used in search inner loops.
    pub(crate) fn find_maps(
        source: &Automaton,
        target: &Automaton,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        if source.alphabet_size() != target.alphabet_size() {
            return None;
        }
        let tables = target.tables();
        let mut adj = vec![Vec::new(); source.vertex_count()];
        for (i, e) in source.edges().iter().enumerate() {
            adj[e.src].push((i, true));
            adj[e.dst].push((i, false));
        }
        let mut vertex_map = vec![NO_VERTEX; source.vertex_count()];
        let mut edge_map = vec![NO_VERTEX; source.edges().len()];
        vertex_map[source.basepoint()] = target.basepoint();
        let mut queue = vec![source.basepoint()];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for &(ei, forward) in &adj[v] {
                let e = source.edges()[ei];
                let letter = if forward {
                    crate::words::Letter::positive(e.letter)
                } else {
                    crate::words::Letter::negative(e.letter)
                };
                let w = if forward { e.dst } else { e.src };
                let (tw, te) = tables.step(vertex_map[v], letter)?;
                if vertex_map[w] == NO_VERTEX {
                    vertex_map[w] = tw;
                    queue.push(w);
                } else if vertex_map[w] != tw {
                    return None;
                }
                edge_map[ei] = te;
            }
        }
        // a connected source is fully mapped
        debug_assert!(vertex_map.iter().all(|&v| v != NO_VERTEX));
        debug_assert!(edge_map.iter().all(|&e| e != NO_VERTEX));
        Some((vertex_map, edge_map))
    }

    pub fn source(&self) -> &Automaton {
        &self.source
    }

    pub fn target(&self) -> &Automaton {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn edge_map(&self) -> &[usize] {
        &self.edge_map
    }

    /// Whether every target vertex and every target edge is hit.
    pub fn is_onto(&self) -> bool {
        onto(&self.vertex_map, self.target.vertex_count())
            && onto(&self.edge_map, self.target.edges().len())
    }

    /// Whether the vertex and edge maps are both injective.
    pub fn is_injective(&self) -> bool {
        injective(&self.vertex_map, self.target.vertex_count())
            && injective(&self.edge_map, self.target.edges().len())
    }

    /// The induced morphism between the wedges of the sources and of the
    /// targets, following the vertex numbering of [`Automaton::wedge`].
    pub fn wedge(&self, other: &Morphism) -> Morphism {
        let shift = |base: &Automaton, glued: &Automaton, v: usize| {
            if v == glued.basepoint() {
                base.basepoint()
            } else if v < glued.basepoint() {
                base.vertex_count() + v
            } else {
                base.vertex_count() + v - 1
            }
        };
        let mut vertex_map = self.vertex_map.clone();
        for (v, &tv) in other.vertex_map.iter().enumerate() {
            if v != other.source.basepoint() {
                vertex_map.push(shift(&self.target, &other.target, tv));
            }
        }
        // the wedge keeps the base automaton's vertices in place and
        // appends the glued automaton's non-basepoint vertices in order,
        // so pushing in vertex order lands each image at its shifted index
        let mut edge_map = self.edge_map.clone();
        edge_map.extend(other.edge_map.iter().map(|&e| self.target.edges().len() + e));
        let source = self.source.wedge(&other.source);
        let target = self.target.wedge(&other.target);
        Morphism::new(source, target, vertex_map, edge_map)
            .expect("wedging preserves the morphism")
    }
}

pub(crate) fn onto(map: &[usize], size: usize) -> bool {
    let mut hit = vec![false; size];
    for &v in map {
        hit[v] = true;
    }
    hit.into_iter().all(|h| h)
}

pub(crate) fn injective(map: &[usize], size: usize) -> bool {
    let mut hit = vec![false; size];
    for &v in map {
        if hit[v] {
            return false;
        }
        hit[v] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::stallings;
    use crate::words::Word;

    fn g(list: &[&str], rank: usize) -> Automaton {
        let words: Vec<Word> = list.iter().map(|s| s.parse().unwrap()).collect();
        stallings(&words, rank).unwrap()
    }

    #[test]
    fn morphism_exists_iff_contained() {
        let h = g(&["aabb"], 2);
        let k = g(&["aa", "bb", "ab"], 2);
        let m = Morphism::find(&h, &k).unwrap();
        assert_eq!(m.vertex_map()[h.basepoint()], k.basepoint());
        assert!(Morphism::find(&k, &h).is_none());
    }

    #[test]
    fn identity_morphism_is_iso() {
        let h = g(&["aabb"], 2);
        let m = Morphism::find(&h, &h).unwrap();
        assert!(m.is_onto());
        assert!(m.is_injective());
    }

    #[test]
    fn inclusion_into_bouquet_is_onto_but_not_injective() {
        let h = g(&["aa", "ab"], 2);
        let f2 = Automaton::bouquet(2);
        let m = Morphism::find(&h, &f2).unwrap();
        assert!(m.is_onto());
        assert!(!m.is_injective());
    }

    #[test]
    fn subautomaton_inclusion_is_injective() {
        let h = g(&["a"], 2);
        let f2 = Automaton::bouquet(2);
        let m = Morphism::find(&h, &f2).unwrap();
        assert!(m.is_injective());
        assert!(!m.is_onto());
    }

    #[test]
    fn wedge_of_morphisms_validates() {
        let m1 = Morphism::find(&g(&["aabb"], 2), &g(&["aa", "bb", "ab"], 2)).unwrap();
        let m2 = Morphism::find(&g(&["ab"], 2), &Automaton::bouquet(2)).unwrap();
        let w = m1.wedge(&m2);
        assert_eq!(w.source(), &m1.source().wedge(m2.source()));
        assert_eq!(w.target(), &m1.target().wedge(m2.target()));
        assert_eq!(w.vertex_map()[w.source().basepoint()], w.target().basepoint());
    }

    #[test]
    fn new_rejects_bad_maps() {
        let h = g(&["a"], 2);
        let f2 = Automaton::bouquet(2);
        assert_eq!(
            Morphism::new(h.clone(), f2.clone(), vec![0], vec![1]),
            Err(Error::InvalidMorphism)
        );
        assert!(Morphism::new(h, f2, vec![0], vec![0]).is_ok());
    }
}
