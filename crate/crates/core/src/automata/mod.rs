//! Involutive automata over a free group alphabet.
//!
//! An automaton is a finite graph with a basepoint whose edges are labeled
//! by generators. Only positively labeled edges are stored; reading an edge
//! against its direction reads the inverse letter. A subgroup H of the free
//! group corresponds to its Stallings automaton: the unique deterministic,
//! trim (no degree-one vertices besides possibly the basepoint), connected
//! automaton whose closed basepoint walks spell exactly the elements of H.
//! [`stallings`] computes it by folding a flower of generator loops, and
//! [`Automaton::canonicalize`] renumbers vertices in breadth-first order so
//! that equal subgroups yield byte-identical values.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::Error;
use crate::words::{Letter, Word};

pub mod fold;
pub mod io;
pub mod morphism;
pub mod partition;

pub use fold::fold;
pub use morphism::Morphism;
pub use partition::{bell, partitions, Partition, PartitionIter};

pub(crate) const NO_VERTEX: usize = usize::MAX;

/// A positive edge `src --letter--> dst`; the inverse edge is implicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: usize,
    pub letter: u32,
    pub dst: usize,
}

/// Where a flower edge came from: petal index, position along the petal,
/// and whether the stored positive edge points along the petal.
#[derive(Debug, Clone, Copy)]
pub(crate) struct EdgeOrigin {
    pub petal: usize,
    pub position: usize,
    pub forward: bool,
}

/// An involutive automaton with `alphabet_size` letter pairs.
///
/// Vertices are `0..vertex_count`; only positive edges are stored. The
/// struct derives equality and hashing on the raw data, so canonicalized
/// automata compare equal exactly when they present the same subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automaton {
    alphabet_size: usize,
    vertex_count: usize,
    basepoint: usize,
    edges: Vec<Edge>,
}

impl PartialOrd for Automaton {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Automaton {
    /// Size-first order on canonical forms: vertex count, then edge count,
    /// then the edge lists themselves. Used to sort fringes deterministically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertex_count
            .cmp(&other.vertex_count)
            .then_with(|| self.edges.len().cmp(&other.edges.len()))
            .then_with(|| self.edges.cmp(&other.edges))
            .then_with(|| self.alphabet_size.cmp(&other.alphabet_size))
            .then_with(|| self.basepoint.cmp(&other.basepoint))
    }
}

impl Automaton {
    /// Build an automaton from raw parts.
    ///
    /// Panics if the basepoint, an edge endpoint, or an edge letter is out
    /// of range; no determinism or connectivity is required.
    pub fn new(
        alphabet_size: usize,
        vertex_count: usize,
        basepoint: usize,
        edges: Vec<Edge>,
    ) -> Self {
        assert!(vertex_count > 0, "automaton needs at least the basepoint");
        assert!(basepoint < vertex_count, "basepoint out of range");
        for e in &edges {
            assert!(e.src < vertex_count && e.dst < vertex_count, "edge endpoint out of range");
            assert!((e.letter as usize) < alphabet_size, "edge letter out of range");
        }
        Automaton { alphabet_size, vertex_count, basepoint, edges }
    }

    /// The bouquet with one loop per generator: the automaton of the whole
    /// free group of the given rank.
    pub fn bouquet(rank: usize) -> Self {
        let edges = (0..rank as u32).map(|l| Edge { src: 0, letter: l, dst: 0 }).collect();
        Automaton::new(rank, 1, 0, edges)
    }

    /// The flower automaton: one petal spelling each generator word, all
    /// glued at the basepoint. Identity generators contribute nothing.
    pub fn flower(generators: &[Word], alphabet_size: usize) -> Result<Self, Error> {
        let seqs: Vec<Vec<Letter>> = generators.iter().map(|w| w.letters().to_vec()).collect();
        flower_raw(&seqs, alphabet_size).map(|(a, _)| a)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn positive_edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Rank of the fundamental group: positive edges minus vertices plus one.
    /// Meaningful for connected automata.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    /// Whether no two positive edges share a source-and-letter or a
    /// destination-and-letter.
    pub fn is_deterministic(&self) -> bool {
        self.try_tables().is_some()
    }

    pub(crate) fn try_tables(&self) -> Option<Tables> {
        Tables::build(self)
    }

    pub(crate) fn tables(&self) -> Tables {
        self.try_tables().expect("automaton is not deterministic")
    }

    /// Whether the reduced word labels a closed walk at the basepoint, i.e.
    /// for a Stallings automaton, whether the word lies in the subgroup.
    pub fn accepts(&self, word: &Word) -> bool {
        let tables = self.tables();
        let mut v = self.basepoint;
        for &letter in word.letters() {
            match tables.step(v, letter) {
                Some((next, _)) => v = next,
                None => return false,
            }
        }
        v == self.basepoint
    }

    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertex_count];
        for e in &self.edges {
            deg[e.src] += 1;
            deg[e.dst] += 1;
        }
        deg
    }

    fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        // per vertex: (edge index, other endpoint); loops appear twice
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.src].push((i, e.dst));
            adj[e.dst].push((i, e.src));
        }
        adj
    }

    /// Iteratively remove degree-one vertices other than the basepoint,
    /// together with their hanging edges.
    pub fn trim_core(&self) -> Automaton {
        let (vertex_alive, edge_alive) = self.peel(true);
        self.compact(&vertex_alive, &edge_alive)
    }

    /// Vertex and edge counts of the cyclic core: degree-one peeling with
    /// no basepoint protection. A connected automaton peels down to either
    /// its topological core or a single leftover vertex.
    pub(crate) fn cyclic_core_size(&self) -> (usize, usize) {
        let (vertex_alive, edge_alive) = self.peel(false);
        (
            vertex_alive.iter().filter(|&&a| a).count(),
            edge_alive.iter().filter(|&&a| a).count(),
        )
    }

    fn peel(&self, protect_basepoint: bool) -> (Vec<bool>, Vec<bool>) {
        let mut deg = self.degrees();
        let adj = self.incidence();
        let mut vertex_alive = vec![true; self.vertex_count];
        let mut edge_alive = vec![true; self.edges.len()];
        let protected = |v: usize| protect_basepoint && v == self.basepoint;
        let mut stack: Vec<usize> =
            (0..self.vertex_count).filter(|&v| deg[v] == 1 && !protected(v)).collect();
        while let Some(v) = stack.pop() {
            if !vertex_alive[v] || deg[v] != 1 {
                continue;
            }
            vertex_alive[v] = false;
            for &(ei, w) in &adj[v] {
                if edge_alive[ei] {
                    edge_alive[ei] = false;
                    deg[v] -= 1;
                    deg[w] -= 1;
                    if vertex_alive[w] && deg[w] == 1 && !protected(w) {
                        stack.push(w);
                    }
                    break;
                }
            }
        }
        (vertex_alive, edge_alive)
    }

    fn compact(&self, vertex_alive: &[bool], edge_alive: &[bool]) -> Automaton {
        let mut remap = vec![NO_VERTEX; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            if vertex_alive[v] {
                remap[v] = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .zip(edge_alive)
            .filter(|(_, &alive)| alive)
            .map(|(e, _)| Edge { src: remap[e.src], letter: e.letter, dst: remap[e.dst] })
            .collect();
        Automaton::new(self.alphabet_size, next, remap[self.basepoint], edges)
    }

    /// Renumber vertices in canonical breadth-first order from the
    /// basepoint (per vertex: letters ascending, positive step before
    /// inverse step), sort the edges, and drop anything unreachable.
    /// Requires a deterministic automaton.
    pub fn canonicalize(&self) -> Automaton {
        self.canonicalize_with_maps().0
    }

    /// Canonicalize and also report the vertex and edge renumbering
    /// (`NO_VERTEX` marks dropped items).
    pub(crate) fn canonicalize_with_maps(&self) -> (Automaton, Vec<usize>, Vec<usize>) {
        let tables = self.tables();
        let mut order = vec![NO_VERTEX; self.vertex_count];
        order[self.basepoint] = 0;
        let mut queue = vec![self.basepoint];
        let mut head = 0;
        let mut next = 1;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for l in 0..self.alphabet_size as u32 {
                for letter in [Letter::positive(l), Letter::negative(l)] {
                    if let Some((w, _)) = tables.step(v, letter) {
                        if order[w] == NO_VERTEX {
                            order[w] = next;
                            next += 1;
                            queue.push(w);
                        }
                    }
                }
            }
        }
        let mut renumbered: Vec<(Edge, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| order[e.src] != NO_VERTEX)
            .map(|(i, e)| (Edge { src: order[e.src], letter: e.letter, dst: order[e.dst] }, i))
            .collect();
        renumbered.sort();
        let mut edge_map = vec![NO_VERTEX; self.edges.len()];
        for (new_idx, &(_, old_idx)) in renumbered.iter().enumerate() {
            edge_map[old_idx] = new_idx;
        }
        let edges = renumbered.into_iter().map(|(e, _)| e).collect();
        (Automaton::new(self.alphabet_size, next, 0, edges), order, edge_map)
    }

    /// Identify vertices according to the partition, then fold, trim, and
    /// canonicalize: the Stallings automaton of the quotient overgroup.
    pub fn quotient(&self, partition: &Partition) -> Result<Automaton, Error> {
        if partition.len() != self.vertex_count {
            return Err(Error::ArityMismatch {
                expected: self.vertex_count,
                actual: partition.len(),
            });
        }
        let assignment = partition.assignment();
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { src: assignment[e.src], letter: e.letter, dst: assignment[e.dst] })
            .collect();
        let relabeled =
            Automaton::new(self.alphabet_size, partition.blocks(), assignment[self.basepoint], edges);
        let (folded, _) = fold::fold(&relabeled);
        Ok(folded.trim_core().canonicalize())
    }

    /// Disjoint union glued at the basepoints. The result is generally not
    /// deterministic; fold it to obtain the automaton of the join.
    pub fn wedge(&self, other: &Automaton) -> Automaton {
        assert_eq!(self.alphabet_size, other.alphabet_size, "wedge needs a common alphabet");
        let shift = |v: usize| {
            if v == other.basepoint {
                self.basepoint
            } else if v < other.basepoint {
                self.vertex_count + v
            } else {
                self.vertex_count + v - 1
            }
        };
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            src: shift(e.src),
            letter: e.letter,
            dst: shift(e.dst),
        }));
        Automaton::new(
            self.alphabet_size,
            self.vertex_count + other.vertex_count - 1,
            self.basepoint,
            edges,
        )
    }

    /// The Stallings automaton of the intersection of the two subgroups,
    /// via the basepoint component of the labeled product.
    pub fn intersect(&self, other: &Automaton) -> Automaton {
        assert_eq!(self.alphabet_size, other.alphabet_size, "intersect needs a common alphabet");
        let (ta, tb) = (self.tables(), other.tables());
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut states = vec![(self.basepoint, other.basepoint)];
        index.insert((self.basepoint, other.basepoint), 0);
        let mut edges = Vec::new();
        let mut head = 0;
        while head < states.len() {
            let (u, v) = states[head];
            let src = head;
            head += 1;
            for l in 0..self.alphabet_size as u32 {
                for letter in [Letter::positive(l), Letter::negative(l)] {
                    if let (Some((u2, _)), Some((v2, _))) = (ta.step(u, letter), tb.step(v, letter))
                    {
                        let dst = *index.entry((u2, v2)).or_insert_with(|| {
                            states.push((u2, v2));
                            states.len() - 1
                        });
                        if !letter.is_inverse() {
                            edges.push(Edge { src, letter: l, dst });
                        }
                    }
                }
            }
        }
        Automaton::new(self.alphabet_size, states.len(), 0, edges)
            .trim_core()
            .canonicalize()
    }

    fn spanning(&self) -> Spanning {
        let tables = self.tables();
        let mut labels: Vec<Option<Word>> = vec![None; self.vertex_count];
        labels[self.basepoint] = Some(Word::identity());
        let mut tree_edge = vec![false; self.edges.len()];
        let mut queue = vec![self.basepoint];
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            for l in 0..self.alphabet_size as u32 {
                for letter in [Letter::positive(l), Letter::negative(l)] {
                    if let Some((w, ei)) = tables.step(v, letter) {
                        if labels[w].is_none() {
                            let mut label = labels[v].clone().unwrap();
                            label.push(letter);
                            labels[w] = Some(label);
                            tree_edge[ei] = true;
                            queue.push(w);
                        }
                    }
                }
            }
        }
        let labels: Vec<Word> = labels
            .into_iter()
            .map(|l| l.expect("spanning requires a connected automaton"))
            .collect();
        let mut nontree = vec![usize::MAX; self.edges.len()];
        let mut basis = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !tree_edge[i] {
                nontree[i] = basis.len();
                let mut h = labels[e.src].clone();
                h.push(Letter::positive(e.letter));
                basis.push(&h * &labels[e.dst].inverse());
            }
        }
        Spanning { labels, nontree, basis }
    }

    /// A free basis of the subgroup presented by this automaton: one
    /// element per edge outside the canonical spanning tree, in edge order.
    pub fn basis(&self) -> Vec<Word> {
        self.spanning().basis
    }

    /// Express a member of the subgroup in the [`basis`](Self::basis)
    /// coordinates: generator `i` of the result stands for basis element
    /// `i`. Fails with [`Error::NotMember`] otherwise.
    pub fn rewrite_member(&self, word: &Word) -> Result<Word, Error> {
        let spanning = self.spanning();
        let tables = self.tables();
        let mut v = self.basepoint;
        let mut result = Word::identity();
        for &letter in word.letters() {
            let (next, ei) = tables.step(v, letter).ok_or(Error::NotMember)?;
            let k = spanning.nontree[ei];
            if k != usize::MAX {
                let x = Letter::positive(k as u32);
                result.push(if letter.is_inverse() { x.inverse() } else { x });
            }
            v = next;
        }
        if v != self.basepoint {
            return Err(Error::NotMember);
        }
        Ok(result)
    }
}

struct Spanning {
    #[allow(dead_code)]
    labels: Vec<Word>,
    nontree: Vec<usize>,
    basis: Vec<Word>,
}

/// Deterministic transition tables: positive steps and inverse steps,
/// each slot holding the neighbor and the edge index.
pub(crate) struct Tables {
    rank: usize,
    out_vertex: Vec<usize>,
    out_edge: Vec<usize>,
    in_vertex: Vec<usize>,
    in_edge: Vec<usize>,
}

impl Tables {
    fn build(a: &Automaton) -> Option<Tables> {
        let n = a.vertex_count * a.alphabet_size;
        let mut t = Tables {
            rank: a.alphabet_size,
            out_vertex: vec![NO_VERTEX; n],
            out_edge: vec![NO_VERTEX; n],
            in_vertex: vec![NO_VERTEX; n],
            in_edge: vec![NO_VERTEX; n],
        };
        for (i, e) in a.edges.iter().enumerate() {
            let out = e.src * t.rank + e.letter as usize;
            let inn = e.dst * t.rank + e.letter as usize;
            if t.out_vertex[out] != NO_VERTEX || t.in_vertex[inn] != NO_VERTEX {
                return None;
            }
            t.out_vertex[out] = e.dst;
            t.out_edge[out] = i;
            t.in_vertex[inn] = e.src;
            t.in_edge[inn] = i;
        }
        Some(t)
    }

    pub(crate) fn step(&self, v: usize, letter: Letter) -> Option<(usize, usize)> {
        let slot = v * self.rank + letter.index() as usize;
        let (vs, es) = if letter.is_inverse() {
            (&self.in_vertex, &self.in_edge)
        } else {
            (&self.out_vertex, &self.out_edge)
        };
        if vs[slot] == NO_VERTEX {
            None
        } else {
            Some((vs[slot], es[slot]))
        }
    }
}

/// Flower over raw letter sequences (kept unreduced), with per-edge origin
/// metadata for history-based constructions.
pub(crate) fn flower_raw(
    seqs: &[Vec<Letter>],
    alphabet_size: usize,
) -> Result<(Automaton, Vec<EdgeOrigin>), Error> {
    let mut edges = Vec::new();
    let mut origins = Vec::new();
    let mut next = 1;
    for (petal, seq) in seqs.iter().enumerate() {
        if seq.is_empty() {
            continue;
        }
        let mut vs = Vec::with_capacity(seq.len() + 1);
        vs.push(0);
        for _ in 1..seq.len() {
            vs.push(next);
            next += 1;
        }
        vs.push(0);
        for (position, &l) in seq.iter().enumerate() {
            if l.index() as usize >= alphabet_size {
                return Err(Error::ArityMismatch {
                    expected: alphabet_size,
                    actual: l.index() as usize + 1,
                });
            }
            let (src, dst, forward) = if l.is_inverse() {
                (vs[position + 1], vs[position], false)
            } else {
                (vs[position], vs[position + 1], true)
            };
            edges.push(Edge { src, letter: l.index(), dst });
            origins.push(EdgeOrigin { petal, position, forward });
        }
    }
    Ok((Automaton::new(alphabet_size, next, 0, edges), origins))
}

/// The Stallings automaton of the subgroup generated by the given words:
/// fold the flower, trim to the core, canonicalize.
pub fn stallings(generators: &[Word], alphabet_size: usize) -> Result<Automaton, Error> {
    let flower = Automaton::flower(generators, alphabet_size)?;
    let (folded, _) = fold::fold(&flower);
    Ok(folded.trim_core().canonicalize())
}
