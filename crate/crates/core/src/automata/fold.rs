//! Stallings folding: confluent identification of equally labeled edges.

use std::collections::HashMap;

use super::{Automaton, Edge, Morphism, NO_VERTEX};

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    min_member: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n], min_member: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Union by size; returns (winner, loser) roots, or None if already equal.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        let (winner, loser) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[loser] = winner;
        self.size[winner] += self.size[loser];
        self.min_member[winner] = self.min_member[winner].min(self.min_member[loser]);
        Some((winner, loser))
    }
}

/// Fold the automaton and return the quotient morphism onto the result.
///
/// Vertex classes are renumbered by smallest original member, and duplicate
/// edges keep their first occurrence, so folding an already deterministic
/// automaton returns it unchanged with the identity morphism.
pub fn fold(automaton: &Automaton) -> (Automaton, Morphism) {
    let rank = automaton.alphabet_size();
    let v_count = automaton.vertex_count();
    let mut uf = UnionFind::new(v_count);
    // Slot tables are indexed by class representative; entries hold original
    // vertex ids and are compared through find.
    let mut out = vec![NO_VERTEX; v_count * rank];
    let mut inn = vec![NO_VERTEX; v_count * rank];
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for e in automaton.edges() {
        let slot = e.src * rank + e.letter as usize;
        if out[slot] == NO_VERTEX {
            out[slot] = e.dst;
        } else {
            queue.push((out[slot], e.dst));
        }
        let slot = e.dst * rank + e.letter as usize;
        if inn[slot] == NO_VERTEX {
            inn[slot] = e.src;
        } else {
            queue.push((inn[slot], e.src));
        }
    }
    while let Some((a, b)) = queue.pop() {
        let Some((winner, loser)) = uf.union(a, b) else { continue };
        for table in [&mut out, &mut inn] {
            for l in 0..rank {
                let lose_val = table[loser * rank + l];
                if lose_val == NO_VERTEX {
                    continue;
                }
                let win_slot = winner * rank + l;
                if table[win_slot] == NO_VERTEX {
                    table[win_slot] = lose_val;
                } else if uf.find(table[win_slot]) != uf.find(lose_val) {
                    queue.push((table[win_slot], lose_val));
                }
            }
        }
    }
    // Number the classes by smallest original member.
    let mut class_of = vec![NO_VERTEX; v_count];
    let mut roots: Vec<usize> = (0..v_count).filter(|&v| uf.find(v) == v).collect();
    roots.sort_by_key(|&r| uf.min_member[r]);
    for (id, &r) in roots.iter().enumerate() {
        class_of[r] = id;
    }
    let vertex_map: Vec<usize> = (0..v_count).map(|v| class_of[uf.find(v)]).collect();
    let mut edges = Vec::new();
    let mut edge_map = Vec::with_capacity(automaton.edges().len());
    let mut seen: HashMap<(usize, u32, usize), usize> = HashMap::new();
    for e in automaton.edges() {
        let key = (vertex_map[e.src], e.letter, vertex_map[e.dst]);
        let idx = *seen.entry(key).or_insert_with(|| {
            edges.push(Edge { src: key.0, letter: key.1, dst: key.2 });
            edges.len() - 1
        });
        edge_map.push(idx);
    }
    let folded = Automaton::new(
        automaton.alphabet_size(),
        roots.len(),
        vertex_map[automaton.basepoint()],
        edges,
    );
    let morphism = Morphism::new(automaton.clone(), folded.clone(), vertex_map, edge_map)
        .expect("folding yields a quotient morphism");
    (folded, morphism)
}

/// One elementary fold: `removed` is identified with `kept` (same letter,
/// sharing source or destination class), possibly merging one vertex pair.
pub(crate) struct FoldStep {
    pub kept: usize,
    pub removed: usize,
    pub shared_src: bool,
    pub merged: Option<(usize, usize)>,
}

pub(crate) struct FoldHistory {
    pub steps: Vec<FoldStep>,
    pub alive: Vec<bool>,
}

/// Fold one elementary identification at a time, recording each step.
/// Quadratic scan per step; intended for small automata whose history is
/// then unwound (inverting automorphisms).
pub(crate) fn fold_history(automaton: &Automaton) -> FoldHistory {
    let edges = automaton.edges();
    let mut uf = UnionFind::new(automaton.vertex_count());
    let mut alive = vec![true; edges.len()];
    let mut steps = Vec::new();
    loop {
        let mut found = None;
        'scan: for i in 0..edges.len() {
            if !alive[i] {
                continue;
            }
            for j in i + 1..edges.len() {
                if !alive[j] || edges[i].letter != edges[j].letter {
                    continue;
                }
                if uf.find(edges[i].src) == uf.find(edges[j].src) {
                    found = Some((i, j, true));
                    break 'scan;
                }
                if uf.find(edges[i].dst) == uf.find(edges[j].dst) {
                    found = Some((i, j, false));
                    break 'scan;
                }
            }
        }
        let Some((kept, removed, shared_src)) = found else { break };
        let (a, b) = if shared_src {
            (edges[kept].dst, edges[removed].dst)
        } else {
            (edges[kept].src, edges[removed].src)
        };
        let merged = uf.union(a, b).map(|_| (a, b));
        alive[removed] = false;
        steps.push(FoldStep { kept, removed, shared_src, merged });
    }
    FoldHistory { steps, alive }
}

/// Union-find without path compression whose unions can be undone in LIFO
/// order, used to replay a fold history backwards.
pub(crate) struct RollbackDsu {
    parent: Vec<usize>,
    size: Vec<usize>,
    log: Vec<(usize, usize)>,
}

impl RollbackDsu {
    pub(crate) fn new(n: usize) -> Self {
        RollbackDsu { parent: (0..n).collect(), size: vec![1; n], log: Vec::new() }
    }

    pub(crate) fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        assert_ne!(ra, rb, "rollback union of equal classes");
        let (winner, loser) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[loser] = winner;
        self.size[winner] += self.size[loser];
        self.log.push((loser, winner));
    }

    pub(crate) fn rollback(&mut self) {
        let (loser, winner) = self.log.pop().expect("nothing to roll back");
        self.parent[loser] = loser;
        self.size[winner] -= self.size[loser];
    }
}
