//! Folding a morphism of automata on both sides at once.
//!
//! A basis change turns a folded extension pair into a pair of unfolded
//! flowers joined by a morphism. Folding the two flowers independently
//! loses the connection between them; here the source is folded first with
//! every merge mirrored into the target, the target is folded the rest of
//! the way, and the hanging trees are trimmed target first. The trace
//! records whether the morphism is still onto after each step, which is
//! exactly the information the onto checks extract from a candidate basis:
//! ontoness survives the folds and dies, when it dies, in the trims.
//!
//! [`expanded_pair`] builds the initial morphism for a subgroup pair and a
//! basis: the target is the flower over the rewritten basis of the
//! overgroup, the source wires the subgroup's basis through those blocks.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::automata::fold::UnionFind;
use crate::automata::{flower_raw, Automaton, Edge, Morphism, NO_VERTEX};
use crate::error::Error;
use crate::words::{Endomorphism, Letter, Word};

use super::Subgroup;

/// What happened during a synchronized fold, step by step.
///
/// Steps: 0 initial state, 1 source fold (mirrored), 2 target fold,
/// 3 target trim (with the source edges whose images died), 4 source trim.
/// Removal counts are in edge classes of the folded automata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SyncFoldTrace {
    /// Whether the morphism is onto on live classes after each step.
    pub onto_after: [bool; 5],
    /// Edge classes trimmed from the target in step 3.
    pub step3_target_removed: usize,
    /// Source edge classes dropped in step 3 because their image died.
    pub step3_source_removed: usize,
    /// Edge classes trimmed from the source in step 4.
    pub step4_removed: usize,
}

/// One side of the fold: class-level unions over the original vertices and
/// edges, plus liveness of edge classes, tracked at the class root.
struct SideState<'a> {
    graph: &'a Automaton,
    vertices: UnionFind,
    edges: UnionFind,
    alive: Vec<bool>,
}

impl<'a> SideState<'a> {
    fn new(graph: &'a Automaton) -> SideState<'a> {
        SideState {
            graph,
            vertices: UnionFind::new(graph.vertex_count()),
            edges: UnionFind::new(graph.edges().len()),
            alive: vec![true; graph.edges().len()],
        }
    }

    fn live_edge_roots(&mut self) -> Vec<usize> {
        (0..self.graph.edges().len())
            .filter(|&i| self.edges.find(i) == i && self.alive[i])
            .collect()
    }

    /// The basepoint class and every class touching a live edge.
    fn live_vertex_classes(&mut self) -> BTreeSet<usize> {
        let mut live = BTreeSet::new();
        live.insert(self.vertices.find(self.graph.basepoint()));
        for i in self.live_edge_roots() {
            let e = self.graph.edges()[i];
            live.insert(self.vertices.find(e.src));
            live.insert(self.vertices.find(e.dst));
        }
        live
    }

    /// Two distinct live edge classes with the same letter sharing a source
    /// class or a destination class, in first-collision order.
    fn violation(&mut self) -> Option<(usize, usize)> {
        let mut out: HashMap<(usize, u32), usize> = HashMap::new();
        let mut inn: HashMap<(usize, u32), usize> = HashMap::new();
        for i in self.live_edge_roots() {
            let e = self.graph.edges()[i];
            let src = self.vertices.find(e.src);
            if let Some(&j) = out.get(&(src, e.letter)) {
                return Some((j, i));
            }
            out.insert((src, e.letter), i);
            let dst = self.vertices.find(e.dst);
            if let Some(&j) = inn.get(&(dst, e.letter)) {
                return Some((j, i));
            }
            inn.insert((dst, e.letter), i);
        }
        None
    }

    /// Merge two same-letter edge classes and both endpoint class pairs.
    fn union_edges(&mut self, i: usize, j: usize) {
        let (a, b) = (self.graph.edges()[i], self.graph.edges()[j]);
        debug_assert_eq!(a.letter, b.letter, "only same-letter edges fold");
        self.vertices.union(a.src, b.src);
        self.vertices.union(a.dst, b.dst);
        if let Some((winner, loser)) = self.edges.union(i, j) {
            self.alive[winner] = self.alive[winner] && self.alive[loser];
        }
    }

    /// Kill degree-one edge classes away from the basepoint class until
    /// none are left, smallest class first; returns how many died.
    fn trim(&mut self) -> usize {
        let mut removed = 0;
        loop {
            let base = self.vertices.find(self.graph.basepoint());
            let mut degree: HashMap<usize, usize> = HashMap::new();
            let mut sole: HashMap<usize, usize> = HashMap::new();
            for i in self.live_edge_roots() {
                let e = self.graph.edges()[i];
                for end in [e.src, e.dst] {
                    let class = self.vertices.find(end);
                    *degree.entry(class).or_insert(0) += 1;
                    sole.insert(class, i);
                }
            }
            let victim = degree
                .iter()
                .filter(|&(&class, &d)| d == 1 && class != base)
                .map(|(&class, _)| class)
                .min();
            match victim {
                Some(class) => {
                    self.alive[sole[&class]] = false;
                    removed += 1;
                }
                None => return removed,
            }
        }
    }

    /// The folded automaton in canonical form, with maps sending each
    /// original vertex and edge to its canonical image (`NO_VERTEX` when
    /// dead or unreachable).
    fn present(&mut self) -> (Automaton, Vec<usize>, Vec<usize>) {
        let roots = self.live_edge_roots();
        let classes: Vec<usize> = self.live_vertex_classes().into_iter().collect();
        let class_pos: HashMap<usize, usize> =
            classes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let edges = roots
            .iter()
            .map(|&i| {
                let e = self.graph.edges()[i];
                Edge {
                    src: class_pos[&self.vertices.find(e.src)],
                    letter: e.letter,
                    dst: class_pos[&self.vertices.find(e.dst)],
                }
            })
            .collect();
        let base = self.vertices.find(self.graph.basepoint());
        let quotient =
            Automaton::new(self.graph.alphabet_size(), classes.len(), class_pos[&base], edges);
        let (canonical, vertex_order, edge_order) = quotient.canonicalize_with_maps();
        let mut vertex_to = vec![NO_VERTEX; self.graph.vertex_count()];
        for (v, slot) in vertex_to.iter_mut().enumerate() {
            if let Some(&q) = class_pos.get(&self.vertices.find(v)) {
                *slot = vertex_order[q];
            }
        }
        let root_pos: HashMap<usize, usize> =
            roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut edge_to = vec![NO_VERTEX; self.graph.edges().len()];
        for (i, slot) in edge_to.iter_mut().enumerate() {
            let root = self.edges.find(i);
            if self.alive[root] {
                *slot = edge_order[root_pos[&root]];
            }
        }
        (canonical, vertex_to, edge_to)
    }
}

/// Whether every live target class, vertex and edge, is the image of a
/// live source class.
fn class_onto(
    source: &mut SideState,
    target: &mut SideState,
    vmap: &[usize],
    emap: &[usize],
) -> bool {
    let source_live = source.live_vertex_classes();
    let mut hit_vertices = BTreeSet::new();
    for (v, &image) in vmap.iter().enumerate() {
        if source_live.contains(&source.vertices.find(v)) {
            hit_vertices.insert(target.vertices.find(image));
        }
    }
    let mut hit_edges = BTreeSet::new();
    for (i, &image) in emap.iter().enumerate() {
        if source.alive[source.edges.find(i)] {
            hit_edges.insert(target.edges.find(image));
        }
    }
    target.live_vertex_classes().is_subset(&hit_vertices)
        && target.live_edge_roots().iter().all(|root| hit_edges.contains(root))
}

/// Fold both sides of a morphism in lockstep and trim the hanging trees,
/// returning the induced morphism between the canonical results and the
/// step-by-step trace.
pub fn synchronized_fold(theta: &Morphism) -> (Morphism, SyncFoldTrace) {
    let mut source = SideState::new(theta.source());
    let mut target = SideState::new(theta.target());
    let vmap = theta.vertex_map();
    let emap = theta.edge_map();
    let mut onto_after = [false; 5];
    onto_after[0] = class_onto(&mut source, &mut target, vmap, emap);

    // step 1: fold the source, mirroring every merge through the morphism;
    // the mirrored endpoint unions agree because images of an edge's
    // endpoints are the endpoints of the image edge
    while let Some((i, j)) = source.violation() {
        source.union_edges(i, j);
        target.union_edges(emap[i], emap[j]);
    }
    onto_after[1] = class_onto(&mut source, &mut target, vmap, emap);

    // step 2: finish folding the target
    while let Some((i, j)) = target.violation() {
        target.union_edges(i, j);
    }
    onto_after[2] = class_onto(&mut source, &mut target, vmap, emap);

    // step 3: trim the target, then drop source edges whose image died
    let step3_target_removed = target.trim();
    let mut step3_source_removed = 0;
    for i in source.live_edge_roots() {
        if !target.alive[target.edges.find(emap[i])] {
            source.alive[i] = false;
            step3_source_removed += 1;
        }
    }
    onto_after[3] = class_onto(&mut source, &mut target, vmap, emap);

    // step 4: trim the source
    let step4_removed = source.trim();
    onto_after[4] = class_onto(&mut source, &mut target, vmap, emap);

    let (gamma, source_vertex, source_edge) = source.present();
    let (delta, target_vertex, target_edge) = target.present();
    let mut vertex_map = vec![NO_VERTEX; gamma.vertex_count()];
    for (v, &cv) in source_vertex.iter().enumerate() {
        if cv != NO_VERTEX {
            vertex_map[cv] = target_vertex[vmap[v]];
        }
    }
    let mut edge_map = vec![NO_VERTEX; gamma.edges().len()];
    for (i, &ce) in source_edge.iter().enumerate() {
        if ce != NO_VERTEX {
            edge_map[ce] = target_edge[emap[i]];
        }
    }
    let folded = Morphism::new(gamma, delta, vertex_map, edge_map)
        .expect("synchronized folding preserves the morphism");
    let trace = SyncFoldTrace {
        onto_after,
        step3_target_removed,
        step3_source_removed,
        step4_removed,
    };
    (folded, trace)
}

/// The unfolded morphism presenting the pair `h` of `k` in the basis given
/// by `phi` (images of the ambient generators, possibly of a larger free
/// group).
///
/// The target is the flower whose petals spell the rewritten basis of `k`,
/// kept letter by letter without free reduction. Each source petal spells
/// one basis element of `h` as the corresponding sequence of target
/// petals, so the morphism folds the spelling onto the blocks. Feeding the
/// result to [`synchronized_fold`] recovers the canonical automata of the
/// rewritten subgroups.
pub fn expanded_pair(
    h: &Subgroup,
    k: &Subgroup,
    phi: &Endomorphism,
) -> Result<Morphism, Error> {
    if h.ambient_rank() != k.ambient_rank() {
        return Err(Error::ArityMismatch {
            expected: k.ambient_rank(),
            actual: h.ambient_rank(),
        });
    }
    let alphabet = phi.source_rank();
    if phi.target_rank() != alphabet || alphabet < k.ambient_rank() {
        return Err(Error::ArityMismatch { expected: k.ambient_rank(), actual: alphabet });
    }
    let psi = phi.inverse()?;
    let coords: Vec<Word> = h
        .graph()
        .basis()
        .iter()
        .map(|w| k.graph().rewrite_member(w))
        .collect::<Result<_, _>>()
        .map_err(|_| Error::NotASubgroup)?;
    let blocks: Vec<Vec<Letter>> = k.graph().basis().iter().map(|w| raw_image(&psi, w)).collect();
    let (delta, delta_origins) = flower_raw(&blocks, alphabet)?;
    let delta_vertices = petal_vertices(&blocks);
    let mut delta_edge_at: Vec<Vec<usize>> =
        blocks.iter().map(|b| vec![NO_VERTEX; b.len()]).collect();
    for (idx, origin) in delta_origins.iter().enumerate() {
        delta_edge_at[origin.petal][origin.position] = idx;
    }

    let petals: Vec<Vec<Letter>> = coords
        .iter()
        .map(|coord| {
            coord
                .letters()
                .iter()
                .flat_map(|&cl| oriented_block(&blocks[cl.index() as usize], cl.is_inverse()))
                .collect()
        })
        .collect();
    let (gamma, gamma_origins) = flower_raw(&petals, alphabet)?;
    let gamma_vertices = petal_vertices(&petals);
    let mut gamma_edge_at: Vec<Vec<usize>> =
        petals.iter().map(|p| vec![NO_VERTEX; p.len()]).collect();
    for (idx, origin) in gamma_origins.iter().enumerate() {
        gamma_edge_at[origin.petal][origin.position] = idx;
    }

    // splice the maps block by block: boundaries go to the flower center,
    // a backward pass through a block reads its vertices and edges in
    // reverse
    let mut vertex_map = vec![0; gamma.vertex_count()];
    let mut edge_map = vec![NO_VERTEX; gamma.edges().len()];
    for (petal, coord) in coords.iter().enumerate() {
        let mut offset = 0;
        for &cl in coord.letters() {
            let block = cl.index() as usize;
            let len = blocks[block].len();
            for r in 1..len {
                let image = if cl.is_inverse() {
                    delta_vertices[block][len - r]
                } else {
                    delta_vertices[block][r]
                };
                vertex_map[gamma_vertices[petal][offset + r]] = image;
            }
            for r in 0..len {
                let image = if cl.is_inverse() {
                    delta_edge_at[block][len - 1 - r]
                } else {
                    delta_edge_at[block][r]
                };
                edge_map[gamma_edge_at[petal][offset + r]] = image;
            }
            offset += len;
        }
    }
    Ok(Morphism::new(gamma, delta, vertex_map, edge_map)
        .expect("block splicing preserves incidence"))
}

/// Image of a word under a substitution, concatenated without free
/// reduction; inverse letters contribute their image reversed and
/// inverted.
fn raw_image(psi: &Endomorphism, word: &Word) -> Vec<Letter> {
    let mut letters = Vec::new();
    for &l in word.letters() {
        let image = psi.images()[l.index() as usize].letters();
        if l.is_inverse() {
            letters.extend(image.iter().rev().map(|x| x.inverse()));
        } else {
            letters.extend(image.iter().copied());
        }
    }
    letters
}

fn oriented_block(block: &[Letter], inverse: bool) -> Vec<Letter> {
    if inverse {
        block.iter().rev().map(|x| x.inverse()).collect()
    } else {
        block.to_vec()
    }
}

/// The path vertex numbering used by the flower: every petal starts and
/// ends at vertex zero, interiors are numbered consecutively across
/// petals, empty petals get no vertices.
fn petal_vertices(seqs: &[Vec<Letter>]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(seqs.len());
    let mut next = 1;
    for seq in seqs {
        let mut vs = Vec::new();
        if !seq.is_empty() {
            vs.push(0);
            for _ in 1..seq.len() {
                vs.push(next);
                next += 1;
            }
            vs.push(0);
        }
        out.push(vs);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::stallings;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn sub(list: &[&str], rank: usize) -> Subgroup {
        Subgroup::new(list.iter().map(|s| w(s)).collect(), rank).unwrap()
    }

    fn endo(list: &[&str], rank: usize) -> Endomorphism {
        Endomorphism::new(list.iter().map(|s| w(s)).collect(), rank).unwrap()
    }

    #[test]
    fn identity_pair_folds_without_losses() {
        let h = sub(&["aa"], 1);
        let k = sub(&["a"], 1);
        let theta = expanded_pair(&h, &k, &Endomorphism::identity(1)).unwrap();
        assert_eq!(theta.source().vertex_count(), 2);
        assert_eq!(theta.target().edges().len(), 1);
        let (folded, trace) = synchronized_fold(&theta);
        assert_eq!(
            trace,
            SyncFoldTrace {
                onto_after: [true; 5],
                step3_target_removed: 0,
                step3_source_removed: 0,
                step4_removed: 0,
            }
        );
        assert_eq!(folded.source(), h.graph());
        assert_eq!(folded.target(), k.graph());
        assert!(folded.is_onto());
    }

    #[test]
    fn basis_change_loses_ontoness_at_the_source_trim() {
        // in the basis (aC, cb, c) the pair of squares folds to a hexagon
        // over a seven-edge target, and the backtracking hair trimmed from
        // the source is what breaks ontoness
        let h = sub(&["aabb"], 2);
        let k = sub(&["aa", "bb"], 2);
        let phi = endo(&["aC", "cb", "c"], 3);
        let theta = expanded_pair(&h, &k, &phi).unwrap();
        assert_eq!(theta.source().vertex_count(), 8);
        assert_eq!(theta.source().edges().len(), 8);
        assert_eq!(theta.target().vertex_count(), 7);
        assert_eq!(theta.target().edges().len(), 8);
        let (folded, trace) = synchronized_fold(&theta);
        assert_eq!(
            trace,
            SyncFoldTrace {
                onto_after: [true, true, true, true, false],
                step3_target_removed: 0,
                step3_source_removed: 0,
                step4_removed: 1,
            }
        );
        assert_eq!(folded.source(), &stallings(&[w("acabCb")], 3).unwrap());
        assert_eq!(folded.target(), &stallings(&[w("acac"), w("CbCb")], 3).unwrap());
        assert!(!folded.is_onto());
    }

    #[test]
    fn wedged_pairs_fold_in_parallel() {
        let ta = expanded_pair(&sub(&["aa"], 2), &sub(&["a"], 2), &Endomorphism::identity(2))
            .unwrap();
        let tb = expanded_pair(&sub(&["bb"], 2), &sub(&["b"], 2), &Endomorphism::identity(2))
            .unwrap();
        let (folded, trace) = synchronized_fold(&ta.wedge(&tb));
        assert_eq!(trace.onto_after, [true; 5]);
        assert_eq!(trace.step3_target_removed + trace.step4_removed, 0);
        assert_eq!(folded.source(), sub(&["aa", "bb"], 2).graph());
        assert_eq!(folded.target(), sub(&["a", "b"], 2).graph());
        assert!(folded.is_onto());
    }

    #[test]
    fn expanded_pair_validates_its_inputs() {
        let h = sub(&["a"], 2);
        let k = sub(&["b"], 2);
        assert_eq!(
            expanded_pair(&h, &k, &Endomorphism::identity(2)),
            Err(Error::NotASubgroup)
        );
        assert_eq!(
            expanded_pair(&h, &h, &Endomorphism::identity(1)),
            Err(Error::ArityMismatch { expected: 2, actual: 1 })
        );
        assert_eq!(
            expanded_pair(&h, &h, &endo(&["ab", "ba"], 2)),
            Err(Error::NotAutomorphism)
        );
    }
}
