//! Serialization and rendering of automata.
//!
//! The JSON form lists only the positive edges with letters as generator
//! indices: `{"alphabet_size": 2, "basepoint": 0, "edges": [[0, 0, 1], ..]}`.
//! Vertices are implied by the ids used (canonical automata have contiguous
//! ids). Deserialization validates ranges and determinism.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Automaton, Edge};
use crate::words::Letter;

#[derive(Serialize, Deserialize)]
struct AutomatonRepr {
    alphabet_size: usize,
    basepoint: usize,
    edges: Vec<(usize, u32, usize)>,
}

impl Serialize for Automaton {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        AutomatonRepr {
            alphabet_size: self.alphabet_size(),
            basepoint: self.basepoint(),
            edges: self.edges().iter().map(|e| (e.src, e.letter, e.dst)).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Automaton {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = AutomatonRepr::deserialize(deserializer)?;
        let mut vertex_count = repr.basepoint + 1;
        for &(src, letter, dst) in &repr.edges {
            if letter as usize >= repr.alphabet_size {
                return Err(D::Error::custom(format!("edge letter {letter} out of range")));
            }
            vertex_count = vertex_count.max(src + 1).max(dst + 1);
        }
        let edges = repr
            .edges
            .into_iter()
            .map(|(src, letter, dst)| Edge { src, letter, dst })
            .collect();
        let automaton = Automaton::new(repr.alphabet_size, vertex_count, repr.basepoint, edges);
        if !automaton.is_deterministic() {
            return Err(D::Error::custom("automaton is not deterministic"));
        }
        Ok(automaton)
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "automaton: {} vertices, {} edges, alphabet {}, basepoint {}",
            self.vertex_count(),
            self.positive_edge_count(),
            self.alphabet_size(),
            self.basepoint()
        )?;
        for e in self.edges() {
            writeln!(f, "  {} -{}-> {}", e.src, Letter::positive(e.letter), e.dst)?;
        }
        Ok(())
    }
}

impl Automaton {
    /// Graphviz rendering; the basepoint is drawn as a double circle.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph stallings {\n  rankdir=LR;\n  node [shape=circle];\n");
        out.push_str(&format!("  {} [shape=doublecircle];\n", self.basepoint()));
        for v in 0..self.vertex_count() {
            if v != self.basepoint() {
                out.push_str(&format!("  {v};\n"));
            }
        }
        for e in self.edges() {
            out.push_str(&format!(
                "  {} -> {} [label=\"{}\"];\n",
                e.src,
                e.dst,
                Letter::positive(e.letter)
            ));
        }
        out.push_str("}\n");
        out
    }
}
