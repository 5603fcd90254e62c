//! Finite lattices of subgroup extensions.
//!
//! A fringe ordered by containment is a lattice: joins of quotients are
//! quotients of joined partitions, so the subgroup join of two members is
//! again a member, and the meet is the join of the common lower bounds.
//! This container takes any such family (a base plus overgroups of it),
//! answers order and lattice queries, and reports structural facts such as
//! semimodularity violations. Operations whose result escapes the element
//! family fail with [`Error::ResultOutsideLattice`].

use crate::error::Error;
use crate::extensions::Subgroup;

/// A finite family of overgroups of a base subgroup, ordered by
/// containment, with lattice operations inside the family.
#[derive(Debug, Clone)]
pub struct ExtensionLattice {
    base: Subgroup,
    elements: Vec<Subgroup>,
    le: Vec<Vec<bool>>,
}

impl ExtensionLattice {
    /// Build the lattice from the base and its overgroups. The base is
    /// added as an element if absent; duplicates are removed. Fails with
    /// [`Error::ElementMissingBase`] when some element does not contain
    /// the base.
    pub fn new(base: Subgroup, mut elements: Vec<Subgroup>) -> Result<ExtensionLattice, Error> {
        if elements.iter().any(|e| !base.leq(e)) {
            return Err(Error::ElementMissingBase);
        }
        elements.push(base.clone());
        elements.sort();
        elements.dedup();
        let n = elements.len();
        let le = (0..n)
            .map(|i| (0..n).map(|j| elements[i].leq(&elements[j])).collect())
            .collect();
        Ok(ExtensionLattice { base, elements, le })
    }

    pub fn base(&self) -> &Subgroup {
        &self.base
    }

    /// The elements in a fixed canonical order; indices returned by the
    /// other methods point into this slice.
    pub fn elements(&self) -> &[Subgroup] {
        &self.elements
    }

    pub fn index_of(&self, subgroup: &Subgroup) -> Option<usize> {
        self.elements.binary_search(subgroup).ok()
    }

    fn require(&self, subgroup: &Subgroup) -> Result<usize, Error> {
        self.index_of(subgroup).ok_or(Error::NotAnElement)
    }

    /// The smallest element containing both arguments: their subgroup
    /// join, which must itself be an element.
    pub fn join(&self, x: &Subgroup, y: &Subgroup) -> Result<Subgroup, Error> {
        let (i, j) = (self.require(x)?, self.require(y)?);
        Ok(self.elements[self.join_index(i, j)?].clone())
    }

    /// The largest element contained in both arguments: the join of the
    /// common element lower bounds, which must itself be an element.
    pub fn meet(&self, x: &Subgroup, y: &Subgroup) -> Result<Subgroup, Error> {
        let (i, j) = (self.require(x)?, self.require(y)?);
        Ok(self.elements[self.meet_index(i, j)?].clone())
    }

    fn join_index(&self, i: usize, j: usize) -> Result<usize, Error> {
        let joined = self.elements[i].join(&self.elements[j]);
        self.elements.binary_search(&joined).map_err(|_| Error::ResultOutsideLattice)
    }

    fn meet_index(&self, i: usize, j: usize) -> Result<usize, Error> {
        let mut bound = self.base.clone();
        for k in 0..self.elements.len() {
            if self.le[k][i] && self.le[k][j] {
                bound = bound.join(&self.elements[k]);
            }
        }
        // the join of lower bounds is still a lower bound, so when it is
        // an element it is the greatest one
        self.elements.binary_search(&bound).map_err(|_| Error::ResultOutsideLattice)
    }

    fn is_cover(&self, i: usize, j: usize) -> bool {
        i != j
            && self.le[i][j]
            && (0..self.elements.len())
                .all(|k| k == i || k == j || !(self.le[i][k] && self.le[k][j]))
    }

    /// All covering pairs `(lower, upper)` as element indices, the edge
    /// set of the Hasse diagram.
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        let n = self.elements.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.is_cover(i, j))
            .collect()
    }

    /// Ordered pairs `(x, y)` of element indices with `x ∧ y` covered by
    /// `x` but `y` not covered by `x ∨ y`, the witnesses against upper
    /// semimodularity.
    pub fn violations(&self) -> Result<Vec<(usize, usize)>, Error> {
        let n = self.elements.len();
        let mut found = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.is_cover(self.meet_index(i, j)?, i)
                    && !self.is_cover(j, self.join_index(i, j)?)
                {
                    found.push((i, j));
                }
            }
        }
        Ok(found)
    }

    pub fn is_semimodular(&self) -> Result<bool, Error> {
        Ok(self.violations()?.is_empty())
    }

    pub fn is_distributive(&self) -> Result<bool, Error> {
        let n = self.elements.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.meet_index(i, self.join_index(j, k)?)?;
                    let right =
                        self.join_index(self.meet_index(i, j)?, self.meet_index(i, k)?)?;
                    if left != right {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Graphviz rendering of the Hasse diagram, covers pointing upward.
    pub fn hasse_dot(&self) -> String {
        let mut out = String::from("digraph extensions {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, element) in self.elements.iter().enumerate() {
            let basis = element.basis();
            let label = if basis.is_empty() {
                "<1>".to_string()
            } else {
                format!(
                    "<{}>",
                    basis.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")
                )
            };
            out.push_str(&format!("  {i} [label=\"{label}\"];\n"));
        }
        for (lower, upper) in self.cover_relations() {
            out.push_str(&format!("  {lower} -> {upper};\n"));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(list: &[&str], rank: usize) -> Subgroup {
        Subgroup::new(list.iter().map(|s| s.parse().unwrap()).collect(), rank).unwrap()
    }

    fn chain() -> ExtensionLattice {
        ExtensionLattice::new(
            sub(&["aaaa"], 1),
            vec![sub(&["aa"], 1), sub(&["a"], 1)],
        )
        .unwrap()
    }

    #[test]
    fn chains_are_distributive_and_semimodular() {
        let lattice = chain();
        assert_eq!(lattice.elements().len(), 3);
        let (bottom, middle, top) = (sub(&["aaaa"], 1), sub(&["aa"], 1), sub(&["a"], 1));
        assert_eq!(lattice.join(&bottom, &middle).unwrap(), middle);
        assert_eq!(lattice.meet(&top, &middle).unwrap(), middle);
        assert!(lattice.is_distributive().unwrap());
        assert!(lattice.is_semimodular().unwrap());
        let covers = lattice.cover_relations();
        assert_eq!(covers.len(), 2);
        assert!(covers.contains(&(
            lattice.index_of(&bottom).unwrap(),
            lattice.index_of(&middle).unwrap()
        )));
    }

    #[test]
    fn three_atoms_are_modular_but_not_distributive() {
        let lattice = ExtensionLattice::new(
            sub(&[], 2),
            vec![sub(&["a"], 2), sub(&["b"], 2), sub(&["ab"], 2), sub(&["a", "b"], 2)],
        )
        .unwrap();
        assert!(lattice.is_semimodular().unwrap());
        assert!(!lattice.is_distributive().unwrap());
        assert_eq!(
            lattice.meet(&sub(&["a"], 2), &sub(&["b"], 2)).unwrap(),
            sub(&[], 2)
        );
        assert_eq!(
            lattice.join(&sub(&["a"], 2), &sub(&["ab"], 2)).unwrap(),
            sub(&["a", "b"], 2)
        );
    }

    #[test]
    fn the_pentagon_violates_semimodularity() {
        let x = sub(&["ab"], 2);
        let y = sub(&["a"], 2);
        let z = sub(&["aa", "ab"], 2);
        let lattice = ExtensionLattice::new(
            sub(&[], 2),
            vec![x.clone(), y.clone(), z.clone(), sub(&["a", "b"], 2)],
        )
        .unwrap();
        assert!(!lattice.is_semimodular().unwrap());
        let violations = lattice.violations().unwrap();
        let pair = (lattice.index_of(&y).unwrap(), lattice.index_of(&x).unwrap());
        assert!(violations.contains(&pair));
        assert!(!lattice.is_distributive().unwrap());
    }

    #[test]
    fn construction_and_operations_validate() {
        assert!(matches!(
            ExtensionLattice::new(sub(&["a"], 2), vec![sub(&["b"], 2)]),
            Err(Error::ElementMissingBase)
        ));
        let open = ExtensionLattice::new(
            sub(&["aaaaaa"], 1),
            vec![sub(&["aa"], 1), sub(&["aaa"], 1)],
        )
        .unwrap();
        assert_eq!(
            open.join(&sub(&["aa"], 1), &sub(&["aaa"], 1)),
            Err(Error::ResultOutsideLattice)
        );
        assert_eq!(
            open.meet(&sub(&["aa"], 1), &sub(&["aaa"], 1)).unwrap(),
            sub(&["aaaaaa"], 1)
        );
        assert_eq!(open.join(&sub(&["a"], 1), &sub(&["aa"], 1)), Err(Error::NotAnElement));
        // the base joins in as an element even when not listed
        assert_eq!(open.elements().len(), 3);
        assert!(open.hasse_dot().starts_with("digraph"));
    }
}
