//! Set partitions in restricted growth string form.

use serde::{Deserialize, Serialize};

/// A partition of `{0, .., n-1}` stored as a restricted growth string:
/// block indices in first-use order, so `assignment[0] == 0` and each entry
/// exceeds the running maximum by at most one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
}

impl Partition {
    /// Panics if the assignment is not a restricted growth string.
    pub fn new(assignment: Vec<usize>) -> Self {
        let mut max = 0;
        for (i, &a) in assignment.iter().enumerate() {
            if i == 0 {
                assert_eq!(a, 0, "restricted growth strings start at 0");
            } else {
                assert!(a <= max + 1, "block indices must appear in first-use order");
            }
            max = max.max(a);
        }
        Partition { assignment }
    }

    /// Everything in one block.
    pub fn trivial(n: usize) -> Self {
        Partition { assignment: vec![0; n] }
    }

    /// Every element its own block.
    pub fn discrete(n: usize) -> Self {
        Partition { assignment: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Number of blocks.
    pub fn blocks(&self) -> usize {
        self.assignment.iter().max().map_or(0, |m| m + 1)
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }
}

/// All partitions of `{0, .., n-1}` in lexicographic restricted growth
/// string order, from the one-block partition to the discrete one.
pub fn partitions(n: usize) -> PartitionIter {
    PartitionIter { next: Some(vec![0; n]) }
}

pub struct PartitionIter {
    next: Option<Vec<usize>>,
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut advanced = false;
        // prefix_max[i] = max of current[..=i]
        let mut prefix_max = vec![0; current.len()];
        for i in 1..current.len() {
            prefix_max[i] = prefix_max[i - 1].max(current[i]);
        }
        for i in (1..current.len()).rev() {
            if succ[i] <= prefix_max[i - 1] {
                succ[i] += 1;
                for entry in succ.iter_mut().skip(i + 1) {
                    *entry = 0;
                }
                advanced = true;
                break;
            }
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(Partition { assignment: current })
    }
}

/// The Bell number `B(n)`: how many partitions [`partitions`] will yield.
/// Saturates at `u64::MAX`.
pub fn bell(n: usize) -> u64 {
    // Bell triangle
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            let prev = *next.last().unwrap();
            next.push(prev.saturating_add(v));
        }
        row = next;
    }
    row[0]
}
