//! Generators for the compress-forward constraint family: relay subsets,
//! set partitions of a subset, and receiver assignments per block.
//!
//! Orders are fixed so diagnostics are reproducible:
//! - subsets: binary counting over the sorted ids (bit `k` selects `ids[k]`);
//! - partitions: restricted growth strings in lexicographic order, so blocks
//!   come out sorted by their smallest element;
//! - assignments: lexicographic over blocks, last block varying fastest.

use crate::error::{Error, Result};
use crate::topology::NodeId;

/// All subsets of `items`, including the empty and the full set.
pub fn subsets(items: &[NodeId]) -> Subsets {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    assert!(sorted.len() < 64, "subset enumeration limited to 63 items");
    Subsets {
        end: 1u64 << sorted.len(),
        items: sorted,
        mask: 0,
    }
}

#[derive(Clone, Debug)]
pub struct Subsets {
    items: Vec<NodeId>,
    mask: u64,
    end: u64,
}

impl Iterator for Subsets {
    type Item = Vec<NodeId>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.mask >= self.end {
            return None;
        }
        let mask = self.mask;
        self.mask += 1;
        Some(
            self.items
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &id)| id)
                .collect(),
        )
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.mask) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Subsets {}

/// All set partitions of `items` (Bell(|items|) of them).
pub fn partitions(items: &[NodeId]) -> Partitions {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    Partitions {
        items: sorted,
        rgs: vec![0; n],
        done: false,
    }
}

#[derive(Clone, Debug)]
pub struct Partitions {
    items: Vec<NodeId>,
    rgs: Vec<usize>,
    done: bool,
}

impl Partitions {
    fn blocks(&self) -> Vec<Vec<NodeId>> {
        let count = self.rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (&label, &id) in self.rgs.iter().zip(&self.items) {
            blocks[label].push(id);
        }
        blocks
    }

    fn advance(&mut self) {
        // Rightmost position that can grow: rgs[i] <= max(rgs[..i]).
        let n = self.rgs.len();
        let mut prefix_max = vec![0; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(self.rgs[i - 1]);
        }
        for i in (1..n).rev() {
            if self.rgs[i] <= prefix_max[i] {
                self.rgs[i] += 1;
                self.rgs[i + 1..].iter_mut().for_each(|v| *v = 0);
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for Partitions {
    type Item = Vec<Vec<NodeId>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self.blocks();
        self.advance();
        Some(out)
    }
}

/// Every receiver vector `r(·)` with `r(m) ∈ candidates \ B_m`.
pub fn assignments(partition: &[Vec<NodeId>], candidates: &[NodeId]) -> Result<Assignments> {
    let choices: Vec<Vec<NodeId>> = partition
        .iter()
        .map(|block| {
            let allowed: Vec<NodeId> = candidates
                .iter()
                .copied()
                .filter(|c| !block.contains(c))
                .collect();
            if allowed.is_empty() {
                Err(Error::EmptyChoice {
                    block: block.clone(),
                })
            } else {
                Ok(allowed)
            }
        })
        .collect::<Result<_>>()?;
    Ok(Assignments {
        cursor: vec![0; choices.len()],
        choices,
        done: false,
    })
}

#[derive(Clone, Debug)]
pub struct Assignments {
    choices: Vec<Vec<NodeId>>,
    cursor: Vec<usize>,
    done: bool,
}

impl Iterator for Assignments {
    type Item = Vec<NodeId>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = self
            .cursor
            .iter()
            .zip(&self.choices)
            .map(|(&k, c)| c[k])
            .collect();
        self.done = true;
        for m in (0..self.cursor.len()).rev() {
            self.cursor[m] += 1;
            if self.cursor[m] < self.choices[m].len() {
                self.done = false;
                break;
            }
            self.cursor[m] = 0;
        }
        Some(out)
    }
}

/// One `(S, {B_m}, r(·))` triple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConstraintInstance {
    pub s: Vec<NodeId>,
    pub partition: Vec<Vec<NodeId>>,
    pub assignment: Vec<NodeId>,
}

impl ConstraintInstance {
    /// Checks disjoint nonempty blocks covering `s`, canonical block order,
    /// and `r(m) ∈ candidates \ B_m`.
    pub fn is_well_formed(&self, candidates: &[NodeId]) -> bool {
        if self.partition.len() != self.assignment.len() {
            return false;
        }
        if self.partition.iter().any(|b| b.is_empty()) {
            return false;
        }
        let mut covered: Vec<NodeId> = self.partition.iter().flatten().copied().collect();
        covered.sort_unstable();
        let mut s = self.s.clone();
        s.sort_unstable();
        if covered != s || s.windows(2).any(|w| w[0] == w[1]) || s != self.s {
            return false;
        }
        if self.partition.windows(2).any(|w| w[0][0] >= w[1][0]) {
            return false;
        }
        self.partition
            .iter()
            .zip(&self.assignment)
            .all(|(b, r)| candidates.contains(r) && !b.contains(r))
    }
}

impl std::fmt::Display for ConstraintInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let set = |ids: &[NodeId]| {
            ids.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "S={{{}}} B=", set(&self.s))?;
        for (m, (b, r)) in self.partition.iter().zip(&self.assignment).enumerate() {
            if m > 0 {
                f.write_str("|")?;
            }
            write!(f, "{{{}}}->{}", set(b), r)?;
        }
        Ok(())
    }
}

/// The full family over nonempty `S ⊆ relays`, in canonical order.
pub fn constraint_family(
    relays: &[NodeId],
    candidates: &[NodeId],
) -> impl Iterator<Item = ConstraintInstance> {
    let candidates = candidates.to_vec();
    subsets(relays).skip(1).flat_map(move |s| {
        let candidates = candidates.clone();
        partitions(&s).flat_map(move |partition| {
            let s = s.clone();
            assignments(&partition, &candidates)
                .expect("blocks of relays never exclude the destination")
                .map(move |assignment| ConstraintInstance {
                    s: s.clone(),
                    partition: partition.clone(),
                    assignment,
                })
        })
    })
}
