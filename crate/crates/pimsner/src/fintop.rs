//! Finite topological spaces given extensionally by their open-set families.
//!
//! Every "has empty interior" question in this crate reduces to scans over
//! these families. A quantifier over all nonempty opens reduces to minimal
//! opens: each point has a smallest open neighborhood, every open is a union
//! of them, and all properties quantified here are monotone under shrinking.

use crate::mask::{self, Mask, MAX_POINTS};
use thiserror::Error;

/// Explicit families larger than this abort instead of thrashing memory.
const CLOSURE_CAP: usize = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("a space needs at least one point")]
    DegenerateSpace,
    #[error("at most {MAX_POINTS} points are supported, got {0}")]
    TooManyPoints(u32),
    #[error("the lattice closure of the generating opens exceeds {CLOSURE_CAP} sets; pass a coarser family or omit opens for the discrete topology")]
    ClosureTooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Family {
    /// All subsets are open; kept symbolic so large discrete spectra stay O(1).
    Discrete,
    /// Sorted, deduplicated, lattice-closed, contains empty and full.
    Explicit { opens: Vec<Mask>, min_opens: Vec<Mask> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinTopSpace {
    n_points: u32,
    family: Family,
}

impl FinTopSpace {
    /// Discrete topology on `n` points.
    pub fn discrete(n: u32) -> Result<Self, TopologyError> {
        if n == 0 {
            return Err(TopologyError::DegenerateSpace);
        }
        if n > MAX_POINTS {
            return Err(TopologyError::TooManyPoints(n));
        }
        Ok(FinTopSpace { n_points: n, family: Family::Discrete })
    }

    pub fn n_points(&self) -> u32 {
        self.n_points
    }

    pub fn full(&self) -> Mask {
        mask::full_mask(self.n_points)
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.family, Family::Discrete)
    }

    pub fn is_open(&self, s: Mask) -> bool {
        if !mask::is_subset(s, self.full()) {
            return false;
        }
        match &self.family {
            Family::Discrete => true,
            Family::Explicit { opens, .. } => opens.binary_search(&s).is_ok(),
        }
    }

    /// Union of all opens contained in `s`: the largest open inside `s`.
    pub fn interior(&self, s: Mask) -> Mask {
        let s = s & self.full();
        match &self.family {
            Family::Discrete => s,
            Family::Explicit { opens, .. } => {
                opens.iter().filter(|&&o| mask::is_subset(o, s)).fold(0, |acc, &o| acc | o)
            }
        }
    }

    /// Smallest open containing `p`.
    pub fn min_open(&self, p: u32) -> Mask {
        assert!(p < self.n_points, "point {p} out of range");
        match &self.family {
            Family::Discrete => mask::bit(p),
            Family::Explicit { min_opens, .. } => min_opens[p as usize],
        }
    }

    /// The distinct minimal opens, ascending. Every nonempty open contains one.
    pub fn minimal_opens(&self) -> Vec<Mask> {
        let mut v: Vec<Mask> = (0..self.n_points).map(|p| self.min_open(p)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Number of open sets; `None` when 2^n overflows usize bookkeeping.
    pub fn open_count(&self) -> Option<usize> {
        match &self.family {
            Family::Discrete => 1usize.checked_shl(self.n_points),
            Family::Explicit { opens, .. } => Some(opens.len()),
        }
    }

    /// Iterates the open family. For discrete spaces this walks all 2^n
    /// subsets, so callers metering work must budget before looping.
    pub fn iter_opens(&self) -> OpenIter<'_> {
        match &self.family {
            Family::Discrete => OpenIter::Discrete { next: 0, full: self.full(), done: false },
            Family::Explicit { opens, .. } => OpenIter::Explicit(opens.iter()),
        }
    }
}

pub enum OpenIter<'a> {
    Discrete { next: Mask, full: Mask, done: bool },
    Explicit(std::slice::Iter<'a, Mask>),
}

impl Iterator for OpenIter<'_> {
    type Item = Mask;

    fn next(&mut self) -> Option<Mask> {
        match self {
            OpenIter::Discrete { next, full, done } => {
                if *done {
                    return None;
                }
                let cur = *next;
                if cur == *full {
                    *done = true;
                } else {
                    // next subset of `full` in counting order
                    *next = (cur.wrapping_sub(*full)) & *full;
                    debug_assert!(*next > cur || *full == 0);
                }
                Some(cur)
            }
            OpenIter::Explicit(it) => it.next().copied(),
        }
    }
}

/// Closes `generators ∪ {∅, full}` under pairwise union and intersection.
///
/// Idempotent: feeding back an already-closed family reproduces it.
pub fn make_space(n_points: u32, generators: &[Mask]) -> Result<FinTopSpace, TopologyError> {
    if n_points == 0 {
        return Err(TopologyError::DegenerateSpace);
    }
    if n_points > MAX_POINTS {
        return Err(TopologyError::TooManyPoints(n_points));
    }
    let full = mask::full_mask(n_points);
    debug_assert!(generators.iter().all(|&g| mask::is_subset(g, full)));

    let mut family: std::collections::BTreeSet<Mask> = [0, full].into();
    family.extend(generators.iter().map(|&g| g & full));
    loop {
        let snapshot: Vec<Mask> = family.iter().copied().collect();
        let before = family.len();
        for (i, &a) in snapshot.iter().enumerate() {
            for &b in &snapshot[i + 1..] {
                family.insert(a | b);
                family.insert(a & b);
            }
        }
        if family.len() > CLOSURE_CAP {
            return Err(TopologyError::ClosureTooLarge);
        }
        if family.len() == before {
            break;
        }
    }

    let opens: Vec<Mask> = family.into_iter().collect();
    let min_opens: Vec<Mask> = (0..n_points)
        .map(|p| {
            opens
                .iter()
                .filter(|&&o| mask::contains(o, p))
                .fold(full, |acc, &o| acc & o)
        })
        .collect();
    // Finite intersections of opens are opens, so each minimal open is in the family.
    debug_assert!(min_opens.iter().all(|m| opens.binary_search(m).is_ok()));
    Ok(FinTopSpace { n_points, family: Family::Explicit { opens, min_opens } })
}

/// All topologies on `n` points (n ≤ 4), by brute-force closure filtering.
///
/// Exponential in 2^n; meant for the exhaustive test sweeps only.
pub fn all_topologies(n: u32) -> Vec<FinTopSpace> {
    assert!(n >= 1 && n <= 4, "topology enumeration is for the small sweeps");
    let full = mask::full_mask(n);
    let n_subsets = 1usize << n;
    // candidate family = subset of the 2^n subsets, must contain ∅ and full
    let mut out = Vec::new();
    let n_families = 1u64 << n_subsets;
    for code in 0..n_families {
        if code & 1 == 0 || code & (1 << (n_subsets - 1)) == 0 {
            continue; // ∅ is subset 0, full is subset 2^n - 1
        }
        let members: Vec<Mask> =
            (0..n_subsets as u64).filter(|&s| code & (1 << s) != 0).collect();
        let closed = members.iter().all(|&a| {
            members.iter().all(|&b| {
                code & (1 << (a | b)) != 0 && code & (1 << (a & b)) != 0
            })
        });
        if !closed {
            continue;
        }
        let opens: Vec<Mask> = members;
        let min_opens: Vec<Mask> = (0..n)
            .map(|p| {
                opens
                    .iter()
                    .filter(|&&o| mask::contains(o, p))
                    .fold(full, |acc, &o| acc & o)
            })
            .collect();
        out.push(FinTopSpace { n_points: n, family: Family::Explicit { opens, min_opens } });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::mask_from;

    fn sierpinski() -> FinTopSpace {
        make_space(2, &[mask_from([0])]).unwrap()
    }

    #[test]
    fn make_space_sierpinski() {
        let sp = sierpinski();
        let opens: Vec<Mask> = sp.iter_opens().collect();
        assert_eq!(opens, vec![0b00, 0b01, 0b11]);
    }

    #[test]
    fn make_space_two_generators() {
        let sp = make_space(3, &[mask_from([0, 1]), mask_from([1, 2])]).unwrap();
        let opens: Vec<Mask> = sp.iter_opens().collect();
        assert_eq!(opens, vec![0b000, 0b010, 0b011, 0b110, 0b111]);
        assert_eq!(sp.interior(mask_from([0, 1])), mask_from([0, 1]));
    }

    #[test]
    fn make_space_discrete_generators() {
        let sp = make_space(2, &[0b01, 0b10]).unwrap();
        assert_eq!(sp.open_count(), Some(4));
    }

    #[test]
    fn make_space_idempotent() {
        let sp = sierpinski();
        let opens: Vec<Mask> = sp.iter_opens().collect();
        assert_eq!(make_space(2, &opens).unwrap(), sp);
    }

    #[test]
    fn degenerate_space_rejected() {
        assert_eq!(make_space(0, &[]).unwrap_err(), TopologyError::DegenerateSpace);
        assert_eq!(FinTopSpace::discrete(0).unwrap_err(), TopologyError::DegenerateSpace);
        assert_eq!(make_space(65, &[]).unwrap_err(), TopologyError::TooManyPoints(65));
    }

    #[test]
    fn interior_examples() {
        let disc = FinTopSpace::discrete(2).unwrap();
        assert_eq!(disc.interior(0b10), 0b10);

        let sp = sierpinski();
        assert_eq!(sp.interior(mask_from([1])), 0);
        assert_eq!(sp.interior(mask_from([0])), mask_from([0]));
    }

    #[test]
    fn min_open_examples() {
        let disc = FinTopSpace::discrete(2).unwrap();
        assert_eq!(disc.min_open(1), 0b10);

        let sp = sierpinski();
        assert_eq!(sp.min_open(0), mask_from([0]));
        assert_eq!(sp.min_open(1), mask_from([0, 1]));
        assert_eq!(sp.minimal_opens(), vec![0b01, 0b11]);
    }

    #[test]
    fn interior_is_largest_open_inside() {
        for sp in all_topologies(3) {
            for s in 0..8u64 {
                let int = sp.interior(s);
                assert!(sp.is_open(int));
                assert!(mask::is_subset(int, s));
                assert_eq!(sp.interior(int), int);
                for o in sp.iter_opens() {
                    if mask::is_subset(o, s) {
                        assert!(mask::is_subset(o, int));
                    }
                }
                // nonempty interior iff some minimal open fits inside s
                let via_min = mask::iter_points(s).any(|p| mask::is_subset(sp.min_open(p), s));
                assert_eq!(int != 0, via_min);
            }
        }
    }

    #[test]
    fn topology_counts() {
        assert_eq!(all_topologies(1).len(), 1);
        assert_eq!(all_topologies(2).len(), 4);
        assert_eq!(all_topologies(3).len(), 29);
        assert_eq!(all_topologies(4).len(), 355);
    }

    #[test]
    fn discrete_iterates_all_subsets() {
        let sp = FinTopSpace::discrete(3).unwrap();
        let opens: Vec<Mask> = sp.iter_opens().collect();
        assert_eq!(opens.len(), 8);
        assert_eq!(opens[0], 0);
        assert_eq!(opens[7], 0b111);
    }
}
