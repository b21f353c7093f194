//! Finite-dimensional correspondences over direct sums of matrix blocks,
//! presented by block dimensions and a nonnegative multiplicity matrix.
//!
//! The spectrum is {0..k-1} with the discrete topology. All ideal arithmetic
//! happens on vertex subsets of the dual graph, which has `mult[i][j]` edges
//! from j to i; every answer except linear dimensions is independent of the
//! block dimension sequence, and the test sweeps assert that independence.

use crate::conditions::{ConditionFlag, Witness};
use crate::digraph::{Edge, MultiDigraph};
use crate::fintop::FinTopSpace;
use crate::mask::{self, Mask, MAX_POINTS};
use thiserror::Error;

/// Ideals of the coefficient algebra are subsets of the spectrum.
pub type Ideal = Mask;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorrError {
    #[error("block dimensions must be a nonempty list of positive integers, at most {MAX_POINTS} blocks")]
    BadDims,
    #[error("multiplicity matrix must be {expected}x{expected}, got a row of length {got}")]
    BadShape { expected: usize, got: usize },
    #[error("multiplicity arithmetic overflowed")]
    MultiplicityOverflow,
    #[error("ideal {0:?} is not positively invariant")]
    NotInvariant(Vec<u32>),
    #[error("ideal {ideal:?} is not contained in the largest admissible relative ideal {allowed:?}")]
    IdealNotInJX { ideal: Vec<u32>, allowed: Vec<u32> },
}

/// A pair of nested ideals describing one gauge-invariant ideal of the
/// algebra relative to a given ideal: `ideal` is positively invariant and
/// `relative_ideal` sits between it and its admissible hull.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TPair {
    pub ideal: Ideal,
    pub relative_ideal: Ideal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCorr {
    dims: Vec<u64>,
    mult: Vec<Vec<u64>>,
}

impl FinCorr {
    pub fn new(dims: Vec<u64>, mult: Vec<Vec<u64>>) -> Result<Self, CorrError> {
        if dims.is_empty() || dims.len() > MAX_POINTS as usize || dims.iter().any(|&d| d == 0)
        {
            return Err(CorrError::BadDims);
        }
        let k = dims.len();
        if mult.len() != k {
            return Err(CorrError::BadShape { expected: k, got: mult.len() });
        }
        if let Some(row) = mult.iter().find(|row| row.len() != k) {
            return Err(CorrError::BadShape { expected: k, got: row.len() });
        }
        Ok(FinCorr { dims, mult })
    }

    pub fn k(&self) -> u32 {
        self.dims.len() as u32
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    pub fn mult(&self) -> &[Vec<u64>] {
        &self.mult
    }

    pub fn full(&self) -> Ideal {
        mask::full_mask(self.k())
    }

    /// The dual graph on the spectrum: `mult[i][j]` parallel edges j -> i,
    /// emitted source-major so restrictions and reports are reproducible.
    pub fn dual_graph(&self) -> MultiDigraph {
        let k = self.k();
        let mut edges = Vec::new();
        for j in 0..k {
            for i in 0..k {
                for _ in 0..self.mult[i as usize][j as usize] {
                    edges.push(Edge { src: j, rng: i });
                }
            }
        }
        let space = FinTopSpace::discrete(k).expect("k validated at construction");
        MultiDigraph::new(space, edges).expect("edges built within range")
    }

    /// Blocks acting as zero on the left: the zero rows of the matrix.
    pub fn ker_phi(&self) -> Ideal {
        (0..self.k())
            .filter(|&i| self.mult[i as usize].iter().all(|&m| m == 0))
            .fold(0, |acc, i| acc | mask::bit(i))
    }

    /// The largest admissible relative ideal: complement of `ker_phi`.
    pub fn jx(&self) -> Ideal {
        self.full() & !self.ker_phi()
    }

    /// Sources of dual edges whose range lies in `s`.
    pub fn image_ideal(&self, s: Ideal) -> Ideal {
        let mut out = 0;
        for i in mask::iter_points(s & self.full()) {
            for j in 0..self.k() {
                if self.mult[i as usize][j as usize] > 0 {
                    out |= mask::bit(j);
                }
            }
        }
        out
    }

    /// Blocks all of whose dual in-edges have sources in `s`; zero rows
    /// qualify vacuously.
    pub fn preimage_ideal(&self, s: Ideal) -> Ideal {
        (0..self.k())
            .filter(|&i| {
                (0..self.k()).all(|j| {
                    self.mult[i as usize][j as usize] == 0 || mask::contains(s, j)
                })
            })
            .fold(0, |acc, i| acc | mask::bit(i))
    }

    pub fn is_positively_invariant(&self, s: Ideal) -> bool {
        mask::is_subset(self.image_ideal(s), s)
    }

    /// The n-fold tensor power: same blocks, matrix power of multiplicities.
    /// n = 0 yields the trivial correspondence (identity matrix).
    pub fn tensor_power(&self, n: u32) -> Result<FinCorr, CorrError> {
        let k = self.k() as usize;
        let mut acc: Vec<Vec<u64>> =
            (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
        for _ in 0..n {
            let mut next = vec![vec![0u64; k]; k];
            for i in 0..k {
                for j in 0..k {
                    let mut cell: u64 = 0;
                    for l in 0..k {
                        let term = acc[i][l]
                            .checked_mul(self.mult[l][j])
                            .ok_or(CorrError::MultiplicityOverflow)?;
                        cell =
                            cell.checked_add(term).ok_or(CorrError::MultiplicityOverflow)?;
                    }
                    next[i][j] = cell;
                }
            }
            acc = next;
        }
        Ok(FinCorr { dims: self.dims.clone(), mult: acc })
    }

    /// The correspondence over the sub-spectrum `s`. Positive invariance
    /// guarantees the discarded columns never meet the kept rows.
    pub fn restrict(&self, s: Ideal) -> Result<FinCorr, CorrError> {
        if !self.is_positively_invariant(s) {
            return Err(CorrError::NotInvariant(mask::to_sorted_vec(s)));
        }
        let keep = mask::to_sorted_vec(s & self.full());
        let dims = keep.iter().map(|&i| self.dims[i as usize]).collect();
        let mult = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| self.mult[i as usize][j as usize]).collect())
            .collect();
        Ok(FinCorr { dims, mult })
    }

    /// Least n > 0 with the restriction's n-th matrix power equal to the
    /// identity, i.e. the order of the restricted matrix as a permutation;
    /// `None` when the restriction is not a permutation matrix.
    pub fn cyclic_period(&self, s: Ideal) -> Result<Option<u64>, CorrError> {
        assert!(s & self.full() != 0, "cyclic_period needs a nonempty ideal");
        let r = self.restrict(s)?;
        let k = r.k() as usize;
        let mut target = vec![usize::MAX; k]; // target[j] = i with entry 1
        for j in 0..k {
            for i in 0..k {
                match r.mult[i][j] {
                    0 => {}
                    1 if target[j] == usize::MAX => target[j] = i,
                    _ => return Ok(None),
                }
            }
        }
        if target.contains(&usize::MAX) || !all_distinct(&target) {
            return Ok(None);
        }
        // order of the permutation: lcm of its cycle lengths
        let mut period: u64 = 1;
        let mut seen = vec![false; k];
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = target[cur];
                len += 1;
            }
            period = lcm(period, len);
        }
        Ok(Some(period))
    }

    /// No nonzero positively invariant ideal inside `j` restricts to a
    /// permutation. Such ideals are exactly unions of vertex sets of dual
    /// cycles without entrances, so scanning those cycles decides; the
    /// subset-enumeration fallback `j_acyclic_oracle` double-checks in tests.
    pub fn is_j_acyclic(&self, j: Ideal) -> Result<ConditionFlag, CorrError> {
        self.ensure_relative(j)?;
        let info = self.dual_graph().no_entrance_cycle_base_points(j);
        match info.cycles.first() {
            None => Ok(ConditionFlag::pass()),
            Some(cycle) => {
                let mut ideal = cycle.clone();
                ideal.sort_unstable();
                Ok(ConditionFlag::fail(Witness::CyclicIdeal {
                    ideal,
                    period: cycle.len() as u64,
                }))
            }
        }
    }

    /// True when high tensor powers kill every left action: the dual graph
    /// has no cycles at all.
    pub fn quasi_nilpotent(&self) -> bool {
        let k = self.k();
        (0..k).all(|v| {
            let mut reach = self.image_ideal_transpose(mask::bit(v));
            loop {
                if mask::contains(reach, v) {
                    return false;
                }
                let grown = reach | self.image_ideal_transpose(reach);
                if grown == reach {
                    return true;
                }
                reach = grown;
            }
        })
    }

    // successors in the dual graph of all vertices in s: {i : ∃j∈s N[i][j]>0}
    fn image_ideal_transpose(&self, s: Ideal) -> Ideal {
        (0..self.k())
            .filter(|&i| {
                mask::iter_points(s).any(|j| self.mult[i as usize][j as usize] > 0)
            })
            .fold(0, |acc, i| acc | mask::bit(i))
    }

    /// The largest ideal `s` may be extended to relatively: `s` itself plus
    /// every block whose dual in-edges do not all come from `s`.
    pub fn j_of_ideal(&self, s: Ideal) -> Result<Ideal, CorrError> {
        if !self.is_positively_invariant(s) {
            return Err(CorrError::NotInvariant(mask::to_sorted_vec(s)));
        }
        Ok((s & self.full()) | (self.full() & !self.preimage_ideal(s)))
    }

    /// All pairs (I, I') with I positively invariant, I ⊆ I' ⊆ J(I), and
    /// j ⊆ I', sorted by (I, I'). Enumeration is exponential in k.
    pub fn t_pairs(&self, j: Ideal) -> Result<Vec<TPair>, CorrError> {
        self.ensure_relative(j)?;
        let full = self.full();
        let mut pairs = Vec::new();
        let mut s: Mask = 0;
        loop {
            if self.is_positively_invariant(s) {
                let hull = self.j_of_ideal(s)?;
                let required = j & !s;
                if mask::is_subset(required, hull) {
                    // s' = s ∪ required ∪ (any subset of the free positions)
                    let free = hull & !s & !required;
                    let mut extra = free;
                    loop {
                        pairs.push(TPair {
                            ideal: s,
                            relative_ideal: s | required | extra,
                        });
                        if extra == 0 {
                            break;
                        }
                        extra = (extra - 1) & free;
                    }
                }
            }
            if s == full {
                break;
            }
            s = s.wrapping_sub(full) & full; // next subset of full, ascending
        }
        pairs.sort_unstable();
        Ok(pairs)
    }

    fn ensure_relative(&self, j: Ideal) -> Result<(), CorrError> {
        let jx = self.jx();
        if mask::is_subset(j, jx) {
            Ok(())
        } else {
            Err(CorrError::IdealNotInJX {
                ideal: mask::to_sorted_vec(j),
                allowed: mask::to_sorted_vec(jx),
            })
        }
    }
}

/// Reference search for cyclic invariant ideals inside `j` by plain subset
/// enumeration; exponential, intended for k ≤ 16.
pub fn j_acyclic_oracle(c: &FinCorr, j: Ideal) -> Result<ConditionFlag, CorrError> {
    c.ensure_relative(j)?;
    assert!(c.k() <= 16, "subset enumeration is limited to 16 blocks");
    let mut s = j;
    loop {
        if s != 0 && c.is_positively_invariant(s) {
            if let Some(period) = c.cyclic_period(s)? {
                return Ok(ConditionFlag::fail(Witness::CyclicIdeal {
                    ideal: mask::to_sorted_vec(s),
                    period,
                }));
            }
        }
        if s == 0 {
            return Ok(ConditionFlag::pass());
        }
        s = (s - 1) & j;
    }
}

fn all_distinct(xs: &[usize]) -> bool {
    xs.iter().enumerate().all(|(n, x)| !xs[..n].contains(x))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
