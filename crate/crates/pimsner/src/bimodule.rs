//! Literal matrix-unit model of a correspondence, for cross-checking the
//! subset formulas in `corr` at tiny scale.
//!
//! The bimodule is realized on an explicit basis: copy t of the elementary
//! block (i, j) carries vectors indexed by a row p < d_i and a column
//! q < d_j, with matrix units of the algebra acting by index substitution.
//! Every action sends a basis vector to one basis vector or to zero, so
//! balanced tensor products quotient by relations that identify two basis
//! pairs or kill one; union-find with kill flags computes exact dimensions.

use crate::corr::{FinCorr, Ideal};
use crate::mask;
use std::collections::HashMap;

const MAX_PAIRS: usize = 1 << 16;

/// Matrix units of the coefficient algebra, flattened block by block.
struct Units {
    dims: Vec<u64>,
    /// (block, row, col) per unit id
    list: Vec<(u32, u32, u32)>,
}

impl Units {
    fn new(dims: &[u64]) -> Self {
        let mut list = Vec::new();
        for (l, &d) in dims.iter().enumerate() {
            for a in 0..d as u32 {
                for b in 0..d as u32 {
                    list.push((l as u32, a, b));
                }
            }
        }
        Units { dims: dims.to_vec(), list }
    }
}

/// A bimodule with unit-coefficient actions: each matrix unit maps a basis
/// vector to at most one basis vector.
struct Module {
    n_basis: u32,
    /// [unit][basis] -> image basis vector, None for zero
    left: Vec<Vec<Option<u32>>>,
    right: Vec<Vec<Option<u32>>>,
    /// block of the algebra acting nontrivially on the left of each vector
    left_block: Vec<u32>,
    right_block: Vec<u32>,
}

/// The correspondence itself on the basis (i, j, t, p, q).
fn x_module(c: &FinCorr, units: &Units) -> Module {
    let mut keys: Vec<(u32, u32, u32, u32, u32)> = Vec::new();
    for i in 0..c.k() {
        for j in 0..c.k() {
            for t in 0..c.mult()[i as usize][j as usize] as u32 {
                for p in 0..c.dims()[i as usize] as u32 {
                    for q in 0..c.dims()[j as usize] as u32 {
                        keys.push((i, j, t, p, q));
                    }
                }
            }
        }
    }
    let index: HashMap<_, u32> =
        keys.iter().enumerate().map(|(n, &k)| (k, n as u32)).collect();
    let left = units
        .list
        .iter()
        .map(|&(l, a, b)| {
            keys.iter()
                .map(|&(i, j, t, p, q)| {
                    // E_ab E_pq = δ_bp E_aq within block l = i
                    (l == i && b == p).then(|| index[&(i, j, t, a, q)])
                })
                .collect()
        })
        .collect();
    let right = units
        .list
        .iter()
        .map(|&(l, a, b)| {
            keys.iter()
                .map(|&(i, j, t, p, q)| {
                    // E_pq E_ab = δ_qa E_pb within block l = j
                    (l == j && q == a).then(|| index[&(i, j, t, p, b)])
                })
                .collect()
        })
        .collect();
    Module {
        n_basis: keys.len() as u32,
        left,
        right,
        left_block: keys.iter().map(|&(i, ..)| i).collect(),
        right_block: keys.iter().map(|&(_, j, ..)| j).collect(),
    }
}

/// The irreducible left module of one block: column vectors of length d_l.
fn h_module(units: &Units, l: u32) -> Module {
    let d = units.dims[l as usize] as u32;
    let left = units
        .list
        .iter()
        .map(|&(m, a, b)| (0..d).map(|r| (m == l && b == r).then_some(a)).collect())
        .collect();
    Module {
        n_basis: d,
        left,
        right: units.list.iter().map(|_| vec![None; d as usize]).collect(),
        left_block: vec![l; d as usize],
        right_block: vec![l; d as usize],
    }
}

struct Dsu {
    parent: Vec<u32>,
    killed: Vec<bool>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n as u32).collect(), killed: vec![false; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
            self.killed[rb as usize] |= self.killed[ra as usize];
        }
    }

    fn kill(&mut self, x: u32) {
        let r = self.find(x);
        self.killed[r as usize] = true;
    }
}

/// Quotient of the free module on basis pairs by the balanced relations
/// x·a ⊗ m = x ⊗ a·m over all matrix units a.
fn balanced_tensor(m1: &Module, m2: &Module, units: &Units) -> Module {
    let n = m1.n_basis as usize * m2.n_basis as usize;
    assert!(n <= MAX_PAIRS, "literal tensor construction is for tiny scale");
    let pair = |v1: u32, v2: u32| v1 * m2.n_basis + v2;
    let mut dsu = Dsu::new(n);
    for u in 0..units.list.len() {
        for v1 in 0..m1.n_basis {
            for v2 in 0..m2.n_basis {
                let lhs = m1.right[u][v1 as usize].map(|w1| pair(w1, v2));
                let rhs = m2.left[u][v2 as usize].map(|w2| pair(v1, w2));
                match (lhs, rhs) {
                    (Some(a), Some(b)) => dsu.union(a, b),
                    (Some(a), None) => dsu.kill(a),
                    (None, Some(b)) => dsu.kill(b),
                    (None, None) => {}
                }
            }
        }
    }
    // live classes become the new basis, represented by their first member
    let mut class_index: HashMap<u32, u32> = HashMap::new();
    let mut reps: Vec<u32> = Vec::new();
    for raw in 0..n as u32 {
        let root = dsu.find(raw);
        if !dsu.killed[root as usize] && !class_index.contains_key(&root) {
            class_index.insert(root, reps.len() as u32);
            reps.push(raw);
        }
    }
    let mut resolve = |raw: u32| -> Option<u32> {
        let root = dsu.find(raw);
        (!dsu.killed[root as usize]).then(|| class_index[&root])
    };
    let mut left = Vec::with_capacity(units.list.len());
    let mut right = Vec::with_capacity(units.list.len());
    for u in 0..units.list.len() {
        let mut lrow = Vec::with_capacity(reps.len());
        let mut rrow = Vec::with_capacity(reps.len());
        for &rep in &reps {
            let (v1, v2) = (rep / m2.n_basis, rep % m2.n_basis);
            lrow.push(
                m1.left[u][v1 as usize].and_then(|w1| resolve(pair(w1, v2))),
            );
            rrow.push(
                m2.right[u][v2 as usize].and_then(|w2| resolve(pair(v1, w2))),
            );
        }
        left.push(lrow);
        right.push(rrow);
    }
    Module {
        n_basis: reps.len() as u32,
        left,
        right,
        left_block: reps.iter().map(|&r| m1.left_block[(r / m2.n_basis) as usize]).collect(),
        right_block: reps.iter().map(|&r| m2.right_block[(r % m2.n_basis) as usize]).collect(),
    }
}

/// Basis count of the correspondence as a linear space.
pub fn linear_dim(c: &FinCorr) -> u64 {
    let units = Units::new(c.dims());
    x_module(c, &units).n_basis as u64
}

/// Multiplicity matrix recovered from the explicit model: the tensor with
/// each irreducible splits into left blocks whose sizes are multiples of the
/// block dimensions.
pub fn dual_multiplicities(c: &FinCorr) -> Vec<Vec<u64>> {
    let units = Units::new(c.dims());
    let x = x_module(c, &units);
    let k = c.k() as usize;
    let mut m = vec![vec![0u64; k]; k];
    for l in 0..k {
        let h = h_module(&units, l as u32);
        let t = balanced_tensor(&x, &h, &units);
        let mut by_block = vec![0u64; k];
        for v in 0..t.n_basis {
            by_block[t.left_block[v as usize] as usize] += 1;
        }
        for i in 0..k {
            let d = c.dims()[i];
            assert!(by_block[i] % d == 0, "isotypic component must be a multiple of d_i");
            m[i][l] = by_block[i] / d;
        }
    }
    m
}

/// Blocks reached by inner products against the left action of the ideal:
/// right blocks of nonzero vectors of the form (unit of s)·y.
pub fn image_ideal_literal(c: &FinCorr, s: Ideal) -> Ideal {
    let units = Units::new(c.dims());
    let x = x_module(c, &units);
    let mut out: Ideal = 0;
    for (u, &(l, ..)) in units.list.iter().enumerate() {
        if !mask::contains(s, l) {
            continue;
        }
        for y in 0..x.n_basis {
            if let Some(img) = x.left[u][y as usize] {
                out |= mask::bit(x.right_block[img as usize]);
            }
        }
    }
    out
}

/// Blocks whose every inner-product image lands inside `s`.
pub fn preimage_ideal_literal(c: &FinCorr, s: Ideal) -> Ideal {
    let units = Units::new(c.dims());
    let x = x_module(c, &units);
    let mut out: Ideal = 0;
    for l in 0..c.k() {
        let mut hit: Ideal = 0;
        for (u, &(m, ..)) in units.list.iter().enumerate() {
            if m != l {
                continue;
            }
            for y in 0..x.n_basis {
                if let Some(img) = x.left[u][y as usize] {
                    hit |= mask::bit(x.right_block[img as usize]);
                }
            }
        }
        if mask::is_subset(hit, s) {
            out |= mask::bit(l);
        }
    }
    out
}

/// The admissible hull computed from the explicit model: quotient by the
/// submodule X·s (the vectors with right block in s; in finite dimension
/// every left action on the quotient is compact, so only the inner-product
/// clause constrains). Returns the hull together with the quotient's basis
/// count so callers can cross-check the quotient itself.
pub fn j_of_ideal_literal(c: &FinCorr, s: Ideal) -> (Ideal, u64) {
    let units = Units::new(c.dims());
    let x = x_module(c, &units);
    let quotient_dim = (0..x.n_basis)
        .filter(|&v| !mask::contains(s, x.right_block[v as usize]))
        .count() as u64;
    let hull = (s & c.full()) | (c.full() & !preimage_ideal_literal(c, s));
    (hull, quotient_dim)
}

/// Basis count of the n-fold balanced tensor power, n ≥ 1.
pub fn tensor_dim_literal(c: &FinCorr, n: u32) -> u64 {
    assert!(n >= 1, "tensor power dimension needs n >= 1");
    let units = Units::new(c.dims());
    let x = x_module(c, &units);
    let mut acc = x_module(c, &units);
    for _ in 1..n {
        acc = balanced_tensor(&acc, &x, &units);
    }
    acc.n_basis as u64
}
