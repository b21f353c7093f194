//! Directed multigraphs over a finite topological vertex space.
//!
//! Edges are stored as a sequence so parallel edges keep distinct identities:
//! the entrance conditions quantify over edges, not over adjacency. A path is
//! written `(e_n, ..., e_1)` with `rng(e_k) = src(e_{k+1})`; its source is
//! `src(e_1)` and its range `rng(e_n)`, so "paths ending at v" means walks
//! arriving at `v` along edge direction.

use crate::fintop::FinTopSpace;
use crate::mask::{self, Mask};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub src: u32,
    pub rng: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge endpoint {0} out of range for {1} vertices")]
    VertexOutOfRange(u32, u32),
    #[error("multivalued map needs one target set per point ({expected}, got {got})")]
    WrongArity { expected: u32, got: usize },
}

#[derive(Clone, Debug)]
pub struct MultiDigraph {
    space: FinTopSpace,
    edges: Vec<Edge>,
}

/// Vertex sets of the cycles whose every vertex has total in-degree exactly 1
/// in the ambient graph. Such cycles are vertex-disjoint: a shared vertex has
/// a unique in-edge, so the backward walks coincide.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EntranceFreeCycles {
    pub base_points: Mask,
    /// Each cycle in edge direction, rotated so the least vertex comes first.
    pub cycles: Vec<Vec<u32>>,
}

impl MultiDigraph {
    pub fn new(space: FinTopSpace, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let n = space.n_points();
        for e in &edges {
            if e.src >= n {
                return Err(GraphError::VertexOutOfRange(e.src, n));
            }
            if e.rng >= n {
                return Err(GraphError::VertexOutOfRange(e.rng, n));
            }
        }
        Ok(MultiDigraph { space, edges })
    }

    pub fn space(&self) -> &FinTopSpace {
        &self.space
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn n_points(&self) -> u32 {
        self.space.n_points()
    }

    /// Keeps exactly the edges with source in `src_in` and range in `rng_in`;
    /// the vertex space is unchanged.
    pub fn restricted_graph(&self, src_in: Mask, rng_in: Mask) -> MultiDigraph {
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| mask::contains(src_in, e.src) && mask::contains(rng_in, e.rng))
            .collect();
        MultiDigraph { space: self.space.clone(), edges }
    }

    /// `f(v) = {rng(e) : src(e) = v}`, forgetting multiplicities.
    pub fn mv_map(&self) -> MultivaluedMap {
        let mut targets = vec![0 as Mask; self.n_points() as usize];
        for e in &self.edges {
            targets[e.src as usize] |= mask::bit(e.rng);
        }
        MultivaluedMap { space: self.space.clone(), targets }
    }

    /// Sources of edges whose range lies in `v`.
    pub fn preimage_vertices(&self, v: Mask) -> Mask {
        self.edges
            .iter()
            .filter(|e| mask::contains(v, e.rng))
            .fold(0, |acc, e| acc | mask::bit(e.src))
    }

    /// True iff vertex preimages of opens are open.
    pub fn is_continuous_graph(&self) -> bool {
        if self.space.is_discrete() {
            return true;
        }
        self.space.iter_opens().all(|o| self.space.is_open(self.preimage_vertices(o)))
    }

    /// Ranges of arbitrarily long paths: `{v : every length is realized by a
    /// path ending at v}`. The per-length range sets shrink monotonically, so
    /// they stabilize within `n_points` steps and the stable set is returned.
    pub fn infinite_path_range(&self) -> Mask {
        let mut reach = self.space.full();
        for _ in 0..self.n_points() {
            let next = self
                .edges
                .iter()
                .filter(|e| mask::contains(reach, e.src))
                .fold(0, |acc, e| acc | mask::bit(e.rng));
            if next == reach {
                break;
            }
            reach = next;
        }
        reach
    }

    /// Every vertex backward-reachable from `v` (v itself included).
    pub fn backward_closure(&self, v: Mask) -> Mask {
        let mut closure = v;
        loop {
            let grown = closure | self.preimage_vertices(closure);
            if grown == closure {
                return closure;
            }
            closure = grown;
        }
    }

    /// True iff every path ending in `v` stays inside the `u`-restricted
    /// graph; equivalently `v ⊆ u` and the backward closure of `v` lies in
    /// `u` (an offending path yields an offending vertex and conversely).
    pub fn has_past(&self, u: Mask, v: Mask) -> bool {
        mask::is_subset(v, u) && mask::is_subset(self.backward_closure(v), u)
    }

    /// In-degree per vertex, counting parallel edges.
    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n_points() as usize];
        for e in &self.edges {
            deg[e.rng as usize] += 1;
        }
        deg
    }

    /// Cycles inside the `u`-restricted graph with no entrance in `self`:
    /// every cycle vertex has exactly one in-edge in the whole graph, and that
    /// in-edge is the cycle edge.
    pub fn no_entrance_cycle_base_points(&self, u: Mask) -> EntranceFreeCycles {
        let n = self.n_points() as usize;
        let deg = self.in_degrees();
        // pred[v] = source of the unique in-edge, when the in-degree is 1
        // and the edge lies in the u-restricted graph.
        let mut pred = vec![u32::MAX; n];
        for e in &self.edges {
            if deg[e.rng as usize] == 1
                && mask::contains(u, e.rng)
                && mask::contains(u, e.src)
            {
                pred[e.rng as usize] = e.src;
            }
        }
        // Cycles of the partial function v -> pred[v] restricted to vertices
        // where pred[pred[..]] chains stay defined.
        let mut state = vec![0u8; n]; // 0 unvisited, 1 on current walk, 2 done
        let mut result = EntranceFreeCycles::default();
        for start in mask::iter_points(u) {
            if state[start as usize] != 0 {
                continue;
            }
            let mut walk = Vec::new();
            let mut v = start;
            loop {
                if state[v as usize] == 1 {
                    // closed a loop within this walk: extract the cycle part
                    let pos = walk.iter().position(|&w| w == v).unwrap();
                    let mut cycle: Vec<u32> = walk[pos..].to_vec();
                    // walk lists vertices in pred order (backwards); flip to
                    // edge direction and rotate the least vertex to the front
                    cycle.reverse();
                    let min_pos =
                        cycle.iter().enumerate().min_by_key(|(_, &w)| w).unwrap().0;
                    cycle.rotate_left(min_pos);
                    for &w in &cycle {
                        result.base_points |= mask::bit(w);
                    }
                    result.cycles.push(cycle);
                    break;
                }
                if state[v as usize] == 2 {
                    break;
                }
                state[v as usize] = 1;
                walk.push(v);
                let p = pred[v as usize];
                if p == u32::MAX {
                    break;
                }
                v = p;
            }
            for &w in &walk {
                state[w as usize] = 2;
            }
        }
        result.cycles.sort();
        result
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultivaluedMap {
    space: FinTopSpace,
    targets: Vec<Mask>,
}

impl MultivaluedMap {
    pub fn new(space: FinTopSpace, targets: Vec<Mask>) -> Result<Self, GraphError> {
        if targets.len() != space.n_points() as usize {
            return Err(GraphError::WrongArity {
                expected: space.n_points(),
                got: targets.len(),
            });
        }
        let full = space.full();
        for t in &targets {
            if !mask::is_subset(*t, full) {
                let bad = mask::iter_points(*t).find(|&p| !mask::contains(full, p)).unwrap();
                return Err(GraphError::VertexOutOfRange(bad, space.n_points()));
            }
        }
        Ok(MultivaluedMap { space, targets })
    }

    pub fn space(&self) -> &FinTopSpace {
        &self.space
    }

    pub fn targets(&self, v: u32) -> Mask {
        self.targets[v as usize]
    }

    pub fn image(&self, s: Mask) -> Mask {
        mask::iter_points(s).fold(0, |acc, v| acc | self.targets[v as usize])
    }

    /// The graph with one edge `v -> w` per `w ∈ f(v)`, in (src, rng) order.
    pub fn to_graph(&self) -> MultiDigraph {
        let edges = (0..self.space.n_points())
            .flat_map(|v| mask::iter_points(self.targets[v as usize]).map(move |w| Edge { src: v, rng: w }))
            .collect();
        MultiDigraph { space: self.space.clone(), edges }
    }

    /// Keeps targets inside `u` for sources inside `u`.
    pub fn restricted_to(&self, u: Mask) -> MultivaluedMap {
        let targets = (0..self.space.n_points())
            .map(|v| if mask::contains(u, v) { self.targets[v as usize] & u } else { 0 })
            .collect();
        MultivaluedMap { space: self.space.clone(), targets }
    }
}
