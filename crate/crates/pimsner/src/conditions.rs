//! The four open-set conditions on a graph or multivalued map: topological
//! freeness, strong topological freeness, topological aperiodicity, weak
//! topological aperiodicity.
//!
//! Quantifiers over "every nonempty open V" reduce to minimal opens: every
//! nonempty open contains one, candidacy constraints (lying inside the
//! infinite-path range, having a past) pass to subsets, and each condition is
//! monotone under shrinking V. The reductions here are exact, not heuristic;
//! `oracle` re-evaluates the literal quantifiers and the test sweeps compare.

use crate::digraph::{MultiDigraph, MultivaluedMap};
use crate::fintop::FinTopSpace;
use crate::mask::{self, Mask};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConditionError {
    #[error("subset {0:?} is not open in the vertex topology")]
    NotOpen(Vec<u32>),
}

/// Structured counterexample attached to a failed condition. Fields hold
/// sorted vertex lists; cycles are in edge direction, least vertex first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Witness {
    /// An open set inside the base points of entrance-free cycles.
    EntranceFreeCycle { open: Vec<u32>, cycle: Vec<u32> },
    /// Non-returning paths into `open` exist only up to `max_length`.
    BoundedNonReturning { open: Vec<u32>, max_length: u64 },
    /// An open set (in the subspace) all of whose points are periodic, with
    /// the per-point shortest period recorded in matching order.
    PeriodicOpen { open: Vec<u32>, point_periods: Vec<u64> },
    /// No length-`length` path ends at a point of `open` while avoiding its
    /// own endpoint as a source.
    MissingPath { open: Vec<u32>, length: u64 },
    /// A nonzero positively invariant ideal on which the correspondence
    /// restricts to a permutation with the given power returning to identity.
    CyclicIdeal { ideal: Vec<u32>, period: u64 },
    /// A gauge-invariant ideal other than the two trivial ones.
    GaugeIdealPair { ideal: Vec<u32>, relative_ideal: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFlag {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl ConditionFlag {
    pub fn pass() -> Self {
        ConditionFlag { holds: true, witness: None }
    }

    pub fn fail(witness: Witness) -> Self {
        ConditionFlag { holds: false, witness: Some(witness) }
    }
}

fn ensure_open(space: &FinTopSpace, u: Mask) -> Result<(), ConditionError> {
    if space.is_open(u) {
        Ok(())
    } else {
        Err(ConditionError::NotOpen(mask::to_sorted_vec(u)))
    }
}

/// Topological freeness of `g` on the open set `u`: the base points of cycles
/// in the `u`-restricted graph without entrances in `g` have empty interior.
pub fn is_topologically_free_on(
    g: &MultiDigraph,
    u: Mask,
) -> Result<ConditionFlag, ConditionError> {
    ensure_open(g.space(), u)?;
    let info = g.no_entrance_cycle_base_points(u);
    let interior = g.space().interior(info.base_points);
    if interior == 0 {
        return Ok(ConditionFlag::pass());
    }
    let p = interior.trailing_zeros();
    let cycle = info
        .cycles
        .iter()
        .find(|c| c.contains(&p))
        .expect("interior point lies on some entrance-free cycle")
        .clone();
    Ok(ConditionFlag::fail(Witness::EntranceFreeCycle {
        open: mask::to_sorted_vec(g.space().min_open(p)),
        cycle,
    }))
}

/// Minimal opens that qualify as test sets for the path conditions: nonempty,
/// inside the infinite-path range of `g`, with a past in the `u`-restriction.
fn path_candidates(g: &MultiDigraph, u: Mask) -> Vec<Mask> {
    let ipr = g.infinite_path_range();
    g.space()
        .minimal_opens()
        .into_iter()
        .filter(|&v| v != 0 && mask::is_subset(v, ipr) && g.has_past(u, v))
        .collect()
}

/// Successor masks per vertex, skipping one edge id (`usize::MAX` skips none).
fn succ_masks(g: &MultiDigraph, skip_edge: usize) -> Vec<Mask> {
    let mut succ = vec![0 as Mask; g.n_points() as usize];
    for (id, e) in g.edges().iter().enumerate() {
        if id != skip_edge {
            succ[e.src as usize] |= mask::bit(e.rng);
        }
    }
    succ
}

fn forward_closure(succ: &[Mask], start: Mask) -> Mask {
    let mut reach = start;
    loop {
        let grown = mask::iter_points(reach).fold(reach, |acc, v| acc | succ[v as usize]);
        if grown == reach {
            return reach;
        }
        reach = grown;
    }
}

fn backward_closure_of(succ: &[Mask], targets: Mask) -> Mask {
    let mut reach = targets;
    loop {
        let grown = (0..succ.len() as u32)
            .filter(|&v| succ[v as usize] & reach != 0)
            .fold(reach, |acc, v| acc | mask::bit(v));
        if grown == reach {
            return reach;
        }
        reach = grown;
    }
}

/// Vertices lying on a cycle: reachable from themselves in ≥ 1 steps.
fn cycle_vertices(succ: &[Mask]) -> Mask {
    let mut on_cycle = 0;
    for v in 0..succ.len() as u32 {
        if mask::contains(forward_closure(succ, succ[v as usize]), v) {
            on_cycle |= mask::bit(v);
        }
    }
    on_cycle
}

/// Strong topological freeness of `g` on `u`: every qualifying open receives
/// non-returning paths of arbitrarily large length. A non-returning path is a
/// first edge `e` followed by a walk avoiding `e`; arbitrarily long ones exist
/// iff for some first edge the remaining graph has a cycle vertex reachable
/// from its range that also reaches the open set.
pub fn is_strongly_topologically_free_on(
    g: &MultiDigraph,
    u: Mask,
) -> Result<ConditionFlag, ConditionError> {
    ensure_open(g.space(), u)?;
    for v_open in path_candidates(g, u) {
        let mut relay = false;
        for id in 0..g.edges().len() {
            let succ = succ_masks(g, id);
            let from = forward_closure(&succ, mask::bit(g.edges()[id].rng));
            let into = backward_closure_of(&succ, v_open);
            if from & into & cycle_vertices(&succ) != 0 {
                relay = true;
                break;
            }
        }
        if !relay {
            return Ok(ConditionFlag::fail(Witness::BoundedNonReturning {
                open: mask::to_sorted_vec(v_open),
                max_length: longest_non_returning(g, v_open),
            }));
        }
    }
    Ok(ConditionFlag::pass())
}

/// Maximum length of a non-returning path ending in `v_open`, assuming no
/// relay cycle exists (so the relevant subgraphs are acyclic); 0 if none.
fn longest_non_returning(g: &MultiDigraph, v_open: Mask) -> u64 {
    let mut best = 0u64;
    for id in 0..g.edges().len() {
        let succ = succ_masks(g, id);
        let r = g.edges()[id].rng;
        let keep = forward_closure(&succ, mask::bit(r)) & backward_closure_of(&succ, v_open);
        if !mask::contains(keep, r) {
            continue;
        }
        // longest walk from r to v_open within `keep`; acyclic by assumption
        let mut memo = vec![None::<Option<u64>>; g.n_points() as usize];
        let walk = longest_walk(&succ, keep, v_open, r, &mut memo)
            .expect("r lies in keep, so some walk reaches v_open");
        best = best.max(1 + walk);
    }
    best
}

fn longest_walk(
    succ: &[Mask],
    keep: Mask,
    targets: Mask,
    v: u32,
    memo: &mut Vec<Option<Option<u64>>>,
) -> Option<u64> {
    if let Some(cached) = memo[v as usize] {
        return cached;
    }
    memo[v as usize] = Some(None); // marks in-progress; keep is acyclic here
    let mut best: Option<u64> = if mask::contains(targets, v) { Some(0) } else { None };
    for w in mask::iter_points(succ[v as usize] & keep) {
        if let Some(rest) = longest_walk(succ, keep, targets, w, memo) {
            best = Some(best.map_or(rest + 1, |b| b.max(rest + 1)));
        }
    }
    memo[v as usize] = Some(best);
    best
}

/// Topological aperiodicity of the `u`-restriction of `f`: for every n > 0
/// the n-periodic points have empty interior in the subspace topology on `u`.
/// Failure is equivalent to some minimal subspace open consisting entirely of
/// points on cycles of the restricted map (taking n = lcm of their periods).
pub fn is_topologically_aperiodic_on(
    f: &MultivaluedMap,
    u: Mask,
) -> Result<ConditionFlag, ConditionError> {
    ensure_open(f.space(), u)?;
    let rest = f.restricted_to(u);
    let periodic = mask::iter_points(u)
        .filter(|&v| {
            let mut reach = rest.targets(v);
            loop {
                if mask::contains(reach, v) {
                    return true;
                }
                let grown = reach | rest.image(reach);
                if grown == reach {
                    return false;
                }
                reach = grown;
            }
        })
        .fold(0, |acc, v| acc | mask::bit(v));

    let mut seen: Vec<Mask> = Vec::new();
    for p in mask::iter_points(u) {
        let m = f.space().min_open(p) & u;
        if m == 0 || seen.contains(&m) {
            continue;
        }
        seen.push(m);
        if mask::is_subset(m, periodic) {
            let point_periods =
                mask::iter_points(m).map(|v| shortest_period(&rest, v)).collect();
            return Ok(ConditionFlag::fail(Witness::PeriodicOpen {
                open: mask::to_sorted_vec(m),
                point_periods,
            }));
        }
    }
    Ok(ConditionFlag::pass())
}

fn shortest_period(rest: &MultivaluedMap, v: u32) -> u64 {
    let mut front = rest.targets(v);
    for t in 1..=rest.space().n_points() as u64 {
        if mask::contains(front, v) {
            return t;
        }
        front = rest.image(front);
    }
    unreachable!("caller guarantees v is periodic under the restricted map");
}

/// Per-candidate outcome of the weak-aperiodicity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakApCandidate {
    pub v_open: Mask,
    pub holds: bool,
    /// Least n with no admissible length-n path, when failing.
    pub first_failure: Option<u64>,
    /// The per-n sequence is eventually periodic; all n are decided by the
    /// values at 1..=horizon.
    pub horizon: u64,
}

/// Weak topological aperiodicity of `f` on `u`: for every qualifying minimal
/// open V and every n > 0, some length-n path of the graph of `f` ends at a
/// point v ∈ V without using v as a source. Decided exactly by iterating the
/// per-endpoint backward reachability states until the joint state repeats.
pub fn is_weakly_topologically_aperiodic_on(
    f: &MultivaluedMap,
    u: Mask,
) -> Result<ConditionFlag, ConditionError> {
    let candidates = weak_aperiodicity_candidates(f, u)?;
    for c in &candidates {
        if !c.holds {
            return Ok(ConditionFlag::fail(Witness::MissingPath {
                open: mask::to_sorted_vec(c.v_open),
                length: c.first_failure.unwrap(),
            }));
        }
    }
    Ok(ConditionFlag::pass())
}

/// The qualifying minimal opens with their outcomes, in ascending mask order.
pub fn weak_aperiodicity_candidates(
    f: &MultivaluedMap,
    u: Mask,
) -> Result<Vec<WeakApCandidate>, ConditionError> {
    ensure_open(f.space(), u)?;
    let graph = f.to_graph();
    Ok(path_candidates(&graph, u)
        .into_iter()
        .map(|v_open| weak_ap_at_candidate(&graph, v_open))
        .collect())
}

fn weak_ap_at_candidate(g: &MultiDigraph, v_open: Mask) -> WeakApCandidate {
    let n = g.n_points() as usize;
    let endpoints: Vec<u32> = mask::to_sorted_vec(v_open);
    // pred_of[v][y] = sources w ≠ v of edges w -> y; walks through these
    // masks are exactly the paths ending at v that never use v as a source.
    let pred_of: Vec<Vec<Mask>> = endpoints
        .iter()
        .map(|&v| {
            let mut pred = vec![0 as Mask; n];
            for e in g.edges() {
                if e.src != v {
                    pred[e.rng as usize] |= mask::bit(e.src);
                }
            }
            pred
        })
        .collect();

    let step = |state: &[Mask]| -> Vec<Mask> {
        state
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                mask::iter_points(s).fold(0, |acc, y| acc | pred_of[i][y as usize])
            })
            .collect()
    };

    let mut state: Vec<Mask> = endpoints.iter().map(|&v| mask::bit(v)).collect();
    let mut seen: HashMap<Vec<Mask>, u64> = HashMap::new();
    seen.insert(state.clone(), 0);
    let mut admissible: Vec<bool> = Vec::new(); // admissible[m-1] = c_m
    let mut m = 0u64;
    loop {
        state = step(&state);
        m += 1;
        admissible.push(state.iter().any(|&s| s != 0));
        if seen.contains_key(&state) {
            break;
        }
        seen.insert(state.clone(), m);
    }
    let first_failure = admissible.iter().position(|&ok| !ok).map(|i| i as u64 + 1);
    WeakApCandidate { v_open, holds: first_failure.is_none(), first_failure, horizon: m }
}

/// Reference predicate for partial single-valued maps: the periodic points
/// whose orbit avoids `excluded` and admits no entrance (no point outside the
/// orbit mapping into it) must have empty interior. For any topology this
/// set coincides with the entrance-free cycle base points of the graph of the
/// map restricted to the complement of `excluded`; the sweeps assert that.
pub fn tf_outside(space: &FinTopSpace, domain: Mask, phi: &[u32], excluded: Mask) -> bool {
    debug_assert_eq!(phi.len(), space.n_points() as usize);
    let mut qualifying = 0 as Mask;
    for v in mask::iter_points(domain) {
        // follow the orbit of v; periodic iff it returns to v inside domain
        let mut orbit = mask::bit(v);
        let mut cur = v;
        let periodic = loop {
            if !mask::contains(domain, cur) {
                break false;
            }
            let next = phi[cur as usize];
            if next == v {
                break true;
            }
            if mask::contains(orbit, next) {
                break false; // settled into a cycle not through v
            }
            orbit |= mask::bit(next);
            cur = next;
        };
        if !periodic || orbit & excluded != 0 {
            continue;
        }
        let entrance = mask::iter_points(domain & !orbit)
            .any(|y| mask::contains(orbit, phi[y as usize]));
        if !entrance {
            qualifying |= mask::bit(v);
        }
    }
    space.interior(qualifying) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Edge;
    use crate::fintop::make_space;
    use crate::mask::mask_from;

    fn discrete_graph(n: u32, edges: &[(u32, u32)]) -> MultiDigraph {
        MultiDigraph::new(
            FinTopSpace::discrete(n).unwrap(),
            edges.iter().map(|&(src, rng)| Edge { src, rng }).collect(),
        )
        .unwrap()
    }

    fn sierpinski_graph() -> MultiDigraph {
        let sp = make_space(2, &[mask_from([0])]).unwrap();
        MultiDigraph::new(sp, vec![Edge { src: 1, rng: 0 }, Edge { src: 1, rng: 1 }]).unwrap()
    }

    fn discrete_map(n: u32, targets: &[&[u32]]) -> MultivaluedMap {
        MultivaluedMap::new(
            FinTopSpace::discrete(n).unwrap(),
            targets.iter().map(|t| mask_from(t.iter().copied())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn not_open_is_rejected() {
        let g = sierpinski_graph();
        let err = is_topologically_free_on(&g, mask_from([1])).unwrap_err();
        assert_eq!(err, ConditionError::NotOpen(vec![1]));
    }

    #[test]
    fn tf_examples() {
        let s = sierpinski_graph();
        assert!(is_topologically_free_on(&s, s.space().full()).unwrap().holds);

        let lp = discrete_graph(1, &[(0, 0)]);
        let flag = is_topologically_free_on(&lp, 0b1).unwrap();
        assert!(!flag.holds);
        assert_eq!(
            flag.witness.unwrap(),
            Witness::EntranceFreeCycle { open: vec![0], cycle: vec![0] }
        );

        let two_loops = discrete_graph(1, &[(0, 0), (0, 0)]);
        assert!(is_topologically_free_on(&two_loops, 0b1).unwrap().holds);
    }

    #[test]
    fn strong_tf_examples() {
        let s = sierpinski_graph();
        let flag = is_strongly_topologically_free_on(&s, s.space().full()).unwrap();
        assert!(!flag.holds);
        assert_eq!(
            flag.witness.unwrap(),
            Witness::BoundedNonReturning { open: vec![0], max_length: 2 }
        );

        let two_loops = discrete_graph(1, &[(0, 0), (0, 0)]);
        assert!(is_strongly_topologically_free_on(&two_loops, 0b1).unwrap().holds);

        // bounded paths but empty infinite-path range: vacuously strong
        let chain = discrete_graph(2, &[(0, 1)]);
        assert!(is_strongly_topologically_free_on(&chain, 0b11).unwrap().holds);
    }

    #[test]
    fn aperiodicity_examples() {
        // constant map onto a fixed point: {1} is open and periodic
        let f = discrete_map(2, &[&[1], &[1]]);
        let flag = is_topologically_aperiodic_on(&f, 0b11).unwrap();
        assert!(!flag.holds);
        assert_eq!(
            flag.witness.unwrap(),
            Witness::PeriodicOpen { open: vec![1], point_periods: vec![1] }
        );
        assert!(!is_topologically_aperiodic_on(&f, 0b10).unwrap().holds);

        let g = discrete_map(2, &[&[1], &[]]);
        assert!(is_topologically_aperiodic_on(&g, 0b11).unwrap().holds);

        // on the Sierpinski space the lone periodic point {1} has empty interior
        let sp = make_space(2, &[mask_from([0])]).unwrap();
        let h = MultivaluedMap::new(sp, vec![0, mask_from([0, 1])]).unwrap();
        assert!(is_topologically_aperiodic_on(&h, 0b11).unwrap().holds);
    }

    #[test]
    fn weak_aperiodicity_constant_map() {
        // f(0) = f(1) = {1}: fails on the full set, holds on {1} where the
        // only would-be test set lacks a past.
        let f = discrete_map(2, &[&[1], &[1]]);
        let on_full = is_weakly_topologically_aperiodic_on(&f, 0b11).unwrap();
        assert!(!on_full.holds);
        assert_eq!(
            on_full.witness.unwrap(),
            Witness::MissingPath { open: vec![1], length: 2 }
        );
        assert!(is_weakly_topologically_aperiodic_on(&f, 0b10).unwrap().holds);
    }

    #[test]
    fn weak_aperiodicity_fails_while_tf_holds() {
        let f = discrete_map(2, &[&[1], &[0, 1]]);
        let flag = is_weakly_topologically_aperiodic_on(&f, 0b11).unwrap();
        assert!(!flag.holds);
        assert_eq!(
            flag.witness.unwrap(),
            Witness::MissingPath { open: vec![1], length: 2 }
        );
        assert!(is_topologically_free_on(&f.to_graph(), 0b11).unwrap().holds);
    }

    #[test]
    fn weak_aperiodicity_fixed_point() {
        let f = discrete_map(1, &[&[0]]);
        let flag = is_weakly_topologically_aperiodic_on(&f, 0b1).unwrap();
        assert!(!flag.holds);
        assert_eq!(
            flag.witness.unwrap(),
            Witness::MissingPath { open: vec![0], length: 1 }
        );
    }

    #[test]
    fn weak_candidates_expose_state_horizon() {
        let f = discrete_map(2, &[&[1], &[1]]);
        let cands = weak_aperiodicity_candidates(&f, 0b11).unwrap();
        assert_eq!(cands.len(), 1);
        assert_eq!(cands[0].v_open, 0b10);
        assert_eq!(cands[0].first_failure, Some(2));
    }

    #[test]
    fn tf_outside_matches_graph_freeness() {
        // single-valued map with a fixed point that has an entrance
        let space = FinTopSpace::discrete(2).unwrap();
        let phi = vec![1, 1];
        // excluded = ∅: the fixed point 1 has entrance 0, so the set is empty
        assert!(tf_outside(&space, 0b11, &phi, 0));
        // excluding 0 removes the entrance's point from the domain side too:
        // domain {1} keeps orbit {1} entranceless, so freeness fails
        assert!(!tf_outside(&space, 0b10, &phi, 0));
        // orbit meeting the excluded set is discarded
        assert!(tf_outside(&space, 0b10, &phi, 0b10));
    }
}
