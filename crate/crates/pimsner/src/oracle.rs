//! Brute-force reference evaluations of the open-set conditions, quantifying
//! literally over all opens and all path lengths up to `n_max`.
//!
//! These deliberately share no logic with the fast deciders in `conditions`:
//! sets of paths are enumerated per length, opens are enumerated from the
//! topology, and every quantifier is evaluated as written. Truncation at
//! `n_max` keeps failure detection sound; the test suites only assert
//! agreement where `n_max` exceeds the stabilization bound for the instance
//! size, and every run is metered so runaway enumeration errors out instead
//! of hanging.

use crate::conditions::{ConditionError, ConditionFlag, Witness};
use crate::digraph::MultiDigraph;
use crate::mask::{self, Mask};
use std::collections::HashMap;
use thiserror::Error;

/// Default step cap for a single oracle evaluation.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error("oracle enumeration exceeded its budget of {budget} steps")]
    BudgetExceeded { budget: u64 },
}

/// Which condition the oracle evaluates. The two aperiodicity variants are
/// the closed-form one (periodic-point interiors) and the path formulation
/// it is equivalent to; both are kept so the equivalence itself is testable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionKind {
    TopFree,
    StrongTopFree,
    Aperiodic,
    AperiodicPaths,
    WeakAperiodic,
}

struct Meter {
    left: u64,
    budget: u64,
}

impl Meter {
    fn new(budget: u64) -> Self {
        Meter { left: budget, budget }
    }

    fn charge(&mut self, steps: u64) -> Result<(), OracleError> {
        if self.left < steps {
            return Err(OracleError::BudgetExceeded { budget: self.budget });
        }
        self.left -= steps;
        Ok(())
    }
}

pub fn oracle_condition(
    g: &MultiDigraph,
    u: Mask,
    kind: ConditionKind,
    n_max: u64,
) -> Result<ConditionFlag, OracleError> {
    oracle_condition_budgeted(g, u, kind, n_max, DEFAULT_BUDGET)
}

pub fn oracle_condition_budgeted(
    g: &MultiDigraph,
    u: Mask,
    kind: ConditionKind,
    n_max: u64,
    budget: u64,
) -> Result<ConditionFlag, OracleError> {
    if !g.space().is_open(u) {
        return Err(ConditionError::NotOpen(mask::to_sorted_vec(u)).into());
    }
    let mut meter = Meter::new(budget);
    match kind {
        ConditionKind::TopFree => top_free(g, u, n_max, &mut meter),
        ConditionKind::StrongTopFree => strong_top_free(g, u, n_max, &mut meter),
        ConditionKind::Aperiodic => aperiodic(g, u, n_max, &mut meter),
        ConditionKind::AperiodicPaths => aperiodic_paths(g, u, n_max, &mut meter),
        ConditionKind::WeakAperiodic => weak_aperiodic(g, u, n_max, &mut meter),
    }
}

/// Ranges of arbitrarily long paths over the given edge set: the per-length
/// range sets decrease, so the first repeat is the stable value.
fn range_sets_stable(
    edges: &[(u32, u32)],
    n_points: u32,
    meter: &mut Meter,
) -> Result<Mask, OracleError> {
    let mut cur: Mask = mask::full_mask(n_points);
    loop {
        meter.charge(edges.len() as u64 + 1)?;
        let next = edges
            .iter()
            .filter(|&&(src, _)| mask::contains(cur, src))
            .fold(0, |acc, &(_, rng)| acc | mask::bit(rng));
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
}

/// Every path ending in `v` stays inside `u`: grow the set of path sources
/// backwards until stable and check containment along the way.
fn has_past_literal(
    g: &MultiDigraph,
    u: Mask,
    v: Mask,
    meter: &mut Meter,
) -> Result<bool, OracleError> {
    if !mask::is_subset(v, u) {
        return Ok(false);
    }
    let mut cur = v;
    loop {
        meter.charge(g.edges().len() as u64 + 1)?;
        let grown = g
            .edges()
            .iter()
            .filter(|e| mask::contains(cur, e.rng))
            .fold(cur, |acc, e| acc | mask::bit(e.src));
        if !mask::is_subset(grown, u) {
            return Ok(false);
        }
        if grown == cur {
            return Ok(true);
        }
        cur = grown;
    }
}

/// Collects the nonempty opens, charging for the family size first so a
/// large discrete space fails the budget instead of materializing 2^n sets.
fn nonempty_opens(g: &MultiDigraph, meter: &mut Meter) -> Result<Vec<Mask>, OracleError> {
    let count = g.space().open_count().map_or(u64::MAX, |c| c as u64);
    meter.charge(count)?;
    Ok(g.space().iter_opens().filter(|&o| o != 0).collect())
}

/// Per-n enumeration of closed walks in the u-restriction whose every edge
/// is the sole edge of the whole graph into its range; the per-n base-point
/// sets must all have empty interior.
fn top_free(
    g: &MultiDigraph,
    u: Mask,
    n_max: u64,
    meter: &mut Meter,
) -> Result<ConditionFlag, OracleError> {
    let edges = g.edges();
    let sole_entry: Vec<bool> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            edges.iter().enumerate().all(|(j, f)| i == j || f.rng != e.rng)
        })
        .collect();
    let mut out: Vec<Vec<u32>> = vec![Vec::new(); g.n_points() as usize];
    for (i, e) in edges.iter().enumerate() {
        // an edge with a sibling into the same range can never sit on a
        // no-entrance walk, so it is excluded from the search space up front
        if sole_entry[i] && mask::contains(u, e.src) && mask::contains(u, e.rng) {
            out[e.src as usize].push(e.rng);
        }
    }
    for n in 1..=n_max {
        let mut base: Mask = 0;
        let mut sample: Vec<Option<Vec<u32>>> = vec![None; g.n_points() as usize];
        for start in mask::iter_points(u) {
            let mut trail = vec![start];
            if closed_walk(&out, start, n, &mut trail, meter)? {
                base |= mask::bit(start);
                sample[start as usize] = Some(trail);
            }
        }
        let interior = g.space().interior(base);
        if interior != 0 {
            let p = interior.trailing_zeros();
            let trail = sample[p as usize].take().expect("base point recorded a walk");
            return Ok(ConditionFlag::fail(Witness::EntranceFreeCycle {
                open: mask::to_sorted_vec(g.space().min_open(p)),
                cycle: canonical_cycle(&trail),
            }));
        }
    }
    Ok(ConditionFlag::pass())
}

/// Depth-first search for one closed walk of the exact remaining length;
/// `trail` ends holding the visited vertices starting at the base point.
fn closed_walk(
    out: &[Vec<u32>],
    start: u32,
    remaining: u64,
    trail: &mut Vec<u32>,
    meter: &mut Meter,
) -> Result<bool, OracleError> {
    let cur = *trail.last().unwrap();
    if remaining == 0 {
        return Ok(cur == start);
    }
    for &next in &out[cur as usize] {
        meter.charge(1)?;
        trail.push(next);
        if closed_walk(out, start, remaining - 1, trail, meter)? {
            return Ok(true);
        }
        trail.pop();
    }
    Ok(false)
}

/// Cut a closed walk's vertex trail at its first return to the base point
/// and rotate the least vertex to the front.
fn canonical_cycle(trail: &[u32]) -> Vec<u32> {
    let start = trail[0];
    let first_return = trail[1..].iter().position(|&v| v == start);
    let mut cycle: Vec<u32> = match first_return {
        Some(i) => trail[..=i].to_vec(),
        None => trail.to_vec(),
    };
    let min_pos = cycle
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(i, _)| i)
        .unwrap();
    cycle.rotate_left(min_pos);
    cycle
}

/// For every qualifying open V, look for a non-returning path whose length
/// lands in the window [n_max, n_max + n_points]: a first edge followed by a
/// per-length reachability sweep in the graph with that edge removed.
fn strong_top_free(
    g: &MultiDigraph,
    u: Mask,
    n_max: u64,
    meter: &mut Meter,
) -> Result<ConditionFlag, OracleError> {
    let n_points = g.n_points();
    let all: Vec<(u32, u32)> = g.edges().iter().map(|e| (e.src, e.rng)).collect();
    let ipr = range_sets_stable(&all, n_points, meter)?;
    for v_open in nonempty_opens(g, meter)? {
        if !mask::is_subset(v_open, ipr) || !has_past_literal(g, u, v_open, meter)? {
            continue;
        }
        let mut found = false;
        let mut longest_seen = 0u64;
        'edges: for (skip, e) in g.edges().iter().enumerate() {
            if mask::contains(v_open, e.rng) {
                longest_seen = longest_seen.max(1);
                if n_max <= 1 {
                    found = true;
                    break 'edges;
                }
            }
            let mut cur = mask::bit(e.rng);
            for t in 1..=(n_max + n_points as u64 - 1) {
                meter.charge(g.edges().len() as u64)?;
                cur = g
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|&(id, f)| id != skip && mask::contains(cur, f.src))
                    .fold(0, |acc, (_, f)| acc | mask::bit(f.rng));
                if cur & v_open != 0 {
                    longest_seen = longest_seen.max(t + 1);
                    if t + 1 >= n_max {
                        found = true;
                        break 'edges;
                    }
                }
                if cur == 0 {
                    break;
                }
            }
        }
        if !found {
            return Ok(ConditionFlag::fail(Witness::BoundedNonReturning {
                open: mask::to_sorted_vec(v_open),
                max_length: longest_seen,
            }));
        }
    }
    Ok(ConditionFlag::pass())
}

/// Successor masks of the u-restricted multivalued map.
fn restricted_succ(g: &MultiDigraph, u: Mask) -> Vec<Mask> {
    let mut succ = vec![0 as Mask; g.n_points() as usize];
    for e in g.edges() {
        if mask::contains(u, e.src) && mask::contains(u, e.rng) {
            succ[e.src as usize] |= mask::bit(e.rng);
        }
    }
    succ
}

fn image_of(succ: &[Mask], s: Mask) -> Mask {
    mask::iter_points(s).fold(0, |acc, v| acc | succ[v as usize])
}

/// Per-n periodic point sets of the u-restricted map, with interiors taken
/// in the subspace topology on u.
fn aperiodic(
    g: &MultiDigraph,
    u: Mask,
    n_max: u64,
    meter: &mut Meter,
) -> Result<ConditionFlag, OracleError> {
    let succ = restricted_succ(g, u);
    let points: Vec<u32> = mask::to_sorted_vec(u);
    let mut front: Vec<Mask> = points.iter().map(|&v| succ[v as usize]).collect();
    let opens = nonempty_opens(g, meter)?;
    for n in 1..=n_max {
        meter.charge(points.len() as u64 + opens.len() as u64)?;
        let periodic_n = points
            .iter()
            .zip(&front)
            .filter(|&(&v, &img)| mask::contains(img, v))
            .fold(0, |acc, (&v, _)| acc | mask::bit(v));
        for &o in &opens {
            let m = o & u;
            if m != 0 && mask::is_subset(m, periodic_n) {
                let point_periods = mask::iter_points(m)
                    .map(|v| shortest_period(&succ, v, n))
                    .collect();
                return Ok(ConditionFlag::fail(Witness::PeriodicOpen {
                    open: mask::to_sorted_vec(m),
                    point_periods,
                }));
            }
        }
        for f in front.iter_mut() {
            *f = image_of(&succ, *f);
        }
    }
    Ok(ConditionFlag::pass())
}

fn shortest_period(succ: &[Mask], v: u32, cap: u64) -> u64 {
    let mut img = succ[v as usize];
    for t in 1..=cap {
        if mask::contains(img, v) {
            return t;
        }
        img = image_of(succ, img);
    }
    cap
}

/// Path form of aperiodicity: for every open V inside the restricted graph's
/// infinite-path range and every n, some v in V is reached by length-n
/// restricted walks only without v itself as a source. Walk existence is
/// evaluated per endpoint by a backward sweep that tracks whether v has been
/// passed as a source.
fn aperiodic_paths(
    g: &MultiDigraph,
    u: Mask,
    n_max: u64,
    meter: &mut Meter,
) -> Result<ConditionFlag, OracleError> {
    let n_points = g.n_points();
    let restricted: Vec<(u32, u32)> = g
        .edges()
        .iter()
        .filter(|e| mask::contains(u, e.src) && mask::contains(u, e.rng))
        .map(|e| (e.src, e.rng))
        .collect();
    let ipr = range_sets_stable(&restricted, n_points, meter)?;

    // good[v][n-1]: every length-n restricted walk ending at v avoids v as a
    // source (vacuously when no such walk exists)
    let mut good: Vec<Vec<bool>> = vec![Vec::new(); n_points as usize];
    for v in mask::iter_points(u) {
        let pre = |s: Mask| -> Mask {
            restricted
                .iter()
                .filter(|&&(_, rng)| mask::contains(s, rng))
                .fold(0, |acc, &(src, _)| acc | mask::bit(src))
        };
        let mut clean = mask::bit(v);
        let mut dirty: Mask = 0;
        for _ in 0..n_max {
            meter.charge(restricted.len() as u64 + 1)?;
            let step_clean = pre(clean);
            dirty = pre(dirty) | (step_clean & mask::bit(v));
            clean = step_clean & !mask::bit(v);
            good[v as usize].push(dirty == 0);
        }
    }

    for v_open in nonempty_opens(g, meter)? {
        if !mask::is_subset(v_open, ipr) {
            continue;
        }
        for n in 1..=n_max {
            meter.charge(n_points as u64)?;
            let some_good = mask::iter_points(v_open)
                .any(|v| good[v as usize][(n - 1) as usize]);
            if !some_good {
                return Ok(ConditionFlag::fail(Witness::MissingPath {
                    open: mask::to_sorted_vec(v_open),
                    length: n,
                }));
            }
        }
    }
    Ok(ConditionFlag::pass())
}

/// For every open V inside the full graph's infinite-path range with a past
/// in the u-restriction, and every n, some length-n walk must end at a point
/// v of V without v as a source. Per-endpoint backward reachability states
/// are precomputed; per V the joined state sequence is scanned up to its
/// first repetition (exact) or n_max (truncated).
fn weak_aperiodic(
    g: &MultiDigraph,
    u: Mask,
    n_max: u64,
    meter: &mut Meter,
) -> Result<ConditionFlag, OracleError> {
    let n_points = g.n_points();
    let all: Vec<(u32, u32)> = g.edges().iter().map(|e| (e.src, e.rng)).collect();
    let ipr = range_sets_stable(&all, n_points, meter)?;

    // states[v][t]: sources of length-t walks ending at v avoiding v-sourced
    // edges; index 0 holds the seed {v}
    let mut states: Vec<Vec<Mask>> = Vec::with_capacity(n_points as usize);
    for v in 0..n_points {
        let mut seq = vec![mask::bit(v)];
        for t in 1..=n_max {
            meter.charge(g.edges().len() as u64)?;
            let prev = seq[(t - 1) as usize];
            let next = g
                .edges()
                .iter()
                .filter(|e| e.src != v && mask::contains(prev, e.rng))
                .fold(0, |acc, e| acc | mask::bit(e.src));
            seq.push(next);
        }
        states.push(seq);
    }

    for v_open in nonempty_opens(g, meter)? {
        if !mask::is_subset(v_open, ipr) || !has_past_literal(g, u, v_open, meter)? {
            continue;
        }
        let members: Vec<u32> = mask::to_sorted_vec(v_open);
        let mut seen: HashMap<Vec<Mask>, u64> = HashMap::new();
        for t in 0..=n_max {
            meter.charge(members.len() as u64)?;
            let joint: Vec<Mask> =
                members.iter().map(|&v| states[v as usize][t as usize]).collect();
            if t > 0 && joint.iter().all(|&s| s == 0) {
                return Ok(ConditionFlag::fail(Witness::MissingPath {
                    open: members,
                    length: t,
                }));
            }
            if seen.insert(joint, t).is_some() {
                break; // state repeated: the sequence is periodic from here
            }
        }
    }
    Ok(ConditionFlag::pass())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::{
        is_strongly_topologically_free_on, is_topologically_aperiodic_on,
        is_topologically_free_on, is_weakly_topologically_aperiodic_on,
    };
    use crate::digraph::Edge;
    use crate::fintop::{make_space, FinTopSpace};
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

    #[test]
    fn top_free_examples() {
        let s = sierpinski_graph();
        let flag = oracle_condition(&s, s.space().full(), ConditionKind::TopFree, 6).unwrap();
        assert!(flag.holds);

        let lp = discrete_graph(1, &[(0, 0)]);
        let flag = oracle_condition(&lp, 0b1, ConditionKind::TopFree, 3).unwrap();
        assert!(!flag.holds);
        assert_eq!(
            flag.witness.unwrap(),
            Witness::EntranceFreeCycle { open: vec![0], cycle: vec![0] }
        );
    }

    #[test]
    fn aperiodicity_catches_two_cycle() {
        let g = discrete_graph(2, &[(0, 1), (1, 0)]);
        let flag = oracle_condition(&g, 0b11, ConditionKind::Aperiodic, 4).unwrap();
        assert!(!flag.holds);
        assert_eq!(
            flag.witness.unwrap(),
            Witness::PeriodicOpen { open: vec![0], point_periods: vec![2] }
        );
    }

    #[test]
    fn budget_is_enforced() {
        let lp = discrete_graph(1, &[(0, 0)]);
        let err =
            oracle_condition_budgeted(&lp, 0b1, ConditionKind::TopFree, 6, 0).unwrap_err();
        assert_eq!(err, OracleError::BudgetExceeded { budget: 0 });
        // a two-loop graph never closes an entrance-free walk, so raising
        // n_max forces enough expansions to trip a small budget
        let big = discrete_graph(2, &[(0, 1), (1, 0), (0, 0), (1, 1)]);
        let err =
            oracle_condition_budgeted(&big, 0b11, ConditionKind::WeakAperiodic, 1000, 50)
                .unwrap_err();
        assert_eq!(err, OracleError::BudgetExceeded { budget: 50 });
    }

    #[test]
    fn not_open_propagates() {
        let s = sierpinski_graph();
        let err = oracle_condition(&s, mask_from([1]), ConditionKind::TopFree, 3).unwrap_err();
        assert!(matches!(err, OracleError::Condition(ConditionError::NotOpen(_))));
    }

    #[test]
    fn strong_top_free_matches_fast_on_sierpinski() {
        let s = sierpinski_graph();
        let u = s.space().full();
        let fast = is_strongly_topologically_free_on(&s, u).unwrap();
        let slow = oracle_condition(&s, u, ConditionKind::StrongTopFree, 4).unwrap();
        assert_eq!(fast, slow);
        assert!(!slow.holds);
    }

    #[test]
    fn strong_top_free_two_loops() {
        let g = discrete_graph(1, &[(0, 0), (0, 0)]);
        let flag = oracle_condition(&g, 0b1, ConditionKind::StrongTopFree, 2).unwrap();
        assert!(flag.holds);
    }

    #[test]
    fn weak_aperiodic_matches_fast_on_two_point_maps() {
        // constant map onto a fixed point, then the map with f(1) = {0,1}
        for edges in [vec![(0u32, 1u32), (1, 1)], vec![(0, 1), (1, 0), (1, 1)]] {
            let g = discrete_graph(2, &edges);
            let fast = is_weakly_topologically_aperiodic_on(&g.mv_map(), 0b11).unwrap();
            let slow =
                oracle_condition(&g, 0b11, ConditionKind::WeakAperiodic, 100).unwrap();
            assert_eq!(fast.holds, slow.holds);
        }
    }

    #[test]
    fn path_form_agrees_with_closed_form() {
        let cases: Vec<(u32, Vec<(u32, u32)>)> = vec![
            (2, vec![(0, 1), (1, 0)]),
            (2, vec![(0, 1), (1, 1)]),
            (3, vec![(0, 1), (1, 2), (2, 0)]),
            (3, vec![(0, 0), (1, 2)]),
        ];
        for (n, edges) in cases {
            let g = discrete_graph(n, &edges);
            let u = g.space().full();
            let a = oracle_condition(&g, u, ConditionKind::Aperiodic, 6).unwrap();
            let b = oracle_condition(&g, u, ConditionKind::AperiodicPaths, 6).unwrap();
            assert_eq!(a.holds, b.holds, "edges {edges:?}");
            let fast = is_topologically_aperiodic_on(&g.mv_map(), u).unwrap();
            assert_eq!(fast.holds, a.holds, "fast vs oracle on {edges:?}");
        }
    }

    #[test]
    fn top_free_oracle_agrees_with_fast_on_small_graphs() {
        let cases: Vec<(u32, Vec<(u32, u32)>)> = vec![
            (1, vec![(0, 0)]),
            (1, vec![(0, 0), (0, 0)]),
            (2, vec![(0, 1), (1, 0)]),
            (2, vec![(0, 1), (1, 0), (0, 0)]),
            (3, vec![(0, 1), (1, 2), (2, 0)]),
        ];
        for (n, edges) in cases {
            let g = discrete_graph(n, &edges);
            let u = g.space().full();
            let fast = is_topologically_free_on(&g, u).unwrap();
            let slow = oracle_condition(&g, u, ConditionKind::TopFree, 6).unwrap();
            assert_eq!(fast.holds, slow.holds, "edges {edges:?}");
        }
    }
}
