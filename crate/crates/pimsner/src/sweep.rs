//! Cross-validation sweeps over exhaustive and randomized instance families.
//!
//! Every suite enumerates a family of inputs, recomputes each decision along
//! at least two independent routes, and records any disagreement as a
//! violation carrying an input document that reproduces the instance.

use crate::bimodule;
use crate::conditions::{
    is_strongly_topologically_free_on, is_topologically_aperiodic_on, is_topologically_free_on,
    tf_outside, weak_aperiodicity_candidates,
};
use crate::corr::{self, FinCorr, Ideal, TPair};
use crate::digraph::{Edge, MultiDigraph};
use crate::fintop::{self, FinTopSpace};
use crate::instance::{InstanceDoc, QuiverEdgeDoc};
use crate::mask::{self, Mask};
use crate::oracle::{oracle_condition, ConditionKind};
use crate::verdict::{self, EndoSystem, FinQuiver, QuiverEdge, VerdictError};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Random 5-point instances checked by the lattice suite.
pub const LATTICE_RANDOM_COUNT: u64 = 1000;

/// Random block-size assignments checked by the invariance suite.
pub const DIMS_RANDOM_COUNT: u64 = 200;

/// Above this family size the matrix sweep switches from full enumeration to
/// the 0/1 subfamily plus an evenly strided sample of the full range.
const EXHAUSTIVE_CAP: u128 = 200_000;

const STRIDE_SAMPLE: u64 = 30_000;

#[derive(Clone, Debug)]
pub struct Violation {
    pub suite: &'static str,
    pub description: String,
    pub doc: InstanceDoc,
}

#[derive(Debug)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub instances: u64,
    pub violations: Vec<Violation>,
}

#[derive(Debug)]
pub struct SelftestReport {
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn total_instances(&self) -> u64 {
        self.suites.iter().map(|s| s.instances).sum()
    }

    pub fn violations(&self) -> impl Iterator<Item = &Violation> {
        self.suites.iter().flat_map(|s| s.violations.iter())
    }

    pub fn is_clean(&self) -> bool {
        self.violations().next().is_none()
    }
}

/// Runs every suite. `max_vertices` and `max_mult` size the exhaustive
/// families; the remaining suites use fixed families plus `seed`-driven
/// randomness.
pub fn run_selftest(max_vertices: u32, max_mult: u64, seed: u64) -> SelftestReport {
    SelftestReport {
        suites: vec![
            correspondence_verdicts(max_vertices, max_mult),
            correspondence_dual_oracles(max_vertices.min(3), max_mult),
            lattice_exhaustive(max_vertices.min(3)),
            lattice_random(LATTICE_RANDOM_COUNT, seed),
            explicit_bimodule_agreement(),
            dimension_invariance(DIMS_RANDOM_COUNT, seed ^ 0x9e37_79b9_7f4a_7c15),
            endomorphism_translation(),
            quiver_equivalence(),
        ],
    }
}

// ---------------------------------------------------------------------------
// shared helpers

use crate::mask::subsets;

fn corr_doc(c: &FinCorr, ideal: Option<Ideal>) -> InstanceDoc {
    InstanceDoc::Correspondence {
        dims: c.dims().to_vec(),
        mult: c.mult().to_vec(),
        ideal: ideal.map(mask::to_sorted_vec),
    }
}

fn graph_doc(g: &MultiDigraph, u: Mask) -> InstanceDoc {
    let space = g.space();
    let opens = if space.is_discrete() {
        None
    } else {
        Some(space.iter_opens().map(mask::to_sorted_vec).collect())
    };
    InstanceDoc::Graph {
        points: g.n_points(),
        opens,
        edges: g.edges().iter().map(|e| (e.src, e.rng)).collect(),
        u: Some(mask::to_sorted_vec(u)),
    }
}

/// Decodes a base-(m+1) counter into a k-by-k multiplicity matrix.
fn decode_matrix(mut code: u64, k: u32, max_mult: u64) -> Vec<Vec<u64>> {
    let base = max_mult + 1;
    let mut mult = vec![vec![0u64; k as usize]; k as usize];
    for row in mult.iter_mut() {
        for entry in row.iter_mut() {
            *entry = code % base;
            code /= base;
        }
    }
    mult
}

/// The matrix family for one block count: either every matrix with entries
/// up to `max_mult`, or (above the cap) the 0/1 matrices plus a strided
/// sample of the full range.
fn matrix_family(k: u32, max_mult: u64) -> Vec<Vec<Vec<u64>>> {
    let cells = k * k;
    let total = ((max_mult + 1) as u128).pow(cells);
    if total <= EXHAUSTIVE_CAP {
        return (0..total as u64).map(|c| decode_matrix(c, k, max_mult)).collect();
    }
    let mut family: Vec<_> = (0..1u64 << cells).map(|c| decode_matrix(c, k, 1)).collect();
    let stride = (total / STRIDE_SAMPLE as u128).max(1) as u64;
    let mut code = 0u128;
    while code < total {
        family.push(decode_matrix(code as u64, k, max_mult));
        code += stride as u128;
    }
    family
}

/// Boolean row masks of a nonnegative matrix.
fn bool_rows(m: &[Vec<u64>]) -> Vec<Mask> {
    m.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|&(_, &x)| x > 0)
                .fold(0, |acc, (j, _)| acc | mask::bit(j as u32))
        })
        .collect()
}

fn bool_mul(a: &[Mask], b: &[Mask]) -> Vec<Mask> {
    a.iter()
        .map(|&row| mask::iter_points(row).fold(0, |acc, l| acc | b[l as usize]))
        .collect()
}

// ---------------------------------------------------------------------------
// suite: correspondence verdicts

/// Exhaustive matrix family: verdict self-checks, the path oracle, pair
/// enumeration against a triple loop, lattice adjunction, power supports,
/// and restriction monotonicity.
pub fn correspondence_verdicts(max_blocks: u32, max_mult: u64) -> SuiteReport {
    let mut instances = 0u64;
    let mut violations = Vec::new();
    for k in 1..=max_blocks {
        let family = matrix_family(k, max_mult);
        instances += family.len() as u64;
        let found: Vec<Violation> = family
            .par_iter()
            .filter_map(|mult| {
                let c = FinCorr::new(vec![1; k as usize], mult.clone()).expect("valid matrix");
                check_correspondence(&c).err().map(|description| Violation {
                    suite: "correspondence-verdicts",
                    description,
                    doc: corr_doc(&c, None),
                })
            })
            .collect();
        violations.extend(found);
    }
    SuiteReport { suite: "correspondence-verdicts", instances, violations }
}

fn check_correspondence(c: &FinCorr) -> Result<(), String> {
    let jx = c.jx();
    let full = c.full();
    let k = c.k();
    let ideals = subsets(jx);

    // The verdict layer recomputes uniqueness along the cycle route, the
    // freeness route, and the aperiodicity routes, and self-checks; any
    // mismatch surfaces as an internal error here.
    let mut unique_at = Vec::with_capacity(ideals.len());
    for &j in &ideals {
        let report = verdict::uniqueness_verdict(c, j)
            .map_err(|e| format!("verdict failed at ideal {}: {e}", mask::render(j)))?;
        if report.strongly_topologically_free_on_j != report.topologically_free_on_j {
            return Err(format!(
                "strong freeness diverged from freeness on a discrete dual at ideal {}",
                mask::render(j)
            ));
        }
        let slow = corr::j_acyclic_oracle(c, j)
            .map_err(|e| format!("path oracle failed at ideal {}: {e}", mask::render(j)))?;
        if slow.holds != report.j_acyclic {
            return Err(format!(
                "cycle search disagrees with the path oracle at ideal {}",
                mask::render(j)
            ));
        }
        unique_at.push((j, report.uniqueness));
    }

    verdict::toeplitz_verdict(c).map_err(|e| format!("zero-ideal verdict failed: {e}"))?;
    verdict::simplicity_verdict(c).map_err(|e| format!("simplicity verdict failed: {e}"))?;

    // Gauge-invariant pair enumeration against a plain triple loop.
    for &j in &[0, jx] {
        let fast = c
            .t_pairs(j)
            .map_err(|e| format!("pair enumeration failed at ideal {}: {e}", mask::render(j)))?;
        if fast != brute_t_pairs(c, j) {
            return Err(format!("pair enumeration mismatch at ideal {}", mask::render(j)));
        }
    }

    // The image and preimage operators form an adjoint pair on the lattice.
    let lattice = subsets(full);
    for &s in &lattice {
        for &t in &lattice {
            if mask::is_subset(c.image_ideal(s), t) != mask::is_subset(s, c.preimage_ideal(t)) {
                return Err(format!(
                    "image/preimage adjunction fails at ({}, {})",
                    mask::render(s),
                    mask::render(t)
                ));
            }
        }
    }

    // Support of a matrix power equals boolean reachability.
    let rows = bool_rows(c.mult());
    let mut reach = rows.clone();
    for n in 2..=4u32 {
        reach = bool_mul(&reach, &rows);
        let power = c
            .tensor_power(n)
            .map_err(|e| format!("power {n} failed: {e}"))?;
        if bool_rows(power.mult()) != reach {
            return Err(format!("power {n} support disagrees with boolean reachability"));
        }
    }

    // Uniqueness survives restriction to an invariant coefficient ideal.
    let restriction_ideals: Vec<Mask> = if k <= 2 { ideals.clone() } else { vec![0, jx] };
    for &s in &lattice {
        if s == 0 || !c.is_positively_invariant(s) {
            continue;
        }
        let sub = c.restrict(s).map_err(|e| format!("restriction to {} failed: {e}", mask::render(s)))?;
        let sub_jx = sub.jx();
        for &(j, unique) in unique_at.iter().filter(|(j, _)| restriction_ideals.contains(j)) {
            if !unique {
                continue;
            }
            let jr = mask::compress_into(j & s, s) & sub_jx;
            let report = verdict::uniqueness_verdict(&sub, jr).map_err(|e| {
                format!("restricted verdict failed at {} / {}: {e}", mask::render(s), mask::render(j))
            })?;
            if !report.uniqueness {
                return Err(format!(
                    "uniqueness lost after restricting to {} at ideal {}",
                    mask::render(s),
                    mask::render(j)
                ));
            }
        }
    }
    Ok(())
}

fn brute_t_pairs(c: &FinCorr, j: Ideal) -> Vec<TPair> {
    let mut out = Vec::new();
    for s in subsets(c.full()) {
        if !c.is_positively_invariant(s) {
            continue;
        }
        let hull = c.j_of_ideal(s).expect("invariant");
        for t in subsets(c.full()) {
            if mask::is_subset(s, t) && mask::is_subset(t, hull) && mask::is_subset(j, t) {
                out.push(TPair { ideal: s, relative_ideal: t });
            }
        }
    }
    out.sort_unstable();
    out
}

// ---------------------------------------------------------------------------
// suite: correspondence dual oracles

/// The same matrix family with every dual-graph condition replayed against
/// its literal-definition oracle.
pub fn correspondence_dual_oracles(max_blocks: u32, max_mult: u64) -> SuiteReport {
    let mut instances = 0u64;
    let mut violations = Vec::new();
    for k in 1..=max_blocks {
        let family = matrix_family(k, max_mult);
        instances += family.len() as u64;
        let found: Vec<Violation> = family
            .par_iter()
            .filter_map(|mult| {
                let c = FinCorr::new(vec![1; k as usize], mult.clone()).expect("valid matrix");
                let dual = c.dual_graph();
                let mut opens = vec![c.jx(), c.full()];
                opens.dedup();
                for u in opens {
                    if let Err(description) = oracle_agreement(&dual, u) {
                        return Some(Violation {
                            suite: "correspondence-dual-oracles",
                            description,
                            doc: graph_doc(&dual, u),
                        });
                    }
                }
                None
            })
            .collect();
        violations.extend(found);
    }
    SuiteReport { suite: "correspondence-dual-oracles", instances, violations }
}

/// Exact step-count horizons for the literal-definition oracles on a graph
/// with `n` points: cycle searches settle within `lcm(1..=n)` steps, the
/// relay search within twice the point count.
fn oracle_horizons(n: u32) -> (u64, u64, u64) {
    let lcm = [0, 1, 2, 6, 12, 60][n as usize];
    (6, 2 * n as u64, 2 * lcm + n as u64)
}

fn oracle_agreement(g: &MultiDigraph, u: Mask) -> Result<(), String> {
    let n = g.n_points();
    let (tf_n, strong_n, ap_n) = oracle_horizons(n);
    let f = g.mv_map();

    let tf = is_topologically_free_on(g, u).map_err(|e| format!("freeness checker: {e}"))?;
    let slow_tf = oracle_condition(g, u, ConditionKind::TopFree, tf_n)
        .map_err(|e| format!("freeness oracle: {e}"))?;
    if tf.holds != slow_tf.holds {
        return Err(format!("freeness checker disagrees with oracle on {}", mask::render(u)));
    }

    let strong = is_strongly_topologically_free_on(g, u).map_err(|e| format!("relay checker: {e}"))?;
    let slow_strong = oracle_condition(g, u, ConditionKind::StrongTopFree, strong_n)
        .map_err(|e| format!("relay oracle: {e}"))?;
    if strong.holds != slow_strong.holds {
        return Err(format!("strong freeness checker disagrees with oracle on {}", mask::render(u)));
    }

    let ap = is_topologically_aperiodic_on(&f, u).map_err(|e| format!("cycle checker: {e}"))?;
    let slow_ap = oracle_condition(g, u, ConditionKind::Aperiodic, ap_n)
        .map_err(|e| format!("periodicity oracle: {e}"))?;
    if ap.holds != slow_ap.holds {
        return Err(format!("aperiodicity checker disagrees with oracle on {}", mask::render(u)));
    }
    let slow_paths = oracle_condition(g, u, ConditionKind::AperiodicPaths, ap_n)
        .map_err(|e| format!("path-form oracle: {e}"))?;
    if ap.holds != slow_paths.holds {
        return Err(format!(
            "aperiodicity checker disagrees with the path-form oracle on {}",
            mask::render(u)
        ));
    }

    let candidates = weak_aperiodicity_candidates(&f, u).map_err(|e| format!("candidate scan: {e}"))?;
    let weak_holds = candidates.iter().all(|c| c.holds);
    let weak_n = 100u64;
    let slow_weak = oracle_condition(g, u, ConditionKind::WeakAperiodic, weak_n)
        .map_err(|e| format!("weak oracle: {e}"))?;
    if weak_holds != slow_weak.holds {
        // The oracle walks lengths up to its horizon only; a failure the
        // fast checker locates beyond that is out of its reach.
        let beyond = !weak_holds
            && slow_weak.holds
            && candidates
                .iter()
                .filter_map(|c| c.first_failure)
                .all(|len| len > weak_n);
        if !beyond {
            return Err(format!("weak aperiodicity checker disagrees with oracle on {}", mask::render(u)));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// suite: the full lattice of small graphs and topologies

/// Every graph with edge multiplicities up to two on up to `max_points`
/// points, paired with every topology and every open set.
pub fn lattice_exhaustive(max_points: u32) -> SuiteReport {
    let mut instances = 0u64;
    let mut violations = Vec::new();
    for n in 1..=max_points {
        let topologies = fintop::all_topologies(n);
        let cells = n * n;
        let total = 3u64.pow(cells);
        instances += total * topologies.len() as u64;
        let found: Vec<Vec<Violation>> = (0..total)
            .into_par_iter()
            .map(|code| {
                let edges = decode_edges(code, n);
                let mut local = Vec::new();
                for space in topologies.iter() {
                    let g = MultiDigraph::new(space.clone(), edges.clone()).expect("valid edges");
                    for u in space.iter_opens() {
                        if let Err(description) = lattice_checks(&g, u, true) {
                            local.push(Violation {
                                suite: "graph-lattice",
                                description,
                                doc: graph_doc(&g, u),
                            });
                        }
                    }
                }
                local
            })
            .collect();
        violations.extend(found.into_iter().flatten());
    }
    SuiteReport { suite: "graph-lattice", instances, violations }
}

/// Decodes a base-3 counter into edge multiplicities over all ordered pairs.
fn decode_edges(mut code: u64, n: u32) -> Vec<Edge> {
    let mut edges = Vec::new();
    for src in 0..n {
        for rng in 0..n {
            let m = code % 3;
            code /= 3;
            for _ in 0..m {
                edges.push(Edge { src, rng });
            }
        }
    }
    edges
}

fn lattice_checks(g: &MultiDigraph, u: Mask, replay: bool) -> Result<(), String> {
    let space = g.space();
    let f = g.mv_map();
    let tf = is_topologically_free_on(g, u).map_err(|e| format!("freeness checker: {e}"))?;
    let strong = is_strongly_topologically_free_on(g, u).map_err(|e| format!("relay checker: {e}"))?;
    let ap = is_topologically_aperiodic_on(&f, u).map_err(|e| format!("cycle checker: {e}"))?;
    let candidates = weak_aperiodicity_candidates(&f, u).map_err(|e| format!("candidate scan: {e}"))?;
    let weak_holds = candidates.iter().all(|c| c.holds);

    if strong.holds && !tf.holds {
        return Err("strong freeness without freeness".into());
    }
    if ap.holds && !weak_holds {
        return Err("aperiodicity without the per-candidate path condition".into());
    }
    if weak_holds && !tf.holds {
        return Err("per-candidate path condition without freeness".into());
    }

    // With a continuous internal restriction the relay condition costs
    // nothing extra.
    let internal = g.restricted_graph(u, u);
    if internal.is_continuous_graph() && tf.holds != strong.holds {
        return Err("freeness and strong freeness split despite a continuous restriction".into());
    }

    // In-degree at most one over u collapses the ladder to one condition.
    let deg = g.in_degrees();
    if mask::iter_points(u).all(|v| deg[v as usize] <= 1)
        && (tf.holds != ap.holds || tf.holds != weak_holds)
    {
        return Err("injective range map fails to collapse the condition ladder".into());
    }

    // Unique internal sources: freeness forces the path condition at every
    // candidate whose entire past keeps at least one predecessor.
    let mut seen: Mask = 0;
    let mut distinct_sources = true;
    for e in g.edges() {
        if mask::contains(u, e.src) && mask::contains(u, e.rng) {
            if mask::contains(seen, e.src) {
                distinct_sources = false;
                break;
            }
            seen |= mask::bit(e.src);
        }
    }
    if distinct_sources && tf.holds {
        for cand in &candidates {
            let past = g.backward_closure(cand.v_open);
            let fed = mask::iter_points(past).all(|w| deg[w as usize] >= 1);
            if fed && !cand.holds {
                return Err(format!(
                    "freeness with unique sources misses the path condition at {}",
                    mask::render(cand.v_open)
                ));
            }
        }
    }

    // Verdicts on u only see u and the sources feeding it.
    let mut w = u;
    for e in g.edges() {
        if mask::contains(u, e.rng) {
            w |= mask::bit(e.src);
        }
    }
    if w != space.full() {
        let gw = g.restricted_graph(w, w);
        let tf_w = is_topologically_free_on(&gw, u).map_err(|e| format!("restricted freeness: {e}"))?;
        let strong_w =
            is_strongly_topologically_free_on(&gw, u).map_err(|e| format!("restricted relay: {e}"))?;
        if tf_w.holds != tf.holds {
            return Err("freeness changed after trimming vertices that never feed u".into());
        }
        if strong_w.holds != strong.holds {
            return Err("strong freeness changed after trimming vertices that never feed u".into());
        }
    }

    // Graphs of partial single-valued maps: freeness on u is freeness of the
    // map away from the complement of u.
    let n = g.n_points();
    let mut phi = vec![0u32; n as usize];
    let mut domain: Mask = 0;
    let mut single_valued = true;
    for e in g.edges() {
        if mask::contains(domain, e.src) {
            single_valued = false;
            break;
        }
        domain |= mask::bit(e.src);
        phi[e.src as usize] = e.rng;
    }
    if single_valued
        && tf_outside(space, domain, &phi, space.full() & !u) != tf.holds
    {
        return Err("map-form freeness disagrees with graph-form freeness".into());
    }

    if replay {
        oracle_agreement(g, u)?;
    }
    Ok(())
}

/// Seeded random five-point instances run through the same checks.
pub fn lattice_random(count: u64, seed: u64) -> SuiteReport {
    let mut prng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    let n = 5u32;
    let full = mask::full_mask(n);
    for _ in 0..count {
        let generators: Vec<Mask> =
            (0..prng.gen_range(0..=3u32)).map(|_| prng.gen::<u64>() & full).collect();
        let space = fintop::make_space(n, &generators).expect("small closure");
        let edges: Vec<Edge> = (0..prng.gen_range(0..=8u32))
            .map(|_| Edge { src: prng.gen_range(0..n), rng: prng.gen_range(0..n) })
            .collect();
        let g = MultiDigraph::new(space.clone(), edges).expect("valid edges");
        let opens: Vec<Mask> = space.iter_opens().collect();
        let u = opens[prng.gen_range(0..opens.len())];
        if let Err(description) = lattice_checks(&g, u, true) {
            violations.push(Violation {
                suite: "graph-lattice-random",
                description,
                doc: graph_doc(&g, u),
            });
        }
    }
    SuiteReport { suite: "graph-lattice-random", instances: count, violations }
}

// ---------------------------------------------------------------------------
// suite: the explicit bimodule model

/// Matrix-unit bimodule model against the closed-form operators.
pub fn explicit_bimodule_agreement() -> SuiteReport {
    let mut cases: Vec<(Vec<u64>, Vec<Vec<u64>>)> = Vec::new();
    for d in 1..=3u64 {
        for m in 0..=2u64 {
            cases.push((vec![d], vec![vec![m]]));
        }
    }
    for dims in [[1u64, 1], [1, 2], [2, 1], [2, 3]] {
        for code in 0..81u64 {
            cases.push((dims.to_vec(), decode_matrix(code, 2, 2)));
        }
    }
    let instances = cases.len() as u64;
    let violations: Vec<Violation> = cases
        .par_iter()
        .filter_map(|(dims, mult)| {
            let c = FinCorr::new(dims.clone(), mult.clone()).expect("valid matrix");
            check_bimodule(&c).err().map(|description| Violation {
                suite: "explicit-bimodule",
                description,
                doc: corr_doc(&c, None),
            })
        })
        .collect();
    SuiteReport { suite: "explicit-bimodule", instances, violations }
}

fn check_bimodule(c: &FinCorr) -> Result<(), String> {
    if bimodule::dual_multiplicities(c) != *c.mult() {
        return Err("matrix-unit decomposition disagrees with the multiplicity matrix".into());
    }
    let expect_dim: u64 = c
        .mult()
        .iter()
        .enumerate()
        .flat_map(|(i, row)| {
            row.iter().enumerate().map(move |(j, &m)| (i, j, m))
        })
        .map(|(i, j, m)| m * c.dims()[i] * c.dims()[j])
        .sum();
    if bimodule::linear_dim(c) != expect_dim {
        return Err("basis count disagrees with the dimension formula".into());
    }
    for s in subsets(c.full()) {
        if bimodule::image_ideal_literal(c, s) != c.image_ideal(s) {
            return Err(format!("image ideal formula fails at {}", mask::render(s)));
        }
        if bimodule::preimage_ideal_literal(c, s) != c.preimage_ideal(s) {
            return Err(format!("preimage ideal formula fails at {}", mask::render(s)));
        }
        let (hull, quotient_dim) = bimodule::j_of_ideal_literal(c, s);
        if hull != (s | (c.full() & !c.preimage_ideal(s))) {
            return Err(format!("hull formula fails at {}", mask::render(s)));
        }
        let expect_quotient: u64 = c
            .mult()
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &m)| (i, j, m)))
            .filter(|&(_, j, _)| !mask::contains(s, j as u32))
            .map(|(i, j, m)| m * c.dims()[i] * c.dims()[j])
            .sum();
        if quotient_dim != expect_quotient {
            return Err(format!("quotient dimension fails at {}", mask::render(s)));
        }
    }
    let mut power = c.clone();
    for n in 1..=3u32 {
        if n > 1 {
            power = c.tensor_power(n).map_err(|e| format!("power {n}: {e}"))?;
        }
        let expect: u64 = power
            .mult()
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &m)| (i, j, m)))
            .map(|(i, j, m)| m * c.dims()[i] * c.dims()[j])
            .sum();
        if bimodule::tensor_dim_literal(c, n) != expect {
            return Err(format!("balanced tensor dimension fails at power {n}"));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// suite: verdicts ignore block sizes

/// Verdicts must not depend on the block dimension assignment.
pub fn dimension_invariance(count: u64, seed: u64) -> SuiteReport {
    let mut prng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..count {
        let k = prng.gen_range(1..=4u32);
        let mult: Vec<Vec<u64>> =
            (0..k).map(|_| (0..k).map(|_| prng.gen_range(0..=2u64)).collect()).collect();
        let dims_a: Vec<u64> = (0..k).map(|_| prng.gen_range(1..=4u64)).collect();
        let dims_b: Vec<u64> = (0..k).map(|_| prng.gen_range(1..=4u64)).collect();
        let a = FinCorr::new(dims_a, mult.clone()).expect("valid matrix");
        let b = FinCorr::new(dims_b, mult).expect("valid matrix");
        if let Err(description) = check_dims_pair(&a, &b) {
            violations.push(Violation {
                suite: "dimension-invariance",
                description,
                doc: corr_doc(&a, None),
            });
        }
    }
    SuiteReport { suite: "dimension-invariance", instances: count, violations }
}

fn check_dims_pair(a: &FinCorr, b: &FinCorr) -> Result<(), String> {
    let sa = verdict::simplicity_verdict(a).map_err(|e| format!("simplicity verdict: {e}"))?;
    let sb = verdict::simplicity_verdict(b).map_err(|e| format!("simplicity verdict: {e}"))?;
    if sa != sb {
        return Err("simplicity verdict depends on block sizes".into());
    }
    for j in subsets(a.jx()) {
        let ra = verdict::uniqueness_verdict(a, j).map_err(|e| format!("verdict: {e}"))?;
        let rb = verdict::uniqueness_verdict(b, j).map_err(|e| format!("verdict: {e}"))?;
        if ra != rb {
            return Err(format!("verdict at ideal {} depends on block sizes", mask::render(j)));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// suite: partial endomorphisms of a discrete diagonal

/// Partial endomorphisms with fiber indices against the orbit-form
/// freeness decision.
pub fn endomorphism_translation() -> SuiteReport {
    let mut instances = 0u64;
    let mut violations = Vec::new();
    for n in 1..=3u32 {
        let configs = (n as u64 + 1).pow(n);
        for code in 0..configs {
            let mut remaining = code;
            let mut phi: Vec<Option<u32>> = Vec::with_capacity(n as usize);
            for _ in 0..n {
                let digit = remaining % (n as u64 + 1);
                remaining /= n as u64 + 1;
                phi.push(if digit == 0 { None } else { Some(digit as u32 - 1) });
            }
            let domain_points: Vec<u32> =
                (0..n).filter(|&x| phi[x as usize].is_some()).collect();
            for index_bits in 0..1u32 << domain_points.len() {
                instances += 1;
                let mut index = vec![1u64; n as usize];
                for (pos, &x) in domain_points.iter().enumerate() {
                    if index_bits & (1 << pos) != 0 {
                        index[x as usize] = 2;
                    }
                }
                let system = EndoSystem::new(n, phi.clone(), index.clone()).expect("valid tables");
                if let Err(description) = check_endomorphism(&system) {
                    violations.push(Violation {
                        suite: "endomorphism-translation",
                        description,
                        doc: endo_doc(&system),
                    });
                }
            }
        }
    }
    SuiteReport { suite: "endomorphism-translation", instances, violations }
}

fn endo_doc(e: &EndoSystem) -> InstanceDoc {
    let mut phi = BTreeMap::new();
    let mut index = BTreeMap::new();
    for x in 0..e.n_points() {
        if let Some(y) = e.target(x) {
            phi.insert(x.to_string(), y.to_string());
            if e.index(x) > 1 {
                index.insert(x.to_string(), e.index(x));
            }
        }
    }
    InstanceDoc::Endomorphism { points: e.n_points(), phi, index, ideal: None }
}

fn check_endomorphism(e: &EndoSystem) -> Result<(), String> {
    let n = e.n_points();
    let c = verdict::from_endomorphism(e);
    let space = FinTopSpace::discrete(n).expect("small discrete space");
    let full = mask::full_mask(n);
    let phi: Vec<u32> = (0..n).map(|x| e.target(x).unwrap_or(0)).collect();
    let branching: Mask = (0..n).filter(|&x| e.index(x) >= 2).fold(0, |m, x| m | mask::bit(x));
    for j in subsets(c.jx()) {
        let report = verdict::uniqueness_verdict(&c, j)
            .map_err(|e| format!("verdict failed at ideal {}: {e}", mask::render(j)))?;
        let excluded = (full & !j) | branching;
        if tf_outside(&space, e.domain(), &phi, excluded) != report.uniqueness {
            return Err(format!(
                "orbit-form freeness disagrees with the verdict at ideal {}",
                mask::render(j)
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// suite: weighted-edge inputs

/// Positive-weight edge graphs against their dual-graph verdicts.
pub fn quiver_equivalence() -> SuiteReport {
    let mut instances = 0u64;
    let mut violations = Vec::new();
    for n in 1..=3u32 {
        let pairs: Vec<(u32, u32)> =
            (0..n).flat_map(|src| (0..n).map(move |rng| (src, rng))).collect();
        for multiset in edge_multisets(pairs.len(), 4) {
            instances += 1;
            let edges: Vec<QuiverEdge> = multiset
                .iter()
                .map(|&p| QuiverEdge {
                    src: pairs[p].0,
                    rng: pairs[p].1,
                    weight: BigRational::one(),
                })
                .collect();
            let quiver = FinQuiver::new(n, edges.clone()).expect("valid edges");
            if let Err(description) = check_quiver(&quiver, &pairs, &multiset) {
                violations.push(Violation {
                    suite: "quiver-equivalence",
                    description,
                    doc: quiver_doc(&quiver),
                });
            }
        }
    }
    SuiteReport { suite: "quiver-equivalence", instances, violations }
}

/// Non-decreasing index sequences of length up to `max_len` over `n_pairs`
/// symbols: the multisets of edges.
fn edge_multisets(n_pairs: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for prefix in &frontier {
            let start = prefix.last().copied().unwrap_or(0);
            for p in start..n_pairs {
                let mut grown = prefix.clone();
                grown.push(p);
                next.push(grown);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn quiver_doc(q: &FinQuiver) -> InstanceDoc {
    InstanceDoc::Quiver {
        vertices: q.n_vertices(),
        edges: q
            .edges()
            .iter()
            .map(|e| QuiverEdgeDoc {
                src: e.src,
                rng: e.rng,
                weight: e.weight.to_string(),
            })
            .collect(),
    }
}

fn check_quiver(q: &FinQuiver, pairs: &[(u32, u32)], multiset: &[usize]) -> Result<(), String> {
    verdict::quiver_tf_equivalence(q).map_err(|e| format!("equivalence check failed: {e}"))?;

    let (c, jx) = verdict::from_quiver(q).map_err(|e| format!("translation failed: {e}"))?;
    if jx != c.jx() {
        return Err("translation returned a default ideal that is not the annihilator complement".into());
    }
    let n = q.n_vertices() as usize;
    let mut expect = vec![vec![0u64; n]; n];
    for &p in multiset {
        let (src, rng) = pairs[p];
        expect[rng as usize][src as usize] += 1;
    }
    if *c.mult() != expect {
        return Err("translated multiplicities disagree with edge counts".into());
    }

    // A zero-weight edge is no edge: the translation must reject it and the
    // weighted graph drop it.
    let mut padded = q.edges().to_vec();
    padded.push(QuiverEdge { src: 0, rng: 0, weight: BigRational::zero() });
    let degenerate = FinQuiver::new(q.n_vertices(), padded).expect("valid edges");
    match verdict::quiver_tf_equivalence(&degenerate) {
        Err(VerdictError::NotAQuiver { .. }) => {}
        Err(e) => return Err(format!("zero-weight edge rejected for the wrong reason: {e}")),
        Ok(_) => return Err("zero-weight edge slipped through the genuineness screen".into()),
    }
    let (dropped, _) = verdict::from_quiver(&degenerate).map_err(|e| format!("translation failed: {e}"))?;
    if dropped != c {
        return Err("zero-weight edge changed the translated multiplicities".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_family_is_exhaustive_below_the_cap() {
        assert_eq!(matrix_family(1, 2).len(), 3);
        assert_eq!(matrix_family(2, 2).len(), 81);
        assert_eq!(matrix_family(3, 2).len(), 19683);
    }

    #[test]
    fn matrix_family_samples_above_the_cap() {
        let family = matrix_family(4, 2);
        assert!(family.len() as u64 >= (1 << 16));
        assert!((family.len() as u64) < 200_000);
    }

    #[test]
    fn edge_multisets_count_matches_the_stars_and_bars_total() {
        // 1 + 9 + 45 + 165 + 495 multisets of size up to four over nine pairs.
        assert_eq!(edge_multisets(9, 4).len(), 715);
        assert_eq!(edge_multisets(1, 4).len(), 5);
        assert_eq!(edge_multisets(4, 4).len(), 70);
    }

    #[test]
    fn small_matrix_families_are_clean() {
        let report = correspondence_verdicts(2, 1);
        assert_eq!(report.instances, 2 + 16);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn small_dual_oracle_families_are_clean() {
        let report = correspondence_dual_oracles(2, 1);
        assert_eq!(report.instances, 18);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn two_point_lattice_is_clean() {
        let report = lattice_exhaustive(2);
        assert_eq!(report.instances, 3 + 81 * 4);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn random_lattice_sample_is_clean() {
        let report = lattice_random(50, 11);
        assert_eq!(report.instances, 50);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn bimodule_families_are_clean() {
        let report = explicit_bimodule_agreement();
        assert_eq!(report.instances, 9 + 4 * 81);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn dimension_invariance_sample_is_clean() {
        let report = dimension_invariance(25, 7);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn endomorphism_family_is_clean() {
        let report = endomorphism_translation();
        // One, two, and three points contribute 3, 25, and 343 systems.
        assert_eq!(report.instances, 3 + 25 + 343);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn quiver_family_is_clean() {
        let report = quiver_equivalence();
        assert_eq!(report.instances, 5 + 70 + 715);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn selftest_report_aggregates_counts() {
        let report = SelftestReport {
            suites: vec![
                SuiteReport { suite: "a", instances: 3, violations: Vec::new() },
                SuiteReport { suite: "b", instances: 4, violations: Vec::new() },
            ],
        };
        assert_eq!(report.total_instances(), 7);
        assert!(report.is_clean());
    }
}
