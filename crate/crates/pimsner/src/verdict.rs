//! Verdict engines: uniqueness and simplicity decisions for a
//! finite-dimensional correspondence, plus the quiver and endomorphism
//! front ends that reduce to one.
//!
//! Every verdict recomputes each flag along an independent route and aborts
//! with an internal error when the routes disagree, so a green run certifies
//! the agreement of the underlying decision procedures.

use crate::conditions::{self, ConditionError, Witness};
use crate::corr::{CorrError, FinCorr, Ideal, TPair};
use crate::digraph::{Edge, MultiDigraph, MultivaluedMap};
use crate::fintop::FinTopSpace;
use crate::mask::{self, Mask};
use crate::report::AnalysisReport;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerdictError {
    #[error(transparent)]
    Corr(#[from] CorrError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error("edge {edge} has zero weight, so the weight family is not a quiver")]
    NotAQuiver { edge: usize },
    #[error("quiver edge {edge} is invalid: {reason}")]
    BadQuiverEdge { edge: usize, reason: &'static str },
    #[error("point count {n} is outside the supported range 1..=64")]
    BadPointCount { n: u32 },
    #[error("endomorphism system is invalid: {0}")]
    BadEndoSystem(&'static str),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

fn internal<E: std::fmt::Display>(context: &str) -> impl FnOnce(E) -> VerdictError + '_ {
    move |e| VerdictError::Internal(format!("{context}: {e}"))
}

/// Decides the uniqueness property of the pair (correspondence, relative
/// ideal `j`). The primary route is entrance-free-cycle enumeration; the
/// freeness and path conditions are evaluated independently on the dual
/// graph restricted to `j` joined with its image ideal and checked against
/// the primary answer.
pub fn uniqueness_verdict(c: &FinCorr, j: Ideal) -> Result<AnalysisReport, VerdictError> {
    let acyclic = c.is_j_acyclic(j)?;
    let dual = c.dual_graph();
    let k_ideal = j | c.image_ideal(j);
    let restricted = dual.restricted_graph(k_ideal, k_ideal);
    let tf = conditions::is_topologically_free_on(&restricted, j)
        .map_err(internal("freeness on the restricted dual graph"))?;
    let strong = conditions::is_strongly_topologically_free_on(&restricted, j)
        .map_err(internal("strong freeness on the restricted dual graph"))?;
    let aperiodic = conditions::is_topologically_aperiodic_on(&restricted.mv_map(), j)
        .map_err(internal("aperiodicity on the restricted dual map"))?;
    let weak = conditions::is_weakly_topologically_aperiodic_on(&dual.mv_map(), j)
        .map_err(internal("weak aperiodicity on the dual map"))?;

    let uniqueness = acyclic.holds;
    if tf.holds != uniqueness {
        return Err(VerdictError::Internal(format!(
            "freeness disagrees with acyclicity on ideal {}",
            mask::render(j)
        )));
    }
    if strong.holds && !uniqueness {
        return Err(VerdictError::Internal(format!(
            "strong freeness holds yet uniqueness fails on ideal {}",
            mask::render(j)
        )));
    }
    if weak.holds && !uniqueness {
        return Err(VerdictError::Internal(format!(
            "weak aperiodicity holds yet uniqueness fails on ideal {}",
            mask::render(j)
        )));
    }

    let mut witnesses = Vec::new();
    for flag in [&tf, &strong, &aperiodic, &weak, &acyclic] {
        if let Some(w) = &flag.witness {
            witnesses.push(w.clone());
        }
    }
    Ok(AnalysisReport {
        topologically_free_on_j: tf.holds,
        strongly_topologically_free_on_j: strong.holds,
        aperiodic: aperiodic.holds,
        weakly_aperiodic: weak.holds,
        j_acyclic: acyclic.holds,
        uniqueness,
        quasi_nilpotent: c.quasi_nilpotent(),
        gauge_trivial: None,
        simple: None,
        gauge_ideal_count: None,
        witnesses,
        notes: vec![
            "uniqueness decided by entrance-free-cycle enumeration over the relative ideal"
                .to_string(),
            "freeness flags evaluated on the dual graph restricted to the ideal joined with its image"
                .to_string(),
        ],
    })
}

/// The empty relative ideal: uniqueness holds unconditionally, and the full
/// verdict machinery is run anyway as a self-check.
pub fn toeplitz_verdict(c: &FinCorr) -> Result<AnalysisReport, VerdictError> {
    let mut report = uniqueness_verdict(c, 0)?;
    if !report.uniqueness {
        return Err(VerdictError::Internal(
            "the empty relative ideal must always have the uniqueness property".to_string(),
        ));
    }
    report
        .notes
        .push("empty relative ideal: every constraint set is vacuous".to_string());
    Ok(report)
}

/// Simplicity of the algebra at the largest admissible ideal: the
/// gauge-invariant ideal pair lattice must be trivial and uniqueness must
/// hold there. Shape-restricted cross-checks validate the answer against
/// independent characterizations.
pub fn simplicity_verdict(c: &FinCorr) -> Result<AnalysisReport, VerdictError> {
    let jx = c.jx();
    let pairs = c.t_pairs(jx)?;
    let expected = [
        TPair { ideal: 0, relative_ideal: jx },
        TPair { ideal: c.full(), relative_ideal: c.full() },
    ];
    let gauge_trivial = pairs == expected;
    let mut report = uniqueness_verdict(c, jx)?;
    let simple = gauge_trivial && report.uniqueness;

    if !gauge_trivial {
        let extra = pairs
            .iter()
            .find(|p| !expected.contains(p))
            .expect("a pair list differing from the trivial two contains a nontrivial pair");
        report.witnesses.push(Witness::GaugeIdealPair {
            ideal: mask::to_sorted_vec(extra.ideal),
            relative_ideal: mask::to_sorted_vec(extra.relative_ideal),
        });
    }
    report.gauge_trivial = Some(gauge_trivial);
    report.simple = Some(simple);
    report.gauge_ideal_count = Some(pairs.len() as u64);
    report.notes.push(
        "simplicity equals triviality of the invariant ideal pair lattice plus uniqueness at the largest admissible ideal"
            .to_string(),
    );

    if c.ker_phi() != 0 && is_partial_permutation(c.mult()) {
        let independent = gauge_trivial && c.quasi_nilpotent();
        if simple != independent {
            return Err(VerdictError::Internal(
                "partial-bijection cross-check disagrees with the simplicity verdict".to_string(),
            ));
        }
        report.notes.push(
            "cross-check applied: partial-bijection shape, simplicity matches quasi-nilpotence"
                .to_string(),
        );
    }
    if c.ker_phi() == 0 && has_no_zero_columns(c.mult()) && gauge_trivial {
        let periodic = is_permutation(c.mult());
        if report.uniqueness == periodic {
            return Err(VerdictError::Internal(
                "injective nondegenerate cross-check disagrees with the uniqueness verdict"
                    .to_string(),
            ));
        }
        report.notes.push(
            "cross-check applied: injective nondegenerate shape, uniqueness matches non-periodicity"
                .to_string(),
        );
    }
    Ok(report)
}

/// Report for a raw graph instance: the freeness and aperiodicity flags of
/// the graph on an open set. A graph carries no ideal datum, so the
/// acyclicity and uniqueness slots restate freeness.
pub fn graph_report(g: &MultiDigraph, u: Mask) -> Result<AnalysisReport, VerdictError> {
    condition_report(g, &g.mv_map(), u)
}

/// Report for a multivalued-map instance, evaluated through its graph.
pub fn map_report(f: &MultivaluedMap, u: Mask) -> Result<AnalysisReport, VerdictError> {
    condition_report(&f.to_graph(), f, u)
}

fn condition_report(
    g: &MultiDigraph,
    f: &MultivaluedMap,
    u: Mask,
) -> Result<AnalysisReport, VerdictError> {
    let tf = conditions::is_topologically_free_on(g, u)?;
    let strong = conditions::is_strongly_topologically_free_on(g, u)?;
    let aperiodic = conditions::is_topologically_aperiodic_on(f, u)?;
    let weak = conditions::is_weakly_topologically_aperiodic_on(f, u)?;
    if strong.holds && !tf.holds {
        return Err(VerdictError::Internal(
            "strong freeness holds yet freeness fails".to_string(),
        ));
    }
    if weak.holds && !tf.holds {
        return Err(VerdictError::Internal(
            "weak aperiodicity holds yet freeness fails".to_string(),
        ));
    }
    let mut witnesses = Vec::new();
    for flag in [&tf, &strong, &aperiodic, &weak] {
        if let Some(w) = &flag.witness {
            witnesses.push(w.clone());
        }
    }
    Ok(AnalysisReport {
        topologically_free_on_j: tf.holds,
        strongly_topologically_free_on_j: strong.holds,
        aperiodic: aperiodic.holds,
        weakly_aperiodic: weak.holds,
        j_acyclic: tf.holds,
        uniqueness: tf.holds,
        quasi_nilpotent: g.infinite_path_range() == 0,
        gauge_trivial: None,
        simple: None,
        gauge_ideal_count: None,
        witnesses,
        notes: vec![
            "graph reading: the acyclicity and uniqueness slots restate freeness on the given open set"
                .to_string(),
        ],
    })
}

fn is_partial_permutation(mult: &[Vec<u64>]) -> bool {
    let k = mult.len();
    let rows_ok = mult.iter().all(|row| row.iter().sum::<u64>() <= 1);
    let cols_ok = (0..k).all(|j| mult.iter().map(|row| row[j]).sum::<u64>() <= 1);
    rows_ok && cols_ok
}

fn is_permutation(mult: &[Vec<u64>]) -> bool {
    let k = mult.len();
    mult.iter().all(|row| row.iter().sum::<u64>() == 1)
        && (0..k).all(|j| mult.iter().map(|row| row[j]).sum::<u64>() == 1)
}

fn has_no_zero_columns(mult: &[Vec<u64>]) -> bool {
    (0..mult.len()).all(|j| mult.iter().any(|row| row[j] > 0))
}

/// A finite directed graph with a nonnegative rational weight on each edge.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverEdge {
    pub src: u32,
    pub rng: u32,
    pub weight: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FinQuiver {
    n_vertices: u32,
    edges: Vec<QuiverEdge>,
}

impl FinQuiver {
    pub fn new(n_vertices: u32, edges: Vec<QuiverEdge>) -> Result<Self, VerdictError> {
        if n_vertices == 0 || n_vertices > mask::MAX_POINTS {
            return Err(VerdictError::BadPointCount { n: n_vertices });
        }
        for (id, e) in edges.iter().enumerate() {
            if e.src >= n_vertices || e.rng >= n_vertices {
                return Err(VerdictError::BadQuiverEdge {
                    edge: id,
                    reason: "endpoint out of range",
                });
            }
            if e.weight < BigRational::zero() {
                return Err(VerdictError::BadQuiverEdge {
                    edge: id,
                    reason: "negative weight",
                });
            }
        }
        Ok(FinQuiver { n_vertices, edges })
    }

    pub fn n_vertices(&self) -> u32 {
        self.n_vertices
    }

    pub fn edges(&self) -> &[QuiverEdge] {
        &self.edges
    }

    /// True when every weight is strictly positive.
    pub fn is_genuine(&self) -> bool {
        self.edges.iter().all(|e| e.weight > BigRational::zero())
    }

    /// The weight-free underlying graph on a discrete vertex space.
    pub fn underlying_graph(&self) -> MultiDigraph {
        let space = FinTopSpace::discrete(self.n_vertices)
            .expect("the vertex count was validated at construction");
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { src: e.src, rng: e.rng })
            .collect();
        MultiDigraph::new(space, edges)
            .expect("the edge endpoints were validated at construction")
    }
}

/// Builds the correspondence of a weighted graph: one edge of positive
/// weight contributes one atom, so the multiplicity from v to w counts the
/// positive-weight edges v -> w. Also returns the largest admissible ideal.
pub fn from_quiver(q: &FinQuiver) -> Result<(FinCorr, Ideal), VerdictError> {
    let k = q.n_vertices() as usize;
    let mut mult = vec![vec![0u64; k]; k];
    for e in q.edges() {
        if e.weight > BigRational::zero() {
            mult[e.rng as usize][e.src as usize] += 1;
        }
    }
    let c = FinCorr::new(vec![1; k], mult)?;
    let jx = c.jx();
    Ok((c, jx))
}

/// For a genuine quiver, freeness of the underlying graph on the whole
/// discrete vertex space coincides with freeness of the dual graph on the
/// largest admissible ideal. Returns the shared value, erroring if the two
/// computations disagree.
pub fn quiver_tf_equivalence(q: &FinQuiver) -> Result<bool, VerdictError> {
    if let Some(edge) = q.edges().iter().position(|e| e.weight.is_zero()) {
        return Err(VerdictError::NotAQuiver { edge });
    }
    let base_graph = q.underlying_graph();
    let base = conditions::is_topologically_free_on(&base_graph, base_graph.space().full())
        .map_err(internal("freeness of the underlying graph"))?;
    let (c, jx) = from_quiver(q)?;
    let dual = conditions::is_topologically_free_on(&c.dual_graph(), jx)
        .map_err(internal("freeness of the dual graph"))?;
    if base.holds != dual.holds {
        return Err(VerdictError::Internal(
            "freeness of the underlying graph disagrees with freeness of the dual graph"
                .to_string(),
        ));
    }
    Ok(base.holds)
}

/// A partially defined self-map with a positive fiber index at each domain
/// point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoSystem {
    n_points: u32,
    phi: Vec<Option<u32>>,
    index: Vec<u64>,
}

impl EndoSystem {
    pub fn new(
        n_points: u32,
        phi: Vec<Option<u32>>,
        index: Vec<u64>,
    ) -> Result<Self, VerdictError> {
        if n_points == 0 || n_points > mask::MAX_POINTS {
            return Err(VerdictError::BadPointCount { n: n_points });
        }
        if phi.len() != n_points as usize || index.len() != n_points as usize {
            return Err(VerdictError::BadEndoSystem(
                "map and index tables must cover every point",
            ));
        }
        for (x, target) in phi.iter().enumerate() {
            match target {
                Some(y) if *y >= n_points => {
                    return Err(VerdictError::BadEndoSystem("map target out of range"));
                }
                Some(_) if index[x] == 0 => {
                    return Err(VerdictError::BadEndoSystem(
                        "fiber index must be positive on the domain",
                    ));
                }
                _ => {}
            }
        }
        Ok(EndoSystem { n_points, phi, index })
    }

    /// A totally defined map with every fiber index equal to one.
    pub fn from_single_valued(phi: &[u32]) -> Result<Self, VerdictError> {
        let n = phi.len() as u32;
        EndoSystem::new(n, phi.iter().map(|&y| Some(y)).collect(), vec![1; phi.len()])
    }

    pub fn n_points(&self) -> u32 {
        self.n_points
    }

    pub fn domain(&self) -> Mask {
        self.phi
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_some())
            .fold(0, |acc, (x, _)| acc | mask::bit(x as u32))
    }

    pub fn target(&self, x: u32) -> Option<u32> {
        self.phi[x as usize]
    }

    pub fn index(&self, x: u32) -> u64 {
        self.index[x as usize]
    }
}

/// Builds the correspondence of a partial self-map: an arrow from x to its
/// image with multiplicity the fiber index, over one-dimensional blocks.
pub fn from_endomorphism(e: &EndoSystem) -> FinCorr {
    let k = e.n_points() as usize;
    let mut mult = vec![vec![0u64; k]; k];
    for x in 0..k as u32 {
        if let Some(y) = e.target(x) {
            mult[y as usize][x as usize] = e.index(x);
        }
    }
    FinCorr::new(vec![1; k], mult)
        .expect("one-dimensional blocks over a validated point set form a correspondence")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn corr(dims: &[u64], mult: &[&[u64]]) -> FinCorr {
        FinCorr::new(dims.to_vec(), mult.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn loop_with_entrance_has_uniqueness() {
        let c = corr(&[1], &[&[2]]);
        let r = uniqueness_verdict(&c, 0b1).unwrap();
        assert!(r.uniqueness);
        assert!(r.topologically_free_on_j);
        assert!(r.strongly_topologically_free_on_j);
        assert!(r.j_acyclic);
        assert!(!r.aperiodic);
        assert!(!r.weakly_aperiodic);
        assert!(!r.quasi_nilpotent);
        assert_eq!(r.gauge_trivial, None);
        assert_eq!(r.simple, None);
    }

    #[test]
    fn lone_loop_fails_uniqueness() {
        let c = corr(&[3], &[&[1]]);
        let r = uniqueness_verdict(&c, 0b1).unwrap();
        assert!(!r.uniqueness);
        assert!(!r.topologically_free_on_j);
        assert!(r
            .witnesses
            .contains(&Witness::CyclicIdeal { ideal: vec![0], period: 1 }));
    }

    #[test]
    fn two_cycle_depends_on_the_ideal() {
        let c = corr(&[1, 1], &[&[0, 1], &[1, 0]]);
        assert!(!uniqueness_verdict(&c, 0b11).unwrap().uniqueness);
        assert!(uniqueness_verdict(&c, 0).unwrap().uniqueness);
    }

    #[test]
    fn ideal_outside_the_admissible_range_is_rejected() {
        let c = corr(&[1, 1], &[&[0, 1], &[0, 0]]);
        assert!(matches!(
            uniqueness_verdict(&c, 0b11),
            Err(VerdictError::Corr(CorrError::IdealNotInJX { .. }))
        ));
    }

    #[test]
    fn toeplitz_always_holds() {
        for c in [
            corr(&[1], &[&[1]]),
            corr(&[1], &[&[2]]),
            corr(&[1, 1], &[&[0, 1], &[1, 0]]),
        ] {
            assert!(toeplitz_verdict(&c).unwrap().uniqueness);
        }
    }

    #[test]
    fn full_shift_is_simple() {
        let r = simplicity_verdict(&corr(&[1], &[&[2]])).unwrap();
        assert_eq!(r.gauge_trivial, Some(true));
        assert_eq!(r.simple, Some(true));
        assert_eq!(r.gauge_ideal_count, Some(2));
        assert!(r.uniqueness);
    }

    #[test]
    fn single_loop_is_gauge_trivial_but_not_simple() {
        let r = simplicity_verdict(&corr(&[1], &[&[1]])).unwrap();
        assert_eq!(r.gauge_trivial, Some(true));
        assert!(!r.uniqueness);
        assert_eq!(r.simple, Some(false));
    }

    #[test]
    fn nilpotent_arrow_is_simple() {
        // the only invariant ideals compatible with the admissible hull are
        // the trivial two, and the dual graph is acyclic
        let r = simplicity_verdict(&corr(&[1, 1], &[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(r.gauge_trivial, Some(true));
        assert_eq!(r.simple, Some(true));
        assert!(r.quasi_nilpotent);
    }

    #[test]
    fn two_cycle_is_gauge_trivial_but_periodic() {
        let r = simplicity_verdict(&corr(&[1, 1], &[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(r.gauge_trivial, Some(true));
        assert_eq!(r.simple, Some(false));
        assert!(!r.uniqueness);
    }

    #[test]
    fn reducible_shift_is_not_gauge_trivial() {
        // the lower-triangular shape leaves {0} invariant with a full hull
        let r = simplicity_verdict(&corr(&[1, 1], &[&[1, 0], &[1, 1]])).unwrap();
        assert_eq!(r.gauge_trivial, Some(false));
        assert_eq!(r.simple, Some(false));
        assert!(r
            .witnesses
            .iter()
            .any(|w| matches!(w, Witness::GaugeIdealPair { .. })));
    }

    #[test]
    fn verdicts_ignore_block_dimensions() {
        for (small, large) in [
            (corr(&[1], &[&[2]]), corr(&[5], &[&[2]])),
            (corr(&[1, 1], &[&[0, 1], &[1, 0]]), corr(&[3, 2], &[&[0, 1], &[1, 0]])),
        ] {
            let a = simplicity_verdict(&small).unwrap();
            let b = simplicity_verdict(&large).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn quiver_construction_counts_positive_edges() {
        let q = FinQuiver::new(
            2,
            vec![
                QuiverEdge { src: 0, rng: 1, weight: rat(1) },
                QuiverEdge { src: 1, rng: 0, weight: rat(1) },
                QuiverEdge { src: 0, rng: 0, weight: rat(0) },
            ],
        )
        .unwrap();
        let (c, jx) = from_quiver(&q).unwrap();
        assert_eq!(c.mult(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(jx, 0b11);
    }

    #[test]
    fn quiver_rejects_bad_edges() {
        assert!(matches!(
            FinQuiver::new(1, vec![QuiverEdge { src: 0, rng: 1, weight: rat(1) }]),
            Err(VerdictError::BadQuiverEdge { edge: 0, .. })
        ));
        assert!(matches!(
            FinQuiver::new(1, vec![QuiverEdge { src: 0, rng: 0, weight: rat(-1) }]),
            Err(VerdictError::BadQuiverEdge { edge: 0, .. })
        ));
        assert!(matches!(FinQuiver::new(0, vec![]), Err(VerdictError::BadPointCount { n: 0 })));
    }

    #[test]
    fn quiver_freeness_agreement() {
        let two_cycle = FinQuiver::new(
            2,
            vec![
                QuiverEdge { src: 0, rng: 1, weight: rat(1) },
                QuiverEdge { src: 1, rng: 0, weight: rat(1) },
            ],
        )
        .unwrap();
        assert_eq!(quiver_tf_equivalence(&two_cycle).unwrap(), false);

        let two_loops = FinQuiver::new(
            1,
            vec![
                QuiverEdge { src: 0, rng: 0, weight: rat(1) },
                QuiverEdge { src: 0, rng: 0, weight: rat(2) },
            ],
        )
        .unwrap();
        assert_eq!(quiver_tf_equivalence(&two_loops).unwrap(), true);

        let chain = FinQuiver::new(
            2,
            vec![QuiverEdge { src: 0, rng: 1, weight: rat(3) }],
        )
        .unwrap();
        assert_eq!(quiver_tf_equivalence(&chain).unwrap(), true);

        let degenerate = FinQuiver::new(
            1,
            vec![QuiverEdge { src: 0, rng: 0, weight: rat(0) }],
        )
        .unwrap();
        assert!(matches!(
            quiver_tf_equivalence(&degenerate),
            Err(VerdictError::NotAQuiver { edge: 0 })
        ));
    }

    #[test]
    fn endomorphism_construction() {
        let single = EndoSystem::new(1, vec![Some(0)], vec![1]).unwrap();
        let c = from_endomorphism(&single);
        assert_eq!(c.mult(), &[vec![1]]);
        assert!(!uniqueness_verdict(&c, c.jx()).unwrap().uniqueness);

        let triple = EndoSystem::new(1, vec![Some(0)], vec![3]).unwrap();
        let c = from_endomorphism(&triple);
        assert_eq!(c.mult(), &[vec![3]]);
        assert!(uniqueness_verdict(&c, c.jx()).unwrap().uniqueness);

        let empty = EndoSystem::new(2, vec![None, None], vec![1, 1]).unwrap();
        let c = from_endomorphism(&empty);
        assert_eq!(c.mult(), &[vec![0, 0], vec![0, 0]]);
        assert_eq!(empty.domain(), 0);
    }

    #[test]
    fn graph_report_on_half_open_two_point_space() {
        let space = crate::fintop::make_space(2, &[0b01]).unwrap();
        let g = MultiDigraph::new(
            space,
            vec![Edge { src: 1, rng: 0 }, Edge { src: 1, rng: 1 }],
        )
        .unwrap();
        let r = graph_report(&g, 0b11).unwrap();
        assert!(r.topologically_free_on_j);
        assert!(!r.strongly_topologically_free_on_j);
        assert!(r.aperiodic);
        assert!(r.weakly_aperiodic);
        assert!(r.uniqueness);
        assert!(!r.quasi_nilpotent);
        assert!(r.witnesses.contains(&Witness::BoundedNonReturning {
            open: vec![0],
            max_length: 2
        }));
    }

    #[test]
    fn map_report_on_constant_two_point_map() {
        let space = FinTopSpace::discrete(2).unwrap();
        let f = crate::digraph::MultivaluedMap::new(space, vec![0b10, 0b10]).unwrap();
        let full = map_report(&f, 0b11).unwrap();
        assert!(full.topologically_free_on_j);
        assert!(!full.aperiodic);
        assert!(!full.weakly_aperiodic);
        assert!(full.uniqueness);

        let half = map_report(&f, 0b10).unwrap();
        assert!(!half.aperiodic);
        assert!(half.weakly_aperiodic);
    }

    #[test]
    fn condition_errors_surface_as_input_problems() {
        let space = crate::fintop::make_space(2, &[0b01]).unwrap();
        let g = MultiDigraph::new(space, vec![]).unwrap();
        assert!(matches!(
            graph_report(&g, 0b10),
            Err(VerdictError::Condition(_))
        ));
    }

    #[test]
    fn endomorphism_validation() {
        assert!(matches!(
            EndoSystem::new(1, vec![Some(1)], vec![1]),
            Err(VerdictError::BadEndoSystem(_))
        ));
        assert!(matches!(
            EndoSystem::new(1, vec![Some(0)], vec![0]),
            Err(VerdictError::BadEndoSystem(_))
        ));
        assert!(matches!(
            EndoSystem::new(2, vec![Some(0)], vec![1]),
            Err(VerdictError::BadEndoSystem(_))
        ));
        let partial = EndoSystem::new(2, vec![Some(1), None], vec![1, 7]).unwrap();
        assert_eq!(partial.domain(), 0b01);
        assert_eq!(partial.target(0), Some(1));
        assert_eq!(partial.target(1), None);
    }
}
