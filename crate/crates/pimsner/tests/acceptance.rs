//! Acceptance suite: one test per criterion, each printing a single
//! `ACCEPTANCE NN <name>: PASS` line (run with `--nocapture` to see the
//! lines alongside the per-test harness verdicts).

use pimsner::corr::FinCorr;
use pimsner::instance::{Instance, InstanceDoc};
use pimsner::mask;
use pimsner::sweep;
use pimsner::verdict::{self, EndoSystem};
use std::time::Instant;

fn resolve(text: &str) -> Instance {
    InstanceDoc::parse(text).expect("valid document").resolve().expect("valid instance")
}

/// Every 3-block multiplicity matrix with entries up to two.
fn three_block_matrices() -> impl Iterator<Item = FinCorr> {
    (0..19683u64).map(|code| {
        let mut rest = code;
        let mut mult = vec![vec![0u64; 3]; 3];
        for row in mult.iter_mut() {
            for entry in row.iter_mut() {
                *entry = rest % 3;
                rest /= 3;
            }
        }
        FinCorr::new(vec![1, 1, 1], mult).expect("valid matrix")
    })
}

#[test]
fn acceptance_01_gasket_shadow_graph() {
    let doc = r#"{"kind":"graph","points":2,"opens":[[0]],"edges":[[1,0],[1,1]]}"#;
    let Instance::Graph { graph, u } = resolve(doc) else {
        panic!("graph file resolved to another kind");
    };
    let start = Instant::now();
    let report = verdict::graph_report(&graph, u).expect("analyzable");
    let elapsed = start.elapsed();
    assert!(report.topologically_free_on_j);
    assert!(!report.strongly_topologically_free_on_j);
    assert!(
        elapsed.as_micros() < 1000,
        "analysis took {elapsed:?}, expected under one millisecond"
    );
    println!(
        "ACCEPTANCE 01 gasket shadow graph: PASS (free, not strongly free, {elapsed:?})"
    );
}

#[test]
fn acceptance_02_two_point_map_examples() {
    // Constant map onto the second point: the path condition holds on the
    // open half while aperiodicity fails there.
    let doc = r#"{"kind":"mvmap","points":2,"map":{"0":[1],"1":[1]},"u":[1]}"#;
    let Instance::Map { map, u } = resolve(doc) else {
        panic!("map file resolved to another kind");
    };
    let constant = verdict::map_report(&map, u).expect("analyzable");
    assert!(constant.weakly_aperiodic);
    assert!(!constant.aperiodic);

    // Swap map with a half loop: the path condition fails on the whole
    // space although the graph of the map is topologically free.
    let doc = r#"{"kind":"mvmap","points":2,"map":{"0":[1],"1":[0,1]}}"#;
    let Instance::Map { map, u } = resolve(doc) else {
        panic!("map file resolved to another kind");
    };
    let swap = verdict::map_report(&map, u).expect("analyzable");
    assert!(!swap.weakly_aperiodic);
    assert!(swap.topologically_free_on_j);
    println!("ACCEPTANCE 02 two-point map examples: PASS (both verdict pairs reproduced)");
}

#[test]
fn acceptance_03_uniqueness_equivalence_sweep() {
    let start = Instant::now();
    let mut checks = 0u64;
    for corr in three_block_matrices() {
        for j in mask::subsets(corr.jx()) {
            let report = verdict::uniqueness_verdict(&corr, j).expect("analyzable");
            assert_eq!(
                report.uniqueness, report.j_acyclic,
                "uniqueness must equal acyclicity for {:?} at {}",
                corr.mult(),
                mask::render(j)
            );
            assert_eq!(
                report.uniqueness, report.topologically_free_on_j,
                "uniqueness must equal freeness for {:?} at {}",
                corr.mult(),
                mask::render(j)
            );
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "sweep took {elapsed:?}, expected under a minute");
    println!(
        "ACCEPTANCE 03 uniqueness equivalence sweep: PASS ({checks} ideal checks over 19683 matrices in {elapsed:?})"
    );
}

#[test]
fn acceptance_04_sufficiency_sweep() {
    let mut checks = 0u64;
    for corr in three_block_matrices() {
        for j in mask::subsets(corr.jx()) {
            let report = verdict::uniqueness_verdict(&corr, j).expect("analyzable");
            if report.weakly_aperiodic {
                assert!(
                    report.uniqueness,
                    "weak aperiodicity must imply uniqueness for {:?} at {}",
                    corr.mult(),
                    mask::render(j)
                );
            }
            if report.strongly_topologically_free_on_j {
                assert!(
                    report.uniqueness,
                    "strong freeness must imply uniqueness for {:?} at {}",
                    corr.mult(),
                    mask::render(j)
                );
            }
            checks += 1;
        }
    }
    println!("ACCEPTANCE 04 sufficiency sweep: PASS ({checks} ideal checks, both implications hold)");
}

#[test]
fn acceptance_05_lattice_sweep() {
    let exhaustive = sweep::lattice_exhaustive(3);
    assert_eq!(exhaustive.instances, 3 + 81 * 4 + 19683 * 29);
    assert!(
        exhaustive.violations.is_empty(),
        "first violation: {}",
        exhaustive.violations[0].description
    );
    let random = sweep::lattice_random(1000, 1);
    assert_eq!(random.instances, 1000);
    assert!(
        random.violations.is_empty(),
        "first violation: {}",
        random.violations[0].description
    );
    println!(
        "ACCEPTANCE 05 lattice sweep: PASS ({} exhaustive + 1000 random instances, all implications and the continuity equivalence hold)",
        exhaustive.instances
    );
}

#[test]
fn acceptance_06_single_isometry_criterion() {
    for n in 1..=5u64 {
        let system = EndoSystem::new(1, vec![Some(0)], vec![n]).expect("valid tables");
        let corr = verdict::from_endomorphism(&system);
        let report = verdict::uniqueness_verdict(&corr, corr.jx()).expect("analyzable");
        assert_eq!(
            report.uniqueness,
            n > 1,
            "one-point endomorphism with fiber index {n}"
        );
    }
    let family = sweep::endomorphism_translation();
    assert_eq!(family.instances, 3 + 25 + 343);
    assert!(
        family.violations.is_empty(),
        "first violation: {}",
        family.violations[0].description
    );
    println!(
        "ACCEPTANCE 06 single isometry criterion: PASS (uniqueness iff index exceeds one; {} translated systems agree)",
        family.instances
    );
}

#[test]
fn acceptance_07_simplicity_contrasts() {
    let single = FinCorr::new(vec![1], vec![vec![1]]).expect("valid matrix");
    let report = verdict::simplicity_verdict(&single).expect("analyzable");
    assert_eq!(report.gauge_trivial, Some(true));
    assert_eq!(report.gauge_ideal_count, Some(2));
    assert_eq!(report.simple, Some(false));
    assert!(!report.uniqueness);

    for n in 2..=5u64 {
        let corr = FinCorr::new(vec![1], vec![vec![n]]).expect("valid matrix");
        let report = verdict::simplicity_verdict(&corr).expect("analyzable");
        assert_eq!(report.simple, Some(true), "multiplicity {n}");
        assert_eq!(report.gauge_trivial, Some(true), "multiplicity {n}");
        assert!(report.uniqueness, "multiplicity {n}");
    }
    println!(
        "ACCEPTANCE 07 simplicity contrasts: PASS (single loop: two invariant pairs yet not simple; higher multiplicities simple)"
    );
}

#[test]
fn acceptance_08_oracle_agreement() {
    let duals = sweep::correspondence_dual_oracles(3, 2);
    assert_eq!(duals.instances, 3 + 81 + 19683);
    assert!(
        duals.violations.is_empty(),
        "first violation: {}",
        duals.violations[0].description
    );
    let bimodule = sweep::explicit_bimodule_agreement();
    assert_eq!(bimodule.instances, 9 + 4 * 81);
    assert!(
        bimodule.violations.is_empty(),
        "first violation: {}",
        bimodule.violations[0].description
    );
    println!(
        "ACCEPTANCE 08 oracle agreement: PASS ({} dual-graph replays and {} matrix-unit instances agree; the lattice replay runs inside criterion 05)",
        duals.instances, bimodule.instances
    );
}

#[test]
fn acceptance_09_dimension_invariance() {
    let family = sweep::dimension_invariance(200, 1);
    assert_eq!(family.instances, 200);
    assert!(
        family.violations.is_empty(),
        "first violation: {}",
        family.violations[0].description
    );
    println!("ACCEPTANCE 09 dimension invariance: PASS (200 seeded block-size pairs, identical verdicts)");
}

#[test]
fn acceptance_10_weighted_graph_equivalence() {
    let family = sweep::quiver_equivalence();
    assert_eq!(family.instances, 5 + 70 + 715);
    assert!(
        family.violations.is_empty(),
        "first violation: {}",
        family.violations[0].description
    );
    println!(
        "ACCEPTANCE 10 weighted graph equivalence: PASS ({} positive-weight graphs, edge-graph freeness equals the dual verdict)",
        family.instances
    );
}
