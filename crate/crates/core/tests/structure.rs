mod common;

use moufkit::abelext::{decompose_canonical, extension_maps_scan, is_3_divisible};
use moufkit::commutator::{
    bruck_derived_series, classical_solvable, congruence_solvable, derived_subloop, nilpotent,
    verify_series, DEFAULT_ORDER_CAP,
};
use moufkit::divisibility::{cauchy, divisibility, CauchyOutcome};
use moufkit::fixtures::fixture;
use moufkit::mappings::{
    inner_generator, inner_mapping_group, is_semiautomorphism, triality_condition, ElementMap,
    InnerGenerator, DEFAULT_INN_CAP,
};
use moufkit::report::{analyze, ReportOptions};
use moufkit::subloops::{all_normal_subloops, is_normal, nucleus, transversal, Subloop};
use moufkit::{FiniteLoop, IdentityScheme, LoopError};

use common::{automorphisms, catalog_loops, cyclic, group_commutator_oracle};

/// Every normalized latin square of order 5, by backtracking.
fn loops_of_order_5() -> Vec<FiniteLoop> {
    fn fill(t: &mut [[usize; 5]; 5], cell: usize, out: &mut Vec<FiniteLoop>) {
        if cell == 25 {
            let rows: Vec<Vec<usize>> = t.iter().map(|r| r.to_vec()).collect();
            out.push(FiniteLoop::from_table(&rows).unwrap());
            return;
        }
        let (i, j) = (cell / 5, cell % 5);
        if i == 0 || j == 0 {
            t[i][j] = i + j;
            return fill(t, cell + 1, out);
        }
        for v in 0..5 {
            if (0..j).all(|c| t[i][c] != v) && (0..i).all(|r| t[r][j] != v) {
                t[i][j] = v;
                fill(t, cell + 1, out);
            }
        }
    }
    let mut out = Vec::new();
    fill(&mut [[0; 5]; 5], 0, &mut out);
    out
}

#[test]
fn order_5_loops_include_non_power_associative() {
    let all = loops_of_order_5();
    assert_eq!(all.len(), 56);
    let bad = all
        .iter()
        .find(|q| !q.is_power_associative())
        .expect("a non-power-associative loop of order 5");
    assert!(bad.power_associativity_witness().is_some());
    assert!(matches!(divisibility(bad, 2), Err(LoopError::NotPowerAssociative)));
    assert!(matches!(cauchy(bad, 5), Err(LoopError::NotPowerAssociative)));
    // The labelled copies of C5: 4! labellings over |Aut(C5)| = 4.
    assert_eq!(all.iter().filter(|q| q.is_associative()).count(), 6);
}

#[test]
fn paige_loop_is_moufang_under_every_scheme() {
    let p = fixture("paige-M2").unwrap();
    for s in [
        IdentityScheme::Moufang1,
        IdentityScheme::Moufang2,
        IdentityScheme::Moufang3,
        IdentityScheme::Moufang4,
    ] {
        assert!(p.satisfies_identity(s).holds, "{}", s.name());
    }
    assert!(!p.is_associative());
    assert!(!p.satisfies_identity(IdentityScheme::Extra).holds);
    let t = triality_condition(&p).unwrap();
    assert!(t.holds && t.trivial_nucleus);
}

/// In a 2-divisible commutative group every semiautomorphism is an
/// automorphism.
#[test]
fn semiautomorphisms_of_odd_cyclic_groups_are_automorphisms() {
    fn bijections(n: usize) -> Vec<Vec<usize>> {
        if n == 1 {
            return vec![vec![0]];
        }
        let mut out = Vec::new();
        for p in bijections(n - 1) {
            for pos in 1..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }
    for n in [3, 5, 7] {
        let g = cyclic(n);
        let auts = automorphisms(&g);
        let semis: Vec<ElementMap> = bijections(n)
            .into_iter()
            .map(ElementMap::new)
            .filter(|f| is_semiautomorphism(&g, f))
            .collect();
        assert_eq!(semis.len(), auts.len(), "C{n}");
        assert!(semis.iter().all(|f| f.is_automorphism_of(&g)));
    }
}

#[test]
fn classical_series_agrees_with_iterated_derived_subloops() {
    for (name, q) in catalog_loops() {
        let bruck = bruck_derived_series(&q);
        let by_bruck = bruck.last().unwrap().is_trivial();
        let classical = classical_solvable(&q);
        assert_eq!(classical.is_some(), by_bruck, "{name}");
        if let Some(w) = &classical {
            assert!(verify_series(&q, w), "{name}");
        }
        if q.is_associative() && q.order() <= 24 {
            let all: Vec<usize> = q.elements().collect();
            assert_eq!(
                derived_subloop(&q).elements(),
                group_commutator_oracle(&q, &all, &all).as_slice(),
                "{name}"
            );
        }
    }
}

#[test]
fn every_reported_witness_verifies() {
    for (name, q) in catalog_loops() {
        for w in [
            nilpotent(&q),
            classical_solvable(&q),
            congruence_solvable(&q, DEFAULT_ORDER_CAP).unwrap(),
        ]
        .into_iter()
        .flatten()
        {
            assert!(verify_series(&q, &w), "{name}: {:?}", w.kind);
        }
    }
}

/// Orders coprime to 6 make a Moufang loop uniquely 2- and 3-divisible; then
/// every abelian normal subloop decomposes and the two solvability notions
/// coincide.
#[test]
fn six_divisible_moufang_fixtures() {
    let mut seen = 0;
    for (name, q) in catalog_loops() {
        if !q.is_moufang() || q.order() % 2 == 0 || q.order() % 3 == 0 {
            continue;
        }
        seen += 1;
        for x in all_normal_subloops(&q, usize::MAX).unwrap() {
            if x.to_loop(&q).0.is_commutative_group() {
                assert!(decompose_canonical(&q, &x).unwrap().is_extension(), "{name}");
            }
        }
        assert_eq!(
            classical_solvable(&q).is_some(),
            congruence_solvable(&q, DEFAULT_ORDER_CAP).unwrap().is_some(),
            "{name}"
        );
    }
    assert!(seen >= 3);
}

/// Where the explicit maps apply, they satisfy the extension equation
/// exactly when the forced decomposition does.
#[test]
fn explicit_maps_agree_with_forced_decomposition() {
    for (name, q) in catalog_loops() {
        if q.order() > 48 || !q.is_moufang() || !is_3_divisible(&q) {
            continue;
        }
        for x in all_normal_subloops(&q, usize::MAX).unwrap() {
            let (k, _) = x.to_loop(&q);
            if !k.is_commutative_group() || k.order() % 2 == 0 {
                continue;
            }
            let u = transversal(&q, &x).unwrap();
            let (checks, violations) = extension_maps_scan(&q, &x, &u).unwrap();
            assert!(checks > 0);
            let forced = decompose_canonical(&q, &x).unwrap().is_extension();
            assert_eq!(violations == 0, forced, "{name}, X = {:?}", x.elements());
        }
    }
}

#[test]
fn inner_maps_fix_identity_and_restrict_to_nuclear_normal_subloops() {
    for (name, q) in catalog_loops() {
        if q.order() > 24 {
            continue;
        }
        let inn = inner_mapping_group(&q, DEFAULT_INN_CAP).unwrap();
        assert!(inn.iter().all(|f| f.apply(0) == 0), "{name}");
        if !q.is_moufang() {
            continue;
        }
        let nuc = nucleus(&q);
        for x in all_normal_subloops(&q, usize::MAX).unwrap() {
            if !x.is_subset(&nuc) {
                continue;
            }
            let (sub, _) = x.to_loop(&q);
            for a in q.elements() {
                for b in q.elements() {
                    for kind in [InnerGenerator::L2, InnerGenerator::R2] {
                        let r = inner_generator(&q, kind, a, b).restrict(&x);
                        let r = r.unwrap_or_else(|| panic!("{name}: does not preserve X"));
                        assert!(r.is_automorphism_of(&sub), "{name}");
                    }
                }
            }
        }
    }
    assert_eq!(inner_mapping_group(&fixture("symmetric:3").unwrap(), 100).unwrap().len(), 6);
}

#[test]
fn quaternion_commutant_and_triality() {
    let q8 = fixture("quaternion8").unwrap();
    let t = triality_condition(&q8).unwrap();
    assert!(!t.holds);
    assert!(!t.trivial_nucleus);
    let c3 = triality_condition(&cyclic(3)).unwrap();
    assert!(c3.holds);
}

/// Report verdicts match direct library calls on every fixture.
#[test]
fn report_has_no_drift() {
    let opts = ReportOptions::default();
    for (name, q) in catalog_loops() {
        let r = analyze(&q, name, &opts);
        assert_eq!(r.order, q.order());
        assert_eq!(r.nilpotent.witness, nilpotent(&q), "{name}");
        assert_eq!(r.classically_solvable.witness, classical_solvable(&q), "{name}");
        assert_eq!(
            r.congruence_solvable.value().map(|v| v.witness.clone()),
            Some(congruence_solvable(&q, opts.max_order).unwrap()),
            "{name}"
        );
        for s in IdentityScheme::ALL {
            assert_eq!(r.identities[s.name()].holds, q.satisfies_identity(s).holds, "{name}");
        }
        if let Some(cauchy_map) = r.cauchy.value() {
            for (&p, outcome) in cauchy_map {
                assert_eq!(*outcome, cauchy(&q, p).unwrap(), "{name}");
            }
        }
        if let Some(entries) = r.abelian_normal_subloops.value() {
            for e in entries {
                let x: &Subloop = &e.elements;
                assert!(is_normal(&q, x));
                assert_eq!(e.decomposes, e.abelian_in_q, "{name}");
            }
        }
    }
    let p = analyze(&fixture("paige-M2").unwrap(), "paige-M2", &opts);
    assert!(p.simple);
    assert_eq!(p.cauchy.value().unwrap()[&5], CauchyOutcome::FailsNoWitness);
}
