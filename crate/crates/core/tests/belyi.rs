use std::collections::BTreeMap;
use std::sync::OnceLock;

use dessins_core::belyi::fraction::{infinity_order, passport_from_fraction, reconstruct, vertices_from_residues};
use dessins_core::belyi::poly::{self, c, CPoly};
use dessins_core::belyi::snap::{is_belyi_exact, snap_rational, DEFAULT_DENOMINATOR_BOUND};
use dessins_core::enumeration::enumerate_dessins;
use dessins_core::{
    fraction_to_a, monodromy, partial_fractions, setup_system, setup_system_with, solve_system, tree_shabat, verify,
    CycleType, Dessin, Passport, RationalFraction, SolveOptions, SystemOptions,
};
use num_complex::Complex64;
use proptest::prelude::*;

/// Genus-zero dessins up to `n` darts grouped by passport.
fn planar_by_passport(n: usize) -> BTreeMap<Passport, Vec<Dessin>> {
    let mut out: BTreeMap<Passport, Vec<Dessin>> = BTreeMap::new();
    for k in 1..=n {
        for d in enumerate_dessins(k).unwrap().entries {
            let p = d.passport().unwrap();
            if p.genus == 0 {
                out.entry(p).or_default().push(d);
            }
        }
    }
    out
}

#[test]
fn solutions_realise_exactly_the_dessins_of_the_passport() {
    for (p, dessins) in planar_by_passport(4) {
        let sys = setup_system(&p).unwrap();
        let report = solve_system(&sys, &SolveOptions::default()).unwrap();
        assert!(!report.candidates.is_empty(), "{p}");
        let mut realised = vec![false; dessins.len()];
        for cand in &report.candidates {
            let m = monodromy(&cand.fraction).unwrap().dessin();
            assert_eq!(m.passport().unwrap(), p);
            let i = dessins.iter().position(|d| d.is_isomorphic(&m).is_some()).expect("monodromy is in the catalog");
            realised[i] = true;
            assert_eq!(passport_from_fraction(&cand.fraction, 1e-6).unwrap(), p);
        }
        assert!(realised.iter().all(|&r| r), "{p}: some dessin has no solution");
    }
}

#[test]
fn residues_reconstruct_the_fraction() {
    for (p, _) in planar_by_passport(5) {
        let sys = setup_system(&p).unwrap();
        for cand in solve_system(&sys, &SolveOptions::default()).unwrap().candidates {
            let a = fraction_to_a(&cand.fraction).unwrap();
            let v = vertices_from_residues(&partial_fractions(&a).unwrap(), 1e-6).unwrap();
            let back = reconstruct(&v, infinity_order(&a)).unwrap();
            assert!(back.distance(&cand.fraction) <= 1e-8, "{p}: {:e}", back.distance(&cand.fraction));
        }
    }
}

#[test]
fn doubling_the_budget_finds_nothing_new() {
    let p = Passport::from_cycle_types(
        CycleType::new(vec![3, 1]),
        CycleType::new(vec![2, 2]),
        CycleType::new(vec![3, 1]),
    )
    .unwrap();
    let sys = setup_system(&p).unwrap();
    let base = solve_system(&sys, &SolveOptions::default()).unwrap();
    let more = solve_system(
        &sys,
        &SolveOptions {
            starts_per_round: 128,
            max_rounds: 80,
            seed: 11,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(base.candidates.len(), more.candidates.len());
    for cand in &base.candidates {
        assert!(more.candidates.iter().any(|m| m.fraction.distance(&cand.fraction) < 1e-8));
    }
}

#[test]
fn small_maps_snap_to_exact_belyi_maps() {
    let path = Passport::from_cycle_types(CycleType::new(vec![1, 1]), CycleType::new(vec![2]), CycleType::new(vec![2])).unwrap();
    let cube = Passport::from_cycle_types(CycleType::new(vec![3]), CycleType::new(vec![1, 1, 1]), CycleType::new(vec![3])).unwrap();
    for p in [path, cube] {
        let report = solve_system(&setup_system(&p).unwrap(), &SolveOptions::default()).unwrap();
        assert_eq!(report.candidates.len(), 1);
        let exact = snap_rational(&report.candidates[0].fraction, DEFAULT_DENOMINATOR_BOUND, 1e-8).unwrap();
        assert!(is_belyi_exact(&exact));
    }
}

#[test]
fn degree_seven_trees_are_among_the_system_solutions() {
    let p = Passport::from_cycle_types(
        CycleType::new(vec![4, 2, 1]),
        CycleType::new(vec![2, 2, 1, 1, 1]),
        CycleType::new(vec![7]),
    )
    .unwrap();
    let opts = SystemOptions {
        pin_black: Some(4),
        pin_white: Some(2),
        ..Default::default()
    };
    let sys = setup_system_with(&p, &opts).unwrap();
    let cands = solve_system(&sys, &SolveOptions::default()).unwrap().candidates;
    assert_eq!(cands.len(), 8);
    let trees: Vec<Dessin> = enumerate_dessins(7)
        .unwrap()
        .entries
        .into_iter()
        .filter(|d| d.passport().unwrap() == p)
        .collect();
    assert!(!trees.is_empty());
    for t in &trees {
        let shabat = tree_shabat(t, &SolveOptions::default()).unwrap();
        assert!(verify(t, &shabat.fraction).unwrap().isomorphic);
        assert!(
            cands.iter().any(|c| c.fraction.distance(&shabat.fraction) < 1e-6),
            "tree polynomial is not a system solution"
        );
    }
}

/// `p(az + b)`.
fn compose_affine(p: &[Complex64], a: Complex64, b: Complex64) -> CPoly {
    p.iter().rev().fold(Vec::new(), |acc, &k| poly::add(&poly::mul(&acc, &[b, a]), &[k]))
}

fn known_maps() -> &'static [(Dessin, RationalFraction)] {
    static MAPS: OnceLock<Vec<(Dessin, RationalFraction)>> = OnceLock::new();
    MAPS.get_or_init(compute_known_maps)
}

fn compute_known_maps() -> Vec<(Dessin, RationalFraction)> {
    let mut out = Vec::new();
    for (p, dessins) in planar_by_passport(4) {
        if p.faces.count() > 2 {
            continue;
        }
        let report = solve_system(&setup_system(&p).unwrap(), &SolveOptions::default()).unwrap();
        for cand in report.candidates {
            let m = monodromy(&cand.fraction).unwrap().dessin();
            let d = dessins.iter().find(|d| d.is_isomorphic(&m).is_some()).unwrap().clone();
            out.push((d, cand.fraction));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn affine_reparametrisation_keeps_the_dessin(
        idx in 0usize..1000,
        ar in 0.5f64..2.0, ai in -1.0f64..1.0,
        br in -1.0f64..1.0, bi in -1.0f64..1.0,
    ) {
        let maps = known_maps();
        let (d, f) = &maps[idx % maps.len()];
        let (a, b) = (c(ar, ai), c(br, bi));
        let g = RationalFraction::new(compose_affine(&f.num, a, b), compose_affine(&f.den, a, b)).unwrap();
        let z = c(0.3, 0.7);
        prop_assert!((g.eval(z) - f.eval(a * z + b)).norm() < 1e-9);
        prop_assert_eq!(passport_from_fraction(&g, 1e-6).unwrap(), d.passport().unwrap());
        prop_assert!(verify(d, &g).unwrap().isomorphic);
    }
}
