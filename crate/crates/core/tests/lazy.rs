use std::collections::BTreeSet;
use std::sync::Arc;

use lazytwist::fixtures;
use lazytwist::hopf::{self, GTensor};
use lazytwist::lazy::{self, BGElement, Status};
use lazytwist::pontryagin::{AltForm, Dual};
use lazytwist::{CycNum, FiniteGroup};

const SMALL: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "V4", "C2xC4", "S3", "Q8", "D8", "A4",
];
const ALL: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "V4", "C2xC4", "S3", "Q8", "D8", "A4", "S4",
    "Wall32", "C27sd", "Wr_3",
];

fn group(name: &str) -> Arc<FiniteGroup> {
    Arc::new(fixtures::by_name(name).unwrap())
}

#[test]
fn bg_sizes() {
    for (name, size) in [
        ("A4", 2),
        ("D8", 3),
        ("C27sd", 9),
        ("Wall32", 2),
        ("Q8", 1),
        ("S3", 1),
        ("S4", 2),
        ("V4", 2),
        ("Wr_3", 3),
    ] {
        let bg = lazy::bg_enumerate(&group(name), 128).unwrap();
        assert_eq!(bg.len(), size, "{name}");
        assert!(bg[0].is_trivial());
    }
}

#[test]
fn bg_enumeration_rejects_large_groups() {
    assert!(lazy::bg_enumerate(&group("Wr_3"), 64).is_err());
}

#[test]
fn canonical_r_equality_agrees_with_pullback_comparison() {
    for name in ["A4", "D8", "S4", "Wall32", "C27sd", "V4", "C2xC4", "C3xC3"] {
        let g = group(name);
        let bg = lazy::bg_enumerate(&g, 128).unwrap();
        for (i, x) in bg.iter().enumerate() {
            for (j, y) in bg.iter().enumerate() {
                let same_pair = x.subgroup == y.subgroup && x.form == y.form;
                assert_eq!(i == j, same_pair, "{name}: {i} vs {j}");
                assert_eq!(x == y, same_pair);
            }
            // R(C, pullback of b) = R(A, b) for every abelian normal C ⊇ A
            for c in g.normal_abelian_subgroups() {
                if !x.subgroup.is_subset_of(&c) {
                    continue;
                }
                let dc = Dual::new(&g, &c).unwrap();
                let pb = AltForm::pullback(&dc, &x.dual, &x.form).unwrap();
                assert_eq!(hopf::r_from_form(&g, &dc, &pb), x.canonical_r, "{name}");
            }
        }
    }
}

#[test]
fn bg_product_is_independent_of_the_witnessing_subgroup() {
    for name in ["A4", "D8", "S4", "Wall32", "C27sd", "V4", "C2xC4", "C3xC3"] {
        let g = group(name);
        let bg = lazy::bg_enumerate(&g, 128).unwrap();
        let subgroups = g.normal_abelian_subgroups();
        for x in &bg {
            for y in &bg {
                let valid: Vec<_> = subgroups
                    .iter()
                    .filter(|c| x.subgroup.is_subset_of(c) && y.subgroup.is_subset_of(c))
                    .collect();
                let product = lazy::bg_product(&g, x, y).unwrap();
                assert_eq!(product.is_some(), !valid.is_empty());
                for c in valid {
                    let z = lazy::bg_product_via(&g, x, y, c).unwrap();
                    assert_eq!(Some(&z), product.as_ref(), "{name}");
                    assert!(bg.contains(&z), "{name}: product leaves B(G)");
                }
            }
        }
    }
}

#[test]
fn bg_product_examples() {
    let g = group("D8");
    let bg = lazy::bg_enumerate(&g, 64).unwrap();
    let one = BGElement::trivial(&g);
    for x in &bg {
        assert_eq!(lazy::bg_product(&g, x, &one).unwrap().as_ref(), Some(x));
        // 2-group socle: b² = 1
        let sq = lazy::bg_product(&g, x, x).unwrap().unwrap();
        assert!(sq.is_trivial());
    }
    // distinct order-9 socles in the order-27 group generate the whole group
    let g = group("C27sd");
    let bg = lazy::bg_enumerate(&g, 64).unwrap();
    let mut undefined = 0;
    for x in &bg[1..] {
        for y in &bg[1..] {
            let p = lazy::bg_product(&g, x, y).unwrap();
            if x.subgroup != y.subgroup {
                assert!(p.is_none());
                undefined += 1;
            } else {
                assert!(p.is_some());
            }
        }
    }
    assert_eq!(undefined, 8 * 6);
}

fn brute_force_orbits(g: &FiniteGroup) -> usize {
    let n = g.order();
    let mut reps = BTreeSet::new();
    for a in 0..n {
        for b in 0..n {
            let rep = (0..n).map(|s| (g.conj(s, a), g.conj(s, b))).min().unwrap();
            reps.insert(rep);
        }
    }
    reps.len()
}

fn burnside(g: &FiniteGroup) -> usize {
    let n = g.order();
    let sum: usize = (0..n)
        .map(|s| (0..n).filter(|&x| g.mul(s, x) == g.mul(x, s)).count().pow(2))
        .sum();
    sum / n
}

#[test]
fn orbit_dimension_matches_brute_force_partition() {
    for name in ALL {
        let g = group(name);
        let dim = lazy::invariant_orbit_dimension(&g, 128).unwrap();
        assert_eq!(dim, brute_force_orbits(&g), "{name}");
        assert_eq!(dim, burnside(&g), "{name}");
        if g.is_abelian() {
            assert_eq!(dim, g.order() * g.order());
        }
    }
    assert_eq!(lazy::invariant_orbit_dimension(&group("S3"), 64).unwrap(), 11);
}

/// Orbit sums as tensors, multiplied in `k[G ⊗ G]`.
fn commutative_by_tensors(g: &Arc<FiniteGroup>) -> bool {
    let orbits = lazy::invariant_orbits(g, 64).unwrap();
    let n = g.order();
    let sums: Vec<GTensor> = orbits
        .iter()
        .map(|o| GTensor::from_terms(g, 2, o.iter().map(|&p| (vec![p / n, p % n], CycNum::one()))))
        .collect();
    sums.iter().enumerate().all(|(i, x)| {
        sums[i + 1..].iter().all(|y| x.mul(y).unwrap() == y.mul(x).unwrap())
    })
}

#[test]
fn multiplicity_freeness() {
    for (name, expected) in [
        ("D8", true),
        ("A4", false),
        ("S3", true),
        ("Q8", true),
        ("C6", true),
        ("V4", true),
    ] {
        let g = group(name);
        assert_eq!(lazy::has_no_multiplicities(&g, 64).unwrap(), expected, "{name}");
        assert_eq!(commutative_by_tensors(&g), expected, "{name}");
    }
}

#[test]
fn lie_complex_is_exact_on_small_fixtures() {
    for name in SMALL {
        let g = group(name);
        if g.order() > 12 {
            continue;
        }
        let check = lazy::lie_complex_check(&g, 64).unwrap();
        assert!(check.injective, "{name}");
        assert!(check.exact, "{name}");
        assert_eq!(check.kernel_dim, g.order(), "{name}");
    }
    assert_eq!(lazy::lie_complex_check(&group("C1"), 64).unwrap().kernel_dim, 1);
    assert!(lazy::lie_complex_check(&group("C6xC6"), 64).is_err());
}

fn expected_order(name: &str) -> Option<usize> {
    match name {
        "A4" | "V4" | "C2xC4" => Some(2),
        "C27sd" => Some(9),
        "Wr_3" => Some(3),
        "Wall32" | "S4" => None,
        _ => Some(1),
    }
}

#[test]
fn h2_verdicts() {
    for name in ALL {
        let g = group(name);
        let r = lazy::h2_compute(&g, 128).unwrap();
        assert!(r.order_lower <= r.order_upper, "{name}");
        assert_eq!(r.order_lower % r.int_mod_inn, 0, "{name}");
        assert_eq!(r.exact_order.is_some(), r.status == Status::Exact, "{name}");
        // the coset bounds bracket every exact verdict
        let r4_upper = r.int_mod_inn * r.bg.len();
        if let Some(o) = r.exact_order {
            assert!(r.int_mod_inn <= o && o <= r4_upper, "{name}");
        }
        assert_eq!(r.exact_order, expected_order(name), "{name}");
    }
}

#[test]
fn h2_structures_and_certificates() {
    let rules = |r: &lazy::H2Report| r.certificates.iter().map(|c| c.rule.clone()).collect::<Vec<_>>();
    let r = lazy::h2_compute(&group("C27sd"), 64).unwrap();
    assert_eq!(r.structure, Some(vec![3, 3]));
    assert!(rules(&r).contains(&"R2".to_string()));
    let r = lazy::h2_compute(&group("Wr_3"), 128).unwrap();
    assert_eq!(r.structure, Some(vec![3]));
    assert!(rules(&r).contains(&"R3".to_string()));
    let r = lazy::h2_compute(&group("D8"), 64).unwrap();
    assert!(rules(&r).contains(&"R5".to_string()));
    let r = lazy::h2_compute(&group("Wall32"), 64).unwrap();
    assert_eq!((r.int_mod_inn, r.bg.len()), (2, 2));
    assert_eq!((r.order_lower, r.order_upper), (2, 4));
    assert_eq!(r.status, Status::Undetermined);
    let r = lazy::h2_compute(&group("V4"), 64).unwrap();
    assert_eq!(r.structure, Some(vec![2]));
    let r = lazy::h2_compute(&group("C3xC3xC3"), 64).unwrap();
    assert_eq!(r.exact_order, Some(27));
    assert_eq!(r.structure, Some(vec![3, 3, 3]));
}

#[test]
fn h2_json_is_stable() {
    let g = group("A4");
    let a = serde_json::to_string(&lazy::h2_compute(&g, 64).unwrap().to_json()).unwrap();
    let b = serde_json::to_string(&lazy::h2_compute(&g, 64).unwrap().to_json()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"exact_order\":2"));
}
