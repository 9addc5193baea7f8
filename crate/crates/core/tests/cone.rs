mod common;

use proptest::prelude::*;

use wps_core::cone_oracle::{
    fpp_point, hilbert_basis, in_cone, is_idp_oracle, lattice_points_at_height, ConePoint,
    DEFAULT_POINT_CAP,
};
use wps_core::families::{boundary_family_1, boundary_family_2, generate, FamilySpec, ThreeType};
use wps_core::reflexive_idp::is_idp;
use wps_core::WeightVector;

fn minus(a: &ConePoint, b: &ConePoint) -> Option<ConePoint> {
    Some(ConePoint {
        height: a.height.checked_sub(b.height)?,
        coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
    })
}

/// Checks every parallelepiped point of `v` and returns the height histogram.
fn check_fpp(v: &[u128]) -> Vec<u128> {
    let q = WeightVector::new(v.to_vec()).unwrap();
    let n: i128 = 1 + v.iter().sum::<u128>() as i128;
    let mut hist = vec![0u128; v.len() + 1];
    for b in 0..n as u128 {
        let p = fpp_point(&q, b).unwrap();
        assert!(in_cone(&q, &p).unwrap());
        // N λ_0 = h - Σ y = b and N λ_i = N y_i + b q_i, all in [0, N).
        let lambda0 = p.height as i128 - p.coords.iter().sum::<i128>();
        assert_eq!(lambda0, b as i128);
        for (&y, &qi) in p.coords.iter().zip(v) {
            let li = n * y + b as i128 * qi as i128;
            assert!((0..n).contains(&li), "q={v:?} b={b}");
        }
        hist[p.height as usize] += 1;
    }
    while hist.last() == Some(&0) {
        hist.pop();
    }
    hist
}

#[test]
fn parallelepiped_heights_give_h_star_exhaustive() {
    for n in 2..=40u128 {
        for v in common::partitions(n - 1, 1) {
            assert_eq!(check_fpp(&v), common::h_star(&v), "q={v:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn parallelepiped_heights_give_h_star(mut v in proptest::collection::vec(1u128..59, 1..12)) {
        while 1 + v.iter().sum::<u128>() > 60 {
            v.pop();
        }
        prop_assume!(!v.is_empty());
        v.sort_unstable();
        prop_assert_eq!(check_fpp(&v), common::h_star(&v));
    }
}

#[test]
fn boundary_parallelepiped_is_periodic() {
    for n in [2u128, 3] {
        let q = boundary_family_1(n).unwrap();
        assert_eq!(q.normalized_volume(), 30 * n);
        let base = fpp_point(&q, 30).unwrap();
        for b in 31..30 * n {
            let lhs = minus(&fpp_point(&q, b).unwrap(), &base).unwrap();
            assert_eq!(lhs, fpp_point(&q, b - 30).unwrap(), "n={n} b={b}");
        }
    }
}

#[test]
fn oracle_agrees_on_family_instances() {
    let mut instances = Vec::new();
    for t in ThreeType::IDP_TYPES {
        for x1 in 1..=2 {
            for x2 in 1..=2 {
                for x3 in 1..=2 {
                    instances.push(FamilySpec::ThreeSupp { kind: t, x: [x1, x2, x3] });
                }
            }
        }
    }
    for x1 in 1..=3 {
        for x2 in 1..=3 {
            instances.push(FamilySpec::TwoSupp2 { x: [x1, x2] });
        }
    }
    instances.push(FamilySpec::ThreeSuppViii { x1: 1, x2: 1, k: 1, s: 1 });
    instances.push(FamilySpec::ThreeSuppViii { x1: 1, x2: 2, k: 1, s: 1 });
    let mut qs: Vec<WeightVector> = instances.iter().map(|s| generate(s).unwrap()).collect();
    qs.extend([1, 2, 3].map(|n| boundary_family_1(n).unwrap()));
    qs.extend([2, 3].map(|n| boundary_family_2(n).unwrap()));
    let mut checked = 0;
    for q in qs.into_iter().filter(|q| q.normalized_volume() <= 1500) {
        let fast = is_idp(&q).unwrap().is_idp.unwrap();
        assert_eq!(is_idp_oracle(&q, DEFAULT_POINT_CAP).unwrap(), fast, "q=({q})");
        checked += 1;
    }
    assert!(checked >= 40, "{checked}");
}

/// Basis elements above height 1 have no cone point of lower height that
/// splits them, and every non-basis point up to height 3 is split by a basis
/// element.
#[test]
fn hilbert_basis_is_irreducible_and_generating() {
    for n in 2..=10u128 {
        for v in common::partitions(n - 1, 1) {
            let q = WeightVector::new(v.clone()).unwrap();
            let basis = hilbert_basis(&q, DEFAULT_POINT_CAP).unwrap();
            let max_h = basis.iter().map(|z| z.height).max().unwrap().max(3);
            let levels: Vec<Vec<ConePoint>> = (0..=max_h)
                .map(|t| lattice_points_at_height(&q, t, max_h, DEFAULT_POINT_CAP).unwrap())
                .collect();
            for z in &basis {
                assert!(levels[z.height as usize].contains(z));
                for u in levels[1..z.height as usize].iter().flatten() {
                    let rest = minus(z, u).unwrap();
                    assert!(!in_cone(&q, &rest).unwrap(), "q={v:?} z={z:?} u={u:?}");
                }
            }
            for level in &levels[2..=3] {
                for p in level.iter().filter(|p| !basis.contains(p)) {
                    let split = basis
                        .iter()
                        .filter(|z| z.height < p.height)
                        .any(|z| in_cone(&q, &minus(p, z).unwrap()).unwrap());
                    assert!(split, "q={v:?} p={p:?}");
                }
            }
        }
    }
}
