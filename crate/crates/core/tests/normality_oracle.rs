use std::collections::BTreeSet;

use isotonia::linalg::{adjugate, HermiteBasis};
use isotonia::normality::{hilbert_basis, is_normal, pendant_reduce, ConeLattice};
use isotonia::poset::{enumerate_posets, v_poset};
use isotonia::toric::ExponentMatrix;
use isotonia::{Limits, Poset};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Caratheodory: `x` lies in the cone iff it is a nonnegative combination of
/// some linearly independent `d` generators (all computed in lattice
/// coordinates, where the generators span).
fn in_cone(coords: &[Vec<i64>], d: usize, x: &[i64]) -> bool {
    for s in subsets(coords.len(), d) {
        let mat: Vec<Vec<i64>> = s.iter().map(|&i| coords[i].clone()).collect();
        let Some((det, adj)) = adjugate(&mat) else { continue };
        if det.is_zero() {
            continue;
        }
        // lambda * det = x * adj
        let ok = (0..d).all(|j| {
            let v: BigInt = (0..d).map(|r| &adj[r][j] * x[r]).sum();
            !(v * &det).is_negative()
        });
        if ok {
            return true;
        }
    }
    false
}

fn compositions(width: usize, max_sum: i64) -> Vec<Vec<i64>> {
    fn rec(width: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == width {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(width, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(width, max_sum, &mut Vec::new(), &mut out);
    out
}

/// Hilbert basis of a cone with nonnegative generators, by enumerating every
/// lattice point of bounded coordinate sum and keeping the irreducible ones.
fn brute_hilbert_basis(gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let lattice = HermiteBasis::new(gens);
    let d = lattice.rank();
    let coords: Vec<Vec<i64>> = gens.iter().map(|g| lattice.coordinates(g).unwrap()).collect();
    let max_deg = gens.iter().map(|g| g.iter().sum::<i64>()).max().unwrap();
    let bound = d as i64 * max_deg;
    let points: BTreeSet<Vec<i64>> = compositions(gens[0].len(), bound)
        .into_iter()
        .filter(|x| x.iter().any(|&v| v != 0))
        .filter(|x| lattice.coordinates(x).is_some_and(|c| in_cone(&coords, d, &c)))
        .collect();
    points
        .iter()
        .filter(|x| {
            !points.iter().any(|y| {
                y != *x && {
                    let diff: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                    points.contains(&diff)
                }
            })
        })
        .cloned()
        .collect()
}

fn fast_hilbert_basis(gens: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    hilbert_basis(gens, &Limits::default()).unwrap().basis.into_iter().collect()
}

#[test]
fn hilbert_basis_matches_oracle_on_small_isotonian_cones() {
    let lim = Limits::default();
    let small: Vec<Poset> = (1..=3).flat_map(|k| enumerate_posets(k).unwrap()).collect();
    let mut checked = 0;
    for p in &small {
        for q in &small {
            let a = ExponentMatrix::new(p, q, &lim).unwrap();
            if a.rank() > 4 || a.rows.len() > 6 {
                continue;
            }
            let gens: Vec<Vec<i64>> = a.columns().into_iter().map(|c| c.0).collect();
            assert_eq!(fast_hilbert_basis(&gens), brute_hilbert_basis(&gens), "{p} / {q}");
            checked += 1;
        }
    }
    let gens: Vec<Vec<i64>> = ExponentMatrix::new(&v_poset(), &Poset::chain(2).unwrap(), &lim)
        .unwrap()
        .columns()
        .into_iter()
        .map(|c| c.0)
        .collect();
    assert_eq!(fast_hilbert_basis(&gens), brute_hilbert_basis(&gens));
    assert!(checked >= 10);
}

#[test]
fn hilbert_basis_matches_oracle_on_fixed_cones() {
    let cases: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![2], vec![3]],
        vec![vec![1, 0], vec![1, 1], vec![1, 3]],
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]],
        vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![1, 1, 1, 3]],
        vec![vec![2, 0, 1], vec![0, 2, 1], vec![1, 1, 0], vec![0, 0, 2]],
    ];
    for gens in cases {
        assert_eq!(fast_hilbert_basis(&gens), brute_hilbert_basis(&gens), "{gens:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn hilbert_basis_matches_oracle_on_random_cones(
        gens in proptest::collection::vec(proptest::collection::vec(0i64..3, 3), 2..6)
    ) {
        let gens: Vec<Vec<i64>> = gens.into_iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
        prop_assume!(!gens.is_empty());
        prop_assert_eq!(fast_hilbert_basis(&gens), brute_hilbert_basis(&gens));
    }

    #[test]
    fn basis_elements_satisfy_facets_and_are_irreducible(
        gens in proptest::collection::vec(proptest::collection::vec(0i64..4, 4), 3..7)
    ) {
        let gens: Vec<Vec<i64>> = gens.into_iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
        prop_assume!(!gens.is_empty());
        let lim = Limits::default();
        let cone = ConeLattice::new(&gens, &lim).unwrap();
        let hb = hilbert_basis(&gens, &lim).unwrap().basis;
        for h in &hb {
            prop_assert!(cone.locate(h).is_some());
        }
        for a in &hb {
            for b in &hb {
                if a != b {
                    let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                    prop_assert!(cone.locate(&diff).is_none());
                }
            }
        }
    }
}

#[test]
fn pendant_reduction_keeps_verdict_at_desk_scale() {
    let lim = Limits::default();
    let ps: Vec<Poset> = (1..=4).flat_map(|k| enumerate_posets(k).unwrap()).collect();
    let qs: Vec<Poset> = (1..=2).flat_map(|k| enumerate_posets(k).unwrap()).collect();
    for p in &ps {
        let r = pendant_reduce(p);
        for q in &qs {
            assert_eq!(is_normal(p, q, &lim).unwrap().normal, is_normal(&r, q, &lim).unwrap().normal);
        }
    }
}

#[test]
fn normality_of_sums_follows_from_parts() {
    let lim = Limits::default();
    let parts = [Poset::chain(2).unwrap(), v_poset()];
    for a in &parts {
        for b in &parts {
            let q = Poset::chain(2).unwrap();
            let parts_normal = is_normal(a, &q, &lim).unwrap().normal && is_normal(b, &q, &lim).unwrap().normal;
            if parts_normal {
                assert!(is_normal(&a.sum(b), &q, &lim).unwrap().normal);
            }
        }
    }
}
