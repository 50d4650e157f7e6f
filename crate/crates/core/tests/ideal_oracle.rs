use std::collections::{BTreeMap, BTreeSet};

use isotonia::ideal::{self, normal_form, reduced_groebner, toric_ideal, Binomial, TermOrder};
use isotonia::poset::{crown6, enumerate_posets, from_labels};
use isotonia::toric::ExponentMatrix;
use isotonia::{Limits, Poset};
use proptest::prelude::*;

fn multisets(n: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, start: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur[v] += 1;
            rec(n, v, left - 1, cur, out);
            cur[v] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, 0, d, &mut vec![0; n], &mut out);
    out
}

/// Degree-`d` fibers of the presentation map: y-monomials grouped by x-image.
fn fibers(a: &ExponentMatrix, d: usize) -> BTreeMap<Vec<i64>, Vec<Vec<u32>>> {
    let mut f: BTreeMap<Vec<i64>, Vec<Vec<u32>>> = BTreeMap::new();
    for m in multisets(a.ncols(), d) {
        f.entry(a.image(&m)).or_default().push(m);
    }
    f
}

/// Two monomials of degree at most 3 share a normal form exactly when they
/// share a fiber, and every basis element lies in a fiber.
fn check_against_fibers(p: &Poset, q: &Poset) {
    let lim = Limits::default();
    let i = toric_ideal(p, q, &lim).unwrap();
    let order = TermOrder::natural(i.nvars());
    let gb = reduced_groebner(&i, &order, &lim).unwrap();
    for g in &gb {
        assert!(g.in_kernel(&i.matrix));
        assert_eq!(order.compare(&g.plus, &g.minus), std::cmp::Ordering::Greater);
    }
    for d in 1..=3 {
        let mut seen_nf: BTreeMap<Vec<u32>, Vec<i64>> = BTreeMap::new();
        for (image, members) in fibers(&i.matrix, d) {
            let nf = normal_form(&gb, &members[0]);
            assert_eq!(i.matrix.image(&nf), image);
            for m in &members[1..] {
                assert_eq!(normal_form(&gb, m), nf, "{p} / {q}: degree {d} fiber split");
            }
            assert!(seen_nf.insert(nf, image).is_none(), "{p} / {q}: two fibers merged");
        }
    }
}

#[test]
fn degree_three_fibers_match_up_to_three_elements() {
    let small: Vec<Poset> = (1..=3).flat_map(|k| enumerate_posets(k).unwrap()).collect();
    for p in &small {
        for q in &small {
            check_against_fibers(p, q);
        }
    }
}

#[test]
fn degree_three_fibers_match_with_twelve_variables() {
    let lim = Limits::default();
    let mut checked = 0;
    for p in (1..=4).flat_map(|k| enumerate_posets(k).unwrap()) {
        for q in (4..=4).flat_map(|k| enumerate_posets(k).unwrap()) {
            if isotonia::hom::count_isotone(&p, &q, &lim).unwrap() <= 12 {
                check_against_fibers(&p, &q);
                checked += 1;
            }
        }
    }
    check_against_fibers(&Poset::chain(2).unwrap(), &crown6());
    assert!(checked > 20);
}

/// The principal generator for the crown is the unique binomial found by
/// the degree-3 fiber scan that no lower degree explains.
#[test]
fn crown_generator_from_fibers() {
    let lim = Limits::default();
    let c2 = Poset::chain(2).unwrap();
    let i = toric_ideal(&c2, &crown6(), &lim).unwrap();
    for d in 1..=2 {
        assert!(fibers(&i.matrix, d).values().all(|m| m.len() == 1));
    }
    let nontrivial: Vec<Vec<Vec<u32>>> = fibers(&i.matrix, 3).into_values().filter(|m| m.len() > 1).collect();
    assert_eq!(nontrivial.len(), 1);
    assert_eq!(nontrivial[0].len(), 2);
    let pair: BTreeSet<String> = nontrivial[0].iter().map(|m| ideal::monomial_string(m, i.maps())).collect();
    let expected: BTreeSet<String> =
        ["y(1,4)*y(2,5)*y(3,6)", "y(1,5)*y(2,6)*y(3,4)"].iter().map(|s| s.to_string()).collect();
    assert_eq!(pair, expected);
    let g = &i.generators[0];
    let got: BTreeSet<String> = [&g.plus, &g.minus].iter().map(|m| ideal::monomial_string(m, i.maps())).collect();
    assert_eq!(got, expected);
}

#[test]
fn generator_degrees_invariant_under_duals() {
    let lim = Limits::default();
    let small: Vec<Poset> = (1..=3).flat_map(|k| enumerate_posets(k).unwrap()).collect();
    for p in &small {
        for q in &small {
            let a = ideal::minimal_generator_degrees(&toric_ideal(p, q, &lim).unwrap());
            let b = ideal::minimal_generator_degrees(&toric_ideal(&p.dual(), &q.dual(), &lim).unwrap());
            assert_eq!(a, b, "{p} / {q}");
        }
    }
}

/// For connected `P` the ring splits over the components of `Q` into a tensor
/// product, so generators are the union of the component generators.
#[test]
fn components_of_target_contribute_independently() {
    let lim = Limits::default();
    let parts = [
        Poset::chain(2).unwrap(),
        from_labels(3, &[(1, 3), (2, 3)]).unwrap(),
        from_labels(3, &[(1, 2), (1, 3)]).unwrap(),
    ];
    for p in [Poset::chain(2).unwrap(), isotonia::poset::v_poset()] {
        for q1 in &parts {
            for q2 in &parts {
                let whole = ideal::minimal_generator_degrees(&toric_ideal(&p, &q1.sum(q2), &lim).unwrap());
                let mut split = ideal::minimal_generator_degrees(&toric_ideal(&p, q1, &lim).unwrap());
                split.extend(ideal::minimal_generator_degrees(&toric_ideal(&p, q2, &lim).unwrap()));
                split.sort_unstable();
                assert_eq!(whole, split);
                let gb = reduced_groebner(
                    &toric_ideal(&p, &q1.sum(q2), &lim).unwrap(),
                    &TermOrder::natural(isotonia::hom::count_isotone(&p, &q1.sum(q2), &lim).unwrap()),
                    &lim,
                )
                .unwrap();
                // no basis element mixes maps into different components
                let maps = isotonia::hom::enumerate_isotone(&p, &q1.sum(q2), &lim).unwrap();
                let (_, comp) = q1.sum(q2).component_ids();
                for g in &gb {
                    let comps: BTreeSet<usize> = g
                        .plus
                        .iter()
                        .zip(&g.minus)
                        .enumerate()
                        .filter(|(_, (&a, &b))| a + b > 0)
                        .map(|(v, _)| comp[maps[v].0[0]])
                        .collect();
                    assert_eq!(comps.len(), 1);
                }
            }
        }
    }
}

#[test]
fn reduced_basis_is_deterministic() {
    let lim = Limits::default();
    let p = Poset::antichain(2).unwrap();
    let q = from_labels(3, &[(1, 3), (2, 3)]).unwrap();
    let order = TermOrder::natural(9);
    let a = reduced_groebner(&toric_ideal(&p, &q, &lim).unwrap(), &order, &lim).unwrap();
    let b = reduced_groebner(&toric_ideal(&p, &q, &lim).unwrap(), &order, &lim).unwrap();
    assert_eq!(a, b);
}

#[test]
fn other_orders_give_bases_of_the_same_ideal() {
    use rand::SeedableRng;
    let lim = Limits::default();
    let p = Poset::chain(2).unwrap();
    let q = crown6();
    let i = toric_ideal(&p, &q, &lim).unwrap();
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..5 {
        let order = TermOrder::shuffled(i.nvars(), &mut rng);
        let gb = reduced_groebner(&i, &order, &lim).unwrap();
        for d in 1..=3 {
            for members in fibers(&i.matrix, d).values() {
                let nf: BTreeSet<Vec<u32>> = members.iter().map(|m| normal_form(&gb, m)).collect();
                assert_eq!(nf.len(), 1);
            }
        }
    }
}

proptest! {
    #[test]
    fn revlex_is_a_monomial_order(
        a in proptest::collection::vec(0u32..3, 5),
        b in proptest::collection::vec(0u32..3, 5),
        c in proptest::collection::vec(0u32..3, 5),
        perm_seed in 0u64..1000,
    ) {
        use rand::SeedableRng;
        let order = TermOrder::shuffled(5, &mut rand::rngs::StdRng::seed_from_u64(perm_seed));
        let ab = order.compare(&a, &b);
        prop_assert_eq!(ab, order.compare(&b, &a).reverse());
        let ac: Vec<u32> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
        let bc: Vec<u32> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
        prop_assert_eq!(ab, order.compare(&ac, &bc));
        if let Some(bin) = Binomial::new(a.clone(), b.clone(), &order) {
            prop_assert_eq!(order.compare(&bin.plus, &bin.minus), std::cmp::Ordering::Greater);
        }
    }
}
