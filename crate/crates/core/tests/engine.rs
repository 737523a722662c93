mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use skewprod::coset::{todd_coxeter, todd_coxeter_with, Presentation, Strategy};
use skewprod::group::{dihedral, quaternion};
use skewprod::iso::{is_isomorphic, is_isomorphism, DEFAULT_NODE_LIMIT};
use skewprod::modarith::{geom_sum, geom_sum0, inv_mod, mult_order, pow_mod};
use skewprod::GroupTable;

fn big_mod(x: &BigInt, n: i64) -> i64 {
    let n = BigInt::from(n);
    let r = ((x % &n) + &n) % &n;
    i64::try_from(r).unwrap()
}

proptest! {
    #[test]
    fn pow_mod_matches_bigint(r in -1000i64..1000, k in 0u64..60, n in 1i64..500) {
        let exact = BigInt::from(r).pow(k as u32);
        prop_assert_eq!(pow_mod(r, k, n), big_mod(&exact, n));
    }

    #[test]
    fn geometric_sums_match_bigint(r in -50i64..50, k in 0u64..25, n in 1i64..300) {
        let terms: Vec<BigInt> = (0..=k).map(|l| BigInt::from(r).pow(l as u32)).collect();
        let from_one: BigInt = terms[1..].iter().sum();
        let from_zero: BigInt = terms[..k as usize].iter().sum();
        prop_assert_eq!(geom_sum(r, k, n), big_mod(&from_one, n));
        prop_assert_eq!(geom_sum0(r, k, n), big_mod(&from_zero, n));
    }

    #[test]
    fn inverses_and_orders(r in -200i64..200, n in 2i64..200) {
        match inv_mod(r, n) {
            Some(s) => prop_assert_eq!(big_mod(&(BigInt::from(r) * s), n), 1),
            None => prop_assert!((1..n).all(|s| big_mod(&(BigInt::from(r) * s), n) != 1)),
        }
        if let Some(k) = mult_order(r, n) {
            let first = (1..=n as u32)
                .find(|&e| big_mod(&BigInt::from(r).pow(e), n) == 1)
                .unwrap();
            prop_assert_eq!(k, first as u64);
        }
    }

    #[test]
    fn enumeration_strategies_agree(k in 1usize..=12, which in 0usize..3) {
        let (rels, expected): (Vec<String>, usize) = match which {
            0 => (vec![format!("a^{k}"), "b".into()], k),
            1 => (vec![format!("a^{k}"), "b^2".into(), "(a b)^2".into()], 2 * k),
            _ => (
                vec![format!("a^{}", 2 * k), format!("b^2 = a^{k}"), "b^-1 a b a".into()],
                4 * k,
            ),
        };
        let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
        let p = Presentation::parse(&["a", "b"], &rels).unwrap();
        let hlt = todd_coxeter(&p, 10_000).unwrap();
        let felsch = todd_coxeter_with(&p, 10_000, Strategy::Felsch).unwrap();
        prop_assert_eq!(hlt.table.order(), expected);
        // Both end in the same canonical labelling.
        prop_assert_eq!(hlt.table.raw_product(), felsch.table.raw_product());
        prop_assert!(common::associative(&hlt.table));
    }

    #[test]
    fn relabelled_tables_are_isomorphic(n in 2usize..=8, quat in any::<bool>(), seed in any::<u64>()) {
        let g = if quat { quaternion(n) } else { dihedral(n) };
        let perm = shuffle_fixing_zero(g.order(), seed);
        let h = relabel(&g, &perm);
        let map = is_isomorphic(&g, &h, DEFAULT_NODE_LIMIT).unwrap();
        prop_assert!(map.as_ref().is_some_and(|m| is_isomorphism(&g, &h, m)));
        if n <= 6 {
            prop_assert!(common::brute_isomorphic(&g, &h));
        }
    }
}

/// A permutation of `0..n` from a linear congruential stream; 0 stays fixed.
fn shuffle_fixing_zero(n: usize, mut seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for i in (2..n).rev() {
        seed = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let j = 1 + (seed >> 33) as usize % i;
        p.swap(i, j);
    }
    p
}

fn relabel(g: &GroupTable, perm: &[usize]) -> GroupTable {
    let n = g.order();
    let mut inv = vec![0; n];
    for (x, &y) in perm.iter().enumerate() {
        inv[y] = x;
    }
    let mut product = vec![0; n * n];
    for y1 in 0..n {
        for y2 in 0..n {
            product[y1 * n + y2] = perm[g.mul(inv[y1], inv[y2])];
        }
    }
    GroupTable::new(n, product).unwrap()
}

#[test]
fn dihedral_and_quaternion_are_distinguished() {
    for n in 2..=6 {
        let d = dihedral(2 * n);
        let q = quaternion(n);
        assert_eq!(d.order(), q.order());
        assert!(is_isomorphic(&d, &q, DEFAULT_NODE_LIMIT).unwrap().is_none());
    }
    assert!(!common::brute_isomorphic(&dihedral(4), &quaternion(2)));
}

#[test]
fn capacity_is_reported() {
    let p = Presentation::parse(&["a", "b"], &["a^2"]).unwrap();
    assert!(todd_coxeter(&p, 64).is_err());
}
