use std::collections::BTreeSet;

use arithdyn::arithfun::{eval_u128, value_table, Family, FunctionId};
use arithdyn::dynamics::{ent_set_estimate, family_term, family_terms, FamilyScheme, FamilySpec};
use arithdyn::factorint::{factorize, nth_prime, FactoredNatural};
use arithdyn::preimage::{preimage_expansive, PreimageIndex};
use arithdyn::topology::{min_open_backward, min_open_forward, partition_map, BlockDescriptor};
use num_integer::Integer;
use proptest::prelude::*;

fn value(f: FunctionId, n: u128) -> u128 {
    eval_u128(f, n).unwrap().to_u128().unwrap()
}

fn multiplicative() -> Vec<FunctionId> {
    FunctionId::catalogue(3)
        .into_iter()
        .filter(|f| !matches!(f.family(), Family::BigOmega | Family::SmallOmega))
        .collect()
}

#[test]
fn factorization_round_trip_to_a_million() {
    for n in 2..1_000_000u128 {
        assert_eq!(factorize(n).to_u128(), Some(n));
    }
}

#[test]
fn nth_prime_strictly_increasing() {
    let mut last = 0;
    for i in 1..=100_000 {
        let p = nth_prime(i).unwrap();
        assert!(p > last, "nth_prime({i}) = {p} after {last}");
        last = p;
    }
    assert_eq!(last, 1_299_709);
}

#[test]
fn sigma_equals_psi_on_squarefree() {
    let squarefree = |n: u128| {
        factorize(n)
            .explicit()
            .iter()
            .all(|(_, e)| e.to_u64() == Some(1))
    };
    for k in 1..=3 {
        let sigma = FunctionId::sigma(k).unwrap();
        let psi = FunctionId::psi_k(k).unwrap();
        for n in (1..=10_000u128).filter(|&n| squarefree(n)) {
            assert_eq!(value(sigma, n), value(psi, n), "k={k}, n={n}");
        }
    }
}

#[test]
fn fibres_partition_the_domain() {
    for f in [
        FunctionId::psi(),
        FunctionId::jordan(2).unwrap(),
        FunctionId::sigma(1).unwrap(),
    ] {
        let idx = PreimageIndex::build(f, 5000).unwrap();
        let mut seen = BTreeSet::new();
        for v in 1..=5000 {
            for &x in idx.fibre(v).unwrap() {
                assert!(seen.insert(x), "{x} in two fibres of {f}");
            }
        }
    }
}

#[test]
fn phi_orbits_reach_the_fixed_point_one() {
    let table = value_table(FunctionId::phi(), 100_000).unwrap();
    for k in 1..=100_000usize {
        let mut x = k;
        let mut least = k;
        while table[x] as usize != x {
            x = table[x] as usize;
            least = least.min(x);
        }
        assert_eq!(x, 1, "orbit of {k} stops at {x}");
        assert_eq!(least, 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unique_factorization(a in 1u128..=1000, b in 1u128..=1000) {
        prop_assert_eq!(factorize(a * b), factorize(a).multiply(&factorize(b)).unwrap());
    }

    #[test]
    fn normalization_idempotent(pairs in prop::collection::vec((0usize..8, 0u64..6), 0..6)) {
        const P: [u128; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
        let raw: Vec<(u128, u64)> = pairs.iter().map(|&(i, e)| (P[i], e)).collect();
        let once = FactoredNatural::from_prime_powers(raw.iter().map(|&(p, e)| (p, e.into()))).unwrap();
        let twice = FactoredNatural::from_prime_powers(once.explicit().iter().cloned()).unwrap();
        prop_assert_eq!(&once, &twice);
        let text = once.to_string();
        prop_assert_eq!(text.parse::<FactoredNatural>().unwrap(), once);
    }

    #[test]
    fn multiplicativity(a in 1u128..=1000, b in 1u128..=1000) {
        prop_assume!(a.gcd(&b) == 1);
        for f in multiplicative() {
            prop_assert_eq!(value(f, a * b), value(f, a) * value(f, b), "{}", f);
        }
        // With f(1) = 1 the additive law only holds away from 1.
        prop_assume!(a > 1 && b > 1);
        for f in [FunctionId::big_omega(), FunctionId::small_omega()] {
            prop_assert_eq!(value(f, a * b), value(f, a) + value(f, b), "{}", f);
        }
    }

    #[test]
    fn expansive_preimages_lie_below(m in 1u128..=10_000, which in 0usize..3) {
        let f = [FunctionId::psi(), FunctionId::jordan(2).unwrap(), FunctionId::sigma(1).unwrap()][which];
        let r = preimage_expansive(f, m).unwrap();
        prop_assert!(r.is_complete());
        for &x in &r.members {
            prop_assert!(x <= m);
            prop_assert_eq!(value(f, x), m);
        }
    }

    #[test]
    fn distinct_targets_have_disjoint_fibres(a in 1u128..=3000, b in 1u128..=3000) {
        prop_assume!(a != b);
        let fa: BTreeSet<u128> = preimage_expansive(FunctionId::psi(), a).unwrap().members.into_iter().collect();
        let fb: BTreeSet<u128> = preimage_expansive(FunctionId::psi(), b).unwrap().members.into_iter().collect();
        prop_assert!(fa.is_disjoint(&fb));
    }

    #[test]
    fn family_recurrences_hold(scheme_ix in 0usize..6, index in 1u64..=20) {
        let scheme = FamilyScheme::ALL[scheme_ix];
        let depth = match scheme {
            FamilyScheme::OmegaAnti | FamilyScheme::DAnti => 4,
            FamilyScheme::SmallOmegaAnti => 5,
            _ => 30,
        };
        let spec = FamilySpec::new(scheme, index).unwrap();
        let terms = family_terms(&spec, depth).unwrap();
        let f = scheme.function();
        for w in terms.windows(2) {
            let (x, y) = if scheme.is_orbit() { (&w[0], &w[1]) } else { (&w[1], &w[0]) };
            prop_assert!(arithdyn::arithfun::eval(f, x).unwrap().equals(y).unwrap());
        }
    }

    #[test]
    fn psi_family_entropy_counts_every_term(k in 1u64..=5, horizon in 1u64..=200) {
        let seeds: Vec<u128> = (1..=k)
            .map(|j| family_term(&FamilySpec::new(FamilyScheme::PsiOrbit, j).unwrap(), 1).unwrap().to_u128().unwrap())
            .collect();
        let e = ent_set_estimate(FunctionId::psi(), &seeds, horizon).unwrap();
        let overlap = k * horizon - e.count;
        prop_assert!(overlap <= k, "overlap {}", overlap);
    }

    #[test]
    fn phi_entropy_collapses(seeds in prop::collection::btree_set(1u128..=100, 1..=100)) {
        let seeds: Vec<u128> = seeds.into_iter().collect();
        let e = ent_set_estimate(FunctionId::phi(), &seeds, 10_000).unwrap();
        prop_assert!(e.as_f64() <= 0.02);
    }

    #[test]
    fn forward_sets_of_decreasing_maps(k in 1u128..=10_000, which in 0usize..5) {
        let f = [
            FunctionId::phi(),
            FunctionId::unitary_totient(),
            FunctionId::big_omega(),
            FunctionId::small_omega(),
            FunctionId::d(),
        ][which];
        let v = min_open_forward(f, k).unwrap();
        prop_assert!(v.is_complete());
        prop_assert!(v.members.contains(&k));
        prop_assert!(v.max() <= k);
    }

    #[test]
    fn backward_sets_of_expansive_maps(k in 1u128..=10_000, which in 0usize..3) {
        let f = [FunctionId::psi(), FunctionId::jordan(2).unwrap(), FunctionId::sigma(1).unwrap()][which];
        let v = min_open_backward(f, k, k as u64).unwrap();
        prop_assert!(v.is_complete());
        prop_assert!(v.members.contains(&k));
        prop_assert!(v.max() <= k);
    }

    #[test]
    fn partition_components_stay_in_blocks(modulus in 1u64..=7, bound in 1u64..=500) {
        let blocks: Vec<BlockDescriptor> = (0..modulus)
            .map(|residue| BlockDescriptor::Residue { modulus, residue })
            .collect();
        let r = partition_map(&blocks, bound).unwrap();
        prop_assert!(r.refines_partition);
        for c in &r.components {
            let classes: BTreeSet<u64> = c.iter().map(|x| x % modulus).collect();
            prop_assert_eq!(classes.len(), 1);
        }
        prop_assert_eq!(r.components.len() as u64, modulus.min(bound));
    }
}
