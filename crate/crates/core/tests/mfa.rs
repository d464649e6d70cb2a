mod common;

use common::*;
use mixfrob::algebra::{frobenius_filtration_existence, ideal_power, is_ideal, monic_inverse, nilradical, ElementLaurent, FiniteAlgebra};
use mixfrob::exactalg::unit_vector;
use mixfrob::mfa::{
    check_mfa, filtration_from_profile, mfa_from_invariant_localized_metric, nilpotent_filtration_direct,
    nilpotent_localized_metric, normalize_metric, residue_metric_well_defined_check, LambdaAlgebra, MixedFrobeniusAlgebra,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn kappas_are_invariant_under_basis_change(seed in any::<u64>(), s in 1usize..=4) {
        let mut r = rng(seed);
        let (g, kappas) = random_localized_metric(&mut r, s);
        let p = normalize_metric(&g).unwrap();
        prop_assert_eq!(sorted(p.kappas.clone()), sorted(kappas.clone()));
        let moved = congruence(g.matrix(), &random_unimodular(&mut r, s));
        let moved = mixfrob::mfa::LocalizedMetric::new(moved).unwrap();
        prop_assert_eq!(sorted(normalize_metric(&moved).unwrap().kappas), sorted(kappas));
    }

    #[test]
    fn profile_and_filtration_are_consistent(seed in any::<u64>(), s in 1usize..=4) {
        let mut r = rng(seed);
        let (g, kappas) = random_localized_metric(&mut r, s);
        let p = normalize_metric(&g).unwrap();
        prop_assert!(p.verify(&g));
        let f = filtration_from_profile(&p, &g).unwrap();
        prop_assert!(f.validate().is_ok());
        prop_assert!(f.is_exhaustive());
        prop_assert_eq!(f.graded_ranks().iter().map(|(_, d)| d).sum::<usize>(), s);
        for k in -3..=4 {
            prop_assert_eq!(f.rank_at(k), kappas.iter().filter(|&&x| x <= k).count());
        }
        for k in f.jumps() {
            prop_assert!(residue_metric_well_defined_check(&g, k, 4, &mut r).unwrap());
        }
    }

    #[test]
    fn nilpotent_pipeline_matches_direct_construction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_nilpotent_data(&mut r, 5, 3);
        let g = nilpotent_localized_metric(&d).unwrap();
        let generic = filtration_from_profile(&normalize_metric(&g).unwrap(), &g).unwrap();
        let direct = nilpotent_filtration_direct(&d).unwrap();
        prop_assert!(direct.same_as(&generic).is_ok(), "{:?}", direct.same_as(&generic));
        let m = MixedFrobeniusAlgebra::new(d.algebra().clone(), direct);
        prop_assert!(check_mfa(&m).passed(), "{}", check_mfa(&m));
        let via_lambda = mfa_from_invariant_localized_metric(
            &LambdaAlgebra::constant(d.algebra()),
            &g,
            d.algebra().names().to_vec(),
        ).unwrap();
        prop_assert!(check_mfa(&via_lambda).passed());
    }

    #[test]
    fn monic_inverse_is_an_inverse(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = random_nilpotent_data(&mut r, 6, 3);
        let a = d.algebra();
        let inv = monic_inverse(a, d.nilpotents()).unwrap();
        let n = ElementLaurent::from_poly(&d.monic_coefficients());
        let one = n.mul(a, &inv);
        prop_assert_eq!(one.terms().map(|(e, v)| (e, v.clone())).collect::<Vec<_>>(), vec![(0, a.unit().to_vec())]);
    }

    #[test]
    fn existence_output_is_a_frobenius_filtration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, _) = random_split_frobenius(&mut r, 6);
        let f = frobenius_filtration_existence(&a).unwrap();
        let report = check_mfa(&MixedFrobeniusAlgebra::new(a, f));
        prop_assert!(report.passed(), "{}", report);
    }

    #[test]
    fn nilradical_is_a_nilpotent_ideal_with_decreasing_powers(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, _) = random_split_frobenius(&mut r, 6);
        let rad = nilradical(&a);
        prop_assert!(is_ideal(&a, &rad).is_ok());
        for b in rad.basis() {
            prop_assert!(a.is_nilpotent(b));
        }
        let mut prev = rad.dim();
        let mut i = 2;
        while prev > 0 {
            let next = ideal_power(&a, &rad, i).dim();
            prop_assert!(next < prev);
            prev = next;
            i += 1;
        }
        prop_assert!(i - 1 <= a.dim() + 1);
    }
}

#[test]
fn single_nilpotent_on_truncated_polynomials() {
    for n in 1..=5 {
        let a = FiniteAlgebra::truncated_polynomial(n);
        let g = a.pairing_from_functional(&unit_vector(n, n - 1));
        for m in 1..=n {
            for c in [1, -2] {
                let n1: Vec<_> = (0..n).map(|j| if j == m { q(c) } else { q(0) }).collect();
                check_single_nilpotent(&a, &g, &n1).unwrap_or_else(|e| panic!("n = {n}, n_1 = {c}ε^{m}: {e}"));
            }
        }
    }
}

#[test]
fn single_random_nilpotent_closed_form() {
    let mut r = rng(11);
    for _ in 0..20 {
        let (a, g) = random_split_frobenius(&mut r, 6);
        let n1 = random_nilpotents(&mut r, &a, 1).remove(0);
        check_single_nilpotent(&a, &g, &n1).unwrap();
    }
}
