mod common;

use common::*;
use mixfrob::exactalg::{
    divide_by_monic, is_unimodular_laurent, laurent_inverse, residue_at_zero, smith_normal_form, LaurentPoly, Matrix,
    Poly, ScalarRing,
};
use mixfrob::Q;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn smith_form_is_certified(seed in any::<u64>(), s in 1usize..=4, deg in 0usize..=3) {
        let mut r = rng(seed);
        let m = random_poly_matrix(&mut r, s, deg);
        let d = smith_normal_form(&m);
        prop_assert!(d.certify(&m).is_ok(), "{:?}", d.certify(&m));
        for e in d.diag.iter().filter(|e| !e.is_zero()) {
            prop_assert!(e.is_monic());
        }
    }

    #[test]
    fn elementary_divisors_survive_unimodular_changes(seed in any::<u64>(), s in 1usize..=4) {
        let mut r = rng(seed);
        let m = random_poly_matrix(&mut r, s, 2);
        let base = smith_normal_form(&m).diag;
        let u = random_unimodular(&mut r, s);
        let v = random_unimodular(&mut r, s);
        prop_assert_eq!(smith_normal_form(&u.mul(&m).mul(&v)).diag, base);
    }

    #[test]
    fn laurent_inverse_of_unimodular(seed in any::<u64>(), s in 1usize..=4) {
        let mut r = rng(seed);
        let (g, _) = random_localized_metric(&mut r, s);
        let m = g.matrix();
        prop_assert!(is_unimodular_laurent(m));
        let inv = laurent_inverse(m).expect("unimodular");
        let id = Matrix::from_fn(s, s, |i, j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() });
        prop_assert_eq!(m.mul(&inv), id);
    }

    #[test]
    fn residue_is_linear_and_kills_polynomials(
        a in proptest::collection::vec(-5i64..=5, 1..6),
        b in proptest::collection::vec(-5i64..=5, 1..6),
        ea in -4i64..=2,
        eb in -4i64..=2,
        c in -3i64..=3,
    ) {
        let f = LaurentPoly::new(ea, a.iter().map(|&x| q(x)).collect());
        let g = LaurentPoly::new(eb, b.iter().map(|&x| q(x)).collect());
        let lhs = residue_at_zero(&(f.scale(&q(c)) + g.clone()));
        prop_assert_eq!(lhs, q(c) * residue_at_zero(&f) + residue_at_zero(&g));
        let p = LaurentPoly::from_poly(&Poly::new(a.iter().map(|&x| q(x)).collect()));
        prop_assert!(residue_at_zero(&p).is_zero());
    }

    #[test]
    fn division_by_monic_round_trips(
        x in proptest::collection::vec(-5i64..=5, 0..8),
        n in proptest::collection::vec(-5i64..=5, 0..4),
    ) {
        let ring = ScalarRing::<Q>::new();
        let x: Vec<Q> = x.into_iter().map(q).collect();
        let mut n: Vec<Q> = n.into_iter().map(q).collect();
        n.push(q(1));
        let (quot, rem) = divide_by_monic(&ring, &x, &n).unwrap();
        prop_assert!(rem.len() < n.len());
        let back = Poly::new(quot) * Poly::new(n.clone()) + Poly::new(rem);
        prop_assert_eq!(back, Poly::new(x));
    }
}

#[test]
fn zero_and_rank_deficient_matrices_are_allowed() {
    let z: Matrix<Poly<Q>> = Matrix::zeros(3, 3);
    let d = smith_normal_form(&z);
    assert_eq!(d.rank, 0);
    d.certify(&z).unwrap();
    let lam = Poly::<Q>::lambda();
    let m = Matrix::from_rows(vec![vec![lam.clone(), lam.clone()], vec![lam.clone(), lam]]);
    let d = smith_normal_form(&m);
    assert_eq!(d.rank, 1);
    d.certify(&m).unwrap();
}
