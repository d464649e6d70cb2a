//! Random instances shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use mixfrob::algebra::{nilradical, FiniteAlgebra};
use mixfrob::exactalg::{LaurentMatrix, LaurentPoly, Matrix, Poly, PolyMatrix, Subspace};
use mixfrob::mfa::{nilpotent_filtration_direct, LocalizedMetric, NilpotentData};
use mixfrob::{Scalar, Q};
use num_traits::Zero;
use rand::Rng;

pub fn q(n: i64) -> Q {
    Q::from_int(n)
}

pub fn random_poly<R: Rng>(rng: &mut R, max_degree: usize) -> Poly<Q> {
    let d = rng.gen_range(0..=max_degree);
    Poly::new((0..=d).map(|_| q(rng.gen_range(-4..=4))).collect())
}

pub fn random_poly_matrix<R: Rng>(rng: &mut R, s: usize, max_degree: usize) -> PolyMatrix<Q> {
    Matrix::from_fn(s, s, |_, _| random_poly(rng, max_degree))
}

/// A product of elementary operations: row additions by c·λ^j, swaps and
/// nonzero constant scalings.
pub fn random_unimodular<R: Rng>(rng: &mut R, s: usize) -> PolyMatrix<Q> {
    let mut m: PolyMatrix<Q> = Matrix::identity(s);
    if s < 2 {
        m[(0, 0)] = Poly::constant(q(rng.gen_range(1..=3)));
        return m;
    }
    for _ in 0..2 * s {
        let i = rng.gen_range(0..s);
        let k = (i + rng.gen_range(1..s)) % s;
        match rng.gen_range(0..6) {
            0 => m.swap_rows(i, k),
            1 => m.scale_row(i, &Poly::constant(q([-2, -1, 2, 3][rng.gen_range(0..4)]))),
            _ => {
                let f = Poly::monomial(q(rng.gen_range(-2..=2)), rng.gen_range(0..=1));
                m.add_row_multiple(k, i, &f);
            }
        }
    }
    m
}

pub fn to_laurent(m: &PolyMatrix<Q>) -> LaurentMatrix<Q> {
    m.map(LaurentPoly::from_poly)
}

/// Pᵀ·G·P
pub fn congruence(g: &LaurentMatrix<Q>, p: &PolyMatrix<Q>) -> LaurentMatrix<Q> {
    let p = to_laurent(p);
    p.transpose().mul(g).mul(&p)
}

/// Pᵀ·diag(λ^{−κ_i})·P for random κ ∈ [−2, 3] and unimodular P, so the
/// κ multiset is known in advance.
pub fn random_localized_metric<R: Rng>(rng: &mut R, s: usize) -> (LocalizedMetric<Q>, Vec<i64>) {
    let kappas: Vec<i64> = (0..s).map(|_| rng.gen_range(-2..=3)).collect();
    let d = Matrix::diagonal(&kappas.iter().map(|&k| LaurentPoly::monomial(q(1), -k)).collect::<Vec<_>>());
    let g = congruence(&d, &random_unimodular(rng, s));
    (LocalizedMetric::new(g).expect("congruent to a monomial diagonal"), kappas)
}

pub fn sorted(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable();
    v
}

/// Exponent lists of the local factors K[x_1..x_m]/(x_i^{a_i}) used to
/// assemble split algebras.
const FACTORS: &[&[usize]] = &[&[1], &[2], &[3], &[4], &[5], &[6], &[2, 2], &[3, 2], &[2, 3]];

/// A product of monomial quotients of total dimension ≤ `max_dim`, a
/// functional nonzero on every factor's socle, and a random change of basis.
/// Returns the algebra and its invariant metric in the new basis.
pub fn random_split_frobenius<R: Rng>(rng: &mut R, max_dim: usize) -> (FiniteAlgebra<Q>, Matrix<Q>) {
    let (a, phi) = random_split_algebra_with_functional(rng, max_dim);
    let g = a.pairing_from_functional(&phi);
    assert!(!g.det().is_zero(), "socle functional gives a metric");
    let p = random_invertible(rng, a.dim());
    let b = a.change_of_basis(&p).expect("invertible");
    (b, p.transpose().mul(&g).mul(&p))
}

fn random_split_algebra_with_functional<R: Rng>(rng: &mut R, max_dim: usize) -> (FiniteAlgebra<Q>, Vec<Q>) {
    let mut alg: Option<FiniteAlgebra<Q>> = None;
    let mut phi = Vec::new();
    loop {
        let used = alg.as_ref().map_or(0, FiniteAlgebra::dim);
        let fits: Vec<&[usize]> = FACTORS.iter().copied().filter(|f| used + f.iter().product::<usize>() <= max_dim).collect();
        if fits.is_empty() || (used > 0 && rng.gen_bool(0.4)) {
            break;
        }
        let f = FiniteAlgebra::monomial_quotient(fits[rng.gen_range(0..fits.len())]);
        let d = f.dim();
        // the socle is the top monomial, which is the last basis element
        let mut part: Vec<Q> = (0..d).map(|_| q(rng.gen_range(-3..=3))).collect();
        part[d - 1] = q([-2, -1, 1, 2, 3][rng.gen_range(0..5)]);
        phi.extend(part);
        alg = Some(match alg {
            None => f,
            Some(a) => a.product(&f),
        });
    }
    (alg.expect("at least one factor"), phi)
}

/// Unit upper triangular times unit lower triangular with small entries,
/// with a random permutation of columns.
pub fn random_invertible<R: Rng>(rng: &mut R, s: usize) -> Matrix<Q> {
    let up = Matrix::from_fn(s, s, |i, j| if i == j { q(1) } else if i < j { q(rng.gen_range(-2..=2)) } else { q(0) });
    let lo = Matrix::from_fn(s, s, |i, j| if i == j { q(1) } else if i > j { q(rng.gen_range(-1..=1)) } else { q(0) });
    let mut m = up.mul(&lo);
    for i in (1..s).rev() {
        m.swap_cols(i, rng.gen_range(0..=i));
    }
    m
}

pub fn random_nilpotents<R: Rng>(rng: &mut R, a: &FiniteAlgebra<Q>, r: usize) -> Vec<Vec<Q>> {
    let rad = nilradical(a);
    (0..r)
        .map(|_| {
            let mut v = a.zero_element();
            for b in rad.basis() {
                let c = q(rng.gen_range(-2..=2));
                for (x, y) in v.iter_mut().zip(b) {
                    *x = x.clone() + c.clone() * y.clone();
                }
            }
            v
        })
        .collect()
}

/// A random split Frobenius algebra of dimension ≤ `max_dim` with 1..=`max_r`
/// random nilpotents.
pub fn random_nilpotent_data<R: Rng>(rng: &mut R, max_dim: usize, max_r: usize) -> NilpotentData<Q> {
    let (a, g) = random_split_frobenius(rng, max_dim);
    let r = rng.gen_range(1..=max_r);
    let n = random_nilpotents(rng, &a, r);
    NilpotentData::new(a, g, n).expect("valid nilpotent data")
}

fn same_subspace(a: &Subspace<Q>, b: &Subspace<Q>) -> bool {
    a.is_subspace_of(b) && b.is_subspace_of(a)
}

/// Checks the direct construction for one nilpotent n_1 against the closed
/// form I_0 = A·n_1, I_k = I_0 + {x | n_1^k x = 0}, g_0(u n_1, v n_1) =
/// g(uv, n_1) and g_k(x̄, ȳ) = g(xy, (−n_1)^{k−1}) for k ≥ 1.
pub fn check_single_nilpotent(a: &FiniteAlgebra<Q>, g: &Matrix<Q>, n1: &[Q]) -> Result<(), String> {
    let s = a.dim();
    let d = NilpotentData::new(a.clone(), g.clone(), vec![n1.to_vec()]).map_err(|e| e.to_string())?;
    let f = nilpotent_filtration_direct(&d).map_err(|e| e.to_string())?;
    let ln = a.mult_matrix(n1);
    let i0 = Subspace::span(s, (0..s).map(|j| ln.col(j)));
    let pair = |x: &[Q], y: &[Q], z: &[Q]| g.bilinear(&a.mul(x, y), z);
    let minus_n = n1.iter().map(|c| -c.clone()).collect::<Vec<_>>();
    for level in f.levels() {
        let k = level.index;
        let expected = match k {
            k if k < 0 => return Err(format!("jump {k} below zero")),
            0 => i0.clone(),
            k => i0.sum(&Subspace::span(s, a.mult_matrix(&a.pow(n1, k as usize)).kernel())),
        };
        if !same_subspace(&level.subspace, &expected) {
            return Err(format!("I_{k} differs from the closed form"));
        }
        for (i, x) in level.reps.iter().enumerate() {
            for (j, y) in level.reps.iter().enumerate() {
                let want = if k == 0 {
                    let u = ln.solve(x).expect("x ∈ A·n_1");
                    let v = ln.solve(y).expect("y ∈ A·n_1");
                    pair(&u, &v, n1)
                } else {
                    pair(x, y, &a.pow(&minus_n, (k - 1) as usize))
                };
                if level.gram[(i, j)] != want {
                    return Err(format!("g_{k}[{i},{j}] = {} but the closed form gives {want}", level.gram[(i, j)]));
                }
            }
        }
    }
    Ok(())
}
