//! Smith normal form over K[λ] with certified transformation matrices.

use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::matrix::{LaurentMatrix, Matrix, PolyMatrix};
use super::poly::Poly;
use crate::scalar::Scalar;

/// `left · (λ^shift · M) · right = diag(diag)`.
///
/// `left` and `right` have nonzero constant determinants, the diagonal
/// entries are monic (or zero past the rank) and each divides the next.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithDecomposition<S> {
    pub left: PolyMatrix<S>,
    pub diag: Vec<Poly<S>>,
    pub right: PolyMatrix<S>,
    pub shift: i64,
    pub rank: usize,
}

impl<S: Scalar> SmithDecomposition<S> {
    pub fn is_full_rank(&self) -> bool {
        self.rank == self.diag.len()
    }

    pub fn diagonal_matrix(&self) -> PolyMatrix<S> {
        Matrix::diagonal(&self.diag)
    }

    /// Re-multiplies and checks every invariant against the (already
    /// λ-shifted) polynomial input.
    pub fn certify(&self, m: &PolyMatrix<S>) -> Result<(), String> {
        if self.left.mul(m).mul(&self.right) != self.diagonal_matrix() {
            return Err("U·M·V differs from the diagonal".into());
        }
        // det U · det M · det V = Π e_i, so for nonsingular M the transforms are
        // unimodular iff the quotient is a nonzero constant; the transforms
        // themselves are usually far larger than M
        let dm = m.det();
        if !dm.is_zero() {
            let prod = self.diag.iter().fold(Poly::one(), |acc, e| &acc * e);
            match prod.exact_div(&dm) {
                Some(c) if c.is_constant() && !c.is_zero() => {}
                _ => return Err(format!("det U · det V = {prod} / ({dm}) is not a nonzero constant")),
            }
        } else {
            for (name, t) in [("left", &self.left), ("right", &self.right)] {
                let d = t.det();
                if d.is_zero() || !d.is_constant() {
                    return Err(format!("{name} transform has determinant {d}, not a nonzero constant"));
                }
            }
        }
        for (i, e) in self.diag.iter().enumerate() {
            if !e.is_zero() && !e.is_monic() {
                return Err(format!("diagonal entry {i} is not monic"));
            }
        }
        for w in self.diag.windows(2) {
            if !w[0].divides(&w[1]) {
                return Err(format!("{} does not divide {}", w[0], w[1]));
            }
        }
        Ok(())
    }
}

/// Smith normal form of a square polynomial matrix.
///
/// Rank-deficient input is accepted; the trailing diagonal entries are then
/// zero and `rank` records how many are not.
///
/// Nonsingular input whose invariant factors are 1, …, 1, det (the generic
/// case) goes through [`generic_smith`]. Otherwise row and column Hermite forms alternate until the matrix is diagonal up to
/// a permutation (entries above each pivot are reduced modulo the pivot, which
/// keeps degrees bounded by the determinant's); a final pass turns the
/// diagonal into a divisibility chain with 2×2 gcd/lcm moves. Plain
/// Euclidean elimination is much simpler but its rational coefficients
/// explode already at 6×6, degree 4.
pub fn smith_normal_form<S: Scalar>(m: &PolyMatrix<S>) -> SmithDecomposition<S> {
    assert!(m.is_square(), "smith_normal_form expects a square matrix");
    if let Some(snf) = generic_smith(m) {
        return snf;
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut left = Matrix::identity(n);
    let mut right = Matrix::identity(n);

    loop {
        row_hermite(&mut a, &mut left);
        if is_monomial_pattern(&a) {
            break;
        }
        let mut at = a.transpose();
        let mut rt = right.transpose();
        row_hermite(&mut at, &mut rt);
        a = at.transpose();
        right = rt.transpose();
        if is_monomial_pattern(&a) {
            break;
        }
    }

    // move the nonzero entries onto the diagonal, zeros last
    let mut rank = 0;
    for k in 0..n {
        let Some((i, j)) = (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).find(|&(i, j)| !a[(i, j)].is_zero()) else {
            break;
        };
        a.swap_rows(k, i);
        left.swap_rows(k, i);
        a.swap_cols(k, j);
        right.swap_cols(k, j);
        rank = k + 1;
    }

    // d_i ← gcd(d_i, d_j), d_j ← lcm(d_i, d_j)
    for i in 0..rank {
        for j in i + 1..rank {
            let (p, q) = (a[(i, i)].clone(), a[(j, j)].clone());
            if p.divides(&q) {
                continue;
            }
            let (g, s, u) = p.ext_gcd(&q);
            let pg = p.exact_div(&g).expect("gcd divides");
            let qg = q.exact_div(&g).expect("gcd divides");
            // [s u; −q/g p/g] · diag(p, q) · [1 −u·q/g; 1 s·p/g] = diag(g, p·q/g)
            combine_rows(&mut left, i, j, [&s, &u, &-&qg, &pg]);
            let mut rt = right.transpose();
            let x = -&(&u * &qg);
            let y = &s * &pg;
            combine_rows(&mut rt, i, j, [&Poly::one(), &Poly::one(), &x, &y]);
            right = rt.transpose();
            a[(i, i)] = g;
            a[(j, j)] = &p * &qg;
        }
    }

    let mut diag = Vec::with_capacity(n);
    for t in 0..n {
        let e = a[(t, t)].clone();
        if let Some(lc) = e.leading() {
            let inv = Poly::constant(lc.inv());
            left.scale_row(t, &inv);
            diag.push(e.monic());
        } else {
            diag.push(Poly::zero());
        }
    }
    SmithDecomposition { left, diag, right, shift: 0, rank }
}

/// Smith form read off the adjugate when some cofactor is coprime to the
/// determinant.
///
/// With `M·A = d·I` and `A_rk` invertible mod d, the rows `e_i + h_i·e_r`
/// (i ≠ r, `h_i = −A_ik·A_rk^{-1} mod d`) and `d·e_r` span the row lattice of
/// M: the 2×2 minors of A are multiples of d, so each row times A/d is
/// polynomial, and the determinants agree. That Hermite form H gives
/// `U = H·A/d` (row i is `(A_i + h_i·A_r)/d`), and one column operation clears column r. No Bezout chain is
/// needed, so coefficients stay the size of the canonical answer.
fn generic_smith<S: Scalar>(m: &PolyMatrix<S>) -> Option<SmithDecomposition<S>> {
    let n = m.rows();
    if n == 0 {
        return None;
    }
    let (adj, d) = m.adjugate()?;
    if d.is_constant() {
        let inv = Poly::constant(d.leading().expect("nonsingular").inv());
        let left = adj.map(|e| e * &inv);
        let diag = vec![Poly::one(); n];
        return Some(SmithDecomposition { left, diag, right: Matrix::identity(n), shift: 0, rank: n });
    }
    let mut cands: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |k| (r, k)))
        .filter_map(|(r, k)| adj[(r, k)].degree().map(|deg| (deg, r, k)))
        .collect();
    cands.sort();
    let (r, k, inv) = cands
        .into_iter()
        .find_map(|(_, r, k)| adj[(r, k)].inverse_mod(&d).map(|inv| (r, k, inv)))?;
    let mut right = Matrix::identity(n);
    let mut left = Matrix::zeros(n, n);
    for i in 0..n {
        if i == r {
            for j in 0..n {
                left[(i, j)] = adj[(r, j)].clone();
            }
            continue;
        }
        let hi = (-&(&adj[(i, k)] * &inv)).div_rem(&d).1;
        for j in 0..n {
            let e = &adj[(i, j)] + &(&hi * &adj[(r, j)]);
            left[(i, j)] = e.exact_div(&d).expect("row lattice of M contains H");
        }
        right[(i, r)] = -hi;
    }
    left.swap_rows(r, n - 1);
    right.swap_cols(r, n - 1);
    left.scale_row(n - 1, &Poly::constant(d.leading().expect("nonzero").inv()));
    let mut diag = vec![Poly::one(); n];
    diag[n - 1] = d.monic();
    Some(SmithDecomposition { left, diag, right, shift: 0, rank: n })
}

/// At most one nonzero entry in every row and every column.
fn is_monomial_pattern<S: Scalar>(a: &PolyMatrix<S>) -> bool {
    let n = a.rows();
    let rows_ok = (0..n).all(|i| (0..a.cols()).filter(|&j| !a[(i, j)].is_zero()).count() <= 1);
    let cols_ok = (0..a.cols()).all(|j| (0..n).filter(|&i| !a[(i, j)].is_zero()).count() <= 1);
    rows_ok && cols_ok
}

/// Rows (r, i) ← (c0·row_r + c1·row_i, c2·row_r + c3·row_i).
fn combine_rows<S: Scalar>(m: &mut PolyMatrix<S>, r: usize, i: usize, c: [&Poly<S>; 4]) {
    for col in 0..m.cols() {
        let (x, y) = (m[(r, col)].clone(), m[(i, col)].clone());
        if x.is_zero() && y.is_zero() {
            continue;
        }
        m[(r, col)] = &(c[0] * &x) + &(c[1] * &y);
        m[(i, col)] = &(c[2] * &x) + &(c[3] * &y);
    }
}

/// Row-echelon (Hermite) form by unimodular row operations, mirrored on
/// `track`: monic pivots, entries above a pivot of lower degree than it.
fn row_hermite<S: Scalar>(a: &mut PolyMatrix<S>, track: &mut PolyMatrix<S>) {
    let (n, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let best = (r..n)
            .filter_map(|i| a[(i, c)].degree().map(|d| (d, i)))
            .min();
        let Some((_, p)) = best else { continue };
        a.swap_rows(r, p);
        track.swap_rows(r, p);
        for i in r + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let (piv, x) = (a[(r, c)].clone(), a[(i, c)].clone());
            let (quot, rem) = x.div_rem(&piv);
            if rem.is_zero() {
                let f = -quot;
                a.add_row_multiple(i, r, &f);
                track.add_row_multiple(i, r, &f);
            } else {
                let (g, s, u) = piv.ext_gcd(&x);
                let pg = piv.exact_div(&g).expect("gcd divides");
                let xg = x.exact_div(&g).expect("gcd divides");
                let coeffs = [&s, &u, &-&xg, &pg];
                combine_rows(a, r, i, coeffs);
                combine_rows(track, r, i, coeffs);
            }
        }
        let lc = a[(r, c)].leading().expect("pivot is nonzero").inv();
        let inv = Poly::constant(lc);
        a.scale_row(r, &inv);
        track.scale_row(r, &inv);
        for i in 0..r {
            if a[(i, c)].is_zero() {
                continue;
            }
            let (quot, _) = a[(i, c)].div_rem(&a[(r, c)]);
            if !quot.is_zero() {
                let f = -quot;
                a.add_row_multiple(i, r, &f);
                track.add_row_multiple(i, r, &f);
            }
        }
        r += 1;
    }
}

/// Clears the poles of a Laurent matrix by λ^{k0}, then takes the Smith form.
pub fn laurent_smith<S: Scalar>(m: &LaurentMatrix<S>) -> SmithDecomposition<S> {
    let k0 = m.clearing_shift();
    let p = m.shifted_poly(k0).expect("clearing shift removes poles");
    let mut snf = smith_normal_form(&p);
    snf.shift = k0;
    snf
}

/// Inverse of a unimodular Laurent matrix via its Smith form:
/// M^{-1} = λ^{k0} · V · diag(e_i)^{-1} · U.
pub fn laurent_inverse<S: Scalar>(m: &LaurentMatrix<S>) -> Option<LaurentMatrix<S>> {
    let snf = laurent_smith(m);
    let n = m.rows();
    let mut dinv = Vec::with_capacity(n);
    for e in &snf.diag {
        dinv.push(LaurentPoly::from_poly(e).monomial_inverse()?);
    }
    let v = snf.right.to_laurent();
    let u = snf.left.to_laurent();
    let scaled = Matrix::from_fn(n, n, |i, j| &v[(i, j)] * &dinv[j]);
    Some(scaled.mul(&u).map(|e| e.shift(snf.shift)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn p(c: &[i64]) -> Poly<Q> {
        Poly::new(c.iter().map(|&x| Q::from_int(x)).collect())
    }

    #[test]
    fn identity_is_fixed() {
        let m: PolyMatrix<Q> = Matrix::identity(2);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diag, vec![p(&[1]), p(&[1])]);
        assert_eq!(snf.left, Matrix::identity(2));
        assert_eq!(snf.right, Matrix::identity(2));
        snf.certify(&m).unwrap();
    }

    #[test]
    fn diagonal_in_divisibility_order() {
        let m = Matrix::diagonal(&[p(&[0, 1]), p(&[0, 0, 1])]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diag, vec![p(&[0, 1]), p(&[0, 0, 1])]);
        snf.certify(&m).unwrap();
    }

    #[test]
    fn unit_determinant_gives_ones() {
        // [[0,1],[1,λ]]: det = -1, so both invariant factors are 1
        let m = Matrix::from_rows(vec![vec![p(&[]), p(&[1])], vec![p(&[1]), p(&[0, 1])]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diag, vec![p(&[1]), p(&[1])]);
        snf.certify(&m).unwrap();
    }

    #[test]
    fn reorders_non_divisible_diagonal() {
        // diag(λ+1, λ) → diag(1, λ(λ+1))
        let m = Matrix::diagonal(&[p(&[1, 1]), p(&[0, 1])]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diag, vec![p(&[1]), p(&[0, 1, 1])]);
        snf.certify(&m).unwrap();
    }

    #[test]
    fn rank_deficiency_is_flagged() {
        let m = Matrix::from_rows(vec![vec![p(&[0, 1]), p(&[0, 2])], vec![p(&[1]), p(&[2])]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank, 1);
        assert!(!snf.is_full_rank());
        assert!(snf.diag[1].is_zero());
        snf.certify(&m).unwrap();
        let z: PolyMatrix<Q> = Matrix::zeros(3, 3);
        let snf = smith_normal_form(&z);
        assert_eq!(snf.rank, 0);
        snf.certify(&z).unwrap();
    }

    #[test]
    fn adjugate_inverts_up_to_scale() {
        let m = Matrix::from_rows(vec![
            vec![p(&[]), p(&[1, 2]), p(&[3])],
            vec![p(&[0, 1]), p(&[2]), p(&[1, 0, 1])],
            vec![p(&[5]), p(&[]), p(&[0, 1])],
        ]);
        let (x, d) = m.adjugate().unwrap();
        assert_eq!(m.mul(&x), Matrix::diagonal(&vec![d.clone(); 3]));
        assert_eq!(d.monic(), m.det().monic());
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diag[2], d.monic());
        snf.certify(&m).unwrap();
    }

    #[test]
    fn laurent_inverse_of_local_plane_metric() {
        let lm = |c: i64, k: i64| LaurentPoly::monomial(Q::from_int(c), k);
        let z = LaurentPoly::zero;
        let g = Matrix::from_rows(vec![
            vec![lm(9, -3), lm(3, -2), lm(1, -1)],
            vec![lm(3, -2), lm(1, -1), z()],
            vec![lm(1, -1), z(), z()],
        ]);
        let inv = laurent_inverse(&g).unwrap();
        assert_eq!(g.mul(&inv), Matrix::identity(3));
    }
}
