use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use super::laurent::LaurentPoly;
use super::poly::Poly;
use crate::scalar::{Ring, Scalar};

/// Dense row-major matrix over a commutative ring.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type PolyMatrix<S> = Matrix<Poly<S>>;
pub type LaurentMatrix<S> = Matrix<LaurentPoly<S>>;

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<T>], rows: usize) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self[(i, k)].clone() * rhs[(k, j)].clone()
            })
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].clone() + rhs[(i, j)].clone())
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, k| acc + self[(i, k)].clone() * v[k].clone())
            })
            .collect()
    }

    /// xᵀ M y
    pub fn bilinear(&self, x: &[T], y: &[T]) -> T {
        let my = self.apply(y);
        x.iter().zip(my).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[target] += factor · row[source]
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &T) {
        for j in 0..self.cols {
            let v = self[(source, j)].clone() * factor.clone();
            if !v.is_zero() {
                self[(target, j)] = self[(target, j)].clone() + v;
            }
        }
    }

    /// col[target] += factor · col[source]
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &T) {
        for i in 0..self.rows {
            let v = self[(i, source)].clone() * factor.clone();
            if !v.is_zero() {
                self[(i, target)] = self[(i, target)].clone() + v;
            }
        }
    }

    pub fn scale_row(&mut self, i: usize, factor: &T) {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].clone() * factor.clone();
        }
    }

    /// Determinant by cofactor expansion. Exponential; only for small
    /// matrices and as an independent check of the elimination routines.
    pub fn det_cofactor(&self) -> T {
        assert!(self.is_square());
        fn rec<T: Ring>(m: &Matrix<T>, rows: &[usize], cols: &mut Vec<usize>) -> T {
            if rows.is_empty() {
                return T::one();
            }
            let r = rows[0];
            let mut acc = T::zero();
            for idx in 0..cols.len() {
                let c = cols[idx];
                if m[(r, c)].is_zero() {
                    continue;
                }
                cols.remove(idx);
                let minor = rec(m, &rows[1..], cols);
                cols.insert(idx, c);
                let term = m[(r, c)].clone() * minor;
                acc = if idx % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
        let rows: Vec<usize> = (0..self.rows).collect();
        let mut cols = rows.clone();
        rec(self, &rows, &mut cols)
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form together with pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    pub reduced: Matrix<S>,
    pub pivots: Vec<usize>,
}

impl<S: Scalar> Matrix<S> {
    pub fn rref(&self) -> Echelon<S> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv();
            m.scale_row(r, &inv);
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = -m[(i, c)].clone();
                    m.add_row_multiple(i, r, &f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of {v : M v = 0}, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let Echelon { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of M x = b, if one exists.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = reduced[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let Echelon { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| reduced[(i, j + n)].clone()))
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> S {
        assert!(self.is_square());
        let mut m = self.clone();
        let mut det = S::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return S::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            let inv = piv.inv();
            for i in c + 1..m.rows {
                if !m[(i, c)].is_zero() {
                    let f = -(m[(i, c)].clone() * inv.clone());
                    m.add_row_multiple(i, c, &f);
                }
            }
        }
        det
    }
}

impl<S: Scalar> Matrix<Poly<S>> {
    /// Fraction-free (Bareiss) determinant.
    pub fn det(&self) -> Poly<S> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Poly::one();
        }
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = Poly::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Poly::zero();
                };
                m.swap_rows(k, p);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[(i, j)] * &m[(k, k)]) - &(&m[(i, k)] * &m[(k, j)]);
                    m[(i, j)] = num.exact_div(&prev).expect("Bareiss division is exact");
                }
                m[(i, k)] = Poly::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign {
            -d
        } else {
            d
        }
    }

    /// Fraction-free Gauss–Jordan: `(X, p)` with `self · X = p · I` and
    /// `p = ±det`, or `None` when singular. Every intermediate entry is a
    /// minor, so coefficients stay as small as the cofactors.
    pub fn adjugate(&self) -> Option<(Self, Poly<S>)> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Poly::one()
            } else {
                Poly::zero()
            }
        });
        let mut prev = Poly::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                let p = (k + 1..n).find(|&i| !m[(i, k)].is_zero())?;
                m.swap_rows(k, p);
            }
            for i in (0..n).filter(|&i| i != k) {
                for j in (0..2 * n).filter(|&j| j != k) {
                    let num = &(&m[(i, j)] * &m[(k, k)]) - &(&m[(i, k)] * &m[(k, j)]);
                    m[(i, j)] = num.exact_div(&prev).expect("Bareiss division is exact");
                }
                m[(i, k)] = Poly::zero();
            }
            prev = m[(k, k)].clone();
        }
        let x = Matrix::from_fn(n, n, |i, j| m[(i, n + j)].clone());
        Some((x, prev))
    }

    pub fn eval_at(&self, x: &S) -> Matrix<S> {
        self.map(|p| p.eval(x))
    }

    pub fn to_laurent(&self) -> LaurentMatrix<S> {
        self.map(LaurentPoly::from_poly)
    }
}

impl<S: Scalar> Matrix<LaurentPoly<S>> {
    /// Smallest k such that λ^k·M has only polynomial entries.
    pub fn clearing_shift(&self) -> i64 {
        self.data
            .iter()
            .filter_map(LaurentPoly::min_exponent)
            .min()
            .map_or(0, |m| (-m).max(0))
    }

    /// λ^k·M as a polynomial matrix; `None` if some entry keeps a pole.
    pub fn shifted_poly(&self, k: i64) -> Option<PolyMatrix<S>> {
        let mut data = Vec::with_capacity(self.data.len());
        for e in &self.data {
            data.push(e.shift(k).to_poly()?);
        }
        Some(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn det(&self) -> LaurentPoly<S> {
        assert!(self.is_square());
        let k = self.clearing_shift();
        let p = self.shifted_poly(k).expect("clearing shift removes poles");
        LaurentPoly::from_poly(&p.det()).shift(-k * self.rows as i64)
    }

    /// Entry-wise value at λ = 0; `None` if some entry has a pole.
    pub fn value_at_zero(&self) -> Option<Matrix<S>> {
        let mut data = Vec::with_capacity(self.data.len());
        for e in &self.data {
            data.push(e.value_at_zero()?);
        }
        Some(Matrix { rows: self.rows, cols: self.cols, data })
    }
}

/// True iff det(M) is a nonzero scalar times a power of λ.
pub fn is_unimodular_laurent<S: Scalar>(m: &LaurentMatrix<S>) -> bool {
    m.is_square() && m.det().is_monomial()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn lm(k: i64) -> LaurentPoly<Q> {
        LaurentPoly::monomial(q(1), k)
    }

    #[test]
    fn rational_kernel_and_solve() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        assert_eq!(m.rank(), 1);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.apply(v).iter().all(Zero::is_zero));
        }
        assert!(m.solve(&[q(1), q(3)]).is_none());
        let x = m.solve(&[q(2), q(4)]).unwrap();
        assert_eq!(m.apply(&x), vec![q(2), q(4)]);
    }

    #[test]
    fn inverse_and_det_agree_with_cofactors() {
        let m = Matrix::from_rows(vec![
            vec![q(2), q(1), q(0)],
            vec![q(1), q(3), q(1)],
            vec![q(0), q(1), q(4)],
        ]);
        assert_eq!(m.det(), m.det_cofactor());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
    }

    #[test]
    fn unimodularity_examples() {
        let d = Matrix::diagonal(&[lm(-3), lm(1)]);
        assert!(is_unimodular_laurent(&d));
        assert_eq!(d.det(), lm(-2));
        let one_plus = LaurentPoly::from_terms([(0, q(1)), (1, q(1))]);
        let m = Matrix::diagonal(&[LaurentPoly::one(), one_plus]);
        assert!(!is_unimodular_laurent(&m));
    }

    #[test]
    fn local_projective_plane_metric_determinant() {
        // cofactor oracle: det = -λ^{-3}
        let g = Matrix::from_rows(vec![
            vec![lm(-3).scale(&q(9)), lm(-2).scale(&q(3)), lm(-1)],
            vec![lm(-2).scale(&q(3)), lm(-1), LaurentPoly::zero()],
            vec![lm(-1), LaurentPoly::zero(), LaurentPoly::zero()],
        ]);
        let expected = LaurentPoly::monomial(q(-1), -3);
        assert_eq!(g.det_cofactor(), expected);
        assert_eq!(g.det(), expected);
        assert!(is_unimodular_laurent(&g));
    }

    #[test]
    fn bareiss_matches_cofactor_on_polynomials() {
        let p = |c: &[i64]| Poly::new(c.iter().map(|&x| q(x)).collect());
        let m = Matrix::from_rows(vec![
            vec![p(&[0, 1]), p(&[1]), p(&[2, 0, 1])],
            vec![p(&[]), p(&[3, 1]), p(&[1])],
            vec![p(&[1, 1]), p(&[0, 0, 2]), p(&[])],
        ]);
        assert_eq!(m.det(), m.det_cofactor());
    }
}
