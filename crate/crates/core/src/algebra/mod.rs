//! Finite-dimensional commutative unital algebras given by structure
//! constants.

mod element;
mod existence;
mod ideal;

pub use element::{monic_inverse, ElementLaurent};
pub use existence::frobenius_filtration_existence;
pub use ideal::{annihilator, ideal_power, ideal_product, is_ideal, nilradical};

use crate::error::{Error, Result};
use crate::exactalg::{unit_vector, CoefficientRing, Matrix};
use crate::scalar::Scalar;

/// Commutative associative unital algebra over `S` with basis e_0..e_{s-1}.
///
/// `table[i][j]` holds the coordinates of e_i·e_j.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteAlgebra<S> {
    names: Vec<String>,
    table: Vec<Vec<Vec<S>>>,
    unit: Vec<S>,
    grading: Option<Vec<i64>>,
}

impl<S: Scalar> FiniteAlgebra<S> {
    /// Validates commutativity, associativity, the unit and the grading;
    /// the error names the first failing basis pair or triple.
    pub fn new(
        names: Vec<String>,
        table: Vec<Vec<Vec<S>>>,
        unit: Vec<S>,
        grading: Option<Vec<i64>>,
    ) -> Result<Self> {
        let s = names.len();
        if s == 0 {
            return Err(Error::InvalidAlgebra("algebra has no basis".into()));
        }
        if table.len() != s || table.iter().any(|r| r.len() != s || r.iter().any(|v| v.len() != s)) {
            return Err(Error::Dimension(format!("structure table is not {s}×{s}×{s}")));
        }
        if unit.len() != s {
            return Err(Error::Dimension("unit has wrong length".into()));
        }
        if grading.as_ref().is_some_and(|g| g.len() != s) {
            return Err(Error::Dimension("grading has wrong length".into()));
        }
        let alg = Self { names, table, unit, grading };
        alg.validate()?;
        Ok(alg)
    }

    /// Builds the table from sparse constants (i, j, k, c_{ij}^k); each
    /// entry also sets c_{ji}^k.
    pub fn from_constants(
        names: Vec<String>,
        constants: &[(usize, usize, usize, S)],
        unit: Vec<S>,
        grading: Option<Vec<i64>>,
    ) -> Result<Self> {
        let s = names.len();
        let mut table = vec![vec![vec![S::zero(); s]; s]; s];
        for (i, j, k, c) in constants {
            if *i >= s || *j >= s || *k >= s {
                return Err(Error::Dimension(format!("index ({i}, {j}, {k}) out of range")));
            }
            table[*i][*j][*k] = c.clone();
            table[*j][*i][*k] = c.clone();
        }
        Self::new(names, table, unit, grading)
    }

    fn validate(&self) -> Result<()> {
        let s = self.dim();
        for i in 0..s {
            for j in i + 1..s {
                if self.table[i][j] != self.table[j][i] {
                    return Err(Error::InvalidAlgebra(format!(
                        "not commutative: {}·{} ≠ {}·{}",
                        self.names[i], self.names[j], self.names[j], self.names[i]
                    )));
                }
            }
        }
        for i in 0..s {
            for j in 0..s {
                for k in 0..s {
                    let left = self.mul(&self.table[i][j], &unit_vector(s, k));
                    let right = self.mul(&unit_vector(s, i), &self.table[j][k]);
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!(
                            "not associative on ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        for i in 0..s {
            if self.mul(&self.unit, &unit_vector(s, i)) != unit_vector(s, i) {
                return Err(Error::InvalidAlgebra(format!("unit fails on {}", self.names[i])));
            }
        }
        if let Some(g) = &self.grading {
            for i in 0..s {
                for j in 0..s {
                    for k in 0..s {
                        if !self.table[i][j][k].is_zero() && g[k] != g[i] + g[j] {
                            return Err(Error::Grading(format!(
                                "{}·{} has a component along {} of the wrong degree",
                                self.names[i], self.names[j], self.names[k]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// K[x_1..x_m]/(x_1^{a_1}, …, x_m^{a_m}) on the monomial basis, ordered
    /// lexicographically with x_1's exponent slowest; graded by total degree.
    pub fn monomial_quotient(exponents: &[usize]) -> Self {
        assert!(exponents.iter().all(|&a| a > 0));
        let mut monos: Vec<Vec<usize>> = vec![vec![]];
        for &a in exponents {
            monos = monos
                .into_iter()
                .flat_map(|m| {
                    (0..a).map(move |e| {
                        let mut m = m.clone();
                        m.push(e);
                        m
                    })
                })
                .collect();
        }
        let s = monos.len();
        let index = |m: &[usize]| monos.iter().position(|x| x == m);
        let mut table = vec![vec![vec![S::zero(); s]; s]; s];
        for i in 0..s {
            for j in 0..s {
                let prod: Vec<usize> = monos[i].iter().zip(&monos[j]).map(|(a, b)| a + b).collect();
                if let Some(k) = index(&prod) {
                    table[i][j][k] = S::one();
                }
            }
        }
        let vars = ["x", "y", "z", "w", "u", "v"];
        let names = monos
            .iter()
            .map(|m| {
                let parts: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| {
                        let var = vars.get(v).map_or_else(|| format!("x{v}"), |s| s.to_string());
                        if e == 1 { var } else { format!("{var}^{e}") }
                    })
                    .collect();
                if parts.is_empty() { "1".to_string() } else { parts.join("") }
            })
            .collect();
        let grading = monos.iter().map(|m| m.iter().sum::<usize>() as i64).collect();
        Self::new(names, table, unit_vector(s, 0), Some(grading)).expect("monomial quotient is a valid algebra")
    }

    /// K[x]/(x^n).
    pub fn truncated_polynomial(n: usize) -> Self {
        Self::monomial_quotient(&[n])
    }

    /// K^n with componentwise product.
    pub fn split_semisimple(n: usize) -> Self {
        let mut table = vec![vec![vec![S::zero(); n]; n]; n];
        for (i, row) in table.iter_mut().enumerate() {
            row[i][i] = S::one();
        }
        let names = (0..n).map(|i| format!("p{i}")).collect();
        Self::new(names, table, vec![S::one(); n], None).expect("valid")
    }

    /// Direct product A × B; gradings are kept when both factors have one.
    pub fn product(&self, other: &Self) -> Self {
        let (a, b) = (self.dim(), other.dim());
        let s = a + b;
        let mut table = vec![vec![vec![S::zero(); s]; s]; s];
        for i in 0..a {
            for j in 0..a {
                table[i][j][..a].clone_from_slice(&self.table[i][j]);
            }
        }
        for i in 0..b {
            for j in 0..b {
                table[a + i][a + j][a..].clone_from_slice(&other.table[i][j]);
            }
        }
        let names = self
            .names
            .iter()
            .map(|n| format!("({n},0)"))
            .chain(other.names.iter().map(|n| format!("(0,{n})")))
            .collect();
        let unit = self.unit.iter().chain(&other.unit).cloned().collect();
        let grading = match (&self.grading, &other.grading) {
            (Some(g), Some(h)) => Some(g.iter().chain(h).copied().collect()),
            _ => None,
        };
        Self::new(names, table, unit, grading).expect("product of valid algebras")
    }

    /// The same algebra in the basis f_i = Σ_k p[(k, i)] e_k (columns of
    /// `p`). Drops the grading.
    pub fn change_of_basis(&self, p: &Matrix<S>) -> Result<Self> {
        let s = self.dim();
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::InvalidAlgebra("change of basis is singular".into()))?;
        let f: Vec<Vec<S>> = (0..s).map(|i| p.col(i)).collect();
        let table = (0..s)
            .map(|i| (0..s).map(|j| pinv.apply(&self.mul(&f[i], &f[j]))).collect())
            .collect();
        let names = (0..s).map(|i| format!("f{i}")).collect();
        Self::new(names, table, pinv.apply(&self.unit), None)
    }

    pub fn with_grading(mut self, grading: Option<Vec<i64>>) -> Result<Self> {
        self.grading = grading;
        self.validate()?;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> &[S] {
        &self.unit
    }

    pub fn grading(&self) -> Option<&[i64]> {
        self.grading.as_deref()
    }

    /// Coordinates of e_i·e_j.
    pub fn structure(&self, i: usize, j: usize) -> &[S] {
        &self.table[i][j]
    }

    pub fn zero_element(&self) -> Vec<S> {
        vec![S::zero(); self.dim()]
    }

    pub fn basis_element(&self, i: usize) -> Vec<S> {
        unit_vector(self.dim(), i)
    }

    pub fn mul(&self, x: &[S], y: &[S]) -> Vec<S> {
        let s = self.dim();
        let mut out = vec![S::zero(); s];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.clone() * yj.clone();
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_zero() {
                        *o = o.clone() + c.clone() * t.clone();
                    }
                }
            }
        }
        out
    }

    /// Matrix of L_a : x ↦ a·x; column j is a·e_j.
    pub fn mult_matrix(&self, a: &[S]) -> Matrix<S> {
        let s = self.dim();
        let cols: Vec<Vec<S>> = (0..s).map(|j| self.mul(a, &unit_vector(s, j))).collect();
        Matrix::from_cols(&cols, s)
    }

    pub fn pow(&self, a: &[S], k: usize) -> Vec<S> {
        let mut out = self.unit.clone();
        for _ in 0..k {
            out = self.mul(&out, a);
        }
        out
    }

    /// a^dim = 0 is equivalent to nilpotency.
    pub fn is_nilpotent(&self, a: &[S]) -> bool {
        self.pow(a, self.dim()).iter().all(|c| c.is_zero())
    }

    /// Degree of a homogeneous element, `None` if inhomogeneous, zero or
    /// ungraded.
    pub fn degree_of(&self, x: &[S]) -> Option<i64> {
        let g = self.grading.as_ref()?;
        let mut deg = None;
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(g[i]),
                Some(d) if d != g[i] => return None,
                _ => {}
            }
        }
        deg
    }

    /// Matrix of the bilinear form (x, y) ↦ φ(x·y) for a linear functional φ.
    pub fn pairing_from_functional(&self, phi: &[S]) -> Matrix<S> {
        let s = self.dim();
        Matrix::from_fn(s, s, |i, j| dot(phi, &self.table[i][j]))
    }

    /// First basis triple (a, b, c) with g(e_a e_b, e_c) ≠ g(e_a, e_b e_c).
    pub fn invariance_violation(&self, g: &Matrix<S>) -> Option<(usize, usize, usize)> {
        let s = self.dim();
        for a in 0..s {
            for b in 0..s {
                for c in 0..s {
                    let l = g.bilinear(&self.table[a][b], &unit_vector(s, c));
                    let r = g.bilinear(&unit_vector(s, a), &self.table[b][c]);
                    if l != r {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Format an element as a linear combination of basis names.
    pub fn format_element(&self, x: &[S]) -> String {
        let parts: Vec<String> = x
            .iter()
            .zip(&self.names)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, n)| if c.is_one() { n.clone() } else { format!("({c})·{n}") })
            .collect();
        if parts.is_empty() { "0".into() } else { parts.join(" + ") }
    }
}

pub fn dot<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

impl<S: Scalar> CoefficientRing for FiniteAlgebra<S> {
    type Elem = Vec<S>;
    fn zero(&self) -> Vec<S> {
        self.zero_element()
    }
    fn one(&self) -> Vec<S> {
        self.unit.clone()
    }
    fn add(&self, a: &Vec<S>, b: &Vec<S>) -> Vec<S> {
        a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
    }
    fn sub(&self, a: &Vec<S>, b: &Vec<S>) -> Vec<S> {
        a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
    }
    fn mul(&self, a: &Vec<S>, b: &Vec<S>) -> Vec<S> {
        FiniteAlgebra::mul(self, a, b)
    }
    fn is_zero(&self, a: &Vec<S>) -> bool {
        a.iter().all(|c| c.is_zero())
    }
}
