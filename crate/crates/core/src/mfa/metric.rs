use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactalg::{is_unimodular_laurent, laurent_smith, LaurentMatrix, LaurentPoly, Matrix, Poly};
use crate::filtration::NondegenerateFiltration;
use crate::scalar::Scalar;

/// A symmetric K[λ]-bilinear form with values in K[λ, λ^{-1}], represented
/// on a K[λ]-basis of H^λ = H ⊗ K[λ] (for H^λ = A[λ], the basis of A).
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizedMetric<S> {
    matrix: LaurentMatrix<S>,
}

/// A vector of H^λ in coordinates.
pub type PolyVector<S> = Vec<Poly<S>>;

impl<S: Scalar> LocalizedMetric<S> {
    pub fn new(matrix: LaurentMatrix<S>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::Dimension("metric matrix must be square and nonempty".into()));
        }
        if !matrix.is_symmetric() {
            return Err(Error::InvalidMetric("matrix is not symmetric".into()));
        }
        if !is_unimodular_laurent(&matrix) {
            let det = matrix.det();
            let factor = det
                .min_exponent()
                .and_then(|m| det.shift(-m).to_poly())
                .unwrap_or_else(Poly::zero);
            return Err(Error::NotUnimodular(format!("det = {det} has non-monomial factor {factor}")));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &LaurentMatrix<S> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// g^λ(x, y) for x, y ∈ H^λ.
    pub fn pair(&self, x: &[Poly<S>], y: &[Poly<S>]) -> LaurentPoly<S> {
        let mut acc = LaurentPoly::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let xi = LaurentPoly::from_poly(xi);
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || self.matrix[(i, j)].is_zero() {
                    continue;
                }
                acc = acc + &(&xi * &self.matrix[(i, j)]) * &LaurentPoly::from_poly(yj);
            }
        }
        acc
    }

    /// Res_{λ=0} λ^{k−1} g^λ(x, y)
    pub fn residue_pairing(&self, k: i64, x: &[Poly<S>], y: &[Poly<S>]) -> S {
        self.pair(x, y).shift(k - 1).residue_at_zero()
    }

    /// Membership in I_k^λ = {x : λ^k g^λ(x, −) is polynomial}.
    pub fn in_lattice(&self, k: i64, x: &[Poly<S>]) -> bool {
        let s = self.dim();
        (0..s).all(|j| {
            let mut e = vec![Poly::zero(); s];
            e[j] = Poly::one();
            self.pair(x, &e).shift(k).is_polynomial()
        })
    }
}

/// Adapted bases with g^λ(x_i, y_j) = λ^{−κ_i} δ_{ij}, κ_1 ≥ … ≥ κ_s.
#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationProfile<S> {
    pub kappas: Vec<i64>,
    pub basis_x: Vec<PolyVector<S>>,
    pub basis_y: Vec<PolyVector<S>>,
}

impl<S: Scalar> FiltrationProfile<S> {
    /// Re-checks the pairing identity exactly.
    pub fn verify(&self, g: &LocalizedMetric<S>) -> bool {
        let s = self.kappas.len();
        (0..s).all(|i| {
            (0..s).all(|j| {
                let v = g.pair(&self.basis_x[i], &self.basis_y[j]);
                if i == j { v == LaurentPoly::monomial(S::one(), -self.kappas[i]) } else { v.is_zero() }
            })
        })
    }

    /// The distinct κ values in increasing order: the jumps of the filtration.
    pub fn jumps(&self) -> Vec<i64> {
        let mut ks = self.kappas.clone();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    /// π(x_i), the value at λ = 0.
    pub fn projected(&self, i: usize) -> Vec<S> {
        self.basis_x[i].iter().map(|p| p.coeff(0)).collect()
    }

    /// Lift of x ∈ I_k to I_k^λ through the adapted basis; `None` if x ∉ I_k.
    pub fn canonical_lift(&self, k: i64, x: &[S]) -> Option<PolyVector<S>> {
        let idx: Vec<usize> = (0..self.kappas.len()).filter(|&i| self.kappas[i] <= k).collect();
        let s = x.len();
        if idx.is_empty() {
            return x.iter().all(Zero::is_zero).then(|| vec![Poly::zero(); s]);
        }
        let cols: Vec<Vec<S>> = idx.iter().map(|&i| self.projected(i)).collect();
        let c = Matrix::from_cols(&cols, s).solve(x)?;
        let mut lift = vec![Poly::zero(); s];
        for (ci, &i) in c.iter().zip(&idx) {
            for (l, b) in lift.iter_mut().zip(&self.basis_x[i]) {
                *l = &*l + &b.scale(ci);
            }
        }
        Some(lift)
    }

    /// A random element of I_k^λ; with `kernel_of_pi` it lies in λ·H^λ ∩ I_k^λ,
    /// i.e. it is a perturbation that does not change π.
    pub fn random_lattice_element(&self, k: i64, kernel_of_pi: bool, rng: &mut impl Rng) -> PolyVector<S> {
        let s = self.kappas.len();
        let mut out = vec![Poly::zero(); s];
        for i in 0..s {
            let f = Poly::new((0..3).map(|_| S::from_int(rng.gen_range(-3..=3))).collect());
            let shift = if self.kappas[i] > k {
                (self.kappas[i] - k) as usize
            } else {
                usize::from(kernel_of_pi)
            };
            let f = f.shift(shift);
            for (o, b) in out.iter_mut().zip(&self.basis_x[i]) {
                *o = &*o + &(&f * b);
            }
        }
        out
    }
}

/// Adapted bases and κ's from the Smith form of λ^{k0}·G:
/// if U·λ^{k0}G·V = diag(λ^{a_i}) then x_i = row i of U, y_i = column i of
/// V and κ_i = k0 − a_i.
pub fn normalize_metric<S: Scalar>(g: &LocalizedMetric<S>) -> Result<FiltrationProfile<S>> {
    let snf = laurent_smith(g.matrix());
    let s = g.dim();
    let mut kappas = Vec::with_capacity(s);
    for e in &snf.diag {
        if e.is_zero() || !e.is_monomial() {
            return Err(Error::NotUnimodular(format!("elementary divisor {e} is not a power of λ")));
        }
        let a = e.degree().expect("nonzero") as i64;
        kappas.push(snf.shift - a);
    }
    let basis_x = (0..s).map(|i| snf.left.row(i).to_vec()).collect();
    let basis_y = (0..s).map(|i| snf.right.col(i)).collect();
    Ok(FiltrationProfile { kappas, basis_x, basis_y })
}

/// I_k = span{π(x_i) : κ_i ≤ k} with g_k(x̄, ȳ) = Res_{λ=0} λ^{k−1} g^λ(x, y)
/// evaluated on the adapted lifts.
pub fn filtration_from_profile<S: Scalar>(
    p: &FiltrationProfile<S>,
    g: &LocalizedMetric<S>,
) -> Result<NondegenerateFiltration<S>> {
    let s = g.dim();
    let mut jumps = Vec::new();
    for k in p.jumps() {
        let idx: Vec<usize> = (0..s).filter(|&i| p.kappas[i] == k).collect();
        let reps = idx.iter().map(|&i| p.projected(i)).collect();
        let gram = Matrix::from_fn(idx.len(), idx.len(), |a, b| {
            g.residue_pairing(k, &p.basis_x[idx[a]], &p.basis_x[idx[b]])
        });
        jumps.push((k, reps, gram));
    }
    NondegenerateFiltration::new(s, jumps)
}

/// Draws random re-lifts x + δx, y + δy (δ ∈ λH^λ ∩ I_k^λ) of basis vectors
/// of I_k and checks that the residue pairing does not move, and that it
/// vanishes when one argument is drawn from I_{k−1}^λ.
pub fn residue_metric_well_defined_check<S: Scalar>(
    g: &LocalizedMetric<S>,
    k: i64,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<bool> {
    let p = normalize_metric(g)?;
    let f = filtration_from_profile(&p, g)?;
    let ik = f.subspace_at(k);
    let lifts: Vec<(Vec<S>, PolyVector<S>)> = ik
        .basis()
        .iter()
        .map(|x| (x.clone(), p.canonical_lift(k, x).expect("x lies in I_k")))
        .collect();
    for (x, lx) in &lifts {
        for (y, ly) in &lifts {
            let expected = f.metric(k, x, y).expect("x, y lie in I_k");
            if g.residue_pairing(k, lx, ly) != expected {
                return Ok(false);
            }
            for _ in 0..trials {
                let dx = p.random_lattice_element(k, true, rng);
                let dy = p.random_lattice_element(k, true, rng);
                let rx = add(lx, &dx);
                let ry = add(ly, &dy);
                if !g.in_lattice(k, &rx) || !g.in_lattice(k, &ry) {
                    return Ok(false);
                }
                if g.residue_pairing(k, &rx, &ry) != expected {
                    return Ok(false);
                }
            }
        }
    }
    for _ in 0..trials {
        let lower = p.random_lattice_element(k - 1, false, rng);
        let upper = p.random_lattice_element(k, false, rng);
        if !g.residue_pairing(k, &lower, &upper).is_zero() || !g.residue_pairing(k, &upper, &lower).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn add<S: Scalar>(a: &[Poly<S>], b: &[Poly<S>]) -> PolyVector<S> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::unit_vector;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn mono(c: i64, e: i64) -> LaurentPoly<Q> {
        LaurentPoly::monomial(Q::from_int(c), e)
    }

    pub(crate) fn local_plane() -> LocalizedMetric<Q> {
        let z = LaurentPoly::zero;
        LocalizedMetric::new(Matrix::from_rows(vec![
            vec![mono(9, -3), mono(3, -2), mono(1, -1)],
            vec![mono(3, -2), mono(1, -1), z()],
            vec![mono(1, -1), z(), z()],
        ]))
        .unwrap()
    }

    #[test]
    fn identity_metric_is_trivial() {
        let g = LocalizedMetric::new(Matrix::<LaurentPoly<Q>>::identity(3)).unwrap();
        let p = normalize_metric(&g).unwrap();
        assert_eq!(p.kappas, vec![0, 0, 0]);
        let f = filtration_from_profile(&p, &g).unwrap();
        assert_eq!(f.graded_ranks(), vec![(0, 3)]);
        assert_eq!(f.levels()[0].gram, Matrix::identity(3));
    }

    #[test]
    fn diagonal_metric() {
        let g = LocalizedMetric::new(Matrix::diagonal(&[mono(1, -2), mono(1, -2), mono(1, 0)])).unwrap();
        let p = normalize_metric(&g).unwrap();
        assert!(p.verify(&g));
        assert_eq!(p.kappas, vec![2, 2, 0]);
        let f = filtration_from_profile(&p, &g).unwrap();
        assert_eq!(f.graded_ranks(), vec![(0, 1), (2, 2)]);
        assert_eq!(f.metric(0, &unit_vector(3, 2), &unit_vector(3, 2)), Some(Q::from_int(1)));
        assert_eq!(f.metric(2, &unit_vector(3, 0), &unit_vector(3, 0)), Some(Q::from_int(1)));
        assert_eq!(f.metric(2, &unit_vector(3, 0), &unit_vector(3, 1)), Some(Q::from_int(0)));
    }

    #[test]
    fn local_plane_profile_and_filtration() {
        let g = local_plane();
        let p = normalize_metric(&g).unwrap();
        assert!(p.verify(&g));
        assert_eq!(p.kappas, vec![3, 0, 0]);
        let f = filtration_from_profile(&p, &g).unwrap();
        let ranks: Vec<usize> = (-1..=3).map(|k| f.rank_at(k)).collect();
        assert_eq!(ranks, vec![0, 2, 2, 2, 3]);
        let one = unit_vector(3, 0);
        assert_eq!(f.metric(3, &one, &one), Some(Q::from_int(9)));
    }

    #[test]
    fn non_unimodular_rejected() {
        let m = Matrix::diagonal(&[mono(1, 0), LaurentPoly::new(0, vec![Q::from_int(1), Q::from_int(1)])]);
        assert!(matches!(LocalizedMetric::new(m), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn residues_are_lift_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = local_plane();
        for k in -1..=4 {
            assert!(residue_metric_well_defined_check(&g, k, 10, &mut rng).unwrap());
        }
    }
}
