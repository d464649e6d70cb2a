use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::gw::GWDataset;
use super::model::{localized_metric_geom, BundleData, CohomologyModel};
use crate::error::{Error, Result};
use crate::exactalg::{laurent_inverse, unit_vector, LaurentPoly};
use crate::filtration::NondegenerateFiltration;
use crate::formal::{
    Coeff, FormalSaito, Frame, LocalizedFormalFrobenius, LogSeries, TruncatedSeries, VarKind, VectorField,
};
use crate::mfa::{nilpotent_filtration_direct, NilpotentData};
use crate::scalar::Scalar;

/// The frame of H_K: φ_0 and φ_{p+1}.. give ∂_t, the nef classes φ_1..φ_p give q∂_q.
pub fn geometric_frame<S: Scalar>(c: &CohomologyModel<S>) -> Frame {
    let p = c.p();
    let (names, kinds) = (0..c.dim())
        .map(|a| if (1..=p).contains(&a) { (format!("q{a}"), VarKind::Q) } else { (format!("t{a}"), VarKind::T) })
        .unzip();
    Frame::new(names, kinds)
}

/// ξ_i with c_1(X) + c_1(V) = Σ ξ_i φ_i.
pub fn euler_weights<S: Scalar>(c: &CohomologyModel<S>, b: &BundleData<S>) -> Result<Vec<S>> {
    let n = c.dim();
    let v = b.c1(n);
    let sum: Vec<S> = c.c1().iter().zip(&v).map(|(x, y)| x.clone() + y.clone()).collect();
    if let Some(a) = (0..n).find(|&a| !(1..=c.p()).contains(&a) && !sum[a].is_zero()) {
        return Err(Error::InvalidModel(format!("c_1(X) + c_1(V) has a component on {}", c.ring().names()[a])));
    }
    Ok(sum[1..=c.p()].to_vec())
}

/// E = Σ (1 − |φ_α|) t_α ∂_α + Σ ξ_i q_i∂_{q_i}, in the geometric frame.
pub fn euler_field<C: Coeff>(c: &CohomologyModel<C::Scalar>, b: &BundleData<C::Scalar>, order: usize) -> Result<VectorField<C>> {
    let n = c.dim();
    let xi = euler_weights(c, b)?;
    Ok((0..n)
        .map(|a| {
            if (1..=c.p()).contains(&a) {
                TruncatedSeries::constant(n, order, C::from_scalar(xi[a - 1].clone()))
            } else {
                let w = <C::Scalar as Scalar>::from_int(1 - c.degrees()[a]);
                TruncatedSeries::variable(n, order, a).scale(&C::from_scalar(w))
            }
        })
        .collect())
}

/// ∗_V assembled from the classical twisted pairing and the correlators.
#[derive(Clone, Debug)]
pub struct TwistedProductModel<S: Scalar> {
    pub structure: LocalizedFormalFrobenius<S>,
    pub xi: Vec<S>,
    pub digest: String,
}

/// Multiset difference key ∖ {a, b, c}, if the three are contained.
fn remove_three(key: &[usize], slots: [usize; 3]) -> Option<Vec<usize>> {
    let mut rest = key.to_vec();
    for s in slots {
        let pos = rest.iter().position(|&x| x == s)?;
        rest.remove(pos);
    }
    Some(rest)
}

fn factorial<S: Scalar>(k: usize) -> S {
    (1..=k).fold(S::one(), |acc, i| acc * S::from_int(i as i64))
}

/// t^A q^d exponents and 1/Π mult! for a τ_{≥4} multiset A.
fn monomial_for<S: Scalar>(n: usize, degree: &[u32], tau: &[usize]) -> (Vec<u32>, S) {
    let mut e = vec![0u32; n];
    for (i, &d) in degree.iter().enumerate() {
        e[i + 1] = d;
    }
    for &a in tau {
        e[a] += 1;
    }
    let denom = tau
        .iter()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .fold(S::one(), |acc, &a| acc * factorial::<S>(e[a] as usize));
    (e, denom.inv())
}

/// Solves g^λ(φ_α ∗ φ_β, φ_γ) = ∫φ_α∪φ_β∪φ_γ/e_{S¹}(V) + Σ_{d≠0,m} (1/m!)⟨φ_α,φ_β,φ_γ,τ_{≥4}^m⟩_d q^d
/// for the structure constants, truncated at `order`.
pub fn build_twisted_product<S: Scalar>(
    c: &CohomologyModel<S>,
    b: &BundleData<S>,
    gw: &GWDataset<S>,
    order: usize,
) -> Result<TwistedProductModel<S>> {
    gw.validate(c, b)?;
    let n = c.dim();
    let p = c.p();
    let metric = localized_metric_geom(c, b)?;
    let g = metric.matrix();
    let ginv = laurent_inverse(g).ok_or_else(|| Error::InvalidModel("g^λ is not invertible".into()))?;

    let mut pairing = vec![vec![vec![TruncatedSeries::<LaurentPoly<S>>::zero(n, order); n]; n]; n];
    for (a, row) in pairing.iter_mut().enumerate() {
        for (bb, slot) in row.iter_mut().enumerate() {
            let cup = c.cup(&c.ring().basis_element(a), &c.ring().basis_element(bb));
            for (gg, f) in slot.iter_mut().enumerate() {
                let mut classical = LaurentPoly::zero();
                for (k, ck) in cup.iter().enumerate() {
                    if !ck.is_zero() {
                        classical = classical + g[(k, gg)].scale(ck);
                    }
                }
                *f = TruncatedSeries::constant(n, order, classical);
            }
        }
    }
    for (d, key, value) in gw.records() {
        let value = LaurentPoly::from_poly(value);
        for a in 0..n {
            for bb in 0..n {
                for gg in 0..n {
                    let Some(tau) = remove_three(key, [a, bb, gg]) else { continue };
                    if tau.iter().any(|&i| i <= p) {
                        continue;
                    }
                    let (e, w) = monomial_for::<S>(n, d, &tau);
                    pairing[a][bb][gg].add_term(e, value.scale(&w));
                }
            }
        }
    }

    let mut table = vec![vec![Vec::with_capacity(n); n]; n];
    for a in 0..n {
        for bb in 0..n {
            for dd in 0..n {
                let mut s = TruncatedSeries::zero(n, order);
                for gg in 0..n {
                    if !ginv[(gg, dd)].is_zero() {
                        s = s.add(&pairing[a][bb][gg].scale(&ginv[(gg, dd)]));
                    }
                }
                if let Some((e, coeff)) = s.terms().find(|(_, v)| v.min_exponent().is_some_and(|m| m < 0)) {
                    return Err(Error::LambdaPole(format!(
                        "C_({a},{bb})^{dd} has coefficient {coeff} at {}",
                        geometric_frame(c).monomial_name(e)
                    )));
                }
                table[a][bb].push(s);
            }
        }
    }
    let unit = unit_vector(n, 0);
    for bb in 0..n {
        for dd in 0..n {
            let expected = if bb == dd { LaurentPoly::one() } else { LaurentPoly::zero() };
            if table[0][bb][dd] != TruncatedSeries::constant(n, order, expected) {
                return Err(Error::InvalidDataset(format!("unit axiom fails: 1 ∗ φ_{bb} has φ_{dd}-component ≠ δ")));
            }
        }
    }
    let saito = FormalSaito::new(geometric_frame(c), order, table, unit, euler_field(c, b, order)?)?;
    let charge = S::from_int((c.dim_x() + b.rank) as i64);
    Ok(TwistedProductModel {
        structure: LocalizedFormalFrobenius { saito, metric, charge },
        xi: euler_weights(c, b)?,
        digest: crate::io::digest(&crate::io::write_gw_dataset(gw)),
    })
}

/// (I_•, g_•) on H_K from the nilpotent construction with n_i = c_i(V).
pub fn classical_limit_filtration<S: Scalar>(c: &CohomologyModel<S>, b: &BundleData<S>) -> Result<NondegenerateFiltration<S>> {
    let data = NilpotentData::new(c.ring().clone(), c.pairing().clone(), b.chern.clone())?;
    nilpotent_filtration_direct(&data)
}

/// Φ_cl = (1/3!) ∫ τ∪τ∪τ with τ = Σ t_α φ_α, as a cubic in t_0..t_s.
pub fn compute_phi_cl<S: Scalar>(c: &CohomologyModel<S>) -> TruncatedSeries<S> {
    let n = c.dim();
    let mut out = TruncatedSeries::zero(n, 3);
    let sixth = S::from_int(6).inv();
    for a in 0..n {
        for bb in 0..n {
            let ab = c.cup(&c.ring().basis_element(a), &c.ring().basis_element(bb));
            for gg in 0..n {
                let v = c.integrate(&c.cup(&ab, &c.ring().basis_element(gg)));
                if v.is_zero() {
                    continue;
                }
                let mut e = vec![0u32; n];
                e[a] += 1;
                e[bb] += 1;
                e[gg] += 1;
                out.add_term(e, v * sixth.clone());
            }
        }
    }
    out
}

/// G = Σ_α (∂_α Φ_cl) φ^α + Σ_{α≥1} (∂_α Φ_qu) c_r(V)∪φ^α with Φ_qu built from
/// the λ = 0 correlators; fewer-point values come from the divisor axiom.
/// In the q-frame t_i = log q_i, so ∂_i acts as q_i∂_{q_i}.
pub fn closed_form_potential<S: Scalar>(
    c: &CohomologyModel<S>,
    b: &BundleData<S>,
    gw: &GWDataset<S>,
    order: usize,
) -> Result<Vec<LogSeries<S>>> {
    gw.validate(c, b)?;
    let n = c.dim();
    let p = c.p();
    let frame = geometric_frame(c);

    let mut reduced: BTreeMap<(Vec<u32>, Vec<usize>), S> = BTreeMap::new();
    for (d, key, value) in gw.records() {
        let tau: Vec<usize> = key.iter().copied().filter(|&i| i > p).collect();
        let weight = key
            .iter()
            .filter(|&&i| i <= p)
            .fold(S::one(), |acc, &i| acc * S::from_int(d[i - 1] as i64));
        if weight.is_zero() {
            continue;
        }
        let v = value.coeff(0) * weight.inv();
        match reduced.get(&(d.clone(), tau.clone())) {
            Some(w) if *w != v => {
                return Err(Error::InvalidDataset(format!(
                    "divisor axiom: ⟨{tau:?}⟩ at degree {d:?} reduces to both {w} and {v}"
                )))
            }
            _ => {
                reduced.insert((d.clone(), tau), v);
            }
        }
    }
    let mut phi_qu = TruncatedSeries::zero(n, order + 2);
    for ((d, tau), v) in reduced {
        let (e, w) = monomial_for::<S>(n, &d, &tau);
        phi_qu.add_term(e, v * w);
    }
    let phi_qu = LogSeries::from_series(phi_qu);

    // Φ_cl with t_1..t_p read as log q_1..log q_p
    let mut phi_cl = LogSeries::zero(n, order + 2);
    for (e, v) in compute_phi_cl(c).terms() {
        let mut logs = vec![0u32; n];
        let mut rest = e.clone();
        for i in 1..=p {
            logs[i] = e[i];
            rest[i] = 0;
        }
        phi_cl = phi_cl.add(&LogSeries::from_log_monomial(logs, TruncatedSeries::monomial(n, order + 2, rest, v.clone())));
    }

    let top = b.top(n);
    let mut out = vec![LogSeries::zero(n, order + 2); n];
    for (a, dual) in c.dual_basis().iter().enumerate() {
        let dcl = phi_cl.derive(&frame, a);
        let twisted = c.cup(&top, dual);
        let dqu = if a >= 1 { Some(phi_qu.derive(&frame, a)) } else { None };
        for (gg, slot) in out.iter_mut().enumerate() {
            if !dual[gg].is_zero() {
                *slot = slot.add(&dcl.scale(&dual[gg]));
            }
            if let Some(dqu) = &dqu {
                if !twisted[gg].is_zero() {
                    *slot = slot.add(&dqu.scale(&twisted[gg]));
                }
            }
        }
    }
    Ok(out.into_iter().map(|g| g.with_order(order)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal::{
        check_formal_mfs, check_formal_saito, check_localized_formal_frobenius, limit_mfs, potential_vector_field,
        verify_potential,
    };
    use crate::geom::examples::{local_p1, local_p1_dataset, local_p2, local_p2_dataset};
    use crate::geom::{equivariant_euler, equivariant_euler_inverse, GWDataset};
    use crate::mfa::{filtration_from_profile, normalize_metric};
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn l(c: i64, e: i64) -> LaurentPoly<Q> {
        LaurentPoly::monomial(q(c), e)
    }

    #[test]
    fn euler_inverse_of_local_p2() {
        let (c, b) = local_p2::<Q>();
        let inv = equivariant_euler_inverse(&c, &b);
        assert_eq!(inv.coeff(-1, 3), vec![q(1), q(0), q(0)]);
        assert_eq!(inv.coeff(-2, 3), vec![q(0), q(3), q(0)]);
        assert_eq!(inv.coeff(-3, 3), vec![q(0), q(0), q(9)]);
        let one = inv.mul(c.ring(), &equivariant_euler(&c, &b));
        assert_eq!(one.terms().map(|(e, v)| (e, v.clone())).collect::<Vec<_>>(), vec![(0, vec![q(1), q(0), q(0)])]);
    }

    #[test]
    fn local_p2_metric_and_filtration() {
        let (c, b) = local_p2::<Q>();
        let g = localized_metric_geom(&c, &b).unwrap();
        let expected = [[l(9, -3), l(3, -2), l(1, -1)], [l(3, -2), l(1, -1), l(0, 0)], [l(1, -1), l(0, 0), l(0, 0)]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.matrix()[(i, j)], expected[i][j]);
            }
        }
        assert_eq!(g.matrix().det(), l(-1, -3));
        let direct = classical_limit_filtration(&c, &b).unwrap();
        let generic = filtration_from_profile(&normalize_metric(&g).unwrap(), &g).unwrap();
        direct.same_as(&generic).unwrap();
        assert_eq!(direct.jumps(), vec![0, 3]);
        assert_eq!(direct.metric(3, &[q(1), q(0), q(0)], &[q(1), q(0), q(0)]), Some(q(9)));
    }

    #[test]
    fn point_with_trivial_bundle() {
        let c = CohomologyModel::<Q>::projective_space(0);
        let b = BundleData::trivial(&c, 2);
        assert_eq!(localized_metric_geom(&c, &b).unwrap().matrix()[(0, 0)], l(1, -2));
        let e: VectorField<Q> = euler_field(&c, &b, 3).unwrap();
        assert_eq!(e[0], TruncatedSeries::variable(1, 3, 0));
        let phi = compute_phi_cl(&c);
        assert_eq!(phi.coeff(&[3]), Q::new(1.into(), 6.into()));
    }

    #[test]
    fn phi_cl_third_derivatives_are_triple_intersections() {
        let (c, _) = local_p2::<Q>();
        let phi = compute_phi_cl(&c);
        for a in 0..3 {
            for bb in 0..3 {
                for gg in 0..3 {
                    let d = phi.derive(VarKind::T, a).derive(VarKind::T, bb).derive(VarKind::T, gg);
                    let triple = c.integrate(&c.cup(&c.cup(&c.ring().basis_element(a), &c.ring().basis_element(bb)), &c.ring().basis_element(gg)));
                    assert_eq!(d.constant_term(), triple);
                }
            }
        }
    }

    #[test]
    fn euler_weights_of_local_p2() {
        let (c, b) = local_p2::<Q>();
        assert_eq!(euler_weights(&c, &b).unwrap(), vec![q(0)]);
        let e: VectorField<Q> = euler_field(&c, &b, 3).unwrap();
        assert!(e[1].is_zero());
        assert_eq!(e[2], TruncatedSeries::variable(3, 3, 2).scale(&q(-1)));
    }

    #[test]
    fn empty_dataset_gives_cup_product() {
        let (c, b) = local_p2::<Q>();
        let m = build_twisted_product(&c, &b, &GWDataset::empty(1), 4).unwrap();
        let s = &m.structure.saito;
        for a in 0..3 {
            for bb in 0..3 {
                let cup = c.cup(&c.ring().basis_element(a), &c.ring().basis_element(bb));
                for dd in 0..3 {
                    assert_eq!(s.table[a][bb][dd], TruncatedSeries::constant(3, 4, LaurentPoly::constant(cup[dd].clone())));
                }
            }
        }
        let r = check_localized_formal_frobenius(&m.structure);
        assert!(r.passed(), "{r}");
        let lim = limit_mfs(&m.structure).unwrap();
        assert_eq!(lim.charges, BTreeMap::from([(0, q(3)), (3, q(0))]));
        assert!(check_formal_mfs(&lim).passed());
    }

    #[test]
    fn synthetic_deformation_round_trip() {
        // h∗h = (1 − 3f) h² + f λ h with f = Σ c_d q^d
        let (c, b) = local_p2::<Q>();
        let cs = [3, -45, 244];
        let m = build_twisted_product(&c, &b, &local_p2_dataset(&cs), 4).unwrap();
        let s = &m.structure.saito;
        for (i, &cd) in cs.iter().enumerate() {
            let e = vec![0, i as u32 + 1, 0];
            assert_eq!(s.table[1][1][1].coeff(&e), l(cd, 1));
            assert_eq!(s.table[1][1][2].coeff(&e), l(-3 * cd, 0));
        }
        assert!(s.table[1][2].iter().all(TruncatedSeries::is_zero));
        let r = check_localized_formal_frobenius(&m.structure);
        assert!(r.passed(), "{r}");
        let lim = limit_mfs(&m.structure).unwrap();
        let r = check_formal_mfs(&lim);
        assert!(r.passed(), "{r}");
        assert!(check_formal_saito(&lim.saito).passed());

        let g = potential_vector_field(&lim.saito).unwrap();
        verify_potential(&lim.saito, &g).unwrap();
        let closed = closed_form_potential(&c, &b, &local_p2_dataset(&cs), 4).unwrap();
        verify_potential(&lim.saito, &closed).unwrap();
    }

    #[test]
    fn local_p1_has_lambda_dependent_product() {
        let (c, b) = local_p1::<Q>();
        let m = build_twisted_product(&c, &b, &local_p1_dataset(&[2, 5]), 3).unwrap();
        // h∗h = f λ² − 2 f λ h
        assert_eq!(m.structure.saito.table[1][1][0].coeff(&[0, 1]), l(2, 2));
        assert_eq!(m.structure.saito.table[1][1][1].coeff(&[0, 2]), l(-10, 1));
        assert!(check_localized_formal_frobenius(&m.structure).passed());
        assert!(check_formal_mfs(&limit_mfs(&m.structure).unwrap()).passed());
    }

    #[test]
    fn degree_axiom_violation_rejected() {
        let (c, b) = local_p2::<Q>();
        // ⟨h,h,h⟩ must be λ-constant here
        assert!(matches!(build_twisted_product(&c, &b, &local_p1_dataset(&[1]), 4), Err(Error::InvalidDataset(_))));
    }
}
