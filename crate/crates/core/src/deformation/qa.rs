use num_traits::Zero;
use serde::Serialize;

use crate::dgms::is_algebra_chain_map;
use crate::error::{Error, Result};
use crate::graded::{commutator_dgla, AlgebraKind, CohomologyPresentation, GradedMap, StructuredAlgebra};
use crate::linalg::{is_zero_vector, zero_vector, Matrix, Scalar, Vector};
use crate::qdolbeault::{ConnectionModel, QuaternionicComplex, DEL, DEL_BAR, DEL_BAR_J, TOTAL_D};

use super::series::{bracket, check_mc_element, gauge_transform, mc_check, Series, TruncatedRing};

/// The quaternionic complex of a connection model as a DGLA, together with
/// the base DGLA `(A, [·,·])` carrying both `del_bar` and `del_bar_J`.
#[derive(Clone, Debug)]
pub struct QaDeformation {
    model: ConnectionModel,
    complex: QuaternionicComplex,
    qa: StructuredAlgebra,
    base: StructuredAlgebra,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McSplitReport {
    pub total: bool,
    /// `del_bar_J ξ₁ + ½[ξ₁, ξ₁] = 0`
    pub xx: bool,
    /// `del_bar ξ₂ + ½[ξ₂, ξ₂] = 0`
    pub yy: bool,
    /// `del_bar ξ₁ + del_bar_J ξ₂ + [ξ₁, ξ₂] = 0`
    pub xy: bool,
    pub equivalent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvaluationReport {
    pub input_mc: bool,
    /// `π_x(X) = ξ₁` is Maurer–Cartan for `del_bar_J`.
    pub pi_x_mc: bool,
    /// `π_y(X) = ξ₂` is Maurer–Cartan for `del_bar`.
    pub pi_y_mc: bool,
    pub pi_x_morphism: bool,
    pub pi_y_morphism: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftYReport {
    pub in_kernel: bool,
    pub input_mc: bool,
    pub lifted_mc: bool,
    pub roundtrip: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentReport {
    pub h1_qa: usize,
    pub h1_del_bar: usize,
    pub h1_del_bar_j: usize,
    /// `(π_y, π_x)` on `H¹` is bijective.
    pub bijective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FirstOrderReport {
    /// `dim (ker del_bar ∩ ker del_bar_J)¹ − dim del_bar_J((ker del_bar)⁰)`
    pub x_classes: usize,
    pub h1_del_bar_j: usize,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionReport {
    pub order: usize,
    /// `P_B² = 0`, `R_B² = 0`, `P_B R_B + R_B P_B = 0` with
    /// `P_B = del_bar + ad ξ₂`, `R_B = del_bar_J + ad ξ₁`.
    pub relations: bool,
    pub reduces_mod_t: bool,
    pub gauge_image_mc: bool,
    /// `e^{ad a} P_B e^{−ad a}` and likewise for `R_B` match the operators of `a ∗ X`.
    pub gauge_conjugation: bool,
    /// `J del_bar_J = del J` on (0,*)-forms of the full model.
    pub j_reduction: Option<bool>,
    /// `J [ξ₁, u] = [J ξ₁, J u]`, so `J R_B J⁻¹ = del + ad(J ξ₁)`.
    pub j_bracket: Option<bool>,
}

impl ConnectionReport {
    pub fn passed(&self) -> bool {
        self.relations
            && self.reduces_mod_t
            && self.gauge_image_mc
            && self.gauge_conjugation
            && self.j_reduction != Some(false)
            && self.j_bracket != Some(false)
    }
}

type OpSeries = Vec<GradedMap>;

fn op_compose(a: &OpSeries, b: &OpSeries) -> Result<OpSeries> {
    let n = a.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc: Option<GradedMap> = None;
        for i in 0..=k {
            let c = a[i].compose(&b[k - i])?;
            acc = Some(match acc {
                None => c,
                Some(s) => s.add(&c)?,
            });
        }
        out.push(acc.expect("k >= 0"));
    }
    Ok(out)
}

fn op_add(a: &OpSeries, b: &OpSeries) -> Result<OpSeries> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn op_is_zero(a: &OpSeries) -> bool {
    a.iter().all(GradedMap::is_zero)
}

fn op_equal(a: &OpSeries, b: &OpSeries) -> Result<bool> {
    for (x, y) in a.iter().zip(b) {
        if !x.sub(y)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

impl QaDeformation {
    pub fn new(model: &ConnectionModel) -> Result<Self> {
        let complex = QuaternionicComplex::build(model, None)?;
        let qa = complex.lie()?;
        let dol = model.dolbeault();
        let base = match dol.kind() {
            AlgebraKind::Lie => dol.clone(),
            AlgebraKind::Associative => commutator_dgla(dol)?,
        };
        Ok(QaDeformation {
            model: model.clone(),
            complex,
            qa,
            base,
        })
    }

    pub fn complex(&self) -> &QuaternionicComplex {
        &self.complex
    }

    pub fn qa(&self) -> &StructuredAlgebra {
        &self.qa
    }

    pub fn base(&self) -> &StructuredAlgebra {
        &self.base
    }

    /// `X = x ξ₁ + y ξ₂`.
    pub fn assemble(&self, xi1: &Series, xi2: &Series) -> Result<Series> {
        let q = &self.complex;
        let coeffs = xi1
            .coeffs
            .iter()
            .zip(&xi2.coeffs)
            .map(|(a, b)| {
                let ea = q.embed(1, 0, a)?;
                let eb = q.embed(0, 1, b)?;
                Ok(crate::linalg::add_vectors(&ea, &eb))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Series { degree: 1, coeffs })
    }

    /// `(ξ₁, ξ₂)` of a degree-1 element of `qA`.
    pub fn split(&self, x: &Series) -> Result<(Series, Series)> {
        if x.degree != 1 || x.dim() != self.qa.space().dim(1) {
            return Err(Error::DimensionMismatch("element does not live in qA¹".into()));
        }
        let part = |p: i32, q: i32| Series {
            degree: 1,
            coeffs: x.coeffs.iter().map(|v| self.complex.extract(p, q, v)).collect(),
        };
        Ok((part(1, 0), part(0, 1)))
    }

    /// `y b` for a degree-1 element of the base.
    pub fn y_times(&self, b: &Series) -> Result<Series> {
        let zero = Series {
            degree: 1,
            coeffs: vec![zero_vector(self.base.space().dim(1)); b.coeffs.len()],
        };
        self.assemble(&zero, b)
    }

    fn base_map(&self, name: &str) -> Result<&GradedMap> {
        self.base.differential(name)
    }

    pub fn mc_split(&self, x: &Series) -> Result<McSplitReport> {
        let total = mc_check(&self.qa, TOTAL_D, x)?.classical;
        let (xi1, xi2) = self.split(x)?;
        let half = Scalar::from_frac(1, 2);
        let db = self.base_map(DEL_BAR)?;
        let dj = self.base_map(DEL_BAR_J)?;
        let xx = xi1.apply(dj).add(&bracket(&self.base, &xi1, &xi1).scale(&half));
        let yy = xi2.apply(db).add(&bracket(&self.base, &xi2, &xi2).scale(&half));
        let xy = xi1.apply(db).add(&xi2.apply(dj)).add(&bracket(&self.base, &xi1, &xi2));
        let (xx, yy, xy) = (xx.is_zero(), yy.is_zero(), xy.is_zero());
        Ok(McSplitReport {
            total,
            xx,
            yy,
            xy,
            equivalent: total == (xx && yy && xy),
        })
    }

    /// `π_x` (`π_y`) keeps the `x^p` (`y^q`) components, dropping every
    /// mixed or other monomial.
    pub fn evaluation_map(&self, along_x: bool) -> GradedMap {
        let q = &self.complex;
        let mut out = GradedMap::zero(self.qa.space(), self.base.space(), 0);
        for k in self.qa.space().degrees() {
            for i in 0..self.qa.space().dim(k) {
                let (p, qq, j) = q.bidegree_of(k, i);
                let keep = if along_x { qq == 0 } else { p == 0 };
                if keep {
                    out.add_entry(k, i, j, &Scalar::from_int(1));
                }
            }
        }
        out
    }

    pub fn evaluation(&self, x: &Series) -> Result<EvaluationReport> {
        let input_mc = mc_check(&self.qa, TOTAL_D, x)?.classical;
        if !input_mc {
            return Err(Error::Precondition("element is not Maurer-Cartan in qA".into()));
        }
        let px = self.evaluation_map(true);
        let py = self.evaluation_map(false);
        let d = self.qa.differential(TOTAL_D)?;
        Ok(EvaluationReport {
            input_mc,
            pi_x_mc: mc_check(&self.base, DEL_BAR_J, &x.apply(&px))?.classical,
            pi_y_mc: mc_check(&self.base, DEL_BAR, &x.apply(&py))?.classical,
            pi_x_morphism: is_algebra_chain_map(&px, &self.qa, d, &self.base, self.base_map(DEL_BAR_J)?)?,
            pi_y_morphism: is_algebra_chain_map(&py, &self.qa, d, &self.base, self.base_map(DEL_BAR)?)?,
        })
    }

    /// `b ↦ y b` on Maurer–Cartan elements of `(ker del_bar_J, del_bar)`.
    pub fn lift_y(&self, b: &Series) -> Result<LiftYReport> {
        check_mc_element(b)?;
        let dj = self.base_map(DEL_BAR_J)?;
        let in_kernel = b.apply(dj).is_zero();
        let input_mc = mc_check(&self.base, DEL_BAR, b)?.classical;
        let lifted = self.y_times(b)?;
        let lifted_mc = mc_check(&self.qa, TOTAL_D, &lifted)?.classical;
        let roundtrip = lifted.apply(&self.evaluation_map(false)) == *b;
        Ok(LiftYReport {
            in_kernel,
            input_mc,
            lifted_mc,
            roundtrip,
        })
    }

    pub fn tangent_map(&self) -> Result<TangentReport> {
        let hq = CohomologyPresentation::compute(&self.qa, TOTAL_D)?;
        let hb = CohomologyPresentation::compute(&self.base, DEL_BAR)?;
        let hj = CohomologyPresentation::compute(&self.base, DEL_BAR_J)?;
        let fy = CohomologyPresentation::induced_map(&self.evaluation_map(false), &hq, &hb)?;
        let fx = CohomologyPresentation::induced_map(&self.evaluation_map(true), &hq, &hj)?;
        let stacked = fy.block(1).vstack(&fx.block(1));
        let bijective = stacked.is_square() && (stacked.rows() == 0 || stacked.is_invertible());
        Ok(TangentReport {
            h1_qa: hq.dim(1),
            h1_del_bar: hb.dim(1),
            h1_del_bar_j: hj.dim(1),
            bijective,
        })
    }

    /// First-order elements `t x ξ` modulo gauge, against `H¹(del_bar_J)`.
    pub fn first_order(&self) -> Result<FirstOrderReport> {
        let db = self.base_map(DEL_BAR)?;
        let dj = self.base_map(DEL_BAR_J)?;
        let closed = db.block(1).vstack(&dj.block(1)).kernel();
        let gauge0 = db.block(0).kernel();
        let img = gauge0.image_under(&dj.block(0));
        let h1 = CohomologyPresentation::compute(&self.base, DEL_BAR_J)?.dim(1);
        let x_classes = closed.dim() - img.dim();
        Ok(FirstOrderReport {
            x_classes,
            h1_del_bar_j: h1,
            matches: x_classes == h1,
        })
    }

    fn ad(&self, degree: i32, v: &[Scalar]) -> Result<GradedMap> {
        let s = self.base.space();
        let mut m = GradedMap::zero(s, s, degree);
        if is_zero_vector(v) {
            return Ok(m);
        }
        for k in s.degrees() {
            if s.dim(k + degree) == 0 {
                continue;
            }
            m.set_block(k, self.base.left_multiplication(degree, v, k))?;
        }
        Ok(m)
    }

    fn operator(&self, base: &str, xi: &Series) -> Result<OpSeries> {
        let mut out = vec![self.base_map(base)?.clone()];
        for c in xi.coeffs.iter().skip(1) {
            out.push(self.ad(1, c)?);
        }
        Ok(out)
    }

    /// `exp(ad a)` as an operator series.
    fn exp_ad(&self, a: &Series) -> Result<OpSeries> {
        let s = self.base.space();
        let n = a.coeffs.len();
        let id = GradedMap::identity(s);
        let zero = GradedMap::zero(s, s, 0);
        let ad: OpSeries = a.coeffs.iter().map(|c| self.ad(0, c)).collect::<Result<_>>()?;
        let mut term: OpSeries = (0..n).map(|i| if i == 0 { id.clone() } else { zero.clone() }).collect();
        let mut total = term.clone();
        let mut m = 1i64;
        loop {
            term = op_compose(&ad, &term)?
                .into_iter()
                .map(|g| g.scale(&Scalar::from_frac(1, m)))
                .collect();
            if op_is_zero(&term) {
                break;
            }
            total = op_add(&total, &term)?;
            m += 1;
        }
        Ok(total)
    }

    fn relations(&self, p: &OpSeries, r: &OpSeries) -> Result<bool> {
        Ok(op_is_zero(&op_compose(p, p)?)
            && op_is_zero(&op_compose(r, r)?)
            && op_is_zero(&op_add(&op_compose(p, r)?, &op_compose(r, p)?)?))
    }

    /// Connection-operator picture of a Maurer–Cartan element of `qA` and
    /// its gauge class under `a ∈ A⁰ ⊗ m`.
    pub fn connection_correspondence(&self, x: &Series, a: &Series) -> Result<ConnectionReport> {
        if !mc_check(&self.qa, TOTAL_D, x)?.classical {
            return Err(Error::Precondition("element is not Maurer-Cartan in qA".into()));
        }
        if a.degree != 0 || a.coeffs.len() != x.coeffs.len() || a.dim() != self.base.space().dim(0) {
            return Err(Error::DimensionMismatch("gauge element must lie in A⁰ ⊗ m".into()));
        }
        let (xi1, xi2) = self.split(x)?;
        let p = self.operator(DEL_BAR, &xi2)?;
        let r = self.operator(DEL_BAR_J, &xi1)?;
        let relations = self.relations(&p, &r)?;
        let reduces_mod_t = p[0].sub(self.model.del_bar())?.is_zero() && r[0].sub(self.model.del_bar_j())?.is_zero();

        let a_qa = Series {
            degree: 0,
            coeffs: a.coeffs.iter().map(|c| self.complex.embed(0, 0, c)).collect::<Result<_>>()?,
        };
        let x2 = gauge_transform(&self.qa, TOTAL_D, &a_qa, x)?;
        let gauge_image_mc = mc_check(&self.qa, TOTAL_D, &x2)?.classical;
        let (eta1, eta2) = self.split(&x2)?;
        let g = self.exp_ad(a)?;
        let g_inv = self.exp_ad(&a.scale(&Scalar::from_int(-1)))?;
        let conj = |op: &OpSeries| -> Result<OpSeries> { op_compose(&op_compose(&g, op)?, &g_inv) };
        let gauge_conjugation = op_equal(&conj(&p)?, &self.operator(DEL_BAR, &eta2)?)?
            && op_equal(&conj(&r)?, &self.operator(DEL_BAR_J, &eta1)?)?;

        let (j_reduction, j_bracket) = match self.model.full() {
            Some(full) => {
                let (red, br) = self.j_checks(full, &xi1)?;
                (Some(red), Some(br))
            }
            None => (None, None),
        };
        Ok(ConnectionReport {
            order: x.coeffs.len(),
            relations,
            reduces_mod_t,
            gauge_image_mc,
            gauge_conjugation,
            j_reduction,
            j_bracket,
        })
    }

    fn j_checks(&self, full: &StructuredAlgebra, xi1: &Series) -> Result<(bool, bool)> {
        let dol = self.model.dolbeault();
        let j = full.map(full.j_name().expect("checked by ConnectionModel"))?;
        let del = full.map(DEL)?;
        let embed = |k: i32, v: &[Scalar]| -> Result<Vector> {
            let mut out = zero_vector(full.space().dim(k));
            for (i, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    out[full.space().locate_or_err(dol.space().label(k, i))?.1] = c.clone();
                }
            }
            Ok(out)
        };
        let sign = |a: i32, b: i32| if (a * b) % 2 == 0 { Scalar::from_int(1) } else { Scalar::from_int(-1) };
        let full_bracket = |da: i32, x: &[Scalar], db: i32, y: &[Scalar]| -> Vector {
            let xy = full.multiply(da, x, db, y);
            let yx = full.multiply(db, y, da, x);
            crate::linalg::sub_vectors(&xy, &crate::linalg::scale_vector(&sign(da, db), &yx))
        };
        let mut reduction = true;
        let mut bracket_ok = true;
        let dj = self.model.del_bar_j();
        for k in dol.space().degrees() {
            for i in 0..dol.space().dim(k) {
                let u = dol.space().basis_vector(k, i);
                let ju = j.apply(k, &embed(k, &u)?);
                if j.apply(k + 1, &embed(k + 1, &dj.apply(k, &u))?) != del.apply(k, &ju) {
                    reduction = false;
                }
                for c in xi1.coeffs.iter().skip(1) {
                    if is_zero_vector(c) {
                        continue;
                    }
                    let jc = j.apply(1, &embed(1, c)?);
                    let lhs = j.apply(k + 1, &embed(k + 1, &self.base.multiply(1, c, k, &u))?);
                    if lhs != full_bracket(1, &jc, k, &ju) {
                        bracket_ok = false;
                    }
                }
            }
        }
        Ok((reduction, bracket_ok))
    }
}

/// `dzb1 ⊗ M₁ + dzb2 ⊗ M₂` in the torus Dolbeault model of rank `r`.
pub fn torus_form(base: &StructuredAlgebra, r: usize, m1: &Matrix, m2: &Matrix) -> Result<Vector> {
    let s = base.space();
    let mut v = zero_vector(s.dim(1));
    for (g, m) in [("dzb1", m1), ("dzb2", m2)] {
        for i in 0..r {
            for j in 0..r {
                let label = if r == 1 { g.to_string() } else { format!("{g}|E{}{}", i + 1, j + 1) };
                v[s.locate_or_err(&label)?.1] = m.get(i, j).clone();
            }
        }
    }
    Ok(v)
}

/// `1 ⊗ M` in degree 0 of the torus Dolbeault model of rank `r`.
pub fn torus_function(base: &StructuredAlgebra, r: usize, m: &Matrix) -> Result<Vector> {
    let s = base.space();
    let mut v = zero_vector(s.dim(0));
    for i in 0..r {
        for j in 0..r {
            let label = if r == 1 { "1".to_string() } else { format!("1|E{}{}", i + 1, j + 1) };
            v[s.locate_or_err(&label)?.1] = m.get(i, j).clone();
        }
    }
    Ok(v)
}

/// `c₀ + c₁ K + c₂ K²`.
pub fn matrix_polynomial(k: &Matrix, c: &[Scalar; 3]) -> Matrix {
    let n = k.rows();
    Matrix::identity(n)
        .scale(&c[0])
        .add(&k.scale(&c[1]))
        .add(&k.mul(k).scale(&c[2]))
}

/// Series with the given per-order coefficients from `1` on.
pub fn series_from_orders(degree: i32, dim: usize, ring: TruncatedRing, orders: Vec<Vector>) -> Result<Series> {
    let terms: Vec<(usize, Vector)> = orders.into_iter().enumerate().map(|(i, v)| (i + 1, v)).collect();
    Series::in_ideal(degree, dim, ring, &terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{connection_from_bicomplex, square_model, torus_model};

    fn int(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn commuting_element(qd: &QaDeformation, ring: TruncatedRing) -> Series {
        let base = qd.base();
        let k = Matrix::from_i64(2, 2, &[1, 2, 0, -1]);
        let poly = |a: i64, b: i64| matrix_polynomial(&k, &[int(a), int(b), int(0)]);
        let n1 = base.space().dim(1);
        let xi1 = series_from_orders(1, n1, ring, vec![torus_form(base, 2, &poly(1, 1), &poly(0, 2)).unwrap()]).unwrap();
        let xi2 = series_from_orders(
            1,
            n1,
            ring,
            vec![
                torus_form(base, 2, &poly(2, 0), &poly(1, -1)).unwrap(),
                torus_form(base, 2, &poly(0, 1), &poly(3, 0)).unwrap(),
            ],
        )
        .unwrap();
        qd.assemble(&xi1, &xi2).unwrap()
    }

    #[test]
    fn torus_rank_two_correspondence() {
        let qd = QaDeformation::new(&torus_model(2).unwrap()).unwrap();
        let ring = TruncatedRing::new(3).unwrap();
        let x = commuting_element(&qd, ring);
        let split = qd.mc_split(&x).unwrap();
        assert!(split.total && split.xx && split.yy && split.xy);
        let e = qd.evaluation(&x).unwrap();
        assert!(e.pi_x_mc && e.pi_y_mc && e.pi_x_morphism && e.pi_y_morphism);
        let a_mat = Matrix::from_i64(2, 2, &[0, 1, 1, 0]);
        let a = series_from_orders(0, 4, ring, vec![torus_function(qd.base(), 2, &a_mat).unwrap()]).unwrap();
        let c = qd.connection_correspondence(&x, &a).unwrap();
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.j_reduction, Some(true));
    }

    #[test]
    fn non_commuting_split() {
        let qd = QaDeformation::new(&torus_model(2).unwrap()).unwrap();
        let ring = TruncatedRing::new(3).unwrap();
        let base = qd.base();
        let e12 = Matrix::from_i64(2, 2, &[0, 1, 0, 0]);
        let e21 = Matrix::from_i64(2, 2, &[0, 0, 1, 0]);
        let z = Matrix::zeros(2, 2);
        let n1 = base.space().dim(1);
        // ξ₁ = dzb1 ⊗ E12, ξ₂ = dzb2 ⊗ E21: only the mixed component fails
        let xi1 = series_from_orders(1, n1, ring, vec![torus_form(base, 2, &e12, &z).unwrap()]).unwrap();
        let xi2 = series_from_orders(1, n1, ring, vec![torus_form(base, 2, &z, &e21).unwrap()]).unwrap();
        let s = qd.mc_split(&qd.assemble(&xi1, &xi2).unwrap()).unwrap();
        assert_eq!((s.total, s.xx, s.yy, s.xy), (false, true, true, false));
        assert!(s.equivalent);
    }

    #[test]
    fn tangent_and_first_order() {
        let qd = QaDeformation::new(&torus_model(1).unwrap()).unwrap();
        let t = qd.tangent_map().unwrap();
        assert_eq!((t.h1_qa, t.h1_del_bar, t.h1_del_bar_j), (4, 2, 2));
        assert!(t.bijective);
        assert!(qd.first_order().unwrap().matches);

        let m = connection_from_bicomplex(&square_model().unwrap()).unwrap();
        let qd = QaDeformation::new(&m).unwrap();
        let f = qd.first_order().unwrap();
        assert!(f.matches, "{f:?}");
    }

    #[test]
    fn lift_y_on_torus() {
        let qd = QaDeformation::new(&torus_model(1).unwrap()).unwrap();
        let ring = TruncatedRing::new(4).unwrap();
        let b = series_from_orders(1, 2, ring, vec![vec![int(1), int(0)], vec![int(0), int(5)]]).unwrap();
        let r = qd.lift_y(&b).unwrap();
        assert!(r.in_kernel && r.input_mc && r.lifted_mc && r.roundtrip);
    }
}
