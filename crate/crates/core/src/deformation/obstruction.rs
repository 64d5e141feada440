use serde::Serialize;

use crate::dgms::FormalityZigzag;
use crate::error::{Error, Result};
use crate::graded::{CohomologyPresentation, StructuredAlgebra};
use crate::linalg::{add_vectors, is_zero_vector, scale_vector, unit_vector, Scalar, Vector};

use super::series::{mc_check, Series, TruncatedRing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionEntry {
    pub i: usize,
    pub j: usize,
    /// Class of `−½[ξ_i, ξ_j]` in `H²`.
    pub class: Vec<Scalar>,
}

/// Tangent space `H¹` and the quadratic obstruction map into `H²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentObstruction {
    pub differential: String,
    pub tangent_dim: usize,
    pub obstruction_space_dim: usize,
    /// Nonzero entries only, `i <= j`, in the basis of representatives.
    pub table: Vec<ObstructionEntry>,
}

impl TangentObstruction {
    pub fn vanishes(&self) -> bool {
        self.table.is_empty()
    }

    /// Obstruction of `Σ c_i ξ_i`, by bilinearity.
    pub fn evaluate(&self, coords: &[Scalar]) -> Vector {
        let mut out = vec![Scalar::from_int(0); self.obstruction_space_dim];
        for e in &self.table {
            let mut c = &coords[e.i] * &coords[e.j];
            if e.i != e.j {
                c = &c * &Scalar::from_int(2);
            }
            out = add_vectors(&out, &scale_vector(&c, &e.class));
        }
        out
    }
}

fn half_bracket_class(
    l: &StructuredAlgebra,
    h: &CohomologyPresentation,
    x: &[Scalar],
    y: &[Scalar],
) -> Result<Vector> {
    let b = scale_vector(&Scalar::from_frac(-1, 2), &l.multiply(1, x, 1, y));
    h.class_of(2, &b)
        .ok_or_else(|| Error::Internal("bracket of cocycles is not closed".into()))
}

pub fn tangent_and_obstruction(l: &StructuredAlgebra, d: &str) -> Result<TangentObstruction> {
    let h = CohomologyPresentation::compute(l, d)?;
    let reps = h.representatives(1).to_vec();
    let mut table = Vec::new();
    for i in 0..reps.len() {
        for j in i..reps.len() {
            let class = half_bracket_class(l, &h, &reps[i], &reps[j])?;
            if !is_zero_vector(&class) {
                table.push(ObstructionEntry { i, j, class });
            }
        }
    }
    Ok(TangentObstruction {
        differential: d.to_string(),
        tangent_dim: reps.len(),
        obstruction_space_dim: h.dim(2),
        table,
    })
}

/// `x₂` with `d x₂ = −½[x₁, x₁]`, if any.
pub fn lift_second_order(l: &StructuredAlgebra, d: &str, x1: &[Scalar]) -> Result<Option<Vector>> {
    let dm = l.differential(d)?;
    let rhs = scale_vector(&Scalar::from_frac(-1, 2), &l.multiply(1, x1, 1, x1));
    let m = dm.block(1);
    Ok(m.solve(&rhs).ok().map(|s| s.particular))
}

/// Obstruction table computed on `L` and on `H(d1)` with its induced bracket,
/// compared through `ψ = ρ_* ι_*⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionTransport {
    pub on_source: TangentObstruction,
    pub on_cohomology: TangentObstruction,
    pub agree: bool,
}

pub fn obstruction_transport(z: &FormalityZigzag) -> Result<ObstructionTransport> {
    if !z.certified() {
        return Err(Error::Precondition("formality zig-zag is not certified".into()));
    }
    let l = &z.source;
    let h_l = CohomologyPresentation::compute(l, &z.d0)?;
    let on_source = tangent_and_obstruction(l, &z.d0)?;
    let on_cohomology = tangent_and_obstruction(&z.h, &z.d0)?;
    let h_h = CohomologyPresentation::compute(&z.h, &z.d0)?;
    let psi = |k: i32| -> Result<crate::linalg::Matrix> {
        let inv = z
            .iota_star
            .block(k)
            .inverse()
            .ok_or_else(|| Error::Internal("ι_* is not invertible".into()))?;
        Ok(z.rho_star.block(k).mul(&inv))
    };
    let psi1 = psi(1)?;
    let psi2 = psi(2)?;
    let n1 = on_source.tangent_dim;
    // ψ₂(o_L(ξ_i, ξ_j)) = o_H(ψ₁ξ_i, ψ₁ξ_j) for all basis pairs
    let mut agree = n1 == on_cohomology.tangent_dim && on_source.obstruction_space_dim == on_cohomology.obstruction_space_dim;
    if agree {
        let reps_h: Vec<Vector> = (0..n1)
            .map(|i| h_h.representative(1, &psi1.mul_vec(&unit_vector(n1, i))))
            .collect();
        let reps_l = h_l.representatives(1);
        'outer: for i in 0..n1 {
            for j in i..n1 {
                let lhs = psi2.mul_vec(&half_bracket_class(l, &h_l, &reps_l[i], &reps_l[j])?);
                let rhs = half_bracket_class(&z.h, &h_h, &reps_h[i], &reps_h[j])?;
                if lhs != rhs {
                    agree = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(ObstructionTransport {
        on_source,
        on_cohomology,
        agree,
    })
}

/// Lift of a class `ξ ∈ H¹_{d0}(L)` to a Maurer–Cartan element over
/// `F[t]/(t^N)` through the strong `d0d1`-lemma: `x₁ ∈ ker d0 ∩ ker d1`,
/// `x_n = d1 z_n` with `d0 d1 z_n = −½ Σ [x_i, x_j]`. `None` when the second
/// order is obstructed.
pub fn dgms_lift(z: &FormalityZigzag, class: &[Scalar], ring: TruncatedRing) -> Result<Option<Series>> {
    let l = &z.source;
    let d0 = l.differential(&z.d0)?;
    let d1 = l.differential(&z.d1)?;
    let h_a1 = CohomologyPresentation::compute(&z.a1, &z.d0)?;
    let inv = z
        .iota_star
        .block(1)
        .inverse()
        .ok_or_else(|| Error::Internal("ι_* is not invertible in degree 1".into()))?;
    let x1 = z.inclusion.apply(1, &h_a1.representative(1, &inv.mul_vec(class)));
    let n = l.space().dim(1);
    let mut x = Series::in_ideal(1, n, ring, &[(1, x1)])?;
    let dd = d0.block(1).mul(&d1.block(0));
    let d1_0 = d1.block(0);
    let half = Scalar::from_frac(-1, 2);
    for order in 2..ring.order() {
        let mut r = vec![Scalar::from_int(0); l.space().dim(2)];
        for i in 1..order {
            r = add_vectors(&r, &l.multiply(1, &x.coeffs[i], 1, &x.coeffs[order - i]));
        }
        let r = scale_vector(&half, &r);
        match dd.solve(&r) {
            Ok(s) => x.coeffs[order] = d1_0.mul_vec(&s.particular),
            Err(_) if order == 2 => return Ok(None),
            Err(_) => {
                return Err(Error::Internal(format!(
                    "order-{order} residual escapes im {}{}",
                    z.d0, z.d1
                )))
            }
        }
    }
    Ok(Some(x))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticitySample {
    pub class: Vec<Scalar>,
    pub bracket_class_zero: bool,
    /// Truncation order reached by a verified Maurer–Cartan lift.
    pub lifted_to: Option<usize>,
    /// No `x₂` exists for the chosen representative.
    pub second_order_obstructed: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticityReport {
    pub order: usize,
    pub samples: Vec<QuadraticitySample>,
    pub passed: bool,
}

/// Unobstructed classes lift to order `N`, obstructed ones fail at order 3.
/// Refuses without a certified zig-zag.
pub fn quadraticity_probe(
    certificate: Option<&FormalityZigzag>,
    samples: &[Vector],
    ring: TruncatedRing,
) -> Result<QuadraticityReport> {
    let z = certificate.ok_or_else(|| {
        Error::Precondition("quadraticity probe needs a formality certificate".into())
    })?;
    if !z.certified() {
        return Err(Error::Precondition("formality zig-zag is not certified".into()));
    }
    let l = &z.source;
    let h = CohomologyPresentation::compute(l, &z.d0)?;
    let mut out = Vec::new();
    for class in samples {
        if class.len() != h.dim(1) {
            return Err(Error::DimensionMismatch(format!(
                "class of length {} in H¹ of dimension {}",
                class.len(),
                h.dim(1)
            )));
        }
        let rep = h.representative(1, class);
        let bracket_class_zero = is_zero_vector(&half_bracket_class(l, &h, &rep, &rep)?);
        let mut lifted_to = None;
        let mut second_order_obstructed = false;
        if bracket_class_zero {
            if let Some(x) = dgms_lift(z, class, ring)? {
                if mc_check(l, &z.d0, &x)?.classical {
                    lifted_to = Some(ring.order());
                }
            }
        } else {
            second_order_obstructed = lift_second_order(l, &z.d0, &rep)?.is_none();
        }
        let consistent = if bracket_class_zero {
            lifted_to.is_some()
        } else {
            second_order_obstructed
        };
        out.push(QuadraticitySample {
            class: class.clone(),
            bracket_class_zero,
            lifted_to,
            second_order_obstructed,
            consistent,
        });
    }
    Ok(QuadraticityReport {
        order: ring.order(),
        passed: out.iter().all(|s| s.consistent),
        samples: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgms::{formality_zigzag, Bicomplex};
    use crate::models::{cone_model, squares_cone_lie, D, D1};

    fn int(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn cone_obstruction_table() {
        let l = cone_model().unwrap();
        let t = tangent_and_obstruction(&l, D).unwrap();
        assert_eq!((t.tangent_dim, t.obstruction_space_dim), (2, 1));
        // −½[u,u] = −½ w, −½[v,v] = ½ w, [u,v] = 0
        assert_eq!(t.evaluate(&[int(1), int(0)]), vec![Scalar::from_frac(-1, 2)]);
        assert_eq!(t.evaluate(&[int(0), int(1)]), vec![Scalar::from_frac(1, 2)]);
        assert_eq!(t.evaluate(&[int(1), int(1)]), vec![int(0)]);
        assert_eq!(t.evaluate(&[int(2), int(-2)]), vec![int(0)]);
    }

    #[test]
    fn cone_quadraticity() {
        let l = cone_model().unwrap();
        let z = formality_zigzag(&Bicomplex::new(l, D, D1).unwrap()).unwrap();
        let samples = vec![
            vec![int(1), int(1)],
            vec![int(1), int(-1)],
            vec![int(1), int(0)],
            vec![int(2), int(1)],
        ];
        let r = quadraticity_probe(Some(&z), &samples, TruncatedRing::new(6).unwrap()).unwrap();
        assert!(r.passed);
        let lifted: Vec<bool> = r.samples.iter().map(|s| s.lifted_to == Some(6)).collect();
        assert_eq!(lifted, vec![true, true, false, false]);
        assert!(r.samples[2].second_order_obstructed);
    }

    #[test]
    fn probe_requires_certificate() {
        let err = quadraticity_probe(None, &[], TruncatedRing::dual()).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn transport_through_zigzag() {
        for seed in [1, 2, 3] {
            let b = squares_cone_lie(seed).unwrap();
            let z = formality_zigzag(&b).unwrap();
            let t = obstruction_transport(&z).unwrap();
            assert!(t.agree);
            assert!(!t.on_source.vanishes());
            assert_eq!(t.on_source.tangent_dim, t.on_cohomology.tangent_dim);
            let h1 = t.on_source.tangent_dim;
            let samples: Vec<Vector> = (0..h1).map(|i| unit_vector(h1, i)).collect();
            let r = quadraticity_probe(Some(&z), &samples, TruncatedRing::new(5).unwrap()).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.samples.iter().any(|s| s.lifted_to == Some(5)));
            assert!(r.samples.iter().any(|s| s.second_order_obstructed));
        }
    }
}
