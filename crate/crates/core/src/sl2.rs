//! sl(2)-modules, weight decomposition, the low-weight ideal and the
//! quotient `A₊`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{
    graded_component, quotient_algebra, GradedMap, GradedSpace, GradedSubspace, Quotient,
    StructuredAlgebra,
};
use crate::linalg::{Matrix, Scalar, Subspace, Vector};

/// A graded space with degree-preserving `e`, `f`, `h` satisfying the sl(2)
/// relations, `h` diagonalizable with integer eigenvalues.
#[derive(Clone, Debug)]
pub struct Sl2Module {
    space: GradedSpace,
    e: GradedMap,
    f: GradedMap,
    h: GradedMap,
}

impl Sl2Module {
    pub fn new(space: GradedSpace, e: GradedMap, f: GradedMap, h: GradedMap) -> Result<Self> {
        for (name, m) in [("e", &e), ("f", &f), ("h", &h)] {
            if m.shift() != 0 {
                return Err(Error::WrongShift {
                    name: name.into(),
                    shift: m.shift(),
                    expected: 0,
                });
            }
        }
        let two = Scalar::from_int(2);
        let relations = [
            ("[h,e] = 2e", GradedMap::graded_commutator(&h, &e)?.sub(&e.scale(&two))?),
            ("[h,f] = -2f", GradedMap::graded_commutator(&h, &f)?.add(&f.scale(&two))?),
            ("[e,f] = h", GradedMap::graded_commutator(&e, &f)?.sub(&h)?),
        ];
        for (rel, m) in relations {
            if let Some((k, j)) = m.first_nonzero() {
                return Err(Error::Structural(format!(
                    "{rel} fails on {} (degree {k})",
                    space.label(k, j)
                )));
            }
        }
        for k in space.degrees() {
            integral_spectrum(&h.block(k), k)?;
        }
        Ok(Sl2Module { space, e, f, h })
    }

    pub fn from_algebra(a: &StructuredAlgebra) -> Result<Self> {
        let n = a
            .sl2_names()
            .ok_or_else(|| Error::Invalid("algebra has no sl2 operators".into()))?;
        Sl2Module::new(
            a.space().clone(),
            a.map(&n.e)?.clone(),
            a.map(&n.f)?.clone(),
            a.map(&n.h)?.clone(),
        )
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn e(&self) -> &GradedMap {
        &self.e
    }

    pub fn f(&self) -> &GradedMap {
        &self.f
    }

    pub fn h(&self) -> &GradedMap {
        &self.h
    }
}

/// Characteristic polynomial `det(t − m)`, coefficients from constant term
/// up, by the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(m: &Matrix) -> Vec<Scalar> {
    let n = m.rows();
    let mut c = vec![Scalar::zero(); n + 1];
    c[n] = Scalar::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        mk = m.mul(&mk).add(&Matrix::identity(n).scale(&c[n - k + 1]));
        let am = m.mul(&mk);
        let tr: Scalar = (0..n).map(|i| am.get(i, i).clone()).sum();
        c[n - k] = -tr / Scalar::from_int(k as i64);
    }
    c
}

fn eval_poly(p: &[Scalar], t: &Scalar) -> Scalar {
    p.iter().rev().fold(Scalar::zero(), |acc, c| acc * t + c)
}

/// Divides by `(t − r)`, assuming `r` is a root.
fn deflate(p: &[Scalar], r: &Scalar) -> Vec<Scalar> {
    let n = p.len() - 1;
    let mut q = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + &(&carry * r);
        q[i] = carry.clone();
    }
    q
}

fn poly_string(p: &[Scalar]) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| match i {
            0 => format!("({c})"),
            1 => format!("({c})t"),
            _ => format!("({c})t^{i}"),
        })
        .collect();
    terms.join(" + ")
}

/// Integer eigenvalues with multiplicities, or the reason they do not
/// exhaust a diagonalizable spectrum.
pub fn integral_spectrum(m: &Matrix, degree: i32) -> Result<BTreeMap<i64, usize>> {
    let n = m.rows();
    let bound = (0..n)
        .map(|i| m.row(i).iter().map(Scalar::approx_abs).sum::<f64>())
        .fold(0.0, f64::max)
        .ceil() as i64
        + 1;
    let mut p = characteristic_polynomial(m);
    let mut roots = BTreeMap::new();
    for w in -bound..=bound {
        let ws = Scalar::from_int(w);
        while p.len() > 1 && eval_poly(&p, &ws).is_zero() {
            p = deflate(&p, &ws);
            *roots.entry(w).or_insert(0) += 1;
        }
    }
    if p.len() > 1 {
        return Err(Error::NonIntegralSpectrum {
            degree,
            detail: format!("eigenvalues are roots of {}", poly_string(&p)),
        });
    }
    for (&w, &alg) in &roots {
        let geo = m.sub(&Matrix::identity(n).scale(&Scalar::from_int(w))).kernel().dim();
        if geo != alg {
            return Err(Error::NonIntegralSpectrum {
                degree,
                detail: format!("eigenvalue {w} is not semisimple ({geo} of {alg})"),
            });
        }
    }
    Ok(roots)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightComponent {
    pub weight: i64,
    pub multiplicity: usize,
    #[serde(skip)]
    pub highest_weight_vectors: Subspace,
    #[serde(skip)]
    pub isotypic: Subspace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeDecomposition {
    pub degree: i32,
    pub dim: usize,
    pub components: Vec<WeightComponent>,
    /// `Σ multiplicity · (weight + 1) = dim`
    pub dimension_identity: bool,
    /// `f^j v`, `j <= weight`, over highest-weight vectors `v` span the degree.
    pub spans: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotypicDecomposition {
    pub degrees: Vec<DegreeDecomposition>,
}

impl IsotypicDecomposition {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.dimension_identity && d.spans)
    }

    pub fn degree(&self, k: i32) -> Option<&DegreeDecomposition> {
        self.degrees.iter().find(|d| d.degree == k)
    }

    /// Multiplicities summed over degrees.
    pub fn multiplicities(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for d in &self.degrees {
            for c in &d.components {
                *out.entry(c.weight).or_insert(0) += c.multiplicity;
            }
        }
        out
    }
}

pub fn weight_decomposition(m: &Sl2Module) -> Result<IsotypicDecomposition> {
    let mut degrees = Vec::new();
    for k in m.space.degrees() {
        let n = m.space.dim(k);
        let (e, f, h) = (m.e.block(k), m.f.block(k), m.h.block(k));
        let spectrum = integral_spectrum(&h, k)?;
        let ker_e = e.kernel();
        let mut components = Vec::new();
        let mut all = Vec::new();
        for &w in spectrum.keys().filter(|&&w| w >= 0) {
            let eig = h.sub(&Matrix::identity(n).scale(&Scalar::from_int(w))).kernel();
            let hw = ker_e.intersect(&eig)?;
            if hw.is_zero() {
                continue;
            }
            let mut span = Vec::new();
            for v in hw.basis_vectors() {
                let mut cur = v;
                for _ in 0..=w {
                    span.push(cur.clone());
                    cur = f.mul_vec(&cur);
                }
            }
            all.extend(span.iter().cloned());
            components.push(WeightComponent {
                weight: w,
                multiplicity: hw.dim(),
                highest_weight_vectors: hw,
                isotypic: Subspace::span(n, &span),
            });
        }
        let total: usize = components
            .iter()
            .map(|c| c.multiplicity * (c.weight as usize + 1))
            .sum();
        degrees.push(DegreeDecomposition {
            degree: k,
            dim: n,
            dimension_identity: total == n,
            spans: Subspace::span(n, &all).dim() == n,
            components,
        });
    }
    Ok(IsotypicDecomposition { degrees })
}

/// Smallest graded two-sided ideal containing the isotypic components of
/// weight `< k` in each degree `k`.
pub fn low_weight_ideal(a: &StructuredAlgebra) -> Result<GradedSubspace> {
    let m = Sl2Module::from_algebra(a)?;
    let dec = weight_decomposition(&m)?;
    let space = a.space();
    let mut ideal: GradedSubspace = BTreeMap::new();
    for d in &dec.degrees {
        let gens: Vec<Vector> = d
            .components
            .iter()
            .filter(|c| c.weight < d.degree as i64)
            .flat_map(|c| c.isotypic.basis_vectors())
            .collect();
        ideal.insert(d.degree, Subspace::span(d.dim, &gens));
    }
    for _ in 0..=space.total_dim() {
        let mut next = ideal.clone();
        for (&k, s) in &ideal {
            for v in s.basis_vectors() {
                for l in space.degrees() {
                    let t = k + l;
                    if space.dim(t) == 0 {
                        continue;
                    }
                    let mut new = Vec::new();
                    for j in 0..space.dim(l) {
                        let b = space.basis_vector(l, j);
                        new.push(a.multiply(l, &b, k, &v));
                        new.push(a.multiply(k, &v, l, &b));
                    }
                    let cur = graded_component(&next, space, t);
                    next.insert(t, cur.sum(&Subspace::span(space.dim(t), &new))?);
                }
            }
        }
        let stable = next
            .iter()
            .all(|(k, s)| graded_component(&ideal, space, *k).dim() == s.dim());
        if stable {
            return Ok(ideal);
        }
        ideal = next;
    }
    Err(Error::Internal("ideal closure did not stabilize".into()))
}

#[derive(Clone, Debug)]
pub struct PlusQuotient {
    pub ideal: GradedSubspace,
    pub quotient: Quotient,
    /// The weight-`k` part of degree `k` meets the ideal trivially.
    pub top_weight_embeds: bool,
}

impl PlusQuotient {
    pub fn ideal_dims(&self, space: &GradedSpace) -> BTreeMap<i32, usize> {
        space
            .degrees()
            .map(|k| (k, graded_component(&self.ideal, space, k).dim()))
            .collect()
    }

    pub fn algebra(&self) -> &StructuredAlgebra {
        &self.quotient.algebra
    }
}

/// `A / ideal`, requiring every differential and the sl(2)-operators to
/// preserve the ideal.
pub fn plus_quotient(a: &StructuredAlgebra, ideal: &GradedSubspace) -> Result<PlusQuotient> {
    let names = a
        .sl2_names()
        .ok_or_else(|| Error::Invalid("algebra has no sl2 operators".into()))?;
    let mut required: Vec<String> = a.differential_names();
    required.extend([names.e.clone(), names.f.clone(), names.h.clone()]);
    let req: Vec<&str> = required.iter().map(String::as_str).collect();
    let quotient = quotient_algebra(a, ideal, &req)?;
    let dec = weight_decomposition(&Sl2Module::from_algebra(a)?)?;
    let mut top_weight_embeds = true;
    for d in &dec.degrees {
        let i = graded_component(ideal, a.space(), d.degree);
        for c in d.components.iter().filter(|c| c.weight == d.degree as i64) {
            if !c.isotypic.intersect(&i)?.is_zero() {
                top_weight_embeds = false;
            }
        }
    }
    Ok(PlusQuotient {
        ideal: ideal.clone(),
        quotient,
        top_weight_embeds,
    })
}

/// Dimensions of the `h`-eigenspaces of eigenvalue `p − q` in degree
/// `p + q`, `p, q >= 0`.
pub fn bigraded_dims(a: &StructuredAlgebra) -> Result<BTreeMap<(i32, i32), usize>> {
    let names = a
        .sl2_names()
        .ok_or_else(|| Error::Invalid("algebra has no sl2 operators".into()))?;
    let h = a.map(&names.h)?;
    let mut out = BTreeMap::new();
    for k in a.space().degrees().filter(|&k| k >= 0) {
        let n = a.space().dim(k);
        for p in 0..=k {
            let w = Scalar::from_int((2 * p - k) as i64);
            let dim = h.block(k).sub(&Matrix::identity(n).scale(&w)).kernel().dim();
            out.insert((p, k - p), dim);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::torus_full_base;

    fn module(e: &[i64], f: &[i64], h: &[i64], n: usize) -> Sl2Module {
        let space = GradedSpace::new([(0, (0..n).map(|i| format!("v{i}")).collect::<Vec<_>>())]).unwrap();
        let mk = |x: &[i64]| {
            let mut g = GradedMap::zero(&space, &space, 0);
            g.set_block(0, Matrix::from_i64(n, n, x)).unwrap();
            g
        };
        Sl2Module::new(space.clone(), mk(e), mk(f), mk(h)).unwrap()
    }

    #[test]
    fn defining_representation() {
        let m = module(&[0, 1, 0, 0], &[0, 0, 1, 0], &[1, 0, 0, -1], 2);
        let d = weight_decomposition(&m).unwrap();
        assert!(d.passed());
        assert_eq!(d.multiplicities(), BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn tensor_square_clebsch_gordan() {
        let v = [[0i64, 1], [0, 0]];
        let fv = [[0i64, 0], [1, 0]];
        let hv = [[1i64, 0], [0, -1]];
        // x ⊗ 1 + 1 ⊗ x on the 4-dim tensor square
        let kron_sum = |x: [[i64; 2]; 2]| -> Vec<i64> {
            let mut out = vec![0; 16];
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        for l in 0..2 {
                            let mut c = 0;
                            if j == l {
                                c += x[i][k];
                            }
                            if i == k {
                                c += x[j][l];
                            }
                            out[(2 * i + j) * 4 + (2 * k + l)] = c;
                        }
                    }
                }
            }
            out
        };
        let m = module(&kron_sum(v), &kron_sum(fv), &kron_sum(hv), 4);
        let d = weight_decomposition(&m).unwrap();
        assert!(d.passed());
        assert_eq!(d.multiplicities(), BTreeMap::from([(0, 1), (2, 1)]));
    }

    #[test]
    fn trivial_action() {
        let m = module(&[0; 9], &[0; 9], &[0; 9], 3);
        let d = weight_decomposition(&m).unwrap();
        assert_eq!(d.multiplicities(), BTreeMap::from([(0, 3)]));
    }

    #[test]
    fn non_integral_spectrum_is_rejected() {
        let space = GradedSpace::new([(0, vec!["a", "b"])]).unwrap();
        let z = GradedMap::zero(&space, &space, 0);
        let mut h = z.clone();
        h.set_block(0, Matrix::from_i64(2, 2, &[0, -1, 1, 0])).unwrap();
        let err = integral_spectrum(&h.block(0), 0).unwrap_err();
        assert!(matches!(err, Error::NonIntegralSpectrum { .. }));
        let _ = Sl2Module::new(space, z.clone(), z.clone(), h).unwrap_err();
    }

    #[test]
    fn torus_ideal_and_quotient() {
        let a = torus_full_base().unwrap();
        let i = low_weight_ideal(&a).unwrap();
        let p = plus_quotient(&a, &i).unwrap();
        let dims: Vec<usize> = p.ideal_dims(a.space()).into_values().collect();
        assert_eq!(dims, vec![0, 0, 3, 4, 1]);
        assert_eq!(p.algebra().space().dims().into_values().collect::<Vec<_>>(), vec![1, 4, 3]);
        assert!(p.top_weight_embeds);
        let bd = bigraded_dims(p.algebra()).unwrap();
        for ((pp, q), d) in bd {
            let expected = [1, 2, 1][(pp + q) as usize];
            assert_eq!(d, expected, "({pp},{q})");
        }
    }

    #[test]
    fn trivial_ideals() {
        let a = torus_full_base().unwrap();
        let zero: GradedSubspace = a.space().degrees().map(|k| (k, Subspace::zero(a.space().dim(k)))).collect();
        let p = plus_quotient(&a, &zero).unwrap();
        assert_eq!(p.algebra().space().dims(), a.space().dims());
        let top: GradedSubspace = a
            .space()
            .degrees()
            .map(|k| (k, if k == 0 { Subspace::zero(1) } else { Subspace::full(a.space().dim(k)) }))
            .collect();
        let p = plus_quotient(&a, &top).unwrap();
        assert_eq!(p.algebra().space().dims(), BTreeMap::from([(0, 1)]));
    }
}
