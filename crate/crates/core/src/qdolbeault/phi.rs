use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{GradedMap, StructuredAlgebra};
use crate::linalg::{axpy, scale_vector, unit_vector, zero_vector, Matrix, Scalar, Vector};
use crate::models::factor_monomial;
use crate::sl2::{low_weight_ideal, plus_quotient, PlusQuotient};

use super::complex::QuaternionicComplex;
use super::connection::{autoduality_check, ConnectionModel, DEL, DEL_BAR};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiCertificate {
    pub qa_dims: BTreeMap<i32, usize>,
    pub plus_dims: BTreeMap<i32, usize>,
    pub degree0_identity: bool,
    pub phi_phi_inv_identity: bool,
    pub phi_inv_phi_identity: bool,
    /// `φ(x^p y^q u)` lies in the `h`-eigenspace of eigenvalue `p − q`.
    pub bidegree_preserving: bool,
    /// `φ ∘ x del_bar_J = del₊ ∘ φ`
    pub intertwines_horizontal: bool,
    /// `φ ∘ y del_bar = del_bar₊ ∘ φ`
    pub intertwines_vertical: bool,
    pub witness: Option<String>,
}

impl PhiCertificate {
    pub fn passed(&self) -> bool {
        self.degree0_identity
            && self.phi_phi_inv_identity
            && self.phi_inv_phi_identity
            && self.bidegree_preserving
            && self.intertwines_horizontal
            && self.intertwines_vertical
    }
}

/// `φ: qA → A₊` and its inverse as per-degree matrices in the bases of the
/// quaternionic complex and of the quotient.
#[derive(Clone, Debug)]
pub struct PhiIsomorphism {
    pub complex: QuaternionicComplex,
    pub plus: PlusQuotient,
    pub phi: BTreeMap<i32, Matrix>,
    pub phi_inv: BTreeMap<i32, Matrix>,
    pub certificate: PhiCertificate,
}

struct Context<'a> {
    dol: &'a StructuredAlgebra,
    full: &'a StructuredAlgebra,
    j1: Matrix,
    j1_inv: Matrix,
    /// Full-model index of each Dolbeault basis element, per degree.
    dol_in_full: BTreeMap<i32, Vec<usize>>,
}

impl Context<'_> {
    fn dol_to_full(&self, k: i32, v: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.full.space().dim(k));
        for (i, c) in v.iter().enumerate() {
            out[self.dol_in_full[&k][i]] = c.clone();
        }
        out
    }

    fn full_to_dol(&self, k: i32, v: &[Scalar]) -> Result<Vector> {
        let idx = &self.dol_in_full[&k];
        let mut out = zero_vector(idx.len());
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let pos = idx.iter().position(|&g| g == i).ok_or_else(|| {
                Error::Invalid(format!(
                    "{} is not a (0,{k})-form of the Dolbeault model",
                    self.full.space().label(k, i)
                ))
            })?;
            out[pos] = c.clone();
        }
        Ok(out)
    }

    fn product(&self, a: &StructuredAlgebra, vs: &[Vector]) -> Vector {
        let mut acc = vs[0].clone();
        for (i, v) in vs.iter().enumerate().skip(1) {
            acc = a.multiply(i as i32, &acc, 1, v);
        }
        acc
    }

    /// `φ(x^p y^q e_j)` in the full model.
    fn phi_basis(&self, p: i32, q: i32, j: usize) -> Result<Vector> {
        let k = p + q;
        if k == 0 {
            return Ok(self.dol_to_full(0, &unit_vector(self.dol.space().dim(0), j)));
        }
        let n1 = self.dol.space().dim(1);
        let (c, gens) = factor_monomial(self.dol, k, j, &(0..n1).collect::<Vec<_>>())?;
        let factors: Vec<Vector> = gens
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                let g = self.dol_to_full(1, &unit_vector(n1, g));
                if (i as i32) < p {
                    self.j1.mul_vec(&g)
                } else {
                    g
                }
            })
            .collect();
        Ok(scale_vector(&c, &self.product(self.full, &factors)))
    }

    /// `φ⁻¹` of the full-model basis element `(k, i)`, factored with
    /// (1,0)-generators first.
    fn phi_inv_basis(&self, q: &QuaternionicComplex, h1: &Matrix, k: i32, i: usize) -> Result<Vector> {
        let total = q.algebra();
        if k == 0 {
            let v = self.full_to_dol(0, &unit_vector(self.full.space().dim(0), i))?;
            return q.embed(0, 0, &v);
        }
        let n1 = self.full.space().dim(1);
        let weight = |g: usize| -> Result<i64> {
            let col = h1.column(g);
            let w = &col[g];
            if (0..n1).any(|r| r != g && !col[r].is_zero()) {
                return Err(Error::Invalid("degree-1 basis is not h-diagonal".into()));
            }
            w.as_integer()
                .and_then(|b| i64::try_from(b).ok())
                .ok_or_else(|| Error::Invalid("non-integral weight".into()))
        };
        let mut order: Vec<usize> = (0..n1).collect();
        let weights = order.iter().map(|&g| weight(g)).collect::<Result<Vec<_>>>()?;
        order.sort_by_key(|&g| std::cmp::Reverse(weights[g]));
        let (c, gens) = factor_monomial(self.full, k, i, &order)?;
        let mut factors = Vec::new();
        for &g in &gens {
            let gv = unit_vector(n1, g);
            let f = match weights[g] {
                1 => q.embed(1, 0, &self.full_to_dol(1, &self.j1_inv.mul_vec(&gv))?)?,
                -1 => q.embed(0, 1, &self.full_to_dol(1, &gv)?)?,
                w => {
                    return Err(Error::Invalid(format!(
                        "generator {} has weight {w}",
                        self.full.space().label(1, g)
                    )))
                }
            };
            factors.push(f);
        }
        Ok(scale_vector(&c, &self.product(total, &factors)))
    }
}

pub fn phi_isomorphism(m: &ConnectionModel) -> Result<PhiIsomorphism> {
    let full = m
        .full()
        .ok_or_else(|| Error::Precondition("φ needs a full model with sl2 and J".into()))?;
    if !autoduality_check(m)?.autodual {
        return Err(Error::Precondition("φ needs an autodual model".into()));
    }
    let dol = m.dolbeault();
    let q = QuaternionicComplex::build(m, None)?;
    let ideal = low_weight_ideal(full)?;
    let plus = plus_quotient(full, &ideal)?;
    let pa = plus.algebra();
    let jname = full.j_name().expect("checked by ConnectionModel");
    let jm = full.map(jname)?;
    let j1 = jm.block(1);
    let j1_inv = j1
        .inverse()
        .ok_or_else(|| Error::Invalid("J is not invertible on 1-forms".into()))?;
    let dol_in_full = dol
        .space()
        .degrees()
        .map(|k| {
            let idx = dol
                .space()
                .labels(k)
                .iter()
                .map(|l| full.space().locate(l).map(|(_, i)| i).expect("checked"))
                .collect();
            (k, idx)
        })
        .collect();
    let ctx = Context {
        dol,
        full,
        j1,
        j1_inv,
        dol_in_full,
    };
    let names = full.sl2_names().expect("checked").clone();
    let h_full = full.map(&names.h)?;
    let h_plus = pa.map(&names.h)?;
    let mut phi = BTreeMap::new();
    let mut phi_inv = BTreeMap::new();
    let mut witness: Option<String> = None;
    let mut bidegree_preserving = true;
    for k in q.algebra().space().degrees() {
        let nq = q.algebra().space().dim(k);
        let np = pa.space().dim(k);
        let proj = plus.quotient.projection.block(k);
        let mut cols = Vec::with_capacity(nq);
        for col in 0..nq {
            let (p, qq, j) = q.bidegree_of(k, col);
            let v = proj.mul_vec(&ctx.phi_basis(p, qq, j)?);
            let hv = h_plus.apply(k, &v);
            if hv != scale_vector(&Scalar::from_int((p - qq) as i64), &v) {
                bidegree_preserving = false;
                witness.get_or_insert_with(|| format!("φ(x^{p} y^{qq} ·) leaves weight {}", p - qq));
            }
            cols.push(v);
        }
        phi.insert(k, Matrix::from_columns(np, &cols));
        let section = plus.quotient.section.block(k);
        let h1 = h_full.block(1);
        let mut inv_cols = Vec::with_capacity(np);
        for col in 0..np {
            let s = section.column(col);
            let mut acc = zero_vector(nq);
            for (i, c) in s.iter().enumerate() {
                if !c.is_zero() {
                    axpy(&mut acc, c, &ctx.phi_inv_basis(&q, &h1, k, i)?);
                }
            }
            inv_cols.push(acc);
        }
        phi_inv.insert(k, Matrix::from_columns(nq, &inv_cols));
    }
    let mut check_id = |name: &str, m: Matrix| -> bool {
        let ok = m == Matrix::identity(m.rows()) && m.is_square();
        if !ok {
            witness.get_or_insert_with(|| format!("{name} is not the identity"));
        }
        ok
    };
    let mut pp = true;
    let mut ip = true;
    for k in phi.keys() {
        pp &= check_id("φ∘φ⁻¹", phi[k].mul(&phi_inv[k]));
        ip &= check_id("φ⁻¹∘φ", phi_inv[k].mul(&phi[k]));
    }
    let degree0_identity = match (phi.get(&0), dol.space().dim(0)) {
        (Some(m0), n) => *m0 == Matrix::identity(n),
        (None, 0) => true,
        _ => false,
    };
    let intertwines = |qa_map: &GradedMap, plus_map: &GradedMap| -> bool {
        phi.keys().all(|&k| {
            let src = phi[&k].clone();
            let tgt = phi.get(&(k + 1)).cloned().unwrap_or_else(|| Matrix::zeros(pa.space().dim(k + 1), 0));
            let lhs = if tgt.cols() == 0 {
                Matrix::zeros(tgt.rows(), src.cols())
            } else {
                tgt.mul(&qa_map.block(k))
            };
            let rhs = if pa.space().dim(k + 1) == 0 {
                Matrix::zeros(0, src.cols())
            } else {
                plus_map.block(k).mul(&src)
            };
            lhs == rhs
        })
    };
    let intertwines_horizontal = intertwines(q.horizontal(), pa.map(DEL)?);
    let intertwines_vertical = intertwines(q.vertical(), pa.map(DEL_BAR)?);
    if !(intertwines_horizontal && intertwines_vertical) {
        witness.get_or_insert_with(|| "φ does not intertwine the differentials".into());
    }
    let certificate = PhiCertificate {
        qa_dims: q.dims(),
        plus_dims: pa.space().dims(),
        degree0_identity,
        phi_phi_inv_identity: pp,
        phi_inv_phi_identity: ip,
        bidegree_preserving,
        intertwines_horizontal,
        intertwines_vertical,
        witness,
    };
    Ok(PhiIsomorphism {
        complex: q,
        plus,
        phi,
        phi_inv,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::torus_model;

    #[test]
    fn torus_rank_one_certificate() {
        let m = torus_model(1).unwrap();
        let p = phi_isomorphism(&m).unwrap();
        assert!(p.certificate.passed(), "{:?}", p.certificate);
        // φ(x dzb1) = J(dzb1) = dz2
        let q = &p.complex;
        let col = q.position(1, 0, 0).unwrap();
        let pa = p.plus.algebra();
        let v = p.phi[&1].column(col);
        let (_, dz2) = pa.space().locate("dz2").unwrap();
        assert_eq!(v, unit_vector(pa.space().dim(1), dz2));
    }

    #[test]
    fn torus_rank_two_certificate() {
        let m = torus_model(2).unwrap();
        let p = phi_isomorphism(&m).unwrap();
        assert!(p.certificate.passed(), "{:?}", p.certificate);
    }
}
