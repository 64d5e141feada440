use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::conditions::{ddbar_condition_check, strong_lemma_check, Bicomplex, DgmsVerdict};
use crate::error::{Error, Result};
use crate::graded::{
    map_kernel, sub_algebra, AlgebraKind, CohomologyPresentation, GradedMap, StructuredAlgebra,
    Witness,
};
use crate::linalg::{unit_vector, Scalar};

/// The zig-zag `A ← ker(d1) → H(d1)` with its certificates on d0-cohomology.
#[derive(Clone, Debug)]
pub struct FormalityZigzag {
    pub d0: String,
    pub d1: String,
    pub source: StructuredAlgebra,
    pub a1: StructuredAlgebra,
    /// H(d1) with the induced product and the induced d0.
    pub h: StructuredAlgebra,
    pub inclusion: GradedMap,
    pub projection: GradedMap,
    pub iota_star: GradedMap,
    pub rho_star: GradedMap,
    pub cert: ZigzagCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigzagCertificate {
    /// Per degree: dims of H(d0) on A, A1 and H(d1).
    pub dims: BTreeMap<i32, (usize, usize, usize)>,
    pub induced_d0_trivial: bool,
    pub inclusion_morphism: bool,
    pub projection_morphism: bool,
    pub iota_quasi_iso: bool,
    pub rho_quasi_iso: bool,
    pub products_preserved: bool,
}

impl ZigzagCertificate {
    pub fn certified(&self) -> bool {
        self.induced_d0_trivial
            && self.inclusion_morphism
            && self.projection_morphism
            && self.iota_quasi_iso
            && self.rho_quasi_iso
            && self.products_preserved
    }
}

impl FormalityZigzag {
    pub fn certified(&self) -> bool {
        self.cert.certified()
    }
}

/// Checks that `f: a → b` (shift 0) commutes with the named differentials and
/// respects the products.
pub fn is_algebra_chain_map(
    f: &GradedMap,
    a: &StructuredAlgebra,
    da: &GradedMap,
    b: &StructuredAlgebra,
    db: &GradedMap,
) -> Result<bool> {
    if !db.compose(f)?.sub(&f.compose(da)?)?.is_zero() {
        return Ok(false);
    }
    let sa = a.space();
    for ki in sa.degrees() {
        for i in 0..sa.dim(ki) {
            let x = unit_vector(sa.dim(ki), i);
            let fx = f.apply(ki, &x);
            for kj in sa.degrees() {
                for j in 0..sa.dim(kj) {
                    let y = unit_vector(sa.dim(kj), j);
                    let lhs = f.apply(ki + kj, &a.multiply(ki, &x, kj, &y));
                    let rhs = b.multiply(ki, &fx, kj, &f.apply(kj, &y));
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Whether every block of `m` is square and invertible, over the union of the
/// source and target supports.
pub fn is_graded_iso(m: &GradedMap) -> bool {
    let degrees: std::collections::BTreeSet<i32> = m
        .source_dims()
        .keys()
        .copied()
        .chain(m.target_dims().keys().map(|k| k - m.shift()))
        .collect();
    degrees.into_iter().all(|k| {
        let s = m.source_dim(k);
        let t = m.target_dim(k + m.shift());
        s == t && (s == 0 || m.block(k).is_invertible())
    })
}

/// `f_*(x·y) = f_*(x)·f_*(y)` on cohomology classes.
fn preserves_products(f: &GradedMap, src: &StructuredAlgebra, tgt: &StructuredAlgebra) -> bool {
    let s = src.space();
    for ki in s.degrees() {
        for i in 0..s.dim(ki) {
            let x = unit_vector(s.dim(ki), i);
            for kj in s.degrees() {
                for j in 0..s.dim(kj) {
                    let y = unit_vector(s.dim(kj), j);
                    let p = src.multiply(ki, &x, kj, &y);
                    let lhs = f.apply(ki + kj, &p);
                    let rhs = tgt.multiply(ki, &f.apply(ki, &x), kj, &f.apply(kj, &y));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn precondition(v: &DgmsVerdict) -> Result<()> {
    if !v.strong_lemma {
        let w = v
            .witness_for("strong")
            .map(|w| w.to_string())
            .unwrap_or_default();
        return Err(Error::Precondition(format!(
            "strong {}{}-lemma fails: {w}",
            v.d0, v.d1
        )));
    }
    if !v.derivations {
        return Err(Error::Precondition(format!(
            "{} and {} are not both derivations of the product",
            v.d0, v.d1
        )));
    }
    Ok(())
}

pub fn formality_zigzag(b: &Bicomplex) -> Result<FormalityZigzag> {
    let v = strong_lemma_check(b)?;
    precondition(&v)?;
    let a = b.algebra();
    let (n0, n1) = (b.d0_name(), b.d1_name());

    let ker1 = map_kernel(a, b.d1());
    let (a1, inclusion) = sub_algebra(a, &ker1)?;
    let a1_d0 = a1.map(n0)?.clone();

    let h1 = CohomologyPresentation::of_map(a, n1, b.d1())?;
    let mut h = h1.induced_algebra()?;
    let induced_d0 = CohomologyPresentation::induced_map(b.d0(), &h1, &h1)?;
    let induced_d0_trivial = induced_d0.is_zero();
    h.insert_map(n0, induced_d0.clone())?;

    // ρ sends a d1-closed vector to its class
    let mut projection = GradedMap::zero(a1.space(), h.space(), 0);
    for k in a1.space().degrees() {
        let block = inclusion.block(k);
        for i in 0..a1.space().dim(k) {
            let v = block.column(i);
            let class = h1
                .class_of(k, &v)
                .ok_or_else(|| Error::Internal("ker(d1) vector not d1-closed".into()))?;
            for (j, c) in class.iter().enumerate() {
                if !c.is_zero() {
                    projection.add_entry(k, i, j, c);
                }
            }
        }
    }

    let inclusion_morphism = is_algebra_chain_map(&inclusion, &a1, &a1_d0, a, b.d0())?;
    let projection_morphism = is_algebra_chain_map(&projection, &a1, &a1_d0, &h, &induced_d0)?;

    let c_a = CohomologyPresentation::of_map(a, n0, b.d0())?;
    let c_a1 = CohomologyPresentation::of_map(&a1, n0, &a1_d0)?;
    let c_h = CohomologyPresentation::of_map(&h, n0, &induced_d0)?;
    let iota_star = CohomologyPresentation::induced_map(&inclusion, &c_a1, &c_a)?;
    let rho_star = CohomologyPresentation::induced_map(&projection, &c_a1, &c_h)?;

    let mut dims = BTreeMap::new();
    for k in a.space().degrees() {
        dims.insert(k, (c_a.dim(k), c_a1.dim(k), c_h.dim(k)));
    }
    let iota_quasi_iso = is_graded_iso(&iota_star);
    let rho_quasi_iso = is_graded_iso(&rho_star);

    let alg_a = c_a.induced_algebra()?;
    let alg_a1 = c_a1.induced_algebra()?;
    let alg_h = c_h.induced_algebra()?;
    let products_preserved =
        preserves_products(&iota_star, &alg_a1, &alg_a) && preserves_products(&rho_star, &alg_a1, &alg_h);

    let cert = ZigzagCertificate {
        dims,
        induced_d0_trivial,
        inclusion_morphism,
        projection_morphism,
        iota_quasi_iso,
        rho_quasi_iso,
        products_preserved,
    };
    if !cert.certified() {
        return Err(Error::Internal(format!(
            "zig-zag certification failed on a DGMS input: {cert:?}"
        )));
    }
    Ok(FormalityZigzag {
        d0: n0.to_string(),
        d1: n1.to_string(),
        source: a.clone(),
        a1,
        h,
        inclusion,
        projection,
        iota_star,
        rho_star,
        cert,
    })
}

/// The bicomplex `(d0 + d1, d1)`; its strong lemma is enforced.
pub fn dgms_trick(b: &Bicomplex) -> Result<(Bicomplex, DgmsVerdict)> {
    let v = ddbar_condition_check(b)?;
    precondition(&v)?;
    let mut a = b.algebra().clone();
    let name = format!("{}+{}", b.d0_name(), b.d1_name());
    let sum = b.d0().add(b.d1())?;
    a.insert_map(name.clone(), sum)?;
    let out = Bicomplex::new(a, &name, b.d1_name())?;
    let verdict = strong_lemma_check(&out)?;
    if !verdict.is_dgms_algebra {
        return Err(Error::Internal(
            "the bicomplex (d0 + d1, d1) of a DGMS algebra is not DGMS".into(),
        ));
    }
    Ok((out, verdict))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SameCohomologyReport {
    /// Per degree: dim H(d0), dim H(d1).
    pub dims: BTreeMap<i32, (usize, usize)>,
    pub dims_equal: bool,
    pub identification_iso: bool,
    pub products_preserved: bool,
}

impl SameCohomologyReport {
    pub fn passed(&self) -> bool {
        self.dims_equal && self.identification_iso && self.products_preserved
    }
}

/// Compares H(d0) and H(d1) through `ψ = ρ_* ∘ ι_*⁻¹`.
pub fn same_cohomology_check(b: &Bicomplex) -> Result<SameCohomologyReport> {
    let z = formality_zigzag(b)?;
    let a = b.algebra();
    let c0 = CohomologyPresentation::of_map(a, b.d0_name(), b.d0())?;
    let c1 = CohomologyPresentation::of_map(a, b.d1_name(), b.d1())?;
    let mut dims = BTreeMap::new();
    for k in a.space().degrees() {
        dims.insert(k, (c0.dim(k), c1.dim(k)));
    }
    let dims_equal = dims.values().all(|(x, y)| x == y);
    // ψ in blocks: ρ_*(ι_*)⁻¹; the target H(d0)(H(d1)) is H(d1) itself since d0 induces zero
    let mut psi = GradedMap::zero(c0.space(), c1.space(), 0);
    let mut identification_iso = true;
    for k in a.space().degrees() {
        let n = c0.dim(k);
        if n == 0 {
            continue;
        }
        let Some(inv) = z.iota_star.block(k).inverse() else {
            identification_iso = false;
            continue;
        };
        let block = z.rho_star.block(k).mul(&inv);
        if block.shape() != (c1.dim(k), n) || !block.is_invertible() {
            identification_iso = false;
            continue;
        }
        // classes of H(H(d1), 0) and H(d1) coincide basis-wise
        psi.set_block(k, block)?;
    }
    let alg0 = c0.induced_algebra()?;
    let alg1 = c1.induced_algebra()?;
    let products_preserved = identification_iso && preserves_products(&psi, &alg0, &alg1);
    Ok(SameCohomologyReport {
        dims,
        dims_equal,
        identification_iso,
        products_preserved,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum HomotopyAbelianVerdict {
    HomotopyAbelian,
    NotHomotopyAbelian { witness: String },
    Unknown { reason: String },
}

/// Formal and with zero induced bracket on cohomology.
pub fn homotopy_abelian_verdict(
    l: &StructuredAlgebra,
    d: &str,
    certificate: Option<&FormalityZigzag>,
) -> Result<HomotopyAbelianVerdict> {
    if l.kind() != AlgebraKind::Lie {
        return Err(Error::WrongKind {
            expected: "lie".into(),
            found: l.kind().to_string(),
        });
    }
    let Some(cert) = certificate else {
        return Ok(HomotopyAbelianVerdict::Unknown {
            reason: "formality not established".into(),
        });
    };
    if cert.d0 != d || cert.source.space() != l.space() || !cert.certified() {
        return Ok(HomotopyAbelianVerdict::Unknown {
            reason: "certificate does not establish formality of this DGLA".into(),
        });
    }
    let h = CohomologyPresentation::compute(l, d)?;
    let alg = h.induced_algebra()?;
    match alg.structure_triples().first() {
        None => Ok(HomotopyAbelianVerdict::HomotopyAbelian),
        Some((i, j, k, c)) => {
            let s = alg.space();
            Ok(HomotopyAbelianVerdict::NotHomotopyAbelian {
                witness: format!(
                    "[{}, {}] has coefficient {c} on {}",
                    s.global_label(*i),
                    s.global_label(*j),
                    s.global_label(*k)
                ),
            })
        }
    }
}

/// Witness vector helper for reports.
pub fn label_vector(a: &StructuredAlgebra, k: i32, v: &[Scalar]) -> Witness {
    a.space().witness(k, v)
}
