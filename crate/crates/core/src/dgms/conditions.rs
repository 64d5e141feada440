use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{
    block_image_into, block_kernel, is_derivation, CohomologyPresentation, GradedMap,
    StructuredAlgebra, Witness,
};
use crate::linalg::{Matrix, Subspace, Vector};

/// An algebra together with two named differentials satisfying
/// d0² = 0, d1² = 0 and d0d1 + d1d0 = 0.
#[derive(Clone, Debug)]
pub struct Bicomplex {
    algebra: StructuredAlgebra,
    d0: String,
    d1: String,
}

impl Bicomplex {
    pub fn new(algebra: StructuredAlgebra, d0: &str, d1: &str) -> Result<Self> {
        let m0 = algebra.differential(d0)?;
        let m1 = algebra.differential(d1)?;
        for (name, m) in [(d0, m0), (d1, m1)] {
            if let Some((k, _)) = m.compose(m)?.first_nonzero() {
                return Err(Error::NotSquareZero {
                    name: name.to_string(),
                    degree: k,
                });
            }
        }
        let anti = m0.compose(m1)?.add(&m1.compose(m0)?)?;
        if let Some((k, j)) = anti.first_nonzero() {
            return Err(Error::Structural(format!(
                "{d0}{d1} + {d1}{d0} is nonzero on {} (degree {k})",
                algebra.space().label(k, j)
            )));
        }
        Ok(Bicomplex {
            algebra,
            d0: d0.to_string(),
            d1: d1.to_string(),
        })
    }

    pub fn algebra(&self) -> &StructuredAlgebra {
        &self.algebra
    }

    pub fn d0_name(&self) -> &str {
        &self.d0
    }

    pub fn d1_name(&self) -> &str {
        &self.d1
    }

    pub fn d0(&self) -> &GradedMap {
        self.algebra.map(&self.d0).expect("checked at construction")
    }

    pub fn d1(&self) -> &GradedMap {
        self.algebra.map(&self.d1).expect("checked at construction")
    }

    /// The same data with the roles of the differentials exchanged.
    pub fn swapped(&self) -> Bicomplex {
        Bicomplex {
            algebra: self.algebra.clone(),
            d0: self.d1.clone(),
            d1: self.d0.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceDims {
    pub ker_d0: usize,
    pub ker_d1: usize,
    pub im_d0: usize,
    pub im_d1: usize,
    pub im_d0d1: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeConditions {
    pub degree: i32,
    pub b: bool,
    pub bstar: bool,
    pub c: bool,
    pub cstar: bool,
    pub strong: bool,
    pub dims: SubspaceDims,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionWitness {
    pub condition: String,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DgmsVerdict {
    pub d0: String,
    pub d1: String,
    pub anticommute: bool,
    pub condition_b: bool,
    pub condition_bstar: bool,
    pub condition_c: bool,
    pub condition_cstar: bool,
    pub strong_lemma: bool,
    /// Both differentials are derivations of the product.
    pub derivations: bool,
    pub is_dgms_algebra: bool,
    pub table: Vec<DegreeConditions>,
    pub witnesses: Vec<ConditionWitness>,
}

impl DgmsVerdict {
    pub fn witness_for(&self, condition: &str) -> Option<&Witness> {
        self.witnesses
            .iter()
            .find(|w| w.condition == condition)
            .map(|w| &w.witness)
    }
}

struct DegreeSpaces {
    ker0: Subspace,
    ker1: Subspace,
    im0: Subspace,
    im1: Subspace,
    im01: Subspace,
}

fn degree_spaces(b: &Bicomplex, d01: &GradedMap, k: i32) -> DegreeSpaces {
    DegreeSpaces {
        ker0: block_kernel(b.d0(), k),
        ker1: block_kernel(b.d1(), k),
        im0: block_image_into(b.d0(), k),
        im1: block_image_into(b.d1(), k),
        im01: block_image_into(d01, k),
    }
}

/// Rank of `m` restricted to a subspace.
fn restricted_rank(m: &GradedMap, k: i32, sub: &Subspace) -> usize {
    if sub.is_zero() || m.target_dim(k + m.shift()) == 0 {
        return 0;
    }
    let block = m.block(k);
    let cols: Vec<Vector> = sub.basis_vectors().iter().map(|v| block.mul_vec(v)).collect();
    Matrix::from_columns(block.rows(), &cols).rank()
}

/// Whether the subcomplex `(im(outer), inner)` is acyclic in degree `k`,
/// computed from ranks of `inner` restricted to the images.
fn subcomplex_acyclic(outer_images: &BTreeMap<i32, Subspace>, inner: &GradedMap, k: i32) -> bool {
    let here = &outer_images[&k];
    let kernel_dim = here.dim() - restricted_rank(inner, k, here);
    let incoming = outer_images
        .get(&(k - 1))
        .map_or(0, |prev| restricted_rank(inner, k - 1, prev));
    kernel_dim == incoming
}

/// Condition table b, b*, c, c* and the strong lemma, degree by degree.
pub fn ddbar_condition_check(b: &Bicomplex) -> Result<DgmsVerdict> {
    let a = b.algebra();
    let space = a.space();
    let d01 = b.d0().compose(b.d1())?;
    let mut table = Vec::new();
    let mut witnesses = Vec::new();
    let mut im0s = BTreeMap::new();
    let mut im1s = BTreeMap::new();
    let mut spaces = BTreeMap::new();
    for k in space.degrees() {
        let s = degree_spaces(b, &d01, k);
        im0s.insert(k, s.im0.clone());
        im1s.insert(k, s.im1.clone());
        spaces.insert(k, s);
    }
    for (&k, s) in &spaces {
        let lhs_b = s.ker1.intersect(&s.im0)?;
        let lhs_bs = s.ker0.intersect(&s.im1)?;
        let lhs_strong = s.ker0.intersect(&s.ker1)?.intersect(&s.im0.sum(&s.im1)?)?;
        let cb = lhs_b == s.im01;
        let cbs = lhs_bs == s.im01;
        let strong = lhs_strong == s.im01;
        let cc = subcomplex_acyclic(&im0s, b.d1(), k);
        let ccs = subcomplex_acyclic(&im1s, b.d0(), k);
        if cb != cc || cbs != ccs {
            return Err(Error::Internal(format!(
                "one-sided condition and subcomplex acyclicity disagree in degree {k}"
            )));
        }
        if strong != (cb && cbs) {
            return Err(Error::Internal(format!(
                "strong lemma disagrees with b and b* in degree {k}"
            )));
        }
        for (name, ok, lhs) in [("b", cb, &lhs_b), ("b*", cbs, &lhs_bs), ("strong", strong, &lhs_strong)] {
            if !ok {
                let v = lhs.witness_outside(&s.im01).ok_or_else(|| {
                    Error::Internal("failed inclusion without witness".into())
                })?;
                witnesses.push(ConditionWitness {
                    condition: name.to_string(),
                    witness: space.witness(k, &v),
                });
            }
        }
        table.push(DegreeConditions {
            degree: k,
            b: cb,
            bstar: cbs,
            c: cc,
            cstar: ccs,
            strong,
            dims: SubspaceDims {
                ker_d0: s.ker0.dim(),
                ker_d1: s.ker1.dim(),
                im_d0: s.im0.dim(),
                im_d1: s.im1.dim(),
                im_d0d1: s.im01.dim(),
            },
        });
    }
    let all = |f: fn(&DegreeConditions) -> bool| table.iter().all(f);
    let derivations = is_derivation(a, b.d0_name(), b.d0()).passed()
        && is_derivation(a, b.d1_name(), b.d1()).passed();
    let strong_lemma = all(|t| t.strong);
    Ok(DgmsVerdict {
        d0: b.d0_name().to_string(),
        d1: b.d1_name().to_string(),
        anticommute: true,
        condition_b: all(|t| t.b),
        condition_bstar: all(|t| t.bstar),
        condition_c: all(|t| t.c),
        condition_cstar: all(|t| t.cstar),
        strong_lemma,
        derivations,
        is_dgms_algebra: strong_lemma && derivations,
        table,
        witnesses,
    })
}

/// Strong d0d1-lemma verdict; equality with `b ∧ b*` is enforced.
pub fn strong_lemma_check(b: &Bicomplex) -> Result<DgmsVerdict> {
    let v = ddbar_condition_check(b)?;
    if v.strong_lemma != (v.condition_b && v.condition_bstar) {
        return Err(Error::Internal("strong lemma differs from b and b*".into()));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedDifferential {
    /// e.g. "d0 on H(d1)"
    pub map: String,
    pub precondition: String,
    pub precondition_holds: bool,
    pub is_zero: bool,
    pub witness: Option<Witness>,
}

impl InducedDifferential {
    /// Triviality is asserted only when the precondition holds.
    pub fn passed(&self) -> bool {
        !self.precondition_holds || self.is_zero
    }
}

fn induced_on(
    a: &StructuredAlgebra,
    outer: (&str, &GradedMap),
    inner: (&str, &GradedMap),
    precondition: &str,
    holds: bool,
) -> Result<InducedDifferential> {
    let h = CohomologyPresentation::of_map(a, inner.0, inner.1)?;
    let induced = CohomologyPresentation::induced_map(outer.1, &h, &h)?;
    let witness = induced.first_nonzero().map(|(k, i)| {
        let rep = &h.representatives(k)[i];
        a.space().witness(k, rep)
    });
    Ok(InducedDifferential {
        map: format!("{} on H({})", outer.0, inner.0),
        precondition: precondition.to_string(),
        precondition_holds: holds,
        is_zero: witness.is_none(),
        witness,
    })
}

/// Differentials induced by d0 on H(d1) and by d1 on H(d0).
pub fn induced_differential_triviality(b: &Bicomplex) -> Result<Vec<InducedDifferential>> {
    let v = ddbar_condition_check(b)?;
    let a = b.algebra();
    let (n0, n1) = (b.d0_name(), b.d1_name());
    Ok(vec![
        induced_on(a, (n0, b.d0()), (n1, b.d1()), "b", v.condition_b)?,
        induced_on(a, (n1, b.d1()), (n0, b.d0()), "b*", v.condition_bstar)?,
    ])
}
