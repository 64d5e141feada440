use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::dgms::{strong_lemma_check, Bicomplex};
use crate::error::{Error, Result};
use crate::graded::{
    commutator_dgla, AlgebraKind, CohomologyPresentation,
    GradedMap, GradedSpace, StructuredAlgebra, Witness,
};
use crate::linalg::{Matrix, Subspace, Vector};

use super::connection::{autoduality_check, ConnectionModel, DEL_BAR, DEL_BAR_J};

pub const X_DEL_BAR_J: &str = "x_del_bar_J";
pub const Y_DEL_BAR: &str = "y_del_bar";
pub const TOTAL_D: &str = "d";

/// Label of `x^p y^q u`.
pub fn bidegree_label(p: i32, q: i32, label: &str) -> String {
    format!("x{p}y{q}:{label}")
}

/// Total complex of `x^p y^q A^{0,p+q}` with horizontal differential
/// `x del_bar_J` and vertical differential `y del_bar`.
///
/// Standard variant: `p, q >= 0`. Extended variant: `p, q` in `[-W, W]`, and
/// no product is installed since truncation breaks associativity.
#[derive(Clone, Debug)]
pub struct QuaternionicComplex {
    base: StructuredAlgebra,
    total: StructuredAlgebra,
    window: Option<i32>,
    /// Bidegrees in each total degree, in basis order; every block has
    /// dimension `dim A^{0,k}`.
    blocks: BTreeMap<i32, Vec<(i32, i32)>>,
}

impl QuaternionicComplex {
    pub fn build(m: &ConnectionModel, window: Option<i32>) -> Result<Self> {
        let base = m.dolbeault().clone();
        let bs_owned = base.space().clone();
        let bs = &bs_owned;
        if let Some(w) = window {
            if w < 0 {
                return Err(Error::Invalid(format!("window {w} is negative")));
            }
        } else if let Some(k) = bs.degrees().find(|&k| k < 0) {
            return Err(Error::Precondition(format!(
                "standard complex needs nonnegative degrees, found {k}"
            )));
        }
        let mut blocks: BTreeMap<i32, Vec<(i32, i32)>> = BTreeMap::new();
        for k in bs.degrees() {
            let pairs: Vec<(i32, i32)> = match window {
                None => (0..=k).map(|p| (p, k - p)).collect(),
                Some(w) => (-w..=w)
                    .map(|p| (p, k - p))
                    .filter(|&(_, q)| (-w..=w).contains(&q))
                    .collect(),
            };
            if !pairs.is_empty() {
                blocks.insert(k, pairs);
            }
        }
        let comps: Vec<(i32, Vec<String>)> = blocks
            .iter()
            .map(|(&k, pairs)| {
                let labels = pairs
                    .iter()
                    .flat_map(|&(p, q)| bs.labels(k).iter().map(move |l| bidegree_label(p, q, l)))
                    .collect();
                (k, labels)
            })
            .collect();
        let space = GradedSpace::new(comps)?;
        let mut total = StructuredAlgebra::new(space.clone(), base.kind());
        let mut qc = QuaternionicComplex {
            base,
            total: StructuredAlgebra::new(GradedSpace::empty(), AlgebraKind::Associative),
            window,
            blocks,
        };
        let horizontal = qc.lift_map(&space, m.del_bar_j(), (1, 0))?;
        let vertical = qc.lift_map(&space, m.del_bar(), (0, 1))?;
        let d = horizontal.add(&vertical)?;
        total.insert_map(X_DEL_BAR_J, horizontal)?;
        total.insert_map(Y_DEL_BAR, vertical)?;
        total.insert_map(TOTAL_D, d)?;
        if window.is_none() {
            for (i, j, k, c) in qc.base.structure_triples() {
                let (di, li) = bs.from_global(i);
                let (dj, lj) = bs.from_global(j);
                let (dk, lk) = bs.from_global(k);
                for &(a, b) in &qc.blocks[&di] {
                    for &(cc, dd) in &qc.blocks[&dj] {
                        let (Some(gi), Some(gj), Some(gk)) = (
                            qc.global_position(&space, a, b, li),
                            qc.global_position(&space, cc, dd, lj),
                            qc.global_position(&space, a + cc, b + dd, lk),
                        ) else {
                            continue;
                        };
                        debug_assert_eq!(a + cc + b + dd, dk);
                        total.add_structure(gi, gj, gk, c.clone())?;
                    }
                }
            }
        }
        qc.total = total;
        Ok(qc)
    }

    fn global_position(&self, space: &GradedSpace, p: i32, q: i32, j: usize) -> Option<usize> {
        let k = p + q;
        let b = self.blocks.get(&k)?.iter().position(|&x| x == (p, q))?;
        Some(space.global(k, b * self.base.space().dim(k) + j))
    }

    fn lift_map(&self, space: &GradedSpace, m: &GradedMap, step: (i32, i32)) -> Result<GradedMap> {
        let mut out = GradedMap::zero(space, space, 1);
        for (k, block) in m.stored_blocks() {
            let Some(pairs) = self.blocks.get(&k) else { continue };
            for &(p, q) in pairs {
                let Some(tb) = self.block_index(p + step.0, q + step.1) else {
                    continue;
                };
                let sb = self.block_index(p, q).expect("listed bidegree");
                let (ns, nt) = (block.cols(), block.rows());
                for row in 0..nt {
                    for col in 0..ns {
                        let c = block.get(row, col);
                        if !c.is_zero() {
                            out.add_entry(k, sb * ns + col, tb * nt + row, c);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn base(&self) -> &StructuredAlgebra {
        &self.base
    }

    /// Total algebra with maps `x_del_bar_J`, `y_del_bar` and `d`.
    pub fn algebra(&self) -> &StructuredAlgebra {
        &self.total
    }

    pub fn window(&self) -> Option<i32> {
        self.window
    }

    pub fn is_extended(&self) -> bool {
        self.window.is_some()
    }

    pub fn horizontal(&self) -> &GradedMap {
        self.total.map(X_DEL_BAR_J).expect("installed")
    }

    pub fn vertical(&self) -> &GradedMap {
        self.total.map(Y_DEL_BAR).expect("installed")
    }

    pub fn total_differential(&self) -> &GradedMap {
        self.total.map(TOTAL_D).expect("installed")
    }

    pub fn bidegrees(&self, k: i32) -> &[(i32, i32)] {
        self.blocks.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn all_bidegrees(&self) -> Vec<(i32, i32)> {
        self.blocks.values().flatten().copied().collect()
    }

    pub fn contains(&self, p: i32, q: i32) -> bool {
        self.block_index(p, q).is_some()
    }

    fn block_index(&self, p: i32, q: i32) -> Option<usize> {
        self.blocks.get(&(p + q))?.iter().position(|&x| x == (p, q))
    }

    /// `(p, q, j)` of basis element `i` in total degree `k`.
    pub fn bidegree_of(&self, k: i32, i: usize) -> (i32, i32, usize) {
        let n = self.base.space().dim(k);
        let (p, q) = self.blocks[&k][i / n];
        (p, q, i % n)
    }

    /// Index in total degree `p + q` of `x^p y^q e_j`.
    pub fn position(&self, p: i32, q: i32, j: usize) -> Option<usize> {
        let b = self.block_index(p, q)?;
        Some(b * self.base.space().dim(p + q) + j)
    }

    /// `x^p y^q v` as a vector in total degree `p + q`.
    pub fn embed(&self, p: i32, q: i32, v: &[crate::linalg::Scalar]) -> Result<Vector> {
        let k = p + q;
        let b = self
            .block_index(p, q)
            .ok_or_else(|| Error::Invalid(format!("bidegree ({p},{q}) is not in the complex")))?;
        let n = self.base.space().dim(k);
        if v.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in A^{{0,{k}}} of dimension {n}",
                v.len()
            )));
        }
        let mut out = crate::linalg::zero_vector(self.total.space().dim(k));
        out[b * n..(b + 1) * n].clone_from_slice(v);
        Ok(out)
    }

    /// The `(p, q)` coefficient of a vector in total degree `p + q`.
    pub fn extract(&self, p: i32, q: i32, v: &[crate::linalg::Scalar]) -> Vector {
        let n = self.base.space().dim(p + q);
        match self.block_index(p, q) {
            Some(b) => v[b * n..(b + 1) * n].to_vec(),
            None => crate::linalg::zero_vector(n),
        }
    }

    /// Block of a shift-1 total map from bidegree `from` to bidegree `to`.
    pub fn sub_block(&self, m: &GradedMap, from: (i32, i32), to: (i32, i32)) -> Matrix {
        let (k, l) = (from.0 + from.1, to.0 + to.1);
        let (ns, nt) = (self.base.space().dim(k), self.base.space().dim(l));
        match (self.block_index(from.0, from.1), self.block_index(to.0, to.1)) {
            (Some(sb), Some(tb)) if l == k + m.shift() => {
                let full = m.block(k);
                Matrix::from_fn(nt, ns, |i, j| full.get(tb * nt + i, sb * ns + j).clone())
            }
            _ => Matrix::zeros(nt, ns),
        }
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.total.space().dims()
    }

    /// The total algebra as a DG Lie algebra with differential `d`: the
    /// commutator bracket, or the bracket itself for a Lie base.
    pub fn lie(&self) -> Result<StructuredAlgebra> {
        if self.is_extended() {
            return Err(Error::Precondition("extended complex carries no product".into()));
        }
        let mut a = self.total.clone();
        a.remove_map(X_DEL_BAR_J);
        a.remove_map(Y_DEL_BAR);
        match a.kind() {
            AlgebraKind::Lie => Ok(a),
            AlgebraKind::Associative => commutator_dgla(&a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatnessReport {
    pub d_squared_zero: bool,
    pub witness: Option<Witness>,
    pub autodual: bool,
    /// `d² = 0` holds exactly when the model is autodual.
    pub agree: bool,
}

pub fn flatness_check(m: &ConnectionModel) -> Result<FlatnessReport> {
    let q = QuaternionicComplex::build(m, None)?;
    let d = q.total_differential();
    let witness = d.compose(d)?.first_nonzero().map(|(k, i)| {
        let s = q.algebra().space();
        s.witness(k, &s.basis_vector(k, i))
    });
    let autodual = autoduality_check(m)?.autodual;
    let d_squared_zero = witness.is_none();
    Ok(FlatnessReport {
        d_squared_zero,
        witness,
        autodual,
        agree: d_squared_zero == autodual,
    })
}

/// Whether `(del_bar_J, del_bar)` anticommute and satisfy the strong lemma.
pub fn hyperholomorphic_certificate(m: &ConnectionModel) -> Result<bool> {
    match Bicomplex::new(m.dolbeault().clone(), DEL_BAR_J, DEL_BAR) {
        Ok(b) => Ok(strong_lemma_check(&b)?.strong_lemma),
        Err(Error::NotSquareZero { .. }) | Err(Error::Structural(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QCohomologyReport {
    /// "asserted" when the strong-lemma certificate holds, else
    /// "unconditional computation".
    pub mode: String,
    pub certified: bool,
    pub qa_dims: BTreeMap<i32, usize>,
    pub qa_cohomology: BTreeMap<i32, usize>,
    pub del_bar_cohomology: BTreeMap<i32, usize>,
    /// `(k+1) · dim H^k(del_bar)`
    pub expected: BTreeMap<i32, usize>,
    pub equal: bool,
    pub passed: bool,
}

pub fn quaternionic_cohomology_check(q: &QuaternionicComplex, m: &ConnectionModel) -> Result<QCohomologyReport> {
    if q.is_extended() {
        return Err(Error::Precondition(
            "cohomology factorization applies to the standard complex".into(),
        ));
    }
    let certified = hyperholomorphic_certificate(m)?;
    let total = q.algebra();
    let h = CohomologyPresentation::of_map(total, TOTAL_D, q.total_differential())?;
    let hb = CohomologyPresentation::of_map(m.dolbeault(), DEL_BAR, m.del_bar())?;
    let degrees: Vec<i32> = m.dolbeault().space().degrees().collect();
    let qa_cohomology: BTreeMap<i32, usize> = degrees.iter().map(|&k| (k, h.dim(k))).collect();
    let del_bar_cohomology: BTreeMap<i32, usize> = degrees.iter().map(|&k| (k, hb.dim(k))).collect();
    let expected: BTreeMap<i32, usize> = degrees
        .iter()
        .map(|&k| (k, (k as usize + 1) * hb.dim(k)))
        .collect();
    let equal = qa_cohomology == expected;
    Ok(QCohomologyReport {
        mode: if certified { "asserted" } else { "unconditional computation" }.into(),
        certified,
        qa_dims: q.dims(),
        qa_cohomology,
        del_bar_cohomology,
        expected,
        equal,
        passed: !certified || equal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BidegreeStrongLemma {
    pub p: i32,
    pub q: i32,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedReport {
    pub window: i32,
    /// Strong lemma for `(del_bar, del_bar_J)` on the base.
    pub base_certified: bool,
    pub interior: Vec<BidegreeStrongLemma>,
    pub interior_holds: bool,
    pub passed: bool,
}

/// Strong lemma for `(y del_bar, x del_bar_J)` at each interior bidegree of
/// the extended complex.
pub fn extended_strong_lemma_check(m: &ConnectionModel, window: i32) -> Result<ExtendedReport> {
    let q = QuaternionicComplex::build(m, Some(window))?;
    let base_certified = hyperholomorphic_certificate(m)?;
    let (y, x) = (q.vertical(), q.horizontal());
    let inside = |p: i32, r: i32| (-window..=window).contains(&p) && (-window..=window).contains(&r);
    let mut interior = Vec::new();
    for (p, r) in q.all_bidegrees() {
        let neighbours = [(p + 1, r), (p - 1, r), (p, r + 1), (p, r - 1), (p - 1, r - 1)];
        if !neighbours.iter().all(|&(a, b)| inside(a, b)) {
            continue;
        }
        let here = (p, r);
        let n = q.base().space().dim(p + r);
        let kernel = |to: (i32, i32), mm: &GradedMap| q.sub_block(mm, here, to).kernel();
        let image = |from: (i32, i32), mm: &GradedMap| -> Subspace {
            if q.contains(from.0, from.1) {
                q.sub_block(mm, from, here).image()
            } else {
                Subspace::zero(n)
            }
        };
        let ker_y = kernel((p, r + 1), y);
        let ker_x = kernel((p + 1, r), x);
        let im_y = image((p, r - 1), y);
        let im_x = image((p - 1, r), x);
        let im_yx = if q.contains(p - 1, r - 1) {
            q.sub_block(y, (p, r - 1), here)
                .mul(&q.sub_block(x, (p - 1, r - 1), (p, r - 1)))
                .image()
        } else {
            Subspace::zero(n)
        };
        let lhs = ker_y.intersect(&ker_x)?.intersect(&im_y.sum(&im_x)?)?;
        interior.push(BidegreeStrongLemma {
            p,
            q: r,
            holds: lhs == im_yx,
        });
    }
    let interior_holds = interior.iter().all(|b| b.holds);
    Ok(ExtendedReport {
        window,
        base_certified,
        interior,
        interior_holds,
        passed: !base_certified || interior_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{connection_from_bicomplex, square_model, torus_model};

    #[test]
    fn torus_dims_and_factorization() {
        let m = torus_model(1).unwrap();
        let q = QuaternionicComplex::build(&m, None).unwrap();
        assert_eq!(q.dims().into_values().collect::<Vec<_>>(), vec![1, 4, 3]);
        let r = quaternionic_cohomology_check(&q, &m).unwrap();
        assert!(r.certified && r.equal);
        assert_eq!(r.qa_cohomology.into_values().collect::<Vec<_>>(), vec![1, 4, 3]);
    }

    #[test]
    fn square_total_differential_is_flat() {
        let m = connection_from_bicomplex(&square_model().unwrap()).unwrap();
        let f = flatness_check(&m).unwrap();
        assert!(f.d_squared_zero && f.autodual && f.agree);
        let q = QuaternionicComplex::build(&m, None).unwrap();
        assert_eq!(q.bidegree_of(1, 1), (0, 1, 1));
        let v = q.embed(1, 0, &[crate::linalg::Scalar::from_int(1), crate::linalg::Scalar::zero()]).unwrap();
        assert_eq!(q.extract(1, 0, &v)[0], crate::linalg::Scalar::from_int(1));
    }

    #[test]
    fn extended_interior_strong_lemma() {
        let m = connection_from_bicomplex(&square_model().unwrap()).unwrap();
        let r = extended_strong_lemma_check(&m, 2).unwrap();
        assert!(r.base_certified);
        assert!(!r.interior.is_empty());
        assert!(r.passed);
    }
}
