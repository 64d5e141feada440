use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::CohomologyPresentation;
use crate::linalg::{Matrix, Subspace, Vector};

use super::complex::{QuaternionicComplex, TOTAL_D};

/// `ker / im` with chosen representatives.
struct SubQuotient {
    boundaries: Subspace,
    reps: Vec<Vector>,
    /// Columns: boundary basis, then representatives.
    frame: Matrix,
}

impl SubQuotient {
    fn new(cycles: &Subspace, boundaries: Subspace) -> Self {
        let reps = boundaries.complement_in(cycles);
        let mut cols = boundaries.basis_vectors();
        cols.extend(reps.iter().cloned());
        let frame = Matrix::from_columns(cycles.ambient_dim(), &cols);
        SubQuotient {
            boundaries,
            reps,
            frame,
        }
    }

    fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Class coordinates of a cycle.
    fn class(&self, v: &[crate::linalg::Scalar]) -> Result<Vector> {
        let sol = self
            .frame
            .solve(v)
            .map_err(|_| Error::Internal("vector is not a cycle of the page".into()))?;
        Ok(sol.particular[self.boundaries.dim()..].to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageEntry {
    pub p: i32,
    pub q: i32,
    pub e1: usize,
    pub e2: usize,
}

/// E1 and E2 of the filtration by `p`: E1 is vertical cohomology, E2 the
/// cohomology of the induced horizontal maps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralPages {
    pub entries: Vec<PageEntry>,
    /// Rank of the induced map `E1^{p,q} -> E1^{p+1,q}`, keyed by source.
    pub d1_ranks: Vec<((i32, i32), usize)>,
    pub e2_totals: BTreeMap<i32, usize>,
    pub total_cohomology: BTreeMap<i32, usize>,
    /// `E2 = E∞`, i.e. the E2 totals equal the total cohomology.
    pub degenerates_at_e2: bool,
    /// First bidegree where E1 and E2 differ.
    pub e1_e2_witness: Option<(i32, i32)>,
    #[serde(skip)]
    pub d1_maps: BTreeMap<(i32, i32), Matrix>,
}

impl SpectralPages {
    pub fn entry(&self, p: i32, q: i32) -> Option<&PageEntry> {
        self.entries.iter().find(|e| e.p == p && e.q == q)
    }

    pub fn e1_equals_e2(&self) -> bool {
        self.e1_e2_witness.is_none()
    }
}

pub fn double_complex_spectral_sequence(qc: &QuaternionicComplex) -> Result<SpectralPages> {
    let d = qc.total_differential();
    if let Some((k, _)) = d.compose(d)?.first_nonzero() {
        return Err(Error::NotSquareZero {
            name: TOTAL_D.into(),
            degree: k,
        });
    }
    let base = qc.base().space();
    let (h, v) = (qc.horizontal(), qc.vertical());
    let bidegrees = qc.all_bidegrees();
    let mut e1 = BTreeMap::new();
    for &(p, q) in &bidegrees {
        let n = base.dim(p + q);
        let cycles = qc.sub_block(v, (p, q), (p, q + 1)).kernel();
        let boundaries = if qc.contains(p, q - 1) {
            qc.sub_block(v, (p, q - 1), (p, q)).image()
        } else {
            Subspace::zero(n)
        };
        e1.insert((p, q), SubQuotient::new(&cycles, boundaries));
    }
    let mut d1_maps = BTreeMap::new();
    for &(p, q) in &bidegrees {
        let src = &e1[&(p, q)];
        let Some(tgt) = e1.get(&(p + 1, q)) else { continue };
        let block = qc.sub_block(h, (p, q), (p + 1, q));
        let cols = src
            .reps
            .iter()
            .map(|r| tgt.class(&block.mul_vec(r)))
            .collect::<Result<Vec<_>>>()?;
        d1_maps.insert((p, q), Matrix::from_columns(tgt.dim(), &cols));
    }
    let rank_of = |key: (i32, i32)| d1_maps.get(&key).map_or(0, Matrix::rank);
    let mut entries = Vec::new();
    let mut e2_totals: BTreeMap<i32, usize> = BTreeMap::new();
    let mut witness = None;
    for &(p, q) in &bidegrees {
        let e1d = e1[&(p, q)].dim();
        let e2d = e1d - rank_of((p, q)) - rank_of((p - 1, q));
        if e1d != e2d && witness.is_none() {
            witness = Some((p, q));
        }
        *e2_totals.entry(p + q).or_default() += e2d;
        entries.push(PageEntry { p, q, e1: e1d, e2: e2d });
    }
    let hc = CohomologyPresentation::of_map(qc.algebra(), TOTAL_D, d)?;
    let total_cohomology: BTreeMap<i32, usize> = e2_totals.keys().map(|&k| (k, hc.dim(k))).collect();
    Ok(SpectralPages {
        entries,
        d1_ranks: d1_maps.iter().map(|(&k, m)| (k, m.rank())).collect(),
        degenerates_at_e2: e2_totals == total_cohomology,
        e2_totals,
        total_cohomology,
        e1_e2_witness: witness,
        d1_maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{connection_from_bicomplex, square_model, torus_model};

    #[test]
    fn square_row_zero_pages() {
        let m = connection_from_bicomplex(&square_model().unwrap()).unwrap();
        let q = QuaternionicComplex::build(&m, None).unwrap();
        let s = double_complex_spectral_sequence(&q).unwrap();
        assert_eq!(s.entry(1, 0).unwrap().e1, 1);
        assert_eq!(s.entry(1, 0).unwrap().e2, 0);
        assert_eq!(s.entry(2, 0).unwrap().e1, 1);
        assert_eq!(s.e1_e2_witness, Some((1, 0)));
        assert!(s.degenerates_at_e2);
    }

    #[test]
    fn zero_differentials_degenerate_trivially() {
        let m = torus_model(1).unwrap();
        let q = QuaternionicComplex::build(&m, None).unwrap();
        let s = double_complex_spectral_sequence(&q).unwrap();
        assert!(s.e1_equals_e2() && s.degenerates_at_e2);
        for e in &s.entries {
            assert_eq!(e.e1, q.base().space().dim(e.p + e.q));
        }
    }
}
