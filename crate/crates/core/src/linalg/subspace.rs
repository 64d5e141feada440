use num_traits::Zero;

use super::matrix::{axpy, is_zero_vector, Matrix, Vector};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A linear subspace of `F^n` stored by its reduced row echelon basis.
///
/// The representation is canonical, so structural equality is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(ambient: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(ambient);
        }
        let (r, pivots) = Matrix::from_rows(ambient, vectors).rref();
        let rows: Vec<Vector> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace {
            ambient,
            basis: Matrix::from_rows(ambient, &rows),
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// Canonical basis matrix (rows in reduced echelon form).
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after eliminating the pivot coordinates.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut r = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            let c = r[p].clone();
            if !c.is_zero() {
                axpy(&mut r, &-c, self.basis.row(row));
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Vector with the given coordinates in the canonical basis.
    pub fn combine(&self, coords: &[Scalar]) -> Vector {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec![Scalar::zero(); self.ambient];
        for (i, c) in coords.iter().enumerate() {
            axpy(&mut out, c, self.basis.row(i));
        }
        out
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of {}-space and {}-space",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok((0..other.dim()).all(|i| self.contains(other.basis.row(i))))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Ok(Subspace::span(self.ambient, &vs))
    }

    /// `{x : <b, x> = 0 for every basis vector b}` under the bilinear pairing.
    pub fn annihilator(&self) -> Subspace {
        self.basis.kernel()
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        // U ∩ W = (ann U + ann W)^ann, valid for the non-degenerate bilinear pairing
        let ann = self.annihilator().sum(&other.annihilator())?;
        Ok(ann.annihilator())
    }

    pub fn equals(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other)?;
        Ok(self == other)
    }

    /// First canonical basis vector of `self` that does not lie in `other`.
    pub fn witness_outside(&self, other: &Subspace) -> Option<Vector> {
        (0..self.dim())
            .map(|i| self.basis.row(i))
            .find(|v| !other.contains(v))
            .map(|v| v.to_vec())
    }

    /// Vectors from `larger`'s basis that extend `self` to a basis of `self + larger`.
    pub fn complement_in(&self, larger: &Subspace) -> Vec<Vector> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in larger.basis_vectors() {
            if !acc.contains(&v) {
                acc = acc.sum(&Subspace::span(self.ambient, std::slice::from_ref(&v))).expect("same ambient");
                out.push(v);
            }
        }
        out
    }

    /// Image of the subspace under `m` (as a subspace of `m.rows()`-space).
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient);
        let vs: Vec<Vector> = self.basis_vectors().iter().map(|b| m.mul_vec(b)).collect();
        Subspace::span(m.rows(), &vs)
    }
}

/// Operations offered by the subspace calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceOp {
    Sum,
    Intersect,
    Equal,
    Contains,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubspaceOutcome {
    Space(Subspace),
    Bool(bool),
}

pub fn subspace_calculus(u: &Subspace, w: &Subspace, op: SubspaceOp) -> Result<SubspaceOutcome> {
    Ok(match op {
        SubspaceOp::Sum => SubspaceOutcome::Space(u.sum(w)?),
        SubspaceOp::Intersect => SubspaceOutcome::Space(u.intersect(w)?),
        SubspaceOp::Equal => SubspaceOutcome::Bool(u.equals(w)?),
        SubspaceOp::Contains => SubspaceOutcome::Bool(u.contains_subspace(w)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::unit_vector;

    #[test]
    fn coordinate_intersection() {
        let u = Subspace::span(3, &[unit_vector(3, 0), unit_vector(3, 1)]);
        let w = Subspace::span(3, &[unit_vector(3, 1), unit_vector(3, 2)]);
        match subspace_calculus(&u, &w, SubspaceOp::Intersect).unwrap() {
            SubspaceOutcome::Space(s) => assert_eq!(s, Subspace::span(3, &[unit_vector(3, 1)])),
            _ => unreachable!(),
        }
        assert_eq!(u.sum(&w).unwrap(), Subspace::full(3));
    }

    #[test]
    fn reflexive_equality_and_mismatch() {
        let u = Subspace::span(3, &[unit_vector(3, 0)]);
        assert_eq!(
            subspace_calculus(&u, &u, SubspaceOp::Equal).unwrap(),
            SubspaceOutcome::Bool(true)
        );
        assert!(u.sum(&Subspace::zero(4)).is_err());
        assert!(u.intersect(&Subspace::zero(2)).is_err());
    }

    #[test]
    fn coordinates_roundtrip() {
        let v1: Vector = [1, 2, 3].iter().map(|&x| Scalar::from_int(x)).collect();
        let v2: Vector = [0, 1, -1].iter().map(|&x| Scalar::from_int(x)).collect();
        let s = Subspace::span(3, &[v1.clone(), v2]);
        let c = s.coordinates(&v1).unwrap();
        assert_eq!(s.combine(&c), v1);
        assert!(s.coordinates(&unit_vector(3, 2)).is_none() || s.contains(&unit_vector(3, 2)));
    }
}
