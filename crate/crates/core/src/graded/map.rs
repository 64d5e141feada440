use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::space::GradedSpace;
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Matrix, Scalar, Vector};

/// A linear map of fixed degree `shift`: the block at degree `k` sends the
/// source component `k` to the target component `k + shift`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    shift: i32,
    source_dims: BTreeMap<i32, usize>,
    target_dims: BTreeMap<i32, usize>,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedMap {
    pub fn zero(source: &GradedSpace, target: &GradedSpace, shift: i32) -> Self {
        GradedMap::zero_from_dims(source.dims(), target.dims(), shift)
    }

    pub fn zero_from_dims(
        source_dims: BTreeMap<i32, usize>,
        target_dims: BTreeMap<i32, usize>,
        shift: i32,
    ) -> Self {
        GradedMap {
            shift,
            source_dims: source_dims.into_iter().filter(|&(_, d)| d > 0).collect(),
            target_dims: target_dims.into_iter().filter(|&(_, d)| d > 0).collect(),
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(space: &GradedSpace) -> Self {
        let mut m = GradedMap::zero(space, space, 0);
        for k in space.degrees() {
            m.blocks.insert(k, Matrix::identity(space.dim(k)));
        }
        m
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn source_dim(&self, k: i32) -> usize {
        self.source_dims.get(&k).copied().unwrap_or(0)
    }

    pub fn target_dim(&self, k: i32) -> usize {
        self.target_dims.get(&k).copied().unwrap_or(0)
    }

    pub fn source_dims(&self) -> &BTreeMap<i32, usize> {
        &self.source_dims
    }

    pub fn target_dims(&self) -> &BTreeMap<i32, usize> {
        &self.target_dims
    }

    pub fn source_degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.source_dims.keys().copied()
    }

    /// Block from source degree `k`; zero when absent.
    pub fn block(&self, k: i32) -> Matrix {
        self.blocks
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.target_dim(k + self.shift), self.source_dim(k)))
    }

    pub fn stored_blocks(&self) -> impl Iterator<Item = (i32, &Matrix)> {
        self.blocks.iter().map(|(&k, m)| (k, m))
    }

    pub fn set_block(&mut self, k: i32, m: Matrix) -> Result<()> {
        let expected = (self.target_dim(k + self.shift), self.source_dim(k));
        if m.shape() != expected {
            return Err(Error::DimensionMismatch(format!(
                "block at degree {k} has shape {:?}, expected {:?}",
                m.shape(),
                expected
            )));
        }
        if m.rows() == 0 || m.cols() == 0 {
            return Ok(());
        }
        if m.is_zero() {
            self.blocks.remove(&k);
        } else {
            self.blocks.insert(k, m);
        }
        Ok(())
    }

    /// Adds `c` to the entry mapping source basis `(k, from)` to target basis `(k + shift, to)`.
    pub fn add_entry(&mut self, k: i32, from: usize, to: usize, c: &Scalar) {
        let (r, cdim) = (self.target_dim(k + self.shift), self.source_dim(k));
        let b = self
            .blocks
            .entry(k)
            .or_insert_with(|| Matrix::zeros(r, cdim));
        b.add_to(to, from, c);
    }

    pub fn apply(&self, k: i32, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.source_dim(k), "apply: vector length mismatch");
        match self.blocks.get(&k) {
            Some(b) => b.mul_vec(v),
            None => zero_vector(self.target_dim(k + self.shift)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Matrix::is_zero)
    }

    /// `self ∘ rhs`
    pub fn compose(&self, rhs: &GradedMap) -> Result<GradedMap> {
        for (&k, &d) in &rhs.target_dims {
            if self.source_dim(k) != d {
                return Err(Error::DimensionMismatch(format!(
                    "composition: intermediate degree {k} has dims {d} vs {}",
                    self.source_dim(k)
                )));
            }
        }
        let mut out = GradedMap::zero_from_dims(
            rhs.source_dims.clone(),
            self.target_dims.clone(),
            self.shift + rhs.shift,
        );
        for (&k, b) in &rhs.blocks {
            if let Some(a) = self.blocks.get(&(k + rhs.shift)) {
                out.set_block(k, a.mul(b))?;
            }
        }
        Ok(out)
    }

    fn combine(&self, other: &GradedMap, sign: &Scalar) -> Result<GradedMap> {
        if self.shift != other.shift
            || self.source_dims != other.source_dims
            || self.target_dims != other.target_dims
        {
            return Err(Error::DimensionMismatch("adding incompatible graded maps".into()));
        }
        let mut out = self.clone();
        let degrees: BTreeSet<i32> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        for k in degrees {
            let b = self.block(k).add(&other.block(k).scale(sign));
            out.set_block(k, b)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.combine(other, &Scalar::from_int(1))
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.combine(other, &Scalar::from_int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        let mut out = self.clone();
        if c.is_zero() {
            out.blocks.clear();
            return out;
        }
        for b in out.blocks.values_mut() {
            *b = b.scale(c);
        }
        out
    }

    /// Graded commutator `a∘b − (−1)^{|a||b|} b∘a` of two endomorphisms.
    pub fn graded_commutator(a: &GradedMap, b: &GradedMap) -> Result<GradedMap> {
        let ab = a.compose(b)?;
        let ba = b.compose(a)?;
        if (a.shift * b.shift).rem_euclid(2) == 0 {
            ab.sub(&ba)
        } else {
            ab.add(&ba)
        }
    }

    /// First degree with a nonzero block, together with a source basis index
    /// whose image is nonzero.
    pub fn first_nonzero(&self) -> Option<(i32, usize)> {
        self.blocks.iter().find_map(|(&k, b)| {
            (0..b.cols())
                .find(|&j| (0..b.rows()).any(|i| !b.get(i, j).is_zero()))
                .map(|j| (k, j))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_commutator() {
        let s = GradedSpace::new([(0, vec!["a"]), (1, vec!["b"])]).unwrap();
        let mut d = GradedMap::zero(&s, &s, 1);
        d.add_entry(0, 0, 0, &Scalar::from_int(2));
        assert!(d.compose(&d).unwrap().is_zero());
        // [d, d] = 2 d^2 = 0
        assert!(GradedMap::graded_commutator(&d, &d).unwrap().is_zero());
        let id = GradedMap::identity(&s);
        assert_eq!(id.compose(&d).unwrap(), d);
        assert_eq!(d.apply(0, &[Scalar::from_int(3)]), vec![Scalar::from_int(6)]);
    }
}
