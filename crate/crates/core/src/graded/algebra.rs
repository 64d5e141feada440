use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use super::map::GradedMap;
use super::space::GradedSpace;
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Matrix, Scalar, Vector};

/// Sparse vector keyed by global basis index.
pub type SparseVec = BTreeMap<usize, Scalar>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Associative,
    Lie,
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraKind::Associative => "associative",
            AlgebraKind::Lie => "lie",
        })
    }
}

impl FromStr for AlgebraKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "associative" => Ok(AlgebraKind::Associative),
            "lie" => Ok(AlgebraKind::Lie),
            other => Err(Error::Invalid(format!("unknown algebra kind {other:?}"))),
        }
    }
}

/// Names of the raising, lowering and Cartan operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Names {
    pub e: String,
    pub f: String,
    pub h: String,
}

/// A graded space with named endomorphisms and a bilinear operation given by
/// structure constants on basis pairs.
///
/// Shift-1 maps play the role of differentials; shift-0 maps carry the
/// sl(2)-action and the J-conjugation when present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredAlgebra {
    space: GradedSpace,
    kind: AlgebraKind,
    maps: BTreeMap<String, GradedMap>,
    table: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
    sl2: Option<Sl2Names>,
    j_name: Option<String>,
}

impl StructuredAlgebra {
    pub fn new(space: GradedSpace, kind: AlgebraKind) -> Self {
        StructuredAlgebra {
            space,
            kind,
            maps: BTreeMap::new(),
            table: BTreeMap::new(),
            sl2: None,
            j_name: None,
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn set_kind(&mut self, kind: AlgebraKind) {
        self.kind = kind;
    }

    pub fn maps(&self) -> &BTreeMap<String, GradedMap> {
        &self.maps
    }

    pub fn map(&self, name: &str) -> Result<&GradedMap> {
        self.maps
            .get(name)
            .ok_or_else(|| Error::UnknownMap(name.to_string()))
    }

    /// Named map required to have shift 1.
    pub fn differential(&self, name: &str) -> Result<&GradedMap> {
        let m = self.map(name)?;
        if m.shift() != 1 {
            return Err(Error::WrongShift {
                name: name.to_string(),
                shift: m.shift(),
                expected: 1,
            });
        }
        Ok(m)
    }

    pub fn differential_names(&self) -> Vec<String> {
        self.maps
            .iter()
            .filter(|(_, m)| m.shift() == 1)
            .map(|(n, _)| n.clone())
            .collect()
    }

    pub fn insert_map(&mut self, name: impl Into<String>, map: GradedMap) -> Result<()> {
        let name = name.into();
        let dims = self.space.dims();
        let nonzero = |m: &BTreeMap<i32, usize>| -> BTreeMap<i32, usize> {
            m.iter().filter(|(_, &d)| d > 0).map(|(&k, &d)| (k, d)).collect()
        };
        if nonzero(map.source_dims()) != dims || nonzero(map.target_dims()) != dims {
            return Err(Error::DimensionMismatch(format!(
                "map {name:?} does not act on the algebra's graded space"
            )));
        }
        self.maps.insert(name, map);
        Ok(())
    }

    pub fn remove_map(&mut self, name: &str) -> Option<GradedMap> {
        self.maps.remove(name)
    }

    pub fn zero_map(&self, shift: i32) -> GradedMap {
        GradedMap::zero(&self.space, &self.space, shift)
    }

    pub fn sl2_names(&self) -> Option<&Sl2Names> {
        self.sl2.as_ref()
    }

    pub fn set_sl2_names(&mut self, names: Option<Sl2Names>) {
        self.sl2 = names;
    }

    pub fn j_name(&self) -> Option<&str> {
        self.j_name.as_deref()
    }

    pub fn set_j_name(&mut self, name: Option<String>) {
        self.j_name = name;
    }

    /// Adds `c` to the coefficient of basis `k` in the product of basis `i` and `j`.
    pub fn add_structure(&mut self, i: usize, j: usize, k: usize, c: Scalar) -> Result<()> {
        let (di, dj, dk) = (
            self.space.degree_of_global(i),
            self.space.degree_of_global(j),
            self.space.degree_of_global(k),
        );
        if di + dj != dk {
            return Err(Error::GradingViolation {
                i: self.space.global_label(i).to_string(),
                j: self.space.global_label(j).to_string(),
                k: self.space.global_label(k).to_string(),
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.table.entry((i, j)).or_default();
        match entry.iter_mut().find(|(kk, _)| *kk == k) {
            Some((_, v)) => *v += c,
            None => entry.push((k, c)),
        }
        entry.retain(|(_, v)| !v.is_zero());
        entry.sort_by_key(|(kk, _)| *kk);
        if entry.is_empty() {
            self.table.remove(&(i, j));
        }
        Ok(())
    }

    pub fn add_structure_labels(&mut self, i: &str, j: &str, k: &str, c: Scalar) -> Result<()> {
        let gi = self.global_of(i)?;
        let gj = self.global_of(j)?;
        let gk = self.global_of(k)?;
        self.add_structure(gi, gj, gk, c)
    }

    pub fn global_of(&self, label: &str) -> Result<usize> {
        let (d, i) = self.space.locate_or_err(label)?;
        Ok(self.space.global(d, i))
    }

    pub fn clear_structure(&mut self) {
        self.table.clear();
    }

    /// All nonzero structure constants `(i, j, k, c)` in global indices, sorted.
    pub fn structure_triples(&self) -> Vec<(usize, usize, usize, Scalar)> {
        self.table
            .iter()
            .flat_map(|(&(i, j), v)| v.iter().map(move |(k, c)| (i, j, *k, c.clone())))
            .collect()
    }

    pub fn nonzero_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.table.keys().copied()
    }

    pub fn has_zero_structure(&self) -> bool {
        self.table.is_empty()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        self.table.get(&(i, j)).map_or(&[], |v| v.as_slice())
    }

    pub fn multiply_sparse(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, a) in x {
            for (&j, b) in y {
                let prod = self.basis_product(i, j);
                if prod.is_empty() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in prod {
                    *out.entry(*k).or_insert_with(Scalar::zero) += &ab * c;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Product of homogeneous elements of degrees `dx`, `dy`, as a vector of degree `dx + dy`.
    pub fn multiply(&self, dx: i32, x: &[Scalar], dy: i32, y: &[Scalar]) -> Vector {
        let sx = self.to_sparse(dx, x);
        let sy = self.to_sparse(dy, y);
        self.to_dense(dx + dy, &self.multiply_sparse(&sx, &sy))
    }

    pub fn to_sparse(&self, degree: i32, v: &[Scalar]) -> SparseVec {
        assert_eq!(v.len(), self.space.dim(degree), "to_sparse: length mismatch");
        let off = self.space.offset(degree);
        v.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (off + i, c.clone()))
            .collect()
    }

    /// Dense component of `s` in `degree`; entries of other degrees must be absent.
    pub fn to_dense(&self, degree: i32, s: &SparseVec) -> Vector {
        let n = self.space.dim(degree);
        let mut out = zero_vector(n);
        let off = self.space.offset(degree);
        for (&g, c) in s {
            debug_assert_eq!(self.space.degree_of_global(g), degree);
            out[g - off] = c.clone();
        }
        out
    }

    pub fn basis_sparse(&self, g: usize) -> SparseVec {
        SparseVec::from([(g, Scalar::from_int(1))])
    }

    /// Applies a graded map to a sparse vector (possibly inhomogeneous).
    pub fn apply_sparse(&self, m: &GradedMap, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&g, c) in x {
            let (d, i) = self.space.from_global(g);
            let b = m.block(d);
            let td = d + m.shift();
            if b.rows() == 0 {
                continue;
            }
            let toff = self.space.offset(td);
            for r in 0..b.rows() {
                let e = b.get(r, i);
                if !e.is_zero() {
                    *out.entry(toff + r).or_insert_with(Scalar::zero) += e * c;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Matrix of `y ↦ x·y` from degree `dy` to `dx + dy`.
    pub fn left_multiplication(&self, dx: i32, x: &[Scalar], dy: i32) -> Matrix {
        let n = self.space.dim(dy);
        let cols: Vec<Vector> = (0..n)
            .map(|j| self.multiply(dx, x, dy, &self.space.basis_vector(dy, j)))
            .collect();
        Matrix::from_columns(self.space.dim(dx + dy), &cols)
    }

    /// Matrix of `x ↦ x·y` from degree `dx` to `dx + dy`.
    pub fn right_multiplication(&self, dx: i32, dy: i32, y: &[Scalar]) -> Matrix {
        let n = self.space.dim(dx);
        let cols: Vec<Vector> = (0..n)
            .map(|i| self.multiply(dx, &self.space.basis_vector(dx, i), dy, y))
            .collect();
        Matrix::from_columns(self.space.dim(dx + dy), &cols)
    }

    /// Direct sum with disjoint labels; maps present in either summand are
    /// extended by zero on the other.
    pub fn direct_sum(&self, other: &StructuredAlgebra) -> Result<StructuredAlgebra> {
        if self.kind != other.kind {
            return Err(Error::WrongKind {
                expected: self.kind.to_string(),
                found: other.kind.to_string(),
            });
        }
        let mut comps: BTreeMap<i32, Vec<String>> = BTreeMap::new();
        for k in self.space.degrees() {
            comps.entry(k).or_default().extend(self.space.labels(k).iter().cloned());
        }
        for k in other.space.degrees() {
            comps.entry(k).or_default().extend(other.space.labels(k).iter().cloned());
        }
        let space = GradedSpace::new(comps)?;
        let mut out = StructuredAlgebra::new(space, self.kind);
        let embed = |out: &StructuredAlgebra, src: &StructuredAlgebra, g: usize| -> usize {
            let l = src.space.global_label(g);
            let (d, i) = out.space.locate(l).expect("label present");
            out.space.global(d, i)
        };
        for src in [self, other] {
            for (i, j, k, c) in src.structure_triples() {
                let (a, b, e) = (embed(&out, src, i), embed(&out, src, j), embed(&out, src, k));
                out.add_structure(a, b, e, c)?;
            }
        }
        let names: std::collections::BTreeSet<String> =
            self.maps.keys().chain(other.maps.keys()).cloned().collect();
        for name in names {
            let shift = match (self.maps.get(&name), other.maps.get(&name)) {
                (Some(a), Some(b)) if a.shift() != b.shift() => {
                    return Err(Error::WrongShift {
                        name,
                        shift: b.shift(),
                        expected: a.shift(),
                    })
                }
                (Some(a), _) => a.shift(),
                (None, Some(b)) => b.shift(),
                (None, None) => unreachable!(),
            };
            let mut m = out.zero_map(shift);
            for src in [self, other] {
                if let Some(sm) = src.maps.get(&name) {
                    for (k, b) in sm.stored_blocks() {
                        for r in 0..b.rows() {
                            for c in 0..b.cols() {
                                let e = b.get(r, c);
                                if e.is_zero() {
                                    continue;
                                }
                                let from = embed(&out, src, src.space.global(k, c));
                                let to = embed(&out, src, src.space.global(k + shift, r));
                                let (fd, fi) = out.space.from_global(from);
                                let (_, ti) = out.space.from_global(to);
                                m.add_entry(fd, fi, ti, e);
                            }
                        }
                    }
                }
            }
            out.insert_map(name, m)?;
        }
        if self.sl2 == other.sl2 {
            out.sl2 = self.sl2.clone();
        }
        if self.j_name == other.j_name {
            out.j_name = self.j_name.clone();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grading_enforced() {
        let s = GradedSpace::new([(0, vec!["1"]), (1, vec!["x"])]).unwrap();
        let mut a = StructuredAlgebra::new(s, AlgebraKind::Associative);
        assert!(a
            .add_structure_labels("x", "x", "1", Scalar::from_int(1))
            .is_err());
        a.add_structure_labels("1", "x", "x", Scalar::from_int(1)).unwrap();
        let x = a.multiply(0, &[Scalar::from_int(2)], 1, &[Scalar::from_int(3)]);
        assert_eq!(x, vec![Scalar::from_int(6)]);
    }
}
