use std::collections::BTreeMap;

use num_traits::Zero;

use super::algebra::StructuredAlgebra;
use super::map::GradedMap;
use super::space::GradedSpace;
use super::validate::AxiomCheck;
use crate::error::{Error, Result};
use crate::linalg::{add_vectors, is_zero_vector, Matrix, Scalar, Subspace, Vector};

/// Degree, index and representative of a cohomology class.
type RepRef<'a> = (i32, usize, &'a Vector);

/// Kernel of a block, treating an empty target as the zero map.
pub fn block_kernel(m: &GradedMap, k: i32) -> Subspace {
    let n = m.source_dim(k);
    if m.target_dim(k + m.shift()) == 0 {
        return Subspace::full(n);
    }
    m.block(k).kernel()
}

/// Image of the block landing in degree `k`.
pub fn block_image_into(m: &GradedMap, k: i32) -> Subspace {
    let n = m.target_dim(k);
    if m.source_dim(k - m.shift()) == 0 {
        return Subspace::zero(n);
    }
    m.block(k - m.shift()).image()
}

#[derive(Clone, Debug)]
pub struct DegreeCohomology {
    pub degree: i32,
    pub cycles: Subspace,
    pub boundaries: Subspace,
    /// Basis of a complement of the boundaries inside the cycles.
    pub representatives: Vec<Vector>,
    to_class: Matrix,
}

impl DegreeCohomology {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

/// Cohomology of a graded space with respect to one differential, with
/// chosen representatives and the projection from cycles to classes.
#[derive(Clone, Debug)]
pub struct CohomologyPresentation {
    name: String,
    source: StructuredAlgebra,
    degrees: BTreeMap<i32, DegreeCohomology>,
    space: GradedSpace,
}

impl CohomologyPresentation {
    pub fn compute(a: &StructuredAlgebra, d: &str) -> Result<Self> {
        let dm = a.differential(d)?.clone();
        Self::of_map(a, d, &dm)
    }

    /// Cohomology with respect to an arbitrary square-zero shift-1 map.
    pub fn of_map(a: &StructuredAlgebra, name: &str, d: &GradedMap) -> Result<Self> {
        if d.shift() != 1 {
            return Err(Error::WrongShift {
                name: name.to_string(),
                shift: d.shift(),
                expected: 1,
            });
        }
        let dd = d.compose(d)?;
        if let Some((k, _)) = dd.first_nonzero() {
            return Err(Error::NotSquareZero {
                name: name.to_string(),
                degree: k,
            });
        }
        let mut degrees = BTreeMap::new();
        let mut comps: Vec<(i32, Vec<String>)> = Vec::new();
        let space = a.space();
        for k in space.degrees() {
            let cycles = block_kernel(d, k);
            let boundaries = block_image_into(d, k);
            let representatives = boundaries.complement_in(&cycles);
            let mut cols: Vec<Vector> = representatives
                .iter()
                .map(|r| cycles.coordinates(r).expect("representative is a cycle"))
                .collect();
            for b in boundaries.basis_vectors() {
                cols.push(cycles.coordinates(&b).expect("boundary is a cycle"));
            }
            let change = Matrix::from_columns(cycles.dim(), &cols);
            let inv = change
                .inverse()
                .ok_or_else(|| Error::Internal("cycle basis change not invertible".into()))?;
            let h = representatives.len();
            let to_class = Matrix::from_fn(h, cycles.dim(), |i, j| inv.get(i, j).clone());
            let labels: Vec<String> = representatives
                .iter()
                .enumerate()
                .map(|(i, r)| rep_label(space, k, i, r))
                .collect();
            comps.push((k, labels));
            degrees.insert(
                k,
                DegreeCohomology {
                    degree: k,
                    cycles,
                    boundaries,
                    representatives,
                    to_class,
                },
            );
        }
        Ok(CohomologyPresentation {
            name: name.to_string(),
            source: a.clone(),
            degrees,
            space: GradedSpace::new(comps)?,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &StructuredAlgebra {
        &self.source
    }

    /// Graded space with one basis vector per representative.
    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self, k: i32) -> usize {
        self.degrees.get(&k).map_or(0, DegreeCohomology::dim)
    }

    /// Dimensions over the support of the source, zeros included.
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.degrees.iter().map(|(&k, d)| (k, d.dim())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(DegreeCohomology::dim).sum()
    }

    pub fn degree(&self, k: i32) -> Option<&DegreeCohomology> {
        self.degrees.get(&k)
    }

    pub fn representatives(&self, k: i32) -> &[Vector] {
        self.degrees
            .get(&k)
            .map_or(&[], |d| d.representatives.as_slice())
    }

    pub fn is_closed(&self, k: i32, v: &[Scalar]) -> bool {
        match self.degrees.get(&k) {
            Some(d) => d.cycles.contains(v),
            None => true,
        }
    }

    pub fn is_exact(&self, k: i32, v: &[Scalar]) -> bool {
        match self.degrees.get(&k) {
            Some(d) => d.boundaries.contains(v),
            None => true,
        }
    }

    /// Class of a closed vector in representative coordinates; `None` when not closed.
    pub fn class_of(&self, k: i32, v: &[Scalar]) -> Option<Vector> {
        match self.degrees.get(&k) {
            Some(d) => d.cycles.coordinates(v).map(|c| d.to_class.mul_vec(&c)),
            None => Some(Vec::new()),
        }
    }

    /// Vector of the source representing the class with the given coordinates.
    pub fn representative(&self, k: i32, class: &[Scalar]) -> Vector {
        let d = &self.degrees[&k];
        let mut out = crate::linalg::zero_vector(self.source.space().dim(k));
        for (c, r) in class.iter().zip(&d.representatives) {
            crate::linalg::axpy(&mut out, c, r);
        }
        out
    }

    /// Cohomology algebra with the induced product and a zero differential
    /// under the same name.
    pub fn induced_algebra(&self) -> Result<StructuredAlgebra> {
        let mut h = StructuredAlgebra::new(self.space.clone(), self.source.kind());
        let pairs = self.rep_pairs();
        for ((ki, i, ri), (kj, j, rj)) in pairs {
            let p = self.source.multiply(ki, ri, kj, rj);
            if is_zero_vector(&p) {
                continue;
            }
            let class = self.class_of(ki + kj, &p).ok_or_else(|| {
                Error::Structural(format!(
                    "product of representatives is not {}-closed in degree {}",
                    self.name,
                    ki + kj
                ))
            })?;
            let gi = self.space.global(ki, i);
            let gj = self.space.global(kj, j);
            for (l, c) in class.iter().enumerate() {
                if !c.is_zero() {
                    h.add_structure(gi, gj, self.space.global(ki + kj, l), c.clone())?;
                }
            }
        }
        let z = h.zero_map(1);
        h.insert_map(self.name.clone(), z)?;
        Ok(h)
    }

    fn rep_pairs(&self) -> Vec<(RepRef<'_>, RepRef<'_>)> {
        let reps: Vec<(i32, usize, &Vector)> = self
            .degrees
            .iter()
            .flat_map(|(&k, d)| d.representatives.iter().enumerate().map(move |(i, r)| (k, i, r)))
            .collect();
        let mut out = Vec::new();
        for a in &reps {
            for b in &reps {
                out.push((*a, *b));
            }
        }
        out
    }

    /// Representative independence of the induced product: perturbing either
    /// factor by a boundary leaves the class of the product unchanged.
    pub fn check_well_defined(&self) -> AxiomCheck {
        let mut witness = None;
        'outer: for ((ki, _, ri), (kj, _, rj)) in self.rep_pairs() {
            let base = self.source.multiply(ki, ri, kj, rj);
            let Some(base_class) = self.class_of(ki + kj, &base) else {
                witness = Some(format!("product in degree {} not closed", ki + kj));
                break;
            };
            for b in self.degrees[&ki].boundaries.basis_vectors() {
                let p = self.source.multiply(ki, &add_vectors(ri, &b), kj, rj);
                if self.class_of(ki + kj, &p).as_ref() != Some(&base_class) {
                    witness = Some(format!("left factor perturbed by a boundary in degree {ki}"));
                    break 'outer;
                }
            }
            for b in self.degrees[&kj].boundaries.basis_vectors() {
                let p = self.source.multiply(ki, ri, kj, &add_vectors(rj, &b));
                if self.class_of(ki + kj, &p).as_ref() != Some(&base_class) {
                    witness = Some(format!("right factor perturbed by a boundary in degree {kj}"));
                    break 'outer;
                }
            }
        }
        AxiomCheck {
            axiom: "induced product is independent of representatives".into(),
            passed: witness.is_none(),
            witness,
        }
    }

    /// Map induced on cohomology by `f`, which must send cycles to cycles and
    /// boundaries to boundaries.
    pub fn induced_map(
        f: &GradedMap,
        source: &CohomologyPresentation,
        target: &CohomologyPresentation,
    ) -> Result<GradedMap> {
        let mut out = GradedMap::zero(&source.space, &target.space, f.shift());
        for (&k, dc) in &source.degrees {
            let tk = k + f.shift();
            let block = f.block(k);
            for b in dc.boundaries.basis_vectors() {
                let img = block.mul_vec(&b);
                if !target.is_exact(tk, &img) {
                    return Err(Error::NotStable {
                        map: "induced map".into(),
                        witness: format!("image of a boundary in degree {k} is not exact"),
                    });
                }
            }
            for (i, r) in dc.representatives.iter().enumerate() {
                let img = block.mul_vec(r);
                let class = target.class_of(tk, &img).ok_or_else(|| Error::NotStable {
                    map: "induced map".into(),
                    witness: format!(
                        "image of {} is not closed",
                        source.space.label(k, i)
                    ),
                })?;
                for (j, c) in class.iter().enumerate() {
                    if !c.is_zero() {
                        out.add_entry(k, i, j, c);
                    }
                }
            }
        }
        Ok(out)
    }
}

fn rep_label(space: &GradedSpace, k: i32, i: usize, r: &[Scalar]) -> String {
    let nz: Vec<usize> = (0..r.len()).filter(|&j| !r[j].is_zero()).collect();
    if nz.len() == 1 && r[nz[0]] == Scalar::from_int(1) {
        format!("[{}]", space.label(k, nz[0]))
    } else {
        format!("h{k}.{i}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::AlgebraKind;

    #[test]
    fn acyclic_pair() {
        let s = GradedSpace::new([(0, vec!["a"]), (1, vec!["b"])]).unwrap();
        let mut a = StructuredAlgebra::new(s, AlgebraKind::Associative);
        let mut d = a.zero_map(1);
        d.add_entry(0, 0, 0, &Scalar::from_int(1));
        a.insert_map("d", d).unwrap();
        let h = CohomologyPresentation::compute(&a, "d").unwrap();
        assert_eq!(h.total_dim(), 0);
        assert_eq!(h.class_of(1, &[Scalar::from_int(5)]), Some(vec![]));
    }

    #[test]
    fn rejects_non_square_zero() {
        let s = GradedSpace::new([(0, vec!["a"]), (1, vec!["b"]), (2, vec!["c"])]).unwrap();
        let mut a = StructuredAlgebra::new(s, AlgebraKind::Associative);
        let mut d = a.zero_map(1);
        d.add_entry(0, 0, 0, &Scalar::from_int(1));
        d.add_entry(1, 0, 0, &Scalar::from_int(1));
        a.insert_map("d", d).unwrap();
        match CohomologyPresentation::compute(&a, "d") {
            Err(Error::NotSquareZero { degree, .. }) => assert_eq!(degree, 0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
