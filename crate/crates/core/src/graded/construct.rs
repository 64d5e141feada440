use std::collections::BTreeMap;

use num_traits::Zero;

use super::algebra::StructuredAlgebra;
use super::map::GradedMap;
use super::space::GradedSpace;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vector, unit_vector, Scalar, Subspace, Vector};

/// Per-degree subspaces of a graded space; absent degrees are zero.
pub type GradedSubspace = BTreeMap<i32, Subspace>;

pub fn graded_component(g: &GradedSubspace, space: &GradedSpace, k: i32) -> Subspace {
    g.get(&k)
        .cloned()
        .unwrap_or_else(|| Subspace::zero(space.dim(k)))
}

pub fn graded_dims(g: &GradedSubspace) -> BTreeMap<i32, usize> {
    g.iter().map(|(&k, s)| (k, s.dim())).collect()
}

/// Kernel of a named map, degree by degree.
pub fn map_kernel(a: &StructuredAlgebra, m: &GradedMap) -> GradedSubspace {
    a.space()
        .degrees()
        .map(|k| (k, super::cohomology::block_kernel(m, k)))
        .collect()
}

/// Image of a map, degree by degree.
pub fn map_image(a: &StructuredAlgebra, m: &GradedMap) -> GradedSubspace {
    a.space()
        .degrees()
        .map(|k| (k, super::cohomology::block_image_into(m, k)))
        .collect()
}

/// First vector of `sub` whose image under `m` leaves `sub`.
pub fn stability_witness(
    space: &GradedSpace,
    sub: &GradedSubspace,
    m: &GradedMap,
) -> Option<(i32, Vector)> {
    for (&k, s) in sub {
        let t = graded_component(sub, space, k + m.shift());
        for v in s.basis_vectors() {
            let img = m.apply(k, &v);
            if !img.is_empty() && !t.contains(&img) {
                return Some((k, v));
            }
        }
    }
    None
}

fn sub_label(space: &GradedSpace, k: i32, i: usize, v: &[Scalar]) -> String {
    let nz: Vec<usize> = (0..v.len()).filter(|&j| !v[j].is_zero()).collect();
    if nz.len() == 1 && v[nz[0]] == Scalar::from_int(1) {
        space.label(k, nz[0]).to_string()
    } else {
        format!("<{k}.{i}>")
    }
}

/// Sub-algebra on the given subspaces, together with its inclusion.
///
/// The subspaces must be closed under the product. Maps preserving the
/// subspaces are restricted; the others are dropped.
pub fn sub_algebra(
    a: &StructuredAlgebra,
    sub: &GradedSubspace,
) -> Result<(StructuredAlgebra, GradedMap)> {
    let space = a.space();
    let comps: Vec<(i32, Vec<String>)> = space
        .degrees()
        .map(|k| {
            let s = graded_component(sub, space, k);
            let labels = s
                .basis_vectors()
                .iter()
                .enumerate()
                .map(|(i, v)| sub_label(space, k, i, v))
                .collect();
            (k, labels)
        })
        .collect();
    let sspace = GradedSpace::new(comps)?;
    let mut out = StructuredAlgebra::new(sspace.clone(), a.kind());
    let mut inclusion = GradedMap::zero(&sspace, space, 0);
    for k in sspace.degrees() {
        let s = graded_component(sub, space, k);
        for (i, v) in s.basis_vectors().iter().enumerate() {
            for (j, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    inclusion.add_entry(k, i, j, c);
                }
            }
        }
    }
    let basis: Vec<(i32, Vector)> = sspace
        .degrees()
        .flat_map(|k| {
            graded_component(sub, space, k)
                .basis_vectors()
                .into_iter()
                .map(move |v| (k, v))
        })
        .collect();
    for (gi, (ki, vi)) in basis.iter().enumerate() {
        for (gj, (kj, vj)) in basis.iter().enumerate() {
            let p = a.multiply(*ki, vi, *kj, vj);
            if is_zero_vector(&p) {
                continue;
            }
            let target = graded_component(sub, space, ki + kj);
            let coords = target.coordinates(&p).ok_or_else(|| Error::NotStable {
                map: "product".into(),
                witness: format!(
                    "({}, {})",
                    sspace.global_label(gi),
                    sspace.global_label(gj)
                ),
            })?;
            for (l, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    out.add_structure(gi, gj, sspace.global(ki + kj, l), c)?;
                }
            }
        }
    }
    for (name, m) in a.maps() {
        if stability_witness(space, sub, m).is_some() {
            continue;
        }
        let mut r = GradedMap::zero(&sspace, &sspace, m.shift());
        for k in sspace.degrees() {
            let t = graded_component(sub, space, k + m.shift());
            for (i, v) in graded_component(sub, space, k).basis_vectors().iter().enumerate() {
                let img = m.apply(k, v);
                if img.is_empty() {
                    continue;
                }
                let coords = t.coordinates(&img).expect("stable");
                for (j, c) in coords.iter().enumerate() {
                    if !c.is_zero() {
                        r.add_entry(k, i, j, c);
                    }
                }
            }
        }
        out.insert_map(name.clone(), r)?;
    }
    Ok((out, inclusion))
}

/// Quotient by a graded two-sided ideal, with the canonical complement
/// spanned by the non-pivot basis vectors.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: StructuredAlgebra,
    pub projection: GradedMap,
    pub section: GradedMap,
}

/// Checks that `ideal` is a two-sided ideal for the product.
pub fn ideal_witness(a: &StructuredAlgebra, ideal: &GradedSubspace) -> Option<String> {
    let space = a.space();
    for (&k, s) in ideal {
        for v in s.basis_vectors() {
            for l in space.degrees() {
                let t = graded_component(ideal, space, k + l);
                for j in 0..space.dim(l) {
                    let e = unit_vector(space.dim(l), j);
                    let left = a.multiply(l, &e, k, &v);
                    let right = a.multiply(k, &v, l, &e);
                    if (!left.is_empty() && !t.contains(&left)) || (!right.is_empty() && !t.contains(&right)) {
                        return Some(format!(
                            "product of an ideal vector in degree {k} with {} leaves the ideal",
                            space.label(l, j)
                        ));
                    }
                }
            }
        }
    }
    None
}

/// Quotient algebra. Maps named in `required` must preserve the ideal;
/// other maps are induced when they do and dropped otherwise.
pub fn quotient_algebra(
    a: &StructuredAlgebra,
    ideal: &GradedSubspace,
    required: &[&str],
) -> Result<Quotient> {
    let space = a.space();
    if let Some(w) = ideal_witness(a, ideal) {
        return Err(Error::NotStable {
            map: "product".into(),
            witness: w,
        });
    }
    let mut keep: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    let comps: Vec<(i32, Vec<String>)> = space
        .degrees()
        .map(|k| {
            let s = graded_component(ideal, space, k);
            let idx: Vec<usize> = (0..space.dim(k)).filter(|j| !s.pivots().contains(j)).collect();
            let labels = idx.iter().map(|&j| space.label(k, j).to_string()).collect();
            keep.insert(k, idx);
            (k, labels)
        })
        .collect();
    let qspace = GradedSpace::new(comps)?;
    let mut projection = GradedMap::zero(space, &qspace, 0);
    let mut section = GradedMap::zero(&qspace, space, 0);
    for k in space.degrees() {
        let s = graded_component(ideal, space, k);
        for j in 0..space.dim(k) {
            let r = s.reduce(&unit_vector(space.dim(k), j));
            for (qi, &orig) in keep[&k].iter().enumerate() {
                if !r[orig].is_zero() {
                    projection.add_entry(k, j, qi, &r[orig]);
                }
            }
        }
        for (qi, &orig) in keep[&k].iter().enumerate() {
            section.add_entry(k, qi, orig, &Scalar::from_int(1));
        }
    }
    let mut out = StructuredAlgebra::new(qspace.clone(), a.kind());
    for ki in qspace.degrees() {
        for i in 0..qspace.dim(ki) {
            let vi = section.apply(ki, &unit_vector(qspace.dim(ki), i));
            for kj in qspace.degrees() {
                for j in 0..qspace.dim(kj) {
                    let vj = section.apply(kj, &unit_vector(qspace.dim(kj), j));
                    let p = a.multiply(ki, &vi, kj, &vj);
                    if is_zero_vector(&p) {
                        continue;
                    }
                    let q = projection.apply(ki + kj, &p);
                    for (l, c) in q.into_iter().enumerate() {
                        if !c.is_zero() {
                            out.add_structure(
                                qspace.global(ki, i),
                                qspace.global(kj, j),
                                qspace.global(ki + kj, l),
                                c,
                            )?;
                        }
                    }
                }
            }
        }
    }
    for (name, m) in a.maps() {
        if let Some((k, v)) = stability_witness(space, ideal, m) {
            if required.contains(&name.as_str()) {
                return Err(Error::NotStable {
                    map: name.clone(),
                    witness: space.witness(k, &v).to_string(),
                });
            }
            continue;
        }
        let induced = projection.compose(&m.compose(&section)?)?;
        out.insert_map(name.clone(), induced)?;
    }
    for name in required {
        a.map(name)?;
    }
    out.set_sl2_names(a.sl2_names().cloned());
    if let Some(j) = a.j_name() {
        if out.maps().contains_key(j) {
            out.set_j_name(Some(j.to_string()));
        }
    }
    Ok(Quotient {
        algebra: out,
        projection,
        section,
    })
}
