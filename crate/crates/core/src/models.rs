//! Deterministic generators of finite-dimensional test models.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dgms::Bicomplex;
use crate::error::{Error, Result};
use crate::graded::{
    commutator_dgla, AlgebraKind, GradedMap, GradedSpace, Sl2Names, StructuredAlgebra,
};
use crate::linalg::{unit_vector, Matrix, Scalar, Vector};
use crate::qdolbeault::{ConnectionModel, DEL, DEL_BAR, DEL_BAR_J};

pub const D0: &str = "d0";
pub const D1: &str = "d1";
pub const D: &str = "d";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational `p/q` with `1 <= |p| <= 4`, `1 <= q <= 3`.
pub fn random_nonzero(rng: &mut impl Rng) -> Scalar {
    let p: i64 = rng.random_range(1..=4);
    let q: i64 = rng.random_range(1..=3);
    let s = if rng.random_bool(0.5) { 1 } else { -1 };
    Scalar::from_frac(s * p, q)
}

/// Integer in `[-2, 2]`.
pub fn random_small(rng: &mut impl Rng) -> Scalar {
    Scalar::from_int(rng.random_range(-2..=2))
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vector {
    (0..n).map(|_| random_small(rng)).collect()
}

/// Map on `space` with entries `(from, to, c)` given by labels.
pub fn map_from_entries(
    space: &GradedSpace,
    shift: i32,
    entries: &[(&str, &str, Scalar)],
) -> Result<GradedMap> {
    let mut m = GradedMap::zero(space, space, shift);
    for (from, to, c) in entries {
        let (fk, fi) = space.locate_or_err(from)?;
        let (tk, ti) = space.locate_or_err(to)?;
        if tk != fk + shift {
            return Err(Error::Invalid(format!(
                "entry {from} -> {to} does not have shift {shift}"
            )));
        }
        m.add_entry(fk, fi, ti, c);
    }
    Ok(m)
}

fn int(n: i64) -> Scalar {
    Scalar::from_int(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZigzagSide {
    /// `d0 z = w`
    D0,
    /// `d1 z = w`
    D1,
}

/// Parameters for a bicomplex built from dots, squares and zigzags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntheticRecipe {
    pub dots: BTreeMap<i32, usize>,
    pub squares: Vec<i32>,
    pub zigzags: Vec<(i32, ZigzagSide)>,
    pub seed: u64,
    /// Mix the basis within each degree by a seeded unipotent matrix.
    pub basis_change: bool,
    /// The first degree-0 dot acts as a two-sided unit.
    pub unit: bool,
}

impl Default for SyntheticRecipe {
    fn default() -> Self {
        SyntheticRecipe {
            dots: BTreeMap::new(),
            squares: Vec::new(),
            zigzags: Vec::new(),
            seed: 0,
            basis_change: false,
            unit: true,
        }
    }
}

impl SyntheticRecipe {
    pub fn total_dim(&self) -> usize {
        self.dots.values().sum::<usize>() + 4 * self.squares.len() + 2 * self.zigzags.len()
    }

    /// Seeded recipe with dots in degrees 0..=3 and squares based in 0..=2.
    pub fn random(seed: u64, zigzags: usize, max_dim: usize) -> Self {
        let mut r = rng(seed ^ 0x005e_ed0f_d075);
        loop {
            let mut dots = BTreeMap::new();
            for k in 0..=3 {
                let n = r.random_range(0..=3);
                if n > 0 {
                    dots.insert(k, n);
                }
            }
            dots.entry(0).or_insert(1);
            let nsq = r.random_range(1..=4);
            let squares = (0..nsq).map(|_| r.random_range(0..=2)).collect();
            let zz = (0..zigzags)
                .map(|_| {
                    let side = if r.random_bool(0.5) { ZigzagSide::D0 } else { ZigzagSide::D1 };
                    (r.random_range(0..=3), side)
                })
                .collect();
            let recipe = SyntheticRecipe {
                dots,
                squares,
                zigzags: zz,
                seed,
                basis_change: true,
                unit: true,
            };
            if recipe.total_dim() <= max_dim {
                return recipe;
            }
        }
    }
}

/// Associative algebra with differentials `d0`, `d1` realizing the recipe.
///
/// Square at base `k`: `d0 a = αb`, `d1 a = βc`, `d1 b = γe`, `d0 c = −(αγ/β) e`.
pub fn synthetic_algebra(recipe: &SyntheticRecipe) -> Result<StructuredAlgebra> {
    let mut r = rng(recipe.seed);
    let mut comps: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for (&k, &n) in &recipe.dots {
        for i in 0..n {
            comps.entry(k).or_default().push(format!("dot{k}.{i}"));
        }
    }
    for (n, &k) in recipe.squares.iter().enumerate() {
        comps.entry(k).or_default().push(format!("a{n}"));
        comps.entry(k + 1).or_default().push(format!("b{n}"));
        comps.entry(k + 1).or_default().push(format!("c{n}"));
        comps.entry(k + 2).or_default().push(format!("e{n}"));
    }
    for (n, &(k, _)) in recipe.zigzags.iter().enumerate() {
        comps.entry(k).or_default().push(format!("z{n}"));
        comps.entry(k + 1).or_default().push(format!("w{n}"));
    }
    let space = GradedSpace::new(comps)?;
    let mut a = StructuredAlgebra::new(space.clone(), AlgebraKind::Associative);
    let mut d0 = Vec::new();
    let mut d1 = Vec::new();
    let names: Vec<(String, String, String, String)> = (0..recipe.squares.len())
        .map(|n| (format!("a{n}"), format!("b{n}"), format!("c{n}"), format!("e{n}")))
        .collect();
    for (sa, sb, sc, se) in &names {
        let (al, be, ga) = (random_nonzero(&mut r), random_nonzero(&mut r), random_nonzero(&mut r));
        let delta = -(&al * &ga) / &be;
        d0.push((sa.clone(), sb.clone(), al));
        d1.push((sa.clone(), sc.clone(), be));
        d1.push((sb.clone(), se.clone(), ga));
        d0.push((sc.clone(), se.clone(), delta));
    }
    for (n, &(_, side)) in recipe.zigzags.iter().enumerate() {
        let e = (format!("z{n}"), format!("w{n}"), int(1));
        match side {
            ZigzagSide::D0 => d0.push(e),
            ZigzagSide::D1 => d1.push(e),
        }
    }
    let as_refs = |v: &[(String, String, Scalar)]| -> Vec<(String, String, Scalar)> { v.to_vec() };
    let build = |entries: Vec<(String, String, Scalar)>| -> Result<GradedMap> {
        let refs: Vec<(&str, &str, Scalar)> = entries
            .iter()
            .map(|(f, t, c)| (f.as_str(), t.as_str(), c.clone()))
            .collect();
        map_from_entries(&space, 1, &refs)
    };
    a.insert_map(D0, build(as_refs(&d0))?)?;
    a.insert_map(D1, build(as_refs(&d1))?)?;
    if recipe.unit && recipe.dots.get(&0).copied().unwrap_or(0) > 0 {
        let u = a.global_of("dot0.0")?;
        for g in 0..space.total_dim() {
            a.add_structure(u, g, g, int(1))?;
            if g != u {
                a.add_structure(g, u, g, int(1))?;
            }
        }
    }
    if recipe.basis_change {
        let mut p = BTreeMap::new();
        for k in space.degrees() {
            let n = space.dim(k);
            let m = Matrix::from_fn(n, n, |i, j| {
                if i == j {
                    int(1)
                } else if i < j {
                    random_small(&mut r)
                } else {
                    Scalar::zero()
                }
            });
            p.insert(k, m);
        }
        a = change_basis(&a, &p)?;
    }
    Ok(a)
}

/// Re-expresses the algebra in the basis `f_j = Σ_i P[i][j] e_i` per degree,
/// keeping the labels.
pub fn change_basis(a: &StructuredAlgebra, p: &BTreeMap<i32, Matrix>) -> Result<StructuredAlgebra> {
    let space = a.space();
    let mut inv = BTreeMap::new();
    for (&k, m) in p {
        inv.insert(
            k,
            m.inverse()
                .ok_or_else(|| Error::Invalid(format!("basis change in degree {k} is singular")))?,
        );
    }
    let pk = |k: i32| p.get(&k).cloned().unwrap_or_else(|| Matrix::identity(space.dim(k)));
    let ik = |k: i32| inv.get(&k).cloned().unwrap_or_else(|| Matrix::identity(space.dim(k)));
    let mut out = StructuredAlgebra::new(space.clone(), a.kind());
    out.set_sl2_names(a.sl2_names().cloned());
    out.set_j_name(a.j_name().map(str::to_string));
    for (name, m) in a.maps() {
        let mut nm = GradedMap::zero(space, space, m.shift());
        for k in space.degrees() {
            if space.dim(k + m.shift()) == 0 {
                continue;
            }
            nm.set_block(k, ik(k + m.shift()).mul(&m.block(k)).mul(&pk(k)))?;
        }
        out.insert_map(name.clone(), nm)?;
    }
    let cols: BTreeMap<i32, Vec<Vector>> = space
        .degrees()
        .map(|k| (k, pk(k).column_vectors()))
        .collect();
    for ki in space.degrees() {
        for (i, vi) in cols[&ki].iter().enumerate() {
            for kj in space.degrees() {
                if space.dim(ki + kj) == 0 {
                    continue;
                }
                for (j, vj) in cols[&kj].iter().enumerate() {
                    let prod = a.multiply(ki, vi, kj, vj);
                    let c = ik(ki + kj).mul_vec(&prod);
                    for (l, x) in c.into_iter().enumerate() {
                        if !x.is_zero() {
                            out.add_structure(
                                space.global(ki, i),
                                space.global(kj, j),
                                space.global(ki + kj, l),
                                x,
                            )?;
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn synthetic_bicomplex(recipe: &SyntheticRecipe) -> Result<Bicomplex> {
    Bicomplex::new(synthetic_algebra(recipe)?, D0, D1)
}

pub fn dots_squares_model(dots: &BTreeMap<i32, usize>, squares: &[i32], seed: u64) -> Result<Bicomplex> {
    synthetic_bicomplex(&SyntheticRecipe {
        dots: dots.clone(),
        squares: squares.to_vec(),
        seed,
        basis_change: true,
        ..SyntheticRecipe::default()
    })
}

/// `k` zigzags `d0 z = w` based in degree 0, without dots or basis change.
pub fn zigzag_model(k: usize) -> Result<Bicomplex> {
    synthetic_bicomplex(&SyntheticRecipe {
        zigzags: vec![(0, ZigzagSide::D0); k],
        unit: false,
        ..SyntheticRecipe::default()
    })
}

/// One square at base degree 0 with unit coefficients and zero product:
/// `d0 a = b`, `d1 a = c`, `d1 b = e`, `d0 c = −e`.
pub fn square_model() -> Result<Bicomplex> {
    let space = GradedSpace::new([(0, vec!["a"]), (1, vec!["b", "c"]), (2, vec!["e"])])?;
    let mut a = StructuredAlgebra::new(space.clone(), AlgebraKind::Associative);
    a.insert_map(D0, map_from_entries(&space, 1, &[("a", "b", int(1)), ("c", "e", int(-1))])?)?;
    a.insert_map(D1, map_from_entries(&space, 1, &[("a", "c", int(1)), ("b", "e", int(1))])?)?;
    Bicomplex::new(a, D0, D1)
}

/// The square model with the structure constant `a·a = a` injected, which
/// breaks the Leibniz rule.
pub fn square_model_leibniz_corrupted() -> Result<StructuredAlgebra> {
    let mut a = square_model()?.algebra().clone();
    a.add_structure_labels("a", "a", "a", int(1))?;
    Ok(a)
}

/// Exterior algebra on the given degree-1 generators, with labels such as
/// `x^y` and `1` for the unit.
pub fn exterior_algebra(generators: &[&str]) -> Result<StructuredAlgebra> {
    let n = generators.len();
    let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
    masks.sort_by_key(|&m| (m.count_ones(), (0..n).filter(|i| m & (1 << i) != 0).collect::<Vec<_>>()));
    let label = |m: u32| -> String {
        if m == 0 {
            return "1".into();
        }
        (0..n)
            .filter(|i| m & (1 << i) != 0)
            .map(|i| generators[i])
            .collect::<Vec<_>>()
            .join("^")
    };
    let mut comps: BTreeMap<i32, Vec<String>> = BTreeMap::new();
    for &m in &masks {
        comps.entry(m.count_ones() as i32).or_default().push(label(m));
    }
    let space = GradedSpace::new(comps)?;
    let mut a = StructuredAlgebra::new(space.clone(), AlgebraKind::Associative);
    let idx = |m: u32| -> usize {
        let (d, i) = space.locate(&label(m)).expect("label");
        space.global(d, i)
    };
    for &x in &masks {
        for &y in &masks {
            if x & y != 0 {
                continue;
            }
            // sign of merging the sorted factors of x before those of y
            let mut swaps = 0;
            for i in 0..n {
                if y & (1 << i) != 0 {
                    swaps += (x >> (i + 1)).count_ones();
                }
            }
            let c = if swaps % 2 == 0 { int(1) } else { int(-1) };
            a.add_structure(idx(x), idx(y), idx(x | y), c)?;
        }
    }
    Ok(a)
}

/// Extends a map given on degree-1 generators as an even derivation.
fn extend_derivation(a: &StructuredAlgebra, on_gens: &Matrix) -> Result<GradedMap> {
    extend_on_monomials(a, on_gens, false)
}

/// Extends a map given on degree-1 generators multiplicatively.
fn extend_multiplicative(a: &StructuredAlgebra, on_gens: &Matrix) -> Result<GradedMap> {
    extend_on_monomials(a, on_gens, true)
}

fn extend_on_monomials(a: &StructuredAlgebra, on_gens: &Matrix, multiplicative: bool) -> Result<GradedMap> {
    let space = a.space();
    let n1 = space.dim(1);
    let mut m = GradedMap::zero(space, space, 0);
    for k in space.degrees() {
        for j in 0..space.dim(k) {
            let factors = factor_monomial(a, k, j, &(0..n1).collect::<Vec<_>>())?;
            let image: Vector = if k == 0 {
                if multiplicative {
                    unit_vector(space.dim(0), j)
                } else {
                    vec![Scalar::zero(); space.dim(0)]
                }
            } else {
                let (coef, gens) = factors;
                let vecs: Vec<Vector> = gens.iter().map(|&g| unit_vector(n1, g)).collect();
                let imgs: Vec<Vector> = vecs.iter().map(|v| on_gens.mul_vec(v)).collect();
                let prod = |list: &[&Vector]| -> Vector {
                    let mut acc = list[0].clone();
                    for (i, v) in list[1..].iter().enumerate() {
                        acc = a.multiply(i as i32 + 1, &acc, 1, v);
                    }
                    acc
                };
                let mut total = vec![Scalar::zero(); space.dim(k)];
                if multiplicative {
                    let l: Vec<&Vector> = imgs.iter().collect();
                    total = prod(&l);
                } else {
                    for t in 0..gens.len() {
                        let l: Vec<&Vector> = (0..gens.len())
                            .map(|s| if s == t { &imgs[s] } else { &vecs[s] })
                            .collect();
                        crate::linalg::axpy(&mut total, &int(1), &prod(&l));
                    }
                }
                crate::linalg::scale_vector(&coef, &total)
            };
            for (i, c) in image.iter().enumerate() {
                if !c.is_zero() {
                    m.add_entry(k, j, i, c);
                }
            }
        }
    }
    Ok(m)
}

/// Writes basis element `(k, j)` as `c · g_1 ⋯ g_k` with degree-1 basis
/// elements `g_i`, trying candidates for `g_1` in the given order.
pub(crate) fn factor_monomial(
    a: &StructuredAlgebra,
    k: i32,
    j: usize,
    order: &[usize],
) -> Result<(Scalar, Vec<usize>)> {
    let space = a.space();
    if k == 0 {
        return Ok((int(1), Vec::new()));
    }
    if k == 1 {
        return Ok((int(1), vec![j]));
    }
    for &g in order {
        for v in 0..space.dim(k - 1) {
            let p = a.multiply(1, &unit_vector(space.dim(1), g), k - 1, &unit_vector(space.dim(k - 1), v));
            let nz: Vec<usize> = (0..p.len()).filter(|&i| !p[i].is_zero()).collect();
            if nz == [j] {
                let (c, mut rest) = factor_monomial(a, k - 1, v, order)?;
                // g·v = p_j e_j and v = c·(rest), so e_j = (c/p_j) g·rest
                let coef = &c / &p[j];
                let mut gens = vec![g];
                gens.append(&mut rest);
                return Ok((coef, gens));
            }
        }
    }
    Err(Error::Invalid(format!(
        "{} is not a product of degree-1 basis elements",
        space.label(k, j)
    )))
}

pub const TORUS_GENERATORS: [&str; 4] = ["dz1", "dz2", "dzb1", "dzb2"];

/// Full invariant-form model of a flat 2-dimensional complex torus: the
/// exterior algebra on `dz1, dz2, dzb1, dzb2` with the sl(2)-action, J and
/// zero `del`, `del_bar`.
pub fn torus_full_base() -> Result<StructuredAlgebra> {
    let mut a = exterior_algebra(&TORUS_GENERATORS)?;
    // generator order: dz1, dz2, dzb1, dzb2; columns are sources
    let e = Matrix::from_i64(4, 4, &[0, 0, 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    let f = Matrix::from_i64(4, 4, &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0]);
    let j = Matrix::from_i64(4, 4, &[0, 0, 0, -1, 0, 0, 1, 0, 0, -1, 0, 0, 1, 0, 0, 0]);
    if j.mul(&j) != Matrix::identity(4).neg() {
        return Err(Error::Internal("J does not square to -1 on 1-forms".into()));
    }
    let h = e.mul(&f).sub(&f.mul(&e));
    a.insert_map("e", extend_derivation(&a, &e)?)?;
    a.insert_map("f", extend_derivation(&a, &f)?)?;
    a.insert_map("h", extend_derivation(&a, &h)?)?;
    a.insert_map("J", extend_multiplicative(&a, &j)?)?;
    let z = a.zero_map(1);
    a.insert_map(DEL, z.clone())?;
    a.insert_map(DEL_BAR, z)?;
    a.set_sl2_names(Some(Sl2Names {
        e: "e".into(),
        f: "f".into(),
        h: "h".into(),
    }));
    a.set_j_name(Some("J".into()));
    Ok(a)
}

/// `A^{0,*}` of the flat torus: exterior algebra on `dzb1, dzb2`.
pub fn torus_dolbeault_base() -> Result<StructuredAlgebra> {
    let mut a = exterior_algebra(&["dzb1", "dzb2"])?;
    let z = a.zero_map(1);
    a.insert_map(DEL_BAR, z.clone())?;
    a.insert_map(DEL_BAR_J, z)?;
    Ok(a)
}

pub fn torus_full(r: usize) -> Result<StructuredAlgebra> {
    end_tensor(&torus_full_base()?, r)
}

/// Flat trivial rank-`r` bundle on the torus, with End-valued forms.
pub fn torus_model(r: usize) -> Result<ConnectionModel> {
    let dol = end_tensor(&torus_dolbeault_base()?, r)?;
    ConnectionModel::new(dol, Some(torus_full(r)?))
}

/// `gl(r)` as an associative algebra in degree 0 with labels `E{i}{j}`.
pub fn gl_algebra(r: usize) -> Result<StructuredAlgebra> {
    let labels: Vec<String> = (1..=r)
        .flat_map(|i| (1..=r).map(move |j| format!("E{i}{j}")))
        .collect();
    let space = GradedSpace::new([(0, labels)])?;
    let mut a = StructuredAlgebra::new(space, AlgebraKind::Associative);
    for i in 0..r {
        for j in 0..r {
            for l in 0..r {
                a.add_structure(i * r + j, j * r + l, i * r + l, int(1))?;
            }
        }
    }
    let z = a.zero_map(1);
    a.insert_map(D, z)?;
    Ok(a)
}

/// `gl(r)` with the commutator bracket and zero differential `d`.
pub fn gl_lie(r: usize) -> Result<StructuredAlgebra> {
    commutator_dgla(&gl_algebra(r)?)
}

/// `A ⊗ gl(r)` with product `(α⊗f)(β⊗g) = αβ ⊗ fg` and every map extended
/// as `m ⊗ id`. For `r = 1` labels are unchanged.
pub fn end_tensor(a: &StructuredAlgebra, r: usize) -> Result<StructuredAlgebra> {
    if r == 0 {
        return Err(Error::Invalid("rank must be at least 1".into()));
    }
    if a.kind() != AlgebraKind::Associative {
        return Err(Error::WrongKind {
            expected: "associative".into(),
            found: a.kind().to_string(),
        });
    }
    let s = a.space();
    let rr = r * r;
    let label = |l: &str, e: usize| -> String {
        if r == 1 {
            l.to_string()
        } else {
            format!("{l}|E{}{}", e / r + 1, e % r + 1)
        }
    };
    let comps: Vec<(i32, Vec<String>)> = s
        .degrees()
        .map(|k| {
            let labels = s
                .labels(k)
                .iter()
                .flat_map(|l| (0..rr).map(move |e| label(l, e)))
                .collect();
            (k, labels)
        })
        .collect();
    let space = GradedSpace::new(comps)?;
    let mut out = StructuredAlgebra::new(space.clone(), AlgebraKind::Associative);
    let g = |k: i32, i: usize, e: usize| space.global(k, i * rr + e);
    for (i, j, k, c) in a.structure_triples() {
        let (di, li) = s.from_global(i);
        let (dj, lj) = s.from_global(j);
        let (dk, lk) = s.from_global(k);
        for p in 0..r {
            for q in 0..r {
                for t in 0..r {
                    out.add_structure(g(di, li, p * r + q), g(dj, lj, q * r + t), g(dk, lk, p * r + t), c.clone())?;
                }
            }
        }
    }
    for (name, m) in a.maps() {
        let mut nm = GradedMap::zero(&space, &space, m.shift());
        for (k, b) in m.stored_blocks() {
            for row in 0..b.rows() {
                for col in 0..b.cols() {
                    let c = b.get(row, col);
                    if c.is_zero() {
                        continue;
                    }
                    for e in 0..rr {
                        nm.add_entry(k, col * rr + e, row * rr + e, c);
                    }
                }
            }
        }
        out.insert_map(name.clone(), nm)?;
    }
    out.set_sl2_names(a.sl2_names().cloned());
    out.set_j_name(a.j_name().map(str::to_string));
    Ok(out)
}

/// Connection model with `del_bar_J = d0` and `del_bar = d1`.
pub fn connection_from_bicomplex(b: &Bicomplex) -> Result<ConnectionModel> {
    let mut a = b.algebra().clone();
    let d0 = a.map(b.d0_name())?.clone();
    let d1 = a.map(b.d1_name())?.clone();
    a.remove_map(b.d0_name());
    a.remove_map(b.d1_name());
    a.insert_map(DEL_BAR_J, d0)?;
    a.insert_map(DEL_BAR, d1)?;
    ConnectionModel::new(a, None)
}

/// Adds a seeded nonzero entry to `del_bar_J`.
pub fn corrupt_connection(m: &ConnectionModel, seed: u64) -> Result<ConnectionModel> {
    let mut r = rng(seed);
    let mut a = m.dolbeault().clone();
    let space = a.space().clone();
    let degrees: Vec<i32> = space.degrees().filter(|k| space.dim(k + 1) > 0).collect();
    if degrees.is_empty() {
        return Err(Error::Invalid("no room for a corruption".into()));
    }
    let k = degrees[r.random_range(0..degrees.len())];
    let from = r.random_range(0..space.dim(k));
    let to = r.random_range(0..space.dim(k + 1));
    let mut dj = a.map(DEL_BAR_J)?.clone();
    dj.add_entry(k, from, to, &random_nonzero(&mut r));
    a.insert_map(DEL_BAR_J, dj)?;
    ConnectionModel::new(a, m.full().cloned())
}

/// Graded Lie algebra with `L¹ = ⟨u, v⟩`, `L² = ⟨w⟩`, `[u,u] = w`, `[v,v] = −w`
/// and zero differentials `d`, `d1`.
pub fn cone_model() -> Result<StructuredAlgebra> {
    let space = GradedSpace::new([(1, vec!["u", "v"]), (2, vec!["w"])])?;
    let mut l = StructuredAlgebra::new(space, AlgebraKind::Lie);
    l.add_structure_labels("u", "u", "w", int(1))?;
    l.add_structure_labels("v", "v", "w", int(-1))?;
    let z = l.zero_map(1);
    l.insert_map(D, z.clone())?;
    l.insert_map(D1, z)?;
    Ok(l)
}

/// Commutator DGLA of a dots⊕squares model plus a copy of the cone model,
/// re-expressed in a seeded unit-triangular basis so that the zig-zag and the
/// obstruction map are both nontrivial.
pub fn squares_cone_lie(seed: u64) -> Result<Bicomplex> {
    let dots = BTreeMap::from([(0, 1), (1, 1), (2, 1)]);
    let b = dots_squares_model(&dots, &[0, 1], seed)?;
    let lie = commutator_dgla(b.algebra())?;
    let mut cone = cone_model()?;
    let z = cone.remove_map(D).expect("cone has d");
    cone.insert_map(D0, z)?;
    let sum = lie.direct_sum(&cone)?;
    let mut r = rng(seed ^ 0x5eed);
    let p: BTreeMap<i32, Matrix> = sum
        .space()
        .degrees()
        .map(|k| {
            let n = sum.space().dim(k);
            let m = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => int(1),
                std::cmp::Ordering::Less => random_small(&mut r),
                std::cmp::Ordering::Greater => int(0),
            });
            (k, m)
        })
        .collect();
    Bicomplex::new(change_basis(&sum, &p)?, D0, D1)
}

/// Dots only, each with both differentials zero and the zero product.
pub fn dots_only(dots: &BTreeMap<i32, usize>, kind: AlgebraKind) -> Result<StructuredAlgebra> {
    let mut a = synthetic_algebra(&SyntheticRecipe {
        dots: dots.clone(),
        unit: false,
        ..SyntheticRecipe::default()
    })?;
    a.set_kind(kind);
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{validate_dg_algebra, CohomologyPresentation};

    #[test]
    fn torus_operators() {
        let full = torus_full_base().unwrap();
        let dims: Vec<usize> = full.space().degrees().map(|k| full.space().dim(k)).collect();
        assert_eq!(dims, vec![1, 4, 6, 4, 1]);
        let e = full.map("e").unwrap();
        let f = full.map("f").unwrap();
        let h = full.map("h").unwrap();
        let two = Scalar::from_int(2);
        let he = crate::graded::GradedMap::graded_commutator(h, e).unwrap();
        assert_eq!(he, e.scale(&two));
        let hf = crate::graded::GradedMap::graded_commutator(h, f).unwrap();
        assert_eq!(hf, f.scale(&-two));
        assert!(validate_dg_algebra(&full, DEL_BAR).unwrap().passed());
    }

    #[test]
    fn square_and_zigzag_shapes() {
        let sq = square_model().unwrap();
        let h = CohomologyPresentation::compute(sq.algebra(), D1).unwrap();
        assert_eq!(h.total_dim(), 0);
        let zz = zigzag_model(1).unwrap();
        assert_eq!(zz.algebra().space().total_dim(), 2);
        let bad = square_model_leibniz_corrupted().unwrap();
        let r = validate_dg_algebra(&bad, D0).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn generators_are_deterministic() {
        let r = SyntheticRecipe::random(3, 1, 60);
        let a = synthetic_algebra(&r).unwrap();
        let b = synthetic_algebra(&r).unwrap();
        assert_eq!(a, b);
    }
}
