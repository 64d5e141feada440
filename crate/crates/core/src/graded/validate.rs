use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use super::algebra::{AlgebraKind, SparseVec, StructuredAlgebra};
use super::map::GradedMap;
use crate::error::{Error, Result};
use crate::linalg::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, axiom: impl Into<String>, witness: Option<String>) {
        self.checks.push(AxiomCheck {
            axiom: axiom.into(),
            passed: witness.is_none(),
            witness,
        });
    }
}

fn sign(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        Scalar::from_int(1)
    } else {
        Scalar::from_int(-1)
    }
}

fn add_scaled(acc: &mut SparseVec, c: &Scalar, v: &SparseVec) {
    for (&k, x) in v {
        *acc.entry(k).or_insert_with(Scalar::zero) += c * x;
    }
}

fn clean(mut v: SparseVec) -> SparseVec {
    v.retain(|_, x| !x.is_zero());
    v
}

fn is_zero(v: &SparseVec) -> bool {
    v.values().all(Scalar::is_zero)
}

struct Ctx<'a> {
    a: &'a StructuredAlgebra,
    n: usize,
    deg: Vec<i64>,
}

impl<'a> Ctx<'a> {
    fn new(a: &'a StructuredAlgebra) -> Self {
        let n = a.space().total_dim();
        let deg = (0..n).map(|g| a.space().degree_of_global(g) as i64).collect();
        Ctx { a, n, deg }
    }

    fn label(&self, g: usize) -> &str {
        self.a.space().global_label(g)
    }

    fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.a.multiply_sparse(x, y)
    }

    fn e(&self, g: usize) -> SparseVec {
        self.a.basis_sparse(g)
    }

    /// Triples `(a, b, c)` for which some pairwise product among them is nonzero.
    fn relevant_triples(&self) -> BTreeSet<(usize, usize, usize)> {
        let mut out = BTreeSet::new();
        for (p, q) in self.a.nonzero_pairs() {
            for r in 0..self.n {
                out.insert((p, q, r));
                out.insert((r, p, q));
                out.insert((p, r, q));
            }
        }
        out
    }
}

fn check_square_zero(a: &StructuredAlgebra, name: &str, d: &GradedMap, report: &mut AxiomReport) {
    let dd = d.compose(d).expect("endomorphism");
    let witness = dd.first_nonzero().map(|(k, j)| {
        format!(
            "{name}^2({}) != 0 (degree {k})",
            a.space().label(k, j)
        )
    });
    report.push(format!("{name}^2 = 0"), witness);
}

fn check_leibniz(ctx: &Ctx, name: &str, d: &GradedMap, report: &mut AxiomReport) {
    let a = ctx.a;
    let ds: Vec<SparseVec> = (0..ctx.n).map(|g| a.apply_sparse(d, &ctx.e(g))).collect();
    let mut witness = None;
    'outer: for i in 0..ctx.n {
        for j in 0..ctx.n {
            let ab = a.basis_product(i, j);
            if ab.is_empty() && ds[i].is_empty() && ds[j].is_empty() {
                continue;
            }
            let lhs = a.apply_sparse(d, &ab.iter().cloned().collect());
            let mut r = lhs;
            add_scaled(&mut r, &Scalar::from_int(-1), &ctx.mul(&ds[i], &ctx.e(j)));
            add_scaled(&mut r, &-sign(ctx.deg[i]), &ctx.mul(&ctx.e(i), &ds[j]));
            if !is_zero(&clean(r)) {
                witness = Some(format!("({}, {})", ctx.label(i), ctx.label(j)));
                break 'outer;
            }
        }
    }
    report.push(format!("Leibniz rule for {name}"), witness);
}

fn check_associativity(ctx: &Ctx, report: &mut AxiomReport) {
    let mut witness = None;
    for (i, j, k) in ctx.relevant_triples() {
        let l = ctx.mul(&ctx.mul(&ctx.e(i), &ctx.e(j)), &ctx.e(k));
        let r = ctx.mul(&ctx.e(i), &ctx.mul(&ctx.e(j), &ctx.e(k)));
        if l != r {
            witness = Some(format!("({}, {}, {})", ctx.label(i), ctx.label(j), ctx.label(k)));
            break;
        }
    }
    report.push("associativity", witness);
}

fn check_skew(ctx: &Ctx, report: &mut AxiomReport) {
    let mut witness = None;
    'outer: for i in 0..ctx.n {
        for j in i..ctx.n {
            let mut r = ctx.mul(&ctx.e(i), &ctx.e(j));
            add_scaled(&mut r, &sign(ctx.deg[i] * ctx.deg[j]), &ctx.mul(&ctx.e(j), &ctx.e(i)));
            if !is_zero(&clean(r)) {
                witness = Some(format!("({}, {})", ctx.label(i), ctx.label(j)));
                break 'outer;
            }
        }
    }
    report.push("graded skew-symmetry", witness);
}

fn check_jacobi(ctx: &Ctx, report: &mut AxiomReport) {
    let mut witness = None;
    for (i, j, k) in ctx.relevant_triples() {
        let (a, b, c) = (ctx.e(i), ctx.e(j), ctx.e(k));
        // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|} [b,[a,c]]
        let mut r = ctx.mul(&a, &ctx.mul(&b, &c));
        add_scaled(&mut r, &Scalar::from_int(-1), &ctx.mul(&ctx.mul(&a, &b), &c));
        add_scaled(
            &mut r,
            &-sign(ctx.deg[i] * ctx.deg[j]),
            &ctx.mul(&b, &ctx.mul(&a, &c)),
        );
        if !is_zero(&clean(r)) {
            witness = Some(format!("({}, {}, {})", ctx.label(i), ctx.label(j), ctx.label(k)));
            break;
        }
    }
    report.push("graded Jacobi identity", witness);
}

/// Homogeneous test elements: basis vectors and sums of two basis vectors of equal degree.
fn test_elements(ctx: &Ctx, parity: i64) -> Vec<(String, SparseVec)> {
    let mut out = Vec::new();
    for i in 0..ctx.n {
        if ctx.deg[i].rem_euclid(2) != parity {
            continue;
        }
        out.push((ctx.label(i).to_string(), ctx.e(i)));
        for j in (i + 1)..ctx.n {
            if ctx.deg[j] == ctx.deg[i] {
                let mut v = ctx.e(i);
                v.insert(j, Scalar::from_int(1));
                out.push((format!("{} + {}", ctx.label(i), ctx.label(j)), v));
            }
        }
    }
    out
}

fn check_even_square(ctx: &Ctx, report: &mut AxiomReport) {
    let witness = test_elements(ctx, 0)
        .into_iter()
        .find(|(_, v)| !is_zero(&ctx.mul(v, v)))
        .map(|(l, _)| format!("[{l}, {l}] != 0"));
    report.push("[a,a] = 0 for even a", witness);
}

fn check_bianchi(ctx: &Ctx, report: &mut AxiomReport) {
    let witness = test_elements(ctx, 1)
        .into_iter()
        .find(|(_, v)| !is_zero(&ctx.mul(v, &ctx.mul(v, v))))
        .map(|(l, _)| format!("[{l}, [{l}, {l}]] != 0"));
    report.push("[a,[a,a]] = 0 for odd a", witness);
}

fn expect_kind(a: &StructuredAlgebra, kind: AlgebraKind) -> Result<()> {
    if a.kind() != kind {
        return Err(Error::WrongKind {
            expected: kind.to_string(),
            found: a.kind().to_string(),
        });
    }
    Ok(())
}

/// Checks d² = 0, the Leibniz rule and associativity by enumeration over basis tuples.
pub fn validate_dg_algebra(a: &StructuredAlgebra, d: &str) -> Result<AxiomReport> {
    expect_kind(a, AlgebraKind::Associative)?;
    let dm = a.differential(d)?;
    let ctx = Ctx::new(a);
    let mut report = AxiomReport::default();
    check_square_zero(a, d, dm, &mut report);
    check_leibniz(&ctx, d, dm, &mut report);
    check_associativity(&ctx, &mut report);
    Ok(report)
}

pub fn validate_dgla(l: &StructuredAlgebra, d: &str) -> Result<AxiomReport> {
    expect_kind(l, AlgebraKind::Lie)?;
    let dm = l.differential(d)?;
    let ctx = Ctx::new(l);
    let mut report = AxiomReport::default();
    check_square_zero(l, d, dm, &mut report);
    check_leibniz(&ctx, d, dm, &mut report);
    check_skew(&ctx, &mut report);
    check_jacobi(&ctx, &mut report);
    check_even_square(&ctx, &mut report);
    check_bianchi(&ctx, &mut report);
    Ok(report)
}

/// Dispatches on the algebra kind.
pub fn validate(a: &StructuredAlgebra, d: &str) -> Result<AxiomReport> {
    match a.kind() {
        AlgebraKind::Associative => validate_dg_algebra(a, d),
        AlgebraKind::Lie => validate_dgla(a, d),
    }
}

/// Checks that `m` is a derivation of degree `m.shift()` for the product.
pub fn is_derivation(a: &StructuredAlgebra, name: &str, m: &GradedMap) -> AxiomReport {
    let ctx = Ctx::new(a);
    let mut report = AxiomReport::default();
    let ds: Vec<SparseVec> = (0..ctx.n).map(|g| a.apply_sparse(m, &ctx.e(g))).collect();
    let s = m.shift() as i64;
    let mut witness = None;
    'outer: for i in 0..ctx.n {
        for j in 0..ctx.n {
            let ab = a.basis_product(i, j);
            if ab.is_empty() && ds[i].is_empty() && ds[j].is_empty() {
                continue;
            }
            let mut r = a.apply_sparse(m, &ab.iter().cloned().collect());
            add_scaled(&mut r, &Scalar::from_int(-1), &ctx.mul(&ds[i], &ctx.e(j)));
            add_scaled(&mut r, &-sign(s * ctx.deg[i]), &ctx.mul(&ctx.e(i), &ds[j]));
            if !is_zero(&clean(r)) {
                witness = Some(format!("({}, {})", ctx.label(i), ctx.label(j)));
                break 'outer;
            }
        }
    }
    report.push(format!("{name} is a derivation"), witness);
    report
}

/// Graded commutator bracket of an associative DG algebra.
///
/// Every differential of the input must satisfy d² = 0 and Leibniz, and the
/// product must be associative.
pub fn commutator_dgla(a: &StructuredAlgebra) -> Result<StructuredAlgebra> {
    expect_kind(a, AlgebraKind::Associative)?;
    let ctx = Ctx::new(a);
    let mut report = AxiomReport::default();
    check_associativity(&ctx, &mut report);
    for name in a.differential_names() {
        let d = a.differential(&name)?;
        check_square_zero(a, &name, d, &mut report);
        check_leibniz(&ctx, &name, d, &mut report);
    }
    if let Some(f) = report.failures().next() {
        return Err(Error::Precondition(format!(
            "input is not a valid DG algebra: {} fails at {}",
            f.axiom,
            f.witness.as_deref().unwrap_or("?")
        )));
    }
    let mut l = a.clone();
    l.set_kind(AlgebraKind::Lie);
    l.clear_structure();
    for (i, j, k, c) in a.structure_triples() {
        l.add_structure(i, j, k, c.clone())?;
        l.add_structure(j, i, k, -sign(ctx.deg[i] * ctx.deg[j]) * c)?;
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradedSpace;

    fn exterior2() -> StructuredAlgebra {
        let s = GradedSpace::new([(0, vec!["1"]), (1, vec!["x", "y"]), (2, vec!["xy"])]).unwrap();
        let mut a = StructuredAlgebra::new(s, AlgebraKind::Associative);
        let one = Scalar::from_int(1);
        for l in ["1", "x", "y", "xy"] {
            a.add_structure_labels("1", l, l, one.clone()).unwrap();
            if l != "1" {
                a.add_structure_labels(l, "1", l, one.clone()).unwrap();
            }
        }
        a.add_structure_labels("x", "y", "xy", one.clone()).unwrap();
        a.add_structure_labels("y", "x", "xy", -one).unwrap();
        let z = a.zero_map(1);
        a.insert_map("d", z).unwrap();
        a
    }

    #[test]
    fn exterior_algebra_passes() {
        let a = exterior2();
        let r = validate_dg_algebra(&a, "d").unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(validate_dg_algebra(&a, "nope").is_err());
        assert!(validate_dgla(&a, "d").is_err());
        let l = commutator_dgla(&a).unwrap();
        assert!(validate_dgla(&l, "d").unwrap().passed());
        // graded commutative: all brackets vanish
        assert!(l.has_zero_structure());
    }

    #[test]
    fn associativity_violation_detected() {
        let mut a = exterior2();
        a.add_structure_labels("x", "1", "x", Scalar::from_int(1)).unwrap();
        let r = validate_dg_algebra(&a, "d").unwrap();
        assert!(!r.passed());
        assert!(commutator_dgla(&a).is_err());
    }
}
