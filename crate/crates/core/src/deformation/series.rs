use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{GradedMap, StructuredAlgebra, Witness};
use crate::linalg::{add_vectors, is_zero_vector, scale_vector, sub_vectors, zero_vector, Scalar, Vector};

/// `F[t]/(t^N)`, `N >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedRing {
    order: usize,
}

impl TruncatedRing {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Invalid(format!("truncation order {order} is below 2")));
        }
        Ok(TruncatedRing { order })
    }

    /// Dual numbers.
    pub fn dual() -> Self {
        TruncatedRing { order: 2 }
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

/// `Σ_n v_n t^n` with all `v_n` in one degree; `coeffs[n]` is the `t^n` term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub degree: i32,
    pub coeffs: Vec<Vector>,
}

impl Series {
    pub fn zero(degree: i32, dim: usize, ring: TruncatedRing) -> Self {
        Series {
            degree,
            coeffs: vec![zero_vector(dim); ring.order()],
        }
    }

    /// Element of `L^degree ⊗ m`: terms of order `1..N`.
    pub fn in_ideal(degree: i32, dim: usize, ring: TruncatedRing, terms: &[(usize, Vector)]) -> Result<Self> {
        let mut s = Series::zero(degree, dim, ring);
        for (n, v) in terms {
            if *n == 0 || *n >= ring.order() {
                return Err(Error::Invalid(format!("order {n} outside 1..{}", ring.order())));
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient of length {} in a component of dimension {dim}",
                    v.len()
                )));
            }
            s.coeffs[*n] = v.clone();
        }
        Ok(s)
    }

    pub fn ring(&self) -> TruncatedRing {
        TruncatedRing {
            order: self.coeffs.len(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.first().map_or(0, Vec::len)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| is_zero_vector(c))
    }

    pub fn in_maximal_ideal(&self) -> bool {
        self.coeffs.first().is_none_or(|c| is_zero_vector(c))
    }

    pub fn add(&self, other: &Series) -> Series {
        Series {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| add_vectors(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        Series {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| sub_vectors(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        Series {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|v| scale_vector(c, v)).collect(),
        }
    }

    /// Coefficientwise image under a graded map.
    pub fn apply(&self, m: &GradedMap) -> Series {
        Series {
            degree: self.degree + m.shift(),
            coeffs: self.coeffs.iter().map(|v| m.apply(self.degree, v)).collect(),
        }
    }

    /// Nonzero coefficients as labeled witnesses.
    pub fn terms(&self, l: &StructuredAlgebra) -> Vec<OrderTerm> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, v)| !is_zero_vector(v))
            .map(|(order, v)| OrderTerm {
                order,
                witness: l.space().witness(self.degree, v),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderTerm {
    pub order: usize,
    pub witness: Witness,
}

/// `[x, y]` truncated at `t^N`.
pub fn bracket(l: &StructuredAlgebra, x: &Series, y: &Series) -> Series {
    let n = x.coeffs.len().min(y.coeffs.len());
    let deg = x.degree + y.degree;
    let dim = l.space().dim(deg);
    let mut coeffs = vec![zero_vector(dim); n];
    for (i, xi) in x.coeffs.iter().enumerate() {
        if is_zero_vector(xi) {
            continue;
        }
        for (j, yj) in y.coeffs.iter().enumerate().take(n - i) {
            if is_zero_vector(yj) {
                continue;
            }
            let p = l.multiply(x.degree, xi, y.degree, yj);
            coeffs[i + j] = add_vectors(&coeffs[i + j], &p);
        }
    }
    Series { degree: deg, coeffs }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum McMode {
    Classical,
    Strong,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McVerdict {
    pub classical: bool,
    pub strong: bool,
    /// `dx + ½[x,x]` by order.
    pub classical_residual: Vec<OrderTerm>,
    /// `dx` by order.
    pub differential_residual: Vec<OrderTerm>,
    /// `[x,x]` by order.
    pub bracket_residual: Vec<OrderTerm>,
}

impl McVerdict {
    pub fn holds(&self, mode: McMode) -> bool {
        match mode {
            McMode::Classical => self.classical,
            McMode::Strong => self.strong,
        }
    }
}

pub(crate) fn check_mc_element(x: &Series) -> Result<()> {
    if x.degree != 1 {
        return Err(Error::DimensionMismatch(format!(
            "Maurer-Cartan coefficients must have degree 1, found {}",
            x.degree
        )));
    }
    if !x.in_maximal_ideal() {
        return Err(Error::Invalid("Maurer-Cartan element has a constant term".into()));
    }
    Ok(())
}

/// Classical and strong Maurer–Cartan residuals, order by order.
pub fn mc_check(l: &StructuredAlgebra, d: &str, x: &Series) -> Result<McVerdict> {
    check_mc_element(x)?;
    if l.space().dim(1) != x.dim() {
        return Err(Error::DimensionMismatch("element does not live in L¹".into()));
    }
    let dm = l.differential(d)?;
    let dx = x.apply(dm);
    let xx = bracket(l, x, x);
    let half = Scalar::from_frac(1, 2);
    let classical = dx.add(&xx.scale(&half));
    let v = McVerdict {
        classical: classical.is_zero(),
        strong: dx.is_zero() && xx.is_zero(),
        classical_residual: classical.terms(l),
        differential_residual: dx.terms(l),
        bracket_residual: xx.terms(l),
    };
    if v.strong && !v.classical {
        return Err(Error::Internal("strong Maurer-Cartan element fails the classical equation".into()));
    }
    Ok(v)
}

/// `Σ_n ad_a^n (y) / c_n` until the terms vanish, with `c_n` from `denom`.
fn ad_series(l: &StructuredAlgebra, a: &Series, y: Series, denom: impl Fn(usize) -> Scalar) -> Series {
    let mut total = y.scale(&Scalar::zero());
    let mut term = y;
    let mut fact = Scalar::from_int(1);
    let mut n = 0;
    while !term.is_zero() {
        fact = &fact * &denom(n);
        total = total.add(&term.scale(&fact.inv().expect("nonzero")));
        term = bracket(l, a, &term);
        n += 1;
    }
    total
}

/// `a ∗ x = x + Σ_{n≥0} ad_a^n/(n+1)! ([a,x] − da)`.
pub fn gauge_transform(l: &StructuredAlgebra, d: &str, a: &Series, x: &Series) -> Result<Series> {
    check_mc_element(x)?;
    if a.degree != 0 || !a.in_maximal_ideal() {
        return Err(Error::Invalid("gauge element must lie in L⁰ ⊗ m".into()));
    }
    let da = a.apply(l.differential(d)?);
    let seed = bracket(l, a, x).sub(&da);
    // term n carries 1/(n+1)!
    let tail = ad_series(l, a, seed, |n| Scalar::from_int(n as i64 + 1));
    Ok(x.add(&tail))
}

/// `e^{ad_a} x = Σ_n ad_a^n x / n!`.
pub fn exp_adjoint(l: &StructuredAlgebra, a: &Series, x: &Series) -> Series {
    ad_series(l, a, x.clone(), |n| Scalar::from_int(n.max(1) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{AlgebraKind, GradedSpace};
    use crate::models::{end_tensor, map_from_entries, torus_dolbeault_base};
    use crate::graded::commutator_dgla;

    fn gl2_torus() -> StructuredAlgebra {
        let mut a = end_tensor(&torus_dolbeault_base().unwrap(), 2).unwrap();
        a.remove_map(crate::qdolbeault::DEL_BAR_J);
        commutator_dgla(&a).unwrap()
    }

    #[test]
    fn zero_element_is_strong() {
        let l = gl2_torus();
        let x = Series::zero(1, l.space().dim(1), TruncatedRing::new(3).unwrap());
        let v = mc_check(&l, "del_bar", &x).unwrap();
        assert!(v.classical && v.strong);
    }

    #[test]
    fn non_commuting_element_fails_strong_only_by_bracket() {
        let l = gl2_torus();
        let s = l.space();
        let n = s.dim(1);
        let mut x1 = zero_vector(n);
        x1[s.locate("dzb1|E12").unwrap().1] = Scalar::from_int(1);
        x1[s.locate("dzb2|E21").unwrap().1] = Scalar::from_int(1);
        let x = Series::in_ideal(1, n, TruncatedRing::new(3).unwrap(), &[(1, x1.clone())]).unwrap();
        let v = mc_check(&l, "del_bar", &x).unwrap();
        assert!(!v.strong && !v.classical);
        assert!(v.differential_residual.is_empty());
        assert_eq!(v.bracket_residual.len(), 1);
        assert_eq!(v.bracket_residual[0].order, 2);
        let expected = l.multiply(1, &x1, 1, &x1);
        assert_eq!(v.bracket_residual[0].witness, s.witness(2, &expected));
    }

    #[test]
    fn gauge_of_zero_to_second_order() {
        // L⁰ = ⟨p, q⟩, L¹ = ⟨u, v⟩, d p = u, [p, u] = v
        let space = GradedSpace::new([(0, vec!["p", "q"]), (1, vec!["u", "v"])]).unwrap();
        let mut l = StructuredAlgebra::new(space.clone(), AlgebraKind::Lie);
        l.add_structure_labels("p", "u", "v", Scalar::from_int(1)).unwrap();
        l.add_structure_labels("u", "p", "v", Scalar::from_int(-1)).unwrap();
        l.insert_map("d", map_from_entries(&space, 1, &[("p", "u", Scalar::from_int(1))]).unwrap())
            .unwrap();
        let ring = TruncatedRing::new(4).unwrap();
        let p = vec![Scalar::from_int(1), Scalar::zero()];
        let a = Series::in_ideal(0, 2, ring, &[(1, p)]).unwrap();
        let x = Series::zero(1, 2, ring);
        let y = gauge_transform(&l, "d", &a, &x).unwrap();
        // −(d a₁) t − ½ [a₁, d a₁] t²
        let u = vec![Scalar::from_int(-1), Scalar::zero()];
        let v = vec![Scalar::zero(), Scalar::from_frac(-1, 2)];
        assert_eq!(y.coeffs[1], u);
        assert_eq!(y.coeffs[2], v);
        assert!(is_zero_vector(&y.coeffs[3]));
        assert!(mc_check(&l, "d", &y).unwrap().classical);
    }

    #[test]
    fn identity_gauge() {
        let l = gl2_torus();
        let ring = TruncatedRing::new(3).unwrap();
        let mut x1 = zero_vector(l.space().dim(1));
        x1[0] = Scalar::from_int(3);
        let x = Series::in_ideal(1, x1.len(), ring, &[(1, x1)]).unwrap();
        let a = Series::zero(0, l.space().dim(0), ring);
        assert_eq!(gauge_transform(&l, "del_bar", &a, &x).unwrap(), x);
    }
}
