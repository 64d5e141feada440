use proptest::prelude::*;

use dgms_core::deformation::{gauge_transform, mc_check, series_from_orders, McMode, QaDeformation, Series, TruncatedRing};
use dgms_core::dgms::strong_lemma_check;
use dgms_core::graded::commutator_dgla;
use dgms_core::linalg::{Matrix, Scalar, Subspace, Vector};
use dgms_core::modelfile::ModelFile;
use dgms_core::models::{cone_model, random_vector, rng, synthetic_bicomplex, torus_model, SyntheticRecipe};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4)
        .prop_map(|(a, b, c, d)| Scalar::from_frac(a, b) + Scalar::i() * Scalar::from_frac(c, d))
}

fn matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(scalar(), r * c).prop_map(move |v| Matrix::from_fn(r, c, |i, j| v[i * c + j].clone()))
    })
}

fn vectors(n: usize, max: usize) -> impl Strategy<Value = Vec<Vector>> {
    proptest::collection::vec(proptest::collection::vec(scalar(), n), 0..=max)
}

fn random_series(seed: u64, degree: i32, dim: usize, ring: TruncatedRing) -> Series {
    let mut g = rng(seed);
    let orders = (1..ring.order()).map(|_| random_vector(&mut g, dim)).collect();
    series_from_orders(degree, dim, ring, orders).unwrap()
}

proptest! {
    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).conj(), a.conj() * b.conj());
        if let Some(inv) = a.inv() {
            prop_assert_eq!(&a * &inv, Scalar::from_int(1));
        } else {
            prop_assert_eq!(a.clone(), Scalar::from_int(0));
        }
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn rank_is_transpose_invariant(m in matrix(5)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank() + m.kernel().dim(), m.cols());
    }

    #[test]
    fn sum_and_intersection_dimensions(u in vectors(4, 3), w in vectors(4, 3)) {
        let (u, w) = (Subspace::span(4, &u), Subspace::span(4, &w));
        let s = u.sum(&w).unwrap();
        let i = u.intersect(&w).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        prop_assert!(s.contains_subspace(&u).unwrap() && s.contains_subspace(&w).unwrap());
        prop_assert!(u.contains_subspace(&i).unwrap() && w.contains_subspace(&i).unwrap());
    }

    #[test]
    fn span_is_canonical(v in vectors(4, 4), c in scalar()) {
        let mut mixed: Vec<Vector> = v.iter().rev().cloned().collect();
        if v.len() >= 2 {
            let combo: Vector = v[0].iter().zip(&v[1]).map(|(x, y)| x + &(&c * y)).collect();
            mixed.push(combo);
        }
        prop_assert_eq!(Subspace::span(4, &v), Subspace::span(4, &mixed));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauge_preserves_mc(seed in any::<u64>()) {
        let b = synthetic_bicomplex(&SyntheticRecipe::random(seed % 50, 0, 14)).unwrap();
        let l = commutator_dgla(b.algebra()).unwrap();
        let ring = TruncatedRing::new(3).unwrap();
        let (n0, n1) = (l.space().dim(0), l.space().dim(1));
        let a1 = random_series(seed, 0, n0, ring);
        let a2 = random_series(seed ^ 1, 0, n0, ring);
        let x = gauge_transform(&l, "d0", &a1, &Series::zero(1, n1, ring)).unwrap();
        let y = gauge_transform(&l, "d0", &a2, &x).unwrap();
        prop_assert!(mc_check(&l, "d0", &x).unwrap().classical);
        prop_assert!(mc_check(&l, "d0", &y).unwrap().classical);
    }

    #[test]
    fn strong_implies_classical(seed in any::<u64>(), n in 2usize..5) {
        let l = cone_model().unwrap();
        let ring = TruncatedRing::new(n).unwrap();
        let x = random_series(seed, 1, 2, ring);
        let v = mc_check(&l, "d", &x).unwrap();
        prop_assert!(!v.holds(McMode::Strong) || v.holds(McMode::Classical));
    }

    #[test]
    fn mc_split_is_equivalent(seed in any::<u64>()) {
        let qd = QaDeformation::new(&torus_model(1).unwrap()).unwrap();
        let ring = TruncatedRing::new(3).unwrap();
        let x = random_series(seed, 1, qd.qa().space().dim(1), ring);
        prop_assert!(qd.mc_split(&x).unwrap().equivalent);
    }

    #[test]
    fn dots_and_squares_satisfy_the_strong_lemma(seed in any::<u64>()) {
        let b = synthetic_bicomplex(&SyntheticRecipe::random(seed, 0, 30)).unwrap();
        prop_assert!(strong_lemma_check(&b).unwrap().strong_lemma);
    }

    #[test]
    fn model_files_round_trip(seed in any::<u64>(), zigzags in 0usize..3) {
        let b = synthetic_bicomplex(&SyntheticRecipe::random(seed, zigzags, 30)).unwrap();
        let text = ModelFile::single(b.algebra().clone()).emit();
        let parsed = ModelFile::parse(&text).unwrap();
        prop_assert_eq!(parsed.emit(), text);
    }
}
