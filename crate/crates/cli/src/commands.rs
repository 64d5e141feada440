use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use serde_json::json;

use dgms_core::deformation::{
    exp_adjoint, gauge_transform, mc_check, obstruction_transport, quadraticity_probe, series_from_orders,
    tangent_and_obstruction, QaDeformation, Series, TruncatedRing,
};
use dgms_core::dgms::{
    ddbar_condition_check, dgms_trick, formality_zigzag, homotopy_abelian_verdict, induced_differential_triviality,
    same_cohomology_check, Bicomplex, FormalityZigzag,
};
use dgms_core::graded::{commutator_dgla, validate as validate_axioms, AlgebraKind, CohomologyPresentation, StructuredAlgebra};
use dgms_core::linalg::{unit_vector, Scalar, Vector};
use dgms_core::modelfile::{emit_algebra, ModelFile};
use dgms_core::models::{
    cone_model, connection_from_bicomplex, corrupt_connection, dots_squares_model, end_tensor, random_small,
    random_vector, rng, square_model, squares_cone_lie, synthetic_bicomplex, torus_model, zigzag_model,
    SyntheticRecipe,
};
use dgms_core::qdolbeault::{
    autoduality_check, double_complex_spectral_sequence, extended_strong_lemma_check, flatness_check,
    hyperholomorphic_certificate, phi_isomorphism, quaternionic_cohomology_check, ConnectionModel,
    QuaternionicComplex, DEL_BAR, DEL_BAR_J,
};
use dgms_core::sl2::{bigraded_dims, low_weight_ideal, plus_quotient, weight_decomposition, Sl2Module};
use dgms_core::Error;

use crate::report::Report;
use crate::PairArgs;

fn load(path: &str) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    ModelFile::parse(&text).with_context(|| format!("in {path}"))
}

fn default_differential(a: &StructuredAlgebra) -> Result<String> {
    let names = a.differential_names();
    for n in ["d0", "d", DEL_BAR] {
        if names.iter().any(|x| x == n) {
            return Ok(n.to_string());
        }
    }
    names.into_iter().next().context("algebra has no differential")
}

fn as_lie(a: &StructuredAlgebra) -> Result<StructuredAlgebra> {
    Ok(match a.kind() {
        AlgebraKind::Lie => a.clone(),
        AlgebraKind::Associative => commutator_dgla(a)?,
    })
}

fn labeled_dims(m: &BTreeMap<(i32, i32), usize>) -> BTreeMap<String, usize> {
    m.iter().map(|((p, q), d)| (format!("{p},{q}"), *d)).collect()
}

fn is_connection_file(f: &ModelFile) -> bool {
    let names = f.primary().differential_names();
    names.iter().any(|n| n == DEL_BAR) && names.iter().any(|n| n == DEL_BAR_J)
}

pub fn validate(echo: Vec<String>, path: &str) -> Result<Report> {
    let f = load(path)?;
    let mut r = Report::new(echo);
    for (name, a) in &f.algebras {
        let mut a = a.clone();
        let mut names = a.differential_names();
        if names.is_empty() {
            a.insert_map("zero", a.zero_map(1))?;
            names.push("zero".into());
        }
        for d in names {
            let rep = validate_axioms(&a, &d)?;
            r.assert(format!("{name}: {} axioms for {d}", a.kind()), rep.passed());
            r.section(format!("{name}/{d}"), &rep);
        }
    }
    Ok(r)
}

pub fn dgms(echo: Vec<String>, p: &PairArgs) -> Result<Report> {
    let f = load(&p.file)?;
    let b = Bicomplex::new(f.primary().clone(), &p.d0, &p.d1)?;
    let v = ddbar_condition_check(&b)?;
    let mut r = Report::new(echo);
    r.assert(format!("strong {}{}-lemma", p.d0, p.d1), v.strong_lemma);
    r.note("condition b", v.condition_b);
    r.note("condition b*", v.condition_bstar);
    r.note("condition c", v.condition_c);
    r.note("condition c*", v.condition_cstar);
    r.note("both differentials are derivations", v.derivations);
    r.assert("strong lemma = b and b*", v.strong_lemma == (v.condition_b && v.condition_bstar));
    r.assert("b iff c", v.condition_b == v.condition_c);
    r.assert("b* iff c*", v.condition_bstar == v.condition_cstar);
    let induced = induced_differential_triviality(&b)?;
    for i in &induced {
        r.assert(format!("{} vanishes when {}", i.map, i.precondition), i.passed());
    }
    r.section("verdict", &v);
    r.section("induced_differentials", &induced);
    if v.strong_lemma && v.derivations {
        let (_, tv) = dgms_trick(&b)?;
        r.assert("trick bicomplex satisfies the strong lemma", tv.strong_lemma);
        r.section("trick", &tv);
    }
    Ok(r)
}

pub fn cohomology(echo: Vec<String>, path: &str, differential: Option<&str>) -> Result<Report> {
    let f = load(path)?;
    let a = f.primary();
    let d = match differential {
        Some(d) => d.to_string(),
        None => default_differential(a)?,
    };
    let h = CohomologyPresentation::compute(a, &d)?;
    let alg = h.induced_algebra()?;
    let well = h.check_well_defined();
    let mut r = Report::new(echo);
    r.assert(&well.axiom, well.passed);
    let s = alg.space();
    let products: Vec<_> = alg
        .structure_triples()
        .into_iter()
        .map(|(i, j, k, c)| json!([s.global_label(i), s.global_label(j), s.global_label(k), c]))
        .collect();
    let reps: BTreeMap<i32, Vec<String>> = a
        .space()
        .degrees()
        .map(|k| {
            let w = h.representatives(k).iter().map(|v| a.space().witness(k, v).to_string()).collect();
            (k, w)
        })
        .collect();
    r.section("differential", &d);
    r.section("dims", h.dims());
    r.section("representatives", reps);
    r.section("induced_products", products);
    Ok(r)
}

fn zigzag_or_reason(b: &Bicomplex) -> Result<std::result::Result<FormalityZigzag, String>> {
    match formality_zigzag(b) {
        Ok(z) => Ok(Ok(z)),
        Err(Error::Precondition(m)) => Ok(Err(m)),
        Err(e) => Err(e.into()),
    }
}

pub fn formality(echo: Vec<String>, p: &PairArgs) -> Result<Report> {
    let f = load(&p.file)?;
    let b = Bicomplex::new(f.primary().clone(), &p.d0, &p.d1)?;
    let mut r = Report::new(echo);
    match zigzag_or_reason(&b)? {
        Ok(z) => {
            r.assert("formality zig-zag certified", z.certified());
            r.section("certificate", &z.cert);
            let same = same_cohomology_check(&b)?;
            r.assert(format!("H({}) and H({}) agree as algebras", p.d0, p.d1), same.passed());
            r.section("same_cohomology", &same);
            if b.algebra().kind() == AlgebraKind::Lie {
                let v = homotopy_abelian_verdict(b.algebra(), &p.d0, Some(&z))?;
                r.section("homotopy_abelian", &v);
            }
        }
        Err(reason) => {
            r.assert("formality zig-zag certified", false);
            r.section("refused", reason);
        }
    }
    Ok(r)
}

pub fn sl2(echo: Vec<String>, path: &str) -> Result<Report> {
    let f = load(path)?;
    let a = f.get("full").unwrap_or_else(|| f.primary());
    let m = Sl2Module::from_algebra(a)?;
    let dec = weight_decomposition(&m)?;
    let mut r = Report::new(echo);
    r.assert("isotypic decomposition spans with matching dimensions", dec.passed());
    r.section("decomposition", &dec);
    r.section("multiplicities", dec.multiplicities());
    r.section("bigraded_dims", labeled_dims(&bigraded_dims(a)?));
    let ideal = low_weight_ideal(a)?;
    match plus_quotient(a, &ideal) {
        Ok(pq) => {
            r.assert("low-weight ideal is stable and A+ is well defined", true);
            r.section("ideal_dims", pq.ideal_dims(a.space()));
            r.section("plus_dims", pq.algebra().space().dims());
        }
        Err(e) => {
            r.assert("low-weight ideal is stable and A+ is well defined", false);
            r.section("quotient_error", e.to_string());
        }
    }
    Ok(r)
}

pub fn qdolbeault(echo: Vec<String>, path: &str, window: Option<i32>) -> Result<Report> {
    let f = load(path)?;
    let m = f.connection_model()?;
    let mut r = Report::new(echo);
    let auto = autoduality_check(&m)?;
    r.note("autodual", auto.autodual);
    r.section("autoduality", &auto);
    let flat = flatness_check(&m)?;
    r.assert("total differential squares to zero iff autodual", flat.agree);
    r.section("flatness", &flat);
    let certified = hyperholomorphic_certificate(&m)?;
    r.note("strong lemma for (del_bar_J, del_bar)", certified);
    if let Some(w) = window {
        let ext = extended_strong_lemma_check(&m, w)?;
        r.assert("extended complex: strong lemma at interior bidegrees", ext.passed);
        r.section("extended", &ext);
        return Ok(r);
    }
    let q = QuaternionicComplex::build(&m, None)?;
    r.section("qa_dims", q.dims());
    if auto.autodual {
        let c = quaternionic_cohomology_check(&q, &m)?;
        r.assert(
            format!("dim H^k(qA) = (k+1) dim H^k(del_bar) [{}]", c.mode),
            c.passed,
        );
        r.section("cohomology", &c);
        if m.full().is_some() {
            let phi = phi_isomorphism(&m)?;
            r.assert("phi is a bidegree-preserving isomorphism intertwining the differentials", phi.certificate.passed());
            r.section("phi", &phi.certificate);
        }
    }
    Ok(r)
}

pub fn spectral(echo: Vec<String>, path: &str) -> Result<Report> {
    let f = load(path)?;
    let m = f.connection_model()?;
    let q = QuaternionicComplex::build(&m, None)?;
    let mut r = Report::new(echo);
    let flat = flatness_check(&m)?;
    r.assert("total differential squares to zero", flat.d_squared_zero);
    if !flat.d_squared_zero {
        r.section("flatness", &flat);
        return Ok(r);
    }
    let pages = double_complex_spectral_sequence(&q)?;
    let certified = hyperholomorphic_certificate(&m)?;
    if certified {
        r.assert("degenerates at E2", pages.degenerates_at_e2);
    } else {
        r.note("degenerates at E2", pages.degenerates_at_e2);
    }
    r.note("E1 = E2", pages.e1_equals_e2());
    r.section("certified", certified);
    r.section("pages", &pages);
    Ok(r)
}

pub struct DeformOptions {
    pub order: usize,
    pub samples: usize,
    pub seed: u64,
    pub differential: Option<String>,
}

fn random_series(r: &mut impl rand::Rng, degree: i32, dim: usize, ring: TruncatedRing) -> Result<Series> {
    let orders = (1..ring.order()).map(|_| random_vector(r, dim)).collect();
    Ok(series_from_orders(degree, dim, ring, orders)?)
}

pub fn deform(echo: Vec<String>, path: &str, o: &DeformOptions) -> Result<Report> {
    let f = load(path)?;
    let ring = TruncatedRing::new(o.order)?;
    let mut r = Report::new(echo);
    if is_connection_file(&f) {
        deform_connection(&mut r, &f.connection_model()?, ring, o)?;
    } else {
        deform_dgla(&mut r, f.primary(), ring, o)?;
    }
    Ok(r)
}

fn deform_connection(r: &mut Report, m: &ConnectionModel, ring: TruncatedRing, o: &DeformOptions) -> Result<()> {
    if !autoduality_check(m)?.autodual {
        r.assert("connection is autodual", false);
        return Ok(());
    }
    let qd = QaDeformation::new(m)?;
    let certified = hyperholomorphic_certificate(m)?;
    let mut g = rng(o.seed);
    let n_qa0 = qd.qa().space().dim(0);
    let n_qa1 = qd.qa().space().dim(1);
    let n_b0 = qd.base().space().dim(0);
    let (mut discrepancies, mut mc_count) = (0usize, 0usize);
    let mut eval_ok = true;
    let mut corr_ok = true;
    let mut residuals = Vec::new();
    for i in 0..o.samples {
        // alternate random elements with gauge orbits of zero, which are MC
        let x = if i % 2 == 0 {
            random_series(&mut g, 1, n_qa1, ring)?
        } else {
            let a = random_series(&mut g, 0, n_qa0, ring)?;
            gauge_transform(qd.qa(), "d", &a, &Series::zero(1, n_qa1, ring))?
        };
        let s = qd.mc_split(&x)?;
        if !s.equivalent {
            discrepancies += 1;
        }
        if i < 3 {
            residuals.push(json!({
                "sample": i,
                "split": s,
                "residual": mc_check(qd.qa(), "d", &x)?.classical_residual,
            }));
        }
        if s.total {
            mc_count += 1;
            let e = qd.evaluation(&x)?;
            eval_ok &= e.pi_x_mc && e.pi_y_mc && e.pi_x_morphism && e.pi_y_morphism;
            let a = random_series(&mut g, 0, n_b0, ring)?;
            corr_ok &= qd.connection_correspondence(&x, &a)?.passed();
        }
    }
    r.assert("full MC iff the x^2, y^2 and xy components vanish", discrepancies == 0);
    r.assert("evaluations send MC elements to MC elements", eval_ok);
    r.assert("connection data: relations over B, reduction mod t, gauge conjugation", corr_ok);
    let dual = TruncatedRing::dual();
    let kernel = qd
        .base()
        .differential(DEL_BAR)?
        .block(1)
        .vstack(&qd.base().differential(DEL_BAR_J)?.block(1))
        .kernel();
    let mut lift_ok = true;
    for b1 in kernel.basis_vectors() {
        let b = series_from_orders(1, b1.len(), dual, vec![b1])?;
        let l = qd.lift_y(&b)?;
        lift_ok &= !(l.in_kernel && l.input_mc) || (l.lifted_mc && l.roundtrip);
    }
    r.assert("y b is MC for first-order b in ker del_bar_J", lift_ok);
    let t = qd.tangent_map()?;
    let fo = qd.first_order()?;
    if certified {
        r.assert("(pi_y, pi_x) is bijective on H^1", t.bijective);
        r.assert("dim H^1(qA) = 2 dim H^1(del_bar)", t.h1_qa == 2 * t.h1_del_bar);
        r.assert("first-order x-deformations match H^1(del_bar_J)", fo.matches);
    } else {
        r.note("(pi_y, pi_x) is bijective on H^1", t.bijective);
        r.note("first-order x-deformations match H^1(del_bar_J)", fo.matches);
    }
    r.section("order", ring.order());
    r.section("samples", json!({"total": o.samples, "mc": mc_count, "split_discrepancies": discrepancies}));
    r.section("first_samples", residuals);
    r.section("tangent", &t);
    r.section("first_order", &fo);
    Ok(())
}

fn deform_dgla(r: &mut Report, a: &StructuredAlgebra, ring: TruncatedRing, o: &DeformOptions) -> Result<()> {
    let d = match &o.differential {
        Some(d) => d.clone(),
        None => default_differential(a)?,
    };
    let l = as_lie(a)?;
    let t = tangent_and_obstruction(&l, &d)?;
    r.section("differential", &d);
    r.section("tangent_obstruction", &t);
    let mut g = rng(o.seed);
    let (n0, n1) = (l.space().dim(0), l.space().dim(1));
    let zero_d = l.differential(&d)?.is_zero();
    let mut preserved = true;
    let mut adjoint = true;
    for _ in 0..o.samples {
        let a1 = random_series(&mut g, 0, n0, ring)?;
        let a2 = random_series(&mut g, 0, n0, ring)?;
        let x = gauge_transform(&l, &d, &a1, &Series::zero(1, n1, ring))?;
        let y = gauge_transform(&l, &d, &a2, &x)?;
        preserved &= mc_check(&l, &d, &x)?.classical && mc_check(&l, &d, &y)?.classical;
        if zero_d {
            let z = random_series(&mut g, 1, n1, ring)?;
            adjoint &= gauge_transform(&l, &d, &a1, &z)? == exp_adjoint(&l, &a1, &z);
        }
    }
    r.assert("gauge action preserves Maurer-Cartan elements", preserved);
    if zero_d {
        r.assert("with d = 0 the gauge action is the exponential adjoint action", adjoint);
    }
    let Some(d1) = ["d1"].into_iter().find(|n| *n != d && l.differential(n).is_ok()) else {
        return Ok(());
    };
    let Ok(b) = Bicomplex::new(l.clone(), &d, d1) else {
        return Ok(());
    };
    match zigzag_or_reason(&b)? {
        Ok(z) => {
            let tr = obstruction_transport(&z)?;
            r.assert("obstruction on L agrees with the one on H through the zig-zag", tr.agree);
            let h1 = t.tangent_dim;
            let mut samples: Vec<Vector> = (0..h1).map(|i| unit_vector(h1, i)).collect();
            for _ in 0..o.samples.min(8) {
                samples.push((0..h1).map(|_| random_small(&mut g)).collect());
            }
            if h1 >= 2 {
                let mut v = vec![Scalar::from_int(0); h1];
                v[0] = Scalar::from_int(1);
                v[1] = Scalar::from_int(1);
                samples.push(v);
            }
            let order = TruncatedRing::new(ring.order().max(3))?;
            let q = quadraticity_probe(Some(&z), &samples, order)?;
            r.assert("unobstructed classes lift, obstructed ones stop at order 3", q.passed);
            r.section("quadraticity", &q);
        }
        Err(reason) => r.section("quadraticity_refused", reason),
    }
    Ok(())
}

#[derive(Subcommand, Debug, Clone)]
pub enum Recipe {
    /// Flat torus with trivial bundle of rank r: Dolbeault and full models.
    Torus {
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    /// Dots and squares, optionally tensored with gl(r).
    DotsSquares {
        /// e.g. "0:1,1:2"
        #[arg(long, default_value = "0:1")]
        dots: String,
        /// Base degrees of the squares, e.g. "0,1".
        #[arg(long, default_value = "0")]
        squares: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Emit the commutator DGLA.
        #[arg(long)]
        lie: bool,
    },
    /// Seeded dots⊕squares recipe with the given number of zigzags.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        zigzags: usize,
        #[arg(long, default_value_t = 60)]
        max_dim: usize,
    },
    /// k zigzags based in degree 0.
    Zigzag {
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// A single square with zero product.
    Square,
    /// Connection model from a seeded bicomplex (del_bar_J = d0, del_bar = d1).
    Connection {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturb del_bar_J so that autoduality fails.
        #[arg(long)]
        corrupt: bool,
    },
    /// Quadratic cone: [u,u] = w, [v,v] = -w, zero differentials.
    Cone,
    /// Dots⊕squares DGLA plus the cone, in a mixed basis.
    SquaresCone {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_dots(s: &str) -> Result<BTreeMap<i32, usize>> {
    let mut out = BTreeMap::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, n) = part.split_once(':').with_context(|| format!("malformed dot spec {part:?}"))?;
        out.insert(k.trim().parse()?, n.trim().parse()?);
    }
    Ok(out)
}

fn parse_list(s: &str) -> Result<Vec<i32>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse().with_context(|| format!("malformed degree {p:?}")))
        .collect()
}

pub fn generate(recipe: &Recipe) -> Result<String> {
    let single = |a: StructuredAlgebra| ModelFile::single(a).emit();
    Ok(match recipe {
        Recipe::Torus { rank } => ModelFile::from_connection_model(&torus_model(*rank)?).emit(),
        Recipe::DotsSquares {
            dots,
            squares,
            seed,
            rank,
            lie,
        } => {
            let b = dots_squares_model(&parse_dots(dots)?, &parse_list(squares)?, *seed)?;
            let mut a = end_tensor(b.algebra(), *rank)?;
            if *lie {
                a = commutator_dgla(&a)?;
            }
            single(a)
        }
        Recipe::Random { seed, zigzags, max_dim } => {
            if *max_dim < 1 + 4 + 2 * zigzags {
                bail!("max-dim {max_dim} is too small for {zigzags} zigzag(s)");
            }
            single(synthetic_bicomplex(&SyntheticRecipe::random(*seed, *zigzags, *max_dim))?.algebra().clone())
        }
        Recipe::Zigzag { count } => single(zigzag_model(*count)?.algebra().clone()),
        Recipe::Square => single(square_model()?.algebra().clone()),
        Recipe::Connection { seed, corrupt } => {
            let b = synthetic_bicomplex(&SyntheticRecipe::random(*seed, 0, 40))?;
            let mut m = connection_from_bicomplex(&b)?;
            if *corrupt {
                m = corrupt_connection(&m, *seed)?;
            }
            emit_algebra(m.dolbeault())
        }
        Recipe::Cone => single(cone_model()?),
        Recipe::SquaresCone { seed } => single(squares_cone_lie(*seed)?.algebra().clone()),
    })
}
