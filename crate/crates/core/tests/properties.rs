mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use nodal_core::certificate::Certificate;
use nodal_core::field::{Field, FieldDescriptor, PrimeField, Rationals, DEFAULT_PRIMES};
use nodal_core::fixture::{one_node, Support};
use nodal_core::hodge::ideal_of_points_dim;
use nodal_core::koszul::mdr;
use nodal_core::linalg::bareiss_rank;
use nodal_core::milnor::{smooth_reference_dim, smooth_reference_series, JacobianContext};
use nodal_core::monomial::{monomials_of_degree, Monomial};
use nodal_core::nodal::ProjectivePoint;
use nodal_core::parse::parse_rational_polynomial;
use nodal_core::poly::HomogeneousPolynomial;
use nodal_core::report::{RunReport, Status, Table};

fn fp() -> PrimeField {
    PrimeField::new(DEFAULT_PRIMES[0]).unwrap()
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A form of degree `d` in `nvars` variables with small rational coefficients.
fn polynomial(nvars: usize, d: u32) -> impl Strategy<Value = HomogeneousPolynomial<Rationals>> {
    let monomials = monomials_of_degree(nvars, d);
    let len = monomials.len();
    prop::collection::vec((-5i64..=5, 1i64..=3), len).prop_map(move |coeffs| {
        let terms: Vec<_> = monomials
            .iter()
            .zip(coeffs)
            .filter(|(_, (a, _))| *a != 0)
            .map(|(m, (a, b))| (*m, q(a, b)))
            .collect();
        HomogeneousPolynomial::from_terms(&Rationals, nvars, d, terms).unwrap()
    })
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_text_round_trips(f in (2usize..5, 1u32..5).prop_flat_map(|(nvars, d)| polynomial(nvars, d))) {
        prop_assume!(!f.is_zero());
        let g = parse_rational_polynomial(&f.to_string(), f.ambient_dim()).unwrap();
        prop_assert_eq!(f, g);
    }

    #[test]
    fn euler_relation(f in polynomial(3, 4)) {
        let field = Rationals;
        let mut sum = HomogeneousPolynomial::zero(&field, 3, 4);
        for (i, g) in f.partial_derivatives().iter().enumerate() {
            let xi = HomogeneousPolynomial::monomial(&field, 3, Monomial::var(i), field.one());
            sum = sum.add(&xi.mul(g));
        }
        prop_assert_eq!(sum, f.scale(&field.from_i64(4)));
    }

    #[test]
    fn modular_rank_never_exceeds_rational_rank(m in small_matrix()) {
        let exact: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect();
        let r_q = Rationals.dense_rank(exact);
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        prop_assert_eq!(bareiss_rank(big), r_q);
        for p in [5u64, 7, DEFAULT_PRIMES[0]] {
            let k = PrimeField::new(p).unwrap();
            let rows = m.iter().map(|r| r.iter().map(|&x| k.from_i64(x)).collect()).collect();
            prop_assert!(k.dense_rank(rows) <= r_q);
        }
        let rows: Vec<Vec<u64>> = m.iter().map(|r| r.iter().map(|&x| common::to_mod_p(&q(x, 1))).collect()).collect();
        prop_assert!(common::rank_mod_p(rows) <= r_q);
    }

    #[test]
    fn reference_series_is_symmetric(n in 1usize..6, d in 2u32..7) {
        let series = smooth_reference_series(n, d);
        let top = (n as u32 + 1) * (d - 2);
        for k in 0..=top {
            prop_assert_eq!(smooth_reference_dim(n, d, k), smooth_reference_dim(n, d, top - k));
        }
        prop_assert_eq!(smooth_reference_dim(n, d, top + 1), 0);
        let total: u128 = series.iter().sum();
        prop_assert_eq!(total, u128::from(d - 1).pow(n as u32 + 1));
        let oracle = common::reference_series(n, d, top);
        for k in 0..=top {
            prop_assert_eq!(smooth_reference_dim(n, d, k) as u64, oracle[k as usize]);
        }
    }

    #[test]
    fn diagonal_forms_match_the_reference(
        coeffs in prop::collection::vec(prop_oneof![-7i64..=-1, 1i64..=7], 4),
        d in 3u32..6,
    ) {
        let text: String = coeffs.iter().enumerate().map(|(i, c)| format!(" {c:+}*x{i}^{d}")).collect();
        let f = parse_rational_polynomial(text.trim_start().trim_start_matches('+'), 3).unwrap();
        let ctx = JacobianContext::new(f.reduce_into(&fp()).unwrap()).unwrap();
        for k in 0..=4 * (d - 2) + 1 {
            prop_assert_eq!(ctx.milnor_dim(k), smooth_reference_dim(3, d, k));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn engine_matches_explicit_linear_algebra(f in polynomial(3, 3), k in 0u32..7) {
        prop_assume!(!f.is_zero());
        let ctx = JacobianContext::new(f.reduce_into(&fp()).unwrap()).unwrap();
        prop_assert_eq!(ctx.milnor_dim(k), ctx.milnor_dim_explicit(k));
        prop_assert_eq!(ctx.milnor_dim(k), common::milnor_dim(&f, k));
    }

    #[test]
    fn reduction_mod_p_only_grows_the_milnor_algebra(f in polynomial(3, 3), k in 0u32..5) {
        prop_assume!(!f.is_zero());
        let modular = JacobianContext::new(f.reduce_into(&fp()).unwrap()).unwrap();
        let exact = JacobianContext::new(f.clone()).unwrap();
        prop_assert!(modular.milnor_dim(k) >= exact.milnor_dim(k));
        let small = JacobianContext::new(f.reduce_into(&PrimeField::new(101).unwrap()).unwrap()).unwrap();
        prop_assert!(small.milnor_dim(k) >= exact.milnor_dim(k));
    }

    #[test]
    fn vanishing_ideal_of_points(
        pts in prop::collection::vec(prop::collection::vec(-6i64..=6, 4), 1..6),
        k in 1u32..5,
    ) {
        let pts: Vec<Vec<BigRational>> = pts.into_iter().map(|p| p.into_iter().map(|x| q(x, 1)).collect()).collect();
        prop_assume!(pts.iter().all(|p| p.iter().any(|x| *x != q(0, 1))));
        let dim_s = common::binom(3 + u64::from(k), 3) as usize;
        let exact = ideal_of_points_dim(&Rationals, &pts, 3, k).unwrap();
        prop_assert!(exact + pts.len() >= dim_s);
        prop_assert!(ideal_of_points_dim(&fp(), &pts, 3, k).unwrap() >= exact);
        prop_assert_eq!(common::vanishing_dim(&pts, 4, k), exact);
    }

    #[test]
    fn projective_points_are_scale_invariant(
        coords in prop::collection::vec(-9i64..=9, 4),
        (num, den) in (prop_oneof![-5i64..=-1, 1i64..=5], 1i64..=4),
    ) {
        prop_assume!(coords.iter().any(|&c| c != 0));
        let a: Vec<BigRational> = coords.iter().map(|&c| q(c, 1)).collect();
        let s = q(num, den);
        let b: Vec<BigRational> = a.iter().map(|x| x * &s).collect();
        let (pa, pb) = (ProjectivePoint::new(a).unwrap(), ProjectivePoint::new(b).unwrap());
        prop_assert!(pa.same_point(&pb));
        let reparsed = ProjectivePoint::parse(&pa.to_string(), 3).unwrap();
        prop_assert!(reparsed.same_point(&pa));
    }

    #[test]
    fn certificate_and_report_json_round_trip(
        claim in "[a-z_]{1,12}",
        quantities in prop::collection::btree_map("[a-z]{1,6}", 0usize..10_000, 0..5),
        passed in any::<bool>(),
        p in prop::sample::select(DEFAULT_PRIMES.to_vec()),
        rows in prop::collection::vec(prop::collection::vec("[0-9a-z ]{0,5}", 2), 0..4),
    ) {
        let mut cert = Certificate::new(claim, FieldDescriptor::Prime(p)).passed(passed).parameter("n", 3);
        for (k, v) in &quantities {
            cert = cert.quantity(k, *v);
        }
        let back: Certificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
        prop_assert_eq!(&back, &cert);

        let mut report = RunReport::new("hilbert", vec![FieldDescriptor::Prime(p), FieldDescriptor::Exact]);
        let mut table = Table::new("t", &["a", "b"]);
        for r in rows {
            table.row(r);
        }
        report.tables.push(table);
        report.certificates.push(cert);
        report.settle();
        prop_assert_eq!(report.status, if passed { Status::Pass } else { Status::ClaimFailed });
        let json = report.to_json();
        let back = RunReport::from_json(&json).unwrap();
        prop_assert_eq!(back.to_json(), json);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn generated_quartic_surfaces_satisfy_the_identities(seed in 0u64..1_000) {
        let fx = one_node(3, 4, seed, Support::Dense).unwrap();
        let ctx = JacobianContext::new(fx.f.reduce_into(&fp()).unwrap()).unwrap();
        let ct = ctx.coincidence_threshold().value().unwrap();
        let mdr = mdr(&ctx, None).unwrap().value().unwrap();
        prop_assert_eq!(ct, mdr + 4 - 2);
        prop_assert!(ct > 2 * 4 - 3 - 1);
        prop_assert_eq!(ctx.milnor_dim(0), 1);
        prop_assert_eq!(ctx.milnor_dim(4), smooth_reference_dim(3, 4, 4));
        prop_assert_eq!(ctx.tjurina_count().unwrap(), 1);
    }
}
