mod common;

use common::*;
use nodal_core::field::{Field, PrimeField, Rationals, DEFAULT_PRIMES};
use nodal_core::fixture::{fermat_fixture, multi_node, one_node, Fixture, Support};
use nodal_core::hodge::{hodge_graded_dims, ideal_of_points_dim, GradedDim};
use nodal_core::koszul::{koszul_hn_dim, mdr, syzygy_dim, syzygy_space, KoszulContext};
use nodal_core::milnor::{smooth_reference_series, JacobianContext, Threshold};
use nodal_core::nodal::{certify_nodal, hessian_rank_at, is_singular_at, ProjectivePoint, Verdict};
use nodal_core::parse::parse_rational_polynomial;
use nodal_core::poly::HomogeneousPolynomial;
use nodal_core::session::{self, Command, Options};
use nodal_core::torelli::{
    period_differential, phi_injective, phi_matrix, variable_multiplication_kernel, DeformationSubspace,
};

fn fp() -> PrimeField {
    PrimeField::new(DEFAULT_PRIMES[0]).unwrap()
}

fn ctx_of(fx: &Fixture) -> JacobianContext<PrimeField> {
    JacobianContext::new(fx.f.reduce_into(&fp()).unwrap()).unwrap()
}

fn one_node_quartic() -> Fixture {
    one_node(3, 4, 1, Support::Dense).unwrap()
}

/// `dim H^n(K•(f))_m` from oracle ranks of the syzygy and Koszul-relation matrices.
fn oracle_hn_dim(f: &HomogeneousPolynomial<Rationals>, m: u32) -> usize {
    let nvars = f.nvars();
    let n = nvars as u32 - 1;
    let d = f.degree();
    if m < n {
        return 0;
    }
    let r = m - n;
    let syz = nvars * binom(nvars as u64 + u64::from(r) - 1, u64::from(r)) as usize - jacobian_dim(f, r + d - 1);
    if r + 1 < d {
        return syz;
    }
    let fp = poly_mod_p(f);
    let partials: Vec<PolyP> = (0..nvars).map(|i| partial(&fp, i)).collect();
    let index = index_of_degree(nvars, r);
    let width = index.len();
    let mut rows = Vec::new();
    for i in 0..nvars {
        for j in i + 1..nvars {
            for h in monomials(nvars, r + 1 - d) {
                let mut v = vec![0; nvars * width];
                v[i * width..(i + 1) * width].copy_from_slice(&row(&times_monomial(&partials[j], &h), &index));
                let neg: Vec<u64> = row(&times_monomial(&partials[i], &h), &index)
                    .into_iter()
                    .map(|x| (P - x) % P)
                    .collect();
                v[j * width..(j + 1) * width].copy_from_slice(&neg);
                rows.push(v);
            }
        }
    }
    syz - rank_mod_p(rows)
}

#[test]
fn fermat_quartic_jacobian_piece() {
    // degree-4 monomials in four variables divisible by some x_i^3
    let divisible = monomials(4, 4).into_iter().filter(|e| e.iter().any(|&a| a >= 3)).count();
    assert_eq!(divisible, 16);
    let fx = fermat_fixture(3, 4).unwrap();
    let ctx = ctx_of(&fx);
    assert_eq!(ctx.jacobian_dim(4), 16);
    assert_eq!(ctx.milnor_dim(4), 35 - 16);
    assert_eq!(jacobian_dim(&fx.f, 4), 16);
}

#[test]
fn fermat_quartic_hilbert_function() {
    let series = reference_series(3, 4, 9);
    assert_eq!(series, vec![1, 4, 10, 16, 19, 16, 10, 4, 1, 0]);
    let ctx = ctx_of(&fermat_fixture(3, 4).unwrap());
    let library: Vec<u64> = smooth_reference_series(3, 4).into_iter().map(|c| c as u64).collect();
    assert_eq!(&library[..9], &series[..9]);
    for (k, &want) in series.iter().enumerate() {
        assert_eq!(ctx.milnor_dim(k as u32) as u64, want, "k = {k}");
        assert_eq!(ctx.milnor_dim_explicit(k as u32) as u64, want, "k = {k}");
        assert_eq!(ctx.smooth_reference_dim(k as u32) as u64, want);
    }
}

#[test]
fn milnor_algebra_at_degree_d_minus_n_minus_1_is_constants() {
    for n in 2..=5 {
        let d = n as u32 + 1;
        let ctx = ctx_of(&fermat_fixture(n, d).unwrap());
        assert_eq!(ctx.milnor_dim(0), 1);
    }
    let ctx = ctx_of(&one_node(4, 5, 1, Support::Dense).unwrap());
    assert_eq!(ctx.milnor_dim(0), 1);
}

#[test]
fn fermat_vanishes_past_the_socle() {
    for (n, d) in [(2, 3), (3, 4), (3, 5), (4, 5)] {
        let fx = fermat_fixture(n, d).unwrap();
        let ctx = ctx_of(&fx);
        let top = (n as u32 + 1) * (d - 2);
        assert_eq!(ctx.socle_degree(), top);
        assert_eq!(ctx.milnor_dim(top), 1);
        assert_eq!(ctx.milnor_dim(top + 1), 0);
        assert_eq!(milnor_dim(&fx.f, top + 1), 0);
        assert_eq!(milnor_dim(&fx.f, top), 1);
    }
}

#[test]
fn smooth_reference_matches_fermat_everywhere() {
    for (n, d) in [(2, 3), (3, 4), (3, 5), (4, 5), (4, 6), (5, 6)] {
        let fx = fermat_fixture(n, d).unwrap();
        let ctx = ctx_of(&fx);
        let k_max = (n as u32 + 1) * (d - 2) + 2;
        let series = reference_series(n, d, k_max);
        for k in 0..=k_max {
            assert_eq!(ctx.milnor_dim(k) as u64, series[k as usize], "({n},{d}) k = {k}");
        }
    }
}

#[test]
fn one_node_threshold_by_brute_force_scan() {
    let fx = one_node_quartic();
    let ctx = ctx_of(&fx);
    let series = reference_series(3, 4, 9);
    let first_divergence = (0..=9u32)
        .find(|&k| milnor_dim(&fx.f, k) as u64 != series[k as usize])
        .expect("a singular quartic diverges from the reference");
    let ct = first_divergence - 1;
    assert_eq!(ctx.coincidence_threshold(), Threshold::Value(ct));
    assert_eq!(ct, 8);
    assert!(ct > 2 * 4 - 3 - 1);
    // the tail equals the node count
    assert_eq!(milnor_dim(&fx.f, 9), 1);
    assert_eq!(milnor_dim(&fx.f, 10), 1);
}

#[test]
fn tjurina_counts_nodes() {
    let fx = one_node_quartic();
    let ctx = ctx_of(&fx);
    assert_eq!(ctx.tjurina_count().unwrap(), 1);
    assert_eq!(certify_nodal(&ctx, &fx.points).unwrap().verdict, Verdict::Nodal(1));
    for k in 9..=11 {
        assert_eq!(milnor_dim(&fx.f, k), 1, "k = {k}");
    }

    let fx = multi_node(3, 4, 2, 1, Support::Dense).unwrap();
    let ctx = ctx_of(&fx);
    assert_eq!(ctx.tjurina_count().unwrap(), 2);
    assert_eq!(certify_nodal(&ctx, &fx.points).unwrap().verdict, Verdict::Nodal(2));
    for k in 9..=11 {
        assert_eq!(milnor_dim(&fx.f, k), 2, "k = {k}");
    }
}

#[test]
fn saturation_is_the_ideal_of_the_nodes() {
    for fx in [one_node_quartic(), multi_node(3, 4, 2, 1, Support::Dense).unwrap()] {
        let ctx = ctx_of(&fx);
        let coords: Vec<_> = fx.points.iter().map(|p| p.coordinates().to_vec()).collect();
        for k in [2, 4, 6] {
            let sat = ctx.saturation_graded(k).unwrap();
            let want = vanishing_dim(&coords, 4, k);
            assert_eq!(sat.dim(), want, "k = {k}");
            assert_eq!(ideal_of_points_dim(&fp(), &coords, 3, k).unwrap(), want);
            // every basis element vanishes at the nodes
            let basis = ctx.degree_basis(k);
            let field = fp();
            for r in sat.rows() {
                let g = HomogeneousPolynomial::from_sparse(&field, &basis, r);
                for p in &fx.points {
                    let a = p.affine_in(&field).unwrap();
                    assert!(field.is_zero(&g.eval(&a)));
                }
            }
        }
    }
}

#[test]
fn koszul_relations_are_syzygies() {
    for fx in [fermat_fixture(3, 4).unwrap(), one_node_quartic()] {
        let ctx = ctx_of(&fx);
        let field = fp();
        let r = ctx.d() - 1;
        let syz = syzygy_space(&ctx, r);
        let basis = ctx.degree_basis(r);
        let width = basis.len();
        let partials = ctx.partials();
        for i in 0..4 {
            for j in i + 1..4 {
                let mut v = vec![field.zero(); 4 * width];
                for (c, x) in partials[j].to_sparse(&basis) {
                    v[i * width + c as usize] = x;
                }
                for (c, x) in partials[i].to_sparse(&basis) {
                    v[j * width + c as usize] = field.neg(&x);
                }
                assert!(syz.contains(&v), "E_{i}{j}");
            }
        }
    }
}

#[test]
fn partials_of_a_nodal_quartic_are_independent() {
    let fx = one_node_quartic();
    let ctx = ctx_of(&fx);
    assert_eq!(syzygy_dim(&ctx, 0), 0);
    assert_eq!(syzygy_space(&ctx, 0).dim(), 0);
    let fp_poly = poly_mod_p(&fx.f);
    let index = index_of_degree(4, 3);
    let rows: Vec<_> = (0..4).map(|i| row(&partial(&fp_poly, i), &index)).collect();
    assert_eq!(rank_mod_p(rows), 4);
}

#[test]
fn fermat_koszul_relations_are_independent() {
    let ctx = ctx_of(&fermat_fixture(3, 4).unwrap());
    let koszul = KoszulContext::new(&ctx);
    assert_eq!(koszul.trivial_dim_explicit(3), 6);
    assert_eq!(koszul.trivial_dim_regular(3), 6);
    // H^n at m = r + n vanishes for smooth f, so syzygies are trivial
    assert_eq!(syzygy_dim(&ctx, 3), 6);
}

#[test]
fn koszul_cohomology_on_one_node_quartic() {
    let fx = one_node_quartic();
    let ctx = ctx_of(&fx);
    for m in 0..=5 {
        assert_eq!(koszul_hn_dim(&ctx, m), 0, "m = {m}");
        assert_eq!(oracle_hn_dim(&fx.f, m), 0, "m = {m}");
    }
    let mdr = mdr(&ctx, None).unwrap().value().unwrap();
    assert!(mdr >= 3);
    assert!(koszul_hn_dim(&ctx, mdr + 3) >= 1);
    assert_eq!(oracle_hn_dim(&fx.f, mdr + 3), koszul_hn_dim(&ctx, mdr + 3));
    for q in 0..mdr {
        assert_eq!(oracle_hn_dim(&fx.f, q + 3), 0, "q = {q}");
    }
    let ct = ctx.coincidence_threshold().value().unwrap();
    assert_eq!(ct, mdr + 4 - 2);
}

#[test]
fn phi_in_the_lowest_degree_is_reduction() {
    let fx = one_node(3, 4, 1, Support::Dense).unwrap();
    let ctx = ctx_of(&fx);
    let phi = phi_matrix(&ctx).unwrap();
    assert_eq!(phi.hom_source_dim, 1);
    assert_eq!(phi.source_dim, ctx.milnor_dim(4));
    assert_eq!(phi.hom_target_dim, ctx.milnor_dim(4));
    // the column of a standard monomial is its own coordinate vector
    let rows = phi.map.to_dense_rows();
    let field = fp();
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            assert_eq!(*x, if i == j { field.one() } else { field.zero() });
        }
    }
    let cert = phi_injective(&ctx).unwrap();
    assert!(cert.passed);
    assert_eq!(cert.quantities["source_dim"], ctx.milnor_dim(4));
}

#[test]
fn phi_on_fermat_quintic_surface() {
    let fx = fermat_fixture(3, 5).unwrap();
    let ctx = ctx_of(&fx);
    let phi = phi_matrix(&ctx).unwrap();
    let rows: Vec<Vec<u64>> = phi
        .map
        .to_dense_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| x % P).collect())
        .collect();
    assert_eq!(phi.rank, ctx.milnor_dim(5));
    assert_eq!(phi.rank, reference_series(3, 5, 5)[5] as usize);
    // entries of a monomial Fermat quotient are 0 or 1, so they survive reduction mod P
    assert_eq!(rank_mod_p(rows), phi.rank);
}

#[test]
fn cone_is_out_of_hypothesis() {
    let f = parse_rational_polynomial("x0^4 + x1^4 + x2^4", 3).unwrap();
    let ctx = JacobianContext::new(f.reduce_into(&fp()).unwrap()).unwrap();
    let vertex = ProjectivePoint::coordinate(4, 3);
    let cert = certify_nodal(&ctx, &[vertex]).unwrap();
    assert!(!cert.verdict.is_nodal());
    let phi = phi_injective(&ctx).unwrap();
    println!("cone x0^4+x1^4+x2^4: {phi}");
}

#[test]
fn multiplication_kernels() {
    for fx in [one_node_quartic(), multi_node(3, 4, 2, 1, Support::Dense).unwrap()] {
        let ctx = ctx_of(&fx);
        for t in 0..4 {
            assert_eq!(variable_multiplication_kernel(&ctx, t).dim(), 0, "t = {t}");
        }
    }
    for (n, d) in [(3, 4), (3, 5), (4, 5)] {
        let ctx = ctx_of(&fermat_fixture(n, d).unwrap());
        let top = (n as u32 + 1) * (d - 2);
        assert_eq!(variable_multiplication_kernel(&ctx, top).dim(), 1);
        assert_eq!(reference_series(n, d, top + 1)[top as usize + 1], 0);
    }
}

#[test]
fn period_differential_is_minus_phi() {
    let fx = one_node_quartic();
    let ctx = ctx_of(&fx);
    let v = DeformationSubspace::standard_complement(&ctx);
    assert_eq!(v.dim(), ctx.milnor_dim(4));
    let (map, cert) = period_differential(&ctx, &v).unwrap();
    assert!(cert.passed);
    assert_eq!(cert.quantities["rank"], ctx.milnor_dim(4));
    let field = fp();
    let phi = phi_matrix(&ctx).unwrap().map.to_dense_rows();
    let dp = map.to_dense_rows();
    assert_eq!(phi.len(), dp.len());
    for (a, b) in phi.iter().zip(&dp) {
        for (x, y) in a.iter().zip(b) {
            assert_eq!(field.neg(x), *y);
        }
    }
}

#[test]
fn hodge_pieces_of_fermat() {
    let ctx = ctx_of(&fermat_fixture(3, 4).unwrap());
    let h = hodge_graded_dims(&ctx, Some(0)).unwrap();
    assert_eq!(h.gr_top, 1);
    assert_eq!(h.gr_next, GradedDim::Value(35 - 16));

    let ctx = ctx_of(&fermat_fixture(5, 6).unwrap());
    let h = hodge_graded_dims(&ctx, Some(0)).unwrap();
    let series = reference_series(5, 6, 6);
    assert_eq!(h.gr_top, series[0] as usize);
    assert_eq!(h.gr_next, GradedDim::Value(series[6] as usize));
    assert_eq!(series[6], 462 - 6 * 6);
}

#[test]
fn hodge_next_piece_of_one_node_quartic() {
    let fx = one_node_quartic();
    let ctx = ctx_of(&fx);
    let h = hodge_graded_dims(&ctx, Some(1)).unwrap();
    let coords: Vec<_> = fx.points.iter().map(|p| p.coordinates().to_vec()).collect();
    let want = vanishing_dim(&coords, 4, 4) - jacobian_dim(&fx.f, 4);
    assert_eq!(h.gr_next, GradedDim::Value(want));
    assert_eq!(want, 34 - 16);
}

#[test]
fn points_in_general_position() {
    let pts: Vec<Vec<_>> = [[1, 2, 3, 5], [2, -1, 7, 1], [3, 3, -2, 9], [1, 0, 4, -6], [5, 1, 1, 2]]
        .iter()
        .map(|p| p.iter().map(|&x| rational(x)).collect())
        .collect();
    for m in 1..=pts.len() {
        for k in 2..=4u32 {
            let dim_s = binom(3 + u64::from(k), 3) as usize;
            assert_eq!(ideal_of_points_dim(&fp(), &pts[..m], 3, k).unwrap(), dim_s - m);
            assert_eq!(ideal_of_points_dim(&Rationals, &pts[..m], 3, k).unwrap(), dim_s - m);
            assert_eq!(vanishing_dim(&pts[..m], 4, k), dim_s - m);
        }
    }
}

#[test]
fn constructed_node_is_singular() {
    let fx = one_node_quartic();
    // no monomial carries x3 to a power above d-2, so every partial vanishes at e3
    let nvars = fx.f.nvars();
    assert!(fx.f.terms().all(|(m, _)| m.exponents(nvars)[3] <= 2));
    let node = ProjectivePoint::coordinate(4, 3);
    assert!(is_singular_at(&fx.f, &node).unwrap());
    let generic = ProjectivePoint::parse("[1 : 2 : -3 : 5]", 3).unwrap();
    assert!(!is_singular_at(&fx.f, &generic).unwrap());
    let fpoly = poly_mod_p(&fx.f);
    let x: Vec<u64> = [1, 2, P - 3, 5].to_vec();
    assert!((0..4).any(|i| eval_mod_p(&partial(&fpoly, i), &x) != 0));
}

#[test]
fn hessian_rank_in_two_charts() {
    let fx = one_node_quartic();
    // x0 -> x0 - x3 moves the node from [0:0:0:1] to [1:0:0:1]
    let images: Vec<_> = ["x0 - x3", "x1", "x2", "x3"]
        .iter()
        .map(|t| parse_rational_polynomial(t, 3).unwrap())
        .collect();
    let g = fx.f.linear_substitution(&images);
    assert_eq!(g.degree(), 4);
    let coords = ProjectivePoint::parse("[1 : 0 : 0 : 1]", 3).unwrap().coordinates().to_vec();
    let c0 = ProjectivePoint::with_chart(coords.clone(), 0).unwrap();
    let c3 = ProjectivePoint::with_chart(coords, 3).unwrap();
    assert!(is_singular_at(&g, &c0).unwrap());
    assert_eq!(hessian_rank_at(&g, &c0).unwrap(), 3);
    assert_eq!(hessian_rank_at(&g, &c3).unwrap(), 3);
}

#[test]
fn unlisted_node_fails_certification() {
    let fx = one_node_quartic();
    let ctx = ctx_of(&fx);
    assert_eq!(
        certify_nodal(&ctx, &[]).unwrap().verdict,
        Verdict::Failed("tjurina=1 but 0 points listed".into())
    );
}

#[test]
fn hilbert_command_tables() {
    let opts = Options {
        k_max: Some(8),
        ..Options::default()
    };
    let report = session::run(&Command::Hilbert, &fermat_fixture(3, 4).unwrap(), &opts);
    let table = report.table("hilbert").unwrap();
    let want: Vec<String> = [1, 4, 10, 16, 19, 16, 10, 4, 1].iter().map(u32::to_string).collect();
    let milnor: Vec<String> = table.column("milnor_dim").unwrap().into_iter().map(String::from).collect();
    let reference: Vec<String> = table.column("smooth_reference").unwrap().into_iter().map(String::from).collect();
    assert_eq!(milnor, want);
    assert_eq!(reference, want);

    let fx = one_node_quartic();
    let report = session::run(&Command::Hilbert, &fx, &Options::default());
    let table = report.table("hilbert").unwrap();
    let invariants = report.table("invariants").unwrap();
    let ct: u32 = invariants.rows.iter().find(|r| r[0] == "ct").unwrap()[1].parse().unwrap();
    let milnor = table.column("milnor_dim").unwrap();
    let reference = table.column("smooth_reference").unwrap();
    let first = (0..milnor.len()).find(|&k| milnor[k] != reference[k]).unwrap();
    assert_eq!(first as u32, ct + 1);
}
