use ahs::normalization::{dstar_form, trace_kappa0};
use ahs::spencer::*;
use ahs::testkit::Sampler;
use ahs::{build_algebra, Grade, GradedLieAlgebra, StructureKind};
use proptest::prelude::*;

fn grid() -> Vec<StructureKind> {
    StructureKind::grid(3, 5)
}

fn diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn cohomology_table() {
    for kind in StructureKind::grid(4, 6) {
        let alg = build_algebra(kind).unwrap();
        let h11 = cohomology_dim(&alg, Level::H11);
        let h21 = cohomology_dim(&alg, Level::H21);
        assert_eq!(h11 > 0, kind.is_projective_type(), "{kind}: H11 = {h11}");
        if kind != (StructureKind::Conformal { m: 2 }) {
            assert_eq!(h21 > 0, !kind.is_normalizable(), "{kind}: H21 = {h21}");
        }
    }
}

#[test]
fn complementarity_on_both_levels() {
    for kind in grid() {
        let alg = build_algebra(kind).unwrap();
        for level in [Level::H11, Level::H21] {
            let r = complementarity_check(&alg, level);
            assert!(r.complementary, "{kind} {level:?}: {r:?}");
            assert_eq!(r.dim_im_d + r.dim_ker_dstar, r.dim_total);
        }
    }
}

#[test]
fn dense_and_blocked_operators_agree() {
    for kind in grid() {
        let alg = build_algebra(kind).unwrap();
        let mut s = Sampler::new(&alg, 3);
        for g in [0, 1] {
            let psi = s.one_cochain(g).unwrap();
            let dense = spencer_d(&alg, &psi).unwrap().pair_values();
            let op = d_operator(&alg, Grade::from_value(g).unwrap());
            assert!(diff(&dense, &op.apply(&psi.data)) < 1e-13, "{kind} d on degree {g}");
        }
        for g in [-1, 0] {
            let phi = s.alternating(g).unwrap();
            let dense = spencer_dstar(&alg, &phi).unwrap();
            let op = dstar_operator(&alg, Grade::from_value(g).unwrap());
            assert!(diff(&dense.data, &op.apply(&phi.pair_values())) < 1e-13, "{kind} d* on degree {g}");
        }
        let k = s.alternating(0).unwrap();
        let dense = spencer_d2(&alg, &k).unwrap();
        let op = d2_operator(&alg);
        assert!(diff(&dense, &op.apply(&k.pair_values())) < 1e-13, "{kind} bianchi");
    }
}

#[test]
fn dstar_is_the_trace() {
    for kind in grid() {
        let alg = build_algebra(kind).unwrap();
        let mut s = Sampler::new(&alg, 11);
        for _ in 0..5 {
            let k0 = s.alternating(0).unwrap();
            let a = dstar_form(&alg, &k0).unwrap();
            let b = trace_kappa0(&alg, &k0).unwrap();
            assert!((a - b).amax() < 1e-12 * k0.max_abs().max(1.0), "{kind}");
        }
    }
}

#[test]
fn harmonic_decomposition_reconstructs() {
    for kind in grid() {
        let alg = build_algebra(kind).unwrap();
        let mut s = Sampler::new(&alg, 5);
        let t = s.alternating(-1).unwrap();
        let (h, psi) = harmonic_decompose(&alg, &t).unwrap();
        assert!(spencer_dstar(&alg, &h).unwrap().max_abs() < 1e-11, "{kind}");
        let back = h.axpy(1.0, &spencer_d(&alg, &psi).unwrap());
        assert!(back.sub(&t).max_abs() < 1e-12, "{kind}");
    }
}

#[test]
fn projectors_are_idempotent() {
    let alg = build_algebra(StructureKind::Grassmannian { p: 2, q: 3 }).unwrap();
    let p = harmonic_projector(&alg);
    let mut s = Sampler::new(&alg, 9);
    let v = s.alternating(0).unwrap().pair_values();
    let once = p.project(&v);
    assert!(diff(&once, &p.project(&once)) < 1e-13);
    let k = ahs::TwoCochain::from_pair_values(&alg, 0, &once).unwrap();
    assert!(spencer_d2(&alg, &k).unwrap().iter().all(|x| x.abs() < 1e-12));
    assert!(spencer_dstar(&alg, &k).unwrap().max_abs() < 1e-12);
}

#[test]
fn wrong_degrees_are_rejected() {
    let alg = build_algebra(StructureKind::Projective { q: 2 }).unwrap();
    let psi = ahs::OneCochain::zeros(&alg, -1).unwrap();
    assert!(spencer_d(&alg, &psi).is_err());
    let phi = ahs::TwoCochain::zeros(&alg, 1).unwrap();
    assert!(spencer_dstar(&alg, &phi).is_err());
}

fn arb_kind() -> impl Strategy<Value = StructureKind> {
    prop::sample::select(grid())
}

fn with_alg<T>(kind: StructureKind, f: impl FnOnce(&GradedLieAlgebra) -> T) -> T {
    f(&build_algebra(kind).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bianchi_kills_coboundaries(kind in arb_kind(), seed in any::<u64>()) {
        with_alg(kind, |alg| {
            let mut s = Sampler::new(alg, seed);
            let psi = s.one_cochain(1).unwrap();
            let k = spencer_d(alg, &psi).unwrap();
            let r = spencer_d2(alg, &k).unwrap();
            prop_assert!(r.iter().all(|x| x.abs() < 1e-12));
            Ok(())
        })?;
    }

    #[test]
    fn d_is_g0_equivariant(kind in arb_kind(), seed in any::<u64>(), g in 0i32..2) {
        with_alg(kind, |alg| {
            let mut s = Sampler::new(alg, seed);
            let a = s.g0_element();
            let psi = s.one_cochain(g).unwrap();
            let lhs = spencer_d(alg, &g0_act_one(alg, &a, &psi).unwrap()).unwrap();
            let rhs = g0_act_two(alg, &a, &spencer_d(alg, &psi).unwrap()).unwrap();
            prop_assert!(lhs.sub(&rhs).max_abs() < 1e-12);
            Ok(())
        })?;
    }

    #[test]
    fn dstar_is_g0_equivariant(kind in arb_kind(), seed in any::<u64>(), g in -1i32..1) {
        with_alg(kind, |alg| {
            let mut s = Sampler::new(alg, seed);
            let a = s.g0_element();
            let phi = s.alternating(g).unwrap();
            let lhs = spencer_dstar(alg, &g0_act_two(alg, &a, &phi).unwrap()).unwrap();
            let rhs = g0_act_one(alg, &a, &spencer_dstar(alg, &phi).unwrap()).unwrap();
            prop_assert!(lhs.sub(&rhs).max_abs() < 1e-12);
            Ok(())
        })?;
    }
}
