use ahs::normalization::{deformation_delta_kappa0, trace_kappa0};
use ahs::spencer::{spencer_d2, spencer_dstar};
use ahs::testkit::*;
use ahs::{build_algebra, OneCochain, StructureKind};
use proptest::prelude::*;

fn spec(kind: StructureKind, seed: u64, symmetry: Symmetry) -> SampleSpec {
    SampleSpec { kind, seed, count: 3, symmetry }
}

#[test]
fn streams_are_reproducible() {
    let s = spec(StructureKind::Lagrangian { m: 3 }, 5, Symmetry::Harmonic);
    let a = samples(&s).unwrap();
    let b = samples(&s).unwrap();
    assert_eq!(a, b);
    assert_eq!(a[0], random_curvature(&s).unwrap());
    let c = samples(&SampleSpec { seed: 6, ..s }).unwrap();
    assert_ne!(a, c);
}

#[test]
fn symmetry_classes_hold() {
    for kind in StructureKind::grid(2, 4) {
        let alg = build_algebra(kind).unwrap();
        for d in samples(&spec(kind, 1, Symmetry::RiemannSymmetric)).unwrap() {
            assert!(spencer_d2(&alg, &d.kappa0).unwrap().iter().all(|x| x.abs() < 1e-12), "{kind}");
        }
        for d in samples(&spec(kind, 2, Symmetry::Harmonic)).unwrap() {
            assert!(spencer_d2(&alg, &d.kappa0).unwrap().iter().all(|x| x.abs() < 1e-12));
            assert!(spencer_dstar(&alg, &d.kappa0).unwrap().max_abs() < 1e-12, "{kind}");
            assert!(spencer_dstar(&alg, d.kappa_minus.as_ref().unwrap()).unwrap().max_abs() < 1e-12);
        }
        for d in samples(&spec(kind, 3, Symmetry::ArbitraryAlternating)).unwrap() {
            assert_eq!(d.kappa0.alternation_defect(), 0.0);
        }
    }
}

#[test]
fn raw_curvature_is_attached_where_defined() {
    for kind in [StructureKind::Conformal { m: 4 }, StructureKind::Projective { q: 3 }] {
        let d = random_curvature(&spec(kind, 8, Symmetry::DeformationImage)).unwrap();
        let raw = d.raw.unwrap();
        assert!(raw.antisymmetry_defect() < 1e-14);
        assert!(raw.bianchi_defect() < 1e-13);
    }
    let d = random_curvature(&spec(StructureKind::Spinorial { m: 4 }, 8, Symmetry::Harmonic)).unwrap();
    assert!(d.raw.is_none());
}

#[test]
fn brute_force_map_matches_direct_traces() {
    let alg = build_algebra(StructureKind::Spinorial { m: 4 }).unwrap();
    let t = brute_force_trace_map(&alg).unwrap();
    let mut s = Sampler::new(&alg, 12);
    let g = s.one_cochain(1).unwrap();
    let direct = trace_kappa0(&alg, &deformation_delta_kappa0(&alg, &g).unwrap()).unwrap();
    let via = &t * nalgebra::DVector::from_column_slice(&g.data);
    let n = alg.n();
    for x in 0..n {
        for y in 0..n {
            assert!((direct[(x, y)] - via[x * n + y]).abs() < 1e-13);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn round_trip_trace_comes_from_gamma(m in 3usize..=5, seed in any::<u64>()) {
        let alg = build_algebra(StructureKind::Lagrangian { m }).unwrap();
        let mut s = Sampler::new(&alg, seed);
        let (data, truth) = s.round_trip().unwrap();
        let g: OneCochain = truth.to_cochain(&alg).unwrap();
        let want = trace_kappa0(&alg, &deformation_delta_kappa0(&alg, &g).unwrap()).unwrap();
        let got = trace_kappa0(&alg, &data.kappa0).unwrap();
        prop_assert!((got - want).amax() < 1e-12);
    }

    #[test]
    fn samples_lie_in_the_unit_box(seed in any::<u64>()) {
        let alg = build_algebra(StructureKind::Grassmannian { p: 2, q: 2 }).unwrap();
        let mut s = Sampler::new(&alg, seed);
        prop_assert!(s.uniform(50).iter().all(|x| x.abs() <= 1.0));
    }
}
