use ahs::prolongation::*;
use ahs::spencer::{harmonic_decompose, spencer_d, spencer_dstar};
use ahs::testkit::Sampler;
use ahs::{build_algebra, Error, Grade, OneCochain, StructureKind};
use proptest::prelude::*;

fn grid() -> Vec<StructureKind> {
    StructureKind::grid(3, 5)
}

#[test]
fn frame_changes_are_automorphisms() {
    for kind in grid() {
        let alg = build_algebra(kind).unwrap();
        let mut s = Sampler::new(&alg, 13);
        let a: Vec<f64> = s.g0_element().iter().map(|x| 0.5 * x).collect();
        let fc = FrameChange::new(&alg, &a, s.g1_element()).unwrap();
        assert!(fc.automorphism_defect(&alg) < 1e-11, "{kind}");
        let inv = fc.inverse_b0().unwrap();
        let x = s.uniform(alg.dim());
        let back = inv.apply_b0(&alg, &fc.apply_b0(&alg, &x));
        assert!(back.iter().zip(&x).all(|(p, q)| (p - q).abs() < 1e-12));
    }
}

#[test]
fn torsion_class_is_frame_independent() {
    // d psi has no harmonic part, so the harmonic torsion is unchanged
    for kind in grid() {
        let alg = build_algebra(kind).unwrap();
        let mut s = Sampler::new(&alg, 17);
        let t = s.alternating(-1).unwrap();
        let psi = s.one_cochain(0).unwrap();
        let moved = torsion_change(&alg, &t, &psi).unwrap();
        let (h1, _) = harmonic_decompose(&alg, &t).unwrap();
        let (h2, _) = harmonic_decompose(&alg, &moved).unwrap();
        assert!(h1.sub(&h2).max_abs() < 1e-12, "{kind}");
    }
}

#[test]
fn ad_z_cochain_is_closed() {
    // psi = ad Z on g-1 gives d psi(X, Y) = [Z, [X, Y]] = 0
    for kind in grid() {
        let alg = build_algebra(kind).unwrap();
        let mut s = Sampler::new(&alg, 23);
        let z = s.g1_element();
        let (n, n0) = (alg.n(), alg.n0());
        let mut psi = OneCochain::zeros(&alg, 0).unwrap();
        for x in 0..n {
            let mut e = vec![0.0; alg.dim()];
            let mut zz = vec![0.0; alg.dim()];
            e[x] = 1.0;
            zz[alg.offset(Grade::Plus)..].copy_from_slice(&z);
            let b = alg.bracket_flat(&zz, &e);
            for t in 0..n0 {
                psi.set(x, t, b[n + t]);
            }
        }
        assert!(spencer_d(&alg, &psi).unwrap().max_abs() < 1e-12, "{kind}");
    }
}

#[test]
fn flat_model_closes() {
    for kind in grid() {
        let alg = build_algebra(kind).unwrap();
        let s = flat_structure_function(&alg, &[]).unwrap();
        assert_eq!(closure_residual(&alg, &s).unwrap(), 0.0, "{kind}");
    }
}

#[test]
fn second_torsion_recovers_kappa0() {
    for kind in grid() {
        let alg = build_algebra(kind).unwrap();
        let mut s = Sampler::new(&alg, 29);
        let k0 = s.alternating(0).unwrap();
        let km1 = s.alternating(-1).unwrap();
        let full = model_second_torsion(&alg, &[&k0, &km1]).unwrap();
        let back = second_torsion_reduction(&alg, &full).unwrap();
        assert!(back.sub(&k0).max_abs() < 1e-14, "{kind}");
    }
}

#[test]
fn corrupted_second_torsion_is_rejected() {
    let alg = build_algebra(StructureKind::Projective { q: 3 }).unwrap();
    let mut s = Sampler::new(&alg, 31);
    let k0 = s.alternating(0).unwrap();
    let mut full = model_second_torsion(&alg, &[&k0]).unwrap();
    // a g0 argument must only enter through the bracket
    let u = alg.offset(Grade::Zero);
    full.get_mut(u, 0)[0] += 1.0;
    assert!(matches!(second_torsion_reduction(&alg, &full), Err(Error::Validation(_))));
    let r = second_torsion_defect(&alg, &full).unwrap();
    assert!((r.defect - 1.0).abs() < 1e-14);
}

#[test]
fn shape_errors() {
    let alg = build_algebra(StructureKind::Conformal { m: 3 }).unwrap();
    assert!(matches!(FrameChange::new(&alg, &[0.0], vec![0.0; 3]), Err(Error::Shape(_))));
    let full = BilinearMap::zeros(2, 2);
    assert!(matches!(second_torsion_defect(&alg, &full), Err(Error::Shape(_))));
}

fn arb_kind() -> impl Strategy<Value = StructureKind> {
    prop::sample::select(grid())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn action_is_equivariant_for_dstar(kind in arb_kind(), seed in any::<u64>()) {
        let alg = build_algebra(kind).unwrap();
        let mut s = Sampler::new(&alg, seed);
        let a: Vec<f64> = s.g0_element().iter().map(|x| 0.5 * x).collect();
        let fc = FrameChange::new(&alg, &a, s.g1_element()).unwrap();
        let t = s.alternating(-1).unwrap();
        let moved = torsion_equivariance(&alg, &t, &fc).unwrap();
        let lhs = spencer_dstar(&alg, &moved).unwrap();
        let rhs = act_one(&alg, &fc, &spencer_dstar(&alg, &t).unwrap()).unwrap();
        prop_assert!(lhs.sub(&rhs).max_abs() < 1e-10 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn exp_z_acts_trivially_on_torsion(kind in arb_kind(), seed in any::<u64>()) {
        let alg = build_algebra(kind).unwrap();
        let mut s = Sampler::new(&alg, seed);
        let fc = FrameChange { z: s.g1_element(), ..FrameChange::identity(&alg) };
        let t = s.alternating(-1).unwrap();
        prop_assert!(torsion_equivariance(&alg, &t, &fc).unwrap().sub(&t).max_abs() < 1e-13);
        prop_assert!(b1_contribution(&alg, &fc.z).is_ok());
    }

    #[test]
    fn action_composes(kind in arb_kind(), seed in any::<u64>()) {
        let alg = build_algebra(kind).unwrap();
        let mut s = Sampler::new(&alg, seed);
        let a: Vec<f64> = s.g0_element().iter().map(|x| 0.3 * x).collect();
        let fc = FrameChange::new(&alg, &a, vec![0.0; alg.n()]).unwrap();
        let inv = fc.inverse_b0().unwrap();
        let t = s.alternating(-1).unwrap();
        let back = act_two(&alg, &inv, &act_two(&alg, &fc, &t).unwrap()).unwrap();
        prop_assert!(back.sub(&t).max_abs() < 1e-11);
    }
}
