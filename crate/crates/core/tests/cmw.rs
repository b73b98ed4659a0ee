mod common;

use cmw_core::cmw::{
    cayley_pseudo_unitary, generate_pseudo_unitary, is_pseudo_unitary, null_cone_definiteness, null_cone_zero_test, tau_half, CMWTensor, MoebiusMap,
    MoebiusParams, Verdict,
};
use cmw_core::hermitian::{fischer_split_22, harmonic_22_dimension, laplacian_l, null_cone_samples, HermitianMatrix};
use cmw_core::linalg::CMatrix;
use cmw_core::normalform::{extract_cmw, normalize_to_order4};
use cmw_core::polycore::{rat, CRational, HoloPoly, RealPoly};
use cmw_core::{Error, Signature};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sig(n: usize, l: usize) -> Signature {
    Signature::new(n, l).unwrap()
}

fn harmonic_tensor(rng: &mut ChaCha8Rng, s: &Signature, terms: usize) -> CMWTensor {
    let q = common::random_quartic(rng, s.n(), terms);
    let h = fischer_split_22(&q, s).unwrap().harmonic;
    CMWTensor::from_quartic(&h, s).unwrap()
}

#[test]
fn quartic_round_trip_and_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (n, l) in [(2, 0), (3, 1), (4, 2)] {
        let s = sig(n, l);
        for _ in 0..5 {
            let q = common::random_quartic(&mut rng, n, 7);
            let t = CMWTensor::from_quartic(&q, &s).unwrap();
            assert_eq!(t.quartic(), q);
            let h = harmonic_tensor(&mut rng, &s, 7);
            assert!(h.check_invariants().is_empty(), "{:?}", h.check_invariants());
        }
    }
}

#[test]
fn non_quartic_is_rejected() {
    let s = sig(2, 0);
    let mut p = RealPoly::zero(2);
    p.add_real_pair(&[1, 0], &[1, 0], 1, &CRational::one());
    assert!(matches!(CMWTensor::from_quartic(&p, &s), Err(Error::Shape { .. })));
}

#[test]
fn trace_under_general_metric() {
    // g = diag(1, 2): only s_0000 = 1 is nonzero, so C = diag(1, 0)
    let s = sig(2, 0);
    let mut q = RealPoly::zero(2);
    q.add_real_pair(&[2, 0], &[2, 0], 0, &CRational::one());
    let t = CMWTensor::from_quartic(&q, &s).unwrap();
    let g = HermitianMatrix::new(CMatrix::diagonal(&[CRational::one(), CRational::from_int(2)])).unwrap();
    let c = t.contract_trace(&g).unwrap();
    assert_eq!(c[(0, 0)], CRational::one());
    assert!(c[(1, 1)].is_zero());
}

#[test]
fn cayley_is_pseudo_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (n, l) in [(2, 0), (2, 1), (3, 1), (4, 2)] {
        let s = sig(n, l);
        let mut sk = CMatrix::zeros(n, n);
        for a in 0..n {
            for b in a..n {
                let c = common::small_rational(&mut rng);
                if a == b {
                    sk[(a, a)] = CRational::new(rat(0, 1), c.im.clone());
                } else {
                    sk[(a, b)] = c.clone();
                    sk[(b, a)] = c.conj().scale(&rat(-1, 1));
                }
            }
        }
        match cayley_pseudo_unitary(&s, &sk) {
            Ok(u) => assert!(is_pseudo_unitary(&u, &s)),
            Err(Error::SingularMatrix) => {}
            Err(e) => panic!("{e}"),
        }
        assert!(is_pseudo_unitary(&generate_pseudo_unitary(&s, rng.random()), &s));
    }
    let not_skew = CMatrix::identity(2);
    assert!(cayley_pseudo_unitary(&sig(2, 0), &not_skew).is_err());
}

#[test]
fn frame_change_matches_renormalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (n, l) in [(2, 0), (2, 1), (3, 1)] {
        let s = sig(n, l);
        for _ in 0..2 {
            let p = common::random_prenormal(&mut rng, &s, 8, 6);
            let lambda = common::random_lambda(&mut rng);
            let u = generate_pseudo_unitary(&s, rng.random());
            let pt = common::linear_image(&p, &lambda, &u);
            let st = extract_cmw(&normalize_to_order4(&pt, &s).unwrap()).unwrap();
            let s0 = extract_cmw(&normalize_to_order4(&p, &s).unwrap()).unwrap();
            assert_eq!(st.transform_frame(&lambda, &u).unwrap(), s0);
        }
    }
}

#[test]
fn frame_change_rejects_non_unitary() {
    let s = sig(2, 1);
    let t = CMWTensor::zero(&s);
    let a = CMatrix::diagonal(&[CRational::from_int(2), CRational::one()]);
    assert_eq!(t.transform_frame(&rat(1, 1), &a), Err(Error::NotPseudoUnitary));
    assert!(t.change_basis(&a).unwrap().is_zero());
}

fn random_params(rng: &mut ChaCha8Rng, s: &Signature) -> MoebiusParams {
    MoebiusParams {
        sig: *s,
        lambda: common::random_lambda(rng),
        u: generate_pseudo_unitary(s, rng.random()),
        a: (0..s.n()).map(|_| common::small_rational(rng)).collect(),
        r0: rat(rng.random_range(-5..=5), rng.random_range(1..=3)),
        sigma: 1,
    }
}

#[test]
fn moebius_preserves_hyperquadric() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (n, l) in [(2, 0), (2, 1), (3, 1)] {
        let s = sig(n, l);
        for _ in 0..3 {
            let p = random_params(&mut rng, &s);
            let m = MoebiusMap::new(&p).unwrap();
            assert!(m.hyperquadric_defect().is_zero());
            // T undoes the linear data (λzU + aw, λ²w)
            let f: Vec<HoloPoly> = (0..n)
                .map(|k| {
                    let mut acc = HoloPoly::w(n).scale(&p.a[k]);
                    for j in 0..n {
                        acc.add_assign(&HoloPoly::z(n, j).scale(&(&p.u[(j, k)] * &CRational::real(p.lambda.clone()))));
                    }
                    acc
                })
                .collect();
            let g = HoloPoly::w(n).scale(&CRational::real(&p.lambda * &p.lambda));
            let (zl, wl) = m.linear_part_after(&f, &g);
            for (j, z) in zl.iter().enumerate() {
                assert_eq!(*z, HoloPoly::z(n, j));
            }
            assert_eq!(wl, HoloPoly::w(n));
        }
    }
}

#[test]
fn moebius_with_unconjugated_shift_fails() {
    // with a = i the z-coefficient of q is 2i·ā = 2; using a instead gives −2
    let s = sig(2, 0);
    let mut p = MoebiusParams::trivial(&s);
    p.a = vec![CRational::i(), CRational::zero()];
    let good = MoebiusMap::new(&p).unwrap();
    assert!(good.hyperquadric_defect().is_zero());
    let mut bad = good.clone();
    bad.q = good.q.add(&HoloPoly::z(2, 0).scale(&CRational::from_int(-4)));
    assert!(!bad.hyperquadric_defect().is_zero());
}

#[test]
fn moebius_parameter_checks() {
    let s = sig(3, 1);
    let mut p = MoebiusParams::trivial(&s);
    p.sigma = -1;
    assert!(p.validate().is_err());
    let mut p = MoebiusParams::trivial(&s);
    p.lambda = rat(0, 1);
    assert!(p.validate().is_err());
    let mut p = MoebiusParams::trivial(&s);
    p.u = CMatrix::diagonal(&[CRational::from_int(2), CRational::one(), CRational::one()]);
    assert_eq!(p.validate(), Err(Error::NotPseudoUnitary));
    let s2 = sig(2, 1);
    let mut p = MoebiusParams::trivial(&s2);
    p.sigma = -1;
    assert!(p.validate().is_ok());
    assert!(tau_half(&s).is_err());
    let (f, g) = tau_half(&s2).unwrap();
    assert_eq!(f[0], HoloPoly::z(2, 1));
    assert_eq!(g, HoloPoly::w(2).scale(&CRational::from_int(-1)));
}

#[test]
fn definite_signature_sign_test() {
    // l = 0: only v = 0 is null, so nothing is ever obstructed
    let s = sig(2, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let t = harmonic_tensor(&mut rng, &s, 5);
    assert!(matches!(null_cone_definiteness(&t, &s, 10, 0), Err(Error::EmptyNullCone)));
    assert_eq!(null_cone_zero_test(&t, &s), Err(Error::EmptyNullCone));
}

#[test]
fn sign_test_verdicts() {
    let s = sig(3, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let zero = CMWTensor::zero(&s);
    assert_eq!(null_cone_definiteness(&zero, &s, 20, 1).unwrap().verdict, Verdict::Consistent);
    assert!(null_cone_zero_test(&zero, &s).unwrap());
    // a generic trace-free tensor takes both signs on the null cone
    let t = harmonic_tensor(&mut rng, &s, 9);
    let rep = null_cone_definiteness(&t, &s, 40, 1).unwrap();
    let neg = null_cone_definiteness(&t.scale(&CRational::from_int(-1)), &s, 40, 1).unwrap();
    assert!(rep.verdict == Verdict::Obstructed || neg.verdict == Verdict::Obstructed);
    for w in &rep.witnesses {
        assert_eq!(t.value_at(&w.v).unwrap(), w.value);
    }
    assert!(!null_cone_zero_test(&t, &s).unwrap());
    assert_eq!(rep, null_cone_definiteness(&t, &s, 40, 1).unwrap());
}

#[test]
fn null_samples_lie_on_the_cone() {
    for (n, l) in [(2, 1), (3, 1), (4, 2)] {
        let s = sig(n, l);
        for v in null_cone_samples(&s, 30, 3).unwrap() {
            assert!(cmw_core::hermitian::inner_l(v.as_slice(), v.as_slice(), &s).unwrap().is_zero());
        }
    }
    assert_eq!(harmonic_22_dimension(2), 5);
    assert_eq!(harmonic_22_dimension(3), 27);
    assert_eq!(harmonic_22_dimension(4), 84);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fischer_split_reconstructs(seed in any::<u64>(), n in 2usize..=3, lsel in 0usize..=1) {
        let s = sig(n, lsel.min(n / 2));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = common::random_quartic(&mut rng, n, 6);
        let f = fischer_split_22(&q, &s).unwrap();
        prop_assert!(laplacian_l(&f.harmonic, &s).is_zero());
        prop_assert_eq!(f.harmonic.add(&f.multiplier.mul(&s.levi_poly())), q);
    }

    #[test]
    fn frame_change_composes(seed in any::<u64>()) {
        let s = sig(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = harmonic_tensor(&mut rng, &s, 6);
        let u1 = generate_pseudo_unitary(&s, rng.random());
        let u2 = generate_pseudo_unitary(&s, rng.random());
        let one = rat(1, 1);
        let lhs = t.transform_frame(&one, &u1).unwrap().transform_frame(&one, &u2).unwrap();
        let rhs = t.transform_frame(&one, &u2.mul(&u1).unwrap()).unwrap();
        prop_assert_eq!(lhs.clone(), rhs);
        prop_assert!(lhs.check_invariants().is_empty());
    }
}
