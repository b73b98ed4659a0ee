use std::time::Instant;

use cmw_core::cmw::{null_cone_definiteness, null_cone_zero_test, Verdict};
use cmw_core::hermitian::{fischer_split_22, levi_form};
use cmw_core::hypersurfaces::{
    hyperquadric, kohn_nirenberg_rho, pseudoconvexity_scan, segre_interior_witness, segre_variety, sphere_perturbation_chart, sphere_perturbation_local,
    sphere_perturbation_test_vectors, verify_witness, AlgebraicHypersurface, KNParams,
};
use cmw_core::normalform::{extract_cmw, normalize_to_order4, validate_prenormal};
use cmw_core::polycore::{rat, CRational, HoloPoly, RealPoly};
use cmw_core::{Error, Signature};
use nalgebra::Complex;
use num_rational::BigRational;

fn c0() -> Complex<f64> {
    Complex::new(0.0, 0.0)
}

#[test]
fn hyperquadric_levi_signature() {
    for (n, l) in [(2, 0), (3, 1), (4, 2)] {
        let s = Signature::new(n, l).unwrap();
        let h = hyperquadric(&s);
        let rep = levi_form(&h, &vec![c0(); n + 1]).unwrap();
        assert_eq!((rep.negative, rep.positive, rep.zero), (l, n - l, 0));
        // Segre variety at the origin: −(i/2) w = 0 up to the factor
        let seg = segre_variety(&h, &vec![CRational::zero(); n + 1]).unwrap();
        assert_eq!(seg.poly, HoloPoly::w(n).scale(&CRational::from_ratios(0, 1, 1, 2)));
    }
}

#[test]
fn sphere_chart_at_zero_is_flat() {
    let (p, a) = sphere_perturbation_local(4, 2, &rat(0, 1)).unwrap();
    assert_eq!(a, rat(0, 1));
    let s = Signature::new(4, 2).unwrap();
    validate_prenormal(&p, &s).unwrap();
    assert!(normalize_to_order4(&p, &s).unwrap().s.is_zero());
}

#[test]
fn sphere_chart_coefficient() {
    let s = Signature::new(4, 2).unwrap();
    for eps in [rat(1, 100), rat(1, 7), rat(3, 5)] {
        let (p, a) = sphere_perturbation_local(4, 2, &eps).unwrap();
        assert_eq!(a, &eps / rat(2, 1));
        // weight-4 part is exactly −a(|η₁|⁴ − |η₄|⁴)
        let mut q = RealPoly::zero(4);
        q.add_real_pair(&[2, 0, 0, 0], &[2, 0, 0, 0], 0, &CRational::real(-a.clone()));
        q.add_real_pair(&[0, 0, 0, 2], &[0, 0, 0, 2], 0, &CRational::real(a.clone()));
        assert_eq!(p.weighted_component(4), q);
        assert!(p.weighted_component(3).is_zero());
        validate_prenormal(&p, &s).unwrap();
    }
}

#[test]
fn sphere_chart_parameter_checks() {
    assert!(matches!(sphere_perturbation_local(4, 1, &rat(1, 100)), Err(Error::Parameter(_))));
    assert!(matches!(sphere_perturbation_local(4, 2, &rat(1, 1)), Err(Error::Parameter(_))));
    assert!(matches!(sphere_perturbation_local(4, 2, &rat(-1, 100)), Err(Error::Parameter(_))));
    assert!(matches!(sphere_perturbation_local(3, 2, &rat(1, 100)), Err(Error::InvalidSignature { .. })));
}

#[test]
fn sphere_chart_passes_through_origin_with_signature() {
    let chart = sphere_perturbation_chart(5, 2, &rat(1, 100)).unwrap();
    assert_eq!(chart.eval(&vec![CRational::zero(); 6]).unwrap(), rat(0, 1));
    let rep = levi_form(&chart, &vec![c0(); 6]).unwrap();
    assert_eq!((rep.negative, rep.positive), (2, 3));
}

#[test]
fn sphere_perturbation_is_obstructed() {
    let start = Instant::now();
    let s = Signature::new(4, 2).unwrap();
    let eps = rat(1, 100);
    let (p, a) = sphere_perturbation_local(4, 2, &eps).unwrap();
    let t = extract_cmw(&normalize_to_order4(&p, &s).unwrap()).unwrap();
    let (x1, x2) = sphere_perturbation_test_vectors(&s);
    // the normal-form quartic is s = 4·(harmonic part), so values are ∓4a
    assert_eq!(t.value_at(&x1).unwrap(), &a * rat(-4, 1));
    assert_eq!(t.value_at(&x2).unwrap(), &a * rat(4, 1));
    // the harmonic part of −a(|η₁|⁴ − |η₄|⁴) agrees with s/4
    let q = p.weighted_component(4);
    let h = fischer_split_22(&q, &s).unwrap().harmonic;
    assert_eq!(t.quartic(), h.scale(&rat(4, 1)));
    let rep = null_cone_definiteness(&t, &s, 64, 7).unwrap();
    assert_eq!(rep.verdict, Verdict::Obstructed);
    assert!(!null_cone_zero_test(&t, &s).unwrap());
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn kohn_nirenberg_coefficients() {
    let kp = KNParams::default();
    let h = kohn_nirenberg_rho(&kp).unwrap();
    let rho = h.rho();
    assert_eq!(rho.coeff(&[4, 0], &[4, 0], 0), CRational::real(rat(1, 1000)));
    assert_eq!(rho.coeff(&[7, 0], &[1, 0], 0), CRational::real(rat(21, 20000)));
    assert_eq!(rho.coeff(&[1, 0], &[7, 0], 0), CRational::real(rat(21, 20000)));
    assert_eq!(rho.coeff(&[0, 1], &[0, 1], 0), CRational::one());
    assert_eq!(rho.coeff(&[5, 0], &[5, 0], 0), CRational::one());
    assert_eq!(rho.coeff(&[1, 0], &[1, 0], 0), CRational::real(rat(1, 10000)));
    assert_eq!(rho.coeff(&[0, 0], &[0, 0], 0), CRational::from_int(-1));
    assert_eq!(rho.len(), 7);
    let p0 = [CRational::zero(), CRational::one()];
    assert_eq!(h.eval(&p0).unwrap(), rat(0, 1));
    let seg = segre_variety(&h, &p0).unwrap();
    assert_eq!(seg.poly, HoloPoly::w(1).sub(&HoloPoly::constant(1, CRational::one())));
    assert!(seg.contains(&[CRational::from_ratios(3, 7, 1, 2), CRational::one()]).unwrap());
}

#[test]
fn segre_reflexivity_on_the_sphere() {
    // |z|² + |w|² − 1 at rational points of the unit sphere
    let mut rho = RealPoly::zero(2);
    rho.add_real_pair(&[1, 0], &[1, 0], 0, &CRational::one());
    rho.add_real_pair(&[0, 1], &[0, 1], 0, &CRational::one());
    rho.add_real_pair(&[0, 0], &[0, 0], 0, &CRational::from_int(-1));
    let sphere = AlgebraicHypersurface::new(1, rho).unwrap();
    for p in [
        [CRational::zero(), CRational::one()],
        [CRational::from_ratios(3, 5, 0, 1), CRational::from_ratios(0, 1, 4, 5)],
        [CRational::from_ratios(3, 13, 4, 13), CRational::from_ratios(12, 13, 0, 1)],
    ] {
        assert_eq!(sphere.eval(&p).unwrap(), rat(0, 1));
        assert!(segre_variety(&sphere, &p).unwrap().contains(&p).unwrap());
    }
    // the constant function has no Segre variety
    assert!(AlgebraicHypersurface::new(1, RealPoly::constant(2, rat(1, 1))).is_err());
    let mut r = RealPoly::zero(2);
    r.add_real_pair(&[1, 0], &[1, 0], 0, &CRational::one());
    let deg = AlgebraicHypersurface::new(1, r).unwrap();
    assert_eq!(segre_variety(&deg, &[CRational::zero(), CRational::zero()]).unwrap_err(), Error::DegenerateSegre);
}

#[test]
fn segre_witness_defaults() {
    let start = Instant::now();
    let base = KNParams::default();
    // the default ε is far above the threshold
    let err = segre_interior_witness(&base).unwrap_err();
    assert!(matches!(err, Error::NoWitness { .. }));
    let w0 = segre_interior_witness(&base.with_eps(rat(0, 1))).unwrap();
    assert_eq!(w0.lambda_sq, rat(11, 20000));
    assert!(w0.phi < rat(0, 1));
    let et = w0.eps_tilde.clone();
    assert_eq!(et, BigRational::new(1.into(), num_bigint::BigInt::from(1u64 << 44)));
    // t⁴ bounds the admissible ε, and ε̃ is the largest power of two below it
    let t4 = w0.lambda_sq.pow(4);
    assert!(et < t4 && &et * rat(2, 1) >= t4);
    for eps in [rat(0, 1), &et / rat(1024, 1), &et / rat(3, 1), et.clone()] {
        let w = segre_interior_witness(&base.with_eps(eps.clone())).unwrap();
        assert!(w.on_segre && w.in_domain());
        assert_eq!(w.psi, w.phi);
        assert!(verify_witness(&w).unwrap());
        let mut tampered = w.clone();
        tampered.psi = rat(-1, 1);
        assert!(!verify_witness(&tampered).unwrap());
    }
    assert!(matches!(segre_interior_witness(&base.with_eps(&et * rat(2, 1))), Err(Error::NoWitness { .. })));
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn kohn_nirenberg_is_strongly_pseudoconvex() {
    let h = kohn_nirenberg_rho(&KNParams::default()).unwrap();
    let rep = levi_form(&h, &[c0(), Complex::new(1.0, 0.0)]).unwrap();
    assert_eq!(rep.positive, 1);
    let scan = pseudoconvexity_scan(&h, 200, 1e-9, 1).unwrap();
    assert_eq!(scan.samples, 200);
    assert!(scan.strongly_pseudoconvex(), "{scan:?}");
}

#[test]
fn scan_detects_negative_levi() {
    // |w|² − |z|² − 1 is Levi-indefinite in the wrong direction
    let mut rho = RealPoly::zero(2);
    rho.add_real_pair(&[0, 1], &[0, 1], 0, &CRational::one());
    rho.add_real_pair(&[1, 0], &[1, 0], 0, &CRational::from_int(-1));
    rho.add_real_pair(&[0, 0], &[0, 0], 0, &CRational::from_int(-1));
    let h = AlgebraicHypersurface::new(1, rho).unwrap();
    let scan = pseudoconvexity_scan(&h, 100, 1e-9, 3).unwrap();
    assert!(scan.samples > 0 && scan.samples < 100);
    assert!(scan.negative_samples > 0);
    assert!(!scan.strongly_pseudoconvex());
}
