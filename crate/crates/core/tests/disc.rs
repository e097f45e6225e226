use koppelman_core::solver::{
    dbar_of_p, projection_p, square_grid, verify_koppelman, ChartForm, KernelAssembly,
};
use koppelman_core::{ball_weight, koppelman_k, BumpProfile, Cpx, Error, WeightForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Cpx {
    Cpx::new(re, im)
}

fn assembly() -> KernelAssembly {
    let chi = BumpProfile::new(1.25, 1.75).unwrap();
    KernelAssembly::disc(ball_weight(chi, 1).unwrap()).unwrap()
}

fn bump() -> BumpProfile {
    BumpProfile::new(0.6, 0.9).unwrap()
}

fn zbar_bump() -> ChartForm {
    let b = bump();
    ChartForm::function(1, move |w| w[0].conj() * b.value(w[0].norm()))
        .unwrap()
        .with_bump_support(&b)
}

#[test]
fn koppelman_identity_for_functions() {
    let r = verify_koppelman(&assembly(), &zbar_bump(), &square_grid(0.35, 5, 5)).unwrap();
    assert_eq!(r.points.len(), 25);
    assert!(r.max_residual < 1e-4, "residual {}", r.max_residual);
}

#[test]
fn koppelman_identity_for_01_forms() {
    let b = bump();
    let psi = ChartForm::new(1, 1, move |w| {
        vec![(w[0] * w[0] + w[0].conj()) * b.value(w[0].norm())]
    })
    .unwrap()
    .with_bump_support(&b);
    let r = verify_koppelman(&assembly(), &psi, &square_grid(0.35, 3, 3)).unwrap();
    assert!(r.max_residual < 1e-4, "residual {}", r.max_residual);
}

#[test]
fn k_solves_dbar_with_trivial_weight() {
    // u = (1/π)∫ f/(z−ζ) dA for f = bump: at z = 0 this is the Cauchy transform of a radial function, 0
    let b = bump();
    let f = ChartForm::new(1, 1, move |w| vec![c(b.value(w[0].norm()), 0.0)])
        .unwrap()
        .with_bump_support(&b);
    let a = KernelAssembly::disc(WeightForm::trivial(1)).unwrap();
    assert!(koppelman_k(&a, &f, &[c(0.0, 0.0)], None).unwrap().norm() < 1e-12);
}

#[test]
fn k_of_a_function_vanishes() {
    let v = koppelman_k(&assembly(), &zbar_bump(), &[c(0.1, 0.1)], None).unwrap();
    assert_eq!(v, c(0.0, 0.0));
}

#[test]
fn p_reproduces_holomorphic_functions() {
    let a = assembly();
    let sq = ChartForm::function(1, |w| w[0] * w[0]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let z = Cpx::from_polar(
            0.5 * rng.gen::<f64>().sqrt(),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let v = projection_p(&a, &sq, &[z]).unwrap();
        assert!((v - z * z).norm() < 1e-6);
    }
}

#[test]
fn p_output_is_holomorphic() {
    let a = assembly();
    let forms = [
        ChartForm::function(1, |w| w[0].conj()).unwrap(),
        ChartForm::function(1, |w| c(w[0].norm_sqr(), 0.0)).unwrap(),
    ];
    for phi in &forms {
        for z in [c(0.2, -0.3), c(-0.4, 0.1)] {
            let d = dbar_of_p(&a, phi, &[z], 1e-4).unwrap();
            assert!(d[0].norm() < 1e-5, "∂̄Pφ = {}", d[0]);
        }
    }
}

#[test]
fn p_of_compactly_supported_form_inside_cutoff_vanishes() {
    let v = projection_p(&assembly(), &zbar_bump(), &[c(0.1, 0.2)]).unwrap();
    assert!(v.norm() < 1e-14);
}

#[test]
fn operators_are_linear() {
    let a = assembly();
    let b = bump();
    let f = ChartForm::new(1, 1, move |w| vec![w[0] * b.value(w[0].norm())])
        .unwrap()
        .with_bump_support(&b);
    let g = ChartForm::new(1, 1, move |w| {
        vec![c(w[0].norm_sqr(), 0.0) * b.value(w[0].norm())]
    })
    .unwrap()
    .with_bump_support(&b);
    let (s, t) = (c(0.5, 2.0), c(-1.5, 0.25));
    let h = f.combine(s, &g, t).unwrap();
    let z = [c(0.15, -0.05)];
    let lhs = koppelman_k(&a, &h, &z, None).unwrap();
    let rhs =
        koppelman_k(&a, &f, &z, None).unwrap() * s + koppelman_k(&a, &g, &z, None).unwrap() * t;
    assert!((lhs - rhs).norm() < 1e-12);

    let p1 = ChartForm::function(1, |w| w[0].conj()).unwrap();
    let p2 = ChartForm::function(1, |w| w[0] * w[0]).unwrap();
    let p3 = p1.combine(s, &p2, t).unwrap();
    let lhs = projection_p(&a, &p3, &z).unwrap();
    let rhs = projection_p(&a, &p1, &z).unwrap() * s + projection_p(&a, &p2, &z).unwrap() * t;
    assert!((lhs - rhs).norm() < 1e-12);
}

#[test]
fn rejects_bad_inputs() {
    let a = assembly();
    let two = ChartForm::function(2, |_| c(1.0, 0.0))
        .unwrap()
        .with_support(0.5);
    assert!(matches!(
        projection_p(&a, &two, &[c(0.0, 0.0)]),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(matches!(
        projection_p(&a, &zbar_bump(), &[c(0.0, 0.0), c(0.0, 0.0)]),
        Err(Error::DimensionMismatch { .. })
    ));
    // outside the region where the weight is holomorphic in z
    assert!(matches!(
        projection_p(&a, &zbar_bump(), &[c(1.5, 0.0)]),
        Err(Error::InvalidInput(_))
    ));
    let unbounded = ChartForm::new(1, 1, |_| vec![c(1.0, 0.0)]).unwrap();
    let trivial = KernelAssembly::disc(WeightForm::trivial(1)).unwrap();
    assert!(matches!(
        koppelman_k(&trivial, &unbounded, &[c(0.0, 0.0)], None),
        Err(Error::InvalidInput(_))
    ));
    assert!(ChartForm::function(3, |_| c(0.0, 0.0)).is_err());
}
