use criterion::{black_box, criterion_group, criterion_main, Criterion};
use koppelman_core::solver::{pairing_contour, pairing_cutoff, PairingTest};
use koppelman_core::{
    ball_weight, bm_admissible, bm_components, classify_monomials, integrate, koppelman_k,
    projection_p, BumpProfile, ChartForm, Cpx, KernelAssembly, LaurentPoly, MonomialCurve,
    PVSchedule, Poly, QuadDomain,
};

fn c(re: f64, im: f64) -> Cpx {
    Cpx::new(re, im)
}

fn kernels(cr: &mut Criterion) {
    let b2 = bm_components(&bm_admissible(2).unwrap());
    let zeta = [c(0.3, -0.2), c(0.1, 0.5)];
    let z = [c(-0.1, 0.1), c(0.2, 0.0)];
    cr.bench_function("bm_form_c2", |b| {
        b.iter(|| b2.eval(black_box(&zeta), black_box(&z)).unwrap())
    });

    let g = ball_weight(BumpProfile::new(1.25, 1.75).unwrap(), 2).unwrap();
    let shell = [c(1.1, 0.3), c(0.4, -0.7)];
    cr.bench_function("ball_weight_c2", |b| {
        b.iter(|| g.eval(black_box(&shell), black_box(&z)).unwrap())
    });
}

fn quadrature(cr: &mut Criterion) {
    let disc = QuadDomain::disc(c(0.0, 0.0), 1.0).with_puncture(vec![c(0.3, 0.1)], 0.05);
    cr.bench_function("adaptive_punctured_disc", |b| {
        b.iter(|| integrate(&disc, |p| Ok(p[0].conj() * p[0]), 1e-10).unwrap())
    });
}

fn operators(cr: &mut Criterion) {
    let chi = BumpProfile::new(1.25, 1.75).unwrap();
    let disc = KernelAssembly::disc(ball_weight(chi, 1).unwrap()).unwrap();
    let bump = BumpProfile::new(0.6, 0.9).unwrap();
    let f = ChartForm::new(1, 1, move |w| vec![w[0].conj() * bump.value(w[0].norm())])
        .unwrap()
        .with_bump_support(&bump);
    let phi = ChartForm::function(1, |w| w[0] * w[0]).unwrap();
    let z = [c(0.2, -0.1)];
    cr.bench_function("k_disc", |b| {
        b.iter(|| koppelman_k(&disc, &f, black_box(&z), None).unwrap())
    });
    cr.bench_function("p_disc", |b| {
        b.iter(|| projection_p(&disc, &phi, black_box(&z)).unwrap())
    });

    let x = MonomialCurve::new(2, 3).unwrap();
    let cusp = KernelAssembly::cusp(x, ball_weight(chi, 2).unwrap()).unwrap();
    let g = ChartForm::pullback_01(&x, |p| {
        let r2 = p[0].norm_sqr() + p[1].norm_sqr();
        let b = if r2 < 0.81 {
            (1.0 - r2 / 0.81).powi(4)
        } else {
            0.0
        };
        [c(0.0, 0.0), p[1] * b]
    })
    .with_support(x.chart_radius(0.9))
    .regular_at_origin();
    let w = [c(0.4, 0.2)];
    let mut group = cr.benchmark_group("cusp");
    group.sample_size(10);
    group.bench_function("k_cusp", |b| {
        b.iter(|| koppelman_k(&cusp, &g, black_box(&w), None).unwrap())
    });
    group.finish();
}

fn curves(cr: &mut Criterion) {
    let x = MonomialCurve::new(3, 5).unwrap();
    cr.bench_function("classify_3_5", |b| {
        b.iter(|| classify_monomials(black_box(&x), 16).unwrap())
    });

    let y = MonomialCurve::new(2, 3).unwrap();
    let phi = LaurentPoly::monomial(1, c(1.0, 0.0));
    let test = PairingTest::new(Poly::constant(2, c(1.0, 0.0)).unwrap(), 0.8).unwrap();
    let schedule = PVSchedule::default();
    cr.bench_function("pairing_contour", |b| {
        b.iter(|| pairing_contour(&y, &phi, &test, &schedule, 64).unwrap())
    });
    let mut group = cr.benchmark_group("pv");
    group.sample_size(10);
    group.bench_function("pairing_cutoff", |b| {
        b.iter(|| pairing_cutoff(&y, &phi, &test, &schedule, 1e-9).unwrap())
    });
    group.finish();
}

criterion_group!(benches, kernels, quadrature, operators, curves);
criterion_main!(benches);
