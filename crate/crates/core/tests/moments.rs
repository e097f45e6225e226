use koppelman_core::solver::{pairing_contour, pairing_cutoff, pairing_exact, PairingTest};
use koppelman_core::{
    classify_monomials, moment_check, Cpx, Error, LaurentPoly, MonomialCurve, PVSchedule, Poly,
};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Cpx {
    Cpx::new(re, im)
}

fn tau_pow(k: i64) -> LaurentPoly {
    LaurentPoly::monomial(k, c(1.0, 0.0))
}

fn non_extending(r: u32, s: u32, k_max: u32) -> Vec<u32> {
    let x = MonomialCurve::new(r, s).unwrap();
    classify_monomials(&x, k_max)
        .unwrap()
        .into_iter()
        .filter(|m| !m.extends)
        .map(|m| m.k)
        .collect()
}

#[test]
fn classification_examples() {
    assert_eq!(non_extending(2, 3, 6), vec![1]);
    assert_eq!(non_extending(2, 5, 8), vec![1, 3]);
    assert_eq!(non_extending(3, 5, 16), vec![1, 2, 4, 7]);
    assert_eq!(non_extending(3, 4, 12), vec![1, 2, 5]);
}

#[test]
fn classification_needs_twice_the_conductor() {
    let x = MonomialCurve::new(3, 5).unwrap();
    assert!(matches!(
        classify_monomials(&x, 15),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn moment_examples() {
    let x = MonomialCurve::new(2, 3).unwrap();
    let r = moment_check(&x, &tau_pow(1), None).unwrap();
    assert!(!r.extends);
    assert_eq!(r.residues[&0], c(1.0, 0.0));
    assert_eq!(r.obstructions().count(), 1);

    let r = moment_check(&x, &tau_pow(3), None).unwrap();
    assert!(r.extends);
    let rep = r.representative.unwrap();
    assert_eq!(rep.eval(&[c(2.0, 0.0), c(5.0, 0.0)]), c(2.0, 0.0));

    let r = moment_check(&x, &LaurentPoly::constant(c(4.0, -1.0)), None).unwrap();
    assert!(r.extends);

    let r = moment_check(&x, &tau_pow(2), None).unwrap();
    assert!(r.extends);
    assert_eq!(
        r.representative.unwrap().eval(&[c(0.0, 0.0), c(3.0, 0.0)]),
        c(3.0, 0.0)
    );
}

#[test]
fn negative_powers_are_obstructed() {
    let x = MonomialCurve::new(2, 3).unwrap();
    let r = moment_check(&x, &"tau^-3 + tau^4".parse().unwrap(), None).unwrap();
    assert!(!r.extends);
    assert_eq!(
        r.obstructions().map(|(m, _)| m).collect::<Vec<_>>(),
        vec![4]
    );
}

#[test]
fn custom_family_must_lie_in_the_semigroup() {
    let x = MonomialCurve::new(2, 3).unwrap();
    assert!(moment_check(&x, &tau_pow(1), Some(&[0, 2, 3])).is_ok());
    assert!(matches!(
        moment_check(&x, &tau_pow(1), Some(&[1])),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn pairing_routes_agree() {
    let cases: [((u32, u32), i64, [u32; 2]); 5] = [
        ((2, 3), 1, [0, 0]),
        ((2, 3), 3, [0, 0]),
        ((2, 5), 1, [0, 1]),
        ((3, 4), 2, [0, 1]),
        ((3, 5), 4, [0, 1]),
    ];
    for ((r, s), k, e) in cases {
        let x = MonomialCurve::new(r, s).unwrap();
        let phi = tau_pow(k);
        let xi = Poly::from_terms(2, &[(&e, c(1.0, 0.0))]).unwrap();
        let test = PairingTest::new(xi, 0.8).unwrap();
        let exact = pairing_exact(&x, &phi, &test);
        let a = pairing_contour(&x, &phi, &test, &PVSchedule::default(), 64).unwrap();
        let b = pairing_cutoff(&x, &phi, &test, &PVSchedule::default(), 1e-9).unwrap();
        assert!((a.value - b.value).norm() < 1e-3, "({r},{s}) k={k}");
        assert!((a.value - exact).norm() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn classification_matches_membership(r in 2u32..6, s in 3u32..9) {
        prop_assume!(r < s && num_gcd(r, s) == 1);
        let x = MonomialCurve::new(r, s).unwrap();
        let c = x.conductor();
        let table = classify_monomials(&x, 2 * c).unwrap();
        for m in &table {
            prop_assert_eq!(m.extends, m.member);
        }
        // every k ≥ c extends
        prop_assert!(table.iter().filter(|m| m.k >= c).all(|m| m.extends));
    }

    #[test]
    fn moment_residues_are_linear(a in -5i64..8, b in -5i64..8, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let x = MonomialCurve::new(3, 4).unwrap();
        let w = c(re, im);
        let p = tau_pow(a);
        let q = tau_pow(b);
        let sum = &p + &q.scale(w);
        let family: Vec<i64> = x.semigroup.elements_upto(20).into_iter().map(i64::from).collect();
        let rp = moment_check(&x, &p, Some(&family)).unwrap();
        let rq = moment_check(&x, &q, Some(&family)).unwrap();
        let rs = moment_check(&x, &sum, Some(&family)).unwrap();
        for m in &family {
            prop_assert!((rs.residues[m] - rp.residues[m] - rq.residues[m] * w).norm() < 1e-12);
        }
    }
}

fn num_gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}
