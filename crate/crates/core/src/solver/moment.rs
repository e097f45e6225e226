//! Moment conditions for extending functions across the cusp point.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{sep_regularize, CuspCutoff, MonomialCurve, PVSchedule, PvValue};
use crate::laurent::LaurentPoly;
use crate::poly::Poly;
use crate::quad::{pv_integrate, QuadDomain, Rule};
use crate::{Cpx, TWO_PI_I};

/// Residues `Res_{τ=0} φ·τ^m·τ^{−c}` over a family of semigroup exponents.
#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub r: u32,
    pub s: u32,
    pub phi: String,
    /// Semigroup exponent `m` of the test function `ξ` (with `ν*ξ = τ^m`) to
    /// the residue.
    pub residues: BTreeMap<i64, Cpx>,
    /// All residues vanish.
    pub extends: bool,
    /// A polynomial in `ζ` pulling back to `φ`, when `φ` extends.
    pub representative: Option<Poly>,
}

impl MomentReport {
    /// Residues that do not vanish.
    pub fn obstructions(&self) -> impl Iterator<Item = (i64, Cpx)> + '_ {
        self.residues
            .iter()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(m, v)| (*m, *v))
    }
}

/// Exponents tested by default: semigroup elements up to
/// `max(2c, c − 1 − min exponent of φ)`, which covers every residue that can
/// be nonzero.
pub fn default_family(curve: &MonomialCurve, phi: &LaurentPoly) -> Vec<i64> {
    let c = curve.conductor() as i64;
    let low = phi.min_exponent().unwrap_or(0);
    let bound = (2 * c).max(c - 1 - low).max(0) as u32;
    curve
        .semigroup
        .elements_upto(bound)
        .into_iter()
        .map(i64::from)
        .collect()
}

/// Checks whether a Laurent polynomial `φ(τ)`, holomorphic on the punctured
/// curve, is the pullback of a holomorphic function near the cusp point.
///
/// Residues are computed exactly from the coefficients of `φ`. A custom
/// `family` must consist of semigroup elements.
pub fn moment_check(
    curve: &MonomialCurve,
    phi: &LaurentPoly,
    family: Option<&[i64]>,
) -> Result<MomentReport> {
    let family = match family {
        Some(f) => {
            for &m in f {
                if !curve.semigroup.member(m)? {
                    return Err(invalid(format!(
                        "{m} is not in the semigroup generated by {} and {}",
                        curve.r(),
                        curve.s()
                    )));
                }
            }
            f.to_vec()
        }
        None => default_family(curve, phi),
    };
    let c = curve.conductor() as i64;
    let mut residues = BTreeMap::new();
    for m in family {
        residues.insert(m, phi.shift(m - c).residue());
    }
    let extends = residues.values().all(|v| v.norm() == 0.0);
    let representative = if extends {
        Some(representative(curve, phi)?)
    } else {
        None
    };
    Ok(MomentReport {
        r: curve.r(),
        s: curve.s(),
        phi: phi.to_string(),
        residues,
        extends,
        representative,
    })
}

/// `Σ a_k ζ₂^a ζ₁^b` with `k = a·r + b·s` for `φ = Σ a_k τ^k`.
fn representative(curve: &MonomialCurve, phi: &LaurentPoly) -> Result<Poly> {
    let mut out = Poly::zero(2)?;
    for (k, a) in phi.terms() {
        let (i, j) = u32::try_from(k)
            .ok()
            .and_then(|k| curve.semigroup.decompose(k))
            .ok_or_else(|| {
                Error::InvariantViolation(format!(
                    "exponent {k} passed the moment test but is not in the semigroup"
                ))
            })?;
        out = &out + &Poly::from_terms(2, &[(&[j, i], a)])?;
    }
    Ok(out)
}

/// Verdict for one monomial `τ^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialClass {
    pub k: u32,
    /// From the moment residues.
    pub extends: bool,
    /// From semigroup membership.
    pub member: bool,
}

/// Classifies `τ^k`, `0 ≤ k ≤ k_max`, by the moment test and cross-checks
/// each verdict against semigroup membership.
///
/// `k_max` must reach `2c` so that the range covers the conductor with
/// room to spare.
pub fn classify_monomials(curve: &MonomialCurve, k_max: u32) -> Result<Vec<MonomialClass>> {
    let c = curve.conductor();
    if k_max < 2 * c {
        return Err(invalid(format!(
            "k_max = {k_max} must be at least 2c = {}",
            2 * c
        )));
    }
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let phi = LaurentPoly::monomial(k as i64, Cpx::new(1.0, 0.0));
        let report = moment_check(curve, &phi, None)?;
        let member = curve.semigroup.member(k as i64)?;
        if report.extends != member {
            return Err(Error::InvariantViolation(format!(
                "τ^{k}: moment test says {} but semigroup membership says {}",
                report.extends, member
            )));
        }
        out.push(MonomialClass {
            k,
            extends: report.extends,
            member,
        });
    }
    Ok(out)
}

/// The test function `ψ = ξ·b` with `b = (1 − |ζ|²/R²)³` on `|ζ| < R`.
#[derive(Clone, Debug)]
pub struct PairingTest {
    pub xi: Poly,
    pub radius: f64,
}

impl PairingTest {
    pub fn new(xi: Poly, radius: f64) -> Result<Self> {
        if xi.nvars() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: xi.nvars(),
            });
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(invalid("test function radius must be positive"));
        }
        Ok(PairingTest { xi, radius })
    }

    fn profile(&self, zeta: &[Cpx]) -> f64 {
        let t = 1.0 - (zeta[0].norm_sqr() + zeta[1].norm_sqr()) / (self.radius * self.radius);
        if t <= 0.0 {
            0.0
        } else {
            t * t * t
        }
    }

    /// `ψ(ν(τ))`.
    pub fn value(&self, curve: &MonomialCurve, tau: Cpx) -> Cpx {
        let zeta = curve.point(tau);
        self.xi.eval(&zeta) * self.profile(&zeta)
    }

    /// `∂(ν*ψ)/∂τ̄`.
    pub fn dbar_pullback(&self, curve: &MonomialCurve, tau: Cpx) -> Cpx {
        let zeta = curve.point(tau);
        let r2 = self.radius * self.radius;
        let t = 1.0 - (zeta[0].norm_sqr() + zeta[1].norm_sqr()) / r2;
        if t <= 0.0 {
            return Cpx::default();
        }
        let d = curve.tangent(tau);
        // ∂b/∂ζ̄_k = −3 t² ζ_k / R²
        let db = (zeta[0] * d[0].conj() + zeta[1] * d[1].conj()) * (-3.0 * t * t / r2);
        self.xi.eval(&zeta) * db
    }
}

/// `(2πi)² Res_{τ=0} φ·ν*ξ·τ^{−c}`, the exact value of the pairing
/// `⟨φω, ∂̄ψ⟩` for `ψ = ξ·b` with `b(0) = 1`.
pub fn pairing_exact(curve: &MonomialCurve, phi: &LaurentPoly, test: &PairingTest) -> Cpx {
    let mut acc = Cpx::default();
    for (exps, a) in test.xi.terms() {
        let pulled = curve.semigroup.pullback_monomial(exps[0], exps[1]);
        let prod = phi * &pulled.scale(a);
        acc += prod.shift(-(curve.conductor() as i64)).residue();
    }
    TWO_PI_I * TWO_PI_I * acc
}

/// Route (a): `lim_{ε→0} ∮_{|τ|=ε} ψ φ ω`, contour values over the radii of
/// the schedule passed through [`sep_regularize`].
pub fn pairing_contour(
    curve: &MonomialCurve,
    phi: &LaurentPoly,
    test: &PairingTest,
    schedule: &PVSchedule,
    nodes: usize,
) -> Result<PvValue> {
    schedule.validate()?;
    let density = cusp_density(curve);
    let rule = Rule {
        angular_nodes: nodes,
        ..Rule::default()
    };
    let mut values = Vec::with_capacity(schedule.deltas.len());
    for &eps in &schedule.deltas {
        let (v, _) = rule.integrate(&QuadDomain::circle(Cpx::default(), eps), |w| {
            Ok(test.value(curve, w[0]) * phi.eval(w[0]) * density.eval(w[0]))
        })?;
        values.push(v);
    }
    sep_regularize(&values, schedule)
}

/// Route (b): `lim_{δ→0} ∫_X χ_δ φ ω ∧ ∂̄ψ` with the cutoff
/// `χ_δ = 1 − b(|ζ|/δ)` on the chart, extrapolated over the schedule.
pub fn pairing_cutoff(
    curve: &MonomialCurve,
    phi: &LaurentPoly,
    test: &PairingTest,
    schedule: &PVSchedule,
    tol: f64,
) -> Result<PvValue> {
    let density = cusp_density(curve);
    let domain = QuadDomain::disc(Cpx::default(), curve.chart_radius(test.radius));
    let cutoff = CuspCutoff::new(*curve);
    let (_, pv) = pv_integrate(
        &domain,
        |w| {
            let t = w[0];
            if t == Cpx::default() {
                return Ok(Cpx::default());
            }
            // φω∧∂̄ψ = φ·ω(τ)·ψ_τ̄ dτ∧dτ̄, dτ∧dτ̄ = −2i dA
            Ok(phi.eval(t) * density.eval(t) * test.dbar_pullback(curve, t) * Cpx::new(0.0, -2.0))
        },
        &cutoff,
        schedule,
        tol,
    )?;
    Ok(pv)
}

fn cusp_density(curve: &MonomialCurve) -> LaurentPoly {
    LaurentPoly::monomial(-(curve.conductor() as i64), TWO_PI_I)
}
