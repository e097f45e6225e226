//! Varieties in scope and their structure forms: hyperplanes and
//! hypersurfaces `{h = 0}` in ℂ², the monomial curves `ζ₁ʳ = ζ₂ˢ`, Lelong
//! pairings, and the cutoff limits `δ → 0` used for principal values.
//!
//! Sign convention for `ω`: on a hypersurface `ω = −γ⌟(dζ₁∧dζ₂)`, i.e.
//! `dh ∧ ω = 2πi dζ₁∧dζ₂`. This gives `ω = −2πi dζ₁` on `{ζ₂ = 0}` and
//! `ω = 2πi dτ/τ^{(r−1)(s−1)}` on the cusp.

use std::f64::consts::TAU;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cutoff::BumpProfile;
use crate::error::{invalid, singular, Error, Result};
use crate::fit::loglog_slope;
use crate::laurent::{LaurentPoly, Semigroup};
use crate::poly::Poly;
use crate::quad::{integrate, QuadDomain, SingularCutoff, Sphere};
use crate::{Cpx, TWO_PI_I};

/// `{h = 0}` in ℂ² with finitely many declared singular points.
#[derive(Clone, Debug)]
pub struct Hypersurface {
    pub h: Poly,
    pub grad: Vec<Poly>,
    pub singular_locus: Vec<[Cpx; 2]>,
}

impl Hypersurface {
    /// Checks that every declared singular point is a common zero of `h`
    /// and `∇h`.
    pub fn new(h: Poly, singular_locus: Vec<[Cpx; 2]>) -> Result<Self> {
        if h.nvars() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: h.nvars(),
            });
        }
        if h.is_zero() {
            return Err(invalid("hypersurface defined by the zero polynomial"));
        }
        let grad = h.gradient();
        for p in &singular_locus {
            let res = h.eval(p).norm() + grad.iter().map(|g| g.eval(p).norm()).sum::<f64>();
            if res > 1e-12 {
                return Err(invalid(format!("{p:?} is not a singular point of h")));
            }
        }
        Ok(Hypersurface {
            h,
            grad,
            singular_locus,
        })
    }

    /// `{ζ₂ = 0}`.
    pub fn hyperplane() -> Self {
        Hypersurface::new(Poly::var(2, 1).expect("two variables"), Vec::new())
            .expect("hyperplane is smooth")
    }

    pub fn gradient_at(&self, p: &[Cpx]) -> [Cpx; 2] {
        [self.grad[0].eval(p), self.grad[1].eval(p)]
    }

    /// `γ = −2πi Σ_j conj(∂h/∂ζ_j)/|dh|² ∂/∂ζ_j`.
    pub fn gamma(&self, p: &[Cpx]) -> Result<[Cpx; 2]> {
        if p.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: p.len(),
            });
        }
        let g = self.gradient_at(p);
        let n2 = g[0].norm_sqr() + g[1].norm_sqr();
        if n2 == 0.0 {
            return Err(singular("γ evaluated where dh = 0"));
        }
        Ok([-TWO_PI_I * g[0].conj() / n2, -TWO_PI_I * g[1].conj() / n2])
    }

    /// Coefficients `(ω₁, ω₂)` of `ω = ω₁dζ₁ + ω₂dζ₂ = −γ⌟(dζ₁∧dζ₂)`.
    pub fn omega(&self, p: &[Cpx]) -> Result<[Cpx; 2]> {
        let g = self.gamma(p)?;
        Ok([g[1], -g[0]])
    }
}

/// `γ` as a function of the point (see [`Hypersurface::gamma`]).
pub fn gamma_hypersurface(x: &Hypersurface, p: &[Cpx]) -> Result<[Cpx; 2]> {
    x.gamma(p)
}

/// `ζ₁ʳ = ζ₂ˢ` with normalization `τ ↦ (τˢ, τʳ)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialCurve {
    pub semigroup: Semigroup,
}

impl MonomialCurve {
    pub fn new(r: u32, s: u32) -> Result<Self> {
        Ok(MonomialCurve {
            semigroup: Semigroup::new(r, s)?,
        })
    }

    pub fn r(&self) -> u32 {
        self.semigroup.r()
    }

    pub fn s(&self) -> u32 {
        self.semigroup.s()
    }

    /// `(r−1)(s−1)`.
    pub fn conductor(&self) -> u32 {
        self.semigroup.conductor()
    }

    pub fn point(&self, tau: Cpx) -> [Cpx; 2] {
        [tau.powu(self.s()), tau.powu(self.r())]
    }

    /// `dν/dτ`.
    pub fn tangent(&self, tau: Cpx) -> [Cpx; 2] {
        let (r, s) = (self.r(), self.s());
        [tau.powu(s - 1) * s as f64, tau.powu(r - 1) * r as f64]
    }

    /// `h = ζ₁ʳ − ζ₂ˢ`.
    pub fn equation(&self) -> Poly {
        let z1 = Poly::var(2, 0).expect("two variables");
        let z2 = Poly::var(2, 1).expect("two variables");
        &z1.pow(self.r()) - &z2.pow(self.s())
    }

    pub fn hypersurface(&self) -> Hypersurface {
        let zero = Cpx::default();
        Hypersurface::new(self.equation(), vec![[zero, zero]]).expect("origin is singular")
    }

    /// `|ν(τ)|` as a function of `t = |τ|`.
    pub fn ambient_norm(&self, t: f64) -> f64 {
        (t.powi(2 * self.s() as i32) + t.powi(2 * self.r() as i32)).sqrt()
    }

    /// The `t ≥ 0` with `|ν(t)| = rho`, by bisection.
    pub fn chart_radius(&self, rho: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, rho.max(1.0).powf(1.0 / self.r() as f64) + 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.ambient_norm(mid) < rho {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `τ ≠ τ₀` where `ν(τ)` comes closest to `ν(τ₀)` at leading order:
    /// `τ₀·e^{2πik/r}` for `k = 1..r`.
    pub fn near_coincidences(&self, tau0: Cpx) -> Vec<Cpx> {
        let r = self.r();
        (1..r)
            .map(|k| tau0 * Cpx::from_polar(1.0, TAU * k as f64 / r as f64))
            .collect()
    }
}

/// The structure form of a variety, as a density against the chart
/// differential.
#[derive(Clone, Debug)]
pub enum StructureForm {
    /// `X = Ω` open in `ℂ^N`; no structure form is involved.
    Ambient { dim: usize },
    /// `{ζ₂ = 0}` in ℂ², `ω = −2πi dζ₁`.
    SmoothHyperplane,
    /// `ω = −γ⌟(dζ₁∧dζ₂)` evaluated from the ambient formula.
    HypersurfaceGamma(Hypersurface),
    /// `ω = density(τ) dτ` on the normalization of a monomial curve.
    CuspSymbolic {
        curve: MonomialCurve,
        density: LaurentPoly,
    },
}

impl StructureForm {
    /// Density of `ω` against `dζ₁` (hyperplane) or `dτ` (cusp).
    pub fn chart_density(&self, t: Cpx) -> Result<Cpx> {
        match self {
            StructureForm::Ambient { .. } => Ok(Cpx::new(1.0, 0.0)),
            StructureForm::SmoothHyperplane => Ok(-TWO_PI_I),
            StructureForm::HypersurfaceGamma(x) => Ok(x.omega(&[t, Cpx::default()])?[0]),
            StructureForm::CuspSymbolic { density, .. } => {
                if t == Cpx::default() {
                    return Err(singular("cusp structure form evaluated at τ = 0"));
                }
                Ok(density.eval(t))
            }
        }
    }

    /// Order of the pole at the singular point (0 when smooth).
    pub fn pole_order(&self) -> u32 {
        match self {
            StructureForm::CuspSymbolic { density, .. } => {
                (-density.min_exponent().unwrap_or(0)).max(0) as u32
            }
            _ => 0,
        }
    }
}

/// `ω = 2πi dτ/τ^{(r−1)(s−1)}`.
pub fn cusp_structure_form(curve: &MonomialCurve) -> StructureForm {
    StructureForm::CuspSymbolic {
        curve: *curve,
        density: LaurentPoly::monomial(-(curve.conductor() as i64), TWO_PI_I),
    }
}

/// Outcome of comparing the ambient `−γ⌟dζ` pulled back along `ν` with the
/// symbolic cusp density.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaCheck {
    pub radius: f64,
    pub samples: usize,
    pub max_rel_deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Samples `|τ| = radius` and compares `ν*(−γ⌟dζ₁∧dζ₂)` with
/// `2πi dτ/τ^{(r−1)(s−1)}`.
pub fn pullback_gamma_check(curve: &MonomialCurve, radius: f64, tol: f64) -> Result<GammaCheck> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(invalid("sample radius must lie in (0, 1)"));
    }
    let x = curve.hypersurface();
    let symbolic = cusp_structure_form(curve);
    let samples = 64;
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let tau = Cpx::from_polar(radius, TAU * (k as f64 + 0.5) / samples as f64);
        let p = curve.point(tau);
        let w = x.omega(&p)?;
        let d = curve.tangent(tau);
        let ambient = w[0] * d[0] + w[1] * d[1];
        let exact = symbolic.chart_density(tau)?;
        worst = worst.max((ambient - exact).norm() / exact.norm());
    }
    Ok(GammaCheck {
        radius,
        samples,
        max_rel_deviation: worst,
        tol,
        passed: worst < tol,
    })
}

/// Fitted growth exponent of `|ω|` on circles `|τ| = ε`.
pub fn omega_blowup_exponent(form: &StructureForm, radii: &[f64]) -> Result<f64> {
    let mags: Vec<f64> = radii
        .iter()
        .map(|&e| form.chart_density(Cpx::new(e, 0.0)).map(|v| v.norm()))
        .collect::<Result<_>>()?;
    loglog_slope(radii, &mags)
        .map(|s| -s)
        .ok_or_else(|| invalid("need at least two distinct radii"))
}

type TestFn = dyn Fn(&[Cpx]) -> Vec<Cpx> + Send + Sync;

/// A compactly supported test form.
///
/// In ℂ it is a function; in ℂ² it is a `(1,1)`-form given by the four
/// coefficients of `dζ_j∧dζ̄_k` in the order `(1,1), (1,2), (2,1), (2,2)`.
#[derive(Clone)]
pub struct TestForm {
    pub dim: usize,
    /// Radius of a ball about the origin containing the support.
    pub support_radius: Option<f64>,
    f: Arc<TestFn>,
}

impl std::fmt::Debug for TestForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "TestForm(dim = {}, support = {:?})",
            self.dim, self.support_radius
        )
    }
}

impl TestForm {
    pub fn new(
        dim: usize,
        support_radius: Option<f64>,
        f: impl Fn(&[Cpx]) -> Vec<Cpx> + Send + Sync + 'static,
    ) -> Self {
        TestForm {
            dim,
            support_radius,
            f: Arc::new(f),
        }
    }

    pub fn eval(&self, p: &[Cpx]) -> Vec<Cpx> {
        (self.f)(p)
    }

    /// `a·self + b·other` (same dimension).
    pub fn combine(&self, a: Cpx, other: &TestForm, b: Cpx) -> Result<TestForm> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let support = match (self.support_radius, other.support_radius) {
            (Some(x), Some(y)) => Some(x.max(y)),
            _ => None,
        };
        let (f, g) = (self.clone(), other.clone());
        Ok(TestForm::new(self.dim, support, move |p| {
            f.eval(p)
                .into_iter()
                .zip(g.eval(p))
                .map(|(u, v)| u * a + v * b)
                .collect()
        }))
    }
}

/// Varieties with a Lelong current.
#[derive(Clone, Debug)]
pub enum LelongTarget {
    /// `{0} ⊂ ℂ`, paired through `∂̄(1/ζ)∧dζ/2πi`.
    Origin,
    /// `{ζ₂ = 0} ⊂ ℂ²`.
    Hyperplane,
    Curve(MonomialCurve),
}

/// `⟨[X], ξ⟩`.
///
/// For the origin in ℂ the pairing is the limit of `∮_{|ζ|=ε} ξ dζ/(2πiζ)`
/// over the schedule; for the hyperplane and the cusp it is the pullback
/// integral over the chart.
pub fn lelong_pair(target: &LelongTarget, xi: &TestForm, schedule: &PVSchedule) -> Result<Cpx> {
    let radius = xi
        .support_radius
        .ok_or_else(|| invalid("test form must have compact support"))?;
    match target {
        LelongTarget::Origin => {
            if xi.dim != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 1,
                    found: xi.dim,
                });
            }
            let mut values = Vec::with_capacity(schedule.deltas.len());
            for &eps in &schedule.deltas {
                let r = integrate(
                    &QuadDomain::circle(Cpx::default(), eps),
                    |p| Ok(xi.eval(p)[0] / (TWO_PI_I * p[0])),
                    1e-13,
                )?;
                values.push(r.value);
            }
            Ok(sep_regularize(&values, schedule)?.value)
        }
        LelongTarget::Hyperplane => {
            check_dim2(xi)?;
            // dζ₁∧dζ̄₁ = −2i dA
            let r = integrate(
                &QuadDomain::disc(Cpx::default(), radius),
                |p| Ok(xi.eval(&[p[0], Cpx::default()])[0] * Cpx::new(0.0, -2.0)),
                1e-10,
            )?;
            Ok(r.value)
        }
        LelongTarget::Curve(curve) => {
            check_dim2(xi)?;
            let t_max = curve.chart_radius(radius);
            let r = integrate(
                &QuadDomain::disc(Cpx::default(), t_max * 1.01)
                    .with_break(vec![Cpx::default()], t_max),
                |p| Ok(curve_pullback_11(curve, xi, p[0])),
                1e-10,
            )?;
            Ok(r.value)
        }
    }
}

fn check_dim2(xi: &TestForm) -> Result<()> {
    if xi.dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: xi.dim,
        });
    }
    Ok(())
}

/// Density against `dA(τ)` of the pullback of a `(1,1)`-test form.
pub fn curve_pullback_11(curve: &MonomialCurve, xi: &TestForm, tau: Cpx) -> Cpx {
    let p = curve.point(tau);
    let d = curve.tangent(tau);
    let c = xi.eval(&p);
    let mut acc = Cpx::default();
    for j in 0..2 {
        for k in 0..2 {
            acc += c[2 * j + k] * d[j] * d[k].conj();
        }
    }
    acc * Cpx::new(0.0, -2.0)
}

/// The same pairing over the cusp, computed as `lim_{δ→0} ∫ χ_δ ν*ξ` with
/// the cutoff vanishing near the singular point.
pub fn lelong_pair_cutoff(
    curve: &MonomialCurve,
    xi: &TestForm,
    schedule: &PVSchedule,
) -> Result<PvValue> {
    check_dim2(xi)?;
    let radius = xi
        .support_radius
        .ok_or_else(|| invalid("test form must have compact support"))?;
    let t_max = curve.chart_radius(radius);
    let cutoff = CuspCutoff::new(*curve);
    let domain =
        QuadDomain::disc(Cpx::default(), t_max * 1.01).with_break(vec![Cpx::default()], t_max);
    let (_, pv) = crate::quad::pv_integrate(
        &domain,
        |p| Ok(curve_pullback_11(curve, xi, p[0])),
        &cutoff,
        schedule,
        1e-10,
    )?;
    Ok(pv)
}

/// `χ_δ(τ) = 1 − b(|ν(τ)|/δ)` on the normalization chart of a cusp, with
/// the distance to the singular point standing in for `|h|`.
#[derive(Copy, Clone, Debug)]
pub struct CuspCutoff {
    pub curve: MonomialCurve,
    pub profile: BumpProfile,
}

impl CuspCutoff {
    pub fn new(curve: MonomialCurve) -> Self {
        CuspCutoff {
            curve,
            profile: BumpProfile {
                inner: 1.0,
                outer: 2.0,
            },
        }
    }
}

impl SingularCutoff for CuspCutoff {
    fn weight(&self, p: &[Cpx], delta: f64) -> f64 {
        let rho = self.curve.ambient_norm(p[0].norm());
        1.0 - self.profile.value(rho / delta)
    }

    fn breaks(&self, delta: f64) -> Vec<Sphere> {
        [self.profile.inner, self.profile.outer]
            .iter()
            .map(|&k| Sphere::new(vec![Cpx::default()], self.curve.chart_radius(k * delta)))
            .collect()
    }
}

/// How a cutoff family is extrapolated to `δ = 0`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Extrapolation {
    /// Take the value at the smallest `δ`.
    None,
    /// Eliminate `δ^p, δ^{2p}, …, δ^{levels·p}` from the tail.
    Richardson { order: f64, levels: usize },
    /// Aitken Δ² on the last three values; the order is estimated.
    Aitken,
}

/// Decreasing cutoff radii `δ_j` and the extrapolation rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PVSchedule {
    pub deltas: Vec<f64>,
    pub extrapolation: Extrapolation,
}

impl Default for PVSchedule {
    /// `δ_j = 2^{−j}`, `j = 3..=12`, Aitken extrapolation.
    fn default() -> Self {
        PVSchedule::dyadic(3, 12, Extrapolation::Aitken)
    }
}

impl PVSchedule {
    /// `δ_j = 2^{−j}` for `j = first..=last`.
    pub fn dyadic(first: i32, last: i32, extrapolation: Extrapolation) -> Self {
        PVSchedule {
            deltas: (first..=last).map(|j| 2f64.powi(-j)).collect(),
            extrapolation,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.deltas.len() < 2 {
            return Err(invalid("schedule needs at least two cutoff radii"));
        }
        if self.deltas.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return Err(invalid("cutoff radii must be positive"));
        }
        if self.deltas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(invalid("cutoff radii must be strictly decreasing"));
        }
        match self.extrapolation {
            Extrapolation::Richardson { order, levels } => {
                if order.is_nan() || order <= 0.0 || levels == 0 || levels + 1 > self.deltas.len() {
                    return Err(invalid(
                        "Richardson needs order > 0 and 1 <= levels < #deltas",
                    ));
                }
            }
            Extrapolation::Aitken if self.deltas.len() < 4 => {
                return Err(invalid(
                    "Aitken extrapolation needs at least four cutoff radii",
                ));
            }
            _ => {}
        }
        Ok(())
    }
}

/// Limit of a cutoff family with diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PvValue {
    pub value: Cpx,
    pub err_estimate: f64,
    /// Estimated `p` in `|v(δ) − v(0)| ~ δ^p`, when the tail allows it.
    pub order_estimate: Option<f64>,
    pub raw: Vec<Cpx>,
}

/// Extrapolates a cutoff family `v(δ_j)` to `δ = 0`.
///
/// Fails with [`Error::Divergence`] when successive differences stop
/// decreasing on the second half of the schedule.
pub fn sep_regularize(values: &[Cpx], schedule: &PVSchedule) -> Result<PvValue> {
    sep_regularize_with_noise(values, schedule, 0.0)
}

/// [`sep_regularize`] with a known noise level in the values (for instance a
/// quadrature error estimate); differences below it never count as
/// divergence.
pub fn sep_regularize_with_noise(
    values: &[Cpx],
    schedule: &PVSchedule,
    noise: f64,
) -> Result<PvValue> {
    schedule.validate()?;
    let deltas = &schedule.deltas;
    if values.len() != deltas.len() {
        return Err(Error::DimensionMismatch {
            expected: deltas.len(),
            found: values.len(),
        });
    }
    let n = values.len();
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let floor = 64.0 * f64::EPSILON * scale.max(1.0) + 2.0 * noise;
    let diffs: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    for w in diffs[diffs.len() / 2..].windows(2) {
        if w[1] > w[0] * 1.05 + floor {
            return Err(Error::Divergence(format!(
                "tail differences increase ({:e} -> {:e})",
                w[0], w[1]
            )));
        }
    }
    let order_estimate = if n >= 3 && diffs[n - 3] > floor && diffs[n - 2] > floor {
        Some((diffs[n - 3] / diffs[n - 2]).ln() / (deltas[n - 2] / deltas[n - 1]).ln())
    } else {
        None
    };
    let (value, err_estimate) = match schedule.extrapolation {
        Extrapolation::None => (values[n - 1], diffs[n - 2]),
        Extrapolation::Richardson { order, levels } => {
            let mut col: Vec<Cpx> = values.to_vec();
            let mut prev_last = values[n - 1];
            for m in 1..=levels {
                let p = order * m as f64;
                let next: Vec<Cpx> = (0..col.len() - 1)
                    .map(|j| {
                        let (da, db) = (deltas[j + m - 1].powf(p), deltas[j + m].powf(p));
                        (col[j + 1] * da - col[j] * db) / (da - db)
                    })
                    .collect();
                prev_last = *col.last().expect("nonempty");
                col = next;
            }
            let v = *col.last().expect("levels < #deltas");
            let err = if col.len() >= 2 {
                (col[col.len() - 1] - col[col.len() - 2]).norm()
            } else {
                (v - prev_last).norm()
            };
            (v, err)
        }
        Extrapolation::Aitken => {
            let aitken = |a: Cpx, b: Cpx, c: Cpx| -> Cpx {
                let d2 = c - b * 2.0 + a;
                if d2.norm() <= floor {
                    c
                } else {
                    c - (c - b) * (c - b) / d2
                }
            };
            let last = aitken(values[n - 3], values[n - 2], values[n - 1]);
            let prev = aitken(values[n - 4], values[n - 3], values[n - 2]);
            (last, (last - prev).norm())
        }
    };
    Ok(PvValue {
        value,
        err_estimate,
        order_estimate,
        raw: values.to_vec(),
    })
}
