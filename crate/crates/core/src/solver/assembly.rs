//! Kernel assembly and the operators `K` and `P`.

use std::sync::Arc;

use crate::cutoff::{norm, BumpProfile};
use crate::error::{invalid, Error, Result};
use crate::exterior::{dbar_scalar, Blade, ExtForm};
use crate::geometry::{cusp_structure_form, CuspCutoff, MonomialCurve, PVSchedule, StructureForm};
use crate::kernels::{
    bm_admissible, bm_components, hefer_single, BForm, HeferForm, Support, WeightForm,
};
use crate::quad::{pv_integrate, QuadDomain, Rule};
use crate::{Cpx, DEFAULT_FD_STEP};

type ChartFn = dyn Fn(&[Cpx]) -> Vec<Cpx> + Send + Sync;

/// A `(0,q)`-form on the chart of a variety (`q ∈ {0, 1}`).
///
/// Degree 0 carries one coefficient; degree 1 carries the coefficients of
/// `dw̄_1..dw̄_d` in chart coordinates `w` (`dζ̄_j` on open sets, `dτ̄` on a
/// curve normalization).
#[derive(Clone)]
pub struct ChartForm {
    pub dim: usize,
    pub degree: usize,
    /// The form vanishes for `|w| ≥ support_radius`.
    pub support_radius: Option<f64>,
    /// The form vanishes for `|w| < vanishing_radius`. It must be smooth
    /// across that sphere.
    pub vanishing_radius: f64,
    /// Radii of origin-centered spheres across which the form is not smooth.
    pub breaks: Vec<f64>,
    /// On a curve, the operator integrands are smooth at `τ = 0` (for
    /// instance because the form has enough vanishing there to cancel the
    /// pole of ω).
    pub regular_at_origin: bool,
    f: Arc<ChartFn>,
}

impl std::fmt::Debug for ChartForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ChartForm(dim = {}, degree = {}, support = {:?})",
            self.dim, self.degree, self.support_radius
        )
    }
}

impl ChartForm {
    pub fn new(
        dim: usize,
        degree: usize,
        f: impl Fn(&[Cpx]) -> Vec<Cpx> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(1..=2).contains(&dim) || degree > 1 {
            return Err(invalid(
                "chart forms have dimension 1 or 2 and degree 0 or 1",
            ));
        }
        Ok(ChartForm {
            dim,
            degree,
            support_radius: None,
            vanishing_radius: 0.0,
            breaks: Vec::new(),
            regular_at_origin: false,
            f: Arc::new(f),
        })
    }

    pub fn function(dim: usize, f: impl Fn(&[Cpx]) -> Cpx + Send + Sync + 'static) -> Result<Self> {
        ChartForm::new(dim, 0, move |p| vec![f(p)])
    }

    pub fn with_support(mut self, radius: f64) -> Self {
        self.support_radius = Some(radius);
        self
    }

    pub fn vanishing_within(mut self, radius: f64) -> Self {
        self.vanishing_radius = radius;
        self
    }

    pub fn regular_at_origin(mut self) -> Self {
        self.regular_at_origin = true;
        self
    }

    pub fn with_breaks(mut self, radii: &[f64]) -> Self {
        self.breaks.extend_from_slice(radii);
        self
    }

    /// Adds the radii of a bump profile as breaks and its outer radius as
    /// support.
    pub fn with_bump_support(self, b: &BumpProfile) -> Self {
        self.with_breaks(&[b.inner, b.outer]).with_support(b.outer)
    }

    pub fn eval(&self, w: &[Cpx]) -> Vec<Cpx> {
        (self.f)(w)
    }

    /// Number of coefficients.
    pub fn components(&self) -> usize {
        if self.degree == 0 {
            1
        } else {
            self.dim
        }
    }

    /// `∂̄` of a function, by central differences at each evaluation.
    pub fn dbar(&self) -> Result<ChartForm> {
        if self.degree != 0 {
            return Err(invalid(
                "∂̄ of chart forms is implemented for functions only",
            ));
        }
        let inner = self.clone();
        let g = move |w: &[Cpx]| {
            dbar_scalar(|p| Ok(inner.eval(p)[0]), w, DEFAULT_FD_STEP).expect("positive step")
        };
        Ok(ChartForm {
            dim: self.dim,
            degree: 1,
            support_radius: self.support_radius,
            vanishing_radius: self.vanishing_radius,
            breaks: self.breaks.clone(),
            regular_at_origin: false,
            f: Arc::new(g),
        })
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Cpx, other: &ChartForm, b: Cpx) -> Result<ChartForm> {
        if self.dim != other.dim || self.degree != other.degree {
            return Err(invalid(
                "combined chart forms must have equal dimension and degree",
            ));
        }
        let support = match (self.support_radius, other.support_radius) {
            (Some(x), Some(y)) => Some(x.max(y)),
            _ => None,
        };
        let mut breaks = self.breaks.clone();
        breaks.extend_from_slice(&other.breaks);
        let (f, g) = (self.clone(), other.clone());
        Ok(ChartForm {
            dim: self.dim,
            degree: self.degree,
            support_radius: support,
            vanishing_radius: self.vanishing_radius.min(other.vanishing_radius),
            breaks,
            regular_at_origin: self.regular_at_origin && other.regular_at_origin,
            f: Arc::new(move |w| {
                f.eval(w)
                    .into_iter()
                    .zip(g.eval(w))
                    .map(|(u, v)| u * a + v * b)
                    .collect()
            }),
        })
    }

    /// Pulls back an ambient function `F(ζ)` along the curve normalization.
    pub fn pullback_function(
        curve: &MonomialCurve,
        f: impl Fn(&[Cpx]) -> Cpx + Send + Sync + 'static,
    ) -> ChartForm {
        let c = *curve;
        ChartForm::function(1, move |w| f(&c.point(w[0]))).expect("valid shape")
    }

    /// Pulls back an ambient `(0,1)`-form `Σ a_k(ζ) dζ̄_k` along the curve
    /// normalization: `Σ a_k(ν(τ)) conj(ν_k'(τ)) dτ̄`.
    pub fn pullback_01(
        curve: &MonomialCurve,
        a: impl Fn(&[Cpx]) -> [Cpx; 2] + Send + Sync + 'static,
    ) -> ChartForm {
        let c = *curve;
        ChartForm::new(1, 1, move |w| {
            let p = c.point(w[0]);
            let d = c.tangent(w[0]);
            let v = a(&p);
            vec![v[0] * d[0].conj() + v[1] * d[1].conj()]
        })
        .expect("valid shape")
    }

    /// Converts ambient radii (support, breaks) to chart radii of a curve.
    pub fn ambient_radii_to_chart(mut self, curve: &MonomialCurve) -> ChartForm {
        self.support_radius = self.support_radius.map(|r| curve.chart_radius(r));
        self.vanishing_radius = if self.vanishing_radius > 0.0 {
            curve.chart_radius(self.vanishing_radius)
        } else {
            0.0
        };
        self.breaks = self.breaks.iter().map(|&r| curve.chart_radius(r)).collect();
        self
    }
}

/// What the kernel is integrated over.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Carrier {
    /// An open set in `ℂ^N` (`N = 1, 2`).
    Ambient { dim: usize },
    /// A monomial curve in ℂ², integrated on its normalization chart.
    Curve(MonomialCurve),
}

/// Which operator kernel to evaluate.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Operator {
    K,
    P,
}

/// `k(ζ, z)` and `p(ζ, z)` for one variety, weight and B-form, plus the
/// quadrature layout used to apply them.
#[derive(Clone, Debug)]
pub struct KernelAssembly {
    pub carrier: Carrier,
    pub structure: StructureForm,
    pub weight: WeightForm,
    pub b: BForm,
    pub hefer: Option<HeferForm>,
    pub dim_ambient: usize,
    pub dim_variety: usize,
    pub rule: Rule,
}

/// Default layout for planar charts.
pub fn disc_rule() -> Rule {
    Rule {
        radial_order: 24,
        angular_nodes: 128,
        polar_nodes: 0,
        pole_levels: 0,
        panels: 4,
    }
}

/// Default layout for the ℂ² ball.
pub fn ball_rule() -> Rule {
    Rule {
        radial_order: 10,
        angular_nodes: 24,
        polar_nodes: 10,
        pole_levels: 0,
        panels: 2,
    }
}

/// `∫ dζ₁…dζ_N ∧ dζ̄₁…dζ̄_N = (−1)^{N(N−1)/2} (−2i)^N dV`.
fn top_factor(n: usize) -> Cpx {
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Cpx::new(0.0, -2.0).powu(n as u32) * sign
}

impl KernelAssembly {
    /// Planar domain `N = n = 1`.
    pub fn disc(weight: WeightForm) -> Result<Self> {
        Self::ambient(1, weight)
    }

    /// Open set in ℂ², `N = n = 2`.
    pub fn ball(weight: WeightForm) -> Result<Self> {
        Self::ambient(2, weight)
    }

    fn ambient(dim: usize, weight: WeightForm) -> Result<Self> {
        if weight.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: weight.dim(),
            });
        }
        Ok(KernelAssembly {
            carrier: Carrier::Ambient { dim },
            structure: StructureForm::Ambient { dim },
            weight,
            b: bm_components(&bm_admissible(dim)?),
            hefer: None,
            dim_ambient: dim,
            dim_variety: dim,
            rule: if dim == 1 { disc_rule() } else { ball_rule() },
        })
    }

    /// The curve `ζ₁ʳ = ζ₂ˢ` with its symbolic structure form and the Hefer
    /// form of `ζ₁ʳ − ζ₂ˢ`.
    pub fn cusp(curve: MonomialCurve, weight: WeightForm) -> Result<Self> {
        if weight.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: weight.dim(),
            });
        }
        Ok(KernelAssembly {
            carrier: Carrier::Curve(curve),
            structure: cusp_structure_form(&curve),
            weight,
            b: bm_components(&bm_admissible(2)?),
            hefer: Some(hefer_single(&curve.equation())),
            dim_ambient: 2,
            dim_variety: 1,
            rule: disc_rule(),
        })
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }

    /// Chart dimension.
    pub fn chart_dim(&self) -> usize {
        self.dim_variety
    }

    /// Ambient point of a chart point.
    pub fn ambient_point(&self, w: &[Cpx]) -> Vec<Cpx> {
        match self.carrier {
            Carrier::Ambient { .. } => w.to_vec(),
            Carrier::Curve(c) => c.point(w[0]).to_vec(),
        }
    }

    fn check_chart_point(&self, w: &[Cpx]) -> Result<()> {
        if w.len() != self.chart_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.chart_dim(),
                found: w.len(),
            });
        }
        if let Carrier::Curve(_) = self.carrier {
            if w[0] == Cpx::default() {
                return Err(invalid("evaluation point lies on the singular locus"));
            }
        }
        if !self.weight.z_domain.contains(&self.ambient_point(w)) {
            return Err(invalid("evaluation point outside the domain of the weight"));
        }
        Ok(())
    }

    /// Density of the integrand of `Kφ(z)` or `Pφ(z)` against Lebesgue
    /// measure on the chart, at chart point `w`.
    pub fn density(&self, op: Operator, phi: &ChartForm, w: &[Cpx], z: &[Cpx]) -> Result<Cpx> {
        let coeffs = phi.eval(w);
        if coeffs.iter().all(|c| *c == Cpx::default()) {
            return Ok(Cpx::default());
        }
        let zeta = self.ambient_point(w);
        match self.carrier {
            Carrier::Ambient { dim } => {
                let g = self.weight.eval(&zeta, z)?;
                match op {
                    Operator::K => {
                        let k = g.wedge(&self.b.eval(&zeta, z)?)?.part(dim, dim - 1);
                        let form = k.wedge(&ExtForm::bar_linear(&coeffs))?;
                        Ok(form.top_coefficient() * top_factor(dim))
                    }
                    Operator::P => {
                        Ok(g.part(dim, dim).top_coefficient() * coeffs[0] * top_factor(dim))
                    }
                }
            }
            Carrier::Curve(curve) => {
                let hefer = self
                    .hefer
                    .as_ref()
                    .expect("curve assemblies carry a Hefer form");
                let h = hefer.eval(&zeta, z)?;
                let g = self.weight.eval(&zeta, z)?;
                let omega = self.structure.chart_density(w[0])?;
                let both = Blade::from_masks(0b11, 0);
                let beta = match op {
                    Operator::K => {
                        let f = h.wedge(&g.wedge(&self.b.eval(&zeta, z)?)?)?;
                        f.coeff(both) * coeffs[0]
                    }
                    Operator::P => {
                        let f = h.wedge(&g)?;
                        let d = curve.tangent(w[0]);
                        let pulled = f.coeff(Blade::from_masks(0b11, 0b01)) * d[0].conj()
                            + f.coeff(Blade::from_masks(0b11, 0b10)) * d[1].conj();
                        pulled * coeffs[0]
                    }
                };
                // ω∧β pulled back is a multiple of dτ∧dτ̄ = −2i dA
                Ok(omega * beta * Cpx::new(0.0, -2.0))
            }
        }
    }

    /// Chart radius of the integration region for `φ`.
    fn chart_extent(&self, phi: &ChartForm) -> Result<f64> {
        let weight_r = match self.weight.support {
            Support::Ball { radius } => Some(radius),
            Support::Unbounded => None,
        };
        let weight_r = match (self.carrier, weight_r) {
            (Carrier::Curve(c), Some(r)) => Some(c.chart_radius(r)),
            (_, r) => r,
        };
        match (weight_r, phi.support_radius) {
            (Some(a), Some(b)) => Ok(a.min(b)),
            (Some(a), None) | (None, Some(a)) => Ok(a),
            (None, None) => Err(invalid(
                "neither the weight nor the form has compact support",
            )),
        }
    }

    /// Integration domain with pole at `z`, breaks and singular points.
    pub fn domain(&self, op: Operator, phi: &ChartForm, w_z: &[Cpx]) -> Result<(QuadDomain, Rule)> {
        let extent = self.chart_extent(phi)?;
        let origin = vec![Cpx::default(); self.chart_dim()];
        if norm(w_z) >= extent {
            // z outside the support: any interior pole works
            return self.domain_with_pole(op, phi, w_z, extent, origin);
        }
        self.domain_with_pole(op, phi, w_z, extent, w_z.to_vec())
    }

    fn domain_with_pole(
        &self,
        op: Operator,
        phi: &ChartForm,
        w_z: &[Cpx],
        extent: f64,
        pole: Vec<Cpx>,
    ) -> Result<(QuadDomain, Rule)> {
        let dim = self.chart_dim();
        let origin = vec![Cpx::default(); dim];
        let mut d = if dim == 1 {
            QuadDomain::disc(Cpx::default(), extent)
        } else {
            QuadDomain::ball2([Cpx::default(); 2], extent)
        };
        d = d.with_pole(pole.clone());
        let mut radii: Vec<f64> = phi.breaks.clone();
        // the form is smooth across its vanishing radius; a circle that does
        // not enclose the pole would only add tangent rays
        if phi.vanishing_radius > norm(&pole) {
            radii.push(phi.vanishing_radius);
        }
        if let Some(chi) = self.weight.cutoff {
            for r in [chi.inner, chi.outer] {
                radii.push(match self.carrier {
                    Carrier::Curve(c) => c.chart_radius(r),
                    _ => r,
                });
            }
        }
        for r in radii {
            if r > 0.0 && r < extent {
                d = d.with_break(origin.clone(), r);
            }
        }
        let mut rule = self.rule;
        if let Carrier::Curve(curve) = self.carrier {
            let mut points: Vec<Cpx> = Vec::new();
            if op == Operator::K {
                points.extend(curve.near_coincidences(w_z[0]));
            }
            if phi.vanishing_radius == 0.0 && !phi.regular_at_origin {
                points.push(Cpx::default());
            }
            let tz = w_z[0];
            let mut min_sep = f64::INFINITY;
            for (i, &q) in points.iter().enumerate() {
                let mut sep = (q - tz).norm();
                for (j, &o) in points.iter().enumerate() {
                    if i != j {
                        sep = sep.min((q - o).norm());
                    }
                }
                min_sep = min_sep.min(sep);
                if q.norm() < extent {
                    d = d.with_singular_point(vec![q], 0.4 * sep);
                }
            }
            if min_sep.is_finite() {
                let extra = (extent / min_sep).log2().ceil().max(0.0) as usize;
                rule.pole_levels += extra;
            }
        }
        Ok((d, rule))
    }

    /// Applies the operator with an explicit node layout.
    pub fn apply_with(
        &self,
        op: Operator,
        phi: &ChartForm,
        w_z: &[Cpx],
        layout: Option<(&QuadDomain, &Rule)>,
    ) -> Result<Cpx> {
        self.check_chart_point(w_z)?;
        if phi.dim != self.chart_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.chart_dim(),
                found: phi.dim,
            });
        }
        let expected_degree = match op {
            Operator::K => 1,
            Operator::P => 0,
        };
        if phi.degree != expected_degree {
            // K lowers the degree by one and P only sees functions; the other
            // bidegrees vanish identically
            return Ok(Cpx::default());
        }
        let owned;
        let (domain, rule) = match layout {
            Some((d, r)) => (d, r),
            None => {
                owned = self.domain(op, phi, w_z)?;
                (&owned.0, &owned.1)
            }
        };
        let z = self.ambient_point(w_z);
        let (v, _) = rule.integrate(domain, |w| self.density(op, phi, w, &z))?;
        Ok(v)
    }
}

/// `Kφ(z)` for a `(0,1)`-form `φ` (the result is a function); `0` for
/// functions. With a schedule, the integral is the limit of cutoff
/// integrals vanishing near the singular point of a curve.
pub fn koppelman_k(
    assembly: &KernelAssembly,
    phi: &ChartForm,
    z: &[Cpx],
    schedule: Option<&PVSchedule>,
) -> Result<Cpx> {
    match (schedule, assembly.carrier) {
        (Some(s), Carrier::Curve(curve)) if phi.degree == 1 => {
            assembly.check_chart_point(z)?;
            let (domain, _) = assembly.domain(Operator::K, phi, z)?;
            let cutoff = CuspCutoff::new(curve);
            let zz = assembly.ambient_point(z);
            let (r, _) = pv_integrate(
                &domain,
                |w| assembly.density(Operator::K, phi, w, &zz),
                &cutoff,
                s,
                1e-7,
            )?;
            Ok(r.value)
        }
        _ => assembly.apply_with(Operator::K, phi, z, None),
    }
}

/// `Pφ(z)` for a function `φ`; `0` for forms of positive degree.
pub fn projection_p(assembly: &KernelAssembly, phi: &ChartForm, z: &[Cpx]) -> Result<Cpx> {
    assembly.apply_with(Operator::P, phi, z, None)
}

/// `∂̄_z` of `z ↦ Kφ(z)` by central differences, with the node layout frozen
/// at the base point so that the difference quotient sees one smooth rule.
pub fn dbar_of_k(
    assembly: &KernelAssembly,
    phi: &ChartForm,
    z: &[Cpx],
    step: f64,
) -> Result<Vec<Cpx>> {
    let (domain, rule) = assembly.domain(Operator::K, phi, z)?;
    dbar_scalar(
        |p| {
            let mut d = domain.clone();
            if d.pole.as_deref() == Some(z) {
                d.pole = Some(p.to_vec());
            }
            assembly.apply_with(Operator::K, phi, p, Some((&d, &rule)))
        },
        z,
        step,
    )
}

/// `∂̄_z` of `z ↦ Pφ(z)` by central differences.
pub fn dbar_of_p(
    assembly: &KernelAssembly,
    phi: &ChartForm,
    z: &[Cpx],
    step: f64,
) -> Result<Vec<Cpx>> {
    let (domain, rule) = assembly.domain(Operator::P, phi, z)?;
    dbar_scalar(
        |p| {
            let mut d = domain.clone();
            if d.pole.as_deref() == Some(z) {
                d.pole = Some(p.to_vec());
            }
            assembly.apply_with(Operator::P, phi, p, Some((&d, &rule)))
        },
        z,
        step,
    )
}
