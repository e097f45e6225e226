//! Deterministic quadrature on circles, discs, annuli and balls in ℂ².
//!
//! Area and volume integrals use a ray-star rule: rays leave a pole in
//! equispaced (2D) or Hopf-coordinate (4D) directions, each ray is cut at
//! every crossing with a declared sphere (domain boundary, holes, breaks of
//! the integrand) and integrated with Gauss–Legendre per piece. Putting the
//! pole at a point singularity absorbs `|η|^{1−d}` into the Jacobian, and
//! since nodes move smoothly with the pole, the result is smooth in it.
//!
//! Further integrable singularities are handled by a C^∞ partition of unity:
//! a bump around each declared singular point is integrated on its own star.
//!
//! Directions are evaluated in parallel and summed in a fixed order, so
//! results do not depend on the thread count.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cutoff::{dist, BumpProfile};
use crate::error::{invalid, Error, Result};
use crate::geometry::{sep_regularize_with_noise, PVSchedule, PvValue};
use crate::Cpx;

/// Value, error estimate and node count of a quadrature.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Cpx,
    pub err_estimate: f64,
    pub nodes_used: usize,
}

/// A sphere `{|p − center| = radius}` in `ℂ^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sphere {
    pub center: Vec<Cpx>,
    pub radius: f64,
}

impl Sphere {
    pub fn new(center: Vec<Cpx>, radius: f64) -> Self {
        Sphere { center, radius }
    }

    fn contains(&self, p: &[Cpx]) -> bool {
        dist(p, &self.center) < self.radius
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainKind {
    Circle { center: Cpx, radius: f64 },
    Disc { center: Cpx, radius: f64 },
    Annulus { center: Cpx, r_in: f64, r_out: f64 },
    Ball2 { center: [Cpx; 2], radius: f64 },
}

/// An integration region with optional excised balls, break spheres where
/// the integrand is not smooth, and integrable point singularities.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadDomain {
    pub kind: DomainKind,
    /// Excised open balls.
    pub punctures: Vec<Sphere>,
    /// Spheres across which the integrand may be non-smooth.
    pub breaks: Vec<Sphere>,
    /// Integrable point singularities, each with the radius of its bump.
    pub singular_points: Vec<Sphere>,
    /// Pole of the main star; the domain center by default.
    pub pole: Option<Vec<Cpx>>,
}

impl QuadDomain {
    fn new(kind: DomainKind) -> Self {
        QuadDomain {
            kind,
            punctures: Vec::new(),
            breaks: Vec::new(),
            singular_points: Vec::new(),
            pole: None,
        }
    }

    pub fn circle(center: Cpx, radius: f64) -> Self {
        Self::new(DomainKind::Circle { center, radius })
    }

    pub fn disc(center: Cpx, radius: f64) -> Self {
        Self::new(DomainKind::Disc { center, radius })
    }

    pub fn annulus(center: Cpx, r_in: f64, r_out: f64) -> Self {
        Self::new(DomainKind::Annulus {
            center,
            r_in,
            r_out,
        })
    }

    pub fn ball2(center: [Cpx; 2], radius: f64) -> Self {
        Self::new(DomainKind::Ball2 { center, radius })
    }

    pub fn with_puncture(mut self, center: Vec<Cpx>, radius: f64) -> Self {
        self.punctures.push(Sphere::new(center, radius));
        self
    }

    pub fn with_break(mut self, center: Vec<Cpx>, radius: f64) -> Self {
        self.breaks.push(Sphere::new(center, radius));
        self
    }

    pub fn with_singular_point(mut self, center: Vec<Cpx>, radius: f64) -> Self {
        self.singular_points.push(Sphere::new(center, radius));
        self
    }

    pub fn with_pole(mut self, pole: Vec<Cpx>) -> Self {
        self.pole = Some(pole);
        self
    }

    /// Real dimension of the region (1 for circles).
    pub fn real_dim(&self) -> usize {
        match self.kind {
            DomainKind::Circle { .. } => 1,
            DomainKind::Disc { .. } | DomainKind::Annulus { .. } => 2,
            DomainKind::Ball2 { .. } => 4,
        }
    }

    fn complex_dim(&self) -> usize {
        if self.real_dim() == 4 {
            2
        } else {
            1
        }
    }

    fn outer(&self) -> Sphere {
        match &self.kind {
            DomainKind::Circle { center, radius } | DomainKind::Disc { center, radius } => {
                Sphere::new(vec![*center], *radius)
            }
            DomainKind::Annulus { center, r_out, .. } => Sphere::new(vec![*center], *r_out),
            DomainKind::Ball2 { center, radius } => Sphere::new(center.to_vec(), *radius),
        }
    }

    /// Excised balls seen from a star: every hole for local stars, only the
    /// annulus hole for the main star (punctures lie where its partition
    /// weight vanishes).
    fn holes(&self, local: bool) -> Vec<Sphere> {
        let mut h = if local {
            self.punctures.clone()
        } else {
            Vec::new()
        };
        if let DomainKind::Annulus { center, r_in, .. } = self.kind {
            h.push(Sphere::new(vec![center], r_in));
        }
        h
    }

    /// Supports of the partition-of-unity bumps: one per singular point and
    /// one per puncture, the latter wide enough that the bump is 1 on the
    /// hole.
    fn bumps(&self) -> Vec<Sphere> {
        self.singular_points
            .iter()
            .cloned()
            .chain(
                self.punctures
                    .iter()
                    .map(|p| Sphere::new(p.center.clone(), PUNCTURE_BUMP * p.radius)),
            )
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let positive = |r: f64| r > 0.0 && r.is_finite();
        match self.kind {
            DomainKind::Circle { radius, .. } | DomainKind::Disc { radius, .. } => {
                if !positive(radius) {
                    return Err(invalid("domain radius must be positive"));
                }
            }
            DomainKind::Ball2 { radius, .. } => {
                if !positive(radius) {
                    return Err(invalid("domain radius must be positive"));
                }
            }
            DomainKind::Annulus { r_in, r_out, .. } => {
                if !(positive(r_in) && r_out > r_in && r_out.is_finite()) {
                    return Err(invalid("annulus radii must satisfy 0 < r_in < r_out"));
                }
            }
        }
        let n = self.complex_dim();
        let outer = self.outer();
        for s in self
            .punctures
            .iter()
            .chain(&self.breaks)
            .chain(&self.singular_points)
        {
            if s.center.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: s.center.len(),
                });
            }
            if !positive(s.radius) {
                return Err(invalid("sphere radii must be positive"));
            }
        }
        for p in &self.punctures {
            if dist(&p.center, &outer.center) + p.radius >= outer.radius {
                return Err(invalid("punctures must lie strictly inside the domain"));
            }
        }
        let bumps = self.bumps();
        for (i, a) in bumps.iter().enumerate() {
            for b in &bumps[i + 1..] {
                if dist(&a.center, &b.center) < a.radius + b.radius {
                    return Err(invalid("bumps around singular points must be disjoint"));
                }
            }
        }
        if let Some(p) = &self.pole {
            if p.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.len(),
                });
            }
            if !outer.contains(p) {
                return Err(invalid("pole must lie inside the domain"));
            }
        }
        Ok(())
    }
}

/// Bump radius around a puncture, in units of the puncture radius.
const PUNCTURE_BUMP: f64 = 2.5;

/// A fixed (non-adaptive) node layout.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    /// Gauss–Legendre order per radial piece.
    pub radial_order: usize,
    /// Equispaced angles per circle (2D), or per Hopf angle (4D); also the
    /// node count for circle domains.
    pub angular_nodes: usize,
    /// Gauss–Legendre nodes in the Hopf latitude `θ ∈ [0, π/2]` (4D only).
    pub polar_nodes: usize,
    /// Dyadic subdivisions of the innermost piece toward each pole.
    pub pole_levels: usize,
    /// Radial pieces are at most `scale / panels` long.
    pub panels: usize,
}

impl Default for Rule {
    fn default() -> Self {
        Rule {
            radial_order: 16,
            angular_nodes: 64,
            polar_nodes: 12,
            pole_levels: 0,
            panels: 4,
        }
    }
}

/// C^∞ transition equal to 1 for `t ≤ 1/2` and 0 for `t ≥ 1`.
fn smooth_bump(t: f64) -> f64 {
    if t <= 0.5 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let u = 2.0 * t - 1.0;
    let e = |x: f64| (-1.0 / x).exp();
    e(1.0 - u) / (e(1.0 - u) + e(u))
}

struct Star<'a> {
    pole: Vec<Cpx>,
    /// Radial cutoff for local stars.
    limit: Option<f64>,
    scale: f64,
    own_bump: Option<&'a Sphere>,
    bumps: &'a [Sphere],
}

/// Positive ray parameters where `p + ρu` crosses the sphere.
fn crossings(p: &[Cpx], u: &[Cpx], s: &Sphere, out: &mut Vec<f64>) {
    let mut b = 0.0;
    let mut q = 0.0;
    for j in 0..p.len() {
        let d = p[j] - s.center[j];
        b += (u[j].conj() * d).re;
        q += d.norm_sqr();
    }
    q -= s.radius * s.radius;
    let disc = b * b - q;
    if disc <= 0.0 {
        return;
    }
    let r = disc.sqrt();
    for rho in [-b - r, -b + r] {
        if rho > 0.0 {
            out.push(rho);
        }
    }
}

impl Rule {
    /// Rule for refinement level `level` of the adaptive driver.
    pub fn for_level(real_dim: usize, level: usize) -> Rule {
        if real_dim == 4 {
            Rule {
                radial_order: 6 + 2 * level,
                angular_nodes: 8 << level,
                polar_nodes: 4 + 2 * level,
                pole_levels: level,
                panels: 2 + level,
            }
        } else {
            Rule {
                radial_order: 8 + 4 * level,
                angular_nodes: 16 << level,
                polar_nodes: 0,
                pole_levels: 2 * level,
                panels: 2 + level,
            }
        }
    }

    fn check(&self) -> Result<()> {
        if self.radial_order == 0 || self.angular_nodes == 0 || self.panels == 0 {
            return Err(invalid("quadrature rule needs positive node counts"));
        }
        Ok(())
    }

    /// Integrates `f` with this node layout; returns the value and node count.
    pub fn integrate<F>(&self, domain: &QuadDomain, f: F) -> Result<(Cpx, usize)>
    where
        F: Fn(&[Cpx]) -> Result<Cpx> + Sync,
    {
        self.check()?;
        domain.validate()?;
        if let DomainKind::Circle { center, radius } = domain.kind {
            return circle_trapezoid(center, radius, self.angular_nodes, &f);
        }
        let gl: Vec<(f64, f64)> = GaussLegendre::new(NonZeroUsize::new(self.radial_order).unwrap())
            .as_node_weight_pairs()
            .to_vec();
        let outer = domain.outer();
        let pole = domain.pole.clone().unwrap_or_else(|| outer.center.clone());
        let mut total = Cpx::default();
        let mut nodes = 0;
        let bumps = domain.bumps();
        let main = Star {
            pole,
            limit: None,
            scale: outer.radius,
            own_bump: None,
            bumps: &bumps,
        };
        let (v, n) = self.star(domain, &main, &gl, &f)?;
        total += v;
        nodes += n;
        for s in &bumps {
            let local = Star {
                pole: s.center.clone(),
                limit: Some(s.radius),
                scale: s.radius,
                own_bump: Some(s),
                bumps: &bumps,
            };
            let (v, n) = self.star(domain, &local, &gl, &f)?;
            total += v;
            nodes += n;
        }
        Ok((total, nodes))
    }

    fn directions(&self, real_dim: usize) -> Vec<(Vec<Cpx>, f64)> {
        let na = self.angular_nodes;
        let step = TAU / na as f64;
        if real_dim == 2 {
            return (0..na)
                .map(|k| (vec![Cpx::from_polar(1.0, k as f64 * step)], step))
                .collect();
        }
        let theta: Vec<(f64, f64)> =
            GaussLegendre::new(NonZeroUsize::new(self.polar_nodes.max(1)).unwrap())
                .as_node_weight_pairs()
                .iter()
                .map(|&(x, w)| (FRAC_PI_2 * 0.5 * (x + 1.0), FRAC_PI_2 * 0.5 * w))
                .collect();
        let mut out = Vec::with_capacity(theta.len() * na * na);
        for &(t, wt) in &theta {
            let (st, ct) = t.sin_cos();
            for a in 0..na {
                for b in 0..na {
                    let u = vec![
                        Cpx::from_polar(ct, a as f64 * step),
                        Cpx::from_polar(st, b as f64 * step),
                    ];
                    out.push((u, wt * ct * st * step * step));
                }
            }
        }
        out
    }

    fn star<F>(
        &self,
        domain: &QuadDomain,
        star: &Star<'_>,
        gl: &[(f64, f64)],
        f: &F,
    ) -> Result<(Cpx, usize)>
    where
        F: Fn(&[Cpx]) -> Result<Cpx> + Sync,
    {
        let real_dim = domain.real_dim();
        let dirs = self.directions(real_dim);
        let parts: Vec<Result<(Cpx, usize)>> = dirs
            .par_iter()
            .map(|(u, w)| {
                let (v, n) = self.ray(domain, star, u, gl, f)?;
                Ok((v * *w, n))
            })
            .collect();
        let mut total = Cpx::default();
        let mut nodes = 0;
        for p in parts {
            let (v, n) = p?;
            total += v;
            nodes += n;
        }
        Ok((total, nodes))
    }

    fn ray<F>(
        &self,
        domain: &QuadDomain,
        star: &Star<'_>,
        u: &[Cpx],
        gl: &[(f64, f64)],
        f: &F,
    ) -> Result<(Cpx, usize)>
    where
        F: Fn(&[Cpx]) -> Result<Cpx> + Sync,
    {
        let p = &star.pole;
        let outer = domain.outer();
        let holes = domain.holes(star.own_bump.is_some());
        let mut cuts = Vec::new();
        crossings(p, u, &outer, &mut cuts);
        let exit = cuts.iter().copied().fold(0.0, f64::max);
        for s in holes.iter().chain(&domain.breaks) {
            crossings(p, u, s, &mut cuts);
        }
        // the partition weights switch on between half and full bump radius
        for s in star.bumps {
            crossings(p, u, s, &mut cuts);
            crossings(
                p,
                u,
                &Sphere::new(s.center.clone(), 0.5 * s.radius),
                &mut cuts,
            );
        }
        let end = star.limit.unwrap_or(exit);
        cuts.retain(|&c| c < end);
        cuts.push(0.0);
        cuts.push(end);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let jac_pow = domain.real_dim() as i32 - 1;
        let h_max = star.scale / self.panels as f64;
        let point = |rho: f64| -> Vec<Cpx> { p.iter().zip(u).map(|(a, d)| a + d * rho).collect() };
        let mut total = Cpx::default();
        let mut nodes = 0;
        for (idx, win) in cuts.windows(2).enumerate() {
            let (a, b) = (win[0], win[1]);
            if b - a <= 0.0 {
                continue;
            }
            let mid = point(0.5 * (a + b));
            if !outer.contains(&mid) || holes.iter().any(|h| h.contains(&mid)) {
                continue;
            }
            let mut pieces = Vec::new();
            let mut lo = a;
            if idx == 0 && self.pole_levels > 0 {
                let mut x = b * 0.5f64.powi(self.pole_levels as i32);
                pieces.push((0.0, x));
                while x < b * 0.5 {
                    pieces.push((x, 2.0 * x));
                    x *= 2.0;
                }
                lo = x;
            }
            let m = ((b - lo) / h_max).ceil().max(1.0) as usize;
            for k in 0..m {
                let l = lo + (b - lo) * k as f64 / m as f64;
                let r = lo + (b - lo) * (k + 1) as f64 / m as f64;
                pieces.push((l, r));
            }
            for (l, r) in pieces {
                let half = 0.5 * (r - l);
                for &(x, w) in gl {
                    let rho = l + half * (x + 1.0);
                    let q = point(rho);
                    let pu = self.partition_weight(star, &q);
                    if pu == 0.0 {
                        continue;
                    }
                    nodes += 1;
                    total += f(&q)? * (w * half * rho.powi(jac_pow) * pu);
                }
            }
        }
        Ok((total, nodes))
    }

    fn partition_weight(&self, star: &Star<'_>, q: &[Cpx]) -> f64 {
        match star.own_bump {
            Some(s) => smooth_bump(dist(q, &s.center) / s.radius),
            None => star
                .bumps
                .iter()
                .map(|s| 1.0 - smooth_bump(dist(q, &s.center) / s.radius))
                .product(),
        }
    }
}

fn circle_trapezoid<F>(center: Cpx, radius: f64, n: usize, f: &F) -> Result<(Cpx, usize)>
where
    F: Fn(&[Cpx]) -> Result<Cpx> + Sync,
{
    let step = TAU / n as f64;
    let parts: Vec<Result<Cpx>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let e = Cpx::from_polar(radius, k as f64 * step);
            Ok(f(&[center + e])? * e * Cpx::i() * step)
        })
        .collect();
    let mut total = Cpx::default();
    for p in parts {
        total += p?;
    }
    Ok((total, n))
}

/// Default tolerance for a domain: `1e−8` in real dimension ≤ 2, `1e−4` for
/// balls in ℂ².
pub fn default_tol(domain: &QuadDomain) -> f64 {
    if domain.real_dim() == 4 {
        1e-4
    } else {
        1e-8
    }
}

/// Adaptive integration: refines the node layout level by level until two
/// successive values differ by less than `tol`.
///
/// Circles integrate `f(ζ) dζ`; discs, annuli and balls integrate `f dV`
/// against Lebesgue measure.
pub fn integrate<F>(domain: &QuadDomain, f: F, tol: f64) -> Result<QuadResult>
where
    F: Fn(&[Cpx]) -> Result<Cpx> + Sync,
{
    let max_level = if domain.real_dim() == 4 { 3 } else { 6 };
    integrate_levels(domain, &f, tol, max_level)
}

/// [`integrate`] with an explicit refinement budget.
pub fn integrate_levels<F>(
    domain: &QuadDomain,
    f: &F,
    tol: f64,
    max_level: usize,
) -> Result<QuadResult>
where
    F: Fn(&[Cpx]) -> Result<Cpx> + Sync,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(invalid("tolerance must be positive"));
    }
    let dim = domain.real_dim();
    let mut prev: Option<Cpx> = None;
    let mut nodes_total = 0;
    let mut last = QuadResult {
        value: Cpx::default(),
        err_estimate: f64::INFINITY,
        nodes_used: 0,
    };
    for level in 0..=max_level {
        let rule = Rule::for_level(dim, level);
        let (v, n) = rule.integrate(domain, f)?;
        nodes_total += n;
        if let Some(pv) = prev {
            let err = (v - pv).norm();
            last = QuadResult {
                value: v,
                err_estimate: err,
                nodes_used: nodes_total,
            };
            if err < tol {
                return Ok(last);
            }
        }
        prev = Some(v);
    }
    Err(Error::Accuracy { tol, partial: last })
}

/// A family of cutoffs `χ_δ` vanishing near a singular set and tending to 1
/// off it as `δ → 0`.
pub trait SingularCutoff: Sync {
    /// `χ_δ(p)`.
    fn weight(&self, p: &[Cpx], delta: f64) -> f64;
    /// Spheres across which `χ_δ` is not smooth.
    fn breaks(&self, delta: f64) -> Vec<Sphere>;
}

/// `χ_δ(p) = 1 − b(|p − c|/δ)` for a bump profile `b` equal to 1 on `[0, 1]`.
#[derive(Clone, Debug)]
pub struct RadialCutoff {
    pub center: Vec<Cpx>,
    pub profile: BumpProfile,
}

impl RadialCutoff {
    pub fn new(center: Vec<Cpx>) -> Self {
        RadialCutoff {
            center,
            profile: BumpProfile {
                inner: 1.0,
                outer: 2.0,
            },
        }
    }
}

impl SingularCutoff for RadialCutoff {
    fn weight(&self, p: &[Cpx], delta: f64) -> f64 {
        1.0 - self.profile.value(dist(p, &self.center) / delta)
    }

    fn breaks(&self, delta: f64) -> Vec<Sphere> {
        vec![
            Sphere::new(self.center.clone(), self.profile.inner * delta),
            Sphere::new(self.center.clone(), self.profile.outer * delta),
        ]
    }
}

/// Principal value `lim_{δ→0} ∫ χ_δ f` over the schedule, passed through
/// [`crate::geometry::sep_regularize`].
pub fn pv_integrate<F>(
    domain: &QuadDomain,
    f: F,
    cutoff: &dyn SingularCutoff,
    schedule: &PVSchedule,
    tol: f64,
) -> Result<(QuadResult, PvValue)>
where
    F: Fn(&[Cpx]) -> Result<Cpx> + Sync,
{
    let mut values = Vec::with_capacity(schedule.deltas.len());
    let mut nodes = 0;
    let mut quad_err: f64 = 0.0;
    for &delta in &schedule.deltas {
        let mut d = domain.clone();
        d.breaks.extend(cutoff.breaks(delta));
        let g = |p: &[Cpx]| -> Result<Cpx> {
            let w = cutoff.weight(p, delta);
            if w == 0.0 {
                return Ok(Cpx::default());
            }
            Ok(f(p)? * w)
        };
        let r = integrate(&d, g, tol)?;
        nodes += r.nodes_used;
        quad_err = quad_err.max(r.err_estimate);
        values.push(r.value);
    }
    let pv = sep_regularize_with_noise(&values, schedule, quad_err)?;
    Ok((
        QuadResult {
            value: pv.value,
            err_estimate: pv.err_estimate + quad_err,
            nodes_used: nodes,
        },
        pv,
    ))
}
