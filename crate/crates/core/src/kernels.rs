//! Kernel ingredients: admissible forms, Bochner–Martinelli components,
//! weights and Hefer forms.
//!
//! All constructors return [`FormField`]s evaluated on the slice `z = const`
//! (see [`crate::exterior`]). The `2πi` of `δ_η` is absorbed in the stored
//! Hefer and `σ` forms so that `δ_η H = h(ζ) − h(z)` and `δ_η σ = 1`.

use std::sync::Arc;

use crate::cutoff::{norm, BumpProfile};
use crate::error::{invalid, singular, Error, Result};
use crate::exterior::{dbar_fd, ExtForm, FormField, Side};
use crate::poly::Poly;
use crate::{Cpx, DEFAULT_FD_STEP, TWO_PI_I};

/// Largest `power + dim` accepted by [`singular_weight_ga`].
pub const MAX_WEIGHT_ORDER: u32 = 8;

fn one() -> Cpx {
    Cpx::new(1.0, 0.0)
}

/// A `(1,0)`-form `s` with `|s| ≤ C₁|η|` and `|δ_η s| ≥ C₂|η|²`.
#[derive(Clone, Debug)]
pub struct AdmissibleForm {
    pub s: FormField,
    /// `∂̄_ζ s`; finite differences when not known in closed form.
    pub dbar_s: FormField,
    /// Declared `(C₁, C₂)`.
    pub bounds: (f64, f64),
}

impl AdmissibleForm {
    /// Wraps a user-supplied `s`, differentiating it numerically.
    pub fn new(s: FormField, bounds: (f64, f64)) -> Self {
        let inner = s.clone();
        let dbar_s = FormField::new(s.dim(), move |zeta, z| {
            dbar_fd(&inner, zeta, z, Side::Zeta, DEFAULT_FD_STEP)
        });
        AdmissibleForm { s, dbar_s, bounds }
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// Smallest `C₁` and largest `C₂` consistent with the sample pairs.
    pub fn fitted_bounds(&self, pairs: &[(Vec<Cpx>, Vec<Cpx>)]) -> Result<(f64, f64)> {
        let mut c1: f64 = 0.0;
        let mut c2 = f64::INFINITY;
        for (zeta, z) in pairs {
            let eta: Vec<Cpx> = zeta.iter().zip(z).map(|(a, b)| a - b).collect();
            let r = norm(&eta);
            if r == 0.0 {
                continue;
            }
            let s = self.s.eval(zeta, z)?;
            let s_norm = s.terms().map(|(_, c)| c.norm_sqr()).sum::<f64>().sqrt();
            let ds = s.contract_eta(&eta)?.scalar_part().norm() / TWO_PI_I.im;
            c1 = c1.max(s_norm / r);
            c2 = c2.min(ds / (r * r));
        }
        Ok((c1, c2))
    }
}

/// `s = Σ (ζ̄_j − z̄_j) dη_j`, so that `δ_η s = 2πi|η|²`.
pub fn bm_admissible(dim: usize) -> Result<AdmissibleForm> {
    if !(1..=3).contains(&dim) {
        return Err(invalid(format!("dimension {dim} outside 1..=3")));
    }
    let s = FormField::new(dim, |zeta, z| {
        let c: Vec<Cpx> = zeta.iter().zip(z).map(|(a, b)| (a - b).conj()).collect();
        Ok(ExtForm::eta_linear(&c))
    });
    let dbar = {
        let mut acc = ExtForm::zero(dim);
        for j in 0..dim {
            acc += &ExtForm::bar(dim, j).wedge(&ExtForm::eta(dim, j))?;
        }
        acc
    };
    Ok(AdmissibleForm {
        s,
        dbar_s: FormField::constant(dbar),
        bounds: (1.0, 1.0),
    })
}

/// `B = Σ_k B_{k,k−1}` with `B_{k,k−1} = s ∧ (∂̄s)^{k−1} / (δ_η s)^k`.
#[derive(Clone, Debug)]
pub struct BForm {
    pub source: AdmissibleForm,
}

impl BForm {
    pub fn dim(&self) -> usize {
        self.source.dim()
    }

    /// All components at `(ζ, z)`, index `k − 1` holding `B_{k,k−1}`.
    pub fn eval_components(&self, zeta: &[Cpx], z: &[Cpx]) -> Result<Vec<ExtForm>> {
        let dim = self.dim();
        let eta: Vec<Cpx> = zeta.iter().zip(z).map(|(a, b)| a - b).collect();
        let s = self.source.s.eval(zeta, z)?;
        let ds = s.contract_eta(&eta)?.scalar_part();
        if ds.norm() <= (f64::EPSILON * (1.0 + norm(zeta))).powi(2) {
            return Err(singular(format!(
                "B-form evaluated on the diagonal (|ζ − z| = {:e})",
                norm(&eta)
            )));
        }
        let dbar_s = self.source.dbar_s.eval(zeta, z)?;
        let mut out = Vec::with_capacity(dim);
        let mut num = s;
        let mut den = ds;
        for k in 1..=dim {
            if k > 1 {
                num = num.wedge(&dbar_s)?;
                den *= ds;
            }
            out.push(num.scale(one() / den));
        }
        Ok(out)
    }

    /// The sum of all components.
    pub fn eval(&self, zeta: &[Cpx], z: &[Cpx]) -> Result<ExtForm> {
        let parts = self.eval_components(zeta, z)?;
        Ok(parts
            .iter()
            .fold(ExtForm::zero(self.dim()), |acc, p| &acc + p))
    }

    /// `B_{k,k−1}` as a field.
    pub fn component(&self, k: usize) -> Result<FormField> {
        if k == 0 || k > self.dim() {
            return Err(invalid(format!(
                "B has components 1..={}, asked for {k}",
                self.dim()
            )));
        }
        let b = self.clone();
        Ok(FormField::new(self.dim(), move |zeta, z| {
            Ok(b.eval_components(zeta, z)?.swap_remove(k - 1))
        }))
    }

    pub fn field(&self) -> FormField {
        let b = self.clone();
        FormField::new(self.dim(), move |zeta, z| b.eval(zeta, z))
    }
}

pub fn bm_components(s: &AdmissibleForm) -> BForm {
    BForm { source: s.clone() }
}

/// Where a weight's `ζ`-support lies.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Support {
    /// Contained in the closed ball of the given radius about the origin.
    Ball {
        radius: f64,
    },
    Unbounded,
}

/// Where in `z` the weight contract and holomorphy in `z` hold.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Region {
    Everywhere,
    /// The open ball of the given radius about the origin.
    Ball {
        radius: f64,
    },
}

impl Region {
    pub fn contains(&self, z: &[Cpx]) -> bool {
        match *self {
            Region::Everywhere => true,
            Region::Ball { radius } => norm(z) < radius,
        }
    }

    fn intersect(self, other: Region) -> Region {
        match (self, other) {
            (Region::Everywhere, r) | (r, Region::Everywhere) => r,
            (Region::Ball { radius: a }, Region::Ball { radius: b }) => {
                Region::Ball { radius: a.min(b) }
            }
        }
    }
}

impl Support {
    fn intersect(self, other: Support) -> Support {
        match (self, other) {
            (Support::Unbounded, s) | (s, Support::Unbounded) => s,
            (Support::Ball { radius: a }, Support::Ball { radius: b }) => {
                Support::Ball { radius: a.min(b) }
            }
        }
    }
}

/// `g = g₀,₀ + … + g_{N,N}` with `∇_η g = 0` on `z_domain`.
///
/// The field returns the whole sum; [`WeightForm::component`] extracts one
/// bidegree.
#[derive(Clone, Debug)]
pub struct WeightForm {
    pub field: FormField,
    pub support: Support,
    pub z_domain: Region,
    /// Whether `g` depends holomorphically on `z` over `z_domain`.
    pub holomorphic_in_z: bool,
    /// Radial cutoff generating the weight, if any.
    pub cutoff: Option<BumpProfile>,
}

impl WeightForm {
    pub fn trivial(dim: usize) -> Self {
        WeightForm {
            field: FormField::constant(ExtForm::scalar(dim, one())),
            support: Support::Unbounded,
            z_domain: Region::Everywhere,
            holomorphic_in_z: true,
            cutoff: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.field.dim()
    }

    pub fn eval(&self, zeta: &[Cpx], z: &[Cpx]) -> Result<ExtForm> {
        self.field.eval(zeta, z)
    }

    pub fn component(&self, k: usize) -> FormField {
        let f = self.field.clone();
        FormField::new(self.dim(), move |zeta, z| Ok(f.eval(zeta, z)?.part(k, k)))
    }

    /// `max |∇_η g|` at `(ζ, z)` with `∇_η = δ_η − ∂̄`, the `∂̄` taken by
    /// central differences.
    pub fn contract_residual(&self, zeta: &[Cpx], z: &[Cpx], step: f64) -> Result<f64> {
        let eta: Vec<Cpx> = zeta.iter().zip(z).map(|(a, b)| a - b).collect();
        let g = self.eval(zeta, z)?;
        let delta = g.contract_eta(&eta)?;
        let dbar = dbar_fd(&self.field, zeta, z, Side::Zeta, step)?;
        Ok((&delta - &dbar).max_abs())
    }
}

/// The weight `g = χ − ∂̄χ ∧ (σ + σ∧∂̄σ + … + σ∧(∂̄σ)^{N−1})` with
/// `σ = ζ̄·dη / (2πi(|ζ|² − ζ̄·z))`, holomorphic in `z` for `|z| < 1`.
pub fn ball_weight(chi: BumpProfile, dim: usize) -> Result<WeightForm> {
    if !(1..=3).contains(&dim) {
        return Err(invalid(format!("dimension {dim} outside 1..=3")));
    }
    if chi.inner <= 1.0 {
        return Err(invalid(
            "ball weight needs a cutoff identically 1 near the closed unit ball",
        ));
    }
    let origin = vec![Cpx::default(); dim];
    let field = FormField::new(dim, move |zeta, z| {
        let value = chi.at(zeta, &origin);
        let mut g = ExtForm::scalar(dim, Cpx::new(value, 0.0));
        let dchi = chi.dbar_at(zeta, &origin);
        if dchi.iter().all(|c| *c == Cpx::default()) {
            return Ok(g);
        }
        let d: Cpx = zeta.iter().zip(z).map(|(a, b)| a.conj() * (a - b)).sum();
        if d.norm() < 1e-12 * norm(zeta).powi(2).max(1e-300) {
            return Err(singular("ball weight: |ζ|² = ζ̄·z on the support of ∂̄χ"));
        }
        let conj: Vec<Cpx> = zeta.iter().map(|a| a.conj()).collect();
        let eta: Vec<Cpx> = zeta.iter().zip(z).map(|(a, b)| a - b).collect();
        let lin = ExtForm::eta_linear(&conj);
        let sigma = lin.scale(one() / (TWO_PI_I * d));
        let mut dsigma = ExtForm::zero(dim);
        for j in 0..dim {
            dsigma += &ExtForm::bar(dim, j).wedge(&ExtForm::eta(dim, j))?;
        }
        let dbar_d = ExtForm::bar_linear(&eta);
        let dsigma = &dsigma.scale(one() / (TWO_PI_I * d))
            - &dbar_d.wedge(&lin)?.scale(one() / (TWO_PI_I * d * d));
        let mut series = sigma.clone();
        let mut term = sigma;
        for _ in 1..dim {
            term = term.wedge(&dsigma)?;
            series += &term;
        }
        let dchi_form = ExtForm::bar_linear(&dchi);
        g = &g - &dchi_form.wedge(&series)?;
        Ok(g)
    });
    Ok(WeightForm {
        field,
        support: Support::Ball { radius: chi.outer },
        z_domain: Region::Ball { radius: 1.0 },
        holomorphic_in_z: true,
        cutoff: Some(chi),
    })
}

/// Graded product `g ∧ g₂`.
pub fn weight_product(g: &WeightForm, g2: &WeightForm) -> Result<WeightForm> {
    Ok(WeightForm {
        field: g.field.wedge(&g2.field)?,
        support: g.support.intersect(g2.support),
        z_domain: g.z_domain.intersect(g2.z_domain),
        holomorphic_in_z: g.holomorphic_in_z && g2.holomorphic_in_z,
        cutoff: g.cutoff.or(g2.cutoff),
    })
}

/// `H = (1/2πi) Σ_j H_j dη_j` with `δ_η H = h(ζ) − h(z)`.
#[derive(Clone, Debug)]
pub struct HeferForm {
    pub target: Poly,
}

impl HeferForm {
    pub fn dim(&self) -> usize {
        self.target.nvars()
    }

    pub fn eval(&self, zeta: &[Cpx], z: &[Cpx]) -> Result<ExtForm> {
        let d = self.target.divided_differences(zeta, z);
        let c: Vec<Cpx> = d.into_iter().map(|v| v / TWO_PI_I).collect();
        Ok(ExtForm::eta_linear(&c))
    }

    pub fn field(&self) -> FormField {
        let h = self.clone();
        FormField::new(self.dim(), move |zeta, z| h.eval(zeta, z))
    }
}

pub fn hefer_single(h: &Poly) -> HeferForm {
    HeferForm { target: h.clone() }
}

/// `g_a^μ` for `g_a = Σ a_j(z) ā_j/|a|² + Σ_j ∂̄(ā_j/|a|²) ∧ H^a_j`, a weight
/// in `ζ` away from `{a = 0}`.
pub fn singular_weight_ga(a: &[Poly], hefer: &[HeferForm], power: u32) -> Result<WeightForm> {
    let dim = a
        .first()
        .map(|p| p.nvars())
        .ok_or_else(|| invalid("singular weight needs at least one function"))?;
    if hefer.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: hefer.len(),
        });
    }
    if a.iter().any(|p| p.nvars() != dim) || hefer.iter().any(|h| h.dim() != dim) {
        return Err(invalid(
            "all functions must live in the same number of variables",
        ));
    }
    if power == 0 || power + dim as u32 > MAX_WEIGHT_ORDER {
        return Err(invalid(format!(
            "power must satisfy 1 <= power and power + dim <= {MAX_WEIGHT_ORDER}"
        )));
    }
    let a: Arc<Vec<Poly>> = Arc::new(a.to_vec());
    let grads: Arc<Vec<Vec<Poly>>> = Arc::new(a.iter().map(|p| p.gradient()).collect());
    let hefer: Arc<Vec<HeferForm>> = Arc::new(hefer.to_vec());
    let base = FormField::new(dim, move |zeta, z| {
        let av: Vec<Cpx> = a.iter().map(|p| p.eval(zeta)).collect();
        let az: Vec<Cpx> = a.iter().map(|p| p.eval(z)).collect();
        let big_a: f64 = av.iter().map(|v| v.norm_sqr()).sum();
        if big_a == 0.0 {
            return Err(singular("singular weight evaluated on {a = 0}"));
        }
        let dv: Vec<Vec<Cpx>> = grads
            .iter()
            .map(|g| g.iter().map(|p| p.eval(zeta)).collect())
            .collect();
        let g00: Cpx = av.iter().zip(&az).map(|(x, y)| y * x.conj()).sum::<Cpx>() / big_a;
        let mut g = ExtForm::scalar(dim, g00);
        // ∂A/∂ζ̄_l = Σ_k a_k conj(∂a_k/∂ζ_l)
        let da: Vec<Cpx> = (0..dim)
            .map(|l| av.iter().zip(&dv).map(|(ak, dk)| ak * dk[l].conj()).sum())
            .collect();
        for j in 0..av.len() {
            let coeffs: Vec<Cpx> = (0..dim)
                .map(|l| dv[j][l].conj() / big_a - av[j].conj() * da[l] / (big_a * big_a))
                .collect();
            let h = hefer[j].eval(zeta, z)?;
            g += &ExtForm::bar_linear(&coeffs).wedge(&h)?;
        }
        Ok(g)
    });
    let base = WeightForm {
        field: base,
        support: Support::Unbounded,
        z_domain: Region::Everywhere,
        holomorphic_in_z: true,
        cutoff: None,
    };
    let mut acc = base.clone();
    for _ in 1..power {
        acc = weight_product(&acc, &base)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::exterior::Blade;
    use crate::fit::loglog_slope;

    fn c(re: f64, im: f64) -> Cpx {
        Cpx::new(re, im)
    }

    fn random_point(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<Cpx> {
        loop {
            let p: Vec<Cpx> = (0..dim)
                .map(|_| {
                    c(
                        rng.gen_range(-radius..radius),
                        rng.gen_range(-radius..radius),
                    )
                })
                .collect();
            if norm(&p) <= radius {
                return p;
            }
        }
    }

    #[test]
    fn bm_admissible_examples() {
        let s = bm_admissible(1).unwrap();
        let v = s.s.eval(&[c(1.0, 0.0)], &[c(0.0, 0.0)]).unwrap();
        assert_eq!(v.coeff(Blade::eta(0)), c(1.0, 0.0));
        let s2 = bm_admissible(2).unwrap();
        let zeta = [c(1.0, 0.0), c(0.0, 1.0)];
        let z = [c(0.0, 0.0); 2];
        let ds =
            s2.s.eval(&zeta, &z)
                .unwrap()
                .contract_eta(&zeta)
                .unwrap()
                .scalar_part();
        assert_abs_diff_eq!((ds - TWO_PI_I * 2.0).norm(), 0.0, epsilon = 1e-14);
        assert!(bm_admissible(4).is_err());
    }

    #[test]
    fn fitted_bounds_of_bm_are_one() {
        let s = bm_admissible(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pairs: Vec<_> = (0..20)
            .map(|_| {
                (
                    random_point(&mut rng, 2, 1.0),
                    random_point(&mut rng, 2, 1.0),
                )
            })
            .collect();
        let (c1, c2) = s.fitted_bounds(&pairs).unwrap();
        assert_abs_diff_eq!(c1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c2, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cauchy_kernel() {
        let b = bm_components(&bm_admissible(1).unwrap());
        let v = b.eval(&[c(2.0, 0.0)], &[c(0.0, 0.0)]).unwrap();
        let expected = c(1.0, 0.0) / (TWO_PI_I * 2.0);
        assert_abs_diff_eq!(
            (v.coeff(Blade::eta(0)) - expected).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert!(matches!(
            b.eval(&[c(0.5, 0.5)], &[c(0.5, 0.5)]),
            Err(Error::Singular(_))
        ));
    }

    #[test]
    fn bm_second_component_by_hand() {
        // at ζ = (1,0), z = 0: ∂|ζ|² = dη₁, ∂̄∂|ζ|² = dζ̄₁∧dη₁ + dζ̄₂∧dη₂
        let b = bm_components(&bm_admissible(2).unwrap());
        let comps = b
            .eval_components(&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0); 2])
            .unwrap();
        let b21 = &comps[1];
        let k = c(1.0, 0.0) / (TWO_PI_I * TWO_PI_I);
        // dη₁∧dζ̄₂∧dη₂ = −dη₁∧dη₂∧dζ̄₂
        let expected = ExtForm::monomial(2, Blade::from_masks(0b11, 0b10), -k);
        assert_abs_diff_eq!((b21 - &expected).max_abs(), 0.0, epsilon = 1e-16);
    }

    #[test]
    fn bm_homogeneity() {
        let b = bm_components(&bm_admissible(2).unwrap());
        let zeta = [c(0.3, -0.2), c(0.1, 0.5)];
        let z = [c(-0.1, 0.1), c(0.2, 0.0)];
        let lambda = 2.5;
        let scaled = |p: &[Cpx]| p.iter().map(|v| v * lambda).collect::<Vec<_>>();
        let base = b.eval_components(&zeta, &z).unwrap();
        let big = b.eval_components(&scaled(&zeta), &scaled(&z)).unwrap();
        for k in 1..=2 {
            let expected = base[k - 1].scale(c(lambda.powi(-(2 * k as i32 - 1)), 0.0));
            assert!((&big[k - 1] - &expected).max_abs() < 1e-14);
        }
    }

    #[test]
    fn bm_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in 1..=3 {
            let b = bm_components(&bm_admissible(dim).unwrap());
            for _ in 0..10 {
                let zeta = random_point(&mut rng, dim, 1.0);
                let z = random_point(&mut rng, dim, 1.0);
                let eta: Vec<Cpx> = zeta.iter().zip(&z).map(|(a, b)| a - b).collect();
                let comps = b.eval_components(&zeta, &z).unwrap();
                let d10 = comps[0].contract_eta(&eta).unwrap();
                assert!((d10.scalar_part() - 1.0).norm() < 1e-12);
                for (k, comp) in comps.iter().enumerate().skip(1) {
                    let lhs = comp.contract_eta(&eta).unwrap();
                    let rhs =
                        dbar_fd(&b.component(k).unwrap(), &zeta, &z, Side::Zeta, 1e-4).unwrap();
                    let scale = 1.0 + rhs.max_abs();
                    assert!((&lhs - &rhs).max_abs() / scale < 1e-5, "dim {dim} k {k}");
                }
            }
        }
    }

    #[test]
    fn kernel_growth_exponent() {
        let dim = 2;
        let b = bm_components(&bm_admissible(dim).unwrap());
        let z = [c(0.1, 0.0), c(0.0, -0.2)];
        let dir = [c(0.6, 0.0), c(0.0, 0.8)];
        let radii: Vec<f64> = (0..6).map(|j| 0.1 * 0.5f64.powi(j)).collect();
        for k in 1..=dim {
            let vals: Vec<f64> = radii
                .iter()
                .map(|&t| {
                    let zeta: Vec<Cpx> = z.iter().zip(&dir).map(|(a, d)| a + d * t).collect();
                    b.eval_components(&zeta, &z).unwrap()[k - 1].max_abs()
                })
                .collect();
            let slope = loglog_slope(&radii, &vals).unwrap();
            assert!(
                (slope + (2 * k - 1) as f64).abs() < 0.1,
                "k {k} slope {slope}"
            );
        }
    }

    #[test]
    fn ball_weight_basics() {
        let chi = BumpProfile::new(1.25, 1.75).unwrap();
        let g = ball_weight(chi, 2).unwrap();
        let p = [c(0.3, 0.1), c(-0.2, 0.4)];
        let v = g.eval(&p, &p).unwrap();
        assert_eq!(v, ExtForm::scalar(2, c(1.0, 0.0)));
        let far = [c(1.9, 0.0), c(0.0, 0.0)];
        assert!(g.eval(&far, &p).unwrap().is_zero());
        assert!(ball_weight(BumpProfile::new(0.5, 1.5).unwrap(), 2).is_err());
    }

    #[test]
    fn weight_contracts() {
        let chi = BumpProfile::new(1.25, 1.75).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in 1..=2 {
            let g = ball_weight(chi, dim).unwrap();
            let prod = weight_product(&g, &g).unwrap();
            for _ in 0..10 {
                let r = rng.gen_range(1.3..1.7);
                let mut zeta = random_point(&mut rng, dim, 1.0);
                let n = norm(&zeta);
                zeta.iter_mut().for_each(|v| *v *= r / n);
                let z = random_point(&mut rng, dim, 0.5);
                assert!(g.contract_residual(&zeta, &z, 1e-4).unwrap() < 1e-5);
                assert!(prod.contract_residual(&zeta, &z, 1e-4).unwrap() < 1e-5);
            }
        }
    }

    #[test]
    fn trivial_weight_is_unit() {
        let chi = BumpProfile::new(1.25, 1.75).unwrap();
        let g = ball_weight(chi, 2).unwrap();
        let p = weight_product(&g, &WeightForm::trivial(2)).unwrap();
        let zeta = [c(1.2, 0.3), c(0.1, -0.4)];
        let z = [c(0.2, 0.0), c(0.0, 0.1)];
        assert_eq!(p.eval(&zeta, &z).unwrap(), g.eval(&zeta, &z).unwrap());
    }

    #[test]
    fn hefer_examples() {
        let h = hefer_single(&Poly::var(1, 0).unwrap());
        let v = h.eval(&[c(0.4, 0.2)], &[c(0.0, 0.0)]).unwrap();
        assert_eq!(v.coeff(Blade::eta(0)), c(1.0, 0.0) / TWO_PI_I);
        let sq = hefer_single(&Poly::var(1, 0).unwrap().pow(2));
        let (zeta, z) = ([c(0.4, 0.2)], [c(-1.0, 0.3)]);
        let v = sq.eval(&zeta, &z).unwrap();
        assert!((v.coeff(Blade::eta(0)) - (zeta[0] + z[0]) / TWO_PI_I).norm() < 1e-15);
    }

    #[test]
    fn hefer_contract_exact() {
        let h = &Poly::var(2, 0).unwrap().pow(2) - &Poly::var(2, 1).unwrap().pow(3);
        let hf = hefer_single(&h);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let zeta = random_point(&mut rng, 2, 1.0);
            let z = random_point(&mut rng, 2, 1.0);
            let eta: Vec<Cpx> = zeta.iter().zip(&z).map(|(a, b)| a - b).collect();
            let d = hf
                .eval(&zeta, &z)
                .unwrap()
                .contract_eta(&eta)
                .unwrap()
                .scalar_part();
            assert!((d - (h.eval(&zeta) - h.eval(&z))).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_weight_examples() {
        let a = Poly::var(1, 0).unwrap();
        let g = singular_weight_ga(std::slice::from_ref(&a), &[hefer_single(&a)], 1).unwrap();
        let v = g.eval(&[c(1.0, 0.0)], &[c(0.0, 0.0)]).unwrap();
        assert_eq!(v.scalar_part(), c(0.0, 0.0));
        let same = g.eval(&[c(0.3, 0.4)], &[c(0.3, 0.4)]).unwrap();
        assert!((same.scalar_part() - 1.0).norm() < 1e-15);
        assert!(g.eval(&[c(0.0, 0.0)], &[c(0.5, 0.0)]).is_err());
        assert!(singular_weight_ga(std::slice::from_ref(&a), &[hefer_single(&a)], 8).is_err());
    }

    #[test]
    fn singular_weight_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a1 = Poly::var(2, 0).unwrap();
        let a2 = &Poly::var(2, 1).unwrap() * &Poly::var(2, 0).unwrap();
        let a = vec![a1.clone(), &a2 + &Poly::var(2, 1).unwrap()];
        let hf: Vec<_> = a.iter().map(hefer_single).collect();
        for power in 1..=3 {
            let g = singular_weight_ga(&a, &hf, power).unwrap();
            for _ in 0..5 {
                let zeta = random_point(&mut rng, 2, 1.0);
                let z = random_point(&mut rng, 2, 0.5);
                assert!(
                    g.contract_residual(&zeta, &z, 1e-4).unwrap() < 1e-5,
                    "power {power}"
                );
            }
        }
    }
}
