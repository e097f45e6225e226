//! Sparse complex exterior algebra over the generators `dη₁..dη_N` and
//! `dζ̄₁..dζ̄_N`, with the interior multiplication `δ_η` and a
//! finite-difference ∂̄.
//!
//! Generators are indexed from zero in code (`dη₁` is index 0). A blade is a
//! bitmask whose low three bits hold the `dη` factors and whose next three
//! bits hold the `dζ̄` factors; the canonical order of a wedge monomial is
//! all `dη` ascending followed by all `dζ̄` ascending, which is exactly the
//! bit order. Signs are computed by counting transpositions.
//!
//! Only `ζ`-differentials appear: forms are evaluated on the slice `z = const`,
//! where `dη_j` restricts to `dζ_j` and `∂̄` acts on `ζ`. Dependence on `z̄`
//! is handled by differentiating final scalar outputs numerically.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use crate::error::{invalid, Error, Result};
use crate::{Cpx, TWO_PI_I};

/// Largest ambient dimension handled by the algebra.
pub const MAX_DIM: usize = 3;

const BAR_SHIFT: u32 = MAX_DIM as u32;
const ETA_BITS: u8 = (1 << MAX_DIM) - 1;

/// A wedge monomial `dη_I ∧ dζ̄_J` in canonical order.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade(u8);

impl Blade {
    /// The empty blade (scalar part).
    pub const ONE: Blade = Blade(0);

    pub fn from_masks(eta_mask: u8, bar_mask: u8) -> Blade {
        debug_assert!(eta_mask <= ETA_BITS && bar_mask <= ETA_BITS);
        Blade(eta_mask | (bar_mask << BAR_SHIFT))
    }

    pub fn eta(j: usize) -> Blade {
        Blade(1 << j)
    }

    pub fn bar(j: usize) -> Blade {
        Blade(1 << (j as u32 + BAR_SHIFT))
    }

    /// `dη_0 ∧ … ∧ dη_{n-1} ∧ dζ̄_0 ∧ … ∧ dζ̄_{n-1}`.
    pub fn top(dim: usize) -> Blade {
        let m = ((1u16 << dim) - 1) as u8;
        Blade::from_masks(m, m)
    }

    pub fn eta_mask(self) -> u8 {
        self.0 & ETA_BITS
    }

    pub fn bar_mask(self) -> u8 {
        self.0 >> BAR_SHIFT
    }

    pub fn eta_degree(self) -> usize {
        self.eta_mask().count_ones() as usize
    }

    pub fn bar_degree(self) -> usize {
        self.bar_mask().count_ones() as usize
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    fn fits(self, dim: usize) -> bool {
        let m = ((1u16 << dim) - 1) as u8;
        self.eta_mask() & !m == 0 && self.bar_mask() & !m == 0
    }

    /// `self ∧ other` as `(sign, blade)`, or `None` when a generator repeats.
    pub fn wedge(self, other: Blade) -> Option<(f64, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let bit = rest.trailing_zeros();
            inversions += (self.0 >> (bit + 1)).count_ones();
            rest &= rest - 1;
        }
        let sign = if inversions.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        Some((sign, Blade(self.0 | other.0)))
    }

    /// Number of generators that precede position `bit` in this blade.
    fn rank_below(self, bit: u32) -> u32 {
        (self.0 & ((1u8 << bit) - 1)).count_ones()
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for j in 0..MAX_DIM {
            if self.eta_mask() & (1 << j) != 0 {
                parts.push(format!("dη{}", j + 1));
            }
        }
        for j in 0..MAX_DIM {
            if self.bar_mask() & (1 << j) != 0 {
                parts.push(format!("dζ̄{}", j + 1));
            }
        }
        write!(f, "{}", parts.join("∧"))
    }
}

type Terms = SmallVec<[(Blade, Cpx); 8]>;

/// A form with complex coefficients, stored as a sorted sparse map
/// blade → coefficient with no zero entries.
#[derive(Clone, PartialEq)]
pub struct ExtForm {
    dim: usize,
    terms: Terms,
}

impl fmt::Debug for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("({}{:+}i)·{:?}", c.re, c.im, b))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_dim(dim: usize) {
    assert!(
        (1..=MAX_DIM).contains(&dim),
        "form dimension {dim} outside 1..={MAX_DIM}"
    );
}

impl ExtForm {
    pub fn zero(dim: usize) -> Self {
        check_dim(dim);
        ExtForm {
            dim,
            terms: Terms::new(),
        }
    }

    pub fn scalar(dim: usize, c: Cpx) -> Self {
        Self::monomial(dim, Blade::ONE, c)
    }

    pub fn monomial(dim: usize, blade: Blade, c: Cpx) -> Self {
        check_dim(dim);
        assert!(blade.fits(dim), "blade {blade:?} outside dimension {dim}");
        let mut terms = Terms::new();
        if c != Cpx::new(0.0, 0.0) {
            terms.push((blade, c));
        }
        ExtForm { dim, terms }
    }

    /// The generator `dη_j`.
    pub fn eta(dim: usize, j: usize) -> Self {
        Self::monomial(dim, Blade::eta(j), Cpx::new(1.0, 0.0))
    }

    /// The generator `dζ̄_j`.
    pub fn bar(dim: usize, j: usize) -> Self {
        Self::monomial(dim, Blade::bar(j), Cpx::new(1.0, 0.0))
    }

    /// `Σ c_j dη_j`.
    pub fn eta_linear(coeffs: &[Cpx]) -> Self {
        Self::from_terms(
            coeffs.len(),
            coeffs.iter().enumerate().map(|(j, &c)| (Blade::eta(j), c)),
        )
    }

    /// `Σ c_j dζ̄_j`.
    pub fn bar_linear(coeffs: &[Cpx]) -> Self {
        Self::from_terms(
            coeffs.len(),
            coeffs.iter().enumerate().map(|(j, &c)| (Blade::bar(j), c)),
        )
    }

    /// Builds a form from unsorted terms; repeated blades are summed.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Blade, Cpx)>) -> Self {
        check_dim(dim);
        let mut v: Terms = terms.into_iter().collect();
        for (b, _) in &v {
            assert!(b.fits(dim), "blade {b:?} outside dimension {dim}");
        }
        v.sort_by_key(|(b, _)| *b);
        let mut out = Terms::new();
        for (b, c) in v {
            match out.last_mut() {
                Some((lb, lc)) if *lb == b => *lc += c,
                _ => out.push((b, c)),
            }
        }
        out.retain(|(_, c)| *c != Cpx::new(0.0, 0.0));
        ExtForm { dim, terms: out }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, Cpx)> + '_ {
        self.terms.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, blade: Blade) -> Cpx {
        self.terms
            .binary_search_by_key(&blade, |(b, _)| *b)
            .map(|i| self.terms[i].1)
            .unwrap_or_default()
    }

    pub fn scalar_part(&self) -> Cpx {
        self.coeff(Blade::ONE)
    }

    /// Coefficient of `dη_0..dη_{N-1} ∧ dζ̄_0..dζ̄_{N-1}`.
    pub fn top_coefficient(&self) -> Cpx {
        self.coeff(Blade::top(self.dim))
    }

    /// Largest coefficient modulus (0 for the zero form).
    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// The bihomogeneous part with `dη`-degree `p` and `dζ̄`-degree `q`.
    pub fn part(&self, p: usize, q: usize) -> Self {
        self.filter(|b| b.eta_degree() == p && b.bar_degree() == q)
    }

    /// The part with `dη`-degree `p`, all `dζ̄`-degrees.
    pub fn eta_part(&self, p: usize) -> Self {
        self.filter(|b| b.eta_degree() == p)
    }

    pub fn filter(&self, keep: impl Fn(Blade) -> bool) -> Self {
        ExtForm {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|(b, _)| keep(*b))
                .collect(),
        }
    }

    /// `Some((p, q))` when every term has the same bidegree.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let mut it = self
            .terms
            .iter()
            .map(|(b, _)| (b.eta_degree(), b.bar_degree()));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: Cpx) -> Self {
        if c == Cpx::new(0.0, 0.0) {
            return ExtForm::zero(self.dim);
        }
        ExtForm {
            dim: self.dim,
            terms: self.terms.iter().map(|&(b, v)| (b, v * c)).collect(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(Cpx) -> Cpx) -> Self {
        Self::from_terms(self.dim, self.terms.iter().map(|&(b, v)| (b, f(v))))
    }

    fn same_dim(&self, other: &ExtForm) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    /// Exterior product `self ∧ other`.
    pub fn wedge(&self, other: &ExtForm) -> Result<ExtForm> {
        self.same_dim(other)?;
        let mut out: Terms = Terms::new();
        for &(ba, ca) in &self.terms {
            for &(bb, cb) in &other.terms {
                if let Some((sign, b)) = ba.wedge(bb) {
                    out.push((b, ca * cb * sign));
                }
            }
        }
        Ok(ExtForm::from_terms(self.dim, out))
    }

    /// `self ∧ self ∧ … ` (`k` factors); `k = 0` gives 1.
    pub fn wedge_pow(&self, k: usize) -> Result<ExtForm> {
        let mut acc = ExtForm::scalar(self.dim, Cpx::new(1.0, 0.0));
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Interior product with the vector field `Σ v_j ∂/∂η_j`, acting as an
    /// antiderivation from the left; `dζ̄` factors are untouched.
    pub fn interior(&self, v: &[Cpx]) -> Result<ExtForm> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut out = Terms::new();
        for &(b, c) in &self.terms {
            let mut rest = b.eta_mask();
            while rest != 0 {
                let j = rest.trailing_zeros();
                let sign = if b.rank_below(j).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                out.push((Blade(b.0 & !(1 << j)), c * v[j as usize] * sign));
                rest &= rest - 1;
            }
        }
        Ok(ExtForm::from_terms(self.dim, out))
    }

    /// `δ_η` with `η = 2πi Σ η_j ∂/∂η_j`.
    pub fn contract_eta(&self, eta: &[Cpx]) -> Result<ExtForm> {
        let v: SmallVec<[Cpx; MAX_DIM]> = eta.iter().map(|&e| e * TWO_PI_I).collect();
        self.interior(&v)
    }

    /// Replaces each `dζ̄_j` by `Σ_k m[j][k] dζ̄_k` (used for pullbacks).
    pub fn substitute_bar(&self, target_dim: usize, m: &[Vec<Cpx>]) -> Result<ExtForm> {
        if m.len() != self.dim {
            return Err(invalid("substitution matrix has wrong row count"));
        }
        let images: Vec<ExtForm> = m.iter().map(|row| ExtForm::bar_linear(row)).collect();
        let mut acc = ExtForm::zero(target_dim);
        for &(b, c) in &self.terms {
            let mut term = ExtForm::scalar(target_dim, c);
            if b.eta_mask() != 0 {
                return Err(invalid("substitute_bar expects a form without dη factors"));
            }
            let mut rest = b.bar_mask();
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                term = term.wedge(&images[j])?;
                rest &= rest - 1;
            }
            acc = acc + term;
        }
        Ok(acc)
    }
}

impl Add for ExtForm {
    type Output = ExtForm;
    fn add(self, rhs: ExtForm) -> ExtForm {
        &self + &rhs
    }
}

impl Add<&ExtForm> for &ExtForm {
    type Output = ExtForm;
    fn add(self, rhs: &ExtForm) -> ExtForm {
        assert_eq!(self.dim, rhs.dim, "adding forms of different dimension");
        ExtForm::from_terms(self.dim, self.terms.iter().chain(rhs.terms.iter()).copied())
    }
}

impl AddAssign<&ExtForm> for ExtForm {
    fn add_assign(&mut self, rhs: &ExtForm) {
        *self = &*self + rhs;
    }
}

impl Sub for ExtForm {
    type Output = ExtForm;
    fn sub(self, rhs: ExtForm) -> ExtForm {
        &self - &rhs
    }
}

impl Sub<&ExtForm> for &ExtForm {
    type Output = ExtForm;
    fn sub(self, rhs: &ExtForm) -> ExtForm {
        self + &(-rhs)
    }
}

impl Neg for &ExtForm {
    type Output = ExtForm;
    fn neg(self) -> ExtForm {
        ExtForm {
            dim: self.dim,
            terms: self.terms.iter().map(|&(b, c)| (b, -c)).collect(),
        }
    }
}

impl Neg for ExtForm {
    type Output = ExtForm;
    fn neg(self) -> ExtForm {
        -&self
    }
}

impl Mul<Cpx> for &ExtForm {
    type Output = ExtForm;
    fn mul(self, c: Cpx) -> ExtForm {
        self.scale(c)
    }
}

impl Mul<Cpx> for ExtForm {
    type Output = ExtForm;
    fn mul(self, c: Cpx) -> ExtForm {
        self.scale(c)
    }
}

/// Exterior product; rejects operands of different dimension.
pub fn wedge(a: &ExtForm, b: &ExtForm) -> Result<ExtForm> {
    a.wedge(b)
}

/// Interior multiplication `δ_η` (the `2πi` is included).
pub fn contract_eta(eta: &[Cpx], a: &ExtForm) -> Result<ExtForm> {
    a.contract_eta(eta)
}

type FieldFn = dyn Fn(&[Cpx], &[Cpx]) -> Result<ExtForm> + Send + Sync;

/// A form depending on `(ζ, z) ∈ ℂ^N × ℂ^N`.
#[derive(Clone)]
pub struct FormField {
    dim: usize,
    f: Arc<FieldFn>,
}

impl fmt::Debug for FormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormField(dim = {})", self.dim)
    }
}

impl FormField {
    pub fn new(
        dim: usize,
        f: impl Fn(&[Cpx], &[Cpx]) -> Result<ExtForm> + Send + Sync + 'static,
    ) -> Self {
        check_dim(dim);
        FormField {
            dim,
            f: Arc::new(f),
        }
    }

    pub fn constant(form: ExtForm) -> Self {
        let dim = form.dim();
        FormField::new(dim, move |_, _| Ok(form.clone()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, zeta: &[Cpx], z: &[Cpx]) -> Result<ExtForm> {
        for p in [zeta, z] {
            if p.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: p.len(),
                });
            }
        }
        (self.f)(zeta, z)
    }

    /// Pointwise wedge product of two fields.
    pub fn wedge(&self, other: &FormField) -> Result<FormField> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let (a, b) = (self.clone(), other.clone());
        Ok(FormField::new(self.dim, move |zeta, z| {
            a.eval(zeta, z)?.wedge(&b.eval(zeta, z)?)
        }))
    }
}

/// Which variable group ∂̄ differentiates.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Side {
    Zeta,
    Z,
}

/// `∂f/∂w̄_j` for every coordinate by central differences, where
/// `∂/∂w̄ = (∂/∂x + i ∂/∂y)/2`.
pub fn dbar_scalar(f: impl Fn(&[Cpx]) -> Result<Cpx>, at: &[Cpx], step: f64) -> Result<Vec<Cpx>> {
    if step.is_nan() || step <= 0.0 {
        return Err(invalid("finite-difference step must be positive"));
    }
    let mut p = at.to_vec();
    let mut out = Vec::with_capacity(at.len());
    for j in 0..at.len() {
        let mut partial = [Cpx::default(); 2];
        for (k, dir) in [Cpx::new(step, 0.0), Cpx::new(0.0, step)]
            .into_iter()
            .enumerate()
        {
            p[j] = at[j] + dir;
            let fp = f(&p)?;
            p[j] = at[j] - dir;
            let fm = f(&p)?;
            p[j] = at[j];
            partial[k] = (fp - fm) / (2.0 * step);
        }
        out.push(0.5 * (partial[0] + Cpx::i() * partial[1]));
    }
    Ok(out)
}

/// Central-difference ∂̄ of a form field in the chosen variable group.
///
/// Returns `Σ_j dw̄_j ∧ ∂F/∂w̄_j`. For `Side::Z` the `dζ̄_j` generators of
/// the result stand for `dz̄_j`.
pub fn dbar_fd(f: &FormField, zeta: &[Cpx], z: &[Cpx], side: Side, step: f64) -> Result<ExtForm> {
    if step.is_nan() || step <= 0.0 {
        return Err(invalid("finite-difference step must be positive"));
    }
    let dim = f.dim();
    let base = match side {
        Side::Zeta => zeta,
        Side::Z => z,
    };
    let mut p = base.to_vec();
    let eval = |p: &[Cpx]| match side {
        Side::Zeta => f.eval(p, z),
        Side::Z => f.eval(zeta, p),
    };
    let mut acc = ExtForm::zero(dim);
    for j in 0..dim {
        let mut partial = Vec::with_capacity(2);
        for dir in [Cpx::new(step, 0.0), Cpx::new(0.0, step)] {
            p[j] = base[j] + dir;
            let fp = eval(&p)?;
            p[j] = base[j] - dir;
            let fm = eval(&p)?;
            p[j] = base[j];
            partial.push((&fp - &fm).scale(Cpx::new(0.5 / step, 0.0)));
        }
        let d = (&partial[0] + &partial[1].scale(Cpx::i())).scale(Cpx::new(0.5, 0.0));
        acc += &ExtForm::bar(dim, j).wedge(&d)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Cpx {
        Cpx::new(re, im)
    }

    #[test]
    fn repeated_generator_vanishes() {
        let e = ExtForm::eta(2, 0);
        assert!(e.wedge(&e).unwrap().is_zero());
    }

    #[test]
    fn eta_bar_anticommute() {
        let a = ExtForm::eta(2, 0).wedge(&ExtForm::bar(2, 0)).unwrap();
        let b = ExtForm::bar(2, 0).wedge(&ExtForm::eta(2, 0)).unwrap();
        let blade = Blade::from_masks(0b1, 0b1);
        assert_eq!(a.coeff(blade), c(1.0, 0.0));
        assert_eq!(b.coeff(blade), c(-1.0, 0.0));
    }

    #[test]
    fn two_term_expansion() {
        // (2 dη1 + dζ̄2) ∧ dη2 = 2 dη1∧dη2 − dη2∧dζ̄2
        let a = &ExtForm::eta(2, 0).scale(c(2.0, 0.0)) + &ExtForm::bar(2, 1);
        let w = a.wedge(&ExtForm::eta(2, 1)).unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(w.coeff(Blade::from_masks(0b11, 0)), c(2.0, 0.0));
        assert_eq!(w.coeff(Blade::from_masks(0b10, 0b10)), c(-1.0, 0.0));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let err = ExtForm::eta(1, 0).wedge(&ExtForm::eta(2, 0)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn contract_generator_and_scalar() {
        let eta = [c(0.3, -1.0), c(2.0, 0.5)];
        let r = ExtForm::eta(2, 1).contract_eta(&eta).unwrap();
        assert_eq!(r.scalar_part(), TWO_PI_I * eta[1]);
        assert!(ExtForm::scalar(2, c(4.0, 1.0))
            .contract_eta(&eta)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn contract_two_form() {
        let eta = [c(1.5, 0.0), c(0.0, -2.0)];
        let f = ExtForm::eta(2, 0).wedge(&ExtForm::eta(2, 1)).unwrap();
        let r = f.contract_eta(&eta).unwrap();
        let expected = &ExtForm::eta(2, 1).scale(TWO_PI_I * eta[0])
            - &ExtForm::eta(2, 0).scale(TWO_PI_I * eta[1]);
        assert_abs_diff_eq!((&r - &expected).max_abs(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn dbar_of_conjugate_coordinate() {
        let f = FormField::new(1, |zeta, _| Ok(ExtForm::scalar(1, zeta[0].conj())));
        let d = dbar_fd(&f, &[c(0.3, 0.7)], &[c(0.0, 0.0)], Side::Zeta, 1e-4).unwrap();
        assert_abs_diff_eq!(
            (d.coeff(Blade::bar(0)) - c(1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn dbar_of_holomorphic_is_small() {
        let f = FormField::new(1, |zeta, _| Ok(ExtForm::scalar(1, zeta[0] * zeta[0])));
        let d = dbar_fd(&f, &[c(-0.4, 1.1)], &[c(0.0, 0.0)], Side::Zeta, 1e-4).unwrap();
        assert!(d.max_abs() < 1e-8);
    }

    #[test]
    fn dbar_of_modulus_squared() {
        // ∂|ζ|²/∂ζ̄ = ζ
        let f = FormField::new(1, |zeta, _| {
            Ok(ExtForm::scalar(1, c(zeta[0].norm_sqr(), 0.0)))
        });
        let d = dbar_fd(&f, &[c(1.0, 1.0)], &[c(0.0, 0.0)], Side::Zeta, 1e-4).unwrap();
        assert_abs_diff_eq!(
            (d.coeff(Blade::bar(0)) - c(1.0, 1.0)).norm(),
            0.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn dbar_rejects_nonpositive_step() {
        let f = FormField::constant(ExtForm::scalar(1, c(1.0, 0.0)));
        assert!(dbar_fd(&f, &[c(0.0, 0.0)], &[c(0.0, 0.0)], Side::Zeta, 0.0).is_err());
    }

    #[test]
    fn dbar_is_second_order() {
        // ∂̄(ζ³ ζ̄² + ζ̄⁴) = 2 ζ³ ζ̄ + 4 ζ̄³
        let f = FormField::new(1, |zeta, _| {
            let w = zeta[0];
            Ok(ExtForm::scalar(
                1,
                w.powi(3) * w.conj().powi(2) + w.conj().powi(4),
            ))
        });
        let at = [c(0.7, -0.4)];
        let w = at[0];
        let exact = 2.0 * w.powi(3) * w.conj() + 4.0 * w.conj().powi(3);
        let err = |h: f64| {
            let d = dbar_fd(&f, &at, &[c(0.0, 0.0)], Side::Zeta, h).unwrap();
            (d.coeff(Blade::bar(0)) - exact).norm()
        };
        for h in [0.04, 0.02, 0.01] {
            assert!(
                err(h) / err(h / 2.0) >= 3.5,
                "order check failed at step {h}"
            );
        }
    }

    fn blade_strategy(dim: usize) -> impl Strategy<Value = Blade> {
        let m = (1u8 << dim) - 1;
        (0..=m, 0..=m).prop_map(|(a, b)| Blade::from_masks(a, b))
    }

    fn form_strategy(dim: usize) -> impl Strategy<Value = ExtForm> {
        prop::collection::vec((blade_strategy(dim), -3i32..=3, -3i32..=3), 0..5).prop_map(
            move |v| {
                ExtForm::from_terms(
                    dim,
                    v.into_iter()
                        .map(|(b, re, im)| (b, c(re as f64, im as f64))),
                )
            },
        )
    }

    fn homogeneous(dim: usize) -> impl Strategy<Value = (ExtForm, usize)> {
        (form_strategy(dim), 0..=2 * dim).prop_map(|(f, k)| (f.filter(|b| b.degree() == k), k))
    }

    proptest! {
        #[test]
        fn graded_anticommutativity((a, p) in homogeneous(2), (b, q) in homogeneous(2)) {
            let ab = a.wedge(&b).unwrap();
            let ba = b.wedge(&a).unwrap();
            let sign = if (p * q).is_multiple_of(2) { 1.0 } else { -1.0 };
            prop_assert_eq!(ab, ba.scale(c(sign, 0.0)));
        }

        #[test]
        fn wedge_is_associative(a in form_strategy(3), b in form_strategy(3), d in form_strategy(3)) {
            let l = a.wedge(&b).unwrap().wedge(&d).unwrap();
            let r = a.wedge(&b.wedge(&d).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn contraction_is_antiderivation((a, p) in homogeneous(2), b in form_strategy(2),
                                         e0 in -3i32..3, e1 in -3i32..3) {
            // integer η keeps every product exact up to the common 2πi factor
            let eta = [c(e0 as f64, 0.0), c(0.0, e1 as f64)];
            let lhs = a.wedge(&b).unwrap().contract_eta(&eta).unwrap();
            let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
            let rhs = &a.contract_eta(&eta).unwrap().wedge(&b).unwrap()
                + &a.wedge(&b.contract_eta(&eta).unwrap()).unwrap().scale(c(sign, 0.0));
            prop_assert!((&lhs - &rhs).max_abs() <= 1e-12 * (1.0 + lhs.max_abs()));
        }

        #[test]
        fn contraction_squares_to_zero(a in form_strategy(3), e in prop::array::uniform3(-4i32..4)) {
            let eta: Vec<Cpx> = e.iter().map(|&x| c(x as f64, 0.0)).collect();
            let twice = a.contract_eta(&eta).unwrap().contract_eta(&eta).unwrap();
            prop_assert!(twice.max_abs() <= 1e-12 * (1.0 + a.max_abs()));
        }
    }
}
