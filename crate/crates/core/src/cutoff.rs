//! Radial cutoff profiles.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::Cpx;

/// `χ(r)` equal to 1 for `r ≤ inner`, 0 for `r ≥ outer`, and a degree-7
/// smoothstep (C³) in between.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BumpProfile {
    pub inner: f64,
    pub outer: f64,
}

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t.powi(4) * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)))
}

fn smoothstep_deriv(t: f64) -> f64 {
    if !(0.0..=1.0).contains(&t) {
        return 0.0;
    }
    140.0 * (t * (1.0 - t)).powi(3)
}

impl BumpProfile {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner && outer.is_finite()) {
            return Err(invalid(format!(
                "bump radii must satisfy 0 < inner < outer, got ({inner}, {outer})"
            )));
        }
        Ok(BumpProfile { inner, outer })
    }

    pub fn value(&self, r: f64) -> f64 {
        1.0 - smoothstep((r - self.inner) / (self.outer - self.inner))
    }

    /// `dχ/dr`.
    pub fn deriv(&self, r: f64) -> f64 {
        let w = self.outer - self.inner;
        -smoothstep_deriv((r - self.inner) / w) / w
    }

    /// True where `χ` is not locally constant.
    pub fn in_transition(&self, r: f64) -> bool {
        r > self.inner && r < self.outer
    }

    /// `χ(|p - c|)` on `ℂ^N`.
    pub fn at(&self, p: &[Cpx], center: &[Cpx]) -> f64 {
        self.value(dist(p, center))
    }

    /// `∂χ(|p - c|)/∂p̄_j = χ'(r) (p_j - c_j) / (2r)` for every `j`.
    pub fn dbar_at(&self, p: &[Cpx], center: &[Cpx]) -> Vec<Cpx> {
        let r = dist(p, center);
        let d = self.deriv(r);
        if d == 0.0 {
            return vec![Cpx::default(); p.len()];
        }
        p.iter()
            .zip(center)
            .map(|(a, b)| (a - b) * (d / (2.0 * r)))
            .collect()
    }
}

/// Euclidean distance on `ℂ^N`.
pub fn dist(p: &[Cpx], q: &[Cpx]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `|p|` on `ℂ^N`.
pub fn norm(p: &[Cpx]) -> f64 {
    p.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn plateau_and_support() {
        let b = BumpProfile::new(0.5, 1.0).unwrap();
        assert_eq!(b.value(0.2), 1.0);
        assert_eq!(b.value(0.5), 1.0);
        assert_eq!(b.value(1.0), 0.0);
        assert_eq!(b.value(3.0), 0.0);
        assert_abs_diff_eq!(b.value(0.75), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let b = BumpProfile::new(0.3, 1.2).unwrap();
        for r in [0.35, 0.6, 0.9, 1.15] {
            let h = 1e-6;
            let fd = (b.value(r + h) - b.value(r - h)) / (2.0 * h);
            assert_abs_diff_eq!(fd, b.deriv(r), epsilon = 1e-7);
        }
    }

    #[test]
    fn rejects_bad_radii() {
        assert!(BumpProfile::new(1.0, 0.5).is_err());
        assert!(BumpProfile::new(0.0, 0.5).is_err());
    }

    #[test]
    fn dbar_radial() {
        let b = BumpProfile::new(0.2, 1.0).unwrap();
        let p = [Cpx::new(0.3, 0.4)];
        let c = [Cpx::new(0.0, 0.0)];
        let h = 1e-6;
        let fx = (b.at(&[p[0] + h], &c) - b.at(&[p[0] - h], &c)) / (2.0 * h);
        let fy = (b.at(&[p[0] + Cpx::new(0.0, h)], &c) - b.at(&[p[0] - Cpx::new(0.0, h)], &c))
            / (2.0 * h);
        let expected = 0.5 * Cpx::new(fx, fy);
        assert_abs_diff_eq!(
            (b.dbar_at(&p, &c)[0] - expected).norm(),
            0.0,
            epsilon = 1e-8
        );
    }
}
