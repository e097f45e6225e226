//! Complex polynomials in up to three variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{invalid, Result};
use crate::exterior::MAX_DIM;
use crate::Cpx;

type Exp = [u32; MAX_DIM];

/// `Σ c_α ζ^α` with exponent vectors of length `nvars`.
#[derive(Clone, PartialEq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exp, Cpx>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = (0..self.nvars)
                    .filter(|&j| e[j] > 0)
                    .map(|j| format!("ζ{}^{}", j + 1, e[j]))
                    .collect();
                format!("({}{:+}i){}", c.re, c.im, mono.join(""))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn ipow(x: Cpx, k: u32) -> Cpx {
    let mut acc = Cpx::new(1.0, 0.0);
    for _ in 0..k {
        acc *= x;
    }
    acc
}

impl Poly {
    pub fn zero(nvars: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&nvars) {
            return Err(invalid(format!("polynomials need 1..={MAX_DIM} variables")));
        }
        Ok(Poly {
            nvars,
            terms: BTreeMap::new(),
        })
    }

    /// Builds `Σ c·ζ^α` from `(α, c)` pairs; `α.len()` must equal `nvars`.
    pub fn from_terms(nvars: usize, terms: &[(&[u32], Cpx)]) -> Result<Self> {
        let mut p = Poly::zero(nvars)?;
        for (alpha, c) in terms {
            if alpha.len() != nvars {
                return Err(invalid(
                    "exponent vector length differs from variable count",
                ));
            }
            let mut e = [0; MAX_DIM];
            e[..nvars].copy_from_slice(alpha);
            p.push(e, *c);
        }
        Ok(p)
    }

    pub fn constant(nvars: usize, c: Cpx) -> Result<Self> {
        let mut p = Poly::zero(nvars)?;
        p.push([0; MAX_DIM], c);
        Ok(p)
    }

    /// The coordinate `ζ_j`.
    pub fn var(nvars: usize, j: usize) -> Result<Self> {
        if j >= nvars {
            return Err(invalid("variable index out of range"));
        }
        let mut p = Poly::zero(nvars)?;
        let mut e = [0; MAX_DIM];
        e[j] = 1;
        p.push(e, Cpx::new(1.0, 0.0));
        Ok(p)
    }

    fn push(&mut self, e: Exp, c: Cpx) {
        let entry = self.terms.entry(e).or_default();
        *entry += c;
        if *entry == Cpx::new(0.0, 0.0) {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponents, coefficient)` pairs in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Cpx)> + '_ {
        self.terms.iter().map(|(e, c)| (&e[..self.nvars], *c))
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, p: &[Cpx]) -> Cpx {
        debug_assert_eq!(p.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| (0..self.nvars).fold(*c, |acc, j| acc * ipow(p[j], e[j])))
            .sum()
    }

    /// `∂/∂ζ_j`.
    pub fn partial(&self, j: usize) -> Poly {
        let mut out = Poly {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            if e[j] > 0 {
                let mut d = *e;
                d[j] -= 1;
                out.push(d, c * e[j] as f64);
            }
        }
        out
    }

    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.nvars).map(|j| self.partial(j)).collect()
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, Cpx::new(1.0, 0.0)).expect("valid nvars");
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Divided differences `H_j(ζ, z)` with `h(ζ) − h(z) = Σ_j H_j (ζ_j − z_j)`,
    /// splitting each monomial coordinate by coordinate in the order `1..N`:
    /// `H_j` uses `z` in the slots before `j` and `ζ` in the slots after.
    pub fn divided_differences(&self, zeta: &[Cpx], z: &[Cpx]) -> Vec<Cpx> {
        let n = self.nvars;
        let mut out = vec![Cpx::default(); n];
        for (e, c) in &self.terms {
            for j in 0..n {
                if e[j] == 0 {
                    continue;
                }
                let mut pref = *c;
                for k in 0..j {
                    pref *= ipow(z[k], e[k]);
                }
                for k in j + 1..n {
                    pref *= ipow(zeta[k], e[k]);
                }
                let a = e[j];
                let q: Cpx = (0..a)
                    .map(|k| ipow(zeta[j], k) * ipow(z[j], a - 1 - k))
                    .sum();
                out[j] += pref * q;
            }
        }
        out
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(
            self.nvars, rhs.nvars,
            "adding polynomials in different variables"
        );
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.push(*e, *c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(
            self.nvars, rhs.nvars,
            "multiplying polynomials in different variables"
        );
        let mut out = Poly {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0; MAX_DIM];
                for j in 0..MAX_DIM {
                    e[j] = ea[j] + eb[j];
                }
                out.push(e, ca * cb);
            }
        }
        out
    }
}
