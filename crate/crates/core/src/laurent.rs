//! Exact Laurent polynomials in one variable and the numerical semigroup
//! `⟨r, s⟩` of a monomial curve.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::Cpx;

/// `Σ c_k τ^k` with finitely many nonzero coefficients.
#[derive(Clone, Default, PartialEq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Cpx>,
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                let coef = if c.im == 0.0 {
                    format!("{}", c.re)
                } else {
                    format!("({}{:+}i)", c.re, c.im)
                };
                match k {
                    0 => coef,
                    _ => format!("{coef}*tau^{k}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn monomial(k: i64, c: Cpx) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(k, c);
        p
    }

    pub fn constant(c: Cpx) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Cpx)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, k: i64, c: Cpx) {
        let e = self.coeffs.entry(k).or_default();
        *e += c;
        if *e == Cpx::new(0.0, 0.0) {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i64) -> Cpx {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Cpx)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Coefficient of `τ^{-1}`, i.e. `(1/2πi)∮ p dτ`.
    pub fn residue(&self) -> Cpx {
        self.coeff(-1)
    }

    pub fn derivative(&self) -> Self {
        LaurentPoly::from_terms(
            self.coeffs
                .iter()
                .filter(|(k, _)| **k != 0)
                .map(|(k, c)| (k - 1, c * *k as f64)),
        )
    }

    /// Multiplies by `τ^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, *c)).collect(),
        }
    }

    pub fn scale(&self, c: Cpx) -> Self {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(k, v)| (*k, v * c)))
    }

    pub fn eval(&self, tau: Cpx) -> Cpx {
        self.coeffs
            .iter()
            .map(|(k, c)| c * tau.powi(*k as i32))
            .sum()
    }

    /// `dp/dτ` evaluated at `τ`.
    pub fn eval_derivative(&self, tau: Cpx) -> Cpx {
        self.derivative().eval(tau)
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(Cpx::new(-1.0, 0.0))
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, ca) in self.terms() {
            for (b, cb) in rhs.terms() {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

/// Parses expressions such as `tau`, `tau^2 - 3*tau^-1`, `(1+2i)*tau^3`,
/// `2.5i`. Terms are separated by `+`/`-`; a term is an optional coefficient
/// (real, imaginary with suffix `i`, or a parenthesized `a+bi`) optionally
/// followed by `*tau^k`, `tau^k` or `tau`.
impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(invalid("empty Laurent polynomial"));
        }
        let mut out = LaurentPoly::zero();
        let bytes = src.as_bytes();
        let mut start = 0;
        let mut depth = 0;
        let mut pieces = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            match b {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] != b'^' => {
                    pieces.push(&src[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        pieces.push(&src[start..]);
        for piece in pieces {
            let (k, c) = parse_term(piece)?;
            out.add_term(k, c);
        }
        Ok(out)
    }
}

fn parse_term(term: &str) -> Result<(i64, Cpx)> {
    let bad = || invalid(format!("cannot parse Laurent term `{term}`"));
    let (sign, body) = match term.as_bytes().first() {
        Some(b'-') => (-1.0, &term[1..]),
        Some(b'+') => (1.0, &term[1..]),
        _ => (1.0, term),
    };
    let (coef_part, var_part) = match body.find("tau") {
        Some(pos) => {
            let coef = body[..pos].trim_end_matches('*');
            (coef, Some(&body[pos + 3..]))
        }
        None => (body, None),
    };
    let coef = if coef_part.is_empty() {
        Cpx::new(1.0, 0.0)
    } else {
        parse_coef(coef_part).ok_or_else(bad)?
    };
    let k = match var_part {
        None => 0,
        Some("") => 1,
        Some(rest) => rest
            .strip_prefix('^')
            .and_then(|e| e.trim_matches(|c| c == '(' || c == ')').parse::<i64>().ok())
            .ok_or_else(bad)?,
    };
    Ok((k, coef * sign))
}

fn parse_coef(s: &str) -> Option<Cpx> {
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let split = inner
            .char_indices()
            .skip(1)
            .filter(|(i, c)| (*c == '+' || *c == '-') && !inner[..*i].ends_with('e'))
            .map(|(i, _)| i)
            .last();
        return match split {
            Some(i) => Some(parse_coef(&inner[..i])? + parse_coef(&inner[i..])?),
            None => parse_coef(inner),
        };
    }
    if let Some(im) = s.strip_suffix('i') {
        let v = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            _ => im.parse::<f64>().ok()?,
        };
        return Some(Cpx::new(0.0, v));
    }
    s.parse::<f64>().ok().map(|v| Cpx::new(v, 0.0))
}

/// The numerical semigroup `⟨r, s⟩` with conductor `(r−1)(s−1)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Semigroup {
    r: u32,
    s: u32,
    conductor: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Semigroup {
    pub fn new(r: u32, s: u32) -> Result<Self> {
        if !(2 <= r && r < s) {
            return Err(invalid(format!("need 2 <= r < s, got ({r}, {s})")));
        }
        if gcd(r, s) != 1 {
            return Err(invalid(format!("r = {r} and s = {s} are not coprime")));
        }
        Ok(Semigroup {
            r,
            s,
            conductor: (r - 1) * (s - 1),
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// Whether `k = a·r + b·s` with `a, b ≥ 0`, by brute force over `a`.
    pub fn member(&self, k: i64) -> Result<bool> {
        if k < 0 {
            return Err(invalid(format!(
                "semigroup membership needs k >= 0, got {k}"
            )));
        }
        let (r, s) = (self.r as i64, self.s as i64);
        Ok((0..=k / r).any(|a| (k - a * r) % s == 0))
    }

    /// A representation `k = a·r + b·s`, if any.
    pub fn decompose(&self, k: u32) -> Option<(u32, u32)> {
        (0..=k / self.r)
            .find(|a| (k - a * self.r).is_multiple_of(self.s))
            .map(|a| (a, (k - a * self.r) / self.s))
    }

    /// Elements of the semigroup in `[0, bound]`.
    pub fn elements_upto(&self, bound: u32) -> Vec<u32> {
        (0..=bound)
            .filter(|&k| self.member(k as i64).unwrap_or(false))
            .collect()
    }

    pub fn gaps(&self) -> Vec<u32> {
        (0..self.conductor)
            .filter(|&k| !self.member(k as i64).unwrap_or(true))
            .collect()
    }

    /// `ζ₁^i ζ₂^j` pulled back along `τ ↦ (τ^s, τ^r)`.
    pub fn pullback_monomial(&self, i: u32, j: u32) -> LaurentPoly {
        LaurentPoly::monomial((self.s * i + self.r * j) as i64, Cpx::new(1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one() -> Cpx {
        Cpx::new(1.0, 0.0)
    }

    #[test]
    fn residue_examples() {
        assert_eq!(LaurentPoly::monomial(-1, one()).residue(), one());
        let p = &LaurentPoly::monomial(3, one()) + &LaurentPoly::monomial(-2, one().scale(5.0));
        assert_eq!(p.residue(), Cpx::default());
        let c = 2;
        for k in 0..4 {
            for m in 0..4 {
                let r = LaurentPoly::monomial(k + m - c, one()).residue();
                assert_eq!(r == one(), k + m == c - 1);
            }
        }
    }

    #[test]
    fn membership_examples() {
        let g23 = Semigroup::new(2, 3).unwrap();
        assert!(!g23.member(1).unwrap());
        assert!(g23.member(0).unwrap());
        let g35 = Semigroup::new(3, 5).unwrap();
        assert!(!g35.member(7).unwrap());
        assert!(g35.member(8).unwrap());
        assert!(g23.member(-1).is_err());
        assert_eq!(g35.gaps(), vec![1, 2, 4, 7]);
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(Semigroup::new(2, 4).is_err());
        assert!(Semigroup::new(3, 2).is_err());
        assert!(Semigroup::new(1, 5).is_err());
    }

    #[test]
    fn pullback_examples() {
        let g = Semigroup::new(2, 3).unwrap();
        assert_eq!(g.pullback_monomial(1, 0), LaurentPoly::monomial(3, one()));
        assert_eq!(g.pullback_monomial(0, 0), LaurentPoly::constant(one()));
        assert_eq!(g.pullback_monomial(1, 1), LaurentPoly::monomial(5, one()));
    }

    #[test]
    fn symmetric_duality() {
        for (r, s) in [(2, 3), (2, 5), (3, 4), (3, 5), (4, 7)] {
            let g = Semigroup::new(r, s).unwrap();
            let c = g.conductor() as i64;
            for k in 0..c {
                assert!(
                    g.member(k).unwrap() ^ g.member(c - 1 - k).unwrap(),
                    "({r},{s}) k={k}"
                );
            }
        }
    }

    #[test]
    fn parsing() {
        let p: LaurentPoly = "tau^2 - 3*tau^-1 + 2".parse().unwrap();
        assert_eq!(p.coeff(2), one());
        assert_eq!(p.coeff(-1), one().scale(-3.0));
        assert_eq!(p.coeff(0), one().scale(2.0));
        let q: LaurentPoly = "(1+2i)*tau^3 - i*tau".parse().unwrap();
        assert_eq!(q.coeff(3), Cpx::new(1.0, 2.0));
        assert_eq!(q.coeff(1), Cpx::new(0.0, -1.0));
        let r: LaurentPoly = "tau".parse().unwrap();
        assert_eq!(r, LaurentPoly::monomial(1, one()));
        assert!("tau^x".parse::<LaurentPoly>().is_err());
        assert!("".parse::<LaurentPoly>().is_err());
    }

    fn laurent_strategy() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i64..6, -5i32..5, -5i32..5), 0..6).prop_map(|v| {
            LaurentPoly::from_terms(
                v.into_iter()
                    .map(|(k, a, b)| (k, Cpx::new(a as f64, b as f64))),
            )
        })
    }

    proptest! {
        #[test]
        fn derivative_has_no_residue(p in laurent_strategy()) {
            prop_assert_eq!(p.derivative().residue(), Cpx::default());
        }

        #[test]
        fn pullback_is_multiplicative(i1 in 0u32..5, j1 in 0u32..5, i2 in 0u32..5, j2 in 0u32..5) {
            let g = Semigroup::new(3, 5).unwrap();
            prop_assert_eq!(
                g.pullback_monomial(i1 + i2, j1 + j2),
                &g.pullback_monomial(i1, j1) * &g.pullback_monomial(i2, j2)
            );
        }
    }
}
