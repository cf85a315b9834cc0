//! Explicit polynomials with non-negative integer coefficients,
//! constant term first. Used for honesty bounds, census comparisons,
//! and length-relation declarations.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Polynomial {
    /// `coeffs[i]` multiplies `n^i`.
    coeffs: Vec<u64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<u64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        Polynomial { coeffs }
    }

    /// Like [`Polynomial::new`] but rejects degree-0 polynomials;
    /// honesty bounds must actually grow.
    pub fn positive_degree(coeffs: Vec<u64>) -> Result<Self> {
        let p = Polynomial::new(coeffs);
        if p.degree() == 0 {
            return Err(Error::PolyDegreeZero);
        }
        Ok(p)
    }

    /// The identity polynomial n.
    pub fn identity() -> Self {
        Polynomial::new(vec![0, 1])
    }

    /// c * n^e + c, the clock-bound shape.
    pub fn clock_shape(c: u64, e: u32) -> Self {
        let mut coeffs = vec![0u64; e as usize + 1];
        coeffs[0] = c;
        coeffs[e as usize] += c;
        Polynomial::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn eval(&self, n: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc.saturating_mul(n).saturating_add(c))
    }

    /// Least m with self(m) >= target, or `None` if the polynomial
    /// never reaches it below `cap`. Monotone search; all coefficients
    /// are non-negative so eval is non-decreasing.
    pub fn inverse_ceil(&self, target: u64, cap: u64) -> Option<u64> {
        (0..=cap).find(|&m| self.eval(m) >= target)
    }

    /// Greatest m <= cap with self(m) <= target.
    pub fn inverse_floor(&self, target: u64, cap: u64) -> Option<u64> {
        (0..=cap).take_while(|&m| self.eval(m) <= target).last()
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 && self.degree() > 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "n")?,
                1 => write!(f, "{c}n")?,
                _ if c == 1 => write!(f, "n^{i}")?,
                _ => write!(f, "{c}n^{i}")?,
            }
        }
        Ok(())
    }
}
