//! Parameter records naming a family instance.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Parity of the null part: `O_{2n}` or `O_{2n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Order of the null part for half-order parameter `n`.
    pub fn m(self, n: u32) -> u32 {
        match self {
            Parity::Even => 2 * n,
            Parity::Odd => 2 * n + 1,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("parameter {0} must be >= 1")]
    NonPositive(&'static str),
    #[error("k = {k} is not r*s = {r}*{s}")]
    NotFactorization { k: u32, r: u32, s: u32 },
    #[error("group sizes {ks:?} sum to {sum}, expected k = {k}")]
    GroupSum { ks: Vec<u32>, sum: u32, k: u32 },
    #[error("{0}")]
    Invalid(String),
}

/// `(parity, n, k, r, s, k_1..k_t)`. `m` is derived from parity and `n`;
/// `t` is the length of `ks`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub parity: Parity,
    pub n: u32,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ks: Vec<u32>,
}

impl FamilyParams {
    pub fn new(parity: Parity, n: u32, k: u32) -> Result<Self, ParamError> {
        let p = FamilyParams {
            parity,
            n,
            k,
            r: None,
            s: None,
            ks: Vec::new(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_factorization(mut self, r: u32, s: u32) -> Result<Self, ParamError> {
        self.r = Some(r);
        self.s = Some(s);
        self.validate()?;
        if r * s != self.k {
            return Err(ParamError::NotFactorization { k: self.k, r, s });
        }
        Ok(self)
    }

    pub fn with_groups(mut self, ks: Vec<u32>) -> Result<Self, ParamError> {
        let sum: u32 = ks.iter().sum();
        if sum != self.k {
            return Err(ParamError::GroupSum { ks, sum, k: self.k });
        }
        self.ks = ks;
        self.validate()?;
        Ok(self)
    }

    pub fn m(&self) -> u32 {
        self.parity.m(self.n)
    }

    pub fn t(&self) -> usize {
        self.ks.len()
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        if self.n == 0 {
            return Err(ParamError::NonPositive("n"));
        }
        if self.k == 0 {
            return Err(ParamError::NonPositive("k"));
        }
        if self.r == Some(0) {
            return Err(ParamError::NonPositive("r"));
        }
        if self.s == Some(0) {
            return Err(ParamError::NonPositive("s"));
        }
        if self.ks.contains(&0) {
            return Err(ParamError::NonPositive("k_a"));
        }
        Ok(())
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} k={}", self.parity, self.n, self.k)?;
        if let Some(r) = self.r {
            write!(f, " r={r}")?;
        }
        if let Some(s) = self.s {
            write!(f, " s={s}")?;
        }
        if !self.ks.is_empty() {
            let ks: Vec<String> = self.ks.iter().map(u32::to_string).collect();
            write!(f, " ks={}", ks.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_checked() {
        let p = FamilyParams::new(Parity::Even, 2, 6).unwrap();
        assert!(p.clone().with_factorization(3, 2).is_ok());
        assert_eq!(
            p.with_factorization(4, 2),
            Err(ParamError::NotFactorization { k: 6, r: 4, s: 2 })
        );
    }

    #[test]
    fn zero_rejected() {
        assert_eq!(
            FamilyParams::new(Parity::Odd, 0, 1),
            Err(ParamError::NonPositive("n"))
        );
        let p = FamilyParams::new(Parity::Odd, 1, 4).unwrap();
        assert!(matches!(
            p.with_groups(vec![2, 3]),
            Err(ParamError::GroupSum { sum: 5, .. })
        ));
    }

    #[test]
    fn m_from_parity() {
        assert_eq!(Parity::Even.m(3), 6);
        assert_eq!(Parity::Odd.m(3), 7);
    }
}
