//! Truncated formal power series with exact `i64` coefficients.
//!
//! All arithmetic is checked; overflow surfaces as [`SeriesError::Overflow`].
//! Infinite products are represented by their finite prefix: a factor
//! `(1 + x^k)` or `1/(1 - x^k)` with `k > N` only contributes to degrees
//! above `N`, so dropping it leaves every coefficient up to `N` unchanged.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("coefficient overflow at degree {degree}")]
    Overflow { degree: usize },
    #[error("a series needs at least one coefficient")]
    Empty,
}

/// A power series `c[0] + c[1] x + ... + c[N] x^N`, known only up to `x^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<i64>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<i64>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { coeffs })
    }

    pub fn zero(degree_cap: usize) -> Self {
        Self {
            coeffs: vec![0; degree_cap + 1],
        }
    }

    pub fn one(degree_cap: usize) -> Self {
        Self::monomial(1, 0, degree_cap)
    }

    /// `coeff * x^degree`, truncated (to zero) when `degree > degree_cap`.
    pub fn monomial(coeff: i64, degree: usize, degree_cap: usize) -> Self {
        let mut s = Self::zero(degree_cap);
        if degree <= degree_cap {
            s.coeffs[degree] = coeff;
        }
        s
    }

    pub fn degree_cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> Option<i64> {
        self.coeffs.get(degree).copied()
    }

    pub fn truncate(&self, degree_cap: usize) -> Self {
        let cap = degree_cap.min(self.degree_cap());
        Self {
            coeffs: self.coeffs[..=cap].to_vec(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        let cap = self.degree_cap().min(other.degree_cap());
        let coeffs = (0..=cap)
            .map(|k| {
                self.coeffs[k]
                    .checked_add(other.coeffs[k])
                    .ok_or(SeriesError::Overflow { degree: k })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        let cap = self.degree_cap().min(other.degree_cap());
        let coeffs = (0..=cap)
            .map(|k| {
                self.coeffs[k]
                    .checked_sub(other.coeffs[k])
                    .ok_or(SeriesError::Overflow { degree: k })
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { coeffs })
    }

    /// Cauchy product, truncated to the smaller of the two caps.
    pub fn multiply(&self, other: &Self) -> Result<Self, SeriesError> {
        let cap = self.degree_cap().min(other.degree_cap());
        let mut coeffs = vec![0i64; cap + 1];
        for (i, &a) in self.coeffs[..=cap].iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs[..=cap - i].iter().enumerate() {
                let term = a.checked_mul(b).ok_or(SeriesError::Overflow { degree: i + j })?;
                coeffs[i + j] = coeffs[i + j]
                    .checked_add(term)
                    .ok_or(SeriesError::Overflow { degree: i + j })?;
            }
        }
        Ok(Self { coeffs })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if wrote {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                f.write_str("-")?;
            }
            let abs = c.unsigned_abs();
            match (k, abs) {
                (0, _) => write!(f, "{abs}")?,
                (1, 1) => f.write_str("x")?,
                (1, _) => write!(f, "{abs}x")?,
                (_, 1) => write!(f, "x^{k}")?,
                _ => write!(f, "{abs}x^{k}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        write!(f, " + O(x^{})", self.degree_cap() + 1)
    }
}

/// `1 + x^m + x^{2m} + ...` up to `x^N`: the expansion of `1/(1 - x^m)`.
///
/// # Panics
/// Panics if `m == 0`.
pub fn geometric_factor(m: usize, degree_cap: usize) -> TruncatedSeries {
    assert!(m >= 1, "geometric_factor needs m >= 1");
    let mut s = TruncatedSeries::zero(degree_cap);
    for k in (0..=degree_cap).step_by(m) {
        s.coeffs[k] = 1;
    }
    s
}

/// `prod_{k=1}^{N} (1 + x^k)` truncated at `x^N`; coefficient `n` is `q(n)`.
pub fn distinct_parts_product(degree_cap: usize) -> Result<TruncatedSeries, SeriesError> {
    (1..=degree_cap).try_fold(TruncatedSeries::one(degree_cap), |acc, k| {
        let factor = TruncatedSeries::one(degree_cap).checked_add(&TruncatedSeries::monomial(1, k, degree_cap))?;
        acc.multiply(&factor)
    })
}

/// `prod_{m odd, m <= N} 1/(1 - x^m)` truncated at `x^N`; coefficient `n`
/// counts partitions of `n` into odd parts.
pub fn odd_parts_product(degree_cap: usize) -> Result<TruncatedSeries, SeriesError> {
    (1..=degree_cap)
        .step_by(2)
        .try_fold(TruncatedSeries::one(degree_cap), |acc, m| {
            acc.multiply(&geometric_factor(m, degree_cap))
        })
}
