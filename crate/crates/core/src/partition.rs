//! Exact integer-partition counting and enumeration.
//!
//! Counts are exact `u64` values produced by dynamic programming. The largest
//! accepted argument is [`N_MAX_EXACT`]; `p(400)` is roughly `6.7e18`, which
//! still fits. Anything larger is rejected instead of wrapping.
//!
//! The two growth estimates ([`p_asymptotic`], [`q_asymptotic`]) work in log
//! space and only project to a linear value when it is representable.

use std::fmt;

use thiserror::Error;

/// Largest `n` for which exact counts are computed.
pub const N_MAX_EXACT: u32 = 400;

/// Largest digit a Partiti cell may contain.
pub const MAX_DIGIT: u32 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("n = {n} exceeds the exact-count cap of {cap}")]
    OutOfRange { n: u32, cap: u32 },
    #[error("asymptotic estimates are defined for n >= 1, got {0}")]
    NonPositive(u32),
}

/// An exact partition count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartitionCount(pub u64);

impl PartitionCount {
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for PartitionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<PartitionCount> for u64 {
    fn from(c: PartitionCount) -> u64 {
        c.0
    }
}

fn check_range(n: u32) -> Result<usize, PartitionError> {
    if n > N_MAX_EXACT {
        return Err(PartitionError::OutOfRange { n, cap: N_MAX_EXACT });
    }
    Ok(n as usize)
}

/// Unbounded-multiplicity DP ("coin change") restricted to the given parts.
fn count_with_parts(n: usize, parts: impl Iterator<Item = usize>) -> u64 {
    let mut table = vec![0u64; n + 1];
    table[0] = 1;
    for part in parts {
        for total in part..=n {
            // Bounded by p(n) <= p(400) < u64::MAX, so never wraps.
            table[total] += table[total - part];
        }
    }
    table[n]
}

/// `p(n)`: the number of partitions of `n`.
pub fn count_partitions(n: u32) -> Result<PartitionCount, PartitionError> {
    let n = check_range(n)?;
    Ok(PartitionCount(count_with_parts(n, 1..=n)))
}

/// `q(n)`: the number of partitions of `n` into distinct parts. `q(0) = 1`.
pub fn count_distinct_partitions(n: u32) -> Result<PartitionCount, PartitionError> {
    let n = check_range(n)?;
    // 0/1 knapsack: each part is used at most once, so sweep totals downwards.
    let mut table = vec![0u64; n + 1];
    table[0] = 1;
    for part in 1..=n {
        for total in (part..=n).rev() {
            table[total] += table[total - part];
        }
    }
    Ok(PartitionCount(table[n]))
}

/// The number of partitions of `n` whose parts are all odd.
///
/// Computed with its own DP over odd parts; equality with
/// [`count_distinct_partitions`] is a theorem, not an implementation detail.
pub fn count_odd_partitions(n: u32) -> Result<PartitionCount, PartitionError> {
    let n = check_range(n)?;
    Ok(PartitionCount(count_with_parts(n, (1..=n).step_by(2))))
}

/// A partition into distinct parts, stored as a strictly increasing sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundedPartition {
    parts: Vec<u32>,
}

impl BoundedPartition {
    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn sum(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.parts
    }
}

impl fmt::Display for BoundedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

/// All partitions of `n` into distinct parts no larger than `max_part`, in
/// lexicographic order of the increasing part sequence.
///
/// Depth-first search that tries the smallest admissible next part first
/// yields lexicographic order directly. `n = 0` yields the single empty
/// partition; an unsatisfiable request yields an empty list.
pub fn enumerate_bounded_distinct_partitions(n: u32, max_part: u32) -> Vec<BoundedPartition> {
    fn walk(remaining: u32, next: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<BoundedPartition>) {
        if remaining == 0 {
            out.push(BoundedPartition { parts: prefix.clone() });
            return;
        }
        let mut part = next;
        while part <= max_part && part <= remaining {
            // Prune when even next+..+max_part cannot reach the remainder.
            let top = max_part.min(remaining) as u64;
            let reachable = (top * (top + 1) - (part as u64) * (part as u64 - 1)) / 2;
            if reachable < remaining as u64 {
                break;
            }
            prefix.push(part);
            walk(remaining - part, part + 1, max_part, prefix, out);
            prefix.pop();
            part += 1;
        }
    }

    let mut out = Vec::new();
    walk(n, 1, max_part, &mut Vec::new(), &mut out);
    out
}

/// A growth estimate computed in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEstimate {
    /// Natural log of the estimate; always finite for n >= 1.
    pub log_value: f64,
    /// `exp(log_value)`, or `+inf` once it leaves the `f64` range.
    pub value: f64,
}

impl AsymptoticEstimate {
    fn from_log(log_value: f64) -> Self {
        Self {
            log_value,
            value: log_value.exp(),
        }
    }
}

/// Leading-order estimate `p(n) ~ exp(pi*sqrt(2n/3)) / (4n*sqrt(3))`.
pub fn p_asymptotic(n: u32) -> Result<AsymptoticEstimate, PartitionError> {
    if n == 0 {
        return Err(PartitionError::NonPositive(n));
    }
    let n = n as f64;
    let log_value = std::f64::consts::PI * (2.0 * n / 3.0).sqrt() - (4.0 * n * 3f64.sqrt()).ln();
    Ok(AsymptoticEstimate::from_log(log_value))
}

/// Leading-order estimate `q(n) ~ exp(pi*sqrt(n/3)) / (4*(3n^3)^(1/4))`.
pub fn q_asymptotic(n: u32) -> Result<AsymptoticEstimate, PartitionError> {
    if n == 0 {
        return Err(PartitionError::NonPositive(n));
    }
    let n = n as f64;
    // ln(4 * (3n^3)^(1/4)) = ln 4 + (ln 3 + 3 ln n) / 4, which avoids forming n^3.
    let log_denominator = 4f64.ln() + (3f64.ln() + 3.0 * n.ln()) / 4.0;
    let log_value = std::f64::consts::PI * (n / 3.0).sqrt() - log_denominator;
    Ok(AsymptoticEstimate::from_log(log_value))
}
