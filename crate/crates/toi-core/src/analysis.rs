//! Order-coverage accounting and batch-size planning.
//!
//! For an overlapped split, an adjacent token pair is either contained in a
//! window of a given sequence or split across two of its windows. Summing
//! over the `p` sequences, an interior pair is included `p` times if no
//! sequence splits it and `p - 1` times otherwise, giving the coverage ratio
//! `(p - 1) / p` between the two kinds. [`pair_coverage`] computes the
//! per-pair inclusion counts in closed form; [`brute_force_pair_coverage`]
//! recomputes them by walking every data point, as an independent check.

use std::cmp::Ordering;
use std::fmt;

use crate::batching::{period_analysis, PeriodReport};
use crate::discretize::{DataPointSequence, OverlapPlan};
use crate::error::{Error, Result};
use crate::math::{gcd, largest_prime_leq};

/// An exact non-negative rational, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        // cross-multiply in u128: a/b vs c/d  <=>  a*d vs c*b
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The order-coverage ratio `(p - 1) / p` of a `p`-fold overlapped split.
pub fn toi_ratio(p: usize) -> Result<Ratio> {
    if p == 0 {
        return Err(Error::ZeroOverlaps);
    }
    Ok(Ratio::new(p as u64 - 1, p as u64))
}

/// Per-pair inclusion counts over a stream of `t` tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCoverageReport {
    pub stream_len: usize,
    pub plan: OverlapPlan,
    /// `counts[i]` = number of data points containing both token `i` and
    /// token `i + 1`; length `t - 1`.
    pub counts: Vec<u32>,
    /// Pairs included the full `p` times.
    pub num_at_p: usize,
    /// Pairs included `p - 1` times.
    pub num_at_p_minus_1: usize,
    /// Pairs included fewer than `p - 1` times (stream-boundary effects).
    pub num_below: usize,
    pub toi_ratio: Ratio,
}

impl PairCoverageReport {
    /// CSV document: `position,count` rows, then a one-row summary block.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("position,count\n");
        for (i, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{i},{c}\n"));
        }
        out.push_str("p,ratio_num,ratio_den,num_at_p,num_at_p_minus_1,num_below\n");
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            self.plan.overlaps,
            self.toi_ratio.numerator(),
            self.toi_ratio.denominator(),
            self.num_at_p,
            self.num_at_p_minus_1,
            self.num_below
        ));
        out
    }

    pub fn write_csv(&self, mut w: impl std::io::Write) -> Result<()> {
        w.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }
}

fn summarize(counts: Vec<u32>, plan: &OverlapPlan, t: usize) -> Result<PairCoverageReport> {
    let p = plan.overlaps as u32;
    let mut num_at_p = 0;
    let mut num_at_p_minus_1 = 0;
    let mut num_below = 0;
    for &c in &counts {
        debug_assert!(c <= p);
        if c == p {
            num_at_p += 1;
        } else if c + 1 == p {
            num_at_p_minus_1 += 1;
        } else {
            num_below += 1;
        }
    }
    Ok(PairCoverageReport {
        stream_len: t,
        plan: plan.clone(),
        counts,
        num_at_p,
        num_at_p_minus_1,
        num_below,
        toi_ratio: toi_ratio(plan.overlaps)?,
    })
}

/// Closed-form pair coverage: pair `i` is covered by the sequence at offset
/// `o` iff `i >= o`, the pair does not straddle one of that sequence's
/// window boundaries (`(i - o) mod n != n - 1`), and the containing window
/// was not dropped at the stream tail.
pub fn pair_coverage(t: usize, plan: &OverlapPlan) -> Result<PairCoverageReport> {
    let n = plan.tokens_per_point;
    if n > t {
        return Err(Error::PointLongerThanStream { n, t });
    }
    let pairs = t.saturating_sub(1);
    let mut counts = vec![0u32; pairs];
    for &offset in &plan.offsets {
        if offset >= t {
            continue;
        }
        let retained = (t - offset) / n;
        for (i, count) in counts.iter_mut().enumerate().skip(offset) {
            let d = i - offset;
            if d % n != n - 1 && d / n < retained {
                *count += 1;
            }
        }
    }
    summarize(counts, plan, t)
}

/// Oracle twin of [`pair_coverage`]: walk every data point and tally the
/// adjacent pairs it contains.
pub fn brute_force_pair_coverage(
    points: &DataPointSequence,
    t: usize,
) -> Result<PairCoverageReport> {
    let mut counts = vec![0u32; t.saturating_sub(1)];
    for point in &points.points {
        for i in point.start..point.start + point.len.saturating_sub(1) {
            counts[i] += 1;
        }
    }
    summarize(counts, &points.plan, t)
}

/// Pair positions far enough from both stream ends that every overlapped
/// sequence has started and none has dropped the containing window: the
/// first `(p-1)*step` and the final `n + (p-1)*step` positions are excluded.
pub fn interior_pair_range(t: usize, plan: &OverlapPlan) -> std::ops::Range<usize> {
    let lead = (plan.overlaps - 1) * plan.step;
    let tail = plan.tokens_per_point + lead;
    let pairs = t.saturating_sub(1);
    let start = lead.min(pairs);
    let end = pairs.saturating_sub(tail).max(start);
    start..end
}

/// Largest prime `<= k`; `k` itself when prime. A prime batch size is
/// coprime to every smaller overlap count, which rules out within-batch
/// repetition.
pub fn suggest_prime(k: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::PrimeBelowRange { k });
    }
    Ok(largest_prime_leq(k))
}

/// Coprimality verdict for an overlap count and batch size, with the full
/// period breakdown attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoprimeCheck {
    pub coprime: bool,
    pub period: PeriodReport,
}

pub fn coprime_check(p: usize, k: usize) -> CoprimeCheck {
    let period = period_analysis(p, k);
    CoprimeCheck {
        coprime: period.gcd == 1,
        period,
    }
}

/// Epoch budget granted to a `p`-fold overlapped run so that total token
/// throughput matches a baseline trained `baseline_epochs` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpochBudget {
    pub alleviated_epochs: u64,
    /// Baseline epochs left over by the integer division; nonzero means the
    /// comparison has that much slack in the baseline's favour.
    pub remainder: u64,
}

pub fn epoch_budget(baseline_epochs: u64, p: usize) -> Result<EpochBudget> {
    if p == 0 {
        return Err(Error::ZeroOverlaps);
    }
    Ok(EpochBudget {
        alleviated_epochs: baseline_epochs / p as u64,
        remainder: baseline_epochs % p as u64,
    })
}
