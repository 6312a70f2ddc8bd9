//! Batch matrix construction and the within-batch repetition law.
//!
//! A list of `m` data points and a batch size `k` give `l = floor(m / k)`
//! batches; leftover points are dropped and the drop count recorded. The
//! distributed layout splits the list into `k` contiguous parts of `l`
//! points and batch `i` takes element `i` of every part, so
//! `cell(i, j) = points[j * l + i]`. The sequential layout keeps the list
//! order: `cell(i, j) = points[i * k + j]`.
//!
//! With `p` overlapped sequences feeding a distributed matrix, cells of one
//! row can cover almost the same token range. That happens exactly when
//! `gcd(p, k) > 1`, and then every full row holds clusters of `gcd(p, k)`
//! mutually overlapping points recurring with column period `k / gcd(p, k)`.
//! [`period_analysis`] evaluates that closed form and
//! [`detect_row_duplicates`] measures actual matrices against it.

use std::fmt::Write as _;

use crate::discretize::DataPointRef;
use crate::error::{Error, Result};
use crate::math::gcd;

/// How a [`BatchMatrix`] was laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Sequential,
    Distributed,
}

impl Layout {
    pub fn as_str(&self) -> &'static str {
        match self {
            Layout::Sequential => "sequential",
            Layout::Distributed => "distributed",
        }
    }
}

/// A 2-D batch layout: row `i` is batch `i`, holding `batch_size` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchMatrix {
    /// Points per batch (columns).
    pub batch_size: usize,
    /// Number of batches (rows).
    pub num_batches: usize,
    /// Row-major cells, `num_batches * batch_size` entries.
    pub cells: Vec<DataPointRef>,
    pub layout: Layout,
    /// Input points discarded by flooring.
    pub dropped: usize,
}

impl BatchMatrix {
    pub fn cell(&self, row: usize, col: usize) -> DataPointRef {
        self.cells[row * self.batch_size + col]
    }

    pub fn row(&self, row: usize) -> &[DataPointRef] {
        &self.cells[row * self.batch_size..(row + 1) * self.batch_size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[DataPointRef]> {
        self.cells.chunks_exact(self.batch_size)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Manifest document: header `TOIBM01 layout K L`, then one
    /// `row col seq_id rank start` line per cell.
    pub fn to_manifest_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "TOIBM01 {} {} {}",
            self.layout.as_str(),
            self.batch_size,
            self.num_batches
        );
        for (idx, cell) in self.cells.iter().enumerate() {
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                idx / self.batch_size,
                idx % self.batch_size,
                cell.seq_id,
                cell.rank,
                cell.start
            );
        }
        out
    }

    pub fn write_manifest(&self, mut w: impl std::io::Write) -> Result<()> {
        w.write_all(self.to_manifest_string().as_bytes())?;
        Ok(())
    }
}

/// Repetition structure of a `(p, k)` pair: a near-duplicate recurs every
/// `period` columns, `repetitions` times per full row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodReport {
    pub overlaps: usize,
    pub batch_size: usize,
    pub gcd: usize,
    /// Column distance between repeats, `k / gcd(p, k)`; equals `k` when
    /// there is no within-row repetition.
    pub period: usize,
    /// Size of each cluster of near-identical points in a full row,
    /// `gcd(p, k)`.
    pub repetitions: usize,
    /// Offset sequences advanced per period, `p / gcd(p, k)`.
    pub sequences_per_period: usize,
}

impl PeriodReport {
    /// True iff no data point repeats within a row.
    pub fn repetition_free(&self) -> bool {
        self.gcd == 1
    }
}

/// Distribute `points` into batches of `k`: split into `k` contiguous parts
/// of `floor(len / k)` points, batch `i` takes element `i` of every part.
pub fn build_distributed(points: &[DataPointRef], k: usize) -> Result<BatchMatrix> {
    if k == 0 {
        return Err(Error::ZeroBatchSize);
    }
    let num_batches = points.len() / k;
    let mut cells = Vec::with_capacity(num_batches * k);
    for row in 0..num_batches {
        for col in 0..k {
            cells.push(points[col * num_batches + row]);
        }
    }
    Ok(BatchMatrix {
        batch_size: k,
        num_batches,
        cells,
        layout: Layout::Distributed,
        dropped: points.len() - num_batches * k,
    })
}

/// Chunk `points` into batches of `k` consecutive points.
pub fn build_sequential(points: &[DataPointRef], k: usize) -> Result<BatchMatrix> {
    if k == 0 {
        return Err(Error::ZeroBatchSize);
    }
    let num_batches = points.len() / k;
    let cells = points[..num_batches * k].to_vec();
    Ok(BatchMatrix {
        batch_size: k,
        num_batches,
        cells,
        layout: Layout::Sequential,
        dropped: points.len() - num_batches * k,
    })
}

/// Closed-form repetition analysis for `p` overlapped sequences and batch
/// size `k`: the smallest positive `q` with `p * q` divisible by `k` is
/// `k / gcd(p, k)`.
pub fn period_analysis(p: usize, k: usize) -> PeriodReport {
    debug_assert!(p >= 1 && k >= 1);
    let g = gcd(p as u64, k as u64) as usize;
    PeriodReport {
        overlaps: p,
        batch_size: k,
        gcd: g,
        period: k / g,
        repetitions: g,
        sequences_per_period: p / g,
    }
}

/// Duplicate structure of one batch row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowDuplicateStats {
    pub row: usize,
    /// Sizes of the overlap clusters (cells chained by token-range overlap),
    /// in ascending start order. Singleton clusters included.
    pub cluster_sizes: Vec<usize>,
    pub max_cluster: usize,
    /// Unordered cell pairs whose token ranges directly overlap.
    pub overlapping_pairs: usize,
}

/// Duplicate structure of a whole matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateReport {
    /// Window length used for the overlap test.
    pub tokens_per_point: usize,
    pub rows: Vec<RowDuplicateStats>,
    /// Largest cluster over all rows; 1 for a duplicate-free matrix with at
    /// least one cell, 0 for an empty matrix.
    pub max_cluster: usize,
    pub total_overlapping_pairs: usize,
}

impl DuplicateReport {
    /// True iff some row contains two cells with overlapping token ranges.
    pub fn has_overlap(&self) -> bool {
        self.total_overlapping_pairs > 0
    }
}

/// Scan every row for cells covering overlapping token ranges. Two windows
/// of length `n` overlap iff their starts differ by less than `n`; overlap
/// chains transitively into clusters.
pub fn detect_row_duplicates(matrix: &BatchMatrix, n: usize) -> DuplicateReport {
    let mut rows = Vec::with_capacity(matrix.num_batches);
    let mut max_cluster = 0;
    let mut total_pairs = 0;
    for (row_idx, row) in matrix.rows().enumerate() {
        let mut starts: Vec<usize> = row.iter().map(|c| c.start).collect();
        starts.sort_unstable();

        let mut cluster_sizes = Vec::new();
        let mut current = 0;
        for idx in 0..starts.len() {
            if current == 0 || starts[idx] - starts[idx - 1] < n {
                current += 1;
            } else {
                cluster_sizes.push(current);
                current = 1;
            }
        }
        if current > 0 {
            cluster_sizes.push(current);
        }

        // direct pairwise overlaps via a sliding window over sorted starts
        let mut pairs = 0;
        let mut lo = 0;
        for hi in 0..starts.len() {
            while starts[hi] - starts[lo] >= n {
                lo += 1;
            }
            pairs += hi - lo;
        }

        let row_max = cluster_sizes.iter().copied().max().unwrap_or(0);
        max_cluster = max_cluster.max(row_max);
        total_pairs += pairs;
        rows.push(RowDuplicateStats {
            row: row_idx,
            cluster_sizes,
            max_cluster: row_max,
            overlapping_pairs: pairs,
        });
    }
    DuplicateReport {
        tokens_per_point: n,
        rows,
        max_cluster,
        total_overlapping_pairs: total_pairs,
    }
}
