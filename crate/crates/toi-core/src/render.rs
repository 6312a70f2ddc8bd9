//! Grayscale rendering of batch matrices.
//!
//! Each cell becomes one pixel whose brightness encodes where in the stream
//! the data point starts: `pixel = floor(255 * start / max(1, t - 1))`. A
//! well-distributed batch shows up as a row of widely spread gray values;
//! within-row repetition shows up as runs of near-identical pixels.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::batching::BatchMatrix;
use crate::error::{Error, Result};

/// Pixel view of a batch matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayscaleMatrix {
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<u8>,
}

impl GrayscaleMatrix {
    /// Map every cell of `matrix` over a stream of `t` tokens to a pixel.
    pub fn from_batches(matrix: &BatchMatrix, t: usize) -> Self {
        let scale = (t.saturating_sub(1)).max(1) as u64;
        let pixels = matrix
            .cells
            .iter()
            .map(|cell| ((255 * cell.start as u64) / scale) as u8)
            .collect();
        GrayscaleMatrix {
            rows: matrix.num_batches,
            cols: matrix.batch_size,
            pixels,
        }
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.pixels[row * self.cols..(row + 1) * self.cols]
    }

    /// Binary PGM bytes: `P5\n<width> <height>\n255\n` then raw pixels.
    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.cols, self.rows).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

/// Render `matrix` as a binary PGM file. Output bytes are a pure function of
/// `(matrix, t)`.
pub fn render_pgm(matrix: &BatchMatrix, t: usize, path: impl AsRef<Path>) -> Result<()> {
    if matrix.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    let gray = GrayscaleMatrix::from_batches(matrix, t);
    let file = fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    w.write_all(&gray.to_pgm_bytes())?;
    w.flush()?;
    Ok(())
}

/// Spread statistics of one pixel row.
#[derive(Debug, Clone, PartialEq)]
pub struct RowDiversity {
    pub row: usize,
    /// Distinct pixel values in the row.
    pub distinct: usize,
    /// Mean absolute difference over all unordered pixel pairs; 0 for rows
    /// with fewer than two pixels.
    pub mean_abs_diff: f64,
}

/// Spread statistics of a whole rendering.
#[derive(Debug, Clone, PartialEq)]
pub struct DiversityReport {
    pub rows: Vec<RowDiversity>,
    /// Mean of the per-row distinct counts.
    pub mean_distinct: f64,
    /// Mean of the per-row mean absolute differences.
    pub mean_abs_diff: f64,
}

/// Quantify how well each batch spreads over the stream.
pub fn row_diversity(matrix: &BatchMatrix, t: usize) -> DiversityReport {
    let gray = GrayscaleMatrix::from_batches(matrix, t);
    let mut rows = Vec::with_capacity(gray.rows);
    for row_idx in 0..gray.rows {
        let mut pixels: Vec<u8> = gray.row(row_idx).to_vec();
        pixels.sort_unstable();
        let distinct = count_distinct(&pixels);
        rows.push(RowDiversity {
            row: row_idx,
            distinct,
            mean_abs_diff: mean_pairwise_diff(&pixels),
        });
    }
    let len = rows.len().max(1) as f64;
    let mean_distinct = rows.iter().map(|r| r.distinct as f64).sum::<f64>() / len;
    let mean_abs_diff = rows.iter().map(|r| r.mean_abs_diff).sum::<f64>() / len;
    DiversityReport {
        rows,
        mean_distinct,
        mean_abs_diff,
    }
}

fn count_distinct(sorted: &[u8]) -> usize {
    let mut distinct = 0;
    let mut prev = None;
    for &v in sorted {
        if prev != Some(v) {
            distinct += 1;
            prev = Some(v);
        }
    }
    distinct
}

/// Sum over unordered pairs of |a - b|, via the sorted prefix-sum identity.
fn mean_pairwise_diff(sorted: &[u8]) -> f64 {
    let k = sorted.len();
    if k < 2 {
        return 0.0;
    }
    let mut total: u64 = 0;
    let mut prefix: u64 = 0;
    for (i, &v) in sorted.iter().enumerate() {
        total += i as u64 * v as u64 - prefix;
        prefix += v as u64;
    }
    total as f64 / (k * (k - 1) / 2) as f64
}
