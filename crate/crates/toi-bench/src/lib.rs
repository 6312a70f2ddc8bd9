//! Shared fixtures for the pipeline benchmarks.

use toi_core::TokenStream;

/// Synthetic stream sized so that every offset sequence of an `(n, p)` plan
/// yields exactly `points_per_sequence` windows.
pub fn exact_stream(n: usize, p: usize, points_per_sequence: usize) -> TokenStream {
    let step = n / p;
    let t = points_per_sequence * n + (p - 1) * step;
    TokenStream::from_ids((0..t as u32).collect())
}
