//! Sequence discretization with controlled token-order coverage.
//!
//! Cutting a token stream into fixed windows loses the ordering of every
//! token pair that falls across a window boundary. This crate builds the
//! machinery to measure and reduce that loss:
//!
//! * [`corpus`] — token stream ingestion and a byte-exact id file format;
//! * [`discretize`] — standard and overlapped window splits
//!   ([`alleviated_split`] cuts the stream `p` times at offsets spaced
//!   `n / p` tokens apart and concatenates the results);
//! * [`batching`] — sequential and distributed batch matrices, plus the
//!   exact repetition law: a distributed batch over `p` overlapped
//!   sequences contains near-duplicate points iff `gcd(p, k) > 1`;
//! * [`strategies`] — the standard / extreme / interbatch / alleviated
//!   regimes behind one entry point;
//! * [`analysis`] — per-pair coverage counts with a brute-force oracle,
//!   exact coverage ratios, prime batch-size suggestions, epoch budgets;
//! * [`render`] — grayscale PGM renderings of batch matrices and row
//!   diversity scores;
//! * [`shuffle`] — the pinned, portable generator behind every seeded
//!   shuffle.
//!
//! Everything is deterministic: same inputs (and seeds) produce the same
//! streams, matrices, reports, and bytes. All public types are plain
//! immutable data, safe to share across threads.

pub mod analysis;
pub mod batching;
pub mod corpus;
pub mod discretize;
mod error;
mod math;
pub mod render;
pub mod shuffle;
pub mod strategies;

pub use analysis::{
    brute_force_pair_coverage, coprime_check, epoch_budget, interior_pair_range, pair_coverage,
    suggest_prime, toi_ratio, CoprimeCheck, EpochBudget, PairCoverageReport, Ratio,
};
pub use batching::{
    build_distributed, build_sequential, detect_row_duplicates, period_analysis, BatchMatrix,
    DuplicateReport, Layout, PeriodReport, RowDuplicateStats,
};
pub use corpus::{
    ingest_ids, ingest_text, load_vocab_sidecar, tokenize, write_ids, write_vocab_sidecar,
    TokenStream, TokenizeMode, Vocab,
};
pub use discretize::{
    alleviated_split, count_points, make_plan, split_with_offset, DataPointRef, DataPointSequence,
    OverlapPlan,
};
pub use error::{Error, Result};
pub use render::{render_pgm, row_diversity, DiversityReport, GrayscaleMatrix, RowDiversity};
pub use strategies::{apply_strategy, ToiStrategy};
