//! The four batch-construction regimes, behind one entry point.
//!
//! * `standard` — single cut at offset 0, distributed batches.
//! * `extreme:<seed>` — standard's data points shuffled before batching,
//!   destroying order both inside and across batches.
//! * `interbatch:<seed>` — standard's batch matrix with its rows shuffled,
//!   keeping order inside batches only.
//! * `alleviated:<p>` — `p` overlapped sequences, distributed batches.
//!
//! Shuffles use the pinned generator in [`crate::shuffle`], so a given
//! `(stream, n, k, strategy)` always produces the identical matrix.

use std::fmt;
use std::str::FromStr;

use crate::batching::{build_distributed, BatchMatrix};
use crate::corpus::TokenStream;
use crate::discretize::{alleviated_split, make_plan, split_with_offset};
use crate::error::{Error, Result};
use crate::shuffle::fisher_yates;

/// One of the four batch-construction regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToiStrategy {
    /// Random sequence of data points.
    Extreme { seed: u64 },
    /// Ordered data points, shuffled batch order.
    InterBatch { seed: u64 },
    /// The untouched single-cut pipeline.
    Standard,
    /// Overlapped data-point sequences; `overlaps >= 2`.
    Alleviated { overlaps: usize },
}

impl ToiStrategy {
    /// Overlap count the strategy feeds into the batch matrix.
    pub fn overlaps(&self) -> usize {
        match self {
            ToiStrategy::Alleviated { overlaps } => *overlaps,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ToiStrategy::Extreme { .. } => "extreme",
            ToiStrategy::InterBatch { .. } => "interbatch",
            ToiStrategy::Standard => "standard",
            ToiStrategy::Alleviated { .. } => "alleviated",
        }
    }
}

impl fmt::Display for ToiStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToiStrategy::Extreme { seed } => write!(f, "extreme:{seed}"),
            ToiStrategy::InterBatch { seed } => write!(f, "interbatch:{seed}"),
            ToiStrategy::Standard => write!(f, "standard"),
            ToiStrategy::Alleviated { overlaps } => write!(f, "alleviated:{overlaps}"),
        }
    }
}

impl FromStr for ToiStrategy {
    type Err = Error;

    /// Parse the CLI form: `standard`, `extreme:<seed>`, `interbatch:<seed>`,
    /// `alleviated:<P>`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: &str| Error::StrategyParse {
            input: s.to_owned(),
            reason: reason.to_owned(),
        };
        let (kind, arg) = match s.split_once(':') {
            Some((kind, arg)) => (kind, Some(arg)),
            None => (s, None),
        };
        match (kind, arg) {
            ("standard", None) => Ok(ToiStrategy::Standard),
            ("standard", Some(_)) => Err(err("standard takes no argument")),
            ("extreme", Some(arg)) => Ok(ToiStrategy::Extreme {
                seed: arg.parse().map_err(|_| err("seed must be a u64"))?,
            }),
            ("extreme", None) => Err(err("extreme requires a seed: extreme:<seed>")),
            ("interbatch", Some(arg)) => Ok(ToiStrategy::InterBatch {
                seed: arg.parse().map_err(|_| err("seed must be a u64"))?,
            }),
            ("interbatch", None) => Err(err("interbatch requires a seed: interbatch:<seed>")),
            ("alleviated", Some(arg)) => {
                let overlaps: usize = arg
                    .parse()
                    .map_err(|_| err("overlap count must be a positive integer"))?;
                if overlaps < 2 {
                    return Err(Error::AlleviatedRequiresOverlap);
                }
                Ok(ToiStrategy::Alleviated { overlaps })
            }
            ("alleviated", None) => Err(err("alleviated requires a count: alleviated:<P>")),
            _ => Err(err(
                "expected standard, extreme:<seed>, interbatch:<seed>, or alleviated:<P>",
            )),
        }
    }
}

/// Run one regime end to end: cut `stream` into windows of `n` tokens and
/// build the distributed batch matrix of width `k`.
pub fn apply_strategy(
    stream: &TokenStream,
    n: usize,
    k: usize,
    strategy: ToiStrategy,
) -> Result<BatchMatrix> {
    if k == 0 {
        return Err(Error::ZeroBatchSize);
    }
    match strategy {
        ToiStrategy::Standard => {
            let points = standard_points(stream, n)?;
            build_distributed(&points, k)
        }
        ToiStrategy::Alleviated { overlaps } => {
            if overlaps < 2 {
                return Err(Error::AlleviatedRequiresOverlap);
            }
            let plan = make_plan(n, overlaps, false)?;
            let seq = alleviated_split(stream, &plan)?;
            build_distributed(&seq.points, k)
        }
        ToiStrategy::Extreme { seed } => {
            let mut points = standard_points(stream, n)?;
            fisher_yates(&mut points, seed);
            build_distributed(&points, k)
        }
        ToiStrategy::InterBatch { seed } => {
            let mut matrix = apply_strategy(stream, n, k, ToiStrategy::Standard)?;
            shuffle_rows(&mut matrix, seed);
            Ok(matrix)
        }
    }
}

fn standard_points(
    stream: &TokenStream,
    n: usize,
) -> Result<Vec<crate::discretize::DataPointRef>> {
    if n == 0 || n > stream.len() {
        return Err(Error::PointLongerThanStream {
            n,
            t: stream.len(),
        });
    }
    Ok(split_with_offset(stream, n, 0))
}

fn shuffle_rows(matrix: &mut BatchMatrix, seed: u64) {
    let mut order: Vec<usize> = (0..matrix.num_batches).collect();
    fisher_yates(&mut order, seed);
    let mut cells = Vec::with_capacity(matrix.cells.len());
    for row in order {
        cells.extend_from_slice(matrix.row(row));
    }
    matrix.cells = cells;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::DataPointRef;

    fn stream_of(t: usize) -> TokenStream {
        TokenStream::from_ids((0..t as u32).collect())
    }

    fn sorted_cells(matrix: &BatchMatrix) -> Vec<DataPointRef> {
        let mut cells = matrix.cells.clone();
        cells.sort();
        cells
    }

    #[test]
    fn parse_round_trip() {
        for s in ["standard", "extreme:42", "interbatch:7", "alleviated:10"] {
            let strategy: ToiStrategy = s.parse().unwrap();
            assert_eq!(strategy.to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_bad_inputs() {
        assert!("".parse::<ToiStrategy>().is_err());
        assert!("turbo".parse::<ToiStrategy>().is_err());
        assert!("extreme".parse::<ToiStrategy>().is_err());
        assert!("extreme:abc".parse::<ToiStrategy>().is_err());
        assert!("interbatch".parse::<ToiStrategy>().is_err());
        assert!("standard:1".parse::<ToiStrategy>().is_err());
        assert!("alleviated".parse::<ToiStrategy>().is_err());
        assert!(matches!(
            "alleviated:1".parse::<ToiStrategy>().unwrap_err(),
            Error::AlleviatedRequiresOverlap
        ));
        assert!(matches!(
            "alleviated:0".parse::<ToiStrategy>().unwrap_err(),
            Error::AlleviatedRequiresOverlap
        ));
    }

    #[test]
    fn extreme_is_deterministic_per_seed() {
        // k divides the point count (211 / 4 = 52 points, k = 4), so no
        // points are dropped and different seeds keep the same multiset
        let stream = stream_of(211);
        let a = apply_strategy(&stream, 4, 4, ToiStrategy::Extreme { seed: 9 }).unwrap();
        let b = apply_strategy(&stream, 4, 4, ToiStrategy::Extreme { seed: 9 }).unwrap();
        assert_eq!(a, b);

        let c = apply_strategy(&stream, 4, 4, ToiStrategy::Extreme { seed: 10 }).unwrap();
        assert_ne!(a.cells, c.cells);
        assert_eq!(sorted_cells(&a), sorted_cells(&c));
        assert_eq!(a.dropped, 0);
    }

    #[test]
    fn extreme_preserves_standard_multiset() {
        let stream = stream_of(163);
        let standard = apply_strategy(&stream, 5, 4, ToiStrategy::Standard).unwrap();
        let extreme = apply_strategy(&stream, 5, 4, ToiStrategy::Extreme { seed: 3 }).unwrap();
        // same number of retained cells drawn from the same point multiset
        assert_eq!(extreme.cells.len(), standard.cells.len());
        let mut all_points = split_with_offset(&stream, 5, 0);
        all_points.sort();
        for cell in &extreme.cells {
            assert!(all_points.binary_search(cell).is_ok());
        }
    }

    #[test]
    fn interbatch_permutes_whole_rows() {
        let stream = stream_of(401);
        let standard = apply_strategy(&stream, 4, 5, ToiStrategy::Standard).unwrap();
        let shuffled = apply_strategy(&stream, 4, 5, ToiStrategy::InterBatch { seed: 11 }).unwrap();
        let mut standard_rows: Vec<Vec<DataPointRef>> =
            standard.rows().map(|r| r.to_vec()).collect();
        let mut shuffled_rows: Vec<Vec<DataPointRef>> =
            shuffled.rows().map(|r| r.to_vec()).collect();
        assert_ne!(standard_rows, shuffled_rows);
        standard_rows.sort();
        shuffled_rows.sort();
        assert_eq!(standard_rows, shuffled_rows);
    }

    #[test]
    fn alleviated_uses_overlapped_points() {
        let stream = stream_of(130);
        let alleviated =
            apply_strategy(&stream, 10, 3, ToiStrategy::Alleviated { overlaps: 2 }).unwrap();
        assert!(alleviated.cells.iter().any(|c| c.seq_id == 1));
        // overlap count 1 handed in directly is rejected
        assert!(matches!(
            apply_strategy(&stream, 10, 3, ToiStrategy::Alleviated { overlaps: 1 }).unwrap_err(),
            Error::AlleviatedRequiresOverlap
        ));
    }

    #[test]
    fn window_longer_than_stream_rejected() {
        let stream = stream_of(3);
        assert!(apply_strategy(&stream, 10, 2, ToiStrategy::Standard).is_err());
        assert!(apply_strategy(&stream, 0, 2, ToiStrategy::Standard).is_err());
    }

    #[test]
    fn zero_batch_size_rejected() {
        let stream = stream_of(30);
        assert!(matches!(
            apply_strategy(&stream, 3, 0, ToiStrategy::Standard).unwrap_err(),
            Error::ZeroBatchSize
        ));
    }
}
