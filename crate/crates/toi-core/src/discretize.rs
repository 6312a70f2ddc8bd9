//! Overlapped data-point construction.
//!
//! A stream of `t` tokens is cut into fixed windows of `n` tokens. The
//! standard cut starts at token 0 and drops the remainder. The alleviated
//! variant repeats the cut `p` times with starting offsets
//! `0, step, 2*step, ..., (p-1)*step` where `step = n / p`, then concatenates
//! the `p` resulting sequences in offset order. Every window is an index view
//! into the stream; tokens are never copied.

use std::fmt::Write as _;

use crate::corpus::TokenStream;
use crate::error::{Error, Result};

/// Configuration of an overlapped split: window length, overlap count, and
/// the derived per-sequence starting offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapPlan {
    /// Tokens per data point (window length).
    pub tokens_per_point: usize,
    /// Number of overlapped sequences; 1 means the standard single cut.
    pub overlaps: usize,
    /// Offset distance between consecutive sequences.
    pub step: usize,
    /// Starting token offset of each sequence, strictly increasing.
    pub offsets: Vec<usize>,
    /// Whether the plan was built under strict divisibility.
    pub strict: bool,
    /// Set when the window length was not divisible by the overlap count and
    /// the step was floored.
    pub warning: Option<String>,
}

/// One fixed-length window into a token stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DataPointRef {
    /// Which overlapped sequence the point belongs to.
    pub seq_id: usize,
    /// Position within that sequence.
    pub rank: usize,
    /// First token index.
    pub start: usize,
    /// Window length in tokens.
    pub len: usize,
}

impl DataPointRef {
    /// Token index range covered by the point.
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// The concatenated overlapped sequences: all points of sequence 0 in rank
/// order, then sequence 1, and so on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataPointSequence {
    pub plan: OverlapPlan,
    pub points: Vec<DataPointRef>,
    /// Retained point count of each overlapped sequence.
    pub per_sequence_counts: Vec<usize>,
    /// Length of the underlying stream.
    pub stream_len: usize,
}

/// Build an [`OverlapPlan`]. With `allow_nondivisible` unset the window
/// length must be a multiple of the overlap count; set, the step is floored
/// and a warning is recorded on the plan.
pub fn make_plan(n: usize, p: usize, allow_nondivisible: bool) -> Result<OverlapPlan> {
    if p == 0 || p > n {
        return Err(Error::OverlapOutOfRange { n, p });
    }
    let mut warning = None;
    if n % p != 0 {
        if !allow_nondivisible {
            return Err(Error::NondivisibleOverlap { n, p });
        }
        warning = Some(format!(
            "n={n} not divisible by p={p}: step floored to {}, final inter-offset gap absorbs {} token(s)",
            n / p,
            n - (n / p) * p
        ));
    }
    let step = n / p;
    Ok(OverlapPlan {
        tokens_per_point: n,
        overlaps: p,
        step,
        offsets: (0..p).map(|c| c * step).collect(),
        strict: !allow_nondivisible,
        warning,
    })
}

/// Cut one sequence of windows from `stream`, starting at `offset`.
/// Returns `floor((t - offset) / n)` points tagged with `seq_id` 0; whatever
/// tokens remain past the last full window are dropped. Degenerate inputs
/// (`offset >= t`, `n == 0`) yield an empty list.
pub fn split_with_offset(stream: &TokenStream, n: usize, offset: usize) -> Vec<DataPointRef> {
    split_sequence(stream.len(), n, offset, 0)
}

fn split_sequence(t: usize, n: usize, offset: usize, seq_id: usize) -> Vec<DataPointRef> {
    if n == 0 || offset >= t {
        return Vec::new();
    }
    let count = (t - offset) / n;
    (0..count)
        .map(|rank| DataPointRef {
            seq_id,
            rank,
            start: offset + rank * n,
            len: n,
        })
        .collect()
}

/// Cut all `p` overlapped sequences of `plan` and concatenate them in offset
/// order.
pub fn alleviated_split(stream: &TokenStream, plan: &OverlapPlan) -> Result<DataPointSequence> {
    let t = stream.len();
    if plan.tokens_per_point > t {
        return Err(Error::PointLongerThanStream {
            n: plan.tokens_per_point,
            t,
        });
    }
    let mut points = Vec::new();
    let mut per_sequence_counts = Vec::with_capacity(plan.overlaps);
    for (seq_id, &offset) in plan.offsets.iter().enumerate() {
        let seq = split_sequence(t, plan.tokens_per_point, offset, seq_id);
        per_sequence_counts.push(seq.len());
        points.extend(seq);
    }
    Ok(DataPointSequence {
        plan: plan.clone(),
        points,
        per_sequence_counts,
        stream_len: t,
    })
}

/// Closed form for the number of points [`alleviated_split`] yields on a
/// stream of `t` tokens: the sum over offsets of `floor((t - offset) / n)`,
/// where terms with `offset >= t` contribute nothing.
pub fn count_points(t: usize, plan: &OverlapPlan) -> usize {
    if plan.tokens_per_point == 0 {
        return 0;
    }
    plan.offsets
        .iter()
        .map(|&offset| {
            if offset >= t {
                0
            } else {
                (t - offset) / plan.tokens_per_point
            }
        })
        .sum()
}

impl OverlapPlan {
    /// Flat key-value document: `n`, `p`, `step`, `offsets` (comma
    /// separated), `strict` (0/1).
    pub fn to_kv_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n={}", self.tokens_per_point);
        let _ = writeln!(out, "p={}", self.overlaps);
        let _ = writeln!(out, "step={}", self.step);
        let offsets: Vec<String> = self.offsets.iter().map(|o| o.to_string()).collect();
        let _ = writeln!(out, "offsets={}", offsets.join(","));
        let _ = writeln!(out, "strict={}", if self.strict { 1 } else { 0 });
        out
    }

    /// Parse a document produced by [`OverlapPlan::to_kv_string`].
    pub fn from_kv_str(doc: &str) -> Result<OverlapPlan> {
        let mut n = None;
        let mut p = None;
        let mut step = None;
        let mut offsets: Option<Vec<usize>> = None;
        let mut strict = None;
        for (idx, raw) in doc.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |reason: String| Error::PlanParse {
                line: idx + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key=value, got {line:?}")))?;
            match key {
                "n" => n = Some(parse_usize(value, idx)?),
                "p" => p = Some(parse_usize(value, idx)?),
                "step" => step = Some(parse_usize(value, idx)?),
                "offsets" => {
                    let parsed: Result<Vec<usize>> = if value.is_empty() {
                        Ok(Vec::new())
                    } else {
                        value.split(',').map(|v| parse_usize(v, idx)).collect()
                    };
                    offsets = Some(parsed?);
                }
                "strict" => match value {
                    "0" => strict = Some(false),
                    "1" => strict = Some(true),
                    other => return Err(parse_err(format!("strict must be 0 or 1, got {other:?}"))),
                },
                other => return Err(parse_err(format!("unknown key {other:?}"))),
            }
        }
        let missing = |key: &str| Error::PlanParse {
            line: 0,
            reason: format!("missing key {key:?}"),
        };
        let plan = OverlapPlan {
            tokens_per_point: n.ok_or_else(|| missing("n"))?,
            overlaps: p.ok_or_else(|| missing("p"))?,
            step: step.ok_or_else(|| missing("step"))?,
            offsets: offsets.ok_or_else(|| missing("offsets"))?,
            strict: strict.ok_or_else(|| missing("strict"))?,
            warning: None,
        };
        if plan.offsets.len() != plan.overlaps {
            return Err(Error::PlanParse {
                line: 0,
                reason: format!(
                    "offsets lists {} entries for p={}",
                    plan.offsets.len(),
                    plan.overlaps
                ),
            });
        }
        Ok(plan)
    }
}

fn parse_usize(value: &str, idx: usize) -> Result<usize> {
    value.trim().parse().map_err(|_| Error::PlanParse {
        line: idx + 1,
        reason: format!("expected unsigned integer, got {value:?}"),
    })
}

impl DataPointSequence {
    /// Manifest document: header `TOIDP01 N P T count`, then one
    /// `seq_id rank start` line per point.
    pub fn to_manifest_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "TOIDP01 {} {} {} {}",
            self.plan.tokens_per_point,
            self.plan.overlaps,
            self.stream_len,
            self.points.len()
        );
        for point in &self.points {
            let _ = writeln!(out, "{} {} {}", point.seq_id, point.rank, point.start);
        }
        out
    }

    pub fn write_manifest(&self, mut w: impl std::io::Write) -> Result<()> {
        w.write_all(self.to_manifest_string().as_bytes())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream_of(t: usize) -> TokenStream {
        TokenStream::from_ids((0..t as u32).collect())
    }

    #[test]
    fn plan_70_by_10() {
        let plan = make_plan(70, 10, false).unwrap();
        assert_eq!(plan.step, 7);
        assert_eq!(plan.offsets, vec![0, 7, 14, 21, 28, 35, 42, 49, 56, 63]);
        assert!(plan.strict);
        assert!(plan.warning.is_none());
    }

    #[test]
    fn plan_3_by_3() {
        let plan = make_plan(3, 3, false).unwrap();
        assert_eq!(plan.step, 1);
        assert_eq!(plan.offsets, vec![0, 1, 2]);
    }

    #[test]
    fn plan_single_overlap_is_standard() {
        let plan = make_plan(5, 1, false).unwrap();
        assert_eq!(plan.step, 5);
        assert_eq!(plan.offsets, vec![0]);
    }

    #[test]
    fn plan_rejects_bad_overlap_counts() {
        assert!(matches!(
            make_plan(3, 4, false).unwrap_err(),
            Error::OverlapOutOfRange { n: 3, p: 4 }
        ));
        assert!(matches!(
            make_plan(3, 0, false).unwrap_err(),
            Error::OverlapOutOfRange { n: 3, p: 0 }
        ));
    }

    #[test]
    fn plan_nondivisible_needs_flag() {
        assert!(matches!(
            make_plan(7, 2, false).unwrap_err(),
            Error::NondivisibleOverlap { n: 7, p: 2 }
        ));
        let plan = make_plan(7, 2, true).unwrap();
        assert_eq!(plan.step, 3);
        assert_eq!(plan.offsets, vec![0, 3]);
        assert!(!plan.strict);
        assert!(plan.warning.is_some());
    }

    #[test]
    fn split_13_by_4() {
        let points = split_with_offset(&stream_of(13), 4, 0);
        assert_eq!(points.len(), 3);
        assert_eq!(
            points.iter().map(|p| p.start).collect::<Vec<_>>(),
            vec![0, 4, 8]
        );
    }

    #[test]
    fn split_13_by_3_offset_2() {
        let points = split_with_offset(&stream_of(13), 3, 2);
        assert_eq!(
            points.iter().map(|p| p.start).collect::<Vec<_>>(),
            vec![2, 5, 8]
        );
        for (rank, p) in points.iter().enumerate() {
            assert_eq!(p.rank, rank);
            assert_eq!(p.len, 3);
            assert!(p.range().end <= 13);
        }
    }

    #[test]
    fn split_offset_past_end_is_empty() {
        assert!(split_with_offset(&stream_of(13), 3, 13).is_empty());
        assert!(split_with_offset(&stream_of(13), 3, 20).is_empty());
        assert!(split_with_offset(&stream_of(0), 3, 0).is_empty());
    }

    #[test]
    fn alleviated_13_by_3_overlap_3() {
        let plan = make_plan(3, 3, false).unwrap();
        let seq = alleviated_split(&stream_of(13), &plan).unwrap();
        assert_eq!(seq.points.len(), 11);
        assert_eq!(seq.per_sequence_counts, vec![4, 4, 3]);
        // grouped by sequence, rank-ordered inside each group
        let mut expected_seq = 0;
        let mut expected_rank = 0;
        for p in &seq.points {
            if p.seq_id != expected_seq {
                expected_seq = p.seq_id;
                expected_rank = 0;
            }
            assert_eq!(p.rank, expected_rank);
            expected_rank += 1;
        }
    }

    #[test]
    fn second_sequence_starts_at_step() {
        let plan = make_plan(70, 10, false).unwrap();
        let seq = alleviated_split(&stream_of(700), &plan).unwrap();
        let first_of_s2 = seq
            .points
            .iter()
            .find(|p| p.seq_id == 1)
            .expect("sequence 1 exists");
        assert_eq!(first_of_s2.start, 7);
    }

    #[test]
    fn single_overlap_matches_plain_split() {
        let stream = stream_of(103);
        let plan = make_plan(10, 1, false).unwrap();
        let seq = alleviated_split(&stream, &plan).unwrap();
        assert_eq!(seq.points, split_with_offset(&stream, 10, 0));
    }

    #[test]
    fn alleviated_rejects_window_longer_than_stream() {
        let plan = make_plan(20, 2, false).unwrap();
        assert!(matches!(
            alleviated_split(&stream_of(13), &plan).unwrap_err(),
            Error::PointLongerThanStream { n: 20, t: 13 }
        ));
    }

    #[test]
    fn count_points_examples() {
        assert_eq!(count_points(13, &make_plan(3, 3, false).unwrap()), 11);
        assert_eq!(count_points(13, &make_plan(4, 1, false).unwrap()), 3);
        assert_eq!(count_points(700, &make_plan(70, 10, false).unwrap()), 91);
    }

    #[test]
    fn count_points_matches_enumeration_for_700_70_10() {
        // independent check of the closed form: enumerate each sequence
        let stream = stream_of(700);
        let plan = make_plan(70, 10, false).unwrap();
        let total: usize = plan
            .offsets
            .iter()
            .map(|&o| split_with_offset(&stream, 70, o).len())
            .sum();
        assert_eq!(total, 91);
        assert_eq!(count_points(700, &plan), total);
    }

    #[test]
    fn plan_kv_round_trip() {
        let plan = make_plan(70, 10, false).unwrap();
        let doc = plan.to_kv_string();
        assert_eq!(
            doc,
            "n=70\np=10\nstep=7\noffsets=0,7,14,21,28,35,42,49,56,63\nstrict=1\n"
        );
        let back = OverlapPlan::from_kv_str(&doc).unwrap();
        assert_eq!(back, plan);
    }

    #[test]
    fn plan_kv_rejects_garbage() {
        assert!(OverlapPlan::from_kv_str("n=3\np=junk\n").is_err());
        assert!(OverlapPlan::from_kv_str("n=3\n").is_err());
        assert!(OverlapPlan::from_kv_str("nonsense\n").is_err());
        assert!(OverlapPlan::from_kv_str("n=3\np=1\nstep=3\noffsets=0,1\nstrict=1\n").is_err());
    }

    #[test]
    fn manifest_golden() {
        let plan = make_plan(3, 3, false).unwrap();
        let seq = alleviated_split(&stream_of(13), &plan).unwrap();
        let manifest = seq.to_manifest_string();
        let expected = "TOIDP01 3 3 13 11\n\
                        0 0 0\n0 1 3\n0 2 6\n0 3 9\n\
                        1 0 1\n1 1 4\n1 2 7\n1 3 10\n\
                        2 0 2\n2 1 5\n2 2 8\n";
        assert_eq!(manifest, expected);
    }
}
