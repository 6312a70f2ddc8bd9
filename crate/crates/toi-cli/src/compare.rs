//! The `compare` subcommand: one stream, all four strategies, full artifact
//! set, and a summary table in CSV and aligned-text form.

use std::path::Path;

use anyhow::{bail, Context, Result};

use toi_core::{
    apply_strategy, detect_row_duplicates, epoch_budget, make_plan, pair_coverage,
    period_analysis, row_diversity, toi_ratio, GrayscaleMatrix, ToiStrategy,
};

use crate::{load_stream, Outputs};

const COLUMNS: [&str; 15] = [
    "strategy",
    "points",
    "batches",
    "k",
    "dropped",
    "p",
    "step",
    "ratio",
    "gcd",
    "period",
    "repetitions",
    "max_cluster",
    "overlap_pairs",
    "mean_distinct",
    "epoch_budget",
];

#[allow(clippy::too_many_arguments)]
pub fn cmd_compare(
    input: &Path,
    n: usize,
    k: usize,
    alleviated: usize,
    seed: u64,
    epochs: u64,
    out_dir: &Path,
    outputs: &mut Outputs,
) -> Result<()> {
    if alleviated < 2 {
        bail!("{}", toi_core::Error::AlleviatedRequiresOverlap);
    }
    let stream = load_stream(input)?;
    outputs.create_dir(out_dir)?;

    let strategies = [
        ("standard", ToiStrategy::Standard),
        ("extreme", ToiStrategy::Extreme { seed }),
        ("interbatch", ToiStrategy::InterBatch { seed }),
        ("alleviated", ToiStrategy::Alleviated { overlaps: alleviated }),
    ];

    let mut rows: Vec<Vec<String>> = Vec::new();
    for (label, strategy) in strategies {
        let p = strategy.overlaps();
        let plan = make_plan(n, p, false)?;
        let matrix = apply_strategy(&stream, n, k, strategy)
            .with_context(|| format!("strategy {label}"))?;

        outputs.write(
            &out_dir.join(format!("{label}.batches.txt")),
            matrix.to_manifest_string().as_bytes(),
        )?;

        let coverage = pair_coverage(stream.len(), &plan)?;
        outputs.write(
            &out_dir.join(format!("{label}.coverage.csv")),
            coverage.to_csv_string().as_bytes(),
        )?;

        if matrix.is_empty() {
            bail!("strategy {label}: no batches (k={k} exceeds the point count)");
        }
        outputs.write(
            &out_dir.join(format!("{label}.pgm")),
            &GrayscaleMatrix::from_batches(&matrix, stream.len()).to_pgm_bytes(),
        )?;

        let duplicates = detect_row_duplicates(&matrix, n);
        let diversity = row_diversity(&matrix, stream.len());
        let period = period_analysis(p, k);
        let budget = epoch_budget(epochs, p)?;
        rows.push(vec![
            label.to_owned(),
            (matrix.cells.len() + matrix.dropped).to_string(),
            matrix.num_batches.to_string(),
            k.to_string(),
            matrix.dropped.to_string(),
            p.to_string(),
            plan.step.to_string(),
            toi_ratio(p)?.to_string(),
            period.gcd.to_string(),
            period.period.to_string(),
            period.repetitions.to_string(),
            duplicates.max_cluster.to_string(),
            duplicates.total_overlapping_pairs.to_string(),
            format!("{:.2}", diversity.mean_distinct),
            format!("{}+{}", budget.alleviated_epochs, budget.remainder),
        ]);
    }

    let csv = summary_csv(&rows);
    outputs.write(&out_dir.join("summary.csv"), csv.as_bytes())?;
    let text = summary_text(&rows);
    outputs.write(&out_dir.join("summary.txt"), text.as_bytes())?;
    print!("{text}");
    Ok(())
}

fn summary_csv(rows: &[Vec<String>]) -> String {
    let mut out = COLUMNS.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn summary_text(rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = COLUMNS.iter().map(|c| c.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let render_row = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        let mut line = padded.join("  ");
        line.truncate(line.trim_end().len());
        line.push('\n');
        line
    };
    let mut out = render_row(COLUMNS.to_vec());
    for row in rows {
        out.push_str(&render_row(row.iter().map(String::as_str).collect()));
    }
    out
}
