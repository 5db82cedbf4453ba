//! Binary interaction features for downstream predictors.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use oric_core::{LabeledBatch, Pattern};

use crate::error::{DataError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EmissionReport {
    pub rows: usize,
    /// Each emitted interaction with the fraction of rows where it fires.
    pub positive_rates: Vec<(Pattern, f64)>,
}

pub fn emit_interaction_features(
    batch: &LabeledBatch,
    interactions: &[Pattern],
    out_path: &Path,
) -> Result<EmissionReport> {
    let file = File::create(out_path).map_err(|e| DataError::io(out_path, e))?;
    let mut out = BufWriter::new(file);
    let report = write_interaction_features(batch, interactions, &mut out)?;
    out.flush().map_err(|e| DataError::io(out_path, e))?;
    Ok(report)
}

/// Writes a `row` index column plus one 0/1 column per interaction, named by
/// the canonical pattern string.
pub fn write_interaction_features<W: Write>(
    batch: &LabeledBatch,
    interactions: &[Pattern],
    out: W,
) -> Result<EmissionReport> {
    for p in interactions {
        batch
            .check_pattern(p)
            .map_err(|e| DataError::SchemaMismatch(e.to_string()))?;
    }
    let mut wtr = csv::Writer::from_writer(out);
    let mut header = vec![String::from("row")];
    header.extend(interactions.iter().map(|p| p.to_string()));
    wtr.write_record(&header)?;

    let mut fired = vec![0usize; interactions.len()];
    let mut record: Vec<String> = Vec::with_capacity(interactions.len() + 1);
    for row in 0..batch.num_rows() {
        record.clear();
        record.push(row.to_string());
        for (j, p) in interactions.iter().enumerate() {
            let hit = batch.row_contains(row, p);
            fired[j] += usize::from(hit);
            record.push(if hit { "1" } else { "0" }.to_owned());
        }
        wtr.write_record(&record)?;
    }
    wtr.flush().map_err(|e| DataError::io("<output>", e))?;

    let rows = batch.num_rows();
    let positive_rates = interactions
        .iter()
        .cloned()
        .zip(fired)
        .map(|(p, n)| {
            (
                p,
                if rows == 0 {
                    0.0
                } else {
                    n as f64 / rows as f64
                },
            )
        })
        .collect();
    Ok(EmissionReport {
        rows,
        positive_rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> LabeledBatch {
        LabeledBatch::new(
            vec!["A".into(), "B".into(), "C".into()],
            vec![vec![1, 1, 1], vec![1, 2, 1], vec![1, 1, 2]],
            vec![1, 0, 1],
            1,
        )
        .unwrap()
    }

    #[test]
    fn toy_interaction_column() {
        let ab = Pattern::from_items([(0, 1), (1, 1)]).unwrap();
        let mut buf = Vec::new();
        let report =
            write_interaction_features(&toy(), std::slice::from_ref(&ab), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "row,f0=1&f1=1\n0,1\n1,0\n2,1\n");
        assert_eq!(report.positive_rates, vec![(ab, 2.0 / 3.0)]);
    }

    #[test]
    fn no_interactions_gives_index_only() {
        let mut buf = Vec::new();
        write_interaction_features(&toy(), &[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "row\n0\n1\n2\n");
    }

    #[test]
    fn unknown_feature_rejected() {
        let p = Pattern::from_items([(5, 1)]).unwrap();
        assert!(matches!(
            write_interaction_features(&toy(), &[p], Vec::new()),
            Err(DataError::SchemaMismatch(_))
        ));
    }
}
