//! Text reports. Everything here is deterministic: same inputs, same bytes.

use std::fmt::Write as _;

use oric_core::oracle::exact_scan;
use oric_core::{LabeledBatch, OricModel, Pattern, PlannerResult, Selection, UpdateReport};

use crate::encoder::EncoderState;
use crate::error::{DataError, Result};

pub const SELECTION_HEADER: &str =
    "rank\tpattern\tfreq_pos\tfreq_neg\tconfidence\tpruned_by\tdescription";

/// Human-readable form of a pattern, e.g. `color=red & size=<others>`.
pub fn describe(pattern: &Pattern, encoder: Option<&EncoderState>) -> String {
    match encoder {
        Some(enc) => pattern
            .items()
            .iter()
            .map(|i| enc.describe(i.feature, i.category))
            .collect::<Vec<_>>()
            .join(" & "),
        None => pattern.to_string(),
    }
}

/// Tab-separated selection rows. Rank counts surviving interactions only;
/// pruned rows are listed after them with rank `-` when `include_pruned`.
pub fn selection_tsv(
    selection: &Selection,
    encoder: Option<&EncoderState>,
    include_pruned: bool,
) -> String {
    let mut out = String::from(SELECTION_HEADER);
    out.push('\n');
    let mut row = |rank: String, r: &oric_core::RankedInteraction| {
        let pruned = r
            .pruned_by
            .as_ref()
            .map_or("-".to_owned(), |p| p.to_string());
        let _ = writeln!(
            out,
            "{rank}\t{}\t{}\t{}\t{}\t{pruned}\t{}",
            r.pattern,
            r.freq_pos,
            r.freq_neg,
            r.confidence,
            describe(&r.pattern, encoder)
        );
    };
    for (i, r) in selection.selected().enumerate() {
        row((i + 1).to_string(), r);
    }
    if include_pruned {
        for r in selection.pruned() {
            row("-".to_owned(), r);
        }
    }
    out
}

/// Aligned table for people; [`selection_tsv`] is the parseable form.
pub fn selection_table(
    selection: &Selection,
    encoder: Option<&EncoderState>,
    include_pruned: bool,
) -> String {
    let mut out = format!(
        "{:>5}  {:>10}  {:>10}  {:>10}  interaction\n",
        "rank", "confidence", "freq_pos", "freq_neg"
    );
    let mut row = |rank: String, r: &oric_core::RankedInteraction| {
        let _ = write!(
            out,
            "{rank:>5}  {:>10.6}  {:>10.6}  {:>10.6}  {}",
            r.confidence,
            r.freq_pos,
            r.freq_neg,
            describe(&r.pattern, encoder)
        );
        if let Some(p) = &r.pruned_by {
            let _ = write!(out, "  (pruned by {})", describe(p, encoder));
        }
        out.push('\n');
    };
    for (i, r) in selection.selected().enumerate() {
        row((i + 1).to_string(), r);
    }
    if include_pruned {
        for r in selection.pruned() {
            row("-".to_owned(), r);
        }
    }
    out
}

/// Reads back the ranked (unpruned) patterns of a [`selection_tsv`] file.
pub fn parse_selection(text: &str) -> Result<Vec<Pattern>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.starts_with("rank\tpattern") => {}
        _ => return Err(DataError::CorruptFile("missing selection header".into())),
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split('\t');
        let rank = cols.next().unwrap_or_default();
        let pattern = cols.next().ok_or_else(|| DataError::MalformedRow {
            row: n + 1,
            reason: "missing pattern column".into(),
        })?;
        if rank == "-" {
            continue;
        }
        let p: Pattern = pattern.parse().map_err(|e| DataError::MalformedRow {
            row: n + 1,
            reason: format!("{e}"),
        })?;
        out.push(p);
    }
    Ok(out)
}

/// Estimated against exact per-class frequencies and confidence.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub pattern: Pattern,
    pub est_freq_neg: Option<f64>,
    pub exact_freq_neg: f64,
    pub est_freq_pos: Option<f64>,
    pub exact_freq_pos: f64,
    pub est_confidence: Option<f64>,
    pub exact_confidence: Option<f64>,
}

pub fn compare_with_exact(
    model: &OricModel,
    batch: &LabeledBatch,
    patterns: &[Pattern],
) -> Result<Vec<ComparisonRow>> {
    let exact = exact_scan(batch, patterns.iter())?;
    Ok(patterns
        .iter()
        .map(|p| {
            let e = &exact[p];
            let est = model.estimate(p);
            let stats = model.stats(p);
            ComparisonRow {
                pattern: p.clone(),
                est_freq_neg: stats.and_then(|s| s.frequency(oric_core::Label::Negative).ok()),
                exact_freq_neg: e.freq_neg,
                est_freq_pos: stats.and_then(|s| s.frequency(oric_core::Label::Positive).ok()),
                exact_freq_pos: e.freq_pos,
                est_confidence: est.map(|r| r.confidence),
                exact_confidence: e.confidence,
            }
        })
        .collect())
}

fn opt(v: Option<f64>) -> String {
    v.map_or("-".to_owned(), |x| format!("{x:.6}"))
}

pub fn comparison_tsv(rows: &[ComparisonRow], encoder: Option<&EncoderState>) -> String {
    let mut out = String::from(
        "pattern\tp0_est\tp0_exact\tp1_est\tp1_exact\tq1_est\tq1_exact\tdescription\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{:.6}\t{}\t{:.6}\t{}\t{}\t{}",
            r.pattern,
            opt(r.est_freq_neg),
            r.exact_freq_neg,
            opt(r.est_freq_pos),
            r.exact_freq_pos,
            opt(r.est_confidence),
            opt(r.exact_confidence),
            describe(&r.pattern, encoder)
        );
    }
    out
}

pub fn comparison_table(rows: &[ComparisonRow], encoder: Option<&EncoderState>) -> String {
    let mut out = format!(
        "{:>9} {:>9} {:>9} {:>9} {:>9} {:>9}  interaction\n",
        "p0_est", "p0", "p1_est", "p1", "q1_est", "q1"
    );
    let cell = |v: Option<f64>| v.map_or("-".to_owned(), |x| format!("{x:.4}"));
    for r in rows {
        let _ = writeln!(
            out,
            "{:>9} {:>9.4} {:>9} {:>9.4} {:>9} {:>9}  {}",
            cell(r.est_freq_neg),
            r.exact_freq_neg,
            cell(r.est_freq_pos),
            r.exact_freq_pos,
            cell(r.est_confidence),
            cell(r.exact_confidence),
            describe(&r.pattern, encoder)
        );
    }
    out
}

pub fn update_summary(r: &UpdateReport) -> String {
    let mut out = format!(
        "period {}: {} positive rows, {} negative rows, {} chains per class\n\
         tail patterns {}, new patterns {}, evicted {}, registry size {}\n",
        r.period,
        r.rows_pos,
        r.rows_neg,
        r.chains_per_class,
        r.tail_patterns,
        r.new_patterns,
        r.evicted,
        r.registry_size
    );
    if let Some(label) = r.missing_class {
        let _ = writeln!(
            out,
            "warning: no rows of class {} in this batch",
            label.code()
        );
    }
    out
}

pub fn plan_summary(r: &PlannerResult) -> String {
    format!(
        "max_length (L*)\t{}\nnum_chains (M*)\t{}\nm_bar\t{}\n\
         detect_prob_frequent\t{}\ndetect_prob_infrequent\t{}\n\
         false_positive_bound\t{}\nmulti_update_fp_bound\t{}\n",
        r.l_star,
        r.m_star,
        r.m_bar,
        r.detect_prob_frequent,
        r.detect_prob_infrequent,
        r.false_positive_bound,
        r.multi_update_fp_bound
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use oric_core::RankedInteraction;

    fn sel() -> Selection {
        let a = Pattern::from_items([(0, 1)]).unwrap();
        let ab = Pattern::from_items([(0, 1), (1, 2)]).unwrap();
        Selection {
            ranked: vec![
                RankedInteraction {
                    pattern: a.clone(),
                    freq_pos: 0.5,
                    freq_neg: 0.25,
                    confidence: 0.3,
                    pruned_by: None,
                },
                RankedInteraction {
                    pattern: ab,
                    freq_pos: 0.4,
                    freq_neg: 0.2,
                    confidence: 0.25,
                    pruned_by: Some(a),
                },
            ],
        }
    }

    #[test]
    fn selection_round_trip() {
        let text = selection_tsv(&sel(), None, true);
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "1\tf0=1\t0.5\t0.25\t0.3\t-\tf0=1"
        );
        assert!(text.lines().nth(2).unwrap().starts_with("-\tf0=1&f1=2"));
        assert_eq!(parse_selection(&text).unwrap(), sel().selected_patterns());
    }

    #[test]
    fn selection_without_header_rejected() {
        assert!(parse_selection("1\tf0=1\n").is_err());
    }

    #[test]
    fn table_marks_pruned_rows() {
        let text = selection_table(&sel(), None, true);
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(2).unwrap().ends_with("(pruned by f0=1)"));
        assert_eq!(selection_table(&sel(), None, false).lines().count(), 2);
    }
}
