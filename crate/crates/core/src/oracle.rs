//! Ground truth for testing the streaming estimates.
//!
//! Nothing here reuses the chain or estimator code paths: containment is
//! checked by a plain row scan, chains are materialized node by node, and
//! the estimator simulation draws occurrence counts straight from their
//! truncated geometric law.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use crate::error::{OricError, Result};
use crate::math::{floor, ln, powi, sqrt};
use crate::pattern::{Item, LabeledBatch, Pattern};

/// Exact per-class frequencies of one pattern in one batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactStats {
    pub freq_pos: f64,
    pub freq_neg: f64,
    /// `None` when the pattern occurs in neither class.
    pub confidence: Option<f64>,
    pub support_pos: u64,
    pub support_neg: u64,
}

/// Counts every pattern by scanning all rows.
pub fn exact_scan<'a, I>(batch: &LabeledBatch, patterns: I) -> Result<BTreeMap<Pattern, ExactStats>>
where
    I: IntoIterator<Item = &'a Pattern>,
{
    let width = batch.num_features();
    let patterns: Vec<&Pattern> = patterns.into_iter().collect();
    for p in &patterns {
        if p.items().iter().any(|it| it.feature as usize >= width) {
            return Err(OricError::SchemaMismatch(alloc::format!(
                "pattern {p} references a feature outside the {width}-feature batch"
            )));
        }
    }
    let labels = batch.labels();
    let rows_pos = labels.iter().filter(|&&y| y == 1).count() as u64;
    let rows_neg = labels.len() as u64 - rows_pos;

    let mut out = BTreeMap::new();
    for p in patterns {
        let (mut support_pos, mut support_neg) = (0u64, 0u64);
        for (row, &y) in labels.iter().enumerate() {
            let mut hit = true;
            for it in p.items() {
                if batch.columns()[it.feature as usize][row] != it.category {
                    hit = false;
                    break;
                }
            }
            if hit {
                if y == 1 {
                    support_pos += 1;
                } else {
                    support_neg += 1;
                }
            }
        }
        let ratio = |s: u64, n: u64| if n == 0 { 0.0 } else { s as f64 / n as f64 };
        let freq_pos = ratio(support_pos, rows_pos);
        let freq_neg = ratio(support_neg, rows_neg);
        let prior_pos = ratio(rows_pos, rows_pos + rows_neg);
        let joint_pos = freq_pos * prior_pos;
        let joint = joint_pos + freq_neg * (1.0 - prior_pos);
        let confidence = (joint > 0.0).then(|| joint_pos / joint);
        out.insert(
            p.clone(),
            ExactStats {
                freq_pos,
                freq_neg,
                confidence,
                support_pos,
                support_neg,
            },
        );
    }
    Ok(out)
}

/// Exact counterpart of interaction selection: rank `candidates` by exact
/// positive frequency, keep `d_freq`, keep the `d_conf` most confident, and
/// drop any whose confidence does not beat every candidate proper subset.
pub fn exact_select(
    batch: &LabeledBatch,
    candidates: &BTreeSet<Pattern>,
    d_freq: usize,
    d_conf: usize,
) -> Result<Vec<(Pattern, ExactStats)>> {
    let stats = exact_scan(batch, candidates)?;
    let mut scored: Vec<(&Pattern, &ExactStats)> = stats.iter().collect();
    scored.sort_by(|a, b| {
        b.1.freq_pos
            .partial_cmp(&a.1.freq_pos)
            .unwrap_or(Ordering::Equal)
            .then(a.0.order().cmp(&b.0.order()))
            .then(a.0.cmp(b.0))
    });
    scored.truncate(d_freq);
    let mut confident: Vec<(&Pattern, &ExactStats, f64)> = scored
        .into_iter()
        .filter_map(|(p, s)| s.confidence.map(|c| (p, s, c)))
        .collect();
    confident.sort_by(|a, b| {
        b.2.partial_cmp(&a.2)
            .unwrap_or(Ordering::Equal)
            .then(
                b.1.freq_pos
                    .partial_cmp(&a.1.freq_pos)
                    .unwrap_or(Ordering::Equal),
            )
            .then(a.0.order().cmp(&b.0.order()))
            .then(a.0.cmp(b.0))
    });
    confident.truncate(d_conf);
    Ok(confident
        .into_iter()
        .filter(|(p, _, c)| {
            stats.iter().all(|(q, s)| {
                !(q.order() < p.order() && q.is_subset_of(p))
                    || s.confidence.is_none_or(|qc| qc < *c)
            })
        })
        .map(|(p, s, _)| (p.clone(), *s))
        .collect())
}

/// Materializes a chain node by node: node 1 is the first sampled row,
/// node `r+1` is node `r` intersected with the next sampled row. Stops when
/// the node has at most `max_tail_size` items or `max_length` nodes exist.
pub fn explicit_chain<I>(
    batch: &LabeledBatch,
    samples: I,
    max_length: u32,
    max_tail_size: u32,
) -> Vec<BTreeSet<Item>>
where
    I: IntoIterator<Item = usize>,
{
    let row_set = |row: usize| -> BTreeSet<Item> {
        (0..batch.num_features())
            .map(|f| Item::new(f as u32, batch.columns()[f][row]))
            .collect()
    };
    let mut samples = samples.into_iter();
    let mut nodes: Vec<BTreeSet<Item>> = Vec::new();
    let Some(first) = samples.next() else {
        return nodes;
    };
    nodes.push(row_set(first));
    loop {
        let last = nodes.last().expect("nonempty");
        if last.len() <= max_tail_size as usize || nodes.len() >= max_length as usize {
            break;
        }
        let Some(row) = samples.next() else { break };
        let next: BTreeSet<Item> = last.intersection(&row_set(row)).copied().collect();
        nodes.push(next);
    }
    nodes
}

/// `Σ_{j<L} p^j`, the weight factor `(1 - p^L) / (1 - p)` with its `p → 1`
/// limit `L`.
fn survival_mass(p: f64, length: u32) -> f64 {
    let mut term = 1.0;
    let mut total = 0.0;
    for _ in 0..length {
        total += term;
        term *= p;
    }
    total
}

/// The frequency that the decayed estimate targets: a weighted average of
/// per-period frequencies with weights `(1 - p_t^L)/(1 - p_t) · γ^(T-t)`.
pub fn adjusted_frequency(history: &[f64], gamma: f64, length: u32) -> Result<f64> {
    if history.is_empty() {
        return Err(OricError::EmptyHistory);
    }
    if length == 0 {
        return Err(OricError::InvalidConfig("chain length must be at least 1"));
    }
    let last = history.len() - 1;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, &p) in history.iter().enumerate() {
        let w = survival_mass(p, length) * powi(gamma, (last - t) as u32);
        num += w * p;
        den += w;
    }
    Ok(num / den)
}

/// Number of nodes of a length-`L` chain that contain a pattern of per-row
/// frequency `p`: `P(k) = p^k (1-p)` for `k < L`, `P(L) = p^L`.
pub fn sample_occurrences<R: Rng + ?Sized>(p: f64, length: u32, rng: &mut R) -> u32 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return length;
    }
    // P(k >= j) = p^j, so k = floor(log U / log p) for U uniform on (0, 1].
    let u = 1.0 - rng.gen::<f64>();
    let k = floor(ln(u) / ln(p));
    if k >= length as f64 {
        length
    } else {
        k as u32
    }
}

/// Sample mean and standard deviation of the decayed frequency estimate
/// over `replicates` independent runs of `chains` chains per period.
pub fn simulate_estimator<R: Rng + ?Sized>(
    history: &[f64],
    gamma: f64,
    length: u32,
    chains: u32,
    replicates: u32,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if replicates < 2 {
        return Err(OricError::InvalidConfig("need at least two replicates"));
    }
    Ok(mean_std(&simulate_estimates(
        history, gamma, length, chains, replicates, rng,
    )?))
}

/// One final-period estimate per replicate; see [`simulate_estimator`].
pub fn simulate_estimates<R: Rng + ?Sized>(
    history: &[f64],
    gamma: f64,
    length: u32,
    chains: u32,
    replicates: u32,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if history.is_empty() {
        return Err(OricError::EmptyHistory);
    }
    Ok((0..replicates)
        .map(|_| {
            let (mut k_hat, mut i_hat) = (0.0f64, 0.0f64);
            for &p in history {
                k_hat *= gamma;
                i_hat *= gamma;
                let (mut k, mut i) = (0u64, 0u64);
                for _ in 0..chains {
                    let occ = sample_occurrences(p, length, rng);
                    k += occ as u64;
                    i += u64::from(occ < length);
                }
                k_hat += k as f64;
                i_hat += i as f64;
            }
            k_hat / (k_hat + i_hat)
        })
        .collect())
}

/// Sample mean and (n-1)-normalized standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, sqrt(var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use alloc::string::String;
    use alloc::vec;

    fn batch(columns: Vec<Vec<u32>>, labels: Vec<u8>) -> LabeledBatch {
        let schema = (0..columns.len()).map(|i| alloc::format!("c{i}")).collect();
        LabeledBatch::new(schema, columns, labels, 1).unwrap()
    }

    #[test]
    fn scan_counts_rows() {
        let b = batch(vec![vec![1, 1, 1, 2], vec![3, 3, 4, 3]], vec![1, 1, 0, 0]);
        let p = Pattern::from_items([(0, 1)]).unwrap();
        let q = Pattern::from_items([(0, 1), (1, 3)]).unwrap();
        let out = exact_scan(&b, [&p, &q]).unwrap();
        let s = out[&p];
        assert_eq!((s.support_pos, s.support_neg), (2, 1));
        assert_eq!((s.freq_pos, s.freq_neg), (1.0, 0.5));
        assert!((s.confidence.unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(out[&q].freq_pos, 1.0);
        assert_eq!(out[&q].freq_neg, 0.0);
    }

    #[test]
    fn scan_contained_in_three_of_four() {
        let b = batch(vec![vec![5, 5, 5, 6]], vec![1, 1, 1, 1]);
        let p = Pattern::from_items([(0, 5)]).unwrap();
        assert_eq!(exact_scan(&b, [&p]).unwrap()[&p].freq_pos, 0.75);
    }

    #[test]
    fn scan_absent_value() {
        let b = batch(vec![vec![1, 2]], vec![1, 0]);
        let p = Pattern::from_items([(0, 9)]).unwrap();
        let s = exact_scan(&b, [&p]).unwrap()[&p];
        assert_eq!((s.freq_pos, s.freq_neg, s.confidence), (0.0, 0.0, None));
        let bad = Pattern::from_items([(3, 1)]).unwrap();
        assert!(matches!(
            exact_scan(&b, [&bad]),
            Err(OricError::SchemaMismatch(_))
        ));
    }

    #[test]
    fn explicit_toy_chain() {
        let b = LabeledBatch::new(
            vec![String::from("A"), String::from("B"), String::from("C")],
            vec![vec![1, 1, 1], vec![1, 2, 1], vec![1, 1, 2]],
            vec![1, 1, 1],
            1,
        )
        .unwrap();
        let nodes = explicit_chain(&b, [0, 1, 2], 3, 1);
        assert_eq!(nodes.len(), 3);
        assert_eq!(nodes[2], [Item::new(0, 1)].into_iter().collect());
    }

    #[test]
    fn adjusted_frequency_examples() {
        for gamma in [0.0, 0.3, 1.0] {
            for l in [1, 4, 9] {
                let p = adjusted_frequency(&[0.4; 5], gamma, l).unwrap();
                assert!((p - 0.4).abs() < 1e-15);
            }
        }
        assert!((adjusted_frequency(&[0.2, 0.6], 1.0, 1).unwrap() - 0.4).abs() < 1e-15);

        // α₁ = (1 + .2 + .04)·0.5 = 0.62, α₂ = 1 + .6 + .36 = 1.96
        let want = (0.62 * 0.2 + 1.96 * 0.6) / (0.62 + 1.96);
        let got = adjusted_frequency(&[0.2, 0.6], 0.5, 3).unwrap();
        assert!((got - want).abs() < 1e-15);
        assert!(matches!(
            adjusted_frequency(&[], 0.5, 3),
            Err(OricError::EmptyHistory)
        ));
        // p = 1 uses the weight limit L.
        let got = adjusted_frequency(&[1.0, 0.0], 1.0, 3).unwrap();
        assert!((got - 0.75).abs() < 1e-15);
    }

    #[test]
    fn zero_gamma_ignores_prepended_history() {
        let a = adjusted_frequency(&[0.35], 0.0, 4).unwrap();
        let b = adjusted_frequency(&[0.0, 0.0, 0.35], 0.0, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn occurrence_distribution() {
        // Empirical P(k) against p^k(1-p), p^L.
        let (p, l, n) = (0.6, 4u32, 200_000);
        let mut rng = substream(3, 0);
        let mut hist = vec![0u32; l as usize + 1];
        for _ in 0..n {
            hist[sample_occurrences(p, l, &mut rng) as usize] += 1;
        }
        for (k, &c) in hist.iter().enumerate() {
            let want = if (k as u32) < l {
                p.powi(k as i32) * (1.0 - p)
            } else {
                p.powi(l as i32)
            };
            let got = c as f64 / n as f64;
            let se = (want * (1.0 - want) / n as f64).sqrt();
            assert!((got - want).abs() < 5.0 * se, "k={k} got={got} want={want}");
        }
    }

    #[test]
    fn simulated_estimator_zero_gamma_tracks_last_period() {
        let mut rng = substream(5, 0);
        let (mean, std) = simulate_estimator(&[0.1, 0.7, 0.3], 0.0, 5, 5000, 40, &mut rng).unwrap();
        assert!(
            (mean - 0.3).abs() < 3.0 * std / (40f64).sqrt() + 1e-3,
            "{mean} {std}"
        );
    }
}
