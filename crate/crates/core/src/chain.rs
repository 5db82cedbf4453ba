//! Random intersection chain generation and per-pattern chain statistics.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{OricError, Result};
use crate::pattern::{Chain, Item, LabeledBatch, Pattern};
use crate::rng::substream;

/// Chain-growth hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainConfig {
    /// Chains generated per class and update (`M`).
    pub num_chains: u32,
    /// Maximum number of intersected samples per chain (`L`).
    pub max_length: u32,
    /// A chain stops once its tail node has at most this many items.
    pub max_tail_size: u32,
    pub rng_seed: u64,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            num_chains: 10_000,
            max_length: 32,
            max_tail_size: 4,
            rng_seed: 0,
        }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_chains == 0 {
            return Err(OricError::InvalidConfig("num_chains must be at least 1"));
        }
        if self.max_length == 0 {
            return Err(OricError::InvalidConfig("max_length must be at least 1"));
        }
        if self.max_tail_size == 0 {
            return Err(OricError::InvalidConfig("max_tail_size must be at least 1"));
        }
        Ok(())
    }
}

/// The rows of one class (or any row subset) of a batch.
#[derive(Debug, Clone)]
pub struct ClassView<'a> {
    batch: &'a LabeledBatch,
    rows: Vec<u32>,
}

impl<'a> ClassView<'a> {
    pub fn new(batch: &'a LabeledBatch, label: u8) -> Self {
        ClassView {
            batch,
            rows: batch.class_rows(label),
        }
    }

    pub fn all(batch: &'a LabeledBatch) -> Self {
        ClassView {
            batch,
            rows: (0..batch.num_rows() as u32).collect(),
        }
    }

    pub fn from_rows(batch: &'a LabeledBatch, rows: Vec<u32>) -> Self {
        debug_assert!(rows.iter().all(|&r| (r as usize) < batch.num_rows()));
        ClassView { batch, rows }
    }

    pub fn batch(&self) -> &'a LabeledBatch {
        self.batch
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Batch row index of the `i`-th row in the view.
    #[inline]
    pub fn row(&self, i: u32) -> usize {
        self.rows[i as usize] as usize
    }
}

/// Grows one chain, asking `next_row` for view positions in `0..n`.
///
/// `generate_chain` feeds uniform draws; tests feed recorded sequences.
pub fn build_chain<F>(view: &ClassView<'_>, cfg: &ChainConfig, mut next_row: F) -> Result<Chain>
where
    F: FnMut(u32) -> u32,
{
    if view.is_empty() {
        return Err(OricError::EmptyClass);
    }
    let n = view.len() as u32;
    let batch = view.batch();
    let width = batch.num_features();

    let head = view.row(next_row(n));
    let items: Vec<Item> = (0..width)
        .map(|f| Item::new(f as u32, batch.value(f, head)))
        .collect();
    let mut counts = vec![1u32; width];
    let mut length = 1u32;
    // Positions whose count equals `length`, i.e. the current tail node.
    let mut tail: Vec<usize> = (0..width).collect();

    while tail.len() > cfg.max_tail_size as usize && length < cfg.max_length {
        let row = view.row(next_row(n));
        length += 1;
        tail.retain(|&j| {
            if batch.value(j, row) == items[j].category {
                counts[j] = length;
                true
            } else {
                false
            }
        });
    }
    Ok(Chain::from_parts_unchecked(items, counts, length))
}

/// Grows one chain from rows drawn uniformly with replacement.
pub fn generate_chain<R: Rng + ?Sized>(
    view: &ClassView<'_>,
    cfg: &ChainConfig,
    rng: &mut R,
) -> Result<Chain> {
    build_chain(view, cfg, |n| rng.gen_range(0..n))
}

/// Occurrence totals of one pattern over a set of chains.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ChainCounts {
    /// Total number of nodes containing the pattern, summed over chains.
    pub k: u64,
    /// Number of chains whose tail node lacks the pattern.
    pub i: u64,
}

impl ChainCounts {
    pub fn merge(self, other: ChainCounts) -> ChainCounts {
        ChainCounts {
            k: self.k + other.k,
            i: self.i + other.i,
        }
    }
}

/// The chains of one class and update, with an inverted index from item to
/// `(chain, survival count)` postings.
#[derive(Debug, Clone, Default)]
pub struct ChainSet {
    chains: Vec<Chain>,
    postings: BTreeMap<Item, Vec<(u32, u32)>>,
}

impl ChainSet {
    pub fn from_chains(chains: Vec<Chain>) -> Self {
        let mut postings: BTreeMap<Item, Vec<(u32, u32)>> = BTreeMap::new();
        for (m, chain) in chains.iter().enumerate() {
            for (&item, &c) in chain.items().iter().zip(chain.counts()) {
                postings.entry(item).or_default().push((m as u32, c));
            }
        }
        ChainSet { chains, postings }
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// Distinct nonempty tail itemsets.
    pub fn tail_patterns(&self) -> BTreeSet<Pattern> {
        self.chains.iter().filter_map(Chain::tail_pattern).collect()
    }

    pub fn effective_lengths(&self) -> Vec<u32> {
        self.chains.iter().map(Chain::length).collect()
    }

    /// `(K, I)` of `pattern` over every chain in the set.
    pub fn count(&self, pattern: &Pattern) -> ChainCounts {
        let total = self.chains.len() as u64;
        let items = pattern.items();
        let Some((pivot, list)) = items
            .iter()
            .map(|it| (it, self.postings.get(it)))
            .min_by_key(|(_, l)| l.map_or(0, |l| l.len()))
        else {
            return ChainCounts { k: 0, i: total };
        };
        let Some(list) = list else {
            return ChainCounts { k: 0, i: total };
        };

        let mut k = 0u64;
        let mut in_tail = 0u64;
        for &(m, c) in list {
            let chain = &self.chains[m as usize];
            let mut occ = c;
            for it in items.iter().filter(|it| *it != pivot) {
                let j = it.feature as usize;
                // Heads span every feature in order, so position == feature.
                let found = match chain.items().get(j) {
                    Some(x) if x.feature == it.feature => Some(j),
                    _ => chain
                        .items()
                        .binary_search_by_key(&it.feature, |x| x.feature)
                        .ok(),
                };
                occ = match found {
                    Some(j) if chain.items()[j].category == it.category => {
                        occ.min(chain.counts()[j])
                    }
                    _ => 0,
                };
                if occ == 0 {
                    break;
                }
            }
            k += occ as u64;
            if occ == chain.length() {
                in_tail += 1;
            }
        }
        ChainCounts {
            k,
            i: total - in_tail,
        }
    }
}

/// How chains are generated and counted. The sequential engine here is the
/// reference; other engines must produce identical results.
pub trait ChainEngine {
    fn generate(&self, view: &ClassView<'_>, cfg: &ChainConfig, seed: u64) -> Result<ChainSet>;

    fn count(&self, chains: &ChainSet, patterns: &[Pattern]) -> Vec<ChainCounts>;
}

/// Single-threaded engine. Chain `m` draws from substream `m` of `seed`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SequentialEngine;

impl ChainEngine for SequentialEngine {
    fn generate(&self, view: &ClassView<'_>, cfg: &ChainConfig, seed: u64) -> Result<ChainSet> {
        cfg.validate()?;
        let chains = (0..cfg.num_chains)
            .map(|m| generate_chain(view, cfg, &mut substream(seed, m as u64)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainSet::from_chains(chains))
    }

    fn count(&self, chains: &ChainSet, patterns: &[Pattern]) -> Vec<ChainCounts> {
        patterns.iter().map(|p| chains.count(p)).collect()
    }
}

/// Chain statistics of one class for one update.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainBatchResult {
    pub tail_patterns: BTreeSet<Pattern>,
    pub per_pattern_counts: BTreeMap<Pattern, ChainCounts>,
    pub chains_generated: u64,
    pub effective_lengths: Vec<u32>,
}

impl ChainBatchResult {
    /// Counts every tail pattern, each of their single items, and `tracked`.
    pub fn from_chain_set<E: ChainEngine + ?Sized>(
        engine: &E,
        chains: &ChainSet,
        tracked: &BTreeSet<Pattern>,
    ) -> Self {
        let tail_patterns = chains.tail_patterns();
        let mut wanted: BTreeSet<Pattern> = tracked.clone();
        for p in &tail_patterns {
            wanted.extend(p.singles());
            wanted.insert(p.clone());
        }
        let wanted: Vec<Pattern> = wanted.into_iter().collect();
        let counts = engine.count(chains, &wanted);
        ChainBatchResult {
            tail_patterns,
            per_pattern_counts: wanted.into_iter().zip(counts).collect(),
            chains_generated: chains.len() as u64,
            effective_lengths: chains.effective_lengths(),
        }
    }
}

/// Generates `cfg.num_chains` chains over `view` and collects `(K, I)` for
/// tail patterns, their single items and `tracked`.
pub fn run_chains(
    view: &ClassView<'_>,
    cfg: &ChainConfig,
    tracked: &BTreeSet<Pattern>,
) -> Result<ChainBatchResult> {
    run_chains_with(&SequentialEngine, view, cfg, cfg.rng_seed, tracked)
}

pub fn run_chains_with<E: ChainEngine + ?Sized>(
    engine: &E,
    view: &ClassView<'_>,
    cfg: &ChainConfig,
    seed: u64,
    tracked: &BTreeSet<Pattern>,
) -> Result<ChainBatchResult> {
    let chains = engine.generate(view, cfg, seed)?;
    Ok(ChainBatchResult::from_chain_set(engine, &chains, tracked))
}
