//! Decayed per-class pattern statistics, frequency and confidence estimates,
//! the online update and interaction selection.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::chain::{ChainBatchResult, ChainConfig, ChainEngine, ClassView, SequentialEngine};
use crate::error::{OricError, Result};
use crate::pattern::{LabeledBatch, Pattern};
use crate::rng::derive_seed;

/// Patterns whose total decayed evidence drops below this are evicted.
pub const EVICTION_THRESHOLD: f64 = 1e-6;

/// Patterns up to this order look up sub-patterns by enumeration; longer
/// ones scan the registry.
const SUBSET_ENUMERATION_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Label {
    Negative = 0,
    Positive = 1,
}

impl Label {
    pub const BOTH: [Label; 2] = [Label::Negative, Label::Positive];

    pub fn code(self) -> u8 {
        self as u8
    }
}

/// MAP frequency under a `Beta(a, b)` prior: `(K+a-1) / (K+a+I+b-2)`.
///
/// With `a = b = 1` this is the likelihood estimate `K / (K+I)`.
pub fn map_frequency(k: f64, i: f64, a: f64, b: f64) -> Result<f64> {
    if !(k >= 0.0 && i >= 0.0) {
        return Err(OricError::InvalidConfig("K and I must be non-negative"));
    }
    if !(a >= 1.0 && b >= 1.0) {
        return Err(OricError::InvalidConfig("prior shapes must be at least 1"));
    }
    let denom = k + a + i + b - 2.0;
    if denom <= 0.0 {
        return Err(OricError::Indeterminate);
    }
    Ok((k + a - 1.0) / denom)
}

/// Decayed class sizes.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassPriors {
    pub n_pos: f64,
    pub n_neg: f64,
}

impl ClassPriors {
    pub fn new(n_pos: f64, n_neg: f64) -> Self {
        ClassPriors { n_pos, n_neg }
    }

    /// Proportion of positive rows, `p^(1)`.
    pub fn positive_rate(&self) -> Result<f64> {
        let total = self.n_pos + self.n_neg;
        if total > 0.0 {
            Ok(self.n_pos / total)
        } else {
            Err(OricError::Indeterminate)
        }
    }

    fn decay(&mut self, gamma: f64) {
        self.n_pos *= gamma;
        self.n_neg *= gamma;
    }
}

/// Posterior probability of the positive class given the pattern.
pub fn confidence(freq_pos: f64, freq_neg: f64, priors: &ClassPriors) -> Result<f64> {
    let p1 = priors.positive_rate()?;
    let pos = freq_pos * p1;
    let denom = freq_neg * (1.0 - p1) + pos;
    if denom <= 0.0 {
        return Err(OricError::Indeterminate);
    }
    Ok((pos / denom).clamp(0.0, 1.0))
}

/// Decayed chain statistics of one pattern in both classes.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PatternStats {
    pub k_hat_pos: f64,
    pub i_hat_pos: f64,
    pub k_hat_neg: f64,
    pub i_hat_neg: f64,
    pub first_seen: u64,
    pub last_updated: u64,
}

impl PatternStats {
    pub fn new(period: u64) -> Self {
        PatternStats {
            first_seen: period,
            last_updated: period,
            ..PatternStats::default()
        }
    }

    pub fn k_hat(&self, label: Label) -> f64 {
        match label {
            Label::Positive => self.k_hat_pos,
            Label::Negative => self.k_hat_neg,
        }
    }

    pub fn i_hat(&self, label: Label) -> f64 {
        match label {
            Label::Positive => self.i_hat_pos,
            Label::Negative => self.i_hat_neg,
        }
    }

    /// Frequency estimate `K̂ / (K̂ + Î)` in one class.
    pub fn frequency(&self, label: Label) -> Result<f64> {
        map_frequency(self.k_hat(label), self.i_hat(label), 1.0, 1.0)
    }

    /// Like [`frequency`](Self::frequency), but no evidence reads as 0.
    pub fn frequency_or_zero(&self, label: Label) -> f64 {
        self.frequency(label).unwrap_or(0.0)
    }

    pub fn total_evidence(&self) -> f64 {
        self.k_hat_pos + self.i_hat_pos + self.k_hat_neg + self.i_hat_neg
    }

    fn decay(&mut self, gamma: f64) {
        self.k_hat_pos *= gamma;
        self.i_hat_pos *= gamma;
        self.k_hat_neg *= gamma;
        self.i_hat_neg *= gamma;
    }

    fn add(&mut self, label: Label, k: u64, i: u64) {
        let (kh, ih) = match label {
            Label::Positive => (&mut self.k_hat_pos, &mut self.i_hat_pos),
            Label::Negative => (&mut self.k_hat_neg, &mut self.i_hat_neg),
        };
        *kh += k as f64;
        *ih += i as f64;
    }
}

/// Hyperparameters of the learner.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelConfig {
    pub chain: ChainConfig,
    /// Number of frequent candidates kept by positive-class frequency.
    pub d_freq: u32,
    /// Number of confident interactions selected among the candidates.
    pub d_conf: u32,
    /// Per-update decay of all statistics, in `[0, 1]`.
    pub gamma: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            chain: ChainConfig::default(),
            d_freq: 100,
            d_conf: 50,
            gamma: 1.0,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        self.chain.validate()?;
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(OricError::InvalidConfig("gamma must lie in [0, 1]"));
        }
        if self.d_freq == 0 || self.d_conf == 0 {
            return Err(OricError::InvalidConfig(
                "d_freq and d_conf must be positive",
            ));
        }
        Ok(())
    }

    /// Non-fatal configuration smells.
    pub fn warnings(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.d_conf > self.d_freq {
            out.push("d_conf exceeds d_freq; at most d_freq interactions can be selected");
        }
        out
    }
}

/// Outcome of one [`OricModel::update`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateReport {
    pub period: u64,
    pub rows_pos: u64,
    pub rows_neg: u64,
    /// Set when the batch had no rows of this class; its statistics were
    /// decayed but not incremented.
    pub missing_class: Option<Label>,
    pub chains_per_class: u64,
    pub tail_patterns: usize,
    pub new_patterns: usize,
    pub evicted: usize,
    pub registry_size: usize,
}

/// Chain results of one update, one optional entry per class.
#[derive(Debug, Clone, Default)]
pub struct ClassResults {
    pub positive: Option<ChainBatchResult>,
    pub negative: Option<ChainBatchResult>,
    pub rows_pos: u64,
    pub rows_neg: u64,
}

/// One scored interaction.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedInteraction {
    pub pattern: Pattern,
    pub freq_pos: f64,
    pub freq_neg: f64,
    pub confidence: f64,
    /// The sub-pattern that made reluctant pruning drop this interaction.
    pub pruned_by: Option<Pattern>,
}

/// The `d_conf` most confident candidates, best first, before and after
/// reluctant pruning.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Selection {
    pub ranked: Vec<RankedInteraction>,
}

impl Selection {
    /// Interactions that survived pruning, best first.
    pub fn selected(&self) -> impl Iterator<Item = &RankedInteraction> {
        self.ranked.iter().filter(|r| r.pruned_by.is_none())
    }

    pub fn pruned(&self) -> impl Iterator<Item = &RankedInteraction> {
        self.ranked.iter().filter(|r| r.pruned_by.is_some())
    }

    pub fn selected_patterns(&self) -> Vec<Pattern> {
        self.selected().map(|r| r.pattern.clone()).collect()
    }
}

fn by_frequency(a: &(f64, &Pattern), b: &(f64, &Pattern)) -> Ordering {
    b.0.total_cmp(&a.0)
        .then_with(|| a.1.order().cmp(&b.1.order()))
        .then_with(|| a.1.cmp(b.1))
}

fn by_confidence(a: &RankedInteraction, b: &RankedInteraction) -> Ordering {
    b.confidence
        .total_cmp(&a.confidence)
        .then_with(|| b.freq_pos.total_cmp(&a.freq_pos))
        .then_with(|| a.pattern.order().cmp(&b.pattern.order()))
        .then_with(|| a.pattern.cmp(&b.pattern))
}

/// The persisted learner: hyperparameters, the registry of ever-detected
/// patterns with their decayed statistics, and decayed class sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct OricModel {
    config: ModelConfig,
    schema: Vec<String>,
    registry: BTreeMap<Pattern, PatternStats>,
    priors: ClassPriors,
    period: u64,
}

impl OricModel {
    pub fn new(config: ModelConfig, schema: Vec<String>) -> Result<Self> {
        config.validate()?;
        Ok(OricModel {
            config,
            schema,
            registry: BTreeMap::new(),
            priors: ClassPriors::default(),
            period: 0,
        })
    }

    /// Reassembles a model from persisted parts.
    pub fn from_parts(
        config: ModelConfig,
        schema: Vec<String>,
        registry: BTreeMap<Pattern, PatternStats>,
        priors: ClassPriors,
        period: u64,
    ) -> Result<Self> {
        config.validate()?;
        if let Some(p) = registry
            .keys()
            .find(|p| p.max_feature() as usize >= schema.len())
        {
            return Err(OricError::SchemaMismatch(alloc::format!(
                "registry pattern {p} exceeds the {}-feature schema",
                schema.len()
            )));
        }
        Ok(OricModel {
            config,
            schema,
            registry,
            priors,
            period,
        })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn config_mut(&mut self) -> &mut ModelConfig {
        &mut self.config
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn registry(&self) -> &BTreeMap<Pattern, PatternStats> {
        &self.registry
    }

    pub fn priors(&self) -> &ClassPriors {
        &self.priors
    }

    /// Index of the last applied update; 0 for a fresh model.
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn stats(&self, pattern: &Pattern) -> Option<&PatternStats> {
        self.registry.get(pattern)
    }

    /// Seed used for class `label` chains at update `period`.
    pub fn chain_seed(&self, period: u64, label: Label) -> u64 {
        derive_seed(self.config.chain.rng_seed, &[period, label.code() as u64])
    }

    pub fn update(&mut self, batch: &LabeledBatch) -> Result<UpdateReport> {
        self.update_with(batch, &SequentialEngine)
    }

    /// Folds one batch into the model with the given chain engine.
    pub fn update_with<E: ChainEngine + ?Sized>(
        &mut self,
        batch: &LabeledBatch,
        engine: &E,
    ) -> Result<UpdateReport> {
        if batch.schema() != self.schema.as_slice() {
            return Err(OricError::SchemaMismatch(alloc::format!(
                "batch has features {:?}, model expects {:?}",
                batch.schema(),
                self.schema
            )));
        }
        if batch.num_rows() == 0 {
            return Err(OricError::EmptyBatch);
        }
        let period = self.period + 1;
        let cfg = self.config.chain;

        let mut chain_sets = Vec::with_capacity(2);
        for label in Label::BOTH {
            let view = ClassView::new(batch, label.code());
            if view.is_empty() {
                continue;
            }
            let chains = engine.generate(&view, &cfg, self.chain_seed(period, label))?;
            chain_sets.push((label, chains));
        }

        // Count registry patterns and every fresh tail pattern in both
        // classes, so newly detected patterns get statistics on each side.
        let mut tracked: BTreeSet<Pattern> = self.registry.keys().cloned().collect();
        for (_, chains) in &chain_sets {
            for p in chains.tail_patterns() {
                tracked.extend(p.singles());
                tracked.insert(p);
            }
        }

        let mut results = ClassResults {
            rows_pos: batch.class_count(1) as u64,
            rows_neg: batch.class_count(0) as u64,
            ..ClassResults::default()
        };
        for (label, chains) in chain_sets {
            let res = ChainBatchResult::from_chain_set(engine, &chains, &tracked);
            match label {
                Label::Positive => results.positive = Some(res),
                Label::Negative => results.negative = Some(res),
            }
        }
        self.apply(results)
    }

    /// Decays the state by `gamma`, then adds one period of chain results.
    pub fn apply(&mut self, results: ClassResults) -> Result<UpdateReport> {
        let gamma = self.config.gamma;
        let period = self.period + 1;

        for stats in self.registry.values_mut() {
            stats.decay(gamma);
        }
        self.priors.decay(gamma);

        let mut tails: BTreeSet<&Pattern> = BTreeSet::new();
        let mut new_patterns = 0;
        let mut chains_per_class = 0;
        for (label, res) in [
            (Label::Positive, &results.positive),
            (Label::Negative, &results.negative),
        ] {
            let Some(res) = res else { continue };
            chains_per_class = chains_per_class.max(res.chains_generated);
            tails.extend(res.tail_patterns.iter());
            for (pattern, counts) in &res.per_pattern_counts {
                let stats = self.registry.entry(pattern.clone()).or_insert_with(|| {
                    new_patterns += 1;
                    PatternStats::new(period)
                });
                stats.add(label, counts.k, counts.i);
                stats.last_updated = period;
            }
        }
        self.priors.n_pos += results.rows_pos as f64;
        self.priors.n_neg += results.rows_neg as f64;

        let before = self.registry.len();
        self.registry
            .retain(|_, s| s.total_evidence() >= EVICTION_THRESHOLD);
        let evicted = before - self.registry.len();

        self.period = period;
        let missing_class = match (results.rows_pos, results.rows_neg) {
            (0, _) => Some(Label::Positive),
            (_, 0) => Some(Label::Negative),
            _ => None,
        };
        Ok(UpdateReport {
            period,
            rows_pos: results.rows_pos,
            rows_neg: results.rows_neg,
            missing_class,
            chains_per_class,
            tail_patterns: tails.len(),
            new_patterns,
            evicted,
            registry_size: self.registry.len(),
        })
    }

    /// Frequency and confidence estimates for one registered pattern.
    pub fn estimate(&self, pattern: &Pattern) -> Option<RankedInteraction> {
        let stats = self.registry.get(pattern)?;
        let freq_pos = stats.frequency_or_zero(Label::Positive);
        let freq_neg = stats.frequency_or_zero(Label::Negative);
        let confidence = confidence(freq_pos, freq_neg, &self.priors).ok()?;
        Some(RankedInteraction {
            pattern: pattern.clone(),
            freq_pos,
            freq_neg,
            confidence,
            pruned_by: None,
        })
    }

    pub fn select(&self) -> Result<Selection> {
        self.select_top(self.config.d_freq, self.config.d_conf)
    }

    /// Keeps the `d_freq` most frequent positive-class patterns, takes the
    /// `d_conf` most confident of those, and marks the ones that are no more
    /// confident than some tracked proper sub-pattern.
    pub fn select_top(&self, d_freq: u32, d_conf: u32) -> Result<Selection> {
        if self.period == 0 || self.registry.is_empty() {
            return Err(OricError::EmptyModel);
        }
        self.priors.positive_rate()?;

        let mut by_freq: Vec<(f64, &Pattern)> = self
            .registry
            .iter()
            .map(|(p, s)| (s.frequency_or_zero(Label::Positive), p))
            .collect();
        by_freq.sort_by(by_frequency);
        by_freq.truncate(d_freq as usize);

        let mut ranked: Vec<RankedInteraction> = by_freq
            .into_iter()
            .filter_map(|(_, p)| self.estimate(p))
            .collect();
        ranked.sort_by(by_confidence);
        ranked.truncate(d_conf as usize);

        for r in &mut ranked {
            r.pruned_by = self.pruning_witness(r);
        }
        Ok(Selection { ranked })
    }

    /// The most confident tracked proper sub-pattern at least as confident
    /// as `r`, if any.
    fn pruning_witness(&self, r: &RankedInteraction) -> Option<Pattern> {
        let subs: Vec<RankedInteraction> = if r.pattern.order() <= SUBSET_ENUMERATION_LIMIT {
            r.pattern
                .proper_subpatterns()
                .iter()
                .filter_map(|s| self.estimate(s))
                .collect()
        } else {
            self.registry
                .keys()
                .filter(|s| s.is_proper_subset_of(&r.pattern))
                .filter_map(|s| self.estimate(s))
                .collect()
        };
        subs.into_iter()
            .filter(|s| s.confidence >= r.confidence)
            .min_by(by_confidence)
            .map(|s| s.pattern)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainCounts;
    use alloc::vec;

    fn p(items: &[(u32, u32)]) -> Pattern {
        Pattern::from_items(items.iter().copied()).unwrap()
    }

    fn stats(k_pos: f64, i_pos: f64, k_neg: f64, i_neg: f64) -> PatternStats {
        PatternStats {
            k_hat_pos: k_pos,
            i_hat_pos: i_pos,
            k_hat_neg: k_neg,
            i_hat_neg: i_neg,
            first_seen: 1,
            last_updated: 1,
        }
    }

    fn schema(n: usize) -> Vec<String> {
        (0..n).map(|i| alloc::format!("c{i}")).collect()
    }

    fn model_with(registry: Vec<(Pattern, PatternStats)>, priors: ClassPriors) -> OricModel {
        let cfg = ModelConfig {
            d_freq: 10,
            d_conf: 10,
            ..ModelConfig::default()
        };
        OricModel::from_parts(cfg, schema(4), registry.into_iter().collect(), priors, 1).unwrap()
    }

    #[test]
    fn map_frequency_examples() {
        assert_eq!(map_frequency(15.0, 5.0, 1.0, 1.0), Ok(0.75));
        assert_eq!(map_frequency(0.0, 0.0, 2.0, 2.0), Ok(0.5));
        assert_eq!(
            map_frequency(0.0, 0.0, 1.0, 1.0),
            Err(OricError::Indeterminate)
        );
        assert!(map_frequency(-1.0, 0.0, 1.0, 1.0).is_err());
        assert!(map_frequency(1.0, 0.0, 0.5, 1.0).is_err());
    }

    #[test]
    fn confidence_examples() {
        let priors = ClassPriors::new(17.0, 83.0);
        let c = confidence(0.4, 0.4, &priors).unwrap();
        assert!((c - 0.17).abs() < 1e-12);
        assert_eq!(confidence(0.3, 0.0, &priors), Ok(1.0));
        assert_eq!(confidence(0.0, 0.0, &priors), Err(OricError::Indeterminate));
        assert_eq!(
            confidence(0.5, 0.5, &ClassPriors::default()),
            Err(OricError::Indeterminate)
        );
    }

    #[test]
    fn confidence_round_trips_avazu_row() {
        // Solve q = a·π / (b·(1-π) + a·π) for π given the first detected
        // interaction's exact frequencies and confidence, then recompute q.
        let (freq_neg, freq_pos, q) = (0.5949, 0.7126, 0.2014);
        let pi = q * freq_neg / (freq_pos * (1.0 - q) + q * freq_neg);
        let priors = ClassPriors::new(pi, 1.0 - pi);
        let back = confidence(freq_pos, freq_neg, &priors).unwrap();
        assert!((back - q).abs() < 1e-12, "{back}");
        assert!(pi > 0.17 && pi < 0.18, "{pi}");
    }

    #[test]
    fn decay_arithmetic() {
        let cfg = ModelConfig {
            gamma: 0.5,
            ..ModelConfig::default()
        };
        let mut model = OricModel::new(cfg, schema(1)).unwrap();
        let a = p(&[(0, 1)]);
        let step = |k: u64| ClassResults {
            positive: Some(ChainBatchResult {
                per_pattern_counts: [(a.clone(), ChainCounts { k, i: 0 })].into_iter().collect(),
                chains_generated: 1,
                ..ChainBatchResult::default()
            }),
            negative: None,
            rows_pos: 1,
            rows_neg: 0,
        };
        model.apply(step(10)).unwrap();
        let report = model.apply(step(4)).unwrap();
        assert_eq!(model.stats(&a).unwrap().k_hat_pos, 9.0);
        assert_eq!(report.missing_class, Some(Label::Negative));
        assert_eq!(model.period(), 2);
        assert_eq!(model.stats(&a).unwrap().first_seen, 1);
        assert_eq!(model.stats(&a).unwrap().last_updated, 2);
    }

    #[test]
    fn empty_results_only_decay() {
        let a = p(&[(0, 1)]);
        let mut model = model_with(
            vec![(a.clone(), stats(8.0, 2.0, 4.0, 6.0))],
            ClassPriors::new(10.0, 30.0),
        );
        model.config_mut().gamma = 0.25;
        model.apply(ClassResults::default()).unwrap();
        assert_eq!(*model.stats(&a).unwrap(), {
            let mut s = stats(2.0, 0.5, 1.0, 1.5);
            s.first_seen = 1;
            s
        });
        assert_eq!(*model.priors(), ClassPriors::new(2.5, 7.5));
    }

    #[test]
    fn eviction_after_decay() {
        let a = p(&[(0, 1)]);
        let mut model = model_with(
            vec![(a, stats(1.0, 1.0, 0.0, 0.0))],
            ClassPriors::new(1.0, 1.0),
        );
        model.config_mut().gamma = 0.0;
        let report = model.apply(ClassResults::default()).unwrap();
        assert_eq!(report.evicted, 1);
        assert!(model.registry().is_empty());
    }

    #[test]
    fn reluctant_pruning_example() {
        // {A=a1}: conf 0.30; {A=a1,B=b1}: conf 0.25 at priors 1:1.
        let a = p(&[(0, 1)]);
        let ab = p(&[(0, 1), (1, 1)]);
        let b = p(&[(1, 1)]);
        let model = model_with(
            vec![
                (a.clone(), stats(3.0, 7.0, 7.0, 3.0)),
                (ab.clone(), stats(1.0, 9.0, 3.0, 7.0)),
                (b, stats(1.0, 99.0, 50.0, 50.0)),
            ],
            ClassPriors::new(1.0, 1.0),
        );
        let sel = model.select().unwrap();
        let ra = sel.ranked.iter().find(|r| r.pattern == a).unwrap();
        let rab = sel.ranked.iter().find(|r| r.pattern == ab).unwrap();
        assert!((ra.confidence - 0.30).abs() < 1e-12);
        assert!((rab.confidence - 0.25).abs() < 1e-12);
        assert_eq!(rab.pruned_by, Some(a.clone()));
        assert!(ra.pruned_by.is_none());
        assert!(sel.selected().all(|r| r.pattern != ab));
    }

    #[test]
    fn single_pattern_selection() {
        let a = p(&[(2, 5)]);
        let model = model_with(
            vec![(a.clone(), stats(15.0, 5.0, 1.0, 3.0))],
            ClassPriors::new(1.0, 3.0),
        );
        let sel = model.select().unwrap();
        assert_eq!(sel.ranked.len(), 1);
        let r = &sel.ranked[0];
        assert_eq!(r.freq_pos, 0.75);
        assert_eq!(r.freq_neg, 0.25);
        assert!((r.confidence - 0.5).abs() < 1e-12);
    }

    #[test]
    fn select_on_fresh_model_fails() {
        let model = OricModel::new(ModelConfig::default(), schema(2)).unwrap();
        assert_eq!(model.select(), Err(OricError::EmptyModel));
    }

    #[test]
    fn frequency_filter_runs_before_confidence() {
        // The most confident pattern is too rare in positives to be a candidate.
        let rare = p(&[(0, 1)]);
        let common = p(&[(1, 1)]);
        let model = model_with(
            vec![
                (rare.clone(), stats(1.0, 99.0, 0.0, 100.0)),
                (common.clone(), stats(50.0, 50.0, 40.0, 60.0)),
            ],
            ClassPriors::new(1.0, 1.0),
        );
        let sel = model.select_top(1, 1).unwrap();
        assert_eq!(sel.selected_patterns(), vec![common]);
        let sel = model.select_top(2, 1).unwrap();
        assert_eq!(sel.selected_patterns(), vec![rare]);
    }

    #[test]
    fn schema_mismatch_rejected() {
        let mut model = OricModel::new(ModelConfig::default(), schema(2)).unwrap();
        let batch = LabeledBatch::new(schema(1), vec![vec![1]], vec![1], 1).unwrap();
        assert!(matches!(
            model.update(&batch),
            Err(OricError::SchemaMismatch(_))
        ));
    }

    #[test]
    fn config_checks() {
        let mut cfg = ModelConfig {
            gamma: 1.5,
            ..ModelConfig::default()
        };
        assert!(cfg.validate().is_err());
        cfg.gamma = 0.5;
        cfg.d_conf = 200;
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.warnings().len(), 1);
    }
}
