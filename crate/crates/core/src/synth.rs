//! Reproducible synthetic labeled streams with planted interactions.
//!
//! Background cells are uniform over `1..=categories_per_feature`. Each
//! planted pattern is forced into a row of class `c` with its scheduled
//! frequency; rows that are not forced are redrawn on the pattern's features
//! until they do not contain it, so the planted frequency is exact in
//! expectation.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{OricError, Result};
use crate::pattern::{LabeledBatch, Pattern};
use crate::rng::{derive_seed, substream};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlantedPattern {
    pub pattern: Pattern,
    /// Target frequency among positive rows, one entry per period.
    pub freq_schedule_pos: Vec<f64>,
    /// Target frequency among negative rows, one entry per period.
    pub freq_schedule_neg: Vec<f64>,
}

impl PlantedPattern {
    pub fn constant(pattern: Pattern, freq_pos: f64, freq_neg: f64, horizon: usize) -> Self {
        PlantedPattern {
            pattern,
            freq_schedule_pos: vec![freq_pos; horizon],
            freq_schedule_neg: vec![freq_neg; horizon],
        }
    }

    /// Scheduled frequency in period `t` (1-based) for class `label`.
    pub fn frequency(&self, label: u8, t: usize) -> f64 {
        let schedule = if label == 1 {
            &self.freq_schedule_pos
        } else {
            &self.freq_schedule_neg
        };
        schedule[t - 1]
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StreamSpec {
    pub num_features: u32,
    pub categories_per_feature: u32,
    pub rows_per_period: usize,
    pub horizon: usize,
    pub positive_rate: f64,
    pub planted: Vec<PlantedPattern>,
    pub rng_seed: u64,
}

impl StreamSpec {
    pub fn validate(&self) -> Result<()> {
        if self.num_features == 0 {
            return Err(OricError::InvalidConfig("need at least one feature"));
        }
        if self.categories_per_feature < 2 {
            return Err(OricError::InvalidConfig(
                "need at least two categories per feature",
            ));
        }
        if !(0.0..=1.0).contains(&self.positive_rate) {
            return Err(OricError::InvalidConfig("positive_rate must lie in [0, 1]"));
        }
        let mut used = BTreeSet::new();
        for planted in &self.planted {
            for it in planted.pattern.items() {
                if it.feature >= self.num_features {
                    return Err(OricError::InvalidConfig("planted feature out of range"));
                }
                if it.category == 0 || it.category > self.categories_per_feature {
                    return Err(OricError::InvalidConfig("planted category out of range"));
                }
                if !used.insert(it.feature) {
                    return Err(OricError::InvalidConfig(
                        "planted patterns must use disjoint features",
                    ));
                }
            }
            for schedule in [&planted.freq_schedule_pos, &planted.freq_schedule_neg] {
                if schedule.len() < self.horizon {
                    return Err(OricError::ScheduleTooShort {
                        needed: self.horizon,
                        found: schedule.len(),
                    });
                }
                if schedule.iter().any(|f| !(0.0..=1.0).contains(f)) {
                    return Err(OricError::InvalidConfig(
                        "scheduled frequency outside [0, 1]",
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn schema(&self) -> Vec<String> {
        (0..self.num_features)
            .map(|f| alloc::format!("c{f}"))
            .collect()
    }

    /// Draws `planted_count` feature-disjoint patterns of `order` items on
    /// the leading features, with constant schedules drawn from the given
    /// frequency ranges.
    pub fn plant_random<R: Rng + ?Sized>(
        &mut self,
        planted_count: usize,
        order: u32,
        freq_pos: (f64, f64),
        freq_neg: (f64, f64),
        rng: &mut R,
    ) -> Result<()> {
        if order == 0 || planted_count as u64 * order as u64 > self.num_features as u64 {
            return Err(OricError::InvalidConfig(
                "not enough features for disjoint planted patterns",
            ));
        }
        let c = self.categories_per_feature;
        for n in 0..planted_count as u32 {
            let pattern =
                Pattern::from_items((0..order).map(|j| (n * order + j, rng.gen_range(1..=c))))?;
            let fp = rng.gen_range(freq_pos.0..=freq_pos.1);
            let fn_ = rng.gen_range(freq_neg.0..=freq_neg.1);
            self.planted
                .push(PlantedPattern::constant(pattern, fp, fn_, self.horizon));
        }
        self.validate()
    }
}

/// Generates period `t` (1-based) of the stream.
pub fn generate_period(spec: &StreamSpec, t: usize) -> Result<LabeledBatch> {
    spec.validate()?;
    if t == 0 || t > spec.horizon {
        return Err(OricError::PeriodOutOfRange {
            period: t,
            horizon: spec.horizon,
        });
    }
    let width = spec.num_features as usize;
    let c = spec.categories_per_feature;
    let rows = spec.rows_per_period;
    let mut rng = substream(derive_seed(spec.rng_seed, &[t as u64]), 0);

    let mut columns = vec![Vec::with_capacity(rows); width];
    let mut labels = Vec::with_capacity(rows);
    let mut row = vec![0u32; width];
    for _ in 0..rows {
        let label = u8::from(rng.gen_bool(spec.positive_rate));
        for cell in row.iter_mut() {
            *cell = rng.gen_range(1..=c);
        }
        for planted in &spec.planted {
            let items = planted.pattern.items();
            if rng.gen_bool(planted.frequency(label, t)) {
                for it in items {
                    row[it.feature as usize] = it.category;
                }
            } else {
                while items
                    .iter()
                    .all(|it| row[it.feature as usize] == it.category)
                {
                    for it in items {
                        row[it.feature as usize] = rng.gen_range(1..=c);
                    }
                }
            }
        }
        for (col, &v) in columns.iter_mut().zip(&row) {
            col.push(v);
        }
        labels.push(label);
    }
    LabeledBatch::new(spec.schema(), columns, labels, t as u64)
}
